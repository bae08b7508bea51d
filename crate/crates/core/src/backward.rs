//! Structured backward errors: inverse invariant pairs, backward errors of
//! approximate invariant pairs and eigenpairs, and of approximate invariant
//! subspaces.

use serde::Serialize;

use crate::linalg::{self, c, eye, serialize_cmat, Star, I_UNIT};
use crate::mapping::{self, ExistenceReport, MappingProblem, OptimalSolution};
use crate::structure::{Form, PrototypeClass, StructureSpec, ToleranceProfile};
use crate::kernels::SvdResult;
use crate::{CMat, Error, Result, C64};

/// Optimal structured perturbations for both norms.
#[derive(Debug, Clone, Serialize)]
pub struct BackwardErrorReport {
    pub value_spectral: f64,
    pub value_frobenius: f64,
    #[serde(serialize_with = "serialize_cmat")]
    pub perturbation_spectral: CMat,
    #[serde(serialize_with = "serialize_cmat")]
    pub perturbation_frobenius: CMat,
    pub solvable: bool,
    pub existence: ExistenceReport,
}

/// Result of the invariant-subspace backward error.
#[derive(Debug, Clone, Serialize)]
pub struct SubspaceReport {
    #[serde(flatten)]
    pub report: BackwardErrorReport,
    /// The Frobenius-optimal nearby matrix `E_o = A + ΔA_F`.
    #[serde(serialize_with = "serialize_cmat")]
    pub e_o: CMat,
    /// The block `D = U^H A U`.
    #[serde(serialize_with = "serialize_cmat")]
    pub block: CMat,
    /// `‖(I−P)E_oP‖_F`.
    pub invariance_residual: f64,
}

fn require_member(a: &CMat, spec: &StructureSpec, tol: &ToleranceProfile) -> Result<()> {
    let defect = spec.defect(a)?;
    if defect > tol.membership_rtol * (1.0 + a.norm()) {
        return Err(Error::NotStructured { defect });
    }
    Ok(())
}

fn require_full_column_rank(x: &CMat, tol: &ToleranceProfile) -> Result<()> {
    let svd = SvdResult::new(x, tol.rank_rtol_for(x.nrows(), x.ncols()));
    if svd.rank < x.ncols() {
        return Err(Error::InvalidInput(format!(
            "X must have full column rank (rank {} < {})",
            svd.rank,
            x.ncols()
        )));
    }
    Ok(())
}

fn require_square(d: &CMat, p: usize) -> Result<()> {
    if d.shape() != (p, p) {
        return Err(Error::ShapeMismatch(format!(
            "D is {}x{} but must be {p}x{p}",
            d.nrows(),
            d.ncols()
        )));
    }
    Ok(())
}

/// Minimal structured `A` with prescribed invariant pair `AX = XD`, in the
/// Frobenius and spectral norms.
pub fn inverse_invariant_pair(
    x: &CMat,
    d: &CMat,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
) -> Result<(OptimalSolution, OptimalSolution)> {
    require_square(d, x.ncols())?;
    let prob = MappingProblem::new(x.clone(), x * d, spec.clone(), *tol)?;
    require_full_column_rank(x, tol)?;
    Ok((mapping::solve_frobenius(&prob)?, mapping::solve_spectral(&prob, None)?))
}

fn report_for(prob: &MappingProblem) -> Result<BackwardErrorReport> {
    let existence = mapping::check_existence(prob);
    if !existence.exists {
        return Err(Error::NotSolvable(Box::new(existence)));
    }
    let fro = mapping::solve_frobenius(prob)?;
    let spec = mapping::solve_spectral(prob, None)?;
    Ok(BackwardErrorReport {
        value_spectral: spec.sigma,
        value_frobenius: fro.sigma,
        perturbation_spectral: spec.a,
        perturbation_frobenius: fro.a,
        solvable: true,
        existence,
    })
}

/// Smallest structured `ΔA` with `(A + ΔA)X = XD`.
pub fn invariant_pair_backward_error(
    a: &CMat,
    x: &CMat,
    d: &CMat,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
) -> Result<BackwardErrorReport> {
    require_square(d, x.ncols())?;
    if a.shape() != (spec.n(), spec.n()) {
        return Err(Error::ShapeMismatch("A does not match the structure dimension".into()));
    }
    require_member(a, spec, tol)?;
    let prob = MappingProblem::new(x.clone(), x * d - a * x, spec.clone(), *tol)?;
    require_full_column_rank(x, tol)?;
    report_for(&prob)
}

/// Backward error of an approximate eigenpair `(λ, x)` from the closed-form
/// rank-two perturbations.
pub fn eigenpair_backward_error(
    a: &CMat,
    x: &CMat,
    lambda: C64,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
) -> Result<BackwardErrorReport> {
    let n = spec.n();
    if a.shape() != (n, n) || x.shape() != (n, 1) {
        return Err(Error::ShapeMismatch(format!("need A {n}x{n} and x {n}x1")));
    }
    let xnorm = x.norm();
    if xnorm == 0.0 {
        return Err(Error::InvalidInput("x must be nonzero".into()));
    }
    require_member(a, spec, tol)?;
    let xh = x / c(xnorm);
    let rh = (x * lambda - a * x) / c(xnorm);
    let prob = MappingProblem::new(xh.clone(), rh.clone(), spec.clone(), *tol)?;
    let existence = mapping::check_existence(&prob);
    if !existence.exists {
        return Err(Error::NotSolvable(Box::new(existence)));
    }
    let bt = spec.m() * &rh;
    let inner = (spec.star().apply(&xh) * &bt)[(0, 0)];
    let (e, da) = eigen_perturbations(&xh, &bt, spec.prototype_class());
    Ok(BackwardErrorReport {
        value_spectral: rh.norm(),
        value_frobenius: (2.0 * rh.norm_squared() - inner.norm_sqr()).max(0.0).sqrt(),
        perturbation_spectral: spec.m_inv() * da,
        perturbation_frobenius: spec.m_inv() * e,
        solvable: true,
        existence,
    })
}

const EIGENPAIR_GAP_RTOL: f64 = 1e-12;

/// Prototype-class perturbations `(E, ΔA)` mapping the unit vector `x` to `b`.
fn eigen_perturbations(x: &CMat, b: &CMat, cls: PrototypeClass) -> (CMat, CMat) {
    let n = x.nrows();
    let xc = x.conjugate();
    let xh = x.adjoint();
    let proj = eye(n) - x * &xh;
    let bn = b.norm();
    match cls {
        PrototypeClass::Sym => {
            let projt = proj.transpose();
            let xtb = (x.transpose() * b)[(0, 0)];
            let e = &xc * &xh * xtb + &xc * b.transpose() * &proj + &projt * b * &xh;
            let gap = bn * bn - xtb.norm_sqr();
            if bn - xtb.norm() <= EIGENPAIR_GAP_RTOL * bn {
                return (e.clone(), e);
            }
            let corr = &projt * b * b.transpose() * &proj * (xtb.conj() / c(gap));
            let da = &e - corr;
            (e, da)
        }
        PrototypeClass::SkewSym => {
            let e = proj.transpose() * b * &xh - &xc * b.transpose() * &proj;
            (e.clone(), e)
        }
        PrototypeClass::Herm => {
            let xhb = (&xh * b)[(0, 0)];
            let e = x * &xh * xhb + x * b.adjoint() * &proj + &proj * b * &xh;
            let gap = bn * bn - xhb.norm_sqr();
            if bn - xhb.norm() <= EIGENPAIR_GAP_RTOL * bn {
                return (e.clone(), e);
            }
            let corr = &proj * b * b.adjoint() * &proj * (xhb.conj() / c(gap));
            let da = &e - corr;
            (e, da)
        }
        PrototypeClass::SkewHerm => {
            let (e, da) = eigen_perturbations(x, &(b * I_UNIT), PrototypeClass::Herm);
            (e * (-I_UNIT), da * (-I_UNIT))
        }
    }
}

fn require_isometry(u: &CMat, tol: &ToleranceProfile) -> Result<()> {
    let p = u.ncols();
    let defect = (u.adjoint() * u - eye(p)).norm();
    if defect > tol.residual_rtol * (p.max(1) as f64).sqrt() {
        return Err(Error::InvalidInput(format!("U is not an isometry (defect {defect:.3e})")));
    }
    Ok(())
}

/// `D = U^H A U`, the block minimizing `‖AU − UD‖` in both norms.
pub fn optimal_block(a: &CMat, u: &CMat, tol: &ToleranceProfile) -> Result<CMat> {
    if a.nrows() != a.ncols() || u.nrows() != a.nrows() {
        return Err(Error::ShapeMismatch("A must be square with as many rows as U".into()));
    }
    require_isometry(u, tol)?;
    Ok(u.adjoint() * a * u)
}

/// Smallest structured perturbation making `range(U)` invariant.
///
/// The minimizing `E_o` is obtained from the mapping problem
/// `(U, −(I−P)AU)` with `P = UU^H`. For bilinear structures the solvability
/// condition can fail when `U` is complex; this is reported as
/// `ConditionallyUnsolvable` carrying the symmetry defect.
pub fn subspace_backward_error(
    a: &CMat,
    u: &CMat,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
) -> Result<SubspaceReport> {
    let n = spec.n();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch("A does not match the structure dimension".into()));
    }
    let block = optimal_block(a, u, tol)?;
    require_member(a, spec, tol)?;
    let p = u * u.adjoint();
    let comp = eye(n) - &p;
    let b = -(&comp * a * u);
    let prob = MappingProblem::new(u.clone(), b, spec.clone(), *tol)?;
    let existence = mapping::check_existence(&prob);
    if !existence.exists {
        let defect = existence.defect_symmetry;
        return match spec.form() {
            Form::Bilinear => Err(Error::ConditionallyUnsolvable { defect }),
            Form::Sesquilinear => Err(Error::NotSolvable(Box::new(existence))),
        };
    }
    let report = report_for(&prob)?;
    let e_o = a + &report.perturbation_frobenius;
    let invariance_residual = (&comp * &e_o * &p).norm();
    Ok(SubspaceReport {
        report,
        e_o,
        block,
        invariance_residual,
    })
}

/// `‖(I−P)AP‖₂` and `√(2‖(I−P)AP‖²_F − ‖U^* M (I−P)AP‖²_F)`.
pub fn subspace_closed_forms(a: &CMat, u: &CMat, spec: &StructureSpec) -> (f64, f64) {
    let n = a.nrows();
    let p = u * u.adjoint();
    let r = (eye(n) - &p) * a * &p;
    let ustar = match spec.star() {
        Star::T => u.transpose(),
        Star::H => u.adjoint(),
    };
    let inner = ustar * spec.m() * &r;
    let fro = (2.0 * r.norm_squared() - inner.norm_squared()).max(0.0).sqrt();
    (linalg::spectral_norm(&r), fro)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, unit};
    use crate::structure::Preset;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn inverse_pair_examples() {
        let spec = Preset::Hermitian.build(2).unwrap();
        let d = CMat::from_element(1, 1, c(3.0));
        let (fro, _) = inverse_invariant_pair(&unit(2, 0), &d, &spec, &tol()).unwrap();
        assert!((fro.norm_value - 3.0).abs() < 1e-14);
        let d = CMat::from_element(1, 1, I_UNIT);
        let err = inverse_invariant_pair(&unit(2, 0), &d, &spec, &tol()).unwrap_err();
        assert_eq!(err.code(), "NotSolvable");
    }

    #[test]
    fn eigenpair_golden() {
        let spec = Preset::Hermitian.build(2).unwrap();
        let a = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let rep = eigenpair_backward_error(&a, &unit(2, 0), c(1.0), &spec, &tol()).unwrap();
        assert!((rep.value_spectral - 2f64.sqrt()).abs() < 1e-14);
        assert!((rep.value_frobenius - 3f64.sqrt()).abs() < 1e-14);
        for d in [&rep.perturbation_spectral, &rep.perturbation_frobenius] {
            let r = (&a + d) * unit(2, 0) - unit(2, 0);
            assert!(r.norm() < 1e-14);
        }
        assert!((linalg::spectral_norm(&rep.perturbation_spectral) - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn exact_eigenpair_has_zero_error() {
        let spec = Preset::Hermitian.build(2).unwrap();
        let a = from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]);
        let rep = eigenpair_backward_error(&a, &unit(2, 0), c(2.0), &spec, &tol()).unwrap();
        assert_eq!(rep.value_spectral, 0.0);
        assert_eq!(rep.perturbation_spectral, CMat::zeros(2, 2));
    }

    #[test]
    fn skew_hermitian_eigenpair() {
        let spec = Preset::SkewHermitian.build(2).unwrap();
        let a = from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let x = unit(2, 0);
        let rep = eigenpair_backward_error(&a, &x, C64::new(0.0, 0.5), &spec, &tol()).unwrap();
        for d in [&rep.perturbation_spectral, &rep.perturbation_frobenius] {
            assert!(spec.defect(d).unwrap() < 1e-14);
            assert!(((&a + d) * &x - &x * C64::new(0.0, 0.5)).norm() < 1e-14);
        }
        assert!((linalg::spectral_norm(&rep.perturbation_spectral) - rep.value_spectral).abs() < 1e-13);
        assert!((rep.perturbation_frobenius.norm() - rep.value_frobenius).abs() < 1e-13);
    }

    #[test]
    fn subspace_golden() {
        let spec = Preset::Hermitian.build(2).unwrap();
        let a = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let rep = subspace_backward_error(&a, &unit(2, 0), &spec, &tol()).unwrap();
        assert!(rep.e_o.norm() < 1e-15);
        assert!((rep.report.value_spectral - 1.0).abs() < 1e-15);
        assert!((rep.report.value_frobenius - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn optimal_block_rejects_non_isometry() {
        let a = eye(2);
        let u = unit(2, 0) * c(2.0);
        assert!(optimal_block(&a, &u, &tol()).is_err());
    }

    #[test]
    fn complex_u_bilinear_reports_defect() {
        let spec = Preset::Symmetric.build(4).unwrap();
        let a = spec.random_member(1);
        let u = linalg::random_unitary(4, &mut linalg::rng(4)).columns(0, 2).clone_owned();
        match subspace_backward_error(&a, &u, &spec, &tol()) {
            Err(Error::ConditionallyUnsolvable { defect }) => assert!(defect > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
