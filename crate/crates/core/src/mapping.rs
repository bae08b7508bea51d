//! The structured mapping problem: given `X, B ∈ K^{n×p}` and a structured
//! class `S`, find `A ∈ S` with `AX = B`.
//!
//! Every solver reduces to one of the four prototype classes by working with
//! `MA` and `MB`: `A ∈ S(X, B)` iff `MA` is a prototype-class solution of
//! `(MA)X = MB`. Since `M` is unitary, both norms are preserved.

use serde::Serialize;

use crate::kernels::{psd_inv_sqrt, psd_sqrt_clamped, SvdResult, DKW_SINGULAR_RTOL};
use crate::linalg::{self, c, eye, Star, I_UNIT};
use crate::structure::{Parity, PrototypeClass, StructureSpec, ToleranceProfile};
use crate::{CMat, Error, Result};

/// A pair `(X, B)` together with the structure and tolerances.
#[derive(Debug, Clone)]
pub struct MappingProblem {
    x: CMat,
    b: CMat,
    spec: StructureSpec,
    tol: ToleranceProfile,
}

impl MappingProblem {
    pub fn new(x: CMat, b: CMat, spec: StructureSpec, tol: ToleranceProfile) -> Result<Self> {
        tol.validate()?;
        if x.shape() != b.shape() {
            return Err(Error::ShapeMismatch(format!(
                "X is {}x{} but B is {}x{}",
                x.nrows(),
                x.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        if x.nrows() != spec.n() {
            return Err(Error::ShapeMismatch(format!(
                "X has {} rows but the structure has dimension {}",
                x.nrows(),
                spec.n()
            )));
        }
        Ok(MappingProblem { x, b, spec, tol })
    }

    pub fn x(&self) -> &CMat {
        &self.x
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn spec(&self) -> &StructureSpec {
        &self.spec
    }

    pub fn tol(&self) -> &ToleranceProfile {
        &self.tol
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    fn rank_rtol(&self) -> f64 {
        self.tol.rank_rtol_for(self.n(), self.p())
    }

    pub fn svd(&self) -> SvdResult {
        SvdResult::new(&self.x, self.rank_rtol())
    }
}

/// Outcome of the two solvability conditions: `BX†X = B` and the
/// (skew-)symmetry of `X*MB` selected by the prototype class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistenceReport {
    pub exists: bool,
    pub range_ok: bool,
    pub symmetry_ok: bool,
    pub defect_range: f64,
    pub defect_symmetry: f64,
    pub full_column_rank: bool,
    pub prototype: PrototypeClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormKind {
    Frobenius,
    Spectral,
}

#[derive(Debug, Clone)]
pub struct OptimalSolution {
    pub a: CMat,
    pub norm_kind: NormKind,
    pub norm_value: f64,
    /// `σ^S(X, B)` from the closed-form expression.
    pub sigma: f64,
    pub unique: bool,
}

fn symmetry_defect(w: &CMat, star: Star, parity: Parity) -> f64 {
    (star.apply(w) - w * c(parity.sign())).norm()
}

pub fn check_existence(prob: &MappingProblem) -> ExistenceReport {
    let svd = prob.svd();
    existence_with(prob, &svd)
}

fn existence_with(prob: &MappingProblem, svd: &SvdResult) -> ExistenceReport {
    let tol = &prob.tol;
    let cls = prob.spec.prototype_class();
    let xp = svd.pinv();
    let full_column_rank = svd.rank == prob.p();
    let defect_range = (&prob.b * &xp * &prob.x - &prob.b).norm();
    let range_ok = full_column_rank || defect_range <= tol.residual_rtol * prob.b.norm();
    let w = cls.star().apply(&prob.x) * prob.spec.m() * &prob.b;
    let defect_symmetry = symmetry_defect(&w, cls.star(), cls.parity());
    let symmetry_ok = defect_symmetry <= tol.residual_rtol * w.norm().max(1.0);
    ExistenceReport {
        exists: range_ok && symmetry_ok,
        range_ok,
        symmetry_ok,
        defect_range,
        defect_symmetry,
        full_column_rank,
        prototype: cls,
    }
}

/// The candidate map for one branch:
/// `BX† ± (BX†)* − (X†)* W± X†` with `W₊ = (X*B)*`, `W₋ = X*B`.
pub fn f_map_branch(x: &CMat, b: &CMat, star: Star, parity: Parity, rank_rtol: f64) -> CMat {
    let svd = SvdResult::new(x, rank_rtol);
    f_map_branch_with(x, b, star, parity, &svd.pinv())
}

fn f_map_branch_with(x: &CMat, b: &CMat, star: Star, parity: Parity, xp: &CMat) -> CMat {
    let bxp = b * xp;
    let w = star.apply(x) * b;
    let xps = star.apply(xp);
    match parity {
        Parity::Symmetric => &bxp + star.apply(&bxp) - xps * star.apply(&w) * xp,
        Parity::Skew => &bxp - star.apply(&bxp) - xps * w * xp,
    }
}

/// Candidate solution map with the branch chosen from the measured symmetry
/// of `X*B`. When both branches apply (`X*B ≈ 0`) `hint` decides, defaulting
/// to the symmetric branch; when neither applies `BX†` is returned.
pub fn f_map(x: &CMat, b: &CMat, star: Star, hint: Option<Parity>, tol: &ToleranceProfile) -> Result<CMat> {
    if x.shape() != b.shape() {
        return Err(Error::ShapeMismatch("f_map: X and B differ in shape".into()));
    }
    let svd = SvdResult::new(x, tol.rank_rtol_for(x.nrows(), x.ncols()));
    let xp = svd.pinv();
    let w = star.apply(x) * b;
    let scale = tol.residual_rtol * w.norm().max(1.0);
    let sym_ok = symmetry_defect(&w, star, Parity::Symmetric) <= scale;
    let skew_ok = symmetry_defect(&w, star, Parity::Skew) <= scale;
    let parity = match (sym_ok, skew_ok) {
        (true, true) => hint.unwrap_or(Parity::Symmetric),
        (true, false) => Parity::Symmetric,
        (false, true) => Parity::Skew,
        (false, false) => return Ok(b * xp),
    };
    Ok(f_map_branch_with(x, b, star, parity, &xp))
}

fn require_solvable(prob: &MappingProblem, svd: &SvdResult) -> Result<()> {
    let rep = existence_with(prob, svd);
    if rep.exists {
        Ok(())
    } else {
        Err(Error::NotSolvable(Box::new(rep)))
    }
}

/// Closed-form `σ^S` for the Frobenius norm:
/// `√(2‖BX†‖²_F − Tr(MBX†(MBX†)^H Π))` with `Π = (XX†)^T` or `XX†`.
fn sigma_frobenius_closed(prob: &MappingProblem, xp: &CMat) -> f64 {
    let bxp = &prob.b * xp;
    let y = prob.spec.m() * &bxp;
    let proj = &prob.x * xp;
    let proj = match prob.spec.star() {
        Star::T => proj.transpose(),
        Star::H => proj,
    };
    let tr = (&y * y.adjoint() * proj).trace().re;
    (2.0 * bxp.norm_squared() - tr).max(0.0).sqrt()
}

/// The unique Frobenius-norm minimizer `A_o = M⁻¹ F_*(X, MB)`.
pub fn solve_frobenius(prob: &MappingProblem) -> Result<OptimalSolution> {
    let svd = prob.svd();
    require_solvable(prob, &svd)?;
    let xp = svd.pinv();
    let cls = prob.spec.prototype_class();
    let mb = prob.spec.m() * &prob.b;
    let a = prob.spec.m_inv() * f_map_branch_with(&prob.x, &mb, cls.star(), cls.parity(), &xp);
    let norm_value = a.norm();
    Ok(OptimalSolution {
        a,
        norm_kind: NormKind::Frobenius,
        norm_value,
        sigma: sigma_frobenius_closed(prob, &xp),
        unique: true,
    })
}

/// A spectral-norm minimizer. `z` selects a member of the infinite optimal
/// family; it must be an n×n contraction in the prototype class of the
/// structure (`None` means `Z = 0`).
pub fn solve_spectral(prob: &MappingProblem, z: Option<&CMat>) -> Result<OptimalSolution> {
    let svd = prob.svd();
    require_solvable(prob, &svd)?;
    let n = prob.n();
    let cls = prob.spec.prototype_class();
    if let Some(z) = z {
        if z.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!("Z must be {n}x{n}")));
        }
        let defect = cls.defect(z);
        if defect > prob.tol.membership_rtol * z.norm().max(1.0) {
            return Err(Error::NotStructured { defect });
        }
        let norm = linalg::spectral_norm(z);
        if norm > 1.0 + 1e-12 {
            return Err(Error::NotContraction { norm });
        }
    }
    let xp = svd.pinv();
    let mb = prob.spec.m() * &prob.b;
    let proto = match cls {
        PrototypeClass::SkewHerm => {
            // skew-Hermitian solutions of AX = B are −i times Hermitian
            // solutions of (iA)X = iB
            let zi = z.map(|z| z * I_UNIT);
            spectral_prototype(&prob.x, &(mb * I_UNIT), PrototypeClass::Herm, zi.as_ref(), &svd, &xp) * (-I_UNIT)
        }
        _ => spectral_prototype(&prob.x, &mb, cls, z, &svd, &xp),
    };
    let a = prob.spec.m_inv() * proto;
    let sigma = linalg::spectral_norm(&(&prob.b * &xp));
    Ok(OptimalSolution {
        norm_value: linalg::spectral_norm(&a),
        a,
        norm_kind: NormKind::Spectral,
        sigma,
        unique: false,
    })
}

/// Spectral-norm optimal solution for a prototype class in
/// {Sym, SkewSym, Herm}:
///
/// `F(X,B) − Π* K Â₁₁ K* Π + μ Ū₂ (I − U₂^T K K^H Ū₂)^{1/2} Z₂₂ (…)^{1/2} U₂^H`
/// with `Â₁₁ = conj(U₁^T BX† U₁)` (bilinear) or `U₁^H BX† U₁` (Hermitian),
/// `K = BX†U₁ (μ²I − A₁₁^H A₁₁)^{−1/2}` and `μ = ‖BX†‖₂`.
fn spectral_prototype(x: &CMat, b: &CMat, cls: PrototypeClass, z: Option<&CMat>, svd: &SvdResult, xp: &CMat) -> CMat {
    let n = x.nrows();
    let star = cls.star();
    let base = f_map_branch_with(x, b, star, cls.parity(), xp);
    let y = b * xp;
    let mu = linalg::spectral_norm(&y);
    if mu == 0.0 {
        return base;
    }
    let u1 = svd.u1();
    let u2 = svd.u2();
    let r = u1.ncols();
    let perp = eye(n) - x * xp;
    let mu2 = mu * mu;
    let yu1 = &y * &u1;
    match star {
        Star::T => {
            let a11 = u1.transpose() * &yu1;
            let g = eye(r) * c(mu2) - a11.adjoint() * &a11;
            let k = &yu1 * psd_inv_sqrt(&hermitian_part(&g), mu2 * DKW_SINGULAR_RTOL);
            let middle = perp.transpose() * &k * a11.conjugate() * k.transpose() * &perp;
            let mut a = base - middle;
            if let Some(z) = z {
                if u2.ncols() > 0 {
                    let z22 = u2.transpose() * z * &u2;
                    let s1 = psd_sqrt_clamped(&(eye(n - r) - u2.transpose() * &k * k.adjoint() * u2.conjugate()));
                    let s2 = psd_sqrt_clamped(&(eye(n - r) - u2.adjoint() * k.conjugate() * k.transpose() * &u2));
                    a += u2.conjugate() * s1 * z22 * s2 * u2.adjoint() * c(mu);
                }
            }
            a
        }
        Star::H => {
            let a11 = u1.adjoint() * &yu1;
            let g = eye(r) * c(mu2) - a11.adjoint() * &a11;
            let k = &yu1 * psd_inv_sqrt(&hermitian_part(&g), mu2 * DKW_SINGULAR_RTOL);
            let middle = &perp * &k * &a11 * k.adjoint() * &perp;
            let mut a = base - middle;
            if let Some(z) = z {
                if u2.ncols() > 0 {
                    let z22 = u2.adjoint() * z * &u2;
                    let s = psd_sqrt_clamped(&(eye(n - r) - u2.adjoint() * &k * k.adjoint() * &u2));
                    a += &u2 * &s * z22 * &s * u2.adjoint() * c(mu);
                }
            }
            a
        }
    }
}

fn hermitian_part(g: &CMat) -> CMat {
    (g + g.adjoint()) * c(0.5)
}

/// All structured solutions: `base + M⁻¹ Π_L Z Π_R` for `Z ∈ MS`, where
/// `Π_R = I − XX†` and `Π_L = Π_R^T` (bilinear) or `Π_R` (sesquilinear).
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    pub base: CMat,
    pub projector_left: CMat,
    pub projector_right: CMat,
    pub prototype: PrototypeClass,
    pub m: CMat,
}

impl SolutionFamily {
    /// Family member for an arbitrary `Z` (projected into the prototype
    /// class first).
    pub fn member(&self, z: &CMat) -> Result<CMat> {
        let n = self.base.nrows();
        if z.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!("Z must be {n}x{n}")));
        }
        Ok(&self.base + self.m.adjoint() * self.sandwich(&self.prototype.project(z)))
    }

    /// `Π_L Z Π_R`.
    pub fn sandwich(&self, z: &CMat) -> CMat {
        &self.projector_left * z * &self.projector_right
    }

    /// Parameter `Ẑ = M(A − base)`; for any structured solution `A`,
    /// `member(Ẑ) = A`.
    pub fn recover_parameter(&self, a: &CMat) -> Result<CMat> {
        if a.shape() != self.base.shape() {
            return Err(Error::ShapeMismatch("A has the wrong shape".into()));
        }
        Ok(&self.m * (a - &self.base))
    }
}

pub fn solution_family(prob: &MappingProblem) -> Result<SolutionFamily> {
    let base = solve_frobenius(prob)?.a;
    let svd = prob.svd();
    let perp = eye(prob.n()) - &prob.x * svd.pinv();
    let cls = prob.spec.prototype_class();
    let left = match cls.star() {
        Star::T => perp.transpose(),
        Star::H => perp.clone(),
    };
    Ok(SolutionFamily {
        base,
        projector_left: left,
        projector_right: perp,
        prototype: cls,
        m: prob.spec.m().clone(),
    })
}

pub fn family_member(fam: &SolutionFamily, z: &CMat) -> Result<CMat> {
    fam.member(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sigmas {
    /// `‖A_o‖_F` of the Frobenius-optimal solution.
    pub frobenius: f64,
    /// Closed-form trace expression for the Frobenius value.
    pub frobenius_closed_form: f64,
    /// `‖BX†‖₂`.
    pub spectral: f64,
    pub unstructured: f64,
    /// Full-column-rank formulas, when `X` has full column rank.
    pub frobenius_full_rank: Option<f64>,
    pub spectral_full_rank: Option<f64>,
}

pub fn sigma_values(prob: &MappingProblem) -> Result<Sigmas> {
    let svd = prob.svd();
    require_solvable(prob, &svd)?;
    let fro = solve_frobenius(prob)?;
    let xp = svd.pinv();
    let spectral = linalg::spectral_norm(&(&prob.b * &xp));
    let (frobenius_full_rank, spectral_full_rank) = if svd.rank == prob.p() && prob.p() > 0 {
        let (f, s) = full_rank_sigmas(prob);
        (Some(f), Some(s))
    } else {
        (None, None)
    };
    Ok(Sigmas {
        frobenius: fro.norm_value,
        frobenius_closed_form: fro.sigma,
        spectral,
        unstructured: spectral,
        frobenius_full_rank,
        spectral_full_rank,
    })
}

/// `√(2‖B G^{−1/2}‖²_F − ‖Ĝ^{−1/2} X* M B G^{−1/2}‖²_F)` and `‖B G^{−1/2}‖₂`
/// with `G = X^H X` and `Ĝ = X^T X̄` (bilinear) or `G` (sesquilinear).
fn full_rank_sigmas(prob: &MappingProblem) -> (f64, f64) {
    let x = &prob.x;
    let g = x.adjoint() * x;
    let g_is = psd_inv_sqrt(&hermitian_part(&g), 0.0);
    let star = prob.spec.star();
    let left = match star {
        Star::T => g_is.conjugate(),
        Star::H => g_is.clone(),
    };
    let bg = &prob.b * &g_is;
    let inner = left * star.apply(x) * prob.spec.m() * &prob.b * &g_is;
    let f = (2.0 * bg.norm_squared() - inner.norm_squared()).max(0.0).sqrt();
    (f, linalg::spectral_norm(&bg))
}
