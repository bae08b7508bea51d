//! Scalar products `<x, y>_M`, their adjoints, and the Jordan/Lie algebras
//! they define.
//!
//! A [`StructureSpec`] holds a unitary matrix `M` that is symmetric or
//! skew-symmetric (bilinear form) or Hermitian or skew-Hermitian
//! (sesquilinear form), together with the choice of algebra. Multiplying the
//! algebra by `M` lands in one of four prototype classes, see
//! [`PrototypeClass`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, c, eye, Star};
use crate::{CMat, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Bilinear,
    Sesquilinear,
}

impl Form {
    pub fn star(self) -> Star {
        match self {
            Form::Bilinear => Star::T,
            Form::Sesquilinear => Star::H,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    /// Self-adjoint matrices, `A⋆ = A`.
    Jordan,
    /// Skew-adjoint matrices, `A⋆ = −A`.
    Lie,
}

/// Whether `M* = M` or `M* = −M` (with `*` the transpose of the form).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Skew,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Symmetric => 1.0,
            Parity::Skew => -1.0,
        }
    }

    fn times(self, other: Parity) -> Parity {
        if self == other {
            Parity::Symmetric
        } else {
            Parity::Skew
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrototypeClass {
    Sym,
    SkewSym,
    Herm,
    SkewHerm,
}

impl PrototypeClass {
    pub fn new(star: Star, parity: Parity) -> Self {
        match (star, parity) {
            (Star::T, Parity::Symmetric) => PrototypeClass::Sym,
            (Star::T, Parity::Skew) => PrototypeClass::SkewSym,
            (Star::H, Parity::Symmetric) => PrototypeClass::Herm,
            (Star::H, Parity::Skew) => PrototypeClass::SkewHerm,
        }
    }

    pub fn star(self) -> Star {
        match self {
            PrototypeClass::Sym | PrototypeClass::SkewSym => Star::T,
            PrototypeClass::Herm | PrototypeClass::SkewHerm => Star::H,
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            PrototypeClass::Sym | PrototypeClass::Herm => Parity::Symmetric,
            PrototypeClass::SkewSym | PrototypeClass::SkewHerm => Parity::Skew,
        }
    }

    /// `(Z ± Z*)/2`, exactly in the class.
    pub fn project(self, z: &CMat) -> CMat {
        let zs = self.star().apply(z);
        (z + zs * c(self.parity().sign())) * c(0.5)
    }

    /// `‖Z* ∓ Z‖_F`.
    pub fn defect(self, z: &CMat) -> f64 {
        (self.star().apply(z) - z * c(self.parity().sign())).norm()
    }
}

impl fmt::Display for PrototypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrototypeClass::Sym => "symmetric",
            PrototypeClass::SkewSym => "skew-symmetric",
            PrototypeClass::Herm => "hermitian",
            PrototypeClass::SkewHerm => "skew-hermitian",
        };
        f.write_str(s)
    }
}

/// Relative tolerances used by membership, rank and residual decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    pub membership_rtol: f64,
    /// `None` selects `f64::EPSILON * max(n, p)`.
    pub rank_rtol: Option<f64>,
    pub residual_rtol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile { membership_rtol: 1e-10, rank_rtol: None, residual_rtol: 1e-10 }
    }
}

impl ToleranceProfile {
    pub fn rank_rtol_for(&self, n: usize, p: usize) -> f64 {
        self.rank_rtol.unwrap_or(f64::EPSILON * n.max(p).max(1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.membership_rtol > 0.0
            && self.residual_rtol > 0.0
            && self.rank_rtol.is_none_or(|r| r > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("tolerances must be strictly positive".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub defect: f64,
}

/// The scalar-product datum `(M, form, algebra)` defining a structured class.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureSpec {
    m: CMat,
    form: Form,
    algebra: Algebra,
    m_parity: Parity,
    identity: bool,
}

const SPEC_TOL: f64 = 1e-10;

impl StructureSpec {
    pub fn new(m: CMat, form: Form, algebra: Algebra) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || m.ncols() != n {
            return Err(Error::BadStructureSpec(format!(
                "M must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let unitary_defect = (m.adjoint() * &m - eye(n)).norm();
        if unitary_defect > SPEC_TOL * n as f64 {
            return Err(Error::BadStructureSpec(format!(
                "M is not unitary (defect {unitary_defect:.3e})"
            )));
        }
        let ms = form.star().apply(&m);
        let sym = (&ms - &m).norm() <= SPEC_TOL * n as f64;
        let skew = (&ms + &m).norm() <= SPEC_TOL * n as f64;
        let m_parity = match (sym, skew) {
            (true, false) => Parity::Symmetric,
            (false, true) => Parity::Skew,
            _ => {
                return Err(Error::BadStructureSpec(format!(
                    "M must satisfy exactly one of M{0}=M, M{0}=-M",
                    match form {
                        Form::Bilinear => "^T",
                        Form::Sesquilinear => "^H",
                    }
                )))
            }
        };
        let identity = (&m - eye(n)).norm() == 0.0;
        Ok(StructureSpec { m, form, algebra, m_parity, identity })
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn m(&self) -> &CMat {
        &self.m
    }

    /// `M⁻¹ = M^H`.
    pub fn m_inv(&self) -> CMat {
        self.m.adjoint()
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn m_parity(&self) -> Parity {
        self.m_parity
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn star(&self) -> Star {
        self.form.star()
    }

    /// Sign `±` with `A⋆ = ±A` on the algebra.
    pub fn algebra_sign(&self) -> f64 {
        match self.algebra {
            Algebra::Jordan => 1.0,
            Algebra::Lie => -1.0,
        }
    }

    pub fn prototype_class(&self) -> PrototypeClass {
        let alg = match self.algebra {
            Algebra::Jordan => Parity::Symmetric,
            Algebra::Lie => Parity::Skew,
        };
        PrototypeClass::new(self.star(), self.m_parity.times(alg))
    }

    fn check_dim(&self, a: &CMat) -> Result<()> {
        let n = self.n();
        if a.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "expected {n}x{n} matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(())
    }

    /// `M⁻¹A^T M` (bilinear) or `M⁻¹A^H M` (sesquilinear).
    pub fn adjoint(&self, a: &CMat) -> Result<CMat> {
        self.check_dim(a)?;
        Ok(self.adjoint_unchecked(a))
    }

    pub(crate) fn adjoint_unchecked(&self, a: &CMat) -> CMat {
        let as_ = self.star().apply(a);
        if self.identity {
            as_
        } else {
            self.m.adjoint() * as_ * &self.m
        }
    }

    pub fn is_member(&self, a: &CMat, tol: &ToleranceProfile) -> Result<Membership> {
        self.check_dim(a)?;
        let defect = self.defect_unchecked(a);
        let member = defect <= tol.membership_rtol * a.norm().max(1.0);
        Ok(Membership { member, defect })
    }

    /// `‖A⋆ ∓ A‖_F`.
    pub fn defect(&self, a: &CMat) -> Result<f64> {
        self.check_dim(a)?;
        Ok(self.defect_unchecked(a))
    }

    pub(crate) fn defect_unchecked(&self, a: &CMat) -> f64 {
        (self.adjoint_unchecked(a) - a * c(self.algebra_sign())).norm()
    }

    /// Orthogonal (Frobenius) projection onto the structured class.
    pub fn project(&self, a: &CMat) -> Result<CMat> {
        self.check_dim(a)?;
        Ok((a + self.adjoint_unchecked(a) * c(self.algebra_sign())) * c(0.5))
    }

    /// `A = J + L` with `J⋆ = J` and `L⋆ = −L`.
    pub fn split(&self, a: &CMat) -> Result<(CMat, CMat)> {
        self.check_dim(a)?;
        let adj = self.adjoint_unchecked(a);
        Ok(((a + &adj) * c(0.5), (a - adj) * c(0.5)))
    }

    /// Random structured matrix: complex Gaussian `G`, then `M⁻¹·proj(G)`.
    pub fn random_member(&self, seed: u64) -> CMat {
        let mut rng = linalg::rng(seed);
        let g = linalg::random_complex(self.n(), self.n(), &mut rng);
        self.m_inv() * self.prototype_class().project(&g)
    }

    /// Random structured matrix with real entries (requires a real `M`).
    pub fn random_real_member(&self, seed: u64) -> Result<CMat> {
        if linalg::max_imag(&self.m) != 0.0 {
            return Err(Error::BadStructureSpec("random_real_member requires a real M".into()));
        }
        let mut rng = linalg::rng(seed);
        let g = linalg::random_real(self.n(), self.n(), &mut rng);
        Ok(self.m_inv() * self.prototype_class().project(&g))
    }

    /// `Hamiltonian` preset with half dimension `half`.
    pub fn hamiltonian(half: usize) -> Result<Self> {
        Preset::Hamiltonian.build(2 * half)
    }
}

/// `J = [[0, I], [−I, 0]]` of size `2·half`.
pub fn symplectic_j(half: usize) -> CMat {
    let n = 2 * half;
    let mut j = CMat::zeros(n, n);
    for i in 0..half {
        j[(i, half + i)] = c(1.0);
        j[(half + i, i)] = c(-1.0);
    }
    j
}

/// Anti-identity (flip) matrix.
pub fn flip(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i + j + 1 == n { c(1.0) } else { c(0.0) })
}

/// `diag(I_p, −I_{n−p})`.
pub fn signature(n: usize, p: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| {
        if i != j {
            c(0.0)
        } else if i < p {
            c(1.0)
        } else {
            c(-1.0)
        }
    })
}

/// Named structure classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Symmetric,
    SkewSymmetric,
    Hermitian,
    SkewHermitian,
    /// `(JH)^T = JH`.
    Hamiltonian,
    /// `(JH)^H = JH`.
    HamiltonianSesquilinear,
    /// `(JK)^T = −JK`.
    SkewHamiltonian,
    /// `(JK)^H = −JK`.
    SkewHamiltonianSesquilinear,
    Persymmetric,
    /// `ΣA` symmetric, `Σ = diag(I_p, −I_q)`; `None` uses `p = ⌈n/2⌉`.
    PseudoSymmetric(Option<usize>),
    /// `ΣA` Hermitian, `Σ = diag(I_p, −I_q)`; `None` uses `p = ⌈n/2⌉`.
    PseudoHermitian(Option<usize>),
}

impl Preset {
    pub const NAMES: [&'static str; 13] = [
        "symmetric",
        "skew-symmetric",
        "hermitian",
        "skew-hermitian",
        "hamiltonian",
        "hamiltonian-bilinear",
        "hamiltonian-sesquilinear",
        "skew-hamiltonian",
        "skew-hamiltonian-bilinear",
        "skew-hamiltonian-sesquilinear",
        "persymmetric",
        "pseudo-symmetric[:p]",
        "pseudo-hermitian[:p]",
    ];

    pub fn all() -> Vec<Preset> {
        vec![
            Preset::Symmetric,
            Preset::SkewSymmetric,
            Preset::Hermitian,
            Preset::SkewHermitian,
            Preset::Hamiltonian,
            Preset::HamiltonianSesquilinear,
            Preset::SkewHamiltonian,
            Preset::SkewHamiltonianSesquilinear,
            Preset::Persymmetric,
            Preset::PseudoSymmetric(None),
            Preset::PseudoHermitian(None),
        ]
    }

    pub fn name(&self) -> String {
        match self {
            Preset::Symmetric => "symmetric".into(),
            Preset::SkewSymmetric => "skew-symmetric".into(),
            Preset::Hermitian => "hermitian".into(),
            Preset::SkewHermitian => "skew-hermitian".into(),
            Preset::Hamiltonian => "hamiltonian".into(),
            Preset::HamiltonianSesquilinear => "hamiltonian-sesquilinear".into(),
            Preset::SkewHamiltonian => "skew-hamiltonian".into(),
            Preset::SkewHamiltonianSesquilinear => "skew-hamiltonian-sesquilinear".into(),
            Preset::Persymmetric => "persymmetric".into(),
            Preset::PseudoSymmetric(None) => "pseudo-symmetric".into(),
            Preset::PseudoSymmetric(Some(p)) => format!("pseudo-symmetric:{p}"),
            Preset::PseudoHermitian(None) => "pseudo-hermitian".into(),
            Preset::PseudoHermitian(Some(p)) => format!("pseudo-hermitian:{p}"),
        }
    }

    /// Whether `build` needs an even dimension.
    pub fn needs_even(&self) -> bool {
        matches!(
            self,
            Preset::Hamiltonian
                | Preset::HamiltonianSesquilinear
                | Preset::SkewHamiltonian
                | Preset::SkewHamiltonianSesquilinear
        )
    }

    /// Build the spec for full dimension `n`.
    pub fn build(&self, n: usize) -> Result<StructureSpec> {
        if n == 0 {
            return Err(Error::BadStructureSpec("dimension must be positive".into()));
        }
        if self.needs_even() && !n.is_multiple_of(2) {
            return Err(Error::BadStructureSpec(format!(
                "{} requires an even dimension, got {n}",
                self.name()
            )));
        }
        let sig = |p: Option<usize>| -> Result<CMat> {
            let p = p.unwrap_or(n.div_ceil(2));
            if p > n {
                return Err(Error::BadStructureSpec(format!("signature p={p} exceeds n={n}")));
            }
            Ok(signature(n, p))
        };
        use Algebra::*;
        use Form::*;
        let (m, form, alg) = match *self {
            Preset::Symmetric => (eye(n), Bilinear, Jordan),
            Preset::SkewSymmetric => (eye(n), Bilinear, Lie),
            Preset::Hermitian => (eye(n), Sesquilinear, Jordan),
            Preset::SkewHermitian => (eye(n), Sesquilinear, Lie),
            Preset::Hamiltonian => (symplectic_j(n / 2), Bilinear, Lie),
            Preset::HamiltonianSesquilinear => (symplectic_j(n / 2), Sesquilinear, Lie),
            Preset::SkewHamiltonian => (symplectic_j(n / 2), Bilinear, Jordan),
            Preset::SkewHamiltonianSesquilinear => (symplectic_j(n / 2), Sesquilinear, Jordan),
            Preset::Persymmetric => (flip(n), Bilinear, Jordan),
            Preset::PseudoSymmetric(p) => (sig(p)?, Bilinear, Jordan),
            Preset::PseudoHermitian(p) => (sig(p)?, Sesquilinear, Jordan),
        };
        StructureSpec::new(m, form, alg)
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (base, arg) = match lower.split_once(':') {
            Some((b, a)) => (b.to_string(), Some(a.to_string())),
            None => (lower.clone(), None),
        };
        let parse_p = |a: Option<String>| -> Result<Option<usize>> {
            a.map(|v| v.parse::<usize>().map_err(|_| Error::UnknownPreset(s.to_string())))
                .transpose()
        };
        let p = match base.as_str() {
            "symmetric" => Preset::Symmetric,
            "skew-symmetric" => Preset::SkewSymmetric,
            "hermitian" => Preset::Hermitian,
            "skew-hermitian" => Preset::SkewHermitian,
            "hamiltonian" | "hamiltonian-bilinear" => Preset::Hamiltonian,
            "hamiltonian-sesquilinear" => Preset::HamiltonianSesquilinear,
            "skew-hamiltonian" | "skew-hamiltonian-bilinear" => Preset::SkewHamiltonian,
            "skew-hamiltonian-sesquilinear" => Preset::SkewHamiltonianSesquilinear,
            "persymmetric" => Preset::Persymmetric,
            "pseudo-symmetric" | "pseudosymmetric" => Preset::PseudoSymmetric(parse_p(arg.clone())?),
            "pseudo-hermitian" | "pseudohermitian" => Preset::PseudoHermitian(parse_p(arg.clone())?),
            _ => return Err(Error::UnknownPreset(s.to_string())),
        };
        if arg.is_some() && !matches!(p, Preset::PseudoSymmetric(_) | Preset::PseudoHermitian(_)) {
            return Err(Error::UnknownPreset(s.to_string()));
        }
        Ok(p)
    }
}

/// Random unitary scalar-product matrix of the requested form and parity.
///
/// Bilinear: `QQ^T` (symmetric) or `QJQ^T` (skew, even `n`). Sesquilinear:
/// `QΣQ^H` or `iQΣQ^H` with a random signature `Σ`. With `real = true` the
/// factor `Q` is real orthogonal.
pub fn random_scalar_product(n: usize, form: Form, parity: Parity, real: bool, seed: u64) -> Result<CMat> {
    let mut rng = linalg::rng(seed);
    let q = if real { linalg::random_orthogonal(n, &mut rng) } else { linalg::random_unitary(n, &mut rng) };
    match (form, parity) {
        (Form::Bilinear, Parity::Symmetric) => {
            if real {
                let p = (seed as usize % n) + 1;
                Ok(&q * signature(n, p) * q.transpose())
            } else {
                Ok(&q * q.transpose())
            }
        }
        (Form::Bilinear, Parity::Skew) => {
            if !n.is_multiple_of(2) {
                return Err(Error::BadStructureSpec("skew-symmetric unitary M needs even n".into()));
            }
            Ok(&q * symplectic_j(n / 2) * q.transpose())
        }
        (Form::Sesquilinear, par) => {
            let p = (seed as usize % n) + 1;
            let h = &q * signature(n, p) * q.adjoint();
            let h = (&h + h.adjoint()) * c(0.5);
            Ok(match par {
                Parity::Symmetric => h,
                Parity::Skew => h * C64::new(0.0, 1.0),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real_rows;

    fn hamiltonian2() -> StructureSpec {
        StructureSpec::hamiltonian(1).unwrap()
    }

    #[test]
    fn adjoint_of_identity_is_identity() {
        for p in Preset::all() {
            let spec = p.build(4).unwrap();
            let a = spec.adjoint(&eye(4)).unwrap();
            assert!((a - eye(4)).norm() < 1e-15, "{}", p.name());
        }
    }

    #[test]
    fn euclidean_adjoint_is_conjugate_transpose() {
        let spec = Preset::Hermitian.build(3).unwrap();
        let a = linalg::random_complex(3, 3, &mut linalg::rng(1));
        assert_eq!(spec.adjoint(&a).unwrap(), a.adjoint());
    }

    #[test]
    fn hamiltonian_adjoint_example() {
        let spec = hamiltonian2();
        let a = from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let adj = spec.adjoint(&a).unwrap();
        assert!((adj - from_real_rows(&[&[0.0, 0.0], &[-1.0, 0.0]])).norm() < 1e-15);
        // J·A symmetric
        let ja = spec.m() * &a;
        assert!((ja.transpose() - &ja).norm() < 1e-15);
        assert!(spec.is_member(&a, &ToleranceProfile::default()).unwrap().member);
    }

    #[test]
    fn identity_membership() {
        let tol = ToleranceProfile::default();
        let herm = Preset::Hermitian.build(3).unwrap();
        assert!(herm.is_member(&eye(3), &tol).unwrap().member);
        let skew = Preset::SkewHermitian.build(3).unwrap();
        let m = skew.is_member(&eye(3), &tol).unwrap();
        assert!(!m.member);
        assert!((m.defect - 2.0 * 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn prototype_table() {
        assert_eq!(Preset::Symmetric.build(2).unwrap().prototype_class(), PrototypeClass::Sym);
        assert_eq!(Preset::SkewSymmetric.build(2).unwrap().prototype_class(), PrototypeClass::SkewSym);
        assert_eq!(hamiltonian2().prototype_class(), PrototypeClass::Sym);
        assert_eq!(Preset::SkewHamiltonian.build(2).unwrap().prototype_class(), PrototypeClass::SkewSym);
        assert_eq!(Preset::Hermitian.build(2).unwrap().prototype_class(), PrototypeClass::Herm);
        assert_eq!(Preset::SkewHermitian.build(2).unwrap().prototype_class(), PrototypeClass::SkewHerm);
        assert_eq!(Preset::HamiltonianSesquilinear.build(2).unwrap().prototype_class(), PrototypeClass::Herm);
        assert_eq!(
            Preset::SkewHamiltonianSesquilinear.build(2).unwrap().prototype_class(),
            PrototypeClass::SkewHerm
        );
    }

    #[test]
    fn project_examples() {
        assert_eq!(PrototypeClass::SkewHerm.project(&eye(2)), CMat::zeros(2, 2));
        let z = from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert_eq!(PrototypeClass::Sym.project(&z), from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let g = linalg::random_complex(4, 4, &mut linalg::rng(5));
        let once = PrototypeClass::Herm.project(&g);
        assert_eq!(PrototypeClass::Herm.project(&once), once);
    }

    #[test]
    fn random_member_is_deterministic_and_structured() {
        let tol = ToleranceProfile { membership_rtol: 1e-13, ..Default::default() };
        for p in Preset::all() {
            let spec = p.build(6).unwrap();
            assert_eq!(spec.random_member(42), spec.random_member(42));
            for s in 0..100 {
                assert!(spec.is_member(&spec.random_member(s), &tol).unwrap().member);
            }
        }
    }

    #[test]
    fn hamiltonian_sample_has_zero_trace() {
        let spec = StructureSpec::hamiltonian(3).unwrap();
        for s in 0..10 {
            assert!(spec.random_member(s).trace().norm() < 1e-13);
        }
    }

    #[test]
    fn presets() {
        let h = Preset::Hermitian.build(3).unwrap();
        assert_eq!(h.m(), &eye(3));
        assert_eq!((h.form(), h.algebra()), (Form::Sesquilinear, Algebra::Jordan));
        let ham = StructureSpec::hamiltonian(1).unwrap();
        assert_eq!(ham.m(), &from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]));
        let per = Preset::Persymmetric.build(3).unwrap();
        assert_eq!(per.m(), &flip(3));
        // persymmetric: flip·A symmetric
        let a = per.random_member(3);
        let ra = flip(3) * &a;
        assert!((ra.transpose() - ra).norm() < 1e-14);
        assert!(Preset::Hamiltonian.build(3).is_err());
        assert!("nope".parse::<Preset>().is_err());
        assert_eq!("pseudo-hermitian:1".parse::<Preset>().unwrap(), Preset::PseudoHermitian(Some(1)));
        assert_eq!("hamiltonian-bilinear".parse::<Preset>().unwrap(), Preset::Hamiltonian);
    }

    #[test]
    fn rejects_bad_m() {
        let m = from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]);
        assert!(StructureSpec::new(m, Form::Bilinear, Algebra::Jordan).is_err());
        // unitary but neither symmetric nor skew
        let m = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]) * C64::new(0.0, 1.0);
        let rot = from_real_rows(&[&[0.6, -0.8], &[0.8, 0.6]]);
        assert!(StructureSpec::new(rot, Form::Bilinear, Algebra::Jordan).is_err());
        assert!(StructureSpec::new(m, Form::Bilinear, Algebra::Jordan).is_ok());
    }

    #[test]
    fn random_scalar_products_are_valid() {
        for (form, par) in [
            (Form::Bilinear, Parity::Symmetric),
            (Form::Bilinear, Parity::Skew),
            (Form::Sesquilinear, Parity::Symmetric),
            (Form::Sesquilinear, Parity::Skew),
        ] {
            for real in [false, true] {
                let m = random_scalar_product(4, form, par, real, 9).unwrap();
                let spec = StructureSpec::new(m, form, Algebra::Jordan).unwrap();
                assert_eq!(spec.m_parity(), par);
            }
        }
    }
}
