//! Dense decomposition kernels: SVD with numerical rank, Moore–Penrose
//! pseudoinverse, Takagi factorizations, PSD square roots and the
//! Davis–Kahan–Weinberger norm-preserving dilation.

use nalgebra::DVector;

use crate::linalg::{self, c, eye, full_svd, hermitian_eig};
use crate::{CMat, Error, Result, C64};

/// Full SVD `A = U Σ V^H` with numerical rank.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
    pub rank: usize,
}

impl SvdResult {
    pub fn new(a: &CMat, rank_rtol: f64) -> Self {
        let (u, sigma, v) = full_svd(a);
        let s1 = sigma.first().copied().unwrap_or(0.0);
        let rank = sigma.iter().filter(|&&s| s > rank_rtol * s1).count();
        SvdResult { u, sigma, v, rank }
    }

    /// First `rank` left singular vectors.
    pub fn u1(&self) -> CMat {
        self.u.columns(0, self.rank).clone_owned()
    }

    /// Remaining left singular vectors.
    pub fn u2(&self) -> CMat {
        let n = self.u.ncols();
        self.u.columns(self.rank, n - self.rank).clone_owned()
    }

    pub fn v1(&self) -> CMat {
        self.v.columns(0, self.rank).clone_owned()
    }

    /// Truncated pseudoinverse `V₁ Σ₁⁻¹ U₁^H`.
    pub fn pinv(&self) -> CMat {
        let r = self.rank;
        let mut vs = self.v1();
        for j in 0..r {
            let inv = c(1.0 / self.sigma[j]);
            vs.column_mut(j).apply(|x| *x *= inv);
        }
        vs * self.u1().adjoint()
    }
}

/// Moore–Penrose pseudoinverse with rank truncation at `rank_rtol·σ₁`.
pub fn pinv(a: &CMat, rank_rtol: f64) -> (CMat, usize) {
    let svd = SvdResult::new(a, rank_rtol);
    (svd.pinv(), svd.rank)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TakagiKind {
    Symmetric,
    SkewSymmetric,
}

/// Takagi factorization `A = U Σ U^T` (symmetric) or
/// `A = U diag(d₁, …, d_m) U^T` with `d_j = [[0, s_j], [−s_j, 0]]` (skew).
///
/// For the skew case `values` holds the `s_j` (one per 2×2 block); an odd
/// dimension leaves a trailing zero outside the blocks.
#[derive(Debug, Clone)]
pub struct TakagiResult {
    pub u: CMat,
    pub values: Vec<f64>,
    pub kind: TakagiKind,
}

impl TakagiResult {
    /// The middle factor: `diag(values)` or the block diagonal of `d_j`.
    pub fn middle(&self) -> CMat {
        let n = self.u.nrows();
        let mut d = CMat::zeros(n, n);
        match self.kind {
            TakagiKind::Symmetric => {
                for (i, &s) in self.values.iter().enumerate() {
                    d[(i, i)] = c(s);
                }
            }
            TakagiKind::SkewSymmetric => {
                for (j, &s) in self.values.iter().enumerate() {
                    d[(2 * j, 2 * j + 1)] = c(s);
                    d[(2 * j + 1, 2 * j)] = c(-s);
                }
            }
        }
        d
    }

    pub fn reconstruct(&self) -> CMat {
        &self.u * self.middle() * self.u.transpose()
    }

    /// Magnitudes as a singular-value list (skew values appear twice).
    pub fn magnitudes(&self) -> Vec<f64> {
        match self.kind {
            TakagiKind::Symmetric => self.values.clone(),
            TakagiKind::SkewSymmetric => {
                let mut out: Vec<f64> = self.values.iter().flat_map(|&s| [s, s]).collect();
                out.resize(self.u.nrows(), 0.0);
                out
            }
        }
    }
}

const STRUCTURE_RTOL: f64 = 1e-10;

fn top_singular(cm: &CMat) -> (f64, CMat) {
    let (_, s, v) = linalg::thin_svd(cm);
    (s[0], v.columns(0, 1).clone_owned())
}

fn normalized(v: &CMat) -> CMat {
    v / c(v.norm())
}

/// Symmetric Takagi factorization by greedy deflation on the leading
/// singular pair.
pub fn takagi_sym(a: &CMat) -> Result<TakagiResult> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::ShapeMismatch("takagi_sym needs a square matrix".into()));
    }
    let scale = a.norm();
    let defect = (a - a.transpose()).norm();
    if defect > STRUCTURE_RTOL * scale.max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::NotStructured { defect });
    }
    let sym = (a + a.transpose()) * c(0.5);
    let mut u = CMat::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    // basis of the not-yet-factored subspace
    let mut q = eye(n);
    let mut cur = sym;
    for k in 0..n {
        let m = cur.nrows();
        let (s, v) = top_singular(&cur);
        if s == 0.0 || s <= scale * 1e-300 {
            u.columns_mut(k, m).copy_from(&q);
            values.extend(std::iter::repeat_n(0.0, m));
            break;
        }
        let w = &cur * &v / c(s);
        let vb = v.conjugate();
        let plus = &vb + &w;
        let minus = (&vb - &w) * C64::new(0.0, 1.0);
        let p = if plus.norm() >= minus.norm() { normalized(&plus) } else { normalized(&minus) };
        u.column_mut(k).copy_from(&(&q * &p));
        values.push(s);
        if m == 1 {
            break;
        }
        let comp = linalg::orthogonal_complement(&p);
        cur = comp.adjoint() * &cur * comp.conjugate();
        cur = (&cur + cur.transpose()) * c(0.5);
        q *= comp;
    }
    Ok(TakagiResult { u, values, kind: TakagiKind::Symmetric })
}

/// Skew-symmetric Takagi factorization by greedy deflation: each step takes
/// the leading right singular vector `v`, pairs it with `A v / s`, and
/// deflates the resulting 2-dimensional block.
pub fn takagi_skew(a: &CMat) -> Result<TakagiResult> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::ShapeMismatch("takagi_skew needs a square matrix".into()));
    }
    let scale = a.norm();
    let defect = (a + a.transpose()).norm();
    if defect > STRUCTURE_RTOL * scale.max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::NotStructured { defect });
    }
    let skew = (a - a.transpose()) * c(0.5);
    let mut u = CMat::zeros(n, n);
    let mut values = Vec::with_capacity(n / 2);
    let mut q = eye(n);
    let mut cur = skew;
    let mut k = 0;
    while k < n {
        let m = cur.nrows();
        if m < 2 {
            u.columns_mut(k, m).copy_from(&q);
            break;
        }
        let (s, v) = top_singular(&cur);
        if s == 0.0 || s <= scale * 1e-300 {
            u.columns_mut(k, m).copy_from(&q);
            values.extend(std::iter::repeat_n(0.0, m / 2));
            break;
        }
        let p1 = v.conjugate();
        let mut p2 = -(&cur * &v) / c(s);
        // p1 ⟂ p2 holds exactly in theory; re-orthogonalize against round-off
        let proj = (p1.adjoint() * &p2)[(0, 0)];
        p2 -= &p1 * proj;
        let p2 = normalized(&p2);
        let mut pair = CMat::zeros(m, 2);
        pair.column_mut(0).copy_from(&p1);
        pair.column_mut(1).copy_from(&p2);
        u.columns_mut(k, 2).copy_from(&(&q * &pair));
        values.push(s);
        k += 2;
        if m == 2 {
            break;
        }
        let comp = linalg::orthogonal_complement(&pair);
        cur = comp.adjoint() * &cur * comp.conjugate();
        cur = (&cur - cur.transpose()) * c(0.5);
        q *= comp;
    }
    Ok(TakagiResult { u, values, kind: TakagiKind::SkewSymmetric })
}

/// Hermitian PSD square root; eigenvalues in `[−10·ε·‖A‖₂, 0]` are clamped.
pub fn psd_sqrt(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::ShapeMismatch("psd_sqrt needs a square matrix".into()));
    }
    let herm_defect = (a - a.adjoint()).norm();
    if herm_defect > STRUCTURE_RTOL * a.norm() {
        return Err(Error::NotStructured { defect: herm_defect });
    }
    let (vals, vecs) = hermitian_eig(a);
    let norm2 = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = -10.0 * f64::EPSILON * norm2;
    if let Some(&lo) = vals.first() {
        if lo < floor {
            return Err(Error::InvalidInput(format!("matrix is indefinite (eigenvalue {lo:.3e})")));
        }
    }
    Ok(spectral_fn(&vals, &vecs, |x| if x <= -floor { 0.0 } else { x.sqrt() }))
}

pub(crate) fn spectral_fn(vals: &[f64], vecs: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let d = DVector::from_iterator(vals.len(), vals.iter().map(|&x| c(f(x))));
    let scaled = CMat::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, j)] * d[j]);
    scaled * vecs.adjoint()
}

/// Square root of a Hermitian matrix that should be PSD, clamping any
/// negative round-off.
pub(crate) fn psd_sqrt_clamped(a: &CMat) -> CMat {
    let (vals, vecs) = hermitian_eig(a);
    let floor = 10.0 * f64::EPSILON * vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    spectral_fn(&vals, &vecs, |x| if x <= floor { 0.0 } else { x.sqrt() })
}

/// Pseudoinverse square root `G^{−1/2}` of a Hermitian PSD matrix; eigenvalues
/// at or below `threshold` are treated as zero.
pub(crate) fn psd_inv_sqrt(g: &CMat, threshold: f64) -> CMat {
    let (vals, vecs) = hermitian_eig(g);
    spectral_fn(&vals, &vecs, |x| if x > threshold { 1.0 / x.sqrt() } else { 0.0 })
}

/// Relative truncation for singular `μ²I − A^H A`.
pub const DKW_SINGULAR_RTOL: f64 = 1e-12;
const CONTRACTION_TOL: f64 = 1e-12;

/// Completes `[[A, C], [B, D]]` to spectral norm at most `μ`:
/// `D = −K A^H L + μ (I − K K^H)^{1/2} Z (I − L^H L)^{1/2}` with
/// `K^H = (μ²I − A^H A)^{−1/2} B^H` and `L = (μ²I − A A^H)^{−1/2} C`.
pub fn dkw_complete(a: &CMat, b: &CMat, cm: &CMat, mu: f64, z: &CMat) -> Result<CMat> {
    let (m, k) = a.shape();
    let q = b.nrows();
    let s = cm.ncols();
    if b.ncols() != k || cm.nrows() != m || z.shape() != (q, s) {
        return Err(Error::ShapeMismatch(format!(
            "dkw_complete: A {m}x{k}, B {}x{}, C {}x{}, Z {}x{}",
            b.nrows(),
            b.ncols(),
            cm.nrows(),
            cm.ncols(),
            z.nrows(),
            z.ncols()
        )));
    }
    if mu.is_nan() || mu < 0.0 {
        return Err(Error::InvalidInput("mu must be nonnegative".into()));
    }
    let mut col = CMat::zeros(m + q, k);
    col.rows_mut(0, m).copy_from(a);
    col.rows_mut(m, q).copy_from(b);
    let mut row = CMat::zeros(m, k + s);
    row.columns_mut(0, k).copy_from(a);
    row.columns_mut(k, s).copy_from(cm);
    let col_norm = linalg::spectral_norm(&col);
    let row_norm = linalg::spectral_norm(&row);
    let bound = col_norm.max(row_norm);
    if mu < bound * (1.0 - CONTRACTION_TOL) {
        return Err(Error::MuTooSmall { mu, col_norm, row_norm });
    }
    let znorm = linalg::spectral_norm(z);
    if znorm > 1.0 + CONTRACTION_TOL {
        return Err(Error::NotContraction { norm: znorm });
    }
    let mu2 = mu * mu;
    let thresh = mu2 * DKW_SINGULAR_RTOL;
    let gk = eye(k) * c(mu2) - a.adjoint() * a;
    let gm = eye(m) * c(mu2) - a * a.adjoint();
    let kmat = b * psd_inv_sqrt(&((&gk + gk.adjoint()) * c(0.5)), thresh);
    let lmat = psd_inv_sqrt(&((&gm + gm.adjoint()) * c(0.5)), thresh) * cm;
    let left = psd_sqrt_clamped(&(eye(q) - &kmat * kmat.adjoint()));
    let right = psd_sqrt_clamped(&(eye(s) - lmat.adjoint() * &lmat));
    Ok(-(&kmat * a.adjoint() * &lmat) + left * z * right * c(mu))
}
