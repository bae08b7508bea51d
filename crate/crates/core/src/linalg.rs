//! Small dense helpers shared by the solver modules.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{CMat, C64};

/// Transpose flavor: `T` for bilinear forms, `H` for sesquilinear forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Star {
    T,
    H,
}

impl Star {
    pub fn apply(self, a: &CMat) -> CMat {
        match self {
            Star::T => a.transpose(),
            Star::H => a.adjoint(),
        }
    }
}

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub const I_UNIT: C64 = C64 { re: 0.0, im: 1.0 };

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn fro(a: &CMat) -> f64 {
    a.norm()
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(a: &CMat) -> f64 {
    thin_svd(a).1.first().copied().unwrap_or(0.0)
}

/// Smallest singular value of a square matrix.
pub fn sigma_min(a: &CMat) -> f64 {
    thin_svd(a).1.last().copied().unwrap_or(0.0)
}

pub fn from_real(a: &DMatrix<f64>) -> CMat {
    a.map(c)
}

pub fn max_imag(a: &CMat) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.im.abs()))
}

/// Build a complex matrix from row-major nested `(re, im)` data.
pub fn from_rows(rows: &[&[(f64, f64)]]) -> CMat {
    let n = rows.len();
    let p = if n == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(n, p, |i, j| C64::new(rows[i][j].0, rows[i][j].1))
}

/// Build a real-valued complex matrix from row-major data.
pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let p = if n == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(n, p, |i, j| c(rows[i][j]))
}

/// Unit basis vector `e_k` of length `n` as a column matrix.
pub fn unit(n: usize, k: usize) -> CMat {
    let mut e = CMat::zeros(n, 1);
    e[(k, 0)] = c(1.0);
    e
}

/// Complete Householder QR of `a` (n×k). Returns the n×n unitary whose first
/// `rank(a)` columns span `range(a)` when `a` has full column rank.
pub fn householder_unitary(a: &CMat) -> CMat {
    let n = a.nrows();
    let k = a.ncols().min(n);
    let mut r = a.clone();
    let mut w = eye(n);
    for j in 0..k {
        let x = r.view((j, j), (n - j, 1)).clone_owned();
        let xnorm = x.norm();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = x[(0, 0)];
        let phase = if x0.norm() == 0.0 { c(1.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[(0, 0)] -= alpha;
        let vnorm2 = v.norm_squared();
        if vnorm2 == 0.0 {
            continue;
        }
        // R[j.., j..] <- (I - 2 v v^H / v^H v) R[j.., j..]
        let mut block = r.view_mut((j, j), (n - j, r.ncols() - j));
        let proj = v.adjoint() * &block;
        block -= &v * proj * c(2.0 / vnorm2);
        // W[:, j..] <- W[:, j..] (I - 2 v v^H / v^H v)
        let mut wb = w.view_mut((0, j), (n, n - j));
        let wv = &wb * &v;
        wb -= wv * v.adjoint() * c(2.0 / vnorm2);
    }
    w
}

/// Orthonormal basis of the orthogonal complement of `range(q)` for an
/// n×k matrix `q` with orthonormal columns. Returns n×(n−k).
pub fn orthogonal_complement(q: &CMat) -> CMat {
    let n = q.nrows();
    let k = q.ncols();
    if k == 0 {
        return eye(n);
    }
    let w = householder_unitary(q);
    w.columns(k, n - k).clone_owned()
}

/// Full SVD `a = U diag(s) V^H` with square unitary `U` (n×n) and `V` (p×p);
/// singular values descending, `min(n, p)` of them.
pub fn full_svd(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (u, s, v) = thin_svd(a);
    (complete_columns(&u), s, complete_columns(&v))
}

const SVD_CHECK_RTOL: f64 = 1e-12;

/// Thin SVD `a = U diag(s) V^H` with `min(n, p)` descending singular values.
///
/// The LAPACK-style bidiagonal QR in nalgebra occasionally returns factors
/// that do not reproduce rank-deficient inputs, so the result is verified
/// and recomputed by one-sided Jacobi when the check fails.
pub fn thin_svd(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (n, p) = a.shape();
    if n == 0 || p == 0 {
        return (CMat::zeros(n, 0), Vec::new(), CMat::zeros(p, 0));
    }
    if let Some(out) = checked_bidiagonal_svd(a) {
        return out;
    }
    if let Some((u, s, v)) = checked_bidiagonal_svd(&a.adjoint()) {
        return (v, s, u);
    }
    if n >= p {
        jacobi_svd(a)
    } else {
        let (u, s, v) = jacobi_svd(&a.adjoint());
        (v, s, u)
    }
}

fn sorted_factors(u: &CMat, s: &[f64], v: &CMat) -> (CMat, Vec<f64>, CMat) {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let vals = idx.iter().map(|&i| s[i]).collect();
    let us = CMat::from_fn(u.nrows(), idx.len(), |r, k| u[(r, idx[k])]);
    let vs = CMat::from_fn(v.nrows(), idx.len(), |r, k| v[(r, idx[k])]);
    (us, vals, vs)
}

fn factors_ok(a: &CMat, u: &CMat, s: &[f64], v: &CMat) -> bool {
    let k = s.len();
    let scale = a.norm().max(f64::MIN_POSITIVE) * (k as f64).sqrt();
    let mut us = u.clone();
    for (j, &sj) in s.iter().enumerate() {
        us.column_mut(j).scale_mut(sj);
    }
    let recon = (&us * v.adjoint() - a).norm() <= SVD_CHECK_RTOL * scale * 10.0;
    let orth = |q: &CMat| (q.adjoint() * q - eye(k)).norm() <= SVD_CHECK_RTOL * 10.0 * k as f64;
    recon && orth(u) && orth(v) && s.iter().all(|x| x.is_finite() && *x >= 0.0)
}

fn checked_bidiagonal_svd(a: &CMat) -> Option<(CMat, Vec<f64>, CMat)> {
    let svd = a.clone().try_svd(true, true, f64::EPSILON, 0)?;
    let u = svd.u?;
    let v = svd.v_t?.adjoint();
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    factors_ok(a, &u, &s, &v).then(|| sorted_factors(&u, &s, &v))
}

/// One-sided (Hestenes) Jacobi SVD for `n ≥ p`.
fn jacobi_svd(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let p = a.ncols();
    let mut w = a.clone();
    let mut v = eye(p);
    for _ in 0..100 {
        let mut rotated = false;
        for j in 0..p {
            for k in j + 1..p {
                let alpha = w.column(j).norm_squared();
                let beta = w.column(k).norm_squared();
                let gamma = w.column(j).dotc(&w.column(k));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut w, &mut v] {
                    for r in 0..m.nrows() {
                        let xj = m[(r, j)];
                        let xk = m[(r, k)] * phase;
                        m[(r, j)] = xj * cs - xk * sn;
                        m[(r, k)] = xj * sn + xk * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..p).map(|j| w.column(j).norm()).collect();
    let (mut u, s, v) = sorted_factors(&w, &s, &v);
    let smax = s.first().copied().unwrap_or(0.0);
    let live = s.iter().filter(|&&x| x > smax * f64::EPSILON * p as f64 && x > 0.0).count();
    for (j, &sj) in s.iter().enumerate().take(live) {
        let inv = c(1.0 / sj);
        u.column_mut(j).apply(|x| *x *= inv);
    }
    if live < p {
        let basis = complete_columns(&u.columns(0, live).clone_owned());
        u.columns_mut(live, p - live).copy_from(&basis.columns(live, p - live));
    }
    (u, s, v)
}

fn complete_columns(q: &CMat) -> CMat {
    let (n, k) = q.shape();
    if k >= n {
        return q.columns(0, n).clone_owned();
    }
    let comp = orthogonal_complement(q);
    let mut out = CMat::zeros(n, n);
    out.columns_mut(0, k).copy_from(q);
    out.columns_mut(k, n - k).copy_from(&comp);
    out
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = (a + a.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, cix| eig.eigenvectors[(r, idx[cix])]);
    (vals, vecs)
}

/// Eigenvalues of a square matrix from its complex Schur form.
pub fn eigenvalues(a: &CMat) -> Vec<C64> {
    if a.is_empty() {
        return Vec::new();
    }
    let schur = a.clone().schur();
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Row-major `[re, im]` pairs, the JSON layout used for inline matrices.
pub fn to_pairs(a: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect())
        .collect()
}

pub fn serialize_cmat<S: serde::Serializer>(a: &CMat, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&to_pairs(a), s)
}

/// Seeded generator shared by all sampling helpers.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of independent standard complex Gaussian entries
/// (real and imaginary parts each with variance 1/2).
pub fn random_complex(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(s * re, s * im)
    })
}

/// Matrix of independent standard real Gaussian entries.
pub fn random_real(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        c(re)
    })
}

/// Haar-like random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = random_complex(n, n, rng);
    householder_unitary(&g)
}

/// Random real orthogonal matrix.
pub fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = random_real(n, n, rng);
    householder_unitary(&g)
}
