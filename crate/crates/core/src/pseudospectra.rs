//! Structured eigenvalue backward errors `η^S(λ, A)` and grids of structured
//! pseudospectra.
//!
//! For the cases covered by the equality theorems the structured value equals
//! `σ_min(A − λI)` and a minimal structured perturbation is built explicitly.
//! Sesquilinear structures at other points are solved exactly through the
//! convexity of the joint numerical range: with `D = (A−λI)^H(A−λI)` and the
//! Hermitian form `H` encoding the solvability constraint `x^H H x = 0`,
//! `η² = max_t λ_min(D + tH)`. The remaining bilinear case (symmetric `M`,
//! Lie algebra, `λ ≠ 0`) is handled by a multi-start local search whose
//! result is an upper bound.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::backward::eigenpair_backward_error;
use crate::kernels::{takagi_skew, takagi_sym};
use crate::linalg::{self, c, eye, hermitian_eig, I_UNIT};
use crate::mapping::{solve_spectral, MappingProblem};
use crate::structure::{Algebra, Form, Parity, Preset, StructureSpec, ToleranceProfile};
use crate::{CMat, Error, Result, C64};

/// How a value of `η^S` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EtaKind {
    /// Equality theorem: `η^S = σ_min(A − λI)`.
    Theorem,
    /// Exact value outside the theorem cases.
    Exact,
    /// Best value found by local search; `η^S` is at most this.
    UpperBound,
    /// No structured perturbation has `λ` as an eigenvalue.
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct EtaResult {
    pub lambda: C64,
    /// `+∞` when infeasible.
    pub eta: f64,
    pub eta_unstructured: f64,
    /// Whether an equality theorem applies at `(spec, λ)`.
    pub equality: bool,
    pub kind: EtaKind,
    pub certificate: Option<CMat>,
}

/// `σ_min(A − λI)`.
pub fn eta_unstructured(a: &CMat, lambda: C64) -> f64 {
    linalg::sigma_min(&shifted(a, lambda))
}

fn shifted(a: &CMat, lambda: C64) -> CMat {
    a - eye(a.nrows()) * lambda
}

/// Seed used for the local-search restarts when none is given.
pub const DEFAULT_SEED: u64 = 0;

pub fn eta_structured(a: &CMat, lambda: C64, spec: &StructureSpec, tol: &ToleranceProfile) -> Result<EtaResult> {
    eta_structured_seeded(a, lambda, spec, tol, DEFAULT_SEED)
}

pub fn eta_structured_seeded(
    a: &CMat,
    lambda: C64,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
    seed: u64,
) -> Result<EtaResult> {
    let n = spec.n();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!("A must be {n}x{n}")));
    }
    if !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::InvalidInput("lambda must be finite".into()));
    }
    let defect = spec.defect(a)?;
    if defect > tol.membership_rtol * (1.0 + a.norm()) {
        return Err(Error::NotStructured { defect });
    }
    let eta_u = eta_unstructured(a, lambda);
    let m = spec.m();
    let theorem = |eta: f64, cert: CMat| EtaResult {
        lambda,
        eta,
        eta_unstructured: eta_u,
        equality: true,
        kind: EtaKind::Theorem,
        certificate: Some(cert),
    };
    match (spec.form(), spec.m_parity(), spec.algebra()) {
        (Form::Bilinear, Parity::Symmetric, Algebra::Jordan) => {
            let t = takagi_sym(&(m * shifted(a, lambda)))?;
            let eta = *t.values.last().unwrap_or(&0.0);
            let u = t.u.columns(n - 1, 1).clone_owned();
            Ok(theorem(eta, spec.m_inv() * &u * u.transpose() * c(-eta)))
        }
        (Form::Bilinear, Parity::Skew, Algebra::Jordan) => {
            let t = takagi_skew(&(m * shifted(a, lambda)))?;
            if n % 2 == 1 || t.values.is_empty() {
                return Ok(theorem(0.0, CMat::zeros(n, n)));
            }
            let s = *t.values.last().unwrap();
            let u = t.u.columns(n - 2, 2).clone_owned();
            let block = CMat::from_row_slice(2, 2, &[c(0.0), c(s), c(-s), c(0.0)]);
            Ok(theorem(s, -(spec.m_inv() * &u * block * u.transpose())))
        }
        (Form::Bilinear, Parity::Skew, Algebra::Lie) => {
            let (u, s, v) = linalg::full_svd(&(m * shifted(a, lambda)));
            let eta = *s.last().unwrap_or(&0.0);
            let vn = v.columns(n - 1, 1).clone_owned();
            let un = u.columns(n - 1, 1).clone_owned();
            let e = unit_symmetric_map(&vn, &un)?;
            Ok(theorem(eta, spec.m_inv() * e * c(-eta)))
        }
        (Form::Bilinear, Parity::Symmetric, Algebra::Lie) => isotropic_search(a, lambda, spec, tol, eta_u, seed),
        (Form::Sesquilinear, _, alg) => {
            let on_axis = match alg {
                Algebra::Jordan => lambda.im == 0.0,
                Algebra::Lie => lambda.re == 0.0,
            };
            if on_axis {
                let nm = m * shifted(a, lambda);
                // nm is Hermitian or skew-Hermitian; rotate to Hermitian
                let rot = if (&nm - nm.adjoint()).norm() <= (&nm + nm.adjoint()).norm() { c(1.0) } else { -I_UNIT };
                let (vals, vecs) = hermitian_eig(&(&nm * rot));
                let k = (0..n).min_by(|&i, &j| vals[i].abs().total_cmp(&vals[j].abs())).unwrap_or(0);
                let nu = c(vals[k]) / rot;
                let w = vecs.columns(k, 1).clone_owned();
                Ok(theorem(vals[k].abs(), spec.m_inv() * &w * w.adjoint() * (-nu)))
            } else {
                sesquilinear_dual(a, lambda, spec, tol, eta_u)
            }
        }
    }
}

/// Symmetric `E` with `Ev = u` and `‖E‖₂ = 1` for unit vectors `v`, `u`.
fn unit_symmetric_map(v: &CMat, u: &CMat) -> Result<CMat> {
    let n = v.nrows();
    let spec = Preset::Symmetric.build(n)?;
    let prob = MappingProblem::new(v.clone(), u.clone(), spec, ToleranceProfile::default())?;
    Ok(solve_spectral(&prob, None)?.a)
}

fn from_eigenpair(
    a: &CMat,
    x: &CMat,
    lambda: C64,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
    eta_u: f64,
    kind: EtaKind,
) -> EtaResult {
    let eta = (a * x - x * lambda).norm() / x.norm();
    let certificate = eigenpair_backward_error(a, x, lambda, spec, tol)
        .ok()
        .map(|r| r.perturbation_spectral);
    EtaResult {
        lambda,
        eta,
        eta_unstructured: eta_u,
        equality: false,
        kind,
        certificate,
    }
}

fn infeasible(lambda: C64, eta_u: f64) -> EtaResult {
    EtaResult {
        lambda,
        eta: f64::INFINITY,
        eta_unstructured: eta_u,
        equality: false,
        kind: EtaKind::Infeasible,
        certificate: None,
    }
}

const DUAL_GAP_RTOL: f64 = 1e-8;

fn sesquilinear_dual(
    a: &CMat,
    lambda: C64,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
    eta_u: f64,
) -> Result<EtaResult> {
    let n = spec.n();
    let cm = shifted(a, lambda);
    let d = cm.adjoint() * &cm;
    let nm = -(spec.m() * &cm);
    // x^H M r must be real (Hermitian class) or imaginary (skew-Hermitian)
    let h = match spec.prototype_class().parity() {
        Parity::Symmetric => (&nm - nm.adjoint()) * (-I_UNIT * 0.5),
        Parity::Skew => (&nm + nm.adjoint()) * c(0.5),
    };
    let h = (&h + h.adjoint()) * c(0.5);
    let (hv, hvec) = hermitian_eig(&h);
    let scale = linalg::spectral_norm(a) + lambda.norm();
    let htol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let (hmin, hmax) = (hv[0], hv[n - 1]);
    if hmin > htol || hmax < -htol {
        return Ok(infeasible(lambda, eta_u));
    }
    if hmin >= -htol || hmax <= htol {
        // semidefinite constraint: feasible vectors form the kernel of H
        let idx: Vec<usize> = (0..n).filter(|&i| hv[i].abs() <= htol).collect();
        let k = CMat::from_fn(n, idx.len(), |r, j| hvec[(r, idx[j])]);
        let (_, yv) = hermitian_eig(&(k.adjoint() * &d * &k));
        let x = &k * yv.columns(0, 1);
        return Ok(from_eigenpair(a, &x, lambda, spec, tol, eta_u, EtaKind::Exact));
    }
    let lowest = |t: f64| -> (f64, CMat) {
        let (vals, vecs) = hermitian_eig(&(&d + &h * c(t)));
        (vals[0], vecs.columns(0, 1).clone_owned())
    };
    let g = |x: &CMat| (x.adjoint() * &h * x)[(0, 0)].re;
    let gtol = 1e-14 * scale;
    let (_, x0) = lowest(0.0);
    let g0 = g(&x0);
    if g0.abs() <= gtol {
        return Ok(from_eigenpair(a, &x0, lambda, spec, tol, eta_u, EtaKind::Exact));
    }
    // φ(t) = λ_min(D + tH) is concave with supergradient g(x_t)
    let dir = if g0 > 0.0 { 1.0 } else { -1.0 };
    let step0 = (linalg::spectral_norm(&d) / hmax.abs().max(hmin.abs())).max(1.0);
    let (mut t_pos, mut x_pos) = (0.0, x0.clone());
    let (mut t_neg, mut x_neg);
    let mut step = step0;
    loop {
        let t = dir * step;
        let (_, x) = lowest(t);
        let gx = g(&x);
        if gx * dir < 0.0 {
            t_neg = t;
            x_neg = x;
            break;
        }
        t_pos = t;
        x_pos = x;
        step *= 2.0;
        if step > step0 * 1e12 {
            return Ok(from_eigenpair(a, &x_pos, lambda, spec, tol, eta_u, EtaKind::UpperBound));
        }
    }
    // x_pos has g·dir ≥ 0 and x_neg has g·dir < 0; bisect on t
    for _ in 0..200 {
        let t = 0.5 * (t_pos + t_neg);
        if t == t_pos || t == t_neg {
            break;
        }
        let (_, x) = lowest(t);
        let gx = g(&x);
        if gx.abs() <= gtol {
            x_pos = x.clone();
            x_neg = x;
            break;
        }
        if gx * dir > 0.0 {
            t_pos = t;
            x_pos = x;
        } else {
            t_neg = t;
            x_neg = x;
        }
    }
    let x = combine_to_null(&x_pos, &x_neg, &h);
    let dual = lowest(0.5 * (t_pos + t_neg)).0.max(0.0).sqrt();
    let mut res = from_eigenpair(a, &x, lambda, spec, tol, eta_u, EtaKind::Exact);
    if res.eta - dual > DUAL_GAP_RTOL * res.eta.max(1.0) {
        res.kind = EtaKind::UpperBound;
    }
    Ok(res)
}

/// A unit vector in span{p, q} with `x^H H x = 0`, given `p^H H p` and
/// `q^H H q` of opposite signs.
fn combine_to_null(p: &CMat, q: &CMat, h: &CMat) -> CMat {
    let gp = (p.adjoint() * h * p)[(0, 0)].re;
    let gq = (q.adjoint() * h * q)[(0, 0)].re;
    if gp.abs() <= f64::EPSILON * gq.abs() || gp * gq >= 0.0 {
        return if gp.abs() <= gq.abs() { p.clone() } else { q.clone() };
    }
    let z = (p.adjoint() * h * q)[(0, 0)];
    // rotate q so that the cross term Re(e^{iφ} z) vanishes
    let phase = if z.norm() == 0.0 { c(1.0) } else { I_UNIT * z.conj() / z.norm() };
    let theta = (gp.abs() / gq.abs()).sqrt().atan();
    let x = p * c(theta.cos()) + q * phase * c(theta.sin());
    let nx = x.norm();
    if nx <= 1e-8 {
        return if gp.abs() <= gq.abs() { p.clone() } else { q.clone() };
    }
    x / c(nx)
}

const SEARCH_RESTARTS: usize = 8;
const SEARCH_MAX_ITERS: usize = 3000;

/// Symmetric `M`, Lie algebra: the solvability condition reads
/// `λ x^T M x = 0`. For `λ = 0` every `x` is admissible and the value is
/// `σ_min`; otherwise `x` ranges over the M-isotropic unit vectors.
fn isotropic_search(
    a: &CMat,
    lambda: C64,
    spec: &StructureSpec,
    tol: &ToleranceProfile,
    eta_u: f64,
    seed: u64,
) -> Result<EtaResult> {
    let n = spec.n();
    let cm = shifted(a, lambda);
    if lambda == c(0.0) {
        let (_, _, v) = linalg::full_svd(&cm);
        let x = v.columns(n - 1, 1).clone_owned();
        return Ok(from_eigenpair(a, &x, lambda, spec, tol, eta_u, EtaKind::Exact));
    }
    if n < 2 {
        return Ok(infeasible(lambda, eta_u));
    }
    // M = QQ^T, and x = Q̄y is isotropic iff y^T y = 0, i.e. y = (a + ib)/√2
    // with (a, b) a real orthonormal pair
    let t = takagi_sym(spec.m())?;
    let q = CMat::from_fn(n, n, |i, j| t.u[(i, j)] * t.values[j].sqrt());
    let qb = q.conjugate();
    let cq = &cm * &qb;
    let g = cq.adjoint() * &cq;
    let r = g.map(|z| z.re);
    let s = g.map(|z| z.im);
    let gscale = r.norm() + s.norm();

    let mut starts: Vec<DMatrix<f64>> = Vec::new();
    let (_, _, v) = linalg::full_svd(&cq);
    for k in [n - 1, n - 2] {
        let col = v.column(k);
        let re = DMatrix::from_fn(n, 1, |i, _| col[i].re);
        let im = DMatrix::from_fn(n, 1, |i, _| col[i].im);
        starts.push(DMatrix::from_fn(n, 2, |i, j| if j == 0 { re[(i, 0)] } else { im[(i, 0)] }));
    }
    let (vl, vs) = (v.column(n - 1), v.column(n - 2));
    starts.push(DMatrix::from_fn(n, 2, |i, j| if j == 0 { vl[i].re } else { vs[i].re }));
    let mut rng = linalg::rng(seed);
    for _ in 0..SEARCH_RESTARTS {
        let o = linalg::random_orthogonal(n, &mut rng);
        starts.push(DMatrix::from_fn(n, 2, |i, j| o[(i, j)].re));
    }

    let mut best: Option<(f64, DMatrix<f64>)> = None;
    for w0 in starts {
        let Some(w0) = orthonormalize_pair(&w0) else { continue };
        let (f, w) = stiefel_descent(&r, &s, w0, gscale);
        if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
            best = Some((f, w));
        }
    }
    let (_, w) = best.expect("at least one random start is full rank");
    let y = CMat::from_fn(n, 1, |i, _| C64::new(w[(i, 0)], w[(i, 1)]) * std::f64::consts::FRAC_1_SQRT_2);
    let x = &qb * y;
    let mut res = from_eigenpair(a, &x, lambda, spec, tol, eta_u, EtaKind::UpperBound);
    if res.eta <= eta_u * (1.0 + 1e-10) {
        res.kind = EtaKind::Exact;
    }
    Ok(res)
}

fn orthonormalize_pair(w: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let a = w.columns(0, 1).clone_owned();
    let na = a.norm();
    if na <= 1e-8 {
        return None;
    }
    let a = a / na;
    let b = w.column(1) - &a * a.dot(&w.column(1));
    let nb = b.norm();
    if nb <= 1e-8 {
        return None;
    }
    let b = b / nb;
    Some(DMatrix::from_fn(w.nrows(), 2, |i, j| if j == 0 { a[i] } else { b[i] }))
}

/// `f(a, b) = ½(aᵀRa + bᵀRb) − aᵀSb` on real orthonormal pairs.
fn pair_objective(r: &DMatrix<f64>, s: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    let a = w.column(0);
    let b = w.column(1);
    0.5 * (a.dot(&(r * a)) + b.dot(&(r * b))) - a.dot(&(s * b))
}

fn pair_gradient(r: &DMatrix<f64>, s: &DMatrix<f64>, w: &DMatrix<f64>) -> DMatrix<f64> {
    let a = w.column(0);
    let b = w.column(1);
    let ga = r * a - s * b;
    let gb = r * b + s * a;
    let g = DMatrix::from_fn(w.nrows(), 2, |i, j| if j == 0 { ga[i] } else { gb[i] });
    let wtg = w.transpose() * &g;
    let sym = (&wtg + wtg.transpose()) * 0.5;
    g - w * sym
}

/// Riemannian gradient descent with Armijo backtracking and a
/// Gram–Schmidt retraction.
fn stiefel_descent(r: &DMatrix<f64>, s: &DMatrix<f64>, mut w: DMatrix<f64>, scale: f64) -> (f64, DMatrix<f64>) {
    let mut f = pair_objective(r, s, &w);
    let mut step = 1.0 / scale.max(f64::MIN_POSITIVE);
    for _ in 0..SEARCH_MAX_ITERS {
        let g = pair_gradient(r, s, &w);
        let gn2 = g.norm_squared();
        if gn2.sqrt() <= 1e-13 * scale {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let Some(cand) = orthonormalize_pair(&(&w - &g * step)) else {
                step *= 0.5;
                continue;
            };
            let fc = pair_objective(r, s, &cand);
            if fc <= f - 1e-4 * step * gn2 {
                w = cand;
                f = fc;
                accepted = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f, w)
}

/// `η^S` on a rectangular grid of points `re + i·im`.
#[derive(Debug, Clone, Serialize)]
pub struct PseudospectrumGrid {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub resolution: (usize, usize),
    /// `values[i][j]` at `re_i + i·im_j`; `+∞` where infeasible.
    #[serde(serialize_with = "serialize_values")]
    pub values: Vec<Vec<f64>>,
    pub kinds: Vec<Vec<EtaKind>>,
    pub epsilon: Option<f64>,
}

fn serialize_values<S: serde::Serializer>(v: &[Vec<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<Option<f64>>> = v
        .iter()
        .map(|row| row.iter().map(|&x| x.is_finite().then_some(x)).collect())
        .collect();
    serde::Serialize::serialize(&rows, s)
}

impl PseudospectrumGrid {
    pub fn re_nodes(&self) -> Vec<f64> {
        nodes(self.re_range, self.resolution.0)
    }

    pub fn im_nodes(&self) -> Vec<f64> {
        nodes(self.im_range, self.resolution.1)
    }

    /// Indicator of `η^S ≤ ε` at each node.
    pub fn sublevel(&self, epsilon: f64) -> Vec<Vec<bool>> {
        self.values
            .iter()
            .map(|row| row.iter().map(|&v| v <= epsilon).collect())
            .collect()
    }

    /// CSV with header `re,im,eta`, one row per node, real part outermost.
    pub fn to_csv(&self) -> String {
        let (re, im) = (self.re_nodes(), self.im_nodes());
        let mut out = String::from("re,im,eta\n");
        for (i, x) in re.iter().enumerate() {
            for (j, y) in im.iter().enumerate() {
                let v = self.values[i][j];
                let v = if v.is_finite() { format!("{v:e}") } else { "inf".to_string() };
                out.push_str(&format!("{x:e},{y:e},{v}\n"));
            }
        }
        out
    }
}

fn nodes((lo, hi): (f64, f64), k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| if i + 1 == k { hi } else { lo + (hi - lo) * i as f64 / (k - 1) as f64 })
        .collect()
}

/// Evaluate `η^S` on an `nx × ny` grid. Nodes are independent and evaluated
/// in parallel; the result does not depend on scheduling.
#[allow(clippy::too_many_arguments)]
pub fn grid(
    a: &CMat,
    spec: &StructureSpec,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: (usize, usize),
    epsilon: Option<f64>,
    tol: &ToleranceProfile,
    seed: u64,
) -> Result<PseudospectrumGrid> {
    let (nx, ny) = resolution;
    for (lo, hi) in [re_range, im_range] {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidInput(format!("empty region [{lo}, {hi}]")));
        }
    }
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidInput("grid resolution must be at least 2x2".into()));
    }
    if let Some(e) = epsilon {
        if e.is_nan() || e < 0.0 {
            return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
        }
    }
    let defect = spec.defect(a)?;
    if defect > tol.membership_rtol * (1.0 + a.norm()) {
        return Err(Error::NotStructured { defect });
    }
    let re = nodes(re_range, nx);
    let im = nodes(im_range, ny);
    let flat: Vec<(f64, EtaKind)> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let lambda = C64::new(re[k / ny], im[k % ny]);
            eta_structured_seeded(a, lambda, spec, tol, seed).map(|r| (r.eta, r.kind))
        })
        .collect::<Result<_>>()?;
    let values = (0..nx).map(|i| flat[i * ny..(i + 1) * ny].iter().map(|p| p.0).collect()).collect();
    let kinds = (0..nx).map(|i| flat[i * ny..(i + 1) * ny].iter().map(|p| p.1).collect()).collect();
    Ok(PseudospectrumGrid {
        re_range,
        im_range,
        resolution,
        values,
        kinds,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real_rows;
    use crate::structure::Preset;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn check_certificate(a: &CMat, spec: &StructureSpec, r: &EtaResult) {
        let d = r.certificate.as_ref().expect("certificate");
        assert!(spec.defect(d).unwrap() <= 1e-10, "structure");
        assert!((linalg::spectral_norm(d) - r.eta).abs() <= 1e-9 * r.eta.max(1.0), "norm");
        let ev = linalg::eigenvalues(&(a + d));
        let dist = ev.iter().map(|z| (z - r.lambda).norm()).fold(f64::INFINITY, f64::min);
        assert!(dist <= 1e-7 * linalg::spectral_norm(a).max(1.0), "eigenvalue {dist}");
    }

    #[test]
    fn unstructured_examples() {
        let a = from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert!((eta_unstructured(&a, c(0.0)) - 1.0).abs() < 1e-15);
        assert!(eta_unstructured(&a, c(1.0)) < 1e-15);
        let nil = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(eta_unstructured(&nil, c(0.0)) < 1e-15);
    }

    #[test]
    fn hermitian_real_axis() {
        let spec = Preset::Hermitian.build(2).unwrap();
        let a = from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let r = eta_structured(&a, c(0.0), &spec, &tol()).unwrap();
        assert_eq!(r.kind, EtaKind::Theorem);
        assert!((r.eta - 1.0).abs() < 1e-15);
        check_certificate(&a, &spec, &r);
    }

    #[test]
    fn covered_cases_match_sigma_min() {
        let cases = [
            Preset::Symmetric.build(5).unwrap(),
            Preset::SkewHamiltonian.build(6).unwrap(),
            Preset::Hamiltonian.build(6).unwrap(),
            Preset::Persymmetric.build(5).unwrap(),
        ];
        for (k, spec) in cases.iter().enumerate() {
            let a = spec.random_member(k as u64);
            let r = eta_structured(&a, C64::new(0.3, 0.7), spec, &tol()).unwrap();
            assert_eq!(r.kind, EtaKind::Theorem);
            assert!((r.eta - r.eta_unstructured).abs() <= 1e-10 * linalg::spectral_norm(&a));
            check_certificate(&a, spec, &r);
        }
    }

    #[test]
    fn pseudo_hermitian_off_axis_dual() {
        let spec = Preset::PseudoHermitian(None).build(4).unwrap();
        for seed in 0..10 {
            let a = spec.random_member(seed);
            let r = eta_structured(&a, C64::new(0.2, 0.3), &spec, &tol()).unwrap();
            assert_eq!(r.kind, EtaKind::Exact);
            assert!(r.eta >= r.eta_unstructured - 1e-12);
            check_certificate(&a, &spec, &r);
        }
    }

    #[test]
    fn definite_constraint_is_infeasible() {
        // for Hermitian A and λ = i, Im(x^H (λ − A) x) = 1 for all unit x
        let spec = Preset::Hermitian.build(3).unwrap();
        let a = spec.random_member(3);
        let r = eta_structured(&a, C64::new(0.0, 1.0), &spec, &tol()).unwrap();
        assert_eq!(r.kind, EtaKind::Infeasible);
        assert!(r.eta.is_infinite());
    }

    #[test]
    fn isotropic_search_gives_sound_bound() {
        let spec = Preset::SkewSymmetric.build(4).unwrap();
        let a = spec.random_member(9);
        let r = eta_structured(&a, C64::new(0.4, -0.2), &spec, &tol()).unwrap();
        assert!(matches!(r.kind, EtaKind::UpperBound | EtaKind::Exact));
        assert!(r.eta >= r.eta_unstructured - 1e-12);
        check_certificate(&a, &spec, &r);
        let z = eta_structured(&a, c(0.0), &spec, &tol()).unwrap();
        assert!((z.eta - z.eta_unstructured).abs() < 1e-12);
    }

    #[test]
    fn grid_layout_and_csv() {
        let spec = Preset::Hermitian.build(2).unwrap();
        let a = from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let g = grid(&a, &spec, (-1.0, 1.0), (0.0, 0.0), (5, 2), Some(0.0), &tol(), 0).unwrap();
        assert_eq!(g.values.len(), 5);
        assert!(g.values.iter().all(|row| row.len() == 2));
        let sub = g.sublevel(0.0);
        assert!(sub[0][0] && sub[4][0] && !sub[2][0]);
        let csv = g.to_csv();
        assert!(csv.starts_with("re,im,eta\n"));
        assert_eq!(csv.lines().count(), 11);
        assert!(grid(&a, &spec, (1.0, -1.0), (0.0, 0.0), (5, 2), None, &tol(), 0).is_err());
        assert!(grid(&a, &spec, (-1.0, 1.0), (0.0, 0.0), (1, 2), None, &tol(), 0).is_err());
    }
}
