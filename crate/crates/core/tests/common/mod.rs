//! Independent oracles and instance generators shared by the integration
//! tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use structmap::linalg::{self, c, I_UNIT};
use structmap::structure::{random_scalar_product, Parity, Preset};
use structmap::{Algebra, CMat, Form, StructureSpec, C64};

pub const COMBOS: [(Form, Parity, Algebra); 8] = [
    (Form::Bilinear, Parity::Symmetric, Algebra::Jordan),
    (Form::Bilinear, Parity::Symmetric, Algebra::Lie),
    (Form::Bilinear, Parity::Skew, Algebra::Jordan),
    (Form::Bilinear, Parity::Skew, Algebra::Lie),
    (Form::Sesquilinear, Parity::Symmetric, Algebra::Jordan),
    (Form::Sesquilinear, Parity::Symmetric, Algebra::Lie),
    (Form::Sesquilinear, Parity::Skew, Algebra::Jordan),
    (Form::Sesquilinear, Parity::Skew, Algebra::Lie),
];

pub const PRESETS: [Preset; 3] = [Preset::Hamiltonian, Preset::SkewHamiltonian, Preset::Persymmetric];

/// Number of structure families cycled through by [`family_spec`].
pub const FAMILIES: usize = COMBOS.len() + PRESETS.len();

pub fn needs_even(family: usize) -> bool {
    match family {
        k if k < COMBOS.len() => COMBOS[k].0 == Form::Bilinear && COMBOS[k].1 == Parity::Skew,
        k => PRESETS[k - COMBOS.len()].needs_even(),
    }
}

pub fn combo_spec(k: usize, n: usize, seed: u64) -> StructureSpec {
    let (form, parity, alg) = COMBOS[k];
    let m = random_scalar_product(n, form, parity, seed.is_multiple_of(3), seed).unwrap();
    StructureSpec::new(m, form, alg).unwrap()
}

pub fn family_spec(family: usize, n: usize, seed: u64) -> StructureSpec {
    if family < COMBOS.len() {
        combo_spec(family, n, seed)
    } else {
        PRESETS[family - COMBOS.len()].build(n).unwrap()
    }
}

pub fn family_label(family: usize) -> String {
    if family < COMBOS.len() {
        let (f, p, a) = COMBOS[family];
        format!("{f:?}/{p:?}/{a:?}")
    } else {
        PRESETS[family - COMBOS.len()].name()
    }
}

/// A solvable mapping instance `B = A_true X`.
pub struct Instance {
    pub label: String,
    pub spec: StructureSpec,
    pub x: CMat,
    pub b: CMat,
    pub a_true: CMat,
}

/// Random solvable instance with `n ≤ 6`, `p ≤ 3`; about a quarter of the
/// instances have rank-deficient `X`.
pub fn solvable_instance(family: usize, seed: u64) -> Instance {
    let mut rng = linalg::rng(seed.wrapping_mul(0x9e37_79b9) ^ family as u64);
    let mut n = rng.random_range(2..=6usize);
    if needs_even(family) && n % 2 == 1 {
        n += 1;
        if n > 6 {
            n = 4;
        }
    }
    let p = rng.random_range(1..=n.min(3));
    let spec = family_spec(family, n, seed);
    let x = if p >= 2 && rng.random_bool(0.25) {
        let r = rng.random_range(1..p);
        linalg::random_complex(n, r, &mut rng) * linalg::random_complex(r, p, &mut rng)
    } else {
        linalg::random_complex(n, p, &mut rng)
    };
    let a_true = spec.random_member(seed ^ 0x5eed);
    let b = &a_true * &x;
    Instance { label: family_label(family), spec, x, b, a_true }
}

/// Orthonormal real-linear basis (under `Re tr(A^H B)`) of the structured
/// class `{A : MA = ±(MA)^*}`, built entry by entry.
pub fn structured_basis(spec: &StructureSpec) -> Vec<CMat> {
    let n = spec.n();
    let s = spec.m_parity().sign() * if spec.algebra() == Algebra::Jordan { 1.0 } else { -1.0 };
    let h = 0.5f64.sqrt();
    let e = |j: usize, k: usize| {
        let mut z = CMat::zeros(n, n);
        z[(j, k)] = c(1.0);
        z
    };
    let mut zs = Vec::new();
    for j in 0..n {
        match (spec.form(), s > 0.0) {
            (Form::Bilinear, true) => {
                zs.push(e(j, j));
                zs.push(e(j, j) * I_UNIT);
            }
            (Form::Bilinear, false) => {}
            (Form::Sesquilinear, true) => zs.push(e(j, j)),
            (Form::Sesquilinear, false) => zs.push(e(j, j) * I_UNIT),
        }
        for k in j + 1..n {
            let sym = (e(j, k) + e(k, j) * c(s)) * c(h);
            match spec.form() {
                Form::Bilinear => {
                    zs.push(sym.clone());
                    zs.push(sym * I_UNIT);
                }
                Form::Sesquilinear => {
                    zs.push(sym);
                    zs.push((e(j, k) - e(k, j) * c(s)) * I_UNIT * c(h));
                }
            }
        }
    }
    let mh = spec.m().adjoint();
    zs.into_iter().map(|z| &mh * z).collect()
}

/// Least-Frobenius-norm structured solution via a real least-squares
/// problem over [`structured_basis`], plus a basis of the homogeneous
/// solutions `{A ∈ S : AX = 0}`.
pub struct OracleSolution {
    pub a: CMat,
    pub residual: f64,
    pub null: Vec<CMat>,
}

fn real_vec(a: &CMat) -> DVector<f64> {
    let k = a.len();
    DVector::from_fn(2 * k, |i, _| if i < k { a[i].re } else { a[i - k].im })
}

pub fn least_norm_oracle(spec: &StructureSpec, x: &CMat, b: &CMat) -> OracleSolution {
    let basis = structured_basis(spec);
    let d = basis.len();
    let mut l = DMatrix::<f64>::zeros(2 * x.len(), d);
    for (k, s) in basis.iter().enumerate() {
        l.set_column(k, &real_vec(&(s * x)));
    }
    let rhs = real_vec(b);
    let (left, sv, right) = real_svd(&l);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let thr = 1e-10 * smax.max(f64::MIN_POSITIVE);
    let mut coef = DVector::<f64>::zeros(d);
    let mut range = Vec::new();
    for (i, &s) in sv.iter().enumerate() {
        if s > thr {
            coef += right.column(i) * (left.column(i).dot(&rhs) / s);
            range.push(right.column(i).clone_owned());
        }
    }
    let residual = (&l * &coef - &rhs).norm();
    let mut comp = DMatrix::<f64>::identity(d, d);
    for v in &range {
        comp -= v * v.transpose();
    }
    let eig = comp.symmetric_eigen();
    let null = (0..d)
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| combine(&basis, &eig.eigenvectors.column(i).clone_owned()))
        .collect();
    OracleSolution { a: combine(&basis, &coef), residual, null }
}

/// Positive singular triplets of `L` from the symmetric eigendecomposition
/// of `[[0, L], [L^T, 0]]`, whose residual is asserted so that a faulty
/// factorization cannot pass silently.
fn real_svd(l: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (r, d) = l.shape();
    let mut h = DMatrix::<f64>::zeros(r + d, r + d);
    h.view_mut((0, r), (r, d)).copy_from(l);
    h.view_mut((r, 0), (d, r)).copy_from(&l.transpose());
    let eig = h.clone().symmetric_eigen();
    let recon = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues) * eig.eigenvectors.transpose();
    assert!((recon - &h).norm() <= 1e-12 * h.norm().max(1.0), "oracle eigendecomposition failed");
    let keep: Vec<usize> = (0..r + d).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    let scale = 2f64.sqrt();
    let u = DMatrix::from_fn(r, keep.len(), |i, k| scale * eig.eigenvectors[(i, keep[k])]);
    let v = DMatrix::from_fn(d, keep.len(), |i, k| scale * eig.eigenvectors[(r + i, keep[k])]);
    (u, keep.iter().map(|&i| eig.eigenvalues[i]).collect(), v)
}

/// Singular values (descending) as the nonnegative eigenvalues of the
/// Hermitian dilation `[[0, A], [A^H, 0]]`.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let (n, p) = a.shape();
    let mut h = CMat::zeros(n + p, n + p);
    h.view_mut((0, n), (n, p)).copy_from(a);
    h.view_mut((n, 0), (p, n)).copy_from(&a.adjoint());
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev.truncate(n.min(p));
    ev.into_iter().map(|x| x.max(0.0)).collect()
}

pub fn norm2(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

pub fn combine(basis: &[CMat], coef: &DVector<f64>) -> CMat {
    let n = basis[0].nrows();
    basis.iter().zip(coef.iter()).fold(CMat::zeros(n, n), |acc, (s, &w)| acc + s * c(w))
}

/// Random contraction in the prototype class of `spec`.
pub fn admissible_z(spec: &StructureSpec, rng: &mut ChaCha8Rng) -> CMat {
    let n = spec.n();
    let z = spec.prototype_class().project(&linalg::random_complex(n, n, rng));
    let nz = linalg::spectral_norm(&z);
    if nz == 0.0 {
        return z;
    }
    z * c(rng.random_range(0.05..=1.0) / nz)
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
}
