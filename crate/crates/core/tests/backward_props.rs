mod common;

use common::{norm2, COMBOS};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use structmap::backward::{
    eigenpair_backward_error, inverse_invariant_pair, invariant_pair_backward_error, subspace_backward_error,
    subspace_closed_forms,
};
use structmap::linalg::{self, c, eye};
use structmap::mapping::{family_member, solution_family, solve_frobenius, MappingProblem};
use structmap::structure::{Parity, Preset};
use structmap::{Algebra, CMat, Form, StructureSpec, ToleranceProfile, C64};

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

/// Structured `A`, unit-free `x` and a shift `λ` for which the structured
/// eigenpair problem is solvable.
fn eigen_instance(k: usize, seed: u64) -> (StructureSpec, CMat, CMat, C64) {
    let mut rng = linalg::rng(seed);
    let (form, parity, alg) = COMBOS[k];
    let mut n = rng.random_range(2..=6usize);
    if form == Form::Bilinear && parity == Parity::Skew && n % 2 == 1 {
        n += 1;
    }
    let spec = common::combo_spec(k, n, seed);
    let a = spec.random_member(seed ^ 0xabc);
    let x = linalg::random_complex(n, 1, &mut rng);
    let t = rng.random_range(-2.0..2.0);
    let skew_class = spec.m_parity().sign() * if alg == Algebra::Jordan { 1.0 } else { -1.0 } < 0.0;
    let lambda = match form {
        Form::Bilinear if skew_class => C64::new(0.0, 0.0),
        Form::Bilinear => common::random_scalar(&mut rng),
        Form::Sesquilinear if alg == Algebra::Jordan => C64::new(t, 0.0),
        Form::Sesquilinear => C64::new(0.0, t),
    };
    (spec, a, x, lambda)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn single_column_invariant_pair_matches_eigenpair(k in 0..COMBOS.len(), seed in any::<u64>()) {
        let (spec, a, x, lambda) = eigen_instance(k, seed);
        let eig = eigenpair_backward_error(&a, &x, lambda, &spec, &tol()).unwrap();
        let d = CMat::from_element(1, 1, lambda);
        let pair = invariant_pair_backward_error(&a, &x, &d, &spec, &tol()).unwrap();
        let rel = |u: f64, v: f64| (u - v).abs() / u.abs().max(v.abs()).max(1e-300);
        prop_assert!(rel(eig.value_spectral, pair.value_spectral) <= 1e-10 || eig.value_spectral < 1e-14);
        prop_assert!(rel(eig.value_frobenius, pair.value_frobenius) <= 1e-10 || eig.value_frobenius < 1e-14);
        prop_assert!((&eig.perturbation_frobenius - &pair.perturbation_frobenius).norm() <= 1e-8);
        let n2 = norm2(&pair.perturbation_spectral);
        prop_assert!((n2 - eig.value_spectral).abs() <= 1e-9 * eig.value_spectral.max(1.0));
    }

    #[test]
    fn closed_form_perturbations_agree_with_solver(k in 0..COMBOS.len(), seed in any::<u64>()) {
        let (spec, a, x, lambda) = eigen_instance(k, seed);
        let rep = eigenpair_backward_error(&a, &x, lambda, &spec, &tol()).unwrap();
        let xn = x.norm();
        let xh = &x / c(xn);
        let r = (&x * lambda - &a * &x) / c(xn);
        let sol = solve_frobenius(&MappingProblem::new(xh.clone(), r.clone(), spec.clone(), tol()).unwrap()).unwrap();
        let scale = sol.a.norm().max(1e-300);
        prop_assert!((&rep.perturbation_frobenius - &sol.a).norm() <= 1e-9 * scale.max(1.0));
        let expect = r.norm();
        let got = norm2(&rep.perturbation_spectral);
        prop_assert!((got - expect).abs() <= 1e-9 * expect.max(1e-300) || expect < 1e-14);
        for d in [&rep.perturbation_spectral, &rep.perturbation_frobenius] {
            prop_assert!(spec.defect(d).unwrap() <= 1e-10 * (1.0 + d.norm()));
            prop_assert!(((&a + d) * &x - &x * lambda).norm() <= 1e-10 * (a.norm() + 1.0) * xn);
        }
    }
}

#[test]
fn degenerate_symmetric_branch_is_exercised() {
    // With A = 2I and a real x the residual is parallel to conj(x).
    let spec = Preset::Symmetric.build(4).unwrap();
    let mut rng = linalg::rng(2);
    let a = eye(4) * c(2.0);
    let x = linalg::random_real(4, 1, &mut rng);
    let lambda = C64::new(1.0, 0.5);
    let rep = eigenpair_backward_error(&a, &x, lambda, &spec, &tol()).unwrap();
    let expect = (lambda - c(2.0)).norm();
    assert!((rep.value_spectral - expect).abs() <= 1e-13);
    assert!((rep.value_frobenius - expect).abs() <= 1e-13);
    for d in [&rep.perturbation_spectral, &rep.perturbation_frobenius] {
        assert!(spec.defect(d).unwrap() <= 1e-13);
        assert!(((&a + d) * &x - &x * lambda).norm() <= 1e-12 * x.norm());
        assert!((norm2(d) - expect).abs() <= 1e-12);
    }
}

/// Real orthonormal basis `[Re W; −Im W]` of a Lagrangian subspace, `W`
/// a random unitary.
fn lagrangian_basis(half: usize, rng: &mut ChaCha8Rng) -> CMat {
    let w = linalg::random_unitary(half, rng);
    let mut u = CMat::zeros(2 * half, half);
    u.view_mut((0, 0), (half, half)).copy_from(&w.map(|z| c(z.re)));
    u.view_mut((half, 0), (half, half)).copy_from(&w.map(|z| c(-z.im)));
    u
}

#[test]
fn hamiltonian_subspace_with_lagrangian_basis() {
    let mut rng = linalg::rng(31);
    for half in 1..=3 {
        let spec = Preset::Hamiltonian.build(2 * half).unwrap();
        let u = lagrangian_basis(half, &mut rng);
        assert!((u.transpose() * spec.m() * &u).norm() < 1e-12);
        assert!((u.adjoint() * &u - eye(half)).norm() < 1e-12);
        let a = spec.random_member(half as u64);
        let rep = subspace_backward_error(&a, &u, &spec, &tol()).unwrap();
        assert!(spec.defect(&rep.e_o).unwrap() <= 1e-10 * (1.0 + rep.e_o.norm()));
        assert!(rep.invariance_residual <= 1e-10 * a.norm());
        let (w2, wf) = subspace_closed_forms(&a, &u, &spec);
        assert!((rep.report.value_spectral - w2).abs() <= 1e-9 * w2.max(1.0));
        assert!((rep.report.value_frobenius - wf).abs() <= 1e-9 * wf.max(1.0));
    }
}

#[test]
fn neutral_bases_always_admit_invariant_pairs() {
    let mut rng = linalg::rng(12);
    let ham = Preset::Hamiltonian.build(4).unwrap();
    let pseudo = Preset::PseudoHermitian(Some(2)).build(4).unwrap();
    let s = 0.5f64.sqrt();
    let mut neutral = CMat::zeros(4, 2);
    neutral[(0, 0)] = c(s);
    neutral[(2, 0)] = c(s);
    neutral[(1, 1)] = c(s);
    neutral[(3, 1)] = c(s);
    let cases = [(ham, lagrangian_basis(2, &mut rng)), (pseudo, neutral)];
    for (spec, x) in cases {
        assert!((spec.star().apply(&x) * spec.m() * &x).norm() < 1e-12);
        for _ in 0..10 {
            let d = linalg::random_complex(2, 2, &mut rng);
            let (fro, sp) = inverse_invariant_pair(&x, &d, &spec, &tol()).unwrap();
            for a in [&fro.a, &sp.a] {
                assert!(spec.defect(a).unwrap() <= 1e-10 * (1.0 + a.norm()));
                assert!((a * &x - &x * &d).norm() <= 1e-10 * (a.norm() + d.norm()));
            }
            assert!(norm2(&sp.a) <= norm2(&fro.a) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn subspace_report_matches_invariant_pair_with_optimal_block() {
    let mut rng = linalg::rng(77);
    for preset in [Preset::Hermitian, Preset::SkewHermitian, Preset::PseudoHermitian(None)] {
        for n in 3..=6 {
            let spec = preset.build(n).unwrap();
            let a = spec.random_member(n as u64);
            let p = rng.random_range(1..n);
            let u = linalg::random_unitary(n, &mut rng).columns(0, p).clone_owned();
            let sub = match subspace_backward_error(&a, &u, &spec, &tol()) {
                Ok(s) => s,
                Err(e) => {
                    assert!(!spec.is_identity(), "{}: {e}", preset.name());
                    continue;
                }
            };
            let pair = invariant_pair_backward_error(&a, &u, &sub.block, &spec, &tol()).unwrap();
            assert!((sub.report.value_frobenius - pair.value_frobenius).abs() <= 1e-10 * pair.value_frobenius.max(1.0));
            assert!((sub.report.value_spectral - pair.value_spectral).abs() <= 1e-10 * pair.value_spectral.max(1.0));
        }
    }
}

#[test]
fn optimal_perturbation_beats_sampled_invariance_preserving_ones() {
    let mut rng = linalg::rng(91);
    for preset in [Preset::Hermitian, Preset::SkewHermitian, Preset::Symmetric, Preset::SkewSymmetric] {
        for n in 3..=5 {
            let spec = preset.build(n).unwrap();
            let a = spec.random_member(40 + n as u64);
            let p = rng.random_range(1..n);
            let u = linalg::random_orthogonal(n, &mut rng).columns(0, p).clone_owned();
            let rep = subspace_backward_error(&a, &u, &spec, &tol()).unwrap();
            let omega = rep.report.value_spectral;
            let proj = &u * u.adjoint();
            let base = -((eye(n) - &proj) * &a * &u);
            for _ in 0..20 {
                let k = spec.prototype_class().project(&linalg::random_complex(p, p, &mut rng));
                let prob = MappingProblem::new(u.clone(), &base + &u * k, spec.clone(), tol()).unwrap();
                let fam = solution_family(&prob).unwrap();
                let delta = family_member(&fam, &linalg::random_complex(n, n, &mut rng)).unwrap();
                let e = &a + &delta;
                assert!(((eye(n) - &proj) * &e * &proj).norm() <= 1e-10 * (1.0 + e.norm()));
                assert!(norm2(&delta) >= omega - 1e-9, "{}: {} < {omega}", preset.name(), norm2(&delta));
            }
        }
    }
}

#[test]
fn enlarging_by_an_invariant_subspace_does_not_increase_omega() {
    let mut rng = linalg::rng(5);
    for n in 4..=7 {
        let spec = Preset::Hermitian.build(n).unwrap();
        let a = spec.random_member(n as u64);
        let (_, q) = linalg::hermitian_eig(&a);
        let coeffs = linalg::random_complex(n - 2, 1, &mut rng);
        let x = q.columns(0, n - 2) * &coeffs;
        let x = &x / c(x.norm());
        let mut y = CMat::zeros(n, 3);
        y.set_column(0, &x.column(0));
        y.view_mut((0, 1), (n, 2)).copy_from(&q.columns(n - 2, 2));
        let small = subspace_backward_error(&a, &x, &spec, &tol()).unwrap();
        let large = subspace_backward_error(&a, &y, &spec, &tol()).unwrap();
        assert!(large.report.value_spectral <= small.report.value_spectral + 1e-12);
        assert!(large.report.value_frobenius <= small.report.value_frobenius + 1e-12);
    }
}
