//! Invariants over random instances. Each case draws its matrices from a
//! ChaCha stream seeded by proptest, so failures shrink to a seed.

use std::f64::consts::SQRT_2;

use bellcorr::algebra::{cyclic_check, separating_check};
use bellcorr::bell::{bell_operator, gadget_from_isometry, verify_square_identity, BellPack};
use bellcorr::density::{make_shift_family, DensityDemo};
use bellcorr::matrix::{eigh, op_sign, partial_trace, spectral, tensor, Factor, Operator, Vector};
use bellcorr::random;
use bellcorr::seesaw::{beta_ceiling, qubit_exact_beta, seesaw_beta, SeesawOptions};
use bellcorr::separability::{
    assemble, condition, ppt_oracle, push_decomposition, random_decomposition, PptVerdict, State,
};
use bellcorr::{CommutingPair, VnAlgebra};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// Scalar-free HS residual of `a` against the span of `b`'s basis, both ways.
fn spans_agree(a: &VnAlgebra, b: &VnAlgebra) -> bool {
    a.same_span(b, 1e-8).unwrap() && b.same_span(a, 1e-8).unwrap()
}

fn random_pack(d1: usize, d2: usize, r: &mut ChaCha8Rng) -> BellPack {
    bell_operator(
        &random::sign_contraction(d1, r).embed(Factor::Left, d2),
        &random::sign_contraction(d1, r).embed(Factor::Left, d2),
        &random::sign_contraction(d2, r).embed(Factor::Right, d1),
        &random::sign_contraction(d2, r).embed(Factor::Right, d1),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn adjoint_reverses_products(seed in any::<u64>(), dim in 1usize..8) {
        let mut r = rng(seed);
        let a = random::gaussian_operator(dim, &mut r);
        let b = random::gaussian_operator(dim, &mut r);
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        prop_assert!(lhs.distance(&rhs) <= 1e-14 * a.frobenius_norm() * b.frobenius_norm());
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>(), d in (1usize..4, 1usize..4, 1usize..4)) {
        let mut r = rng(seed);
        let a = random::gaussian_operator(d.0, &mut r);
        let b = random::gaussian_operator(d.1, &mut r);
        let c = random::gaussian_operator(d.2, &mut r);
        let scale = a.frobenius_norm() * b.frobenius_norm() * c.frobenius_norm();
        let drift = tensor(&tensor(&a, &b), &c).distance(&tensor(&a, &tensor(&b, &c)));
        prop_assert!(drift <= 1e-14 * scale, "{}", drift);
    }

    #[test]
    fn embedded_factors_commute(seed in any::<u64>(), d1 in 1usize..5, d2 in 1usize..5) {
        let mut r = rng(seed);
        let a = random::gaussian_operator(d1, &mut r).embed(Factor::Left, d2);
        let b = random::gaussian_operator(d2, &mut r).embed(Factor::Right, d1);
        let drift = (&a * &b).distance(&(&b * &a));
        prop_assert!(drift <= 1e-14 * a.frobenius_norm() * b.frobenius_norm(), "{}", drift);
    }

    #[test]
    fn partial_trace_duality(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
        let mut r = rng(seed);
        let rho = random::density(d1 * d2, &mut r);
        let reduced = partial_trace(&rho, (d1, d2), Factor::Right).unwrap();
        prop_assert!((reduced.trace() - rho.trace()).norm() < 1e-13);
        for i in 0..d1 {
            for j in 0..d1 {
                let x = Operator::matrix_unit(d1, i, j);
                let lhs = (&reduced * &x).trace();
                let rhs = (&rho * &x.embed(Factor::Left, d2)).trace();
                prop_assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn op_sign_commutes_and_attains_trace_norm(seed in any::<u64>(), dim in 1usize..12) {
        let mut r = rng(seed);
        let h = random::hermitian(dim, &mut r);
        let s = op_sign(&h).unwrap();
        prop_assert!(s.commutator(&h).frobenius_norm() <= 1e-10);
        let trace_norm: f64 = eigh(&h).unwrap().values().iter().map(|v| v.abs()).sum();
        prop_assert!(((&s * &h).trace().re - trace_norm).abs() <= 1e-10 * trace_norm.max(1.0));
        prop_assert!(s.op_norm() <= 1.0 + 1e-10);
    }

    #[test]
    fn square_identity_holds(seed in any::<u64>(), d in prop::sample::select(vec![(2usize, 2usize), (2, 4), (4, 4), (6, 6), (3, 5)])) {
        let mut r = rng(seed);
        let (d1, d2) = d;
        let gl = gadget_from_isometry(&random::nilpotent_isometry(d1, &mut r)).unwrap().embed(Factor::Left, d2);
        let gr = gadget_from_isometry(&random::nilpotent_isometry(d2, &mut r)).unwrap().embed(Factor::Right, d1);
        prop_assert!(verify_square_identity(&gl, &gr) <= 1e-12 * (d1 * d2) as f64);
        let res = gl.residuals().unwrap();
        prop_assert!(res.squares <= 1e-10 && res.support <= 1e-10);
        prop_assert!(res.commutator <= 1e-10 && res.nilpotent <= 1e-12);
        prop_assert!(res.spectral <= 1e-8);
    }

    #[test]
    fn negation_is_exact_and_norm_bounded(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
        let mut r = rng(seed);
        let pack = random_pack(d1, d2, &mut r);
        let negated = pack.negated();
        prop_assert_eq!(negated.operator(), &-pack.operator());
        prop_assert!(pack.norm() <= beta_ceiling() + 1e-10);
    }

    #[test]
    fn bell_value_is_affine(seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let pack = random_pack(2, 3, &mut r);
        let a = State::new(random::density(6, &mut r), (2, 3)).unwrap();
        let b = State::new(random::pure_density(6, &mut r), (2, 3)).unwrap();
        let mix = State::mixture(lambda, &a, &b).unwrap();
        let lhs = pack.value(&mix).unwrap();
        let rhs = lambda * pack.value(&a).unwrap() + (1.0 - lambda) * pack.value(&b).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn pushforward_consistency(seed in any::<u64>(), terms in 1usize..=8, d1 in 1usize..=4, d2 in 1usize..=4) {
        let mut r = rng(seed);
        let d = random_decomposition(terms, (d1, d2), &mut r);
        let a = random::gaussian_operator(d1, &mut r);
        let pushed = push_decomposition(&d, &a).unwrap();
        prop_assert!((pushed.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let lhs = assemble(&pushed).unwrap();
        let rhs = condition(&assemble(&d).unwrap(), &a, Factor::Left).unwrap();
        prop_assert!(!rhs.fallback);
        prop_assert!(lhs.rho().distance(rhs.state.rho()) <= 1e-12);
    }

    #[test]
    fn qubit_oracle_within_range(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = State::new(random::density(4, &mut r), (2, 2)).unwrap();
        let b = qubit_exact_beta(&s).unwrap();
        prop_assert!((1.0..=SQRT_2 + 1e-12).contains(&b));
        let pure = State::new(random::pure_density(4, &mut r), (2, 2)).unwrap();
        prop_assert!(qubit_exact_beta(&pure).unwrap() <= SQRT_2 + 1e-12);
        let product = State::product(&random::density(2, &mut r), &random::pure_density(2, &mut r)).unwrap();
        prop_assert!((qubit_exact_beta(&product).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cyclic_equals_separating_for_commutant(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4, product in any::<bool>()) {
        let mut r = rng(seed);
        let x = if product {
            random::unit_vector(d1, &mut r).kron(&random::unit_vector(d2, &mut r))
        } else {
            random::unit_vector(d1 * d2, &mut r)
        };
        let alg = VnAlgebra::tensor_factor(Factor::Left, (d1, d2));
        prop_assert_eq!(cyclic_check(&x, &alg).unwrap(), separating_check(&x, &alg.commutant()).unwrap());
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn spectral_reconstruction(seed in any::<u64>(), dim in 1usize..=64) {
        let mut r = rng(seed);
        let h = random::hermitian(dim, &mut r);
        let terms = spectral(&h).unwrap();
        let mut sum = Operator::zeros(dim);
        let mut total = Operator::zeros(dim);
        for t in &terms {
            sum = sum + t.projector.scale_real(t.eigenvalue);
            total = total + &t.projector;
        }
        prop_assert!(sum.distance(&h) <= 1e-10);
        prop_assert!(total.distance(&Operator::identity(dim)) <= 1e-10);
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i + 1..] {
                prop_assert!((&a.projector * &b.projector).frobenius_norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn bicommutant_reproduces_algebra(seed in any::<u64>(), kind in 0usize..3) {
        let mut r = rng(seed);
        let alg = match kind {
            0 => {
                let (d1, d2) = (r.random_range(1..=4), r.random_range(1..=4));
                let g = random::gaussian_operator(d1, &mut r).embed(Factor::Left, d2);
                let h = random::gaussian_operator(d1, &mut r).embed(Factor::Left, d2);
                VnAlgebra::generated_by(d1 * d2, vec![g, h]).unwrap()
            }
            1 => {
                let dim = r.random_range(1..=8);
                VnAlgebra::generated_by(dim, vec![random::hermitian(dim, &mut r)]).unwrap()
            }
            _ => {
                let dim = r.random_range(2..=8);
                let u = random::unitary(dim, &mut r);
                let rank = r.random_range(1..dim);
                let mut diag = vec![0.0; dim];
                diag[..rank].iter_mut().for_each(|v| *v = 1.0);
                let p = &(&u * &Operator::diag(&diag)) * &u.adjoint();
                VnAlgebra::generated_by(dim, vec![p]).unwrap()
            }
        };
        let bicommutant = alg.commutant().commutant();
        prop_assert!(spans_agree(&alg, &bicommutant));
        prop_assert!(alg.contains(&Operator::identity(alg.dim()), 1e-10).unwrap());
    }

    #[test]
    fn seesaw_trace_monotone_and_certified(seed in any::<u64>(), d1 in 2usize..=3, d2 in 2usize..=3) {
        let mut r = rng(seed);
        let s = State::new(random::density(d1 * d2, &mut r), (d1, d2)).unwrap();
        let pair = CommutingPair::tensor_split(d1, d2);
        let res = seesaw_beta(&s, &pair, &SeesawOptions { restarts: 4, iters: 100, seed }).unwrap();
        for w in res.trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        prop_assert!(res.beta_lower >= 1.0 - 1e-9 && res.beta_lower <= SQRT_2 + 1e-9);
        prop_assert!((res.pack.value(&s).unwrap() - res.beta_lower).abs() <= 1e-12);
    }

    #[test]
    fn bell_correlated_two_qubit_states_are_entangled(seed in any::<u64>()) {
        let mut r = rng(seed);
        // pure states are Bell correlated unless they are products
        let s = State::new(random::pure_density(4, &mut r), (2, 2)).unwrap();
        let pair = CommutingPair::tensor_split(2, 2);
        let res = seesaw_beta(&s, &pair, &SeesawOptions { restarts: 5, iters: 100, seed }).unwrap();
        if res.beta_lower > 1.0 + 1e-6 {
            prop_assert_eq!(ppt_oracle(&s).unwrap().verdict, PptVerdict::Entangled);
        }
    }

    #[test]
    fn separable_states_do_not_violate(seed in any::<u64>(), terms in 1usize..=8) {
        let mut r = rng(seed);
        let d = random_decomposition(terms, (2, 2), &mut r);
        let s = assemble(&d).unwrap();
        let pair = CommutingPair::tensor_split(2, 2);
        let res = seesaw_beta(&s, &pair, &SeesawOptions { restarts: 5, iters: 100, seed }).unwrap();
        prop_assert!(res.beta_lower <= 1.0 + 1e-6);
        prop_assert!(qubit_exact_beta(&s).unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn conditioning_is_continuous(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (d1, d2) = (2, 3);
        let s = State::new(random::density(d1 * d2, &mut r), (d1, d2)).unwrap();
        let a = random::gaussian_operator(d1, &mut r);
        let expectation = s.expect(&(&a.adjoint() * &a).embed(Factor::Left, d2)).re;
        prop_assume!(expectation >= 0.1);
        let noise = State::new(random::density(d1 * d2, &mut r), (d1, d2)).unwrap();
        let eps = 1e-4 * r.random_range(0.1..1.0);
        let perturbed = State::mixture(1.0 - eps, &s, &noise).unwrap();
        let delta = s.trace_distance(&perturbed).unwrap();
        let c0 = condition(&s, &a, Factor::Left).unwrap().state;
        let c1 = condition(&perturbed, &a, Factor::Left).unwrap().state;
        let out = c0.trace_distance(&c1).unwrap();
        let norm = a.op_norm();
        prop_assert!(out <= 10.0 * norm * norm / expectation * delta, "{out} vs delta {delta}");
    }

    #[test]
    fn cyclic_vectors_are_dense(seed in any::<u64>(), d in 2usize..=3) {
        let mut r = rng(seed);
        let alg = VnAlgebra::tensor_factor(Factor::Left, (d, d));
        let x = Vector::basis(d * d, 0);
        prop_assert!(!cyclic_check(&x, &alg).unwrap());
        for _ in 0..100 {
            let noise = random::unit_vector(d * d, &mut r).scale_real(1e-3);
            let near = (&x + &noise).normalized().unwrap();
            prop_assert!(cyclic_check(&near, &alg).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn approach_rows_invariants(seed in any::<u64>(), support in 1usize..=4) {
        let levels = 10;
        let n_max = 7;
        let fam = make_shift_family(levels).unwrap();
        let demo = DensityDemo::new(&fam, &fam, n_max).unwrap();
        let mut r = rng(seed);
        let x = bellcorr::density::random_supported_vector(levels, support, &mut r);
        let rows = demo.approach(&x).unwrap();
        let mut previous: Option<f64> = None;
        for row in &rows {
            prop_assert!(row.value >= row.bound - 1e-10);
            prop_assert!(row.overlap <= 1e-12);
            prop_assert!((row.z.norm() - 1.0).abs() <= 1e-12);
            prop_assert!(row.dist_to_xn <= (2.0 / row.n as f64).sqrt() + 1e-10);
            if row.n >= support {
                prop_assert_eq!(row.projection_defect, 0.0);
                prop_assert!(row.dist <= (2.0 / row.n as f64).sqrt() + 1e-10);
                if let Some(p) = previous {
                    prop_assert!(row.projection_defect <= p);
                }
                previous = Some(row.projection_defect);
            }
        }
        // small perturbations of x move the level values only slightly
        let bump = random::unit_vector(levels * levels, &mut r).scale_real(1e-6);
        let moved = demo.approach(&(&x + &bump).normalized().unwrap());
        if let Ok(moved) = moved {
            for (a, b) in rows.iter().zip(&moved) {
                prop_assert!((a.value - b.value).abs() <= 1e-5);
            }
        }
    }
}

#[test]
fn commutant_dimension_identity() {
    for (d1, d2) in [(2, 2), (2, 3), (3, 2)] {
        // a cyclic shift and a diagonal with distinct entries generate M_d1
        let shift = Operator::from_fn(d1, |i, j| Complex64::new(f64::from(u8::from(i == (j + 1) % d1)), 0.0));
        let diag = Operator::diag(&(0..d1).map(|k| k as f64).collect::<Vec<_>>());
        let gens = vec![shift.embed(Factor::Left, d2), diag.embed(Factor::Left, d2)];
        let alg = VnAlgebra::generated_by(d1 * d2, gens).unwrap();
        let comm = alg.commutant();
        assert_eq!(alg.linear_dim() * comm.linear_dim(), (d1 * d2) * (d1 * d2));
        assert!(spans_agree(&comm, &VnAlgebra::tensor_factor(Factor::Right, (d1, d2))));
    }
}
