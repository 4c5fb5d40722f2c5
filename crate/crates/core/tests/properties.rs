use proptest::prelude::*;

use nonext::axioms::{IDENTITY_TOL, MAXIMALITY_TOL, SYMMETRY_TOL};
use nonext::phi::{central_difference, BUILTIN_NAMES};
use nonext::reconstruction::{proof_identity_residual, uniform_ratio};
use nonext::sampling::{flat_dirichlet, random_multiplicities, random_product, random_refinement, seeded_rng};
use nonext::*;

fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..10.0, 1..=max_len).prop_filter("some mass", |w| w.iter().any(|&x| x > 0.0))
}

fn simplex_point(max_len: usize) -> impl Strategy<Value = Distribution> {
    weights(max_len).prop_map(|w| Distribution::new(w, true).unwrap())
}

fn q_value() -> impl Strategy<Value = QParam> {
    prop_oneof![0.05f64..0.99, 1.01f64..6.0, Just(1.0)].prop_map(|q| QParam::new(q).unwrap())
}

fn admissible_phi() -> impl Strategy<Value = PhiSpec> {
    prop_oneof![Just(PhiSpec::tsallis()), Just(PhiSpec::cubic()), Just(PhiSpec::havrda_charvat())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalized_weights_land_on_simplex(w in weights(40)) {
        let d = Distribution::new(w, true).unwrap();
        prop_assert!(d.iter().all(|p| p >= 0.0));
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL);
    }

    #[test]
    fn product_entries_are_exact(a in simplex_point(8), b in simplex_point(8)) {
        let s = product(&a, &b);
        let m = b.len();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                prop_assert_eq!(s.joint().as_slice()[i * m + j].to_bits(), (ai * bj).to_bits());
            }
        }
        prop_assert!((s.joint().iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL);
    }

    #[test]
    fn refinement_conditionals_are_distributions(seed in any::<u64>()) {
        let r = random_refinement(&mut seeded_rng(seed), 8, 8);
        prop_assert!((r.marginals().iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL);
        for (i, &pi) in r.marginals().as_slice().iter().enumerate() {
            if pi > 0.0 {
                let c = r.conditional(i).unwrap();
                prop_assert!((c.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL);
            }
        }
    }

    #[test]
    fn rational_approx_apportions_exactly(d in simplex_point(12), extra in 0u64..5000) {
        let m_total = d.len() as u64 + extra;
        let m = rational_approx(&d, m_total).unwrap();
        prop_assert_eq!(m.iter().sum::<u64>(), m_total);
        let bound = d.len() as f64 / m_total as f64;
        for (k, p) in m.iter().zip(d.iter()) {
            prop_assert!((*k as f64 / m_total as f64 - p).abs() <= bound);
        }
    }

    #[test]
    fn symmetric_under_permutation(d in simplex_point(16), q in q_value(), phi in admissible_phi(), seed in any::<u64>()) {
        let rep = check_symmetry(&d, q, &phi, seed).unwrap();
        prop_assert!(rep.residual <= SYMMETRY_TOL, "{:?}", rep);
    }

    #[test]
    fn expandability_is_exact(d in simplex_point(16), q in q_value(), phi in admissible_phi()) {
        let base = generalized_entropy(&d, q, &phi).unwrap();
        prop_assert_eq!(generalized_entropy(&d.expand(), q, &phi).unwrap(), base);
        prop_assert_eq!(generalized_entropy(&d.expand().expand(), q, &phi).unwrap(), base);
    }

    #[test]
    fn bounded_by_uniform(d in simplex_point(12), q in q_value(), phi in admissible_phi()) {
        let s = generalized_entropy(&d, q, &phi).unwrap();
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= uniform_entropy(d.len(), q, &phi).unwrap() + MAXIMALITY_TOL);
    }

    #[test]
    fn concave_on_the_simplex(
        pair in (1usize..10).prop_flat_map(|n| (
            prop::collection::vec(0.01f64..1.0, n),
            prop::collection::vec(0.01f64..1.0, n),
        )),
        lambda in 0.0f64..=1.0,
        q in q_value(),
        phi in admissible_phi(),
    ) {
        let p = Distribution::new(pair.0, true).unwrap();
        let r = Distribution::new(pair.1, true).unwrap();
        let mid = p.mix(&r, lambda).unwrap();
        let s = |d: &Distribution| generalized_entropy(d, q, &phi).unwrap();
        prop_assert!(s(&mid) >= lambda * s(&p) + (1.0 - lambda) * s(&r) - 1e-12);
    }

    #[test]
    fn generalized_shannon_additivity(seed in any::<u64>(), q in q_value(), phi in admissible_phi()) {
        let r = random_refinement(&mut seeded_rng(seed), 8, 8);
        let rep = check_shannon_additivity(&r, q, &phi, IDENTITY_TOL).unwrap();
        prop_assert!(rep.is_ok(), "{:?}", rep);
    }

    #[test]
    fn product_satisfies_both_identities(seed in any::<u64>(), q in q_value(), phi in admissible_phi()) {
        let s = random_product(&mut seeded_rng(seed), 8);
        prop_assert!(check_pseudoadditivity(&s, q, &phi, IDENTITY_TOL).unwrap().is_ok());
        prop_assert!(check_shannon_additivity(&s.as_refinement(), q, &phi, IDENTITY_TOL).unwrap().is_ok());
    }

    #[test]
    fn reconstruction_agrees_on_rational_points(
        seed in any::<u64>(),
        n in 1usize..12,
        q in prop_oneof![Just(0.3), Just(0.5), Just(2.0), Just(3.0), Just(5.0)],
        phi in admissible_phi(),
    ) {
        let q = QParam::new(q).unwrap();
        let mut rng = seeded_rng(seed);
        let m = random_multiplicities(&mut rng, n, 10_000);
        let rd = RationalDistribution::new(m).unwrap();
        let direct = generalized_entropy(&rd.to_distribution(), q, &phi).unwrap();
        let rebuilt = reconstruct_rational(&rd, q, &phi).unwrap();
        prop_assert!((direct - rebuilt).abs() <= 1e-10, "{} vs {}", direct, rebuilt);
        prop_assert!(proof_identity_residual(&rd, q) <= 1e-12);
    }
}

#[test]
fn builtin_derivatives_match_central_differences() {
    for name in BUILTIN_NAMES {
        let phi = PhiSpec::builtin(name).unwrap();
        for i in 0..=98 {
            let q = 0.1 + 0.05 * i as f64;
            let analytic = phi.derivative(q).unwrap();
            let numeric = central_difference(&phi, q, 1e-6 * q.max(1.0)).unwrap();
            assert!(
                (analytic - numeric).abs() <= 1e-6 * analytic.abs(),
                "{name} at q={q}: {analytic} vs {numeric}"
            );
        }
    }
}

#[test]
fn sign_condition_on_log_grid() {
    for phi in [PhiSpec::tsallis(), PhiSpec::cubic()] {
        for i in 0..100 {
            let q = (0.01f64.ln() + (i as f64 + 0.5) / 100.0 * (1000f64).ln()).exp();
            let v = phi.eval(q);
            assert!(if q > 1.0 { v > 0.0 } else { v < 0.0 }, "{} q={q}", phi.name());
        }
    }
}

#[test]
fn tsallis_converges_linearly_to_shannon() {
    let mut rng = seeded_rng(11);
    for _ in 0..50 {
        let d = flat_dirichlet(&mut rng, 6);
        let h = shannon(&d);
        for sign in [1.0, -1.0] {
            let gap = |k: i32| (tsallis(&d, QParam::new(1.0 + sign * 10f64.powi(-k)).unwrap()) - h).abs();
            let c = 2.0 * gap(2) * 100.0;
            for k in 2..=8 {
                let g = gap(k);
                assert!(g.is_finite());
                assert!(g <= c * 10f64.powi(-k), "k={k} gap={g} c={c}");
            }
        }
    }
}

#[test]
fn ratio_is_constant_in_n() {
    for phi in [PhiSpec::tsallis(), PhiSpec::cubic(), PhiSpec::havrda_charvat()] {
        for q in [0.3, 0.8, 1.5, 4.0] {
            let q = QParam::new(q).unwrap();
            let r2 = uniform_ratio(2, q, &phi).unwrap();
            for n in 3..200 {
                let rn = uniform_ratio(n, q, &phi).unwrap();
                assert!((rn - r2).abs() <= 1e-12 * r2.abs());
            }
        }
    }
}

#[test]
fn functional_equation_over_small_integers() {
    for phi in [PhiSpec::tsallis(), PhiSpec::cubic(), PhiSpec::havrda_charvat()] {
        for q in [0.2, 0.5, 1.0, 2.0, 3.5] {
            let q = QParam::new(q).unwrap();
            for m in 1..20 {
                for n in 1..20 {
                    let rep = check_functional_equation(m, n, q, &phi, 1e-12).unwrap();
                    assert!(rep.is_ok(), "{rep:?}");
                }
            }
        }
    }
}
