use monobasis::constants::{
    basis_monomials, estimate_basis_constant, growth_check, partial_sum, partial_sum_ratio, replay_theorem2_chain,
    ChainConfig, EmpiricalConstant, EstimatorConfig,
};
use monobasis::multiindex::count_up_to_length;
use monobasis::norms::{oracle_with, OracleConfig};
use monobasis::Polydisc;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_config(budget: usize) -> EstimatorConfig {
    EstimatorConfig {
        budget,
        oracle: OracleConfig {
            points_per_dim: 16,
            candidates: 2,
        },
    }
}

fn random_coeffs(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

#[test]
fn witness_reproduces_the_estimate() {
    let a = Polydisc::new(vec![1.0, 0.7, 1.3]).unwrap();
    for degree in 2..=3 {
        let config = small_config(120);
        let est = estimate_basis_constant(degree, 3, &a, config, 9).unwrap();
        let w = &est.witness;
        let basis = basis_monomials(degree, w.t).unwrap();
        let top = oracle_with(
            &partial_sum(&basis, degree, &w.coefficients, 1, w.s).unwrap(),
            &a,
            config.oracle,
        )
        .unwrap();
        let bottom = oracle_with(
            &partial_sum(&basis, degree, &w.coefficients, 1, w.t).unwrap(),
            &a,
            config.oracle,
        )
        .unwrap();
        assert!((top / bottom - est.lower_bound).abs() <= 1e-12);
        assert!(est.lower_bound >= 1.0);
        assert_eq!(est.ceiling_violations, 0);
        assert!(!est.exceeds_ceiling(1e-6));
    }
}

#[test]
fn estimate_is_monotone_in_budget() {
    let a = Polydisc::unit(2).unwrap();
    let mut last = 0.0;
    for budget in [1, 10, 40, 120] {
        let est = estimate_basis_constant(3, 2, &a, small_config(budget), 4).unwrap();
        assert!(est.lower_bound >= last);
        last = est.lower_bound;
    }
}

#[test]
fn estimator_is_deterministic() {
    let a = Polydisc::unit(3).unwrap();
    let x = estimate_basis_constant(2, 3, &a, small_config(60), 17).unwrap();
    let y = estimate_basis_constant(2, 3, &a, small_config(60), 17).unwrap();
    assert_eq!(x.lower_bound.to_bits(), y.lower_bound.to_bits());
    assert_eq!(x.witness, y.witness);
}

#[test]
fn oversized_searches_are_refused() {
    let a = Polydisc::unit(6).unwrap();
    assert!(count_up_to_length(4, 6).unwrap() > 70);
    assert!(estimate_basis_constant(4, 6, &a, small_config(5), 0).is_err());
    assert!(estimate_basis_constant(0, 2, &a, small_config(5), 0).is_err());
}

#[test]
fn chain_holds_on_random_trials() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let config = ChainConfig {
        oracle: OracleConfig::with_points(32),
        empirical: EmpiricalConstant::Estimate { budget: 20 },
        ..ChainConfig::default()
    };
    for trial in 0..25 {
        let degree = rng.gen_range(2..=3);
        let d = 3;
        let total = count_up_to_length(degree, d).unwrap() as usize;
        let t = rng.gen_range(2..=total);
        let s = rng.gen_range(1..=t);
        let a = Polydisc::new((0..d).map(|_| rng.gen_range(0.2..2.0)).collect()).unwrap();
        let coeffs = random_coeffs(&mut rng, t);
        let report = replay_theorem2_chain(&coeffs, degree, s, t, &a, config, trial).unwrap();
        assert!(report.regrouping_exact && report.factorization_exact);
        for step in report.steps.iter().filter(|s| s.required) {
            assert!(step.holds, "trial {trial}: {} {} > {}", step.name, step.lhs, step.rhs);
        }
        assert!(report.pass);
    }
}

#[test]
fn growth_check_uses_nth_roots() {
    let a = Polydisc::unit(2).unwrap();
    let estimates: Vec<_> = (1..=3)
        .map(|n| estimate_basis_constant(n, 2, &a, small_config(30), 1).unwrap())
        .collect();
    let report = growth_check(&estimates, "unit", 1e-9);
    assert_eq!(report.roots.len(), 3);
    assert!(report.pass);
    assert!((report.roots[0].1 - 1.0).abs() <= 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// In degree one the norm is `Σ |α_j| λ_j`, so every ratio is at most 1.
    #[test]
    fn linear_ratios_match_weighted_l1(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radii: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..2.0)).collect();
        let a = Polydisc::new(radii.clone()).unwrap();
        let coeffs = random_coeffs(&mut rng, d);
        let t = rng.gen_range(2..=d);
        let s = rng.gen_range(1..t);
        let weighted = |upto: usize| (0..upto).map(|j| coeffs[j].norm() * radii[j]).sum::<f64>();
        let ratio = partial_sum_ratio(&coeffs, 1, s, t, &a, OracleConfig::with_points(16)).unwrap();
        prop_assert!((ratio - weighted(s) / weighted(t)).abs() <= 1e-9);
        prop_assert!(ratio <= 1.0 + 1e-9);
    }
}
