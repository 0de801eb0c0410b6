use std::f64::consts::TAU;

use monobasis::multiindex::enumerate;
use monobasis::norms::{
    check_boundary_identity, check_monotone_fdd, lower_bound_search, oracle_grid, oracle_with, polydisc_norm,
    upper_bound, CheckMode, NormConfig, OracleConfig,
};
use monobasis::{MultiIndex, Poly64, Polydisc};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut impl Rng, degree: u32, len: usize) -> Poly64 {
    let terms = enumerate(degree, len).into_iter().filter_map(|m| {
        rng.gen_bool(0.7).then(|| {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (m, c)
        })
    });
    Poly64::from_terms(degree, terms).unwrap()
}

fn random_polydisc(rng: &mut impl Rng, d: usize) -> Polydisc {
    Polydisc::new((0..d).map(|_| rng.gen_range(0.2..2.0)).collect()).unwrap()
}

/// `|P|` at a boundary point given by explicit phases.
fn modulus_at(p: &Poly64, a: &Polydisc, phases: &[f64]) -> f64 {
    let z: Vec<Complex64> = phases
        .iter()
        .enumerate()
        .map(|(j, &t)| Complex64::from_polar(a.radius(j + 1), t))
        .collect();
    p.evaluate(&z).norm()
}

fn poly(degree: u32, terms: &[(&[u32], f64)]) -> Poly64 {
    Poly64::from_terms(
        degree,
        terms
            .iter()
            .map(|(e, a)| (MultiIndex::from_exponents(e), Complex64::new(*a, 0.0))),
    )
    .unwrap()
}

#[test]
fn closed_form_norms() {
    let unit2 = Polydisc::unit(2).unwrap();
    let unit3 = Polydisc::unit(3).unwrap();
    let cases = [
        (poly(2, &[(&[1, 1], 1.0)]), &unit2, 1.0),
        (poly(2, &[(&[2], 1.0), (&[0, 2], -1.0)]), &unit2, 2.0),
        (poly(2, &[(&[2], 1.0), (&[1, 1], 2.0), (&[0, 2], 1.0)]), &unit2, 4.0),
        (poly(2, &[(&[0, 2], 1.0), (&[1, 1], -1.0)]), &unit2, 2.0),
        (poly(1, &[(&[1], 1.0), (&[0, 1], 1.0), (&[0, 0, 1], 1.0)]), &unit3, 3.0),
        // |1 + e^{it}| peaks at 2; |z1^2 - z1 z2| = |z1||z1 - z2|
        (poly(2, &[(&[2], 1.0), (&[1, 1], -1.0)]), &unit2, 2.0),
    ];
    for (p, a, expected) in cases {
        let g = oracle_grid(&p, a, 64).unwrap();
        assert!((g - expected).abs() <= 1e-9, "{p:?}: {g} vs {expected}");
        let b = polydisc_norm(&p, a, NormConfig::default()).unwrap();
        assert!(b.contains(expected, 1e-9));
        assert!((b.lower - expected).abs() <= 1e-9);
    }
    // z1^2 - z2^2 on radii (1, 1/2): 1 + 1/4
    let a = Polydisc::new(vec![1.0, 0.5]).unwrap();
    let p = poly(2, &[(&[2], 1.0), (&[0, 2], -1.0)]);
    assert!((oracle_grid(&p, &a, 64).unwrap() - 1.25).abs() <= 1e-12);
}

#[test]
fn brackets_contain_the_oracle_and_dominate_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..200 {
        let degree = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=3);
        let p = random_poly(&mut rng, degree, d);
        let a = random_polydisc(&mut rng, d);
        let oracle = oracle_grid(&p, &a, 64).unwrap();
        let bracket = polydisc_norm(
            &p,
            &a,
            NormConfig {
                seed: trial,
                ..NormConfig::default()
            },
        )
        .unwrap();
        let scale = bracket.upper.max(1e-300);
        assert!(bracket.lower <= bracket.upper);
        assert!(
            bracket.contains(oracle, 1e-6 * scale),
            "trial {trial}: {oracle} outside {bracket:?}"
        );
        for _ in 0..50 {
            let phases: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..TAU)).collect();
            let v = modulus_at(&p, &a, &phases);
            assert!(v <= bracket.upper * (1.0 + 1e-12));
            assert!(
                v <= oracle * (1.0 + 1e-6) + 1e-15,
                "trial {trial}: sample {v} above oracle {oracle}"
            );
        }
    }
}

#[test]
fn search_point_attains_its_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..20 {
        let p = random_poly(&mut rng, 3, 3);
        let a = random_polydisc(&mut rng, 4);
        let point = lower_bound_search(&p, &a, Default::default(), seed).unwrap();
        assert_eq!(point.phases.len(), 4);
        let v = modulus_at(&p, &a, &point.phases);
        assert!((v - point.value).abs() <= 1e-12 * v.max(1.0));
    }
}

#[test]
fn monotone_fdd_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let degree = rng.gen_range(1..=3);
        let p = random_poly(&mut rng, degree, 3);
        let a = random_polydisc(&mut rng, 3);
        let comps = p.length_split();
        let lens: Vec<usize> = comps.keys().copied().collect();
        for s in 1..=3 {
            for t in s + 1..=3 {
                if lens.is_empty() {
                    continue;
                }
                let r = check_monotone_fdd(&comps, &a, s, t, CheckMode::Oracle(OracleConfig::with_points(32))).unwrap();
                assert!(r.pass, "slack {}", r.slack);
            }
        }
    }
}

#[test]
fn boundary_identity_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let degree = rng.gen_range(1..=3);
        let p = random_poly(&mut rng, degree, 3);
        let a = random_polydisc(&mut rng, 3);
        for (k, q) in p.length_split() {
            let r = check_boundary_identity(&q, k, &a, OracleConfig::default(), 1e-6).unwrap();
            assert!(r.pass, "k={k} residual {}", r.residual);
        }
    }
}

#[test]
fn worked_boundary_identity() {
    let q = poly(2, &[(&[0, 2], 1.0), (&[1, 1], -1.0)]);
    let r = check_boundary_identity(&q, 2, &Polydisc::unit(2).unwrap(), OracleConfig::default(), 1e-9).unwrap();
    assert!((r.norm_q - 2.0).abs() <= 1e-12);
    assert!((r.norm_r - 2.0).abs() <= 1e-12);
    assert!(r.pass);
}

#[test]
fn oracle_refuses_large_problems() {
    let p = poly(1, &[(&[0, 0, 0, 0, 0, 1], 1.0)]);
    assert!(oracle_grid(&p, &Polydisc::unit(6).unwrap(), 16).is_err());
    assert!(oracle_grid(&p, &Polydisc::unit(5).unwrap(), 16).is_err());
    let q = poly(1, &[(&[1], 1.0)]);
    assert!(oracle_grid(&q, &Polydisc::unit(1).unwrap(), 7).is_err());
}

fn arb_case() -> impl Strategy<Value = (Poly64, Poly64, Polydisc)> {
    (any::<u64>(), 1u32..=3, 1usize..=3).prop_map(|(seed, degree, d)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, degree, d);
        let q = random_poly(&mut rng, degree, d);
        (p, q, random_polydisc(&mut rng, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_absolutely_homogeneous((p, _, a) in arb_case(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let c = Complex64::new(re, im);
        let cfg = OracleConfig::with_points(32);
        let lhs = oracle_with(&p.scale(&c), &a, cfg).unwrap();
        let rhs = c.norm() * oracle_with(&p, &a, cfg).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
        let ul = upper_bound(&p.scale(&c), &a).unwrap();
        prop_assert!((ul - c.norm() * upper_bound(&p, &a).unwrap()).abs() <= 1e-9 * ul.max(1.0));
    }

    #[test]
    fn triangle_inequality((p, q, a) in arb_case()) {
        let cfg = OracleConfig::with_points(32);
        let sum = oracle_with(&p.try_add(&q).unwrap(), &a, cfg).unwrap();
        let bound = oracle_with(&p, &a, cfg).unwrap() + oracle_with(&q, &a, cfg).unwrap();
        prop_assert!(sum <= bound * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn larger_polydisc_gives_larger_norm((p, _, a) in arb_case(), grow in 1.0f64..2.0) {
        let cfg = OracleConfig::with_points(32);
        let bigger = Polydisc::new(a.radii().iter().map(|r| r * grow).collect()).unwrap();
        let small = oracle_with(&p, &a, cfg).unwrap();
        let large = oracle_with(&p, &bigger, cfg).unwrap();
        prop_assert!(small <= large * (1.0 + 1e-9) + 1e-12);
        // homogeneous of degree n under uniform scaling
        let expected = small * grow.powi(p.degree() as i32);
        prop_assert!((large - expected).abs() <= 1e-6 * expected.max(1e-12));
    }
}
