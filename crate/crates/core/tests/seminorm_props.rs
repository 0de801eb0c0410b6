use monobasis::multiindex::enumerate;
use monobasis::seminorms::{partial_sum_tails, weighted_seminorm, BaseSeminorm, SeminormParams, SupMode};
use monobasis::{CompatibleOrdering, Poly64, Series64, TaylorSeries};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D: usize = 3;
const N: u32 = 4;

fn random_series(seed: u64) -> Series64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = (0..=N)
        .map(|n| {
            let terms = enumerate(n, D).into_iter().filter_map(|m| {
                rng.gen_bool(0.6)
                    .then(|| (m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            });
            Poly64::from_terms(n, terms.collect::<Vec<_>>()).unwrap()
        })
        .collect();
    TaylorSeries::new(parts).unwrap()
}

fn bases() -> Vec<BaseSeminorm> {
    vec![
        BaseSeminorm::Taylor {
            params: SeminormParams::preset(D, N as usize),
            dimension: D,
            mode: SupMode::UpperBound,
        },
        BaseSeminorm::Bounded {
            radius: 0.8,
            dimension: D,
            mode: SupMode::UpperBound,
        },
    ]
}

/// Independent coefficient-sum value of the preset Taylor seminorm.
fn preset_taylor_by_hand(f: &Series64) -> f64 {
    f.parts()
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let alpha = 1.0 / (n as f64 + 1.0);
            p.terms()
                .map(|(m, c)| {
                    m.entries()
                        .iter()
                        .fold(c.norm(), |acc, &(j, e)| acc * (1.0 / j as f64 + alpha).powi(e as i32))
                })
                .sum::<f64>()
        })
        .sum()
}

#[test]
fn preset_matches_direct_formula() {
    for seed in 0..20 {
        let f = random_series(seed);
        let v = bases()[0].value(&f).unwrap();
        assert!((v - preset_taylor_by_hand(&f)).abs() <= 1e-12 * v.max(1.0));
    }
}

#[test]
fn tails_shrink_to_zero_along_row_completion() {
    let phi = CompatibleOrdering::canonical_diagonal();
    for seed in 0..20 {
        let f = random_series(seed);
        for base in bases() {
            let tails = partial_sum_tails(&f, &phi, &base, D, None).unwrap();
            assert!(!tails.is_empty());
            for w in tails.windows(2) {
                assert!(w[1].tail <= w[0].tail + 1e-12);
            }
            assert!(tails.last().unwrap().tail.abs() <= 1e-12);
        }
    }
}

#[test]
fn weights_scale_each_degree() {
    let f = random_series(3);
    let base = &bases()[1];
    let ones = vec![1.0; N as usize + 1];
    assert!((weighted_seminorm(&f, base, &ones).unwrap() - base.value(&f).unwrap()).abs() <= 1e-12);
    let parts = base.part_values(&f).unwrap();
    let w: Vec<f64> = (0..=N).map(|n| (-2.0f64).powi(n as i32)).collect();
    let expected: f64 = parts.iter().zip(&w).map(|(p, w)| p * w.abs()).sum();
    assert!((weighted_seminorm(&f, base, &w).unwrap() - expected).abs() <= 1e-12 * expected);
    assert!(weighted_seminorm(&f, base, &w[..2]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seminorm_axioms(a in any::<u64>(), b in any::<u64>(), re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let (f, g) = (random_series(a), random_series(b));
        let c = Complex64::new(re, im);
        let sum = TaylorSeries::new(
            f.parts().iter().zip(g.parts()).map(|(p, q)| p.try_add(q).unwrap()).collect(),
        ).unwrap();
        for base in bases() {
            let (vf, vg) = (base.value(&f).unwrap(), base.value(&g).unwrap());
            prop_assert!(vf >= 0.0);
            prop_assert!(base.value(&sum).unwrap() <= vf + vg + 1e-12);
            let scaled = base.value(&f.scale(&c)).unwrap();
            prop_assert!((scaled - c.norm() * vf).abs() <= 1e-9 * scaled.max(1.0));
            // degree-additive: the value is the sum of the parts' values
            let parts: f64 = base.part_values(&f).unwrap().iter().sum();
            prop_assert!((parts - vf).abs() <= 1e-12 * vf.max(1.0));
        }
    }
}
