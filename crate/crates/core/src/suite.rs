//! The seeded property suite behind `verify-all`.
//!
//! Every check draws its random instances from ChaCha streams keyed by
//! `(seed, trial)`, so a report depends only on the seed and the settings.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{
    estimate_basis_constant, replay_theorem2_chain, ChainConfig, EmpiricalConstant, EstimatorConfig,
};
use crate::error::Result;
use crate::multiindex::{self, compare_direct, compare_recursive, MultiIndex};
use crate::norms::{check_boundary_identity, check_monotone_fdd, CheckMode, OracleConfig, Polydisc};
use crate::ordering::{prefix_decompose, CompatibleOrdering, PrefixDecomposition};
use crate::polynomial::{exact, sum_all, Complex64, ExactPoly, Poly64, TaylorSeries};
use crate::seminorms::{partial_sum_tails, taylor_seminorm, BaseSeminorm, SeminormParams, SupMode};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

/// Sizes of the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub structure_trials: usize,
    pub norm_trials: usize,
    pub chain_trials: usize,
    /// Witnesses per configuration in the ceiling check.
    pub ceiling_budget: usize,
    pub oracle_points: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            structure_trials: 200,
            norm_trials: 100,
            chain_trials: 100,
            ceiling_budget: 500,
            oracle_points: 64,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Stream `trial` of check `tag` under `seed`.
pub fn trial_rng(seed: u64, tag: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(trial as u64);
    rng
}

/// Dense exponent vectors of a given modulus on `len` positions.
fn compositions(modulus: u32, len: usize) -> Vec<Vec<u32>> {
    if len == 0 {
        return if modulus == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (0..=modulus)
        .flat_map(|last| {
            compositions(modulus - last, len - 1).into_iter().map(move |mut head| {
                head.push(last);
                head
            })
        })
        .collect()
}

fn dense_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let len = |v: &[u32]| v.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1);
    len(a).cmp(&len(b)).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn square_order_equivalence() -> Result<(bool, String)> {
    let mut pairs = 0usize;
    let mut disagreements = 0usize;
    for modulus in 1..=5 {
        let indices: Vec<MultiIndex> = compositions(modulus, 7)
            .iter()
            .map(|v| MultiIndex::from_exponents(v))
            .collect();
        for a in &indices {
            for b in &indices {
                pairs += 1;
                if compare_direct(a, b)? != compare_recursive(a, b)? {
                    disagreements += 1;
                }
            }
        }
    }
    Ok((
        disagreements == 0,
        format!("{pairs} pairs, {disagreements} disagreements"),
    ))
}

fn enumeration_oracle() -> Result<(bool, String)> {
    let mut mismatches = Vec::new();
    for n in 0..=5u32 {
        for d in 1..=6usize {
            let mut dense = compositions(n, d);
            dense.sort_by(|a, b| dense_cmp(a, b));
            let expected: Vec<MultiIndex> = dense.iter().map(|v| MultiIndex::from_exponents(v)).collect();
            if multiindex::enumerate(n, d) != expected {
                mismatches.push(format!("enumerate({n},{d})"));
            }
            for (i, m) in expected.iter().enumerate() {
                let r = i as u64 + 1;
                if multiindex::rank(m)? != r || &multiindex::unrank(n, r)? != m {
                    mismatches.push(format!("rank {m}"));
                }
            }
        }
    }
    let first: Vec<String> = multiindex::enumerate(2, 3).iter().map(|m| m.to_string()).collect();
    let six = ["z1^2", "z1*z2", "z2^2", "z1*z3", "z2*z3", "z3^2"];
    if first != six {
        mismatches.push(format!("degree-2 head {first:?}"));
    }
    let ok = mismatches.is_empty();
    let detail = if ok {
        format!("n<=5, d<=6; head {}", first.join(", "))
    } else {
        mismatches.join("; ")
    };
    Ok((ok, detail))
}

fn prefix_lemma() -> Result<(bool, String)> {
    let phi = CompatibleOrdering::canonical_diagonal();
    let mut running = PrefixDecomposition::empty();
    let mut ok = true;
    for j in 1..=10_000 {
        running.extend(&phi, j)?;
        let covered: usize = running.rows.values().sum();
        ok &= covered == j;
    }
    let mut positions = running.reconstruct(&phi);
    positions.dedup();
    ok &= positions == (1..=10_000).collect::<Vec<_>>();

    // (1,2) and (1,3) sit at positions 2 and 4
    let mut cells: Vec<(usize, usize)> = (1..=20).filter_map(|p| phi.inverse(p)).collect();
    cells.swap(1, 3);
    let detected = prefix_decompose(&CompatibleOrdering::from_table(cells)?, 20).is_err();
    Ok((
        ok && detected,
        format!(
            "j<=10000 reconstructed exactly: {ok}; transposition detected: {detected}; rows at 10000: {}",
            running.rows.len()
        ),
    ))
}

fn random_exact(rng: &mut impl Rng, degree: u32, len: usize) -> Result<ExactPoly> {
    let terms = multiindex::enumerate(degree, len)
        .into_iter()
        .filter_map(|m| {
            rng.gen_bool(0.7).then(|| {
                (
                    m,
                    exact(rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(1..=6)),
                )
            })
        })
        .collect::<Vec<_>>();
    ExactPoly::from_terms(degree, terms)
}

/// Random complex coefficients on all monomials of length `<= len`, some zeroed.
pub fn random_poly(rng: &mut impl Rng, degree: u32, len: usize) -> Result<Poly64> {
    let terms = multiindex::enumerate(degree, len)
        .into_iter()
        .filter_map(|m| {
            rng.gen_bool(0.75)
                .then(|| (m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        })
        .collect::<Vec<_>>();
    Poly64::from_terms(degree, terms)
}

/// Radii drawn uniformly from `[0.2, 2]`.
pub fn random_polydisc(rng: &mut impl Rng, d: usize) -> Result<Polydisc> {
    Polydisc::new((0..d).map(|_| rng.gen_range(0.2..2.0)).collect())
}

fn fdd_structure(config: &SuiteConfig) -> Result<(bool, String)> {
    let failures = (0..config.structure_trials)
        .into_par_iter()
        .map(|trial| -> Result<usize> {
            let mut rng = trial_rng(config.seed, 4, trial);
            let degree = rng.gen_range(1..=4);
            let d = rng.gen_range(1..=5);
            let p = random_exact(&mut rng, degree, d)?;
            let cut = p.max_length().max(1);
            let split = p.length_split();
            let mut ok = sum_all(degree, p.telescope_split(cut)?.iter())? == p;
            for (i, q) in p.telescope_split(cut)?.iter().enumerate() {
                ok &= split.get(&(i + 1)).map_or(q.is_zero(), |expected| expected == q);
            }
            for (&k, q) in &split {
                ok &= q.reduce_by_last_variable(k)?.multiply_by_coordinate(k)? == *q;
            }
            Ok(usize::from(!ok))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok((
        failures == 0,
        format!("{} exact trials, {failures} failures", config.structure_trials),
    ))
}

fn monotone_fdd(config: &SuiteConfig) -> Result<(bool, String)> {
    let oracle = OracleConfig::with_points(config.oracle_points);
    let slacks = (0..config.norm_trials)
        .into_par_iter()
        .map(|trial| -> Result<f64> {
            let mut rng = trial_rng(config.seed, 5, trial);
            let degree = rng.gen_range(1..=3);
            let d = rng.gen_range(2..=4);
            let p = random_poly(&mut rng, degree, d)?;
            let a = random_polydisc(&mut rng, d)?;
            let t = rng.gen_range(2..=d);
            let s = rng.gen_range(1..t);
            Ok(check_monotone_fdd(&p.length_split(), &a, s, t, CheckMode::Oracle(oracle))?.slack)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((
        worst >= -1e-9,
        format!("{} trials, minimum slack {worst:.3e}", config.norm_trials),
    ))
}

fn boundary_identity(config: &SuiteConfig) -> Result<(bool, String)> {
    let oracle = OracleConfig::with_points(config.oracle_points);
    let residuals = (0..config.norm_trials)
        .into_par_iter()
        .map(|trial| -> Result<f64> {
            let mut rng = trial_rng(config.seed, 6, trial);
            let degree = rng.gen_range(1..=3);
            let d = rng.gen_range(1..=4);
            let p = random_poly(&mut rng, degree, d)?;
            let a = random_polydisc(&mut rng, d)?;
            let mut worst: f64 = 0.0;
            for (k, q) in p.length_split() {
                worst = worst.max(check_boundary_identity(&q, k, &a, oracle, 1e-6)?.residual);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    Ok((
        worst <= 1e-6,
        format!("{} trials, maximum residual {worst:.3e}", config.norm_trials),
    ))
}

fn degree_one_constant(config: &SuiteConfig) -> Result<(bool, String)> {
    let a = Polydisc::unit(5)?;
    let est = estimate_basis_constant(
        1,
        5,
        &a,
        EstimatorConfig {
            budget: 200,
            ..Default::default()
        },
        config.seed,
    )?;
    Ok((
        (est.lower_bound - 1.0).abs() <= 1e-9,
        format!("c_1 estimate {:.12} over {} witnesses", est.lower_bound, est.samples),
    ))
}

fn paper_ceiling(config: &SuiteConfig) -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for degree in [2u32, 3] {
        for d in [2usize, 3, 4] {
            let mut rng = trial_rng(config.seed, 8, (degree as usize) * 10 + d);
            let a = random_polydisc(&mut rng, d)?;
            let est = estimate_basis_constant(
                degree,
                d,
                &a,
                EstimatorConfig {
                    budget: config.ceiling_budget,
                    ..Default::default()
                },
                config.seed,
            )?;
            ok &= est.ceiling_violations == 0 && !est.exceeds_ceiling(1e-6);
            parts.push(format!("n={degree} d={d}: {:.6}", est.lower_bound));
        }
    }
    Ok((ok, format!("max ratio vs 3^n; {}", parts.join(", "))))
}

fn chain_replay(config: &SuiteConfig) -> Result<(bool, String)> {
    let chain = ChainConfig {
        oracle: OracleConfig::with_points(config.oracle_points),
        empirical: EmpiricalConstant::Estimate { budget: 20 },
        ..ChainConfig::default()
    };
    let outcomes = (0..config.chain_trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<String>> {
            let mut rng = trial_rng(config.seed, 9, trial);
            let degree = rng.gen_range(2..=3);
            let d = rng.gen_range(2..=3);
            let total = multiindex::count_up_to_length(degree, d).unwrap_or(1) as usize;
            let t = rng.gen_range(2..=total);
            let s = rng.gen_range(1..=t);
            let a = random_polydisc(&mut rng, d)?;
            let coeffs: Vec<Complex64> = (0..t)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let report = replay_theorem2_chain(&coeffs, degree, s, t, &a, chain, config.seed)?;
            Ok((!report.pass).then(|| {
                let failed: Vec<&str> = report
                    .steps
                    .iter()
                    .filter(|s| s.required && !s.holds)
                    .map(|s| s.name)
                    .collect();
                format!("trial {trial}: {}", failed.join(","))
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<String> = outcomes.into_iter().flatten().collect();
    let detail = if failures.is_empty() {
        format!("{} trials, every step holds", config.chain_trials)
    } else {
        failures.join("; ")
    };
    Ok((failures.is_empty(), detail))
}

fn seminorm_worked_value() -> Result<(bool, String)> {
    let n = 10u32;
    let parts = (0..=n)
        .map(|k| {
            Poly64::monomial(
                MultiIndex::from_exponents(&[k]),
                Complex64::new(0.5f64.powi(k as i32), 0.0),
            )
        })
        .collect();
    let f = TaylorSeries::new(parts)?;
    let params = SeminormParams::new(vec![1.0], vec![0.0; n as usize + 1])?;
    let value = taylor_seminorm(&f, &params, 1, SupMode::UpperBound)?;
    let expected = 2.0 - 0.5f64.powi(n as i32);
    let base = BaseSeminorm::Taylor {
        params,
        dimension: 1,
        mode: SupMode::UpperBound,
    };
    let tails = partial_sum_tails(&f, &CompatibleOrdering::canonical_diagonal(), &base, 1, None)?;
    let monotone = tails.windows(2).all(|w| w[1].tail <= w[0].tail + 1e-12);
    Ok((
        (value - expected).abs() <= 1e-12 && monotone,
        format!(
            "value {value:.15} vs {expected:.15}; {} tails non-increasing: {monotone}",
            tails.len()
        ),
    ))
}

/// Runs every check of the suite.
pub fn verify_all(config: SuiteConfig) -> SuiteReport {
    let checks = vec![
        CheckResult::from_result("square-order-equivalence", square_order_equivalence()),
        CheckResult::from_result("enumeration-oracle", enumeration_oracle()),
        CheckResult::from_result("prefix-decomposition", prefix_lemma()),
        CheckResult::from_result("fdd-structure", fdd_structure(&config)),
        CheckResult::from_result("monotone-fdd", monotone_fdd(&config)),
        CheckResult::from_result("boundary-identity", boundary_identity(&config)),
        CheckResult::from_result("degree-one-constant", degree_one_constant(&config)),
        CheckResult::from_result("ceiling", paper_ceiling(&config)),
        CheckResult::from_result("chain-replay", chain_replay(&config)),
        CheckResult::from_result("seminorm-worked-value", seminorm_worked_value()),
    ];
    let passed = checks.iter().all(|c| c.passed);
    SuiteReport { config, checks, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_reference_order() {
        assert_eq!(dense_cmp(&[2, 0], &[0, 2]), Ordering::Less);
        assert_eq!(dense_cmp(&[0, 1, 0], &[2, 0, 0]), Ordering::Greater);
        assert_eq!(dense_cmp(&[1, 1, 0], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn small_suite_passes_and_repeats() {
        let config = SuiteConfig {
            structure_trials: 10,
            norm_trials: 4,
            chain_trials: 4,
            ceiling_budget: 10,
            oracle_points: 16,
            ..SuiteConfig::new(3)
        };
        let a = verify_all(config);
        for c in &a.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        let b = verify_all(config);
        assert_eq!(a.checks, b.checks);
    }
}
