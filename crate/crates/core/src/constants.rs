//! Basis constants of the square-ordered monomials of degree `n` under a
//! polydisc sup-norm.
//!
//! The basis constant `c_n` is the supremum of `‖Σ_{m<=s} α_m P_m‖_A /
//! ‖Σ_{m<=t} α_m P_m‖_A` over coefficients and splits `s < t`, where `P_m`
//! is the `m`-th degree-`n` monomial in square order. The known ceiling is
//! `3^n`, obtained inductively from `c_{n+1} <= 1 + 2·3^n`. Everything here
//! produces lower bounds for `c_n` and replays the inductive estimate on
//! concrete coefficient vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::multiindex::{self, MultiIndex};
use crate::norms::{oracle_with, relative_residual, OracleConfig, Polydisc, DEFAULT_REL_TOL};
use crate::polynomial::{sum_all, Complex64, Poly64};

/// Largest number of basis monomials the estimator will search over.
pub const MONOMIAL_CAP: u64 = 70;
/// Denominators below this are rejected.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// `3^n`.
pub fn ceiling(degree: u32) -> f64 {
    3f64.powi(degree as i32)
}

/// The first `count` degree-`degree` monomials in square order.
pub fn basis_monomials(degree: u32, count: usize) -> Result<Vec<MultiIndex>> {
    (1..=count as u64).map(|r| multiindex::unrank(degree, r)).collect()
}

/// `Σ_{m=from}^{to} α_m P_m` (1-based, inclusive) over a precomputed basis.
pub fn partial_sum(basis: &[MultiIndex], degree: u32, coeffs: &[Complex64], from: usize, to: usize) -> Result<Poly64> {
    let terms = (from.max(1)..=to).map(|m| (basis[m - 1].clone(), coeffs[m - 1]));
    Poly64::from_terms(degree, terms)
}

fn check_split(coeffs: &[Complex64], s: usize, t: usize, allow_equal: bool) -> Result<()> {
    let ordered = if allow_equal { s <= t } else { s < t };
    if s == 0 || !ordered || t > coeffs.len() {
        return Err(Error::InvalidSplit {
            s,
            t,
            len: coeffs.len(),
        });
    }
    Ok(())
}

fn check_basis_fits(basis: &[MultiIndex], polydisc: &Polydisc) -> Result<()> {
    if let Some(m) = basis.iter().find(|m| m.length() > polydisc.dimension()) {
        return Err(Error::DimensionExceeded {
            length: m.length(),
            dimension: polydisc.dimension(),
        });
    }
    Ok(())
}

/// `‖Σ_{m<=s} α_m P_m‖_A / ‖Σ_{m<=t} α_m P_m‖_A` with oracle norms.
pub fn partial_sum_ratio(
    coeffs: &[Complex64],
    degree: u32,
    s: usize,
    t: usize,
    polydisc: &Polydisc,
    oracle: OracleConfig,
) -> Result<f64> {
    check_split(coeffs, s, t, false)?;
    let basis = basis_monomials(degree, t)?;
    check_basis_fits(&basis, polydisc)?;
    ratio_on_basis(&basis, degree, coeffs, s, t, polydisc, oracle)
}

fn ratio_on_basis(
    basis: &[MultiIndex],
    degree: u32,
    coeffs: &[Complex64],
    s: usize,
    t: usize,
    polydisc: &Polydisc,
    oracle: OracleConfig,
) -> Result<f64> {
    let denominator = oracle_with(&partial_sum(basis, degree, coeffs, 1, t)?, polydisc, oracle)?;
    if denominator < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator(denominator));
    }
    let numerator = oracle_with(&partial_sum(basis, degree, coeffs, 1, s)?, polydisc, oracle)?;
    Ok(numerator / denominator)
}

/// Coefficients and split realizing a ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub coefficients: Vec<Complex64>,
    pub s: usize,
    pub t: usize,
}

/// Best lower bound found for `c_n`.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantEstimate {
    pub degree: u32,
    pub dimension: usize,
    pub radii: Polydisc,
    pub lower_bound: f64,
    pub witness: Witness,
    /// `3^n`.
    pub ceiling: f64,
    /// Witnesses evaluated (degenerate ones included).
    pub samples: usize,
    /// Evaluated ratios above `ceiling + 1e-6`.
    pub ceiling_violations: usize,
}

impl ConstantEstimate {
    pub fn exceeds_ceiling(&self, tol: f64) -> bool {
        self.lower_bound > self.ceiling + tol
    }
}

/// Settings for [`estimate_basis_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EstimatorConfig {
    /// Total witness evaluations.
    pub budget: usize,
    pub oracle: OracleConfig,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            budget: 2000,
            oracle: OracleConfig {
                points_per_dim: 16,
                candidates: 3,
            },
        }
    }
}

/// Every fourth evaluation perturbs the incumbent instead of sampling.
const ASCENT_PERIOD: usize = 4;

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_coefficient(rng: &mut ChaCha8Rng, family: u32) -> Complex64 {
    match family {
        0 => Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..TAU)),
        1 => Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
        _ => {
            if rng.gen_bool(0.5) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
            }
        }
    }
}

/// Rescales so the largest modulus is 1; the ratio is scale invariant.
fn normalize(coeffs: &mut [Complex64]) {
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak > 0.0 {
        coeffs.iter_mut().for_each(|c| *c /= peak);
    }
}

fn sample_witness(rng: &mut ChaCha8Rng, monomials: usize) -> Witness {
    let t = rng.gen_range(2..=monomials);
    let s = rng.gen_range(1..t);
    let family = rng.gen_range(0..3);
    let mut coefficients: Vec<Complex64> = (0..t).map(|_| random_coefficient(rng, family)).collect();
    normalize(&mut coefficients);
    Witness { coefficients, s, t }
}

fn perturb_witness(rng: &mut ChaCha8Rng, incumbent: &Witness, monomials: usize) -> Witness {
    let mut w = incumbent.clone();
    match rng.gen_range(0..4) {
        0 if w.s + 1 < w.t => w.s += 1,
        1 if w.s > 1 => w.s -= 1,
        2 if w.t < monomials => {
            w.t += 1;
            w.coefficients.push(Complex64::new(0.0, 0.0));
        }
        _ => {
            let i = rng.gen_range(0..w.t);
            let step = rng.gen_range(0.0..0.5);
            w.coefficients[i] += Complex64::from_polar(step, rng.gen_range(0.0..TAU));
        }
    }
    normalize(&mut w.coefficients);
    w
}

/// Searches for a large partial-sum ratio among the degree-`degree`
/// monomials of length `<= dimension`. Evaluation 0 is the witness
/// `α = e_1` (ratio 1); afterwards every [`ASCENT_PERIOD`]-th evaluation
/// perturbs the incumbent and the rest are fresh samples, each drawn from an
/// RNG stream keyed by the evaluation index. The evaluation sequence does
/// not depend on the budget, so the estimate is monotone in it.
pub fn estimate_basis_constant(
    degree: u32,
    dimension: usize,
    polydisc: &Polydisc,
    config: EstimatorConfig,
    seed: u64,
) -> Result<ConstantEstimate> {
    if degree == 0 {
        return Err(Error::InvalidParams("degree must be at least 1".into()));
    }
    let disc = polydisc.truncate(dimension)?;
    let count = multiindex::count_up_to_length(degree, dimension).unwrap_or(u64::MAX);
    if count > MONOMIAL_CAP {
        return Err(Error::TooManyMonomials {
            count,
            cap: MONOMIAL_CAP,
        });
    }
    let monomials = count as usize;
    let basis = basis_monomials(degree, monomials)?;
    let ceiling = ceiling(degree);

    let mut estimate = ConstantEstimate {
        degree,
        dimension,
        radii: disc.clone(),
        lower_bound: 1.0,
        witness: Witness {
            coefficients: vec![Complex64::new(1.0, 0.0)],
            s: 1,
            t: 1,
        },
        ceiling,
        samples: 0,
        ceiling_violations: 0,
    };
    if monomials < 2 {
        // a single basis vector: every partial sum is the full sum
        return Ok(estimate);
    }

    let mut incumbent: Option<(f64, Witness)> = None;
    for trial in 0..config.budget {
        let witness = if trial == 0 {
            Witness {
                coefficients: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                s: 1,
                t: 2,
            }
        } else {
            let mut rng = trial_rng(seed, trial);
            match &incumbent {
                Some((_, best)) if trial % ASCENT_PERIOD == 0 => perturb_witness(&mut rng, best, monomials),
                _ => sample_witness(&mut rng, monomials),
            }
        };
        estimate.samples += 1;
        let ratio = match ratio_on_basis(
            &basis,
            degree,
            &witness.coefficients,
            witness.s,
            witness.t,
            &disc,
            config.oracle,
        ) {
            Ok(r) => r,
            Err(Error::DegenerateDenominator(_)) => continue,
            Err(e) => return Err(e),
        };
        if ratio > ceiling + 1e-6 {
            estimate.ceiling_violations += 1;
        }
        if incumbent.as_ref().is_none_or(|(best, _)| ratio > *best) {
            incumbent = Some((ratio, witness));
        }
    }
    if let Some((ratio, witness)) = incumbent {
        estimate.lower_bound = ratio;
        estimate.witness = witness;
    }
    Ok(estimate)
}

/// Where the empirical degree-`n` constant for the chain replay comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EmpiricalConstant {
    Given(f64),
    /// Run [`estimate_basis_constant`] with this many evaluations.
    Estimate {
        budget: usize,
    },
}

/// Settings for [`replay_theorem2_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainConfig {
    pub oracle: OracleConfig,
    pub tol: f64,
    pub empirical: EmpiricalConstant,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            oracle: OracleConfig::default(),
            tol: DEFAULT_REL_TOL,
            empirical: EmpiricalConstant::Estimate { budget: 200 },
        }
    }
}

/// One inequality or identity of the replayed estimate.
#[derive(Debug, Clone, Serialize)]
pub struct ChainStep {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Informational steps do not affect [`ChainReport::pass`].
    pub required: bool,
}

/// Every intermediate quantity of the inductive estimate for one
/// coefficient vector and split.
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    /// Degree `n + 1` of the monomials being split.
    pub degree: u32,
    pub s: usize,
    pub t: usize,
    /// `k + 1` is the length of the `s`-th monomial.
    pub k: usize,
    /// Length of the `t`-th monomial.
    pub k_star: usize,
    /// First rank whose monomial has length `k + 1`.
    pub m0: usize,
    /// Last rank `<= t` whose monomial has length `k + 1`.
    pub s_star: usize,
    pub lambda: f64,
    /// `Σ_{u<=k} Q_u + Σ_{u=k+1}^{k*} Q*_u` equals the full sum term by term.
    pub regrouping_exact: bool,
    /// `Q_{k+1} = z_{k+1} · Σ_{m=m0}^{s} α_m P_{n, m-m0+1}` and the same for
    /// `Q*_{k+1}` up to `s*`, checked exactly.
    pub factorization_exact: bool,
    pub norm_prefix: f64,
    pub norm_full: f64,
    /// `‖Σ_{u<=k} Q_u‖`.
    pub norm_lower_blocks: f64,
    pub norm_q: f64,
    pub norm_r: f64,
    pub norm_q_star: f64,
    pub norm_r_star: f64,
    /// `‖Σ_{u=k+1}^{k*} Q*_u‖`.
    pub norm_upper_blocks: f64,
    /// `‖Σ_{m=m0}^{t} α_m P_m‖`, for the alternative reading of the final bound.
    pub norm_from_m0: f64,
    pub empirical_constant: f64,
    pub steps: Vec<ChainStep>,
    pub pass: bool,
}

impl ChainReport {
    pub fn step(&self, name: &str) -> Option<&ChainStep> {
        self.steps.iter().find(|s| s.name == name)
    }
}

fn inequality(name: &'static str, lhs: f64, rhs: f64, tol: f64, required: bool) -> ChainStep {
    let scale = lhs.abs().max(rhs.abs()).max(DENOMINATOR_FLOOR);
    ChainStep {
        name,
        lhs,
        rhs,
        holds: lhs <= rhs + tol * scale,
        required,
    }
}

fn identity(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> ChainStep {
    ChainStep {
        name,
        lhs,
        rhs,
        holds: relative_residual(lhs, rhs) <= tol,
        required: true,
    }
}

/// Replays the inductive bound `‖Σ_{m<=s}‖ <= (1 + 2·3^n) ‖Σ_{m<=t}‖` on
/// one coefficient vector of degree `n + 1 = degree`, computing every
/// block and norm the argument uses and checking each step with oracle
/// norms. `s == t` is accepted as the degenerate split.
pub fn replay_theorem2_chain(
    coeffs: &[Complex64],
    degree: u32,
    s: usize,
    t: usize,
    polydisc: &Polydisc,
    config: ChainConfig,
    seed: u64,
) -> Result<ChainReport> {
    if degree < 2 {
        return Err(Error::InvalidParams("the chain needs degree n + 1 >= 2".into()));
    }
    check_split(coeffs, s, t, true)?;
    let n = degree - 1;
    let basis = basis_monomials(degree, t)?;
    check_basis_fits(&basis, polydisc)?;
    let norm = |p: &Poly64| oracle_with(p, polydisc, config.oracle);

    let k = basis[s - 1].length() - 1;
    let k_star = basis[t - 1].length();
    let m0 = multiindex::count_up_to_length(degree, k).expect("within the rank caps") as usize + 1;
    let block = multiindex::count_with_length(degree, k + 1).expect("within the rank caps") as usize;
    let s_star = t.min(m0 + block - 1);
    let lambda = polydisc.radius(k + 1);

    let length_of = |m: usize| basis[m - 1].length();
    let group = |from: usize, to: usize, u: usize| -> Result<Poly64> {
        let terms = (from..=to)
            .filter(|&m| length_of(m) == u)
            .map(|m| (basis[m - 1].clone(), coeffs[m - 1]));
        Poly64::from_terms(degree, terms)
    };

    // Q_u = Σ_{m<=s, l=u}, Q*_u = Σ_{s<m<=t, l=u} for u > k + 1
    let q_blocks: Vec<Poly64> = (1..=k + 1).map(|u| group(1, s, u)).collect::<Result<_>>()?;
    let lower_blocks = sum_all(degree, &q_blocks[..k])?;
    let q_top = q_blocks[k].clone();
    let q_star_top = q_top.try_add(&group(s + 1, t, k + 1)?)?;
    let q_star_rest: Vec<Poly64> = (k + 2..=k_star).map(|u| group(s + 1, t, u)).collect::<Result<_>>()?;
    let upper_blocks = sum_all(degree, std::iter::once(&q_star_top).chain(&q_star_rest))?;

    let prefix = partial_sum(&basis, degree, coeffs, 1, s)?;
    let full = partial_sum(&basis, degree, coeffs, 1, t)?;
    let from_m0 = partial_sum(&basis, degree, coeffs, m0, t)?;
    let regrouping_exact = lower_blocks.try_add(&upper_blocks)? == full;

    // the block of length k + 1 is the degree-n basis shifted by m0 - 1
    let r = q_top.reduce_by_last_variable(k + 1)?;
    let r_star = q_star_top.reduce_by_last_variable(k + 1)?;
    let lower_basis = basis_monomials(n, s_star + 1 - m0)?;
    let shifted = |to: usize| -> Result<Poly64> {
        Poly64::from_terms(n, (m0..=to).map(|m| (lower_basis[m - m0].clone(), coeffs[m - 1])))
    };
    let factorization_exact = r == shifted(s)?
        && r_star == shifted(s_star)?
        && q_top == partial_sum(&basis, degree, coeffs, m0, s)?
        && q_star_top == partial_sum(&basis, degree, coeffs, m0, s_star)?;

    let norm_full = norm(&full)?;
    if norm_full < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator(norm_full));
    }
    let norm_prefix = norm(&prefix)?;
    let norm_lower_blocks = norm(&lower_blocks)?;
    let norm_q = norm(&q_top)?;
    let norm_r = norm(&r)?;
    let norm_q_star = norm(&q_star_top)?;
    let norm_r_star = norm(&r_star)?;
    let norm_upper_blocks = norm(&upper_blocks)?;
    let norm_from_m0 = norm(&from_m0)?;

    let empirical_constant = match config.empirical {
        EmpiricalConstant::Given(c) => c,
        EmpiricalConstant::Estimate { budget } => {
            let estimator = EstimatorConfig {
                budget,
                oracle: EstimatorConfig::default().oracle,
            };
            let dim = polydisc.dimension().min(MAX_ESTIMATE_DIM);
            let dim = (1..=dim)
                .rev()
                .find(|&d| multiindex::count_up_to_length(n, d).is_some_and(|c| c <= MONOMIAL_CAP))
                .unwrap_or(1);
            estimate_basis_constant(n, dim, polydisc, estimator, seed)?.lower_bound
        }
    };

    let c_n = ceiling(n);
    let tol = config.tol;
    let steps = vec![
        inequality("eq13-lower-blocks", norm_lower_blocks, norm_full, tol, true),
        identity("eq14-top-block", norm_q, lambda * norm_r, tol),
        identity("eq15-top-block-star", norm_q_star, lambda * norm_r_star, tol),
        inequality("induction", norm_r, c_n * norm_r_star, tol, true),
        inequality("monotone-upper-blocks", norm_q_star, norm_upper_blocks, tol, true),
        inequality("triangle", norm_upper_blocks, norm_full + norm_lower_blocks, tol, true),
        inequality("top-block-bound", norm_q, 2.0 * c_n * norm_full, tol, true),
        inequality("final-bound", norm_prefix, (1.0 + 2.0 * c_n) * norm_full, tol, true),
        inequality(
            "final-bound-empirical",
            norm_prefix,
            (1.0 + 2.0 * empirical_constant) * norm_full,
            tol,
            false,
        ),
        inequality(
            "final-bound-from-m0",
            norm_prefix,
            (1.0 + 2.0 * c_n) * norm_from_m0,
            tol,
            false,
        ),
    ];
    let pass = regrouping_exact && factorization_exact && steps.iter().all(|s| s.holds || !s.required);
    Ok(ChainReport {
        degree,
        s,
        t,
        k,
        k_star,
        m0,
        s_star,
        lambda,
        regrouping_exact,
        factorization_exact,
        norm_prefix,
        norm_full,
        norm_lower_blocks,
        norm_q,
        norm_r,
        norm_q_star,
        norm_r_star,
        norm_upper_blocks,
        norm_from_m0,
        empirical_constant,
        steps,
        pass,
    })
}

/// Oracle dimension cap used when the chain estimates `c_n` itself.
const MAX_ESTIMATE_DIM: usize = 5;

/// Growth of `c_n^{1/n}` over a list of estimates.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub label: String,
    /// `(n, lower_bound^{1/n})`.
    pub roots: Vec<(u32, f64)>,
    pub max_root: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Checks `max_n c_n^{1/n} <= 3 + tol`.
pub fn growth_check(estimates: &[ConstantEstimate], label: &str, tol: f64) -> GrowthReport {
    let roots: Vec<(u32, f64)> = estimates
        .iter()
        .map(|e| (e.degree, e.lower_bound.powf(1.0 / e.degree as f64)))
        .collect();
    let max_root = roots.iter().map(|&(_, r)| r).fold(f64::NEG_INFINITY, f64::max);
    GrowthReport {
        label: label.to_string(),
        roots,
        max_root,
        bound: 3.0,
        pass: max_root <= 3.0 + tol,
    }
}
