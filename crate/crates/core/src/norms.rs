//! Sup-norms of homogeneous polynomials over polydiscs
//! `A = {z : |z_j| <= λ_j}`.
//!
//! A polynomial attains its maximum modulus over a polydisc on the
//! distinguished boundary `|z_j| = λ_j`, so every estimator here searches
//! phases `θ ∈ [0, 2π)^d` only and evaluates
//! `P(λ_1 e^{iθ_1}, ..., λ_d e^{iθ_d})`.
//!
//! * [`upper_bound`] is the coefficient sum `Σ |a_m| λ^m`.
//! * [`lower_bound_optimize`] is a seeded multi-start coordinate-wise phase
//!   search; its value is attained at a returned point.
//! * [`oracle_grid`] scans a uniform phase grid and polishes the best cells.
//!   It is the brute-force reference for small dimensions.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::{sum_all, Complex64, Poly64};

/// Relative tolerance for the identity checks.
pub const DEFAULT_REL_TOL: f64 = 1e-6;
/// Default points per dimension of the grid oracle.
pub const DEFAULT_GRID_POINTS: usize = 64;
/// Largest polydisc dimension accepted by the grid oracle.
pub const MAX_ORACLE_DIM: usize = 5;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Radii `(λ_1, ..., λ_d)` of a polydisc truncated to `d` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polydisc {
    radii: Vec<f64>,
}

impl Polydisc {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidPolydisc("at least one radius is required".into()));
        }
        if let Some(bad) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidPolydisc(format!(
                "radii must be finite and positive, got {bad}"
            )));
        }
        Ok(Self { radii })
    }

    /// The polydisc with `d` radii equal to `radius`.
    pub fn uniform(d: usize, radius: f64) -> Result<Self> {
        Self::new(vec![radius; d])
    }

    pub fn unit(d: usize) -> Result<Self> {
        Self::uniform(d, 1.0)
    }

    pub fn dimension(&self) -> usize {
        self.radii.len()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Radius of the 1-based coordinate `j`.
    pub fn radius(&self, j: usize) -> f64 {
        self.radii[j - 1]
    }

    /// The first `d` coordinates.
    pub fn truncate(&self, d: usize) -> Result<Self> {
        if d > self.dimension() {
            return Err(Error::DimensionExceeded {
                length: d,
                dimension: self.dimension(),
            });
        }
        Self::new(self.radii[..d].to_vec())
    }

    fn check_fits(&self, p: &Poly64) -> Result<()> {
        let length = p.max_length();
        if length > self.dimension() {
            return Err(Error::DimensionExceeded {
                length,
                dimension: self.dimension(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for Polydisc {
    type Error = Error;

    fn try_from(radii: Vec<f64>) -> Result<Self> {
        Self::new(radii)
    }
}

impl From<Polydisc> for Vec<f64> {
    fn from(p: Polydisc) -> Self {
        p.radii
    }
}

/// How a bracket endpoint was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    CoefficientSum,
    Grid,
    Optimized,
}

/// Interval `[lower, upper]` containing `‖P‖_A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
    pub method: NormMethod,
}

impl NormBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }
}

/// Search effort for [`lower_bound_optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizeBudget {
    pub restarts: usize,
    /// Coordinate sweeps per restart.
    pub iterations: usize,
}

impl Default for OptimizeBudget {
    fn default() -> Self {
        Self {
            restarts: 32,
            iterations: 200,
        }
    }
}

/// Settings for [`oracle_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub points_per_dim: usize,
    /// Best grid cells handed to the refinement pass.
    pub candidates: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            points_per_dim: DEFAULT_GRID_POINTS,
            candidates: 4,
        }
    }
}

impl OracleConfig {
    pub fn with_points(points_per_dim: usize) -> Self {
        Self {
            points_per_dim,
            ..Self::default()
        }
    }
}

/// `Σ_m |a_m| λ^m`, an upper bound for `‖P‖_A`.
pub fn upper_bound(p: &Poly64, polydisc: &Polydisc) -> Result<f64> {
    polydisc.check_fits(p)?;
    Ok(p.terms()
        .map(|(index, c)| {
            index
                .entries()
                .iter()
                .fold(c.norm(), |acc, &(j, e)| acc * polydisc.radius(j).powi(e as i32))
        })
        .fold(0.0, |acc, v| acc + v))
}

/// `P` restricted to the distinguished boundary, as a trigonometric
/// polynomial in the phases of the coordinates it actually uses.
#[derive(Debug, Clone)]
pub(crate) struct TorusPoly {
    /// Number of active coordinates.
    dims: usize,
    /// `a_m λ^m` together with dense exponents over the active coordinates.
    terms: Vec<(Complex64, Vec<u32>)>,
    max_exponent: Vec<u32>,
}

impl TorusPoly {
    pub(crate) fn new(p: &Poly64, polydisc: &Polydisc) -> Result<Self> {
        polydisc.check_fits(p)?;
        let mut active: Vec<usize> = p
            .terms()
            .flat_map(|(m, _)| m.entries().iter().map(|&(j, _)| j))
            .collect();
        active.sort_unstable();
        active.dedup();
        let slot: BTreeMap<usize, usize> = active.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let mut max_exponent = vec![0; active.len()];
        let terms = p
            .terms()
            .map(|(m, c)| {
                let mut exps = vec![0; active.len()];
                let mut scale = 1.0;
                for &(j, e) in m.entries() {
                    let s = slot[&j];
                    exps[s] = e;
                    max_exponent[s] = max_exponent[s].max(e);
                    scale *= polydisc.radius(j).powi(e as i32);
                }
                (*c * scale, exps)
            })
            .collect();
        Ok(Self {
            dims: active.len(),
            terms,
            max_exponent,
        })
    }

    fn value(&self, theta: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, exps)| {
                let phase: f64 = exps.iter().zip(theta).map(|(&e, &t)| e as f64 * t).sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    fn modulus(&self, theta: &[f64]) -> f64 {
        self.value(theta).norm()
    }

    /// Coefficients `A_e` with `P = Σ_e A_e e^{i e θ_axis}` when the other
    /// phases are held at `theta`.
    fn slice(&self, theta: &[f64], axis: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.max_exponent[axis] as usize + 1];
        for (c, exps) in &self.terms {
            let phase: f64 = exps
                .iter()
                .zip(theta)
                .enumerate()
                .filter(|&(i, _)| i != axis)
                .map(|(_, (&e, &t))| e as f64 * t)
                .sum();
            out[exps[axis] as usize] += c * Complex64::from_polar(1.0, phase);
        }
        out
    }
}

fn slice_modulus(coeffs: &[Complex64], t: f64) -> f64 {
    // Horner in w = e^{it}
    let w = Complex64::from_polar(1.0, t);
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a)
        .norm()
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Global maximum of `|Σ_e A_e e^{ieθ}|` over the circle: a uniform scan
/// anchored at `current`, then golden-section refinement around the best
/// sample. Never returns a value below the one at `current`.
fn maximize_slice(coeffs: &[Complex64], current: f64) -> (f64, f64) {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return (current, slice_modulus(coeffs, current));
    }
    let samples = 8 * (degree + 1);
    let step = TAU / samples as f64;
    let (mut best_t, mut best_v) = (current, slice_modulus(coeffs, current));
    for i in 1..samples {
        let t = current + step * i as f64;
        let v = slice_modulus(coeffs, t);
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    let (t, v) = golden_section_max(|t| slice_modulus(coeffs, t), best_t - step, best_t + step, 1e-11);
    if v > best_v {
        (t.rem_euclid(TAU), v)
    } else {
        (best_t.rem_euclid(TAU), best_v)
    }
}

/// Coordinate ascent over the phases in `free`, each step a global line
/// maximization. Stops after `max_sweeps` or when a sweep gains less than
/// `rel_tol` relative. Returns the modulus re-evaluated at the final point.
fn coordinate_ascent(poly: &TorusPoly, theta: &mut [f64], free: &[usize], max_sweeps: usize, rel_tol: f64) -> f64 {
    let mut value = poly.modulus(theta);
    for _ in 0..max_sweeps {
        let before = value;
        for &axis in free {
            let coeffs = poly.slice(theta, axis);
            let (t, v) = maximize_slice(&coeffs, theta[axis]);
            if v > value {
                theta[axis] = t;
                value = v;
            }
        }
        if value - before <= rel_tol * value.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    poly.modulus(theta)
}

/// A point of the distinguished boundary together with `|P|` there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub value: f64,
    /// Phases of coordinates `1..=d`.
    pub phases: Vec<f64>,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn expand_phases(p: &Poly64, polydisc: &Polydisc, theta: &[f64]) -> Vec<f64> {
    let mut active: Vec<usize> = p
        .terms()
        .flat_map(|(m, _)| m.entries().iter().map(|&(j, _)| j))
        .collect();
    active.sort_unstable();
    active.dedup();
    let mut phases = vec![0.0; polydisc.dimension()];
    for (slot, j) in active.into_iter().enumerate() {
        phases[j - 1] = theta[slot];
    }
    phases
}

/// Seeded multi-start phase search; the returned value is attained at the
/// returned point. Restart 0 starts from all phases zero, the others from
/// uniformly random phases. Restarts run in parallel and are reduced in
/// index order, so the result depends only on `(p, polydisc, budget, seed)`.
pub fn lower_bound_search(p: &Poly64, polydisc: &Polydisc, budget: OptimizeBudget, seed: u64) -> Result<BoundaryPoint> {
    let poly = TorusPoly::new(p, polydisc)?;
    let free: Vec<usize> = (0..poly.dims).collect();
    let runs: Vec<(f64, Vec<f64>)> = (0..budget.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut theta = vec![0.0; poly.dims];
            if restart > 0 {
                let mut rng = restart_rng(seed, restart);
                theta.iter_mut().for_each(|t| *t = rng.gen_range(0.0..TAU));
            }
            let value = coordinate_ascent(&poly, &mut theta, &free, budget.iterations, 0.0);
            (value, theta)
        })
        .collect();
    let (value, theta) =
        runs.into_iter().fold(
            (f64::NEG_INFINITY, Vec::new()),
            |best, run| {
                if run.0 > best.0 {
                    run
                } else {
                    best
                }
            },
        );
    Ok(BoundaryPoint {
        value,
        phases: expand_phases(p, polydisc, &theta),
    })
}

/// Certified lower bound for `‖P‖_A` from [`lower_bound_search`].
pub fn lower_bound_optimize(p: &Poly64, polydisc: &Polydisc, budget: OptimizeBudget, seed: u64) -> Result<f64> {
    lower_bound_search(p, polydisc, budget, seed).map(|point| point.value)
}

/// Keeps the best `capacity` grid cells, earliest first on ties.
struct TopCells {
    capacity: usize,
    cells: Vec<(f64, Vec<usize>)>,
}

impl TopCells {
    fn offer(&mut self, value: f64, cell: &[usize]) {
        if self.cells.len() == self.capacity && self.cells.last().is_some_and(|(v, _)| *v >= value) {
            return;
        }
        let at = self.cells.partition_point(|(v, _)| *v >= value);
        self.cells.insert(at, (value, cell.to_vec()));
        self.cells.truncate(self.capacity);
    }
}

/// Streams `P` over the phase grid of the free axes. The coefficient tensor
/// is indexed by exponents of the free axes (axis 0 slowest); each level
/// collapses its leading axis against the twiddles of one grid value.
fn scan_grid(
    tensor: &[Complex64],
    shape: &[usize],
    twiddles: &[Vec<Vec<Complex64>>],
    cell: &mut Vec<usize>,
    top: &mut TopCells,
) {
    let Some((&lead, rest)) = shape.split_first() else {
        top.offer(tensor[0].norm(), cell);
        return;
    };
    let stride: usize = rest.iter().product();
    let axis_twiddles = &twiddles[0];
    let mut collapsed = vec![Complex64::new(0.0, 0.0); stride];
    for (k, row) in axis_twiddles.iter().enumerate() {
        collapsed.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for (e, w) in row.iter().enumerate().take(lead) {
            let block = &tensor[e * stride..(e + 1) * stride];
            for (acc, &x) in collapsed.iter_mut().zip(block) {
                *acc += x * w;
            }
        }
        cell.push(k);
        scan_grid(&collapsed, rest, &twiddles[1..], cell, top);
        cell.pop();
    }
}

fn oracle_point(p: &Poly64, polydisc: &Polydisc, config: OracleConfig) -> Result<(f64, Vec<f64>)> {
    if polydisc.dimension() > MAX_ORACLE_DIM {
        return Err(Error::OracleDimension(polydisc.dimension()));
    }
    if config.points_per_dim < 8 {
        return Err(Error::OracleGrid(config.points_per_dim));
    }
    let poly = TorusPoly::new(p, polydisc)?;
    if poly.dims == 0 {
        return Ok((poly.modulus(&[]), Vec::new()));
    }
    let g = config.points_per_dim;
    // |P| is invariant under a common phase shift of all coordinates, so the
    // first active phase can be pinned to 0 without losing any grid value.
    let shape: Vec<usize> = poly.max_exponent[1..].iter().map(|&e| e as usize + 1).collect();
    let mut tensor = vec![Complex64::new(0.0, 0.0); shape.iter().product()];
    for (c, exps) in &poly.terms {
        let flat = exps[1..]
            .iter()
            .zip(&shape)
            .fold(0, |acc, (&e, &n)| acc * n + e as usize);
        tensor[flat] += c;
    }
    let twiddles: Vec<Vec<Vec<Complex64>>> = shape
        .iter()
        .map(|&n| {
            (0..g)
                .map(|k| {
                    (0..n)
                        .map(|e| Complex64::from_polar(1.0, TAU * (k * e) as f64 / g as f64))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut top = TopCells {
        capacity: config.candidates.max(1),
        cells: Vec::new(),
    };
    scan_grid(&tensor, &shape, &twiddles, &mut Vec::new(), &mut top);

    let free: Vec<usize> = (1..poly.dims).collect();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for (_, cell) in top.cells {
        let mut theta = vec![0.0; poly.dims];
        for (slot, k) in cell.into_iter().enumerate() {
            theta[slot + 1] = TAU * k as f64 / g as f64;
        }
        let value = coordinate_ascent(&poly, &mut theta, &free, 1000, 1e-15);
        if value > best.0 {
            best = (value, theta);
        }
    }
    Ok(best)
}

/// Brute-force reference value for `‖P‖_A`: the best point of a uniform
/// phase grid with `points_per_dim` points per coordinate, followed by one
/// local refinement pass. Requires `d <= 5`.
pub fn oracle_grid(p: &Poly64, polydisc: &Polydisc, points_per_dim: usize) -> Result<f64> {
    oracle_with(p, polydisc, OracleConfig::with_points(points_per_dim))
}

/// [`oracle_grid`] with explicit settings.
pub fn oracle_with(p: &Poly64, polydisc: &Polydisc, config: OracleConfig) -> Result<f64> {
    oracle_point(p, polydisc, config).map(|(v, _)| v)
}

/// Settings for [`polydisc_norm`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormConfig {
    pub budget: OptimizeBudget,
    pub seed: u64,
}

/// `[lower_bound_optimize, upper_bound]`.
pub fn polydisc_norm(p: &Poly64, polydisc: &Polydisc, config: NormConfig) -> Result<NormBracket> {
    let upper = upper_bound(p, polydisc)?;
    let lower = lower_bound_optimize(p, polydisc, config.budget, config.seed)?;
    Ok(NormBracket {
        // the attained value can exceed the coefficient sum only by rounding
        lower: lower.min(upper),
        upper,
        method: NormMethod::Optimized,
    })
}

/// `[oracle_grid, upper_bound]`.
pub fn oracle_bracket(p: &Poly64, polydisc: &Polydisc, config: OracleConfig) -> Result<NormBracket> {
    let upper = upper_bound(p, polydisc)?;
    let lower = oracle_with(p, polydisc, config)?;
    Ok(NormBracket {
        lower: lower.min(upper),
        upper,
        method: NormMethod::Grid,
    })
}

/// How [`check_monotone_fdd`] evaluates norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckMode {
    Oracle(OracleConfig),
    Bracket(NormConfig),
}

impl CheckMode {
    /// Oracle norms for `d <= 5`, brackets above.
    pub fn for_dimension(d: usize, seed: u64) -> Self {
        if d <= MAX_ORACLE_DIM {
            Self::Oracle(OracleConfig::default())
        } else {
            Self::Bracket(NormConfig {
                seed,
                ..NormConfig::default()
            })
        }
    }
}

/// Result of comparing a prefix of the length decomposition with a longer one.
#[derive(Debug, Clone, Serialize)]
pub struct FddReport {
    pub s: usize,
    pub t: usize,
    pub prefix: NormBracket,
    pub full: NormBracket,
    /// `full - prefix`, in the sense appropriate to the mode.
    pub slack: f64,
    pub pass: bool,
}

/// Compares `‖Σ_{k<=s} Q_k‖_A` against `‖Σ_{k<=t} Q_k‖_A` for `s < t`. In
/// oracle mode passes when `oracle(prefix) <= oracle(full) + 1e-9`; in
/// bracket mode when `lower(prefix) <= upper(full) + 1e-9`.
pub fn check_monotone_fdd(
    components: &BTreeMap<usize, Poly64>,
    polydisc: &Polydisc,
    s: usize,
    t: usize,
    mode: CheckMode,
) -> Result<FddReport> {
    if s >= t {
        return Err(Error::InvalidSplit {
            s,
            t,
            len: components.len(),
        });
    }
    let degree = components.values().next().map_or(0, |q| q.degree());
    for (&k, q) in components {
        if let Some((m, _)) = q.terms().find(|(m, _)| m.length() != k) {
            return Err(Error::MixedLength {
                expected: k,
                found: m.length(),
            });
        }
    }
    let prefix = sum_all(degree, components.range(..=s).map(|(_, q)| q))?;
    let full = sum_all(degree, components.range(..=t).map(|(_, q)| q))?;
    let (prefix, full, slack) = match mode {
        CheckMode::Oracle(config) => {
            let a = oracle_bracket(&prefix, polydisc, config)?;
            let b = oracle_bracket(&full, polydisc, config)?;
            (a, b, b.lower - a.lower)
        }
        CheckMode::Bracket(config) => {
            let a = polydisc_norm(&prefix, polydisc, config)?;
            let b = polydisc_norm(&full, polydisc, config)?;
            (a, b, b.upper - a.lower)
        }
    };
    Ok(FddReport {
        s,
        t,
        prefix,
        full,
        slack,
        pass: slack >= -1e-9,
    })
}

/// Result of the distinguished-boundary identity `‖Q‖_A = λ_k ‖R‖_A`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub k: usize,
    pub norm_q: f64,
    pub norm_r: f64,
    pub lambda: f64,
    /// `|‖Q‖ - λ_k ‖R‖| / max(‖Q‖, λ_k ‖R‖)`, 0 when both vanish.
    pub residual: f64,
    pub pass: bool,
}

/// Relative difference of two non-negative magnitudes.
pub fn relative_residual(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Factors `Q = R · z_k` and compares `‖Q‖_A` with `λ_k ‖R‖_A` using oracle
/// norms.
pub fn check_boundary_identity(
    q: &Poly64,
    k: usize,
    polydisc: &Polydisc,
    config: OracleConfig,
    tol: f64,
) -> Result<BoundaryReport> {
    if k == 0 || k > polydisc.dimension() {
        return Err(Error::DimensionExceeded {
            length: k,
            dimension: polydisc.dimension(),
        });
    }
    let r = q.reduce_by_last_variable(k)?;
    let norm_q = oracle_with(q, polydisc, config)?;
    let norm_r = oracle_with(&r, polydisc, config)?;
    let lambda = polydisc.radius(k);
    let residual = relative_residual(norm_q, lambda * norm_r);
    Ok(BoundaryReport {
        k,
        norm_q,
        norm_r,
        lambda,
        residual,
        pass: residual <= tol,
    })
}
