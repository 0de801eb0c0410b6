//! Degree-additive seminorms on truncated Taylor series.
//!
//! Each seminorm here has the form `p(Σ P_n) = Σ_n w_n · sup_{A_n} |P_n|`
//! for a sequence of polydiscs `A_n`:
//!
//! * [`taylor_seminorm`]: `A_n` has radii `β_j + α_n`.
//! * [`bounded_seminorm`]: `A_n` is the radius-`r` polydisc for every `n`.
//! * [`weighted_seminorm`]: any of the above with extra weights `|w_n|`.
//!
//! Infinite data are truncated explicitly: the series stops at degree `N`
//! and the polydiscs at dimension `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{oracle_with, upper_bound, OracleConfig, Polydisc};
use crate::ordering::{global_monomial_order, row_completion_cuts, CompatibleOrdering, GlobalEntry};
use crate::polynomial::{Complex64, HomogeneousPolynomial, Poly64, Series64, TaylorSeries};

/// How each per-degree supremum is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SupMode {
    /// Coefficient sum `Σ |a_m| λ^m`: exact seminorm axioms, fast.
    #[default]
    UpperBound,
    /// Grid oracle (dimension `<= 5`).
    Oracle(OracleConfig),
}

fn sup(p: &Poly64, polydisc: &Polydisc, mode: SupMode) -> Result<f64> {
    if p.is_zero() {
        return Ok(0.0);
    }
    match mode {
        SupMode::UpperBound => upper_bound(p, polydisc),
        SupMode::Oracle(config) => oracle_with(p, polydisc, config),
    }
}

/// Radii `β_j` and enlargements `α_n` of the ported seminorm family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormParams {
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl SeminormParams {
    pub fn new(beta: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        let params = Self {
            beta,
            alpha,
            weights: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// `β_j = 1/j` for `j <= d` and `α_n = 1/(n+1)` for `n <= N`.
    pub fn preset(d: usize, max_degree: usize) -> Self {
        Self {
            beta: (1..=d).map(|j| 1.0 / j as f64).collect(),
            alpha: (0..=max_degree).map(|n| 1.0 / (n as f64 + 1.0)).collect(),
            weights: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(b) = self.beta.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
            return Err(Error::InvalidParams(format!("beta entries must be positive, got {b}")));
        }
        if let Some(a) = self.alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::InvalidParams(format!(
                "alpha entries must be non-negative, got {a}"
            )));
        }
        if let Some(w) = &self.weights {
            if w.iter().any(|w| !w.is_finite()) {
                return Err(Error::InvalidParams("weights must be finite".into()));
            }
        }
        Ok(())
    }

    /// `max_n |w_n|^{1/n}` over `n >= 1`, the finite-truncation stand-in for
    /// the root growth of the weights.
    pub fn weight_root_growth(&self) -> Option<f64> {
        self.weights.as_ref().map(|w| {
            w.iter()
                .enumerate()
                .skip(1)
                .map(|(n, w)| w.abs().powf(1.0 / n as f64))
                .fold(0.0, f64::max)
        })
    }

    fn polydisc(&self, n: usize, d: usize) -> Result<Polydisc> {
        if self.beta.len() < d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: self.beta.len(),
            });
        }
        let alpha = *self.alpha.get(n).ok_or(Error::LengthMismatch {
            expected: n + 1,
            found: self.alpha.len(),
        })?;
        Polydisc::new(self.beta[..d].iter().map(|b| b + alpha).collect())
    }
}

/// A degree-additive seminorm, evaluated one homogeneous part at a time.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseSeminorm {
    /// `Σ_n sup{|P_n(z)| : |z_j| <= β_j + α_n, j <= d}`.
    Taylor {
        params: SeminormParams,
        dimension: usize,
        mode: SupMode,
    },
    /// `Σ_n sup{|P_n(z)| : |z_j| <= r, j <= d}`.
    Bounded {
        radius: f64,
        dimension: usize,
        mode: SupMode,
    },
}

impl BaseSeminorm {
    /// Value on a single homogeneous part.
    pub fn part_value(&self, p: &Poly64) -> Result<f64> {
        let n = p.degree() as usize;
        match self {
            Self::Taylor {
                params,
                dimension,
                mode,
            } => {
                check_dimension(p, *dimension)?;
                sup(p, &params.polydisc(n, *dimension)?, *mode)
            }
            Self::Bounded {
                radius,
                dimension,
                mode,
            } => {
                check_dimension(p, *dimension)?;
                sup(p, &Polydisc::uniform(*dimension, *radius)?, *mode)
            }
        }
    }

    /// Per-degree values `p(P_0), ..., p(P_N)`.
    pub fn part_values(&self, f: &Series64) -> Result<Vec<f64>> {
        f.parts().iter().map(|p| self.part_value(p)).collect()
    }

    /// The seminorm of a series: the sum of its part values.
    pub fn value(&self, f: &Series64) -> Result<f64> {
        Ok(self.part_values(f)?.into_iter().fold(0.0, |acc, v| acc + v))
    }
}

fn check_dimension(p: &Poly64, dimension: usize) -> Result<()> {
    if dimension == 0 {
        return Err(Error::InvalidParams("dimension must be at least 1".into()));
    }
    if p.max_length() > dimension {
        return Err(Error::DimensionExceeded {
            length: p.max_length(),
            dimension,
        });
    }
    Ok(())
}

/// `Σ_n sup{|P_n(z)| : |z_j| <= β_j + α_n, j <= d}`.
pub fn taylor_seminorm(f: &Series64, params: &SeminormParams, d: usize, mode: SupMode) -> Result<f64> {
    params.validate()?;
    BaseSeminorm::Taylor {
        params: params.clone(),
        dimension: d,
        mode,
    }
    .value(f)
}

/// `Σ_n sup{|P_n(z)| : |z_j| <= r, j <= d}`.
pub fn bounded_seminorm(f: &Series64, r: f64, d: usize, mode: SupMode) -> Result<f64> {
    BaseSeminorm::Bounded {
        radius: r,
        dimension: d,
        mode,
    }
    .value(f)
}

/// `Σ_n |w_n| p(P_n)`; the weights must cover every stored degree.
pub fn weighted_seminorm(f: &Series64, base: &BaseSeminorm, weights: &[f64]) -> Result<f64> {
    if weights.len() < f.parts().len() {
        return Err(Error::LengthMismatch {
            expected: f.parts().len(),
            found: weights.len(),
        });
    }
    Ok(base
        .part_values(f)?
        .into_iter()
        .zip(weights)
        .map(|(v, w)| w.abs() * v)
        .fold(0.0, |acc, v| acc + v))
}

/// Tail seminorm after a cut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEntry {
    pub cut: usize,
    pub tail: f64,
}

/// The series made of the terms of `f` at positions `<= j` of `order`.
pub fn ordered_partial_sum(f: &Series64, order: &[GlobalEntry], j: usize) -> Result<Series64> {
    let mut parts: Vec<Vec<_>> = vec![Vec::new(); f.parts().len()];
    for entry in order.iter().take(j) {
        let n = entry.degree as usize;
        if let Some(part) = f.parts().get(n) {
            let c = part.coefficient(&entry.index);
            if c != Complex64::new(0.0, 0.0) {
                parts[n].push((entry.index.clone(), c));
            }
        }
    }
    let parts = parts
        .into_iter()
        .enumerate()
        .map(|(n, terms)| HomogeneousPolynomial::from_terms(n as u32, terms))
        .collect::<Result<_>>()?;
    TaylorSeries::new(parts)
}

/// The global order covering `f`: degrees up to its top degree, lengths up
/// to `dimension`.
pub fn order_for(f: &Series64, ordering: &CompatibleOrdering, dimension: usize) -> Result<Vec<GlobalEntry>> {
    if f.max_length() > dimension {
        return Err(Error::DimensionExceeded {
            length: f.max_length(),
            dimension,
        });
    }
    global_monomial_order(ordering, f.max_degree().unwrap_or(0), dimension)
}

/// Seminorm of `f - S_j f` for each cut `j`, where `S_j f` keeps the first
/// `j` monomials of the truncated global order. With no cuts given, the row
/// completion points of the order are used.
pub fn partial_sum_tails(
    f: &Series64,
    ordering: &CompatibleOrdering,
    base: &BaseSeminorm,
    dimension: usize,
    cuts: Option<&[usize]>,
) -> Result<Vec<TailEntry>> {
    let order = order_for(f, ordering, dimension)?;
    let cuts = match cuts {
        Some(c) => c.to_vec(),
        None => row_completion_cuts(&order),
    };
    cuts.into_iter()
        .map(|cut| {
            let tail = f.try_sub(&ordered_partial_sum(f, &order, cut)?)?;
            Ok(TailEntry {
                cut,
                tail: base.value(&tail)?,
            })
        })
        .collect()
}
