use anyhow::{bail, Context, Result};
use monobasis::constants::{
    estimate_basis_constant, replay_theorem2_chain, ChainConfig, EmpiricalConstant, EstimatorConfig,
};
use monobasis::io::{polynomial_from_json, series_from_json};
use monobasis::multiindex::{self, MultiIndex};
use monobasis::norms::{
    check_boundary_identity, check_monotone_fdd, oracle_bracket, polydisc_norm, CheckMode, NormConfig, OptimizeBudget,
    OracleConfig, DEFAULT_REL_TOL, MAX_ORACLE_DIM,
};
use monobasis::ordering::{verify_monotone_growth, OrderingTable, PrefixDecomposition};
use monobasis::seminorms::{partial_sum_tails, weighted_seminorm, BaseSeminorm, SeminormParams, SupMode};
use monobasis::suite::{verify_all, SuiteConfig};
use monobasis::{CompatibleOrdering, Complex64, Error, Polydisc, Series64};
use serde::Deserialize;
use serde_json::json;

use crate::output::{inline_or_file, parse_json, Report, Table};
use crate::{plot, Command, NormMode, OrderingAction, Outcome, SearchArgs, SeminormArgs};

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Enumerate { degree, dim, out } => {
            let listed = multiindex::enumerate(degree, dim);
            let names: Vec<String> = listed.iter().map(|m| m.to_string()).collect();
            let rows = listed
                .iter()
                .zip(&names)
                .enumerate()
                .map(|(i, (m, name))| {
                    vec![
                        (i + 1).to_string(),
                        name.clone(),
                        serde_json::to_string(m).unwrap_or_default(),
                    ]
                })
                .collect();
            let body = json!({
                "count": listed.len(),
                "monomials": listed.iter().zip(&names).enumerate().map(|(i, (m, name))| {
                    json!({"rank": i + 1, "index": m, "monomial": name})
                }).collect::<Vec<_>>(),
            });
            let text = names.iter().map(|n| format!("{n}\n")).collect();
            Report::new(json!({"degree": degree, "dim": dim}), body)?
                .with_table(Table {
                    header: vec!["rank", "monomial", "index"],
                    rows: rows_quoted(rows),
                })
                .with_text(text)
                .emit(&out)?;
            Ok(Outcome::Pass)
        }
        Command::Rank { index } => {
            let m: MultiIndex = parse_json(&index, "multi-index")?;
            let r = multiindex::rank(&m)?;
            println!("{r}");
            Ok(Outcome::Pass)
        }
        Command::Unrank { degree, rank } => {
            let m = multiindex::unrank(degree, rank)?;
            println!("{m}\t{}", serde_json::to_string(&m)?);
            Ok(Outcome::Pass)
        }
        Command::Ordering {
            action:
                OrderingAction::Verify {
                    table,
                    upto,
                    growth,
                    out,
                },
        } => ordering_verify(table.as_deref(), upto, growth, &out),
        Command::Norm {
            poly,
            radii,
            mode,
            search,
            out,
        } => {
            let p = polynomial_from_json(&inline_or_file(&poly)?)?;
            let a = parse_polydisc(&radii.radii)?;
            let bracket = match mode {
                NormMode::Bracket => polydisc_norm(&p, &a, norm_config(search))?,
                NormMode::Oracle => oracle_bracket(&p, &a, OracleConfig::with_points(search.grid))?,
            };
            let table = Table {
                header: vec!["lower", "upper", "method"],
                rows: vec![vec![
                    bracket.lower.to_string(),
                    bracket.upper.to_string(),
                    serde_json::to_value(bracket.method)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                ]],
            };
            Report::new(search_config(mode, search, &a), bracket)?
                .with_table(table)
                .emit(&out)?;
            Ok(Outcome::Pass)
        }
        Command::Fdd {
            poly,
            radii,
            s,
            t,
            mode,
            search,
            out,
        } => {
            let p = polynomial_from_json(&inline_or_file(&poly)?)?;
            let a = parse_polydisc(&radii.radii)?;
            let oracle = OracleConfig::with_points(search.grid);
            let check = match mode {
                NormMode::Oracle => CheckMode::Oracle(oracle),
                NormMode::Bracket => CheckMode::Bracket(norm_config(search)),
            };
            let components = p.length_split();
            let monotone = check_monotone_fdd(&components, &a, s, t, check)?;
            let mut boundary = Vec::new();
            if a.dimension() <= MAX_ORACLE_DIM {
                for (&k, q) in &components {
                    boundary.push(check_boundary_identity(q, k, &a, oracle, DEFAULT_REL_TOL)?);
                }
            }
            let pass = monotone.pass && boundary.iter().all(|b| b.pass);
            let mut config = search_config(mode, search, &a);
            config["tolerance"] = json!(DEFAULT_REL_TOL);
            let table = Table {
                header: vec!["check", "k", "lhs", "rhs", "pass"],
                rows: std::iter::once(vec![
                    "monotone".into(),
                    format!("{}..{}", s, t),
                    monotone.prefix.lower.to_string(),
                    monotone.full.upper.to_string(),
                    monotone.pass.to_string(),
                ])
                .chain(boundary.iter().map(|b| {
                    vec![
                        "boundary".into(),
                        b.k.to_string(),
                        b.norm_q.to_string(),
                        (b.lambda * b.norm_r).to_string(),
                        b.pass.to_string(),
                    ]
                }))
                .collect(),
            };
            Report::new(
                config,
                json!({"monotone": monotone, "boundary": boundary, "pass": pass}),
            )?
            .with_table(table)
            .emit(&out)?;
            Ok(outcome(pass))
        }
        Command::BasisConstant {
            degree,
            dim,
            radii,
            budget,
            seed,
            grid,
            out,
            plot: plot_path,
        } => {
            let a = match radii {
                Some(r) => parse_polydisc(&r)?,
                None => Polydisc::unit(dim)?,
            };
            let config = EstimatorConfig {
                budget,
                oracle: OracleConfig {
                    points_per_dim: grid,
                    ..EstimatorConfig::default().oracle
                },
            };
            let estimates = degree
                .iter()
                .map(|&n| estimate_basis_constant(n, dim, &a, config, seed))
                .collect::<monobasis::Result<Vec<_>>>()?;
            let pass = estimates
                .iter()
                .all(|e| e.ceiling_violations == 0 && !e.exceeds_ceiling(1e-6));
            if let Some(path) = plot_path {
                let points: Vec<_> = estimates.iter().map(|e| (e.degree, e.lower_bound, e.ceiling)).collect();
                if let Err(e) = plot::write_svg(&path, &points) {
                    eprintln!("warning: plot not written: {e:#}");
                }
            }
            let table = Table {
                header: vec![
                    "degree",
                    "dim",
                    "lowerBound",
                    "ceiling",
                    "witness-rank-s",
                    "witness-rank-t",
                ],
                rows: estimates
                    .iter()
                    .map(|e| {
                        vec![
                            e.degree.to_string(),
                            e.dimension.to_string(),
                            e.lower_bound.to_string(),
                            e.ceiling.to_string(),
                            e.witness.s.to_string(),
                            e.witness.t.to_string(),
                        ]
                    })
                    .collect(),
            };
            let run_config = json!({
                "seed": seed,
                "budget": budget,
                "grid": grid,
                "candidates": config.oracle.candidates,
                "dim": dim,
                "radii": a.radii(),
                "ceilingTolerance": 1e-6,
            });
            Report::new(run_config, json!({"estimates": estimates, "pass": pass}))?
                .with_table(table)
                .emit(&out)?;
            Ok(outcome(pass))
        }
        Command::ReplayChain {
            poly_coeffs,
            degree,
            s,
            t,
            radii,
            seed,
            tol,
            out,
        } => {
            let coeffs: Vec<CoefficientJson> = parse_json(&poly_coeffs, "coefficients")?;
            let coeffs: Vec<Complex64> = coeffs.into_iter().map(Complex64::from).collect();
            if t == 0 || t > coeffs.len() {
                return Err(Error::InvalidSplit {
                    s,
                    t,
                    len: coeffs.len(),
                }
                .into());
            }
            let a = match radii {
                Some(r) => parse_polydisc(&r)?,
                None => Polydisc::unit(multiindex::unrank(degree, t as u64)?.length())?,
            };
            let config = ChainConfig {
                tol,
                empirical: EmpiricalConstant::Estimate { budget: 200 },
                ..ChainConfig::default()
            };
            let report = replay_theorem2_chain(&coeffs, degree, s, t, &a, config, seed)?;
            let table = Table {
                header: vec!["step", "lhs", "rhs", "holds", "required"],
                rows: report
                    .steps
                    .iter()
                    .map(|st| {
                        vec![
                            st.name.to_string(),
                            st.lhs.to_string(),
                            st.rhs.to_string(),
                            st.holds.to_string(),
                            st.required.to_string(),
                        ]
                    })
                    .collect(),
            };
            let pass = report.pass;
            let run_config = json!({
                "seed": seed,
                "tolerance": tol,
                "grid": config.oracle.points_per_dim,
                "empiricalBudget": 200,
                "radii": a.radii(),
            });
            Report::new(run_config, report)?.with_table(table).emit(&out)?;
            Ok(outcome(pass))
        }
        Command::Seminorm { series, family, out } => {
            let f = series_from_json(&inline_or_file(&series)?)?;
            let (base, config) = seminorm_base(&f, &family)?;
            let parts = base.part_values(&f)?;
            let value = match &family.weights {
                Some(w) => weighted_seminorm(&f, &base, &parse_json::<Vec<f64>>(w, "weights")?)?,
                None => parts.iter().sum(),
            };
            let table = Table {
                header: vec!["degree", "partValue"],
                rows: parts
                    .iter()
                    .enumerate()
                    .map(|(n, v)| vec![n.to_string(), v.to_string()])
                    .collect(),
            };
            Report::new(config, json!({"value": value, "parts": parts}))?
                .with_table(table)
                .emit(&out)?;
            Ok(Outcome::Pass)
        }
        Command::Converge {
            series,
            cuts,
            family,
            out,
        } => {
            let f = series_from_json(&inline_or_file(&series)?)?;
            let (base, mut config) = seminorm_base(&f, &family)?;
            let dim = seminorm_dim(&f, &family);
            let tails = partial_sum_tails(
                &f,
                &CompatibleOrdering::canonical_diagonal(),
                &base,
                dim,
                cuts.as_deref(),
            )?;
            let non_increasing = tails.windows(2).all(|w| w[1].tail <= w[0].tail + 1e-12);
            config["cuts"] = json!(cuts);
            let table = Table {
                header: vec!["cut", "tailValue"],
                rows: tails
                    .iter()
                    .map(|e| vec![e.cut.to_string(), e.tail.to_string()])
                    .collect(),
            };
            Report::new(config, json!({"tails": tails, "nonIncreasing": non_increasing}))?
                .with_table(table)
                .emit(&out)?;
            Ok(Outcome::Pass)
        }
        Command::VerifyAll { seed, quick, out } => {
            let config = if quick {
                SuiteConfig {
                    structure_trials: 40,
                    norm_trials: 20,
                    chain_trials: 20,
                    ceiling_budget: 100,
                    oracle_points: 32,
                    ..SuiteConfig::new(seed)
                }
            } else {
                SuiteConfig::new(seed)
            };
            let report = verify_all(config);
            let text = report
                .checks
                .iter()
                .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                .collect();
            let table = Table {
                header: vec!["check", "passed", "detail"],
                rows: rows_quoted(
                    report
                        .checks
                        .iter()
                        .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
                        .collect(),
                ),
            };
            let pass = report.passed;
            Report::new(config, json!({"checks": report.checks, "passed": pass}))?
                .with_table(table)
                .with_text(text)
                .emit(&out)?;
            Ok(outcome(pass))
        }
    }
}

fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

/// Quotes fields containing commas or quotes.
fn rows_quoted(rows: Vec<Vec<String>>) -> Vec<Vec<String>> {
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|f| {
                    if f.contains([',', '"', '\n']) {
                        format!("\"{}\"", f.replace('"', "\"\""))
                    } else {
                        f
                    }
                })
                .collect()
        })
        .collect()
}

fn parse_polydisc(arg: &str) -> Result<Polydisc> {
    Ok(Polydisc::new(parse_json(arg, "radii")?)?)
}

fn norm_config(search: SearchArgs) -> NormConfig {
    NormConfig {
        budget: OptimizeBudget {
            restarts: search.restarts,
            iterations: search.iterations,
        },
        seed: search.seed,
    }
}

fn search_config(mode: NormMode, search: SearchArgs, a: &Polydisc) -> serde_json::Value {
    json!({
        "mode": format!("{mode:?}").to_lowercase(),
        "seed": search.seed,
        "restarts": search.restarts,
        "iterations": search.iterations,
        "grid": search.grid,
        "radii": a.radii(),
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoefficientJson {
    Real(f64),
    Pair([f64; 2]),
}

impl From<CoefficientJson> for Complex64 {
    fn from(c: CoefficientJson) -> Self {
        match c {
            CoefficientJson::Real(re) => Complex64::new(re, 0.0),
            CoefficientJson::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

fn seminorm_dim(f: &Series64, family: &SeminormArgs) -> usize {
    family.dim.unwrap_or_else(|| f.max_length().max(1))
}

fn seminorm_base(f: &Series64, family: &SeminormArgs) -> Result<(BaseSeminorm, serde_json::Value)> {
    let dim = seminorm_dim(f, family);
    let mode = if family.oracle {
        SupMode::Oracle(OracleConfig::default())
    } else {
        SupMode::UpperBound
    };
    let mode_name = if family.oracle { "oracle" } else { "coefficient-sum" };
    if let Some(radius) = family.radius {
        let config = json!({"family": "bounded", "radius": radius, "dim": dim, "sup": mode_name});
        return Ok((
            BaseSeminorm::Bounded {
                radius,
                dimension: dim,
                mode,
            },
            config,
        ));
    }
    let params = match (&family.beta, &family.alpha) {
        (Some(beta), Some(alpha)) => SeminormParams::new(parse_json(beta, "beta")?, parse_json(alpha, "alpha")?)?,
        _ if family.preset => SeminormParams::preset(dim, f.max_degree().unwrap_or(0) as usize),
        _ => bail!("choose --beta/--alpha, --preset or --radius"),
    };
    if params.alpha.len() < f.parts().len() {
        bail!(
            "alpha has {} entries but the series has {} degrees",
            params.alpha.len(),
            f.parts().len()
        );
    }
    let config = json!({
        "family": if family.preset { "taylor-preset" } else { "taylor" },
        "beta": params.beta,
        "alpha": params.alpha,
        "dim": dim,
        "sup": mode_name,
    });
    Ok((
        BaseSeminorm::Taylor {
            params,
            dimension: dim,
            mode,
        },
        config,
    ))
}

fn ordering_verify(
    table: Option<&str>,
    upto: usize,
    growth: Option<usize>,
    out: &crate::OutputArgs,
) -> Result<Outcome> {
    let ordering = match table {
        Some(t) => CompatibleOrdering::Table(OrderingTable::from_json(&inline_or_file(t)?).context("ordering table")?),
        None => CompatibleOrdering::canonical_diagonal(),
    };
    if let Some(bound) = ordering.domain_bound() {
        if upto > bound {
            bail!("the table covers {bound} positions, fewer than --upto {upto}");
        }
    }
    let mut running = PrefixDecomposition::empty();
    let mut failure = None;
    for j in 1..=upto {
        match running.extend(&ordering, j) {
            Ok(()) => {}
            Err(e @ Error::IncompatiblePrefix { .. }) => {
                failure = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut growth_failures = Vec::new();
    if let (Some(l), None) = (growth, &failure) {
        let last = ordering.domain_bound().map_or(upto, |b| upto.min(b.saturating_sub(l)));
        for j in 1..=last {
            match verify_monotone_growth(&ordering, j, l) {
                Ok(r) if r.pass => {}
                Ok(_) => growth_failures.push(format!("j={j}")),
                Err(e) => growth_failures.push(format!("j={j}: {e}")),
            }
        }
    }
    let pass = failure.is_none() && growth_failures.is_empty();
    let reconstructed = failure.is_none() && running.reconstruct(&ordering) == (1..=upto).collect::<Vec<_>>();
    let source = table.map_or("diagonal".to_string(), |t| t.to_string());
    let config = json!({"ordering": source, "upto": upto, "growth": growth});
    let body = json!({
        "compatible": failure.is_none(),
        "reconstructed": reconstructed,
        "failure": failure,
        "rows": running.rows,
        "growthFailures": growth_failures,
        "pass": pass && reconstructed,
    });
    let table = Table {
        header: vec!["row", "count"],
        rows: running
            .rows
            .iter()
            .map(|(r, k)| vec![r.to_string(), k.to_string()])
            .collect(),
    };
    Report::new(config, body)?.with_table(table).emit(out)?;
    Ok(outcome(pass && reconstructed))
}
