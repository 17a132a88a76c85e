//! One function per CLI verb. Each returns the files it wrote and whether
//! its checks (if any) passed.

use std::path::PathBuf;

use aiprod_core::checks::{d4_chain, d4_skill_productions};
use aiprod_core::checks::{run_criterion, Criterion, CRITERIA, D4_C2, DEFAULT_SEED};
use aiprod_core::dynamics::{
    adjacent_interval_grid, adjacent_intervals, construct_skill_paradox_instance,
    detect_decline_regions, empirical_decline_mu, mu_bar_two_state, sensitivity_gap,
    steady_state_outcome, sweep, GridSpec, SkillChain, SweepSeries, TransitionFunction,
};
use aiprod_core::effort::{
    construct_relaxed_bad_instance, construct_unreliability_bad_instance, curve_shape,
    effort_deterministic, effort_exante, vshape_threshold, ReliabilityModel,
};
use aiprod_core::functions::{classify_ara, critical_level, Ara, CostFunction, ProductionFunction};
use aiprod_core::literacy::{
    check_condition_multimodal, critical_skill, effort_skill_profile, estimate_a_tilde,
    search_multimodal_instance, skill_grid,
};
use aiprod_core::mcsim::validate_chain;
use aiprod_core::optim::linspace;
use aiprod_core::oracle::oracle_effort;
use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{to_value, ExperimentConfig};
use crate::io::{Artifact, Cell, Table};

/// Largest TV distance accepted by `mc-validate`.
pub const MC_TV_TOLERANCE: f64 = 0.02;
/// Default `q` values for the unreliability figure.
pub const D4_Q_GRID: [f64; 4] = [0.25, 0.5, 0.75, 0.95];

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub passed: bool,
    /// Lines printed to stdout before the file list.
    pub messages: Vec<String>,
}

impl Outcome {
    fn ok(files: Vec<PathBuf>) -> Self {
        Self {
            files,
            passed: true,
            messages: Vec::new(),
        }
    }
}

fn spec(cfg: &ExperimentConfig, verb: &str, params: Value) -> Value {
    json!({ "verb": verb, "model": cfg.model_value(), "params": params })
}

fn default_sweep_grid(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
) -> Result<Vec<f64>> {
    let x = critical_level(p, c)?;
    Ok(adjacent_interval_grid(
        &adjacent_intervals(&chain.states, x),
        &GridSpec::new(x + 0.5),
    ))
}

fn series_table(s: &SweepSeries) -> Table {
    let n = s.pi.first().map_or(0, Vec::len);
    let mut cols = vec!["a".to_string(), "P".to_string(), "E".to_string()];
    cols.extend((1..=n).map(|k| format!("pi_{k}")));
    cols.push("interval_m".to_string());
    let mut t = Table::new(cols);
    for i in 0..s.len() {
        let mut row: Vec<Cell> = vec![s.a[i].into(), s.productivity[i].into(), s.effort[i].into()];
        row.extend(s.pi[i].iter().map(|&x| Cell::from(x)));
        row.push(s.interval[i].into());
        t.push(row);
    }
    t
}

fn decline_summary(s: &SweepSeries) -> Result<Value> {
    let regions = detect_decline_regions(s)?;
    let max_drop = regions.iter().map(|r| r.drop).fold(0.0, f64::max);
    Ok(json!({ "decline_regions": regions, "max_drop": max_drop }))
}

/// Steady-state sweep when a chain is configured, otherwise the static
/// `e*(s, a)`, `p*(s, a)` table.
pub fn sweep_verb(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = cfg.production("sweep")?;
    let c = cfg.cost("sweep")?;
    let dir = cfg.output_dir();
    if let Some(chain) = &cfg.chain {
        let grid = match &cfg.grids.a {
            Some(g) => g.values(),
            None => default_sweep_grid(chain, &p, &c)?,
        };
        let series = sweep(chain, &p, &c, &grid)?;
        let art = Artifact::new(&dir, "sweep", spec(cfg, "sweep", json!({})), &grid);
        let csv = art.write_csv(&series_table(&series))?;
        let mut body = decline_summary(&series)?;
        body["series"] = to_value(&series);
        let js = art.write_json(body)?;
        return Ok(Outcome::ok(vec![csv, js]));
    }
    let s_grid = cfg
        .grids
        .s
        .as_ref()
        .map_or_else(|| linspace(0.0, 1.0, 11), |g| g.values());
    let a_grid = cfg
        .grids
        .a
        .as_ref()
        .map_or_else(|| linspace(0.0, 1.0, 101), |g| g.values());
    let q = cfg.reliability.map(|r| r.q);
    let x_hint = critical_level(&p, &c)?;
    let pairs: Vec<(f64, f64)> = s_grid
        .iter()
        .flat_map(|&s| a_grid.iter().map(move |&a| (s, a)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(s, a)| -> Result<Vec<Cell>> {
            let sol = match q {
                Some(q) => effort_exante(&p, &c, s, &ReliabilityModel::new(a, q)?)?,
                None => effort_deterministic(&p, &c, s, a)?,
            };
            let mut row = vec![
                s.into(),
                a.into(),
                sol.effort.into(),
                sol.productivity.into(),
            ];
            if cfg.oracle {
                let (e, pr) = oracle_effort(&p, &c, s, a, q.unwrap_or(1.0), x_hint);
                row.extend([e.into(), pr.into()]);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cols = vec!["s", "a", "e", "p"];
    if cfg.oracle {
        cols.extend(["e_oracle", "p_oracle"]);
    }
    let mut t = Table::new(cols);
    rows.into_iter().for_each(|r| t.push(r));
    let art = Artifact::new(
        &dir,
        "sweep",
        spec(cfg, "sweep", json!({ "oracle": cfg.oracle })),
        &json!({ "s": s_grid, "a": a_grid }),
    );
    Ok(Outcome::ok(vec![art.write_csv(&t)?]))
}

pub fn steady_state_verb(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = cfg.production("steady-state")?;
    let c = cfg.cost("steady-state")?;
    let chain = cfg.chain("steady-state")?;
    let grid = cfg
        .grids
        .a
        .as_ref()
        .map_or_else(|| vec![0.0], |g| g.values());
    let outs = grid
        .par_iter()
        .map(|&a| steady_state_outcome(&chain, &p, &c, a))
        .collect::<aiprod_core::Result<Vec<_>>>()?;
    let mut t = Table::new(["a", "k", "s", "pi", "effort", "productivity"]);
    for o in &outs {
        for (k, (st, w)) in o.states.iter().zip(&o.steady_state.pi).enumerate() {
            t.push(vec![
                o.a.into(),
                (k + 1).into(),
                chain.states[k].into(),
                (*w).into(),
                st.effort.into(),
                st.productivity.into(),
            ]);
        }
    }
    let art = Artifact::new(
        &cfg.output_dir(),
        "steady-state",
        spec(cfg, "steady-state", json!({})),
        &grid,
    );
    let csv = art.write_csv(&t)?;
    let js = art.write_json(json!({ "outcomes": outs }))?;
    Ok(Outcome::ok(vec![csv, js]))
}

pub fn classify_ara_verb(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = cfg.production("classify-ara")?;
    let cls = classify_ara(&p)?;
    let mut t = Table::new(["x", "ara"]);
    for (x, a) in cls.grid.iter().zip(&cls.evidence) {
        let v = match a {
            Ara::Finite(v) => *v,
            Ara::Infinite => f64::INFINITY,
        };
        t.push(vec![(*x).into(), v.into()]);
    }
    let art = Artifact::new(
        &cfg.output_dir(),
        "classify-ara",
        spec(cfg, "classify-ara", json!({})),
        &cls.grid,
    );
    let csv = art.write_csv(&t)?;
    let js = art.write_json(json!({
        "family": p.name(),
        "verdict": cls.verdict,
        "analytic": cls.analytic,
        "consistent": cls.consistent(),
        "saturation": cls.saturation,
    }))?;
    let mut out = Outcome::ok(vec![csv, js]);
    out.messages
        .push(format!("{}: {}", p.name(), to_value(&cls.verdict)));
    Ok(out)
}

/// Skill-paradox diagnostics for the chain and unreliability diagnostics
/// for the reliability section; at least one must be configured.
pub fn check_paradox_verb(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = cfg.production("check-paradox")?;
    let c = cfg.cost("check-paradox")?;
    if cfg.chain.is_none() && cfg.reliability.is_none() {
        bail!(crate::config::ConfigError::new(
            "chain",
            "`check-paradox` needs a chain or reliability section"
        ));
    }
    let mut body = serde_json::Map::new();
    let mut grids = serde_json::Map::new();
    if let Some(chain) = &cfg.chain {
        let gaps: Vec<Option<f64>> = (1..chain.len())
            .map(|m| sensitivity_gap(chain, &p, &c, m).ok())
            .collect();
        let mu_bar = if chain.len() == 2 {
            mu_bar_two_state(chain, &p, &c)?
        } else {
            None
        };
        let grid = default_sweep_grid(chain, &p, &c)?;
        let series = sweep(chain, &p, &c, &grid)?;
        let mut skill = decline_summary(&series)?;
        skill["sensitivity_gaps"] = json!(gaps);
        skill["mu_bar_two_state"] = json!(mu_bar);
        if let Some(mu) = &cfg.grids.mu {
            let mus = mu.values();
            let x = critical_level(&p, &c)?;
            skill["empirical_decline_mu"] = json!(empirical_decline_mu(
                chain,
                &p,
                &c,
                &mus,
                &GridSpec::new(x + 0.5)
            )?);
            grids.insert("mu".into(), json!(mus));
        }
        body.insert("skill".into(), skill);
        grids.insert("a".into(), json!(grid));
    }
    if let Some(rel) = &cfg.reliability {
        let s = cfg.grids.s.as_ref().map_or(0.0, |g| g.values()[0]);
        let grid = cfg
            .grids
            .a
            .as_ref()
            .map_or_else(|| linspace(0.0, 2.0, 401), |g| g.values());
        let values = grid
            .iter()
            .map(|&a| Ok(effort_exante(&p, &c, s, &ReliabilityModel::new(a, rel.q)?)?.productivity))
            .collect::<Result<Vec<_>>>()?;
        let (shape, turn) = curve_shape(&values, 1e-12);
        body.insert(
            "unreliability".into(),
            json!({
                "s": s,
                "q": rel.q,
                "ara": classify_ara(&p)?.verdict,
                "shape": shape,
                "turn_a_bar": grid[turn],
                "threshold": vshape_threshold(&p, s, rel.q, c.marginal_at_zero()),
            }),
        );
        grids.insert("a_bar".into(), json!(grid));
    }
    let art = Artifact::new(
        &cfg.output_dir(),
        "check-paradox",
        spec(cfg, "check-paradox", json!({})),
        &grids,
    );
    Ok(Outcome::ok(vec![art.write_json(Value::Object(body))?]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BadKind {
    /// Skill chain where assistance cuts steady-state productivity.
    Skill,
    /// Capped-linear production under unreliable assistance.
    Unreliability,
    /// Smoothed capped-linear variant.
    Relaxed,
}

pub fn construct_bad_verb(cfg: &ExperimentConfig, kind: BadKind, eps: f64) -> Result<Outcome> {
    let (name, value, states) = match kind {
        BadKind::Skill => {
            let states = cfg
                .chain
                .as_ref()
                .map_or_else(|| vec![0.0, 0.5, 1.0], |c| c.states.clone());
            let inst = construct_skill_paradox_instance(eps, &states, 1e-6)?;
            ("skill", to_value(&inst), states)
        }
        BadKind::Unreliability => (
            "unreliability",
            to_value(&construct_unreliability_bad_instance(eps)?),
            vec![],
        ),
        BadKind::Relaxed => (
            "relaxed",
            to_value(&construct_relaxed_bad_instance(eps)?),
            vec![],
        ),
    };
    let params = json!({ "kind": name, "eps": eps });
    let art = Artifact::new(
        &cfg.output_dir(),
        "construct-bad",
        json!({ "verb": "construct-bad", "params": params }),
        &states,
    );
    let mut out = Outcome::ok(vec![art.write_json(json!({ "instance": value }))?]);
    out.passed = value["ratio"].as_f64().is_some_and(|r| r <= eps + 1e-9);
    Ok(out)
}

pub fn literacy_scan_verb(cfg: &ExperimentConfig, a_bar: Option<f64>) -> Result<Outcome> {
    let m = cfg.literacy("literacy-scan")?;
    let a_bar = a_bar.or(cfg.reliability.map(|r| r.a_bar)).unwrap_or(0.2);
    let grid = cfg
        .grids
        .s
        .as_ref()
        .map_or_else(|| skill_grid(&m, 1.5 / m.beta, 201), |g| g.values());
    let profile = effort_skill_profile(&m, a_bar, &grid)?;
    let mut t = Table::new(["s", "e_b", "p_b", "q1", "q0", "signal_prob_good"]);
    for r in &profile.rows {
        t.push(vec![
            r.s.into(),
            r.e_b.into(),
            r.p_b.into(),
            r.q1.into(),
            r.q0.into(),
            r.signal_prob_good.into(),
        ]);
    }
    let lambda = cfg
        .chain
        .as_ref()
        .map_or(TransitionFunction::new(0.01, 1.0)?, |c| c.lambda);
    let modality = search_multimodal_instance(&m, &lambda, a_bar, &grid)?;
    let params = json!({ "a_bar": a_bar, "lambda": lambda });
    let art = Artifact::new(
        &cfg.output_dir(),
        "literacy-scan",
        spec(cfg, "literacy-scan", params),
        &grid,
    );
    let csv = art.write_csv(&t)?;
    let js = art.write_json(json!({
        "threshold": m.threshold(),
        "critical_skill": critical_skill(&m),
        "condition": check_condition_multimodal(&m),
        "profile_verdict": profile.verdict,
        "profile_witness": profile.witness,
        "a_tilde": estimate_a_tilde(&m, &grid, 1.0 / m.beta)?,
        "modality": modality,
    }))?;
    Ok(Outcome::ok(vec![csv, js]))
}

pub fn mc_validate_verb(cfg: &ExperimentConfig, horizon: u64, replicas: u64) -> Result<Outcome> {
    let p = cfg.production("mc-validate")?;
    let c = cfg.cost("mc-validate")?;
    let chain = cfg.chain("mc-validate")?;
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let seeds: Vec<u64> = (0..replicas).map(|i| seed.wrapping_add(i)).collect();
    let grid = cfg
        .grids
        .a
        .as_ref()
        .map_or_else(|| vec![0.0], |g| g.values());
    let mut t = Table::new([
        "a",
        "seed",
        "horizon",
        "tv_distance",
        "empirical_productivity",
        "analytic_productivity",
    ]);
    let mut instances = Vec::new();
    let mut passed = true;
    for &a in &grid {
        let recs = validate_chain(&chain, &p, &c, a, horizon, &seeds)?;
        let max_tv = recs.iter().map(|r| r.tv_distance).fold(0.0, f64::max);
        passed &= max_tv <= MC_TV_TOLERANCE;
        for r in &recs {
            t.push(vec![
                a.into(),
                r.seed.into(),
                r.horizon.into(),
                r.tv_distance.into(),
                r.empirical_productivity.into(),
                r.analytic_productivity.into(),
            ]);
        }
        instances.push(json!({ "a": a, "max_tv_distance": max_tv, "records": recs }));
    }
    let params = json!({ "seed": seed, "horizon": horizon, "replicas": replicas });
    let art = Artifact::new(
        &cfg.output_dir(),
        "mc-validate",
        spec(cfg, "mc-validate", params),
        &grid,
    );
    let csv = art.write_csv(&t)?;
    let js = art.write_json(json!({
        "tolerance": MC_TV_TOLERANCE,
        "status": if passed { "pass" } else { "fail" },
        "instances": instances,
    }))?;
    Ok(Outcome {
        files: vec![csv, js],
        passed,
        messages: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    #[value(name = "D4-skill")]
    D4Skill,
    #[value(name = "D4-unreliability")]
    D4Unreliability,
}

/// Figure data, one CSV per curve plus a manifest listing them.
pub fn reproduce_verb(cfg: &ExperimentConfig, figure: Figure) -> Result<Outcome> {
    let dir = cfg.output_dir();
    let mut files = Vec::new();
    let mut curves = Vec::new();
    let (figure_id, grid_record) = match figure {
        Figure::D4Skill => {
            let chain = d4_chain();
            for p in d4_skill_productions() {
                for c2 in D4_C2 {
                    let c = CostFunction::quadratic(0.5, c2)?;
                    let grid = match &cfg.grids.a {
                        Some(g) => g.values(),
                        None => default_sweep_grid(&chain, &p, &c)?,
                    };
                    let series = sweep(&chain, &p, &c, &grid)?;
                    let spec = json!({
                        "verb": "reproduce",
                        "figure": "D4-skill",
                        "model": { "production": p.to_spec(), "cost": c, "chain": chain },
                    });
                    let art = Artifact::new(&dir, "reproduce", spec, &grid);
                    let path = art.write_csv(&series_table(&series))?;
                    let mut entry = decline_summary(&series)?;
                    entry["file"] = json!(file_name(&path));
                    entry["production"] = json!(p.to_spec());
                    entry["c2"] = json!(c2);
                    curves.push(entry);
                    files.push(path);
                }
            }
            ("D4-skill", json!(cfg.grids.a))
        }
        Figure::D4Unreliability => {
            let qs = cfg
                .grids
                .q
                .as_ref()
                .map_or_else(|| D4_Q_GRID.to_vec(), |g| g.values());
            let grid = cfg
                .grids
                .a
                .as_ref()
                .map_or_else(|| linspace(0.0, 3.0, 601), |g| g.values());
            let prods = [
                ProductionFunction::gaussian_integral(),
                ProductionFunction::truncated_quadratic(2.0, 1.0)?,
                ProductionFunction::expo_power(1.0, 2.0)?,
            ];
            let jobs: Vec<(usize, f64, f64)> = (0..prods.len())
                .flat_map(|i| {
                    qs.iter()
                        .flat_map(move |&q| D4_C2.iter().map(move |&c2| (i, q, c2)))
                })
                .collect();
            let results = jobs
                .par_iter()
                .map(|&(i, q, c2)| {
                    let c = CostFunction::quadratic(0.5, c2)?;
                    grid.iter()
                        .map(|&a| {
                            let sol =
                                effort_exante(&prods[i], &c, 0.0, &ReliabilityModel::new(a, q)?)?;
                            Ok((sol.effort, sol.productivity))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            for (&(i, q, c2), pts) in jobs.iter().zip(results) {
                let p = &prods[i];
                let c = CostFunction::quadratic(0.5, c2)?;
                let mut t = Table::new(["a_bar", "e", "p"]);
                for (&a, &(e, pr)) in grid.iter().zip(&pts) {
                    t.push(vec![a.into(), e.into(), pr.into()]);
                }
                let spec = json!({
                    "verb": "reproduce",
                    "figure": "D4-unreliability",
                    "model": { "production": p.to_spec(), "cost": c, "reliability_q": q, "s": 0.0 },
                });
                let art = Artifact::new(&dir, "reproduce", spec, &grid);
                let path = art.write_csv(&t)?;
                let values: Vec<f64> = pts.iter().map(|x| x.1).collect();
                let (shape, turn) = curve_shape(&values, 1e-12);
                curves.push(json!({
                    "file": file_name(&path),
                    "production": p.to_spec(),
                    "c2": c2,
                    "q": q,
                    "shape": shape,
                    "turn_a_bar": grid[turn],
                }));
                files.push(path);
            }
            ("D4-unreliability", json!({ "a": grid, "q": qs }))
        }
    };
    let manifest = Artifact::new(
        &dir,
        "reproduce",
        json!({ "verb": "reproduce", "figure": figure_id }),
        &grid_record,
    );
    files.push(manifest.write_json(json!({ "figure": figure_id, "curves": curves }))?);
    Ok(Outcome::ok(files))
}

fn file_name(p: &std::path::Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Runs the selected acceptance criteria (all by default).
pub fn report_verb(cfg: &ExperimentConfig, only: &[String]) -> Result<Outcome> {
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let ids: Vec<&str> = if only.is_empty() {
        CRITERIA.to_vec()
    } else {
        only.iter().map(String::as_str).collect()
    };
    let mut criteria: Vec<Criterion> = Vec::new();
    for id in &ids {
        match run_criterion(id, seed) {
            Some(r) => criteria.push(r?),
            None => bail!(crate::config::ConfigError::new(
                "--check",
                format!("unknown criterion `{id}`; known: {}", CRITERIA.join(", "))
            )),
        }
    }
    let passed = criteria.iter().all(Criterion::passed);
    let checks: Vec<Value> = criteria
        .iter()
        .flat_map(|c| {
            c.results.iter().map(move |r| {
                let mut v = to_value(r);
                v["check_id"] = json!(format!("{}/{}", c.id, r.check_id));
                v
            })
        })
        .collect();
    let art = Artifact::new(
        &cfg.output_dir(),
        "report",
        json!({ "verb": "report", "seed": seed, "criteria": ids }),
        &Vec::<f64>::new(),
    );
    let path = art.write_json(json!({
        "status": if passed { "pass" } else { "fail" },
        "checks": checks,
    }))?;
    Ok(Outcome {
        files: vec![path],
        passed,
        messages: criteria.iter().map(Criterion::summary_line).collect(),
    })
}
