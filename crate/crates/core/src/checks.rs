//! Runnable acceptance checks.
//!
//! Each runner evaluates one property on a fixed, seeded instance set and
//! returns one [`CheckResult`] per measured quantity. The CLI `report` verb
//! and the acceptance test target both call these.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    construct_skill_paradox_instance, detect_decline_regions, fosd_check, mu_bar_two_state,
    productivity_derivative, sensitivity_gap, steady_state, steady_state_outcome, sweep_adjacent,
    GridSpec, SkillChain, TransitionFunction,
};
use crate::effort::{
    construct_unreliability_bad_instance, curve_shape, effort_basic, effort_basic_convex,
    effort_exante, vshape_threshold, CurveShape, ReliabilityModel,
};
use crate::error::Result;
use crate::functions::{critical_level, CostFunction, DistributionSpec, ProductionFunction};
use crate::literacy::{
    check_condition_multimodal, effort_skill_profile, literacy_steady_state, modality,
    search_multimodal_instance, skill_grid, LiteracyModel, Monotonicity, Verification,
};
use crate::mcsim::validate_chain;
use crate::optim::{linspace, logspace};
use crate::oracle::{central_difference, oracle_effort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    /// Short description of the property being checked.
    pub paper_ref: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
}

impl CheckResult {
    /// Passes when `measured <= tolerance`.
    pub fn at_most(id: &str, what: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            check_id: id.to_string(),
            paper_ref: what.to_string(),
            status: if measured <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            measured,
            tolerance,
        }
    }

    /// Passes when `measured >= tolerance`.
    pub fn at_least(id: &str, what: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            status: if measured >= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            ..Self::at_most(id, what, measured, tolerance)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// One acceptance criterion and its measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub results: Vec<CheckResult>,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        !self.results.is_empty() && self.results.iter().all(CheckResult::passed)
    }

    /// `PASS id: check=measured (tol) ...`
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = self
            .results
            .iter()
            .map(|r| {
                format!(
                    "{}={:.3e} (tol {:.1e})",
                    r.check_id, r.measured, r.tolerance
                )
            })
            .collect();
        format!(
            "{} {}: {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            parts.join(", ")
        )
    }
}

fn criterion(id: &str, results: Vec<CheckResult>) -> Criterion {
    Criterion {
        id: id.to_string(),
        results,
    }
}

fn seconds(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Random concave production function from the smooth families and the
/// capped-linear one.
pub fn random_production(rng: &mut ChaCha8Rng, i: usize) -> ProductionFunction {
    match i % 7 {
        0 => ProductionFunction::fractional(rng.random_range(0.5..2.0)),
        1 => ProductionFunction::power_law(rng.random_range(0.3..1.0), rng.random_range(0.2..0.8)),
        2 => ProductionFunction::logarithmic(rng.random_range(0.5..4.0)),
        3 => Ok(ProductionFunction::gaussian_integral()),
        4 => ProductionFunction::truncated_quadratic(
            rng.random_range(1.0..3.0),
            rng.random_range(0.5..2.0),
        ),
        5 => ProductionFunction::from_distribution(DistributionSpec::Exponential {
            rate: rng.random_range(0.5..3.0),
        }),
        _ => ProductionFunction::piecewise_linear_capped(rng.random_range(1.0..3.0)),
    }
    .expect("sampled parameters are admissible")
}

/// The four production functions of the skill-development figures.
pub fn d4_skill_productions() -> Vec<ProductionFunction> {
    vec![
        ProductionFunction::fractional(1.0).expect("valid"),
        ProductionFunction::power_law(0.5, 0.5).expect("valid"),
        ProductionFunction::power_law(0.5, 1.0 / 3.0).expect("valid"),
        ProductionFunction::power_law(0.5, 0.25).expect("valid"),
    ]
}

/// `N = 4`, `s_k = 0.1 (k - 1)`, `lambda(e) = 0.01 + e`, `mu = 0.2`.
pub fn d4_chain() -> SkillChain {
    SkillChain::evenly_spaced(
        4,
        0.1,
        TransitionFunction::new(0.01, 1.0).expect("valid"),
        0.2,
    )
    .expect("valid")
}

pub const D4_C2: [f64; 3] = [0.0, 1.0 / 16.0, 1.0 / 8.0];

/// Closed-form solvers against the grid + golden-section oracle.
pub fn oracle_match(seed: u64, n: usize) -> Result<Criterion> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut de, mut dp) = (0.0f64, 0.0f64);
    for i in 0..n {
        let p = random_production(&mut rng, i);
        let gamma = rng.random_range(0.2..0.8);
        let c2 = rng.random_range(0.05..0.5);
        let s = rng.random_range(0.0..0.6);
        let a = rng.random_range(0.0..0.6);
        let q = rng.random_range(0.05..0.95);
        let lin = CostFunction::linear(gamma)?;
        let quad = CostFunction::quadratic(gamma, c2)?;
        let cost_exante = if i % 2 == 0 { lin } else { quad };

        let x_lin = critical_level(&p, &lin)?;
        let sol = effort_basic(&p, &lin, s, a)?;
        let (e, pp) = oracle_effort(&p, &lin, s, a, 1.0, x_lin);
        de = de.max((sol.effort - e).abs());
        dp = dp.max((sol.productivity - pp).abs());

        let x_quad = critical_level(&p, &quad)?;
        let sol = effort_basic_convex(&p, &quad, s, a)?;
        let (e, pp) = oracle_effort(&p, &quad, s, a, 1.0, x_quad);
        de = de.max((sol.effort - e).abs());
        dp = dp.max((sol.productivity - pp).abs());

        let x_ex = critical_level(&p, &cost_exante)?;
        let sol = effort_exante(&p, &cost_exante, s, &ReliabilityModel::new(a, q)?)?;
        let (e, pp) = oracle_effort(&p, &cost_exante, s, a, q, x_ex);
        de = de.max((sol.effort - e).abs());
        dp = dp.max((sol.productivity - pp).abs());
    }
    let what = "closed-form and root-finding effort vs brute-force utility maximization";
    Ok(criterion(
        "oracle-match",
        vec![
            CheckResult::at_most("max-abs-effort-error", what, de, 1e-6),
            CheckResult::at_most("max-abs-productivity-error", what, dp, 1e-8),
            CheckResult::at_most("runtime-s", what, seconds(t), 60.0),
        ],
    ))
}

/// Random linear-cost chains; steady states at lower assistance must
/// dominate those at higher assistance.
pub fn fosd(seed: u64, n: usize) -> Result<Criterion> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for i in 0..n {
        let p = random_production(&mut rng, i);
        let c = CostFunction::linear(rng.random_range(0.2..0.8))?;
        let k = rng.random_range(2..8);
        let mut states: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
        states.sort_by(f64::total_cmp);
        let lambda =
            TransitionFunction::new(rng.random_range(0.005..0.5), rng.random_range(0.1..3.0))?;
        let chain = SkillChain::new(states, lambda, rng.random_range(0.01..1.0))?;
        let a1 = rng.random_range(0.0..1.0);
        let a2 = rng.random_range(0.0..1.0);
        let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
        let low = steady_state(&chain, &p, &c, lo)?;
        let high = steady_state(&chain, &p, &c, hi)?;
        if !fosd_check(&low, &high)? {
            failures += 1;
        }
    }
    let what = "steady-state skill under less assistance dominates";
    Ok(criterion(
        "fosd",
        vec![
            CheckResult::at_most("failures", what, failures as f64, 0.0),
            CheckResult::at_most("runtime-s", what, seconds(t), 30.0),
        ],
    ))
}

/// Two-state dichotomy on a 10 x 10 `(mu, s2)` grid.
pub fn two_state_dichotomy() -> Result<Criterion> {
    let t = Instant::now();
    let p = ProductionFunction::fractional(1.0)?;
    let c = CostFunction::linear(0.5)?;
    let lambda = TransitionFunction::new(0.01, 1.0)?;
    let (mut mismatches, mut cells) = (0usize, 0usize);
    for s2 in logspace(0.003, 1.0, 10) {
        for mu in logspace(1e-5, 1.0, 10) {
            let chain = SkillChain::new(vec![0.0, s2], lambda, mu)?;
            let gap = sensitivity_gap(&chain, &p, &c, 1)?;
            let mu_bar = mu_bar_two_state(&chain, &p, &c)?;
            if let Some(m) = mu_bar {
                if ((mu - m) / m).abs() < 0.05 {
                    continue;
                }
            }
            cells += 1;
            let predicted = gap > 0.0 && mu_bar.is_some_and(|m| mu > m);
            let series = sweep_adjacent(&chain, &p, &c, &GridSpec::new(1.0))?;
            let observed = !detect_decline_regions(&series)?.is_empty();
            if predicted != observed {
                mismatches += 1;
            }
        }
    }
    let what = "two-state decline region iff positive sensitivity gap and mu above threshold";
    Ok(criterion(
        "two-state-dichotomy",
        vec![
            CheckResult::at_most("mismatches", what, mismatches as f64, 0.0),
            CheckResult::at_least("cells-checked", what, cells as f64, 1.0),
            CheckResult::at_most("runtime-s", what, seconds(t), 120.0),
        ],
    ))
}

/// Closed-form steady-state productivity derivative vs central differences
/// on the skill-development instances.
pub fn productivity_derivative_fd() -> Result<Criterion> {
    let chain = d4_chain();
    let c = CostFunction::linear(0.5)?;
    let h = 1e-6;
    let (mut worst, mut points) = (0.0f64, 0usize);
    for p in d4_skill_productions() {
        let x_star = critical_level(&p, &c)?;
        let intervals = crate::dynamics::adjacent_intervals(&chain.states, x_star);
        for iv in &intervals[1..chain.len()] {
            if iv.empty || iv.hi - iv.lo < 4.0 * h {
                continue;
            }
            for j in 1..50 {
                let a = iv.lo + (iv.hi - iv.lo) * j as f64 / 50.0;
                if a - h <= iv.lo || a + h >= iv.hi {
                    continue;
                }
                let d = productivity_derivative(&chain, &p, &c, a, iv.m)?.value;
                if d.abs() <= 1e-6 {
                    continue;
                }
                let fd = central_difference(
                    |x| {
                        steady_state_outcome(&chain, &p, &c, x)
                            .map(|o| o.productivity)
                            .unwrap_or(f64::NAN)
                    },
                    a,
                    h,
                );
                worst = worst.max(((d - fd) / d).abs());
                points += 1;
            }
        }
    }
    let what = "closed-form steady-state productivity derivative vs central difference";
    Ok(criterion(
        "productivity-derivative",
        vec![
            CheckResult::at_most("max-rel-error", what, worst, 1e-4),
            CheckResult::at_least("points", what, points as f64, 1.0),
        ],
    ))
}

/// Adversarial skill-development instances with productivity ratio at
/// most `eps`.
pub fn skill_paradox_construction() -> Result<Criterion> {
    let mut out = Vec::new();
    let states = [0.0, 0.5, 1.0];
    for eps in [0.5, 0.25, 0.1] {
        let inst = construct_skill_paradox_instance(eps, &states, 1e-6)?;
        let p = inst.production()?;
        let c = CostFunction::linear(inst.gamma)?;
        let chain = inst.chain()?;
        let low = steady_state_outcome(&chain, &p, &c, inst.a_low)?.productivity;
        let high = steady_state_outcome(&chain, &p, &c, inst.a_high)?.productivity;
        out.push(CheckResult::at_most(
            &format!("ratio-eps-{eps}"),
            "steady-state productivity ratio of the kinked-linear construction",
            high / low,
            eps,
        ));
    }
    Ok(criterion("skill-paradox-construction", out))
}

/// Capped-linear unreliability instances with ratio exactly `q = eps`.
pub fn unreliability_construction() -> Result<Criterion> {
    let mut out = Vec::new();
    for eps in [0.5, 0.1] {
        let inst = construct_unreliability_bad_instance(eps)?;
        let p = ProductionFunction::piecewise_linear_capped(inst.beta)?;
        let c = CostFunction::linear(inst.gamma)?;
        let low = effort_exante(&p, &c, inst.s, &ReliabilityModel::new(inst.a_low, inst.q)?)?;
        let high = effort_exante(&p, &c, inst.s, &ReliabilityModel::new(inst.a_high, inst.q)?)?;
        let ratio = high.productivity / low.productivity;
        out.push(CheckResult::at_most(
            &format!("abs-ratio-error-eps-{eps}"),
            "capped-linear productivity ratio equals the reliability",
            (ratio - eps).abs(),
            1e-9,
        ));
    }
    Ok(criterion("unreliability-construction", out))
}

/// Shape of `p*(s, ., q)` over a 512-point assistance grid.
pub fn risk_aversion_shapes() -> Result<Criterion> {
    let c = CostFunction::linear(0.5)?;
    let q = 0.9;
    let mut out = Vec::new();
    let dara = [
        ("power-law", ProductionFunction::power_law(0.5, 0.5)?, 0.1),
        ("logarithmic", ProductionFunction::logarithmic(1.0)?, 0.0),
    ];
    for (name, p, s) in dara {
        let grid = linspace(0.0, 2.0, 512);
        let values = exante_curve(&p, &c, s, q, &grid)?;
        let ok = curve_shape(&values, 1e-12).0 == CurveShape::Nondecreasing;
        out.push(CheckResult::at_most(
            &format!("{name}-not-nondecreasing"),
            "decreasing absolute risk aversion gives productivity nondecreasing in assistance",
            if ok { 0.0 } else { 1.0 },
            0.0,
        ));
    }
    let iara = [
        (
            "gaussian-integral",
            ProductionFunction::gaussian_integral(),
            0.0,
        ),
        ("expo-power", ProductionFunction::expo_power(1.0, 2.0)?, 0.8),
        (
            "truncated-quadratic",
            ProductionFunction::truncated_quadratic(2.0, 1.0)?,
            0.0,
        ),
    ];
    for (name, p, s) in iara {
        let tau = vshape_threshold(&p, s, q, 0.5);
        let grid = linspace(0.0, 2.0 * tau, 512);
        let step = grid[1] - grid[0];
        let values = exante_curve(&p, &c, s, q, &grid)?;
        let (shape, turn) = curve_shape(&values, 1e-12);
        let offset = if shape == CurveShape::VShaped {
            (grid[turn] - tau).abs() / step
        } else {
            f64::INFINITY
        };
        out.push(CheckResult::at_most(
            &format!("{name}-turn-offset-steps"),
            "increasing absolute risk aversion gives a V-shaped curve turning at the threshold",
            offset,
            1.0,
        ));
    }
    Ok(criterion("risk-aversion-shapes", out))
}

fn exante_curve(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    q: f64,
    grid: &[f64],
) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&a| Ok(effort_exante(p, c, s, &ReliabilityModel::new(a, q)?)?.productivity))
        .collect()
}

/// Skill-development figure data: declines at `c2 = 0` that do not grow
/// with `c2`.
pub fn skill_figures() -> Result<Criterion> {
    let t = Instant::now();
    let chain = d4_chain();
    let mut out = Vec::new();
    let names = ["fractional", "power-half", "power-third", "power-quarter"];
    for (p, name) in d4_skill_productions().into_iter().zip(names) {
        let mut drops = Vec::new();
        let mut regions0 = 0;
        for c2 in D4_C2 {
            let c = CostFunction::quadratic(0.5, c2)?;
            let x = critical_level(&p, &c)?;
            let series = sweep_adjacent(&chain, &p, &c, &GridSpec::new(x + 0.5))?;
            let regions = detect_decline_regions(&series)?;
            if c2 == 0.0 {
                regions0 = regions.len();
            }
            drops.push(regions.iter().map(|r| r.drop).fold(0.0, f64::max));
        }
        out.push(CheckResult::at_least(
            &format!("{name}-decline-regions"),
            "steady-state productivity declines somewhere under linear cost",
            regions0 as f64,
            1.0,
        ));
        let excess = drops[1..]
            .iter()
            .map(|d| d - drops[0])
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(CheckResult::at_most(
            &format!("{name}-drop-excess"),
            "largest productivity drop does not grow with cost curvature",
            excess,
            0.0,
        ));
    }
    out.push(CheckResult::at_most(
        "runtime-s",
        "skill-development figure data",
        seconds(t),
        300.0,
    ));
    Ok(criterion("skill-figures", out))
}

/// Clause (a) literacy instance used for the multimodality witness.
pub fn negative_gap_model() -> LiteracyModel {
    LiteracyModel::new(Verification::SaturatingAffine { kappa: 2.0 }, 2.0, 1.0, 0.6).expect("valid")
}

fn random_literacy(rng: &mut ChaCha8Rng, constant: bool) -> Result<LiteracyModel> {
    let gamma = rng.random_range(0.1..1.0);
    let beta = gamma * rng.random_range(1.05..4.0);
    let q = rng.random_range(0.02..0.98);
    let v = if constant {
        Verification::constant(rng.random_range(0.5..=1.0))?
    } else if rng.random_bool(0.5) {
        Verification::saturating_affine(rng.random_range(0.2..20.0))?
    } else {
        Verification::exponential_approach(rng.random_range(0.2..20.0))?
    };
    LiteracyModel::new(v, beta, gamma, q)
}

/// Modes over random `(mu, S)` probes; returns the largest count seen.
fn probe_modes(
    rng: &mut ChaCha8Rng,
    model: &LiteracyModel,
    lambda: &TransitionFunction,
    a_bar: f64,
    probes: usize,
) -> Result<usize> {
    let mut worst = 0;
    for _ in 0..probes {
        let k = rng.random_range(2..16);
        let mut states: Vec<f64> = (0..k)
            .map(|_| rng.random_range(0.0..1.5 / model.beta))
            .collect();
        states.sort_by(f64::total_cmp);
        let mu = 10f64.powf(rng.random_range(-2.5..0.5));
        let ss = literacy_steady_state(model, lambda, mu, &states, a_bar)?;
        worst = worst.max(modality(&ss).mode_count);
    }
    Ok(worst)
}

/// Multimodal witness under the negative-gap clause and unimodality when
/// the condition fails.
pub fn literacy_multimodality(seed: u64, n: usize) -> Result<Criterion> {
    let model = negative_gap_model();
    let lambda = TransitionFunction::new(0.01, 1.0)?;
    let grid = skill_grid(&model, 1.0, 201);
    let report = search_multimodal_instance(&model, &lambda, 0.2, &grid)?;
    let (modes, superset_modes) = report
        .as_ref()
        .and_then(|r| {
            r.witness
                .as_ref()
                .map(|w| (r.mode_count, w.superset_mode_count))
        })
        .unwrap_or((0, 0));
    let what = "bimodal skill distribution when effort jumps at the critical skill";

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut found, mut worst) = (0usize, 0usize);
    while found < n {
        let m = random_literacy(&mut rng, false)?;
        if check_condition_multimodal(&m).holds {
            continue;
        }
        found += 1;
        let a_bar = rng.random_range(0.0..1.5 / m.beta);
        let lam =
            TransitionFunction::new(rng.random_range(0.005..0.5), rng.random_range(0.1..3.0))?;
        worst = worst.max(probe_modes(&mut rng, &m, &lam, a_bar, 10)?);
    }
    Ok(criterion(
        "literacy-multimodality",
        vec![
            CheckResult::at_least("witness-modes", what, modes as f64, 2.0),
            CheckResult::at_least("superset-modes", what, superset_modes as f64, 2.0),
            CheckResult::at_most(
                "condition-false-max-modes",
                "unimodal skill distribution when the multimodality condition fails",
                worst as f64,
                1.0,
            ),
        ],
    ))
}

/// Constant verification ability: decreasing effort, unimodal steady state.
pub fn constant_verification(seed: u64, n: usize) -> Result<Criterion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rising, mut worst) = (0usize, 0usize);
    for _ in 0..n {
        let m = random_literacy(&mut rng, true)?;
        let a_bar = rng.random_range(0.0..1.5 / m.beta);
        let grid = linspace(0.0, 1.5 / m.beta, 1001);
        if effort_skill_profile(&m, a_bar, &grid)?.verdict == Monotonicity::NonMonotonic {
            rising += 1;
        }
        let lam =
            TransitionFunction::new(rng.random_range(0.005..0.5), rng.random_range(0.1..3.0))?;
        worst = worst.max(probe_modes(&mut rng, &m, &lam, a_bar, 10)?);
    }
    let what = "constant verification ability keeps effort decreasing and skills unimodal";
    Ok(criterion(
        "constant-verification",
        vec![
            CheckResult::at_most("rising-profiles", what, rising as f64, 0.0),
            CheckResult::at_most("max-modes", what, worst as f64, 1.0),
        ],
    ))
}

/// Gillespie simulation vs product-form steady state on the
/// skill-development instances.
pub fn monte_carlo(seeds: &[u64], horizon: u64) -> Result<Criterion> {
    let chain = d4_chain();
    let c = CostFunction::linear(0.5)?;
    let (mut tv, mut rel) = (0.0f64, 0.0f64);
    for p in d4_skill_productions() {
        for a in [0.0, 0.15] {
            for r in validate_chain(&chain, &p, &c, a, horizon, seeds)? {
                tv = tv.max(r.tv_distance);
                rel = rel.max(
                    ((r.empirical_productivity - r.analytic_productivity)
                        / r.analytic_productivity)
                        .abs(),
                );
            }
        }
    }
    let what = "simulated occupancy matches the product-form steady state";
    Ok(criterion(
        "monte-carlo",
        vec![
            CheckResult::at_most("max-tv-distance", what, tv, 0.02),
            CheckResult::at_most("max-rel-productivity-error", what, rel, 0.01),
        ],
    ))
}

/// ARA of the Uniform(0, 1)-induced production equals the hazard rate.
pub fn hazard_equivalence() -> Result<Criterion> {
    let p = ProductionFunction::from_distribution(DistributionSpec::Uniform { lo: 0.0, hi: 1.0 })?;
    let (mut worst, mut worst_fd) = (0.0f64, 0.0f64);
    let h = 1e-4;
    for x in linspace(0.05, 0.9, 200) {
        let hazard = 1.0 / (1.0 - x);
        let ara = p.ara(x)?.finite().unwrap_or(f64::NAN);
        worst = worst.max(((ara - hazard) / hazard).abs());
        let d1 = central_difference(|y| p.value(y), x, h);
        let d2 = (p.value(x + h) - 2.0 * p.value(x) + p.value(x - h)) / (h * h);
        worst_fd = worst_fd.max(((-d2 / d1 - hazard) / hazard).abs());
    }
    let nan_inf = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let what = "absolute risk aversion of a distribution-induced production equals its hazard rate";
    Ok(criterion(
        "hazard-equivalence",
        vec![
            CheckResult::at_most("max-rel-error", what, nan_inf(worst), 1e-6),
            CheckResult::at_most(
                "max-rel-error-finite-difference",
                what,
                nan_inf(worst_fd),
                1e-6,
            ),
        ],
    ))
}

pub const DEFAULT_SEED: u64 = 20_240_601;

/// All acceptance criteria with their default instance sets.
/// Criterion ids in run order.
pub const CRITERIA: [&str; 12] = [
    "oracle-match",
    "fosd",
    "two-state-dichotomy",
    "productivity-derivative",
    "skill-paradox-construction",
    "unreliability-construction",
    "risk-aversion-shapes",
    "skill-figures",
    "literacy-multimodality",
    "constant-verification",
    "monte-carlo",
    "hazard-equivalence",
];

/// Runs one criterion by id; `None` for an unknown id.
pub fn run_criterion(id: &str, seed: u64) -> Option<Result<Criterion>> {
    Some(match id {
        "oracle-match" => oracle_match(seed, 200),
        "fosd" => fosd(seed.wrapping_add(1), 100),
        "two-state-dichotomy" => two_state_dichotomy(),
        "productivity-derivative" => productivity_derivative_fd(),
        "skill-paradox-construction" => skill_paradox_construction(),
        "unreliability-construction" => unreliability_construction(),
        "risk-aversion-shapes" => risk_aversion_shapes(),
        "skill-figures" => skill_figures(),
        "literacy-multimodality" => literacy_multimodality(seed.wrapping_add(2), 100),
        "constant-verification" => constant_verification(seed.wrapping_add(3), 50),
        "monte-carlo" => {
            let seeds: Vec<u64> = (0..5).map(|i| seed.wrapping_add(i)).collect();
            monte_carlo(&seeds, 1_000_000)
        }
        "hazard-equivalence" => hazard_equivalence(),
        _ => return None,
    })
}

pub fn run_all(seed: u64) -> Result<Vec<Criterion>> {
    CRITERIA
        .iter()
        .map(|id| run_criterion(id, seed).expect("known id"))
        .collect()
}
