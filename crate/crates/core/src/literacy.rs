//! Bayesian signal followers with skill-dependent verification ability.
//!
//! Production is `min(1, beta x)` and cost `gamma e`. A worker of skill `s`
//! sees a signal of whether the assistance `a_bar` is present, correct with
//! probability `v(s)`, updates the reliability `q` to a posterior and picks the
//! ex-ante optimal effort for that posterior.

use serde::{Deserialize, Serialize};

use crate::dynamics::{stationary_from_rates, SteadyState, TransitionFunction};
use crate::effort::capped_linear_exante;
use crate::error::{check_param, ModelError, Result};
use crate::optim::right_root;

/// Tolerance for inverting `v`.
pub const INVERSE_TOL: f64 = 1e-12;

/// Points required within `NEAR_RADIUS` of the critical skill.
pub const MIN_POINTS_NEAR_CRITICAL: usize = 64;
pub const NEAR_RADIUS: f64 = 0.1;

/// Verification ability `v(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Verification {
    /// `min(1, 1/2 + kappa s)`
    SaturatingAffine { kappa: f64 },
    /// `1 - exp(-kappa s) / 2`
    ExponentialApproach { kappa: f64 },
    /// Skill-independent `v`.
    Constant { v: f64 },
}

impl Verification {
    pub fn saturating_affine(kappa: f64) -> Result<Self> {
        check_param("kappa", kappa, kappa > 0.0, "must be > 0")?;
        Ok(Self::SaturatingAffine { kappa })
    }

    pub fn exponential_approach(kappa: f64) -> Result<Self> {
        check_param("kappa", kappa, kappa > 0.0, "must be > 0")?;
        Ok(Self::ExponentialApproach { kappa })
    }

    pub fn constant(v: f64) -> Result<Self> {
        check_param("v", v, (0.5..=1.0).contains(&v), "must lie in [1/2, 1]")?;
        Ok(Self::Constant { v })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::SaturatingAffine { kappa } => Self::saturating_affine(kappa).map(|_| ()),
            Self::ExponentialApproach { kappa } => Self::exponential_approach(kappa).map(|_| ()),
            Self::Constant { v } => Self::constant(v).map(|_| ()),
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        match *self {
            Self::SaturatingAffine { kappa } => (0.5 + kappa * s).min(1.0),
            Self::ExponentialApproach { kappa } => 1.0 - 0.5 * (-kappa * s).exp(),
            Self::Constant { v } => v,
        }
    }

    /// Right derivative, and whether `s` sits on a kink.
    pub fn d1_right(&self, s: f64) -> (f64, bool) {
        match *self {
            Self::SaturatingAffine { kappa } => {
                let kink = 0.5 / kappa;
                let on_kink = (s - kink).abs() <= 1e-12 * kink.max(1.0);
                if s < kink && !on_kink {
                    (kappa, false)
                } else {
                    (0.0, on_kink)
                }
            }
            Self::ExponentialApproach { kappa } => (0.5 * kappa * (-kappa * s).exp(), false),
            Self::Constant { .. } => (0.0, false),
        }
    }

    /// `sup_s v(s)`.
    pub fn supremum(&self) -> f64 {
        match *self {
            Self::SaturatingAffine { .. } | Self::ExponentialApproach { .. } => 1.0,
            Self::Constant { v } => v,
        }
    }

    /// Smallest `s` with `v(s) = t`, by bisection. `None` unless
    /// `v(0) <= t < sup v` with `v` nonconstant.
    pub fn inverse(&self, t: f64) -> Option<f64> {
        if matches!(self, Self::Constant { .. }) {
            return None;
        }
        let v0 = self.value(0.0);
        if !(t >= v0 && t < self.supremum()) {
            return None;
        }
        if t == v0 {
            return Some(0.0);
        }
        let mut hi = 1.0;
        while self.value(hi) < t {
            hi *= 2.0;
            if !hi.is_finite() {
                return None;
            }
        }
        Some(right_root(|s| t - self.value(s), 0.0, hi, INVERSE_TOL))
    }
}

/// Verification curve plus `min(1, beta x)` production, `gamma e` cost and
/// prior reliability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiteracyModel {
    pub verification: Verification,
    pub beta: f64,
    pub gamma: f64,
    pub q: f64,
}

impl LiteracyModel {
    pub fn new(verification: Verification, beta: f64, gamma: f64, q: f64) -> Result<Self> {
        let m = Self {
            verification,
            beta,
            gamma,
            q,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.verification.validate()?;
        check_param("gamma", self.gamma, self.gamma > 0.0, "must be > 0")?;
        check_param(
            "beta",
            self.beta,
            self.beta > self.gamma,
            "must exceed gamma",
        )?;
        check_param(
            "q",
            self.q,
            self.q > 0.0 && self.q <= 1.0,
            "must lie in (0, 1]",
        )
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.verification, self.beta, self.gamma, q)
    }

    /// Reliability above which the low-effort regime applies.
    pub fn threshold(&self) -> f64 {
        (self.beta - self.gamma) / self.beta
    }

    /// Input level `1 / beta` where production saturates.
    pub fn saturation(&self) -> f64 {
        1.0 / self.beta
    }
}

/// Posterior reliabilities after a good (`q1`) or bad (`q0`) signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorPair {
    pub q1: f64,
    pub q0: f64,
}

pub fn posteriors(q: f64, v: f64) -> PosteriorPair {
    let good = q * v + (1.0 - q) * (1.0 - v);
    let bad = q * (1.0 - v) + (1.0 - q) * v;
    // a zero-probability signal keeps the prior
    PosteriorPair {
        q1: if good > 0.0 { q * v / good } else { q },
        q0: if bad > 0.0 { q * (1.0 - v) / bad } else { q },
    }
}

/// Probability of the signal reporting the assistance as present.
pub fn signal_prob_good(q: f64, v: f64) -> f64 {
    q * v + (1.0 - q) * (1.0 - v)
}

/// One row of a skill profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BayesOutcome {
    pub s: f64,
    pub e_b: f64,
    pub p_b: f64,
    pub q1: f64,
    pub q0: f64,
    pub signal_prob_good: f64,
}

pub fn bayes_effort(model: &LiteracyModel, s: f64, a_bar: f64) -> Result<BayesOutcome> {
    check_param("s", s, s >= 0.0, "must be >= 0")?;
    check_param("a_bar", a_bar, a_bar >= 0.0, "must be >= 0")?;
    Ok(bayes_effort_unchecked(model, s, a_bar))
}

fn bayes_effort_unchecked(model: &LiteracyModel, s: f64, a_bar: f64) -> BayesOutcome {
    let v = model.verification.value(s);
    let post = posteriors(model.q, v);
    let g = signal_prob_good(model.q, v);
    let (e1, p1) = capped_linear_exante(model.beta, model.gamma, s, a_bar, post.q1);
    let (e0, p0) = capped_linear_exante(model.beta, model.gamma, s, a_bar, post.q0);
    BayesOutcome {
        s,
        e_b: g * e1 + (1.0 - g) * e0,
        p_b: g * p1 + (1.0 - g) * p0,
        q1: post.q1,
        q0: post.q0,
        signal_prob_good: g,
    }
}

/// Posterior curve that crosses `(beta - gamma) / beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossingCurve {
    Q0,
    Q1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalReturnGap {
    pub omega: f64,
    pub crossing: CrossingCurve,
}

pub fn marginal_return_gap(model: &LiteracyModel) -> MarginalReturnGap {
    let omega = (model.beta - model.gamma) - model.q * model.beta;
    MarginalReturnGap {
        omega,
        crossing: if omega < 0.0 {
            CrossingCurve::Q0
        } else {
            CrossingCurve::Q1
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSkill {
    /// `v(s_tilde)`.
    pub target: f64,
    /// `None` when the target lies outside `[v(0), sup v)`.
    pub s_tilde: Option<f64>,
    pub crossing: CrossingCurve,
}

pub fn critical_skill(model: &LiteracyModel) -> CriticalSkill {
    let gap = marginal_return_gap(model);
    let odds = model.q / (1.0 - model.q) * model.gamma / (model.beta - model.gamma);
    let target = match gap.crossing {
        CrossingCurve::Q0 => 1.0 / (1.0 + 1.0 / odds),
        CrossingCurve::Q1 => 1.0 / (odds + 1.0),
    };
    CriticalSkill {
        target,
        s_tilde: model.verification.inverse(target),
        crossing: gap.crossing,
    }
}

/// Which clause of the multimodality condition applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// `omega < 0`
    NegativeGap,
    /// `omega >= 0` and `q < 1/2`
    LowReliability,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    /// Clause whose sign requirement is met, if any.
    pub clause: Option<Clause>,
    pub omega: f64,
    pub s_tilde: Option<f64>,
    /// Right-hand side of the bound on `s_tilde`.
    pub bound: f64,
    /// `v'(s_tilde)` was taken from the right at a kink.
    pub kink: bool,
}

pub fn check_condition_multimodal(model: &LiteracyModel) -> ConditionVerdict {
    let gap = marginal_return_gap(model);
    let crit = critical_skill(model);
    let q = model.q;
    let clause = if gap.omega < 0.0 {
        Some(Clause::NegativeGap)
    } else if q < 0.5 {
        Some(Clause::LowReliability)
    } else {
        None
    };
    let mut kink = false;
    let bound = match (gap.omega < 0.0, crit.s_tilde) {
        (true, _) => model.saturation(),
        (false, Some(st)) => {
            let (dv, on_kink) = model.verification.d1_right(st);
            kink = on_kink;
            let den = (1.0 - 2.0 * q) * dv;
            if den > 0.0 {
                model.saturation() - ((1.0 - 2.0 * q) * model.verification.value(st) + q) / den
            } else {
                f64::NEG_INFINITY
            }
        }
        (false, None) => f64::NEG_INFINITY,
    };
    let holds = clause.is_some() && crit.s_tilde.is_some_and(|st| st < bound);
    ConditionVerdict {
        holds,
        clause,
        omega: gap.omega,
        s_tilde: crit.s_tilde,
        bound,
        kink,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Decreasing,
    NonMonotonic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffortProfile {
    pub a_bar: f64,
    pub rows: Vec<BayesOutcome>,
    pub verdict: Monotonicity,
    /// First pair of consecutive skills where effort rises.
    pub witness: Option<(f64, f64)>,
}

/// Uniform grid on `[0, s_max]` merged with a dense band around the critical
/// skill (when finite).
pub fn skill_grid(model: &LiteracyModel, s_max: f64, n: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = crate::optim::linspace(0.0, s_max, n.max(2));
    if let Some(st) = critical_skill(model).s_tilde {
        let lo = (st - NEAR_RADIUS).max(0.0);
        let hi = st + NEAR_RADIUS;
        grid.extend(crate::optim::linspace(lo, hi, 4 * MIN_POINTS_NEAR_CRITICAL));
        grid.push(st);
        grid.push((st - 1e-9).max(0.0));
    }
    grid.retain(|s| *s >= 0.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn rises(values: &[f64]) -> Option<usize> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    values.windows(2).position(|w| w[1] > w[0] + 1e-12 * scale)
}

pub fn effort_skill_profile(
    model: &LiteracyModel,
    a_bar: f64,
    s_grid: &[f64],
) -> Result<EffortProfile> {
    model.validate()?;
    check_param("a_bar", a_bar, a_bar >= 0.0, "must be >= 0")?;
    if s_grid.len() < 2 {
        return Err(ModelError::EmptyGrid);
    }
    if s_grid.windows(2).any(|w| !(w[1] > w[0])) || s_grid[0] < 0.0 {
        return Err(ModelError::Model(
            "skill grid must be nonnegative and strictly increasing".to_string(),
        ));
    }
    if let Some(st) = critical_skill(model).s_tilde {
        let near = s_grid
            .iter()
            .filter(|s| (**s - st).abs() <= NEAR_RADIUS)
            .count();
        if near < MIN_POINTS_NEAR_CRITICAL {
            return Err(ModelError::Resolution(format!(
                "{near} skill points within {NEAR_RADIUS} of the critical skill {st}, need {MIN_POINTS_NEAR_CRITICAL}"
            )));
        }
    }
    let rows: Vec<BayesOutcome> = s_grid
        .iter()
        .map(|&s| bayes_effort_unchecked(model, s, a_bar))
        .collect();
    let efforts: Vec<f64> = rows.iter().map(|r| r.e_b).collect();
    let rise = rises(&efforts);
    Ok(EffortProfile {
        a_bar,
        verdict: if rise.is_some() {
            Monotonicity::NonMonotonic
        } else {
            Monotonicity::Decreasing
        },
        witness: rise.map(|i| (s_grid[i], s_grid[i + 1])),
        rows,
    })
}

/// Assistance threshold above which effort turns non-monotonic in skill.
///
/// Zero under the negative-gap clause; otherwise found by bisection on the
/// grid verdict over `[0, a_max]`. `None` when the condition fails or the
/// grid shows no rise even at `a_max`.
pub fn estimate_a_tilde(model: &LiteracyModel, s_grid: &[f64], a_max: f64) -> Result<Option<f64>> {
    let verdict = check_condition_multimodal(model);
    if !verdict.holds {
        return Ok(None);
    }
    if verdict.clause == Some(Clause::NegativeGap) {
        return Ok(Some(0.0));
    }
    let rising = |a: f64| -> Result<bool> {
        Ok(effort_skill_profile(model, a, s_grid)?.verdict == Monotonicity::NonMonotonic)
    };
    if !rising(a_max)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, a_max);
    if rising(lo)? {
        return Ok(Some(0.0));
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if rising(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Upward rates `lambda(e_b(s_k))` for all but the top state.
pub fn literacy_rates(
    model: &LiteracyModel,
    lambda: &TransitionFunction,
    states: &[f64],
    a_bar: f64,
) -> Vec<f64> {
    states[..states.len().saturating_sub(1)]
        .iter()
        .map(|&s| lambda.value(bayes_effort_unchecked(model, s, a_bar).e_b))
        .collect()
}

pub fn literacy_steady_state(
    model: &LiteracyModel,
    lambda: &TransitionFunction,
    mu: f64,
    states: &[f64],
    a_bar: f64,
) -> Result<SteadyState> {
    model.validate()?;
    check_param("mu", mu, mu > 0.0, "must be > 0")?;
    check_param("a_bar", a_bar, a_bar >= 0.0, "must be >= 0")?;
    if states.len() < 2 {
        return Err(ModelError::Model(format!(
            "need at least 2 states, got {}",
            states.len()
        )));
    }
    if states.windows(2).any(|w| w[1] < w[0]) || states[0] < 0.0 {
        return Err(ModelError::Model(
            "states must be sorted and >= 0".to_string(),
        ));
    }
    let up = literacy_rates(model, lambda, states, a_bar);
    let down = vec![mu; up.len()];
    stationary_from_rates(&up, &down)
}

/// Decay rate and skill set giving a multimodal distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultimodalWitness {
    pub mu: f64,
    pub states: Vec<f64>,
    pub pi: Vec<f64>,
    /// Peak of `lambda(e_b)` on the segment and the larger boundary value.
    pub peak_rate: f64,
    pub boundary_rate: f64,
    /// `states` plus all midpoints, and its mode count.
    pub superset_states: Vec<f64>,
    pub superset_mode_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalityReport {
    pub mode_count: usize,
    pub modes: Vec<usize>,
    pub witness: Option<MultimodalWitness>,
}

/// Modes of a distribution. A mode is a maximal run of equal values whose
/// existing neighbours are strictly lower; runs at either end count.
pub fn modality(pi: &SteadyState) -> ModalityReport {
    let x = &pi.pi;
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=x.len() {
        if i == x.len() || x[i] != x[start] {
            runs.push((start, i));
            start = i;
        }
    }
    let mut modes = Vec::new();
    let mut mode_count = 0;
    for (r, &(a, b)) in runs.iter().enumerate() {
        let left_ok = r == 0 || x[runs[r - 1].0] < x[a];
        let right_ok = r + 1 == runs.len() || x[runs[r + 1].0] < x[a];
        if left_ok && right_ok {
            mode_count += 1;
            modes.extend(a..b);
        }
    }
    ModalityReport {
        mode_count,
        modes,
        witness: None,
    }
}

/// Builds a multimodal `(mu, S)` from a bump in `s -> lambda(e_b(s))`.
///
/// On `s_grid` the bump is the point with the largest ratio of its rate over
/// the lower of the minimum rates on either side. `mu` is the geometric mean
/// of the peak and the larger side minimum, and states are taken from the
/// grid: up to two left of the peak with rate below `mu`, the peak, and two to
/// its right with rate below `mu`. Returns `None` when the rate never rises.
pub fn search_multimodal_instance(
    model: &LiteracyModel,
    lambda: &TransitionFunction,
    a_bar: f64,
    s_grid: &[f64],
) -> Result<Option<ModalityReport>> {
    model.validate()?;
    check_param("a_bar", a_bar, a_bar >= 0.0, "must be >= 0")?;
    let n = s_grid.len();
    if n < 3 {
        return Err(ModelError::EmptyGrid);
    }
    let r: Vec<f64> = s_grid
        .iter()
        .map(|&s| lambda.value(bayes_effort_unchecked(model, s, a_bar).e_b))
        .collect();
    let mut prefix_min = vec![f64::INFINITY; n];
    for i in 1..n {
        prefix_min[i] = prefix_min[i - 1].min(r[i - 1]);
    }
    let mut suffix_min = vec![f64::INFINITY; n];
    for i in (0..n - 1).rev() {
        suffix_min[i] = suffix_min[i + 1].min(r[i + 1]);
    }
    let mut best: Option<(usize, f64)> = None;
    for j in 1..n - 1 {
        let side = prefix_min[j].max(suffix_min[j]);
        let margin = r[j] / side;
        if margin > 1.0 + 1e-9 && best.is_none_or(|(_, m)| margin > m) {
            best = Some((j, margin));
        }
    }
    let Some((j, _)) = best else {
        return Ok(None);
    };
    let boundary_rate = prefix_min[j].max(suffix_min[j]);
    let peak_rate = r[j];
    let mu = (boundary_rate * peak_rate).sqrt();

    let below: Vec<usize> = (0..j).filter(|&i| r[i] < mu).collect();
    let mut left = vec![below[0]];
    if below.len() > 1 {
        left.push(*below.last().unwrap());
    }
    let right: Vec<usize> = (j + 1..n).filter(|&i| r[i] < mu).take(2).collect();
    let mut idx = left;
    idx.push(j);
    idx.extend(right);
    let states: Vec<f64> = idx.iter().map(|&i| s_grid[i]).collect();

    let ss = literacy_steady_state(model, lambda, mu, &states, a_bar)?;
    let report = modality(&ss);

    let mut superset = states.clone();
    superset.extend(states.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    superset.sort_by(f64::total_cmp);
    superset.dedup();
    let sup_ss = literacy_steady_state(model, lambda, mu, &superset, a_bar)?;
    let superset_mode_count = modality(&sup_ss).mode_count;

    Ok(Some(ModalityReport {
        mode_count: report.mode_count,
        modes: report.modes,
        witness: Some(MultimodalWitness {
            mu,
            states,
            pi: ss.pi,
            peak_rate,
            boundary_rate,
            superset_states: superset,
            superset_mode_count,
        }),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause_a() -> LiteracyModel {
        LiteracyModel::new(Verification::saturating_affine(2.0).unwrap(), 2.0, 1.0, 0.6).unwrap()
    }

    #[test]
    fn posterior_arithmetic() {
        let p = posteriors(0.6, 0.8);
        assert!((p.q1 - 0.48 / 0.56).abs() < 1e-15);
        assert!((p.q0 - 0.12 / 0.44).abs() < 1e-15);
        let flat = posteriors(0.3, 0.5);
        assert_eq!((flat.q1, flat.q0), (0.3, 0.3));
        let perfect = posteriors(0.3, 1.0);
        assert_eq!((perfect.q1, perfect.q0), (1.0, 0.0));
    }

    #[test]
    fn gap_and_crossing() {
        let m = clause_a();
        let g = marginal_return_gap(&m);
        assert!((g.omega + 0.2).abs() < 1e-15);
        assert_eq!(g.crossing, CrossingCurve::Q0);
        let g = marginal_return_gap(&m.with_q(0.5).unwrap());
        assert_eq!(g.omega, 0.0);
        assert_eq!(g.crossing, CrossingCurve::Q1);
    }

    #[test]
    fn critical_skill_example() {
        let m = clause_a();
        let c = critical_skill(&m);
        assert!((c.target - 0.6).abs() < 1e-15);
        let st = c.s_tilde.unwrap();
        assert!((st - 0.05).abs() < 1e-11);
        let q0 = posteriors(m.q, m.verification.value(st)).q0;
        assert!((q0 - m.threshold()).abs() < 1e-9);
    }

    #[test]
    fn critical_skill_at_prior_threshold_is_zero() {
        let c = critical_skill(&clause_a().with_q(0.5).unwrap());
        assert_eq!(c.target, 0.5);
        assert_eq!(c.s_tilde, Some(0.0));
    }

    #[test]
    fn flat_verification_has_no_crossing() {
        let m = LiteracyModel::new(Verification::constant(0.5).unwrap(), 2.0, 1.0, 0.6).unwrap();
        assert_eq!(critical_skill(&m).s_tilde, None);
        assert!(!check_condition_multimodal(&m).holds);
    }

    #[test]
    fn condition_clauses() {
        let v = check_condition_multimodal(&clause_a());
        assert!(v.holds);
        assert_eq!(v.clause, Some(Clause::NegativeGap));
        let m = LiteracyModel::new(Verification::saturating_affine(2.0).unwrap(), 2.0, 0.5, 0.6)
            .unwrap();
        let v = check_condition_multimodal(&m);
        assert!(v.omega >= 0.0);
        assert!(!v.holds);
        assert_eq!(v.clause, None);
    }

    #[test]
    fn kink_uses_right_derivative() {
        let v = Verification::saturating_affine(2.0).unwrap();
        assert_eq!(v.d1_right(0.1), (2.0, false));
        assert_eq!(v.d1_right(0.25), (0.0, true));
        assert_eq!(v.d1_right(0.3), (0.0, false));
    }

    #[test]
    fn modality_plateau_rule() {
        let m = |v: Vec<f64>| modality(&SteadyState { pi: v }).mode_count;
        assert_eq!(m(vec![0.5, 0.3, 0.2]), 1);
        assert_eq!(m(vec![0.4, 0.1, 0.5]), 2);
        assert_eq!(m(vec![0.25; 4]), 1);
        assert_eq!(m(vec![0.1, 0.3, 0.3, 0.2, 0.1]), 1);
        assert_eq!(m(vec![0.3, 0.3, 0.1, 0.3]), 2);
    }

    #[test]
    fn jump_at_critical_skill() {
        let m = clause_a();
        let grid = skill_grid(&m, 1.0, 201);
        let prof = effort_skill_profile(&m, 0.2, &grid).unwrap();
        assert_eq!(prof.verdict, Monotonicity::NonMonotonic);
        let (lo, hi) = prof.witness.unwrap();
        assert!(lo < 0.05 && hi >= 0.05);
    }

    #[test]
    fn sparse_grid_is_rejected() {
        let grid = crate::optim::linspace(0.0, 1.0, 50);
        assert!(matches!(
            effort_skill_profile(&clause_a(), 0.2, &grid),
            Err(ModelError::Resolution(_))
        ));
    }

    #[test]
    fn witness_for_clause_a() {
        let m = clause_a();
        let lambda = TransitionFunction::new(0.01, 1.0).unwrap();
        let grid = skill_grid(&m, 1.0, 201);
        let rep = search_multimodal_instance(&m, &lambda, 0.2, &grid)
            .unwrap()
            .unwrap();
        assert!(rep.mode_count >= 2);
        let w = rep.witness.unwrap();
        assert!(w.states.len() >= 5);
        assert!(w.superset_mode_count >= 2);
    }

    #[test]
    fn no_witness_when_rates_fall() {
        let m = LiteracyModel::new(Verification::constant(0.8).unwrap(), 2.0, 1.0, 0.6).unwrap();
        let lambda = TransitionFunction::new(0.01, 1.0).unwrap();
        let grid = crate::optim::linspace(0.0, 1.0, 101);
        assert!(search_multimodal_instance(&m, &lambda, 0.2, &grid)
            .unwrap()
            .is_none());
    }
}
