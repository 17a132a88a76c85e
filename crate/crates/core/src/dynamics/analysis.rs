use serde::{Deserialize, Serialize};

use super::chain::{steady_state_outcome, SkillChain, TransitionFunction};
use super::sweep::{adjacent_intervals, detect_decline_regions, sweep_adjacent, GridSpec};
use crate::error::{check_param, ModelError, Result};
use crate::functions::{critical_level, CostFunction, ProductionFunction};

fn check_m(chain: &SkillChain, m: usize) -> Result<()> {
    if m == 0 || m >= chain.len() {
        return Err(ModelError::Model(format!(
            "m = {m} outside 1..={}",
            chain.len() - 1
        )));
    }
    Ok(())
}

/// Sensitivity gap `Delta_m` (`1 <= m <= N-1`, 1-based).
pub fn sensitivity_gap(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    m: usize,
) -> Result<f64> {
    chain.validate()?;
    check_m(chain, m)?;
    let x_star = critical_level(p, c)?;
    let s = &chain.states;
    let lam = &chain.lambda;
    let transition: f64 = (0..m)
        .map(|j| {
            let e = s[m - 1] - s[j];
            lam.d1(e) / lam.value(e)
        })
        .sum();
    let x_next = x_star + s[m] - s[m - 1];
    let gain = p.value(x_next) - p.value(x_star);
    if !(gain > 0.0) {
        return Err(ModelError::DegenerateStates { m });
    }
    Ok(transition - p.d1(x_next) / gain)
}

/// Decay-rate threshold for two states; `None` when `Delta_1 <= 0`.
pub fn mu_bar_two_state(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
) -> Result<Option<f64>> {
    chain.validate()?;
    if chain.len() != 2 {
        return Err(ModelError::Model(format!(
            "two-state threshold needs N = 2, got {}",
            chain.len()
        )));
    }
    let x_star = critical_level(p, c)?;
    let x_next = x_star + chain.states[1] - chain.states[0];
    let slope = p.d1(x_next);
    let (l0, dl0) = (chain.lambda.value(0.0), chain.lambda.d1(0.0));
    let den = dl0 * (p.value(x_next) - p.value(x_star)) - l0 * slope;
    Ok((den > 0.0).then(|| l0 * l0 * slope / den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Both,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub value: f64,
    pub side: Side,
}

/// Closed-form `P'(a)` on the adjacent interval `I_m` (linear cost).
/// At the right end of `I_m` this is the left derivative, at the left end
/// the right derivative.
pub fn productivity_derivative(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    a: f64,
    m: usize,
) -> Result<Derivative> {
    chain.validate()?;
    if c.as_linear().is_none() {
        return Err(ModelError::Inadmissible(
            "closed-form derivative needs a linear cost".to_string(),
        ));
    }
    let n = chain.len();
    if m > n {
        return Err(ModelError::Model(format!("m = {m} outside 0..={n}")));
    }
    let x_star = critical_level(p, c)?;
    let iv = adjacent_intervals(&chain.states, x_star)[m];
    if iv.empty {
        return Err(ModelError::Model(format!("I_{m} is empty")));
    }
    if a < iv.lo || a > iv.hi {
        return Err(ModelError::Model(format!(
            "a = {a} outside the closure of I_{m} = [{}, {}]",
            iv.lo, iv.hi
        )));
    }
    let side = if a == iv.hi {
        Side::Left
    } else if a == iv.lo && m != n {
        Side::Right
    } else {
        Side::Both
    };
    if m == n {
        return Ok(Derivative { value: 0.0, side });
    }
    let s = &chain.states;
    let lam = &chain.lambda;
    let mu = chain.mu;
    let l0 = lam.value(0.0);
    // 1-based k in the formulas maps to s[k - 1]
    let w = |k: usize| mu.powi(-(k as i32 - 1));
    let mut a_sum = 0.0;
    let mut da_sum = 0.0;
    for k in 1..=m {
        let mut prod = 1.0;
        let mut ratio = 0.0;
        for i in k..=m {
            let e = x_star - s[i - 1] - a;
            prod *= lam.value(e);
            ratio += lam.d1(e) / lam.value(e);
        }
        let a_km = 1.0 / prod;
        a_sum += w(k) * a_km;
        // d/da of lambda(x* - s_i - a) is -lambda', so A' = A * sum(lambda'/lambda)
        da_sum += w(k) * a_km * ratio;
    }
    let mut b_sum = 0.0;
    let mut b_slope = 0.0;
    let mut b_gain = 0.0;
    for k in (m + 1)..=n {
        let b = l0.powi(k as i32 - m as i32 - 1) * w(k);
        b_sum += b;
        b_slope += b * p.d1(s[k - 1] + a);
        b_gain += b * (p.value(s[k - 1] + a) - p.value(x_star));
    }
    let total = a_sum + b_sum;
    let value = (b_slope * total - b_gain * da_sum) / (total * total);
    Ok(Derivative { value, side })
}

/// Convex-cost two-state condition `z0 + z2 mu^2 < z1 mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexTwoStateCondition {
    pub z0: f64,
    pub z1: f64,
    pub z2: f64,
    pub x_c: f64,
}

impl ConvexTwoStateCondition {
    pub fn holds(&self, mu: f64) -> bool {
        self.z0 + self.z2 * mu * mu < self.z1 * mu
    }

    /// Open range of `mu` where the condition holds, if any.
    pub fn mu_window(&self) -> Option<(f64, f64)> {
        if self.z2 == 0.0 {
            return (self.z1 > 0.0).then(|| (self.z0 / self.z1, f64::INFINITY));
        }
        let disc = self.z1 * self.z1 - 4.0 * self.z2 * self.z0;
        (self.z1 > 0.0 && disc > 0.0).then(|| {
            let r = disc.sqrt();
            (
                (self.z1 - r) / (2.0 * self.z2),
                (self.z1 + r) / (2.0 * self.z2),
            )
        })
    }
}

pub fn convex_two_state_condition(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
) -> Result<ConvexTwoStateCondition> {
    chain.validate()?;
    if chain.len() != 2 {
        return Err(ModelError::Model("condition needs N = 2".to_string()));
    }
    let x_c = critical_level(p, c)?;
    let x_next = x_c + chain.states[1] - chain.states[0];
    let gain = p.value(x_next) - p.value(x_c);
    if !(gain > 0.0) {
        return Err(ModelError::DegenerateStates { m: 1 });
    }
    let (l0, dl0) = (chain.lambda.value(0.0), chain.lambda.d1(0.0));
    let c2 = c.d2();
    let p2 = p.d2(x_c);
    let curv = c2 / (c2 - p2);
    let z2 = p.d1(x_c) / (l0 * gain) * curv;
    let z1 = dl0 / l0 * (-p2 / (c2 - p2)) - p.d1(x_next) / gain - p.d1(x_c) / gain * curv;
    let z0 = l0 * p.d1(x_next) / gain;
    Ok(ConvexTwoStateCondition { z0, z1, z2, x_c })
}

/// Adversarial chain where raising assistance from `0` to `x*` cuts
/// steady-state productivity by at least a factor `eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkillParadoxInstance {
    pub eps: f64,
    pub states: Vec<f64>,
    pub gamma: f64,
    pub slope_below: f64,
    pub slope_above: f64,
    pub x_star: f64,
    pub lambda: TransitionFunction,
    pub mu: f64,
    pub a_low: f64,
    pub a_high: f64,
    pub productivity_low: f64,
    pub productivity_high: f64,
    pub ratio: f64,
    /// `lambda(0) -> 0` limit of the same ratio.
    pub ratio_limit: f64,
}

impl SkillParadoxInstance {
    pub fn production(&self) -> Result<ProductionFunction> {
        ProductionFunction::kinked_linear(self.slope_below, self.slope_above, self.x_star)
    }

    pub fn chain(&self) -> Result<SkillChain> {
        SkillChain::new(self.states.clone(), self.lambda, self.mu)
    }
}

/// `lim_{lambda(0) -> 0} P(x*) / P(x* - z)` for a chain starting at skill 0.
pub fn lambda0_ratio_limit(
    p: &ProductionFunction,
    x_star: f64,
    s2: f64,
    z: f64,
    lambda_z: f64,
    mu: f64,
) -> f64 {
    let r = lambda_z / mu;
    p.value(x_star) / ((p.value(x_star) + r * p.value(x_star + s2 - z)) / (1.0 + r))
}

pub fn construct_skill_paradox_instance(
    eps: f64,
    states: &[f64],
    lambda0: f64,
) -> Result<SkillParadoxInstance> {
    check_param("eps", eps, eps > 0.0 && eps < 1.0, "must lie in (0, 1)")?;
    check_param("lambda0", lambda0, lambda0 > 0.0, "must be > 0")?;
    if states.len() < 2 || states[0] != 0.0 || states.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ModelError::Model(
            "states must start at 0 and increase strictly".to_string(),
        ));
    }
    let gamma = 1.0;
    let kink_gap = 1e-4;
    let (slope_below, slope_above) = (gamma + kink_gap, gamma - kink_gap);
    let x_star = eps * states[1] / 4.0;
    let mu = 1.0;
    // lambda(x*) / (mu + lambda(x*)) = 1 - eps/8, inside the 1 - eps/4 bound
    let r = 8.0 / eps - 1.0;
    let lambda1 = (r * mu - lambda0) / x_star;
    let lambda = TransitionFunction::new(lambda0, lambda1)?;
    let p = ProductionFunction::kinked_linear(slope_below, slope_above, x_star)?;
    let c = CostFunction::linear(gamma)?;
    let chain = SkillChain::new(states.to_vec(), lambda, mu)?;
    let x_check = critical_level(&p, &c)?;
    if (x_check - x_star).abs() > 1e-9 * x_star.max(1.0) {
        return Err(ModelError::Model(format!(
            "critical level {x_check} differs from the kink {x_star}"
        )));
    }
    let (a_low, a_high) = (0.0, x_star);
    let low = steady_state_outcome(&chain, &p, &c, a_low)?.productivity;
    let high = steady_state_outcome(&chain, &p, &c, a_high)?.productivity;
    let ratio_limit = lambda0_ratio_limit(&p, x_star, states[1], x_star, lambda.value(x_star), mu);
    Ok(SkillParadoxInstance {
        eps,
        states: states.to_vec(),
        gamma,
        slope_below,
        slope_above,
        x_star,
        lambda,
        mu,
        a_low,
        a_high,
        productivity_low: low,
        productivity_high: high,
        ratio: high / low,
        ratio_limit,
    })
}

/// Smallest `mu` on the (sorted) grid whose sweep shows a decline region.
pub fn empirical_decline_mu(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    mu_grid: &[f64],
    spec: &GridSpec,
) -> Result<Option<f64>> {
    for &mu in mu_grid {
        let s = sweep_adjacent(&chain.with_mu(mu)?, p, c, spec)?;
        if !detect_decline_regions(&s)?.is_empty() {
            return Ok(Some(mu));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac() -> (ProductionFunction, CostFunction) {
        (
            ProductionFunction::fractional(1.0).unwrap(),
            CostFunction::linear(0.5).unwrap(),
        )
    }

    fn two_state(s2: f64, mu: f64) -> SkillChain {
        SkillChain::new(
            vec![0.0, s2],
            TransitionFunction::new(0.01, 1.0).unwrap(),
            mu,
        )
        .unwrap()
    }

    #[test]
    fn gap_example_is_positive() {
        let (p, c) = frac();
        let x = 2f64.sqrt() - 1.0;
        let want = 100.0 - p.d1(x + 0.1) / (p.value(x + 0.1) - p.value(x));
        let got = sensitivity_gap(&two_state(0.1, 0.2), &p, &c, 1).unwrap();
        assert!((got - want).abs() < 1e-12 && got > 0.0);
    }

    #[test]
    fn constant_transition_gives_negative_gap() {
        let (p, c) = frac();
        let chain = SkillChain::new(
            vec![0.0, 0.3],
            TransitionFunction::new(0.5, 0.0).unwrap(),
            1.0,
        )
        .unwrap();
        assert!(sensitivity_gap(&chain, &p, &c, 1).unwrap() < 0.0);
        assert_eq!(mu_bar_two_state(&chain, &p, &c).unwrap(), None);
    }

    #[test]
    fn degenerate_states_error() {
        let p = ProductionFunction::piecewise_linear_capped(2.0).unwrap();
        let c = CostFunction::linear(1.0).unwrap();
        let err = sensitivity_gap(&two_state(0.3, 1.0), &p, &c, 1).unwrap_err();
        assert_eq!(err, ModelError::DegenerateStates { m: 1 });
    }

    #[test]
    fn mu_bar_vanishes_with_lambda0() {
        let (p, c) = frac();
        let big = |l0: f64| {
            let ch = SkillChain::new(
                vec![0.0, 0.2],
                TransitionFunction::new(l0, 1.0).unwrap(),
                1.0,
            )
            .unwrap();
            mu_bar_two_state(&ch, &p, &c).unwrap().unwrap()
        };
        assert!(big(1e-6) < 1e-9);
        assert!(big(1e-3) > big(1e-4));
    }

    #[test]
    fn convex_condition_reduces_to_gap_when_linear() {
        let (p, c) = frac();
        let ch = two_state(0.2, 1.0);
        let cond = convex_two_state_condition(&ch, &p, &c).unwrap();
        assert_eq!(cond.z2, 0.0);
        let gap = sensitivity_gap(&ch, &p, &c, 1).unwrap();
        assert!((cond.z1 - gap).abs() < 1e-12);
        let mu_bar = mu_bar_two_state(&ch, &p, &c).unwrap().unwrap();
        let (lo, _) = cond.mu_window().unwrap();
        assert!((lo - mu_bar).abs() < 1e-12 * mu_bar.max(1.0));
    }

    #[test]
    fn last_interval_derivative_is_zero() {
        let (p, c) = frac();
        let ch =
            SkillChain::evenly_spaced(4, 0.1, TransitionFunction::new(0.01, 1.0).unwrap(), 0.2)
                .unwrap();
        let d = productivity_derivative(&ch, &p, &c, 0.05, 4).unwrap();
        assert_eq!(d.value, 0.0);
    }
}
