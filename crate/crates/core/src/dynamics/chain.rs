use serde::{Deserialize, Serialize};

use crate::effort::effort_deterministic;
use crate::error::{check_param, ModelError, Result};
use crate::functions::{critical_level, CostFunction, ProductionFunction};

/// Upward rate `lambda(e) = lambda0 + lambda1 * e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionFunction {
    pub lambda0: f64,
    pub lambda1: f64,
}

impl TransitionFunction {
    pub fn new(lambda0: f64, lambda1: f64) -> Result<Self> {
        check_param("lambda0", lambda0, lambda0 > 0.0, "must be > 0")?;
        check_param("lambda1", lambda1, lambda1 >= 0.0, "must be >= 0")?;
        Ok(Self { lambda0, lambda1 })
    }

    pub fn value(&self, e: f64) -> f64 {
        self.lambda0 + self.lambda1 * e
    }

    pub fn d1(&self, _e: f64) -> f64 {
        self.lambda1
    }
}

/// Birth-death chain over sorted skill states with decay rate `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkillChain {
    pub states: Vec<f64>,
    pub lambda: TransitionFunction,
    pub mu: f64,
}

impl SkillChain {
    pub fn new(states: Vec<f64>, lambda: TransitionFunction, mu: f64) -> Result<Self> {
        let chain = Self { states, lambda, mu };
        chain.validate()?;
        Ok(chain)
    }

    pub fn validate(&self) -> Result<()> {
        if self.states.len() < 2 {
            return Err(ModelError::Model(format!(
                "need at least 2 states, got {}",
                self.states.len()
            )));
        }
        for &s in &self.states {
            check_param("state", s, s >= 0.0, "skill levels must be >= 0")?;
        }
        if self.states.windows(2).any(|w| w[1] < w[0]) {
            return Err(ModelError::Model("states must be sorted".to_string()));
        }
        check_param("mu", self.mu, self.mu > 0.0, "must be > 0")?;
        TransitionFunction::new(self.lambda.lambda0, self.lambda.lambda1)?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Same chain with another decay rate.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.states.clone(), self.lambda, mu)
    }

    /// States `0, step, ..., step (n-1)`.
    pub fn evenly_spaced(n: usize, step: f64, lambda: TransitionFunction, mu: f64) -> Result<Self> {
        Self::new((0..n).map(|k| step * k as f64).collect(), lambda, mu)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub pi: Vec<f64>,
}

impl SteadyState {
    pub fn cumulative(&self) -> Vec<f64> {
        self.pi
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    /// `max_k |pi_k up_k - pi_(k+1) down_k|`.
    pub fn detailed_balance_residual(&self, up: &[f64], down: &[f64]) -> f64 {
        (0..self.pi.len() - 1)
            .map(|k| (self.pi[k] * up[k] - self.pi[k + 1] * down[k]).abs())
            .fold(0.0, f64::max)
    }

    /// `max_k |(pi Q)_k|` for the tridiagonal generator.
    pub fn global_balance_residual(&self, up: &[f64], down: &[f64]) -> f64 {
        let n = self.pi.len();
        let mut flow = vec![0.0; n];
        for k in 0..n - 1 {
            let f_up = self.pi[k] * up[k];
            let f_down = self.pi[k + 1] * down[k];
            flow[k] += f_down - f_up;
            flow[k + 1] += f_up - f_down;
        }
        flow.iter().fold(0.0, |m, f| m.max(f.abs()))
    }
}

/// Product-form distribution for a birth-death chain. `up[k]` is the rate
/// `k -> k+1`, `down[k]` the rate `k+1 -> k`.
pub fn stationary_from_rates(up: &[f64], down: &[f64]) -> Result<SteadyState> {
    if up.len() != down.len() {
        return Err(ModelError::LengthMismatch {
            left: up.len(),
            right: down.len(),
        });
    }
    if up.iter().chain(down).any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(ModelError::Model(
            "transition rates must be positive".to_string(),
        ));
    }
    let mut logs = Vec::with_capacity(up.len() + 1);
    logs.push(0.0);
    for (u, d) in up.iter().zip(down) {
        let last = *logs.last().unwrap();
        logs.push(last + u.ln() - d.ln());
    }
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    Ok(SteadyState {
        pi: w.into_iter().map(|x| x / total).collect(),
    })
}

/// Per-state optimum under deterministic assistance `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateOutcome {
    pub effort: f64,
    pub productivity: f64,
}

/// Efforts and productivities at each state. `x_star` is the critical level
/// for `(p, c)`, passed in to avoid recomputing it per grid point.
pub(crate) fn state_outcomes(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    a: f64,
    x_star: f64,
) -> Result<Vec<StateOutcome>> {
    chain
        .states
        .iter()
        .map(|&s| {
            if c.as_linear().is_some() {
                p.check_domain(s + a)?;
                let effort = (x_star - s - a).max(0.0);
                let productivity = if s + a <= x_star {
                    p.value(x_star)
                } else {
                    p.value(s + a)
                };
                Ok(StateOutcome {
                    effort,
                    productivity,
                })
            } else {
                let sol = effort_deterministic(p, c, s, a)?;
                Ok(StateOutcome {
                    effort: sol.effort,
                    productivity: sol.productivity,
                })
            }
        })
        .collect()
}

/// Steady state of the chain with all outputs at one assistance level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOutcome {
    pub a: f64,
    pub states: Vec<StateOutcome>,
    pub steady_state: SteadyState,
    pub productivity: f64,
    pub effort: f64,
}

pub(crate) fn chain_outcome(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    a: f64,
    x_star: f64,
) -> Result<ChainOutcome> {
    let states = state_outcomes(chain, p, c, a, x_star)?;
    let up: Vec<f64> = states[..states.len() - 1]
        .iter()
        .map(|o| chain.lambda.value(o.effort))
        .collect();
    let down = vec![chain.mu; up.len()];
    let steady_state = stationary_from_rates(&up, &down)?;
    let productivity = steady_state
        .pi
        .iter()
        .zip(&states)
        .map(|(w, o)| w * o.productivity)
        .sum();
    let effort = steady_state
        .pi
        .iter()
        .zip(&states)
        .map(|(w, o)| w * o.effort)
        .sum();
    Ok(ChainOutcome {
        a,
        states,
        steady_state,
        productivity,
        effort,
    })
}

/// Stationary distribution, steady-state effort and productivity at `a`.
pub fn steady_state_outcome(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    a: f64,
) -> Result<ChainOutcome> {
    chain.validate()?;
    check_param("a", a, a >= 0.0, "must be >= 0")?;
    let x_star = critical_level(p, c)?;
    chain_outcome(chain, p, c, a, x_star)
}

pub fn steady_state(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    a: f64,
) -> Result<SteadyState> {
    Ok(steady_state_outcome(chain, p, c, a)?.steady_state)
}

/// Upward and downward rates at `a`, as fed to the stationary solver.
pub fn chain_rates(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    a: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let out = steady_state_outcome(chain, p, c, a)?;
    let up: Vec<f64> = out.states[..out.states.len() - 1]
        .iter()
        .map(|o| chain.lambda.value(o.effort))
        .collect();
    let down = vec![chain.mu; up.len()];
    Ok((up, down))
}

/// Prefix-sum dominance: `true` iff every prefix of `low` (the distribution
/// under less assistance) is at most the same prefix of `high`.
pub fn fosd_check(low: &SteadyState, high: &SteadyState) -> Result<bool> {
    if low.pi.len() != high.pi.len() {
        return Err(ModelError::LengthMismatch {
            left: low.pi.len(),
            right: high.pi.len(),
        });
    }
    Ok(low
        .cumulative()
        .iter()
        .zip(high.cumulative())
        .all(|(l, h)| *l <= h + 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d4_chain() -> SkillChain {
        SkillChain::evenly_spaced(4, 0.1, TransitionFunction::new(0.01, 1.0).unwrap(), 0.2).unwrap()
    }

    #[test]
    fn symmetric_two_state_is_uniform() {
        let ss = stationary_from_rates(&[0.7], &[0.7]).unwrap();
        assert!((ss.pi[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn extreme_ratios_do_not_overflow() {
        let ss = stationary_from_rates(&[1e200; 5], &[1e-200; 5]).unwrap();
        assert!((ss.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((ss.pi[5] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn d4_balance() {
        let p = ProductionFunction::fractional(1.0).unwrap();
        let c = CostFunction::linear(0.5).unwrap();
        let chain = d4_chain();
        let ss = steady_state(&chain, &p, &c, 0.0).unwrap();
        let (up, down) = chain_rates(&chain, &p, &c, 0.0).unwrap();
        assert!(ss.detailed_balance_residual(&up, &down) < 1e-10);
        assert!(ss.global_balance_residual(&up, &down) < 1e-10);
        assert!((ss.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_skills_recover_basic_model() {
        let p = ProductionFunction::fractional(1.0).unwrap();
        let c = CostFunction::linear(0.5).unwrap();
        let chain = SkillChain::new(
            vec![0.2; 3],
            TransitionFunction::new(0.01, 1.0).unwrap(),
            0.2,
        )
        .unwrap();
        for a in [0.0, 0.1, 0.3, 0.9] {
            let out = steady_state_outcome(&chain, &p, &c, a).unwrap();
            let basic = crate::effort::effort_basic(&p, &c, 0.2, a).unwrap();
            assert!((out.productivity - basic.productivity).abs() < 1e-14);
        }
    }

    #[test]
    fn fosd_sanity() {
        let a = SteadyState { pi: vec![0.5, 0.5] };
        let b = SteadyState { pi: vec![0.2, 0.8] };
        assert!(fosd_check(&a, &a).unwrap());
        assert!(fosd_check(&b, &a).unwrap());
        assert!(!fosd_check(&a, &b).unwrap());
        assert!(fosd_check(&a, &SteadyState { pi: vec![1.0] }).is_err());
    }
}
