//! Event-driven simulation of birth-death chains.
//!
//! Each replica draws from its own `ChaCha8Rng` seeded with the replica seed,
//! so runs are reproducible and independent of thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{steady_state_outcome, SkillChain};
use crate::error::{ModelError, Result};
use crate::functions::{CostFunction, ProductionFunction};

pub const MIN_HORIZON: u64 = 10_000;
/// Fraction of simulated time discarded before occupancy is recorded.
pub const BURN_IN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRun {
    pub seed: u64,
    /// Number of jumps.
    pub horizon: u64,
    pub initial: usize,
    /// Time spent in each state after burn-in.
    pub occupancy: Vec<f64>,
    pub burn_in_time: f64,
    pub total_time: f64,
}

impl SimulationRun {
    pub fn empirical(&self) -> Vec<f64> {
        let t: f64 = self.occupancy.iter().sum();
        self.occupancy.iter().map(|o| o / t).collect()
    }
}

struct Rates {
    hold: Vec<Exp<f64>>,
    p_up: Vec<f64>,
}

fn rates(up: &[f64], down: &[f64]) -> Result<Rates> {
    if up.len() != down.len() {
        return Err(ModelError::LengthMismatch {
            left: up.len(),
            right: down.len(),
        });
    }
    let n = up.len() + 1;
    let mut hold = Vec::with_capacity(n);
    let mut p_up = Vec::with_capacity(n);
    for k in 0..n {
        let u = if k + 1 < n { up[k] } else { 0.0 };
        let d = if k > 0 { down[k - 1] } else { 0.0 };
        let total = u + d;
        if !(total > 0.0) || !total.is_finite() {
            return Err(ModelError::Model(format!("zero total rate at state {k}")));
        }
        hold.push(Exp::new(total).map_err(|e| ModelError::Model(e.to_string()))?);
        p_up.push(u / total);
    }
    Ok(Rates { hold, p_up })
}

/// Runs `horizon` jumps from `initial` and calls `visit(state, dt, t)` for
/// each holding period starting at time `t`. Returns the end time.
fn run_path<F: FnMut(usize, f64, f64)>(
    r: &Rates,
    horizon: u64,
    initial: usize,
    seed: u64,
    mut visit: F,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k = initial;
    let mut t = 0.0;
    for _ in 0..horizon {
        let dt = r.hold[k].sample(&mut rng);
        visit(k, dt, t);
        t += dt;
        if rng.random::<f64>() < r.p_up[k] {
            k += 1;
        } else {
            k -= 1;
        }
    }
    t
}

/// Simulates the chain with up-rates `up[k]` (`k -> k+1`) and down-rates
/// `down[k]` (`k+1 -> k`), recording occupancy after the burn-in time.
pub fn simulate(
    up: &[f64],
    down: &[f64],
    horizon: u64,
    initial: usize,
    seed: u64,
) -> Result<SimulationRun> {
    if horizon < MIN_HORIZON {
        return Err(ModelError::Model(format!(
            "horizon {horizon} below {MIN_HORIZON} events"
        )));
    }
    let r = rates(up, down)?;
    let n = r.hold.len();
    if initial >= n {
        return Err(ModelError::Model(format!(
            "initial state {initial} out of range"
        )));
    }
    // the first pass only measures the total time, the second replays the
    // same path
    let total_time = run_path(&r, horizon, initial, seed, |_, _, _| {});
    let burn_in_time = BURN_IN * total_time;
    let mut occupancy = vec![0.0; n];
    run_path(&r, horizon, initial, seed, |k, dt, t| {
        let end = t + dt;
        if end > burn_in_time {
            occupancy[k] += end - t.max(burn_in_time);
        }
    });
    Ok(SimulationRun {
        seed,
        horizon,
        initial,
        occupancy,
        burn_in_time,
        total_time,
    })
}

/// Independent replicas, one per seed, in parallel.
pub fn simulate_replicas(
    up: &[f64],
    down: &[f64],
    horizon: u64,
    seeds: &[u64],
) -> Result<Vec<SimulationRun>> {
    seeds
        .par_iter()
        .map(|&seed| simulate(up, down, horizon, 0, seed))
        .collect()
}

pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(ModelError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRecord {
    pub seed: u64,
    pub horizon: u64,
    /// Empirical distribution from occupancy times.
    pub occupancy: Vec<f64>,
    pub tv_distance: f64,
    pub empirical_productivity: f64,
    pub analytic_productivity: f64,
}

/// Compares simulated and product-form steady states of `chain` at
/// assistance `a`, one record per seed.
pub fn validate_chain(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    a: f64,
    horizon: u64,
    seeds: &[u64],
) -> Result<Vec<McRecord>> {
    let out = steady_state_outcome(chain, p, c, a)?;
    let up: Vec<f64> = out.states[..out.states.len() - 1]
        .iter()
        .map(|o| chain.lambda.value(o.effort))
        .collect();
    let down = vec![chain.mu; up.len()];
    simulate_replicas(&up, &down, horizon, seeds)?
        .into_iter()
        .map(|run| {
            let emp = run.empirical();
            let empirical_productivity = emp
                .iter()
                .zip(&out.states)
                .map(|(w, o)| w * o.productivity)
                .sum();
            Ok(McRecord {
                seed: run.seed,
                horizon: run.horizon,
                tv_distance: tv_distance(&emp, &out.steady_state.pi)?,
                occupancy: emp,
                empirical_productivity,
                analytic_productivity: out.productivity,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupancy_sums_to_post_burn_in_time() {
        let run = simulate(&[1.0, 2.0], &[1.5, 0.5], 20_000, 0, 3).unwrap();
        let occ: f64 = run.occupancy.iter().sum();
        assert!(run.occupancy.iter().all(|o| *o >= 0.0));
        assert!((occ - (run.total_time - run.burn_in_time)).abs() < 1e-9 * run.total_time);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = simulate(&[0.7], &[0.3], 10_000, 0, 11).unwrap();
        let b = simulate(&[0.7], &[0.3], 10_000, 0, 11).unwrap();
        let c = simulate(&[0.7], &[0.3], 10_000, 0, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.occupancy, c.occupancy);
    }

    #[test]
    fn symmetric_two_state() {
        let run = simulate(&[0.7], &[0.7], 1_000_000, 0, 1).unwrap();
        assert!(tv_distance(&run.empirical(), &[0.5, 0.5]).unwrap() < 0.02);
    }

    #[test]
    fn short_horizon_rejected() {
        assert!(simulate(&[1.0], &[1.0], 100, 0, 0).is_err());
    }
}
