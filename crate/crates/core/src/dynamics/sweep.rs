use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::{chain_outcome, state_outcomes, stationary_from_rates, SkillChain};
use crate::error::{check_param, ModelError, Result};
use crate::functions::{critical_level, CostFunction, ProductionFunction};

/// Adjacent interval `I_m`. For `1 <= m <= N-1` it is `(lo, hi]`; `I_0` is
/// `[lo, inf)` and `I_N` is `[0, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjacentInterval {
    pub m: usize,
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
}

/// Partition of the assistance axis induced by the critical level.
pub fn adjacent_intervals(states: &[f64], x_star: f64) -> Vec<AdjacentInterval> {
    let n = states.len();
    let edge = |k: usize| (x_star - states[k]).max(0.0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(AdjacentInterval {
        m: 0,
        lo: edge(0),
        hi: f64::INFINITY,
        empty: false,
    });
    for m in 1..n {
        let (lo, hi) = (edge(m), edge(m - 1));
        out.push(AdjacentInterval {
            m,
            lo,
            hi,
            empty: !(hi > lo),
        });
    }
    out.push(AdjacentInterval {
        m: n,
        lo: 0.0,
        hi: edge(n - 1),
        empty: false,
    });
    out
}

/// Index `m` of the adjacent interval containing `a`.
pub fn interval_index(intervals: &[AdjacentInterval], a: f64) -> usize {
    let n = intervals.len() - 1;
    if a <= intervals[n].hi {
        return n;
    }
    for iv in intervals[1..n].iter().rev() {
        if !iv.empty && a > iv.lo && a <= iv.hi {
            return iv.m;
        }
    }
    0
}

/// Layout of sample points inside each adjacent interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Interior points per nonempty interval; endpoints are added.
    pub points_per_interval: usize,
    /// Share of interior points of `I_1..I_(N-1)` placed geometrically
    /// toward the right endpoint, down to `1e-9` of the interval length.
    pub right_cluster: f64,
    /// Upper end of the grid; at least the right end of `I_1`.
    pub a_max: f64,
}

impl GridSpec {
    /// 512 uniform interior points per interval.
    pub fn new(a_max: f64) -> Self {
        Self::uniform(512, a_max)
    }

    /// Half of the interior points pulled toward right endpoints, where
    /// narrow declines sit when `mu` is just above its threshold.
    pub fn clustered(a_max: f64) -> Self {
        Self {
            points_per_interval: 512,
            right_cluster: 0.5,
            a_max,
        }
    }

    pub fn uniform(points_per_interval: usize, a_max: f64) -> Self {
        Self {
            points_per_interval,
            right_cluster: 0.0,
            a_max,
        }
    }
}

/// Sorted, deduplicated assistance grid covering every nonempty interval.
pub fn adjacent_interval_grid(intervals: &[AdjacentInterval], spec: &GridSpec) -> Vec<f64> {
    let n = intervals.len() - 1;
    let k = spec.points_per_interval.max(1);
    let mut pts = vec![0.0];
    for iv in intervals {
        let (lo, hi) = if iv.m == 0 {
            (iv.lo, spec.a_max.max(iv.lo))
        } else {
            (iv.lo, iv.hi)
        };
        if iv.empty || !(hi > lo) {
            continue;
        }
        let len = hi - lo;
        let clustered = if iv.m == 0 || iv.m == n {
            0
        } else {
            ((k as f64) * spec.right_cluster.clamp(0.0, 1.0)).round() as usize
        };
        let uniform = k - clustered;
        pts.push(lo);
        pts.push(hi);
        pts.extend((1..=uniform).map(|i| lo + len * i as f64 / (uniform + 1) as f64));
        if clustered > 0 {
            let (d_lo, d_hi) = ((len * 1e-9).ln(), (len * 0.5).ln());
            pts.extend((0..clustered).map(|i| {
                let t = if clustered == 1 {
                    1.0
                } else {
                    i as f64 / (clustered - 1) as f64
                };
                hi - (d_lo + (d_hi - d_lo) * t).exp()
            }));
        }
    }
    pts.retain(|x| x.is_finite() && *x >= 0.0);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1.0));
    pts
}

/// Steady-state outputs over a grid of assistance levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub a: Vec<f64>,
    pub productivity: Vec<f64>,
    pub effort: Vec<f64>,
    pub pi: Vec<Vec<f64>>,
    pub state_effort: Vec<Vec<f64>>,
    pub state_productivity: Vec<Vec<f64>>,
    pub interval: Vec<usize>,
    pub intervals: Vec<AdjacentInterval>,
    pub x_star: f64,
}

impl SweepSeries {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Points whose `a` lies in the closure of `I_m` (clipped to the grid).
    pub fn interval_points(&self, m: usize) -> Vec<usize> {
        let iv = self.intervals[m];
        let hi = if m == 0 { f64::INFINITY } else { iv.hi };
        (0..self.a.len())
            .filter(|&i| self.a[i] >= iv.lo && self.a[i] <= hi)
            .collect()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(ModelError::EmptyGrid);
    }
    for &a in grid {
        check_param("a", a, a >= 0.0, "grid values must be >= 0")?;
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ModelError::Model(
            "grid must be strictly increasing".to_string(),
        ));
    }
    Ok(())
}

/// Steady state at every grid point, evaluated in parallel.
pub fn sweep(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    grid: &[f64],
) -> Result<SweepSeries> {
    chain.validate()?;
    check_grid(grid)?;
    let x_star = critical_level(p, c)?;
    let outs = grid
        .par_iter()
        .map(|&a| chain_outcome(chain, p, c, a, x_star))
        .collect::<Result<Vec<_>>>()?;
    let intervals = adjacent_intervals(&chain.states, x_star);
    Ok(SweepSeries {
        a: grid.to_vec(),
        productivity: outs.iter().map(|o| o.productivity).collect(),
        effort: outs.iter().map(|o| o.effort).collect(),
        pi: outs.iter().map(|o| o.steady_state.pi.clone()).collect(),
        state_effort: outs
            .iter()
            .map(|o| o.states.iter().map(|s| s.effort).collect())
            .collect(),
        state_productivity: outs
            .iter()
            .map(|o| o.states.iter().map(|s| s.productivity).collect())
            .collect(),
        interval: grid
            .iter()
            .map(|&a| interval_index(&intervals, a))
            .collect(),
        intervals,
        x_star,
    })
}

/// Sweep over the default interval grid.
pub fn sweep_adjacent(
    chain: &SkillChain,
    p: &ProductionFunction,
    c: &CostFunction,
    spec: &GridSpec,
) -> Result<SweepSeries> {
    let x_star = critical_level(p, c)?;
    let grid = adjacent_interval_grid(&adjacent_intervals(&chain.states, x_star), spec);
    sweep(chain, p, c, &grid)
}

/// Exogenous chain: fixed upward rates per state, so `pi` does not depend
/// on `a`.
pub fn exogenous_sweep(
    states: &[f64],
    rates: &[f64],
    mu: f64,
    p: &ProductionFunction,
    c: &CostFunction,
    grid: &[f64],
) -> Result<SweepSeries> {
    check_grid(grid)?;
    check_param("mu", mu, mu > 0.0, "must be > 0")?;
    if rates.len() + 1 != states.len() {
        return Err(ModelError::LengthMismatch {
            left: rates.len() + 1,
            right: states.len(),
        });
    }
    let ss = stationary_from_rates(rates, &vec![mu; rates.len()])?;
    let x_star = critical_level(p, c)?;
    // only states/mu/lambda shape matter for the per-state optimum
    let chain = SkillChain {
        states: states.to_vec(),
        lambda: super::TransitionFunction {
            lambda0: 1.0,
            lambda1: 0.0,
        },
        mu,
    };
    let per_state = grid
        .par_iter()
        .map(|&a| state_outcomes(&chain, p, c, a, x_star))
        .collect::<Result<Vec<_>>>()?;
    let intervals = adjacent_intervals(states, x_star);
    let dot = |w: &[f64], v: &mut dyn Iterator<Item = f64>| -> f64 {
        w.iter().zip(v).map(|(a, b)| a * b).sum()
    };
    Ok(SweepSeries {
        a: grid.to_vec(),
        productivity: per_state
            .iter()
            .map(|o| dot(&ss.pi, &mut o.iter().map(|s| s.productivity)))
            .collect(),
        effort: per_state
            .iter()
            .map(|o| dot(&ss.pi, &mut o.iter().map(|s| s.effort)))
            .collect(),
        pi: vec![ss.pi.clone(); grid.len()],
        state_effort: per_state
            .iter()
            .map(|o| o.iter().map(|s| s.effort).collect())
            .collect(),
        state_productivity: per_state
            .iter()
            .map(|o| o.iter().map(|s| s.productivity).collect())
            .collect(),
        interval: grid
            .iter()
            .map(|&a| interval_index(&intervals, a))
            .collect(),
        intervals,
        x_star,
    })
}

/// Maximal run of strict drops inside one adjacent interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeclineRegion {
    pub m: usize,
    pub a_start: f64,
    pub a_end: f64,
    pub drop: f64,
}

pub const MIN_POINTS_PER_INTERVAL: usize = 16;
pub const DECLINE_REL_TOL: f64 = 1e-9;

fn drop_runs(values: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i + 1 < values.len() {
        if values[i + 1] < values[i] - tol {
            let start = i;
            while i + 1 < values.len() && values[i + 1] < values[i] - tol {
                i += 1;
            }
            runs.push((start, i));
        } else {
            i += 1;
        }
    }
    runs
}

/// Declines of `P(a)` per adjacent interval: runs of at least two
/// consecutive drops larger than `1e-9 max|P|`.
pub fn detect_decline_regions(series: &SweepSeries) -> Result<Vec<DeclineRegion>> {
    let scale = series
        .productivity
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = DECLINE_REL_TOL * scale;
    let mut out = Vec::new();
    for iv in &series.intervals {
        if iv.empty {
            continue;
        }
        let idx = series.interval_points(iv.m);
        let degenerate = iv.m == series.intervals.len() - 1 && iv.hi == 0.0;
        if degenerate || idx.is_empty() {
            continue;
        }
        if idx.len() < MIN_POINTS_PER_INTERVAL {
            return Err(ModelError::Resolution(format!(
                "interval I_{} has {} points, need {}",
                iv.m,
                idx.len(),
                MIN_POINTS_PER_INTERVAL
            )));
        }
        let vals: Vec<f64> = idx.iter().map(|&i| series.productivity[i]).collect();
        for (s, e) in drop_runs(&vals, tol) {
            if e - s >= 2 {
                out.push(DeclineRegion {
                    m: iv.m,
                    a_start: series.a[idx[s]],
                    a_end: series.a[idx[e]],
                    drop: vals[s] - vals[e],
                });
            }
        }
    }
    Ok(out)
}

/// Sampled shape of `P(a)` on one adjacent interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalPattern {
    Increasing,
    IncreasingThenDecreasing,
    Other,
}

/// Pattern per nonempty interval, with ties (changes below tolerance)
/// treated as neutral.
pub fn interval_patterns(series: &SweepSeries) -> Vec<(usize, IntervalPattern)> {
    let scale = series
        .productivity
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = DECLINE_REL_TOL * scale;
    let mut out = Vec::new();
    for iv in &series.intervals {
        let idx = series.interval_points(iv.m);
        if iv.empty || idx.len() < 2 {
            continue;
        }
        let mut seen_drop = false;
        let mut pattern = IntervalPattern::Increasing;
        for w in idx.windows(2) {
            let d = series.productivity[w[1]] - series.productivity[w[0]];
            if d < -tol {
                seen_drop = true;
                pattern = IntervalPattern::IncreasingThenDecreasing;
            } else if d > tol && seen_drop {
                pattern = IntervalPattern::Other;
                break;
            }
        }
        out.push((iv.m, pattern));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TransitionFunction;

    #[test]
    fn intervals_partition_axis() {
        let ivs = adjacent_intervals(&[0.0, 0.1, 0.2, 0.3], 0.25);
        assert_eq!(ivs.len(), 5);
        assert_eq!(interval_index(&ivs, 0.0), 4);
        assert!(ivs[4].hi == 0.0);
        assert!(ivs[3].lo == 0.0 && (ivs[3].hi - 0.05).abs() < 1e-15);
        assert_eq!(interval_index(&ivs, 0.04), 3);
        assert_eq!(interval_index(&ivs, 0.06), 2);
        assert_eq!(interval_index(&ivs, 0.25), 1);
        assert_eq!(interval_index(&ivs, 0.26), 0);
    }

    #[test]
    fn grid_has_points_in_every_interval() {
        let ivs = adjacent_intervals(&[0.0, 0.1, 0.2, 0.3], 0.41);
        let g = adjacent_interval_grid(&ivs, &GridSpec::new(1.0));
        for iv in &ivs[1..] {
            let count = g.iter().filter(|&&a| a > iv.lo && a <= iv.hi).count();
            assert!(count >= 512, "I_{} has {count}", iv.m);
        }
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn constant_on_last_interval_and_rising_on_first() {
        let p = ProductionFunction::fractional(1.0).unwrap();
        let c = CostFunction::linear(0.5).unwrap();
        let chain =
            SkillChain::evenly_spaced(4, 0.1, TransitionFunction::new(0.01, 1.0).unwrap(), 0.2)
                .unwrap();
        let s = sweep_adjacent(&chain, &p, &c, &GridSpec::new(1.0)).unwrap();
        let last = s.intervals.len() - 1;
        let px = p.value(s.x_star);
        for i in s.interval_points(last) {
            assert!((s.productivity[i] - px).abs() < 1e-14);
        }
        let first = s.interval_points(0);
        assert!(first
            .windows(2)
            .all(|w| s.productivity[w[1]] >= s.productivity[w[0]]));
    }

    #[test]
    fn single_dips_are_ignored() {
        let runs = drop_runs(&[1.0, 2.0, 1.5, 3.0, 2.0, 1.0, 0.5], 1e-9);
        assert_eq!(runs, vec![(1, 2), (3, 6)]);
    }
}
