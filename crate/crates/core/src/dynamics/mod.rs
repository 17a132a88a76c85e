//! Birth-death skill dynamics driven by the per-state optimal effort.

mod analysis;
mod chain;
mod sweep;

pub use analysis::{
    construct_skill_paradox_instance, convex_two_state_condition, empirical_decline_mu,
    lambda0_ratio_limit, mu_bar_two_state, productivity_derivative, sensitivity_gap,
    ConvexTwoStateCondition, Derivative, Side, SkillParadoxInstance,
};
pub use chain::{
    chain_rates, fosd_check, stationary_from_rates, steady_state, steady_state_outcome,
    ChainOutcome, SkillChain, StateOutcome, SteadyState, TransitionFunction,
};
pub use sweep::{
    adjacent_interval_grid, adjacent_intervals, detect_decline_regions, exogenous_sweep,
    interval_index, interval_patterns, sweep, sweep_adjacent, AdjacentInterval, DeclineRegion,
    GridSpec, IntervalPattern, SweepSeries, DECLINE_REL_TOL, MIN_POINTS_PER_INTERVAL,
};
