//! Production and cost functions, absolute risk aversion, critical levels.

mod ara;
mod cost;
mod critical;
mod distribution;
mod production;

pub use ara::{
    classify_ara, derivative_grid, verdict_from_samples, Ara, AraClassification, AraVerdict,
    ARA_GRID_POINTS,
};
pub use cost::CostFunction;
pub use critical::{
    certainty_equivalent_assistance, critical_level, critical_level_by_bisection,
    validate_admissible, AdmissibilityReport, CertaintyEquivalent, ConditionCheck,
};
pub use distribution::DistributionSpec;
pub use production::{Family, ProductionFunction, ProductionSpec};

/// `p(x) = E[min(X, x)]`.
pub fn production_from_distribution(d: DistributionSpec) -> crate::Result<ProductionFunction> {
    ProductionFunction::from_distribution(d)
}
