use serde::{Deserialize, Serialize};

use crate::error::{check_param, Result};

/// Effort cost `c(e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostFunction {
    /// `gamma e`
    Linear { gamma: f64 },
    /// `c1 e + c2 e^2`
    Quadratic { c1: f64, c2: f64 },
}

impl CostFunction {
    pub fn linear(gamma: f64) -> Result<Self> {
        check_param("gamma", gamma, gamma > 0.0, "must be positive")?;
        Ok(CostFunction::Linear { gamma })
    }

    pub fn quadratic(c1: f64, c2: f64) -> Result<Self> {
        check_param("c1", c1, c1 > 0.0, "must be positive")?;
        check_param("c2", c2, c2 >= 0.0, "must be >= 0")?;
        Ok(CostFunction::Quadratic { c1, c2 })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CostFunction::Linear { gamma } => Self::linear(gamma).map(|_| ()),
            CostFunction::Quadratic { c1, c2 } => Self::quadratic(c1, c2).map(|_| ()),
        }
    }

    pub fn value(&self, e: f64) -> f64 {
        match *self {
            CostFunction::Linear { gamma } => gamma * e,
            CostFunction::Quadratic { c1, c2 } => c1 * e + c2 * e * e,
        }
    }

    pub fn d1(&self, e: f64) -> f64 {
        match *self {
            CostFunction::Linear { gamma } => gamma,
            CostFunction::Quadratic { c1, c2 } => c1 + 2.0 * c2 * e,
        }
    }

    pub fn d2(&self) -> f64 {
        match *self {
            CostFunction::Linear { .. } => 0.0,
            CostFunction::Quadratic { c2, .. } => 2.0 * c2,
        }
    }

    /// `c'(0)`.
    pub fn marginal_at_zero(&self) -> f64 {
        self.d1(0.0)
    }

    /// Linear cost, or a quadratic with `c2 = 0`.
    pub fn as_linear(&self) -> Option<f64> {
        match *self {
            CostFunction::Linear { gamma } => Some(gamma),
            CostFunction::Quadratic { c1, c2 } if c2 == 0.0 => Some(c1),
            CostFunction::Quadratic { .. } => None,
        }
    }
}
