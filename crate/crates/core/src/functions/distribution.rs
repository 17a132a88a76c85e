use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Exp, Normal, Uniform};
use statrs::function::erf::erfc;

use crate::error::{check_param, Result};

/// Task-requirement distribution used to build `p(x) = E[min(X, x)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Uniform {
        lo: f64,
        hi: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Normal(mean, sd) conditioned on `X >= lo`.
    TruncatedGaussian {
        mean: f64,
        sd: f64,
        lo: f64,
    },
}

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

fn phi(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

// antiderivative of the upper normal tail
fn tail_integral(z: f64) -> f64 {
    z * upper_tail(z) - phi(z)
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Uniform { lo, hi } => {
                check_param("lo", lo, lo >= 0.0, "support must lie in [0, inf)")?;
                check_param("hi", hi, hi > lo, "needs hi > lo")
            }
            DistributionSpec::Exponential { rate } => {
                check_param("rate", rate, rate > 0.0, "must be positive")
            }
            DistributionSpec::TruncatedGaussian { mean, sd, lo } => {
                check_param("mean", mean, true, "must be finite")?;
                check_param("sd", sd, sd > 0.0, "must be positive")?;
                check_param("lo", lo, lo >= 0.0, "support must lie in [0, inf)")?;
                check_param(
                    "lo",
                    lo,
                    upper_tail((lo - mean) / sd) > 1e-300,
                    "truncation leaves no mass",
                )
            }
        }
    }

    /// `E[min(X, x)] = integral of the survival function over [0, x]`.
    pub(crate) fn expected_min(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Uniform { lo, hi } => {
                if x <= lo {
                    x
                } else if x < hi {
                    x - (x - lo) * (x - lo) / (2.0 * (hi - lo))
                } else {
                    0.5 * (lo + hi)
                }
            }
            DistributionSpec::Exponential { rate } => -(-rate * x).exp_m1() / rate,
            DistributionSpec::TruncatedGaussian { mean, sd, lo } => {
                if x <= lo {
                    return x;
                }
                let z0 = (lo - mean) / sd;
                let z = (x - mean) / sd;
                lo + sd * (tail_integral(z) - tail_integral(z0)) / upper_tail(z0)
            }
        }
    }

    pub(crate) fn survival(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Uniform { lo, hi } => {
                if x <= lo {
                    1.0
                } else if x < hi {
                    (hi - x) / (hi - lo)
                } else {
                    0.0
                }
            }
            DistributionSpec::Exponential { rate } => (-rate * x).exp(),
            DistributionSpec::TruncatedGaussian { mean, sd, lo } => {
                if x <= lo {
                    1.0
                } else {
                    upper_tail((x - mean) / sd) / upper_tail((lo - mean) / sd)
                }
            }
        }
    }

    pub(crate) fn density(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Uniform { lo, hi } => {
                if x >= lo && x < hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            DistributionSpec::Exponential { rate } => rate * (-rate * x).exp(),
            DistributionSpec::TruncatedGaussian { mean, sd, lo } => {
                if x < lo {
                    0.0
                } else {
                    phi((x - mean) / sd) / (sd * upper_tail((lo - mean) / sd))
                }
            }
        }
    }

    /// Hazard rate from the reference distribution objects, used to verify
    /// the production function built from this spec.
    pub fn reference_hazard(&self, x: f64) -> Option<f64> {
        let (f, sf) = match *self {
            DistributionSpec::Uniform { lo, hi } => {
                let d = Uniform::new(lo, hi).ok()?;
                (d.pdf(x), d.sf(x))
            }
            DistributionSpec::Exponential { rate } => {
                let d = Exp::new(rate).ok()?;
                (d.pdf(x), d.sf(x))
            }
            DistributionSpec::TruncatedGaussian { mean, sd, lo } => {
                let d = Normal::new(mean, sd).ok()?;
                if x < lo {
                    (0.0, 1.0)
                } else {
                    (d.pdf(x), d.sf(x))
                }
            }
        };
        (sf > 1e-12).then(|| f / sf)
    }

    /// Points where `F < 1`, used for construction-time checks.
    pub(crate) fn interior_samples(&self, n: usize) -> Vec<f64> {
        let (a, b) = match *self {
            DistributionSpec::Uniform { lo, hi } => (lo, hi),
            DistributionSpec::Exponential { rate } => (0.0, 10.0 / rate),
            DistributionSpec::TruncatedGaussian { mean, sd, lo } => (lo, lo.max(mean) + 5.0 * sd),
        };
        (1..=n)
            .map(|i| a + (b - a) * (i as f64 - 0.5) / n as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_expected_min() {
        let d = DistributionSpec::Uniform { lo: 0.0, hi: 1.0 };
        assert!((d.expected_min(0.5) - 0.375).abs() < 1e-15);
        assert!((d.expected_min(2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn truncated_gaussian_value_matches_quadrature() {
        let d = DistributionSpec::TruncatedGaussian {
            mean: 1.0,
            sd: 0.5,
            lo: 0.2,
        };
        let x = 1.7;
        let n = 200_000;
        let h = x / n as f64;
        let quad: f64 = (0..n).map(|i| d.survival((i as f64 + 0.5) * h) * h).sum();
        assert!((quad - d.expected_min(x)).abs() < 1e-8);
    }
}
