use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::production::ProductionFunction;
use crate::error::Result;
use crate::optim::{linspace, logspace};

/// Absolute risk aversion value. Flat segments carry `Infinite`, which
/// orders above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ara {
    Finite(f64),
    Infinite,
}

impl Ara {
    pub fn finite(self) -> Option<f64> {
        match self {
            Ara::Finite(a) => Some(a),
            Ara::Infinite => None,
        }
    }

    /// Difference `self - other` with the sentinel convention; `None` when
    /// both are infinite.
    pub fn difference(self, other: Ara) -> Option<f64> {
        match (self, other) {
            (Ara::Finite(a), Ara::Finite(b)) => Some(a - b),
            (Ara::Infinite, Ara::Finite(_)) => Some(f64::INFINITY),
            (Ara::Finite(_), Ara::Infinite) => Some(f64::NEG_INFINITY),
            (Ara::Infinite, Ara::Infinite) => None,
        }
    }
}

impl PartialOrd for Ara {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Ara::Finite(a), Ara::Finite(b)) => a.partial_cmp(b),
            (Ara::Finite(_), Ara::Infinite) => Some(Ordering::Less),
            (Ara::Infinite, Ara::Finite(_)) => Some(Ordering::Greater),
            (Ara::Infinite, Ara::Infinite) => Some(Ordering::Equal),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AraVerdict {
    #[serde(rename = "IARA")]
    Iara,
    #[serde(rename = "DARA")]
    Dara,
    #[serde(rename = "RelaxedIARA")]
    RelaxedIara,
    #[serde(rename = "RelaxedDARA")]
    RelaxedDara,
    Mixed,
}

impl AraVerdict {
    /// IARA in the relaxed sense (includes strict IARA).
    pub fn is_increasing(self) -> bool {
        matches!(self, AraVerdict::Iara | AraVerdict::RelaxedIara)
    }

    pub fn is_decreasing(self) -> bool {
        matches!(self, AraVerdict::Dara | AraVerdict::RelaxedDara)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AraClassification {
    pub verdict: AraVerdict,
    /// Family tag, when known.
    pub analytic: Option<AraVerdict>,
    pub grid: Vec<f64>,
    pub evidence: Vec<Ara>,
    /// Input level where `p` saturates, for capped families.
    pub saturation: Option<f64>,
}

impl AraClassification {
    pub fn consistent(&self) -> bool {
        self.analytic.is_none_or(|a| a == self.verdict)
    }
}

pub const ARA_GRID_POINTS: usize = 1000;
const FLAT_SLOPE: f64 = 1e-12;
const MONO_TOL: f64 = 1e-9;

/// Sample points for derivative-based diagnostics: uniform on finite
/// domains, log-spaced otherwise, cut where `p'` vanishes asymptotically.
pub fn derivative_grid(p: &ProductionFunction, n: usize) -> Vec<f64> {
    let (lo, hi) = p.domain();
    if hi.is_finite() {
        let h = (hi - lo) / n as f64;
        return (0..n).map(|i| lo + h * (i as f64 + 0.5)).collect();
    }
    let start = if lo > 0.0 { lo * (1.0 + 1e-9) } else { 1e-6 };
    let mut end = start.max(1.0);
    while end < 1e6 {
        let d = p.d1(end);
        if d < FLAT_SLOPE {
            break;
        }
        end *= 2.0;
    }
    let xs = if start < end {
        logspace(start, end, n)
    } else {
        linspace(start, start + 1.0, n)
    };
    xs.into_iter()
        .filter(|&x| {
            let d1 = p.d1(x);
            let exact_flat = d1 == 0.0 && p.d2(x) == 0.0;
            exact_flat || d1 >= FLAT_SLOPE
        })
        .collect()
}

pub fn classify_ara(p: &ProductionFunction) -> Result<AraClassification> {
    let grid = derivative_grid(p, ARA_GRID_POINTS);
    let evidence = grid.iter().map(|&x| p.ara(x)).collect::<Result<Vec<_>>>()?;
    let verdict = verdict_from_samples(&evidence);
    Ok(AraClassification {
        verdict,
        analytic: p.analytic_verdict(),
        grid,
        evidence,
        saturation: p.saturation_point(),
    })
}

/// Monotonicity verdict for a sampled ARA sequence.
pub fn verdict_from_samples(a: &[Ara]) -> AraVerdict {
    let mut nondec = true;
    let mut noninc = true;
    let mut strict_inc = true;
    let mut strict_dec = true;
    for w in a.windows(2) {
        match (w[0], w[1]) {
            (Ara::Finite(x), Ara::Finite(y)) => {
                let d = y - x;
                let tol = MONO_TOL * x.abs().max(y.abs()).max(1.0);
                if d < -tol {
                    nondec = false;
                }
                if d > tol {
                    noninc = false;
                }
                if d <= 0.0 {
                    strict_inc = false;
                }
                if d >= 0.0 {
                    strict_dec = false;
                }
            }
            (Ara::Finite(_), Ara::Infinite) => {
                noninc = false;
                strict_dec = false;
            }
            (Ara::Infinite, Ara::Finite(_)) => {
                nondec = false;
                strict_inc = false;
            }
            (Ara::Infinite, Ara::Infinite) => {
                strict_inc = false;
                strict_dec = false;
            }
        }
    }
    let all_finite = a.iter().all(|v| matches!(v, Ara::Finite(_)));
    let all_positive = a.iter().all(|v| match v {
        Ara::Finite(x) => *x > 0.0,
        Ara::Infinite => true,
    });
    if all_finite && strict_inc {
        AraVerdict::Iara
    } else if all_finite && strict_dec {
        AraVerdict::Dara
    } else if noninc && all_finite && all_positive {
        // constant positive ARA lands here
        AraVerdict::RelaxedDara
    } else if nondec {
        AraVerdict::RelaxedIara
    } else {
        AraVerdict::Mixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::DistributionSpec;

    #[test]
    fn ordering_puts_infinite_on_top() {
        assert!(Ara::Infinite > Ara::Finite(1e300));
        assert!(Ara::Finite(-1.0) < Ara::Finite(0.0));
    }

    #[test]
    fn named_examples() {
        let cases = [
            (
                ProductionFunction::power_law(0.5, 0.5).unwrap(),
                AraVerdict::Dara,
            ),
            (
                ProductionFunction::logarithmic(2.0).unwrap(),
                AraVerdict::Dara,
            ),
            (
                ProductionFunction::fractional(1.0).unwrap(),
                AraVerdict::Dara,
            ),
            (ProductionFunction::gaussian_integral(), AraVerdict::Iara),
            (
                ProductionFunction::expo_power(1.0, 2.0).unwrap(),
                AraVerdict::Iara,
            ),
            (
                ProductionFunction::truncated_quadratic(2.0, 1.0).unwrap(),
                AraVerdict::RelaxedIara,
            ),
            (
                ProductionFunction::piecewise_linear_capped(2.0).unwrap(),
                AraVerdict::RelaxedIara,
            ),
            (
                ProductionFunction::perturbed_default(2.0).unwrap(),
                AraVerdict::RelaxedIara,
            ),
            (
                ProductionFunction::from_distribution(DistributionSpec::Exponential { rate: 3.0 })
                    .unwrap(),
                AraVerdict::RelaxedDara,
            ),
        ];
        for (p, want) in cases {
            let c = classify_ara(&p).unwrap();
            assert_eq!(c.verdict, want, "{}", p.name());
            assert!(c.consistent(), "{}", p.name());
        }
    }

    #[test]
    fn capped_evidence_is_zero_then_infinite() {
        let p = ProductionFunction::piecewise_linear_capped(2.0).unwrap();
        let c = classify_ara(&p).unwrap();
        assert_eq!(c.evidence.first(), Some(&Ara::Finite(0.0)));
        assert_eq!(c.evidence.last(), Some(&Ara::Infinite));
        assert_eq!(c.saturation, Some(0.5));
    }

    #[test]
    fn translog_inside_and_outside_window() {
        let (lo, hi) = ProductionFunction::translog_window(0.5).unwrap();
        let inside = ProductionFunction::translog(0.5, lo, hi).unwrap();
        assert_eq!(classify_ara(&inside).unwrap().verdict, AraVerdict::Iara);
        let outside = ProductionFunction::translog(0.5, lo, hi * 20.0).unwrap();
        assert_eq!(classify_ara(&outside).unwrap().verdict, AraVerdict::Mixed);
    }

    #[test]
    fn transcendental_window_is_iara() {
        let (lo, hi) = ProductionFunction::transcendental_window(-1.0, 2.0).unwrap();
        let p = ProductionFunction::transcendental(-1.0, 2.0, lo, hi).unwrap();
        assert_eq!(classify_ara(&p).unwrap().verdict, AraVerdict::Iara);
    }

    #[test]
    fn undefined_ara_at_expo_power_origin() {
        let p = ProductionFunction::expo_power(1.0, 2.0).unwrap();
        assert!(p.ara(0.0).is_err());
    }
}
