use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use super::ara::{Ara, AraVerdict};
use super::distribution::DistributionSpec;
use crate::error::{check_param, ModelError, Result};

const SQRT_PI_2: f64 = 0.886_226_925_452_758;

/// Parametric production family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `min(1, beta x)`
    PiecewiseLinearCapped { beta: f64 },
    /// `scale x / (1 + x)`
    Fractional { scale: f64 },
    /// `coef x^exponent`, exponent in (0, 1)
    PowerLaw { coef: f64, exponent: f64 },
    /// `ln(c x + 1)`
    Logarithmic { c: f64 },
    /// `integral_0^x exp(-t^2) dt`
    GaussianIntegral,
    /// `1 - exp(-b x^c)`
    ExpoPower { b: f64, c: f64 },
    /// `c1 x - c2 x^2` up to the vertex, constant after
    TruncatedQuadratic { c1: f64, c2: f64 },
    /// `ln x + b (ln x)^2`
    Translog { b: f64 },
    /// `exp(a x) x^b`
    Transcendental { a: f64, b: f64 },
    /// `E[min(X, x)]`
    FromDistribution(DistributionSpec),
    /// `min(1, beta x) - h(x)` with a quadratic bump of half-width `delta`
    /// around the kink `1/beta`.
    Perturbed { beta: f64, delta: f64 },
    /// Two linear pieces meeting at `kink`.
    KinkedLinear {
        slope_below: f64,
        slope_above: f64,
        kink: f64,
    },
}

/// Production function: a family restricted to a closed domain `[lo, hi]`
/// (`hi` may be infinite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductionFunction {
    family: Family,
    lo: f64,
    hi: f64,
}

impl ProductionFunction {
    fn unbounded(family: Family) -> Self {
        Self {
            family,
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn piecewise_linear_capped(beta: f64) -> Result<Self> {
        check_param("beta", beta, beta > 0.0, "must be positive")?;
        Ok(Self::unbounded(Family::PiecewiseLinearCapped { beta }))
    }

    pub fn fractional(scale: f64) -> Result<Self> {
        check_param("scale", scale, scale > 0.0, "must be positive")?;
        Ok(Self::unbounded(Family::Fractional { scale }))
    }

    pub fn power_law(coef: f64, exponent: f64) -> Result<Self> {
        check_param("coef", coef, coef > 0.0, "must be positive")?;
        check_param(
            "exponent",
            exponent,
            exponent > 0.0 && exponent < 1.0,
            "must lie in (0, 1)",
        )?;
        Ok(Self::unbounded(Family::PowerLaw { coef, exponent }))
    }

    pub fn logarithmic(c: f64) -> Result<Self> {
        check_param("c", c, c > 0.0, "must be positive")?;
        Ok(Self::unbounded(Family::Logarithmic { c }))
    }

    pub fn gaussian_integral() -> Self {
        Self::unbounded(Family::GaussianIntegral)
    }

    pub fn expo_power(b: f64, c: f64) -> Result<Self> {
        check_param("b", b, b > 0.0, "must be positive")?;
        check_param("c", c, c > 1.0, "must exceed 1")?;
        Ok(Self::unbounded(Family::ExpoPower { b, c }))
    }

    pub fn truncated_quadratic(c1: f64, c2: f64) -> Result<Self> {
        check_param("c1", c1, c1 > 0.0, "must be positive")?;
        check_param("c2", c2, c2 > 0.0, "must be positive")?;
        Ok(Self::unbounded(Family::TruncatedQuadratic { c1, c2 }))
    }

    /// Translog on an explicit window `[lo, hi]` with `lo > 0`. The window is
    /// not required to satisfy the IARA inequalities; see
    /// [`ProductionFunction::translog_window`].
    pub fn translog(b: f64, lo: f64, hi: f64) -> Result<Self> {
        check_param("b", b, b > 0.0, "must be positive")?;
        check_window(lo, hi)?;
        Ok(Self {
            family: Family::Translog { b },
            lo,
            hi,
        })
    }

    /// Window where translog is increasing, concave and IARA:
    /// `max(2b, 1) < 2b ln x + 1 < (sqrt 5 + 1) b`.
    pub fn translog_window(b: f64) -> Option<(f64, f64)> {
        if !(b > 0.0) {
            return None;
        }
        let lo = ((2.0 * b).max(1.0) - 1.0) / (2.0 * b);
        let hi = ((5f64.sqrt() + 1.0) * b - 1.0) / (2.0 * b);
        (hi > lo).then(|| (lo.exp(), hi.exp()))
    }

    /// Transcendental on an explicit window with `lo > 0`.
    pub fn transcendental(a: f64, b: f64, lo: f64, hi: f64) -> Result<Self> {
        check_param("a", a, a < 0.0, "must be negative")?;
        check_param("b", b, b > 0.0, "must be positive")?;
        check_window(lo, hi)?;
        Ok(Self {
            family: Family::Transcendental { a, b },
            lo,
            hi,
        })
    }

    /// Window where transcendental is increasing, concave and IARA:
    /// `0 < ax + b < sqrt b` and `(ax + b)^2 > 2ax + b`.
    pub fn transcendental_window(a: f64, b: f64) -> Option<(f64, f64)> {
        if !(a < 0.0 && b > 0.0) {
            return None;
        }
        // with y = ax + b the second inequality reads y^2 - 2y + b > 0
        let y_max = if b < 1.0 {
            b.sqrt().min(1.0 - (1.0 - b).sqrt())
        } else {
            b.sqrt().min(1.0)
        };
        let hi = b / -a;
        let lo = ((b - y_max) / -a).max(1e-9 * hi);
        (hi > lo).then_some((lo, hi))
    }

    pub fn from_distribution(d: DistributionSpec) -> Result<Self> {
        d.validate()?;
        let p = Self::unbounded(Family::FromDistribution(d));
        for x in d.interior_samples(64) {
            let Some(h) = d.reference_hazard(x) else {
                continue;
            };
            let a = match p.ara(x)? {
                Ara::Finite(a) => a,
                Ara::Infinite => f64::INFINITY,
            };
            if (a - h).abs() > 1e-6 * h.abs().max(1e-12) {
                return Err(ModelError::Model(format!(
                    "ARA {a} differs from hazard {h} at x = {x}"
                )));
            }
        }
        Ok(p)
    }

    /// Perturbed capped-linear function; `delta` must lie in `(0, 1/(2 beta))`.
    pub fn perturbed(beta: f64, delta: f64) -> Result<Self> {
        check_param("beta", beta, beta > 0.0, "must be positive")?;
        check_param(
            "delta",
            delta,
            delta > 0.0 && delta < 0.5 / beta,
            "must lie in (0, 1/(2 beta))",
        )?;
        Ok(Self::unbounded(Family::Perturbed { beta, delta }))
    }

    pub fn perturbed_default(beta: f64) -> Result<Self> {
        Self::perturbed(beta, 1e-3 / beta)
    }

    pub fn kinked_linear(slope_below: f64, slope_above: f64, kink: f64) -> Result<Self> {
        check_param(
            "slope_above",
            slope_above,
            slope_above >= 0.0,
            "must be >= 0",
        )?;
        check_param(
            "slope_below",
            slope_below,
            slope_below > slope_above,
            "must exceed slope_above",
        )?;
        check_param("kink", kink, kink > 0.0, "must be positive")?;
        Ok(Self::unbounded(Family::KinkedLinear {
            slope_below,
            slope_above,
            kink,
        }))
    }

    /// Same family on a narrower domain.
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        check_param("domain.lo", lo, lo >= 0.0, "must be >= 0")?;
        if !(hi > lo) {
            return Err(ModelError::InvalidParameter {
                name: "domain.hi",
                value: hi,
                reason: "must exceed domain.lo",
            });
        }
        if matches!(
            self.family,
            Family::Translog { .. } | Family::Transcendental { .. }
        ) && lo == 0.0
        {
            return Err(ModelError::InvalidParameter {
                name: "domain.lo",
                value: lo,
                reason: "must be positive for this family",
            });
        }
        self.lo = lo;
        self.hi = hi;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn in_domain(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn check_domain(&self, x: f64) -> Result<()> {
        if self.in_domain(x) {
            Ok(())
        } else {
            Err(ModelError::Domain {
                family: self.name(),
                x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::PiecewiseLinearCapped { .. } => "piecewise_linear_capped",
            Family::Fractional { .. } => "fractional",
            Family::PowerLaw { .. } => "power_law",
            Family::Logarithmic { .. } => "logarithmic",
            Family::GaussianIntegral => "gaussian_integral",
            Family::ExpoPower { .. } => "expo_power",
            Family::TruncatedQuadratic { .. } => "truncated_quadratic",
            Family::Translog { .. } => "translog",
            Family::Transcendental { .. } => "transcendental",
            Family::FromDistribution(DistributionSpec::Uniform { .. }) => "uniform_min",
            Family::FromDistribution(DistributionSpec::Exponential { .. }) => "exponential_min",
            Family::FromDistribution(DistributionSpec::TruncatedGaussian { .. }) => {
                "truncated_gaussian_min"
            }
            Family::Perturbed { .. } => "perturbed_linear_capped",
            Family::KinkedLinear { .. } => "kinked_linear",
        }
    }

    /// Checked evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.value(x))
    }

    /// Family formula, without the domain check.
    pub fn value(&self, x: f64) -> f64 {
        match self.family {
            Family::PiecewiseLinearCapped { beta } => (beta * x).min(1.0),
            Family::Fractional { scale } => scale * x / (1.0 + x),
            Family::PowerLaw { coef, exponent } => coef * x.powf(exponent),
            Family::Logarithmic { c } => (c * x).ln_1p(),
            Family::GaussianIntegral => SQRT_PI_2 * erf(x),
            Family::ExpoPower { b, c } => -(-b * x.powf(c)).exp_m1(),
            Family::TruncatedQuadratic { c1, c2 } => {
                let v = c1 / (2.0 * c2);
                let xc = x.min(v);
                c1 * xc - c2 * xc * xc
            }
            Family::Translog { b } => {
                let l = x.ln();
                l + b * l * l
            }
            Family::Transcendental { a, b } => (a * x).exp() * x.powf(b),
            Family::FromDistribution(d) => d.expected_min(x),
            Family::Perturbed { beta, delta } => {
                let k = 1.0 / beta;
                if x < k - delta {
                    beta * x
                } else if x < k + delta {
                    let r = k + delta - x;
                    1.0 - beta * r * r / (4.0 * delta)
                } else {
                    1.0
                }
            }
            Family::KinkedLinear {
                slope_below,
                slope_above,
                kink,
            } => {
                if x <= kink {
                    slope_below * x
                } else {
                    slope_below * kink + slope_above * (x - kink)
                }
            }
        }
    }

    /// First derivative; at kinks the left derivative.
    pub fn d1(&self, x: f64) -> f64 {
        match self.family {
            Family::PiecewiseLinearCapped { beta } => {
                if x <= 1.0 / beta {
                    beta
                } else {
                    0.0
                }
            }
            Family::Fractional { scale } => scale / ((1.0 + x) * (1.0 + x)),
            Family::PowerLaw { coef, exponent } => coef * exponent * x.powf(exponent - 1.0),
            Family::Logarithmic { c } => c / (c * x + 1.0),
            Family::GaussianIntegral => (-x * x).exp(),
            Family::ExpoPower { b, c } => {
                let t = b * x.powf(c);
                b * c * x.powf(c - 1.0) * (-t).exp()
            }
            Family::TruncatedQuadratic { c1, c2 } => (c1 - 2.0 * c2 * x).max(0.0),
            Family::Translog { b } => (1.0 + 2.0 * b * x.ln()) / x,
            Family::Transcendental { a, b } => self.value(x) * (a * x + b) / x,
            Family::FromDistribution(d) => d.survival(x),
            Family::Perturbed { beta, delta } => {
                let k = 1.0 / beta;
                if x < k - delta {
                    beta
                } else if x < k + delta {
                    beta * (k + delta - x) / (2.0 * delta)
                } else {
                    0.0
                }
            }
            Family::KinkedLinear {
                slope_below,
                slope_above,
                kink,
            } => {
                if x <= kink {
                    slope_below
                } else {
                    slope_above
                }
            }
        }
    }

    /// Second derivative; at kinks the value of the left piece.
    pub fn d2(&self, x: f64) -> f64 {
        match self.family {
            Family::PiecewiseLinearCapped { .. } | Family::KinkedLinear { .. } => 0.0,
            Family::Fractional { scale } => -2.0 * scale / (1.0 + x).powi(3),
            Family::PowerLaw { coef, exponent } => {
                coef * exponent * (exponent - 1.0) * x.powf(exponent - 2.0)
            }
            Family::Logarithmic { c } => -c * c / ((c * x + 1.0) * (c * x + 1.0)),
            Family::GaussianIntegral => -2.0 * x * (-x * x).exp(),
            Family::ExpoPower { b, c } => {
                let t = b * x.powf(c);
                let g = b * c * x.powf(c - 1.0);
                (-t).exp() * (b * c * (c - 1.0) * x.powf(c - 2.0) - g * g)
            }
            Family::TruncatedQuadratic { c1, c2 } => {
                if x < c1 / (2.0 * c2) {
                    -2.0 * c2
                } else {
                    0.0
                }
            }
            Family::Translog { b } => (2.0 * b - 1.0 - 2.0 * b * x.ln()) / (x * x),
            Family::Transcendental { a, b } => {
                let y = a * x + b;
                self.value(x) * (y * y - b) / (x * x)
            }
            Family::FromDistribution(d) => -d.density(x),
            Family::Perturbed { beta, delta } => {
                let k = 1.0 / beta;
                if x >= k - delta && x < k + delta {
                    -beta / (2.0 * delta)
                } else {
                    0.0
                }
            }
        }
    }

    /// Absolute risk aversion `-p''/p'`, with flat segments mapped to
    /// [`Ara::Infinite`].
    pub fn ara(&self, x: f64) -> Result<Ara> {
        let d1 = self.d1(x);
        let d2 = self.d2(x);
        if d1 == 0.0 {
            return if d2 == 0.0 {
                Ok(Ara::Infinite)
            } else {
                Err(ModelError::UndefinedAra { x, d2 })
            };
        }
        let a = match self.family {
            Family::PiecewiseLinearCapped { .. } | Family::KinkedLinear { .. } => 0.0,
            Family::Fractional { .. } => 2.0 / (1.0 + x),
            Family::PowerLaw { exponent, .. } => (1.0 - exponent) / x,
            Family::Logarithmic { c } => c / (c * x + 1.0),
            Family::GaussianIntegral => 2.0 * x,
            Family::ExpoPower { b, c } => -(c - 1.0) / x + b * c * x.powf(c - 1.0),
            Family::TruncatedQuadratic { c1, c2 } => 2.0 * c2 / (c1 - 2.0 * c2 * x),
            Family::Translog { b } => {
                let y = 1.0 + 2.0 * b * x.ln();
                (y - 2.0 * b) / (x * y)
            }
            Family::Transcendental { a, b } => {
                let y = a * x + b;
                (b - y * y) / (x * y)
            }
            Family::FromDistribution(d) => d.density(x) / d.survival(x),
            Family::Perturbed { beta, delta } => {
                let k = 1.0 / beta;
                if x < k - delta {
                    0.0
                } else {
                    1.0 / (k + delta - x)
                }
            }
        };
        Ok(if a.is_finite() {
            Ara::Finite(a)
        } else {
            Ara::Infinite
        })
    }

    /// `lim p'(x)` as `x -> inf` for unbounded domains.
    pub fn asymptotic_slope(&self) -> Option<f64> {
        if self.hi.is_finite() {
            return None;
        }
        Some(match self.family {
            Family::KinkedLinear { slope_above, .. } => slope_above,
            _ => 0.0,
        })
    }

    /// Saturation point beyond which `p` is flat, when it exists.
    pub fn saturation_point(&self) -> Option<f64> {
        match self.family {
            Family::PiecewiseLinearCapped { beta } => Some(1.0 / beta),
            Family::TruncatedQuadratic { c1, c2 } => Some(c1 / (2.0 * c2)),
            Family::Perturbed { beta, delta } => Some(1.0 / beta + delta),
            Family::FromDistribution(DistributionSpec::Uniform { hi, .. }) => Some(hi),
            _ => None,
        }
    }

    /// Known ARA class of the family on its domain.
    pub fn analytic_verdict(&self) -> Option<AraVerdict> {
        match self.family {
            Family::Fractional { .. } | Family::PowerLaw { .. } | Family::Logarithmic { .. } => {
                Some(AraVerdict::Dara)
            }
            Family::GaussianIntegral | Family::ExpoPower { .. } => Some(AraVerdict::Iara),
            Family::PiecewiseLinearCapped { .. }
            | Family::TruncatedQuadratic { .. }
            | Family::Perturbed { .. }
            | Family::KinkedLinear { .. } => Some(AraVerdict::RelaxedIara),
            Family::FromDistribution(DistributionSpec::Exponential { .. }) => {
                Some(AraVerdict::RelaxedDara)
            }
            Family::FromDistribution(DistributionSpec::Uniform { .. }) => {
                Some(AraVerdict::RelaxedIara)
            }
            Family::FromDistribution(DistributionSpec::TruncatedGaussian { lo, .. }) => {
                Some(if lo == 0.0 {
                    AraVerdict::Iara
                } else {
                    AraVerdict::RelaxedIara
                })
            }
            Family::Translog { b } => Self::translog_window(b)
                .filter(|&(l, h)| self.lo >= l && self.hi <= h)
                .map(|_| AraVerdict::Iara),
            Family::Transcendental { a, b } => Self::transcendental_window(a, b)
                .filter(|&(l, h)| self.lo >= l && self.hi <= h)
                .map(|_| AraVerdict::Iara),
        }
    }

    /// `sup { x in domain : p'(x) >= slope }` for families where it has a
    /// closed form (concave families). `None` means use the numeric route.
    pub(crate) fn slope_level_closed_form(&self, slope: f64) -> Option<f64> {
        let lo = self.lo;
        let x = match self.family {
            Family::PiecewiseLinearCapped { beta } => {
                if beta >= slope {
                    1.0 / beta
                } else {
                    0.0
                }
            }
            Family::Fractional { scale } => (scale / slope).sqrt() - 1.0,
            Family::PowerLaw { coef, exponent } => {
                (coef * exponent / slope).powf(1.0 / (1.0 - exponent))
            }
            Family::Logarithmic { c } => 1.0 / slope - 1.0 / c,
            Family::GaussianIntegral => {
                if slope >= 1.0 {
                    if slope == 1.0 {
                        0.0
                    } else {
                        lo
                    }
                } else {
                    (-slope.ln()).sqrt()
                }
            }
            Family::TruncatedQuadratic { c1, c2 } => (c1 - slope) / (2.0 * c2),
            Family::FromDistribution(DistributionSpec::Uniform { lo: l, hi }) => {
                if slope > 1.0 {
                    0.0
                } else if slope == 1.0 {
                    l
                } else {
                    hi - slope * (hi - l)
                }
            }
            Family::FromDistribution(DistributionSpec::Exponential { rate }) => {
                if slope >= 1.0 {
                    0.0
                } else {
                    -slope.ln() / rate
                }
            }
            Family::Perturbed { beta, delta } => {
                let k = 1.0 / beta;
                if slope > beta {
                    0.0
                } else {
                    k + delta - 2.0 * delta * slope / beta
                }
            }
            Family::KinkedLinear {
                slope_below,
                slope_above,
                kink,
            } => {
                if slope > slope_below {
                    0.0
                } else if slope > slope_above {
                    kink
                } else {
                    return None;
                }
            }
            _ => return None,
        };
        Some(x.max(lo))
    }

    /// Parameter map for serialization.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: f64| {
            m.insert(k.to_string(), v);
        };
        match self.family {
            Family::PiecewiseLinearCapped { beta } => put("beta", beta),
            Family::Fractional { scale } => put("scale", scale),
            Family::PowerLaw { coef, exponent } => {
                put("coef", coef);
                put("exponent", exponent);
            }
            Family::Logarithmic { c } => put("c", c),
            Family::GaussianIntegral => {}
            Family::ExpoPower { b, c } => {
                put("b", b);
                put("c", c);
            }
            Family::TruncatedQuadratic { c1, c2 } => {
                put("c1", c1);
                put("c2", c2);
            }
            Family::Translog { b } => put("b", b),
            Family::Transcendental { a, b } => {
                put("a", a);
                put("b", b);
            }
            Family::FromDistribution(DistributionSpec::Uniform { lo, hi }) => {
                put("lo", lo);
                put("hi", hi);
            }
            Family::FromDistribution(DistributionSpec::Exponential { rate }) => put("rate", rate),
            Family::FromDistribution(DistributionSpec::TruncatedGaussian { mean, sd, lo }) => {
                put("mean", mean);
                put("sd", sd);
                put("lo", lo);
            }
            Family::Perturbed { beta, delta } => {
                put("beta", beta);
                put("delta", delta);
            }
            Family::KinkedLinear {
                slope_below,
                slope_above,
                kink,
            } => {
                put("slope_below", slope_below);
                put("slope_above", slope_above);
                put("kink", kink);
            }
        }
        m
    }

    pub fn to_spec(&self) -> ProductionSpec {
        ProductionSpec {
            family: self.name().to_string(),
            params: self.params(),
            domain: Some([Some(self.lo), self.hi.is_finite().then_some(self.hi)]),
        }
    }
}

fn check_window(lo: f64, hi: f64) -> Result<()> {
    check_param(
        "domain.lo",
        lo,
        lo > 0.0,
        "must be positive for this family",
    )?;
    if hi.is_finite() && hi > lo {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name: "domain.hi",
            value: hi,
            reason: "must be finite and exceed domain.lo",
        })
    }
}

/// JSON form `{"family": ..., "params": {...}, "domain": [lo, hi]}`.
/// A `null` upper bound means unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub domain: Option<[Option<f64>; 2]>,
}

impl ProductionSpec {
    fn get(&self, key: &'static str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or(ModelError::InvalidParameter {
                name: key,
                value: f64::NAN,
                reason: "missing parameter",
            })
    }

    fn get_or(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn build(&self) -> Result<ProductionFunction> {
        let window = |this: &Self| -> Result<(f64, f64)> {
            match this.domain {
                Some([Some(lo), Some(hi)]) => Ok((lo, hi)),
                _ => Err(ModelError::InvalidParameter {
                    name: "domain",
                    value: f64::NAN,
                    reason: "finite window required for this family",
                }),
            }
        };
        let p = match self.family.as_str() {
            "piecewise_linear_capped" => {
                ProductionFunction::piecewise_linear_capped(self.get("beta")?)?
            }
            "fractional" => ProductionFunction::fractional(self.get_or("scale", 1.0))?,
            "power_law" => ProductionFunction::power_law(self.get("coef")?, self.get("exponent")?)?,
            "logarithmic" => ProductionFunction::logarithmic(self.get("c")?)?,
            "gaussian_integral" => ProductionFunction::gaussian_integral(),
            "expo_power" => ProductionFunction::expo_power(self.get("b")?, self.get("c")?)?,
            "truncated_quadratic" => {
                ProductionFunction::truncated_quadratic(self.get("c1")?, self.get("c2")?)?
            }
            "translog" => {
                let b = self.get("b")?;
                let (lo, hi) = match self.domain {
                    Some(_) => window(self)?,
                    None => ProductionFunction::translog_window(b).ok_or(
                        ModelError::InvalidParameter {
                            name: "b",
                            value: b,
                            reason: "IARA window is empty",
                        },
                    )?,
                };
                return ProductionFunction::translog(b, lo, hi);
            }
            "transcendental" => {
                let (a, b) = (self.get("a")?, self.get("b")?);
                let (lo, hi) = match self.domain {
                    Some(_) => window(self)?,
                    None => ProductionFunction::transcendental_window(a, b).ok_or(
                        ModelError::InvalidParameter {
                            name: "a",
                            value: a,
                            reason: "IARA window is empty",
                        },
                    )?,
                };
                return ProductionFunction::transcendental(a, b, lo, hi);
            }
            "uniform_min" => ProductionFunction::from_distribution(DistributionSpec::Uniform {
                lo: self.get_or("lo", 0.0),
                hi: self.get_or("hi", 1.0),
            })?,
            "exponential_min" => {
                ProductionFunction::from_distribution(DistributionSpec::Exponential {
                    rate: self.get("rate")?,
                })?
            }
            "truncated_gaussian_min" => {
                ProductionFunction::from_distribution(DistributionSpec::TruncatedGaussian {
                    mean: self.get("mean")?,
                    sd: self.get("sd")?,
                    lo: self.get_or("lo", 0.0),
                })?
            }
            "perturbed_linear_capped" => {
                let beta = self.get("beta")?;
                ProductionFunction::perturbed(beta, self.get_or("delta", 1e-3 / beta))?
            }
            "kinked_linear" => ProductionFunction::kinked_linear(
                self.get("slope_below")?,
                self.get("slope_above")?,
                self.get("kink")?,
            )?,
            _ => {
                return Err(ModelError::Model(format!(
                    "unknown production family '{}'",
                    self.family
                )))
            }
        };
        match self.domain {
            Some([lo, hi]) => p.with_domain(lo.unwrap_or(0.0), hi.unwrap_or(f64::INFINITY)),
            None => Ok(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples() -> Vec<ProductionFunction> {
        let (tl, th) = ProductionFunction::translog_window(0.5).unwrap();
        let (cl, ch) = ProductionFunction::transcendental_window(-1.0, 2.0).unwrap();
        vec![
            ProductionFunction::fractional(1.0).unwrap(),
            ProductionFunction::power_law(0.5, 0.5).unwrap(),
            ProductionFunction::logarithmic(3.0).unwrap(),
            ProductionFunction::gaussian_integral(),
            ProductionFunction::expo_power(1.0, 2.0).unwrap(),
            ProductionFunction::truncated_quadratic(2.0, 1.0).unwrap(),
            ProductionFunction::translog(0.5, tl, th).unwrap(),
            ProductionFunction::transcendental(-1.0, 2.0, cl, ch).unwrap(),
            ProductionFunction::from_distribution(DistributionSpec::Exponential { rate: 2.0 })
                .unwrap(),
            ProductionFunction::from_distribution(DistributionSpec::TruncatedGaussian {
                mean: 1.0,
                sd: 0.4,
                lo: 0.1,
            })
            .unwrap(),
            ProductionFunction::perturbed(2.0, 0.05).unwrap(),
        ]
    }

    #[test]
    fn derivatives_match_central_differences() {
        for p in samples() {
            let (lo, hi) = p.domain();
            let hi = if hi.is_finite() { hi } else { 3.0 };
            for i in 1..40 {
                // offset keeps samples off the piece boundaries
                let x = lo + (hi - lo) * (i as f64 + 0.37) / 40.0;
                let h = 1e-5 * x.max(1e-3);
                let fd1 = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
                let fd2 = (p.d1(x + h) - p.d1(x - h)) / (2.0 * h);
                let s1 = p.d1(x).abs().max(1e-3);
                let s2 = p.d2(x).abs().max(1e-3);
                assert!((fd1 - p.d1(x)).abs() <= 1e-6 * s1, "{} d1 at {x}", p.name());
                assert!((fd2 - p.d2(x)).abs() <= 1e-6 * s2, "{} d2 at {x}", p.name());
            }
        }
    }

    #[test]
    fn simple_values() {
        let plc = ProductionFunction::piecewise_linear_capped(2.0).unwrap();
        assert_eq!(plc.eval(0.25).unwrap(), 0.5);
        assert_eq!(plc.eval(3.0).unwrap(), 1.0);
        assert_eq!(
            ProductionFunction::fractional(1.0)
                .unwrap()
                .eval(1.0)
                .unwrap(),
            0.5
        );
        assert_eq!(
            ProductionFunction::gaussian_integral().eval(0.0).unwrap(),
            0.0
        );
        assert!(ProductionFunction::gaussian_integral().value(10.0) - SQRT_PI_2 < 1e-15);
    }

    #[test]
    fn windowed_family_rejects_outside_points() {
        let (lo, hi) = ProductionFunction::translog_window(0.5).unwrap();
        let p = ProductionFunction::translog(0.5, lo, hi).unwrap();
        let err = p.eval(hi * 2.0).unwrap_err();
        assert!(matches!(err, ModelError::Domain { .. }));
    }

    #[test]
    fn perturbed_is_c1_and_bounded_bump() {
        let beta = 2.0;
        let delta = 0.05;
        let p = ProductionFunction::perturbed(beta, delta).unwrap();
        let k = 1.0 / beta;
        for x in [k - delta, k + delta] {
            let l = p.d1(x - 1e-12);
            let r = p.d1(x + 1e-12);
            assert!((l - r).abs() < 1e-9);
        }
        let bump = (beta * k).min(1.0) - p.value(k);
        assert!((bump - beta * delta / 4.0).abs() < 1e-15);
    }

    #[test]
    fn spec_round_trip() {
        for p in samples() {
            let spec = p.to_spec();
            let json = serde_json::to_string(&spec).unwrap();
            let back: ProductionSpec = serde_json::from_str(&json).unwrap();
            let q = back.build().unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn transcendental_window_satisfies_inequalities() {
        for &(a, b) in &[(-1.0, 0.5), (-2.0, 2.0), (-0.5, 1.0)] {
            let (lo, hi) = ProductionFunction::transcendental_window(a, b).unwrap();
            for i in 1..100 {
                let x = lo + (hi - lo) * i as f64 / 100.0;
                let y = a * x + b;
                assert!(y > 0.0 && y < b.sqrt() && y * y > 2.0 * a * x + b);
            }
        }
    }
}
