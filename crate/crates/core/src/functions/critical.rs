use serde::{Deserialize, Serialize};

use super::ara::{derivative_grid, Ara};
use super::cost::CostFunction;
use super::production::{Family, ProductionFunction};
use crate::error::{ModelError, Result};
use crate::optim::{pick_largest_best, right_root, BISECTION_TOL};

const SCAN_POINTS: usize = 4096;

/// Critical input level: the largest maximizer of `p(x) - gamma x` for a
/// linear cost, `max { x : p'(x) >= c'(0) }` for a convex cost.
pub fn critical_level(p: &ProductionFunction, c: &CostFunction) -> Result<f64> {
    check_growth(p, c)?;
    let slope = c.marginal_at_zero();
    let concave_family = !matches!(
        p.family(),
        Family::ExpoPower { .. } | Family::Translog { .. } | Family::Transcendental { .. }
    );
    if concave_family {
        if let Some(x) = p.slope_level_closed_form(slope) {
            return Ok(x.min(p.domain().1));
        }
    }
    Ok(match c.as_linear() {
        Some(gamma) => numeric_argmax_net(p, gamma),
        None => numeric_largest_crossing(p, slope),
    })
}

fn check_growth(p: &ProductionFunction, c: &CostFunction) -> Result<()> {
    let Some(tail) = p.asymptotic_slope() else {
        return Ok(());
    };
    match c.as_linear() {
        Some(gamma) if tail >= gamma => Err(ModelError::Inadmissible(format!(
            "asymptotic slope {tail} of {} is not below gamma = {gamma}",
            p.name()
        ))),
        _ => Ok(()),
    }
}

fn scan_end(p: &ProductionFunction, slope: f64) -> f64 {
    let (lo, hi) = p.domain();
    if hi.is_finite() {
        return hi;
    }
    let mut x = lo.max(1.0);
    while p.d1(x) >= slope && x < 1e12 {
        x *= 2.0;
    }
    2.0 * x
}

/// Down-crossings of `p' - slope` on a scan of the domain.
fn crossings(p: &ProductionFunction, slope: f64) -> (Vec<f64>, f64) {
    let lo = p.domain().0;
    let end = scan_end(p, slope);
    let g = |x: f64| p.d1(x) - slope;
    let h = (end - lo) / SCAN_POINTS as f64;
    let mut out = Vec::new();
    let mut prev = (lo, g(lo));
    for i in 1..=SCAN_POINTS {
        let x = if i == SCAN_POINTS {
            end
        } else {
            lo + h * i as f64
        };
        let gx = g(x);
        if prev.1 >= 0.0 && gx < 0.0 {
            out.push(right_root(g, prev.0, x, 1e-14));
        }
        prev = (x, gx);
    }
    (out, end)
}

fn numeric_argmax_net(p: &ProductionFunction, gamma: f64) -> f64 {
    let (lo, hi) = p.domain();
    let (mut cands, _) = crossings(p, gamma);
    cands.insert(0, lo);
    if hi.is_finite() && p.d1(hi) >= gamma {
        cands.push(hi);
    }
    pick_largest_best(&|x: f64| p.value(x) - gamma * x, &cands)
}

fn numeric_largest_crossing(p: &ProductionFunction, slope: f64) -> f64 {
    let (lo, hi) = p.domain();
    if hi.is_finite() && p.d1(hi) >= slope {
        return hi;
    }
    let (cands, _) = crossings(p, slope);
    cands.last().copied().unwrap_or(lo)
}

/// Bisection on `p' - slope` from a known nonnegative point, used as an
/// independent check of closed forms.
pub fn critical_level_by_bisection(p: &ProductionFunction, slope: f64) -> Option<f64> {
    let lo = p.domain().0;
    if p.d1(lo) < slope {
        return None;
    }
    let hi = scan_end(p, slope);
    Some(right_root(|x| p.d1(x) - slope, lo, hi, BISECTION_TOL))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub pass: bool,
    /// Sample point where the condition fails.
    pub witness: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub growth: ConditionCheck,
    pub nonnegative: ConditionCheck,
    pub monotone: ConditionCheck,
    pub concave: ConditionCheck,
}

impl AdmissibilityReport {
    pub fn pass(&self) -> bool {
        self.growth.pass && self.nonnegative.pass && self.monotone.pass && self.concave.pass
    }
}

fn ok(detail: &str) -> ConditionCheck {
    ConditionCheck {
        pass: true,
        witness: None,
        detail: detail.to_string(),
    }
}

fn fail(x: f64, detail: String) -> ConditionCheck {
    ConditionCheck {
        pass: false,
        witness: Some(x),
        detail,
    }
}

/// Sampled admissibility diagnostics; never errors.
pub fn validate_admissible(p: &ProductionFunction, c: &CostFunction) -> AdmissibilityReport {
    let growth = match check_growth(p, c) {
        Ok(()) => ok("asymptotic slope below marginal cost"),
        Err(e) => fail(f64::INFINITY, e.to_string()),
    };
    let xs = derivative_grid(p, 1000);
    let vs: Vec<f64> = xs.iter().map(|&x| p.value(x)).collect();
    let scale = vs.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);

    let nonnegative = match xs.iter().zip(&vs).find(|(_, &v)| v < -1e-12 * scale) {
        Some((&x, &v)) => fail(x, format!("p({x}) = {v} < 0")),
        None => ok("p >= 0 on samples"),
    };

    let mut monotone = ok("p nondecreasing on samples");
    for i in 1..xs.len() {
        if vs[i] < vs[i - 1] - 1e-12 * scale {
            monotone = fail(
                xs[i],
                format!("p drops between {} and {}", xs[i - 1], xs[i]),
            );
            break;
        }
    }

    let slopes: Vec<f64> = (1..xs.len())
        .map(|i| (vs[i] - vs[i - 1]) / (xs[i] - xs[i - 1]))
        .collect();
    let sscale = slopes
        .iter()
        .filter(|s| s.is_finite())
        .fold(0.0f64, |m, s| m.max(s.abs()))
        .max(1e-12);
    let mut concave = ok("secant slopes nonincreasing on samples");
    for i in 1..slopes.len() {
        if slopes[i] > slopes[i - 1] + 1e-9 * sscale {
            concave = fail(
                xs[i],
                format!(
                    "secant slope rises from {} to {} at x = {}",
                    slopes[i - 1],
                    slopes[i],
                    xs[i]
                ),
            );
            break;
        }
    }
    AdmissibilityReport {
        growth,
        nonnegative,
        monotone,
        concave,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertaintyEquivalent {
    pub a_ce: f64,
    /// `q a_bar - a_ce`
    pub premium: f64,
    /// `0.5 A(q a_bar + s + e) q (1 - q) a_bar^2`
    pub arrow_pratt: f64,
}

/// Deterministic assistance level with the same expected production as the
/// lottery `a_bar` w.p. `q`, `0` otherwise.
pub fn certainty_equivalent_assistance(
    p: &ProductionFunction,
    s: f64,
    e: f64,
    a_bar: f64,
    q: f64,
) -> Result<CertaintyEquivalent> {
    crate::error::check_param("q", q, (0.0..=1.0).contains(&q), "must lie in [0, 1]")?;
    crate::error::check_param("a_bar", a_bar, a_bar >= 0.0, "must be >= 0")?;
    let x0 = s + e;
    p.check_domain(x0)?;
    p.check_domain(x0 + a_bar)?;
    let ap = match p.ara(x0 + q * a_bar)? {
        Ara::Finite(a) => 0.5 * a * q * (1.0 - q) * a_bar * a_bar,
        Ara::Infinite => f64::INFINITY,
    };
    let a_ce = if q == 1.0 {
        a_bar
    } else if q == 0.0 || a_bar == 0.0 {
        0.0
    } else {
        let (lo_v, hi_v) = (p.value(x0), p.value(x0 + a_bar));
        if p.d1(x0) <= 0.0 || hi_v <= lo_v {
            return Err(ModelError::FlatRegion { x: x0 });
        }
        let target = q * hi_v + (1.0 - q) * lo_v;
        right_root(|a| target - p.value(x0 + a), 0.0, a_bar, BISECTION_TOL)
    };
    Ok(CertaintyEquivalent {
        a_ce,
        premium: q * a_bar - a_ce,
        arrow_pratt: ap,
    })
}
