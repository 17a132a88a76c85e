//! Optimal effort and productivity for a single worker.
//!
//! Utility is `E[p(s + e + a)] - c(e)` where `a` is the assistance level,
//! deterministic or a two-point lottery `(a_bar w.p. q, 0 w.p. 1 - q)`.
//! All solvers select the largest maximizer.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, ModelError, Result};
use crate::functions::{
    classify_ara, critical_level, AraVerdict, CostFunction, Family, ProductionFunction,
};
use crate::optim::{expand_until_negative, maximize_by_derivative, right_root, BISECTION_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    InteriorFoc,
    CornerZero,
    CornerCritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffortSolution {
    pub effort: f64,
    pub productivity: f64,
    pub regime: Regime,
    pub utility: f64,
}

/// Unreliable assistance: `a_bar` with probability `q`, zero otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityModel {
    pub a_bar: f64,
    pub q: f64,
}

impl ReliabilityModel {
    pub fn new(a_bar: f64, q: f64) -> Result<Self> {
        check_param("a_bar", a_bar, a_bar >= 0.0, "must be >= 0")?;
        check_param("q", q, (0.0..=1.0).contains(&q), "must lie in [0, 1]")?;
        Ok(Self { a_bar, q })
    }
}

fn require_linear(c: &CostFunction) -> Result<f64> {
    c.as_linear()
        .ok_or_else(|| ModelError::Inadmissible("operation requires a linear cost".to_string()))
}

fn check_inputs(s: f64, a: f64) -> Result<()> {
    check_param("s", s, s >= 0.0, "must be >= 0")?;
    check_param("a", a, a >= 0.0, "must be >= 0")
}

/// Families whose derivative is monotone on the whole domain.
pub(crate) fn concave_family(p: &ProductionFunction) -> bool {
    !matches!(
        p.family(),
        Family::ExpoPower { .. } | Family::Translog { .. } | Family::Transcendental { .. }
    )
}

/// Deterministic assistance, linear cost: `e* = (x* - s - a)^+`.
pub fn effort_basic(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    a: f64,
) -> Result<EffortSolution> {
    let gamma = require_linear(c)?;
    check_inputs(s, a)?;
    let x_star = critical_level(p, c)?;
    p.check_domain(s + a)?;
    let effort = (x_star - s - a).max(0.0);
    let (productivity, regime) = if s + a <= x_star {
        (p.value(x_star), Regime::CornerCritical)
    } else {
        (p.value(s + a), Regime::CornerZero)
    };
    Ok(EffortSolution {
        effort,
        productivity,
        regime,
        utility: productivity - gamma * effort,
    })
}

/// Deterministic assistance, quadratic cost: root of `p'(s+e+a) = c'(e)`.
pub fn effort_basic_convex(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    a: f64,
) -> Result<EffortSolution> {
    if c.as_linear().is_some() {
        return effort_basic(p, c, s, a);
    }
    check_inputs(s, a)?;
    let x_c = critical_level(p, c)?;
    p.check_domain(s + a)?;
    let base = s + a;
    let effort = if base >= x_c {
        0.0
    } else {
        let bound = (x_c - base).min(p.domain().1 - base);
        let g = |e: f64| p.d1(base + e) - c.d1(e);
        if concave_family(p) {
            if g(0.0) < 0.0 {
                0.0
            } else {
                let hi = expand_until_negative(g, 0.0, bound / 64.0, bound).unwrap_or(bound);
                right_root(g, 0.0, hi.min(bound), BISECTION_TOL)
            }
        } else {
            let u = |e: f64| p.value(base + e) - c.value(e);
            maximize_by_derivative(u, g, 0.0, bound, 4096)
        }
    };
    let productivity = p.value(base + effort);
    Ok(EffortSolution {
        effort,
        productivity,
        regime: if effort > 0.0 {
            Regime::InteriorFoc
        } else {
            Regime::CornerZero
        },
        utility: productivity - c.value(effort),
    })
}

/// Dispatch on the cost variant.
pub fn effort_deterministic(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    a: f64,
) -> Result<EffortSolution> {
    match c.as_linear() {
        Some(_) => effort_basic(p, c, s, a),
        None => effort_basic_convex(p, c, s, a),
    }
}

/// Closed form for `p = min(1, beta x)` with linear cost under unreliable
/// assistance. Valid for any `q` in `[0, 1]`; returns `(e*, p*)`.
pub fn capped_linear_exante(beta: f64, gamma: f64, s: f64, a_bar: f64, q: f64) -> (f64, f64) {
    let k = 1.0 / beta;
    if beta < gamma {
        let p = q * (beta * (s + a_bar)).min(1.0) + (1.0 - q) * (beta * s).min(1.0);
        return (0.0, p);
    }
    if q <= (beta - gamma) / beta {
        ((k - s).max(0.0), 1.0)
    } else {
        let e = (k - s - a_bar).max(0.0);
        let p = q + (1.0 - q) * (beta * s).min(1.0).max(1.0 - beta * a_bar);
        (e, p)
    }
}

/// Ex-ante effort under unreliable assistance.
pub fn effort_exante(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    rel: &ReliabilityModel,
) -> Result<EffortSolution> {
    let ReliabilityModel { a_bar, q } = *rel;
    check_inputs(s, a_bar)?;
    check_param("q", q, (0.0..=1.0).contains(&q), "must lie in [0, 1]")?;
    if q == 1.0 {
        return effort_deterministic(p, c, s, a_bar);
    }
    let x_c = critical_level(p, c)?;
    p.check_domain(s + a_bar)?;
    let utility = |e: f64| q * p.value(s + e + a_bar) + (1.0 - q) * p.value(s + e) - c.value(e);

    let effort = match (p.family(), c.as_linear()) {
        (Family::PiecewiseLinearCapped { beta }, Some(gamma)) => {
            capped_linear_exante(*beta, gamma, s, a_bar, q).0
        }
        _ => {
            let bound = (x_c - s).min(p.domain().1 - s - a_bar).max(0.0);
            let g = |e: f64| q * p.d1(s + e + a_bar) + (1.0 - q) * p.d1(s + e) - c.d1(e);
            if bound == 0.0 {
                0.0
            } else if concave_family(p) {
                if g(0.0) < 0.0 {
                    0.0
                } else {
                    let hi = expand_until_negative(g, 0.0, bound / 64.0, bound).unwrap_or(bound);
                    right_root(g, 0.0, hi.min(bound), BISECTION_TOL)
                }
            } else {
                maximize_by_derivative(utility, g, 0.0, bound, 4096)
            }
        }
    };
    let productivity = match (p.family(), c.as_linear()) {
        (Family::PiecewiseLinearCapped { beta }, Some(gamma)) => {
            capped_linear_exante(*beta, gamma, s, a_bar, q).1
        }
        _ => q * p.value(s + effort + a_bar) + (1.0 - q) * p.value(s + effort),
    };
    Ok(EffortSolution {
        effort,
        productivity,
        regime: if effort > 0.0 {
            Regime::InteriorFoc
        } else {
            Regime::CornerZero
        },
        utility: utility(effort),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullAdaptation {
    pub with_ai: EffortSolution,
    pub without_ai: EffortSolution,
    pub effort: f64,
    pub productivity: f64,
}

/// Effort chosen after observing whether the assistance works.
pub fn effort_full_adaptation(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    rel: &ReliabilityModel,
) -> Result<FullAdaptation> {
    let q = rel.q;
    let with_ai = effort_deterministic(p, c, s, rel.a_bar)?;
    let without_ai = effort_deterministic(p, c, s, 0.0)?;
    Ok(FullAdaptation {
        with_ai,
        without_ai,
        effort: q * with_ai.effort + (1.0 - q) * without_ai.effort,
        productivity: q * with_ai.productivity + (1.0 - q) * without_ai.productivity,
    })
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign of `d p*(s, a_bar, q) / d a_bar` from the ARA gap at the optimum.
pub fn exante_derivative_sign(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    rel: &ReliabilityModel,
) -> Result<i8> {
    let gamma = require_linear(c)?;
    let verdict = classify_ara(p)?.verdict;
    if verdict == AraVerdict::Mixed {
        return Err(ModelError::UnsupportedClassification(verdict));
    }
    let ReliabilityModel { a_bar, q } = *rel;
    let e = effort_exante(p, c, s, rel)?.effort;
    let threshold = q * p.d1(s + a_bar) + (1.0 - q) * p.d1(s);
    if threshold >= gamma && e > 0.0 {
        let hi = p.ara(s + e + a_bar)?;
        let lo = p.ara(s + e)?;
        Ok(match hi.difference(lo) {
            Some(d) => -sign(d),
            None => 0,
        })
    } else {
        Ok(sign(q * p.d1(s + a_bar)))
    }
}

/// Sign of a central difference of `p*` in `a_bar`; `None` when the change
/// is below `1e-8`.
pub fn productivity_fd_sign(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    rel: &ReliabilityModel,
    step: f64,
) -> Result<Option<i8>> {
    let lo = (rel.a_bar - step).max(0.0);
    let hi = rel.a_bar + step;
    let p_lo = effort_exante(p, c, s, &ReliabilityModel { a_bar: lo, ..*rel })?.productivity;
    let p_hi = effort_exante(p, c, s, &ReliabilityModel { a_bar: hi, ..*rel })?.productivity;
    let d = p_hi - p_lo;
    Ok((d.abs() >= 1e-8).then(|| sign(d)))
}

/// Turning point `tau` of `p*(s, ., q)` for IARA production: solves
/// `q p'(s + tau) + (1 - q) p'(s) = gamma`; infinite when
/// `(1 - q) p'(s) >= gamma`.
pub fn vshape_threshold(p: &ProductionFunction, s: f64, q: f64, gamma: f64) -> f64 {
    let base = (1.0 - q) * p.d1(s);
    if base >= gamma {
        return f64::INFINITY;
    }
    let f = |z: f64| q * p.d1(s + z) + base - gamma;
    if f(0.0) < 0.0 {
        return 0.0;
    }
    match expand_until_negative(f, 0.0, 1e-2, 1e12) {
        Some(hi) => right_root(f, 0.0, hi, BISECTION_TOL),
        None => f64::INFINITY,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnreliabilityBadInstance {
    pub beta: f64,
    pub gamma: f64,
    pub s: f64,
    pub q: f64,
    pub a_low: f64,
    pub a_high: f64,
    pub productivity_low: f64,
    pub productivity_high: f64,
    pub ratio: f64,
}

/// Capped-linear instance where raising assistance from `0` to `1/beta`
/// cuts productivity to a fraction `q = eps`.
pub fn construct_unreliability_bad_instance(eps: f64) -> Result<UnreliabilityBadInstance> {
    check_param("eps", eps, eps > 0.0 && eps < 1.0, "must lie in (0, 1)")?;
    let beta = 1.0;
    let gamma = beta * (1.0 - eps / 2.0);
    bad_instance_from(
        ProductionFunction::piecewise_linear_capped(beta)?,
        beta,
        gamma,
        eps,
    )
}

/// Same construction on the smoothed capped-linear family, with
/// `(beta - gamma)/beta < q < eps/2`.
pub fn construct_relaxed_bad_instance(eps: f64) -> Result<UnreliabilityBadInstance> {
    check_param("eps", eps, eps > 0.0 && eps < 1.0, "must lie in (0, 1)")?;
    let beta = 1.0;
    let q = eps / 3.0;
    let gamma = beta * (1.0 - eps / 6.0);
    let delta = (eps / (4.0 * (beta + eps))).min(1e-3 / beta);
    bad_instance_from(ProductionFunction::perturbed(beta, delta)?, beta, gamma, q)
}

fn bad_instance_from(
    p: ProductionFunction,
    beta: f64,
    gamma: f64,
    q: f64,
) -> Result<UnreliabilityBadInstance> {
    let c = CostFunction::linear(gamma)?;
    let (a_low, a_high) = (0.0, 1.0 / beta);
    let lo = effort_exante(&p, &c, 0.0, &ReliabilityModel::new(a_low, q)?)?;
    let hi = effort_exante(&p, &c, 0.0, &ReliabilityModel::new(a_high, q)?)?;
    Ok(UnreliabilityBadInstance {
        beta,
        gamma,
        s: 0.0,
        q,
        a_low,
        a_high,
        productivity_low: lo.productivity,
        productivity_high: hi.productivity,
        ratio: hi.productivity / lo.productivity,
    })
}

/// Checks the convex-cost ARA-gap condition at the optimum:
/// `A(s+e*+a_bar) - A(s+e*) > c''(e*) / ((1-q) p'(s+e*))`.
pub fn convex_decline_condition(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    rel: &ReliabilityModel,
) -> Result<bool> {
    let e = effort_exante(p, c, s, rel)?.effort;
    let slope = p.d1(s + e);
    if slope <= 0.0 || rel.q >= 1.0 {
        return Ok(false);
    }
    let rhs = c.d2() / ((1.0 - rel.q) * slope);
    let gap = p.ara(s + e + rel.a_bar)?.difference(p.ara(s + e)?);
    Ok(match gap {
        Some(g) => g > rhs,
        None => false,
    })
}

/// Smallest grid point from which `values` never rise again, provided the
/// tail actually drops. Used to expose the empirical onset of decline.
pub fn eventual_decline_onset(grid: &[f64], values: &[f64]) -> Option<f64> {
    let n = values.len().min(grid.len());
    if n < 2 {
        return None;
    }
    let scale = values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let tol = 1e-12 * scale;
    let mut start = n - 1;
    while start > 0 && values[start] <= values[start - 1] + tol {
        start -= 1;
    }
    (start < n - 1 && values[start] - values[n - 1] > tol).then(|| grid[start])
}

/// Shape of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveShape {
    Nondecreasing,
    Nonincreasing,
    /// Nonincreasing up to the turn, nondecreasing after.
    VShaped,
    Other,
}

/// Classifies a sampled curve with a relative tolerance; also returns the
/// index of the (last) minimum.
pub fn curve_shape(values: &[f64], rel_tol: f64) -> (CurveShape, usize) {
    let scale = values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let tol = rel_tol * scale;
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let turn = values.iter().rposition(|&v| v <= min + tol).unwrap_or(0);
    let nonincreasing = |xs: &[f64]| xs.windows(2).all(|w| w[1] <= w[0] + tol);
    let nondecreasing = |xs: &[f64]| xs.windows(2).all(|w| w[1] >= w[0] - tol);
    let shape = if nondecreasing(values) {
        CurveShape::Nondecreasing
    } else if nonincreasing(values) {
        CurveShape::Nonincreasing
    } else if nonincreasing(&values[..=turn]) && nondecreasing(&values[turn..]) {
        CurveShape::VShaped
    } else {
        CurveShape::Other
    };
    (shape, turn)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plc(beta: f64) -> ProductionFunction {
        ProductionFunction::piecewise_linear_capped(beta).unwrap()
    }

    fn lin(g: f64) -> CostFunction {
        CostFunction::linear(g).unwrap()
    }

    #[test]
    fn basic_examples() {
        let sol = effort_basic(&plc(2.0), &lin(1.0), 0.2, 0.1).unwrap();
        assert!((sol.effort - 0.2).abs() < 1e-15);
        assert_eq!(sol.productivity, 1.0);
        assert_eq!(sol.regime, Regime::CornerCritical);
        let fr = ProductionFunction::fractional(1.0).unwrap();
        let x = 2f64.sqrt() - 1.0;
        let sol = effort_basic(&fr, &lin(0.5), 0.3, x).unwrap();
        assert_eq!(sol.effort, 0.0);
        assert_eq!(sol.regime, Regime::CornerZero);
        assert_eq!(sol.productivity, fr.value(x + 0.3));
    }

    #[test]
    fn exante_capped_examples() {
        let rel = ReliabilityModel::new(0.3, 0.4).unwrap();
        let sol = effort_exante(&plc(2.0), &lin(1.0), 0.0, &rel).unwrap();
        assert_eq!((sol.effort, sol.productivity), (0.5, 1.0));
        let rel = ReliabilityModel::new(0.3, 0.8).unwrap();
        let sol = effort_exante(&plc(2.0), &lin(1.0), 0.0, &rel).unwrap();
        assert!((sol.effort - 0.2).abs() < 1e-15);
        assert!((sol.productivity - 0.88).abs() < 1e-15);
        // tie goes to full effort
        let rel = ReliabilityModel::new(0.3, 0.5).unwrap();
        let sol = effort_exante(&plc(2.0), &lin(1.0), 0.0, &rel).unwrap();
        assert_eq!(sol.effort, 0.5);
    }

    #[test]
    fn full_adaptation_mixture() {
        let rel = ReliabilityModel::new(0.3, 0.5).unwrap();
        let fa = effort_full_adaptation(&plc(2.0), &lin(1.0), 0.0, &rel).unwrap();
        assert!((fa.effort - 0.35).abs() < 1e-15);
    }

    #[test]
    fn convex_fractional_root() {
        let fr = ProductionFunction::fractional(1.0).unwrap();
        let c = CostFunction::quadratic(0.5, 0.125).unwrap();
        let sol = effort_basic_convex(&fr, &c, 0.0, 0.0).unwrap();
        let e = sol.effort;
        assert!((1.0 / ((1.0 + e) * (1.0 + e)) - (0.5 + 0.25 * e)).abs() < 1e-9);
    }

    #[test]
    fn vshape_examples() {
        let g = ProductionFunction::gaussian_integral();
        let tau = vshape_threshold(&g, 0.0, 0.9, 0.5);
        assert!((tau - 2.25f64.ln().sqrt()).abs() < 1e-9);
        assert_eq!(vshape_threshold(&g, 0.0, 0.3, 0.5), f64::INFINITY);
        let tau = vshape_threshold(&plc(2.0), 0.1, 0.9, 1.0);
        assert!((tau - 0.4).abs() < 1e-9);
    }

    #[test]
    fn derivative_sign_examples() {
        let g = ProductionFunction::gaussian_integral();
        let rel = ReliabilityModel::new(0.2, 0.9).unwrap();
        assert_eq!(
            exante_derivative_sign(&g, &lin(0.5), 0.1, &rel).unwrap(),
            -1
        );
        assert_eq!(
            productivity_fd_sign(&g, &lin(0.5), 0.1, &rel, 1e-4).unwrap(),
            Some(-1)
        );
        let pl = ProductionFunction::power_law(0.5, 0.5).unwrap();
        let rel = ReliabilityModel::new(0.05, 0.5).unwrap();
        assert_eq!(
            exante_derivative_sign(&pl, &lin(0.5), 0.1, &rel).unwrap(),
            1
        );
        // second branch: threshold below gamma
        let rel = ReliabilityModel::new(1.5, 0.9).unwrap();
        assert_eq!(exante_derivative_sign(&g, &lin(0.5), 0.1, &rel).unwrap(), 1);
        assert_eq!(
            productivity_fd_sign(&g, &lin(0.5), 0.1, &rel, 1e-4).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn bad_instances() {
        let b = construct_unreliability_bad_instance(0.1).unwrap();
        assert_eq!(b.beta, 1.0);
        assert!((b.gamma - 0.95).abs() < 1e-15);
        assert!((b.ratio - 0.1).abs() < 1e-9);
        let b = construct_unreliability_bad_instance(1.0 - 1e-9).unwrap();
        assert!((b.ratio - 1.0).abs() < 1e-6);
        for eps in [0.5, 0.2, 0.05] {
            let r = construct_relaxed_bad_instance(eps).unwrap();
            assert!(r.ratio <= eps, "eps {eps}: ratio {}", r.ratio);
        }
    }

    #[test]
    fn shapes() {
        assert_eq!(
            curve_shape(&[3.0, 2.0, 1.0, 2.0, 3.0], 1e-12),
            (CurveShape::VShaped, 2)
        );
        assert_eq!(
            curve_shape(&[1.0, 2.0, 2.0], 1e-12).0,
            CurveShape::Nondecreasing
        );
        assert_eq!(curve_shape(&[1.0, 2.0, 1.0], 1e-12).0, CurveShape::Other);
        assert_eq!(
            eventual_decline_onset(&[0., 1., 2., 3.], &[1., 2., 1.5, 1.0]),
            Some(1.0)
        );
        assert_eq!(eventual_decline_onset(&[0., 1., 2.], &[1., 2., 3.]), None);
    }
}
