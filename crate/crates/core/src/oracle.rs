//! Brute-force reference solutions.
//!
//! These routines only evaluate utilities and production values; they never
//! call the closed forms or derivative-based solvers they are used to check.

use crate::functions::{CostFunction, ProductionFunction};
use crate::optim::golden_section_max;

pub const GRID_STEP: f64 = 1e-5;
pub const GOLDEN_TOL: f64 = 1e-9;

/// Maximizer of `u` on `[0, hi]`: grid scan with step `step`, then
/// golden-section refinement around the best grid point. Ties go right.
pub fn grid_golden_argmax<U: Fn(f64) -> f64>(u: U, hi: f64, step: f64, tol: f64) -> f64 {
    let n = (hi / step).ceil() as usize;
    let mut best_x = 0.0;
    let mut best_u = f64::NEG_INFINITY;
    for i in 0..=n {
        let x = (i as f64 * step).min(hi);
        let v = u(x);
        if v >= best_u {
            best_u = v;
            best_x = x;
        }
    }
    let a = (best_x - step).max(0.0);
    let b = (best_x + step).min(hi);
    let g = golden_section_max(&u, a, b, tol);
    let g = if u(g) >= best_u { g } else { best_x };
    parabolic_polish(&u, g, hi).unwrap_or(g)
}

/// Least-squares parabola through `u` on `g +- 1e-5`.
///
/// Near a smooth maximum the utility is flat to within rounding over a
/// band of width ~1e-8, which limits golden-section search. The fitted
/// vertex is far less sensitive to rounding. Returns `None` when the window
/// leaves `[0, hi]` or the top is not smooth (kinks leave large residuals).
pub fn parabolic_polish<U: Fn(f64) -> f64>(u: &U, g: f64, hi: f64) -> Option<f64> {
    let w = 1e-5;
    if g - w < 0.0 || g + w > hi {
        return None;
    }
    let u0 = u(g);
    let m = 10;
    let (mut s2, mut s4, mut sy, mut sty, mut st2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let n = (2 * m + 1) as f64;
    let mut pts = Vec::with_capacity(2 * m + 1);
    for j in 0..=2 * m {
        let t = (j as f64 - m as f64) / m as f64;
        let y = u(g + w * t) - u0;
        pts.push((t, y));
        s2 += t * t;
        s4 += t * t * t * t;
        sy += y;
        sty += t * y;
        st2y += t * t * y;
    }
    // symmetric nodes decouple the linear term
    let b = sty / s2;
    let a = (n * st2y - s2 * sy) / (n * s4 - s2 * s2);
    let c = (sy - a * s2) / n;
    if !(a < 0.0) {
        return None;
    }
    let resid = pts
        .iter()
        .map(|&(t, y)| (y - (a * t * t + b * t + c)).abs())
        .fold(0.0f64, f64::max);
    if resid > 1e-11 * u0.abs().max(1.0) || resid > 1e-2 * a.abs() {
        return None;
    }
    let t_star = -b / (2.0 * a);
    (t_star.abs() <= 1.0).then_some(g + w * t_star)
}

/// Reference effort/productivity for the lottery `a_bar` w.p. `q`, `0`
/// otherwise (`q = 1` gives deterministic assistance). The search range is
/// `[0, x_hint + a_bar + 1]`.
pub fn oracle_effort(
    p: &ProductionFunction,
    c: &CostFunction,
    s: f64,
    a_bar: f64,
    q: f64,
    x_hint: f64,
) -> (f64, f64) {
    let u = |e: f64| q * p.value(s + e + a_bar) + (1.0 - q) * p.value(s + e) - c.value(e);
    let e = grid_golden_argmax(u, x_hint + a_bar + 1.0, GRID_STEP, GOLDEN_TOL);
    (e, q * p.value(s + e + a_bar) + (1.0 - q) * p.value(s + e))
}

/// Largest maximizer of `p(x) - gamma x` on `[0, hi]`.
pub fn oracle_critical_level(p: &ProductionFunction, gamma: f64, hi: f64) -> f64 {
    grid_golden_argmax(|x| p.value(x) - gamma * x, hi, GRID_STEP, GOLDEN_TOL)
}

/// Central difference.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_level_examples() {
        let plc = ProductionFunction::piecewise_linear_capped(2.0).unwrap();
        assert!((oracle_critical_level(&plc, 1.0, 2.0) - 0.5).abs() < 1e-8);
        let fr = ProductionFunction::fractional(1.0).unwrap();
        assert!((oracle_critical_level(&fr, 0.5, 2.0) - (2f64.sqrt() - 1.0)).abs() < 1e-6);
        let g = ProductionFunction::gaussian_integral();
        assert!((oracle_critical_level(&g, 0.5, 2.0) - 2f64.ln().sqrt()).abs() < 1e-6);
    }

    #[test]
    fn ties_resolve_right() {
        let x = grid_golden_argmax(|x: f64| if x < 0.3 { 0.0 } else { -1.0 }, 1.0, 1e-3, 1e-9);
        assert!(x > 0.29 && x < 0.3);
    }
}
