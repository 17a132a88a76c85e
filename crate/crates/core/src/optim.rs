//! Scalar root finding and maximization helpers.
//!
//! All routines follow the largest-point convention: bisection keeps the
//! right-most point where the function is still nonnegative, and ties among
//! candidate maximizers resolve to the largest argument.

/// Bisection tolerance used by the model solvers.
pub const BISECTION_TOL: f64 = 1e-10;

/// Right root of a function that is nonnegative at `lo` and negative at `hi`.
///
/// Returns the last point with `g >= 0` once the bracket is below `tol`, so
/// for weakly decreasing `g` this approximates `sup { x : g(x) >= 0 }`.
pub fn right_root<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    debug_assert!(lo <= hi);
    for _ in 0..300 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Grows `start + step * 2^k` until `g` turns negative. Returns `None` when
/// `limit` is passed first.
pub fn expand_until_negative<G: Fn(f64) -> f64>(
    g: G,
    start: f64,
    step: f64,
    limit: f64,
) -> Option<f64> {
    let mut width = step;
    loop {
        let x = start + width;
        if g(x) < 0.0 {
            return Some(x);
        }
        if x >= limit {
            return None;
        }
        width *= 2.0;
    }
}

/// Maximizes `u` on `[lo, hi]` using its derivative `du`.
///
/// Scans `du` on `scan` uniform points, refines every down-crossing by
/// bisection and compares the utility at the crossings and at both ends.
/// Near-ties (within `1e-13` relative) go to the larger argument.
pub fn maximize_by_derivative<U, D>(u: U, du: D, lo: f64, hi: f64, scan: usize) -> f64
where
    U: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if hi <= lo {
        return lo;
    }
    let n = scan.max(2);
    let h = (hi - lo) / n as f64;
    let mut candidates = vec![lo];
    let mut prev_x = lo;
    let mut prev_g = du(lo);
    for i in 1..=n {
        let x = if i == n { hi } else { lo + h * i as f64 };
        let g = du(x);
        if prev_g >= 0.0 && g < 0.0 {
            candidates.push(right_root(&du, prev_x, x, 1e-14));
        }
        prev_x = x;
        prev_g = g;
    }
    candidates.push(hi);
    pick_largest_best(&u, &candidates)
}

pub(crate) fn pick_largest_best<U: Fn(f64) -> f64>(u: &U, xs: &[f64]) -> f64 {
    let vals: Vec<f64> = xs.iter().map(|&x| u(x)).collect();
    let best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-13 * best.abs().max(1.0);
    let mut arg = xs[0];
    for (&x, &v) in xs.iter().zip(&vals) {
        if v >= best - tol && x >= arg {
            arg = x;
        }
    }
    arg
}

/// Golden-section search for a maximizer of `f` on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        // ties move right
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Uniform grid with `n >= 2` points including both ends.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + h * i as f64 })
        .collect()
}

/// Log-spaced grid from `lo > 0` to `hi`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    linspace(a, b, n).into_iter().map(f64::exp).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_root_of_linear() {
        let r = right_root(|x| 0.3 - x, 0.0, 1.0, 1e-12);
        assert!((r - 0.3).abs() < 1e-11);
    }

    #[test]
    fn right_root_takes_right_end_of_plateau() {
        let g = |x: f64| if x <= 0.7 { 0.0 } else { -1.0 };
        let r = right_root(g, 0.0, 1.0, 1e-12);
        assert!((r - 0.7).abs() < 1e-11);
    }

    #[test]
    fn golden_finds_quadratic_peak() {
        let x = golden_section_max(|x| -(x - 0.4) * (x - 0.4), 0.0, 1.0, 1e-10);
        assert!((x - 0.4).abs() < 1e-7);
    }

    #[test]
    fn derivative_maximizer_handles_two_peaks() {
        // u has local maxima at 0.2 and 0.8, the second higher
        let u = |x: f64| -(x - 0.2).powi(2) * (x - 0.8).powi(2) + 0.1 * x;
        let du = |x: f64| {
            -2.0 * (x - 0.2) * (x - 0.8).powi(2) - 2.0 * (x - 0.2).powi(2) * (x - 0.8) + 0.1
        };
        let x = maximize_by_derivative(u, du, 0.0, 1.0, 1000);
        assert!(x > 0.7);
    }

    #[test]
    fn expansion_stops_at_limit() {
        assert_eq!(expand_until_negative(|_| 1.0, 0.0, 1.0, 10.0), None);
        assert_eq!(
            expand_until_negative(|x| 3.0 - x, 0.0, 1.0, 10.0),
            Some(4.0)
        );
    }
}
