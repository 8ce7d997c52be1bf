//! Scalar root finding and minimization used throughout the solver.
//!
//! Everything here is bracket based: the residuals the solver works with are
//! monotone on known intervals, so no derivatives are needed.

/// Bracket width at which bisection stops.
pub const ROOT_XTOL: f64 = 1e-12;
pub const ROOT_MAX_ITER: usize = 200;

/// Bisection on `[lo, hi]`.
///
/// `g(lo)` and `g(hi)` must not have the same strict sign. Returns the point
/// of the final bracket with the smaller `|g|`.
pub fn bisect<G>(g: G, mut lo: f64, mut hi: f64) -> f64
where
    G: Fn(f64) -> f64,
{
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return lo;
    }
    if g_hi == 0.0 {
        return hi;
    }
    debug_assert!(
        g_lo.signum() != g_hi.signum() || g_lo.is_nan() || g_hi.is_nan(),
        "bisect: no sign change on [{lo}, {hi}] ({g_lo}, {g_hi})"
    );
    let mut best = if g_lo.abs() <= g_hi.abs() { (lo, g_lo) } else { (hi, g_hi) };
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= ROOT_XTOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid.abs() < best.1.abs() {
            best = (mid, g_mid);
        }
        if g_mid == 0.0 {
            return mid;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    best.0
}

/// Locates the boundary of a monotone predicate on `[lo, hi]`.
///
/// `pred(lo)` and `pred(hi)` must differ; returns a point within
/// [`ROOT_XTOL`] of where the predicate flips.
pub fn bisect_predicate<F>(pred: F, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> bool,
{
    let at_lo = pred(lo);
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= ROOT_XTOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimizer of `f` on `[a, b]`.
///
/// Returns `(x, f(x))`. Converges to a local minimum for unimodal `f`; the
/// caller is expected to have bracketed the region of interest.
pub fn golden_section<F>(f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
