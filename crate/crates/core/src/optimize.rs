//! One-dimensional search primitives shared by the projection solvers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
/// Returns the final bracket.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo, hi)
}

/// Golden-section search for a maximum.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    golden_min(|x| -f(x), lo, hi, width)
}

/// Ternary search for a minimum of a quasi-convex `f`.
pub fn ternary_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    for _ in 0..400 {
        if hi - lo <= width {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo, hi)
}

/// Bisection on the sign of `g`, given `g(lo) < 0 < g(hi)` or the reverse.
/// Returns the final bracket; stops at `width` or when the midpoint no
/// longer separates the endpoints.
pub fn bisect_sign<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let neg_at_lo = g(lo) < 0.0;
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return (mid, mid);
        }
        if (gm < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Whether a sampled sequence is non-increasing then non-decreasing, allowing
/// relative noise `rel` in the comparisons.
pub fn is_unimodal(values: &[f64], rel: f64) -> bool {
    let slack = |a: f64, b: f64| rel * a.abs().max(b.abs());
    let mut rising = false;
    for w in values.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a + slack(a, b) {
            rising = true;
        } else if rising && b < a - slack(a, b) {
            return false;
        }
    }
    true
}

/// Index of the smallest value; ties resolve to the lowest index.
pub fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}
