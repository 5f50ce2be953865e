//! One-dimensional derivative-free minimization.

/// Location and value of a minimum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search on `[lo, hi]`, stopping once the bracket is
/// narrower than `tol`. Assumes `f` is unimodal on the interval.
pub fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
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
    let x = 0.5 * (a + b);
    let mut best = Minimum { x, value: f(x) };
    for (x, value) in [(lo, f(lo)), (hi, f(hi))] {
        if value < best.value {
            best = Minimum { x, value };
        }
    }
    best
}

/// Scans `samples` evenly spaced points, then refines around the best one
/// with [`golden_section`]. Robust to objectives whose minimum sits on an
/// endpoint.
pub fn scan_then_refine(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize, tol: f64) -> Minimum {
    if hi <= lo {
        return Minimum { x: lo, value: f(lo) };
    }
    let n = samples.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    let point = |i: usize| if i + 1 == n { hi } else { lo + step * i as f64 };
    let (best_i, _) = (0..n)
        .map(|i| (i, f(point(i))))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let a = point(best_i.saturating_sub(1));
    let b = point((best_i + 1).min(n - 1));
    golden_section(f, a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_interior_minimum() {
        // Near a quadratic minimum f is flat to within rounding once |x − x*|
        // drops below √ε, which bounds the attainable accuracy in x.
        let m = golden_section(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-10);
        assert_abs_diff_eq!(m.x, 0.3, epsilon = 1e-7);
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn finds_endpoint_minimum() {
        let m = scan_then_refine(|x| x, 0.0, 2.0, 200, 1e-10);
        assert_eq!(m.x, 0.0);
        let m = scan_then_refine(|x| -x, 0.0, 2.0, 200, 1e-10);
        assert_eq!(m.x, 2.0);
    }

    #[test]
    fn scan_escapes_local_minimum() {
        // Local minimum near 0.2, global near 1.6.
        let f = |x: f64| (x - 0.2).powi(2) * (x - 1.6).powi(2) - 0.1 * x;
        let m = scan_then_refine(f, 0.0, 2.0, 200, 1e-10);
        assert!(m.x > 1.5, "{m:?}");
    }

    #[test]
    fn degenerate_interval() {
        let m = scan_then_refine(|x| x * x, 0.5, 0.5, 200, 1e-10);
        assert_eq!(m, Minimum { x: 0.5, value: 0.25 });
    }
}
