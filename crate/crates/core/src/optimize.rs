//! Bounded one-dimensional maximization.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
///
/// Non-finite evaluations are treated as `-∞`. The bracket endpoints are
/// included in the candidate set, so a monotone `f` returns the better end.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Maximum {
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let f_lo = eval(lo);
    let f_hi = eval(hi);
    let mut evaluations = 2;

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    evaluations += 2;

    let mut converged = false;
    for _ in 0..max_iter {
        if (hi - lo).abs() <= xtol * (1.0 + 0.5 * (lo.abs() + hi.abs())) {
            converged = true;
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
        evaluations += 1;
    }

    let mut best = Maximum {
        x: x1,
        value: f1,
        evaluations,
        converged,
    };
    for (x, v) in [(x2, f2), (a.min(b), f_lo), (a.max(b), f_hi)] {
        if v > best.value {
            best.x = x;
            best.value = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_peak() {
        let m = golden_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-12, 200);
        assert!(m.converged);
        assert!((m.x - 0.3).abs() < 1e-6);
    }

    #[test]
    fn monotone_returns_endpoint() {
        let m = golden_max(|x| x, 0.0, 1.0, 1e-10, 200);
        assert_eq!(m.x, 1.0);
        let m = golden_max(|x| -x, 0.0, 1.0, 1e-10, 200);
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn nan_is_ignored() {
        let m = golden_max(|x| if x < 0.5 { f64::NAN } else { 1.0 - x }, 0.0, 1.0, 1e-10, 200);
        assert!((m.x - 0.5).abs() < 1e-6);
    }
}
