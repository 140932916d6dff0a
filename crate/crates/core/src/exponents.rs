//! Exponent algebra shared by the ordinary, trace and weighted-trace
//! inequalities.
//!
//! One [`Setting`] covers all three: `n = 0, α = 0` is the ordinary Sobolev
//! case on `R^m`, `n ≥ 1, α = 0` the trace from `R^{m+n}` onto `R^m`, and
//! `α ∈ (0, 1]` the weighted trace `|x|^{-α} u(x, 0)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Setting {
    m: u32,
    n: u32,
    alpha: f64,
}

/// Open interval `(lo, hi)`; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && lo < hi) || hi.is_nan() {
            return Err(Error::domain("interval", format!("({lo}, {hi}) is empty or not well formed")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Round-off bound for comparing [`Setting::dilation_balance`] against
/// [`Setting::q_of_p`]: a few ulps, amplified by the condition number
/// `(N/p + 1 + α)·q/m` of `N/p - 1 + α` near the pole.
pub fn balance_tolerance(s: &Setting, p: f64, q: f64) -> f64 {
    let cond = (s.nf() / p + 1.0 + s.alpha) * q / s.mf();
    4.0 * f64::EPSILON * q * (1.0 + cond)
}

impl Setting {
    pub fn new(m: u32, n: u32, alpha: f64) -> Result<Self> {
        const OP: &str = "setting";
        if m < 1 {
            return Err(Error::domain(OP, "m must be >= 1"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain(OP, format!("alpha = {alpha} must lie in [0, 1]")));
        }
        if alpha == 0.0 && m + n < 3 {
            return Err(Error::domain(OP, format!("N = m + n = {} must be >= 3", m + n)));
        }
        Ok(Setting { m, n, alpha })
    }

    pub fn ordinary(m: u32) -> Result<Self> {
        Self::new(m, 0, 0.0)
    }

    pub fn trace(m: u32, n: u32) -> Result<Self> {
        Self::new(m, n, 0.0)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Ambient dimension `N = m + n`.
    pub fn big_n(&self) -> u32 {
        self.m + self.n
    }

    fn mf(&self) -> f64 {
        f64::from(self.m)
    }

    fn nf(&self) -> f64 {
        f64::from(self.big_n())
    }

    /// Admissible gradient exponents: `(max(N/(m+1-α), 1), N/(1-α))`, with
    /// the upper end `+∞` when `α = 1`.
    pub fn p_range(&self) -> Interval {
        let lo = (self.nf() / (self.mf() + 1.0 - self.alpha)).max(1.0);
        let hi = if self.alpha == 1.0 {
            f64::INFINITY
        } else {
            self.nf() / (1.0 - self.alpha)
        };
        Interval { lo, hi }
    }

    /// `q = mp / (N - p(1-α))`.
    ///
    /// The lower end of the p-range is accepted since the map is finite
    /// there; the upper end is the pole.
    pub fn q_of_p(&self, p: f64) -> Result<f64> {
        const OP: &str = "q_of_p";
        let r = self.p_range();
        if !(p >= r.lo) {
            return Err(Error::domain(OP, format!("p = {p} below the lower bound {}", r.lo)));
        }
        if !(p < r.hi) {
            return Err(Error::domain(OP, format!("p = {p} not below the upper bound {}", r.hi)));
        }
        Ok(self.mf() * p / (self.nf() - p * (1.0 - self.alpha)))
    }

    /// `p = qN / (m + q(1-α))`, the inverse of [`Setting::q_of_p`].
    pub fn p_of_q(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0) || q.is_infinite() {
            return Err(Error::domain("p_of_q", format!("q = {q} must be finite and >= 1")));
        }
        Ok(q * self.nf() / (self.mf() + q * (1.0 - self.alpha)))
    }

    /// Exponent forced by dilation invariance: both sides of the weighted
    /// trace inequality scale alike under `f(x/λ)` iff `m/q - α = N/p - 1`.
    pub fn dilation_balance(&self, p: f64) -> Result<f64> {
        const OP: &str = "dilation_balance";
        if !(p > 0.0) {
            return Err(Error::domain(OP, format!("p = {p} must be > 0")));
        }
        let rhs = self.nf() / p - 1.0 + self.alpha;
        if !(rhs > 0.0) {
            return Err(Error::divergence(
                OP,
                format!("N/p - 1 + alpha = {rhs} <= 0, no finite q balances the scaling"),
            ));
        }
        Ok(self.mf() / rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_of_p_examples() {
        assert_eq!(Setting::ordinary(3).unwrap().q_of_p(2.0).unwrap(), 6.0);
        assert_eq!(Setting::trace(2, 1).unwrap().q_of_p(2.0).unwrap(), 4.0);
        let w = Setting::new(3, 2, 1.0).unwrap();
        assert!((w.q_of_p(2.0).unwrap() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn p_of_q_examples() {
        assert_eq!(Setting::ordinary(3).unwrap().p_of_q(6.0).unwrap(), 2.0);
        assert_eq!(Setting::trace(2, 1).unwrap().p_of_q(4.0).unwrap(), 2.0);
        assert_eq!(Setting::ordinary(3).unwrap().p_of_q(1.5).unwrap(), 1.0);
        assert!(Setting::ordinary(3).unwrap().p_of_q(0.5).is_err());
    }

    #[test]
    fn p_range_examples() {
        let r = Setting::ordinary(3).unwrap().p_range();
        assert_eq!((r.lo, r.hi), (1.0, 3.0));
        let r = Setting::trace(2, 1).unwrap().p_range();
        assert_eq!((r.lo, r.hi), (1.0, 3.0));
        let s = Setting::trace(1, 3).unwrap();
        let r = s.p_range();
        assert_eq!((r.lo, r.hi), (2.0, 4.0));
        // the lower end is exactly where q reaches 1
        assert_eq!(s.q_of_p(2.0).unwrap(), 1.0);
        let r = Setting::new(3, 2, 1.0).unwrap().p_range();
        assert_eq!(r.hi, f64::INFINITY);
    }

    #[test]
    fn out_of_range_names_bound() {
        let s = Setting::ordinary(3).unwrap();
        let e = s.q_of_p(3.0).unwrap_err().to_string();
        assert!(e.contains("upper bound 3"), "{e}");
        let e = s.q_of_p(0.5).unwrap_err().to_string();
        assert!(e.contains("lower bound 1"), "{e}");
    }

    #[test]
    fn setting_invariants() {
        assert!(Setting::ordinary(2).is_err());
        assert!(Setting::trace(1, 1).is_err());
        assert!(Setting::new(3, 0, 1.5).is_err());
        assert!(Setting::new(0, 3, 0.0).is_err());
    }

    #[test]
    fn dilation_balance_examples() {
        assert!((Setting::ordinary(3).unwrap().dilation_balance(2.0).unwrap() - 6.0).abs() < 1e-15);
        assert!((Setting::trace(2, 1).unwrap().dilation_balance(2.0).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(Setting::new(3, 0, 1.0).unwrap().dilation_balance(3.0).unwrap(), 3.0);
        assert!(Setting::ordinary(3).unwrap().dilation_balance(3.0).unwrap_err().is_divergence());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn setting() -> impl Strategy<Value = Setting> {
            (1u32..12, 0u32..6, prop_oneof![Just(0.0), 0.0f64..=1.0])
                .prop_filter_map("valid setting", |(m, n, a)| Setting::new(m, n, a).ok())
        }

        fn setting_and_p() -> impl Strategy<Value = (Setting, f64)> {
            (setting(), 0.0f64..1.0).prop_map(|(s, t)| {
                let r = s.p_range();
                let hi = if r.hi.is_finite() { r.hi } else { r.lo + 50.0 };
                let p = r.lo + (hi - r.lo) * (0.001 + 0.998 * t);
                (s, p)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn round_trip((s, p) in setting_and_p()) {
                let q = s.q_of_p(p).unwrap();
                let back = s.p_of_q(q).unwrap();
                prop_assert!((back - p).abs() <= 1e-12 * p);
            }

            #[test]
            fn balance_matches_q_of_p((s, p) in setting_and_p()) {
                let q = s.q_of_p(p).unwrap();
                let b = s.dilation_balance(p).unwrap();
                prop_assert!((q - b).abs() <= balance_tolerance(&s, p, q), "{} vs {}", q, b);
            }

            #[test]
            fn q_strictly_increasing((s, p) in setting_and_p(), dt in 1e-6f64..0.5) {
                let r = s.p_range();
                let p2 = p + dt * (if r.hi.is_finite() { r.hi - p } else { 1.0 });
                prop_assume!(p2 < r.hi && p2 > p);
                prop_assert!(s.q_of_p(p2).unwrap() > s.q_of_p(p).unwrap());
            }
        }
    }
}
