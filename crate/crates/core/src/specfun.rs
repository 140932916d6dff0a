//! Special-function kernel: log-Gamma, unit-sphere measure and a
//! sign/log-magnitude number type.
//!
//! Every constant and closed-form norm downstream is assembled as a sum of
//! logarithms and exponentiated once, since factors such as `Γ(Δq + 1)`
//! overflow `f64` long before the quantities built from them do.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::{Div, Mul};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};

/// A real number stored as `sign · exp(log_abs)`.
///
/// `sign == 0` exactly when `log_abs == -∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    sign: i8,
    log_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1,
        log_abs: 0.0,
    };

    /// Positive value with the given natural logarithm. `-∞` yields zero.
    pub fn from_log(log_abs: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { sign: 1, log_abs }
        }
    }

    pub fn from_linear(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => LogValue {
                sign: 1,
                log_abs: x.ln(),
            },
            Some(Ordering::Less) => LogValue {
                sign: -1,
                log_abs: (-x).ln(),
            },
            _ if x == 0.0 => Self::ZERO,
            _ => LogValue {
                sign: 1,
                log_abs: f64::NAN,
            },
        }
    }

    pub fn to_linear(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn log_abs(self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_finite(self) -> bool {
        self.sign == 0 || self.log_abs.is_finite()
    }

    pub fn abs(self) -> Self {
        LogValue {
            sign: self.sign.abs(),
            log_abs: self.log_abs,
        }
    }

    /// `|self|^e` with the sign dropped; callers only raise magnitudes.
    pub fn powf(self, e: f64) -> Self {
        if self.sign == 0 {
            if e == 0.0 {
                return Self::ONE;
            }
            return Self::ZERO;
        }
        LogValue::from_log(self.log_abs * e)
    }

    pub fn recip(self) -> Self {
        LogValue {
            sign: self.sign,
            log_abs: -self.log_abs,
        }
    }

    pub fn scale(self, c: f64) -> Self {
        self * LogValue::from_linear(c)
    }

    /// Log-sum-exp addition.
    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (hi, lo) = if self.log_abs >= other.log_abs {
            (self, other)
        } else {
            (other, self)
        };
        let t = (lo.log_abs - hi.log_abs).exp();
        let t = if hi.sign == lo.sign { t } else { -t };
        if t == -1.0 {
            return Self::ZERO;
        }
        LogValue {
            sign: hi.sign,
            log_abs: hi.log_abs + t.ln_1p(),
        }
    }

    /// Ordering of the represented reals.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        let key = |v: &LogValue| -> (i8, f64) {
            match v.sign {
                0 => (0, 0.0),
                1 => (1, v.log_abs),
                _ => (-1, -v.log_abs),
            }
        };
        let (sa, la) = key(self);
        let (sb, lb) = key(other);
        sa.cmp(&sb).then(la.total_cmp(&lb))
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue {
            sign: self.sign * rhs.sign,
            log_abs: self.log_abs + rhs.log_abs,
        }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        if rhs.sign == 0 {
            return LogValue {
                sign: if self.sign == 0 { 1 } else { self.sign },
                log_abs: if self.sign == 0 { f64::NAN } else { f64::INFINITY },
            };
        }
        self * rhs.recip()
    }
}

// Lanczos coefficients, g = 671/128, 14 terms.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Lanczos series below 10, asymptotic Stirling series from 10 on. Absolute
/// error is below `2e-15 · max(1, |ln Γ(x)|)` over `[1e-3, 1e6]`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "log_gamma",
            format!("x = {x} must be finite and > 0"),
        ));
    }
    Ok(log_gamma_unchecked(x))
}

static NONPOSITIVE_CALLS: AtomicU64 = AtomicU64::new(0);

/// Number of times the internal log-Gamma path was reached with `x <= 0`
/// since process start. Stays zero when every caller respects the domain.
pub fn nonpositive_gamma_calls() -> u64 {
    NONPOSITIVE_CALLS.load(AtomicOrdering::Relaxed)
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if !(x > 0.0) {
        NONPOSITIVE_CALLS.fetch_add(1, AtomicOrdering::Relaxed);
        return f64::NAN;
    }
    if x >= 10.0 {
        let inv = x.recip();
        let inv2 = inv * inv;
        let mut term = inv;
        let mut series = 0.0;
        for c in STIRLING {
            series += c * term;
            term *= inv2;
        }
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
    } else {
        let tmp = x + LANCZOS_G;
        let head = (x + 0.5) * tmp.ln() - tmp;
        let mut y = x;
        let mut ser = LANCZOS_C0;
        for c in LANCZOS {
            y += 1.0;
            ser += c / y;
        }
        head + (SQRT_2PI * ser / x).ln()
    }
}

/// `ln ω(m)` where `ω(m) = 2π^{m/2} / Γ(m/2)` is the surface measure of the
/// unit sphere in `R^m`. Real `m` is accepted for internal use.
pub(crate) fn log_sphere_measure_real(m: f64) -> f64 {
    std::f64::consts::LN_2 + 0.5 * m * PI.ln() - log_gamma_unchecked(0.5 * m)
}

pub fn log_sphere_measure(m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("sphere_measure", "dimension must be >= 1"));
    }
    Ok(log_sphere_measure_real(f64::from(m)))
}

/// Surface measure `ω(m)` of the unit sphere in `R^m`.
pub fn sphere_measure(m: u32) -> Result<f64> {
    log_sphere_measure(m).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 40 digits
    const REFERENCE: [(f64, f64); 16] = [
        (0.001, 6.907_178_885_383_853_682_5),
        (0.01, 4.599_479_878_042_021_722_5),
        (0.1, 2.252_712_651_734_205_959_9),
        (0.5, 0.572_364_942_924_700_087_07),
        (1.5, -0.120_782_237_635_245_222_35),
        (2.5, 0.284_682_870_472_919_159_63),
        (3.25, 0.935_801_931_108_725_358_26),
        (5.5, 3.957_813_967_618_716_293_9),
        (9.99, 12.779_315_214_350_192_88),
        (10.0, 12.801_827_480_081_469_611),
        (12.5, 18.734_347_511_936_445_702),
        (33.3, 82.603_723_581_654_952_928),
        (170.5, 704.004_427_734_204_670_79),
        (1000.0, 5_905.220_423_209_181_211_8),
        (123_456.7, 1_323_900.975_390_918_294_9),
        (1_000_000.0, 12_815_504.569_147_611_66),
    ];

    #[test]
    fn log_gamma_matches_reference() {
        for (x, want) in REFERENCE {
            let got = log_gamma(x).unwrap();
            let tol = 1e-13 * want.abs().max(1.0);
            assert!((got - want).abs() <= tol, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_exact_points() {
        let ln2 = std::f64::consts::LN_2;
        assert!((log_gamma(3.0).unwrap() - ln2).abs() < 1e-15);
        assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-15);
        assert!((log_gamma(7.0).unwrap() - 720f64.ln()).abs() < 1e-14);
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn log_gamma_recurrence() {
        for x in [0.5, 1.0, 2.5, 10.0, 100.0] {
            let d = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
            assert!((d - x.ln()).abs() <= 1e-12 * x.ln().abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(log_gamma(-2.5), Err(Error::Domain { .. })));
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn sphere_measure_small_dims() {
        assert!((sphere_measure(1).unwrap() - 2.0).abs() < 1e-14);
        assert!((sphere_measure(2).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_measure(3).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!(sphere_measure(0).is_err());
    }

    #[test]
    fn sphere_measure_gamma_identity() {
        for m in 1..=50u32 {
            let mf = f64::from(m);
            let lhs = log_sphere_measure(m).unwrap() + log_gamma(mf / 2.0).unwrap();
            let rhs = std::f64::consts::LN_2 + 0.5 * mf * PI.ln();
            // relative error of the product ω(m)Γ(m/2)
            assert!((lhs - rhs).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn log_value_basics() {
        let x = LogValue::from_linear(3.5);
        assert_eq!(x.to_linear(), 3.5);
        assert_eq!(LogValue::from_linear(0.0), LogValue::ZERO);
        assert_eq!(LogValue::ZERO.log_abs(), f64::NEG_INFINITY);
        let y = LogValue::from_linear(-2.0);
        assert_eq!(y.sign(), -1);
        assert!(((x * y).to_linear() + 7.0).abs() < 1e-14);
        assert!(((x / y).to_linear() + 1.75).abs() < 1e-15);
        assert!((x.add(y).to_linear() - 1.5).abs() < 1e-14);
        assert!(x.add(x.scale(-1.0)).is_zero());
        assert!((LogValue::from_linear(4.0).powf(0.5).to_linear() - 2.0).abs() < 1e-15);
        assert_eq!(LogValue::ZERO.powf(0.0), LogValue::ONE);
    }

    #[test]
    fn log_value_handles_gamma_scale() {
        // Γ(301)^{1/100} stays finite even though Γ(301) does not fit in f64
        let v = LogValue::from_log(log_gamma(301.0).unwrap()).powf(0.01);
        assert!(v.to_linear().is_finite());
        assert!((v.log_abs() - log_gamma(301.0).unwrap() / 100.0).abs() < 1e-15);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_positive(x in 1e-300f64..1e300) {
                let back = LogValue::from_linear(x).to_linear();
                prop_assert!((back - x).abs() <= 4.0 * f64::EPSILON * x * x.ln().abs().max(1.0));
            }

            #[test]
            fn sign_zero_iff_neg_inf(x in -1e10f64..1e10) {
                let v = LogValue::from_linear(x);
                prop_assert_eq!(v.sign() == 0, v.log_abs() == f64::NEG_INFINITY);
            }
        }
    }
}
