//! Sharp and upper-bound embedding constants.
//!
//! [`talenti`] is the best constant of the Sobolev inequality on `R^m`. For
//! the trace inequality on radial functions the exact constant is unknown;
//! two upper bounds are provided, one from the weighted Hardy inequality
//! ([`trace_upper_bradley`]) and one of Besov type ([`trace_upper_besov`]),
//! together with their minimum.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::Setting;
use crate::specfun::{log_gamma_unchecked as lgamma, log_sphere_measure_real as log_omega, LogValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    Talenti,
    BradleyB,
    BradleyQ,
    TraceBradley,
    TraceBesov,
    TraceMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantInputs {
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub p: f64,
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantResult {
    pub value: LogValue,
    pub kind: ConstantKind,
    pub inputs: ConstantInputs,
}

impl ConstantResult {
    pub fn linear(&self) -> f64 {
        self.value.to_linear()
    }
}

/// Talenti's sharp constant `K_m(p)` for `|f|_q ≤ K_m(p) |∇f|_p`,
/// `q = mp/(m-p)`, on `R^m`.
///
/// At `p = 1` the factor `((p-1)/(m-p))^{1-1/p}` is taken as its limit `1`.
pub fn talenti(m: u32, p: f64) -> Result<ConstantResult> {
    const OP: &str = "talenti";
    if m < 3 {
        return Err(Error::domain(OP, format!("m = {m} must be >= 3")));
    }
    let mf = f64::from(m);
    if !(p >= 1.0) {
        return Err(Error::domain(OP, format!("p = {p} must be >= 1")));
    }
    if !(p < mf) {
        return Err(Error::domain(OP, format!("p = {p} must be < m = {m} (pole)")));
    }
    let bracket = if p == 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / p) * ((p - 1.0) / (mf - p)).ln()
    };
    let gammas = lgamma(1.0 + mf / 2.0) + lgamma(mf) - lgamma(mf / p) - lgamma(1.0 + mf - mf / p);
    let log_k = -0.5 * PI.ln() - mf.ln() / p + bracket + gammas / mf;
    Ok(ConstantResult {
        value: LogValue::from_log(log_k),
        kind: ConstantKind::Talenti,
        inputs: ConstantInputs {
            m: Some(m),
            n: Some(0),
            p,
            q: Some(mf * p / (mf - p)),
        },
    })
}

fn log_bradley_q(p: f64, q: f64) -> f64 {
    p.ln() / q + (1.0 - 1.0 / p) * (p / (p - 1.0)).ln()
}

/// Upper factor `Q(p) = p^{1/q} (p/(p-1))^{(p-1)/p}` of the weighted Hardy
/// bracket `B ≤ C ≤ B·Q(p)`. Requires `1 < p ≤ q < ∞`.
pub fn bradley_q(p: f64, q: f64) -> Result<ConstantResult> {
    const OP: &str = "bradley_q";
    if !(p > 1.0) {
        return Err(Error::domain(OP, format!("p = {p} must be > 1")));
    }
    if !(q >= p) || !q.is_finite() {
        return Err(Error::domain(OP, format!("q = {q} must satisfy p <= q < inf (p = {p})")));
    }
    Ok(ConstantResult {
        value: LogValue::from_log(log_bradley_q(p, q)),
        kind: ConstantKind::BradleyQ,
        inputs: ConstantInputs {
            m: None,
            n: None,
            p,
            q: Some(q),
        },
    })
}

/// `B = m^{-1/q} ((p-1)/(N-p))^{1-1/p}` with `q = mp/(N-p)`: the
/// w-independent value of `J_1(w) J_2(w)` for the power weights
/// `u = x^{(m-1)/q}`, `v = x^{(N-1)/p}`.
pub fn bradley_b_power(m: u32, big_n: u32, p: f64) -> Result<ConstantResult> {
    const OP: &str = "bradley_b_power";
    if m < 1 || big_n < m {
        return Err(Error::domain(OP, format!("need 1 <= m <= N, got m = {m}, N = {big_n}")));
    }
    let (mf, nf) = (f64::from(m), f64::from(big_n));
    if !(p > 1.0) {
        return Err(Error::domain(OP, format!("p = {p} must be > 1")));
    }
    if !(p < nf) {
        return Err(Error::domain(OP, format!("p = {p} must be < N = {big_n}")));
    }
    let q = mf * p / (nf - p);
    let log_b = -mf.ln() / q + (1.0 - 1.0 / p) * ((p - 1.0) / (nf - p)).ln();
    Ok(ConstantResult {
        value: LogValue::from_log(log_b),
        kind: ConstantKind::BradleyB,
        inputs: ConstantInputs {
            m: Some(m),
            n: Some(big_n - m),
            p,
            q: Some(q),
        },
    })
}

fn trace_q(m: u32, n: u32, p: f64, op: &'static str) -> Result<(Setting, f64)> {
    let s = Setting::trace(m, n)?;
    let r = s.p_range();
    if !(p > r.lo && p < r.hi) {
        return Err(Error::domain(op, format!("p = {p} must lie in the trace range {r}")));
    }
    let q = s.q_of_p(p)?;
    Ok((s, q))
}

/// Hardy-type bound `K⁺_{m,n}(p) = Q(p)·B·ω(m)^{1/q}·ω(N)^{-1/p}`.
///
/// Valid for `1 < p < N` with `p ≤ q`, which for `q = mp/(N-p)` is the
/// same as `p ≥ n`.
pub fn trace_upper_bradley(m: u32, n: u32, p: f64) -> Result<ConstantResult> {
    const OP: &str = "trace_upper_bradley";
    let (s, q) = trace_q(m, n, p, OP)?;
    let b = bradley_b_power(m, s.big_n(), p)?;
    let qf = bradley_q(p, q).map_err(|e| Error::domain(OP, e.to_string()))?;
    let log_k = qf.value.log_abs() + b.value.log_abs() + log_omega(f64::from(m)) / q
        - log_omega(f64::from(s.big_n())) / p;
    Ok(ConstantResult {
        value: LogValue::from_log(log_k),
        kind: ConstantKind::TraceBradley,
        inputs: ConstantInputs {
            m: Some(m),
            n: Some(n),
            p,
            q: Some(q),
        },
    })
}

/// Besov-type bound
/// `K⁽¹⁾_{m,n}(p) = ω(N)^{1/p} ω(m)^{-1/q} [(p(m-1)+N)/(m(N-p))]^{1-(p-n)/(mp)}`.
pub fn trace_upper_besov(m: u32, n: u32, p: f64) -> Result<ConstantResult> {
    const OP: &str = "trace_upper_besov";
    let (s, q) = trace_q(m, n, p, OP)?;
    let (mf, nf, cof) = (f64::from(m), f64::from(s.big_n()), f64::from(n));
    let bracket = (p * (mf - 1.0) + nf) / (mf * (nf - p));
    let expo = 1.0 - (p - cof) / (mf * p);
    let log_k = log_omega(nf) / p - log_omega(mf) / q + expo * bracket.ln();
    Ok(ConstantResult {
        value: LogValue::from_log(log_k),
        kind: ConstantKind::TraceBesov,
        inputs: ConstantInputs {
            m: Some(m),
            n: Some(n),
            p,
            q: Some(q),
        },
    })
}

/// Smallest available trace bound. Where the Hardy bound is outside its
/// domain (`p < n` or `p = 1`) only the Besov bound is used.
pub fn trace_upper(m: u32, n: u32, p: f64) -> Result<ConstantResult> {
    let besov = trace_upper_besov(m, n, p)?;
    let best = match trace_upper_bradley(m, n, p) {
        Ok(hardy) if hardy.value.log_abs() <= besov.value.log_abs() => hardy,
        _ => besov,
    };
    Ok(ConstantResult {
        kind: ConstantKind::TraceMin,
        ..best
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    // Reference values below: mpmath at 40 digits, same formulas evaluated
    // with arbitrary-precision Γ.

    #[test]
    fn talenti_values() {
        assert!(close(talenti(3, 2.0).unwrap().linear(), 0.427_260_542_862_526_7, 1e-13));
        assert!(close(talenti(3, 1.0).unwrap().linear(), 0.206_783_496_966_466_7, 1e-13));
        // p = 1 hand reduction: π^{-1/2}·(1/3)·Γ(5/2)^{1/3}
        let hand = PI.powf(-0.5) / 3.0 * (0.75 * PI.sqrt()).powf(1.0 / 3.0);
        assert!(close(talenti(3, 1.0).unwrap().linear(), hand, 1e-14));
    }

    #[test]
    fn talenti_pole_growth() {
        // K_m(p) ~ c (m-p)^{-(1-1/m)} near p = m
        let k1 = talenti(3, 3.0 - 1e-4).unwrap().value.log_abs();
        let k2 = talenti(3, 3.0 - 1e-6).unwrap().value.log_abs();
        let slope = (k2 - k1) / (1e-4f64.ln() - 1e-6f64.ln());
        assert!((slope - 2.0 / 3.0).abs() < 1e-3, "{slope}");
        assert!(talenti(3, 3.0).is_err());
        assert!(talenti(3, 0.9).is_err());
        assert!(talenti(2, 1.5).is_err());
    }

    #[test]
    fn talenti_continuity() {
        let h = 1e-6;
        let mut p = 1.05;
        while p < 2.9 {
            let a = talenti(3, p).unwrap().linear();
            let b = talenti(3, p + h).unwrap().linear();
            assert!((a - b).abs() <= 50.0 * h, "p={p}");
            p += 0.05;
        }
    }

    #[test]
    fn bradley_q_values() {
        assert!(close(bradley_q(2.0, 6.0).unwrap().linear(), 2f64.powf(2.0 / 3.0), 1e-15));
        assert!(close(bradley_q(2.0, 2.0).unwrap().linear(), 2.0, 1e-15));
        let big = bradley_q(1e7, 1e7).unwrap().linear();
        assert!((big - 1.0).abs() < 1e-5);
        assert!(bradley_q(1.0, 2.0).is_err());
        assert!(bradley_q(3.0, 2.0).is_err());
    }

    #[test]
    fn bradley_b_values() {
        assert!(close(bradley_b_power(3, 3, 2.0).unwrap().linear(), 3f64.powf(-1.0 / 6.0), 1e-15));
        assert!(close(bradley_b_power(2, 3, 2.0).unwrap().linear(), 2f64.powf(-0.25), 1e-15));
        let want = 3f64.powf(-1.0 / 3.0) * 0.5f64.sqrt();
        assert!(close(bradley_b_power(3, 4, 2.0).unwrap().linear(), want, 1e-15));
        assert!(bradley_b_power(3, 3, 3.0).is_err());
    }

    #[test]
    fn trace_bounds_reference() {
        assert!(close(trace_upper_bradley(2, 1, 2.0).unwrap().linear(), 0.631_618_777_746_064_7, 1e-13));
        assert!(close(trace_upper_besov(2, 1, 2.0).unwrap().linear(), 4.451_588_086_068_842, 1e-13));
        let t = trace_upper(2, 1, 2.0).unwrap();
        assert_eq!(t.kind, ConstantKind::TraceMin);
        assert!(close(t.linear(), 0.631_618_777_746_064_7, 1e-13));
    }

    #[test]
    fn trace_bradley_is_composition() {
        // n = 0: K⁺ = Q(2,6)·B(3,3,2)·ω(3)^{1/6}·ω(3)^{-1/2}
        let k = trace_upper_bradley(3, 0, 2.0).unwrap().linear();
        let om3 = 4.0 * PI;
        let want = 2f64.powf(2.0 / 3.0) * 3f64.powf(-1.0 / 6.0) * om3.powf(1.0 / 6.0 - 0.5);
        assert!(close(k, want, 1e-14));
    }

    #[test]
    fn trace_bounds_domain() {
        assert!(trace_upper_bradley(2, 1, 1.0).is_err());
        assert!(trace_upper_bradley(2, 1, 3.0).is_err());
        assert!(trace_upper_besov(2, 1, 3.0).is_err());
        // p < n: Hardy bound unavailable, minimum falls back to Besov
        assert!(trace_upper_bradley(3, 2, 1.8).is_err());
        let t = trace_upper(3, 2, 1.8).unwrap();
        assert_eq!(t.value, trace_upper_besov(3, 2, 1.8).unwrap().value);
    }

    #[test]
    fn trace_bounds_diverge_at_n() {
        let a = trace_upper_bradley(2, 1, 3.0 - 1e-3).unwrap().linear();
        let b = trace_upper_bradley(2, 1, 3.0 - 1e-6).unwrap().linear();
        assert!(b > 10.0 * a);
        let a = trace_upper_besov(2, 1, 3.0 - 1e-3).unwrap().linear();
        let b = trace_upper_besov(2, 1, 3.0 - 1e-6).unwrap().linear();
        assert!(b > 10.0 * a);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn min_is_below_both(m in 1u32..6, n in 1u32..4, t in 0.01f64..0.99) {
                prop_assume!(m + n >= 3);
                let s = Setting::trace(m, n).unwrap();
                let r = s.p_range();
                let p = r.lo + t * (r.hi - r.lo);
                let min = trace_upper(m, n, p).unwrap();
                prop_assert!(min.value.sign() == 1);
                let besov = trace_upper_besov(m, n, p).unwrap();
                prop_assert!(min.value.log_abs() <= besov.value.log_abs());
                if let Ok(h) = trace_upper_bradley(m, n, p) {
                    prop_assert!(min.value.log_abs() <= h.value.log_abs());
                    prop_assert!(h.value.sign() == 1);
                }
            }

            #[test]
            fn talenti_positive(m in 3u32..60, t in 0.0f64..0.999) {
                let p = 1.0 + t * (f64::from(m) - 1.0);
                let k = talenti(m, p).unwrap();
                prop_assert_eq!(k.value.sign(), 1);
                prop_assert!(k.value.log_abs().is_finite());
            }
        }
    }
}
