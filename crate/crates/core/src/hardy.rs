//! Weighted Hardy inequality for the tail operator `x ↦ ∫_x^∞ g`:
//! `(∫ (u ∫_x^∞ g)^q)^{1/q} ≤ C (∫ (v g)^p)^{1/p}` with `B ≤ C ≤ B·Q(p)`.

use std::fmt;

use serde::Serialize;

use crate::constants::{bradley_q, ConstantInputs, ConstantKind, ConstantResult};
use crate::error::{Error, Result};
use crate::optimize::golden_max;
use crate::quad::{integrate, integrate_tail, Tolerance};
use crate::radial::ProfileFn;
use crate::specfun::LogValue;

#[derive(Clone)]
pub enum WeightKind {
    Power { a_u: f64, a_v: f64 },
    Custom { name: String, u: ProfileFn, v: ProfileFn },
}

#[derive(Clone)]
pub struct WeightPair {
    kind: WeightKind,
}

impl fmt::Debug for WeightPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::Power { a_u, a_v } => write!(f, "WeightPair::Power(x^{a_u}, x^{a_v})"),
            WeightKind::Custom { name, .. } => write!(f, "WeightPair::Custom({name})"),
        }
    }
}

const INNER_TOL: f64 = 1e-11;
const OUTER_TOL: f64 = 1e-10;
const W_GRID: usize = 121;

impl WeightPair {
    pub fn power(a_u: f64, a_v: f64) -> Self {
        WeightPair {
            kind: WeightKind::Power { a_u, a_v },
        }
    }

    /// `u = x^{(m-1)/q}`, `v = x^{(N-1)/p}`: the weights produced by a
    /// radial function on `R^N` traced onto `R^m`.
    pub fn trace_power(m: u32, big_n: u32, p: f64, q: f64) -> Self {
        Self::power((f64::from(m) - 1.0) / q, (f64::from(big_n) - 1.0) / p)
    }

    pub fn custom(name: impl Into<String>, u: ProfileFn, v: ProfileFn) -> Self {
        WeightPair {
            kind: WeightKind::Custom {
                name: name.into(),
                u,
                v,
            },
        }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    fn ln_u(&self, x: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { a_u, .. } => a_u * x.ln(),
            WeightKind::Custom { u, .. } => u(x).ln(),
        }
    }

    fn ln_v(&self, x: f64) -> f64 {
        match &self.kind {
            WeightKind::Power { a_v, .. } => a_v * x.ln(),
            WeightKind::Custom { v, .. } => v(x).ln(),
        }
    }
}

fn check_w(op: &'static str, w: f64) -> Result<()> {
    if !(w >= 0.0 && w.is_finite()) {
        return Err(Error::domain(op, format!("w = {w} must be finite and positive")));
    }
    Ok(())
}

/// `J₁(w) = (∫_0^w u^q)^{1/q}`.
pub fn j1(w: f64, weights: &WeightPair, q: f64) -> Result<LogValue> {
    const OP: &str = "j1";
    check_w(OP, w)?;
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::domain(OP, format!("q = {q} must be finite and >= 1")));
    }
    if let WeightKind::Power { a_u, .. } = weights.kind {
        let e = a_u * q + 1.0;
        if e <= 0.0 {
            return Err(Error::divergence(OP, format!("a_u*q = {} <= -1, u^q not integrable at 0", a_u * q)));
        }
        if w == 0.0 {
            return Ok(LogValue::ZERO);
        }
        return Ok(LogValue::from_log((e * w.ln() - e.ln()) / q));
    }
    if w == 0.0 {
        return Ok(LogValue::ZERO);
    }
    // x = w e^{-s}
    let lw = w.ln();
    let est = integrate_tail(
        |s| (q * weights.ln_u(w * (-s).exp()) + lw - s).exp(),
        0.0,
        1.0,
        Tolerance::relative(INNER_TOL),
    )?;
    Ok(LogValue::from_linear(est.value).powf(1.0 / q))
}

/// `J₂(w) = (∫_w^∞ v^{-p/(p-1)})^{(p-1)/p}`.
pub fn j2(w: f64, weights: &WeightPair, p: f64) -> Result<LogValue> {
    const OP: &str = "j2";
    check_w(OP, w)?;
    if w == 0.0 {
        return Err(Error::domain(OP, "w must be > 0"));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(OP, format!("p = {p} must be finite and > 1")));
    }
    let pd = p / (p - 1.0);
    if let WeightKind::Power { a_v, .. } = weights.kind {
        let k = a_v * pd;
        if k <= 1.0 {
            return Err(Error::divergence(OP, format!("v^(-p') ~ x^-{k} is not integrable at infinity")));
        }
        return Ok(LogValue::from_log(((1.0 - k) * w.ln() - (k - 1.0).ln()) / pd));
    }
    // x = w e^{s}
    let lw = w.ln();
    let est = integrate_tail(
        |s| (lw + s - pd * weights.ln_v(w * s.exp())).exp(),
        0.0,
        1.0,
        Tolerance::relative(INNER_TOL),
    )
    .map_err(|e| match e {
        Error::Divergence { msg, .. } => Error::divergence(OP, msg),
        e => e,
    })?;
    Ok(LogValue::from_linear(est.value).powf(1.0 / pd))
}

fn b_result(value: LogValue, p: f64, q: f64) -> ConstantResult {
    ConstantResult {
        value,
        kind: ConstantKind::BradleyB,
        inputs: ConstantInputs {
            m: None,
            n: None,
            p,
            q: Some(q),
        },
    }
}

/// `B = sup_{w>0} J₁(w) J₂(w)`.
pub fn bradley_b_sup(weights: &WeightPair, p: f64, q: f64) -> Result<ConstantResult> {
    const OP: &str = "bradley_b_sup";
    if !(p > 1.0) || !(p <= q) || !q.is_finite() {
        return Err(Error::domain(OP, format!("need 1 < p <= q < inf, got p = {p}, q = {q}")));
    }
    let ln_j = |lw: f64| -> Result<f64> {
        let w = lw.exp();
        Ok(j1(w, weights, q)?.log_abs() + j2(w, weights, p)?.log_abs())
    };

    if let WeightKind::Power { a_u, a_v } = weights.kind {
        let pd = p / (p - 1.0);
        let t1 = (a_u * q + 1.0) / q;
        let t2 = (1.0 - a_v * pd) / pd;
        let slope = t1 + t2;
        let j_at_one = ln_j(0.0)?;
        if slope.abs() > 1e-12 * (1.0 + t1.abs() + t2.abs()) {
            return Err(Error::divergence(
                OP,
                format!("infinite B: J(w) grows like w^{slope:.6} toward w -> {}", if slope > 0.0 { "inf" } else { "0" }),
            ));
        }
        return Ok(b_result(LogValue::from_log(j_at_one), p, q));
    }

    let (lo, hi) = (1e-6f64.ln(), 1e6f64.ln());
    let lws: Vec<f64> = (0..W_GRID).map(|i| lo + (hi - lo) * i as f64 / (W_GRID - 1) as f64).collect();
    let vals = lws.iter().map(|&lw| ln_j(lw)).collect::<Result<Vec<_>>>()?;
    let interior = vals[1..W_GRID - 1].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-8 * interior.abs().max(1.0);
    for (end, v) in [("0", vals[0]), ("inf", vals[W_GRID - 1])] {
        if v > interior + slack {
            return Err(Error::divergence(OP, format!("infinite B: J(w) grows toward w -> {end}")));
        }
    }
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    let a = lws[best.saturating_sub(1)];
    let b = lws[(best + 1).min(W_GRID - 1)];
    let m = golden_max(|lw| ln_j(lw).unwrap_or(f64::NAN), a, b, 1e-10, 200);
    Ok(b_result(LogValue::from_log(m.value.max(vals[best])), p, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyCheck {
    pub lhs: f64,
    /// `(∫ (v g)^p)^{1/p}`
    pub rhs_norm: f64,
    pub b: f64,
    pub q_factor: f64,
    pub rhs_low: f64,
    pub rhs_high: f64,
    pub pass: bool,
}

/// `∫_0^c h` for `h` possibly singular at 0, as `∫_0^∞ h(c e^{-s}) c e^{-s} ds`.
fn integral_near_zero<F: Fn(f64) -> f64>(h: F, c: f64, tol: Tolerance) -> Result<f64> {
    Ok(integrate_tail(|s| {
        let x = c * (-s).exp();
        h(x) * x
    }, 0.0, 1.0, tol)?
    .value)
}

/// `∫_c^T h`, `T` possibly infinite.
fn integral_beyond<F: Fn(f64) -> f64>(h: F, c: f64, support: f64, tol: Tolerance) -> Result<f64> {
    if support <= c {
        Ok(0.0)
    } else if support.is_finite() {
        Ok(integrate(h, c, support, tol)?.value)
    } else {
        Ok(integrate_tail(h, c, 1.0, tol)?.value)
    }
}

/// Both sides of the Hardy inequality for `g ≥ 0` vanishing beyond `support`.
pub fn hardy_check<F>(g: F, support: f64, weights: &WeightPair, p: f64, q: f64) -> Result<HardyCheck>
where
    F: Fn(f64) -> f64,
{
    const OP: &str = "hardy_check";
    if !(support > 0.0) {
        return Err(Error::domain(OP, format!("support = {support} must be positive")));
    }
    let b = bradley_b_sup(weights, p, q)?.linear();
    let q_factor = bradley_q(p, q)?.linear();
    let inner = Tolerance::relative(INNER_TOL);
    let outer = Tolerance::relative(OUTER_TOL);
    let c = support.min(1.0);

    let g_from_c = integral_beyond(&g, c, support, inner)?;
    let tail = |x: f64| -> f64 {
        let r = if x < c {
            let span = (c / x).ln();
            integrate(|s| {
                let t = c * (-s).exp();
                g(t) * t
            }, 0.0, span, inner)
            .map(|e| e.value + g_from_c)
        } else if x >= support {
            Ok(0.0)
        } else {
            integral_beyond(&g, x, support, inner)
        };
        r.unwrap_or(f64::NAN)
    };
    let lhs_integrand = |x: f64| {
        let gx = tail(x);
        if gx == 0.0 {
            0.0
        } else {
            (q * (weights.ln_u(x) + gx.ln())).exp()
        }
    };
    let lhs_q = integral_near_zero(lhs_integrand, c, outer)? + integral_beyond(lhs_integrand, c, support, outer)?;

    let rhs_integrand = |x: f64| {
        let gx = g(x);
        if gx == 0.0 {
            0.0
        } else {
            (p * (weights.ln_v(x) + gx.ln())).exp()
        }
    };
    let rhs_p = integral_near_zero(rhs_integrand, c, outer)? + integral_beyond(rhs_integrand, c, support, outer)?;

    if !(lhs_q.is_finite() && rhs_p.is_finite()) {
        return Err(Error::divergence(OP, "an integral is not finite"));
    }
    let lhs = lhs_q.max(0.0).powf(1.0 / q);
    let rhs_norm = rhs_p.max(0.0).powf(1.0 / p);
    let rhs_low = b * rhs_norm;
    let rhs_high = rhs_low * q_factor;
    Ok(HardyCheck {
        lhs,
        rhs_norm,
        b,
        q_factor,
        rhs_low,
        rhs_high,
        pass: lhs <= rhs_high * (1.0 + 1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{bradley_b_power, trace_upper_bradley};
    use crate::radial::{logpow_grad_norm_closed, logpow_norm_closed};
    use crate::specfun::sphere_measure;
    use std::sync::Arc;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn trace_weights() -> WeightPair {
        WeightPair::trace_power(3, 3, 2.0, 6.0)
    }

    #[test]
    fn j1_examples() {
        assert!(rel(j1(1.0, &trace_weights(), 6.0).unwrap().to_linear(), 3f64.powf(-1.0 / 6.0)) < 1e-14);
        assert!(j1(0.0, &trace_weights(), 6.0).unwrap().is_zero());
        assert!(rel(j1(4.0, &WeightPair::power(0.0, 1.0), 2.0).unwrap().to_linear(), 2.0) < 1e-14);
        assert!(j1(1.0, &WeightPair::power(-0.5, 1.0), 2.0).unwrap_err().is_divergence());
    }

    #[test]
    fn j2_examples() {
        assert!(rel(j2(1.0, &trace_weights(), 2.0).unwrap().to_linear(), 1.0) < 1e-14);
        assert!(rel(j2(4.0, &trace_weights(), 2.0).unwrap().to_linear(), 0.5) < 1e-14);
        assert!(j2(1.0, &WeightPair::power(0.0, 0.0), 2.0).unwrap_err().is_divergence());
        let one: ProfileFn = Arc::new(|_| 1.0);
        let w = WeightPair::custom("flat", one.clone(), one);
        assert!(j2(1.0, &w, 2.0).unwrap_err().is_divergence());
    }

    fn custom_trace(m: u32, big_n: u32, p: f64, q: f64) -> WeightPair {
        let (a_u, a_v) = ((f64::from(m) - 1.0) / q, (f64::from(big_n) - 1.0) / p);
        WeightPair::custom("trace", Arc::new(move |x: f64| x.powf(a_u)), Arc::new(move |x: f64| x.powf(a_v)))
    }

    #[test]
    fn custom_matches_power_j() {
        let c = custom_trace(3, 3, 2.0, 6.0);
        for w in [0.01, 1.0, 30.0] {
            let a = j1(w, &c, 6.0).unwrap().to_linear();
            let b = j1(w, &trace_weights(), 6.0).unwrap().to_linear();
            assert!(rel(a, b) < 1e-9, "{w}: {a} {b}");
            let a = j2(w, &c, 2.0).unwrap().to_linear();
            let b = j2(w, &trace_weights(), 2.0).unwrap().to_linear();
            assert!(rel(a, b) < 1e-9, "{w}: {a} {b}");
        }
    }

    #[test]
    fn b_sup_examples() {
        let b = bradley_b_sup(&trace_weights(), 2.0, 6.0).unwrap().linear();
        assert!(rel(b, 3f64.powf(-1.0 / 6.0)) < 1e-14);
        let e = bradley_b_sup(&WeightPair::trace_power(3, 3, 2.0, 5.0), 2.0, 5.0).unwrap_err();
        assert!(e.is_divergence() && e.to_string().contains("infinite B"), "{e}");
        assert!(bradley_b_sup(&trace_weights(), 3.0, 2.0).is_err());

        let c = bradley_b_sup(&custom_trace(3, 3, 2.0, 6.0), 2.0, 6.0).unwrap().linear();
        assert!(rel(c, b) < 1e-6);
        let e = bradley_b_sup(&custom_trace(3, 3, 2.0, 5.0), 2.0, 5.0).unwrap_err();
        assert!(e.to_string().contains("infinite B"), "{e}");
    }

    #[test]
    fn b_sup_matches_bradley_b_power() {
        for (m, big_n, p) in [(2u32, 3u32, 2.0), (3, 4, 2.5), (3, 5, 3.0)] {
            let q = f64::from(m) * p / (f64::from(big_n) - p);
            let a = bradley_b_sup(&WeightPair::trace_power(m, big_n, p, q), p, q).unwrap().linear();
            let b = bradley_b_power(m, big_n, p).unwrap().linear();
            assert!(rel(a, b) < 1e-12);
        }
    }

    #[test]
    fn indicator_passes() {
        let r = hardy_check(|_| 1.0, 1.0, &trace_weights(), 2.0, 6.0).unwrap();
        // lhs^6 = ∫_0^1 x^2 (1-x)^6 dx = 2!6!/9!
        let exact = (2.0 * 720.0 / 362_880.0f64).powf(1.0 / 6.0);
        assert!(rel(r.lhs, exact) < 1e-8, "{} vs {exact}", r.lhs);
        assert!(rel(r.rhs_norm, (1.0f64 / 3.0).sqrt()) < 1e-8);
        assert!(r.pass && r.rhs_low <= r.rhs_high);
    }

    #[test]
    fn zero_g_passes() {
        let r = hardy_check(|_| 0.0, 1.0, &trace_weights(), 2.0, 6.0).unwrap();
        assert_eq!((r.lhs, r.rhs_high), (0.0, 0.0));
        assert!(r.pass);
    }

    #[test]
    fn logpow_derivative_reproduces_closed_forms() {
        let delta = 2.0;
        let g = move |t: f64| delta * (-t.ln()).powf(delta - 1.0) / t;
        let r = hardy_check(g, 1.0, &trace_weights(), 2.0, 6.0).unwrap();
        assert!(r.pass);
        let om = sphere_measure(3).unwrap();
        let lhs = logpow_norm_closed(3, delta, 6.0).unwrap().linear() / om.powf(1.0 / 6.0);
        let rhs = logpow_grad_norm_closed(3, delta, 2.0).unwrap().linear() / om.sqrt();
        assert!(rel(r.lhs, lhs) < 1e-8, "{} vs {lhs}", r.lhs);
        assert!(rel(r.rhs_norm, rhs) < 1e-8, "{} vs {rhs}", r.rhs_norm);
    }

    #[test]
    fn trace_specialization_against_k_plus() {
        // m = 2, n = 1: lhs·ω(m)^{1/q} = |S f|_q and rhs_norm·ω(N)^{1/p} = |∇f|_p
        let (m, n, p, delta) = (2u32, 1u32, 2.0, 2.0);
        let q = 4.0;
        let g = move |t: f64| delta * (-t.ln()).powf(delta - 1.0) / t;
        let r = hardy_check(g, 1.0, &WeightPair::trace_power(m, m + n, p, q), p, q).unwrap();
        let sf = r.lhs * sphere_measure(m).unwrap().powf(1.0 / q);
        let grad = r.rhs_norm * sphere_measure(m + n).unwrap().powf(1.0 / p);
        assert!(rel(sf, logpow_norm_closed(m, delta, q).unwrap().linear()) < 1e-8);
        assert!(rel(grad, logpow_grad_norm_closed(m + n, delta, p).unwrap().linear()) < 1e-8);
        let kp = trace_upper_bradley(m, n, p).unwrap().linear();
        assert!(sf <= kp * grad * (1.0 + 1e-9));
    }

    #[test]
    fn balance_makes_j_constant() {
        let w = trace_weights();
        let js: Vec<f64> = (0..100)
            .map(|i| {
                let lw = -12.0 + 24.0 * i as f64 / 99.0;
                let x = lw.exp();
                (j1(x, &w, 6.0).unwrap() * j2(x, &w, 2.0).unwrap()).to_linear()
            })
            .collect();
        let mean = js.iter().sum::<f64>() / 100.0;
        let var = js.iter().map(|j| (j - mean).powi(2)).sum::<f64>() / 100.0;
        assert!(var / (mean * mean) <= 1e-10);
    }
}
