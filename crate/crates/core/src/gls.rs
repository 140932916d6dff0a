//! Grand Lebesgue space norms `||f||_{G(ψ)} = sup_{p∈(A,B)} |f|_p / ψ(p)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::constants::{talenti, trace_upper};
use crate::error::{Error, Result};
use crate::exponents::{Interval, Setting};
use crate::optimize::golden_max;
use crate::radial::RadialProfile;
use crate::specfun::LogValue;

/// Relative margin kept away from each end of the p-interval.
pub const ENDPOINT_MARGIN: f64 = 1e-6;
/// Number of points in the coarse scan.
pub const GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Function,
    Gradient,
}

pub type BoundFn = Arc<dyn Fn(f64) -> Result<LogValue> + Send + Sync>;

/// The constant multiplying ψ in a transformed generating function.
#[derive(Clone)]
pub enum BoundCurve {
    Talenti { m: u32 },
    TraceUpper { m: u32, n: u32 },
    Constant(f64),
    Custom { name: String, f: BoundFn },
}

impl fmt::Debug for BoundCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl BoundCurve {
    pub fn eval(&self, p: f64) -> Result<LogValue> {
        match self {
            BoundCurve::Talenti { m } => Ok(talenti(*m, p)?.value),
            BoundCurve::TraceUpper { m, n } => Ok(trace_upper(*m, *n, p)?.value),
            BoundCurve::Constant(c) => Ok(LogValue::from_linear(*c)),
            BoundCurve::Custom { f, .. } => f(p),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BoundCurve::Talenti { m } => format!("talenti(m={m})"),
            BoundCurve::TraceUpper { m, n } => format!("trace_upper(m={m},n={n})"),
            BoundCurve::Constant(c) => format!("constant({c})"),
            BoundCurve::Custom { name, .. } => name.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Nu,
    Zeta,
    Theta,
}

#[derive(Debug, Clone)]
pub enum PsiKind {
    /// `(B-p)^{-β}` (upper), `(p-A)^{-β}` (lower), or `p^β` for an upper end at infinity.
    PowerBlowup { beta: f64, endpoint: Endpoint },
    Natural { profile: RadialProfile, norm: NormKind },
    /// Log-linear interpolation through `(p_i, ψ_i)`.
    Tabulated { ps: Vec<f64>, values: Vec<f64> },
    Constant(f64),
    /// `q ↦ bound(p(q))·ψ(p(q))` with `p(q) = qN/(m + q(1-α))`.
    Transformed {
        kind: TransformKind,
        inner: Arc<PsiFunction>,
        setting: Setting,
        bound: BoundCurve,
    },
}

/// A positive generating function on an open interval.
#[derive(Debug, Clone)]
pub struct PsiFunction {
    interval: Interval,
    kind: PsiKind,
}

impl PsiFunction {
    pub fn power_blowup(interval: Interval, beta: f64, endpoint: Endpoint) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain("power_blowup", format!("beta = {beta} must be positive")));
        }
        if interval.lo < 1.0 {
            return Err(Error::domain("power_blowup", format!("interval {interval} must lie in [1, inf)")));
        }
        Ok(PsiFunction {
            interval,
            kind: PsiKind::PowerBlowup { beta, endpoint },
        })
    }

    pub fn constant(interval: Interval, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain("constant_psi", format!("value {c} must be positive and finite")));
        }
        Ok(PsiFunction {
            interval,
            kind: PsiKind::Constant(c),
        })
    }

    /// Interval is `(ps[0], ps[last])`; values must be positive.
    pub fn tabulated(ps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        const OP: &str = "tabulated_psi";
        if ps.len() < 2 || ps.len() != values.len() {
            return Err(Error::domain(OP, "need at least two (p, value) pairs of equal length"));
        }
        if ps.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain(OP, "p grid must be strictly increasing"));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::domain(OP, format!("value {v} must be positive and finite")));
        }
        let interval = Interval::new(ps[0], ps[ps.len() - 1])?;
        Ok(PsiFunction {
            interval,
            kind: PsiKind::Tabulated { ps, values },
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            PsiKind::PowerBlowup { beta, endpoint } => {
                format!("power_blowup(beta={beta},{endpoint:?}) on {}", self.interval)
            }
            PsiKind::Natural { profile, norm } => {
                format!("natural({},{norm:?}) on {}", profile.family_tag(), self.interval)
            }
            PsiKind::Tabulated { ps, .. } => format!("tabulated({} points) on {}", ps.len(), self.interval),
            PsiKind::Constant(c) => format!("constant({c}) on {}", self.interval),
            PsiKind::Transformed { kind, inner, bound, .. } => {
                format!("{kind:?}[{}; {}]", inner.describe(), bound.describe())
            }
        }
    }

    pub fn eval(&self, p: f64) -> Result<LogValue> {
        if !self.interval.contains(p) {
            return Err(Error::domain("psi", format!("p = {p} outside {}", self.interval)));
        }
        let Interval { lo, hi } = self.interval;
        match &self.kind {
            PsiKind::PowerBlowup { beta, endpoint } => {
                let log = match endpoint {
                    Endpoint::Upper if hi.is_infinite() => beta * p.ln(),
                    Endpoint::Upper => -beta * (hi - p).ln(),
                    Endpoint::Lower => -beta * (p - lo).ln(),
                };
                Ok(LogValue::from_log(log))
            }
            PsiKind::Constant(c) => Ok(LogValue::from_linear(*c)),
            PsiKind::Tabulated { ps, values } => {
                let i = ps.partition_point(|x| *x <= p).clamp(1, ps.len() - 1);
                let t = (p - ps[i - 1]) / (ps[i] - ps[i - 1]);
                let log = (1.0 - t) * values[i - 1].ln() + t * values[i].ln();
                Ok(LogValue::from_log(log))
            }
            PsiKind::Natural { profile, norm } => {
                let r = match norm {
                    NormKind::Function => profile.lp_norm(p)?,
                    NormKind::Gradient => profile.grad_norm(p)?,
                };
                if r.value.is_zero() || !r.value.is_finite() {
                    return Err(Error::domain("natural_psi", format!("norm at p = {p} is not positive and finite")));
                }
                Ok(r.value)
            }
            PsiKind::Transformed { inner, setting, bound, .. } => {
                let pp = transform_p(setting, p);
                if !inner.interval.contains(pp) {
                    return Err(Error::domain(
                        "psi_transform",
                        format!("q = {p} maps to p = {pp} outside {}", inner.interval),
                    ));
                }
                Ok(bound.eval(pp)? * inner.eval(pp)?)
            }
        }
    }
}

fn transform_p(s: &Setting, q: f64) -> f64 {
    let m = f64::from(s.m());
    let n = f64::from(s.big_n());
    q * n / (m + q * (1.0 - s.alpha()))
}

fn transform_q(s: &Setting, p: f64) -> f64 {
    let m = f64::from(s.m());
    let n = f64::from(s.big_n());
    let den = n - p * (1.0 - s.alpha());
    if den <= 0.0 {
        f64::INFINITY
    } else {
        m * p / den
    }
}

/// `ψ_f(p) = |f|_p` or `|∇f|_p` on `interval`.
pub fn natural_psi(f: &RadialProfile, norm: NormKind, interval: Interval) -> Result<PsiFunction> {
    let psi = PsiFunction {
        interval,
        kind: PsiKind::Natural {
            profile: f.clone(),
            norm,
        },
    };
    for x in grid_positions(16) {
        let p = to_p(interval, x);
        if let Err(e) = psi.eval(p) {
            return Err(Error::domain("natural_psi", format!("norm not finite at p = {p}: {e}")));
        }
    }
    Ok(psi)
}

fn transform(kind: TransformKind, psi: &PsiFunction, setting: Setting, bound: BoundCurve) -> Result<PsiFunction> {
    let range = setting.p_range();
    let Interval { lo, hi } = psi.interval;
    if lo < 1.0 || hi > range.hi {
        return Err(Error::domain(
            "psi_transform",
            format!("psi interval {} must lie within [1, {}]", psi.interval, range.hi),
        ));
    }
    let q_lo = transform_q(&setting, lo.max(range.lo));
    let q_hi = transform_q(&setting, hi);
    Ok(PsiFunction {
        interval: Interval::new(q_lo, q_hi)?,
        kind: PsiKind::Transformed {
            kind,
            inner: Arc::new(psi.clone()),
            setting,
            bound,
        },
    })
}

/// `ν_ψ(q) = K_m(p)ψ(p)`, `p = mq/(m+q)`.
pub fn nu_transform(psi: &PsiFunction, m: u32) -> Result<PsiFunction> {
    transform(TransformKind::Nu, psi, Setting::ordinary(m)?, BoundCurve::Talenti { m })
}

/// `ζ_ψ(q) = K(p)ψ(p)`, `p = qN/(m+q)`, with the computable trace bound.
pub fn zeta_transform(psi: &PsiFunction, m: u32, n: u32) -> Result<PsiFunction> {
    if n < 1 {
        return Err(Error::domain("zeta_transform", "n must be >= 1"));
    }
    transform(TransformKind::Zeta, psi, Setting::trace(m, n)?, BoundCurve::TraceUpper { m, n })
}

/// `θ_ψ(q) = ψ(p)·bound(p)`, `p = qN/(m+q(1-α))`. There is no default bound.
pub fn theta_transform(psi: &PsiFunction, setting: Setting, bound: Option<BoundCurve>) -> Result<PsiFunction> {
    let bound = bound.ok_or_else(|| {
        Error::Unsupported(format!(
            "theta transform for (m={}, n={}, alpha={}) needs an explicit bound curve",
            setting.m(),
            setting.n(),
            setting.alpha()
        ))
    })?;
    transform(TransformKind::Theta, psi, setting, bound)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlsNormResult {
    pub value: LogValue,
    pub argmax_p: f64,
    /// Set when the sup is attained at an endpoint margin.
    pub at_endpoint: Option<Endpoint>,
    pub evaluations: usize,
    pub converged: bool,
}

fn grid_positions(k: usize) -> impl Iterator<Item = f64> {
    let span = 1.0 - 2.0 * ENDPOINT_MARGIN;
    (0..k).map(move |i| ENDPOINT_MARGIN + span * i as f64 / (k - 1) as f64)
}

/// Map `x ∈ (0,1)` onto the interval; infinite upper ends use `A + x/(1-x)`.
fn to_p(iv: Interval, x: f64) -> f64 {
    if iv.hi.is_finite() {
        iv.lo + x * (iv.hi - iv.lo)
    } else {
        iv.lo + x / (1.0 - x)
    }
}

/// Supremum of `f_norm(p)/ψ(p)` over the interval of `psi`.
pub fn gls_norm<F>(f_norm: F, psi: &PsiFunction) -> Result<GlsNormResult>
where
    F: Fn(f64) -> Result<LogValue>,
{
    let iv = psi.interval;
    let mut evaluations = 0usize;
    let mut log_ratio = |x: f64| -> Result<f64> {
        evaluations += 1;
        let p = to_p(iv, x);
        let f = f_norm(p)?;
        let s = psi.eval(p)?;
        Ok(f.log_abs() - s.log_abs())
    };

    let xs: Vec<f64> = grid_positions(GRID_POINTS).collect();
    let mut vals = Vec::with_capacity(xs.len());
    let mut divergent = Vec::new();
    for &x in &xs {
        match log_ratio(x) {
            Ok(v) => vals.push(v),
            Err(e) if e.is_divergence() => {
                divergent.push(to_p(iv, x));
                vals.push(f64::NAN);
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(p) = divergent.first() {
        return Err(Error::divergence(
            "gls_norm",
            format!("f_norm diverges at {} of {} grid points, first at p = {p}", divergent.len(), xs.len()),
        ));
    }

    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    if vals[best] == f64::NEG_INFINITY {
        return Ok(GlsNormResult {
            value: LogValue::ZERO,
            argmax_p: to_p(iv, xs[0]),
            at_endpoint: None,
            evaluations,
            converged: true,
        });
    }

    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(xs.len() - 1)];
    let refined = golden_max(|x| log_ratio(x).unwrap_or(f64::NAN), a, b, 1e-12, 200);
    let (mut x_best, mut v_best) = (xs[best], vals[best]);
    if refined.value > v_best {
        x_best = refined.x;
        v_best = refined.value;
    }

    let at_endpoint = if x_best <= xs[0] {
        Some(Endpoint::Lower)
    } else if x_best >= xs[xs.len() - 1] {
        Some(Endpoint::Upper)
    } else {
        None
    };
    if let Some(end) = at_endpoint {
        let probes: Vec<f64> = (1..=3)
            .map(|k| {
                let d = ENDPOINT_MARGIN * 10f64.powi(-k);
                if end == Endpoint::Lower {
                    d
                } else {
                    1.0 - d
                }
            })
            .collect();
        let mut seq = vec![v_best];
        for x in probes {
            match log_ratio(x) {
                Ok(v) if v.is_finite() => seq.push(v),
                _ => break,
            }
        }
        if seq.len() == 4 {
            let d: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
            let floor = 1e-6 * v_best.abs().max(1.0);
            if d.iter().all(|x| *x > floor) && d[2] >= 0.5 * d[0] {
                return Err(Error::InfiniteNorm(format!(
                    "ratio keeps growing toward the {} end of {} (log increments {:.3e}, {:.3e}, {:.3e})",
                    if end == Endpoint::Lower { "lower" } else { "upper" },
                    iv,
                    d[0],
                    d[1],
                    d[2]
                )));
            }
        }
    }

    Ok(GlsNormResult {
        value: LogValue::from_log(v_best),
        argmax_p: to_p(iv, x_best),
        at_endpoint,
        evaluations,
        converged: refined.converged,
    })
}
