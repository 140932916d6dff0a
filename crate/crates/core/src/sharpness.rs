//! Inequality ratios for the log-power extremal family, their limits, and
//! grid sweeps.
//!
//! Every ratio has the form `lhs / (constant · |∇f|_p)`; a ratio above
//! `1 + 1e-9` would contradict the inequality the constant belongs to.

use rayon::prelude::*;

use crate::config::{FamilySpec, PsiSpec, SweepConfig, Target};
use crate::constants::bradley_q;
use crate::error::{Error, Result};
use crate::exponents::{Interval, Setting};
use crate::gls::{gls_norm, natural_psi, nu_transform, BoundCurve, PsiFunction};
use crate::hardy::{bradley_b_sup, hardy_check, WeightPair};
use crate::radial::{
    grad_lp_norm, logpow_grad_norm_closed, weighted_lp_norm_quad, weighted_trace_norm_closed, Family, RadialProfile,
};
use crate::specfun::{log_gamma_unchecked as lgamma, log_sphere_measure_real as log_omega, LogValue};

/// Slack allowed on `ratio ≤ 1`.
pub const PASS_SLACK: f64 = 1e-9;
/// Closed-form and quadrature values must agree to this relative error.
pub const CROSS_CHECK_TOL: f64 = 1e-6;
/// Richardson estimates must land this close to the closed-form limit.
pub const LIMIT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Cell,
    Convergence,
}

impl RowKind {
    pub fn name(self) -> &'static str {
        match self {
            RowKind::Cell => "cell",
            RowKind::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    fn of_ratio(r: f64) -> Self {
        if r.is_nan() {
            Verdict::Indeterminate
        } else if r <= 1.0 + PASS_SLACK {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub kind: RowKind,
    pub setting: Setting,
    pub family: String,
    pub delta: Option<f64>,
    pub p: f64,
    pub q: f64,
    pub lhs: Option<LogValue>,
    pub bound_constant: Option<LogValue>,
    pub rhs: Option<LogValue>,
    pub ratio: f64,
    pub pass: Verdict,
    pub notes: String,
}

fn family_name(f: &RadialProfile) -> String {
    f.family_tag().to_string()
}

fn delta_of(f: &RadialProfile) -> Option<f64> {
    match f.family() {
        Family::LogPow { delta } => Some(*delta),
        _ => None,
    }
}

impl SweepRecord {
    /// `rhs = constant · grad`, `ratio = lhs / rhs`.
    #[allow(clippy::too_many_arguments)]
    fn cell(
        setting: Setting,
        family: String,
        delta: Option<f64>,
        p: f64,
        q: f64,
        lhs: LogValue,
        constant: LogValue,
        grad: LogValue,
    ) -> Self {
        let rhs = constant * grad;
        let (ratio, notes) = if lhs.is_zero() && rhs.is_zero() {
            (0.0, "both sides vanish".to_string())
        } else {
            ((lhs / rhs).to_linear(), String::new())
        };
        SweepRecord {
            kind: RowKind::Cell,
            setting,
            family,
            delta,
            p,
            q,
            lhs: Some(lhs),
            bound_constant: Some(constant),
            rhs: Some(rhs),
            ratio,
            pass: Verdict::of_ratio(ratio),
            notes,
        }
    }

    fn failed(setting: Setting, family: String, delta: Option<f64>, p: f64, err: &Error) -> Self {
        SweepRecord {
            kind: RowKind::Cell,
            setting,
            family,
            delta,
            p,
            q: setting.q_of_p(p).unwrap_or(f64::NAN),
            lhs: None,
            bound_constant: None,
            rhs: None,
            ratio: f64::NAN,
            pass: Verdict::Indeterminate,
            notes: err.to_string(),
        }
    }

    fn note(mut self, text: impl AsRef<str>) -> Self {
        let text = text.as_ref();
        if !text.is_empty() {
            if !self.notes.is_empty() {
                self.notes.push_str("; ");
            }
            self.notes.push_str(text);
        }
        self
    }
}

fn check_p(setting: &Setting, p: f64, op: &'static str) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain(op, format!("p = {p} must be > 1")));
    }
    let r = setting.p_range();
    if !(p > r.lo && p < r.hi) {
        return Err(Error::domain(op, format!("p = {p} must lie in {r}")));
    }
    setting.q_of_p(p)
}

/// Closed-form cell for `f_Δ`: `| |x|^{-α} f_Δ |_{q,R^m} / (bound(p) · |∇f_Δ|_{p,R^N})`.
pub fn logpow_record(setting: Setting, delta: f64, p: f64, bound: &BoundCurve) -> Result<SweepRecord> {
    let q = check_p(&setting, p, "logpow_record")?;
    let lhs = weighted_trace_norm_closed(setting.m(), delta, q, setting.alpha())?.value;
    let grad = logpow_grad_norm_closed(setting.big_n(), delta, p)?.value;
    let k = bound.eval(p)?;
    Ok(SweepRecord::cell(setting, "logpow".into(), Some(delta), p, q, lhs, k, grad))
}

/// `|f_Δ|_q / (K_m(p) |∇f_Δ|_p)` on `R^m`, `q = mp/(m-p)`.
pub fn ratio_ordinary(m: u32, delta: f64, p: f64) -> Result<f64> {
    Ok(logpow_record(Setting::ordinary(m)?, delta, p, &BoundCurve::Talenti { m })?.ratio)
}

/// `|S f_Δ|_q / (K(p) |∇f_Δ|_p)` with the smaller of the two trace bounds.
pub fn ratio_trace(m: u32, n: u32, delta: f64, p: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("ratio_trace", "n must be >= 1"));
    }
    Ok(logpow_record(Setting::trace(m, n)?, delta, p, &BoundCurve::TraceUpper { m, n })?.ratio)
}

/// Weighted trace ratio against a caller-supplied bound curve.
pub fn ratio_weighted(setting: Setting, delta: f64, p: f64, bound: &BoundCurve) -> Result<f64> {
    Ok(logpow_record(setting, delta, p, bound)?.ratio)
}

/// `lim_{p→m⁻}` of [`ratio_ordinary`]:
/// `Δ^{Δ-1} e^{-Δ} m^Δ / [(m-1)^{1-1/m} Γ((Δ-1)m+1)^{1/m}]`.
pub fn ratio_limit_ordinary(m: u32, delta: f64) -> Result<f64> {
    const OP: &str = "ratio_limit_ordinary";
    if m < 3 {
        return Err(Error::domain(OP, format!("m = {m} must be >= 3")));
    }
    if !(delta >= 1.0 && delta.is_finite()) {
        return Err(Error::domain(OP, format!("delta = {delta} must be finite and >= 1")));
    }
    let mf = f64::from(m);
    let log = (delta - 1.0) * delta.ln() - delta + delta * mf.ln()
        - (1.0 - 1.0 / mf) * (mf - 1.0).ln()
        - lgamma((delta - 1.0) * mf + 1.0) / mf;
    Ok(log.exp())
}

/// `e^{-1} (Δ/(Δ-1))^{Δ-1}`, the `m → ∞` limit of [`ratio_limit_ordinary`].
pub fn v000(delta: f64) -> Result<f64> {
    if !(delta > 1.0) {
        return Err(Error::domain("v000", format!("delta = {delta} must be > 1")));
    }
    let k = delta - 1.0;
    Ok((k * (1.0 / k).ln_1p() - 1.0).exp())
}

/// First-order Richardson step for samples at `h` and `h/ratio`.
pub fn richardson(coarse: f64, fine: f64, ratio: f64) -> f64 {
    fine + (fine - coarse) / (ratio - 1.0)
}

/// Quadrature cell for any profile `f` on `R^N`. For the log-power family
/// the closed forms are computed as well and must agree.
pub fn verify_general(f: &RadialProfile, setting: Setting, p: f64, bound: &BoundCurve) -> SweepRecord {
    let run = || -> Result<SweepRecord> {
        if f.dim() != setting.big_n() {
            return Err(Error::domain(
                "verify",
                format!("profile lives on R^{}, setting needs R^{}", f.dim(), setting.big_n()),
            ));
        }
        let q = check_p(&setting, p, "verify")?;
        let trace = f.trace_restrict(setting.m())?;
        let lhs = weighted_lp_norm_quad(&trace, q, setting.alpha())?.value;
        let grad = grad_lp_norm(f, p)?.value;
        let k = bound.eval(p)?;
        let mut rec = SweepRecord::cell(setting, family_name(f), delta_of(f), p, q, lhs, k, grad);
        if let Family::LogPow { delta } = f.family() {
            let scale = LogValue::from_log((f64::from(setting.m()) / q - setting.alpha()) * f.scale().ln())
                * LogValue::from_linear(f.amplitude().abs());
            let closed_lhs = weighted_trace_norm_closed(setting.m(), *delta, q, setting.alpha())?.value * scale;
            let closed_grad = f.closed_grad_norm(p).expect("log-power has a closed gradient norm")?.value;
            let err = rel_gap(lhs, closed_lhs).max(rel_gap(grad, closed_grad));
            if err > CROSS_CHECK_TOL {
                rec.pass = Verdict::Indeterminate;
                return Ok(rec.note(format!("closed form and quadrature disagree by {err:.1e}")));
            }
            rec = rec.note(format!("closed form agrees to {err:.1e}"));
        }
        Ok(rec)
    };
    run().unwrap_or_else(|e| SweepRecord::failed(setting, family_name(f), delta_of(f), p, &e))
}

fn rel_gap(a: LogValue, b: LogValue) -> f64 {
    if a.is_zero() && b.is_zero() {
        0.0
    } else {
        (a.log_abs() - b.log_abs()).exp_m1().abs()
    }
}

/// `|f|_q ≤ K_m(p) |∇f|_p` for a profile on `R^m`, both sides by quadrature.
pub fn verify_sobolev(f: &RadialProfile, m: u32, p: f64) -> SweepRecord {
    match Setting::ordinary(m) {
        Ok(s) => verify_general(f, s, p, &BoundCurve::Talenti { m }),
        Err(e) => SweepRecord::failed(Setting::new(m.max(3), 0, 0.0).unwrap(), family_name(f), delta_of(f), p, &e),
    }
}

/// `|S f|_q ≤ K(p) |∇f|_p` for a profile on `R^{m+n}`, by quadrature.
pub fn verify_trace(f: &RadialProfile, m: u32, n: u32, p: f64) -> Result<SweepRecord> {
    if n < 1 {
        return Err(Error::domain("verify_trace", "n must be >= 1"));
    }
    Ok(verify_general(f, Setting::trace(m, n)?, p, &BoundCurve::TraceUpper { m, n }))
}

/// Theorem 1 at the GLS level for `f_Δ` on `R^m`.
pub fn verify_gls_theorem1(m: u32, delta: f64, psi: &PsiFunction) -> Result<SweepRecord> {
    Ok(verify_gls_theorem1_profile(&RadialProfile::logpow(m, delta)?, psi))
}

/// `||f||_{G(ν_ψ)} ≤ ||∇f||_{G(ψ)}` for any profile on `R^m`.
pub fn verify_gls_theorem1_profile(f: &RadialProfile, psi: &PsiFunction) -> SweepRecord {
    let m = f.dim();
    let setting = Setting::ordinary(m).unwrap_or_else(|_| Setting::new(3, 0, 0.0).unwrap());
    let run = || -> Result<SweepRecord> {
        Setting::ordinary(m)?;
        let nu = nu_transform(psi, m)?;
        let lhs = gls_norm(|q| Ok(f.lp_norm(q)?.value), &nu)?;
        let rhs = gls_norm(|p| Ok(f.grad_norm(p)?.value), psi)?;
        let mut rec = SweepRecord::cell(
            setting,
            family_name(f),
            delta_of(f),
            rhs.argmax_p,
            lhs.argmax_p,
            lhs.value,
            LogValue::ONE,
            rhs.value,
        );
        if !(lhs.converged && rhs.converged) {
            rec = rec.note("maximizer did not converge");
        }
        for (side, r) in [("lhs", &lhs), ("rhs", &rhs)] {
            if let Some(end) = r.at_endpoint {
                rec = rec.note(format!("{side} sup at {end:?} endpoint margin").to_lowercase());
            }
        }
        Ok(rec)
    };
    run().unwrap_or_else(|e| SweepRecord::failed(setting, family_name(f), delta_of(f), f64::NAN, &e))
}

/// Hardy route to the trace bound: the tail operator applied to `|g_Δ′|`
/// with the trace power weights. The constant is `K⁺ = Q·B·ω(m)^{1/q}ω(N)^{-1/p}`.
pub fn verify_hardy(setting: Setting, delta: f64, p: f64) -> SweepRecord {
    let run = || -> Result<SweepRecord> {
        if setting.alpha() != 0.0 {
            return Err(Error::Unsupported("the Hardy check covers alpha = 0 only".into()));
        }
        let q = check_p(&setting, p, "verify_hardy")?;
        let (m, big_n) = (setting.m(), setting.big_n());
        let weights = WeightPair::trace_power(m, big_n, p, q);
        let g = move |t: f64| delta * (-t.ln()).powf(delta - 1.0) / t;
        let hc = hardy_check(g, 1.0, &weights, p, q)?;
        let om = |d: u32| log_omega(f64::from(d));
        let lhs = LogValue::from_linear(hc.lhs) * LogValue::from_log(om(m) / q);
        let grad = LogValue::from_linear(hc.rhs_norm) * LogValue::from_log(om(big_n) / p);
        let b = bradley_b_sup(&weights, p, q)?.value;
        let k = bradley_q(p, q)?.value * b * LogValue::from_log(om(m) / q - om(big_n) / p);
        let closed_lhs = weighted_trace_norm_closed(m, delta, q, 0.0)?.value;
        let closed_grad = logpow_grad_norm_closed(big_n, delta, p)?.value;
        let err = rel_gap(lhs, closed_lhs).max(rel_gap(grad, closed_grad));
        let rec = SweepRecord::cell(setting, "logpow".into(), Some(delta), p, q, lhs, k, grad);
        let rec = rec.note(format!("B = {:.6}, Q = {:.6}", b.to_linear(), hc.q_factor));
        if err > CROSS_CHECK_TOL {
            let mut rec = rec.note(format!("closed form and quadrature disagree by {err:.1e}"));
            rec.pass = Verdict::Indeterminate;
            return Ok(rec);
        }
        Ok(rec)
    };
    run().unwrap_or_else(|e| SweepRecord::failed(setting, "logpow".into(), Some(delta), p, &e))
}

/// Richardson estimate of `lim_{p→p_hi⁻}` of the closed-form ratio along
/// `p_j = p_hi - 10^{-j}`.
pub fn convergence_row(setting: Setting, delta: f64, bound: &BoundCurve, ladder: &[i32]) -> SweepRecord {
    let hi = setting.p_range().hi;
    let mut rec = SweepRecord {
        kind: RowKind::Convergence,
        setting,
        family: "logpow".into(),
        delta: Some(delta),
        p: hi,
        q: f64::INFINITY,
        lhs: None,
        bound_constant: None,
        rhs: None,
        ratio: f64::NAN,
        pass: Verdict::Indeterminate,
        notes: String::new(),
    };
    if ladder.len() < 2 || !hi.is_finite() {
        rec.notes = "need two ladder points below a finite p_hi".into();
        return rec;
    }
    let samples: Result<Vec<f64>> = ladder
        .iter()
        .map(|j| logpow_record(setting, delta, hi - 10f64.powi(-j), bound).map(|r| r.ratio))
        .collect();
    let rs = match samples {
        Ok(rs) => rs,
        Err(e) => {
            rec.notes = e.to_string();
            return rec;
        }
    };
    let k = rs.len();
    let step = |i: usize| richardson(rs[i - 1], rs[i], 10f64.powi(ladder[i] - ladder[i - 1]));
    let est = step(k - 1);
    rec.ratio = est;
    let stability = if k >= 3 { Some((est - step(k - 2)).abs()) } else { None };
    let js: Vec<String> = ladder.iter().map(|j| j.to_string()).collect();
    rec = rec.note(format!("richardson over j = {}", js.join(",")));
    if let Some(s) = stability {
        rec = rec.note(format!("stability {s:.1e}"));
    }
    let bounded = est <= 1.0 + PASS_SLACK;
    let reference = if setting.n() == 0 && setting.alpha() == 0.0 {
        ratio_limit_ordinary(setting.m(), delta).ok()
    } else {
        None
    };
    rec.pass = match reference {
        Some(lim) => {
            let gap = (est - lim).abs();
            rec = rec.note(format!("closed-form limit {lim:.6}, gap {gap:.1e}"));
            if bounded && gap <= LIMIT_TOL {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        None if bounded && stability.is_none_or(|s| s <= LIMIT_TOL) => Verdict::Pass,
        None => Verdict::Fail,
    };
    rec
}

enum Job {
    Cell { s: Setting, delta: Option<f64>, p: f64 },
    Gls { s: Setting, delta: f64 },
    Convergence { s: Setting, delta: f64 },
}

fn build_psi(spec: Option<PsiSpec>, m: u32, delta: f64) -> Result<PsiFunction> {
    let iv = Interval::new(1.0, f64::from(m))?;
    match spec.unwrap_or(PsiSpec::Natural {
        norm: crate::gls::NormKind::Gradient,
    }) {
        PsiSpec::Natural { norm } => natural_psi(&RadialProfile::logpow(m, delta)?, norm, iv),
        PsiSpec::PowerBlowup { beta, endpoint } => PsiFunction::power_blowup(iv, beta, endpoint),
        PsiSpec::Constant { value } => PsiFunction::constant(iv, value),
    }
}

fn run_job(cfg: &SweepConfig, job: &Job) -> SweepRecord {
    match *job {
        Job::Cell { s, delta, p } => {
            if cfg.target == Target::Hardy {
                return verify_hardy(s, delta.unwrap_or(1.0), p);
            }
            let Some(bound) = cfg.bound_for(&s) else {
                let e = Error::Unsupported("no bound curve for a weighted setting".into());
                return SweepRecord::failed(s, cfg.family.name().into(), delta, p, &e);
            };
            match (cfg.family, delta) {
                (FamilySpec::Logpow, Some(d)) => logpow_record(s, d, p, &bound)
                    .unwrap_or_else(|e| SweepRecord::failed(s, "logpow".into(), delta, p, &e)),
                (family, _) => match family.profile(s.big_n(), delta) {
                    Ok(f) => verify_general(&f, s, p, &bound),
                    Err(e) => SweepRecord::failed(s, family.name().into(), delta, p, &e),
                },
            }
        }
        Job::Gls { s, delta } => match build_psi(cfg.psi, s.m(), delta) {
            Ok(psi) => verify_gls_theorem1(s.m(), delta, &psi)
                .unwrap_or_else(|e| SweepRecord::failed(s, "logpow".into(), Some(delta), f64::NAN, &e)),
            Err(e) => SweepRecord::failed(s, "logpow".into(), Some(delta), f64::NAN, &e),
        },
        Job::Convergence { s, delta } => match cfg.bound_for(&s) {
            Some(b) => convergence_row(s, delta, &b, cfg.convergence.as_deref().unwrap_or(&[])),
            None => {
                let e = Error::Unsupported("no bound curve for a weighted setting".into());
                let mut r = SweepRecord::failed(s, "logpow".into(), Some(delta), s.p_range().hi, &e);
                r.kind = RowKind::Convergence;
                r
            }
        },
    }
}

/// Evaluate every cell of the configured grid, then the convergence rows.
/// Rows come back in grid order regardless of scheduling.
pub fn sweep(cfg: &SweepConfig) -> Vec<SweepRecord> {
    let mut jobs = Vec::new();
    let settings = cfg.settings();
    for s in &settings {
        for delta in cfg.deltas() {
            if cfg.target == Target::GlsTheorem1 {
                jobs.push(Job::Gls {
                    s: *s,
                    delta: delta.unwrap_or(1.0),
                });
                continue;
            }
            if let Some(grid) = &cfg.p {
                for p in grid.values_for(s) {
                    jobs.push(Job::Cell { s: *s, delta, p });
                }
            }
        }
    }
    if cfg.convergence.is_some() {
        for s in &settings {
            for delta in cfg.delta.iter() {
                jobs.push(Job::Convergence { s: *s, delta: *delta });
            }
        }
    }
    jobs.par_iter().map(|j| run_job(cfg, j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::gls::NormKind;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ordinary_examples() {
        assert!((ratio_ordinary(3, 1.0, 2.0).unwrap() - 0.836_535_821_9).abs() < 1e-9);
        let near = ratio_ordinary(3, 2.0, 2.999).unwrap();
        assert!((near - ratio_limit_ordinary(3, 2.0).unwrap()).abs() < 1e-2);
        assert!(ratio_ordinary(3, 1.0, 3.0).is_err());
        assert!(ratio_ordinary(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn limit_values() {
        assert!(rel(ratio_limit_ordinary(3, 2.0).unwrap(), 0.844_526_200_045_876_8) < 1e-12);
        let l200 = ratio_limit_ordinary(200, 2.0).unwrap();
        assert!((l200 - 0.74586).abs() < 1e-4);
        assert!((l200 - 2.0 / std::f64::consts::E).abs() < 0.011);
        assert!(rel(v000(2.0).unwrap(), 2.0 / std::f64::consts::E) < 1e-15);
        assert!(rel(v000(40.0).unwrap(), 0.987_473_627_776_393_4) < 1e-13);
        assert!(rel(v000(1e6).unwrap(), 0.999_999_499_999_958_3) < 1e-13);
        assert!(v000(1.0).is_err());
    }

    #[test]
    fn delta_one_limit_matches_brute_force() {
        let r4 = ratio_ordinary(3, 1.0, 3.0 - 1e-4).unwrap();
        let r5 = ratio_ordinary(3, 1.0, 3.0 - 1e-5).unwrap();
        let lim = ratio_limit_ordinary(3, 1.0).unwrap();
        assert!((richardson(r4, r5, 10.0) - lim).abs() < 1e-5);
    }

    #[test]
    fn trace_examples() {
        assert!(ratio_trace(2, 1, 1.0, 2.0).unwrap() <= 1.0 + PASS_SLACK);
        let far = ratio_trace(2, 1, 2.0, 3.0 - 1e-6).unwrap();
        let near = ratio_trace(2, 1, 2.0, 3.0 - 1e-7).unwrap();
        assert!(far > 0.0 && far <= 1.0 && (far - near).abs() < 1e-4);
        let s = Setting::trace(3, 2).unwrap();
        let w = ratio_weighted(s, 1.0, 2.5, &BoundCurve::TraceUpper { m: 3, n: 2 }).unwrap();
        assert_eq!(w, ratio_trace(3, 2, 1.0, 2.5).unwrap());
    }

    #[test]
    fn sobolev_by_quadrature() {
        let g = verify_sobolev(&RadialProfile::gaussian(3).unwrap(), 3, 2.0);
        assert_eq!(g.pass, Verdict::Pass, "{g:?}");
        let b = verify_sobolev(&RadialProfile::bump(4).unwrap(), 4, 1.5);
        assert_eq!(b.pass, Verdict::Pass, "{b:?}");
        let l = verify_sobolev(&RadialProfile::logpow(3, 2.0).unwrap(), 3, 2.0);
        assert_eq!(l.pass, Verdict::Pass, "{l:?}");
        assert!(rel(l.ratio, ratio_ordinary(3, 2.0, 2.0).unwrap()) < 1e-6);
        let bad = verify_sobolev(&RadialProfile::gaussian(4).unwrap(), 3, 2.0);
        assert_eq!(bad.pass, Verdict::Indeterminate);
    }

    #[test]
    fn gls_theorem1_examples() {
        let f = RadialProfile::logpow(3, 2.0).unwrap();
        let psi = natural_psi(&f, NormKind::Gradient, Interval::new(1.0, 3.0).unwrap()).unwrap();
        let r = verify_gls_theorem1(3, 2.0, &psi).unwrap();
        assert!((r.rhs.unwrap().to_linear() - 1.0).abs() < 1e-9);
        assert_eq!(r.pass, Verdict::Pass, "{r:?}");
        assert!(r.ratio >= ratio_limit_ordinary(3, 2.0).unwrap() - 1e-9);

        let one = PsiFunction::constant(Interval::new(1.0, 3.0).unwrap(), 1.0).unwrap();
        let z = verify_gls_theorem1_profile(&f.scaled(0.0), &one);
        assert!(z.lhs.unwrap().is_zero());
        assert_eq!(z.pass, Verdict::Pass);
    }

    #[test]
    fn hardy_cell() {
        let r = verify_hardy(Setting::trace(2, 1).unwrap(), 2.0, 2.0);
        assert_eq!(r.pass, Verdict::Pass, "{r:?}");
        let kp = crate::constants::trace_upper_bradley(2, 1, 2.0).unwrap().value;
        assert!(rel_gap(r.bound_constant.unwrap(), kp) < 1e-12);
    }

    #[test]
    fn sweep_cardinality_and_order() {
        let cfg = parse_config(
            "target = \"ordinary\"\nm = [3, 4, 5]\ndelta = [1, 2, 3]\n[p]\npoints = 16\n[convergence]\nladder = [4, 5, 6]\n",
        )
        .unwrap();
        let rows = sweep(&cfg);
        assert_eq!(rows.len(), 153);
        assert!(rows[..144].iter().all(|r| r.kind == RowKind::Cell && r.pass == Verdict::Pass));
        assert!(rows[144..].iter().all(|r| r.kind == RowKind::Convergence && r.pass == Verdict::Pass));
        assert_eq!((rows[0].setting.m(), rows[0].delta), (3, Some(1.0)));
        assert!(rows[0].p < rows[1].p);
        let c = rows.iter().find(|r| r.kind == RowKind::Convergence && r.setting.m() == 3 && r.delta == Some(2.0));
        assert!((c.unwrap().ratio - 0.844_524).abs() < 1e-3);
        assert_eq!(rows, sweep(&cfg));
    }

    #[test]
    fn sweep_cells_never_abort() {
        let cfg = parse_config(
            "target = \"weighted\"\nm = 3\nn = 2\nalpha = 1.0\n[p]\nvalues = [2.0, 5.5]\n[bound]\nkind = \"constant\"\nvalue = 1e6\n",
        )
        .unwrap();
        let rows = sweep(&cfg);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].pass, Verdict::Pass);
        assert_eq!(rows[1].pass, Verdict::Indeterminate);
    }

    #[test]
    fn v000_ladder_increasing() {
        let v: Vec<f64> = [2.0, 5.0, 10.0, 40.0, 100.0].iter().map(|d| v000(*d).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }
}
