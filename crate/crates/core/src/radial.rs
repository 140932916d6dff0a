//! Radial functions on `R^dim` and their Lebesgue norms.
//!
//! A radial `u(x) = g(|x|)` has `|∇u|(x) = |g′(|x|)|`, so every norm here is
//! a one-dimensional integral `ω(dim) ∫_0^∞ r^{dim-1} |h(r)|^p dr`. Inside
//! the support (or below the profile's scale) the integral is taken in the
//! log-radius `s = ln(c/r)`, which turns the `(-ln r)^Δ` endpoint
//! behaviour of the log-power family into a Gamma-type integrand on a
//! half-line. Profiles are evaluated through `ln|g|` so that radii far below
//! `f64::MIN_POSITIVE` never have to be formed.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate_tail, Tolerance};
use crate::specfun::{log_gamma_unchecked as lgamma, log_sphere_measure_real as log_omega, LogValue};

pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied profile `g` on `(0, ∞)` with derivative `dg`, vanishing
/// beyond `support`.
#[derive(Clone)]
pub struct CustomProfile {
    pub name: String,
    pub g: ProfileFn,
    pub dg: ProfileFn,
    pub support: f64,
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile")
            .field("name", &self.name)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    /// `(-ln r)^Δ` on `(0, 1]`, zero outside.
    LogPow { delta: f64 },
    /// `e^{-r²}`.
    Gaussian,
    /// `exp(-1/(1-r²))` on `[0, 1)`, zero outside.
    Bump,
    Custom(CustomProfile),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyTag {
    #[serde(rename = "logpow")]
    LogPow { delta: f64 },
    Gaussian,
    Bump,
    Custom,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::LogPow { .. } => f.write_str("logpow"),
            FamilyTag::Gaussian => f.write_str("gaussian"),
            FamilyTag::Bump => f.write_str("bump"),
            FamilyTag::Custom => f.write_str("custom"),
        }
    }
}

/// `x ↦ amplitude · base(|x| / scale)` on `R^dim`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    dim: u32,
    family: Family,
    scale: f64,
    amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: LogValue,
    pub method: NormMethod,
    pub abs_error_estimate: f64,
    pub p: f64,
    pub dim: u32,
}

impl NormResult {
    pub fn linear(&self) -> f64 {
        self.value.to_linear()
    }

    fn closed(log_value: f64, p: f64, dim: u32) -> Self {
        NormResult {
            value: LogValue::from_log(log_value),
            method: NormMethod::ClosedForm,
            abs_error_estimate: 0.0,
            p,
            dim,
        }
    }
}

fn check_dim(op: &'static str, dim: u32) -> Result<()> {
    if dim < 1 {
        return Err(Error::domain(op, "dimension must be >= 1"));
    }
    Ok(())
}

impl RadialProfile {
    fn base(dim: u32, family: Family) -> Self {
        RadialProfile {
            dim,
            family,
            scale: 1.0,
            amplitude: 1.0,
        }
    }

    /// `f_Δ(x) = |ln|x||^Δ · 1{|x| ≤ 1}`, `Δ ≥ 1`.
    pub fn logpow(dim: u32, delta: f64) -> Result<Self> {
        check_dim("logpow", dim)?;
        if !(delta >= 1.0) || !delta.is_finite() {
            return Err(Error::domain("logpow", format!("delta = {delta} must be >= 1")));
        }
        Ok(Self::base(dim, Family::LogPow { delta }))
    }

    pub fn gaussian(dim: u32) -> Result<Self> {
        check_dim("gaussian", dim)?;
        Ok(Self::base(dim, Family::Gaussian))
    }

    pub fn bump(dim: u32) -> Result<Self> {
        check_dim("bump", dim)?;
        Ok(Self::base(dim, Family::Bump))
    }

    pub fn custom(dim: u32, profile: CustomProfile) -> Result<Self> {
        check_dim("custom", dim)?;
        if !(profile.support > 0.0) {
            return Err(Error::domain("custom", "support radius must be > 0"));
        }
        Ok(Self::base(dim, Family::Custom(profile)))
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_tag(&self) -> FamilyTag {
        match &self.family {
            Family::LogPow { delta } => FamilyTag::LogPow { delta: *delta },
            Family::Gaussian => FamilyTag::Gaussian,
            Family::Bump => FamilyTag::Bump,
            Family::Custom(_) => FamilyTag::Custom,
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn support_radius(&self) -> f64 {
        let base = match &self.family {
            Family::LogPow { .. } | Family::Bump => 1.0,
            Family::Gaussian => f64::INFINITY,
            Family::Custom(c) => c.support,
        };
        base * self.scale
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        RadialProfile {
            amplitude: self.amplitude * c,
            ..self.clone()
        }
    }

    /// Dilation `T_λ f(x) = f(x/λ)`: profile `g(r/λ)`, derivative
    /// `λ^{-1} g′(r/λ)`, support `λ · support`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain("dilate", format!("lambda = {lambda} must be > 0")));
        }
        Ok(RadialProfile {
            scale: self.scale * lambda,
            ..self.clone()
        })
    }

    /// Restriction `S[u](x) = u(x, 0)` of a radial function on `R^N` to
    /// `R^m`. The profile is unchanged; only the dimension drops.
    pub fn trace_restrict(&self, m: u32) -> Result<Self> {
        if m < 1 || m > self.dim {
            return Err(Error::domain(
                "trace_restrict",
                format!("target dimension {m} must lie in [1, {}]", self.dim),
            ));
        }
        Ok(RadialProfile {
            dim: m,
            ..self.clone()
        })
    }

    pub fn g(&self, r: f64) -> f64 {
        if let Family::Custom(c) = &self.family {
            return self.amplitude * (c.g)(r / self.scale);
        }
        if self.amplitude == 0.0 {
            return 0.0;
        }
        self.amplitude * self.ln_abs_base(r.ln() - self.scale.ln()).exp()
    }

    pub fn dg(&self, r: f64) -> f64 {
        if let Family::Custom(c) = &self.family {
            return self.amplitude * (c.dg)(r / self.scale) / self.scale;
        }
        if self.amplitude == 0.0 {
            return 0.0;
        }
        let sign = match self.family {
            Family::LogPow { .. } | Family::Gaussian | Family::Bump => -1.0,
            Family::Custom(_) => unreachable!(),
        };
        self.amplitude * sign * self.ln_abs_dg(r.ln()).exp()
    }

    /// `ln|base(ρ)|` as a function of `ln ρ`.
    fn ln_abs_base(&self, ln_rho: f64) -> f64 {
        match &self.family {
            Family::LogPow { delta } => {
                if ln_rho >= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    delta * (-ln_rho).ln()
                }
            }
            Family::Gaussian => -(2.0 * ln_rho).exp(),
            Family::Bump => {
                if ln_rho >= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    1.0 / (2.0 * ln_rho).exp_m1()
                }
            }
            Family::Custom(c) => (c.g)(ln_rho.exp()).abs().ln(),
        }
    }

    /// `ln|g(r)|` of the dilated, scaled profile.
    fn ln_abs_g(&self, ln_r: f64) -> f64 {
        if self.amplitude == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.amplitude.abs().ln() + self.ln_abs_base(ln_r - self.scale.ln())
    }

    /// `ln|g′(r)|` of the dilated, scaled profile.
    fn ln_abs_dg(&self, ln_r: f64) -> f64 {
        if self.amplitude == 0.0 {
            return f64::NEG_INFINITY;
        }
        let ln_scale = self.scale.ln();
        let ln_rho = ln_r - ln_scale;
        let base = match &self.family {
            Family::LogPow { delta } => {
                if ln_rho > 0.0 {
                    f64::NEG_INFINITY
                } else if *delta == 1.0 {
                    -ln_rho
                } else if ln_rho == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    // |d/dρ (-ln ρ)^Δ| = Δ (-ln ρ)^{Δ-1} / ρ
                    delta.ln() + (delta - 1.0) * (-ln_rho).ln() - ln_rho
                }
            }
            Family::Gaussian => std::f64::consts::LN_2 + ln_rho - (2.0 * ln_rho).exp(),
            Family::Bump => {
                if ln_rho >= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    // g = exp(-1/(1-ρ²)), |g′| = g · 2ρ/(1-ρ²)²
                    let one_minus = -(2.0 * ln_rho).exp_m1();
                    -1.0 / one_minus + std::f64::consts::LN_2 + ln_rho - 2.0 * one_minus.ln()
                }
            }
            Family::Custom(c) => (c.dg)(ln_rho.exp()).abs().ln(),
        };
        self.amplitude.abs().ln() + base - ln_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Function,
    Gradient,
}

const NORM_TOL: Tolerance = Tolerance {
    abs: 0.0,
    rel: 1e-11,
    max_intervals: 10_000,
};

/// `ω(dim) ∫_0^∞ r^{dim-1-weight} |h(r)|^p dr` in log domain, with its
/// absolute error estimate.
fn radial_integral(
    f: &RadialProfile,
    target: Target,
    p: f64,
    weight: f64,
    op: &'static str,
) -> Result<(LogValue, f64)> {
    let a = f64::from(f.dim) - 1.0 - weight;
    let ln_h = |ln_r: f64| match target {
        Target::Function => f.ln_abs_g(ln_r),
        Target::Gradient => f.ln_abs_dg(ln_r),
    };
    let support = f.support_radius();
    let split = if support.is_finite() { support } else { f.scale };
    let ln_split = split.ln();

    // r = split · e^{-s}, dr = r ds
    let inner = |s: f64| {
        let ln_r = ln_split - s;
        let lh = ln_h(ln_r);
        if lh == f64::NEG_INFINITY {
            return 0.0;
        }
        ((a + 1.0) * ln_r + p * lh).exp()
    };
    let map_err = |e: Error| match e {
        Error::Divergence { msg, .. } => Error::divergence(op, msg),
        other => other,
    };
    let inner_est = integrate_tail(inner, 0.0, 1.0, NORM_TOL).map_err(map_err)?;
    let mut total = inner_est.value;
    let mut err = inner_est.abs_error;
    if !support.is_finite() {
        let outer = |r: f64| {
            let lh = ln_h(r.ln());
            if lh == f64::NEG_INFINITY {
                return 0.0;
            }
            (a * r.ln() + p * lh).exp()
        };
        let outer_est = integrate_tail(outer, split, split, NORM_TOL).map_err(map_err)?;
        total += outer_est.value;
        err += outer_est.abs_error;
    }
    let omega = log_omega(f64::from(f.dim)).exp();
    Ok((LogValue::from_linear(total).scale(omega), err * omega))
}

fn quad_norm(
    f: &RadialProfile,
    target: Target,
    p: f64,
    weight: f64,
    op: &'static str,
) -> Result<NormResult> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(op, format!("p = {p} must be finite and >= 1")));
    }
    let (integral, err) = radial_integral(f, target, p, weight, op)?;
    let value = integral.powf(1.0 / p);
    // d(I^{1/p}) = I^{1/p - 1} dI / p
    let abs_error_estimate = if integral.is_zero() {
        err.powf(1.0 / p)
    } else {
        (value / integral).to_linear() * err / p
    };
    Ok(NormResult {
        value,
        method: NormMethod::Quadrature,
        abs_error_estimate,
        p,
        dim: f.dim,
    })
}

/// `|f|_p = (∫_{R^dim} |f|^p)^{1/p}` by adaptive quadrature.
pub fn lp_norm_quad(f: &RadialProfile, p: f64) -> Result<NormResult> {
    quad_norm(f, Target::Function, p, 0.0, "lp_norm_quad")
}

/// `|∇f|_p` by adaptive quadrature of `|g′|`.
pub fn grad_lp_norm(f: &RadialProfile, p: f64) -> Result<NormResult> {
    quad_norm(f, Target::Gradient, p, 0.0, "grad_lp_norm")
}

/// `| |x|^{-α} f |_p` by adaptive quadrature.
pub fn weighted_lp_norm_quad(f: &RadialProfile, p: f64, alpha: f64) -> Result<NormResult> {
    quad_norm(f, Target::Function, p, alpha * p, "weighted_lp_norm_quad")
}

/// `|f_Δ|_{q, R^m} = ω(m)^{1/q} Γ(Δq+1)^{1/q} / m^{Δ+1/q}`.
pub fn logpow_norm_closed(m: u32, delta: f64, q: f64) -> Result<NormResult> {
    weighted_trace_norm_closed(m, delta, q, 0.0).map_err(|e| match e {
        Error::Domain { msg, .. } => Error::domain("logpow_norm_closed", msg),
        other => other,
    })
}

/// `|∇f_Δ|_{p, R^dim} = Δ ω(dim)^{1/p} Γ(p(Δ-1)+1)^{1/p} / (dim-p)^{Δ-1+1/p}`,
/// finite for `1 ≤ p < dim`.
pub fn logpow_grad_norm_closed(dim: u32, delta: f64, p: f64) -> Result<NormResult> {
    const OP: &str = "logpow_grad_norm_closed";
    check_dim(OP, dim)?;
    let d = f64::from(dim);
    if !(delta >= 1.0) {
        return Err(Error::domain(OP, format!("delta = {delta} must be >= 1")));
    }
    if !(p >= 1.0) {
        return Err(Error::domain(OP, format!("p = {p} must be >= 1")));
    }
    if !(p < d) {
        return Err(Error::domain(OP, format!("p = {p} at or beyond the pole p = dim = {dim}")));
    }
    let log_v = delta.ln() + (log_omega(d) + lgamma(p * (delta - 1.0) + 1.0)) / p
        - (delta - 1.0 + 1.0 / p) * (d - p).ln();
    Ok(NormResult::closed(log_v, p, dim))
}

/// `| |x|^{-α} f_Δ |_{q, R^m} = ω(m)^{1/q} Γ(Δq+1)^{1/q} / (m-αq)^{Δ+1/q}`,
/// finite iff `m > αq`.
pub fn weighted_trace_norm_closed(m: u32, delta: f64, q: f64, alpha: f64) -> Result<NormResult> {
    const OP: &str = "weighted_trace_norm_closed";
    check_dim(OP, m)?;
    if !(delta >= 1.0) {
        return Err(Error::domain(OP, format!("delta = {delta} must be >= 1")));
    }
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::domain(OP, format!("q = {q} must be finite and >= 1")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(OP, format!("alpha = {alpha} must lie in [0, 1]")));
    }
    let mf = f64::from(m);
    let gap = mf - alpha * q;
    if !(gap > 0.0) {
        return Err(Error::divergence(
            OP,
            format!("m - alpha*q = {gap} <= 0: weight |x|^(-alpha*q) not integrable at 0"),
        ));
    }
    let log_v = (log_omega(mf) + lgamma(delta * q + 1.0)) / q - (delta + 1.0 / q) * gap.ln();
    Ok(NormResult::closed(log_v, q, m))
}

impl RadialProfile {
    /// Closed-form `|f|_p` when the family has one (log-power only),
    /// accounting for dilation and amplitude.
    pub fn closed_lp_norm(&self, p: f64) -> Option<Result<NormResult>> {
        let Family::LogPow { delta } = self.family else {
            return None;
        };
        Some(logpow_norm_closed(self.dim, delta, p).map(|r| self.rescale(r, f64::from(self.dim) / p)))
    }

    /// Closed-form `|∇f|_p` when available.
    pub fn closed_grad_norm(&self, p: f64) -> Option<Result<NormResult>> {
        let Family::LogPow { delta } = self.family else {
            return None;
        };
        Some(
            logpow_grad_norm_closed(self.dim, delta, p)
                .map(|r| self.rescale(r, f64::from(self.dim) / p - 1.0)),
        )
    }

    fn rescale(&self, mut r: NormResult, scale_power: f64) -> NormResult {
        let factor = LogValue::from_log(scale_power * self.scale.ln()) * LogValue::from_linear(self.amplitude.abs());
        r.value = r.value * factor;
        r
    }

    /// `|f|_p`, closed form when available and quadrature otherwise.
    pub fn lp_norm(&self, p: f64) -> Result<NormResult> {
        self.closed_lp_norm(p).unwrap_or_else(|| lp_norm_quad(self, p))
    }

    /// `|∇f|_p`, closed form when available and quadrature otherwise.
    pub fn grad_norm(&self, p: f64) -> Result<NormResult> {
        self.closed_grad_norm(p).unwrap_or_else(|| grad_lp_norm(self, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn logpow_quadrature_matches_closed_form() {
        let f = RadialProfile::logpow(3, 1.0).unwrap();
        let q = lp_norm_quad(&f, 2.0).unwrap();
        assert!(rel(q.linear(), (8.0 * PI / 27.0).sqrt()) < 1e-9, "{q:?}");
        assert_eq!(q.method, NormMethod::Quadrature);
        assert!(q.abs_error_estimate < 1e-8);
    }

    #[test]
    fn gaussian_l2_in_three_dims() {
        let f = RadialProfile::gaussian(3).unwrap();
        let got = lp_norm_quad(&f, 2.0).unwrap().linear();
        // ∫_{R³} e^{-2|x|²} dx = (π/2)^{3/2}
        assert!(rel(got, (PI / 2.0).powf(0.75)) < 1e-9, "{got}");
    }

    #[test]
    fn zero_profile_has_zero_norms() {
        let f = RadialProfile::gaussian(3).unwrap().scaled(0.0);
        assert!(lp_norm_quad(&f, 2.0).unwrap().value.is_zero());
        assert!(grad_lp_norm(&f, 2.0).unwrap().value.is_zero());
    }

    #[test]
    fn gradient_examples() {
        let f1 = RadialProfile::logpow(3, 1.0).unwrap();
        let g = grad_lp_norm(&f1, 2.0).unwrap().linear();
        assert!(rel(g, (4.0 * PI).sqrt()) < 1e-9);
        let f2 = RadialProfile::logpow(3, 2.0).unwrap();
        let g = grad_lp_norm(&f2, 2.0).unwrap().linear();
        assert!(rel(g, 2.0 * 2f64.sqrt() * (4.0 * PI).sqrt()) < 1e-9);
    }

    #[test]
    fn closed_form_reference_values() {
        // mpmath, 40 digits
        assert!(rel(logpow_norm_closed(3, 1.0, 2.0).unwrap().linear(), 0.964_801_672_744_356_9) < 1e-13);
        assert!(rel(logpow_norm_closed(3, 1.0, 6.0).unwrap().linear(), 1.267_016_477_498_867) < 1e-13);
        assert!(rel(logpow_norm_closed(3, 3.0, 100.0).unwrap().linear(), 52_446.335_929_286_96) < 1e-12);
        assert!(rel(logpow_grad_norm_closed(3, 1.0, 2.0).unwrap().linear(), 3.544_907_701_811_032) < 1e-13);
        assert!(rel(logpow_grad_norm_closed(3, 2.0, 2.0).unwrap().linear(), 10.026_513_098_524_01) < 1e-13);
    }

    #[test]
    fn gradient_pole() {
        assert!(matches!(logpow_grad_norm_closed(3, 1.0, 3.0), Err(Error::Domain { .. })));
        // (3-p)^{-1/p} growth for Δ = 1
        let a = logpow_grad_norm_closed(3, 1.0, 3.0 - 1e-3).unwrap().value.log_abs();
        let b = logpow_grad_norm_closed(3, 1.0, 3.0 - 1e-6).unwrap().value.log_abs();
        assert!(((b - a) / (1e3f64.ln()) - 1.0 / 3.0).abs() < 1e-3);
        // quadrature detects the same pole
        let f = RadialProfile::logpow(3, 1.0).unwrap();
        assert!(grad_lp_norm(&f, 3.0).unwrap_err().is_divergence());
        assert!(grad_lp_norm(&f, 3.5).unwrap_err().is_divergence());
    }

    #[test]
    fn trace_restrict_keeps_profile() {
        let u = RadialProfile::logpow(5, 2.0).unwrap();
        let s = u.trace_restrict(3).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.family_tag(), FamilyTag::LogPow { delta: 2.0 });
        for r in [0.1, 0.5, 0.9, 1.5] {
            assert_eq!(s.g(r), u.g(r));
        }
        let n = lp_norm_quad(&s, 4.0).unwrap().linear();
        assert!(rel(n, logpow_norm_closed(3, 2.0, 4.0).unwrap().linear()) < 1e-9);
        assert_eq!(u.trace_restrict(5).unwrap().dim(), 5);
        assert!(u.trace_restrict(6).is_err());
    }

    #[test]
    fn weighted_closed_form() {
        let a = weighted_trace_norm_closed(3, 2.0, 4.0, 0.0).unwrap();
        let b = logpow_norm_closed(3, 2.0, 4.0).unwrap();
        assert_eq!(a.value, b.value);
        let v = weighted_trace_norm_closed(3, 1.0, 2.0, 0.5).unwrap().linear();
        assert!(rel(v, (8.0 * PI).sqrt() / 2f64.powf(1.5)) < 1e-14);
        assert!(weighted_trace_norm_closed(3, 1.0, 6.0, 0.5).unwrap_err().is_divergence());
        let f = RadialProfile::logpow(3, 1.0).unwrap();
        let q = weighted_lp_norm_quad(&f, 2.0, 0.5).unwrap().linear();
        assert!(rel(q, v) < 1e-9);
    }

    #[test]
    fn dilation_examples() {
        let f = RadialProfile::logpow(3, 1.0).unwrap();
        assert_eq!(f.dilate(1.0).unwrap().g(0.3), f.g(0.3));
        let t = f.dilate(2.0).unwrap();
        assert_eq!(t.support_radius(), 2.0);
        let n = lp_norm_quad(&t, 2.0).unwrap().linear();
        assert!(rel(n, 2f64.powf(1.5) * 0.964_801_672_744_356_9) < 1e-9);
        let g = grad_lp_norm(&t, 2.0).unwrap().linear();
        assert!(rel(g, 2f64.sqrt() * (4.0 * PI).sqrt()) < 1e-9);
        assert!(f.dilate(0.0).is_err());
        assert!(f.dilate(-1.0).is_err());
    }

    #[test]
    fn derivative_consistency() {
        let h = 1e-5;
        let profiles = [
            RadialProfile::logpow(3, 1.0).unwrap(),
            RadialProfile::logpow(3, 2.5).unwrap(),
            RadialProfile::gaussian(3).unwrap(),
            RadialProfile::bump(3).unwrap(),
            RadialProfile::gaussian(3).unwrap().dilate(2.0).unwrap(),
        ];
        for f in &profiles {
            for r in [0.1, 0.5, 0.9] {
                let fd = (f.g(r + h) - f.g(r - h)) / (2.0 * h);
                let d = f.dg(r);
                assert!((d - fd).abs() <= 1e-5 * d.abs().max(1.0), "{:?} r={r}: {d} vs {fd}", f.family_tag());
            }
        }
    }

    #[test]
    fn custom_profile_via_closures() {
        let f = RadialProfile::custom(
            3,
            CustomProfile {
                name: "gauss".into(),
                g: Arc::new(|r: f64| (-r * r).exp()),
                dg: Arc::new(|r: f64| -2.0 * r * (-r * r).exp()),
                support: f64::INFINITY,
            },
        )
        .unwrap();
        let g = RadialProfile::gaussian(3).unwrap();
        let a = lp_norm_quad(&f, 3.0).unwrap().linear();
        let b = lp_norm_quad(&g, 3.0).unwrap().linear();
        assert!(rel(a, b) < 1e-10);
        let a = grad_lp_norm(&f, 1.5).unwrap().linear();
        let b = grad_lp_norm(&g, 1.5).unwrap().linear();
        assert!(rel(a, b) < 1e-10);
    }

    #[test]
    fn closed_norm_tracks_dilation_and_amplitude() {
        let f = RadialProfile::logpow(4, 2.0).unwrap().dilate(0.5).unwrap().scaled(-3.0);
        let c = f.closed_lp_norm(2.5).unwrap().unwrap().linear();
        let q = lp_norm_quad(&f, 2.5).unwrap().linear();
        assert!(rel(c, q) < 1e-9);
        let c = f.closed_grad_norm(2.5).unwrap().unwrap().linear();
        let q = grad_lp_norm(&f, 2.5).unwrap().linear();
        assert!(rel(c, q) < 1e-9);
        assert!(RadialProfile::bump(3).unwrap().closed_lp_norm(2.0).is_none());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn homogeneity(c in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0], p in 1.0f64..6.0) {
                let f = RadialProfile::gaussian(3).unwrap();
                let a = lp_norm_quad(&f.scaled(c), p).unwrap().linear();
                let b = lp_norm_quad(&f, p).unwrap().linear();
                prop_assert!((a - c.abs() * b).abs() <= 1e-12 * c.abs() * b);
            }
        }
    }
}
