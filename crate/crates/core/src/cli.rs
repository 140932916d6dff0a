//! The `glsob` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 invalid input,
//! 3 a quantity diverged or could not be evaluated.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::{parse_config, FamilySpec, Format, OutputSpec, PGrid, Target};
use crate::constants::{bradley_b_power, bradley_q, talenti, trace_upper, trace_upper_besov, trace_upper_bradley, ConstantResult};
use crate::error::{Error, Result};
use crate::exponents::{Interval, Setting};
use crate::gls::{gls_norm, natural_psi, nu_transform, theta_transform, zeta_transform, BoundCurve, Endpoint, NormKind, PsiFunction};
use crate::hardy::{hardy_check, WeightPair};
use crate::radial::{grad_lp_norm, lp_norm_quad, weighted_lp_norm_quad, NormResult, RadialProfile};
use crate::report::{emit_table, render_table, Summary};
use crate::sharpness::{sweep, verify_general, verify_gls_theorem1, verify_hardy, SweepRecord};
use crate::specfun::LogValue;

#[derive(Parser, Debug)]
#[command(name = "glsob", version, about = "Grand Lebesgue space norms and sharp Sobolev-type constants")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sharp or upper-bound constants.
    #[command(subcommand)]
    Constant(ConstantCmd),
    /// Exponent algebra for a setting (m, n, alpha).
    Exponent(ExponentArgs),
    /// Lp, gradient and GLS norms of radial profiles.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Evaluate a transformed generating function at q.
    Transform(TransformArgs),
    /// Check one inequality instance.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run a configured sweep.
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum ConstantCmd {
    /// Talenti's constant K_m(p).
    Talenti {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: f64,
    },
    /// Upper bound for the radial trace constant.
    TraceUpper {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = TraceBound::Min)]
        bound: TraceBound,
    },
    /// Q(p) = p^{1/q} (p/(p-1))^{(p-1)/p}, and B for power trace weights when m and N are given.
    Bradley {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long = "big-n")]
        big_n: Option<u32>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TraceBound {
    Min,
    Bradley,
    Besov,
}

#[derive(Args, Debug)]
struct SettingArgs {
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
}

impl SettingArgs {
    fn setting(&self) -> Result<Setting> {
        Setting::new(self.m, self.n, self.alpha)
    }
}

#[derive(Args, Debug)]
struct ExponentArgs {
    #[command(flatten)]
    setting: SettingArgs,
    #[arg(long, conflicts_with = "q")]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum FamilyArg {
    Logpow,
    Gaussian,
    Bump,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Logpow)]
    family: FamilyArg,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Dilation factor λ in f(x/λ).
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Amplitude c in c·f.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
}

impl ProfileArgs {
    fn profile(&self, dim: u32) -> Result<RadialProfile> {
        let f = match self.family {
            FamilyArg::Logpow => RadialProfile::logpow(dim, self.delta)?,
            FamilyArg::Gaussian => RadialProfile::gaussian(dim)?,
            FamilyArg::Bump => RadialProfile::bump(dim)?,
        };
        Ok(f.dilate(self.scale)?.scaled(self.amplitude))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Method {
    Auto,
    Closed,
    Quad,
}

#[derive(Subcommand, Debug)]
enum NormCmd {
    /// |f|_p, or the weighted | |x|^{-alpha} f |_p.
    Lp {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// |∇f|_p.
    Gradient {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// sup_p |f|_p / psi(p) (or with |∇f|_p).
    Gls {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        dim: u32,
        #[arg(long, value_enum, default_value_t = NormArg::Gradient)]
        of: NormArg,
        #[command(flatten)]
        psi: PsiArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum NormArg {
    Function,
    Gradient,
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Function => NormKind::Function,
            NormArg::Gradient => NormKind::Gradient,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum PsiKindArg {
    Natural,
    PowerBlowup,
    Constant,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum EndpointArg {
    Lower,
    Upper,
}

#[derive(Args, Debug)]
struct PsiArgs {
    #[arg(long = "psi", value_enum, default_value_t = PsiKindArg::Natural)]
    kind: PsiKindArg,
    /// Norm used by a natural psi.
    #[arg(long = "psi-norm", value_enum, default_value_t = NormArg::Gradient)]
    norm: NormArg,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = EndpointArg::Upper)]
    endpoint: EndpointArg,
    #[arg(long = "psi-value", default_value_t = 1.0)]
    value: f64,
    /// Interval of psi; defaults to the admissible p-range.
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
}

impl PsiArgs {
    fn build(&self, profile: &RadialProfile, default: Interval) -> Result<PsiFunction> {
        let iv = Interval::new(self.lo.unwrap_or(default.lo), self.hi.unwrap_or(default.hi))?;
        match self.kind {
            PsiKindArg::Natural => natural_psi(profile, self.norm.into(), iv),
            PsiKindArg::PowerBlowup => {
                let e = if self.endpoint == EndpointArg::Upper { Endpoint::Upper } else { Endpoint::Lower };
                PsiFunction::power_blowup(iv, self.beta, e)
            }
            PsiKindArg::Constant => PsiFunction::constant(iv, self.value),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum TransformKindArg {
    Nu,
    Zeta,
    Theta,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum BoundArg {
    Talenti,
    TraceUpper,
    Constant,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(value_enum, id = "transform")]
    transform: TransformKindArg,
    #[command(flatten)]
    setting: SettingArgs,
    #[arg(long)]
    q: f64,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    psi: PsiArgs,
    /// Bound curve for theta; required there.
    #[arg(long, value_enum)]
    bound: Option<BoundArg>,
    #[arg(long = "bound-value", default_value_t = 1.0)]
    bound_value: f64,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// |f|_q <= K_m(p) |∇f|_p by quadrature.
    Sobolev {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
    },
    /// |S f|_q <= K(p) |∇f|_p by quadrature.
    Trace {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
    },
    /// GLS Sobolev inequality for f_delta on R^m.
    Gls {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 2.0)]
        delta: f64,
        #[command(flatten)]
        psi: PsiArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
    },
    /// Weighted Hardy inequality with power trace weights.
    Hardy {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = HardyG::Logpow)]
        g: HardyG,
        #[arg(long, default_value_t = 2.0)]
        delta: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum HardyG {
    /// Indicator of (0, 1).
    Indicator,
    Zero,
    /// |d/dt (-ln t)^delta| on (0, 1).
    Logpow,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum TargetArg {
    Ordinary,
    Trace,
    Weighted,
    GlsTheorem1,
    Hardy,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: String,
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Replace the p grid with this many equally spaced points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    precision: Option<usize>,
    /// Two comma-separated column names, e.g. p,ratio.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_divergence() {
        3
    } else {
        2
    }
}

fn log_json(v: LogValue) -> Value {
    json!({ "value": v.to_linear(), "log": v.log_abs(), "sign": v.sign() })
}

fn constant_json(c: &ConstantResult) -> Value {
    json!({
        "kind": c.kind,
        "inputs": c.inputs,
        "value": c.linear(),
        "log": c.value.log_abs(),
    })
}

fn norm_json(r: &NormResult) -> Value {
    json!({
        "value": r.linear(),
        "log": r.value.log_abs(),
        "method": r.method,
        "abs_error_estimate": r.abs_error_estimate,
        "p": r.p,
        "dim": r.dim,
    })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn print_records(records: &[SweepRecord], format: OutFormat) -> Result<i32> {
    let spec = OutputSpec {
        format: format.into(),
        ..OutputSpec::default()
    };
    print!("{}", render_table(records, &spec)?);
    let s = Summary::of(records);
    eprintln!("{s}");
    Ok(s.exit_code())
}

fn constant(cmd: &ConstantCmd) -> Result<i32> {
    let v = match cmd {
        ConstantCmd::Talenti { m, p } => constant_json(&talenti(*m, *p)?),
        ConstantCmd::TraceUpper { m, n, p, bound } => constant_json(&match bound {
            TraceBound::Min => trace_upper(*m, *n, *p)?,
            TraceBound::Bradley => trace_upper_bradley(*m, *n, *p)?,
            TraceBound::Besov => trace_upper_besov(*m, *n, *p)?,
        }),
        ConstantCmd::Bradley { p, q, m, big_n } => {
            let mut out = serde_json::Map::new();
            if let (Some(m), Some(nn)) = (m, big_n) {
                let b = bradley_b_power(*m, *nn, *p)?;
                let qq = q.unwrap_or(b.inputs.q.unwrap_or(f64::NAN));
                out.insert("b".into(), constant_json(&b));
                out.insert("q_factor".into(), constant_json(&bradley_q(*p, qq)?));
            } else {
                let q = q.ok_or_else(|| Error::Validation(vec!["--q is required without --m/--big-n".into()]))?;
                out.insert("q_factor".into(), constant_json(&bradley_q(*p, q)?));
            }
            Value::Object(out)
        }
    };
    print_json(&v);
    Ok(0)
}

fn exponent(a: &ExponentArgs) -> Result<i32> {
    let s = a.setting.setting()?;
    let r = s.p_range();
    let (p, q) = match (a.p, a.q) {
        (Some(p), None) => (p, s.q_of_p(p)?),
        (None, Some(q)) => (s.p_of_q(q)?, q),
        _ => return Err(Error::Validation(vec!["give exactly one of --p or --q".into()])),
    };
    let balance = s.dilation_balance(p).ok();
    print_json(&json!({
        "setting": s,
        "big_n": s.big_n(),
        "p_range": [r.lo, if r.hi.is_finite() { json!(r.hi) } else { json!("inf") }],
        "p": p,
        "q": q,
        "dilation_balance": balance,
    }));
    Ok(0)
}

fn norm(cmd: &NormCmd) -> Result<i32> {
    let v = match cmd {
        NormCmd::Lp { profile, dim, p, alpha, method } => {
            let f = profile.profile(*dim)?;
            let r = if *alpha != 0.0 {
                weighted_lp_norm_quad(&f, *p, *alpha)?
            } else {
                match method {
                    Method::Auto => f.lp_norm(*p)?,
                    Method::Quad => lp_norm_quad(&f, *p)?,
                    Method::Closed => f
                        .closed_lp_norm(*p)
                        .ok_or_else(|| Error::Unsupported("no closed form for this family".into()))??,
                }
            };
            norm_json(&r)
        }
        NormCmd::Gradient { profile, dim, p, method } => {
            let f = profile.profile(*dim)?;
            let r = match method {
                Method::Auto => f.grad_norm(*p)?,
                Method::Quad => grad_lp_norm(&f, *p)?,
                Method::Closed => f
                    .closed_grad_norm(*p)
                    .ok_or_else(|| Error::Unsupported("no closed form for this family".into()))??,
            };
            norm_json(&r)
        }
        NormCmd::Gls { profile, dim, of, psi } => {
            let f = profile.profile(*dim)?;
            let default = Interval::new(1.0, f64::from(*dim))?;
            let psi = psi.build(&f, default)?;
            let kind: NormKind = (*of).into();
            let r = gls_norm(
                |p| {
                    Ok(match kind {
                        NormKind::Function => f.lp_norm(p)?.value,
                        NormKind::Gradient => f.grad_norm(p)?.value,
                    })
                },
                &psi,
            )?;
            json!({
                "value": r.value.to_linear(),
                "log": r.value.log_abs(),
                "argmax_p": r.argmax_p,
                "at_endpoint": r.at_endpoint,
                "evaluations": r.evaluations,
                "converged": r.converged,
                "psi": psi.describe(),
            })
        }
    };
    print_json(&v);
    Ok(0)
}

fn transform(a: &TransformArgs) -> Result<i32> {
    let s = a.setting.setting()?;
    let f = a.profile.profile(s.big_n())?;
    let range = s.p_range();
    let default = Interval::new(range.lo.max(1.0), range.hi)?;
    let psi = a.psi.build(&f, default)?;
    let bound = a.bound.map(|b| match b {
        BoundArg::Talenti => BoundCurve::Talenti { m: s.m() },
        BoundArg::TraceUpper => BoundCurve::TraceUpper { m: s.m(), n: s.n() },
        BoundArg::Constant => BoundCurve::Constant(a.bound_value),
    });
    let t = match a.transform {
        TransformKindArg::Nu => nu_transform(&psi, s.m())?,
        TransformKindArg::Zeta => zeta_transform(&psi, s.m(), s.n())?,
        TransformKindArg::Theta => theta_transform(&psi, s, bound)?,
    };
    let v = t.eval(a.q)?;
    let iv = t.interval();
    print_json(&json!({
        "q": a.q,
        "value": log_json(v),
        "interval": [iv.lo, if iv.hi.is_finite() { json!(iv.hi) } else { json!("inf") }],
        "psi": t.describe(),
    }));
    Ok(0)
}

fn verify(cmd: &VerifyCmd) -> Result<i32> {
    match cmd {
        VerifyCmd::Sobolev { profile, m, p, format } => {
            let f = profile.profile(*m)?;
            let r = verify_general(&f, Setting::ordinary(*m)?, *p, &BoundCurve::Talenti { m: *m });
            print_records(&[r], *format)
        }
        VerifyCmd::Trace { profile, m, n, p, format } => {
            let s = Setting::trace(*m, *n)?;
            let f = profile.profile(s.big_n())?;
            let r = verify_general(&f, s, *p, &BoundCurve::TraceUpper { m: *m, n: *n });
            print_records(&[r], *format)
        }
        VerifyCmd::Gls { m, delta, psi, format } => {
            let f = RadialProfile::logpow(*m, *delta)?;
            let psi = psi.build(&f, Interval::new(1.0, f64::from(*m))?)?;
            let r = verify_gls_theorem1(*m, *delta, &psi)?;
            print_records(&[r], *format)
        }
        VerifyCmd::Hardy { m, n, p, g, delta } => {
            let s = Setting::trace(*m, *n)?;
            if *g == HardyG::Logpow {
                let r = verify_hardy(s, *delta, *p);
                return print_records(&[r], OutFormat::Json);
            }
            let q = s.q_of_p(*p)?;
            let w = WeightPair::trace_power(*m, s.big_n(), *p, q);
            let h = match g {
                HardyG::Indicator => hardy_check(|_| 1.0, 1.0, &w, *p, q)?,
                _ => hardy_check(|_| 0.0, 1.0, &w, *p, q)?,
            };
            print_json(&json!({ "p": p, "q": q, "check": h }));
            eprintln!("summary status={} rows=1", if h.pass { "ok" } else { "fail" });
            Ok(if h.pass { 0 } else { 1 })
        }
    }
}

fn run_sweep(a: &SweepArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&a.config).map_err(|e| Error::Io(format!("{}: {e}", a.config)))?;
    let mut cfg = parse_config(&text)?;
    if let Some(t) = a.target {
        cfg.target = match t {
            TargetArg::Ordinary => Target::Ordinary,
            TargetArg::Trace => Target::Trace,
            TargetArg::Weighted => Target::Weighted,
            TargetArg::GlsTheorem1 => Target::GlsTheorem1,
            TargetArg::Hardy => Target::Hardy,
        };
    }
    if let Some(f) = a.family {
        cfg.family = match f {
            FamilyArg::Logpow => FamilySpec::Logpow,
            FamilyArg::Gaussian => FamilySpec::Gaussian,
            FamilyArg::Bump => FamilySpec::Bump,
        };
        if cfg.family != FamilySpec::Logpow {
            cfg.delta.clear();
            cfg.convergence = None;
        }
    }
    if let Some(k) = a.points {
        cfg.p = Some(PGrid::Points(k));
    }
    if let Some(f) = a.format {
        cfg.output.format = f.into();
    }
    if let Some(o) = &a.output {
        cfg.output.path = Some(o.clone());
    }
    if let Some(p) = a.precision {
        cfg.output.precision = p;
    }
    if let Some(c) = &a.columns {
        cfg.output.columns = Some(c.clone());
    }
    cfg.validate()?;
    let records = sweep(&cfg);
    emit_table(&records, &cfg.output)?;
    let s = Summary::of(&records);
    eprintln!("{s}");
    Ok(s.exit_code())
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Constant(c) => constant(c),
        Command::Exponent(a) => exponent(a),
        Command::Norm(n) => norm(n),
        Command::Transform(t) => transform(t),
        Command::Verify(v) => verify(v),
        Command::Sweep(s) => run_sweep(s),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            match &e {
                Error::Validation(list) => {
                    for item in list {
                        eprintln!("error: {item}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            eprintln!("summary status=error code={code}");
            code
        }
    }
}
