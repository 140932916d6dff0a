//! Sweep configuration: a TOML document, validated in full before any
//! computation. See the README for the grammar.

use std::fmt;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::exponents::Setting;
use crate::gls::{BoundCurve, Endpoint, NormKind};
use crate::radial::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Ordinary,
    Trace,
    Weighted,
    GlsTheorem1,
    Hardy,
}

impl Target {
    const ALL: [(Target, &'static str); 5] = [
        (Target::Ordinary, "ordinary"),
        (Target::Trace, "trace"),
        (Target::Weighted, "weighted"),
        (Target::GlsTheorem1, "gls_theorem1"),
        (Target::Hardy, "hardy"),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(t, _)| *t == self).map(|x| x.1).unwrap_or("")
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().find(|(_, n)| *n == s).map(|x| x.0)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    Logpow,
    Gaussian,
    Bump,
}

impl FamilySpec {
    pub fn name(self) -> &'static str {
        match self {
            FamilySpec::Logpow => "logpow",
            FamilySpec::Gaussian => "gaussian",
            FamilySpec::Bump => "bump",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "logpow" => Some(FamilySpec::Logpow),
            "gaussian" => Some(FamilySpec::Gaussian),
            "bump" => Some(FamilySpec::Bump),
            _ => None,
        }
    }

    /// The profile on `R^dim`; `delta` is used by the log-power family only.
    pub fn profile(self, dim: u32, delta: Option<f64>) -> Result<RadialProfile> {
        match self {
            FamilySpec::Logpow => RadialProfile::logpow(dim, delta.unwrap_or(1.0)),
            FamilySpec::Gaussian => RadialProfile::gaussian(dim),
            FamilySpec::Bump => RadialProfile::bump(dim),
        }
    }
}

/// Gradient exponents to visit for each setting.
#[derive(Debug, Clone, PartialEq)]
pub enum PGrid {
    Values(Vec<f64>),
    /// `k` equally spaced interior points of `(max(1, p_lo), p_hi)`.
    Points(usize),
    /// `p_hi - 10^{-j}` for each `j`.
    Ladder(Vec<i32>),
}

impl PGrid {
    pub fn values_for(&self, s: &Setting) -> Vec<f64> {
        let r = s.p_range();
        let lo = r.lo.max(1.0);
        match self {
            PGrid::Values(v) => v.clone(),
            PGrid::Points(k) => (1..=*k).map(|i| lo + (r.hi - lo) * i as f64 / (*k + 1) as f64).collect(),
            PGrid::Ladder(js) => js.iter().map(|j| r.hi - 10f64.powi(-j)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundSpec {
    Talenti,
    TraceUpper,
    Constant(f64),
}

impl BoundSpec {
    pub fn curve(self, s: &Setting) -> BoundCurve {
        match self {
            BoundSpec::Talenti => BoundCurve::Talenti { m: s.m() },
            BoundSpec::TraceUpper => BoundCurve::TraceUpper { m: s.m(), n: s.n() },
            BoundSpec::Constant(c) => BoundCurve::Constant(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiSpec {
    Natural { norm: NormKind },
    PowerBlowup { beta: f64, endpoint: Endpoint },
    Constant { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: Format,
    pub path: Option<String>,
    pub precision: usize,
    pub columns: Option<Vec<String>>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            format: Format::Csv,
            path: None,
            precision: 6,
            columns: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub target: Target,
    pub family: FamilySpec,
    pub m: Vec<u32>,
    pub n: Vec<u32>,
    pub alpha: Vec<f64>,
    /// Empty for families without a Δ parameter.
    pub delta: Vec<f64>,
    pub p: Option<PGrid>,
    /// Exponents `j` of the `p_hi - 10^{-j}` convergence ladder.
    pub convergence: Option<Vec<i32>>,
    pub bound: Option<BoundSpec>,
    pub psi: Option<PsiSpec>,
    pub output: OutputSpec,
}

pub const COLUMNS: [&str; 14] = [
    "kind", "m", "n", "alpha", "family", "delta", "p", "q", "lhs", "constant", "rhs", "ratio", "pass", "notes",
];

impl SweepConfig {
    /// Settings in grid order (m outermost, then n, then α).
    pub fn settings(&self) -> Vec<Setting> {
        let mut out = Vec::new();
        for &m in &self.m {
            for &n in &self.n {
                for &a in &self.alpha {
                    if let Ok(s) = Setting::new(m, n, a) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// `Some(Δ)` per grid entry, or a single `None` for Δ-free families.
    pub fn deltas(&self) -> Vec<Option<f64>> {
        if self.delta.is_empty() {
            vec![None]
        } else {
            self.delta.iter().map(|d| Some(*d)).collect()
        }
    }

    pub fn bound_for(&self, s: &Setting) -> Option<BoundCurve> {
        match self.bound {
            Some(b) => Some(b.curve(s)),
            None if s.alpha() == 0.0 && s.n() == 0 => Some(BoundCurve::Talenti { m: s.m() }),
            None if s.alpha() == 0.0 => Some(BoundCurve::TraceUpper { m: s.m(), n: s.n() }),
            None => None,
        }
    }

    /// Every problem with the configuration, or nothing.
    pub fn validate(&self) -> Result<()> {
        let errs = validation_errors(self);
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }
}

fn fmt_bound(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

fn validation_errors(c: &SweepConfig) -> Vec<String> {
    let mut e = Vec::new();
    if c.m.is_empty() {
        e.push("m must list at least one dimension".to_string());
    }
    if c.n.is_empty() {
        e.push("n must list at least one value".to_string());
    }
    if c.alpha.is_empty() {
        e.push("alpha must list at least one value".to_string());
    }
    let logpow = c.family == FamilySpec::Logpow;
    if logpow && c.delta.is_empty() {
        e.push("delta must list at least one value for family logpow".to_string());
    }
    if !logpow && !c.delta.is_empty() {
        e.push(format!("delta is not a parameter of family {}", c.family.name()));
    }
    for d in &c.delta {
        if !(*d >= 1.0 && d.is_finite()) {
            e.push(format!("delta = {d} must be finite and >= 1"));
        }
    }
    if matches!(c.target, Target::GlsTheorem1 | Target::Hardy) && !logpow {
        e.push(format!("target {} requires family logpow", c.target));
    }

    let mut settings = Vec::new();
    for &m in &c.m {
        for &n in &c.n {
            for &a in &c.alpha {
                match Setting::new(m, n, a) {
                    Ok(s) => settings.push(s),
                    Err(err) => e.push(format!("(m={m}, n={n}, alpha={a}): {err}")),
                }
            }
        }
    }
    for s in &settings {
        let tag = format!("(m={}, n={}, alpha={})", s.m(), s.n(), s.alpha());
        match c.target {
            Target::Ordinary | Target::GlsTheorem1 => {
                if s.n() != 0 || s.alpha() != 0.0 {
                    e.push(format!("target {} needs n = 0 and alpha = 0, got {tag}", c.target));
                }
            }
            Target::Trace => {
                if s.n() == 0 || s.alpha() != 0.0 {
                    e.push(format!("target trace needs n >= 1 and alpha = 0, got {tag}"));
                }
            }
            Target::Hardy => {
                if s.alpha() != 0.0 {
                    e.push(format!("target hardy needs alpha = 0, got {tag}"));
                }
            }
            Target::Weighted => {}
        }
    }
    if c.target == Target::Weighted && c.bound.is_none() && c.alpha.iter().any(|a| *a > 0.0) {
        e.push("target weighted with alpha > 0 needs an explicit [bound] table".to_string());
    }
    if c.target != Target::Weighted && c.bound.is_some() {
        e.push(format!("[bound] is only used by target weighted, not {}", c.target));
    }
    if c.target != Target::GlsTheorem1 && c.psi.is_some() {
        e.push(format!("[psi] is only used by target gls_theorem1, not {}", c.target));
    }
    if let Some(BoundSpec::Constant(v)) = c.bound {
        if !(v > 0.0 && v.is_finite()) {
            e.push(format!("bound value {v} must be positive and finite"));
        }
    }
    match c.psi {
        Some(PsiSpec::PowerBlowup { beta, .. }) if !(beta > 0.0 && beta.is_finite()) => {
            e.push(format!("psi beta = {beta} must be positive"));
        }
        Some(PsiSpec::Constant { value }) if !(value > 0.0 && value.is_finite()) => {
            e.push(format!("psi value {value} must be positive and finite"));
        }
        _ => {}
    }

    match (&c.p, c.target) {
        (None, Target::GlsTheorem1) => {}
        (Some(_), Target::GlsTheorem1) => e.push("target gls_theorem1 takes no [p] table".to_string()),
        (None, _) => e.push("a [p] table with values, points or ladder is required".to_string()),
        (Some(grid), _) => {
            for s in &settings {
                let r = s.p_range();
                let lo = r.lo.max(1.0);
                match grid {
                    PGrid::Values(v) => {
                        if v.is_empty() {
                            e.push("p values must not be empty".to_string());
                        }
                        for p in v {
                            if !(*p > lo && *p < r.hi) {
                                e.push(format!(
                                    "p = {p} for (m={}, n={}, alpha={}): p must lie in ({}, {})",
                                    s.m(),
                                    s.n(),
                                    s.alpha(),
                                    fmt_bound(lo),
                                    fmt_bound(r.hi)
                                ));
                            }
                        }
                    }
                    PGrid::Points(k) => {
                        if *k == 0 {
                            e.push("p points must be >= 1".to_string());
                        }
                        if !r.is_bounded() {
                            e.push(format!("p points need a bounded p-range, alpha = {} has none", s.alpha()));
                        }
                    }
                    PGrid::Ladder(js) => {
                        if js.is_empty() {
                            e.push("p ladder must not be empty".to_string());
                        }
                        if !r.is_bounded() {
                            e.push(format!("p ladder needs a bounded p-range, alpha = {} has none", s.alpha()));
                        }
                        for j in js {
                            if *j < 1 || r.hi - 10f64.powi(-j) <= lo {
                                e.push(format!("p ladder exponent {j} puts p outside ({}, {})", lo, fmt_bound(r.hi)));
                            }
                        }
                    }
                }
                if c.target == Target::Hardy {
                    for p in grid.values_for(s) {
                        if p < f64::from(s.n()) {
                            e.push(format!("target hardy needs p >= n = {} (p <= q), got p = {p}", s.n()));
                        }
                    }
                }
            }
        }
    }

    if let Some(js) = &c.convergence {
        if !matches!(c.target, Target::Ordinary | Target::Trace | Target::Weighted) || !logpow {
            e.push("[convergence] applies to targets ordinary, trace and weighted with family logpow".to_string());
        }
        if js.len() < 2 {
            e.push("convergence ladder needs at least two exponents".to_string());
        }
        if js.windows(2).any(|w| w[1] <= w[0]) || js.iter().any(|j| *j < 1 || *j > 15) {
            e.push("convergence ladder must be strictly increasing integers in [1, 15]".to_string());
        }
        if settings.iter().any(|s| !s.p_range().is_bounded()) {
            e.push("convergence rows need a bounded p-range (alpha < 1)".to_string());
        }
    }

    if c.output.precision > 17 {
        e.push(format!("precision = {} must be <= 17", c.output.precision));
    }
    if let Some(cols) = &c.output.columns {
        if cols.len() != 2 {
            e.push(format!("columns must name exactly two columns, got {}", cols.len()));
        }
        for col in cols {
            if !COLUMNS.contains(&col.as_str()) {
                e.push(format!("unknown column {col:?}"));
            }
        }
    }
    e.sort();
    e.dedup();
    e
}

struct Reader {
    errors: Vec<String>,
}

impl Reader {
    fn unknown_keys(&mut self, t: &Table, scope: &str, known: &[&str]) {
        for k in t.keys() {
            if !known.contains(&k.as_str()) {
                self.errors.push(format!("unknown key {scope}{k}"));
            }
        }
    }

    fn string(&mut self, t: &Table, key: &str, scope: &str) -> Option<String> {
        match t.get(key)? {
            Value::String(s) => Some(s.clone()),
            _ => {
                self.errors.push(format!("{scope}{key} must be a string"));
                None
            }
        }
    }

    fn float(&mut self, v: &Value, what: &str) -> Option<f64> {
        match v {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.errors.push(format!("{what} must be a number"));
                None
            }
        }
    }

    fn int(&mut self, v: &Value, what: &str) -> Option<i64> {
        match v {
            Value::Integer(i) => Some(*i),
            _ => {
                self.errors.push(format!("{what} must be an integer"));
                None
            }
        }
    }

    fn list<T>(&mut self, v: &Value, mut one: impl FnMut(&mut Self, &Value) -> Option<T>) -> Vec<T> {
        match v {
            Value::Array(a) => a.iter().filter_map(|x| one(self, x)).collect(),
            scalar => one(self, scalar).into_iter().collect(),
        }
    }

    fn table<'a>(&mut self, t: &'a Table, key: &str) -> Option<&'a Table> {
        match t.get(key)? {
            Value::Table(x) => Some(x),
            _ => {
                self.errors.push(format!("{key} must be a table"));
                None
            }
        }
    }
}

fn parse_u32s(r: &mut Reader, v: &Value, what: &str) -> Vec<u32> {
    r.list(v, |r, x| {
        let i = r.int(x, what)?;
        match u32::try_from(i) {
            Ok(u) => Some(u),
            Err(_) => {
                r.errors.push(format!("{what} = {i} must be a non-negative integer"));
                None
            }
        }
    })
}

fn parse_f64s(r: &mut Reader, v: &Value, what: &str) -> Vec<f64> {
    r.list(v, |r, x| r.float(x, what))
}

fn parse_i32s(r: &mut Reader, v: &Value, what: &str) -> Vec<i32> {
    r.list(v, |r, x| {
        let i = r.int(x, what)?;
        i32::try_from(i).ok().or_else(|| {
            r.errors.push(format!("{what} = {i} is out of range"));
            None
        })
    })
}

/// Parse without domain validation.
fn parse_raw(text: &str) -> Result<SweepConfig> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Validation(vec![format!("not valid TOML: {}", e.message())]))?;
    let mut r = Reader { errors: Vec::new() };
    r.unknown_keys(
        &doc,
        "",
        &["target", "family", "m", "n", "alpha", "delta", "p", "convergence", "bound", "psi", "output"],
    );

    let target = match r.string(&doc, "target", "") {
        Some(s) => Target::parse(&s).or_else(|| {
            r.errors.push(format!("unknown target {s:?}"));
            None
        }),
        None => {
            if !doc.contains_key("target") {
                r.errors.push("target is required".to_string());
            }
            None
        }
    };
    let family = match r.string(&doc, "family", "") {
        Some(s) => FamilySpec::parse(&s).unwrap_or_else(|| {
            r.errors.push(format!("unknown family {s:?}"));
            FamilySpec::Logpow
        }),
        None => FamilySpec::Logpow,
    };
    let m = match doc.get("m") {
        Some(v) => parse_u32s(&mut r, v, "m"),
        None => {
            r.errors.push("m is required".to_string());
            Vec::new()
        }
    };
    let n = doc.get("n").map_or(vec![0], |v| parse_u32s(&mut r, v, "n"));
    let alpha = doc.get("alpha").map_or(vec![0.0], |v| parse_f64s(&mut r, v, "alpha"));
    let delta = match doc.get("delta") {
        Some(v) => parse_f64s(&mut r, v, "delta"),
        None if family == FamilySpec::Logpow => vec![1.0],
        None => Vec::new(),
    };

    let p = r.table(&doc, "p").and_then(|t| {
        r.unknown_keys(t, "p.", &["values", "points", "ladder"]);
        let given: Vec<&str> = ["values", "points", "ladder"].into_iter().filter(|k| t.contains_key(*k)).collect();
        if given.len() > 1 {
            r.errors.push(format!("p.{} are mutually exclusive", given.join(" and p.")));
            return None;
        }
        if let Some(v) = t.get("values") {
            Some(PGrid::Values(parse_f64s(&mut r, v, "p.values")))
        } else if let Some(v) = t.get("points") {
            let k = r.int(v, "p.points")?;
            Some(PGrid::Points(usize::try_from(k).unwrap_or(0)))
        } else if let Some(v) = t.get("ladder") {
            Some(PGrid::Ladder(parse_i32s(&mut r, v, "p.ladder")))
        } else {
            r.errors.push("[p] needs one of values, points or ladder".to_string());
            None
        }
    });

    let convergence = r.table(&doc, "convergence").map(|t| {
        r.unknown_keys(t, "convergence.", &["ladder"]);
        match t.get("ladder") {
            Some(v) => parse_i32s(&mut r, v, "convergence.ladder"),
            None => {
                r.errors.push("convergence.ladder is required".to_string());
                Vec::new()
            }
        }
    });

    let bound = r.table(&doc, "bound").and_then(|t| {
        r.unknown_keys(t, "bound.", &["kind", "value"]);
        match r.string(t, "kind", "bound.").as_deref() {
            Some("talenti") => Some(BoundSpec::Talenti),
            Some("trace_upper") => Some(BoundSpec::TraceUpper),
            Some("constant") => match t.get("value") {
                Some(v) => r.float(v, "bound.value").map(BoundSpec::Constant),
                None => {
                    r.errors.push("bound.value is required for kind constant".to_string());
                    None
                }
            },
            Some(other) => {
                r.errors.push(format!("unknown bound kind {other:?}"));
                None
            }
            None => {
                r.errors.push("bound.kind is required".to_string());
                None
            }
        }
    });

    let psi = r.table(&doc, "psi").and_then(|t| {
        r.unknown_keys(t, "psi.", &["kind", "norm", "beta", "endpoint", "value"]);
        match r.string(t, "kind", "psi.").as_deref() {
            Some("natural") => {
                let norm = match r.string(t, "norm", "psi.").as_deref() {
                    None | Some("gradient") => NormKind::Gradient,
                    Some("function") => NormKind::Function,
                    Some(other) => {
                        r.errors.push(format!("unknown psi norm {other:?}"));
                        NormKind::Gradient
                    }
                };
                Some(PsiSpec::Natural { norm })
            }
            Some("power_blowup") => {
                let beta = match t.get("beta") {
                    Some(v) => r.float(v, "psi.beta")?,
                    None => {
                        r.errors.push("psi.beta is required for kind power_blowup".to_string());
                        return None;
                    }
                };
                let endpoint = match r.string(t, "endpoint", "psi.").as_deref() {
                    None | Some("upper") => Endpoint::Upper,
                    Some("lower") => Endpoint::Lower,
                    Some(other) => {
                        r.errors.push(format!("unknown psi endpoint {other:?}"));
                        Endpoint::Upper
                    }
                };
                Some(PsiSpec::PowerBlowup { beta, endpoint })
            }
            Some("constant") => {
                let value = t.get("value").map_or(Some(1.0), |v| r.float(v, "psi.value"))?;
                Some(PsiSpec::Constant { value })
            }
            Some(other) => {
                r.errors.push(format!("unknown psi kind {other:?}"));
                None
            }
            None => {
                r.errors.push("psi.kind is required".to_string());
                None
            }
        }
    });

    let mut output = OutputSpec::default();
    if let Some(t) = r.table(&doc, "output") {
        r.unknown_keys(t, "output.", &["format", "path", "precision", "columns"]);
        match r.string(t, "format", "output.").as_deref() {
            None | Some("csv") => {}
            Some("json") => output.format = Format::Json,
            Some(other) => r.errors.push(format!("unknown output format {other:?}")),
        }
        output.path = r.string(t, "path", "output.");
        if let Some(v) = t.get("precision") {
            if let Some(k) = r.int(v, "output.precision") {
                output.precision = usize::try_from(k).unwrap_or(usize::MAX);
            }
        }
        if let Some(v) = t.get("columns") {
            output.columns = Some(r.list(v, |r, x| match x {
                Value::String(s) => Some(s.clone()),
                _ => {
                    r.errors.push("output.columns must be strings".to_string());
                    None
                }
            }));
        }
    }

    if !r.errors.is_empty() {
        return Err(Error::Validation(r.errors));
    }
    Ok(SweepConfig {
        target: target.expect("target checked above"),
        family,
        m,
        n,
        alpha,
        delta,
        p,
        convergence,
        bound,
        psi,
        output,
    })
}

/// Parse and validate a TOML sweep configuration, reporting every problem.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let c = parse_raw(text)?;
    c.validate()?;
    Ok(c)
}

fn float_list(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| Value::Float(*x)).collect())
}

fn int_list<T: Into<i64> + Copy>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| Value::Integer((*x).into())).collect())
}

/// Canonical TOML text for a configuration; `parse_config` inverts it.
pub fn render_config(c: &SweepConfig) -> String {
    let mut doc = Table::new();
    doc.insert("target".into(), Value::String(c.target.name().into()));
    doc.insert("family".into(), Value::String(c.family.name().into()));
    doc.insert("m".into(), int_list(&c.m));
    doc.insert("n".into(), int_list(&c.n));
    doc.insert("alpha".into(), float_list(&c.alpha));
    if !c.delta.is_empty() {
        doc.insert("delta".into(), float_list(&c.delta));
    }
    if let Some(grid) = &c.p {
        let mut t = Table::new();
        match grid {
            PGrid::Values(v) => t.insert("values".into(), float_list(v)),
            PGrid::Points(k) => t.insert("points".into(), Value::Integer(*k as i64)),
            PGrid::Ladder(js) => t.insert("ladder".into(), int_list(js)),
        };
        doc.insert("p".into(), Value::Table(t));
    }
    if let Some(js) = &c.convergence {
        let mut t = Table::new();
        t.insert("ladder".into(), int_list(js));
        doc.insert("convergence".into(), Value::Table(t));
    }
    if let Some(b) = c.bound {
        let mut t = Table::new();
        let kind = match b {
            BoundSpec::Talenti => "talenti",
            BoundSpec::TraceUpper => "trace_upper",
            BoundSpec::Constant(v) => {
                t.insert("value".into(), Value::Float(v));
                "constant"
            }
        };
        t.insert("kind".into(), Value::String(kind.into()));
        doc.insert("bound".into(), Value::Table(t));
    }
    if let Some(psi) = c.psi {
        let mut t = Table::new();
        match psi {
            PsiSpec::Natural { norm } => {
                t.insert("kind".into(), Value::String("natural".into()));
                let n = if norm == NormKind::Gradient { "gradient" } else { "function" };
                t.insert("norm".into(), Value::String(n.into()));
            }
            PsiSpec::PowerBlowup { beta, endpoint } => {
                t.insert("kind".into(), Value::String("power_blowup".into()));
                t.insert("beta".into(), Value::Float(beta));
                let e = if endpoint == Endpoint::Upper { "upper" } else { "lower" };
                t.insert("endpoint".into(), Value::String(e.into()));
            }
            PsiSpec::Constant { value } => {
                t.insert("kind".into(), Value::String("constant".into()));
                t.insert("value".into(), Value::Float(value));
            }
        }
        doc.insert("psi".into(), Value::Table(t));
    }
    let mut t = Table::new();
    let f = if c.output.format == Format::Csv { "csv" } else { "json" };
    t.insert("format".into(), Value::String(f.into()));
    if let Some(p) = &c.output.path {
        t.insert("path".into(), Value::String(p.clone()));
    }
    t.insert("precision".into(), Value::Integer(c.output.precision as i64));
    if let Some(cols) = &c.output.columns {
        t.insert("columns".into(), Value::Array(cols.iter().map(|s| Value::String(s.clone())).collect()));
    }
    doc.insert("output".into(), Value::Table(t));
    toml::to_string(&doc).expect("a TOML table always serializes")
}
