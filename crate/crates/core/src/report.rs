//! CSV and JSON tables of sweep records.
//!
//! Output depends only on the records and the output spec: fixed column
//! order, fixed number formatting, rows in the order given.

use std::fmt;
use std::io::Write;

use crate::config::{Format, OutputSpec, COLUMNS};
use crate::error::{Error, Result};
use crate::sharpness::{SweepRecord, Verdict};
use crate::specfun::LogValue;

/// Magnitudes outside `[1e-12, 1e12)` switch to scientific notation.
const SCI_ABOVE: f64 = 12.0;

pub fn format_f64(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a != 0.0 && (a >= 10f64.powf(SCI_ABOVE) || a < 10f64.powf(-SCI_ABOVE)) {
        format!("{x:.precision$e}")
    } else {
        format!("{x:.precision$}")
    }
}

/// Like [`format_f64`], but built from the logarithm so values beyond the
/// double range still print with a correct mantissa.
pub fn format_log(v: LogValue, precision: usize) -> String {
    if v.is_zero() {
        return format_f64(0.0, precision);
    }
    let l10 = v.log_abs() / std::f64::consts::LN_10;
    if l10.is_nan() {
        return "nan".into();
    }
    if l10.abs() < SCI_ABOVE || !l10.is_finite() {
        return format_f64(v.to_linear(), precision);
    }
    let mut e = l10.floor();
    let mut mant = 10f64.powf(l10 - e);
    if format!("{mant:.precision$}").starts_with("10") {
        mant /= 10.0;
        e += 1.0;
    }
    let sign = if v.sign() < 0 { "-" } else { "" };
    format!("{sign}{mant:.precision$}e{e}")
}

enum Cell {
    Num(String),
    Text(String),
    Empty,
}

fn num(x: f64, precision: usize) -> Cell {
    Cell::Num(format_f64(x, precision))
}

fn opt_log(v: Option<LogValue>, precision: usize) -> Cell {
    v.map_or(Cell::Empty, |v| Cell::Num(format_log(v, precision)))
}

fn cells(r: &SweepRecord, precision: usize) -> Vec<(&'static str, Cell)> {
    let vals = vec![
        Cell::Text(r.kind.name().into()),
        Cell::Num(r.setting.m().to_string()),
        Cell::Num(r.setting.n().to_string()),
        num(r.setting.alpha(), precision),
        Cell::Text(r.family.clone()),
        r.delta.map_or(Cell::Empty, |d| num(d, precision)),
        num(r.p, precision),
        num(r.q, precision),
        opt_log(r.lhs, precision),
        opt_log(r.bound_constant, precision),
        opt_log(r.rhs, precision),
        num(r.ratio, precision),
        Cell::Text(r.pass.name().into()),
        Cell::Text(r.notes.clone()),
    ];
    COLUMNS.iter().copied().zip(vals).collect()
}

fn selected(spec: &OutputSpec) -> Result<Vec<&'static str>> {
    match &spec.columns {
        None => Ok(COLUMNS.to_vec()),
        Some(cols) => cols
            .iter()
            .map(|c| {
                COLUMNS
                    .iter()
                    .copied()
                    .find(|k| k == c)
                    .ok_or_else(|| Error::Validation(vec![format!("unknown column {c:?}")]))
            })
            .collect(),
    }
}

fn render_csv(records: &[SweepRecord], spec: &OutputSpec) -> Result<String> {
    let cols = selected(spec)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&cols).map_err(io)?;
    for r in records {
        let row = cells(r, spec.precision);
        let out: Vec<String> = cols
            .iter()
            .map(|c| match &row.iter().find(|(k, _)| k == c).expect("known column").1 {
                Cell::Num(s) | Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            })
            .collect();
        w.write_record(&out).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn render_json(records: &[SweepRecord], spec: &OutputSpec) -> Result<String> {
    let cols = selected(spec)?;
    let mut out = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        let row = cells(r, spec.precision);
        let fields: Vec<String> = cols
            .iter()
            .map(|c| {
                let v = match &row.iter().find(|(k, _)| k == c).expect("known column").1 {
                    Cell::Num(s) if s.parse::<f64>().is_ok_and(f64::is_finite) => s.clone(),
                    Cell::Num(_) | Cell::Empty => "null".into(),
                    Cell::Text(s) => json_string(s),
                };
                format!("{}: {v}", json_string(c))
            })
            .collect();
        out.push_str("  {");
        out.push_str(&fields.join(", "));
        out.push('}');
        if i + 1 < records.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    Ok(out)
}

/// The table as text in the configured format.
pub fn render_table(records: &[SweepRecord], spec: &OutputSpec) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Validation(vec!["no records to write".into()]));
    }
    match spec.format {
        Format::Csv => render_csv(records, spec),
        Format::Json => render_json(records, spec),
    }
}

/// Write the table to `spec.path`, or to stdout when no path is set.
pub fn emit_table(records: &[SweepRecord], spec: &OutputSpec) -> Result<()> {
    let text = render_table(records, spec)?;
    match &spec.path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{p}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub rows: usize,
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
}

impl Summary {
    pub fn of(records: &[SweepRecord]) -> Self {
        let mut s = Summary {
            rows: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.pass {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Indeterminate => s.indeterminate += 1,
            }
        }
        s
    }

    /// 0 all pass, 1 some row fails, 3 some row could not be evaluated.
    pub fn exit_code(&self) -> i32 {
        if self.fail > 0 {
            1
        } else if self.indeterminate > 0 {
            3
        } else {
            0
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.exit_code() {
            0 => "ok",
            1 => "fail",
            _ => "indeterminate",
        };
        write!(
            f,
            "summary status={status} rows={} pass={} fail={} indeterminate={}",
            self.rows, self.pass, self.fail, self.indeterminate
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Setting;
    use crate::gls::BoundCurve;
    use crate::sharpness::logpow_record;

    fn record() -> SweepRecord {
        logpow_record(Setting::ordinary(3).unwrap(), 1.0, 2.0, &BoundCurve::Talenti { m: 3 }).unwrap()
    }

    #[test]
    fn number_formats() {
        assert_eq!(format_f64(0.836535821, 6), "0.836536");
        assert_eq!(format_f64(2.5e13, 3), "2.500e13");
        assert_eq!(format_f64(3e-13, 2), "3.00e-13");
        assert_eq!(format_f64(0.0, 2), "0.00");
        assert_eq!(format_f64(f64::INFINITY, 2), "inf");
        assert_eq!(format_log(LogValue::from_log(1000.0 * std::f64::consts::LN_10), 4), "1.0000e1000");
        assert_eq!(format_log(LogValue::from_linear(2.5e13), 3), "2.500e13");
        assert_eq!(format_log(LogValue::from_linear(0.5), 3), "0.500");
    }

    #[test]
    fn one_record_csv() {
        let spec = OutputSpec::default();
        let text = render_table(&[record()], &spec).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], COLUMNS.join(","));
        assert!(lines[1].contains(",0.836536,pass,"), "{}", lines[1]);
    }

    #[test]
    fn two_columns_and_json() {
        let spec = OutputSpec {
            columns: Some(vec!["p".into(), "ratio".into()]),
            ..OutputSpec::default()
        };
        assert_eq!(render_table(&[record()], &spec).unwrap(), "p,ratio\n2.000000,0.836536\n");
        let spec = OutputSpec {
            format: Format::Json,
            ..spec
        };
        let text = render_table(&[record(), record()], &spec).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert_eq!(v[0]["ratio"].as_f64().unwrap(), 0.836536);
        assert!(!text.lines().any(|l| l.ends_with(' ')));
    }

    #[test]
    fn empty_is_error() {
        assert!(render_table(&[], &OutputSpec::default()).is_err());
    }

    #[test]
    fn unwritable_path() {
        let spec = OutputSpec {
            path: Some("/nonexistent-dir/x.csv".into()),
            ..OutputSpec::default()
        };
        assert!(matches!(emit_table(&[record()], &spec), Err(Error::Io(_))));
    }
}
