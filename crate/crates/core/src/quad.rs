//! Adaptive Gauss–Kronrod quadrature.
//!
//! Finite intervals use globally adaptive bisection with the 21-point
//! Kronrod rule. Half-lines are covered by geometrically growing segments;
//! a half-line integral that has not settled after [`MAX_TAIL_SEGMENTS`]
//! doublings is reported as divergent. Integrands with an integrable
//! endpoint singularity at `0` are expected to be handed in after the
//! substitution `x = c·e^{-s}`, which turns them into half-line integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_643_474_947,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd Kronrod abscissae
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub const MAX_TAIL_SEGMENTS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Cap on the total number of subintervals for one integral.
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-10,
            max_intervals: 10_000,
        }
    }
}

impl Tolerance {
    /// Pure relative tolerance; used where the integral's scale is unknown.
    pub fn relative(rel: f64) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Rule {
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Rule {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    let value = res_k * half;
    let error = rescale_error((res_k - res_g) * half, res_abs * abs_half, res_asc * abs_half);
    Rule { value, error }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    rule: Rule,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.error.total_cmp(&other.rule.error)
    }
}

fn non_finite(op: &'static str, a: f64, b: f64) -> Error {
    Error::divergence(op, format!("integrand not finite on [{a}, {b}]"))
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_budget(&f, a, b, tol, tol.max_intervals)
}

fn integrate_budget<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: Tolerance,
    budget: usize,
) -> Result<Estimate> {
    const OP: &str = "integrate";
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(OP, format!("bounds [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            intervals: 0,
        });
    }
    let first = gk21(f, a, b);
    if !first.value.is_finite() || !first.error.is_finite() {
        return Err(non_finite(OP, a, b));
    }
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, rule: first });
    // pieces too narrow to split further
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut intervals = 1;

    while error > tol.abs.max(tol.rel * value.abs()) {
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        let width = worst.b - worst.a;
        if width.abs() <= 8.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            frozen_value += worst.rule.value;
            frozen_error += worst.rule.error;
            continue;
        }
        if intervals >= budget {
            return Err(Error::divergence(
                OP,
                format!(
                    "no convergence on [{a}, {b}] within {budget} subintervals \
                     (estimate {value:e}, error {error:e})"
                ),
            ));
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(non_finite(OP, worst.a, worst.b));
        }
        intervals += 1;
        value += left.value + right.value - worst.rule.value;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            rule: left,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            rule: right,
        });
        error += left.error + right.error - worst.rule.error;
        if intervals % 64 == 0 {
            // resum to avoid drift from repeated subtraction
            error = frozen_error + heap.iter().map(|p| p.rule.error).sum::<f64>();
        }
    }
    let value = frozen_value + heap.iter().map(|p| p.rule.value).sum::<f64>();
    let error = frozen_error + heap.iter().map(|p| p.rule.error).sum::<f64>();
    Ok(Estimate {
        value,
        abs_error: error,
        intervals,
    })
}

/// `∫_a^∞ f`, integrated over segments `[a + w(2^k - 1), a + w(2^{k+1} - 1)]`.
///
/// Stops once two consecutive segments contribute less than the tolerance
/// relative to the running total. Failing to settle within
/// [`MAX_TAIL_SEGMENTS`] segments, or exhausting the interval budget, is
/// reported as divergence.
pub fn integrate_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    first_width: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    const OP: &str = "integrate_tail";
    if !(first_width > 0.0) || !a.is_finite() {
        return Err(Error::domain(OP, "need finite start and positive width"));
    }
    let mut total: f64 = 0.0;
    let mut abs_error = 0.0;
    let mut intervals = 0;
    let mut quiet = 0;
    let mut lo = a;
    let mut width = first_width;
    for _ in 0..MAX_TAIL_SEGMENTS {
        let hi = lo + width;
        let seg_tol = Tolerance {
            abs: tol.abs.max(0.25 * tol.rel * total.abs()),
            rel: tol.rel,
            max_intervals: tol.max_intervals,
        };
        let budget = tol.max_intervals.saturating_sub(intervals);
        let seg = match integrate_budget(&f, lo, hi, seg_tol, budget.max(1)) {
            Ok(s) => s,
            Err(Error::Divergence { msg, .. }) => {
                return Err(Error::divergence(OP, format!("tail from {a}: {msg}")))
            }
            Err(e) => return Err(e),
        };
        total += seg.value;
        abs_error += seg.abs_error;
        intervals += seg.intervals;
        let small = seg.value.abs() <= tol.abs.max(tol.rel * total.abs());
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= 2 {
            return Ok(Estimate {
                value: total,
                abs_error: abs_error + seg.value.abs(),
                intervals,
            });
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::divergence(
        OP,
        format!(
            "integral from {a} did not settle within {MAX_TAIL_SEGMENTS} doubling segments \
             (partial {total:e})"
        ),
    ))
}
