//! Effective bounds for the planar walk: Robbins' factorial bracket, the
//! `u_{2n}` constants and the upper and lower bounds on the non-return gap
//! `1 - a_N / 4^N`, checked against exact and floating computations.
//!
//! All logarithms are natural.
//!
//! The gap is computed from the return series alone. With `u_{2m} = C(2m,m)^2 / 16^m`
//! and `R = 1/U`, the first-return relation gives `1 - sum_{j<=N} c_j/4^j = sum_{m<=N/2} r_m`.
//! Only even powers occur, so the work is done on the halved series in `z = x^2`.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::interval::Interval;
use crate::lattice::closed_form;
use crate::series::{fast, integer};

pub const EXACT_CAP: usize = 5000;
pub const FLOAT_CAP: usize = 200_000;
pub const LOWER_BOUND_THRESHOLD: usize = 140_000;

/// Robbins' bracket `sqrt(2 pi n) (n/e)^n e^{1/(12n+1)} <= n! <= sqrt(2 pi n) (n/e)^n e^{1/(12n)}`.
pub fn robbins_factorial_bounds(n: u64) -> Result<Interval> {
    if n == 0 {
        return invalid("the factorial bracket needs n >= 1");
    }
    let ni = Interval::from_int(n as i64);
    let log_base = (Interval::from_int(2) * Interval::pi() * ni).ln().unwrap() * Interval::from_fraction(1, 2)
        + ni * ni.ln().unwrap()
        - ni;
    let lo = (log_base + Interval::one().checked_div(&Interval::from_int(12 * n as i64 + 1)).unwrap()).exp();
    let hi = (log_base + Interval::one().checked_div(&Interval::from_int(12 * n as i64)).unwrap()).exp();
    Ok(Interval::new(lo.lo(), hi.hi()))
}

#[derive(Debug, Clone, Serialize)]
pub struct U2nReport {
    pub max_n: usize,
    pub ok: bool,
    pub first_violation: Option<usize>,
    /// Smallest and largest enclosed value of `n u_{2n}` over the range.
    pub min_scaled: f64,
    pub max_scaled: f64,
}

/// Checks `0.228/n <= u_{2n} <= 0.346/n` for `1 <= n <= max_n` with the recurrence
/// `u_{2n} = u_{2n-2} ((2n-1)/(2n))^2`, carried in interval arithmetic.
pub fn u2n_bounds_check(max_n: usize) -> Result<U2nReport> {
    if max_n == 0 {
        return invalid("range must contain n = 1");
    }
    let lo_c = Interval::from_fraction(228, 1000);
    let hi_c = Interval::from_fraction(346, 1000);
    let mut u = Interval::one();
    let mut first_violation = None;
    let (mut min_scaled, mut max_scaled) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in 1..=max_n {
        let f = Interval::from_fraction(2 * n as i64 - 1, 2 * n as i64);
        u = u * f * f;
        let scaled = u * Interval::from_int(n as i64);
        min_scaled = min_scaled.min(scaled.lo());
        max_scaled = max_scaled.max(scaled.hi());
        if first_violation.is_none() && !(scaled.lo() >= lo_c.hi() && scaled.hi() <= hi_c.lo()) {
            first_violation = Some(n);
        }
    }
    Ok(U2nReport { max_n, ok: first_violation.is_none(), first_violation, min_scaled, max_scaled })
}

fn ln_n(n: usize) -> Interval {
    Interval::from_int(n as i64).ln().unwrap()
}

/// `(0.2 ln N - 0.16)^{-1} + N^{8/9} exp(-N^{1/9})`, rounded up.
pub fn upper_gap_bound(n: usize) -> Result<f64> {
    if n < 3 {
        return invalid(format!("N = {n}: the upper bound needs N >= 3"));
    }
    Ok(upper_gap_enclosure(n).hi())
}

fn upper_gap_enclosure(n: usize) -> Interval {
    let l = ln_n(n);
    let first = (Interval::from_fraction(2, 10) * l - Interval::from_fraction(16, 100)).recip().unwrap();
    let second = (l * Interval::from_fraction(8, 9)).exp()
        * (-(l * Interval::from_fraction(1, 9)).exp()).exp();
    first + second
}

/// `(0.84 ln N)^{-1} - 3/N`, rounded down.
pub fn lower_gap_bound(n: usize) -> Result<f64> {
    if n < LOWER_BOUND_THRESHOLD {
        return invalid(format!("N = {n}: the lower bound needs N >= {LOWER_BOUND_THRESHOLD}"));
    }
    Ok(lower_gap_enclosure(n).lo())
}

fn lower_gap_enclosure(n: usize) -> Interval {
    let l = ln_n(n);
    (Interval::from_fraction(84, 100) * l).recip().unwrap() - Interval::from_fraction(3, n as i64)
}

/// `((0.9 ln N)^{-1}, (0.1 ln N)^{-1})` for `N >= 2`.
pub fn corollary_bounds(n: usize) -> Option<(Interval, Interval)> {
    if n < 2 {
        return None;
    }
    let l = ln_n(n);
    Some((
        (Interval::from_fraction(9, 10) * l).recip().unwrap(),
        (Interval::from_fraction(1, 10) * l).recip().unwrap(),
    ))
}

/// Raw halved return counts `C(2m,m)^2`, `m <= max_m`.
fn halved_counts(max_m: usize) -> Vec<BigUint> {
    closed_form::central_binomials(max_m).into_iter().map(|c| &c * &c).collect()
}

/// Exact gaps `g_m = 1 - a_{2m}/4^{2m}` for `m <= max_m`; the gap at odd `N` equals the gap at `N-1`.
pub fn exact_gap_sequence(max_m: usize) -> Vec<BigRational> {
    let b: Vec<BigInt> = halved_counts(max_m).into_iter().map(|x| BigInt::from_biguint(Sign::Plus, x)).collect();
    let r = integer::recip_unit(&b);
    let sixteen = BigInt::from(16);
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut out = Vec::with_capacity(max_m + 1);
    for (m, rm) in r.iter().enumerate() {
        if m > 0 {
            num *= &sixteen;
            den *= &sixteen;
        }
        num += rm;
        out.push(BigRational::new_raw(num.clone(), den.clone()));
    }
    out
}

/// Exact gap at `N`.
pub fn exact_gap(n: usize) -> Result<BigRational> {
    if n > EXACT_CAP {
        return invalid(format!("N = {n} exceeds the exact-mode cap {EXACT_CAP}"));
    }
    let g = exact_gap_sequence(n / 2).pop().unwrap();
    Ok(BigRational::new(g.numer().clone(), g.denom().clone()))
}

#[derive(Debug, Clone, Serialize)]
pub struct FloatGaps {
    /// `gaps[m]` approximates the gap at `N = 2m`.
    pub gaps: Vec<f64>,
    /// `max |U R - 1|` over the computed coefficients.
    pub residual: f64,
    /// Heuristic bound on the error of `gaps[m]` at the largest `m`; not certified.
    pub error_estimate: f64,
}

pub fn float_gap_sequence(max_m: usize) -> Result<FloatGaps> {
    let mut u = Vec::with_capacity(max_m + 1);
    let mut x = 1.0f64;
    u.push(1.0);
    for m in 1..=max_m {
        let f = (2 * m - 1) as f64 / (2 * m) as f64;
        x *= f * f;
        u.push(x);
    }
    let r = fast::reciprocal(&u)?;
    let residual = fast::residual(&u, &r);
    let mut gaps = Vec::with_capacity(max_m + 1);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &v in &r {
        // Neumaier summation
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
        gaps.push(sum + comp);
    }
    // sum |r_m| <= 2 since r_m = -c_m for m >= 1; the residual error spreads through R.
    let m = (max_m + 1) as f64;
    let error_estimate = 2.0 * m * residual + m * f64::EPSILON * 4.0;
    Ok(FloatGaps { gaps, residual, error_estimate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMode {
    Exact,
    Float,
}

impl GapMode {
    pub fn parse(s: &str) -> Option<GapMode> {
        match s {
            "exact" => Some(GapMode::Exact),
            "float" => Some(GapMode::Float),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GapPolicy {
    pub mode: GapMode,
    pub exact_cap: usize,
    pub float_cap: usize,
}

impl GapPolicy {
    pub fn new(mode: GapMode) -> Self {
        GapPolicy { mode, exact_cap: EXACT_CAP, float_cap: FLOAT_CAP }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapBoundRecord {
    pub n: usize,
    /// `None` when `N` exceeds the cap of the chosen mode.
    pub mode: Option<GapMode>,
    pub gap: Option<f64>,
    /// Outward enclosure of the exact gap (exact mode only).
    pub gap_enclosure: Option<Interval>,
    /// Reported error of the floating gap (float mode only).
    pub error_estimate: Option<f64>,
    pub upper: Option<f64>,
    pub lower: Option<f64>,
    pub cor_lo: Option<f64>,
    pub cor_hi: Option<f64>,
    pub upper_ok: Option<bool>,
    pub lower_ok: Option<bool>,
    pub corollary_ok: Option<bool>,
    /// Every applicable proposition bound holds.
    pub all_ok: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub records: Vec<GapBoundRecord>,
    /// Smallest listed `N` from which both corollary inequalities hold for every later listed `N`.
    pub corollary_onset: Option<usize>,
}

fn record(n: usize, mode: GapMode, gap: Interval, error: Option<f64>) -> GapBoundRecord {
    let upper = (n >= 3).then(|| upper_gap_enclosure(n).hi());
    let lower = (n >= LOWER_BOUND_THRESHOLD).then(|| lower_gap_enclosure(n).lo());
    let cor = corollary_bounds(n);
    let upper_ok = upper.map(|u| gap.hi() <= u);
    let lower_ok = lower.map(|l| l <= gap.lo());
    let corollary_ok = cor.map(|(lo, hi)| lo.hi() <= gap.lo() && gap.hi() <= hi.lo());
    let exact = mode == GapMode::Exact;
    GapBoundRecord {
        n,
        mode: Some(mode),
        gap: Some(gap.mid()),
        gap_enclosure: exact.then_some(gap),
        error_estimate: error,
        upper,
        lower,
        cor_lo: cor.map(|c| c.0.mid()),
        cor_hi: cor.map(|c| c.1.mid()),
        upper_ok,
        lower_ok,
        corollary_ok,
        all_ok: upper_ok.unwrap_or(true) && lower_ok.unwrap_or(true),
        note: None,
    }
}

fn skipped(n: usize, note: String) -> GapBoundRecord {
    GapBoundRecord {
        n,
        mode: None,
        gap: None,
        gap_enclosure: None,
        error_estimate: None,
        upper: (n >= 3).then(|| upper_gap_enclosure(n).hi()),
        lower: (n >= LOWER_BOUND_THRESHOLD).then(|| lower_gap_enclosure(n).lo()),
        cor_lo: None,
        cor_hi: None,
        upper_ok: None,
        lower_ok: None,
        corollary_ok: None,
        all_ok: false,
        note: Some(note),
    }
}

/// Gap records for each `N`. Values beyond the mode's cap are returned unevaluated with a note.
pub fn verify_gap(ns: &[usize], policy: &GapPolicy) -> Result<GapReport> {
    let cap = match policy.mode {
        GapMode::Exact => policy.exact_cap,
        GapMode::Float => policy.float_cap,
    };
    let max_m = ns.iter().filter(|&&n| n <= cap).map(|&n| n / 2).max();
    let records: Vec<GapBoundRecord> = match (policy.mode, max_m) {
        (_, None) => Vec::new(),
        (GapMode::Exact, Some(max_m)) => {
            let seq = exact_gap_sequence(max_m);
            ns.par_iter()
                .map(|&n| {
                    if n > cap {
                        return skipped(n, format!("exceeds the exact-mode cap {cap}"));
                    }
                    record(n, GapMode::Exact, Interval::from_ratio(&seq[n / 2]), None)
                })
                .collect()
        }
        (GapMode::Float, Some(max_m)) => {
            let fg = float_gap_sequence(max_m)?;
            ns.par_iter()
                .map(|&n| {
                    if n > cap {
                        return skipped(n, format!("exceeds the float-mode cap {cap}"));
                    }
                    let g = fg.gaps[n / 2];
                    let e = fg.error_estimate;
                    record(n, GapMode::Float, Interval::new(g - e, g + e), Some(e))
                })
                .collect()
        }
    };
    let records = if records.is_empty() {
        ns.iter().map(|&n| skipped(n, format!("exceeds the cap {cap}"))).collect()
    } else {
        records
    };
    let corollary_onset = onset(records.iter().map(|r| (r.n, r.corollary_ok)));
    Ok(GapReport { records, corollary_onset })
}

fn onset(rows: impl Iterator<Item = (usize, Option<bool>)>) -> Option<usize> {
    let mut rows: Vec<(usize, Option<bool>)> = rows.collect();
    rows.sort_by_key(|r| r.0);
    let mut start = None;
    for (n, ok) in rows {
        match ok {
            Some(true) => {
                start.get_or_insert(n);
            }
            _ => start = None,
        }
    }
    start
}

/// Smallest `N <= max_n` from which both corollary inequalities hold for every `N` up to `max_n`,
/// using exact gaps.
pub fn corollary_onset_scan(max_n: usize) -> Result<Option<usize>> {
    if max_n > EXACT_CAP {
        return invalid(format!("N = {max_n} exceeds the exact-mode cap {EXACT_CAP}"));
    }
    let seq = exact_gap_sequence(max_n / 2);
    Ok(onset((2..=max_n).map(|n| {
        let g = Interval::from_ratio(&seq[n / 2]);
        let (lo, hi) = corollary_bounds(n).unwrap();
        (n, Some(lo.hi() <= g.lo() && g.hi() <= hi.lo()))
    })))
}

impl GapReport {
    pub fn to_csv(&self) -> String {
        let f = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
        let mut s = String::from("N,exact_gap,upper,lower,cor_lo,cor_hi,all_ok\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n,
                f(r.gap),
                f(r.upper),
                f(r.lower),
                f(r.cor_lo),
                f(r.cor_hi),
                r.all_ok
            ));
        }
        s
    }
}
