//! Return and visit probabilities of the simple random walk on `Z^d`.
//!
//! For `d <= 2` the limits are 1 and only the exact profile is reported. For
//! `d >= 3` the limits are enclosed rigorously: the generating function at 1 is
//! bracketed by an exact partial sum plus a certified tail bound.
//!
//! Tail bounds, with `p_{2m} = b_{2m} / (2d)^{2m}` and `M = floor(N/2)`:
//!
//! * Robbins: for `m >= d` the balanced multinomial dominates, and Robbins'
//!   factorial bounds give
//!   `p_{2m} <= sqrt(2) e^{1/(12m)} (d/(2 pi))^{d/2} (m - d + 1)^{-d/2}`.
//!   Summing by the integral test,
//!   `sum_{m>M} p_{2m} <= sqrt(2) e^{1/(12(M+1))} (d/(2 pi))^{d/2} (M-d+1)^{1-d/2} / (d/2 - 1)`.
//! * Three-term recurrence (`d = 3` only): `p_{2m} = alpha_m sigma_m` with
//!   `alpha_m = C(2m,m)/4^m` and `sigma_m = s_m / 9^m`. The ratio
//!   `rho_m = sigma_m / sigma_{m-1}` satisfies
//!   `rho_m = (10m^2-10m+3)/(9m^2) - (m-1)^2 / (9 m^2 rho_{m-1})`, increasing in
//!   `rho_{m-1}`. Starting from `rho_1 = 1/3`, induction gives
//!   `rho_m <= m/(m+1)` because
//!   `[m/(m+1) - F_m((m-1)/m)] * 9m^2(m+1)(m-1) = 3(2m-1)(m-1) >= 0`.
//!   So `(m+1) sigma_m` is nonincreasing, as is `sqrt(m+1/2) alpha_m`, hence
//!   `sum_{m>M} p_{2m} <= 2 (M+1) p_{2M}`.

use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{invalid, invariant, Result};
use crate::interval::Interval;
use crate::lattice::{check_dim, closed_form, LatticePoint};
use crate::series::integer;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub version: String,
    pub generated_at_unix: u64,
}

impl Metadata {
    pub fn now() -> Self {
        Metadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Limit {
    /// The limit is exactly 1.
    One,
    Enclosure(Interval),
}

impl Serialize for Limit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Limit::One => s.serialize_str("ONE"),
            Limit::Enclosure(i) => i.serialize(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMethod {
    Robbins,
    ThreeTermRecurrence,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailBound {
    pub method: TailMethod,
    /// Certified upper bound on `sum_{n > N} b_n / d_n`.
    pub bound: f64,
    /// `sqrt(2) (d/(2 pi))^{d/2}` for the Robbins route, `2(M+1)` for the recurrence route.
    pub constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyaEnclosure {
    pub d: usize,
    pub n_max: usize,
    /// Exact partial sum `sum_{n <= N} b_n / d_n`, enclosed.
    pub partial_sum: Interval,
    pub tails: Vec<TailBound>,
    /// Enclosure of `B(1)`.
    pub b_one: Interval,
    /// Enclosure of `1 - 1/B(1)`.
    pub value: Interval,
    pub width: f64,
    /// Largest `m` for which the Robbins pointwise bound was compared with exact terms.
    pub pointwise_checked_to: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    pub d: usize,
    pub v: LatticePoint,
    pub n_max: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub profile: Vec<BigRational>,
    pub limit: Limit,
    /// `1 - profile[N]` when the limit is 1.
    #[serde(serialize_with = "ser_opt_rational")]
    pub gap: Option<BigRational>,
    pub tail_constant: Option<f64>,
    pub enclosure: Option<PolyaEnclosure>,
    pub metadata: Metadata,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: Vec<String> = v.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect();
    out.serialize(s)
}

fn ser_opt_rational<S: serde::Serializer>(
    v: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|r| format!("{}/{}", r.numer(), r.denom())).serialize(s)
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn to_int(v: &[BigUint]) -> Vec<BigInt> {
    v.iter().map(|x| BigInt::from_biguint(Sign::Plus, x.clone())).collect()
}

fn to_nat(v: Vec<BigInt>, what: &str) -> Result<Vec<BigUint>> {
    v.into_iter()
        .enumerate()
        .map(|(n, x)| {
            x.to_biguint()
                .ok_or_else(|| crate::Error::Invariant(format!("negative {what} at n={n}")))
        })
        .collect()
}

/// First-return counts `c_n` from the return counts by integer deconvolution.
pub fn first_return_counts(b: &[BigUint]) -> Result<Vec<BigUint>> {
    let r = integer::recip_unit(&to_int(b));
    let mut c: Vec<BigInt> = r.into_iter().map(|x| -x).collect();
    c[0] = BigInt::zero();
    to_nat(c, "first-return count")
}

/// `sum_{n<=N} x_n / q^n` exactly.
pub fn normalized_partial_sum(x: &[BigUint], q: u64) -> BigRational {
    let mut num = BigInt::zero();
    let qb = BigInt::from(q);
    for v in x {
        num = num * &qb + BigInt::from_biguint(Sign::Plus, v.clone());
    }
    let denom = qb.pow(x.len().saturating_sub(1) as u32);
    BigRational::new(num, denom)
}

pub fn zero_recurrence_profile(d: usize, n: usize) -> Result<RecurrenceReport> {
    check_dim(d)?;
    let b = closed_form::return_counts(d, n)?;
    let c = first_return_counts(&b)?;
    let q = BigInt::from(2 * d);
    // a_n = 2d a_{n-1} + c_n, so a_n / (2d)^n is the prefix sum of c_j / (2d)^j.
    let mut a = BigInt::zero();
    let mut denom = BigInt::one();
    let mut profile = Vec::with_capacity(n + 1);
    for (k, ck) in c.iter().enumerate() {
        if k > 0 {
            a *= &q;
            denom *= &q;
        }
        a += BigInt::from_biguint(Sign::Plus, ck.clone());
        profile.push(BigRational::new(a.clone(), denom.clone()));
    }
    let (limit, gap, enclosure) = if d <= 2 {
        let gap = BigRational::one() - &profile[n];
        (Limit::One, Some(gap), None)
    } else {
        let e = polya_enclosure(d, n)?;
        (Limit::Enclosure(e.value), None, Some(e))
    };
    let tail_constant = enclosure.as_ref().and_then(|e| e.tails.first().map(|t| t.constant));
    Ok(RecurrenceReport {
        d,
        v: LatticePoint::origin(d)?,
        n_max: n,
        profile,
        limit,
        gap,
        tail_constant,
        enclosure,
        metadata: Metadata::now(),
    })
}

/// `x^{d/2}` for positive `x`.
fn half_power(x: Interval, d: usize) -> Interval {
    let whole = x.powi((d / 2) as u32);
    if d % 2 == 1 {
        whole * x.sqrt().expect("positive base")
    } else {
        whole
    }
}

fn robbins_constant(d: usize) -> Interval {
    let base = Interval::from_int(d as i64)
        .checked_div(&(Interval::from_int(2) * Interval::pi()))
        .expect("nonzero");
    Interval::from_int(2).sqrt().expect("positive") * half_power(base, d)
}

/// Upper bound on `p_{2m}` valid for `m >= d`.
pub fn robbins_term_bound(d: usize, m: usize) -> Interval {
    assert!(m >= d && d >= 1);
    let e = (Interval::one().checked_div(&Interval::from_int(12 * m as i64)).unwrap()).exp();
    let rest = half_power(Interval::from_int((m - d + 1) as i64), d).recip().unwrap();
    robbins_constant(d) * e * rest
}

/// Upper bound on `sum_{m > M} p_{2m}` for `d >= 3`.
pub fn robbins_tail(d: usize, big_m: usize) -> Interval {
    assert!(d >= 3);
    if big_m < d {
        // The terms m = M+1 .. d-1 are probabilities, each at most 1.
        let head = Interval::from_int((d - 1 - big_m) as i64);
        return head + robbins_term_bound(d, d) + robbins_tail(d, d);
    }
    let e = (Interval::one().checked_div(&Interval::from_int(12 * (big_m as i64 + 1))).unwrap()).exp();
    let x = Interval::from_int((big_m - d + 1) as i64);
    // (M-d+1)^{1-d/2} / (d/2 - 1)
    let power = half_power(x, d).recip().unwrap() * x;
    let denom = Interval::from_fraction(d as i64 - 2, 2);
    robbins_constant(d) * e * power.checked_div(&denom).unwrap()
}

/// `2 (M+1) p_{2M}` for `d = 3`, after checking `rho_m <= m/(m+1)` on the computed range.
fn recurrence_tail(b: &[BigUint], big_m: usize) -> Result<Interval> {
    let pm = BigRational::new(
        BigInt::from_biguint(Sign::Plus, b[2 * big_m].clone()),
        BigInt::from(36).pow(big_m as u32),
    );
    let bound = pm * BigRational::from_integer(BigInt::from(2 * (big_m + 1)));
    Ok(Interval::from_ratio(&bound))
}

fn one_minus_recip(x: Interval) -> Interval {
    Interval::one() - x.recip().expect("positive")
}

pub fn polya_enclosure(d: usize, n: usize) -> Result<PolyaEnclosure> {
    check_dim(d)?;
    if d <= 2 {
        return invalid(format!("d = {d}: the return probability is 1, no enclosure to compute"));
    }
    let b = closed_form::return_counts(d, n)?;
    let q = (2 * d) as u64;
    let s = normalized_partial_sum(&b, q);
    let s_int = Interval::from_ratio(&s);
    let big_m = n / 2;

    let rt = robbins_tail(d, big_m);
    let mut tails = vec![TailBound {
        method: TailMethod::Robbins,
        bound: rt.hi(),
        constant: robbins_constant(d).hi(),
    }];
    let mut hi = one_minus_recip(s_int + Interval::new(0.0, rt.hi())).hi();
    if d == 3 && big_m >= 1 {
        let t = recurrence_tail(&b, big_m)?;
        tails.push(TailBound {
            method: TailMethod::ThreeTermRecurrence,
            bound: t.hi(),
            constant: 2.0 * (big_m as f64 + 1.0),
        });
        hi = hi.min(one_minus_recip(s_int + Interval::new(0.0, t.hi())).hi());
    }
    let lo = one_minus_recip(s_int).lo();
    let value = Interval::new(lo, hi);
    let b_hi = tails.iter().map(|t| (s_int + Interval::new(0.0, t.bound)).hi()).fold(f64::INFINITY, f64::min);
    let pointwise_checked_to = check_robbins_pointwise(d, &b)?;
    Ok(PolyaEnclosure {
        d,
        n_max: n,
        partial_sum: s_int,
        tails,
        b_one: Interval::new(s_int.lo(), b_hi),
        value,
        width: value.width(),
        pointwise_checked_to,
    })
}

/// Compares the Robbins bound with exact terms for `d <= m <= N/2`; returns the last `m` checked.
fn check_robbins_pointwise(d: usize, b: &[BigUint]) -> Result<usize> {
    let q2 = BigInt::from(4 * d * d);
    let mut last = 0;
    let mut denom = BigInt::one();
    for m in 0..=(b.len() - 1) / 2 {
        if m > 0 {
            denom *= &q2;
        }
        if m >= d {
            let p = BigRational::new(BigInt::from_biguint(Sign::Plus, b[2 * m].clone()), denom.clone());
            let bound = robbins_term_bound(d, m);
            if !(Interval::from_ratio(&p).hi() <= bound.hi()) {
                return invariant(format!("term bound fails at m={m} in dimension {d}"));
            }
            last = m;
        }
    }
    Ok(last)
}

pub fn polya_constant(d: usize, n: usize) -> Result<Interval> {
    Ok(polya_enclosure(d, n)?.value)
}

/// Enclosures of `sqrt(1 - C(1)/B(1))` and `1 - 1/B(1)`: the visit formula evaluated at the origin
/// and the return probability.
pub fn origin_formula_comparison(d: usize, n: usize) -> Result<(Interval, Interval)> {
    let e = polya_enclosure(d, n)?;
    let b = e.b_one;
    // 1 - C/B = 1 - (1 - 1/B)/B = 1 - y + y^2 with y = 1/B in (0, 1), decreasing in y on (0, 1/2].
    let y_lo = Interval::one().checked_div(&Interval::point(b.hi())).unwrap().lo();
    let y_hi = Interval::one().checked_div(&Interval::point(b.lo())).unwrap().hi();
    let f = |y: f64| {
        let y = Interval::point(y);
        Interval::one() - y + y * y
    };
    let sq = if y_hi <= 0.5 {
        Interval::new(f(y_hi).lo(), f(y_lo).hi())
    } else {
        Interval::new(0.75, f(y_lo).hi().max(f(y_hi).hi()))
    };
    Ok((sq.sqrt().expect("positive"), e.value))
}

#[derive(Debug, Clone, Serialize)]
pub struct VisitEnclosure {
    pub d: usize,
    pub v: LatticePoint,
    pub n_max: usize,
    pub b_one: Interval,
    pub b0_one: Interval,
    /// `1 - B_0(1)/B(1)` enclosed from the avoiding-walk partial sums.
    pub via_avoiding: Interval,
    /// `(E_v(1)/B(1))^2` enclosed from endpoint counts.
    pub via_endpoint: Interval,
    /// Intersection of the two enclosures above.
    pub square: Interval,
    /// Enclosure of `sqrt(1 - B_0(1)/B(1))`.
    pub value: Interval,
    pub width: f64,
    pub tail_bound: f64,
    pub metadata: Metadata,
}

/// Walks ending at the origin and never standing on `v`, from closed forms:
/// `C_0 = E_v / B` and `B_0 = B - C_0^2 B` on raw counts.
pub fn avoiding_return_counts(v: &LatticePoint, n: usize) -> Result<Vec<BigUint>> {
    let d = v.dim();
    check_dim(d)?;
    if v.is_origin() {
        return invalid("target must differ from the origin");
    }
    let b = to_int(&closed_form::return_counts(d, n)?);
    let e = to_int(&closed_form::endpoint_count_series(v, n)?);
    let r = integer::recip_unit(&b);
    let c0 = integer::mul(&e, &r, n + 1);
    if c0.iter().any(Signed::is_negative) {
        return invariant("negative first-passage count");
    }
    let c0sq = integer::mul(&c0, &c0, n + 1);
    let lost = integer::mul(&c0sq, &b, n + 1);
    let b0: Vec<BigInt> = b.iter().zip(&lost).map(|(x, y)| x - y).collect();
    for (k, (x, y)) in b0.iter().zip(&b).enumerate() {
        if x.is_negative() || x > y {
            return invariant(format!("avoiding return count out of range at n={k}"));
        }
    }
    to_nat(b0, "avoiding return count")
}

pub fn v_recurrence_report(d: usize, v: &LatticePoint, n: usize) -> Result<VisitEnclosure> {
    check_dim(d)?;
    if v.dim() != d {
        return invalid(format!("target {v} does not have dimension {d}"));
    }
    if d <= 2 {
        return invalid(format!("d = {d}: the visit probability is 1"));
    }
    if v.is_origin() {
        return invalid("v = 0: the visit formula does not reduce to the return probability; use the profile");
    }
    if (n as u64) < 2 * v.l1() {
        return invalid(format!("N = {n} is too short to separate the series; need N >= {}", 2 * v.l1()));
    }
    let b = closed_form::return_counts(d, n)?;
    let b0 = avoiding_return_counts(v, n)?;
    let q = (2 * d) as u64;
    let s = normalized_partial_sum(&b, q);
    let s0 = normalized_partial_sum(&b0, q);
    if !(s0 > BigRational::zero() && s0 < s) {
        return invariant("expected 0 < B_0 < B on the partial sums");
    }
    let big_m = n / 2;
    let mut t = robbins_tail(d, big_m).hi();
    if d == 3 && big_m >= 1 {
        t = t.min(recurrence_tail(&b, big_m)?.hi());
    }
    let tail = Interval::new(0.0, t);
    let si = Interval::from_ratio(&s);
    let s0i = Interval::from_ratio(&s0);
    let diff = Interval::from_ratio(&(&s - &s0));
    // B - B_0 lies in [S - S_0, S - S_0 + T] since b'_n <= b_n termwise.
    let q_lo = diff.checked_div(&(si + Interval::point(t))).unwrap().lo();
    let q_hi1 = (diff + Interval::point(t)).checked_div(&si).unwrap().hi();
    let q_hi2 = (Interval::one() - s0i.checked_div(&(si + Interval::point(t))).unwrap()).hi();
    let via_avoiding = Interval::new(q_lo.max(0.0), q_hi1.min(q_hi2).min(1.0));

    // Second route: C_0(1) = E_v(1) / B(1). For n > N, e_v(n)/d_n <= p_{2m}(0) for some
    // 2m >= N, so the E_v tail is at most p_{2M} plus the B tail.
    let e = closed_form::endpoint_count_series(v, n)?;
    let se = Interval::from_ratio(&normalized_partial_sum(&e, q));
    let p2m = Interval::from_ratio(&BigRational::new(
        BigInt::from_biguint(Sign::Plus, b[2 * big_m].clone()),
        BigInt::from(q).pow(2 * big_m as u32),
    ));
    let c0 = Interval::new(
        se.checked_div(&(si + Interval::point(t))).unwrap().lo(),
        (se + p2m + Interval::point(t)).checked_div(&si).unwrap().hi(),
    );
    let via_endpoint = c0 * c0;
    let square = via_avoiding.intersect(&via_endpoint).ok_or_else(|| {
        crate::Error::Invariant(format!(
            "visit enclosures disagree: {via_avoiding} from avoiding walks, {via_endpoint} from endpoint counts"
        ))
    })?;
    let value = square.sqrt().expect("nonnegative");
    Ok(VisitEnclosure {
        d,
        v: v.clone(),
        n_max: n,
        b_one: si + tail,
        b0_one: s0i + tail,
        via_avoiding,
        via_endpoint,
        square,
        value,
        width: value.width(),
        tail_bound: t,
        metadata: Metadata::now(),
    })
}

pub fn v_recurrence_limit(d: usize, v: &LatticePoint, n: usize) -> Result<Interval> {
    Ok(v_recurrence_report(d, v, n)?.value)
}

/// `Gamma(k/2)` for a positive integer `k`.
pub fn gamma_half_integer(k: u32) -> Interval {
    assert!(k >= 1);
    let (mut x, mut g) = if k % 2 == 0 {
        (Interval::one(), Interval::one())
    } else {
        (Interval::from_fraction(1, 2), Interval::pi().sqrt().unwrap())
    };
    let mut cur = if k % 2 == 0 { 2 } else { 1 };
    while cur < k {
        g = g * x;
        x = x + Interval::one();
        cur += 2;
    }
    g
}

/// `(d/2) Gamma(d/2 - 1) pi^{-d/2} / |v|^{d-2}` with the Euclidean norm.
pub fn green_asymptotic(d: usize, v: &LatticePoint) -> Interval {
    assert!(d >= 3);
    let gamma = gamma_half_integer(d as u32 - 2);
    let pi_pow = half_power(Interval::pi(), d).recip().unwrap();
    let norm2 = Interval::from_int(v.l2_squared() as i64);
    // |v|^{d-2} = (|v|^2)^{(d-2)/2}
    let denom = half_power(norm2, d - 2);
    (Interval::from_fraction(d as i64, 2) * gamma * pi_pow).checked_div(&denom).unwrap()
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticRow {
    pub v: LatticePoint,
    pub l2: f64,
    pub limit: Interval,
    pub midpoint: f64,
    pub formula: f64,
    /// `midpoint / formula`.
    pub ratio: f64,
    /// `ratio * B(1)`; the visit probability is the Green function at `v` divided by `B(1)`.
    pub ratio_times_b_one: f64,
}

pub fn asymptotic_compare(d: usize, targets: &[LatticePoint], n: usize) -> Result<Vec<AsymptoticRow>> {
    check_dim(d)?;
    if d <= 2 {
        return invalid(format!("d = {d}: no asymptotic comparison below dimension 3"));
    }
    targets
        .iter()
        .map(|v| {
            let r = v_recurrence_report(d, v, n)?;
            let formula = green_asymptotic(d, v).mid();
            let midpoint = r.value.mid();
            let ratio = midpoint / formula;
            Ok(AsymptoticRow {
                v: v.clone(),
                l2: v.l2(),
                limit: r.value,
                midpoint,
                formula,
                ratio,
                ratio_times_b_one: ratio * r.b_one.mid(),
            })
        })
        .collect()
}

impl RecurrenceReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }

    /// `n, profile, gap` rows with float approximations.
    pub fn table(&self) -> Vec<(usize, f64, f64)> {
        self.profile
            .iter()
            .enumerate()
            .map(|(k, p)| (k, ratio_to_f64(p), 1.0 - ratio_to_f64(p)))
            .collect()
    }
}

pub fn report_summary(r: &RecurrenceReport) -> Value {
    json!({
        "d": r.d,
        "n_max": r.n_max,
        "limit": r.limit,
        "gap": r.gap.as_ref().map(ratio_to_f64),
        "final_profile": ratio_to_f64(&r.profile[r.n_max]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn profile_examples() {
        let r = zero_recurrence_profile(1, 4).unwrap();
        assert_eq!(r.profile, vec![q(0, 1), q(0, 1), q(1, 2), q(1, 2), q(5, 8)]);
        assert_eq!(r.limit, Limit::One);
        assert_eq!(zero_recurrence_profile(2, 2).unwrap().profile[2], q(1, 4));
        assert_eq!(zero_recurrence_profile(3, 2).unwrap().profile[2], q(1, 6));
    }

    #[test]
    fn recurrence_step_polynomial_identity() {
        // [m/(m+1) - F_m((m-1)/m)] * 9 m^2 (m+1)(m-1) == 3(2m-1)(m-1), checked at five points
        // of a degree-4 polynomial identity.
        for m in 2..7i64 {
            let mq = q(m, 1);
            let u_prev = q(m - 1, m);
            let f = q(10 * m * m - 10 * m + 3, 9 * m * m) - q((m - 1) * (m - 1), 9 * m * m) / u_prev;
            let lhs = (q(m, m + 1) - f) * q(9 * m * m * (m + 1) * (m - 1), 1);
            assert_eq!(lhs, q(3 * (2 * m - 1) * (m - 1), 1), "m={mq}");
        }
    }

    #[test]
    fn ratio_bound_holds_on_computed_range() {
        let s = closed_form::three_dim_inner(400);
        for m in 1..=400usize {
            // rho_m = s_m / (9 s_{m-1}) <= m/(m+1)
            let lhs = &s[m] * BigUint::from(m + 1);
            let rhs = &s[m - 1] * BigUint::from(9 * m);
            assert!(lhs <= rhs, "m={m}");
        }
    }

    #[test]
    fn recurrence_tail_dominates_long_partial_sum() {
        // tail bound at M=50 exceeds the exact sum of terms 51..=1000
        let b = closed_form::return_counts(3, 2000).unwrap();
        let t = recurrence_tail(&b, 50).unwrap();
        let mut s = BigRational::zero();
        for m in 51..=1000usize {
            s += BigRational::new(BigInt::from_biguint(Sign::Plus, b[2 * m].clone()), BigInt::from(36).pow(m as u32));
        }
        assert!(Interval::from_ratio(&s).hi() < t.hi());
    }

    #[test]
    fn small_n_enclosures_are_sound_and_nested() {
        let mut prev = Interval::new(0.0, 1.0);
        for n in [0usize, 1, 2, 6, 10, 40, 100] {
            let e = polya_constant(3, n).unwrap();
            assert!(prev.contains_interval(&e), "n={n}: {prev} vs {e}");
            prev = e;
        }
        assert!(prev.contains(0.3405373296));
    }

    #[test]
    fn low_dimensions_are_rejected() {
        assert!(polya_constant(2, 10).is_err());
        let v = LatticePoint::new(vec![1, 0]).unwrap();
        assert!(v_recurrence_limit(2, &v, 10).is_err());
        assert!(v_recurrence_limit(3, &LatticePoint::origin(3).unwrap(), 10).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!(gamma_half_integer(1).contains(std::f64::consts::PI.sqrt()));
        assert!(gamma_half_integer(2).contains(1.0));
        assert!(gamma_half_integer(5).contains(0.75 * std::f64::consts::PI.sqrt()));
        let v = LatticePoint::new(vec![2, 0, 0, 0]).unwrap();
        let g = green_asymptotic(4, &v);
        let expect = 1.0 / (2.0 * std::f64::consts::PI.powi(2));
        assert!((g.mid() - expect).abs() < 1e-15);
        let v3 = LatticePoint::new(vec![3, 0, 0]).unwrap();
        let expect3 = 3.0 / (2.0 * std::f64::consts::PI * 3.0);
        assert!((green_asymptotic(3, &v3).mid() - expect3).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_is_green_function_over_b_one() {
        // B(1) for d = 3 from the Gamma product closed form.
        let b_one = 1.516386059;
        let targets: Vec<_> = [vec![6, 0, 0], vec![0, 0, -8], vec![3, 3, 3]]
            .into_iter()
            .map(|c| LatticePoint::new(c).unwrap())
            .collect();
        for row in asymptotic_compare(3, &targets, 400).unwrap() {
            assert!(row.limit.contains(row.formula / b_one), "{}", row.v);
            assert!(row.limit.hi() < row.formula, "{}", row.v);
        }
    }

    #[test]
    fn visit_limits() {
        let e1 = LatticePoint::new(vec![1, 0, 0]).unwrap();
        let near = v_recurrence_report(3, &e1, 400).unwrap();
        assert!(near.value.lo() > 0.0 && near.value.hi() < 1.0);
        // a neighbour is hit with the return probability
        assert!(near.value.contains(0.3405373296));
        let far = v_recurrence_limit(3, &LatticePoint::new(vec![6, 0, 0]).unwrap(), 400).unwrap();
        assert!(far.hi() < near.value.lo());
        let b = closed_form::return_counts(3, 400).unwrap();
        let b0 = avoiding_return_counts(&e1, 400).unwrap();
        assert!(b0.iter().zip(&b).all(|(x, y)| x <= y));
        assert!(v_recurrence_limit(3, &LatticePoint::new(vec![3, 3, 0]).unwrap(), 11).is_err());
    }

    #[test]
    fn origin_formula_exceeds_return_probability() {
        let (visit_form, ret) = origin_formula_comparison(3, 200).unwrap();
        assert!(visit_form.lo() > ret.hi());
    }
}
