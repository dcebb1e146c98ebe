//! Outward-rounded real intervals.
//!
//! Rust exposes no control over the FPU rounding mode, so every operation is
//! evaluated in round-to-nearest and the exact rounding error is recovered with
//! error-free transformations (two-sum, fused multiply-add). An endpoint is
//! nudged by one ulp only when the recovered error points the wrong way, which
//! keeps exact operations exact. Transcendental functions come from the
//! platform libm and are widened by two ulps on each side.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY { f64::MAX } else { s };
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY { -f64::MAX } else { s };
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

// Products near the subnormal range lose the fma error guarantee; widen there.
const TINY: f64 = 1e-290;

fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::INFINITY { f64::MAX } else { p };
    }
    if p != 0.0 && p.abs() < TINY {
        return p.next_down();
    }
    if p == 0.0 && a != 0.0 && b != 0.0 {
        return if (a < 0.0) != (b < 0.0) { -f64::MIN_POSITIVE } else { 0.0 };
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::NEG_INFINITY { -f64::MAX } else { p };
    }
    if p != 0.0 && p.abs() < TINY {
        return p.next_up();
    }
    if p == 0.0 && a != 0.0 && b != 0.0 {
        return if (a < 0.0) != (b < 0.0) { 0.0 } else { f64::MIN_POSITIVE };
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of `a/b - q` where `q` is the rounded quotient.
fn div_residual_sign(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if r == 0.0 {
        0.0
    } else if (r > 0.0) == (b > 0.0) {
        1.0
    } else {
        -1.0
    }
}

fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() || (q != 0.0 && q.abs() < TINY) || (q == 0.0 && a != 0.0) {
        return q.next_down();
    }
    if div_residual_sign(a, b, q) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() || (q != 0.0 && q.abs() < TINY) || (q == 0.0 && a != 0.0) {
        return q.next_up();
    }
    if div_residual_sign(a, b, q) > 0.0 {
        q.next_up()
    } else {
        q
    }
}

fn widen_down(x: f64) -> f64 {
    x.next_down().next_down()
}

fn widen_up(x: f64) -> f64 {
    x.next_up().next_up()
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(
            !lo.is_nan() && !hi.is_nan() && lo <= hi,
            "malformed interval [{lo}, {hi}]"
        );
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval::new(x, x)
    }

    pub fn from_int(n: i64) -> Self {
        Interval::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Tightest pair of doubles bracketing `p/q`.
    pub fn from_fraction(p: i64, q: i64) -> Self {
        Interval::from_ratio(&BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Encloses an exact rational between two adjacent doubles (or one, if exact).
    pub fn from_ratio(r: &BigRational) -> Self {
        let approx = r.to_f64().unwrap_or(if r.is_negative() {
            f64::MIN
        } else {
            f64::MAX
        });
        let approx = if approx.is_finite() {
            approx
        } else if approx > 0.0 {
            f64::MAX
        } else {
            f64::MIN
        };
        let mut lo = approx;
        while exact(lo) > *r {
            lo = lo.next_down();
        }
        let mut hi = approx;
        while exact(hi) < *r {
            hi = hi.next_up();
            if hi.is_infinite() {
                break;
            }
        }
        Interval { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_ratio(&self, r: &BigRational) -> bool {
        exact(self.lo) <= *r && *r <= exact(self.hi)
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn pi() -> Self {
        Interval {
            lo: std::f64::consts::PI,
            hi: std::f64::consts::PI.next_up(),
        }
    }

    pub fn e() -> Self {
        Interval {
            lo: std::f64::consts::E,
            hi: std::f64::consts::E.next_up(),
        }
    }

    pub fn recip(&self) -> Option<Interval> {
        Interval::one().checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Interval) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let cands_lo = [
            div_down(self.lo, rhs.lo),
            div_down(self.lo, rhs.hi),
            div_down(self.hi, rhs.lo),
            div_down(self.hi, rhs.hi),
        ];
        let cands_hi = [
            div_up(self.lo, rhs.lo),
            div_up(self.lo, rhs.hi),
            div_up(self.hi, rhs.lo),
            div_up(self.hi, rhs.hi),
        ];
        Some(Interval {
            lo: cands_lo.iter().copied().fold(f64::INFINITY, f64::min),
            hi: cands_hi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    /// Square root of the nonnegative part; `None` when the interval is entirely negative.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi < 0.0 {
            return None;
        }
        let sqrt_down = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let s = x.sqrt();
            if s.mul_add(s, -x) > 0.0 {
                s.next_down()
            } else {
                s
            }
        };
        let sqrt_up = |x: f64| {
            let s = x.sqrt();
            if s.mul_add(s, -x) < 0.0 {
                s.next_up()
            } else {
                s
            }
        };
        Some(Interval {
            lo: sqrt_down(self.lo.max(0.0)),
            hi: sqrt_up(self.hi),
        })
    }

    pub fn exp(&self) -> Interval {
        let lo = if self.lo == 0.0 { 1.0 } else { widen_down(self.lo.exp()).max(0.0) };
        let hi = if self.hi == 0.0 { 1.0 } else { widen_up(self.hi.exp()) };
        Interval { lo, hi }
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Interval> {
        if self.lo <= 0.0 {
            return None;
        }
        let lo = if self.lo == 1.0 { 0.0 } else { widen_down(self.lo.ln()) };
        let hi = if self.hi == 1.0 { 0.0 } else { widen_up(self.hi.ln()) };
        Some(Interval { lo, hi })
    }

    /// `self^y` for a strictly positive base.
    pub fn powf(&self, y: &Interval) -> Option<Interval> {
        Some((self.ln()? * *y).exp())
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut acc = Interval::one();
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    pub fn max_with(&self, x: f64) -> Interval {
        Interval {
            lo: self.lo.max(x),
            hi: self.hi.max(x),
        }
    }

    pub fn min_with(&self, x: f64) -> Interval {
        Interval {
            lo: self.lo.min(x),
            hi: self.hi.min(x),
        }
    }
}

/// Exact rational value of a finite double.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite double")
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = [mul_down(a, c), mul_down(a, d), mul_down(b, c), mul_down(b, d)]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let hi = [mul_up(a, c), mul_up(a, d), mul_up(b, c), mul_up(b, d)]
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Zero for Interval {
    fn zero() -> Self {
        Interval::point(0.0)
    }
    fn is_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }
}

impl One for Interval {
    fn one() -> Self {
        Interval::point(1.0)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(d)?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(serde::de::Error::custom("interval requires lo <= hi"));
        }
        Ok(Interval { lo, hi })
    }
}
