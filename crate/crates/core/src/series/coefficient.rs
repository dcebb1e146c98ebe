use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::SeriesError;
use crate::interval::Interval;

pub type ComplexRational = Complex<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    Rational,
    Float,
    Complex,
    Interval,
    ComplexRational,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Rational => "rational",
            Semantics::Float => "float",
            Semantics::Complex => "complex",
            Semantics::Interval => "interval",
            Semantics::ComplexRational => "complex_rational",
        }
    }

    pub fn parse(s: &str) -> Option<Semantics> {
        Some(match s {
            "rational" => Semantics::Rational,
            "float" => Semantics::Float,
            "complex" => Semantics::Complex,
            "interval" => Semantics::Interval,
            "complex_rational" => Semantics::ComplexRational,
            _ => return None,
        })
    }

    /// Whether a square root branch has to be chosen by the caller.
    pub fn is_complex(self) -> bool {
        matches!(self, Semantics::Complex | Semantics::ComplexRational)
    }
}

/// Scalar ring used for series coefficients.
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync + 'static {
    const SEMANTICS: Semantics;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` when the value is not invertible.
    fn checked_inv(&self) -> Option<Self>;
    /// Absolute value (an upper bound for intervals).
    fn magnitude(&self) -> f64;
    fn from_ratio(r: &BigRational) -> Self;
    /// Principal square root, when the semantics has one (nonnegative for reals).
    fn principal_sqrt(&self) -> Option<Self>;
    /// Whether `y*y` matches `self` under this semantics.
    fn is_square_of(&self, y: &Self) -> bool;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, SeriesError>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }
}

const FLOAT_SQUARE_TOL: f64 = 1e-12;

fn ratio_to_json(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

fn ratio_from_json(v: &Value) -> Result<BigRational, SeriesError> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let parsed = if s.contains('/') {
                s.parse::<BigRational>().ok()
            } else {
                s.parse::<BigInt>().ok().map(BigRational::from_integer)
            };
            match parsed {
                Some(r) => Ok(r),
                None => Err(SeriesError::Parse(format!("bad rational {s:?}"))),
            }
        }
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(BigInt::from(
            n.as_i64().unwrap_or_default(),
        ))),
        other => Err(SeriesError::Parse(format!(
            "expected rational string, got {other}"
        ))),
    }
}

fn float_from_json(v: &Value) -> Result<f64, SeriesError> {
    v.as_f64()
        .ok_or_else(|| SeriesError::Parse(format!("expected number, got {v}")))
}

fn pair_from_json(v: &Value) -> Result<(&Value, &Value), SeriesError> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(SeriesError::Parse(format!("expected a pair, got {v}"))),
    }
}

/// Exact square root of a nonnegative rational, if both parts are perfect squares.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl Coefficient for BigRational {
    const SEMANTICS: Semantics = Semantics::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn principal_sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
    fn is_square_of(&self, y: &Self) -> bool {
        y * y == *self
    }
    fn to_json(&self) -> Value {
        ratio_to_json(self)
    }
    fn from_json(v: &Value) -> Result<Self, SeriesError> {
        ratio_from_json(v)
    }
}

impl Coefficient for f64 {
    const SEMANTICS: Semantics = Semantics::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_inv(&self) -> Option<Self> {
        (*self != 0.0 && self.is_finite()).then(|| 1.0 / self)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn principal_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn is_square_of(&self, y: &Self) -> bool {
        (y * y - self).abs() <= FLOAT_SQUARE_TOL * self.abs().max(1.0)
    }
    fn to_json(&self) -> Value {
        serde_json::json!(self)
    }
    fn from_json(v: &Value) -> Result<Self, SeriesError> {
        float_from_json(v)
    }
}

impl Coefficient for Complex64 {
    const SEMANTICS: Semantics = Semantics::Complex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_inv(&self) -> Option<Self> {
        (self.norm_sqr() != 0.0 && self.is_finite()).then(|| self.inv())
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_ratio(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn principal_sqrt(&self) -> Option<Self> {
        None
    }
    fn is_square_of(&self, y: &Self) -> bool {
        (y * y - self).norm() <= FLOAT_SQUARE_TOL * self.norm().max(1.0)
    }
    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }
    fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let (re, im) = pair_from_json(v)?;
        Ok(Complex64::new(float_from_json(re)?, float_from_json(im)?))
    }
}

impl Coefficient for ComplexRational {
    const SEMANTICS: Semantics = Semantics::ComplexRational;

    fn zero() -> Self {
        Complex::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        Complex::new(One::one(), Zero::zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
    fn neg(&self) -> Self {
        Complex::new(-&self.re, -&self.im)
    }
    fn checked_inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        (!Zero::is_zero(&n)).then(|| Complex::new(&self.re / &n, -&self.im / &n))
    }
    fn magnitude(&self) -> f64 {
        let n = &self.re * &self.re + &self.im * &self.im;
        n.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
    fn from_ratio(r: &BigRational) -> Self {
        Complex::new(r.clone(), Zero::zero())
    }
    fn principal_sqrt(&self) -> Option<Self> {
        None
    }
    fn is_square_of(&self, y: &Self) -> bool {
        y.mul(y) == *self
    }
    fn to_json(&self) -> Value {
        Value::Array(vec![ratio_to_json(&self.re), ratio_to_json(&self.im)])
    }
    fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let (re, im) = pair_from_json(v)?;
        Ok(Complex::new(ratio_from_json(re)?, ratio_from_json(im)?))
    }
}

impl Coefficient for Interval {
    const SEMANTICS: Semantics = Semantics::Interval;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn checked_inv(&self) -> Option<Self> {
        self.recip()
    }
    fn magnitude(&self) -> f64 {
        self.lo().abs().max(self.hi().abs())
    }
    fn from_ratio(r: &BigRational) -> Self {
        Interval::from_ratio(r)
    }
    fn principal_sqrt(&self) -> Option<Self> {
        (self.lo() > 0.0 || Coefficient::is_zero(self))
            .then(|| self.sqrt())
            .flatten()
    }
    fn is_square_of(&self, y: &Self) -> bool {
        let sq = *y * *y;
        sq.intersect(self).is_some()
    }
    fn to_json(&self) -> Value {
        serde_json::json!([self.lo(), self.hi()])
    }
    fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let (lo, hi) = pair_from_json(v)?;
        let (lo, hi) = (float_from_json(lo)?, float_from_json(hi)?);
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(SeriesError::Parse(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Interval::new(lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_detects_perfect_squares() {
        let r = BigRational::new(BigInt::from(9), BigInt::from(16));
        assert_eq!(
            rational_sqrt(&r),
            Some(BigRational::new(BigInt::from(3), BigInt::from(4)))
        );
        assert_eq!(rational_sqrt(&BigRational::from_integer(BigInt::from(2))), None);
    }

    #[test]
    fn json_round_trips() {
        let r = BigRational::new(BigInt::from(-3), BigInt::from(7));
        assert_eq!(r.to_json(), Value::String("-3/7".into()));
        assert_eq!(BigRational::from_json(&r.to_json()).unwrap(), r);
        let z = Complex64::new(0.5, -2.0);
        assert_eq!(Complex64::from_json(&z.to_json()).unwrap(), z);
        let q: ComplexRational = Complex::new(r.clone(), One::one());
        assert_eq!(ComplexRational::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn complex_rational_inverse_is_exact() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let z: ComplexRational = Complex::new(half.clone(), half);
        let inv = z.checked_inv().unwrap();
        assert_eq!(z.mul(&inv), <ComplexRational as Coefficient>::one());
    }
}
