//! Truncated formal power series over a pluggable coefficient ring.
//!
//! Every series carries its truncation order explicitly; binary operations
//! work up to the smaller order and record it in the result.

mod coefficient;
pub mod fast;
pub mod integer;
mod json;

pub use coefficient::{rational_sqrt, Coefficient, ComplexRational, Semantics};
pub use json::AnySeries;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SeriesError {
    #[error("coefficient {index} ({value}) is not invertible")]
    NotInvertible { index: usize, value: String },
    #[error("operands have different semantics: {left} vs {right}")]
    MixedSemantics { left: String, right: String },
    #[error("no square root: {0}")]
    NoSquareRoot(String),
    #[error("square root branch is ambiguous under {0} semantics; supply the lowest coefficient")]
    BranchAmbiguous(String),
    #[error("leading coefficient must be 1, found {0}")]
    InvalidLeadingCoefficient(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Series with the given coefficients; order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty vector.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn zeros(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![C::zero(); order + 1] }
    }

    /// `1 + 0x + ... + 0x^order`.
    pub fn unit(order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = C::one();
        s
    }

    /// `1 + x + x^2 + ...` truncated at `order`.
    pub fn geometric(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![C::one(); order + 1] }
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| C::from_i64(v)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    /// Drops coefficients above `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        let k = order.min(self.order());
        TruncatedSeries { coeffs: self.coeffs[..=k].to_vec() }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Index of the lowest nonzero coefficient.
    pub fn lowest_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn linear_combine(alpha: &C, s: &Self, beta: &C, t: &Self) -> Self {
        let n = s.order().min(t.order());
        TruncatedSeries {
            coeffs: (0..=n)
                .map(|i| alpha.mul(&s.coeffs[i]).add(&beta.mul(&t.coeffs[i])))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::linear_combine(&C::one(), self, &C::one(), rhs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::linear_combine(&C::one(), self, &C::one().neg(), rhs)
    }

    pub fn scale(&self, alpha: &C) -> Self {
        self.map(|c| alpha.mul(c))
    }

    /// Cauchy product up to the smaller order.
    pub fn multiply(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = C::zero();
            for j in 0..=k {
                let (a, b) = (&self.coeffs[j], &rhs.coeffs[k - j]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            out.push(acc);
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let inv0 = self.coeffs[0].checked_inv().ok_or_else(|| SeriesError::NotInvertible {
            index: 0,
            value: format!("{:?}", self.coeffs[0]),
        })?;
        let n = self.order();
        let mut r: Vec<C> = Vec::with_capacity(n + 1);
        r.push(inv0.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                let s = &self.coeffs[j];
                if !s.is_zero() {
                    acc = acc.add(&s.mul(&r[k - j]));
                }
            }
            r.push(acc.mul(&inv0).neg());
        }
        Ok(TruncatedSeries { coeffs: r })
    }

    pub fn prefix_sums(&self) -> Self {
        let mut acc = C::zero();
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    acc = acc.add(c);
                    acc.clone()
                })
                .collect(),
        }
    }

    fn require_unit_constant(&self) -> Result<(), SeriesError> {
        if self.coeffs[0] == C::one() {
            Ok(())
        } else {
            Err(SeriesError::InvalidLeadingCoefficient(format!("{:?}", self.coeffs[0])))
        }
    }

    /// `C = 1 - 1/B` for a series with `b_0 = 1`.
    pub fn solve_first_return(&self) -> Result<Self, SeriesError> {
        self.require_unit_constant()?;
        let r = self.reciprocal()?;
        let mut c = r.map(|x| x.neg());
        c.coeffs[0] = C::zero();
        Ok(c)
    }

    /// Solves `B = B0 + C0^2 B` for `C0`, i.e. takes the series square root of
    /// `1 - B0/B`.
    ///
    /// When the square `1 - B0/B` starts at order `2k`, the result is valid up to
    /// order `N - k` where `N` is the common order of the inputs. `lowest` fixes
    /// the branch by giving the lowest nonzero coefficient of `C0`; real
    /// semantics default to the nonnegative root, complex semantics require it.
    pub fn solve_squared_factor(
        b: &Self,
        b0: &Self,
        lowest: Option<&C>,
    ) -> Result<Self, SeriesError> {
        b.require_unit_constant()?;
        b0.require_unit_constant()?;
        let ratio = b0.multiply(&b.reciprocal()?);
        let square = Self::unit(ratio.order()).sub(&ratio);
        square.series_sqrt(lowest)
    }

    /// Series square root whose lowest nonzero coefficient is `lowest` (or the
    /// principal root of the leading term).
    pub fn series_sqrt(&self, lowest: Option<&C>) -> Result<Self, SeriesError> {
        let n = self.order();
        let Some(k2) = self.lowest_order() else {
            return Ok(Self::zeros(n));
        };
        if k2 % 2 == 1 {
            return Err(SeriesError::NoSquareRoot(format!(
                "lowest nonzero term has odd order {k2}"
            )));
        }
        let k = k2 / 2;
        let p = &self.coeffs[k2..];
        let y0 = match lowest {
            Some(y) => {
                if !p[0].is_square_of(y) {
                    return Err(SeriesError::NoSquareRoot(format!(
                        "{y:?} does not square to {:?}",
                        p[0]
                    )));
                }
                y.clone()
            }
            None if C::SEMANTICS.is_complex() => {
                return Err(SeriesError::BranchAmbiguous(C::SEMANTICS.name().into()))
            }
            None => p[0].principal_sqrt().ok_or_else(|| {
                SeriesError::NoSquareRoot(format!("leading coefficient {:?}", p[0]))
            })?,
        };
        let inv2y0 = y0.add(&y0).checked_inv().ok_or_else(|| SeriesError::NotInvertible {
            index: k,
            value: format!("{y0:?}"),
        })?;
        let m = p.len() - 1;
        let mut y: Vec<C> = Vec::with_capacity(m + 1);
        y.push(y0);
        for i in 1..=m {
            let mut acc = p[i].clone();
            for j in 1..i {
                acc = acc.sub(&y[j].mul(&y[i - j]));
            }
            y.push(acc.mul(&inv2y0));
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(y);
        // order: k + m = n - k
        Ok(TruncatedSeries { coeffs })
    }

    /// `sum_{n <= order} s_n x^n` by Horner's rule.
    pub fn eval_partial(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.mul(x).add(c))
    }
}

/// `{y, -y}` with `y^2 = z`, or `{0}` for `z = 0`.
pub fn sqrt_set(z: Complex64) -> Vec<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return vec![z];
    }
    let y = z.sqrt();
    vec![y, -y]
}
