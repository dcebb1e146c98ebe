use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{Coefficient, ComplexRational, Semantics, SeriesError, TruncatedSeries};
use crate::interval::Interval;

/// A series whose coefficient semantics is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Rational(TruncatedSeries<BigRational>),
    Float(TruncatedSeries<f64>),
    Complex(TruncatedSeries<Complex64>),
    Interval(TruncatedSeries<Interval>),
    ComplexRational(TruncatedSeries<ComplexRational>),
}

macro_rules! dispatch {
    ($self:expr, $s:ident => $body:expr) => {
        match $self {
            AnySeries::Rational($s) => $body,
            AnySeries::Float($s) => $body,
            AnySeries::Complex($s) => $body,
            AnySeries::Interval($s) => $body,
            AnySeries::ComplexRational($s) => $body,
        }
    };
}

fn series_to_json<C: Coefficient>(s: &TruncatedSeries<C>) -> Value {
    json!({
        "order": s.order(),
        "semantics": C::SEMANTICS.name(),
        "coeffs": s.coeffs().iter().map(Coefficient::to_json).collect::<Vec<_>>(),
    })
}

fn series_from_values<C: Coefficient>(vals: &[Value]) -> Result<TruncatedSeries<C>, SeriesError> {
    let coeffs = vals.iter().map(C::from_json).collect::<Result<Vec<_>, _>>()?;
    Ok(TruncatedSeries::new(coeffs))
}

impl AnySeries {
    pub fn semantics(&self) -> Semantics {
        match self {
            AnySeries::Rational(_) => Semantics::Rational,
            AnySeries::Float(_) => Semantics::Float,
            AnySeries::Complex(_) => Semantics::Complex,
            AnySeries::Interval(_) => Semantics::Interval,
            AnySeries::ComplexRational(_) => Semantics::ComplexRational,
        }
    }

    pub fn order(&self) -> usize {
        dispatch!(self, s => s.order())
    }

    pub fn to_json(&self) -> Value {
        dispatch!(self, s => series_to_json(s))
    }

    pub fn from_json(v: &Value) -> Result<AnySeries, SeriesError> {
        let sem = v
            .get("semantics")
            .and_then(Value::as_str)
            .ok_or_else(|| SeriesError::Parse("missing \"semantics\"".into()))?;
        let sem = Semantics::parse(sem)
            .ok_or_else(|| SeriesError::Parse(format!("unknown semantics {sem:?}")))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| SeriesError::Parse("missing \"coeffs\" array".into()))?;
        if coeffs.is_empty() {
            return Err(SeriesError::Parse("\"coeffs\" must be nonempty".into()));
        }
        if let Some(order) = v.get("order") {
            let order = order
                .as_u64()
                .ok_or_else(|| SeriesError::Parse("\"order\" must be a nonnegative integer".into()))?;
            if order as usize + 1 != coeffs.len() {
                return Err(SeriesError::Parse(format!(
                    "order {order} does not match {} coefficients",
                    coeffs.len()
                )));
            }
        }
        Ok(match sem {
            Semantics::Rational => AnySeries::Rational(series_from_values(coeffs)?),
            Semantics::Float => AnySeries::Float(series_from_values(coeffs)?),
            Semantics::Complex => AnySeries::Complex(series_from_values(coeffs)?),
            Semantics::Interval => AnySeries::Interval(series_from_values(coeffs)?),
            Semantics::ComplexRational => AnySeries::ComplexRational(series_from_values(coeffs)?),
        })
    }

    fn mixed(&self, other: &AnySeries) -> SeriesError {
        SeriesError::MixedSemantics {
            left: self.semantics().name().into(),
            right: other.semantics().name().into(),
        }
    }

    pub fn multiply(&self, other: &AnySeries) -> Result<AnySeries, SeriesError> {
        Ok(match (self, other) {
            (AnySeries::Rational(a), AnySeries::Rational(b)) => AnySeries::Rational(a.multiply(b)),
            (AnySeries::Float(a), AnySeries::Float(b)) => AnySeries::Float(a.multiply(b)),
            (AnySeries::Complex(a), AnySeries::Complex(b)) => AnySeries::Complex(a.multiply(b)),
            (AnySeries::Interval(a), AnySeries::Interval(b)) => AnySeries::Interval(a.multiply(b)),
            (AnySeries::ComplexRational(a), AnySeries::ComplexRational(b)) => {
                AnySeries::ComplexRational(a.multiply(b))
            }
            _ => return Err(self.mixed(other)),
        })
    }

    /// `alpha*self + beta*other` with scalars given as JSON in the shared semantics.
    pub fn linear_combine(
        &self,
        alpha: &Value,
        other: &AnySeries,
        beta: &Value,
    ) -> Result<AnySeries, SeriesError> {
        fn go<C: Coefficient>(
            a: &TruncatedSeries<C>,
            alpha: &Value,
            b: &TruncatedSeries<C>,
            beta: &Value,
        ) -> Result<TruncatedSeries<C>, SeriesError> {
            Ok(TruncatedSeries::linear_combine(
                &C::from_json(alpha)?,
                a,
                &C::from_json(beta)?,
                b,
            ))
        }
        Ok(match (self, other) {
            (AnySeries::Rational(a), AnySeries::Rational(b)) => AnySeries::Rational(go(a, alpha, b, beta)?),
            (AnySeries::Float(a), AnySeries::Float(b)) => AnySeries::Float(go(a, alpha, b, beta)?),
            (AnySeries::Complex(a), AnySeries::Complex(b)) => AnySeries::Complex(go(a, alpha, b, beta)?),
            (AnySeries::Interval(a), AnySeries::Interval(b)) => AnySeries::Interval(go(a, alpha, b, beta)?),
            (AnySeries::ComplexRational(a), AnySeries::ComplexRational(b)) => {
                AnySeries::ComplexRational(go(a, alpha, b, beta)?)
            }
            _ => return Err(self.mixed(other)),
        })
    }

    pub fn reciprocal(&self) -> Result<AnySeries, SeriesError> {
        Ok(match self {
            AnySeries::Rational(s) => AnySeries::Rational(s.reciprocal()?),
            AnySeries::Float(s) => AnySeries::Float(s.reciprocal()?),
            AnySeries::Complex(s) => AnySeries::Complex(s.reciprocal()?),
            AnySeries::Interval(s) => AnySeries::Interval(s.reciprocal()?),
            AnySeries::ComplexRational(s) => AnySeries::ComplexRational(s.reciprocal()?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_every_semantics() {
        let docs = [
            json!({"order": 2, "semantics": "rational", "coeffs": ["1/1", "-2/3", "5"]}),
            json!({"order": 1, "semantics": "float", "coeffs": [1.0, 0.25]}),
            json!({"order": 1, "semantics": "complex", "coeffs": [[1.0, 0.0], [0.0, 0.5]]}),
            json!({"order": 1, "semantics": "interval", "coeffs": [[1.0, 1.0], [0.1, 0.2]]}),
            json!({"order": 0, "semantics": "complex_rational", "coeffs": [["1/2", "-1/2"]]}),
        ];
        for d in docs {
            let s = AnySeries::from_json(&d).unwrap();
            let back = AnySeries::from_json(&s.to_json()).unwrap();
            assert_eq!(s, back);
        }
    }

    #[test]
    fn mixed_semantics_rejected() {
        let a = AnySeries::from_json(&json!({"order": 0, "semantics": "float", "coeffs": [1.0]})).unwrap();
        let b = AnySeries::from_json(&json!({"order": 0, "semantics": "rational", "coeffs": ["1/1"]})).unwrap();
        assert!(matches!(a.multiply(&b), Err(SeriesError::MixedSemantics { .. })));
        assert!(matches!(
            a.linear_combine(&json!(1.0), &b, &json!(1.0)),
            Err(SeriesError::MixedSemantics { .. })
        ));
    }

    #[test]
    fn order_mismatch_rejected() {
        let d = json!({"order": 3, "semantics": "float", "coeffs": [1.0]});
        assert!(matches!(AnySeries::from_json(&d), Err(SeriesError::Parse(_))));
    }
}
