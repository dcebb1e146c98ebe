use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde_json::{json, Value};

use super::point::{check_dim, LatticePoint};
use super::{targeted, Limits};
use crate::error::{invalid, invariant, Result};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct PrimedCounts {
    /// Walks visiting `v` at some step `>= 1`.
    pub a_prime: Vec<BigUint>,
    /// Walks ending at the origin that never stand on `v`.
    pub b_prime: Vec<BigUint>,
    /// Walks ending at `v` whose inner part avoids `v`.
    pub c_prime: Vec<BigUint>,
    /// Walks ending at `v` whose inner part avoids `v` and the origin.
    pub c_dprime: Vec<BigUint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkCountTable {
    pub d: usize,
    pub v: LatticePoint,
    pub max_len: usize,
    /// Walks revisiting the origin.
    pub a: Vec<BigUint>,
    /// Walks ending at the origin.
    pub b: Vec<BigUint>,
    /// First returns to the origin.
    pub c: Vec<BigUint>,
    /// All walks, `(2d)^n`.
    pub d_seq: Vec<BigUint>,
    pub primed: Option<PrimedCounts>,
}

fn powers(base: usize, n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    let mut x = BigUint::one();
    for _ in 0..=n {
        out.push(x.clone());
        x *= base;
    }
    out
}

/// `x_n / base^n` as an exact rational series.
pub fn normalize(seq: &[BigUint], base: usize) -> TruncatedSeries<BigRational> {
    let mut denom = BigInt::one();
    let b = BigInt::from(base);
    TruncatedSeries::new(
        seq.iter()
            .map(|x| {
                let r = BigRational::new(BigInt::from_biguint(Sign::Plus, x.clone()), denom.clone());
                denom *= &b;
                r
            })
            .collect(),
    )
}

/// `sum_j x_j y_{n-j}`.
fn convolve(x: &[BigUint], y: &[BigUint]) -> Vec<BigUint> {
    let n = x.len().min(y.len());
    (0..n)
        .map(|k| {
            let mut acc = BigUint::zero();
            for j in 0..=k {
                if !x[j].is_zero() && !y[k - j].is_zero() {
                    acc += &x[j] * &y[k - j];
                }
            }
            acc
        })
        .collect()
}

/// Solves `e = f * b` for `f` given `b_0 = 1`, requiring a nonnegative result.
fn deconvolve(e: &[BigUint], b: &[BigUint], what: &str) -> Result<Vec<BigUint>> {
    let mut f: Vec<BigInt> = Vec::with_capacity(e.len());
    for n in 0..e.len() {
        let mut acc = BigInt::from(e[n].clone());
        for j in 1..=n {
            if !b[j].is_zero() && !f[n - j].is_zero() {
                acc -= BigInt::from(b[j].clone()) * &f[n - j];
            }
        }
        f.push(acc);
    }
    f.into_iter()
        .enumerate()
        .map(|(n, x)| {
            x.to_biguint().ok_or_else(|| {
                crate::Error::Invariant(format!("{what} deconvolution gave a negative count at n={n}"))
            })
        })
        .collect()
}

pub fn walk_table(d: usize, v: &LatticePoint, n: usize) -> Result<WalkCountTable> {
    walk_table_with(d, v, n, &Limits::default())
}

pub fn walk_table_with(d: usize, v: &LatticePoint, n: usize, limits: &Limits) -> Result<WalkCountTable> {
    check_dim(d)?;
    if v.dim() != d {
        return invalid(format!("target {v} does not have dimension {d}"));
    }
    let origin = LatticePoint::origin(d)?;
    let base = 2 * d;
    let d_seq = powers(base, n);
    let primed = !v.is_origin();
    // A walk of length n between the origin and v stays within (n + |v|)/2 of the origin.
    let near = (n + v.l1() as usize).div_ceil(2);

    let track: Vec<&LatticePoint> = if primed { vec![&origin, v] } else { vec![&origin] };
    let free = targeted(d, near, n, &[], &track, &[], false, limits)?;
    let b = free.values[0].clone();

    let c_hat = normalize(&b, base).solve_first_return()?;
    let mut c = Vec::with_capacity(n + 1);
    for (k, r) in c_hat.coeffs().iter().enumerate() {
        let scaled = r * BigRational::from_integer(BigInt::from(base).pow(k as u32));
        if !scaled.is_integer() {
            return invariant(format!("first-return count at n={k} is not an integer: {scaled}"));
        }
        match scaled.to_integer().to_biguint() {
            Some(x) => c.push(x),
            None => return invariant(format!("negative first-return count at n={k}")),
        }
    }
    let a = convolve(&c, &d_seq);

    let primed = if primed {
        let e_v = free.values[1].clone();
        let avoid_v = targeted(d, n, n, &[v], &[&origin], &[v], true, limits)?;
        let b_prime = avoid_v.values[0].clone();
        let c_prime = deconvolve(&e_v, &b, "first-passage")?;
        if c_prime != avoid_v.entries[0] {
            return invariant("first-passage counts disagree between deconvolution and direct DP");
        }
        let mut a_prime = Vec::with_capacity(n + 1);
        for (k, t) in avoid_v.totals.iter().enumerate() {
            if t > &d_seq[k] {
                return invariant(format!("more avoiding walks than walks at n={k}"));
            }
            a_prime.push(&d_seq[k] - t);
        }
        if a_prime != convolve(&c_prime, &d_seq) {
            return invariant("visiting counts disagree with the first-passage convolution");
        }
        let avoid_both = targeted(d, near, n, &[&origin, v], &[], &[v], false, limits)?;
        Some(PrimedCounts {
            a_prime,
            b_prime,
            c_prime,
            c_dprime: avoid_both.entries[0].clone(),
        })
    } else {
        None
    };

    Ok(WalkCountTable { d, v: v.clone(), max_len: n, a, b, c, d_seq, primed })
}

fn strings(v: &[BigUint]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

impl WalkCountTable {
    pub fn normalized(&self, seq: &[BigUint]) -> TruncatedSeries<BigRational> {
        normalize(seq, 2 * self.d)
    }

    pub fn to_json(&self) -> Value {
        let mut j = json!({
            "d": self.d,
            "v": self.v.coords(),
            "max_len": self.max_len,
            "a": strings(&self.a),
            "b": strings(&self.b),
            "c": strings(&self.c),
            "d_seq": strings(&self.d_seq),
        });
        if let Some(p) = &self.primed {
            j["a_prime"] = json!(strings(&p.a_prime));
            j["b_prime"] = json!(strings(&p.b_prime));
            j["c_prime"] = json!(strings(&p.c_prime));
            j["c_dprime"] = json!(strings(&p.c_dprime));
        }
        j
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a,b,c,d,a_prime,b_prime,c_prime,c_dprime\n");
        for k in 0..=self.max_len {
            let primed = match &self.primed {
                Some(p) => format!(
                    "{},{},{},{}",
                    p.a_prime[k], p.b_prime[k], p.c_prime[k], p.c_dprime[k]
                ),
                None => ",,,".to_string(),
            };
            out.push_str(&format!(
                "{k},{},{},{},{},{primed}\n",
                self.a[k], self.b[k], self.c[k], self.d_seq[k]
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::closed_form;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec()).unwrap()
    }

    fn u(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn one_dimensional_examples() {
        let t = walk_table(1, &p(&[0]), 4).unwrap();
        assert_eq!(t.a, u(&[0, 0, 2, 4, 10]));
        assert_eq!(t.c, u(&[0, 0, 2, 0, 2]));
        assert!(t.primed.is_none());
        let t = walk_table(1, &p(&[1]), 3).unwrap();
        let pr = t.primed.unwrap();
        assert_eq!(pr.c_prime, u(&[0, 1, 0, 1]));
        assert_eq!(pr.a_prime, u(&[0, 1, 2, 5]));
    }

    #[test]
    fn two_dimensional_example() {
        let t = walk_table(2, &p(&[0, 0]), 2).unwrap();
        assert_eq!(t.a, u(&[0, 0, 4]));
        assert_eq!(t.c, u(&[0, 0, 4]));
    }

    #[test]
    fn dp_matches_closed_form() {
        for d in 1..=4 {
            let n = if d == 4 { 12 } else { 24 };
            let t = walk_table(d, &LatticePoint::origin(d).unwrap(), n).unwrap();
            assert_eq!(t.b, closed_form::return_counts(d, n).unwrap());
        }
    }

    #[test]
    fn first_return_matches_direct_dp() {
        for d in 1..=3 {
            let o = LatticePoint::origin(d).unwrap();
            let t = walk_table(d, &o, 16).unwrap();
            let direct = targeted(d, 8, 16, &[&o], &[], &[&o], false, &Limits::default()).unwrap();
            assert_eq!(t.c, direct.entries[0]);
        }
    }

    #[test]
    fn csv_leaves_primed_columns_empty_at_origin() {
        let t = walk_table(1, &p(&[0]), 1).unwrap();
        assert_eq!(t.to_csv(), "n,a,b,c,d,a_prime,b_prime,c_prime,c_dprime\n0,0,1,0,1,,,,\n1,0,0,0,2,,,,\n");
    }
}
