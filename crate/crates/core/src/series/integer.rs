//! Exact integer series kernels.
//!
//! Normalizing `x_n -> x_n / q^n` commutes with products and reciprocals, so
//! identities among normalized walk series can be evaluated on raw counts.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// First `n` coefficients of `a * b`, skipping zero terms.
pub fn mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let nz_a: Vec<usize> = (0..a.len().min(n)).filter(|&i| !a[i].is_zero()).collect();
    (0..n)
        .into_par_iter()
        .with_min_len(8)
        .map(|k| {
            let mut acc = BigInt::zero();
            for &i in &nz_a {
                if i > k {
                    break;
                }
                if let Some(y) = b.get(k - i) {
                    if !y.is_zero() {
                        acc += &a[i] * y;
                    }
                }
            }
            acc
        })
        .collect()
}

/// Reciprocal of a series with constant term 1; the result has integer coefficients.
pub fn recip_unit(b: &[BigInt]) -> Vec<BigInt> {
    assert!(b.first().is_some_and(One::is_one), "constant term must be 1");
    let nz: Vec<usize> = (1..b.len()).filter(|&i| !b[i].is_zero()).collect();
    let mut r: Vec<BigInt> = Vec::with_capacity(b.len());
    r.push(BigInt::one());
    for k in 1..b.len() {
        let mut acc = BigInt::zero();
        for &j in &nz {
            if j > k {
                break;
            }
            let x = &r[k - j];
            if !x.is_zero() {
                acc += &b[j] * x;
            }
        }
        r.push(-acc);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn reciprocal_and_product() {
        let b = z(&[1, 0, 2, 0, 6]);
        let r = recip_unit(&b);
        assert_eq!(r, z(&[1, 0, -2, 0, -2]));
        assert_eq!(mul(&b, &r, 5), z(&[1, 0, 0, 0, 0]));
    }
}
