//! Closed forms for lattice walk counts.
//!
//! `b_{2m} = C(2m,m) T_d(m)` with `T_1 = 1` and
//! `T_d(m) = sum_k C(m,k)^2 T_{d-1}(m-k)`; for `d = 3`, `T_3` obeys a
//! three-term recurrence that avoids the quadratic sum.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::point::{check_dim, LatticePoint};
use crate::error::Result;

/// Row of binomials `C(n, 0..=n)`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * BigUint::from(n + 1 - k) / BigUint::from(k);
        row.push(c.clone());
    }
    row
}

/// `C(2m, m)` for `m = 0..=max_m`.
pub fn central_binomials(max_m: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(max_m + 1);
    let mut c = BigUint::one();
    out.push(c.clone());
    for m in 1..=max_m {
        c = c * BigUint::from(2 * (2 * m - 1)) / BigUint::from(m);
        out.push(c.clone());
    }
    out
}

/// `s_m = sum_k C(m,k)^2 C(2k,k)` via
/// `m^2 s_m = (10m^2 - 10m + 3) s_{m-1} - 9 (m-1)^2 s_{m-2}`.
pub fn three_dim_inner(max_m: usize) -> Vec<BigUint> {
    let mut s: Vec<BigUint> = vec![BigUint::one(), BigUint::from(3u8)];
    for m in 2..=max_m {
        let m_ = m as u64;
        let a = BigUint::from(10 * m_ * m_ - 10 * m_ + 3) * &s[m - 1];
        let b = BigUint::from(9 * (m_ - 1) * (m_ - 1)) * &s[m - 2];
        let q = (a - b) / BigUint::from(m_ * m_);
        s.push(q);
    }
    s.truncate(max_m + 1);
    s
}

/// `T_d(m)` for `m = 0..=max_m` by the quadratic convolution.
pub fn inner_sums(d: usize, max_m: usize) -> Vec<BigUint> {
    let mut t = vec![BigUint::one(); max_m + 1];
    for _ in 1..d {
        let mut next = Vec::with_capacity(max_m + 1);
        for m in 0..=max_m {
            let row = binomial_row(m);
            let mut acc = BigUint::zero();
            for k in 0..=m {
                acc += &row[k] * &row[k] * &t[m - k];
            }
            next.push(acc);
        }
        t = next;
    }
    t
}

/// Walks of length `n` returning to the origin, `n = 0..=max_n`.
pub fn return_counts(d: usize, max_n: usize) -> Result<Vec<BigUint>> {
    check_dim(d)?;
    let max_m = max_n / 2;
    let central = central_binomials(max_m);
    let inner = match d {
        1 => vec![BigUint::one(); max_m + 1],
        2 => central.clone(),
        3 => three_dim_inner(max_m),
        _ => inner_sums(d, max_m),
    };
    let mut b = vec![BigUint::zero(); max_n + 1];
    for m in 0..=max_m {
        b[2 * m] = &central[m] * &inner[m];
    }
    Ok(b)
}

/// Walks of length `n` from the origin ending at `v`, `n = 0..=max_n`.
///
/// Exponential convolution over coordinates: a walk is an interleaving of
/// one-dimensional walks, and `k` steps along axis `i` end at `v_i` in
/// `C(k, (k + v_i)/2)` ways.
pub fn endpoint_count_series(v: &LatticePoint, max_n: usize) -> Result<Vec<BigUint>> {
    check_dim(v.dim())?;
    let rows: Vec<Vec<BigUint>> = (0..=max_n).map(binomial_row).collect();
    let axis = |vi: i64| -> Vec<BigUint> {
        (0..=max_n)
            .map(|k| {
                let a = vi.unsigned_abs() as usize;
                if a > k || (k - a) % 2 == 1 {
                    BigUint::zero()
                } else {
                    rows[k][(k + a) / 2].clone()
                }
            })
            .collect()
    };
    let mut acc = axis(v.coords()[0]);
    for &vi in &v.coords()[1..] {
        let f = axis(vi);
        let mut next = vec![BigUint::zero(); max_n + 1];
        for n in 0..=max_n {
            let mut s = BigUint::zero();
            for k in 0..=n {
                if !f[k].is_zero() && !acc[n - k].is_zero() {
                    s += &rows[n][k] * &f[k] * &acc[n - k];
                }
            }
            next[n] = s;
        }
        acc = next;
    }
    Ok(acc)
}
