//! FFT-backed kernels for long float series.
//!
//! Results are approximate; callers report `residual` alongside them.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::SeriesError;

const NAIVE_CUTOFF: usize = 64;

fn naive_convolve(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// First `n` coefficients of the product of `a` and `b`.
pub fn convolve(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    if a.is_empty() || b.is_empty() {
        return vec![0.0; n];
    }
    if a.len().min(b.len()) <= NAIVE_CUTOFF {
        return naive_convolve(a, b, n);
    }
    let size = (a.len() + b.len() - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    // Pack both real inputs into one complex transform.
    let mut buf: Vec<Complex64> = (0..size)
        .map(|i| {
            Complex64::new(
                a.get(i).copied().unwrap_or(0.0),
                b.get(i).copied().unwrap_or(0.0),
            )
        })
        .collect();
    fwd.process(&mut buf);
    let mut prod = vec![Complex64::new(0.0, 0.0); size];
    for k in 0..size {
        let z = buf[k];
        let zc = buf[(size - k) % size].conj();
        let fa = (z + zc) * 0.5;
        let fb = (z - zc) * Complex64::new(0.0, -0.5);
        prod[k] = fa * fb;
    }
    inv.process(&mut prod);
    let scale = 1.0 / size as f64;
    let mut out: Vec<f64> = prod.iter().take(n).map(|z| z.re * scale).collect();
    out.resize(n, 0.0);
    out
}

/// Reciprocal of `s` to the same length by Newton iteration.
pub fn reciprocal(s: &[f64]) -> Result<Vec<f64>, SeriesError> {
    let n = s.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if s[0] == 0.0 || !s[0].is_finite() {
        return Err(SeriesError::NotInvertible { index: 0, value: format!("{}", s[0]) });
    }
    let mut r = vec![1.0 / s[0]];
    while r.len() < n {
        let len = r.len();
        let new_len = (2 * len).min(n);
        let mut e = convolve(&s[..new_len], &r, new_len);
        // 1 - s*r vanishes below `len`
        for x in e.iter_mut() {
            *x = -*x;
        }
        e[0] += 1.0;
        for x in e.iter_mut().take(len) {
            *x = 0.0;
        }
        let corr = convolve(&r, &e, new_len);
        r.resize(new_len, 0.0);
        for (ri, ci) in r.iter_mut().zip(corr) {
            *ri += ci;
        }
    }
    Ok(r)
}

/// Max over coefficients of `|s*r - 1|`.
pub fn residual(s: &[f64], r: &[f64]) -> f64 {
    let n = s.len().min(r.len());
    let mut e = convolve(s, r, n);
    if n > 0 {
        e[0] -= 1.0;
    }
    e.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_reciprocal() {
        let mut s = vec![0.0; 500];
        s[0] = 1.0;
        s[1] = -1.0;
        let r = reciprocal(&s).unwrap();
        let bad: Vec<_> = r.iter().enumerate().filter(|(_, &x)| (x - 1.0).abs() >= 1e-10).take(5).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn fft_matches_naive() {
        let a: Vec<f64> = (0..300).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let b: Vec<f64> = (0..257).map(|i| ((i * 104729) % 11) as f64 / 3.0).collect();
        let f = convolve(&a, &b, 400);
        let g = naive_convolve(&a, &b, 400);
        for (x, y) in f.iter().zip(&g) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn newton_residual_is_small() {
        let s: Vec<f64> = (0..3000).map(|i| 1.0 / (1.0 + i as f64).powi(2)).collect();
        let r = reciprocal(&s).unwrap();
        assert!(residual(&s, &r) < 1e-12);
    }
}
