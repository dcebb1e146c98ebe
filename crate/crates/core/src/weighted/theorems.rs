//! Limits of weighted recurrence quantities, with the evidence behind each answer.

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::series::abs_interval;
use super::{check_convex, check_superconvex, check_v_transitive, to_complex64, weighted_walk_series, weighted_walk_series_float, WeightedGraph};
use crate::error::{invalid, invariant, Result};
use crate::interval::Interval;
use crate::series::{sqrt_set, Coefficient, ComplexRational, TruncatedSeries};

/// Matrix powers examined by the gauge.
pub const GAUGE_POWERS: usize = 64;
pub const DEFAULT_STABILIZATION_K: usize = 20;
pub const DEFAULT_STABILIZATION_TOL: f64 = 1e-12;
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct GaugeReport {
    /// Largest vertex sum of `|h|` over `V(h)`.
    pub max_row_sum: f64,
    /// `min_k ||(|H|)^k||_inf^{1/k}`, an upper bound on the spectral radius of `|H|`.
    pub power_bound: f64,
    /// Ratio of the last two power norms; an estimate, not a bound.
    pub ratio_estimate: f64,
    pub estimate: f64,
    /// Some power of `|H|` has norm below 1, so `D_{|h|}(1)` is finite.
    pub certified_finite: bool,
    pub certifying_power: Option<usize>,
    /// Rayleigh-quotient lower bound on the spectral radius (nonnegative weights only).
    pub rayleigh_lower: Option<f64>,
}

pub fn spectral_radius_estimate(g: &WeightedGraph) -> GaugeReport {
    let adj: Vec<Vec<(usize, f64)>> = g
        .adjacency()
        .iter()
        .map(|row| row.iter().map(|(w, h)| (*w, abs_interval(h).hi())).collect())
        .collect();
    let comp = g.component();
    let mut y: Vec<f64> = (0..adj.len()).map(|u| if comp.contains(&u) { 1.0 } else { 0.0 }).collect();
    let mut norms = Vec::with_capacity(GAUGE_POWERS);
    let mut certifying_power = None;
    let mut power_bound = f64::INFINITY;
    for k in 1..=GAUGE_POWERS {
        y = (0..adj.len())
            .map(|u| {
                adj[u]
                    .iter()
                    .fold(<Interval as Zero>::zero(), |acc, (w, h)| acc + Interval::point(*h) * Interval::point(y[*w]))
                    .hi()
            })
            .collect();
        let norm = y.iter().copied().fold(0.0, f64::max);
        norms.push(norm);
        let root = if norm == 0.0 {
            0.0
        } else {
            Interval::point(norm).powf(&<Interval as One>::one().checked_div(&Interval::from_int(k as i64)).unwrap()).unwrap().hi()
        };
        power_bound = power_bound.min(root);
        if norm < 1.0 && certifying_power.is_none() {
            certifying_power = Some(k);
        }
        if !(norm.is_finite() && norm < 1e300) || norm == 0.0 {
            break;
        }
    }
    let max_row_sum = norms[0];
    let ratio_estimate = match norms.len() {
        0 | 1 => max_row_sum,
        l if norms[l - 2] > 0.0 => norms[l - 1] / norms[l - 2],
        _ => 0.0,
    };
    GaugeReport {
        max_row_sum,
        power_bound,
        ratio_estimate,
        estimate: power_bound.min(max_row_sum),
        certified_finite: certifying_power.is_some(),
        certifying_power,
        rayleigh_lower: g.is_nonnegative().then(|| rayleigh_lower(g)),
    }
}

/// `max(1'H1 / 1'1, (H1)'H(H1) / (H1)'(H1))` over `V(h)`, exact, rounded down.
fn rayleigh_lower(g: &WeightedGraph) -> f64 {
    let adj = g.adjacency();
    let comp = g.component();
    let apply = |x: &[BigRational]| -> Vec<BigRational> {
        (0..adj.len())
            .map(|u| {
                if !comp.contains(&u) {
                    return <BigRational as Zero>::zero();
                }
                adj[u].iter().fold(<BigRational as Zero>::zero(), |acc, (w, h)| acc + &h.re * &x[*w])
            })
            .collect()
    };
    let dot = |x: &[BigRational], y: &[BigRational]| x.iter().zip(y).fold(<BigRational as Zero>::zero(), |acc, (a, b)| acc + a * b);
    let ones: Vec<BigRational> =
        (0..adj.len()).map(|u| if comp.contains(&u) { <BigRational as One>::one() } else { <BigRational as Zero>::zero() }).collect();
    let h1 = apply(&ones);
    let q1 = dot(&ones, &h1) / dot(&ones, &ones);
    let hh1 = apply(&h1);
    let den = dot(&h1, &h1);
    let q2 = if Zero::is_zero(&den) { <BigRational as Zero>::zero() } else { dot(&h1, &hh1) / den };
    Interval::from_ratio(&q1.max(q2)).lo()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceStatus {
    Exists,
    Diverges,
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stabilization {
    pub k: usize,
    pub tol: f64,
    /// Sum of the absolute values of the last `k` terms.
    pub tail_abs_sum: f64,
    pub stabilized: bool,
}

pub fn stabilization<C: Coefficient>(terms: &TruncatedSeries<C>, k: usize, tol: f64) -> Stabilization {
    let c = terms.coeffs();
    let start = c.len().saturating_sub(k);
    let tail_abs_sum: f64 = c[start..].iter().map(Coefficient::magnitude).sum();
    Stabilization { k, tol, tail_abs_sum, stabilized: c.len() > k && tail_abs_sum < tol }
}

fn partial_sum(s: &TruncatedSeries<ComplexRational>) -> ComplexRational {
    s.coeffs().iter().fold(czero(), |acc, x| acc + x)
}

fn czero() -> ComplexRational {
    Complex::new(Zero::zero(), Zero::zero())
}

fn cone() -> ComplexRational {
    Complex::new(One::one(), Zero::zero())
}

fn cmag(z: &ComplexRational) -> f64 {
    z.magnitude()
}

fn cinv(z: &ComplexRational) -> Result<ComplexRational> {
    match z.checked_inv() {
        Some(x) => Ok(x),
        None => invariant("B_h(1) partial sum vanished"),
    }
}

fn ser_c64<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_opt_c64<S: Serializer>(z: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

fn ser_vec_c64<S: Serializer>(z: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    z.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneralReport {
    pub status: ExistenceStatus,
    pub n_max: usize,
    pub gauge: GaugeReport,
    pub lightness: String,
    #[serde(serialize_with = "ser_opt_c64")]
    pub a_one: Option<Complex64>,
    #[serde(serialize_with = "ser_opt_c64")]
    pub b_one: Option<Complex64>,
    #[serde(serialize_with = "ser_opt_c64")]
    pub d_one: Option<Complex64>,
    /// `|A_h(1) - (1 - 1/B_h(1)) D_h(1)|` on the partial sums.
    pub identity_residual: Option<f64>,
    pub stabilization: Stabilization,
    /// `c_2^h`, positive when the divergence chain applies.
    pub c2: Option<f64>,
    /// `a_{n+2} >= c_2 d_n` for every `n <= N - 2`.
    pub chain_ok: Option<bool>,
}

pub fn general_recurrence_value(g: &WeightedGraph, n: usize) -> Result<GeneralReport> {
    let gauge = spectral_radius_estimate(g);
    let s = weighted_walk_series(g, None, n)?;
    let stab = stabilization(&s.a, DEFAULT_STABILIZATION_K, DEFAULT_STABILIZATION_TOL);
    let mut report = GeneralReport {
        status: ExistenceStatus::Undetermined,
        n_max: n,
        gauge: gauge.clone(),
        lightness: g.lightness_certificate(),
        a_one: None,
        b_one: None,
        d_one: None,
        identity_residual: None,
        stabilization: stab,
        c2: None,
        chain_ok: None,
    };
    if gauge.certified_finite {
        let (a, b, d) = (partial_sum(&s.a), partial_sum(&s.b), partial_sum(&s.d));
        let closed = (cone() - cinv(&b)?) * &d;
        report.status = ExistenceStatus::Exists;
        report.identity_residual = Some(cmag(&(&a - closed)));
        report.a_one = Some(to_complex64(&a));
        report.b_one = Some(to_complex64(&b));
        report.d_one = Some(to_complex64(&d));
    } else if gauge.rayleigh_lower.is_some_and(|r| r >= 1.0) && n >= 2 {
        // Nonnegative with spectral radius at least 1 on a connected component: d_n stays
        // bounded below, so D_h(1) diverges.
        let c2 = s.c.coeff(2).re.clone();
        let chain_ok = (0..=n - 2).all(|k| s.a.coeff(k + 2).re >= &c2 * &s.d.coeff(k).re);
        report.status = ExistenceStatus::Diverges;
        report.c2 = Some(Interval::from_ratio(&c2).mid());
        report.chain_ok = Some(chain_ok);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightedLimit {
    One,
    Value(Complex64),
    Undetermined(Complex64),
}

impl Serialize for WeightedLimit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WeightedLimit::One => s.serialize_str("ONE"),
            WeightedLimit::Value(z) => [z.re, z.im].serialize(s),
            WeightedLimit::Undetermined(z) => {
                serde_json::json!({ "undetermined": [z.re, z.im] }).serialize(s)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexLimitReport {
    pub n_max: usize,
    pub limit: WeightedLimit,
    #[serde(serialize_with = "ser_c64")]
    pub a_last: Complex64,
    /// `|1 - a_N|`.
    pub gap_to_one: f64,
    #[serde(serialize_with = "ser_c64")]
    pub b_partial: Complex64,
    pub stabilization: Stabilization,
    /// `1 - 1/B_h(1)` when the partial sums of `B_h` stabilize.
    #[serde(serialize_with = "ser_opt_c64")]
    pub closed_form: Option<Complex64>,
    /// `|closed_form - a_N|`.
    pub agreement: Option<f64>,
    pub evidence: Option<String>,
}

fn divergence_evidence(g: &WeightedGraph, b: &TruncatedSeries<ComplexRational>) -> String {
    let n = b.order();
    let half = &b.coeffs()[n / 2..];
    let mean = half.iter().map(|x| Interval::from_ratio(&x.re).mid()).sum::<f64>() / half.len() as f64;
    format!(
        "nonnegative convex weight on a finite component of {} vertices is a recurrent chain, so B_h(1) diverges; mean of b_n over n in [{}, {}] is {:.6}",
        g.component().len(),
        n / 2,
        n,
        mean
    )
}

pub fn convex_recurrence_limit(g: &WeightedGraph, n: usize) -> Result<ConvexLimitReport> {
    if !check_convex(g).convex {
        return invalid("the weight is not convex: some vertex sum in V(h) differs from 1");
    }
    let s = weighted_walk_series(g, None, n)?;
    if let Some(k) = s.d.coeffs().iter().position(|x| *x != cone()) {
        return invariant(format!("convex weight with d_{k} != 1"));
    }
    let a_last = s.a.coeff(n).clone();
    let b = partial_sum(&s.b);
    let stab = stabilization(&s.b, DEFAULT_STABILIZATION_K, DEFAULT_STABILIZATION_TOL);
    let a64 = to_complex64(&a_last);
    let mut report = ConvexLimitReport {
        n_max: n,
        limit: WeightedLimit::Undetermined(a64),
        a_last: a64,
        gap_to_one: cmag(&(cone() - &a_last)),
        b_partial: to_complex64(&b),
        stabilization: stab.clone(),
        closed_form: None,
        agreement: None,
        evidence: None,
    };
    if stab.stabilized {
        let closed = cone() - cinv(&b)?;
        report.agreement = Some(cmag(&(&closed - &a_last)));
        report.closed_form = Some(to_complex64(&closed));
        report.limit = WeightedLimit::Value(to_complex64(&closed));
    } else if g.is_nonnegative() {
        report.limit = WeightedLimit::One;
        report.evidence = Some(divergence_evidence(g, &s.b));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VMode {
    General,
    Convex,
}

impl VMode {
    pub fn parse(s: &str) -> Option<VMode> {
        match s {
            "general" => Some(VMode::General),
            "convex" => Some(VMode::Convex),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VisitReport {
    pub mode: VMode,
    pub v: usize,
    pub n_max: usize,
    pub permutation: Vec<usize>,
    pub in_component: bool,
    pub status: ExistenceStatus,
    pub limit: WeightedLimit,
    /// `sum (a_n)'` in general mode, `(a_N)'` in convex mode.
    #[serde(serialize_with = "ser_c64")]
    pub estimate: Complex64,
    /// `D_h(1) sqrt(1 - B_0(1)/B(1))` in general mode, `sqrt(1 - B_0(1)/B(1))` in convex mode.
    #[serde(serialize_with = "ser_vec_c64")]
    pub sqrt_set: Vec<Complex64>,
    pub distances: Vec<f64>,
    /// `+` for the principal root, `-` for its negative.
    pub branch: Option<String>,
    pub tolerance: f64,
    pub certified: bool,
    pub stabilization: Stabilization,
    pub evidence: Option<String>,
}

/// Visit value with a branch certificate. `perm` must carry 1 to `v` and preserve the weights.
pub fn v_recurrence_value(
    g: &WeightedGraph,
    v: usize,
    n: usize,
    mode: VMode,
    perm: &[usize],
    tolerance: f64,
) -> Result<VisitReport> {
    if v == 1 {
        return invalid("the target must differ from the start vertex 1");
    }
    if !check_v_transitive(g, v, perm)? {
        return invalid(format!("the permutation does not certify {v}-transitivity"));
    }
    if mode == VMode::Convex && !check_convex(g).convex {
        return invalid("convex mode needs a convex weight");
    }
    let s = weighted_walk_series(g, Some(v), n)?;
    let p = s.primed.as_ref().expect("target set");
    let in_component = g.component().contains(&v);
    let mut report = VisitReport {
        mode,
        v,
        n_max: n,
        permutation: perm.to_vec(),
        in_component,
        status: ExistenceStatus::Undetermined,
        limit: WeightedLimit::Undetermined(Complex64::new(0.0, 0.0)),
        estimate: Complex64::new(0.0, 0.0),
        sqrt_set: vec![],
        distances: vec![],
        branch: None,
        tolerance,
        certified: false,
        stabilization: stabilization(&p.a_prime, DEFAULT_STABILIZATION_K, DEFAULT_STABILIZATION_TOL),
        evidence: None,
    };
    if !in_component {
        if p.a_prime.coeffs().iter().any(|x| !Zero::is_zero(x)) {
            return invariant(format!("vertex {v} is unreachable yet a visit weight is nonzero"));
        }
        report.status = ExistenceStatus::Exists;
        report.limit = WeightedLimit::Value(Complex64::new(0.0, 0.0));
        report.certified = true;
        report.evidence = Some(format!("vertex {v} lies outside V(h); every visit weight is 0"));
        return Ok(report);
    }
    let b = partial_sum(&s.b);
    let b0 = partial_sum(&p.b_prime);
    let ratio = cone() - &b0 * cinv(&b)?;
    let roots = sqrt_set(to_complex64(&ratio));
    match mode {
        VMode::General => {
            let gauge = spectral_radius_estimate(g);
            if gauge.certified_finite {
                let d = to_complex64(&partial_sum(&s.d));
                let est = to_complex64(&partial_sum(&p.a_prime));
                report.status = ExistenceStatus::Exists;
                report.estimate = est;
                report.sqrt_set = roots.iter().map(|r| d * r).collect();
                report.limit = WeightedLimit::Value(est);
            } else if gauge.rayleigh_lower.is_some_and(|r| r >= 1.0) {
                let m = p.c_prime.coeffs().iter().position(|x| !Zero::is_zero(x));
                let Some(m) = m else {
                    return invariant("no first-passage walk found within the truncation");
                };
                let cm = p.c_prime.coeff(m).re.clone();
                let chain = (0..=n.saturating_sub(m)).all(|k| {
                    k + m > n || p.a_prime.coeff(k + m).re >= &cm * &s.d.coeff(k).re
                });
                report.status = ExistenceStatus::Diverges;
                report.evidence = Some(format!(
                    "(c_{m})' = {cm} > 0 and (a_{{n+{m}}})' >= (c_{m})' d_n holds for n <= {}: {chain}",
                    n.saturating_sub(m)
                ));
                report.certified = chain;
                return Ok(report);
            } else {
                return Ok(report);
            }
        }
        VMode::Convex => {
            let est = to_complex64(p.a_prime.coeff(n));
            report.estimate = est;
            let stab_b = stabilization(&s.b, DEFAULT_STABILIZATION_K, DEFAULT_STABILIZATION_TOL);
            let stab_b0 = stabilization(&p.b_prime, DEFAULT_STABILIZATION_K, DEFAULT_STABILIZATION_TOL);
            if stab_b.stabilized && stab_b0.stabilized {
                report.status = ExistenceStatus::Exists;
                report.sqrt_set = roots;
                report.limit = WeightedLimit::Value(est);
            } else if g.is_nonnegative() {
                // B(1) diverges while the killed chain keeps B_0(1) finite, so the set is sqrt(1).
                report.status = ExistenceStatus::Diverges;
                report.limit = WeightedLimit::One;
                report.sqrt_set = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
                let gap = (Complex64::new(1.0, 0.0) - est).norm();
                report.evidence = Some(format!("{}; |1 - (a_N)'| = {gap:.3e}", divergence_evidence(g, &s.b)));
            } else {
                report.limit = WeightedLimit::Undetermined(est);
                return Ok(report);
            }
        }
    }
    report.distances = report.sqrt_set.iter().map(|r| (r - report.estimate).norm()).collect();
    let best = report
        .distances
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, d)| (i, *d));
    if let Some((i, dist)) = best {
        if dist <= tolerance {
            report.certified = true;
            report.branch = Some(if i == 0 { "+" } else { "-" }.to_string());
        }
    }
    Ok(report)
}

/// `(a_n)'` is nondecreasing for a nonnegative superconvex weight.
pub fn superconvex_monotone(g: &WeightedGraph, v: usize, n: usize) -> Result<bool> {
    let rep = check_superconvex(g)?;
    if !(rep.superconvex && rep.nonnegative) {
        return invalid("needs a nonnegative superconvex weight");
    }
    let s = weighted_walk_series(g, Some(v), n)?;
    let a = &s.primed.as_ref().expect("target set").a_prime;
    Ok(a.coeffs().windows(2).all(|w| w[0].re <= w[1].re))
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioSample {
    pub x: f64,
    pub f_b: f64,
    pub f_b0: f64,
    pub ratio: f64,
    /// `x^N`, the size of the first omitted power.
    pub truncation: f64,
}

/// `F_{B_0}(x) / F_B(x)` at the sample points, from series truncated at `n`.
pub fn sampled_ratio_trend(g: &WeightedGraph, v: usize, xs: &[f64], n: usize) -> Result<Vec<RatioSample>> {
    if !g.is_nonnegative() {
        return invalid("the ratio trend is defined for nonnegative weights");
    }
    if xs.iter().any(|x| !(0.0..1.0).contains(x)) {
        return invalid("sample points must lie in [0, 1)");
    }
    let s = weighted_walk_series_float(g, Some(v), n)?;
    let p = s.primed.as_ref().expect("target set");
    let eval = |t: &TruncatedSeries<Complex64>, x: f64| t.coeffs().iter().rev().fold(0.0, |acc, c| acc * x + c.re);
    Ok(xs
        .iter()
        .map(|&x| {
            let f_b = eval(&s.b, x);
            let f_b0 = eval(&p.b_prime, x);
            RatioSample { x, f_b, f_b0, ratio: f_b0 / f_b, truncation: x.powi(n as i32) }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighted::tests::{real, w};

    fn edge(h: ComplexRational) -> WeightedGraph {
        WeightedGraph::new(2, &[(1, 2, h)]).unwrap()
    }

    #[test]
    fn gauge_examples() {
        assert!((spectral_radius_estimate(&edge(real(1, 2))).estimate - 0.5).abs() < 1e-12);
        assert!((spectral_radius_estimate(&edge(w((0, 1), (1, 2)))).estimate - 0.5).abs() < 1e-12);
        let tri = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (1, 3, real(1, 2)), (2, 3, real(1, 2))]).unwrap();
        let g = spectral_radius_estimate(&tri);
        assert!(!g.certified_finite);
        assert!((g.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn general_values() {
        let r = general_recurrence_value(&edge(real(1, 2)), 100).unwrap();
        assert_eq!(r.status, ExistenceStatus::Exists);
        assert!((r.a_one.unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-10);
        assert!(r.identity_residual.unwrap() < 1e-10);
        let r = general_recurrence_value(&edge(w((0, 1), (1, 2))), 100).unwrap();
        assert!((r.a_one.unwrap() - Complex64::new(-0.2, -0.1)).norm() < 1e-10);
        let r = general_recurrence_value(&edge(real(1, 1)), 20).unwrap();
        assert_eq!(r.status, ExistenceStatus::Diverges);
        assert_eq!(r.c2, Some(1.0));
        assert_eq!(r.chain_ok, Some(true));
    }

    #[test]
    fn convex_limits() {
        let r = convex_recurrence_limit(&edge(real(1, 1)), 30).unwrap();
        assert_eq!(r.limit, WeightedLimit::One);
        assert_eq!(r.a_last, Complex64::new(1.0, 0.0));
        let tri = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (1, 3, real(1, 2)), (2, 3, real(1, 2))]).unwrap();
        let r = convex_recurrence_limit(&tri, 200).unwrap();
        assert_eq!(r.limit, WeightedLimit::One);
        assert!(r.gap_to_one < 1e-3);
        let star = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (1, 3, real(1, 2))]).unwrap();
        assert!(convex_recurrence_limit(&star, 10).is_err());
    }

    #[test]
    fn visit_values() {
        let r = v_recurrence_value(&edge(real(1, 2)), 2, 60, VMode::General, &[2, 1], DEFAULT_MEMBERSHIP_TOL).unwrap();
        assert!(r.certified);
        assert_eq!(r.branch.as_deref(), Some("+"));
        assert!((r.estimate - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let r = v_recurrence_value(&edge(real(1, 1)), 2, 20, VMode::Convex, &[2, 1], DEFAULT_MEMBERSHIP_TOL).unwrap();
        assert_eq!(r.limit, WeightedLimit::One);
        assert!(r.certified);
        let apart = WeightedGraph::new(4, &[(1, 2, real(1, 2)), (3, 4, real(1, 2))]).unwrap();
        let r = v_recurrence_value(&apart, 3, 10, VMode::General, &[3, 4, 1, 2], DEFAULT_MEMBERSHIP_TOL).unwrap();
        assert!(!r.in_component && r.certified);
        assert!(v_recurrence_value(&edge(real(1, 2)), 1, 10, VMode::General, &[1, 2], 1e-8).is_err());
        let uneven = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (2, 3, real(1, 3))]).unwrap();
        assert!(v_recurrence_value(&uneven, 2, 10, VMode::General, &[2, 1, 3], 1e-8).is_err());
    }

    #[test]
    fn superconvex_and_ratio() {
        let g = edge(real(3, 2));
        assert!(superconvex_monotone(&g, 2, 12).unwrap());
        let tri = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (1, 3, real(1, 2)), (2, 3, real(1, 2))]).unwrap();
        let s = sampled_ratio_trend(&tri, 2, &[0.9, 0.99, 0.999], 40_000).unwrap();
        assert!(s.windows(2).all(|w| w[1].ratio < w[0].ratio));
        assert!(s[2].ratio < 0.01);
    }
}
