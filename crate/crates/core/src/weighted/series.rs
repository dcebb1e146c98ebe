//! Weighted walk series by transfer recurrences, and a brute-force oracle.

use num_complex::{Complex, Complex64};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{to_complex64, WeightedGraph};
use crate::error::{invalid, resource, Result};
use crate::interval::Interval;
use crate::series::{Coefficient, ComplexRational, TruncatedSeries};

/// Enumeration budget for the brute-force oracle.
pub const WEIGHTED_ENUMERATION_BUDGET: f64 = 1e8;
const PARALLEL_MIN_VERTICES: usize = 256;

#[derive(Debug, Clone)]
pub struct PrimedWeighted<C: Coefficient> {
    pub v: usize,
    /// Weight of walks visiting `v` at a positive step.
    pub a_prime: TruncatedSeries<C>,
    /// Walks ending at 1 that never stand on `v`.
    pub b_prime: TruncatedSeries<C>,
    /// Walks ending at `v` whose inner part avoids `v`.
    pub c_prime: TruncatedSeries<C>,
    /// Walks ending at `v` whose inner part avoids 1 and `v`.
    pub c_dprime: TruncatedSeries<C>,
}

#[derive(Debug, Clone)]
pub struct WeightedSeriesBundle<C: Coefficient> {
    pub n_max: usize,
    pub a: TruncatedSeries<C>,
    pub b: TruncatedSeries<C>,
    pub c: TruncatedSeries<C>,
    pub d: TruncatedSeries<C>,
    pub primed: Option<PrimedWeighted<C>>,
}

/// One transfer step `y[u] = sum_w h(u,w) x[w]`, zeroed on blocked vertices.
fn step<C: Coefficient>(adj: &[Vec<(usize, C)>], x: &[C], blocked: &[usize]) -> Vec<C> {
    let f = |u: usize| {
        if u == 0 || blocked.contains(&u) {
            return C::zero();
        }
        let mut acc = C::zero();
        for (w, h) in &adj[u] {
            if !x[*w].is_zero() {
                acc = acc.add(&h.mul(&x[*w]));
            }
        }
        acc
    };
    if adj.len() >= PARALLEL_MIN_VERTICES {
        (0..adj.len()).into_par_iter().map(f).collect()
    } else {
        (0..adj.len()).map(f).collect()
    }
}

fn total<C: Coefficient>(x: &[C]) -> C {
    x.iter().fold(C::zero(), |acc, y| acc.add(y))
}

fn entry_into<C: Coefficient>(adj: &[Vec<(usize, C)>], x: &[C], v: usize) -> C {
    adj[v].iter().fold(C::zero(), |acc, (w, h)| acc.add(&h.mul(&x[*w])))
}

fn unit<C: Coefficient>(len: usize) -> Vec<C> {
    let mut x = vec![C::zero(); len];
    x[1] = C::one();
    x
}

fn walk_series<C: Coefficient>(
    adj: &[Vec<(usize, C)>],
    v: Option<usize>,
    n: usize,
) -> Result<WeightedSeriesBundle<C>> {
    let len = adj.len();
    let mut x = unit::<C>(len);
    let (mut b, mut d) = (vec![C::one()], vec![C::one()]);
    for _ in 0..n {
        x = step(adj, &x, &[]);
        b.push(x[1].clone());
        d.push(total(&x));
    }
    let b = TruncatedSeries::new(b);
    let d = TruncatedSeries::new(d);
    let c = b.solve_first_return()?;
    let a = c.multiply(&d);
    let primed = match v {
        None => None,
        Some(v) => {
            let mut y = unit::<C>(len);
            let mut z = unit::<C>(len);
            let (mut bp, mut cp, mut cpp, mut ap) = (vec![C::one()], vec![C::zero()], vec![C::zero()], vec![C::zero()]);
            for k in 1..=n {
                cp.push(entry_into(adj, &y, v));
                cpp.push(entry_into(adj, &z, v));
                y = step(adj, &y, &[v]);
                z = step(adj, &z, &[1, v]);
                bp.push(y[1].clone());
                ap.push(d.coeff(k).sub(&total(&y)));
            }
            Some(PrimedWeighted {
                v,
                a_prime: TruncatedSeries::new(ap),
                b_prime: TruncatedSeries::new(bp),
                c_prime: TruncatedSeries::new(cp),
                c_dprime: TruncatedSeries::new(cpp),
            })
        }
    };
    Ok(WeightedSeriesBundle { n_max: n, a, b, c, d, primed })
}

fn check_target(g: &WeightedGraph, v: Option<usize>) -> Result<()> {
    if let Some(v) = v {
        g.check_vertex(v)?;
        if v == 1 {
            return invalid("the target must differ from the start vertex 1");
        }
    }
    Ok(())
}

/// Exact series over complex rationals.
pub fn weighted_walk_series(
    g: &WeightedGraph,
    v: Option<usize>,
    n: usize,
) -> Result<WeightedSeriesBundle<ComplexRational>> {
    check_target(g, v)?;
    walk_series(g.adjacency(), v, n)
}

/// The same series in double precision, for long truncations.
pub fn weighted_walk_series_float(
    g: &WeightedGraph,
    v: Option<usize>,
    n: usize,
) -> Result<WeightedSeriesBundle<Complex64>> {
    check_target(g, v)?;
    let adj: Vec<Vec<(usize, Complex64)>> = g
        .adjacency()
        .iter()
        .map(|row| row.iter().map(|(w, h)| (*w, to_complex64(h))).collect())
        .collect();
    walk_series(&adj, v, n)
}

/// Upper bounds on `d^{|h|}_n`, the total absolute weight of length-`n` walks.
pub fn abs_total_weights(g: &WeightedGraph, n: usize) -> Vec<f64> {
    let adj: Vec<Vec<(usize, Interval)>> = g
        .adjacency()
        .iter()
        .map(|row| row.iter().map(|(w, h)| (*w, abs_interval(h))).collect())
        .collect();
    let mut x = vec![0.0f64; adj.len()];
    x[1] = 1.0;
    let mut out = vec![1.0];
    for _ in 0..n {
        x = (0..adj.len())
            .map(|u| {
                adj[u]
                    .iter()
                    .fold(<Interval as Zero>::zero(), |acc, (w, h)| acc + Interval::new(0.0, h.hi()) * Interval::point(x[*w]))
                    .hi()
            })
            .collect();
        out.push(x.iter().fold(<Interval as Zero>::zero(), |acc, y| acc + Interval::point(*y)).hi());
    }
    out
}

pub(crate) fn abs_interval(h: &ComplexRational) -> Interval {
    let n2 = Interval::from_ratio(&(&h.re * &h.re + &h.im * &h.im));
    n2.sqrt().expect("nonnegative")
}

impl<C: Coefficient> WeightedSeriesBundle<C> {
    pub fn to_json(&self) -> Value {
        let s = |t: &TruncatedSeries<C>| Value::Array(t.coeffs().iter().map(Coefficient::to_json).collect());
        let mut out = json!({
            "order": self.n_max,
            "semantics": C::SEMANTICS.name(),
            "a": s(&self.a),
            "b": s(&self.b),
            "c": s(&self.c),
            "d": s(&self.d),
        });
        if let Some(p) = &self.primed {
            out["v"] = json!(p.v);
            out["a_prime"] = s(&p.a_prime);
            out["b_prime"] = s(&p.b_prime);
            out["c_prime"] = s(&p.c_prime);
            out["c_dprime"] = s(&p.c_dprime);
        }
        out
    }
}

/// Recurrent and first-return weights computed directly from walks that avoid 1 after the start.
pub fn direct_recurrence_series(
    g: &WeightedGraph,
    n: usize,
) -> (TruncatedSeries<ComplexRational>, TruncatedSeries<ComplexRational>) {
    let adj = g.adjacency();
    let mut x = unit::<ComplexRational>(adj.len());
    let mut y = unit::<ComplexRational>(adj.len());
    let (mut a, mut c) = (vec![czero()], vec![czero()]);
    for _ in 0..n {
        c.push(entry_into(adj, &y, 1));
        x = step(adj, &x, &[]);
        y = step(adj, &y, &[1]);
        a.push(total(&x) - total(&y));
    }
    (TruncatedSeries::new(a), TruncatedSeries::new(c))
}

/// Coefficientwise generating-function identities; the primed ones need a target, and
/// those marked transitive hold only under a weight-preserving symmetry carrying 1 to `v`.
pub fn check_identities(
    g: &WeightedGraph,
    s: &WeightedSeriesBundle<ComplexRational>,
    transitive: bool,
) -> Vec<(&'static str, bool)> {
    let (a_direct, c_direct) = direct_recurrence_series(g, s.n_max);
    let one = TruncatedSeries::<ComplexRational>::unit(s.n_max);
    let mut out = vec![
        ("A = C D", a_direct == s.c.multiply(&s.d) && s.a == a_direct),
        ("B (1 - C) = 1", s.b.multiply(&one.sub(&c_direct)) == one && s.c == c_direct),
    ];
    if let Some(p) = &s.primed {
        out.push(("C_0 = B_0 C_1", p.c_prime == p.b_prime.multiply(&p.c_dprime)));
        if transitive {
            out.push(("A_0 = C_0 D", p.a_prime == p.c_prime.multiply(&s.d)));
            let c0sq = p.c_prime.multiply(&p.c_prime);
            out.push(("B = B_0 + C_0^2 B", s.b == p.b_prime.add(&c0sq.multiply(&s.b))));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteWeightedRow {
    pub a: ComplexRational,
    pub b: ComplexRational,
    pub c: ComplexRational,
    pub d: ComplexRational,
    pub a_prime: ComplexRational,
    pub b_prime: ComplexRational,
    pub c_prime: ComplexRational,
    pub c_dprime: ComplexRational,
}

fn czero() -> ComplexRational {
    Complex::new(Zero::zero(), Zero::zero())
}

impl BruteWeightedRow {
    fn zero() -> Self {
        BruteWeightedRow {
            a: czero(),
            b: czero(),
            c: czero(),
            d: czero(),
            a_prime: czero(),
            b_prime: czero(),
            c_prime: czero(),
            c_dprime: czero(),
        }
    }

    fn merge(mut self, o: BruteWeightedRow) -> Self {
        self.a = self.a + o.a;
        self.b = self.b + o.b;
        self.c = self.c + o.c;
        self.d = self.d + o.d;
        self.a_prime = self.a_prime + o.a_prime;
        self.b_prime = self.b_prime + o.b_prime;
        self.c_prime = self.c_prime + o.c_prime;
        self.c_dprime = self.c_dprime + o.c_dprime;
        self
    }

    fn record(&mut self, path: &[usize], w: &ComplexRational, v: Option<usize>) {
        let n = path.len() - 1;
        let last = path[n];
        let inner = &path[1..n.max(1)];
        let inner = if n == 0 { &[][..] } else { inner };
        self.d = self.d.clone() + w;
        if path[1..].contains(&1) {
            self.a = self.a.clone() + w;
        }
        if last == 1 {
            self.b = self.b.clone() + w;
            if n > 0 && !inner.contains(&1) {
                self.c = self.c.clone() + w;
            }
        }
        if let Some(v) = v {
            let visits = path[1..].contains(&v);
            if visits {
                self.a_prime = self.a_prime.clone() + w;
            } else if last == 1 {
                self.b_prime = self.b_prime.clone() + w;
            }
            if n > 0 && last == v && !inner.contains(&v) {
                self.c_prime = self.c_prime.clone() + w;
                if !inner.contains(&1) {
                    self.c_dprime = self.c_dprime.clone() + w;
                }
            }
        }
    }
}

fn extend(
    g: &WeightedGraph,
    path: &mut Vec<usize>,
    w: &ComplexRational,
    n: usize,
    v: Option<usize>,
    row: &mut BruteWeightedRow,
) {
    if path.len() == n + 1 {
        row.record(path, w, v);
        return;
    }
    let u = *path.last().unwrap();
    for (x, h) in &g.adjacency()[u] {
        path.push(*x);
        extend(g, path, &(w * h), n, v, row);
        path.pop();
    }
}

/// Sums over every length-`n` walk from 1 through nonzero-weight edges.
pub fn brute_force_weighted(g: &WeightedGraph, v: Option<usize>, n: usize) -> Result<BruteWeightedRow> {
    check_target(g, v)?;
    let work = (g.max_degree().max(1) as f64).powi(n as i32);
    if work > WEIGHTED_ENUMERATION_BUDGET {
        return resource(format!("enumeration of about {work:.3e} walks exceeds the budget"));
    }
    let one: ComplexRational = Complex::new(num_traits::One::one(), Zero::zero());
    if n == 0 {
        let mut row = BruteWeightedRow::zero();
        row.record(&[1], &one, v);
        return Ok(row);
    }
    Ok(g.adjacency()[1]
        .par_iter()
        .map(|(x, h)| {
            let mut row = BruteWeightedRow::zero();
            let mut path = vec![1, *x];
            extend(g, &mut path, h, n, v, &mut row);
            row
        })
        .reduce(BruteWeightedRow::zero, BruteWeightedRow::merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighted::tests::{real, w};

    fn edge(h: ComplexRational) -> WeightedGraph {
        WeightedGraph::new(2, &[(1, 2, h)]).unwrap()
    }

    fn reals(v: &[(i64, i64)]) -> Vec<ComplexRational> {
        v.iter().map(|&(p, q)| real(p, q)).collect()
    }

    #[test]
    fn single_edge_weight_one() {
        let s = weighted_walk_series(&edge(real(1, 1)), None, 6).unwrap();
        assert_eq!(s.d.coeffs(), reals(&[(1, 1); 7]).as_slice());
        assert_eq!(s.b.coeffs(), reals(&[(1, 1), (0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)]).as_slice());
        assert_eq!(s.c.coeffs(), reals(&[(0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]).as_slice());
        assert_eq!(s.a.coeffs(), reals(&[(0, 1), (0, 1), (1, 1), (1, 1), (1, 1), (1, 1), (1, 1)]).as_slice());
    }

    #[test]
    fn single_edge_geometric() {
        let s = weighted_walk_series(&edge(real(1, 2)), None, 6).unwrap();
        for k in 0..=6usize {
            assert_eq!(s.d.coeff(k), &real(1, 1 << k));
            let expect = if k % 2 == 0 { real(1, 1 << k) } else { real(0, 1) };
            assert_eq!(s.b.coeff(k), &expect);
        }
        assert_eq!(s.c.coeff(2), &real(1, 4));
        assert!(Zero::is_zero(s.c.coeff(4)));
        let s = weighted_walk_series(&edge(w((0, 1), (1, 2))), None, 6).unwrap();
        assert_eq!(s.d.coeff(3), &w((0, 1), (-1, 8)));
        assert_eq!(s.b.coeff(4), &real(1, 16));
        assert_eq!(s.b.coeff(2), &real(-1, 4));
    }

    #[test]
    fn brute_force_small() {
        let g = edge(w((0, 1), (1, 2)));
        let r = brute_force_weighted(&g, Some(2), 0).unwrap();
        assert_eq!(r.d, real(1, 1));
        assert_eq!(r.b, real(1, 1));
        assert!(Zero::is_zero(&r.a));
        assert_eq!(brute_force_weighted(&g, None, 2).unwrap().d, real(-1, 4));
        assert!(brute_force_weighted(&g, Some(1), 2).is_err());
    }

    #[test]
    fn abs_bound_geometric() {
        let t = abs_total_weights(&edge(w((0, 1), (1, 2))), 4);
        for (k, x) in t.iter().enumerate() {
            assert!((x - 0.5f64.powi(k as i32)).abs() < 1e-15);
        }
    }
}
