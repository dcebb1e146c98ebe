//! Walks on finite graphs with complex edge weights.
//!
//! Vertices are labelled `1..=m` and walks start at vertex 1. A weight is zero
//! on every pair not listed, so each length-`n` weight sum is finite.

mod series;
mod theorems;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{invalid, resource, Result};
use crate::lattice::{ball_points, LatticePoint};
use crate::series::ComplexRational;

pub use series::{
    abs_total_weights, brute_force_weighted, check_identities, direct_recurrence_series, weighted_walk_series,
    weighted_walk_series_float, BruteWeightedRow, PrimedWeighted, WeightedSeriesBundle,
};
pub use theorems::{
    convex_recurrence_limit, general_recurrence_value, sampled_ratio_trend, spectral_radius_estimate,
    superconvex_monotone, v_recurrence_value, ConvexLimitReport, ExistenceStatus, GaugeReport, GeneralReport,
    RatioSample, Stabilization, VMode, VisitReport, WeightedLimit, DEFAULT_MEMBERSHIP_TOL,
    DEFAULT_STABILIZATION_K, DEFAULT_STABILIZATION_TOL, GAUGE_POWERS,
};

/// Largest graph for the exhaustive symmetry search.
pub const MAX_PERM_SEARCH: usize = 9;

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    m: usize,
    /// Nonzero weights keyed by `(u, w)` with `u < w`.
    weights: BTreeMap<(usize, usize), ComplexRational>,
    /// `adj[u]` lists `(w, h({u,w}))` for nonzero weights; index 0 is unused.
    adj: Vec<Vec<(usize, ComplexRational)>>,
    component: BTreeSet<usize>,
}

fn key(u: usize, w: usize) -> (usize, usize) {
    (u.min(w), u.max(w))
}

impl WeightedGraph {
    /// Builds a graph on at least `vertices` vertices (more if an edge names a larger label).
    pub fn new(vertices: usize, edges: &[(usize, usize, ComplexRational)]) -> Result<Self> {
        let mut m = vertices.max(1);
        let mut seen = BTreeSet::new();
        let mut weights = BTreeMap::new();
        for (u, w, h) in edges {
            if *u < 1 || *w < 1 {
                return invalid(format!("vertex labels start at 1, got edge ({u},{w})"));
            }
            if u == w {
                return invalid(format!("loop at vertex {u}"));
            }
            if !seen.insert(key(*u, *w)) {
                return invalid(format!("duplicate pair {{{u},{w}}}"));
            }
            m = m.max(*u).max(*w);
            if !h.is_zero() {
                weights.insert(key(*u, *w), h.clone());
            }
        }
        let mut adj = vec![Vec::new(); m + 1];
        for (&(u, w), h) in &weights {
            adj[u].push((w, h.clone()));
            adj[w].push((u, h.clone()));
        }
        let mut component = BTreeSet::from([1]);
        let mut queue = VecDeque::from([1]);
        while let Some(u) = queue.pop_front() {
            for (w, _) in &adj[u] {
                if component.insert(*w) {
                    queue.push_back(*w);
                }
            }
        }
        Ok(WeightedGraph { m, weights, adj, component })
    }

    pub fn vertices(&self) -> usize {
        self.m
    }

    /// `V(h)`: the component of vertex 1 in the nonzero-weight subgraph.
    pub fn component(&self) -> &BTreeSet<usize> {
        &self.component
    }

    pub fn weight(&self, u: usize, w: usize) -> ComplexRational {
        self.weights.get(&key(u, w)).cloned().unwrap_or_else(|| Complex::new(Zero::zero(), Zero::zero()))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &ComplexRational)> {
        self.weights.iter().map(|(&(u, w), h)| (u, w, h))
    }

    pub(crate) fn adjacency(&self) -> &[Vec<(usize, ComplexRational)>] {
        &self.adj
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// All weights are real and nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.weights.values().all(|h| h.im.is_zero() && !h.re.is_negative())
    }

    pub fn is_real(&self) -> bool {
        self.weights.values().all(|h| h.im.is_zero())
    }

    /// `sum_w h({u,w})`.
    pub fn vertex_sum(&self, u: usize) -> ComplexRational {
        let mut s: ComplexRational = Complex::new(Zero::zero(), Zero::zero());
        for (_, h) in &self.adj[u] {
            s = s + h;
        }
        s
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < 1 || v > self.m {
            return invalid(format!("vertex {v} is not among 1..={}", self.m));
        }
        Ok(())
    }

    /// Every vertex has finite degree, so every per-length weight sum is a finite sum.
    pub fn lightness_certificate(&self) -> String {
        format!("finite support: {} vertices, max degree {}", self.m, self.max_degree())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let vertices = v.get("vertices").and_then(Value::as_u64).unwrap_or(1) as usize;
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| crate::Error::InvalidInput("graph needs an \"edges\" array".into()))?;
        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            let parts = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
                crate::Error::InvalidInput(format!("edge must be [u, v, weight], got {e}"))
            })?;
            let label = |x: &Value| {
                x.as_u64()
                    .map(|n| n as usize)
                    .ok_or_else(|| crate::Error::InvalidInput(format!("bad vertex label {x}")))
            };
            out.push((label(&parts[0])?, label(&parts[1])?, parse_weight(&parts[2])?));
        }
        WeightedGraph::new(vertices, &out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.m,
            "edges": self.edges().map(|(u, w, h)| json!([u, w, weight_json(h)])).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn weight_json(h: &ComplexRational) -> Value {
    json!([format!("{}/{}", h.re.numer(), h.re.denom()), format!("{}/{}", h.im.numer(), h.im.denom())])
}

pub fn to_complex64(h: &ComplexRational) -> Complex64 {
    Complex64::new(h.re.to_f64().unwrap_or(f64::NAN), h.im.to_f64().unwrap_or(f64::NAN))
}

/// Parses `"p/q"`, an integer, or a decimal literal exactly.
pub fn parse_rational(v: &Value) -> Result<BigRational> {
    let text = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        other => return invalid(format!("expected a number or \"p/q\", got {other}")),
    };
    parse_rational_str(&text)
}

pub fn parse_rational_str(text: &str) -> Result<BigRational> {
    let bad = || crate::Error::InvalidInput(format!("bad rational {text:?}"));
    if text.contains('/') {
        return text.parse::<BigRational>().map_err(|_| bad());
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    })
}

/// A weight is `[re, im]` or a single real.
pub fn parse_weight(v: &Value) -> Result<ComplexRational> {
    match v.as_array() {
        Some(a) if a.len() == 2 => Ok(Complex::new(parse_rational(&a[0])?, parse_rational(&a[1])?)),
        Some(_) => invalid(format!("weight must be [re, im], got {v}")),
        None => Ok(Complex::new(parse_rational(v)?, Zero::zero())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexReport {
    pub convex: bool,
    /// `(u, sum of weights at u, equals 1)` for each `u` in `V(h)`.
    pub vertices: Vec<(usize, Value, bool)>,
}

pub fn check_convex(g: &WeightedGraph) -> ConvexReport {
    let one: ComplexRational = Complex::new(One::one(), Zero::zero());
    let vertices: Vec<(usize, Value, bool)> = g
        .component
        .iter()
        .map(|&u| {
            let s = g.vertex_sum(u);
            let ok = s == one;
            (u, weight_json(&s), ok)
        })
        .collect();
    ConvexReport { convex: vertices.iter().all(|v| v.2), vertices }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuperconvexReport {
    pub superconvex: bool,
    pub nonnegative: bool,
    pub vertices: Vec<(usize, String, bool)>,
}

pub fn check_superconvex(g: &WeightedGraph) -> Result<SuperconvexReport> {
    if !g.is_real() {
        return invalid("superconvexity compares real sums; the graph has non-real weights");
    }
    let one = BigRational::one();
    let vertices: Vec<(usize, String, bool)> = g
        .component
        .iter()
        .map(|&u| {
            let s = g.vertex_sum(u).re;
            let ok = s >= one;
            (u, s.to_string(), ok)
        })
        .collect();
    Ok(SuperconvexReport {
        superconvex: vertices.iter().all(|v| v.2),
        nonnegative: g.is_nonnegative(),
        vertices,
    })
}

/// `perm[i - 1]` is the image of vertex `i`; vertices beyond `m` are fixed.
pub fn check_v_transitive(g: &WeightedGraph, v: usize, perm: &[usize]) -> Result<bool> {
    g.check_vertex(v)?;
    if perm.len() != g.m {
        return invalid(format!("permutation has {} entries, graph has {} vertices", perm.len(), g.m));
    }
    let mut seen = vec![false; g.m + 1];
    for &p in perm {
        if p < 1 || p > g.m || std::mem::replace(&mut seen[p], true) {
            return invalid("permutation is not a bijection on the vertices");
        }
    }
    if perm[0] != v {
        return invalid(format!("permutation sends 1 to {}, not {v}", perm[0]));
    }
    Ok(preserves_weights(g, perm))
}

fn preserves_weights(g: &WeightedGraph, perm: &[usize]) -> bool {
    // A bijection on pairs that keeps every nonzero weight also keeps the zero pairs.
    g.weights.iter().all(|(&(u, w), h)| g.weights.get(&key(perm[u - 1], perm[w - 1])) == Some(h))
}

/// Exhaustive search for a weight-preserving permutation with `1 -> v`.
pub fn find_v_transitive_perm(g: &WeightedGraph, v: usize) -> Result<Option<Vec<usize>>> {
    g.check_vertex(v)?;
    if g.m > MAX_PERM_SEARCH {
        return resource(format!("exhaustive search is limited to {MAX_PERM_SEARCH} vertices"));
    }
    let rest: Vec<usize> = (1..=g.m).filter(|&x| x != v).collect();
    for tail in rest.iter().copied().permutations(rest.len()) {
        let mut perm = Vec::with_capacity(g.m);
        perm.push(v);
        perm.extend(tail);
        if preserves_weights(g, &perm) {
            return Ok(Some(perm));
        }
    }
    Ok(None)
}

/// A finite window of `Z^d`: the L1 ball of the given radius, origin labelled 1,
/// each lattice edge weighted `1/(2d)`. Also returns the labels of the points.
pub fn lattice_window(d: usize, radius: usize) -> Result<(WeightedGraph, Vec<LatticePoint>)> {
    let points = ball_points(d, radius)?;
    let mut labels: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    // origin first
    let mut ordered: Vec<LatticePoint> = Vec::with_capacity(points.len());
    ordered.push(LatticePoint::origin(d)?);
    ordered.extend(points.into_iter().filter(|p| !p.is_origin()));
    for (i, p) in ordered.iter().enumerate() {
        labels.insert(p.coords().to_vec(), i + 1);
    }
    let h: ComplexRational = Complex::new(BigRational::new(BigInt::one(), BigInt::from(2 * d)), Zero::zero());
    let mut edges = Vec::new();
    for (i, p) in ordered.iter().enumerate() {
        for axis in 0..d {
            let mut q = p.coords().to_vec();
            q[axis] += 1;
            if let Some(&j) = labels.get(&q) {
                edges.push((i + 1, j, h.clone()));
            }
        }
    }
    Ok((WeightedGraph::new(ordered.len(), &edges)?, ordered))
}

/// A named example graph with an optional target and symmetry.
#[derive(Debug, Clone)]
pub struct BatteryCase {
    pub name: &'static str,
    pub graph: WeightedGraph,
    pub target: Option<usize>,
    pub perm: Option<Vec<usize>>,
}

fn cr(re: (i64, i64), im: (i64, i64)) -> ComplexRational {
    Complex::new(BigRational::new(re.0.into(), re.1.into()), BigRational::new(im.0.into(), im.1.into()))
}

pub fn battery() -> Vec<BatteryCase> {
    let r = |p, q| cr((p, q), (0, 1));
    let case = |name, edges: Vec<(usize, usize, ComplexRational)>, target, perm: Option<Vec<usize>>| BatteryCase {
        name,
        graph: WeightedGraph::new(1, &edges).expect("valid example"),
        target,
        perm,
    };
    let quarter_diag = cr((1, 4), (1, 4));
    vec![
        case("edge_one", vec![(1, 2, r(1, 1))], Some(2), Some(vec![2, 1])),
        case("edge_half", vec![(1, 2, r(1, 2))], Some(2), Some(vec![2, 1])),
        case("edge_i_half", vec![(1, 2, cr((0, 1), (1, 2)))], Some(2), Some(vec![2, 1])),
        case(
            "triangle_half",
            vec![(1, 2, r(1, 2)), (1, 3, r(1, 2)), (2, 3, r(1, 2))],
            Some(2),
            Some(vec![2, 1, 3]),
        ),
        case("path3_half", vec![(1, 2, r(1, 2)), (2, 3, r(1, 2))], Some(3), Some(vec![3, 2, 1])),
        case("path4_uneven", vec![(1, 2, r(1, 2)), (2, 3, r(1, 3)), (3, 4, r(1, 4))], Some(3), None),
        case(
            "cycle4_half",
            vec![(1, 2, r(1, 2)), (2, 3, r(1, 2)), (3, 4, r(1, 2)), (1, 4, r(1, 2))],
            Some(2),
            Some(vec![2, 3, 4, 1]),
        ),
        case(
            "cycle4_complex",
            vec![
                (1, 2, quarter_diag.clone()),
                (2, 3, quarter_diag.clone()),
                (3, 4, quarter_diag.clone()),
                (1, 4, quarter_diag),
            ],
            Some(3),
            Some(vec![3, 4, 1, 2]),
        ),
    ]
}

/// Compares every weighted sequence on the window of radius `n` with the lattice counts
/// scaled by `(2d)^{-k}`. Returns one `(sequence, equal)` pair per sequence.
pub fn lattice_bridge(d: usize, v: &LatticePoint, n: usize) -> Result<Vec<(&'static str, bool)>> {
    use crate::lattice::walk_table;
    if v.is_origin() {
        return invalid("the bridge compares visit sequences; pick v != 0");
    }
    let (g, points) = lattice_window(d, n.max(v.l1() as usize))?;
    let label = points.iter().position(|p| p == v).expect("window contains v") + 1;
    let s = weighted_walk_series(&g, Some(label), n)?;
    let p = s.primed.as_ref().expect("target set");
    let t = walk_table(d, v, n)?;
    let tp = t.primed.as_ref().expect("target set");
    let scale = |x: &[num_bigint::BigUint]| -> Vec<ComplexRational> {
        x.iter()
            .enumerate()
            .map(|(k, c)| {
                Complex::new(
                    BigRational::new(BigInt::from(c.clone()), BigInt::from(2 * d).pow(k as u32)),
                    Zero::zero(),
                )
            })
            .collect()
    };
    Ok(vec![
        ("a", s.a.coeffs() == scale(&t.a).as_slice()),
        ("b", s.b.coeffs() == scale(&t.b).as_slice()),
        ("c", s.c.coeffs() == scale(&t.c).as_slice()),
        ("d", s.d.coeffs() == scale(&t.d_seq).as_slice()),
        ("a_prime", p.a_prime.coeffs() == scale(&tp.a_prime).as_slice()),
        ("b_prime", p.b_prime.coeffs() == scale(&tp.b_prime).as_slice()),
        ("c_prime", p.c_prime.coeffs() == scale(&tp.c_prime).as_slice()),
        ("c_dprime", p.c_dprime.coeffs() == scale(&tp.c_dprime).as_slice()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn w(re: (i64, i64), im: (i64, i64)) -> ComplexRational {
        Complex::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub(crate) fn real(p: i64, q: i64) -> ComplexRational {
        w((p, q), (0, 1))
    }

    #[test]
    fn construction_errors_and_component() {
        assert!(WeightedGraph::new(2, &[(1, 2, real(1, 2)), (2, 1, real(1, 1))]).is_err());
        assert!(WeightedGraph::new(2, &[(1, 1, real(1, 2))]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, real(1, 2))]).is_err());
        let g = WeightedGraph::new(2, &[(1, 2, w((0, 1), (1, 2)))]).unwrap();
        assert_eq!(g.component().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
        let g = WeightedGraph::new(4, &[(1, 2, real(1, 2)), (3, 4, real(1, 2))]).unwrap();
        assert_eq!(g.component().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn convexity() {
        assert!(check_convex(&WeightedGraph::new(2, &[(1, 2, real(1, 1))]).unwrap()).convex);
        assert!(!check_convex(&WeightedGraph::new(2, &[(1, 2, real(1, 2))]).unwrap()).convex);
        let tri = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (1, 3, real(1, 2)), (2, 3, real(1, 2))]).unwrap();
        assert!(check_convex(&tri).convex);
        let s = check_superconvex(&WeightedGraph::new(2, &[(1, 2, real(3, 2))]).unwrap()).unwrap();
        assert!(s.superconvex);
        assert!(!check_superconvex(&WeightedGraph::new(2, &[(1, 2, real(1, 2))]).unwrap()).unwrap().superconvex);
        assert!(check_superconvex(&WeightedGraph::new(2, &[(1, 2, w((0, 1), (1, 2)))]).unwrap()).is_err());
    }

    #[test]
    fn transitivity() {
        let e = WeightedGraph::new(2, &[(1, 2, w((1, 3), (1, 5)))]).unwrap();
        assert!(check_v_transitive(&e, 2, &[2, 1]).unwrap());
        assert!(check_v_transitive(&e, 2, &[1, 2]).is_err());
        assert!(check_v_transitive(&e, 2, &[2, 2]).is_err());
        let p = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (2, 3, real(1, 2))]).unwrap();
        assert!(check_v_transitive(&p, 3, &[3, 2, 1]).unwrap());
        let q = WeightedGraph::new(3, &[(1, 2, real(1, 2)), (2, 3, real(1, 3))]).unwrap();
        assert_eq!(find_v_transitive_perm(&q, 2).unwrap(), None);
        assert!(!check_v_transitive(&q, 2, &[2, 1, 3]).unwrap());
        assert!(find_v_transitive_perm(&p, 3).unwrap().is_some());
    }

    #[test]
    fn json_weights() {
        let g = WeightedGraph::from_json(&json!({"vertices": 2, "edges": [[1, 2, ["0", "1/2"]], [2, 3, 0.25]]})).unwrap();
        assert_eq!(g.weight(1, 2), w((0, 1), (1, 2)));
        assert_eq!(g.weight(3, 2), real(1, 4));
        assert_eq!(parse_rational_str("1.5e-1").unwrap(), BigRational::new(3.into(), 20.into()));
        let back = WeightedGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.weight(2, 3), real(1, 4));
    }

    #[test]
    fn battery_matches_oracle() {
        for case in battery() {
            let s = weighted_walk_series(&case.graph, case.target, 8).unwrap();
            for n in 0..=8 {
                let r = brute_force_weighted(&case.graph, case.target, n).unwrap();
                assert_eq!(s.d.coeff(n), &r.d, "{} d_{n}", case.name);
                assert_eq!(s.a.coeff(n), &r.a, "{} a_{n}", case.name);
                assert_eq!(s.c.coeff(n), &r.c, "{} c_{n}", case.name);
                let p = s.primed.as_ref().unwrap();
                assert_eq!(p.a_prime.coeff(n), &r.a_prime, "{} a'_{n}", case.name);
                assert_eq!(p.c_dprime.coeff(n), &r.c_dprime, "{} c''_{n}", case.name);
            }
            if let Some(perm) = &case.perm {
                assert!(check_v_transitive(&case.graph, case.target.unwrap(), perm).unwrap(), "{}", case.name);
            }
            let ids = check_identities(&case.graph, &s, case.perm.is_some());
            assert!(ids.iter().all(|x| x.1), "{}: {ids:?}", case.name);
        }
    }

    #[test]
    fn window_bridge() {
        let v = LatticePoint::new(vec![1, 1]).unwrap();
        assert!(lattice_bridge(2, &v, 6).unwrap().iter().all(|x| x.1));
    }

    #[test]
    fn window_shape() {
        let (g, pts) = lattice_window(2, 2).unwrap();
        assert_eq!(g.vertices(), 13);
        assert!(pts[0].is_origin());
        assert_eq!(g.adjacency()[1].len(), 4);
    }
}
