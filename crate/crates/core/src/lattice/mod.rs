//! Exact walk counts on `Z^d` by dynamic programming over the L1 ball.

mod ball;
pub mod brute;
pub mod closed_form;
mod count;
mod dp;
mod point;
mod table;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

pub use brute::{brute_force_count, brute_force_row, BruteRow, WalkPredicate};
pub use point::{check_dim, LatticePoint, MAX_DIM};
pub use table::{walk_table, walk_table_with, PrimedCounts, WalkCountTable};

use crate::error::{invalid, Result};
use ball::Ball;
use dp::DpPlan;

pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Resource caps for the DP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub memory_bytes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { memory_bytes: DEFAULT_MEMORY_BUDGET }
    }
}

/// Counts of length-`n` walks from the origin ending at each point of the ball of radius `N`.
#[derive(Debug, Clone)]
pub struct EndpointCounts {
    pub d: usize,
    pub max_len: usize,
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
    counts: Vec<Vec<BigUint>>,
}

impl EndpointCounts {
    pub fn get(&self, p: &LatticePoint) -> Option<&[BigUint]> {
        self.index.get(p).map(|&i| self.counts[i].as_slice())
    }

    /// Count at `p` after `n` steps; zero outside the ball.
    pub fn at(&self, p: &LatticePoint, n: usize) -> BigUint {
        self.get(p).map_or_else(BigUint::zero, |s| s[n].clone())
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &[BigUint])> {
        self.points.iter().zip(self.counts.iter().map(Vec::as_slice))
    }
}

/// Positive probability of standing on `u` after `m` steps: `m >= |u|_1` with equal parity.
pub fn reachable(u: &LatticePoint, m: usize) -> bool {
    let n = u.l1() as usize;
    m >= n && (m - n) % 2 == 0
}

/// Points of the L1 ball of the given radius in lexicographic order.
pub fn ball_points(d: usize, radius: usize) -> Result<Vec<LatticePoint>> {
    check_dim(d)?;
    let ball = Ball::new(d, radius)?;
    let mut points = Vec::with_capacity(ball.len);
    ball.for_each_point(|_, p| points.push(LatticePoint::new(p.to_vec()).expect("valid dimension")));
    Ok(points)
}

fn full_table(d: usize, forbidden: &[LatticePoint], n: usize, limits: &Limits) -> Result<EndpointCounts> {
    check_dim(d)?;
    for f in forbidden {
        if f.dim() != d {
            return invalid(format!("forbidden point {f} does not have dimension {d}"));
        }
    }
    dp::check_budget(d, n, n, true, limits)?;
    let ball = Ball::new(d, n)?;
    let forbidden = forbidden
        .iter()
        .filter_map(|p| ball.index(p.coords()))
        .collect();
    let out = dp::run(&DpPlan {
        ball: &ball,
        forbidden,
        steps: n,
        track: vec![],
        entry: vec![],
        total: false,
        keep_layers: true,
    });
    let mut points = vec![LatticePoint::origin(d)?; ball.len];
    ball.for_each_point(|i, p| points[i] = LatticePoint::new(p.to_vec()).expect("valid dimension"));
    let counts: Vec<Vec<BigUint>> = (0..ball.len)
        .map(|i| out.layers.iter().map(|layer| layer[i].clone()).collect())
        .collect();
    let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(EndpointCounts { d, max_len: n, points, index, counts })
}

pub fn endpoint_counts(d: usize, n: usize) -> Result<EndpointCounts> {
    endpoint_counts_with(d, n, &Limits::default())
}

pub fn endpoint_counts_with(d: usize, n: usize, limits: &Limits) -> Result<EndpointCounts> {
    full_table(d, &[], n, limits)
}

/// Like [`endpoint_counts`] but walks never stand on a forbidden point at steps `>= 1`.
pub fn avoid_counts(d: usize, forbidden: &[LatticePoint], n: usize) -> Result<EndpointCounts> {
    full_table(d, forbidden, n, &Limits::default())
}

pub fn avoid_counts_with(
    d: usize,
    forbidden: &[LatticePoint],
    n: usize,
    limits: &Limits,
) -> Result<EndpointCounts> {
    full_table(d, forbidden, n, limits)
}

/// Which per-step quantities a targeted DP run should record.
pub(crate) struct TargetedRun {
    pub values: Vec<Vec<BigUint>>,
    pub entries: Vec<Vec<BigUint>>,
    pub totals: Vec<BigUint>,
}

/// Runs the DP on a ball of the given radius, recording values and entry counts at a few points.
pub(crate) fn targeted(
    d: usize,
    radius: usize,
    steps: usize,
    forbidden: &[&LatticePoint],
    track: &[&LatticePoint],
    entry: &[&LatticePoint],
    total: bool,
    limits: &Limits,
) -> Result<TargetedRun> {
    dp::check_budget(d, radius, steps, false, limits)?;
    let ball = Ball::new(d, radius)?;
    let idx = |p: &&LatticePoint| ball.index(p.coords());
    let tracked: Vec<Option<usize>> = track.iter().map(idx).collect();
    let entered: Vec<Option<usize>> = entry.iter().map(idx).collect();
    let out = dp::run(&DpPlan {
        ball: &ball,
        forbidden: forbidden.iter().filter_map(idx).collect(),
        steps,
        track: tracked.iter().flatten().copied().collect(),
        entry: entered.iter().flatten().copied().collect(),
        total,
        keep_layers: false,
    });
    // Points outside the ball are unreachable within the run; report zeros.
    let expand = |slots: &[Option<usize>], data: Vec<Vec<BigUint>>| {
        let mut data = data.into_iter();
        slots
            .iter()
            .map(|s| match s {
                Some(_) => data.next().expect("one series per tracked point"),
                None => vec![BigUint::zero(); steps + 1],
            })
            .collect::<Vec<_>>()
    };
    Ok(TargetedRun {
        values: expand(&tracked, out.values),
        entries: expand(&entered, out.entries),
        totals: out.totals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec()).unwrap()
    }

    fn u(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn origin_sequences() {
        assert_eq!(endpoint_counts(1, 4).unwrap().get(&p(&[0])).unwrap(), u(&[1, 0, 2, 0, 6]).as_slice());
        assert_eq!(endpoint_counts(2, 4).unwrap().get(&p(&[0, 0])).unwrap(), u(&[1, 0, 4, 0, 36]).as_slice());
        assert_eq!(endpoint_counts(3, 2).unwrap().get(&p(&[0, 0, 0])).unwrap(), u(&[1, 0, 6]).as_slice());
    }

    #[test]
    fn avoid_examples() {
        let t = avoid_counts(1, &[p(&[1])], 2).unwrap();
        assert_eq!(t.get(&p(&[0])).unwrap(), u(&[1, 0, 1]).as_slice());
        let a = avoid_counts(2, &[], 2).unwrap();
        let e = endpoint_counts(2, 2).unwrap();
        for (pt, s) in e.iter() {
            assert_eq!(a.get(pt).unwrap(), s);
        }
        let iso = avoid_counts(1, &[p(&[1]), p(&[-1])], 1).unwrap();
        for (_, s) in iso.iter() {
            assert!(s[1..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn parity_predicate_matches_positivity() {
        for d in 1..=3 {
            let t = endpoint_counts(d, 7).unwrap();
            for (pt, s) in t.iter() {
                for (m, c) in s.iter().enumerate() {
                    assert_eq!(!c.is_zero(), reachable(pt, m), "{pt} m={m}");
                }
            }
        }
    }

    #[test]
    fn budget_refuses_before_allocating() {
        let tiny = Limits { memory_bytes: 1 << 10 };
        assert!(matches!(
            endpoint_counts_with(3, 50, &tiny),
            Err(crate::Error::Resource(_))
        ));
    }
}
