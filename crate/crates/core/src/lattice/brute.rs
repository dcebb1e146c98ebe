//! Exhaustive enumeration of all `(2d)^n` walks; the small-n oracle.

use std::sync::Arc;

use rayon::prelude::*;

use super::point::{check_dim, LatticePoint};
use crate::error::{invalid, resource, Result};

pub const ENUMERATION_BUDGET: u128 = 100_000_000;

type Custom = Arc<dyn Fn(&[Vec<i64>]) -> bool + Send + Sync>;

/// Predicate on a full walk `p_0 = 0, p_1, ..., p_n`.
#[derive(Clone)]
pub enum WalkPredicate {
    All,
    /// Revisits the origin at some step `>= 1`.
    Recurrent,
    EndsAtOrigin,
    /// Ends at the origin and does not visit it in between.
    FirstReturn,
    /// Visits `v` at some step `>= 1`.
    Visits(LatticePoint),
    EndsAt(LatticePoint),
    /// Ends at the origin and never stands on `v`.
    ReturnsAvoiding(LatticePoint),
    /// Ends at `v` with the inner part avoiding `v`.
    FirstPassage(LatticePoint),
    /// Ends at `v` with the inner part avoiding both `v` and the origin.
    FirstPassageAvoidingOrigin(LatticePoint),
    Custom(Custom),
}

impl std::fmt::Debug for WalkPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WalkPredicate::Custom(_) => write!(f, "Custom"),
            WalkPredicate::All => write!(f, "All"),
            WalkPredicate::Recurrent => write!(f, "Recurrent"),
            WalkPredicate::EndsAtOrigin => write!(f, "EndsAtOrigin"),
            WalkPredicate::FirstReturn => write!(f, "FirstReturn"),
            WalkPredicate::Visits(v) => write!(f, "Visits({v})"),
            WalkPredicate::EndsAt(v) => write!(f, "EndsAt({v})"),
            WalkPredicate::ReturnsAvoiding(v) => write!(f, "ReturnsAvoiding({v})"),
            WalkPredicate::FirstPassage(v) => write!(f, "FirstPassage({v})"),
            WalkPredicate::FirstPassageAvoidingOrigin(v) => {
                write!(f, "FirstPassageAvoidingOrigin({v})")
            }
        }
    }
}

impl WalkPredicate {
    fn target(&self) -> Option<&LatticePoint> {
        match self {
            WalkPredicate::Visits(v)
            | WalkPredicate::EndsAt(v)
            | WalkPredicate::ReturnsAvoiding(v)
            | WalkPredicate::FirstPassage(v)
            | WalkPredicate::FirstPassageAvoidingOrigin(v) => Some(v),
            _ => None,
        }
    }

    pub fn holds(&self, path: &[Vec<i64>]) -> bool {
        let n = path.len() - 1;
        let is0 = |p: &Vec<i64>| p.iter().all(|&x| x == 0);
        let end = &path[n];
        match self {
            WalkPredicate::All => true,
            WalkPredicate::Recurrent => path[1..].iter().any(is0),
            WalkPredicate::EndsAtOrigin => is0(end),
            WalkPredicate::FirstReturn => n >= 1 && is0(end) && !path[1..n].iter().any(is0),
            WalkPredicate::Visits(v) => path[1..].iter().any(|p| p == v.coords()),
            WalkPredicate::EndsAt(v) => end == v.coords(),
            WalkPredicate::ReturnsAvoiding(v) => {
                is0(end) && !path.iter().any(|p| p == v.coords())
            }
            WalkPredicate::FirstPassage(v) => {
                n >= 1 && end == v.coords() && !path[1..n].iter().any(|p| p == v.coords())
            }
            WalkPredicate::FirstPassageAvoidingOrigin(v) => {
                n >= 1
                    && end == v.coords()
                    && !path[1..n].iter().any(|p| p == v.coords() || is0(p))
            }
            WalkPredicate::Custom(f) => f(path),
        }
    }
}

fn check_budget(d: usize, n: usize) -> Result<()> {
    let total = (2 * d as u128).checked_pow(n as u32);
    match total {
        Some(t) if t <= ENUMERATION_BUDGET => Ok(()),
        _ => resource(format!(
            "enumerating (2*{d})^{n} walks exceeds the budget of {ENUMERATION_BUDGET}"
        )),
    }
}

fn step(p: &mut [i64], dir: usize, sign: i64) {
    p[dir / 2] += if dir % 2 == 0 { sign } else { -sign };
}

fn enumerate(path: &mut Vec<Vec<i64>>, d: usize, n: usize, visit: &mut impl FnMut(&[Vec<i64>])) {
    if path.len() == n + 1 {
        visit(path);
        return;
    }
    for dir in 0..2 * d {
        let mut p = path.last().unwrap().clone();
        step(&mut p, dir, 1);
        path.push(p);
        enumerate(path, d, n, visit);
        path.pop();
    }
}

/// Calls `visit` on every walk of length `n`, split across first steps in parallel.
fn for_all_walks<R: Send>(
    d: usize,
    n: usize,
    init: impl Fn() -> R + Sync,
    visit: impl Fn(&mut R, &[Vec<i64>]) + Sync,
    merge: impl Fn(R, R) -> R + Sync + Send,
) -> R {
    let origin = vec![0i64; d];
    if n == 0 {
        let mut r = init();
        visit(&mut r, &[origin]);
        return r;
    }
    (0..2 * d)
        .into_par_iter()
        .map(|dir| {
            let mut r = init();
            let mut first = origin.clone();
            step(&mut first, dir, 1);
            let mut path = vec![origin.clone(), first];
            enumerate(&mut path, d, n, &mut |p| visit(&mut r, p));
            r
        })
        .reduce(&init, &merge)
}

/// Number of walks of length `n` satisfying `predicate`.
pub fn brute_force_count(d: usize, n: usize, predicate: &WalkPredicate) -> Result<u64> {
    check_dim(d)?;
    if let Some(v) = predicate.target() {
        if v.dim() != d {
            return invalid(format!("target {v} does not have dimension {d}"));
        }
    }
    check_budget(d, n)?;
    Ok(for_all_walks(
        d,
        n,
        || 0u64,
        |acc, p| {
            if predicate.holds(p) {
                *acc += 1
            }
        },
        |a, b| a + b,
    ))
}

/// All eight counts for one length, from a single enumeration pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BruteRow {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub a_prime: u64,
    pub b_prime: u64,
    pub c_prime: u64,
    pub c_dprime: u64,
}

impl std::ops::Add for BruteRow {
    type Output = BruteRow;
    fn add(self, o: BruteRow) -> BruteRow {
        BruteRow {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
            d: self.d + o.d,
            a_prime: self.a_prime + o.a_prime,
            b_prime: self.b_prime + o.b_prime,
            c_prime: self.c_prime + o.c_prime,
            c_dprime: self.c_dprime + o.c_dprime,
        }
    }
}

/// Brute-force row for length `n` and target `v`; primed counts are zero when `v = 0`.
pub fn brute_force_row(v: &LatticePoint, n: usize) -> Result<BruteRow> {
    let d = v.dim();
    check_dim(d)?;
    check_budget(d, n)?;
    let primed = !v.is_origin();
    let preds = [
        WalkPredicate::Recurrent,
        WalkPredicate::EndsAtOrigin,
        WalkPredicate::FirstReturn,
        WalkPredicate::Visits(v.clone()),
        WalkPredicate::ReturnsAvoiding(v.clone()),
        WalkPredicate::FirstPassage(v.clone()),
        WalkPredicate::FirstPassageAvoidingOrigin(v.clone()),
    ];
    Ok(for_all_walks(
        d,
        n,
        BruteRow::default,
        |r, p| {
            let h = |i: usize| preds[i].holds(p) as u64;
            r.d += 1;
            r.a += h(0);
            r.b += h(1);
            r.c += h(2);
            if primed {
                r.a_prime += h(3);
                r.b_prime += h(4);
                r.c_prime += h(5);
                r.c_dprime += h(6);
            }
        },
        |a, b| a + b,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(brute_force_count(2, 3, &WalkPredicate::All).unwrap(), 64);
        assert_eq!(brute_force_count(1, 4, &WalkPredicate::Recurrent).unwrap(), 10);
        assert_eq!(brute_force_count(3, 2, &WalkPredicate::EndsAtOrigin).unwrap(), 6);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(brute_force_count(4, 20, &WalkPredicate::All).is_err());
    }

    #[test]
    fn one_dimensional_visits() {
        let v = LatticePoint::new(vec![1]).unwrap();
        let r = brute_force_row(&v, 3).unwrap();
        assert_eq!((r.a_prime, r.c_prime), (5, 1));
    }
}
