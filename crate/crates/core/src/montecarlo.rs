//! Simulation of the uniform nearest-neighbour walker, checked against exact counts.
//!
//! Trial `t` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `t`, so the
//! aggregate does not depend on how trials are scheduled across threads. A step
//! picks direction `x mod 2d` from one 64-bit draw `x`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, resource, Result};
use crate::lattice::{check_dim, endpoint_counts, reachable, walk_table, LatticePoint};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000_000;
pub const Z_SOFT: f64 = 3.5;
pub const Z_HARD: f64 = 5.0;
pub const CALIBRATION_TRIALS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationSpec {
    pub d: usize,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub target: LatticePoint,
}

impl SimulationSpec {
    fn validate(&self, step_budget: u64) -> Result<()> {
        check_dim(self.d)?;
        if self.target.dim() != self.d {
            return invalid(format!("target {} does not have dimension {}", self.target, self.d));
        }
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        let steps = self.trials.saturating_mul(self.n as u64);
        if steps > step_budget {
            return resource(format!("{steps} steps exceed the simulation budget {step_budget}"));
        }
        Ok(())
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs one walk, calling `visit(step, position)` after every step.
fn walk(d: usize, n: usize, rng: &mut ChaCha8Rng, mut visit: impl FnMut(usize, &[i64])) {
    let mut pos = vec![0i64; d];
    let dirs = (2 * d) as u64;
    for step in 1..=n {
        let k = (rng.next_u64() % dirs) as usize;
        pos[k / 2] += if k % 2 == 0 { 1 } else { -1 };
        visit(step, &pos);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl Estimate {
    fn new(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Estimate { hits, trials, estimate: p, stderr: (p * (1.0 - p) / trials as f64).sqrt() }
    }

    /// `|p_hat - p| / stderr`, taken as 0 when both the deviation and the error vanish.
    pub fn z_score(&self, exact: f64) -> f64 {
        let dev = (self.estimate - exact).abs();
        if dev == 0.0 {
            0.0
        } else {
            dev / self.stderr
        }
    }
}

pub fn simulate_visit_frequency(spec: &SimulationSpec) -> Result<Estimate> {
    simulate_visit_frequency_with(spec, DEFAULT_STEP_BUDGET)
}

/// Fraction of walks of length `n` standing on the target at some step `1..=n`.
pub fn simulate_visit_frequency_with(spec: &SimulationSpec, step_budget: u64) -> Result<Estimate> {
    spec.validate(step_budget)?;
    let target = spec.target.coords();
    let hits: u64 = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(spec.seed, t);
            let mut hit = false;
            walk(spec.d, spec.n, &mut rng, |_, p| hit |= p == target);
            hit as u64
        })
        .sum();
    Ok(Estimate::new(hits, spec.trials))
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointRow {
    pub point: LatticePoint,
    pub hits: u64,
    pub estimate: f64,
    pub exact: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointReport {
    pub rows: Vec<EndpointRow>,
    pub max_z: f64,
    /// Simulated hits on points of the wrong parity.
    pub wrong_parity_hits: u64,
    /// Exact mass on points of the wrong parity.
    pub wrong_parity_exact: f64,
}

/// Empirical law of the position after `n` steps, compared with exact endpoint counts.
pub fn simulate_endpoint_frequency(spec: &SimulationSpec) -> Result<EndpointReport> {
    spec.validate(DEFAULT_STEP_BUDGET)?;
    let tallies = (0..spec.trials)
        .into_par_iter()
        .fold(BTreeMap::<Vec<i64>, u64>::new, |mut acc, t| {
            let mut rng = trial_rng(spec.seed, t);
            let mut end = Vec::new();
            walk(spec.d, spec.n, &mut rng, |s, p| {
                if s == spec.n {
                    end = p.to_vec();
                }
            });
            if spec.n == 0 {
                end = vec![0; spec.d];
            }
            *acc.entry(end).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let exact = endpoint_counts(spec.d, spec.n)?;
    let denom = BigInt::from(2 * spec.d).pow(spec.n as u32);
    let mut rows = Vec::new();
    let (mut wrong_parity_hits, mut wrong_parity_exact) = (0u64, 0.0f64);
    for (p, counts) in exact.iter() {
        let c = &counts[spec.n];
        let pr = BigRational::new(BigInt::from(c.clone()), denom.clone()).to_f64().unwrap_or(0.0);
        let hits = tallies.get(p.coords()).copied().unwrap_or(0);
        if !reachable(p, spec.n) {
            wrong_parity_hits += hits;
            wrong_parity_exact += pr;
            continue;
        }
        let e = Estimate::new(hits, spec.trials);
        rows.push(EndpointRow { point: p.clone(), hits, estimate: e.estimate, exact: pr, z: e.z_score(pr) });
    }
    let max_z = rows.iter().map(|r| r.z).fold(0.0, f64::max);
    Ok(EndpointReport { rows, max_z, wrong_parity_hits, wrong_parity_exact })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReachabilityReport {
    pub target: LatticePoint,
    pub m: usize,
    /// Steps at which a simulated walk stood farther than the step count from the origin.
    pub too_far_events: u64,
    pub hits_at_m: u64,
    pub exact_count: String,
    pub predicate: bool,
    /// The parity predicate agrees with positivity of every exact count in the ball of radius `m + 2`.
    pub predicate_matches_counts: bool,
}

pub fn reachability_zero_check(spec: &SimulationSpec) -> Result<ReachabilityReport> {
    spec.validate(DEFAULT_STEP_BUDGET)?;
    let m = spec.n;
    let target = spec.target.coords();
    let (too_far, hits) = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(spec.seed, t);
            let (mut far, mut hit) = (0u64, 0u64);
            walk(spec.d, m, &mut rng, |s, p| {
                let l1: i64 = p.iter().map(|x| x.abs()).sum();
                if l1 as usize > s {
                    far += 1;
                }
                if s == m && p == target {
                    hit += 1;
                }
            });
            (far, hit)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let counts = endpoint_counts(spec.d, m + 2)?;
    let predicate_matches_counts = counts
        .iter()
        .all(|(p, c)| (0..=m + 2).all(|k| reachable(p, k) == (c[k] != 0u32.into())));
    Ok(ReachabilityReport {
        target: spec.target.clone(),
        m,
        too_far_events: too_far,
        hits_at_m: hits,
        exact_count: counts.at(&spec.target, m).to_string(),
        predicate: reachable(&spec.target, m),
        predicate_matches_counts,
    })
}

/// `(2d)^{-n}` times the number of length-`n` walks visiting `v` at a positive step.
pub fn exact_visit_probability(d: usize, v: &LatticePoint, n: usize) -> Result<f64> {
    let t = walk_table(d, v, n)?;
    let seq = if v.is_origin() { &t.a } else { &t.primed.as_ref().expect("target set").a_prime };
    let denom = BigInt::from(2 * d).pow(n as u32);
    Ok(BigRational::new(BigInt::from(seq[n].clone()), denom).to_f64().unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationCell {
    pub d: usize,
    pub n: usize,
    pub target: LatticePoint,
    pub seed: u64,
    pub exact: f64,
    pub estimate: Estimate,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub cells: Vec<CalibrationCell>,
    pub max_abs_z: f64,
    pub soft_exceedances: usize,
    pub passed: bool,
}

/// The fixed `(d, n, target)` cells of the calibration battery.
pub fn calibration_cells() -> Vec<(usize, usize, Vec<i64>)> {
    vec![
        (1, 1, vec![1]),
        (1, 4, vec![0]),
        (1, 10, vec![0]),
        (1, 7, vec![3]),
        (1, 12, vec![-2]),
        (2, 2, vec![0, 0]),
        (2, 10, vec![0, 0]),
        (2, 6, vec![1, 0]),
        (2, 9, vec![1, 1]),
        (2, 12, vec![2, -1]),
        (2, 16, vec![0, 0]),
        (3, 2, vec![0, 0, 0]),
        (3, 8, vec![0, 0, 0]),
        (3, 10, vec![1, 0, 0]),
        (3, 12, vec![1, 1, 0]),
        (3, 14, vec![0, 0, -2]),
        (4, 4, vec![0, 0, 0, 0]),
        (4, 8, vec![1, 0, 0, 0]),
        (4, 10, vec![0, 0, 0, 0]),
        (4, 12, vec![1, 1, 0, 0]),
    ]
}

/// Visit-frequency battery; passes when no `|z|` exceeds 5 and at most one exceeds 3.5.
pub fn calibration_battery(trials: u64, base_seed: u64) -> Result<CalibrationReport> {
    let mut cells = Vec::new();
    for (i, (d, n, t)) in calibration_cells().into_iter().enumerate() {
        let target = LatticePoint::new(t)?;
        let seed = base_seed.wrapping_add(i as u64);
        let spec = SimulationSpec { d, n, trials, seed, target: target.clone() };
        let exact = exact_visit_probability(d, &target, n)?;
        let estimate = simulate_visit_frequency(&spec)?;
        let z = estimate.z_score(exact);
        cells.push(CalibrationCell { d, n, target, seed, exact, estimate, z });
    }
    let max_abs_z = cells.iter().map(|c| c.z).fold(0.0, f64::max);
    let soft_exceedances = cells.iter().filter(|c| c.z > Z_SOFT).count();
    Ok(CalibrationReport { passed: max_abs_z <= Z_HARD && soft_exceedances <= 1, cells, max_abs_z, soft_exceedances })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: usize, n: usize, t: Vec<i64>, trials: u64) -> SimulationSpec {
        SimulationSpec { d, n, trials, seed: 7, target: LatticePoint::new(t).unwrap() }
    }

    #[test]
    fn single_step_and_short_return() {
        let e = simulate_visit_frequency(&spec(1, 1, vec![1], 20_000)).unwrap();
        assert!(e.z_score(0.5) <= Z_HARD);
        let e = simulate_visit_frequency(&spec(2, 2, vec![0, 0], 20_000)).unwrap();
        assert!(e.z_score(0.25) <= Z_HARD);
        let exact = exact_visit_probability(2, &LatticePoint::new(vec![0, 0]).unwrap(), 10).unwrap();
        let e = simulate_visit_frequency(&spec(2, 10, vec![0, 0], 20_000)).unwrap();
        assert!(e.z_score(exact) <= Z_HARD);
    }

    #[test]
    fn deterministic_given_spec() {
        let s = spec(3, 12, vec![1, 0, 0], 5_000);
        let a = simulate_visit_frequency(&s).unwrap();
        let b = simulate_visit_frequency(&s).unwrap();
        assert_eq!(a.hits, b.hits);
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    }

    #[test]
    fn endpoint_law() {
        let r = simulate_endpoint_frequency(&spec(1, 2, vec![0], 40_000)).unwrap();
        let exact: Vec<(i64, f64)> = r.rows.iter().map(|x| (x.point.coords()[0], x.exact)).collect();
        assert_eq!(exact, vec![(-2, 0.25), (0, 0.5), (2, 0.25)]);
        assert!(r.max_z <= Z_HARD);
        assert_eq!(r.wrong_parity_hits, 0);
        assert_eq!(r.wrong_parity_exact, 0.0);
        let r = simulate_endpoint_frequency(&spec(3, 1, vec![0, 0, 0], 60_000)).unwrap();
        let nonzero: Vec<f64> = r.rows.iter().filter(|x| x.exact > 0.0).map(|x| x.exact).collect();
        assert_eq!(nonzero, vec![1.0 / 6.0; 6]);
    }

    #[test]
    fn reachability() {
        let far = reachability_zero_check(&spec(2, 2, vec![3, 0], 2_000)).unwrap();
        assert_eq!((far.hits_at_m, far.exact_count.as_str(), far.predicate), (0, "0", false));
        assert_eq!(far.too_far_events, 0);
        assert!(far.predicate_matches_counts);
        let near = reachability_zero_check(&spec(2, 3, vec![1, 0], 2_000)).unwrap();
        assert!(near.predicate && near.exact_count != "0" && near.hits_at_m > 0);
        let odd = reachability_zero_check(&spec(2, 3, vec![1, 1], 2_000)).unwrap();
        assert_eq!((odd.hits_at_m, odd.exact_count.as_str(), odd.predicate), (0, "0", false));
    }

    #[test]
    fn budget_and_input_errors() {
        assert!(simulate_visit_frequency(&spec(2, 1000, vec![0, 0], 2_000_000)).is_err());
        assert!(simulate_visit_frequency(&spec(2, 10, vec![0, 0], 0)).is_err());
        let bad = SimulationSpec { d: 2, n: 3, trials: 10, seed: 1, target: LatticePoint::new(vec![0]).unwrap() };
        assert!(simulate_visit_frequency(&bad).is_err());
    }
}
