//! The invariant battery behind `polya verify`.
//!
//! Every check is deterministic: no timestamps, fixed seeds, exact or
//! order-independent arithmetic. Two runs give byte-identical JSON.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::effective2d::{
    corollary_onset_scan, robbins_factorial_bounds, u2n_bounds_check, verify_gap, GapMode, GapPolicy,
    LOWER_BOUND_THRESHOLD,
};
use crate::error::Result;
use crate::lattice::{
    brute_force_row, closed_form, endpoint_counts, reachable, walk_table, BruteRow, LatticePoint,
};
use crate::montecarlo::{
    calibration_battery, reachability_zero_check, simulate_endpoint_frequency, SimulationSpec, Z_HARD,
};
use crate::recurrence::{
    origin_formula_comparison, polya_enclosure, v_recurrence_report, zero_recurrence_profile, Limit,
};
use crate::series::TruncatedSeries;
use crate::weighted::{
    battery, brute_force_weighted, check_convex, check_identities, check_v_transitive, convex_recurrence_limit,
    general_recurrence_value, lattice_bridge, superconvex_monotone, v_recurrence_value, weighted_walk_series,
    ExistenceStatus, VMode, WeightedGraph, WeightedLimit, DEFAULT_MEMBERSHIP_TOL,
};

pub const CALIBRATION_SEED: u64 = 20240;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

/// Sizes used by one level of the battery.
#[derive(Debug, Clone, Serialize)]
pub struct Scale {
    pub oracle_n: usize,
    pub oracle_n_d3: usize,
    pub identity_n: usize,
    pub closed_form_m: usize,
    pub u2n_max: usize,
    pub gap_exact_max: usize,
    pub gap_float: Option<usize>,
    pub polya_n: usize,
    pub visit_n: usize,
    pub weighted_n: usize,
    pub bridge_n: usize,
    pub trials: u64,
}

impl Scale {
    pub fn of(level: Level) -> Scale {
        match level {
            Level::Quick => Scale {
                oracle_n: 8,
                oracle_n_d3: 8,
                identity_n: 20,
                closed_form_m: 50,
                u2n_max: 1000,
                gap_exact_max: 200,
                gap_float: None,
                polya_n: 400,
                visit_n: 120,
                weighted_n: 8,
                bridge_n: 4,
                trials: 20_000,
            },
            Level::Full => Scale {
                oracle_n: 10,
                oracle_n_d3: 8,
                identity_n: 60,
                closed_form_m: 500,
                u2n_max: 100_000,
                gap_exact_max: 2000,
                gap_float: Some(LOWER_BOUND_THRESHOLD),
                polya_n: 2000,
                visit_n: 1000,
                weighted_n: 10,
                bridge_n: 6,
                trials: 100_000,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub scale: Scale,
    pub passed: bool,
    pub failures: Vec<&'static str>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

type CheckFn = fn(&Scale) -> Result<(bool, Value)>;

pub fn run_verify(level: Level) -> VerifyReport {
    let scale = Scale::of(level);
    let table: [(&'static str, CheckFn); 16] = [
        ("lattice.oracle", lattice_oracle),
        ("lattice.identities", lattice_identities),
        ("lattice.closed_forms", lattice_closed_forms),
        ("lattice.parity", lattice_parity),
        ("recurrence.profile", recurrence_profile),
        ("recurrence.polya_enclosure", recurrence_polya),
        ("recurrence.visit_limit", recurrence_visit),
        ("effective2d.robbins", effective_robbins),
        ("effective2d.u2n", effective_u2n),
        ("effective2d.gaps", effective_gaps),
        ("weighted.oracle", weighted_oracle),
        ("weighted.bridge", weighted_bridge),
        ("weighted.values", weighted_values),
        ("weighted.visits", weighted_visits),
        ("montecarlo.calibration", montecarlo_calibration),
        ("montecarlo.endpoints", montecarlo_endpoints),
    ];
    let checks: Vec<Check> = table
        .iter()
        .map(|&(name, f)| match f(&scale) {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(e) => Check { name, passed: false, detail: json!({ "error": e.to_string() }) },
        })
        .collect();
    let failures: Vec<&'static str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    VerifyReport { level, scale, passed: failures.is_empty(), failures, checks }
}

fn targets(d: usize) -> Result<Vec<LatticePoint>> {
    let mut out = vec![LatticePoint::origin(d)?, LatticePoint::unit(d, 0)?];
    if d >= 2 {
        let mut c = vec![0; d];
        c[0] = 1;
        c[1] = 1;
        out.push(LatticePoint::new(c)?);
    }
    Ok(out)
}

fn small(x: &BigUint) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

fn lattice_oracle(s: &Scale) -> Result<(bool, Value)> {
    let mut mismatches = Vec::new();
    let mut compared = 0usize;
    for d in 1..=3 {
        let n_max = if d == 3 { s.oracle_n_d3 } else { s.oracle_n };
        for v in targets(d)? {
            let t = walk_table(d, &v, n_max)?;
            for n in 0..=n_max {
                let brute = brute_force_row(&v, n)?;
                let mut dp = BruteRow {
                    a: small(&t.a[n]),
                    b: small(&t.b[n]),
                    c: small(&t.c[n]),
                    d: small(&t.d_seq[n]),
                    ..Default::default()
                };
                if let Some(p) = &t.primed {
                    dp.a_prime = small(&p.a_prime[n]);
                    dp.b_prime = small(&p.b_prime[n]);
                    dp.c_prime = small(&p.c_prime[n]);
                    dp.c_dprime = small(&p.c_dprime[n]);
                }
                compared += 1;
                if dp != brute {
                    mismatches.push(format!("d={d} v={v} n={n}"));
                }
            }
        }
    }
    Ok((mismatches.is_empty(), json!({ "rows_compared": compared, "mismatches": mismatches })))
}

/// The generating-function identities of one count table, as `(name, holds)` pairs.
pub fn table_identities(d: usize, v: &LatticePoint, n: usize) -> Result<Vec<(&'static str, bool)>> {
    let t = walk_table(d, v, n)?;
    let (a, b, c, dd) = (t.normalized(&t.a), t.normalized(&t.b), t.normalized(&t.c), t.normalized(&t.d_seq));
    let one = TruncatedSeries::<BigRational>::unit(n);
    let mut out = vec![
        ("A = C D", a == c.multiply(&dd)),
        ("B (1 - C) = 1", b.multiply(&one.sub(&c)) == one),
        ("A_n = sum_{j<=n} C_j", a == c.prefix_sums()),
        ("b and c vanish at odd n", (1..=n).step_by(2).all(|k| t.b[k] == 0u32.into() && t.c[k] == 0u32.into())),
    ];
    if let Some(p) = &t.primed {
        let (a0, b0, c0, c1) =
            (t.normalized(&p.a_prime), t.normalized(&p.b_prime), t.normalized(&p.c_prime), t.normalized(&p.c_dprime));
        out.push(("B = B_0 + C_0^2 B", b == b0.add(&c0.multiply(&c0).multiply(&b))));
        out.push(("C_0 = B_0 C_1", c0 == b0.multiply(&c1)));
        out.push(("A_0 = C_0 D", a0 == c0.multiply(&dd)));
        out.push(("b' vanishes at odd n", (1..=n).step_by(2).all(|k| p.b_prime[k] == 0u32.into())));
    }
    Ok(out)
}

fn lattice_identities(s: &Scale) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for d in 1..=3 {
        for v in targets(d)? {
            let ids = table_identities(d, &v, s.identity_n)?;
            let failed: Vec<&str> = ids.iter().filter(|x| !x.1).map(|x| x.0).collect();
            ok &= failed.is_empty();
            rows.push(json!({ "d": d, "v": v.coords(), "checked": ids.len(), "failed": failed }));
        }
    }
    Ok((ok, json!({ "n": s.identity_n, "cases": rows })))
}

/// Returns to the origin in one dimension by a direct position recursion.
fn returns_1d(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    let mut out = vec![BigUint::one()];
    for k in 1..=n {
        let mut next = vec![BigUint::from(0u32); 2 * k + 1];
        for (i, x) in row.iter().enumerate() {
            next[i] += x;
            next[i + 2] += x;
        }
        out.push(next[k].clone());
        row = next;
    }
    out
}

fn lattice_closed_forms(s: &Scale) -> Result<(bool, Value)> {
    let m = s.closed_form_m;
    let central = closed_form::central_binomials(m);
    let one = returns_1d(2 * m);
    let two = closed_form::endpoint_count_series(&LatticePoint::origin(2)?, 2 * m)?;
    let d1 = (0..=m).all(|k| one[2 * k] == central[k]);
    let d2 = (0..=m).all(|k| two[2 * k] == &central[k] * &central[k]);
    let via_formula = (1..=2).all(|d| {
        closed_form::return_counts(d, 2 * m)
            .map(|b| if d == 1 { b == one } else { b == two })
            .unwrap_or(false)
    });
    Ok((d1 && d2 && via_formula, json!({ "max_m": m, "d1": d1, "d2": d2, "formula_route": via_formula })))
}

fn lattice_parity(s: &Scale) -> Result<(bool, Value)> {
    let mut ok = true;
    for d in 1..=3 {
        let n = if d == 3 { s.oracle_n_d3 } else { s.oracle_n };
        let counts = endpoint_counts(d, n)?;
        ok &= counts.iter().all(|(p, c)| (0..=n).all(|k| reachable(p, k) == (c[k] != 0u32.into())));
    }
    Ok((ok, json!({ "predicate_matches_counts": ok })))
}

fn recurrence_profile(s: &Scale) -> Result<(bool, Value)> {
    let n = s.identity_n;
    let mut ok = true;
    let mut rows = Vec::new();
    for d in 1..=3 {
        let r = zero_recurrence_profile(d, n)?;
        let monotone = r.profile.windows(2).all(|w| w[0] <= w[1]);
        let below_one = r.profile.iter().all(|x| x <= &BigRational::one());
        let kind_ok = (d <= 2) == (r.limit == Limit::One);
        ok &= monotone && below_one && kind_ok;
        rows.push(json!({ "d": d, "monotone": monotone, "at_most_one": below_one, "limit": r.limit }));
    }
    let (formula, ret) = origin_formula_comparison(3, s.polya_n)?;
    let exceeds = formula.lo() > ret.hi();
    ok &= exceeds;
    rows.push(json!({ "origin_formula": formula, "return_probability": ret, "formula_exceeds": exceeds }));
    Ok((ok, json!(rows)))
}

fn recurrence_polya(s: &Scale) -> Result<(bool, Value)> {
    let ns = [s.polya_n / 4, s.polya_n / 2, s.polya_n];
    let encl: Vec<_> = ns.iter().map(|&n| polya_enclosure(3, n)).collect::<Result<_>>()?;
    let nested = encl.windows(2).all(|w| w[0].value.contains_interval(&w[1].value));
    let pointwise = encl.iter().all(|e| e.pointwise_checked_to > 0);
    let last = encl.last().expect("three sizes");
    let narrow = s.polya_n < 2000 || last.width < 1e-2;
    let widths: Vec<f64> = encl.iter().map(|e| e.width).collect();
    Ok((nested && pointwise && narrow, json!({ "n": ns, "widths": widths, "nested": nested, "value": last.value })))
}

fn recurrence_visit(s: &Scale) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    let origin = polya_enclosure(3, s.visit_n)?.value;
    let mut prev = origin;
    for c in [vec![1, 0, 0], vec![1, 1, 0], vec![2, 0, 0]] {
        let v = LatticePoint::new(c)?;
        let r = v_recurrence_report(3, &v, s.visit_n)?;
        let consistent = r.via_avoiding.intersect(&r.via_endpoint).is_some();
        let in_unit = r.value.lo() >= 0.0 && r.value.hi() <= 1.0;
        // Farther targets are visited less often.
        let decreasing = r.value.lo() <= prev.hi();
        ok &= consistent && in_unit && decreasing;
        prev = r.value;
        rows.push(json!({ "v": v.coords(), "value": r.value, "width": r.width, "routes_agree": consistent }));
    }
    Ok((ok, json!({ "n": s.visit_n, "rows": rows })))
}

fn effective_robbins(_: &Scale) -> Result<(bool, Value)> {
    let seven = robbins_factorial_bounds(7)?;
    let digits = (5039.33..5039.34).contains(&seven.lo()) && (5040.04..5040.05).contains(&seven.hi());
    let mut f = BigInt::one();
    let mut contained = true;
    for n in 1..=30u64 {
        f *= n;
        contained &= robbins_factorial_bounds(n)?.contains_ratio(&BigRational::from_integer(f.clone()));
    }
    Ok((digits && contained, json!({ "seven": seven, "printed_digits": digits, "contains_n_le_30": contained })))
}

fn effective_u2n(s: &Scale) -> Result<(bool, Value)> {
    let r = u2n_bounds_check(s.u2n_max)?;
    Ok((r.ok, serde_json::to_value(&r).expect("serializes")))
}

fn effective_gaps(s: &Scale) -> Result<(bool, Value)> {
    let ns: Vec<usize> = (3..=s.gap_exact_max).collect();
    let exact = verify_gap(&ns, &GapPolicy::new(GapMode::Exact))?;
    let bad: Vec<usize> = exact.records.iter().filter(|r| !r.all_ok).map(|r| r.n).collect();
    let onset = corollary_onset_scan(s.gap_exact_max)?;
    let mut ok = bad.is_empty() && exact.records.len() == ns.len();
    let mut detail = json!({ "exact_range": [3, s.gap_exact_max], "violations": bad, "corollary_onset": onset });
    if let Some(n) = s.gap_float {
        let fl = verify_gap(&[n], &GapPolicy::new(GapMode::Float))?;
        let r = &fl.records[0];
        ok &= r.all_ok && r.lower_ok == Some(true);
        detail["float"] = serde_json::to_value(r).expect("serializes");
    }
    Ok((ok, detail))
}

fn weighted_oracle(s: &Scale) -> Result<(bool, Value)> {
    let n = s.weighted_n;
    let mut ok = true;
    let mut rows = Vec::new();
    for case in battery() {
        let series = weighted_walk_series(&case.graph, case.target, n)?;
        let p = series.primed.as_ref();
        let mut mismatches = Vec::new();
        for k in 0..=n {
            let r = brute_force_weighted(&case.graph, case.target, k)?;
            let mut same = series.a.coeff(k) == &r.a
                && series.b.coeff(k) == &r.b
                && series.c.coeff(k) == &r.c
                && series.d.coeff(k) == &r.d;
            if let Some(p) = p {
                same &= p.a_prime.coeff(k) == &r.a_prime
                    && p.b_prime.coeff(k) == &r.b_prime
                    && p.c_prime.coeff(k) == &r.c_prime
                    && p.c_dprime.coeff(k) == &r.c_dprime;
            }
            if !same {
                mismatches.push(k);
            }
        }
        let transitive = match (&case.perm, case.target) {
            (Some(perm), Some(v)) => check_v_transitive(&case.graph, v, perm)?,
            _ => false,
        };
        let ids = check_identities(&case.graph, &series, transitive);
        let failed: Vec<&str> = ids.iter().filter(|x| !x.1).map(|x| x.0).collect();
        ok &= mismatches.is_empty() && failed.is_empty() && (transitive == case.perm.is_some());
        rows.push(json!({
            "case": case.name,
            "mismatched_n": mismatches,
            "v_transitive": transitive,
            "identities_failed": failed,
        }));
    }
    Ok((ok, json!({ "n": n, "cases": rows })))
}

fn weighted_bridge(s: &Scale) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for (d, c) in [(1, vec![1]), (2, vec![1, 1]), (2, vec![1, 0])] {
        let v = LatticePoint::new(c)?;
        let r = lattice_bridge(d, &v, s.bridge_n)?;
        let failed: Vec<&str> = r.iter().filter(|x| !x.1).map(|x| x.0).collect();
        ok &= failed.is_empty();
        rows.push(json!({ "d": d, "v": v.coords(), "failed": failed }));
    }
    Ok((ok, json!({ "n": s.bridge_n, "cases": rows })))
}

fn edge(w: &str) -> Result<WeightedGraph> {
    WeightedGraph::from_json(&serde_json::from_str(&format!(r#"{{"vertices": 2, "edges": [[1, 2, {w}]]}}"#)).expect("literal"))
}

fn weighted_values(_: &Scale) -> Result<(bool, Value)> {
    let half = general_recurrence_value(&edge(r#""1/2""#)?, 100)?;
    let ihalf = general_recurrence_value(&edge(r#"["0", "1/2"]"#)?, 100)?;
    let one = general_recurrence_value(&edge("1")?, 20)?;
    let near = |z: Option<num_complex::Complex64>, re: f64, im: f64| {
        z.is_some_and(|z| (z - num_complex::Complex64::new(re, im)).norm() < 1e-10)
    };
    let half_ok = near(half.a_one, 0.5, 0.0) && half.identity_residual.is_some_and(|r| r < 1e-10);
    let ihalf_ok = near(ihalf.a_one, -0.2, -0.1) && ihalf.identity_residual.is_some_and(|r| r < 1e-10);
    let diverge_ok = one.status == ExistenceStatus::Diverges && one.chain_ok == Some(true);
    let mut convex = Vec::new();
    let mut convex_ok = true;
    for case in battery().into_iter().filter(|c| check_convex(&c.graph).convex) {
        let r = convex_recurrence_limit(&case.graph, 200)?;
        let good = r.limit == WeightedLimit::One && r.gap_to_one < 1e-3;
        convex_ok &= good;
        convex.push(json!({ "case": case.name, "gap_to_one": r.gap_to_one, "limit_one": good }));
    }
    let superconvex = superconvex_monotone(&edge(r#""3/2""#)?, 2, 12)?;
    Ok((
        half_ok && ihalf_ok && diverge_ok && convex_ok && superconvex,
        json!({
            "edge_half": half.a_one.map(|z| [z.re, z.im]),
            "edge_i_half": ihalf.a_one.map(|z| [z.re, z.im]),
            "edge_one_diverges": diverge_ok,
            "convex": convex,
            "superconvex_monotone": superconvex,
        }),
    ))
}

fn weighted_visits(_: &Scale) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for case in battery() {
        let (Some(perm), Some(v)) = (&case.perm, case.target) else { continue };
        let mode = if check_convex(&case.graph).convex { VMode::Convex } else { VMode::General };
        let r = v_recurrence_value(&case.graph, v, 200, mode, perm, DEFAULT_MEMBERSHIP_TOL)?;
        ok &= r.certified;
        rows.push(json!({
            "case": case.name,
            "mode": mode,
            "certified": r.certified,
            "branch": r.branch,
            "distance": r.distances.iter().cloned().fold(f64::INFINITY, f64::min),
        }));
    }
    Ok((ok, json!(rows)))
}

fn montecarlo_calibration(s: &Scale) -> Result<(bool, Value)> {
    let r = calibration_battery(s.trials, CALIBRATION_SEED)?;
    let zs: Vec<f64> = r.cells.iter().map(|c| c.z).collect();
    Ok((r.passed, json!({ "trials": s.trials, "max_abs_z": r.max_abs_z, "soft_exceedances": r.soft_exceedances, "z": zs })))
}

fn montecarlo_endpoints(s: &Scale) -> Result<(bool, Value)> {
    let spec = SimulationSpec { d: 2, n: 6, trials: s.trials, seed: CALIBRATION_SEED, target: LatticePoint::new(vec![3, 1])? };
    let e = simulate_endpoint_frequency(&spec)?;
    let reach = reachability_zero_check(&SimulationSpec { n: 3, ..spec })?;
    let ok = e.max_z <= Z_HARD
        && e.wrong_parity_hits == 0
        && e.wrong_parity_exact == 0.0
        && reach.too_far_events == 0
        && reach.hits_at_m == 0
        && !reach.predicate
        && reach.predicate_matches_counts;
    Ok((
        ok,
        json!({
            "max_z": e.max_z,
            "wrong_parity_hits": e.wrong_parity_hits,
            "too_far_events": reach.too_far_events,
            "unreachable_hits": reach.hits_at_m,
            "predicate_matches_counts": reach.predicate_matches_counts,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_passes_and_repeats() {
        let a = run_verify(Level::Quick);
        assert!(a.passed, "{:?}", a.failures);
        let b = run_verify(Level::Quick);
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    }

    #[test]
    fn identities_at_small_order() {
        let v = LatticePoint::new(vec![1, 1]).unwrap();
        assert!(table_identities(2, &v, 12).unwrap().iter().all(|x| x.1));
    }
}
