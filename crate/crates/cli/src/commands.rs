use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use polya_core::effective2d::{
    robbins_factorial_bounds, u2n_bounds_check, verify_gap, GapMode, GapPolicy, EXACT_CAP, FLOAT_CAP,
};
use polya_core::lattice::{walk_table_with, LatticePoint, Limits, DEFAULT_MEMORY_BUDGET};
use polya_core::montecarlo::{
    calibration_battery, exact_visit_probability, simulate_endpoint_frequency, simulate_visit_frequency_with,
    SimulationSpec, DEFAULT_STEP_BUDGET, Z_HARD,
};
use polya_core::recurrence::{
    asymptotic_compare, polya_enclosure, v_recurrence_report, zero_recurrence_profile, Limit,
};
use polya_core::verify::{run_verify, Level};
use polya_core::weighted::{
    check_convex, check_identities, check_superconvex, check_v_transitive, convex_recurrence_limit,
    find_v_transitive_perm, general_recurrence_value, v_recurrence_value, weighted_walk_series, VMode,
    WeightedGraph,
};
use polya_core::{Error, ErrorKind};

use crate::args::{
    AsymArgs, Bounds2dArgs, Cli, Command, CountArgs, Format, LimitArgs, ProfileArgs, SimulateArgs, VerifyArgs,
    VlimitArgs, WeightedArgs,
};
use crate::{EXIT_INPUT, EXIT_INVARIANT, EXIT_RESOURCE};

/// Largest `n` for which `u2n` runs without `--i-know`.
const U2N_CAP: usize = 10_000_000;
/// Longest walk for which `simulate` also computes the exact value.
const EXACT_SIMULATION_STEPS: usize = 200;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Resource(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Resource(m) => write!(f, "resource limit exceeded: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Core(e) => match e.kind() {
            ErrorKind::InvalidInput => EXIT_INPUT,
            ErrorKind::Resource => EXIT_RESOURCE,
            ErrorKind::Invariant => EXIT_INVARIANT,
        },
        CliError::Input(_) => EXIT_INPUT,
        CliError::Resource(_) => EXIT_RESOURCE,
    }
}

pub struct Output {
    pub text: String,
    pub code: u8,
}

#[derive(Serialize)]
struct Provenance {
    version: &'static str,
    seed: Option<u64>,
    config_sha256: String,
}

fn provenance(cli: &Cli) -> Provenance {
    let config = serde_json::to_string(cli).expect("flags serialize");
    Provenance {
        version: env!("CARGO_PKG_VERSION"),
        seed: cli.command.seed(),
        config_sha256: hex::encode(Sha256::digest(config.as_bytes())),
    }
}

struct Emitter<'a> {
    cli: &'a Cli,
}

impl Emitter<'_> {
    /// JSON wraps the result with the provenance; CSV and tables start with a `#` header line.
    fn emit(&self, format: Format, result: Value, text: impl FnOnce() -> String, code: u8) -> Output {
        let p = provenance(self.cli);
        let text = match format {
            Format::Json => {
                let doc = json!({ "provenance": p, "result": result });
                serde_json::to_string_pretty(&doc).expect("json") + "\n"
            }
            Format::Csv | Format::Table => {
                let seed = p.seed.map_or("-".to_string(), |s| s.to_string());
                format!("# polya {} seed={} config_sha256={}\n{}", p.version, seed, p.config_sha256, text())
            }
        };
        Output { text, code }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn acknowledge(cli: &Cli, what: String) -> Result<()> {
    if cli.i_know {
        Ok(())
    } else {
        Err(CliError::Resource(format!("{what}; pass --i-know to proceed")))
    }
}

fn parse_point(text: &str) -> Result<LatticePoint> {
    let coords: std::result::Result<Vec<i64>, _> = text.split(',').map(|t| t.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|_| CliError::Input(format!("bad lattice point {text:?}")))?;
    Ok(LatticePoint::new(coords)?)
}

fn target_or_origin(text: &Option<String>, d: usize) -> Result<LatticePoint> {
    let p = match text {
        Some(t) => parse_point(t)?,
        None => LatticePoint::origin(d)?,
    };
    if p.dim() != d {
        return Err(CliError::Input(format!("target {p} does not have dimension {d}")));
    }
    Ok(p)
}

pub fn run(cli: &Cli) -> Result<Output> {
    let e = Emitter { cli };
    match &cli.command {
        Command::Count(a) => count(cli, &e, a),
        Command::Profile(a) => profile(&e, a),
        Command::Limit(a) => limit(&e, a),
        Command::Vlimit(a) => vlimit(&e, a),
        Command::Asym(a) => asym(&e, a),
        Command::Bounds2d(a) => bounds2d(cli, &e, a),
        Command::Weighted(a) => weighted(&e, a),
        Command::Simulate(a) => simulate(cli, &e, a),
        Command::Verify(a) => verify(&e, a),
    }
}

fn limits(cli: &Cli) -> Result<Limits> {
    let bytes = cli.memory_budget.unwrap_or(DEFAULT_MEMORY_BUDGET);
    if bytes > DEFAULT_MEMORY_BUDGET {
        acknowledge(cli, format!("memory budget {bytes} exceeds the default {DEFAULT_MEMORY_BUDGET}"))?;
    }
    Ok(Limits { memory_bytes: bytes })
}

fn count(cli: &Cli, e: &Emitter, a: &CountArgs) -> Result<Output> {
    let v = target_or_origin(&a.target, a.dim)?;
    let t = walk_table_with(a.dim, &v, a.steps, &limits(cli)?)?;
    Ok(e.emit(a.format, t.to_json(), || t.to_csv(), 0))
}

fn profile(e: &Emitter, a: &ProfileArgs) -> Result<Output> {
    let r = zero_recurrence_profile(a.dim, a.steps)?;
    let text = || {
        let sep = if a.format == Format::Csv { "," } else { "\t" };
        let mut s = format!("n{sep}profile{sep}gap\n");
        for (n, p, g) in r.table() {
            let _ = writeln!(s, "{n}{sep}{p:.12}{sep}{g:.12}");
        }
        if a.format == Format::Table {
            match (&r.limit, &r.enclosure) {
                (Limit::One, _) => s.push_str("limit: 1\n"),
                (Limit::Enclosure(i), Some(enc)) => {
                    let _ = writeln!(s, "limit: [{:.9}, {:.9}] width {:.3e}", i.lo(), i.hi(), enc.width);
                }
                (Limit::Enclosure(i), None) => {
                    let _ = writeln!(s, "limit: [{:.9}, {:.9}] width {:.3e}", i.lo(), i.hi(), i.width());
                }
            }
        }
        s
    };
    Ok(e.emit(a.format, r.to_json(), text, 0))
}

fn limit(e: &Emitter, a: &LimitArgs) -> Result<Output> {
    if a.dim <= 2 {
        polya_core::lattice::check_dim(a.dim)?;
        let result = json!({ "d": a.dim, "limit": "ONE" });
        return Ok(e.emit(a.format, result, || "d,limit\n".to_string() + &format!("{},ONE\n", a.dim), 0));
    }
    let r = polya_enclosure(a.dim, a.steps)?;
    let text = || {
        format!(
            "d,n,lo,hi,width\n{},{},{:.12},{:.12},{:.6e}\n",
            r.d,
            r.n_max,
            r.value.lo(),
            r.value.hi(),
            r.width
        )
    };
    Ok(e.emit(a.format, to_value(&r), text, 0))
}

fn vlimit(e: &Emitter, a: &VlimitArgs) -> Result<Output> {
    let v = target_or_origin(&Some(a.target.clone()), a.dim)?;
    let r = v_recurrence_report(a.dim, &v, a.steps)?;
    let text = || {
        format!(
            "d,v,n,lo,hi,width\n{},\"{}\",{},{:.12},{:.12},{:.6e}\n",
            r.d,
            v,
            r.n_max,
            r.value.lo(),
            r.value.hi(),
            r.width
        )
    };
    Ok(e.emit(a.format, to_value(&r), text, 0))
}

fn asym(e: &Emitter, a: &AsymArgs) -> Result<Output> {
    let targets: Vec<LatticePoint> = a.targets.split(';').map(parse_point).collect::<Result<_>>()?;
    let rows = asymptotic_compare(a.dim, &targets, a.steps)?;
    let text = || {
        let mut s = String::from("v,l2,lo,hi,formula,ratio,ratio_times_b_one\n");
        for r in &rows {
            let _ = writeln!(
                s,
                "\"{}\",{:.6},{:.9},{:.9},{:.9},{:.6},{:.6}",
                r.v,
                r.l2,
                r.limit.lo(),
                r.limit.hi(),
                r.formula,
                r.ratio,
                r.ratio_times_b_one
            );
        }
        s
    };
    Ok(e.emit(a.format, to_value(&rows), text, 0))
}

fn bounds2d(cli: &Cli, e: &Emitter, a: &Bounds2dArgs) -> Result<Output> {
    let mode = GapMode::parse(&a.mode).ok_or_else(|| CliError::Input(format!("mode must be exact or float, got {}", a.mode)))?;
    let mut policy = GapPolicy::new(mode);
    if let Some(c) = a.exact_cap {
        if c > EXACT_CAP {
            acknowledge(cli, format!("exact cap {c} exceeds the default {EXACT_CAP}"))?;
        }
        policy.exact_cap = c;
    }
    if let Some(c) = a.float_cap {
        if c > FLOAT_CAP {
            acknowledge(cli, format!("float cap {c} exceeds the default {FLOAT_CAP}"))?;
        }
        policy.float_cap = c;
    }
    if a.n_list.is_empty() && a.u2n.is_none() {
        return Err(CliError::Input("give --n-list, --u2n or both".into()));
    }
    let mut result = json!({});
    let mut csv = String::new();
    let mut code = 0;
    if a.robbins {
        let mut rows = Vec::new();
        csv.push_str("N,lower,upper\n");
        for &n in &a.n_list {
            let b = robbins_factorial_bounds(n as u64)?;
            let _ = writeln!(csv, "{n},{},{}", b.lo(), b.hi());
            rows.push(json!({ "n": n, "lower": b.lo(), "upper": b.hi() }));
        }
        result["robbins"] = json!(rows);
    } else if !a.n_list.is_empty() {
        let report = verify_gap(&a.n_list, &policy)?;
        if report.records.iter().any(|r| r.mode.is_some() && !r.all_ok) {
            code = EXIT_INVARIANT;
        } else if report.records.iter().any(|r| r.mode.is_none()) {
            code = EXIT_RESOURCE;
        }
        csv.push_str(&report.to_csv());
        result["gaps"] = to_value(&report);
    }
    if let Some(m) = a.u2n {
        if m > U2N_CAP {
            acknowledge(cli, format!("u2n range {m} exceeds {U2N_CAP}"))?;
        }
        let r = u2n_bounds_check(m)?;
        if !r.ok {
            code = EXIT_INVARIANT;
        }
        let _ = write!(csv, "max_n,ok,min_scaled,max_scaled\n{},{},{},{}\n", r.max_n, r.ok, r.min_scaled, r.max_scaled);
        result["u2n"] = to_value(&r);
    }
    Ok(e.emit(a.format, result, || csv, code))
}

fn read_graph(path: &str) -> Result<Value> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("graph is not JSON: {e}")))
}

fn weighted(e: &Emitter, a: &WeightedArgs) -> Result<Output> {
    let doc = read_graph(&a.graph)?;
    let g = WeightedGraph::from_json(&doc)?;
    let target = a.target.or_else(|| doc.get("target").and_then(Value::as_u64).map(|v| v as usize));
    if let Some(v) = target {
        g.check_vertex(v)?;
    }
    let perm = match (&a.perm, doc.get("perm")) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(p)) => Some(
            serde_json::from_value::<Vec<usize>>(p.clone())
                .map_err(|_| CliError::Input("perm must be a list of vertex labels".into()))?,
        ),
        (None, None) => match target {
            Some(v) if v != 1 => find_v_transitive_perm(&g, v)?,
            _ => None,
        },
    };
    let convex = check_convex(&g);
    let mode = match a.mode.as_deref() {
        Some(m) => VMode::parse(m).ok_or_else(|| CliError::Input(format!("mode must be general or convex, got {m}")))?,
        None if convex.convex => VMode::Convex,
        None => VMode::General,
    };
    let transitive = match (&perm, target) {
        (Some(p), Some(v)) => check_v_transitive(&g, v, p)?,
        _ => false,
    };
    let series = weighted_walk_series(&g, target, a.steps)?;
    let ids = check_identities(&g, &series, transitive);
    let identities: Vec<Value> = ids.iter().map(|(n, ok)| json!({ "identity": n, "holds": ok })).collect();
    let general = general_recurrence_value(&g, a.steps)?;
    let mut result = json!({
        "graph": g.to_json(),
        "series": series.to_json(),
        "identities": identities,
        "convex": to_value(&convex),
        "superconvex": check_superconvex(&g).map(|r| to_value(&r)).unwrap_or(Value::Null),
        "general": to_value(&general),
        "lightness": g.lightness_certificate(),
    });
    let mut diagnostics = json!({ "status": general.status, "residuals": { "identity": general.identity_residual } });
    if convex.convex {
        let r = convex_recurrence_limit(&g, a.steps)?;
        diagnostics["residuals"]["gap_to_one"] = json!(r.gap_to_one);
        result["convex_limit"] = to_value(&r);
    }
    if let Some(v) = target.filter(|&v| v != 1) {
        match perm.as_ref().filter(|_| transitive) {
            Some(p) => {
                let r = v_recurrence_value(&g, v, a.steps, mode, p, a.tolerance)?;
                diagnostics["branch"] = json!(r.branch);
                diagnostics["visit_certified"] = json!(r.certified);
                result["visit"] = to_value(&r);
            }
            None => {
                result["visit"] = json!({ "error": format!("no permutation certifies {v}-transitivity") });
            }
        }
    }
    result["diagnostics"] = diagnostics;
    let code = if ids.iter().all(|x| x.1) { 0 } else { EXIT_INVARIANT };
    Ok(e.emit(Format::Json, result, String::new, code))
}

fn simulate(cli: &Cli, e: &Emitter, a: &SimulateArgs) -> Result<Output> {
    if a.calibrate {
        let r = calibration_battery(a.trials, a.seed)?;
        let text = || {
            let mut s = String::from("d,n,target,exact,estimate,stderr,z\n");
            for c in &r.cells {
                let _ = writeln!(
                    s,
                    "{},{},\"{}\",{},{},{},{}",
                    c.d, c.n, c.target, c.exact, c.estimate.estimate, c.estimate.stderr, c.z
                );
            }
            s
        };
        let code = if r.passed { 0 } else { EXIT_INVARIANT };
        return Ok(e.emit(a.format, to_value(&r), text, code));
    }
    let target = target_or_origin(&a.target, a.dim)?;
    let spec = SimulationSpec { d: a.dim, n: a.steps, trials: a.trials, seed: a.seed, target };
    let steps = a.trials.saturating_mul(a.steps as u64);
    let budget = if steps > DEFAULT_STEP_BUDGET {
        acknowledge(cli, format!("{steps} simulated steps exceed {DEFAULT_STEP_BUDGET}"))?;
        u64::MAX
    } else {
        DEFAULT_STEP_BUDGET
    };
    if a.endpoints {
        if budget > DEFAULT_STEP_BUDGET {
            return Err(CliError::Resource("endpoint simulation is limited to the default budget".into()));
        }
        let r = simulate_endpoint_frequency(&spec)?;
        let text = || {
            let mut s = String::from("point,hits,estimate,exact,z\n");
            for row in &r.rows {
                let _ = writeln!(s, "\"{}\",{},{},{},{}", row.point, row.hits, row.estimate, row.exact, row.z);
            }
            s
        };
        let code = if r.max_z <= Z_HARD && r.wrong_parity_hits == 0 { 0 } else { EXIT_INVARIANT };
        return Ok(e.emit(a.format, to_value(&r), text, code));
    }
    let est = simulate_visit_frequency_with(&spec, budget)?;
    let exact = (a.steps <= EXACT_SIMULATION_STEPS)
        .then(|| exact_visit_probability(a.dim, &spec.target, a.steps).ok())
        .flatten();
    let z = exact.map(|p| est.z_score(p));
    let result = json!({
        "d": a.dim,
        "steps": a.steps,
        "target": spec.target.coords(),
        "trials": a.trials,
        "hits": est.hits,
        "estimate": est.estimate,
        "stderr": est.stderr,
        "exact": exact,
        "z": z,
    });
    let text = || {
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
        format!("estimate,stderr,exact,z\n{},{},{},{}\n", est.estimate, est.stderr, opt(exact), opt(z))
    };
    let code = if z.is_some_and(|z| z > Z_HARD) { EXIT_INVARIANT } else { 0 };
    Ok(e.emit(a.format, result, text, code))
}

fn verify(e: &Emitter, a: &VerifyArgs) -> Result<Output> {
    let r = run_verify(if a.quick { Level::Quick } else { Level::Full });
    let code = if r.passed { 0 } else { EXIT_INVARIANT };
    Ok(e.emit(Format::Json, r.to_json(), String::new, code))
}
