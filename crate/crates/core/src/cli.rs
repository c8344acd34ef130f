//! Command-line front end. Text reports go to standard output, progress to
//! standard error, and `--json FILE` additionally writes a machine-readable
//! report with sorted keys.
//!
//! Exit codes: 0 for success or an affirmative verdict, 1 for a negative
//! verdict, 2 for usage and input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::behavior::{hardy_report, tuple_label, validate, Behavior, HardySpec};
use crate::decomposition::{verify_decomposition, ToblDecomposition};
use crate::hardy::{
    maximize_hardy, sweep_hardy_family, CorrelationSet, HardyOptimum, OptimizationRequest,
    Scenario,
};
use crate::io::{behavior_to_json, read_behavior_file};
use crate::polytopes::{membership_local, membership_tobl, LocalMembership, ToblMembership};
use crate::rational::Rational;
use crate::reproduce::reproduce_paper;
use crate::wirings::{audit_wirings, Pair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hardy-tobl",
    version,
    about = "Exact checks of tripartite correlations: validity, set membership, Hardy optima and wiring audits"
)]
pub struct Cli {
    /// Also write a machine-readable report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check normalization, nonnegativity and no-signaling of a behavior file.
    Validate { file: PathBuf },
    /// Decide membership of a behavior in a correlation set.
    Membership {
        file: PathBuf,
        #[arg(long, value_enum)]
        set: SetArg,
    },
    /// Maximize the Hardy success probability over a correlation set.
    Optimize(OptimizeArgs),
    /// Find a TOBL decomposition of a behavior, or verify a given one.
    Decompose {
        file: PathBuf,
        /// Decomposition JSON to verify instead of solving for one.
        #[arg(long, value_name = "FILE")]
        verify: Option<PathBuf>,
    },
    /// Audit every deterministic wiring of a tripartite behavior for locality.
    Wire {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        pair: PairArg,
    },
    /// Check the embedded reference tables and the known optima.
    ReproducePaper {
        /// Include per-claim runtimes in the JSON report.
        #[arg(long)]
        timings: bool,
    },
    /// Optimize every member of the Hardy family and compare the optima.
    Sweep {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long, value_enum)]
        set: SetArg,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("spec_source").required(true).args(["canonical", "spec"])))]
struct OptimizeArgs {
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_enum)]
    set: SetArg,
    /// Use the canonical Hardy spec for the scenario.
    #[arg(long)]
    canonical: bool,
    /// Read the Hardy spec from a JSON file.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Bipartite,
    Tripartite,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Bipartite => Scenario::Bipartite,
            ScenarioArg::Tripartite => Scenario::Tripartite,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SetArg {
    Local,
    Ns,
    Tobl,
}

impl From<SetArg> for CorrelationSet {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::Local => CorrelationSet::Local,
            SetArg::Ns => CorrelationSet::NoSignaling,
            SetArg::Tobl => CorrelationSet::Tobl,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairArg {
    Ab,
    Ac,
    Bc,
    All,
}

impl PairArg {
    fn pairs(self) -> Vec<Pair> {
        match self {
            PairArg::Ab => vec![Pair::AB],
            PairArg::Ac => vec![Pair::AC],
            PairArg::Bc => vec![Pair::BC],
            PairArg::All => Pair::ALL.to_vec(),
        }
    }
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Outcome {
    code: i32,
    json: Value,
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return EXIT_INPUT;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let result = pool.install(|| dispatch(&cli.command, out, err));
    match result {
        Ok(outcome) => {
            if let Some(path) = &cli.json {
                let mut text = serde_json::to_string_pretty(&outcome.json).expect("serializable");
                text.push('\n');
                if let Err(e) = std::fs::write(path, text) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            outcome.code
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn load(path: &Path) -> Result<Behavior, InputError> {
    read_behavior_file(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn behavior_value(b: &Behavior) -> Value {
    serde_json::from_str(&behavior_to_json(b)).expect("behavior JSON parses")
}

fn dispatch(cmd: &Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<Outcome, InputError> {
    match cmd {
        Command::Validate { file } => cmd_validate(&load(file)?, out),
        Command::Membership { file, set } => cmd_membership(&load(file)?, (*set).into(), out),
        Command::Optimize(args) => cmd_optimize(args, out),
        Command::Decompose { file, verify } => cmd_decompose(&load(file)?, verify.as_deref(), out),
        Command::Wire { file, pair } => cmd_wire(&load(file)?, &pair.pairs(), out, err),
        Command::ReproducePaper { timings } => {
            let report = reproduce_paper();
            write!(out, "{}", report.to_text())?;
            let json = serde_json::from_str(&report.to_json(*timings)).expect("report JSON parses");
            Ok(Outcome {
                code: verdict(report.passed()),
                json,
            })
        }
        Command::Sweep { scenario, set } => cmd_sweep((*scenario).into(), (*set).into(), out, err),
    }
}

fn cmd_validate(b: &Behavior, out: &mut (dyn Write + Send)) -> Result<Outcome, InputError> {
    let r = validate(b);
    let yes = |v: bool| if v { "yes" } else { "no" };
    writeln!(out, "parties: {}", b.parties())?;
    writeln!(out, "normalized: {}", yes(r.normalized))?;
    writeln!(out, "nonnegative: {}", yes(r.nonnegative))?;
    writeln!(out, "no-signaling: {}", yes(r.no_signaling))?;
    for v in &r.violations {
        writeln!(out, "  violated {}: {} != {}", v.constraint, v.lhs, v.rhs)?;
    }
    writeln!(out, "{}", if r.is_valid() { "valid" } else { "invalid" })?;
    let mut json = to_value(&r);
    json["valid"] = json!(r.is_valid());
    Ok(Outcome {
        code: verdict(r.is_valid()),
        json,
    })
}

fn cmd_membership(b: &Behavior, set: CorrelationSet, out: &mut (dyn Write + Send)) -> Result<Outcome, InputError> {
    let name = set.label();
    match set {
        CorrelationSet::NoSignaling => {
            let r = validate(b);
            let member = r.is_valid();
            if member {
                writeln!(out, "member of the {name} set")?;
            } else {
                writeln!(out, "not a member of the {name} set")?;
                for v in r.violations.iter().take(5) {
                    writeln!(out, "  violated {}: {} != {}", v.constraint, v.lhs, v.rhs)?;
                }
            }
            Ok(Outcome {
                code: verdict(member),
                json: json!({"set": "ns", "member": member, "violations": to_value(&r.violations)}),
            })
        }
        CorrelationSet::Local => match membership_local(b) {
            LocalMembership::Member(weights) => {
                writeln!(
                    out,
                    "member of the {name} set: mixture of {} deterministic strategies",
                    weights.len()
                )?;
                let rows: Vec<Value> = weights
                    .iter()
                    .map(|(s, w)| json!({"responses": s.responses(), "weight": w}))
                    .collect();
                for (s, w) in &weights {
                    writeln!(out, "  {w}  responses {:?}", s.responses())?;
                }
                Ok(Outcome {
                    code: EXIT_OK,
                    json: json!({"set": "local", "member": true, "weights": rows}),
                })
            }
            LocalMembership::NotMember(y) => {
                let value = crate::lp::dot(&y, b.cells());
                let support = y.iter().filter(|v| !v.is_zero()).count();
                writeln!(out, "not a member of the {name} set")?;
                writeln!(
                    out,
                    "certificate: Bell functional with {support} nonzero coefficients, \
                     at most 0 on every local behavior, {value} on this one"
                )?;
                Ok(Outcome {
                    code: EXIT_NEGATIVE,
                    json: json!({
                        "set": "local",
                        "member": false,
                        "certificate": {"coefficients": cell_map(b.parties(), &y), "value": value},
                    }),
                })
            }
        },
        CorrelationSet::Tobl => {
            if b.parties() != 3 {
                return Err(InputError("TOBL membership needs a tripartite behavior".into()));
            }
            match membership_tobl(b) {
                ToblMembership::Member(d) => {
                    writeln!(out, "member of the {name} set")?;
                    Ok(Outcome {
                        code: EXIT_OK,
                        json: json!({"set": "tobl", "member": true, "decomposition": decomposition_value(&d)}),
                    })
                }
                ToblMembership::NotMember {
                    bipartition,
                    certificate,
                } => {
                    let support = certificate.iter().filter(|v| !v.is_zero()).count();
                    writeln!(out, "not a member of the {name} set")?;
                    writeln!(
                        out,
                        "certificate: bipartition {} infeasible, Farkas vector with {support} nonzero entries",
                        bipartition.label()
                    )?;
                    Ok(Outcome {
                        code: EXIT_NEGATIVE,
                        json: json!({
                            "set": "tobl",
                            "member": false,
                            "bipartition": bipartition,
                            "certificate": certificate,
                        }),
                    })
                }
            }
        }
    }
}

/// Nonzero coefficients keyed like behavior cells.
fn cell_map(parties: usize, y: &[Rational]) -> Value {
    let t = 1usize << parties;
    let mut map = serde_json::Map::new();
    for (k, v) in y.iter().enumerate() {
        if !v.is_zero() {
            let key = format!(
                "{}={}/{}={}",
                &"xyz"[..parties],
                tuple_label(k / t, parties),
                &"abc"[..parties],
                tuple_label(k % t, parties)
            );
            map.insert(key, json!(v));
        }
    }
    Value::Object(map)
}

fn decomposition_value(d: &ToblDecomposition) -> Value {
    serde_json::from_str(&d.to_json()).expect("decomposition JSON parses")
}

fn cmd_optimize(args: &OptimizeArgs, out: &mut (dyn Write + Send)) -> Result<Outcome, InputError> {
    let scenario: Scenario = args.scenario.into();
    let set: CorrelationSet = args.set.into();
    let spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            HardySpec::from_json(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?
        }
        None => HardySpec::canonical(scenario.parties())?,
    };
    let req = OptimizationRequest::new(scenario, set, spec.clone())?;
    writeln!(out, "spec: {}", spec.describe())?;
    writeln!(out, "set: {}", set.label())?;
    match maximize_hardy(&req) {
        HardyOptimum::Infeasible(certificate) => {
            writeln!(out, "the zero conditions admit no behavior in this set")?;
            Ok(Outcome {
                code: EXIT_NEGATIVE,
                json: json!({"spec": spec, "set": set, "scenario": scenario, "feasible": false, "certificate": certificate}),
            })
        }
        HardyOptimum::Optimal(r) => {
            writeln!(out, "q_max = {}", r.q_max)?;
            let witness = hardy_report(&r.behavior, &spec)?;
            writeln!(
                out,
                "attaining behavior: {}, Hardy witness: {}",
                if validate(&r.behavior).is_valid() { "valid" } else { "invalid" },
                if witness.witness { "yes" } else { "no" }
            )?;
            let mut json = json!({
                "spec": spec,
                "set": set,
                "scenario": scenario,
                "feasible": true,
                "q_max": r.q_max,
                "behavior": behavior_value(&r.behavior),
            });
            if let crate::hardy::MembershipWitness::Tobl(d) = &r.witness {
                json["decomposition"] = decomposition_value(d);
            }
            Ok(Outcome { code: EXIT_OK, json })
        }
    }
}

fn cmd_decompose(b: &Behavior, verify: Option<&Path>, out: &mut (dyn Write + Send)) -> Result<Outcome, InputError> {
    if b.parties() != 3 {
        return Err(InputError("TOBL decompositions need a tripartite behavior".into()));
    }
    if let Some(path) = verify {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let d = ToblDecomposition::from_json(&text)
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let r = verify_decomposition(b, &d);
        for p in &r.weight_problems {
            writeln!(out, "weights: {p}")?;
        }
        for c in &r.checks {
            match &c.mismatch {
                None => writeln!(out, "{}: exact", c.label)?,
                Some(m) => writeln!(
                    out,
                    "{}: mismatch at xyz={} abc={}: reconstructed {}, behavior {}",
                    c.label, m.inputs, m.outcomes, m.found, m.expected
                )?,
            }
        }
        writeln!(out, "{}", if r.passed() { "decomposition verified" } else { "decomposition rejected" })?;
        let checks: Vec<Value> = r
            .checks
            .iter()
            .map(|c| {
                json!({
                    "label": c.label,
                    "exact": c.mismatch.is_none(),
                    "mismatch": c.mismatch.as_ref().map(|m| json!({
                        "inputs": m.inputs, "outcomes": m.outcomes,
                        "expected": m.expected, "found": m.found,
                    })),
                })
            })
            .collect();
        return Ok(Outcome {
            code: verdict(r.passed()),
            json: json!({"verified": r.passed(), "weight_problems": r.weight_problems, "checks": checks}),
        });
    }
    match membership_tobl(b) {
        ToblMembership::Member(d) => {
            write!(out, "{}", d.to_text())?;
            Ok(Outcome {
                code: EXIT_OK,
                json: decomposition_value(&d),
            })
        }
        ToblMembership::NotMember { bipartition, .. } => {
            writeln!(
                out,
                "no TOBL decomposition: bipartition {} is infeasible",
                bipartition.label()
            )?;
            Ok(Outcome {
                code: EXIT_NEGATIVE,
                json: json!({"member": false, "bipartition": bipartition}),
            })
        }
    }
}

fn cmd_wire(b: &Behavior, pairs: &[Pair], out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<Outcome, InputError> {
    if b.parties() != 3 {
        return Err(InputError("wirings need a tripartite behavior".into()));
    }
    let v = validate(b);
    if !v.is_valid() {
        return Err(InputError(format!(
            "behavior is not a valid no-signaling table ({} violations)",
            v.violations.len()
        )));
    }
    let report = {
        let err = std::sync::Mutex::new(&mut *err);
        audit_wirings(b, pairs, &|done, total| {
            if let Ok(mut e) = err.lock() {
                let _ = writeln!(e, "wirings: {done}/{total}");
            }
        })
    };
    write!(out, "{}", report.to_text())?;
    let json = serde_json::from_str(&report.to_json()).expect("report JSON parses");
    Ok(Outcome {
        code: verdict(report.all_local()),
        json,
    })
}

fn cmd_sweep(scenario: Scenario, set: CorrelationSet, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<Outcome, InputError> {
    if set == CorrelationSet::Tobl && scenario != Scenario::Tripartite {
        return Err(InputError("the TOBL set is only defined for three parties".into()));
    }
    let count = HardySpec::family(scenario.parties())?.len();
    writeln!(err, "sweeping {count} specs over the {} set", set.label())?;
    let entries = sweep_hardy_family(scenario, set)?;
    let canonical = HardySpec::canonical(scenario.parties())?;
    let reference = entries
        .iter()
        .find(|e| e.spec == canonical)
        .and_then(|e| e.q_max.clone());
    let mut distinct: Vec<Option<Rational>> = entries.iter().map(|e| e.q_max.clone()).collect();
    distinct.sort();
    distinct.dedup();
    let show = |q: &Option<Rational>| q.as_ref().map_or("infeasible".to_string(), Rational::to_string);
    for e in &entries {
        writeln!(out, "{}  q_max = {}", e.spec.describe(), show(&e.q_max))?;
    }
    let uniform = distinct.len() == 1;
    writeln!(
        out,
        "{} specs, distinct optima: {}",
        entries.len(),
        distinct.iter().map(show).collect::<Vec<_>>().join(", ")
    )?;
    writeln!(
        out,
        "{}",
        if uniform { "every spec matches the canonical optimum" } else { "optima differ across the family" }
    )?;
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| json!({"spec": e.spec, "q_max": e.q_max}))
        .collect();
    Ok(Outcome {
        code: verdict(uniform),
        json: json!({
            "scenario": scenario,
            "set": set,
            "canonical_q_max": reference,
            "uniform": uniform,
            "entries": rows,
        }),
    })
}
