//! Command-line adapter over `laplace_walk`.
//!
//! Every subcommand reads its inputs, converts 1-based indices, calls one
//! library operation and serializes the result. Exit codes: 0 success,
//! 1 validation failure or identity residual above tolerance, 2 usage or
//! input error.

mod args;

use std::fmt;
use std::path::Path;

use clap::Parser;
use laplace_walk::cycle::reduction_trace;
use laplace_walk::io;
use laplace_walk::mechanics::max_band_force;
use laplace_walk::sim::WalkConfig;
use laplace_walk::walk::{self, hitting_cycle_residual, hitting_matrix_with, hitting_times_to_with, return_times_with};
use laplace_walk::{
    ctw_residual, cycle_residual, eliminate_vertex, laplacian_from_graph, neighbor_sum_residual, pinned_solve,
    residual_forces, shift_load, simulate_hitting, simulate_return, solve_equilibrium, star_expand_triangle,
    three_cycle_residual, ConductanceMatrix, CycleResidual, Error, ForceField, LoadVector, WalkLaw, WeightedGraph,
};
use serde::Serialize;
use serde_json::{json, Value};

pub use args::Cli;
use args::{Command, IdentitySource, LawArg, SystemSource};

/// Failure of one invocation, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input: exit code 2.
    Usage(String),
    /// Input read fine but fails a property or identity: exit code 1.
    /// The structured report, if any, is still printed.
    Failed { message: String, output: Option<String> },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Failed { message, .. } => f.write_str(message),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::VertexOutOfRange { .. }
            | Error::NotDistinct(_)
            | Error::SequenceTooShort(_)
            | Error::SameEndpoints(_)
            | Error::NoTrials
            | Error::DimensionMismatch { .. }
            | Error::TooSmall { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed { message: other.to_string(), output: None },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: laplace_walk::Result<T>) -> CliResult<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        CliError::Failed { message, output } => CliError::Failed { message: format!("{}: {message}", path.display()), output },
    })
}

fn load_graph(path: &Path) -> CliResult<WeightedGraph> {
    with_path(path, io::parse_edge_list(&read(path)?))
}

fn load_matrix(path: &Path) -> CliResult<ConductanceMatrix> {
    let raw = with_path(path, io::parse_matrix(&read(path)?))?;
    with_path(path, ConductanceMatrix::new(raw))
}

fn load_vector(path: &Path, n: usize) -> CliResult<LoadVector> {
    let v = with_path(path, io::parse_vector(&read(path)?))?;
    if v.len() != n {
        return Err(CliError::Usage(format!("{}: expected {n} load values, found {}", path.display(), v.len())));
    }
    Ok(LoadVector::new(v))
}

/// 1-based user index to 0-based, checked against `n`.
fn vertex(name: &str, v: usize, n: usize) -> CliResult<usize> {
    if (1..=n).contains(&v) {
        Ok(v - 1)
    } else {
        Err(CliError::Usage(format!("--{name} {v} out of range 1..={n}")))
    }
}

fn law(l: &LawArg) -> WalkLaw {
    if l.weighted {
        WalkLaw::Weighted
    } else {
        WalkLaw::Uniform
    }
}

fn system(src: &SystemSource) -> CliResult<(ConductanceMatrix, LoadVector)> {
    let a = match (&src.matrix, &src.graph) {
        (Some(m), _) => load_matrix(m)?,
        (None, Some(g)) => laplacian_from_graph(&load_graph(g)?),
        (None, None) => return Err(CliError::Usage("one of --matrix or --graph is required".into())),
    };
    let f = load_vector(&src.load, a.n())?;
    Ok((a, f))
}

enum Identity {
    /// Hitting times of the simple walk on a graph.
    Walk(WeightedGraph),
    /// Pinned solutions of an explicit system.
    Loaded(ConductanceMatrix, LoadVector),
}

impl Identity {
    fn n(&self) -> usize {
        match self {
            Identity::Walk(g) => g.n(),
            Identity::Loaded(a, _) => a.n(),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Identity::Walk(_) => "hitting-times",
            Identity::Loaded(..) => "pinned-solutions",
        }
    }

    /// The linear system behind the identity.
    fn system(&self) -> (ConductanceMatrix, LoadVector) {
        match self {
            Identity::Walk(g) => walk::walk_system(g, WalkLaw::Uniform),
            Identity::Loaded(a, f) => (a.clone(), f.clone()),
        }
    }
}

fn identity(src: &IdentitySource) -> CliResult<Identity> {
    match (&src.matrix, &src.graph, &src.load) {
        (Some(m), _, Some(l)) => {
            let a = load_matrix(m)?;
            let f = load_vector(l, a.n())?;
            Ok(Identity::Loaded(a, f))
        }
        (None, Some(g), Some(l)) => {
            let a = laplacian_from_graph(&load_graph(g)?);
            let f = load_vector(l, a.n())?;
            Ok(Identity::Loaded(a, f))
        }
        (None, Some(g), None) => Ok(Identity::Walk(load_graph(g)?)),
        _ => Err(CliError::Usage("--matrix requires --load".into())),
    }
}

#[derive(Serialize)]
struct CycleCheck {
    vertices: Vec<usize>,
    residual: f64,
    scale: f64,
    relative: f64,
    pass: bool,
}

fn cycle_check(seq: &[usize], r: CycleResidual, tol: f64) -> CycleCheck {
    CycleCheck {
        vertices: seq.iter().map(|v| v + 1).collect(),
        residual: r.residual,
        scale: r.scale,
        relative: r.relative(),
        pass: r.within(tol),
    }
}

/// Serializes `report`, and turns it into a failure when `pass` is false.
fn verdict(report: Value, pass: bool, message: &str) -> CliResult<Value> {
    if pass {
        Ok(report)
    } else {
        Err(CliError::Failed { message: message.to_string(), output: Some(report.to_string()) })
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library results serialize")
}

enum Output {
    Json(Value),
    Text(String),
}

fn execute(cmd: &Command) -> CliResult<Output> {
    use Output::{Json, Text};
    Ok(match cmd {
        Command::Validate { matrix, tol } => {
            let raw = with_path(matrix, io::parse_matrix(&read(matrix)?))?;
            let tols = laplace_walk::tol::Tolerances { row_sum: *tol, ..Default::default() };
            let report = laplace_walk::laplacian::validate_with(&raw, &tols);
            let pass = report.is_valid();
            Json(verdict(to_value(&report), pass, "matrix is not a valid conductance matrix")?)
        }
        Command::Laplacian { graph, csv } => {
            let a = laplacian_from_graph(&load_graph(graph)?);
            if *csv {
                Text(io::write_matrix_csv(a.matrix()))
            } else {
                Json(to_value(&a))
            }
        }
        Command::Solve { system: src, pin } => {
            let (a, f) = system(src)?;
            let pin = vertex("pin", *pin, a.n())?;
            Json(to_value(&pinned_solve(&a, &f, pin)?))
        }
        Command::Eliminate { system: src, vertex: v, pin } => {
            let (a, mut f) = system(src)?;
            let v = vertex("vertex", *v, a.n())?;
            if let Some(p) = pin {
                f = shift_load(&f, vertex("pin", *p, a.n())?)?;
            }
            Json(to_value(&eliminate_vertex(&a, &f, v)?))
        }
        Command::StarExpand { matrix, csv } => {
            let b = star_expand_triangle(&load_matrix(matrix)?)?;
            if *csv {
                Text(io::write_matrix_csv(b.matrix()))
            } else {
                Json(to_value(&b))
            }
        }
        Command::Equilibrium { graph, forces, nail } => {
            let g = load_graph(graph)?;
            let rows = with_path(forces, io::parse_rows(&read(forces)?))?;
            let field = with_path(forces, ForceField::from_rows(&rows))?;
            let nail = vertex("nail", *nail, g.n())?;
            let eq = solve_equilibrium(&g, &field, nail)?;
            let residual = residual_forces(&g, &field, &eq)?;
            let mut out = to_value(&eq);
            out["max_residual"] = json!(residual.amax());
            out["max_band_force"] = json!(max_band_force(&g, &eq));
            Json(out)
        }
        Command::Hit { graph, target, law: l } => {
            let g = load_graph(graph)?;
            let target = vertex("target", *target, g.n())?;
            Json(to_value(&hitting_times_to_with(&g, target, law(l))?))
        }
        Command::HitMatrix { graph, csv, law: l } => {
            let h = hitting_matrix_with(&load_graph(graph)?, law(l))?;
            if *csv {
                Text(h.to_csv())
            } else {
                Json(to_value(&h))
            }
        }
        Command::ReturnTimes { graph, detailed, law: l } => {
            let rt = return_times_with(&load_graph(graph)?, law(l))?;
            if *detailed {
                let records: Vec<Value> = (0..rt.r.len())
                    .map(|i| json!({ "i": i + 1, "deg": rt.degrees[i], "R": rt.r[i] }))
                    .collect();
                Json(Value::Array(records))
            } else {
                Json(to_value(&rt.r))
            }
        }
        Command::VerifyCtw { source, triple, all_triples, trace, tol } => {
            let id = identity(source)?;
            let n = id.n();
            let triples: Vec<[usize; 3]> = if *all_triples {
                (0..n)
                    .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| [i, j, k])))
                    .filter(|[i, j, k]| i != j && j != k && i != k)
                    .collect()
            } else {
                let t = triple.as_deref().unwrap_or_default();
                vec![[vertex("triple", t[0], n)?, vertex("triple", t[1], n)?, vertex("triple", t[2], n)?]]
            };
            let table = match &id {
                Identity::Walk(g) => Some(walk::hitting_matrix(g)?),
                Identity::Loaded(..) => None,
            };
            let mut checks = Vec::with_capacity(triples.len());
            for [i, j, k] in &triples {
                let r = match (&id, &table) {
                    (Identity::Walk(_), Some(h)) => ctw_residual(h, *i, *j, *k)?,
                    (Identity::Loaded(a, f), _) => three_cycle_residual(a, f, *i, *j, *k)?,
                    _ => unreachable!("walk identities always carry a table"),
                };
                checks.push(cycle_check(&[*i, *j, *k], r, *tol));
            }
            let pass = checks.iter().all(|c| c.pass);
            let max_relative = checks.iter().map(|c| c.relative).fold(0.0, f64::max);
            let mut report = json!({
                "source": id.label(),
                "tol": tol,
                "checks": checks,
                "max_relative": max_relative,
                "pass": pass,
            });
            if *trace {
                let [i, j, k] = triples[0];
                let (a, f) = id.system();
                report["trace"] = to_value(&reduction_trace(&a, &f, i, j, k)?);
            }
            Json(verdict(report, pass, "cycle-reversal residual above tolerance")?)
        }
        Command::VerifyCycle { source, seq, tol } => {
            let id = identity(source)?;
            let seq = seq.iter().map(|&v| vertex("seq", v, id.n())).collect::<CliResult<Vec<_>>>()?;
            let r = match &id {
                Identity::Walk(g) => hitting_cycle_residual(&walk::hitting_matrix(g)?, &seq)?,
                Identity::Loaded(a, f) => cycle_residual(a, f, &seq)?,
            };
            let check = cycle_check(&seq, r, *tol);
            let pass = check.pass;
            let report = json!({ "source": id.label(), "tol": tol, "check": check, "pass": pass });
            Json(verdict(report, pass, "cycle-reversal residual above tolerance")?)
        }
        Command::NeighborSum { graph, vertex: v, tol } => {
            let g = load_graph(graph)?;
            let i = vertex("vertex", *v, g.n())?;
            let residual = neighbor_sum_residual(&g, i)?;
            let two_m = 2 * g.edge_count();
            let pass = residual.abs() <= tol * two_m as f64;
            let report = json!({
                "vertex": i + 1,
                "deg": g.degrees()[i],
                "two_m": two_m,
                "residual": residual,
                "pass": pass,
            });
            Json(verdict(report, pass, "neighbour-sum residual above tolerance")?)
        }
        Command::SimulateHit { graph, from, to, walk: w } => {
            let g = load_graph(graph)?;
            let (from, to) = (vertex("from", *from, g.n())?, vertex("to", *to, g.n())?);
            let cfg = WalkConfig { trials: w.trials, seed: w.seed, max_steps: w.max_steps, law: law(&w.law) };
            Json(to_value(&simulate_hitting(&g, from, to, &cfg)?))
        }
        Command::SimulateReturn { graph, vertex: v, walk: w } => {
            let g = load_graph(graph)?;
            let i = vertex("vertex", *v, g.n())?;
            let cfg = WalkConfig { trials: w.trials, seed: w.seed, max_steps: w.max_steps, law: law(&w.law) };
            Json(to_value(&simulate_return(&g, i, &cfg)?))
        }
    })
}

fn render(out: Output, pretty: bool) -> String {
    match out {
        Output::Text(s) => s,
        Output::Json(v) if pretty => serde_json::to_string_pretty(&v).expect("json") + "\n",
        Output::Json(v) => v.to_string() + "\n",
    }
}

/// Runs one parsed invocation and returns the rendered output.
pub fn run(cli: &Cli) -> CliResult<String> {
    let out = execute(&cli.command).map_err(|e| match e {
        CliError::Failed { message, output: Some(raw) } if cli.pretty => {
            let v: Value = serde_json::from_str(&raw).expect("report is json");
            CliError::Failed { message, output: Some(render(Output::Json(v), true)) }
        }
        CliError::Failed { message, output: Some(raw) } => CliError::Failed { message, output: Some(raw + "\n") },
        other => other,
    })?;
    Ok(render(out, cli.pretty))
}

/// Parses `argv` and runs it: the exit code and the text destined for stdout
/// (or the `--output` file). Diagnostics go to the returned error string.
pub fn run_args<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, if code == 0 { e.to_string() } else { String::new() }, if code == 0 { String::new() } else { e.to_string() });
        }
    };
    let (code, out, err) = match run(&cli) {
        Ok(out) => (0, out, String::new()),
        Err(e) => {
            let out = match &e {
                CliError::Failed { output: Some(o), .. } => o.clone(),
                _ => String::new(),
            };
            (e.exit_code(), out, format!("error: {e}\n"))
        }
    };
    if let (Some(path), false) = (&cli.output, out.is_empty()) {
        if let Err(e) = std::fs::write(path, &out) {
            return (2, String::new(), format!("error: {}: {e}\n", path.display()));
        }
        return (code, String::new(), err);
    }
    (code, out, err)
}
