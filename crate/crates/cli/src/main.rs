//! `sgko`: runs the structured solvers on the standard problem suites and
//! writes CSV records.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sgko_core::{run_bench, run_invert_bench, BenchRecord, Error, InvertRecord, ProblemId, ProblemSpec, Solver};

#[derive(Parser)]
#[command(name = "sgko", version, about = "Benchmark harness for GKO-type structured solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem instance and write a CSV record.
    Solve(SolveArgs),
    /// Invert a Trummer-like problem and write E1, E2, E3.
    Invert(InvertArgs),
    /// Run the full problem grids.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// p1, p2, p3, p4, t1, t2 or identity.
    #[arg(long, env = "SGKO_PROBLEM")]
    problem: String,
    /// Matrix size; 128 for p4 and 512 otherwise when omitted.
    #[arg(long, env = "SGKO_N")]
    n: Option<usize>,
    /// Node offset (p1, p2, t2) or Gaussian parameter (p3).
    #[arg(long, env = "SGKO_A")]
    a: Option<f64>,
    /// Node step (p1, p2, t2).
    #[arg(long, env = "SGKO_B")]
    b: Option<f64>,
    /// Perturbation (p4) or identity shift (t2).
    #[arg(long, env = "SGKO_EPS")]
    eps: Option<f64>,
    #[arg(long, env = "SGKO_SEED", default_value_t = 0)]
    seed: u64,
    /// Right-hand-side columns.
    #[arg(long, env = "SGKO_M", default_value_t = 1)]
    m: usize,
}

impl ProblemArgs {
    fn spec(&self) -> Result<ProblemSpec, Error> {
        let id: ProblemId = self.problem.parse()?;
        let mut spec = ProblemSpec::new(id, self.n.unwrap_or_else(|| ProblemSpec::default_n(id)))
            .with_seed(self.seed)
            .with_m(self.m);
        if let Some(a) = self.a {
            spec = spec.with_a(a);
        }
        if let Some(b) = self.b {
            spec = spec.with_b(b);
        }
        if let Some(eps) = self.eps {
            spec = spec.with_eps(eps);
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// classic, extended, downdating or trummer.
    #[arg(long, env = "SGKO_SOLVER")]
    solver: String,
    /// Timed repeats after one discarded warm-up run.
    #[arg(long, env = "SGKO_REPEATS", default_value_t = 5)]
    repeats: usize,
    /// Output CSV path, `-` for stdout.
    #[arg(long, env = "SGKO_OUT")]
    out: PathBuf,
}

#[derive(Args)]
struct InvertArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Output CSV path, `-` for stdout.
    #[arg(long, env = "SGKO_OUT")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Output CSV path for the solve records, `-` for stdout.
    #[arg(long, env = "SGKO_OUT")]
    out: PathBuf,
    /// Output CSV path for the inversion records; defaults to the solve
    /// path with `_invert` appended to the file stem.
    #[arg(long, env = "SGKO_INVERT_OUT")]
    invert_out: Option<PathBuf>,
    /// Largest size in the grids; fixed-size problems are capped to it.
    #[arg(long, env = "SGKO_MAX_N", default_value_t = 2048)]
    max_n: usize,
    #[arg(long, env = "SGKO_REPEATS", default_value_t = 5)]
    repeats: usize,
    /// Run independent problem instances on separate threads.
    #[arg(long, env = "SGKO_PARALLEL_PROBLEMS")]
    parallel_problems: bool,
}

#[derive(Serialize)]
struct SolveRow {
    problem: &'static str,
    n: usize,
    solver: &'static str,
    seconds: f64,
    fwd_err: f64,
    residual: f64,
    apost_err: Option<f64>,
    flops: u64,
    workspace: usize,
}

impl From<&BenchRecord> for SolveRow {
    fn from(r: &BenchRecord) -> Self {
        Self {
            problem: r.problem.name(),
            n: r.n,
            solver: r.solver.name(),
            seconds: r.seconds,
            fwd_err: r.fwd_err,
            residual: r.residual,
            apost_err: r.apost_err,
            flops: r.flops,
            workspace: r.workspace,
        }
    }
}

#[derive(Serialize)]
struct InvertRow {
    problem: &'static str,
    n: usize,
    eps: f64,
    seconds: f64,
    e1: f64,
    e2: f64,
    e3: f64,
    flops: u64,
    workspace: usize,
}

impl From<&InvertRecord> for InvertRow {
    fn from(r: &InvertRecord) -> Self {
        Self {
            problem: r.problem.name(),
            n: r.n,
            eps: r.eps,
            seconds: r.seconds,
            e1: r.e1,
            e2: r.e2,
            e3: r.e3,
            flops: r.flops,
            workspace: r.workspace,
        }
    }
}

/// A failure reported on stderr as `error kind=<id> message="<text>"`.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            kind: "io",
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self {
            kind: "io",
            message: e.to_string(),
        }
    }
}

fn writer(path: &Path) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    let sink: Box<dyn Write> = if path.as_os_str() == "-" {
        Box::new(io::stdout())
    } else {
        Box::new(File::create(path)?)
    };
    Ok(csv::Writer::from_writer(sink))
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), Failure> {
    let mut w = writer(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn solve(args: &SolveArgs) -> Result<(), Failure> {
    let spec = args.problem.spec()?;
    let solver: Solver = args.solver.parse()?;
    let record = run_bench(&spec, solver, args.repeats);
    write_rows(&args.out, &[SolveRow::from(&record)])?;
    match record.error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn invert(args: &InvertArgs) -> Result<(), Failure> {
    let spec = args.problem.spec()?;
    let record = run_invert_bench(&spec)?;
    write_rows(&args.out, &[InvertRow::from(&record)])
}

/// Runs `f` on every item, on one thread per available core when
/// `parallel` is set, and keeps the input order.
fn map_items<T: Sync, R: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if !parallel || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(items.len());
    let chunk = items.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

fn sizes(max_n: usize) -> Vec<usize> {
    (7..=16).map(|p| 1usize << p).filter(|&n| n <= max_n).collect()
}

fn solve_grid(max_n: usize) -> Vec<(ProblemSpec, Solver)> {
    let fixed = 512.min(max_n);
    let mut specs = Vec::new();
    for id in [ProblemId::P1, ProblemId::P2] {
        specs.extend(sizes(max_n).into_iter().map(|n| ProblemSpec::new(id, n)));
    }
    for a in [0.85, 0.87, 0.90, 0.91, 0.92, 0.93, 0.94] {
        specs.push(ProblemSpec::new(ProblemId::P3, fixed).with_a(a));
    }
    for seed in 1..=5 {
        specs.push(ProblemSpec::new(ProblemId::P4, 128.min(max_n)).with_seed(seed));
    }
    specs
        .into_iter()
        .flat_map(|s| Solver::CAUCHY.into_iter().map(move |v| (s, v)))
        .collect()
}

fn invert_grid(max_n: usize) -> Vec<ProblemSpec> {
    let mut specs: Vec<_> = sizes(max_n).into_iter().map(|n| ProblemSpec::new(ProblemId::T1, n)).collect();
    for eps in [1e-3, 1e-6, 1e-9, 1e-12, 1e-15] {
        specs.push(ProblemSpec::new(ProblemId::T2, 512.min(max_n)).with_eps(eps));
    }
    specs
}

fn invert_path(args: &SweepArgs) -> PathBuf {
    if let Some(p) = &args.invert_out {
        return p.clone();
    }
    if args.out.as_os_str() == "-" {
        return PathBuf::from("-");
    }
    let stem = args.out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = args.out.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    args.out.with_file_name(format!("{stem}_invert{ext}"))
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    if args.max_n < 1 {
        return Err(Error::InvalidProblem("max-n must be positive".into()).into());
    }
    let solves = map_items(&solve_grid(args.max_n), args.parallel_problems, |(spec, solver)| {
        run_bench(spec, *solver, args.repeats)
    });
    write_rows(&args.out, &solves.iter().map(SolveRow::from).collect::<Vec<_>>())?;

    let inverts = map_items(&invert_grid(args.max_n), args.parallel_problems, run_invert_bench);
    let mut rows = Vec::new();
    for r in &inverts {
        match r {
            Ok(rec) => rows.push(InvertRow::from(rec)),
            Err(e) => eprintln!("warning kind={} message={:?}", e.kind(), e.to_string()),
        }
    }
    write_rows(&invert_path(args), &rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Invert(a) => invert(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error kind={} message={:?}", f.kind, f.message);
            ExitCode::FAILURE
        }
    }
}
