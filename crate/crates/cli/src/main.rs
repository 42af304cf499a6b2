//! Command-line front end: `layout` renders one graph, `bench` sweeps
//! init/solver grids over seed sets, `fetch` pulls matrices from the
//! SuiteSparse collection into the local cache.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{ArgGroup, Args, Parser, Subcommand};

use hexfr::energy::{default_k, ForceParams, DEFAULT_EPS_RATIO};
use hexfr::fetch::{fetch_suitesparse, FetchConfig};
use hexfr::graph::Graph;
use hexfr::render::{layout_svg, trace_csv};
use hexfr::solve::{pipeline, InitMethod, PipelineConfig, SolverKind, Trace};
use hexfr::{parse_edge_list, parse_generator_spec, parse_matrix_market};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "hexfr", version, about = "Force-directed graph layout with lattice initial placement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lay out one graph and write an SVG drawing plus an energy trace CSV.
    Layout(LayoutArgs),
    /// Sweep (graph, init, solver) cells over seeds and emit a summary CSV.
    Bench(BenchArgs),
    /// Download matrices into the cache and print their stats.
    Fetch(FetchArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["gen", "input", "suitesparse"])))]
struct LayoutArgs {
    /// Generator spec: cycle:N, btree:DEPTH, or grouped:N,G,E,W_IN,W_OUT[,SEED].
    #[arg(long)]
    gen: Option<String>,
    /// Input file: Matrix Market (.mtx) or whitespace edge list.
    #[arg(long)]
    input: Option<PathBuf>,
    /// SuiteSparse matrix as GROUP/NAME, e.g. HB/jagmesh1.
    #[arg(long)]
    suitesparse: Option<String>,

    #[command(flatten)]
    run: RunFlags,

    /// Seed for the initial placement.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// SVG output path.
    #[arg(long, default_value = "layout.svg")]
    svg: PathBuf,
    /// Trace CSV output path.
    #[arg(long, default_value = "trace.csv")]
    trace: PathBuf,
    /// Directory receiving layout.svg and trace.csv (overrides both paths).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the elapsed_ms column so identical runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Clone)]
struct RunFlags {
    /// Initial placement method.
    #[arg(long, value_parser = parse_init, default_value = "random")]
    init: InitMethod,
    /// Final solver.
    #[arg(long, value_parser = parse_solver, default_value = "lbfgs")]
    solver: SolverKind,
    /// Solver iterations (default 50 for random starts, 45 otherwise).
    #[arg(long)]
    iters: Option<usize>,
    /// Spring constant (default 1/sqrt(n)).
    #[arg(long)]
    k: Option<f64>,
    /// Repulsion guard length (default 0.01 k; 0 disables the guard).
    #[arg(long)]
    eps_r: Option<f64>,
    /// Initial noise temperature of the lattice placement.
    #[arg(long, default_value_t = 1.5)]
    t0: f64,
    /// Step temperature of the force simulation.
    #[arg(long, default_value_t = 0.1)]
    fr_t0: f64,
    /// Lattice placement iterations (default 2 n^3 / m, capped).
    #[arg(long)]
    cn_iters: Option<usize>,
    /// Convergence tolerance (default 1e-6 k).
    #[arg(long)]
    tol: Option<f64>,
    /// Record energy every this many iterations.
    #[arg(long, default_value_t = 1)]
    trace_every: usize,
    /// Cache directory for SuiteSparse downloads (default $HEXFR_CACHE_DIR).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Generator specs (repeatable).
    #[arg(long = "gen")]
    gens: Vec<String>,
    /// Input files (repeatable).
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
    /// SuiteSparse matrices as GROUP/NAME (repeatable).
    #[arg(long = "suitesparse")]
    suitesparse: Vec<String>,

    /// Comma-separated init methods.
    #[arg(long, default_value = "random,cn")]
    inits: String,
    /// Comma-separated solvers.
    #[arg(long, default_value = "fr,lbfgs")]
    solvers: String,
    /// Seeds: "a-b" range, comma list, or single value.
    #[arg(long, default_value = "1-10")]
    seeds: String,

    #[command(flatten)]
    run: RunFlags,

    /// Summary CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Blank the wall-time column for deterministic output.
    #[arg(long)]
    no_timing: bool,
    /// Worker threads for independent cells (default: available cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct FetchArgs {
    /// Matrices as GROUP/NAME, e.g. HB/jagmesh1 HB/dwt_1005.
    #[arg(required = true)]
    names: Vec<String>,
    /// Cache directory (default $HEXFR_CACHE_DIR).
    #[arg(long)]
    cache: Option<PathBuf>,
}

fn parse_init(s: &str) -> Result<InitMethod, String> {
    match s {
        "random" => Ok(InitMethod::Random),
        "sa" => Ok(InitMethod::Sa),
        "cn" => Ok(InitMethod::Cn),
        other => Err(format!("unknown init '{other}' (expected random, sa, or cn)")),
    }
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    match s {
        "fr" => Ok(SolverKind::Fr),
        "lbfgs" => Ok(SolverKind::Lbfgs),
        other => Err(format!("unknown solver '{other}' (expected fr or lbfgs)")),
    }
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
    fn solver(message: impl Into<String>) -> Self {
        CliError { code: EXIT_SOLVER, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Layout(args) => cmd_layout(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Fetch(args) => cmd_fetch(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn fetch_config(cache: &Option<PathBuf>) -> FetchConfig {
    match cache {
        Some(dir) => FetchConfig::with_cache_dir(dir),
        None => FetchConfig::from_env(),
    }
}

fn load_file(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let graph = if text.trim_start().starts_with("%%MatrixMarket") {
        parse_matrix_market(&text)
    } else {
        parse_edge_list(&text)
    };
    graph.map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_suitesparse(name: &str, cache: &Option<PathBuf>) -> Result<Graph, CliError> {
    let (group, matrix) = name
        .split_once('/')
        .ok_or_else(|| CliError::usage(format!("'{name}' is not of the form GROUP/NAME")))?;
    fetch_suitesparse(group, matrix, &fetch_config(cache))
        .map_err(|e| CliError::input(format!("{name}: {e}")))
}

fn load_source(
    gen: &Option<String>,
    input: &Option<PathBuf>,
    suitesparse: &Option<String>,
    cache: &Option<PathBuf>,
) -> Result<(String, Graph), CliError> {
    if let Some(spec) = gen {
        let g = parse_generator_spec(spec).map_err(|e| CliError::usage(e.to_string()))?;
        return Ok((spec.clone(), g));
    }
    if let Some(path) = input {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        return Ok((name.unwrap_or_else(|| path.display().to_string()), load_file(path)?));
    }
    if let Some(name) = suitesparse {
        return Ok((name.clone(), load_suitesparse(name, cache)?));
    }
    Err(CliError::usage("one of --gen, --input, --suitesparse is required"))
}

fn pipeline_config(run: &RunFlags, n: usize) -> Result<PipelineConfig, CliError> {
    let k = match run.k {
        Some(k) if k > 0.0 => k,
        Some(k) => return Err(CliError::usage(format!("--k must be positive, got {k}"))),
        None => default_k(n),
    };
    let eps_r = match run.eps_r {
        Some(e) if e >= 0.0 => e,
        Some(e) => return Err(CliError::usage(format!("--eps-r must be non-negative, got {e}"))),
        None => DEFAULT_EPS_RATIO * k,
    };
    if run.trace_every == 0 {
        return Err(CliError::usage("--trace-every must be at least 1"));
    }
    let mut cfg = PipelineConfig {
        force: Some(ForceParams { k, eps_r }),
        solver_iters: run.iters,
        fr_t0: run.fr_t0,
        tol: run.tol,
        trace_every: run.trace_every,
        ..PipelineConfig::default()
    };
    cfg.cn.t0 = run.t0;
    cfg.cn.n_iter = run.cn_iters;
    cfg.sa.n_iter = run.cn_iters;
    Ok(cfg)
}

fn cmd_layout(args: LayoutArgs) -> Result<(), CliError> {
    let (name, graph) =
        load_source(&args.gen, &args.input, &args.suitesparse, &args.run.cache)?;
    let cfg = pipeline_config(&args.run, graph.n())?;

    let traces = pipeline(&graph, args.run.init, args.run.solver, &[args.seed], &cfg)
        .map_err(|e| CliError::solver(e.to_string()))?;
    let trace = &traces[0];

    let (svg_path, csv_path) = match &args.out {
        Some(dir) => (dir.join("layout.svg"), dir.join("trace.csv")),
        None => (args.svg.clone(), args.trace.clone()),
    };
    write_output(&svg_path, &layout_svg(&graph, &trace.layout))?;
    write_output(&csv_path, &trace_csv(trace, !args.no_timing))?;

    println!(
        "{name}: n={} |E|={} {}-{} f0={:.6} f={:.6} ({})",
        graph.n(),
        graph.edge_count(),
        args.run.init.name(),
        args.run.solver.name(),
        trace.initial_f(),
        trace.final_f(),
        trace.termination,
    );
    Ok(())
}

fn write_output(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::input(format!("{}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, content).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn parse_seed_spec(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::usage(format!("bad seed spec '{spec}' (use N, a,b,c, or a-b)"));
    let mut seeds = Vec::new();
    for part in spec.split(',') {
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            seeds.extend(lo..=hi);
        } else {
            seeds.push(part.trim().parse().map_err(|_| bad())?);
        }
    }
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

struct CellResult {
    graph: String,
    init: InitMethod,
    solver: SolverKind,
    seeds: usize,
    stats: Result<CellStats, String>,
}

struct CellStats {
    mean_f: f64,
    min_f: f64,
    max_f: f64,
    mean_ms: f64,
}

fn summarize(traces: &[Trace]) -> CellStats {
    let finals: Vec<f64> = traces.iter().map(|t| t.final_f()).collect();
    let times: Vec<f64> = traces
        .iter()
        .map(|t| t.records.last().map(|r| r.elapsed_ms).unwrap_or(0.0))
        .collect();
    CellStats {
        mean_f: finals.iter().sum::<f64>() / finals.len() as f64,
        min_f: finals.iter().copied().fold(f64::INFINITY, f64::min),
        max_f: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_ms: times.iter().sum::<f64>() / times.len() as f64,
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    for spec in &args.gens {
        let g = parse_generator_spec(spec).map_err(|e| CliError::usage(e.to_string()))?;
        graphs.push((spec.clone(), g));
    }
    for path in &args.inputs {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        graphs.push((name, load_file(path)?));
    }
    for name in &args.suitesparse {
        graphs.push((name.clone(), load_suitesparse(name, &args.run.cache)?));
    }
    if graphs.is_empty() {
        return Err(CliError::usage("bench needs at least one graph source"));
    }

    let inits: Vec<InitMethod> = args
        .inits
        .split(',')
        .map(|s| parse_init(s.trim()).map_err(CliError::usage))
        .collect::<Result<_, _>>()?;
    let solvers: Vec<SolverKind> = args
        .solvers
        .split(',')
        .map(|s| parse_solver(s.trim()).map_err(CliError::usage))
        .collect::<Result<_, _>>()?;
    let seeds = parse_seed_spec(&args.seeds)?;

    // Canonical cell order: graph, then init, then solver.
    let mut cells = Vec::new();
    for (name, g) in &graphs {
        let cfg = pipeline_config(&args.run, g.n())?;
        for &init in &inits {
            for &solver in &solvers {
                cells.push((name.clone(), g, cfg.clone(), init, solver));
            }
        }
    }

    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CellResult>>> =
        Mutex::new((0..cells.len()).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..jobs.min(cells.len()) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= cells.len() {
                    break;
                }
                let (name, g, cfg, init, solver) = &cells[idx];
                let stats = pipeline(g, *init, *solver, &seeds, cfg)
                    .map(|traces| summarize(&traces))
                    .map_err(|e| e.to_string());
                let result = CellResult {
                    graph: name.clone(),
                    init: *init,
                    solver: *solver,
                    seeds: seeds.len(),
                    stats,
                };
                results.lock().unwrap()[idx] = Some(result);
            });
        }
    });
    let results: Vec<CellResult> =
        results.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect();

    let mut csv = String::from("graph,init,solver,seeds,mean_f,min_f,max_f,mean_ms,f_cn_minus_random,status\n");
    for r in &results {
        let diff = if r.init == InitMethod::Cn {
            results
                .iter()
                .find(|other| {
                    other.graph == r.graph
                        && other.solver == r.solver
                        && other.init == InitMethod::Random
                })
                .and_then(|other| match (&r.stats, &other.stats) {
                    (Ok(a), Ok(b)) => Some(a.mean_f - b.mean_f),
                    _ => None,
                })
        } else {
            None
        };
        let diff_col = diff.map(|d| d.to_string()).unwrap_or_default();
        match &r.stats {
            Ok(s) => {
                let ms = if args.no_timing { String::new() } else { format!("{:.3}", s.mean_ms) };
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},ok\n",
                    r.graph,
                    r.init.name(),
                    r.solver.name(),
                    r.seeds,
                    s.mean_f,
                    s.min_f,
                    s.max_f,
                    ms,
                    diff_col,
                ));
            }
            Err(message) => {
                csv.push_str(&format!(
                    "{},{},{},{},,,,,,{}\n",
                    r.graph,
                    r.init.name(),
                    r.solver.name(),
                    r.seeds,
                    message.replace(',', ";"),
                ));
            }
        }
    }

    match &args.out {
        Some(path) => write_output(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_fetch(args: FetchArgs) -> Result<(), CliError> {
    let cfg = fetch_config(&args.cache);
    let mut failures = 0;
    for name in &args.names {
        let Some((group, matrix)) = name.split_once('/') else {
            eprintln!("{name}: expected GROUP/NAME");
            failures += 1;
            continue;
        };
        match fetch_suitesparse(group, matrix, &cfg) {
            Ok(g) => {
                let n = g.n() as f64;
                let sparsity = 100.0 * 2.0 * g.edge_count() as f64 / (n * (n - 1.0));
                println!(
                    "{name}: n={} |E|={} sparsity={sparsity:.3}%",
                    g.n(),
                    g.edge_count()
                );
            }
            Err(e) => {
                eprintln!("{name}: {e}");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        return Err(CliError::input(format!("{failures} fetch(es) failed")));
    }
    Ok(())
}
