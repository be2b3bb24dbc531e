//! `curvkit`: curvature pipelines over edge-list and TUDataset graphs.
//!
//! Exit codes: 0 success, 1 internal failure, 2 user/validation error,
//! 3 verification-suite failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvkit_core::analysis;
use curvkit_core::bench::{bench_compare, records_csv};
use curvkit_core::generators::{generate, generate_connected, GenSpec, Model};
use curvkit_core::graph;
use curvkit_core::ollivier::{self, Metric};
use curvkit_core::propagation;
use curvkit_core::resistance::{self, SolveMode};
use curvkit_core::verify;
use curvkit_core::Graph;

#[derive(Parser)]
#[command(name = "curvkit", version, about = "Effective-resistance and Ollivier-Ricci graph curvature")]
struct Cli {
    /// Worker thread cap (default: all cores, or CURVKIT_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Effective-resistance curvature of one graph, as JSON.
    Resistance(ResistanceArgs),
    /// Ollivier-Ricci curvature of one graph, as JSON.
    Ollivier(OllivierArgs),
    /// Generate a seeded random graph and write its edge list.
    Generate(GenerateArgs),
    /// Curvature distributions, density table and pattern checks (CSV).
    Analyze(AnalyzeArgs),
    /// Wall-clock comparison of the two curvature methods (CSV).
    Bench(BenchArgs),
    /// Curvature-based edge reweighting of an edge list.
    Reweight(ReweightArgs),
    /// Run the oracle/property suite and emit a pass/fail JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ResistanceArgs {
    /// Input edge-list file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output JSON file (stdout if omitted).
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Laplacian perturbation (default: 1e-8 x mean weighted degree).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
}

#[derive(Args)]
struct OllivierArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: Option<PathBuf>,
    /// Laziness parameter in [0, 1).
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Unit)]
    metric: MetricArg,
}

#[derive(Args)]
struct GenerateArgs {
    /// Model: ring | ws | nw | kleinberg-ring | sbm | random-regular | complete | path.
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: Option<usize>,
    /// Ring neighbors (even) for ring-based models.
    #[arg(long)]
    k: Option<usize>,
    /// Rewiring (ws) or shortcut (nw) probability.
    #[arg(long)]
    p: Option<f64>,
    /// Long-range decay exponent for kleinberg-ring.
    #[arg(long)]
    exponent: Option<f64>,
    /// SBM block sizes, comma separated (e.g. 500,500).
    #[arg(long)]
    sizes: Option<String>,
    /// SBM inter-block probability (intra is --p).
    #[arg(long)]
    q: Option<f64>,
    /// Degree for random-regular.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Retry derived seeds until the sample is connected.
    #[arg(long)]
    require_connected: bool,
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge-list file or TUDataset directory.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 30)]
    bins: usize,
    /// Which curvature fills distribution.csv and density_ratio.csv.
    #[arg(long, value_enum, default_value_t = CurvatureArg::Resistance)]
    curvature: CurvatureArg,
    /// Girvan-Newman community count (default: modularity peak).
    #[arg(long)]
    target_communities: Option<usize>,
    /// Cap on the number of graphs analyzed from a dataset directory.
    #[arg(long)]
    max_graphs: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated models: nw | rr | ws | ring | complete.
    #[arg(long, default_value = "nw")]
    models: String,
    /// Comma-separated node counts.
    #[arg(long, default_value = "250,500,1000")]
    n: String,
    /// Comma-separated degrees.
    #[arg(long, default_value = "10")]
    deg: String,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shortcut probability for nw/ws.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Output CSV (stdout if omitted).
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReweightArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// Intervention strength in [0, 1].
    #[arg(long)]
    eta: f64,
    #[arg(long, value_enum, default_value_t = CurvatureArg::Resistance)]
    curvature: CurvatureArg,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Report JSON file (stdout if omitted).
    #[arg(long = "out")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Full,
    PerEdge,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> SolveMode {
        match m {
            ModeArg::Auto => SolveMode::Auto,
            ModeArg::Full => SolveMode::FullMatrix,
            ModeArg::PerEdge => SolveMode::PerEdge,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Unit,
    Weight,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Unit => Metric::Unit,
            MetricArg::Weight => Metric::Weight,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CurvatureArg {
    Resistance,
    Ollivier,
}

enum Failure {
    /// Bad input or flags: exit 2.
    User(String),
    /// Environment or numerical breakdown: exit 1.
    Internal(String),
    /// Verification suite found a violation: exit 3.
    Verification,
}

impl Failure {
    fn internal(e: impl std::fmt::Display) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<graph::GraphError> for Failure {
    fn from(e: graph::GraphError) -> Self {
        Failure::User(e.to_string())
    }
}

impl From<resistance::ResistanceError> for Failure {
    fn from(e: resistance::ResistanceError) -> Self {
        match e {
            resistance::ResistanceError::Disconnected => Failure::User("graph is disconnected".into()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<ollivier::OllivierError> for Failure {
    fn from(e: ollivier::OllivierError) -> Self {
        match e {
            ollivier::OllivierError::Disconnected => Failure::User("graph is disconnected".into()),
            ollivier::OllivierError::IsolatedNode(_) | ollivier::OllivierError::BadAlpha(_) => {
                Failure::User(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<curvkit_core::generators::GenError> for Failure {
    fn from(e: curvkit_core::generators::GenError) -> Self {
        match e {
            curvkit_core::generators::GenError::InvalidSpec(_) => Failure::User(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("CURVKIT_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        if t == 0 {
            eprintln!("curvkit: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("curvkit: failed to configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(msg)) => {
            eprintln!("curvkit: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("curvkit: internal error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => {
            eprintln!("curvkit: verification suite reported failures");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Resistance(a) => cmd_resistance(a),
        Command::Ollivier(a) => cmd_ollivier(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Reweight(a) => cmd_reweight(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::User(format!("cannot read {}: {e}", path.display())))?;
    Ok(graph::load_edge_list(&text)?)
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, contents)
            .map_err(|e| Failure::internal(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn to_pretty_json(value: &impl serde::Serialize) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(Failure::internal)
}

fn cmd_resistance(a: ResistanceArgs) -> Result<(), Failure> {
    if let Some(eps) = a.epsilon {
        if !(eps > 0.0) {
            return Err(Failure::User(format!("epsilon must be positive, got {eps}")));
        }
    }
    let g = read_graph(&a.input)?;
    let rc = resistance::resistance_curvature(&g, a.epsilon, a.mode.into())?;
    let json = to_pretty_json(&rc.report(&g))?;
    write_output(a.output.as_deref(), &json)
}

fn cmd_ollivier(a: OllivierArgs) -> Result<(), Failure> {
    let g = read_graph(&a.input)?;
    let or = ollivier::or_curvature(&g, a.alpha, a.metric.into())?;
    let json = to_pretty_json(&or.report(&g))?;
    write_output(a.output.as_deref(), &json)
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Failure::User(format!("bad block size `{s}`")))
        })
        .collect()
}

fn cmd_generate(a: GenerateArgs) -> Result<(), Failure> {
    let need_n = || a.n.ok_or_else(|| Failure::User("--n is required for this model".into()));
    let need_k = || a.k.ok_or_else(|| Failure::User("--k is required for ring-based models".into()));
    let model = match a.model.as_str() {
        "ring" => Model::Ring { n: need_n()?, k: need_k()? },
        "ws" => Model::Ws { n: need_n()?, k: need_k()?, p: a.p.unwrap_or(0.1) },
        "nw" => Model::Nw { n: need_n()?, k: need_k()?, p: a.p.unwrap_or(0.1) },
        "kleinberg-ring" => Model::KleinbergRing {
            n: need_n()?,
            k: need_k()?,
            exponent: a.exponent.unwrap_or(1.0),
        },
        "sbm" => {
            let sizes = parse_sizes(
                a.sizes
                    .as_deref()
                    .ok_or_else(|| Failure::User("--sizes is required for sbm".into()))?,
            )?;
            Model::Sbm {
                sizes,
                p_intra: a.p.ok_or_else(|| Failure::User("--p is required for sbm".into()))?,
                q_inter: a.q.ok_or_else(|| Failure::User("--q is required for sbm".into()))?,
            }
        }
        "random-regular" => Model::RandomRegular {
            n: need_n()?,
            d: a.d.ok_or_else(|| Failure::User("--d is required for random-regular".into()))?,
        },
        "complete" => Model::Complete { n: need_n()? },
        "path" => Model::Path { n: need_n()? },
        other => return Err(Failure::User(format!("unknown model `{other}`"))),
    };
    let spec = GenSpec::new(model, a.seed);
    let g = if a.require_connected {
        generate_connected(&spec, 50)?
    } else {
        generate(&spec)?
    };
    write_output(Some(&a.output), &graph::serialize_edge_list(&g))
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    if a.bins == 0 {
        return Err(Failure::User("--bins must be at least 1".into()));
    }
    let mut graphs: Vec<Graph> = if a.input.is_dir() {
        graph::load_tu_dataset(&a.input)?
    } else {
        vec![read_graph(&a.input)?]
    };
    if let Some(cap) = a.max_graphs {
        graphs.truncate(cap);
    }
    std::fs::create_dir_all(&a.out_dir)
        .map_err(|e| Failure::internal(format!("cannot create {}: {e}", a.out_dir.display())))?;

    let mut pooled: Vec<f64> = Vec::new();
    let mut density_entries: Vec<(usize, f64, Vec<f64>)> = Vec::new();
    let mut pattern_rows: Vec<(usize, analysis::PatternReport)> = Vec::new();
    let mut skipped_disconnected = 0usize;
    let mut skipped_no_hub = 0usize;

    for (id, g) in graphs.iter().enumerate() {
        if !g.is_connected() || g.edge_count() == 0 {
            skipped_disconnected += 1;
            continue;
        }
        let rc = resistance::resistance_curvature(g, a.epsilon, SolveMode::Auto)?;
        let or = ollivier::or_curvature(g, a.alpha, Metric::Unit)?;
        let selected = match a.curvature {
            CurvatureArg::Resistance => rc.normalized_curvature.clone(),
            CurvatureArg::Ollivier => or.kappa.clone(),
        };
        pooled.extend_from_slice(&selected);
        density_entries.push((id, g.density(), selected));

        let partition = analysis::girvan_newman(g, a.target_communities);
        match analysis::pattern_check(g, &rc.normalized_curvature, &or.kappa, &partition) {
            Ok(report) => pattern_rows.push((id, report)),
            Err(analysis::AnalysisError::NoUniqueHub) => skipped_no_hub += 1,
            Err(e) => return Err(Failure::internal(e)),
        }
    }

    if pooled.len() < 2 {
        return Err(Failure::User(
            "analysis needs at least one connected graph with two or more curvature values".into(),
        ));
    }
    let summary = analysis::summarize_distribution(&pooled, a.bins, None)
        .map_err(Failure::internal)?;
    let refs: Vec<(&Graph, &[f64])> = density_entries
        .iter()
        .map(|(id, _, curv)| (&graphs[*id], curv.as_slice()))
        .collect();
    let table = analysis::positive_ratio_vs_density(&refs);

    let write = |name: &str, contents: String| -> Result<(), Failure> {
        std::fs::write(a.out_dir.join(name), contents)
            .map_err(|e| Failure::internal(format!("cannot write {name}: {e}")))
    };
    write("distribution.csv", analysis::distribution_csv(&summary))?;
    write("patterns.csv", analysis::patterns_csv(&pattern_rows))?;
    write("density_ratio.csv", analysis::density_ratio_csv(&table))?;

    println!(
        "analyzed {} graphs ({} skipped disconnected, {} skipped without a unique hub); curvature mean {:.6}, std {:.6}, positive fraction {:.4}; density/positive-share Spearman {:.4}",
        density_entries.len(),
        skipped_disconnected,
        skipped_no_hub,
        summary.mean,
        summary.std,
        summary.positive_fraction,
        table.spearman
    );
    Ok(())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Failure::User(format!("bad {what} `{s}`")))
        })
        .collect()
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let models: Vec<String> = a.models.split(',').map(|s| s.trim().to_string()).collect();
    let ns: Vec<usize> = parse_list(&a.n, "node count")?;
    let degs: Vec<usize> = parse_list(&a.deg, "degree")?;
    if a.reps == 0 {
        return Err(Failure::User("--reps must be at least 1".into()));
    }
    let mut specs = Vec::new();
    for model in &models {
        for &n in &ns {
            for &deg in &degs {
                let m = match model.as_str() {
                    "nw" => Model::Nw { n, k: deg, p: a.p },
                    "ws" => Model::Ws { n, k: deg, p: a.p },
                    "ring" => Model::Ring { n, k: deg },
                    "rr" | "random-regular" => Model::RandomRegular { n, d: deg },
                    "complete" => Model::Complete { n },
                    other => return Err(Failure::User(format!("unknown bench model `{other}`"))),
                };
                specs.push(GenSpec::new(m, a.seed));
            }
        }
    }
    let outcome = bench_compare(&specs, a.reps);
    for (label, err) in &outcome.failures {
        eprintln!("curvkit: bench skipped {label}: {err}");
    }
    write_output(a.output.as_deref(), &records_csv(&outcome.records))?;
    for s in &outcome.speedups {
        println!(
            "speedup {} n={} deg={} seed={}: {:.2}x",
            s.model, s.n, s.degree, s.seed, s.speedup
        );
    }
    Ok(())
}

fn cmd_reweight(a: ReweightArgs) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&a.eta) {
        return Err(Failure::User(format!("eta must be in [0, 1], got {}", a.eta)));
    }
    let g = read_graph(&a.input)?;
    let curvature = match a.curvature {
        CurvatureArg::Resistance => {
            resistance::resistance_curvature(&g, a.epsilon, SolveMode::Auto)?.normalized_curvature
        }
        CurvatureArg::Ollivier => ollivier::or_curvature(&g, a.alpha, Metric::Unit)?.kappa,
    };
    let reweighted = propagation::pool_reweight(&g, &curvature, a.eta)
        .map_err(|e| Failure::internal(e.to_string()))?;
    write_output(Some(&a.output), &graph::serialize_edge_list(&reweighted))
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let report = verify::run_all();
    let json = to_pretty_json(&report)?;
    write_output(a.output.as_deref(), &json)?;
    for c in &report.checks {
        eprintln!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    if report.all_passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
