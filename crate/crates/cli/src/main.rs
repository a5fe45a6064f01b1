use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;

use ist_forge::build::Algo;
use ist_forge::connectivity::{vertex_connectivity, CONNECTIVITY_ORACLE_SOFT_LIMIT};
use ist_forge::edge_list::{read_edge_list, write_edge_list, write_edge_list_to};
use ist_forge::generators::{gen_gnp, gen_random_regular};
use ist_forge::harness::{auto_algo, run_experiment, success_rate, ExperimentConfig};
use ist_forge::ist::{verify_independent, SpanningTreeFamily};
use ist_forge::pseudo::{spectral_profile, PseudoParams};
use ist_forge::sparse::SparseParams;
use ist_forge::{Graph, SeededRng};

const EXIT_USAGE: u8 = 1;
const EXIT_BUILD: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "ist-forge", version, about = "Build and check independent spanning trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph as an edge list.
    Gen(GenArgs),
    /// Build k independent spanning trees rooted at a vertex.
    Build(BuildArgs),
    /// Check a tree family against a graph.
    Verify(VerifyArgs),
    /// Run a Monte-Carlo sweep described by a JSON config.
    Experiment(ExperimentArgs),
    /// Print n, d, lambda and d/lambda.
    Spectrum(SpectrumArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    Gnp,
    Regular,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Dense,
    Sparse,
    Pseudo,
    Auto,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    model: GenModel,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, env = "IST_FORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compute the exact vertex connectivity.
    #[arg(long)]
    connectivity: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long, value_enum, default_value = "auto")]
    algo: AlgoArg,
    /// Number of trees; defaults to the minimum degree.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, env = "IST_FORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Sparse builder parameters as JSON, or `@file`.
    #[arg(long)]
    sparse_params: Option<String>,
    /// Pseudorandom builder parameters as JSON, or `@file`.
    #[arg(long)]
    pseudo_params: Option<String>,
    /// Verify the assembled family before writing it.
    #[arg(long)]
    verify: bool,
    /// Output file for the family JSON; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    trees: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config file.
    config: PathBuf,
    /// Overrides the config's output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's worker count.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    graph: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn io(message: impl ToString) -> Self {
        Self { code: EXIT_IO, message: message.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Spectrum(a) => cmd_spectrum(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    read_edge_list(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn parse_json_arg<T: serde::de::DeserializeOwned + Default>(
    arg: Option<&str>,
) -> Result<T, Failure> {
    let Some(arg) = arg else {
        return Ok(T::default());
    };
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("bad parameter JSON: {e}")))
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let mut rng = SeededRng::new(a.seed);
    let generated = match a.model {
        GenModel::Gnp => {
            let p = a.p.ok_or_else(|| Failure::usage("--model gnp needs --p"))?;
            gen_gnp(a.n, p, &mut rng)
        }
        GenModel::Regular => {
            let d = a.d.ok_or_else(|| Failure::usage("--model regular needs --d"))?;
            gen_random_regular(a.n, d, &mut rng)
        }
    };
    let g = generated.map_err(|e| Failure::usage(e.to_string()))?;
    match &a.out {
        Some(path) => write_edge_list(&g, path).map_err(Failure::io)?,
        None => write_edge_list_to(&g, std::io::stdout().lock()).map_err(Failure::io)?,
    }
    let summary = format!(
        "n={} m={} min_degree={} max_degree={}",
        g.n(),
        g.m(),
        g.min_degree(),
        g.max_degree()
    );
    // Keep stdout clean when the edge list goes there.
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if a.connectivity {
        if g.n() > CONNECTIVITY_ORACLE_SOFT_LIMIT {
            warn!("exact connectivity on {} vertices may take a long time", g.n());
        }
        let line = format!("connectivity={}", vertex_connectivity(&g));
        if a.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn cmd_build(a: BuildArgs) -> CmdResult {
    let g = load_graph(&a.graph)?;
    if a.root >= g.n() {
        return Err(Failure::usage(format!("root {} out of range (n = {})", a.root, g.n())));
    }
    let sparse: SparseParams = parse_json_arg(a.sparse_params.as_deref())?;
    let pseudo: PseudoParams = parse_json_arg(a.pseudo_params.as_deref())?;
    let algo = match a.algo {
        AlgoArg::Dense => Algo::Dense,
        AlgoArg::Sparse => Algo::Sparse,
        AlgoArg::Pseudo => Algo::Pseudo,
        AlgoArg::Auto => auto_algo(&g),
    };
    let k = a.k.unwrap_or_else(|| g.min_degree());
    let mut rng = SeededRng::new(a.seed);
    let outcome = match algo.build(&g, a.root, k, &sparse, &pseudo, &mut rng) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("fail_stage={}", e.stage());
            return Err(Failure { code: EXIT_BUILD, message: format!("{algo}: {e}") });
        }
    };
    for d in &outcome.diagnostics {
        log::info!("{d}");
    }
    let fam = outcome.assemble(&g).map_err(|e| Failure {
        code: EXIT_BUILD,
        message: format!("assembly failed: {e}"),
    })?;
    if a.verify {
        let report = verify_independent(&g, &fam);
        if let Some(v) = report.violation {
            return Err(Failure { code: EXIT_VERIFY, message: format!("verification failed: {v}") });
        }
    }
    match &a.out {
        Some(path) => fam.write(path).map_err(Failure::io)?,
        None => println!("{}", fam.to_json()),
    }
    eprintln!("algo={algo} root={} k={} verified={}", a.root, fam.len(), a.verify);
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let g = load_graph(&a.graph)?;
    let fam = SpanningTreeFamily::read(&a.trees)
        .map_err(|e| Failure::io(format!("{}: {e}", a.trees.display())))?;
    if fam.root >= g.n() {
        return Err(Failure::io(format!("root {} out of range (n = {})", fam.root, g.n())));
    }
    if let Some((i, p)) = fam.parents.iter().enumerate().find(|(_, p)| p.len() != g.n()) {
        return Err(Failure::io(format!(
            "tree {i} has {} entries, graph has {} vertices",
            p.len(),
            g.n()
        )));
    }
    let report = verify_independent(&g, &fam);
    match report.violation {
        None => {
            println!("PASS: {} independent spanning trees rooted at {}", report.trees, fam.root);
            Ok(())
        }
        Some(v) => {
            println!("FAIL: {v}");
            Err(Failure { code: EXIT_VERIFY, message: "family is not independent".into() })
        }
    }
}

fn cmd_experiment(a: ExperimentArgs) -> CmdResult {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Failure::io(format!("{}: {e}", a.config.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(out) = a.out {
        cfg.output = Some(out);
    }
    if let Some(w) = a.workers {
        cfg.workers = w;
    }
    if cfg.output.is_none() {
        return Err(Failure::usage("no output path in config or --out"));
    }
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let records = run_experiment(&cfg).map_err(Failure::io)?;
    let mut cells: BTreeMap<(usize, u64), Vec<_>> = BTreeMap::new();
    for r in &records {
        cells.entry((r.n, r.p_or_d.to_bits())).or_default().push(r.clone());
    }
    let mut out = std::io::stdout().lock();
    for ((n, bits), rs) in &cells {
        let _ = writeln!(
            out,
            "n={n} p_or_d={} trials={} success_rate={:.3}",
            f64::from_bits(*bits),
            rs.len(),
            success_rate(rs)
        );
    }
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs) -> CmdResult {
    let g = load_graph(&a.graph)?;
    let s = spectral_profile(&g);
    if !s.regular {
        warn!("graph is not regular; d is the average degree");
    }
    println!("n={} d={} lambda={:.6} ratio={:.6}", s.n, s.d, s.lambda, s.ratio);
    Ok(())
}
