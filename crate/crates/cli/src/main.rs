use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use symmatch::EquivalenceMode;
use symmatch_cli::{parse_modes, run, run_suite, CliError, Format, RunConfig, SuiteConfig, DEFAULT_STRUCTURE_CAP};

/// Enumerate and count subgraph isomorphisms, compressed into classes of
/// interchangeable solutions.
#[derive(Debug, Parser)]
#[command(name = "symmatch", version)]
struct Args {
    /// Template graph file.
    #[arg(long, required_unless_present = "suite")]
    template: Option<PathBuf>,
    /// World graph file.
    #[arg(long, required_unless_present = "suite")]
    world: Option<PathBuf>,
    /// Input format: lad or multiplex.
    #[arg(long, default_value = "lad")]
    format: String,
    /// Read LAD adjacency lists as arcs instead of undirected edges.
    #[arg(long)]
    directed: bool,
    /// Equivalence mode: ne, te, we, tewe, ce, fe or nc.
    #[arg(long, default_value = "fe")]
    mode: String,
    /// Time limit per run, in seconds.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    /// Write one JSON line per solution class to this file.
    #[arg(long)]
    solutions: Option<PathBuf>,
    /// Add the structural equivalence classes of both graphs to the report.
    #[arg(long)]
    dump_classes: bool,
    /// Write the candidate structure as DOT to this file.
    #[arg(long)]
    dump_candidate_structure: Option<PathBuf>,
    /// Largest candidate structure (in pair-nodes) that is written out.
    #[arg(long, default_value_t = DEFAULT_STRUCTURE_CAP)]
    structure_cap: usize,
    /// Write the compressed subgraph of the first solution class as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,

    /// Directory holding a benchmark suite.
    #[arg(long, requires_all = ["manifest", "out"])]
    suite: Option<PathBuf>,
    /// Suite manifest: `name template world [lad|multiplex] [directed|undirected]` per line.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// CSV file for suite results.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Modes to run in suite mode, comma separated, or `all`.
    #[arg(long, default_value = "all")]
    modes: String,
    /// Suite worker threads (default: one per processor).
    #[arg(long)]
    jobs: Option<usize>,
}

fn main_inner(args: Args) -> Result<(), CliError> {
    if let Some(dir) = args.suite {
        let cfg = SuiteConfig {
            dir,
            manifest: args.manifest.expect("required by clap"),
            out: args.out.expect("required by clap"),
            modes: parse_modes(&args.modes)?,
            timeout_secs: args.timeout,
            jobs: args.jobs,
        };
        let rows = run_suite(&cfg)?;
        eprintln!("{} rows written to {}", rows.len(), cfg.out.display());
        return Ok(());
    }
    let mode: EquivalenceMode =
        args.mode.parse().map_err(|e: symmatch::search::UnknownMode| CliError::Config(e.to_string()))?;
    let mut cfg = RunConfig::new(args.template.expect("required by clap"), args.world.expect("required by clap"), mode);
    cfg.format = args.format.parse::<Format>()?;
    cfg.directed = args.directed;
    cfg.timeout_secs = args.timeout;
    cfg.solutions = args.solutions;
    cfg.dump_classes = args.dump_classes;
    cfg.dump_candidate_structure = args.dump_candidate_structure;
    cfg.structure_cap = args.structure_cap;
    cfg.dot = args.dot;
    let report = run(&cfg)?;
    println!("{report}");
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
