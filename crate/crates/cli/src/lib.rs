//! Single-instance runs and benchmark-suite runs for the `symmatch` binary.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use symmatch::candidate::{build_candidate_structure, init_candidates};
use symmatch::reporting::{compress, export_dot, induce_subgraph};
use symmatch::search::apply_filters;
use symmatch::{
    find_equivalence_classes, parse_lad, parse_multiplex_edgelist, solve, BigCount, EquivalenceMode, Graph,
    PartialMatch, Problem, SearchLimits, SearchReport, SearchStatus,
};

pub const DEFAULT_TIMEOUT_SECS: f64 = 600.0;
pub const DEFAULT_STRUCTURE_CAP: usize = 200;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: symmatch::ParseError },
    #[error(transparent)]
    Problem(#[from] symmatch::Error),
    #[error("{0}")]
    Config(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Lad,
    Multiplex,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lad" => Ok(Format::Lad),
            "multiplex" => Ok(Format::Multiplex),
            _ => Err(CliError::Config(format!("unknown format `{s}` (expected lad or multiplex)"))),
        }
    }
}

/// Everything one single-instance run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub template: PathBuf,
    pub world: PathBuf,
    pub format: Format,
    /// LAD input only; multiplex input is always directed.
    pub directed: bool,
    pub mode: EquivalenceMode,
    pub timeout_secs: f64,
    pub solutions: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub dump_classes: bool,
    pub dump_candidate_structure: Option<PathBuf>,
    pub structure_cap: usize,
}

impl RunConfig {
    pub fn new(template: impl Into<PathBuf>, world: impl Into<PathBuf>, mode: EquivalenceMode) -> Self {
        RunConfig {
            template: template.into(),
            world: world.into(),
            format: Format::Lad,
            directed: false,
            mode,
            timeout_secs: DEFAULT_TIMEOUT_SECS,
            solutions: None,
            dot: None,
            dump_classes: false,
            dump_candidate_structure: None,
            structure_cap: DEFAULT_STRUCTURE_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(CliError::Config(format!(
                "timeout must be a positive number of seconds, got {}",
                self.timeout_secs
            )));
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path).map(BufWriter::new).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn io_at(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub fn load_graph(path: &Path, format: Format, directed: bool) -> Result<Graph> {
    let text = read(path)?;
    let parsed = match format {
        Format::Lad => parse_lad(&text, directed),
        Format::Multiplex => parse_multiplex_edgelist(&text),
    };
    parsed.map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

pub fn load_problem(template: &Path, world: &Path, format: Format, directed: bool) -> Result<Problem> {
    let directed = directed || format == Format::Multiplex;
    let t = load_graph(template, format, directed)?;
    let w = load_graph(world, format, directed)?;
    Ok(Problem::new(t, w, directed)?)
}

/// Report object printed by a single run.
pub fn report_json(report: &SearchReport) -> Value {
    report.to_json()
}

/// Runs one instance, writing any requested side outputs, and returns the
/// JSON report.
pub fn run(cfg: &RunConfig) -> Result<Value> {
    cfg.validate()?;
    let problem = load_problem(&cfg.template, &cfg.world, cfg.format, cfg.directed)?;
    let limits = SearchLimits::timeout(Duration::from_secs_f64(cfg.timeout_secs));

    let mut extra = serde_json::Map::new();
    if let Some(path) = &cfg.dump_candidate_structure {
        let mut cs = init_candidates(&problem);
        apply_filters(&problem, &PartialMatch::new(), &mut cs);
        let pairs = cs.pair_count();
        let written = pairs <= cfg.structure_cap;
        if written {
            let dot = build_candidate_structure(&problem, &cs).to_dot();
            fs::write(path, dot).map_err(io_at(path))?;
        }
        extra.insert("candidate_structure".into(), json!({ "pair_nodes": pairs, "written": written }));
    }

    let mut sink = cfg.solutions.as_deref().map(create).transpose()?;
    let mut first = None;
    let mut write_err = None;
    let report = solve(&problem, cfg.mode, limits, |sc| {
        if first.is_none() && cfg.dot.is_some() {
            first = Some(sc.clone());
        }
        if let Some(out) = sink.as_mut() {
            if write_err.is_none() {
                if let Err(e) = writeln!(out, "{}", sc.to_json_line()) {
                    write_err = Some(e);
                }
            }
        }
    });
    if let (Some(e), Some(path)) = (write_err, &cfg.solutions) {
        return Err(io_at(path)(e));
    }
    if let (Some(out), Some(path)) = (sink.as_mut(), &cfg.solutions) {
        out.flush().map_err(io_at(path))?;
    }
    if let Some(path) = &cfg.dot {
        let text = match &first {
            Some(sc) => export_dot(&compress(&induce_subgraph(&problem, sc))),
            None => format!("{} G {{ }}\n", if problem.directed { "digraph" } else { "graph" }),
        };
        fs::write(path, text).map_err(io_at(path))?;
    }

    let mut out = report_json(&report);
    let obj = out.as_object_mut().expect("report is an object");
    if cfg.dump_classes {
        obj.insert(
            "template_classes".into(),
            serde_json::to_value(find_equivalence_classes(&problem.template)).unwrap(),
        );
        obj.insert("world_classes".into(), serde_json::to_value(find_equivalence_classes(&problem.world)).unwrap());
    }
    obj.extend(extra);
    Ok(out)
}

/// One line of a suite manifest: `name template world [lad|multiplex] [directed|undirected]`,
/// paths relative to the suite directory. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub template: PathBuf,
    pub world: PathBuf,
    pub format: Format,
    pub directed: bool,
}

pub fn parse_manifest(text: &str, dir: &Path) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(CliError::Config(format!("manifest line {}: expected `name template world`", i + 1)));
        }
        let mut entry = ManifestEntry {
            name: toks[0].to_string(),
            template: dir.join(toks[1]),
            world: dir.join(toks[2]),
            format: Format::Lad,
            directed: false,
        };
        for t in &toks[3..] {
            match t.to_ascii_lowercase().as_str() {
                "directed" => entry.directed = true,
                "undirected" => entry.directed = false,
                other => {
                    entry.format = other
                        .parse()
                        .map_err(|_| CliError::Config(format!("manifest line {}: unknown option `{t}`", i + 1)))?
                }
            }
        }
        out.push(entry);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub dir: PathBuf,
    pub manifest: PathBuf,
    pub out: PathBuf,
    pub modes: Vec<EquivalenceMode>,
    pub timeout_secs: f64,
    /// Worker threads; `None` uses one per processor.
    pub jobs: Option<usize>,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub instance: String,
    pub mode: EquivalenceMode,
    pub outcome: Result<SearchReport, String>,
}

pub const SUITE_HEADER: [&str; 9] = [
    "instance",
    "mode",
    "representatives",
    "total",
    "wall_time_s",
    "status",
    "compression_rate",
    "enumerated_fraction",
    "error",
];

fn run_entry(entry: &ManifestEntry, modes: &[EquivalenceMode], timeout: Duration) -> Vec<SuiteRow> {
    let row = |mode, outcome| SuiteRow { instance: entry.name.clone(), mode, outcome };
    match load_problem(&entry.template, &entry.world, entry.format, entry.directed) {
        Err(e) => modes.iter().map(|&m| row(m, Err(e.to_string()))).collect(),
        Ok(p) => modes.iter().map(|&m| row(m, Ok(symmatch::count(&p, m, SearchLimits::timeout(timeout))))).collect(),
    }
}

/// Runs every manifest entry in every mode on a worker pool and returns the
/// rows in manifest order.
pub fn run_entries(
    entries: &[ManifestEntry],
    modes: &[EquivalenceMode],
    timeout_secs: f64,
    jobs: Option<usize>,
) -> Result<Vec<SuiteRow>> {
    if !(timeout_secs > 0.0 && timeout_secs.is_finite()) {
        return Err(CliError::Config(format!("timeout must be a positive number of seconds, got {timeout_secs}")));
    }
    let timeout = Duration::from_secs_f64(timeout_secs);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    let rows: Vec<Vec<SuiteRow>> = pool.install(|| entries.par_iter().map(|e| run_entry(e, modes, timeout)).collect());
    Ok(rows.into_iter().flatten().collect())
}

/// Per-mode aggregate: fully enumerated fraction of satisfiable instances
/// and mean compression rate over instances with solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub mode: EquivalenceMode,
    pub representatives: u64,
    pub total: BigCount,
    pub wall_time: Duration,
    pub enumerated_fraction: Option<f64>,
    pub mean_compression_rate: Option<f64>,
}

pub fn aggregate(rows: &[SuiteRow], modes: &[EquivalenceMode]) -> Vec<Aggregate> {
    // an instance is satisfiable when any mode found a solution
    let satisfiable: std::collections::HashSet<&str> = rows
        .iter()
        .filter(|r| matches!(&r.outcome, Ok(rep) if !rep.total_count.is_zero()))
        .map(|r| r.instance.as_str())
        .collect();
    modes
        .iter()
        .map(|&mode| {
            let mine: Vec<&SearchReport> =
                rows.iter().filter(|r| r.mode == mode).filter_map(|r| r.outcome.as_ref().ok()).collect();
            let sat: Vec<&SuiteRow> =
                rows.iter().filter(|r| r.mode == mode && satisfiable.contains(r.instance.as_str())).collect();
            let enumerated =
                sat.iter().filter(|r| matches!(&r.outcome, Ok(rep) if rep.status == SearchStatus::Completed)).count();
            let rates: Vec<f64> = mine.iter().filter_map(|r| r.compression_rate()).collect();
            Aggregate {
                mode,
                representatives: mine.iter().map(|r| r.representative_count).sum(),
                total: mine.iter().map(|r| &r.total_count).sum(),
                wall_time: mine.iter().map(|r| r.wall_time).sum(),
                enumerated_fraction: (!sat.is_empty()).then(|| enumerated as f64 / sat.len() as f64),
                mean_compression_rate: (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64),
            }
        })
        .collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the rows followed by one `ALL` row per mode. An empty suite gives
/// a header-only table.
pub fn write_suite_csv<W: Write>(out: W, rows: &[SuiteRow], modes: &[EquivalenceMode]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUITE_HEADER)?;
    for r in rows {
        let record = match &r.outcome {
            Ok(rep) => [
                r.instance.clone(),
                r.mode.to_string(),
                rep.representative_count.to_string(),
                rep.total_count.to_string(),
                rep.wall_time.as_secs_f64().to_string(),
                rep.status.as_str().to_string(),
                opt(rep.compression_rate()),
                String::new(),
                String::new(),
            ],
            Err(e) => [
                r.instance.clone(),
                r.mode.to_string(),
                String::new(),
                String::new(),
                String::new(),
                "error".into(),
                String::new(),
                String::new(),
                e.clone(),
            ],
        };
        w.write_record(&record)?;
    }
    if !rows.is_empty() {
        for a in aggregate(rows, modes) {
            w.write_record([
                "ALL".to_string(),
                a.mode.to_string(),
                a.representatives.to_string(),
                a.total.to_string(),
                a.wall_time.as_secs_f64().to_string(),
                "aggregate".into(),
                opt(a.mean_compression_rate),
                opt(a.enumerated_fraction),
                String::new(),
            ])?;
        }
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

/// Runs a whole suite and writes its CSV.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<SuiteRow>> {
    let entries = parse_manifest(&read(&cfg.manifest)?, &cfg.dir)?;
    let rows = run_entries(&entries, &cfg.modes, cfg.timeout_secs, cfg.jobs)?;
    write_suite_csv(create(&cfg.out)?, &rows, &cfg.modes)?;
    Ok(rows)
}

/// Comma-separated mode list, e.g. `ne,fe,nc`, or `all`.
pub fn parse_modes(s: &str) -> Result<Vec<EquivalenceMode>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(EquivalenceMode::ALL.to_vec());
    }
    s.split(',').map(|m| m.trim().parse::<EquivalenceMode>().map_err(|e| CliError::Config(e.to_string()))).collect()
}
