//! The `landscape-atlas` command line.
//!
//! Every command writes its result to `--out` (atomically) or stdout. CSV
//! outputs start with `#` metadata lines; JSON outputs carry a `meta` object.
//! Exit status is 0 on success, 2 on a usage error and 1 on a runtime error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus::{self, FeatureRecord, SAMPLES_PER_DIM};
use crate::ela::{compute_features, lhs_sample, normalize_features, SampleSet, FEATURE_NAMES};
use crate::error::Error;
use crate::level::TileGrid;
use crate::mario;
use crate::problem::{resolve, ProblemId, ProblemInstance};
use crate::properties::{
    lofo_cv, majority_lofo, train, LabelTable, Property, PropertyModel, DEFAULT_TREES,
};
use crate::sim::{self, AgentKind};
use crate::similarity::{tsne_embed, TsneConfig};
use crate::walk::{bundle_specs, default_step, diagonal_walk, DirectionMode};

pub const SEED_ENV: &str = "LANDSCAPE_ATLAS_SEED";
const DEFAULT_SEED: u64 = 1;
const TOOL: &str = concat!("landscape-atlas ", env!("CARGO_PKG_VERSION"));

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {msg}"))
}

#[derive(Parser, Debug)]
#[command(
    name = "landscape-atlas",
    version,
    about = "Landscape analysis of level-generation benchmark problems"
)]
struct Cli {
    /// Worker threads for data-parallel steps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every registered problem.
    List(ListArgs),
    /// Evaluate one point.
    Eval(PointArgs),
    /// Print the decoded level of a mario problem.
    Level(PointArgs),
    /// Run an agent through a level.
    Simulate(SimulateArgs),
    /// Diagonal walks through a seeded anchor point.
    Walk(WalkArgs),
    /// Latin hypercube sample with objective values.
    Sample(SampleArgs),
    /// Compute the feature vector of a sample.
    Features(FeaturesArgs),
    /// Train a property classifier on the labelled baseline suite.
    Train(TrainArgs),
    /// Predict properties for feature records.
    Classify(ClassifyArgs),
    /// Leave-one-function-out cross-validation.
    Cv(CvArgs),
    /// Two-dimensional embedding of feature records.
    Embed(EmbedArgs),
}

#[derive(Args, Debug, Clone)]
struct ProblemArgs {
    /// Problem id: m1..m28, a baseline name or shekel-<peaks>.
    #[arg(long)]
    problem: ProblemId,
    #[arg(long, default_value_t = 1)]
    instance: u64,
    #[arg(long, default_value_t = mario::DEFAULT_DIM)]
    dim: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct ListArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Mario problem whose decoder produces the level.
    #[arg(long, requires = "point", conflicts_with = "level_file")]
    problem: Option<ProblemId>,
    #[arg(long, default_value_t = 1)]
    instance: u64,
    #[arg(long, default_value_t = mario::DEFAULT_DIM)]
    dim: usize,
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// ASCII level file instead of a decoded level.
    #[arg(long)]
    level_file: Option<PathBuf>,
    /// Defaults to the problem's agent, or astar.
    #[arg(long)]
    agent: Option<AgentKind>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    anchor_seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    directions: usize,
    /// Defaults to 0.02 x box diagonal / sqrt(dim).
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    axis_aligned: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Defaults to 50 x dim.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    sample_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Batch {
    /// 28 problems x 7 instances.
    Mario,
    /// Labelled baseline functions x 5 instances.
    Labelled,
    /// Shekel x 5 and classic functions x 15 (embedding baselines).
    Baselines,
}

#[derive(Args, Debug)]
struct FeaturesArgs {
    #[arg(long, conflicts_with = "batch")]
    problem: Option<ProblemId>,
    #[arg(long)]
    instance: Option<u64>,
    #[arg(long, default_value_t = mario::DEFAULT_DIM)]
    dim: usize,
    /// Sample CSV produced by `sample`.
    #[arg(long, conflicts_with = "batch")]
    input: Option<PathBuf>,
    /// Compute a whole collection into --out-dir.
    #[arg(long, value_enum, requires = "out_dir")]
    batch: Option<Batch>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    sample_seed: Option<u64>,
    #[arg(long)]
    feature_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct TrainingData {
    /// Directory of feature JSON files; computed from the labelled suite
    /// when absent.
    #[arg(long)]
    features_dir: Option<PathBuf>,
    /// Label table; defaults to the shipped one.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, default_value_t = mario::DEFAULT_DIM)]
    dim: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    sample_seed: Option<u64>,
    #[arg(long)]
    feature_seed: Option<u64>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[arg(long)]
    property: Property,
    #[command(flatten)]
    data: TrainingData,
    #[arg(long)]
    train_seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TREES)]
    trees: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// One model file per property.
    #[arg(long, required = true)]
    model: Vec<PathBuf>,
    /// A feature JSON file or a directory of them.
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CvArgs {
    /// All properties when omitted.
    #[arg(long)]
    property: Option<Property>,
    #[command(flatten)]
    data: TrainingData,
    #[arg(long)]
    train_seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TREES)]
    trees: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[arg(long)]
    features_dir: PathBuf,
    #[arg(long, default_value_t = 30.0)]
    perplexity: f64,
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    #[arg(long, default_value_t = 200.0)]
    learning_rate: f64,
    #[arg(long)]
    embed_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run metadata JSON; defaults to `<out>.meta.json` when --out is set.
    #[arg(long)]
    meta_out: Option<PathBuf>,
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(usage("--jobs", "must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(CliError::Runtime(Error::Parse(e.to_string()))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::List(a) => cmd_list(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Level(a) => cmd_level(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Walk(a) => cmd_walk(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Features(a) => cmd_features(a),
        Command::Train(a) => cmd_train(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Cv(a) => cmd_cv(a),
        Command::Embed(a) => cmd_embed(a),
    }
}

// ---- helpers ---------------------------------------------------------------

/// A seed flag, else the environment override, else the fixed default.
fn seed(flag: Option<u64>, name: &str) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(name, format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn seed_meta() -> Value {
    std::env::var(SEED_ENV).map_or(Value::Null, Value::String)
}

fn instance(p: &ProblemArgs) -> CliResult<ProblemInstance> {
    resolve(p.problem, p.instance, p.dim).map_err(|e| usage("--problem/--instance/--dim", e))
}

fn parse_point(text: &str, inst: &ProblemInstance) -> CliResult<Vec<f64>> {
    let x = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<f64>, _>>()
        .map_err(|e| usage("--point", e))?;
    if x.len() != inst.dimension() {
        return Err(usage(
            "--point",
            format!(
                "{} coordinates given, dimension is {}",
                x.len(),
                inst.dimension()
            ),
        ));
    }
    inst.domain().check(&x).map_err(|e| usage("--point", e))?;
    Ok(x)
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_header(meta: &[(&str, String)]) -> String {
    let mut s = format!("# {TOOL}\n");
    for (k, v) in meta {
        let _ = writeln!(s, "# {k}={v}");
    }
    s
}

/// Write to `path` via a temporary file in the same directory, or stdout.
fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, content),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, content: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .map_err(|e| CliError::Runtime(e.error.into()))?;
    Ok(())
}

fn json_text(v: &Value) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn read_records(path: &Path) -> CliResult<Vec<FeatureRecord>> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    let mut records = Vec::with_capacity(files.len());
    for f in files {
        let text = std::fs::read_to_string(&f)?;
        let v: Value = serde_json::from_str(&text).map_err(Error::from)?;
        records.push(FeatureRecord::from_json(&v)?);
    }
    if records.is_empty() {
        return Err(CliError::Runtime(Error::EmptyInput));
    }
    records.sort_by(|a, b| {
        let key = |r: &FeatureRecord| (r.id().ok(), r.problem.clone(), r.instance);
        key(a).cmp(&key(b))
    });
    Ok(records)
}

// ---- commands --------------------------------------------------------------

fn cmd_list(a: ListArgs) -> CliResult<()> {
    let mut rows = Vec::new();
    for id in ProblemId::all() {
        let (lo, hi) = {
            let inst = resolve(
                id,
                if id.suite() == crate::Suite::Mario {
                    1
                } else {
                    0
                },
                2,
            )?;
            (inst.domain().lower()[0], inst.domain().upper()[0])
        };
        let (measure, agent, variant, instances) = match id {
            ProblemId::Mario(i) => {
                let s = mario::spec(i)?;
                (
                    s.measure.name().to_string(),
                    s.agent.map_or(String::new(), |a| a.name().to_string()),
                    s.variant().to_string(),
                    "1-7".to_string(),
                )
            }
            other => (
                other.to_string(),
                String::new(),
                String::new(),
                "any".to_string(),
            ),
        };
        rows.push((
            id.to_string(),
            id.family(),
            measure,
            agent,
            variant,
            lo,
            hi,
            instances,
        ));
    }
    let text = match a.format {
        Format::Csv => {
            let mut s = csv_header(&[]);
            s.push_str("id,family,measure,agent,variant,lower,upper,instances\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.0,
                    r.1,
                    r.2,
                    r.3,
                    r.4,
                    real(r.5),
                    real(r.6),
                    r.7
                );
            }
            s
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({"id": r.0, "family": r.1, "measure": r.2, "agent": r.3,
                           "variant": r.4, "lower": r.5, "upper": r.6, "instances": r.7})
                })
                .collect();
            json_text(&json!({"meta": corpus::meta(&[]), "problems": list}))?
        }
    };
    emit(a.out.as_deref(), &text)
}

fn cmd_eval(a: PointArgs) -> CliResult<()> {
    let inst = instance(&a.problem)?;
    let x = parse_point(&a.point, &inst)?;
    let v = inst.evaluate(&x)?;
    emit(a.out.as_deref(), &format!("{}\n", real(v)))
}

fn mario_level(p: &ProblemArgs, point: &str) -> CliResult<(ProblemInstance, TileGrid)> {
    let inst = instance(p)?;
    if inst.mario().is_none() {
        return Err(usage(
            "--problem",
            format!("`{}` is not a level-generation problem", p.problem),
        ));
    }
    let x = parse_point(point, &inst)?;
    let grid = inst.level(&x).expect("mario instance")?;
    Ok((inst, grid))
}

fn cmd_level(a: PointArgs) -> CliResult<()> {
    let (_, grid) = mario_level(&a.problem, &a.point)?;
    emit(a.out.as_deref(), &format!("{}\n", grid.render_ascii()))
}

fn cmd_simulate(a: SimulateArgs) -> CliResult<()> {
    let mut header = Vec::new();
    let (grid, default_agent) = match (&a.problem, &a.level_file) {
        (Some(problem), None) => {
            let p = ProblemArgs {
                problem: *problem,
                instance: a.instance,
                dim: a.dim,
            };
            let (inst, grid) = mario_level(&p, a.point.as_deref().unwrap_or_default())?;
            header.push(("problem", problem.to_string()));
            header.push(("instance", a.instance.to_string()));
            header.push(("dim", a.dim.to_string()));
            (grid, inst.mario().and_then(|m| m.spec().agent))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let grid = TileGrid::parse_ascii(text.trim_end_matches('\n'))
                .map_err(|e| usage("--level-file", e))?;
            header.push(("level_file", path.display().to_string()));
            (grid, None)
        }
        _ => {
            return Err(usage(
                "--problem/--level-file",
                "give exactly one level source",
            ))
        }
    };
    let agent = a.agent.or(default_agent).unwrap_or(AgentKind::Astar);
    let play = sim::playthrough(&grid, agent);
    let r = play.result;
    header.push(("agent", agent.name().to_string()));
    let mut s = csv_header(&header);
    let _ = writeln!(s, "d_level={}", r.d_level);
    let _ = writeln!(s, "t_level={}", r.t_level);
    let _ = writeln!(s, "n_coins={}", r.n_coins);
    let _ = writeln!(s, "t_g={}", r.t_g);
    let _ = writeln!(s, "t_tot={}", r.t_tot);
    let _ = writeln!(s, "t_max={}", r.t_max);
    let _ = writeln!(s, "won={}", r.won);
    let _ = writeln!(s, "basic_fitness={}", real(sim::basic_fitness(&r)));
    let _ = writeln!(s, "air_time={}", real(sim::air_time(&r)));
    let _ = writeln!(s, "time_taken={}", real(sim::time_taken(&r)));
    s.push('\n');
    s.push_str(&play.overlay(&grid));
    s.push('\n');
    emit(a.out.as_deref(), &s)
}

fn cmd_walk(a: WalkArgs) -> CliResult<()> {
    let inst = instance(&a.problem)?;
    let anchor_seed = seed(a.anchor_seed, "--anchor-seed")?;
    let step = a.step.unwrap_or_else(|| default_step(inst.domain()));
    if !(step > 0.0 && step.is_finite()) {
        return Err(usage("--step", "must be positive"));
    }
    if a.directions == 0 {
        return Err(usage("--directions", "must be at least 1"));
    }
    let mode = if a.axis_aligned {
        DirectionMode::AxisAligned
    } else {
        DirectionMode::Random
    };
    let specs = bundle_specs(inst.domain(), anchor_seed, a.directions, step, mode)?;
    let d = inst.dimension();
    let mut s = csv_header(&[
        ("problem", a.problem.problem.to_string()),
        ("instance", a.problem.instance.to_string()),
        ("dim", d.to_string()),
        ("anchor_seed", anchor_seed.to_string()),
        ("directions", a.directions.to_string()),
        ("step", real(step)),
        ("axis_aligned", a.axis_aligned.to_string()),
        ("seed_env", std::env::var(SEED_ENV).unwrap_or_default()),
    ]);
    s.push_str("walk_id,offset");
    for j in 1..=d {
        let _ = write!(s, ",x{j}");
    }
    s.push_str(",y\n");
    for (w, spec) in specs.iter().enumerate() {
        let t = diagonal_walk(&inst, spec)?;
        for ((k, p), y) in t.offsets.iter().zip(&t.points).zip(&t.values) {
            let _ = write!(s, "{w},{k}");
            for v in p {
                let _ = write!(s, ",{}", real(*v));
            }
            let _ = writeln!(s, ",{}", real(*y));
        }
    }
    emit(a.out.as_deref(), &s)
}

fn sample_csv(sample: &SampleSet, problem: &ProblemArgs, n: usize, sample_seed: u64) -> String {
    let d = sample.d();
    let mut s = csv_header(&[
        ("problem", problem.problem.to_string()),
        ("instance", problem.instance.to_string()),
        ("dim", d.to_string()),
        ("n", n.to_string()),
        ("design", "lhs".to_string()),
        ("sample_seed", sample_seed.to_string()),
        ("seed_env", std::env::var(SEED_ENV).unwrap_or_default()),
    ]);
    let cols: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    let _ = writeln!(s, "{},y", cols.join(","));
    for (x, y) in sample.x.iter().zip(&sample.y) {
        let row: Vec<String> = x.iter().map(|v| real(*v)).collect();
        let _ = writeln!(s, "{},{}", row.join(","), real(*y));
    }
    s
}

fn cmd_sample(a: SampleArgs) -> CliResult<()> {
    let inst = instance(&a.problem)?;
    let n = a.n.unwrap_or(SAMPLES_PER_DIM * inst.dimension());
    if n < 2 {
        return Err(usage("--n", "need at least 2 points"));
    }
    let sample_seed = seed(a.sample_seed, "--sample-seed")?;
    let sample = lhs_sample(&inst, n, sample_seed)?;
    emit(
        a.out.as_deref(),
        &sample_csv(&sample, &a.problem, n, sample_seed),
    )
}

/// Parse a sample CSV, returning the sample and its `# key=value` metadata.
fn read_sample(path: &Path) -> CliResult<(SampleSet, Vec<(String, String)>)> {
    let text = std::fs::read_to_string(path)?;
    let meta: Vec<(String, String)> = text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
        })
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(Error::from)?.clone();
    let d = headers.len().saturating_sub(1);
    if d == 0 || &headers[d] != "y" {
        return Err(usage("--input", "expected columns x1..xd,y"));
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(Error::from)?;
        let vals = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| usage("--input", e))?;
        y.push(vals[d]);
        x.push(vals[..d].to_vec());
    }
    Ok((SampleSet::new(x, y)?, meta))
}

fn cmd_features(a: FeaturesArgs) -> CliResult<()> {
    let sample_seed = seed(a.sample_seed, "--sample-seed")?;
    let feature_seed = seed(a.feature_seed, "--feature-seed")?;
    let meta = |extra: &[(&str, Value)]| {
        let mut fields = vec![
            ("feature_seed", json!(feature_seed)),
            ("seed_env", seed_meta()),
        ];
        fields.extend(extra.iter().cloned());
        corpus::meta(&fields)
    };
    if let Some(batch) = a.batch {
        let jobs = match batch {
            Batch::Mario => corpus::mario_jobs(),
            Batch::Labelled => corpus::labelled_jobs(),
            Batch::Baselines => corpus::embedding_baseline_jobs(),
        };
        let n = a.n.unwrap_or(SAMPLES_PER_DIM * a.dim);
        let dir = a.out_dir.expect("clap enforces --out-dir");
        std::fs::create_dir_all(&dir)?;
        let records = corpus::feature_records(&jobs, a.dim, n, sample_seed, feature_seed)?;
        for r in &records {
            let text = json_text(&r.to_json(meta(&[])))?;
            write_atomic(
                &dir.join(format!("{}_{}.json", r.problem, r.instance)),
                &text,
            )?;
        }
        return Ok(());
    }
    let record = if let Some(path) = &a.input {
        let (sample, m) = read_sample(path)?;
        let lookup = |k: &str| m.iter().find(|(mk, _)| mk == k).map(|(_, v)| v.clone());
        let problem = match (a.problem, lookup("problem")) {
            (Some(p), _) => p.to_string(),
            (None, Some(p)) => p,
            (None, None) => {
                return Err(usage(
                    "--problem",
                    "required when the sample has no problem metadata",
                ))
            }
        };
        let inst_seed = a
            .instance
            .or_else(|| lookup("instance").and_then(|v| v.parse().ok()))
            .unwrap_or(1);
        let used_seed = a
            .sample_seed
            .or_else(|| lookup("sample_seed").and_then(|v| v.parse().ok()))
            .unwrap_or(sample_seed);
        let features = compute_features(&sample, feature_seed)?;
        FeatureRecord {
            problem,
            instance: inst_seed,
            n: sample.n(),
            d: sample.d(),
            sample_seed: used_seed,
            degenerate: features.degenerate.iter().map(|s| s.to_string()).collect(),
            features,
        }
    } else {
        let problem = a
            .problem
            .ok_or_else(|| usage("--problem", "give --problem, --input or --batch"))?;
        let p = ProblemArgs {
            problem,
            instance: a.instance.unwrap_or(1),
            dim: a.dim,
        };
        let inst = instance(&p)?;
        let n = a.n.unwrap_or(SAMPLES_PER_DIM * inst.dimension());
        if n < 2 * inst.dimension() + 2 {
            return Err(usage(
                "--n",
                format!("need at least {} points", 2 * inst.dimension() + 2),
            ));
        }
        let sample = lhs_sample(&inst, n, sample_seed)?;
        let features = compute_features(&sample, feature_seed)?;
        FeatureRecord {
            problem: problem.to_string(),
            instance: p.instance,
            n,
            d: p.dim,
            sample_seed,
            degenerate: features.degenerate.iter().map(|s| s.to_string()).collect(),
            features,
        }
    };
    emit(a.out.as_deref(), &json_text(&record.to_json(meta(&[])))?)
}

struct Training {
    records: Vec<FeatureRecord>,
    table: LabelTable,
    meta: Vec<(&'static str, Value)>,
}

fn training_data(d: &TrainingData) -> CliResult<Training> {
    let table = match &d.labels {
        Some(p) => LabelTable::load(p)?,
        None => LabelTable::builtin(),
    };
    let mut meta = vec![(
        "labels",
        json!(d
            .labels
            .as_ref()
            .map_or("builtin".to_string(), |p| p.display().to_string())),
    )];
    let records = match &d.features_dir {
        Some(dir) => {
            meta.push(("features_dir", json!(dir.display().to_string())));
            read_records(dir)?
        }
        None => {
            let sample_seed = seed(d.sample_seed, "--sample-seed")?;
            let feature_seed = seed(d.feature_seed, "--feature-seed")?;
            let n = d.n.unwrap_or(SAMPLES_PER_DIM * d.dim);
            meta.push(("dim", json!(d.dim)));
            meta.push(("n", json!(n)));
            meta.push(("sample_seed", json!(sample_seed)));
            meta.push(("feature_seed", json!(feature_seed)));
            corpus::feature_records(
                &corpus::labelled_jobs(),
                d.dim,
                n,
                sample_seed,
                feature_seed,
            )?
        }
    };
    meta.push(("seed_env", seed_meta()));
    Ok(Training {
        records,
        table,
        meta,
    })
}

fn cmd_train(a: TrainArgs) -> CliResult<()> {
    let train_seed = seed(a.train_seed, "--train-seed")?;
    let data = training_data(&a.data)?;
    let rows = corpus::labelled_rows(&data.records, &data.table, a.property)?;
    let model = train(&rows, &FEATURE_NAMES, a.property, train_seed, a.trees)?;
    let mut v = serde_json::to_value(&model).map_err(Error::from)?;
    let mut meta = data.meta;
    meta.push(("train_seed", json!(train_seed)));
    meta.push(("trees", json!(a.trees)));
    v.as_object_mut()
        .expect("model is an object")
        .insert("meta".into(), corpus::meta(&meta));
    emit(a.out.as_deref(), &json_text(&v)?)
}

fn cmd_classify(a: ClassifyArgs) -> CliResult<()> {
    let mut models = Vec::new();
    for p in &a.model {
        models.push(PropertyModel::from_json(&std::fs::read_to_string(p)?)?);
    }
    let records = read_records(&a.features)?;
    let mut s = csv_header(&[(
        "models",
        a.model
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(";"),
    )]);
    s.push_str("problem,instance,property,label,vote_share\n");
    for r in &records {
        for m in &models {
            let p = m.predict(&r.features)?;
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.problem,
                r.instance,
                m.property,
                p.label,
                real(p.vote_shares[p.label_index])
            );
        }
    }
    emit(a.out.as_deref(), &s)
}

fn cmd_cv(a: CvArgs) -> CliResult<()> {
    let train_seed = seed(a.train_seed, "--train-seed")?;
    let data = training_data(&a.data)?;
    let properties: Vec<Property> = match a.property {
        Some(p) => vec![p],
        None => Property::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for p in properties {
        let rows = corpus::labelled_rows(&data.records, &data.table, p)?;
        let cv = lofo_cv(&rows, &FEATURE_NAMES, p, train_seed, a.trees)?;
        let majority = majority_lofo(&rows, p)?;
        let mut v = serde_json::to_value(&cv).map_err(Error::from)?;
        let o = v.as_object_mut().expect("report is an object");
        o.insert("majority_accuracy".into(), json!(majority.mean_accuracy));
        o.insert("chance".into(), json!(1.0 / p.vocabulary().len() as f64));
        reports.push(v);
    }
    let mut meta = data.meta;
    meta.push(("train_seed", json!(train_seed)));
    meta.push(("trees", json!(a.trees)));
    emit(
        a.out.as_deref(),
        &json_text(&json!({"meta": corpus::meta(&meta), "reports": reports}))?,
    )
}

fn cmd_embed(a: EmbedArgs) -> CliResult<()> {
    let embed_seed = seed(a.embed_seed, "--embed-seed")?;
    let records = read_records(&a.features_dir)?;
    let fv: Vec<_> = records.iter().map(|r| r.features.clone()).collect();
    let norm = normalize_features(&fv)?;
    let config = TsneConfig {
        perplexity: a.perplexity,
        iterations: a.iterations,
        learning_rate: a.learning_rate,
        seed: embed_seed,
        ..TsneConfig::default()
    };
    let e = tsne_embed(&norm.rows, &config).map_err(|err| match err {
        Error::PerplexityTooLarge { .. } => usage("--perplexity", err),
        other => CliError::Runtime(other),
    })?;
    let mut s = csv_header(&[
        ("embed_seed", embed_seed.to_string()),
        ("perplexity", real(a.perplexity)),
        ("iterations", a.iterations.to_string()),
        ("learning_rate", real(a.learning_rate)),
        ("final_kl", real(e.final_kl)),
        ("seed_env", std::env::var(SEED_ENV).unwrap_or_default()),
    ]);
    s.push_str("suite,problem,instance,u,v\n");
    for (r, c) in records.iter().zip(&e.coords) {
        let family = r.id().map_or("unknown", |id| id.family());
        let _ = writeln!(
            s,
            "{family},{},{},{},{}",
            r.problem,
            r.instance,
            real(c[0]),
            real(c[1])
        );
    }
    let meta_path = a.meta_out.clone().or_else(|| {
        a.out
            .as_ref()
            .map(|p| PathBuf::from(format!("{}.meta.json", p.display())))
    });
    if let Some(mp) = meta_path {
        let meta = json!({
            "meta": corpus::meta(&[("seed_env", seed_meta())]),
            "embed_seed": embed_seed,
            "perplexity": a.perplexity,
            "iterations": a.iterations,
            "learning_rate": a.learning_rate,
            "rows": records.len(),
            "features_kept": norm.names,
            "final_kl": e.final_kl,
            "kl_trace": e.kl_trace()?,
        });
        write_atomic(&mp, &json_text(&meta)?)?;
    }
    emit(a.out.as_deref(), &s)
}
