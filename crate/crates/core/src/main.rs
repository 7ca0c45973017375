use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fuzzy_dematel::compare::{self, PipelineConfig};
use fuzzy_dematel::report::{self, ResultDocument, RunManifest, SearchDocument};
use fuzzy_dematel::search::{self, SearchMode, SearchSpec};
use fuzzy_dematel::{
    io, AnalysisResult, CrispSource, Error, FuzzyScaling, LinguisticScale, NormalizationMode,
};

const FIRST: &str = "defuzzify-first";
const LAST: &str = "defuzzify-last";

#[derive(Parser)]
#[command(
    name = "fuzzy-dematel",
    version,
    about = "Crisp vs fuzzy DEMATEL under both defuzzification orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or both pipelines on a level matrix.
    Analyze(AnalyzeArgs),
    /// Run both pipelines and report rank divergence.
    Compare(CompareArgs),
    /// Search for level matrices on which the pipelines diverge.
    Search(SearchArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Scale JSON; the built-in N/L/H/S scale when omitted.
    #[arg(long)]
    scale: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Normalization::MaxRow)]
    normalization: Normalization,
    #[arg(long, value_enum, default_value_t = Scaling::SharedUpper)]
    fuzzy_scaling: Scaling,
    #[arg(long, value_enum, default_value_t = Source::Defuzzified)]
    crisp_source: Source,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Pipeline::Both)]
    pipeline: Pipeline,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write a prominence/relation scatter plot (SVG).
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.8)]
    density: f64,
    /// Enumerate every level assignment instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    /// Store at most this many divergent instances (all are counted).
    #[arg(long)]
    keep: Option<usize>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    workers: Option<usize>,
    /// Write each stored divergent instance as a replayable matrix CSV.
    #[arg(long)]
    export_dir: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pipeline {
    DefuzzFirst,
    DefuzzLast,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalization {
    MaxRow,
    MaxRowCol,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scaling {
    SharedUpper,
    Independent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Defuzzified,
    Levels,
}

/// Exit status 1 for bad input, 2 for numerical failure.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_numerical() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl ConfigArgs {
    fn resolve(&self) -> Result<(PipelineConfig, Vec<String>), Failure> {
        let mut inputs = Vec::new();
        let scale = match &self.scale {
            Some(path) => {
                inputs.push(path.display().to_string());
                io::read_scale(path).map_err(|e| Failure {
                    code: 1,
                    message: format!("{}: {e}", path.display()),
                })?
            }
            None => LinguisticScale::default_scale(),
        };
        let cfg = PipelineConfig {
            scale,
            crisp_source: match self.crisp_source {
                Source::Defuzzified => CrispSource::Defuzzified,
                Source::Levels => CrispSource::Levels,
            },
            normalization: match self.normalization {
                Normalization::MaxRow => NormalizationMode::MaxRow,
                Normalization::MaxRowCol => NormalizationMode::MaxRowCol,
            },
            fuzzy_scaling: match self.fuzzy_scaling {
                Scaling::SharedUpper => FuzzyScaling::SharedUpper,
                Scaling::Independent => FuzzyScaling::Independent,
            },
        };
        Ok((cfg, inputs))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_matrix(path: &Path, cfg: &PipelineConfig) -> Result<fuzzy_dematel::LevelMatrix, Failure> {
    io::read_level_matrix(path, &cfg.scale).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn plot(path: Option<&Path>, pipelines: &BTreeMap<String, AnalysisResult>) -> Result<(), Failure> {
    if let Some(path) = path {
        let series: Vec<(&str, &AnalysisResult)> = [FIRST, LAST]
            .iter()
            .filter_map(|name| pipelines.get(*name).map(|r| (*name, r)))
            .collect();
        report::write_scatter(&series, path)?;
    }
    Ok(())
}

fn tables(pipelines: &BTreeMap<String, AnalysisResult>) -> String {
    [FIRST, LAST]
        .iter()
        .filter_map(|name| pipelines.get(*name).map(|r| report::format_table(name, r)))
        .collect::<Vec<_>>()
        .join("\n")
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let (cfg, mut inputs) = args.config.resolve()?;
    inputs.insert(0, args.input.display().to_string());
    let m = load_matrix(&args.input, &cfg)?;
    let mut pipelines = BTreeMap::new();
    if matches!(args.pipeline, Pipeline::DefuzzFirst | Pipeline::Both) {
        pipelines.insert(FIRST.to_string(), compare::run_defuzzify_first(&m, &cfg)?);
    }
    if matches!(args.pipeline, Pipeline::DefuzzLast | Pipeline::Both) {
        pipelines.insert(LAST.to_string(), compare::run_defuzzify_last(&m, &cfg)?);
    }
    plot(args.plot.as_deref(), &pipelines)?;
    let text = match args.format {
        Format::Json => {
            let doc = ResultDocument {
                manifest: RunManifest::new("analyze", inputs, cfg),
                pipelines,
                divergence: None,
            };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => report::format_csv(&pipelines)?,
        Format::Table => tables(&pipelines),
    };
    emit(args.out.as_deref(), &text)
}

fn format_pairs(pairs: &[[String; 2]]) -> String {
    if pairs.is_empty() {
        return "none".into();
    }
    pairs
        .iter()
        .map(|[a, b]| format!("({a},{b})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn compare_cmd(args: CompareArgs) -> Result<(), Failure> {
    let (cfg, mut inputs) = args.config.resolve()?;
    inputs.insert(0, args.input.display().to_string());
    let m = load_matrix(&args.input, &cfg)?;
    let divergence = compare::compare(&m, &cfg)?;
    let mut pipelines = BTreeMap::new();
    pipelines.insert(FIRST.to_string(), divergence.crisp_result.clone());
    pipelines.insert(LAST.to_string(), divergence.fuzzy_result.clone());
    plot(args.plot.as_deref(), &pipelines)?;
    let text = match args.format {
        Format::Json => {
            let doc = ResultDocument {
                manifest: RunManifest::new("compare", inputs, cfg),
                pipelines,
                divergence: Some(divergence),
            };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => report::format_csv(&pipelines)?,
        Format::Table => {
            let tau = |t: Option<f64>| t.map_or("undefined".to_string(), |v| format!("{v:.3}"));
            format!(
                "{}\ndiverged: {}\nR+C flips: {}\nR-C flips: {}\nKendall tau-b R+C: {}\nKendall tau-b R-C: {}\n",
                tables(&pipelines),
                divergence.diverged,
                format_pairs(&divergence.prominence_flips),
                format_pairs(&divergence.relation_flips),
                tau(divergence.kendall_tau_prominence),
                tau(divergence.kendall_tau_relation),
            )
        }
    };
    emit(args.out.as_deref(), &text)
}

fn search_cmd(args: SearchArgs) -> Result<(), Failure> {
    let (cfg, inputs) = args.config.resolve()?;
    let spec = SearchSpec {
        n: args.n,
        cfg: cfg.clone(),
        trials: args.trials,
        seed: args.seed,
        density: args.density,
        mode: if args.exhaustive {
            SearchMode::Exhaustive
        } else {
            SearchMode::Randomized
        },
        keep: args.keep,
    };
    let outcome = match args.workers {
        Some(w) => search::search_with_workers(&spec, w)?,
        None => search::search(&spec)?,
    };
    if let Some(dir) = &args.export_dir {
        fs::create_dir_all(dir)?;
        for inst in &outcome.divergent_instances {
            let path = dir.join(format!("instance_{}.csv", inst.index));
            fs::write(&path, io::level_matrix_to_csv(&inst.matrix, &cfg.scale)?)?;
        }
    }
    let mut manifest = RunManifest::new("search", inputs, cfg);
    manifest.search = Some(spec);
    let doc = SearchDocument {
        manifest,
        search: outcome,
    };
    emit(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&doc)? + "\n"),
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Compare(args) => compare_cmd(args),
        Command::Search(args) => search_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
