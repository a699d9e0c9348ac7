//! The `screenml` command line.
//!
//! Every command that writes files also writes a [`RunManifest`] next to
//! them; `screenml replay --manifest FILE` re-runs the recorded arguments.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use screenml_core::classifiers::{parse_algorithms, ClassifierKind, SvmParams, TrainingParams};
use screenml_core::evaluation::{confusion, ConfusionMatrix};
use screenml_core::synthetic::{SyntheticParams, DEFAULT_LEAK};
use screenml_core::{Corpus, ExperimentConfig, Label, StopList, TrainedModel};

use crate::config_file::ConfigFile;
use crate::error::{Error, Result};
use crate::io::{corpus_to_jsonl, load_corpus, load_stoplist, CorpusFormat};
use crate::manifest::{file_digest, sibling_path, RunManifest};
use crate::output::OutputSet;
use crate::{bundle, render, runner};

#[derive(Debug, Parser)]
#[command(
    name = "screenml",
    version,
    about = "Train and evaluate abstract screening classifiers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Repeated random train/test evaluation of several classifiers.
    Evaluate(EvaluateArgs),
    /// Fit one classifier on a whole corpus and save the model bundle.
    Train(TrainArgs),
    /// Label a corpus with a saved model.
    Predict(PredictArgs),
    /// Write a seeded synthetic corpus.
    Generate(GenerateArgs),
    /// Re-run the command recorded in a run manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Corpus file (JSONL or CSV).
    #[arg(long)]
    pub input: PathBuf,
    /// Corpus format; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<CorpusFormat>,
}

impl InputArgs {
    fn format(&self) -> CorpusFormat {
        self.format
            .unwrap_or_else(|| CorpusFormat::from_path(&self.input))
    }
}

/// Settings shared by `evaluate` and `train`. All are optional so a config
/// file can supply them.
#[derive(Debug, Args)]
pub struct HyperArgs {
    /// key = value file supplying any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Stop list: `english`, `none`, or a file with one word per line.
    #[arg(long)]
    pub stopwords: Option<String>,
    /// Naive Bayes smoothing.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// SVM regularization trade-off.
    #[arg(long)]
    pub c: Option<f64>,
    /// Weight SVM classes inversely to their frequency (default).
    #[arg(long, overrides_with = "no_balanced")]
    pub balanced: bool,
    /// Give both SVM classes unit weight.
    #[arg(long, overrides_with = "balanced")]
    pub no_balanced: bool,
    /// SVM stopping tolerance on the projected gradient.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Maximum SVM passes over the data.
    #[arg(long)]
    pub max_epochs: Option<usize>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

const HYPER_KEYS: [&str; 7] = [
    "stopwords",
    "alpha",
    "c",
    "balanced",
    "tol",
    "max-epochs",
    "seed",
];

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Comma-separated subset of nuclear,basic,bayes,svm.
    #[arg(long)]
    pub algorithms: Option<String>,
    /// Number of random train/test repeats.
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Share of documents held out for testing.
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Table formats to write: comma-separated md, csv, json.
    #[arg(long)]
    pub emit: Option<String>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// One of nuclear, basic, bayes, svm.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Where to write the model bundle.
    #[arg(long)]
    pub model_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Model bundle written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// JSONL output of id, label and score.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 2042)]
    pub n: usize,
    #[arg(long, default_value_t = 0.27)]
    pub positive_rate: f64,
    /// Probability that a positive document carries each signal token.
    #[arg(long, default_value_t = 0.7)]
    pub signal: f64,
    /// Probability that a negative document carries each signal token.
    #[arg(long, default_value_t = DEFAULT_LEAK)]
    pub leak: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args(args: &[String], stdout: &mut dyn Write) -> Result<()> {
    let argv = std::iter::once("screenml".to_string()).chain(args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    run(cli, args, stdout)
}

pub fn run(cli: Cli, args: &[String], stdout: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let command = command_name(&cli.command);
    let mut manifest = match &cli.command {
        Command::Replay(r) => return replay(&r.manifest, stdout),
        _ => RunManifest::new(command, args, json!(null)),
    };
    let (outputs, manifest_path) = match cli.command {
        Command::Evaluate(a) => evaluate(&a, &mut manifest, stdout)?,
        Command::Train(a) => train(&a, &mut manifest, stdout)?,
        Command::Predict(a) => predict(&a, &mut manifest, stdout)?,
        Command::Generate(a) => generate(&a, &mut manifest, stdout)?,
        Command::Replay(_) => unreachable!("handled above"),
    };
    let mut outputs = outputs;
    manifest.outputs = outputs
        .paths()
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    outputs.write(&manifest_path, manifest.to_json())?;
    outputs.commit();
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Evaluate(_) => "evaluate",
        Command::Train(_) => "train",
        Command::Predict(_) => "predict",
        Command::Generate(_) => "generate",
        Command::Replay(_) => "replay",
    }
}

/// Re-runs a manifest's command from its recorded working directory.
/// This changes the process working directory.
fn replay(path: &Path, stdout: &mut dyn Write) -> Result<()> {
    let recorded = RunManifest::load(path)?;
    if recorded.tool != crate::manifest::TOOL {
        return Err(Error::Usage(format!(
            "{}: not a screenml manifest",
            path.display()
        )));
    }
    if recorded.command_line.first().map(String::as_str) == Some("replay") {
        return Err(Error::Usage("a replay manifest cannot be replayed".into()));
    }
    if recorded.tool_version != crate::manifest::TOOL_VERSION {
        log::warn!(
            "manifest written by screenml {}, replaying with {}",
            recorded.tool_version,
            crate::manifest::TOOL_VERSION
        );
    }
    if !recorded.working_directory.is_empty() {
        let dir = Path::new(&recorded.working_directory);
        std::env::set_current_dir(dir).map_err(|e| Error::io(dir, e))?;
    }
    run_args(&recorded.command_line, stdout)
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn load_config(path: Option<&Path>, extra_keys: &[&str]) -> Result<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let cfg = ConfigFile::load(path)?;
    let allowed: Vec<&str> = HYPER_KEYS.iter().chain(extra_keys).copied().collect();
    cfg.check_keys(&allowed)?;
    Ok(cfg)
}

/// Flag, else config file, else `default`.
fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.get(key)?.unwrap_or(default)),
    }
}

struct Resolved {
    stopwords: String,
    stoplist: StopList,
    alpha: f64,
    svm: SvmParams,
}

fn resolve_hyper(h: &HyperArgs, cfg: &ConfigFile) -> Result<Resolved> {
    let defaults = TrainingParams::default();
    let stopwords = pick(h.stopwords.clone(), cfg, "stopwords", "english".to_string())?;
    let stoplist = match stopwords.as_str() {
        "english" => StopList::english(),
        "none" => StopList::empty(),
        path => load_stoplist(Path::new(path))?,
    };
    let balanced_flag = match (h.balanced, h.no_balanced) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    };
    let svm = SvmParams {
        c: pick(h.c, cfg, "c", defaults.svm.c)?,
        balanced: pick(balanced_flag, cfg, "balanced", defaults.svm.balanced)?,
        tol: pick(h.tol, cfg, "tol", defaults.svm.tol)?,
        max_epochs: pick(h.max_epochs, cfg, "max-epochs", defaults.svm.max_epochs)?,
        seed: pick(h.seed, cfg, "seed", 0)?,
    };
    let params = TrainingParams {
        alpha: pick(h.alpha, cfg, "alpha", defaults.alpha)?,
        svm,
    };
    params.validate().map_err(|e| Error::Usage(e.to_string()))?;
    Ok(Resolved {
        stopwords,
        stoplist,
        alpha: params.alpha,
        svm: params.svm,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Emit {
    Md,
    Csv,
    Json,
}

fn parse_emit(list: &str) -> Result<Vec<Emit>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let e = match part.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Emit::Md,
            "csv" => Emit::Csv,
            "json" => Emit::Json,
            other => {
                return Err(Error::Usage(format!(
                    "unknown --emit format `{other}` (expected md, csv or json)"
                )))
            }
        };
        if !out.contains(&e) {
            out.push(e);
        }
    }
    if out.is_empty() {
        return Err(Error::Usage("--emit needs at least one format".into()));
    }
    Ok(out)
}

fn pretty_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn evaluate(
    a: &EvaluateArgs,
    manifest: &mut RunManifest,
    stdout: &mut dyn Write,
) -> Result<(OutputSet, PathBuf)> {
    let cfg = load_config(
        a.hyper.config.as_deref(),
        &["algorithms", "repeats", "test-fraction", "emit"],
    )?;
    let hyper = resolve_hyper(&a.hyper, &cfg)?;
    let defaults = ExperimentConfig::default();
    let algorithms = match pick(a.algorithms.clone(), &cfg, "algorithms", String::new())? {
        s if s.is_empty() => defaults.algorithms.clone(),
        s => parse_algorithms(&s).map_err(|e| Error::Usage(e.to_string()))?,
    };
    let repeats = pick(a.repeats, &cfg, "repeats", defaults.repeats)?;
    if repeats == 0 {
        return Err(Error::Usage("--repeats must be at least 1".into()));
    }
    let test_fraction = pick(
        a.test_fraction,
        &cfg,
        "test-fraction",
        defaults.test_fraction,
    )?;
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Usage(format!(
            "--test-fraction must lie strictly between 0 and 1, got {test_fraction}"
        )));
    }
    let emit = parse_emit(&pick(a.emit.clone(), &cfg, "emit", "md".to_string())?)?;
    let config = ExperimentConfig {
        repeats,
        test_fraction,
        master_seed: hyper.svm.seed,
        algorithms,
        alpha: hyper.alpha,
        c: hyper.svm.c,
        balanced: hyper.svm.balanced,
        tol: hyper.svm.tol,
        max_epochs: hyper.svm.max_epochs,
    };

    let format = a.input.format();
    let corpus = load_corpus(&a.input.input, format)?;
    let workers = runner::workers_from_env()?;
    manifest.config = json!({
        "input": a.input.input,
        "format": format.to_string(),
        "stopwords": hyper.stopwords,
        "out": a.out,
        "emit": emit.iter().map(|e| format!("{e:?}").to_lowercase()).collect::<Vec<_>>(),
        "experiment": config,
    });
    manifest.input_digest = Some(file_digest(&a.input.input)?);
    manifest.master_seed = Some(config.master_seed);
    log::info!(
        "evaluating {} documents, {} repeats, {} worker(s)",
        corpus.len(),
        config.repeats,
        workers
    );

    let report = runner::run_experiment(&config, &corpus, &hyper.stoplist, workers)?;
    let markdown = render::render_markdown(&report);

    let mut out = OutputSet::new();
    out.write(&a.out.join("report.json"), pretty_json(&report))?;
    out.write(&a.out.join("plot_data.csv"), render::plot_data_csv(&report))?;
    for e in &emit {
        match e {
            Emit::Md => out.write(&a.out.join("tables.md"), &markdown)?,
            Emit::Csv => out.write(&a.out.join("tables.csv"), render::render_csv(&report))?,
            Emit::Json => out.write(
                &a.out.join("tables.json"),
                pretty_json(&render::render_tables_json(&report)),
            )?,
        }
    }
    stdout.write_all(markdown.as_bytes()).map_err(io_err)?;
    Ok((out, a.out.join("manifest.json")))
}

fn train(
    a: &TrainArgs,
    manifest: &mut RunManifest,
    stdout: &mut dyn Write,
) -> Result<(OutputSet, PathBuf)> {
    let cfg = load_config(a.hyper.config.as_deref(), &["algorithm"])?;
    let hyper = resolve_hyper(&a.hyper, &cfg)?;
    let kind: ClassifierKind = pick(a.algorithm.clone(), &cfg, "algorithm", "svm".to_string())?
        .parse()
        .map_err(|e: screenml_core::Error| Error::Usage(e.to_string()))?;
    let format = a.input.format();
    let corpus = load_corpus(&a.input.input, format)?;
    let params = TrainingParams {
        alpha: hyper.alpha,
        svm: hyper.svm.clone(),
    };
    manifest.config = json!({
        "input": a.input.input,
        "format": format.to_string(),
        "stopwords": hyper.stopwords,
        "algorithm": kind,
        "model_out": a.model_out,
        "params": params,
    });
    manifest.input_digest = Some(file_digest(&a.input.input)?);
    manifest.master_seed = Some(params.svm.seed);

    let model = TrainedModel::fit(kind, &corpus, &hyper.stoplist, &params)?;
    let mut out = OutputSet::new();
    out.write(&a.model_out, bundle::to_json(&model))?;
    let features = model.tfidf().map_or(0, |t| t.n_features());
    writeln!(
        stdout,
        "trained {kind} on {} documents ({features} features) -> {}",
        corpus.len(),
        a.model_out.display()
    )
    .map_err(io_err)?;
    Ok((out, sibling_path(&a.model_out)))
}

#[derive(serde::Serialize)]
struct PredictionRow<'a> {
    id: &'a str,
    label: u8,
    score: f64,
}

fn predict(
    a: &PredictArgs,
    manifest: &mut RunManifest,
    stdout: &mut dyn Write,
) -> Result<(OutputSet, PathBuf)> {
    let model = bundle::load(&a.model)?;
    let format = a.input.format();
    let corpus = load_corpus(&a.input.input, format)?;
    manifest.config = json!({
        "model": a.model,
        "model_digest": file_digest(&a.model)?,
        "input": a.input.input,
        "format": format.to_string(),
        "out": a.out,
    });
    manifest.input_digest = Some(file_digest(&a.input.input)?);

    let predictions = model.predict_all(&corpus);
    let mut rows = String::new();
    for (doc, p) in corpus.iter().zip(&predictions) {
        let row = PredictionRow {
            id: doc.id(),
            label: p.label.as_u8(),
            score: p.score,
        };
        rows.push_str(&serde_json::to_string(&row).expect("serializable"));
        rows.push('\n');
    }
    let mut out = OutputSet::new();
    out.write(&a.out, rows)?;

    let predicted: Vec<Label> = predictions.iter().map(|p| p.label).collect();
    write_prediction_summary(stdout, &corpus, &predicted).map_err(io_err)?;
    Ok((out, sibling_path(&a.out)))
}

fn write_prediction_summary(
    stdout: &mut dyn Write,
    corpus: &Corpus,
    predicted: &[Label],
) -> std::io::Result<()> {
    let n = predicted.len();
    let negatives = predicted.iter().filter(|l| !l.is_positive()).count();
    let fraction = if n == 0 {
        0.0
    } else {
        negatives as f64 / n as f64
    };
    writeln!(
        stdout,
        "predicted_negative_fraction: {fraction:.4} ({negatives} of {n} documents need no manual screening)"
    )?;
    let Ok(actual) = corpus.labels() else {
        return Ok(());
    };
    let Ok(cm) = confusion(&actual, predicted) else {
        return Ok(());
    };
    write_confusion(stdout, &cm)
}

fn write_confusion(stdout: &mut dyn Write, cm: &ConfusionMatrix) -> std::io::Result<()> {
    writeln!(stdout, "confusion (rows actual, columns predicted):")?;
    writeln!(stdout, "          NOT    RCT")?;
    writeln!(
        stdout,
        "  NOT {:>6} {:>6}",
        cm.true_negative, cm.false_positive
    )?;
    writeln!(
        stdout,
        "  RCT {:>6} {:>6}",
        cm.false_negative, cm.true_positive
    )?;
    if let Some(m) = cm.metrics() {
        let opt = |v: Option<f64>| v.map_or("N/A".to_string(), |v| format!("{v:.4}"));
        writeln!(stdout, "accuracy: {:.4}", m.accuracy)?;
        writeln!(stdout, "precision: {}", opt(m.precision))?;
        writeln!(stdout, "recall: {}", opt(m.recall))?;
        writeln!(stdout, "f1: {}", opt(m.f1))?;
        writeln!(
            stdout,
            "false_omission_rate: {}",
            opt(m.false_omission_rate)
        )?;
    }
    Ok(())
}

fn generate(
    a: &GenerateArgs,
    manifest: &mut RunManifest,
    stdout: &mut dyn Write,
) -> Result<(OutputSet, PathBuf)> {
    let params = SyntheticParams {
        n: a.n,
        positive_rate: a.positive_rate,
        signal_strength: a.signal,
        leak: a.leak,
        seed: a.seed,
    };
    params.validate().map_err(|e| Error::Usage(e.to_string()))?;
    manifest.config = json!({
        "n": a.n,
        "positive_rate": a.positive_rate,
        "signal": a.signal,
        "leak": a.leak,
        "seed": a.seed,
        "out": a.out,
    });
    manifest.master_seed = Some(a.seed);
    let corpus = params.generate()?;
    let mut out = OutputSet::new();
    out.write(&a.out, corpus_to_jsonl(&corpus))?;
    writeln!(
        stdout,
        "wrote {} documents ({} labeled 1) -> {}",
        corpus.len(),
        corpus.positive_count(),
        a.out.display()
    )
    .map_err(io_err)?;
    Ok((out, sibling_path(&a.out)))
}
