//! `finsent` command-line front end.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use finsent::eval::{
    cross_validate, make_folds, sweep_confidence, sweep_csv, Corpus, Encoding, MajorityLearner, OracleLearner,
    RuleLearner, SentenceFormat,
};
use finsent::{
    ingest_pretagged, tag_raw, Arrangement, ClassLabel, ClassifierModel, EvalReport, Lexicon, MatchPolicy, Mode,
    ModelConfig, PosSentence, PredictOptions, RuleTagger, Scoring, SentenceTagger, TagSet, Transaction,
};
use serde::Serialize;

const LEXICON_DIR_ENV: &str = "FINSENT_LEXICON_DIR";
const LEXICON_FILE: &str = "lexicon.txt";
const REVERSALS_FILE: &str = "reversals.txt";

/// Failure classes with stable exit codes.
#[derive(Debug)]
enum Failure {
    /// Bad flags, missing or malformed lexicon/model files.
    Config(anyhow::Error),
    /// Unreadable or degenerate input data.
    Data(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Data(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn config_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Config(e.into())
}

fn data_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Data(e.into())
}

/// Routes a library error to the matching exit code.
fn classify(e: finsent::Error) -> Failure {
    use finsent::Error::*;
    match e {
        MalformedLexiconLine { .. }
        | UnknownCategory { .. }
        | DuplicateEntry { .. }
        | ReversalNotIndicator(_)
        | TaggerUnavailable(_)
        | GrammarSyntax { .. }
        | UndefinedLabel { .. }
        | PercentOutOfRange { .. }
        | UnsupportedEncoding(_)
        | TooFewFolds(_)
        | ModelFormat(_) => config_err(e),
        _ => data_err(e),
    }
}

#[derive(Parser, Debug)]
#[command(name = "finsent", version, about = "Financial sentence sentiment from performance indicators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the semantic tags of each input sentence.
    Tag(TagArgs),
    /// Mine rule bases from a corpus and write a model directory.
    Train(TrainArgs),
    /// Predict the polarity of each input line with a saved model.
    Predict(PredictArgs),
    /// Stratified k-fold cross-validation.
    Evaluate(EvaluateArgs),
    /// Cross-validate over a grid of minimum confidences.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct LexiconArgs {
    /// Lexicon file (`phrase,Category` lines). Defaults to
    /// $FINSENT_LEXICON_DIR/lexicon.txt, then the bundled lexicon.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Reversal term list, one phrase per line.
    #[arg(long)]
    reversals: Option<PathBuf>,
    #[arg(long, env = LEXICON_DIR_ENV, hide_env_values = true)]
    #[serde(skip)]
    lexicon_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct TaggingArgs {
    #[command(flatten)]
    lexicon: LexiconArgs,
    /// Flip the direction of indicators listed as reversal terms.
    #[arg(long)]
    reversal: bool,
    /// Restrict tags to lagging indicators (`lag`), lagging and leading
    /// (`lag-lead`) or keep everything (`all`).
    #[arg(long, default_value = "all", value_parser = parse_mode)]
    #[serde(serialize_with = "as_display")]
    mode: Mode,
}

#[derive(Args, Debug, Clone, Serialize)]
struct InputArgs {
    #[arg(long, value_enum, default_value_t = EncodingArg::Utf8)]
    encoding: EncodingArg,
    /// How sentences are written. `auto` accepts already tagged
    /// transactions (`tags<TAB>label`) and falls back to raw text.
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    sentence_format: InputFormat,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ModelArgs {
    #[arg(long, default_value = "hsc")]
    #[serde(serialize_with = "as_display")]
    classifier: Arrangement,
    /// Minimum support, percent of all transactions.
    #[arg(long, default_value_t = 0.5)]
    minsup: f64,
    /// Minimum confidence, percent.
    #[arg(long, default_value_t = 60.0)]
    minconf: f64,
    #[arg(long, default_value = "exact")]
    #[serde(serialize_with = "as_display")]
    match_policy: MatchPolicy,
    #[arg(long, default_value = "average")]
    #[serde(serialize_with = "as_display")]
    scoring: Scoring,
}

#[derive(Args, Debug)]
struct TagArgs {
    /// Input file; standard input when omitted.
    input: Option<PathBuf>,
    #[command(flatten)]
    tagging: TaggingArgs,
    #[command(flatten)]
    input_args: InputArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Model directory to create.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    tagging: TaggingArgs,
    #[command(flatten)]
    input_args: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Model directory written by `train`.
    #[arg(long)]
    model: PathBuf,
    /// Input file; standard input when omitted.
    input: Option<PathBuf>,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[arg(long, value_enum, default_value_t = EncodingArg::Utf8)]
    encoding: EncodingArg,
    /// `tags` reads one tag list per line (an empty line is the empty set).
    #[arg(long, value_enum, default_value_t = PredictFormat::Raw)]
    sentence_format: PredictFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CvArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[command(flatten)]
    tagging: TaggingArgs,
    #[command(flatten)]
    input_args: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    cv: CvArgs,
    /// `rules` is the associative classifier; `majority` and `oracle` are
    /// reference baselines.
    #[arg(long, value_enum, default_value_t = LearnerArg::Rules)]
    learner: LearnerArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    cv: CvArgs,
    /// Comma-separated minimum confidences.
    #[arg(long, value_delimiter = ',', default_value = "60,70,80,90")]
    grid: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum EncodingArg {
    #[value(name = "utf-8", alias = "utf8")]
    Utf8,
    #[value(name = "latin-1", alias = "latin1")]
    Latin1,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Utf8 => Encoding::Utf8,
            EncodingArg::Latin1 => Encoding::Latin1,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum InputFormat {
    Auto,
    Raw,
    Pretagged,
    Tags,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PredictFormat {
    Raw,
    Pretagged,
    Tags,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LearnerArg {
    Rules,
    Majority,
    Oracle,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ReportFormat {
    Json,
    Csv,
    Text,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn as_display<S: serde::Serializer, D: std::fmt::Display>(v: &D, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

// ---------------------------------------------------------------------------
// Shared plumbing

impl LexiconArgs {
    /// A relative path that does not exist here is looked up under the
    /// lexicon directory.
    fn resolve(&self, path: &Path) -> PathBuf {
        match &self.lexicon_dir {
            Some(dir) if path.is_relative() && !path.exists() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }

    fn load(&self) -> CliResult<Lexicon> {
        let dir = self.lexicon_dir.as_deref();
        let lexicon_path = match (&self.lexicon, dir) {
            (Some(p), _) => Some(self.resolve(p)),
            (None, Some(d)) => Some(d.join(LEXICON_FILE)),
            (None, None) => None,
        };
        let reversals_path = match (&self.reversals, dir) {
            (Some(p), _) => Some(self.resolve(p)),
            (None, Some(d)) if d.join(REVERSALS_FILE).exists() => Some(d.join(REVERSALS_FILE)),
            _ => None,
        };
        let mut lexicon = match &lexicon_path {
            Some(p) => Lexicon::load(p).map_err(|e| config_err(anyhow!("cannot load lexicon: {e}")))?,
            None => Lexicon::bundled(),
        };
        match (&reversals_path, &lexicon_path) {
            (Some(p), _) => lexicon
                .load_reversals(p)
                .map_err(|e| config_err(anyhow!("cannot load reversal list: {e}")))?,
            // A custom lexicon without a reversal list has no reversal terms.
            (None, Some(_)) => lexicon.set_reversals(Vec::<String>::new()).map_err(classify)?,
            (None, None) => {}
        }
        Ok(lexicon)
    }
}

struct Pipeline {
    pos: RuleTagger,
    tagger: SentenceTagger,
}

impl Pipeline {
    fn new(lexicon: Lexicon, reversal: bool) -> Self {
        Pipeline {
            pos: RuleTagger::new().with_lexicon(&lexicon),
            tagger: SentenceTagger::new(lexicon, reversal),
        }
    }

    fn sentence(&self, text: &str, pretagged: bool) -> finsent::Result<PosSentence> {
        if pretagged {
            ingest_pretagged(text)
        } else {
            tag_raw(text, &self.pos)
        }
    }

    fn tags(&self, text: &str, pretagged: bool) -> finsent::Result<TagSet> {
        Ok(self.tagger.tag(&self.sentence(text, pretagged)?).tags)
    }
}

fn read_input(path: Option<&Path>, encoding: Encoding) -> CliResult<String> {
    let mut bytes = Vec::new();
    match path {
        Some(p) => bytes = fs::read(p).map_err(|e| data_err(anyhow!("cannot read {}: {e}", p.display())))?,
        None => {
            io::stdin()
                .read_to_end(&mut bytes)
                .map_err(|e| data_err(anyhow!("cannot read standard input: {e}")))?;
        }
    }
    Ok(encoding.decode(&bytes))
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| data_err(anyhow!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| data_err(anyhow!("cannot write standard output: {e}")))
        }
    }
}

/// Splits `sentence@label` when the text after the last `@` is a polarity.
fn split_label(line: &str) -> (&str, Option<ClassLabel>) {
    if let Some((sentence, label)) = line.rsplit_once('@') {
        if let Ok(l) = label.trim().parse::<ClassLabel>() {
            return (sentence.trim(), Some(l));
        }
    }
    (line.trim(), None)
}

fn parse_transactions(text: &str) -> Option<Vec<Transaction>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.parse::<Transaction>().ok())
        .collect()
}

/// Reads a training/evaluation corpus into transactions.
fn load_transactions(path: &Path, tagging: &TaggingArgs, input: &InputArgs) -> CliResult<Vec<Transaction>> {
    let text = read_input(Some(path), input.encoding.into())?;
    let tagged = match input.sentence_format {
        InputFormat::Tags => Some(parse_transactions(&text).ok_or_else(|| {
            data_err(anyhow!("{}: expected `tags<TAB>label` lines", path.display()))
        })?),
        InputFormat::Auto => parse_transactions(&text),
        InputFormat::Raw | InputFormat::Pretagged => None,
    };
    let tx = match tagged {
        Some(tx) => tx,
        None => {
            let format = if input.sentence_format == InputFormat::Pretagged {
                SentenceFormat::Pretagged
            } else {
                SentenceFormat::Raw
            };
            let corpus = Corpus::parse(path.display().to_string(), &text, format)
                .map_err(|e| data_err(anyhow!("{}: {e}", path.display())))?;
            let pipeline = Pipeline::new(tagging.lexicon.load()?, tagging.reversal);
            corpus
                .to_transactions(&pipeline.tagger, &pipeline.pos)
                .map_err(classify)?
        }
    };
    if tx.is_empty() {
        return Err(data_err(anyhow!("{}: corpus is empty", path.display())));
    }
    Ok(tx)
}

fn check_percent(name: &str, value: f64) -> CliResult<()> {
    if value > 0.0 && value <= 100.0 {
        Ok(())
    } else {
        Err(config_err(anyhow!("--{name} must lie in (0, 100], got {value}")))
    }
}

fn model_config(tagging: &TaggingArgs, m: &ModelArgs) -> CliResult<ModelConfig> {
    check_percent("minsup", m.minsup)?;
    check_percent("minconf", m.minconf)?;
    Ok(ModelConfig {
        arrangement: m.classifier,
        minsup: m.minsup,
        minconf: m.minconf,
        mode: tagging.mode,
        reversal: tagging.reversal,
        predict: PredictOptions {
            match_policy: m.match_policy,
            scoring: m.scoring,
        },
        ..ModelConfig::default()
    })
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_tag(args: TagArgs) -> CliResult<()> {
    let pipeline = Pipeline::new(args.tagging.lexicon.load()?, args.tagging.reversal);
    let text = read_input(args.input.as_deref(), args.input_args.encoding.into())?;
    let pretagged = args.input_args.sentence_format == InputFormat::Pretagged;
    let mut out = String::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (sentence, label) = split_label(line);
        let tags = pipeline
            .tags(sentence, pretagged)
            .map_err(|e| data_err(anyhow!("line {}: {e}", i + 1)))?;
        out.push_str(&args.tagging.mode.filter(tags).to_string());
        if let Some(l) = label {
            out.push('\t');
            out.push_str(l.as_str());
        }
        out.push('\n');
    }
    write_output(args.out.as_deref(), &out)
}

fn cmd_train(args: TrainArgs) -> CliResult<()> {
    let config = model_config(&args.tagging, &args.model)?;
    let tx = load_transactions(&args.corpus, &args.tagging, &args.input_args)?;
    let model = finsent::classify::train(&tx, config).map_err(classify)?;
    for w in &model.warnings {
        eprintln!("warning: {w}");
    }
    model.save(&args.out).map_err(data_err)?;
    let mut out = String::new();
    for s in &model.stages {
        out.push_str(&format!("{}\t{} rules\n", s.name, s.rules.len()));
    }
    write_output(None, &out)
}

fn cmd_predict(args: PredictArgs) -> CliResult<()> {
    let model = ClassifierModel::load(&args.model).map_err(|e| config_err(anyhow!("cannot load model: {e}")))?;
    let text = read_input(args.input.as_deref(), args.encoding.into())?;
    let pipeline = match args.sentence_format {
        PredictFormat::Tags => None,
        _ => Some(Pipeline::new(args.lexicon.load()?, model.config.reversal)),
    };
    let mut out = String::new();
    for (i, line) in text.lines().enumerate() {
        let id = i + 1;
        let tags = match &pipeline {
            None => {
                let tags = line.split('\t').next().unwrap_or("");
                TagSet::parse(tags).map_err(|e| data_err(anyhow!("line {id}: {e}")))?
            }
            Some(p) => {
                if line.trim().is_empty() {
                    continue;
                }
                let (sentence, _) = split_label(line);
                p.tags(sentence, args.sentence_format == PredictFormat::Pretagged)
                    .map_err(|e| data_err(anyhow!("line {id}: {e}")))?
            }
        };
        out.push_str(&format!("{id}\t{}\n", model.predict(tags)));
    }
    write_output(args.out.as_deref(), &out)
}

/// Everything that determines a cross-validation run, embedded in reports.
#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    #[serde(flatten)]
    cv: &'a CvArgs,
    #[serde(skip_serializing_if = "Option::is_none")]
    learner: Option<LearnerArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<&'a [f64]>,
}

fn prepare_cv(cv: &CvArgs) -> CliResult<(ModelConfig, Vec<Transaction>, finsent::FoldPlan)> {
    let config = model_config(&cv.tagging, &cv.model)?;
    if cv.folds < 2 {
        return Err(config_err(anyhow!("--folds must be at least 2, got {}", cv.folds)));
    }
    let tx = load_transactions(&cv.corpus, &cv.tagging, &cv.input_args)?;
    let labels: Vec<ClassLabel> = tx.iter().map(|t| t.label).collect();
    let plan = make_folds(&labels, cv.folds, cv.seed).map_err(classify)?;
    Ok((config, tx, plan))
}

fn cmd_evaluate(args: EvaluateArgs) -> CliResult<()> {
    let (config, tx, plan) = prepare_cv(&args.cv)?;
    let mut report: EvalReport = match args.learner {
        LearnerArg::Rules => cross_validate(&tx, &plan, &RuleLearner { config }),
        LearnerArg::Majority => cross_validate(&tx, &plan, &MajorityLearner),
        LearnerArg::Oracle => cross_validate(&tx, &plan, &OracleLearner),
    }
    .map_err(classify)?;
    let run = RunConfig {
        command: "evaluate",
        cv: &args.cv,
        learner: Some(args.learner),
        grid: None,
    };
    report.config = Some(serde_json::to_value(run).map_err(data_err)?);
    let text = match args.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Text => report.to_text(),
    };
    write_output(args.out.as_deref(), &text)
}

fn cmd_sweep(args: SweepArgs) -> CliResult<()> {
    for &c in &args.grid {
        check_percent("grid", c)?;
    }
    let (config, tx, plan) = prepare_cv(&args.cv)?;
    let points = sweep_confidence(&tx, &plan, &config, &args.grid).map_err(classify)?;
    for p in &points {
        log::info!("minconf {}: {} rules, accuracy {:.4}", p.minconf, p.rule_count, p.report.overall_accuracy);
    }
    write_output(args.out.as_deref(), &sweep_csv(&points))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tag(a) => cmd_tag(a),
        Command::Train(a) => cmd_train(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Config(e) | Failure::Data(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}
