//! The `websplit` command line: build → split-data → train-split → train-gen
//! → run → eval.
//!
//! Exit codes: 0 on success, 1 for missing or invalid inputs and contract
//! violations, 2 when an output cannot be written (and for usage errors,
//! following clap).

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    build_corpus, corpus_stats, ingest, segment_entries, split_train_val_test, CorpusStats,
    IngestOptions, Segmenter, SplitRatios, WebSplitItem, DEFAULT_ABBREVIATIONS,
};
use crate::error::Error;
use crate::eval::{evaluate_system, EvalOptions, EvalReport, ReferenceSet};
use crate::generator::RetrievalIndex;
use crate::io::{self as files, meta_path, ArtifactMeta};
use crate::pipeline::{run_system, source_outputs, PipelineConfig, SystemOutput};
use crate::splitter::SplitModel;

pub const DEFAULT_SEED: u64 = 1;

/// Settings shared by every command, read from a TOML file. Relative paths
/// are resolved against the file's directory. Command-line flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub entries: Option<PathBuf>,
    pub items: Option<PathBuf>,
    pub abbrev: Option<PathBuf>,
    pub overrides: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub seed: Option<u64>,
    pub ratios: Option<SplitRatios>,
    pub lenient: Option<bool>,
    pub lowercase: Option<bool>,
    pub pretokenized: Option<bool>,
    pub use_context: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = files::read_text(path).map_err(Failure::input)?;
        let mut config: RunConfig = toml::from_str(&text)
            .map_err(|e| Failure::new(1, format!("{}: {}", path.display(), e.message())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut config.entries,
            &mut config.items,
            &mut config.abbrev,
            &mut config.overrides,
            &mut config.model,
            &mut config.index,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }
}

/// A command failure: the exit code plus the message printed to stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn input(e: Error) -> Self {
        let message = match &e {
            Error::Ingest(lines) => {
                let mut m = format!("{} malformed input line(s):", lines.len());
                for l in lines.iter().take(20) {
                    m.push_str(&format!("\n  {l}"));
                }
                if lines.len() > 20 {
                    m.push_str(&format!("\n  ... and {} more", lines.len() - 20));
                }
                m
            }
            _ => e.to_string(),
        };
        Failure::new(1, message)
    }

    fn output(e: Error) -> Self {
        Failure::new(if e.is_io() { 2 } else { 1 }, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Debug, Parser)]
#[command(name = "websplit", version, about = "Build a split-and-rephrase benchmark, train a partition-and-generate baseline and score it")]
struct Cli {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Print nothing but errors.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the corpus (websplit.jsonl, stats.json) from an entries file.
    Build(BuildArgs),
    /// Split items into train/val/test by distinct complex sentence.
    SplitData(SplitDataArgs),
    /// Train the split model on training items.
    TrainSplit(TrainArgs),
    /// Train the retrieval generator on training items.
    TrainGen(TrainArgs),
    /// Run the pipeline (or the SOURCE baseline) on test items.
    Run(RunArgs),
    /// Score system outputs against the test references.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Seed recorded in every artifact; drives the data split.
    #[arg(long)]
    seed: Option<u64>,
    /// Abbreviation lexicon, one entry per line.
    #[arg(long, value_name = "FILE")]
    abbrev: Option<PathBuf>,
    /// JSON object of hand-corrected segmentations.
    #[arg(long, value_name = "FILE")]
    overrides: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    common: Common,
    /// Entries file (JSON lines: {"mr": [...], "texts": [...]}).
    #[arg(long, value_name = "FILE")]
    entries: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Skip malformed entries instead of failing.
    #[arg(long)]
    lenient: bool,
    /// Write stats.json only.
    #[arg(long)]
    stats_only: bool,
}

#[derive(Debug, Args)]
struct SplitDataArgs {
    #[command(flatten)]
    common: Common,
    /// Corpus file written by `build`.
    #[arg(long, value_name = "FILE")]
    items: Option<PathBuf>,
    /// Output directory for train.jsonl, val.jsonl and test.jsonl.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Train,val,test proportions.
    #[arg(long, value_name = "R,R,R")]
    ratios: Option<SplitRatios>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    common: Common,
    /// Training items.
    #[arg(long, value_name = "FILE")]
    items: Option<PathBuf>,
    /// Model file to write.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Test items.
    #[arg(long, value_name = "FILE")]
    items: Option<PathBuf>,
    /// Split model from `train-split`.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Retrieval index from `train-gen`.
    #[arg(long, value_name = "FILE")]
    index: Option<PathBuf>,
    /// Outputs file to write (JSON lines).
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Copy each complex sentence unchanged instead of running the pipeline.
    #[arg(long, conflicts_with_all = ["model", "index"])]
    source: bool,
    /// Pass the complex sentence to the generator.
    #[arg(long)]
    use_context: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    /// Test items providing the references.
    #[arg(long, value_name = "FILE")]
    items: Option<PathBuf>,
    /// System outputs as NAME=FILE or FILE (named after the file stem).
    #[arg(long = "outputs", value_name = "[NAME=]FILE")]
    outputs: Vec<String>,
    /// Add a SOURCE row that copies the complex sentence.
    #[arg(long)]
    with_source: bool,
    /// Report file to write (JSON); the table goes next to it as .txt.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Lowercase hypotheses and references before scoring
    #[arg(long)]
    lowercase: bool,
    /// Treat texts as already tokenized (split on whitespace only)
    #[arg(long)]
    pretokenized: bool,
}

/// Runs the command line from the process arguments and returns the exit
/// code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli) -> CmdResult {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Build(a) => cmd_build(&config, a, cli.quiet),
        Command::SplitData(a) => cmd_split_data(&config, a, cli.quiet),
        Command::TrainSplit(a) => cmd_train_split(&config, a, cli.quiet),
        Command::TrainGen(a) => cmd_train_gen(&config, a, cli.quiet),
        Command::Run(a) => cmd_run(&config, a, cli.quiet),
        Command::Eval(a) => cmd_eval(&config, a, cli.quiet),
    }
}

fn required(flag: Option<PathBuf>, fallback: &Option<PathBuf>, name: &str) -> Result<PathBuf, Failure> {
    flag.or_else(|| fallback.clone())
        .ok_or_else(|| Failure::new(1, format!("missing --{name} (or `{name}` in the config file)")))
}

struct Context {
    quiet: bool,
    seed: u64,
    segmenter: Segmenter,
    lexicon_inputs: Vec<PathBuf>,
}

impl Context {
    fn new(common: &Common, config: &RunConfig, quiet: bool) -> Result<Self, Failure> {
        let seed = common.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
        let abbrev = common.abbrev.clone().or_else(|| config.abbrev.clone());
        let overrides = common.overrides.clone().or_else(|| config.overrides.clone());
        let mut lexicon_inputs = Vec::new();
        let mut segmenter = match &abbrev {
            Some(p) => {
                lexicon_inputs.push(p.clone());
                Segmenter::new(Segmenter::load_abbreviations(p).map_err(Failure::input)?)
            }
            None => Segmenter::new(DEFAULT_ABBREVIATIONS.iter().map(|s| s.to_string())),
        };
        if let Some(p) = &overrides {
            lexicon_inputs.push(p.clone());
            let table = Segmenter::load_overrides(p).map_err(Failure::input)?;
            segmenter = segmenter.with_overrides(table).map_err(Failure::input)?;
        }
        Ok(Context {
            quiet,
            seed,
            segmenter,
            lexicon_inputs,
        })
    }

    fn meta(&self, command: &str, inputs: &[&Path]) -> Result<ArtifactMeta, Failure> {
        let mut meta = ArtifactMeta::new(command, self.seed);
        for p in inputs.iter().copied().chain(self.lexicon_inputs.iter().map(PathBuf::as_path)) {
            meta.input(p).map_err(Failure::input)?;
        }
        Ok(meta)
    }

    fn items(&self, path: &Path) -> Result<Vec<WebSplitItem>, Failure> {
        files::read_items(path, &self.segmenter).map_err(Failure::input)
    }
}

fn write_meta(artifact: &Path, meta: &ArtifactMeta) -> CmdResult {
    files::write_json(&meta_path(artifact), meta).map_err(Failure::output)
}

impl Context {
    /// Progress goes to stderr so stdout carries only results.
    fn say(&self, line: impl std::fmt::Display) {
        if !self.quiet {
            let _ = writeln!(std::io::stderr(), "{line}");
        }
    }
}

#[derive(Debug, Serialize)]
struct BuildStats {
    entries: usize,
    verbalisations: usize,
    within_entry: usize,
    across_entry: usize,
    /// Across-entry items identical to a within-entry item.
    overlap: usize,
    invariant_violations: usize,
    corpus: CorpusStats,
}

fn cmd_build(config: &RunConfig, a: BuildArgs, quiet: bool) -> CmdResult {
    let ctx = Context::new(&a.common, config, quiet)?;
    let entries_path = required(a.entries, &config.entries, "entries")?;
    let options = IngestOptions {
        lenient: a.lenient || config.lenient.unwrap_or(false),
    };
    let records = ingest(&entries_path, options).map_err(Failure::input)?;
    let entries = segment_entries(records, &ctx.segmenter);
    let corpus = build_corpus(&entries);
    let violations = corpus.items.iter().filter(|i| i.validate().is_err()).count();
    let stats = BuildStats {
        entries: entries.len(),
        verbalisations: entries.iter().map(|e| e.verbalisations.len()).sum(),
        within_entry: corpus.within_entry,
        across_entry: corpus.across_entry,
        overlap: corpus.overlap,
        invariant_violations: violations,
        corpus: corpus_stats(&corpus.items),
    };
    if violations > 0 {
        return Err(Failure::new(1, format!("{violations} constructed item(s) violate the item invariants")));
    }

    let meta = ctx.meta("build", &[&entries_path])?;
    let stats_path = a.out.join("stats.json");
    files::write_json(&stats_path, &stats).map_err(Failure::output)?;
    write_meta(&stats_path, &meta)?;
    if !a.stats_only {
        let items_path = a.out.join("websplit.jsonl");
        files::write_items(&items_path, &corpus.items).map_err(Failure::output)?;
        write_meta(&items_path, &meta)?;
    }
    ctx.say(format_args!(
        "{} entries -> {} items ({} distinct pairs, {} complex sentences)",
        stats.entries,
        corpus.items.len(),
        stats.corpus.distinct_pairs,
        stats.corpus.distinct_complex_sentences
    ));
    Ok(())
}

fn cmd_split_data(config: &RunConfig, a: SplitDataArgs, quiet: bool) -> CmdResult {
    let ctx = Context::new(&a.common, config, quiet)?;
    let items_path = required(a.items, &config.items, "items")?;
    let ratios = a.ratios.or(config.ratios).unwrap_or_default();
    let items = ctx.items(&items_path)?;
    let split = split_train_val_test(items, ratios, ctx.seed);
    let mut meta = ctx.meta("split-data", &[&items_path])?;
    meta.detail("ratios", ratios);
    for (name, part) in [("train", &split.train), ("val", &split.val), ("test", &split.test)] {
        let path = a.out.join(format!("{name}.jsonl"));
        files::write_items(&path, part).map_err(Failure::output)?;
        let complexes = ReferenceSet::from_items(part).len();
        let mut m = meta.clone();
        m.detail("items", part.len()).detail("complex_sentences", complexes);
        write_meta(&path, &m)?;
        ctx.say(format_args!("{name}: {} items, {complexes} complex sentences", part.len()));
    }
    Ok(())
}

fn cmd_train_split(config: &RunConfig, a: TrainArgs, quiet: bool) -> CmdResult {
    let ctx = Context::new(&a.common, config, quiet)?;
    let items_path = required(a.items, &config.items, "items")?;
    let items = ctx.items(&items_path)?;
    let model = SplitModel::train(&items);
    files::write_text(&a.out, &model.to_json()).map_err(Failure::output)?;
    let mut meta = ctx.meta("train-split", &[&items_path])?;
    meta.detail("skeletons", model.skeleton_count())
        .detail("patterns", model.pattern_count())
        .detail("mean_candidates", model.mean_candidates());
    write_meta(&a.out, &meta)?;
    ctx.say(format_args!(
        "{} skeletons, {} patterns, {:.2} candidates per skeleton",
        model.skeleton_count(),
        model.pattern_count(),
        model.mean_candidates()
    ));
    Ok(())
}

fn cmd_train_gen(config: &RunConfig, a: TrainArgs, quiet: bool) -> CmdResult {
    let ctx = Context::new(&a.common, config, quiet)?;
    let items_path = required(a.items, &config.items, "items")?;
    let items = ctx.items(&items_path)?;
    let index = RetrievalIndex::from_items(&items);
    files::write_text(&a.out, &index.to_json()).map_err(Failure::output)?;
    let mut meta = ctx.meta("train-gen", &[&items_path])?;
    meta.detail("exact_entries", index.exact_len());
    write_meta(&a.out, &meta)?;
    ctx.say(format_args!("{} exact-match entries", index.exact_len()));
    Ok(())
}

fn cmd_run(config: &RunConfig, a: RunArgs, quiet: bool) -> CmdResult {
    let ctx = Context::new(&a.common, config, quiet)?;
    let items_path = required(a.items, &config.items, "items")?;
    let items = ctx.items(&items_path)?;
    let (outputs, meta) = if a.source {
        (source_outputs(&items), ctx.meta("run --source", &[&items_path])?)
    } else {
        let model_path = required(a.model, &config.model, "model")?;
        let index_path = required(a.index, &config.index, "index")?;
        let model_json = files::read_text(&model_path).map_err(Failure::input)?;
        let model = SplitModel::from_json(&model_json).map_err(Failure::input)?;
        let index_json = files::read_text(&index_path).map_err(Failure::input)?;
        let index = RetrievalIndex::from_json(&index_json).map_err(Failure::input)?;
        let use_context = a.use_context || config.use_context.unwrap_or(false);
        let pipeline = PipelineConfig {
            splitter: &model,
            generator: &index,
            use_context,
        };
        let mut meta = ctx.meta("run", &[&items_path, &model_path, &index_path])?;
        meta.detail("use_context", use_context);
        (run_system(&pipeline, &items), meta)
    };
    files::write_outputs(&a.out, &outputs).map_err(Failure::output)?;
    write_meta(&a.out, &meta)?;
    ctx.say(format_args!("{} outputs", outputs.len()));
    Ok(())
}

fn parse_output_spec(spec: &str) -> (String, PathBuf) {
    match spec.split_once('=') {
        Some((name, path)) if !name.is_empty() => (name.to_string(), PathBuf::from(path)),
        _ => {
            let path = PathBuf::from(spec);
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| spec.to_string());
            (name, path)
        }
    }
}

fn cmd_eval(config: &RunConfig, a: EvalArgs, quiet: bool) -> CmdResult {
    let ctx = Context::new(&a.common, config, quiet)?;
    let items_path = required(a.items, &config.items, "items")?;
    if a.outputs.is_empty() && !a.with_source {
        return Err(Failure::new(1, "nothing to evaluate: give --outputs or --with-source"));
    }
    let options = EvalOptions {
        lowercase: a.lowercase || config.lowercase.unwrap_or(false),
        pretokenized: a.pretokenized || config.pretokenized.unwrap_or(false),
    };
    let items = ctx.items(&items_path)?;
    let references = ReferenceSet::from_items(&items);

    let mut systems: Vec<(String, Vec<SystemOutput>)> = Vec::new();
    let mut inputs = vec![items_path.clone()];
    if a.with_source {
        systems.push(("SOURCE".to_string(), source_outputs(&items)));
    }
    for spec in &a.outputs {
        let (name, path) = parse_output_spec(spec);
        let outs = files::read_outputs(&path).map_err(Failure::input)?;
        systems.push((name, outs));
        inputs.push(path);
    }

    let mut report = EvalReport {
        options,
        systems: Vec::with_capacity(systems.len()),
    };
    for (name, outs) in &systems {
        let row = evaluate_system(name, outs, &references, &ctx.segmenter, options)
            .map_err(|e| Failure::new(1, format!("{name}: {e}")))?;
        report.systems.push(row);
    }

    let table = report.table();
    if !ctx.quiet {
        print!("{table}");
    }
    if let Some(out) = &a.out {
        files::write_json(out, &report).map_err(Failure::output)?;
        files::write_text(&out.with_extension("txt"), &table).map_err(Failure::output)?;
        let refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
        let mut meta = ctx.meta("eval", &refs)?;
        meta.detail("options", options);
        write_meta(out, &meta)?;
    }
    Ok(())
}
