//! Command-line front end.
//!
//! Exactly one input is required: `--scenario <path>`, `--preset <name>`,
//! `--corpus <path>` or `--list-presets`. `--seed` and `--trials` replace the
//! values written in the scenario document; everything else comes from the
//! document.
//!
//! Exit status: 0 on success (including runs where only some trials
//! aborted, and trials aborted by erasing an escaped subsystem, which is an
//! expected result), 1 on bad arguments, unreadable input or a scenario
//! parse error, 2 when every trial aborted with a runtime error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Parser, ValueEnum};
use qcopy_core::infometrics::{build_ngram, observer_surprisal, NGramModel, Recipient};
use qcopy_core::scenario::{parse_scenario, RunReport, Scenario};

use crate::{presets, report, run_parallel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Encoding {
    /// Unicode scalar values.
    Utf8,
    /// Raw bytes.
    Bytes,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "qcopy", version, about = "Run quantum copying scenarios and write reports")]
#[command(group(ArgGroup::new("input").required(true).args(["scenario", "preset", "list_presets", "corpus"])))]
pub struct CliConfig {
    /// Scenario document to run.
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Shipped scenario to run (see --list-presets).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Base seed; trial k uses seed + k. Overrides the document.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of trials. Overrides the document.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: Option<u32>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Print the names of the shipped scenarios.
    #[arg(long)]
    pub list_presets: bool,
    /// Training corpus for an n-gram recipient; prints its surprisal on --evaluate.
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Text to score; defaults to the corpus itself.
    #[arg(long, value_name = "PATH", requires = "corpus")]
    pub evaluate: Option<PathBuf>,
    /// Model order; 0 is the symbol-frequency model.
    #[arg(long, default_value_t = 1, requires = "corpus")]
    pub order: usize,
    /// How corpus files are split into symbols.
    #[arg(long, value_enum, default_value_t = Encoding::Utf8, requires = "corpus")]
    pub encoding: Encoding,
}

/// Failure that ends the process with a nonzero status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: qcopy_core::scenario::ParseError },
    #[error("unknown preset `{0}` (try --list-presets)")]
    UnknownPreset(String),
    #[error("{0}")]
    Core(#[from] qcopy_core::Error),
    #[error("{path}: not valid UTF-8 (use --encoding bytes)")]
    Encoding { path: String },
}

impl CliError {
    fn io(path: impl Into<String>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&config, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

pub fn execute(config: &CliConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    if config.list_presets {
        let mut text = String::new();
        for name in presets::names() {
            text.push_str(name);
            text.push('\n');
        }
        emit(config, text.as_bytes(), stdout)?;
        return Ok(0);
    }
    if let Some(corpus) = &config.corpus {
        let value = corpus_surprisal(config, corpus)?;
        let line = format!("{}\n", report::format_sig9(value));
        emit(config, line.as_bytes(), stdout)?;
        return Ok(0);
    }

    let (source, text) = load(config)?;
    let mut scenario: Scenario =
        parse_scenario(&text).map_err(|e| CliError::Parse { path: source.clone(), source: e })?;
    if let Some(seed) = config.seed {
        scenario.seed = seed;
    }
    if let Some(trials) = config.trials {
        scenario.trials = trials;
    }

    let run = run_parallel(&scenario)?;
    let mut buf = Vec::new();
    match config.format {
        Format::Csv => report::write_csv(&run, &mut buf),
        Format::Text => report::write_text(&run, &source, &mut buf),
    }
    .map_err(|e| CliError::io("<report>", e))?;
    emit(config, &buf, stdout)?;

    for t in run.trials.iter().filter(|t| t.failure.is_some()) {
        let f = t.failure.as_ref().expect("filtered");
        let _ = writeln!(stderr, "{source}: trial {} aborted at step {}: {}", t.trial, f.step, f.error);
    }
    Ok(exit_status(&run))
}

/// 2 when every trial aborted on a runtime error other than erasing an
/// escaped subsystem, 0 otherwise.
pub fn exit_status(run: &RunReport) -> i32 {
    let runtime_failure = |t: &qcopy_core::scenario::TrialReport| {
        t.failure
            .as_ref()
            .is_some_and(|f| !matches!(f.error, qcopy_core::Error::EscapedSubsystem { .. }))
    };
    if !run.trials.is_empty() && run.trials.iter().all(runtime_failure) {
        2
    } else {
        0
    }
}

fn load(config: &CliConfig) -> Result<(String, String), CliError> {
    if let Some(path) = &config.scenario {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| CliError::io(shown.clone(), e))?;
        Ok((shown, text))
    } else {
        let name = config.preset.as_deref().expect("clap enforces an input");
        let text = presets::preset(name).ok_or_else(|| CliError::UnknownPreset(name.to_string()))?;
        Ok((format!("preset {name}"), text.to_string()))
    }
}

fn emit(config: &CliConfig, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match &config.out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::io(path.display().to_string(), e)),
        None => stdout.write_all(bytes).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn corpus_surprisal(config: &CliConfig, corpus: &PathBuf) -> Result<f64, CliError> {
    let read = |p: &PathBuf| fs::read(p).map_err(|e| CliError::io(p.display().to_string(), e));
    let train = read(corpus)?;
    let eval = match &config.evaluate {
        Some(p) => read(p)?,
        None => train.clone(),
    };
    match config.encoding {
        Encoding::Bytes => score(&train, &eval, config.order),
        Encoding::Utf8 => {
            let chars = |bytes: Vec<u8>, p: &PathBuf| {
                String::from_utf8(bytes)
                    .map(|s| s.chars().collect::<Vec<_>>())
                    .map_err(|_| CliError::Encoding { path: p.display().to_string() })
            };
            let train = chars(train, corpus)?;
            let eval = chars(eval, config.evaluate.as_ref().unwrap_or(corpus))?;
            score(&train, &eval, config.order)
        }
    }
}

fn score<S: Ord + Clone>(train: &[S], eval: &[S], order: usize) -> Result<f64, CliError> {
    let model: NGramModel<S> = build_ngram(train, order)?.with_alphabet(eval.iter().cloned());
    Ok(observer_surprisal(&Recipient::Model(model), eval)?)
}
