//! `rid` — intrusion detection in renewal processes.
//!
//! Subcommands: `generate` synthetic labeled datasets, `fit` process
//! parameters from history, `score` sequences (posterior intrusion
//! probability, MAP subsequence, per-event marginals), and `evaluate`
//! labeled datasets (AUC, Jaccard, ROC tables).
//!
//! Exit codes: 0 success, 1 data or runtime error, 2 usage error.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

/// CLI failure carrying the exit code.
#[derive(Debug)]
pub struct CliError {
    message: String,
    usage: bool,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            usage: true,
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            usage: false,
        }
    }
}

impl From<rid_core::Error> for CliError {
    fn from(e: rid_core::Error) -> Self {
        CliError::data(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Exponential,
    Gamma,
}

impl From<FamilyArg> for rid_core::intervals::Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Exponential => rid_core::intervals::Family::Exponential,
            FamilyArg::Gamma => rid_core::intervals::Family::Gamma,
        }
    }
}

#[derive(Parser)]
#[command(name = "rid", version, about = "Intrusion detection in renewal processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic labeled dataset.
    #[command(group(ArgGroup::new("marks").multiple(true).requires_all(
        ["process_mark_mu", "process_mark_sigma", "intrusion_mark_mu", "intrusion_mark_sigma"])))]
    Generate {
        /// Interval distribution family.
        #[arg(long, value_enum, default_value = "gamma")]
        family: FamilyArg,
        /// Gamma shape (must exceed 0.5; exponential fixes it at 1).
        #[arg(long, default_value_t = 1.0)]
        shape: f64,
        /// Interval rate parameter.
        #[arg(long)]
        rate: f64,
        /// Events per entry.
        #[arg(long, default_value_t = 20)]
        n_events: usize,
        /// Entries in the dataset.
        #[arg(long)]
        n_entries: usize,
        /// Per-event intrusion probability used by the generator.
        #[arg(long, default_value_t = 0.2)]
        injection_rate: f64,
        /// Fraction of entries that contain an intrusion.
        #[arg(long, default_value_t = 0.5)]
        positive_fraction: f64,
        /// Generator seed; fixed seeds reproduce byte-identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Log-normal mark parameters for process events.
        #[arg(long, group = "marks")]
        process_mark_mu: Option<f64>,
        #[arg(long, group = "marks")]
        process_mark_sigma: Option<f64>,
        /// Log-normal mark parameters for intrusion events.
        #[arg(long, group = "marks")]
        intrusion_mark_mu: Option<f64>,
        #[arg(long, group = "marks")]
        intrusion_mark_sigma: Option<f64>,
        /// Output dataset path (newline-delimited records).
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit process parameters from a dataset, assuming no intrusions.
    Fit {
        /// Input dataset path.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "gamma")]
        family: FamilyArg,
        /// Also fit a log-normal mark model.
        #[arg(long)]
        use_marks: bool,
        /// Output parameters path (JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Score every entry of a dataset.
    #[command(group(ArgGroup::new("params_source").required(true).args(["params", "em"])))]
    #[command(group(ArgGroup::new("mode").args(["use_marks", "intervals_only", "marks_only"])))]
    Score {
        /// Input dataset path.
        #[arg(long = "in")]
        input: PathBuf,
        /// Known-parameters file (from `fit`).
        #[arg(long)]
        params: Option<PathBuf>,
        /// Estimate parameters per entry by expectation-maximization.
        #[arg(long)]
        em: bool,
        /// Interval family for `--em`.
        #[arg(long, value_enum, default_value = "gamma")]
        family: FamilyArg,
        /// Prior per-event intrusion probability, in (0, 1).
        #[arg(long)]
        p_epsilon: f64,
        /// Combine marks and intervals.
        #[arg(long)]
        use_marks: bool,
        /// Intervals alone (the default mode).
        #[arg(long)]
        intervals_only: bool,
        /// Marks alone over a fitted exponential baseline.
        #[arg(long)]
        marks_only: bool,
        /// Output scores path (newline-delimited records).
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate scoring quality on a labeled dataset.
    #[command(group(ArgGroup::new("params_source").required(true).args(["params", "em"])))]
    #[command(group(ArgGroup::new("mode").args(["use_marks", "intervals_only", "marks_only"])))]
    #[command(group(ArgGroup::new("prior").required(true).args(["p_epsilon", "tune_split"])))]
    Evaluate {
        /// Input labeled dataset path.
        #[arg(long = "in")]
        input: PathBuf,
        /// Known-parameters file (from `fit`).
        #[arg(long)]
        params: Option<PathBuf>,
        /// Estimate parameters per entry by expectation-maximization.
        #[arg(long)]
        em: bool,
        /// Interval family for `--em`.
        #[arg(long, value_enum, default_value = "gamma")]
        family: FamilyArg,
        /// Prior per-event intrusion probability, in (0, 1).
        #[arg(long)]
        p_epsilon: Option<f64>,
        /// Tune the prior by AUC on this leading fraction of the data,
        /// then evaluate on the remainder (requires `--em`).
        #[arg(long, requires = "em")]
        tune_split: Option<f64>,
        #[arg(long)]
        use_marks: bool,
        #[arg(long)]
        intervals_only: bool,
        #[arg(long)]
        marks_only: bool,
        /// Optional ROC table output (CSV: level,threshold,fpr,tpr).
        #[arg(long)]
        roc_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate {
            family,
            shape,
            rate,
            n_events,
            n_entries,
            injection_rate,
            positive_fraction,
            seed,
            process_mark_mu,
            process_mark_sigma,
            intrusion_mark_mu,
            intrusion_mark_sigma,
            out,
        } => commands::generate(commands::GenerateArgs {
            family,
            shape,
            rate,
            n_events,
            n_entries,
            injection_rate,
            positive_fraction,
            seed,
            process_marks: process_mark_mu.zip(process_mark_sigma),
            intrusion_marks: intrusion_mark_mu.zip(intrusion_mark_sigma),
            out,
        }),
        Command::Fit {
            input,
            family,
            use_marks,
            out,
        } => commands::fit(&input, family, use_marks, &out),
        Command::Score {
            input,
            params,
            em,
            family,
            p_epsilon,
            use_marks,
            intervals_only,
            marks_only,
            out,
        } => commands::score(commands::ScoreArgs {
            input,
            params,
            em,
            family,
            p_epsilon,
            mode: commands::mode_of_flags(use_marks, intervals_only, marks_only),
            out,
        }),
        Command::Evaluate {
            input,
            params,
            em,
            family,
            p_epsilon,
            tune_split,
            use_marks,
            intervals_only,
            marks_only,
            roc_out,
        } => commands::evaluate(commands::EvaluateArgs {
            input,
            params,
            em,
            family,
            p_epsilon,
            tune_split,
            mode: commands::mode_of_flags(use_marks, intervals_only, marks_only),
            roc_out,
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(if e.usage { 2 } else { 1 })
        }
    }
}
