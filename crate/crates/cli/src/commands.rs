//! Implementations of the four subcommands.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use rid_core::estimation::{default_p_epsilon_grid, fit_from_history, tune_p_epsilon};
use rid_core::evalkit::{evaluate_dataset, score_entry, MarkMode, ParamSource, ScorerConfig};
use rid_core::intervals::IntervalModel;
use rid_core::model::{EventSequence, MarkModel};
use rid_core::synth::{gen_dataset, GenSpec};

use crate::formats;
use crate::{CliError, FamilyArg};

pub fn mode_of_flags(use_marks: bool, _intervals_only: bool, marks_only: bool) -> MarkMode {
    if use_marks {
        MarkMode::Combined
    } else if marks_only {
        MarkMode::MarksOnly
    } else {
        MarkMode::IntervalsOnly
    }
}

fn check_probability(name: &str, value: f64) -> Result<(), CliError> {
    if !(value > 0.0 && value < 1.0) {
        return Err(CliError::usage(format!(
            "--{name} must lie in the open interval (0, 1), got {value}"
        )));
    }
    Ok(())
}

pub struct GenerateArgs {
    pub family: FamilyArg,
    pub shape: f64,
    pub rate: f64,
    pub n_events: usize,
    pub n_entries: usize,
    pub injection_rate: f64,
    pub positive_fraction: f64,
    pub seed: u64,
    pub process_marks: Option<(f64, f64)>,
    pub intrusion_marks: Option<(f64, f64)>,
    pub out: PathBuf,
}

pub fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let interval_model = IntervalModel::new(args.family.into(), args.shape, args.rate)
        .map_err(|e| CliError::usage(e.to_string()))?;
    check_probability("injection-rate", args.injection_rate)?;
    let mut spec = GenSpec::new(args.n_events, interval_model, args.injection_rate, args.seed)
        .map_err(|e| CliError::usage(e.to_string()))?
        .with_positive_fraction(args.positive_fraction)
        .map_err(|e| CliError::usage(e.to_string()))?;
    if let (Some((pmu, psigma)), Some((imu, isigma))) = (args.process_marks, args.intrusion_marks)
    {
        let process = MarkModel::log_normal(pmu, psigma).map_err(|e| CliError::usage(e.to_string()))?;
        let intrusion =
            MarkModel::log_normal(imu, isigma).map_err(|e| CliError::usage(e.to_string()))?;
        spec = spec.with_mark_models(process, intrusion);
    }
    let data = gen_dataset(&spec, args.n_entries).map_err(|e| CliError::usage(e.to_string()))?;
    let records: Vec<_> = data
        .iter()
        .enumerate()
        .map(|(i, seq)| formats::entry_record(format!("entry-{i:05}"), seq))
        .collect();
    formats::write_ndjson(&args.out, &records)?;
    let positives = data.iter().filter(|s| s.has_intrusion_label()).count();
    println!(
        "wrote {} entries ({} positive, {} negative) to {}",
        data.len(),
        positives,
        data.len() - positives,
        args.out.display()
    );
    Ok(())
}

pub fn fit(input: &Path, family: FamilyArg, use_marks: bool, out: &Path) -> Result<(), CliError> {
    let dataset = formats::read_dataset(input)?;
    let sequences: Vec<EventSequence> = dataset.into_iter().map(|(_, s)| s).collect();
    let (intervals, marks) = fit_from_history(family.into(), &sequences, use_marks)?;
    formats::write_params(out, &intervals, marks.as_ref())?;
    match marks {
        Some(m) => println!(
            "fitted {} shape={:.6} rate={:.6}, marks mu={:.6} sigma={:.6}",
            intervals.family(),
            intervals.shape(),
            intervals.rate(),
            m.mu(),
            m.sigma()
        ),
        None => println!(
            "fitted {} shape={:.6} rate={:.6}",
            intervals.family(),
            intervals.shape(),
            intervals.rate()
        ),
    }
    Ok(())
}

fn scorer_config(
    params: Option<&Path>,
    em: bool,
    family: FamilyArg,
    p_epsilon: f64,
    mode: MarkMode,
) -> Result<ScorerConfig, CliError> {
    let params = match (params, em) {
        (Some(path), false) => {
            let (intervals, marks) = formats::read_params(path)?;
            if mode.uses_marks() && marks.is_none() {
                return Err(CliError::usage(format!(
                    "the selected mark mode needs mark parameters, but {} has none",
                    path.display()
                )));
            }
            ParamSource::Known { intervals, marks }
        }
        (None, true) => ParamSource::PerEntryEm {
            family: family.into(),
        },
        // clap's argument group guarantees exactly one source.
        _ => unreachable!("argument parsing enforces exactly one parameter source"),
    };
    Ok(ScorerConfig {
        p_epsilon,
        mode,
        params,
    })
}

pub struct ScoreArgs {
    pub input: PathBuf,
    pub params: Option<PathBuf>,
    pub em: bool,
    pub family: FamilyArg,
    pub p_epsilon: f64,
    pub mode: MarkMode,
    pub out: PathBuf,
}

pub fn score(args: ScoreArgs) -> Result<(), CliError> {
    check_probability("p-epsilon", args.p_epsilon)?;
    let cfg = scorer_config(
        args.params.as_deref(),
        args.em,
        args.family,
        args.p_epsilon,
        args.mode,
    )?;
    let dataset = formats::read_dataset(&args.input)?;
    let outcomes: Vec<_> = dataset
        .par_iter()
        .map(|(_, seq)| score_entry(seq, &cfg))
        .collect();
    let mut records = Vec::with_capacity(outcomes.len());
    for ((id, _), outcome) in dataset.iter().zip(outcomes) {
        let s = outcome.map_err(|e| CliError::data(format!("entry {id}: {e}")))?;
        records.push(formats::score_record(
            id.clone(),
            s.intrusion_probability,
            s.log_marginal,
            &s.map_indices,
            s.event_marginals,
        ));
    }
    formats::write_ndjson(&args.out, &records)?;
    println!("scored {} entries to {}", records.len(), args.out.display());
    Ok(())
}

pub struct EvaluateArgs {
    pub input: PathBuf,
    pub params: Option<PathBuf>,
    pub em: bool,
    pub family: FamilyArg,
    pub p_epsilon: Option<f64>,
    pub tune_split: Option<f64>,
    pub mode: MarkMode,
    pub roc_out: Option<PathBuf>,
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let dataset = formats::read_dataset(&args.input)?;
    let sequences: Vec<EventSequence> = dataset.iter().map(|(_, s)| s.clone()).collect();

    let (p_epsilon, eval_slice): (f64, &[EventSequence]) = match (args.p_epsilon, args.tune_split)
    {
        (Some(p), None) => {
            check_probability("p-epsilon", p)?;
            (p, &sequences)
        }
        (None, Some(fraction)) => {
            check_probability("tune-split", fraction)?;
            let n_train = ((sequences.len() as f64 * fraction).ceil() as usize)
                .clamp(2, sequences.len().saturating_sub(2));
            let (train, test) = sequences.split_at(n_train);
            let tuned = tune_p_epsilon(
                train,
                &default_p_epsilon_grid(),
                args.family.into(),
                args.mode.uses_marks(),
            )?;
            eprintln!("tuned p-epsilon = {tuned:.6} on {n_train} training entries");
            (tuned, test)
        }
        // clap's argument group guarantees exactly one prior source.
        _ => unreachable!("argument parsing enforces exactly one prior source"),
    };

    let cfg = scorer_config(
        args.params.as_deref(),
        args.em,
        args.family,
        p_epsilon,
        args.mode,
    )?;
    let report = evaluate_dataset(eval_slice, &cfg)?;
    if let Some(path) = &args.roc_out {
        formats::write_roc_csv(path, &report)?;
    }
    let record = formats::ReportRecord::new(p_epsilon, &report);
    let json = serde_json::to_string(&record)
        .map_err(|e| CliError::data(format!("serialization error: {e}")))?;
    println!("{json}");
    Ok(())
}
