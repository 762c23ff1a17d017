//! File formats: newline-delimited JSON for datasets and scores, JSON for
//! fitted parameters, CSV for ROC tables.
//!
//! Numbers are serialized in shortest-round-trip form, so writing and
//! re-parsing a file reproduces the doubles exactly and identical inputs
//! produce byte-identical outputs.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use rid_core::evalkit::{EvalReport, RocPoint};
use rid_core::intervals::{Family, IntervalModel};
use rid_core::model::{Event, EventLabel, EventSequence, MarkModel};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
struct EventRecord {
    t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mark: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<u8>,
}

/// One dataset entry as stored on disk.
#[derive(Debug, Serialize, Deserialize)]
pub struct EntryRecord {
    pub entry_id: String,
    t_start: f64,
    t_end: f64,
    events: Vec<EventRecord>,
}

/// One score record per entry; `map_indices` are 0-based positions into the
/// entry's events array.
#[derive(Debug, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub entry_id: String,
    pub intrusion_probability: f64,
    pub log_marginal: f64,
    pub map_indices: Vec<usize>,
    pub event_marginals: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MarkParamsRecord {
    pub mu: f64,
    pub sigma: f64,
}

/// Fitted parameters file.
#[derive(Debug, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub family: String,
    pub shape: f64,
    pub rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mark: Option<MarkParamsRecord>,
}

#[derive(Debug, Serialize)]
struct RocRecord {
    /// `None` encodes the `+inf` threshold anchoring the curve at (0, 0).
    threshold: Option<f64>,
    fpr: f64,
    tpr: f64,
}

/// Evaluation report as emitted on standard output.
#[derive(Debug, Serialize)]
pub struct ReportRecord {
    pub p_epsilon: f64,
    pub n_entries: usize,
    pub entry_auc: f64,
    pub event_auc: f64,
    pub mean_jaccard: f64,
    pub mean_jaccard_positive: f64,
    pub mean_posterior_positive: f64,
    pub mean_posterior_negative: f64,
    roc_entry: Vec<RocRecord>,
    roc_event: Vec<RocRecord>,
}

fn roc_records(points: &[RocPoint]) -> Vec<RocRecord> {
    points
        .iter()
        .map(|p| RocRecord {
            threshold: p.threshold.is_finite().then_some(p.threshold),
            fpr: p.fpr,
            tpr: p.tpr,
        })
        .collect()
}

impl ReportRecord {
    pub fn new(p_epsilon: f64, report: &EvalReport) -> Self {
        Self {
            p_epsilon,
            n_entries: report.n_entries,
            entry_auc: report.entry_auc,
            event_auc: report.event_auc,
            mean_jaccard: report.mean_jaccard,
            mean_jaccard_positive: report.mean_jaccard_positive,
            mean_posterior_positive: report.mean_posterior_positive,
            mean_posterior_negative: report.mean_posterior_negative,
            roc_entry: roc_records(&report.roc_entry),
            roc_event: roc_records(&report.roc_event),
        }
    }
}

pub fn entry_record(entry_id: String, seq: &EventSequence) -> EntryRecord {
    EntryRecord {
        entry_id,
        t_start: seq.t_start(),
        t_end: seq.t_end(),
        events: seq
            .events()
            .iter()
            .map(|e| EventRecord {
                t: e.t,
                mark: e.mark,
                label: e.label.map(|l| match l {
                    EventLabel::Process => 0,
                    EventLabel::Intrusion => 1,
                }),
            })
            .collect(),
    }
}

fn sequence_of_record(record: &EntryRecord) -> Result<EventSequence, CliError> {
    let mut events = Vec::with_capacity(record.events.len());
    for (i, e) in record.events.iter().enumerate() {
        let label = match e.label {
            None => None,
            Some(0) => Some(EventLabel::Process),
            Some(1) => Some(EventLabel::Intrusion),
            Some(other) => {
                return Err(CliError::data(format!(
                    "entry {}: event {i} field `label` must be 0 or 1, got {other}",
                    record.entry_id
                )))
            }
        };
        events.push(Event {
            t: e.t,
            mark: e.mark,
            label,
        });
    }
    EventSequence::new(record.t_start, record.t_end, events)
        .map_err(|e| CliError::data(format!("entry {}: {e}", record.entry_id)))
}

/// Read a newline-delimited dataset, validating every entry.
pub fn read_dataset(path: &Path) -> Result<Vec<(String, EventSequence)>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path.display())))?;
    let mut dataset = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::data(format!("read error: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: EntryRecord = serde_json::from_str(&line).map_err(|e| {
            CliError::data(format!(
                "{}:{}: malformed entry record: {e}",
                path.display(),
                lineno + 1
            ))
        })?;
        let seq = sequence_of_record(&record)?;
        dataset.push((record.entry_id, seq));
    }
    if dataset.is_empty() {
        return Err(CliError::data(format!(
            "{}: no entries found",
            path.display()
        )));
    }
    Ok(dataset)
}

pub fn write_ndjson<T: Serialize>(path: &Path, records: &[T]) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record)
            .map_err(|e| CliError::data(format!("write error: {e}")))?;
        out.write_all(b"\n")
            .map_err(|e| CliError::data(format!("write error: {e}")))?;
    }
    out.flush()
        .map_err(|e| CliError::data(format!("write error: {e}")))
}

pub fn write_params(
    path: &Path,
    intervals: &IntervalModel,
    marks: Option<&MarkModel>,
) -> Result<(), CliError> {
    let record = ParamsRecord {
        family: intervals.family().to_string(),
        shape: intervals.shape(),
        rate: intervals.rate(),
        mark: marks.map(|m| MarkParamsRecord {
            mu: m.mu(),
            sigma: m.sigma(),
        }),
    };
    let file = File::create(path)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, &record)
        .map_err(|e| CliError::data(format!("write error: {e}")))?;
    out.write_all(b"\n")
        .map_err(|e| CliError::data(format!("write error: {e}")))?;
    out.flush()
        .map_err(|e| CliError::data(format!("write error: {e}")))
}

/// Parse a parameters file into models.
pub fn read_params(path: &Path) -> Result<(IntervalModel, Option<MarkModel>), CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path.display())))?;
    let record: ParamsRecord = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| CliError::data(format!("{}: malformed parameters: {e}", path.display())))?;
    let family = match record.family.as_str() {
        "exponential" => Family::Exponential,
        "gamma" => Family::Gamma,
        other => {
            return Err(CliError::data(format!(
                "{}: unknown interval family `{other}`",
                path.display()
            )))
        }
    };
    let intervals = IntervalModel::new(family, record.shape, record.rate)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let marks = record
        .mark
        .map(|m| MarkModel::log_normal(m.mu, m.sigma))
        .transpose()
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    Ok((intervals, marks))
}

pub fn score_record(
    entry_id: String,
    intrusion_probability: f64,
    log_marginal: f64,
    map_indices: &BTreeSet<usize>,
    event_marginals: Vec<f64>,
) -> ScoreRecord {
    ScoreRecord {
        entry_id,
        intrusion_probability,
        log_marginal,
        map_indices: map_indices.iter().copied().collect(),
        event_marginals,
    }
}

/// ROC table with `level,threshold,fpr,tpr` rows for both curve levels.
pub fn write_roc_csv(path: &Path, report: &EvalReport) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    let io = (|| -> std::io::Result<()> {
        writeln!(out, "level,threshold,fpr,tpr")?;
        for (level, points) in [("entry", &report.roc_entry), ("event", &report.roc_event)] {
            for p in points {
                writeln!(out, "{level},{},{},{}", p.threshold, p.fpr, p.tpr)?;
            }
        }
        out.flush()
    })();
    io.map_err(|e| CliError::data(format!("write error: {e}")))
}
