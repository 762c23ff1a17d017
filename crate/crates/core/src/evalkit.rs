//! Evaluation metrics: ROC/AUC at entry and event level, Jaccard scores of
//! MAP sets, and whole-dataset reports.
//!
//! AUC is the Mann-Whitney rank statistic with midrank tie handling. The
//! entry-level score of a sequence is its posterior intrusion probability;
//! the event level pools per-event marginals across all entries of the
//! dataset. Jaccard compares the MAP intrusion set against the labeled
//! truth, with `J(∅, ∅) = 1` so a correct rejection scores perfectly.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{em_fit, EmConfig};
use crate::inference::{infer_all, map_subsequence};
use crate::intervals::{Family, IntervalModel};
use crate::model::{build_factors, EventSequence, MarkModel};

/// One ROC point; `threshold = +inf` anchors the curve at (0, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// Dataset-level evaluation report.
#[derive(Debug, Clone)]
pub struct EvalReport {
    /// AUC of intrusion probabilities over entries.
    pub entry_auc: f64,
    /// AUC of event marginals pooled across entries.
    pub event_auc: f64,
    /// Mean Jaccard of MAP vs truth over all entries.
    pub mean_jaccard: f64,
    /// Mean Jaccard over entries that contain an intrusion.
    pub mean_jaccard_positive: f64,
    /// Mean posterior intrusion probability over positive entries.
    pub mean_posterior_positive: f64,
    /// Mean posterior intrusion probability over negative entries.
    pub mean_posterior_negative: f64,
    pub roc_entry: Vec<RocPoint>,
    pub roc_event: Vec<RocPoint>,
    pub n_entries: usize,
}

/// Which signals the scorer uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkMode {
    /// Interarrival intervals only.
    IntervalsOnly,
    /// Marks with the interval distribution forced to a fitted Exponential,
    /// which carries no interval signal; the marks-alone baseline.
    MarksOnly,
    /// Marks and intervals combined.
    Combined,
}

impl MarkMode {
    pub fn uses_marks(self) -> bool {
        !matches!(self, MarkMode::IntervalsOnly)
    }
}

/// Where the scorer's parameters come from.
#[derive(Debug, Clone, Copy)]
pub enum ParamSource {
    /// Known process parameters.
    Known {
        intervals: IntervalModel,
        marks: Option<MarkModel>,
    },
    /// Per-entry expectation-maximization.
    PerEntryEm { family: Family },
}

/// Scoring configuration for [`score_entry`] and [`evaluate_dataset`].
#[derive(Debug, Clone, Copy)]
pub struct ScorerConfig {
    pub p_epsilon: f64,
    pub mode: MarkMode,
    pub params: ParamSource,
}

/// Scores of one entry.
#[derive(Debug, Clone)]
pub struct EntryScore {
    pub intrusion_probability: f64,
    pub log_marginal: f64,
    pub event_marginals: Vec<f64>,
    pub map_indices: BTreeSet<usize>,
}

/// Mann-Whitney AUC with midrank ties.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Evaluation(format!(
            "{} scores against {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Evaluation(
            "AUC is undefined when only one class is present".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // Midrank of the tie group spanning ranks i+1 ..= j (1-based).
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            if labels[idx] {
                rank_sum_pos += midrank;
            }
        }
        i = j;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// ROC curve at every distinct score threshold (meaning `score >= t`),
/// anchored at `(+inf, 0, 0)` and ending at `(min score, 1, 1)`.
pub fn roc_points(scores: &[f64], labels: &[bool]) -> Result<Vec<RocPoint>> {
    if scores.len() != labels.len() {
        return Err(Error::Evaluation(format!(
            "{} scores against {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Evaluation(
            "a ROC curve is undefined when only one class is present".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));
    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let t = scores[order[i]];
        while i < order.len() && scores[order[i]] == t {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold: t,
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
        });
    }
    Ok(points)
}

/// `|a ∩ b| / |a ∪ b|`, with both-empty defined as 1 so that a correctly
/// empty MAP set on a negative entry scores perfectly.
pub fn jaccard(predicted: &BTreeSet<usize>, truth: &BTreeSet<usize>) -> f64 {
    if predicted.is_empty() && truth.is_empty() {
        return 1.0;
    }
    let intersection = predicted.intersection(truth).count();
    let union = predicted.union(truth).count();
    intersection as f64 / union as f64
}

/// Score one entry under the configuration, resolving parameters per the
/// parameter source and mark mode.
pub fn score_entry(seq: &EventSequence, cfg: &ScorerConfig) -> Result<EntryScore> {
    let (interval_model, mark_model): (IntervalModel, Option<MarkModel>) = match cfg.params {
        ParamSource::Known { intervals, marks } => {
            let im = if cfg.mode == MarkMode::MarksOnly {
                IntervalModel::fit_mle(Family::Exponential, &seq.interior_intervals())?
            } else {
                intervals
            };
            let mm = if cfg.mode.uses_marks() {
                Some(marks.ok_or_else(|| {
                    Error::Evaluation("the mark mode requires a mark model".into())
                })?)
            } else {
                None
            };
            (im, mm)
        }
        ParamSource::PerEntryEm { family } => {
            let em_family = if cfg.mode == MarkMode::MarksOnly {
                Family::Exponential
            } else {
                family
            };
            let em_cfg = EmConfig {
                fit_marks: cfg.mode.uses_marks(),
                ..EmConfig::new(em_family)
            };
            let em = em_fit(seq, cfg.p_epsilon, &em_cfg)?;
            let mm = if cfg.mode.uses_marks() {
                em.mark_model
            } else {
                None
            };
            (em.interval_model, mm)
        }
    };
    let inference = infer_all(seq, &interval_model, cfg.p_epsilon, mark_model.as_ref())?;
    let ft = build_factors(seq, &interval_model, cfg.p_epsilon, mark_model.as_ref())?;
    let map = map_subsequence(&ft);
    Ok(EntryScore {
        intrusion_probability: inference.intrusion_probability,
        log_marginal: inference.log_marginal,
        event_marginals: inference.event_marginals,
        map_indices: map.intrusion_indices,
    })
}

/// Score a labeled dataset and aggregate the metrics. Entries are scored
/// in parallel; aggregation order follows the input order.
pub fn evaluate_dataset(data: &[EventSequence], cfg: &ScorerConfig) -> Result<EvalReport> {
    let entry_labels: Vec<bool> = data.iter().map(|s| s.has_intrusion_label()).collect();
    let n_pos = entry_labels.iter().filter(|&&l| l).count();
    if n_pos == 0 || n_pos == data.len() {
        return Err(Error::Evaluation(
            "dataset evaluation needs both positive and negative entries".into(),
        ));
    }
    let outcomes: Vec<Result<EntryScore>> =
        data.par_iter().map(|seq| score_entry(seq, cfg)).collect();
    let mut scores = Vec::with_capacity(outcomes.len());
    for (i, outcome) in outcomes.into_iter().enumerate() {
        scores.push(outcome.map_err(|e| Error::Evaluation(format!("entry {i}: {e}")))?);
    }

    let entry_scores: Vec<f64> = scores.iter().map(|s| s.intrusion_probability).collect();
    let entry_auc = auc(&entry_scores, &entry_labels)?;
    let roc_entry = roc_points(&entry_scores, &entry_labels)?;

    let mut event_scores = Vec::new();
    let mut event_labels = Vec::new();
    for (seq, score) in data.iter().zip(&scores) {
        let truth = seq.intrusion_truth();
        for (k, &m) in score.event_marginals.iter().enumerate() {
            event_scores.push(m);
            event_labels.push(truth.contains(&k));
        }
    }
    let event_auc = auc(&event_scores, &event_labels)?;
    let roc_event = roc_points(&event_scores, &event_labels)?;

    let mut jaccard_sum = 0.0;
    let mut jaccard_pos_sum = 0.0;
    let mut posterior_pos_sum = 0.0;
    let mut posterior_neg_sum = 0.0;
    for ((seq, score), &positive) in data.iter().zip(&scores).zip(&entry_labels) {
        let j = jaccard(&score.map_indices, &seq.intrusion_truth());
        jaccard_sum += j;
        if positive {
            jaccard_pos_sum += j;
            posterior_pos_sum += score.intrusion_probability;
        } else {
            posterior_neg_sum += score.intrusion_probability;
        }
    }
    let n_neg = data.len() - n_pos;
    Ok(EvalReport {
        entry_auc,
        event_auc,
        mean_jaccard: jaccard_sum / data.len() as f64,
        mean_jaccard_positive: jaccard_pos_sum / n_pos as f64,
        mean_posterior_positive: posterior_pos_sum / n_pos as f64,
        mean_posterior_negative: posterior_neg_sum / n_neg as f64,
        roc_entry,
        roc_event,
        n_entries: data.len(),
    })
}
