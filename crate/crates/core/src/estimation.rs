//! Process-parameter estimation.
//!
//! Three routes:
//!
//! - [`fit_from_history`]: pooled MLE over the interior intervals of past
//!   sequences, assuming they carry no intrusions. Boundary gaps to the
//!   window edges are censored and excluded.
//! - [`em_fit`]: per-sequence expectation-maximization alternating a MAP
//!   decode (E step) with a refit on the surviving events (M step). Gaps
//!   between the remaining events are genuine process intervals: intrusion
//!   events are superimposed extras, so removing them restores the
//!   process's own intervals. The loop stops at a MAP fixed point, at the
//!   iteration cap, or as soon as the MAP set grows past `K_max` — beyond
//!   that the remainder is too small to fit reliably. `p_ε` is never
//!   estimated here; it is supplied, or tuned via [`tune_p_epsilon`].
//! - [`tune_p_epsilon`]: pick the prior from a candidate grid by
//!   maximizing entry-level AUC on labeled training data, scoring with
//!   per-entry EM fits.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evalkit;
use crate::inference::{infer_all, map_subsequence};
use crate::intervals::{Family, IntervalModel};
use crate::model::{build_factors, fit_mark_model, EventSequence, MarkModel};

/// Knobs of the EM loop.
#[derive(Debug, Clone, Copy)]
pub struct EmConfig {
    /// Iteration cap on M steps.
    pub n_iter_max: usize,
    /// `K_max = floor(N * k_max_fraction)` bounds the MAP set size.
    pub k_max_fraction: f64,
    /// Interval family fitted in the M step.
    pub family: Family,
    /// Fit a log-normal mark model alongside the intervals.
    pub fit_marks: bool,
}

impl EmConfig {
    pub fn new(family: Family) -> Self {
        Self {
            n_iter_max: 10,
            k_max_fraction: 0.5,
            family,
            fit_marks: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_iter_max < 1 {
            return Err(Error::InvalidParameter(
                "EM needs at least one iteration".into(),
            ));
        }
        if !(self.k_max_fraction > 0.0 && self.k_max_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "k_max_fraction must lie in (0, 1), got {}",
                self.k_max_fraction
            )));
        }
        Ok(())
    }
}

/// Why the EM loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The MAP set repeated between iterations.
    FixedPoint,
    /// The iteration cap was reached.
    MaxIterations,
    /// The MAP set grew past `K_max` (or the remainder became unfittable);
    /// parameters are from the last completed M step.
    KMaxExceeded,
}

/// EM output: parameters from the last completed M step.
#[derive(Debug, Clone)]
pub struct EmResult {
    pub interval_model: IntervalModel,
    pub mark_model: Option<MarkModel>,
    /// Completed M steps.
    pub iterations: usize,
    pub termination: Termination,
    /// The most recent MAP set at termination.
    pub final_map: BTreeSet<usize>,
}

/// Pooled MLE over interior intervals (and marks) of past sequences,
/// assuming they contain no intrusions.
pub fn fit_from_history(
    family: Family,
    sequences: &[EventSequence],
    fit_marks: bool,
) -> Result<(IntervalModel, Option<MarkModel>)> {
    let intervals: Vec<f64> = sequences
        .iter()
        .flat_map(|s| s.interior_intervals())
        .collect();
    if intervals.is_empty() {
        return Err(Error::Estimation(
            "no interior intervals: every sequence has fewer than 2 events".into(),
        ));
    }
    let interval_model = IntervalModel::fit_mle(family, &intervals)?;
    let mark_model = if fit_marks {
        let marks: Vec<f64> = sequences
            .iter()
            .flat_map(|s| s.events().iter().filter_map(|e| e.mark))
            .collect();
        if marks.is_empty() {
            return Err(Error::Estimation(
                "mark fit requested but the sequences carry no marks".into(),
            ));
        }
        Some(fit_mark_model(&marks)?)
    } else {
        None
    };
    Ok((interval_model, mark_model))
}

/// Shape used when the unconstrained Gamma MLE violates the `shape > 0.5`
/// admissibility bound: the constrained optimum sits at the boundary, so
/// the M step clamps to just above it instead of aborting the EM loop.
const GAMMA_SHAPE_FLOOR: f64 = 0.51;

/// Interval MLE with the boundary fallback for over-dispersed samples.
fn fit_intervals_admissible(family: Family, intervals: &[f64]) -> Result<IntervalModel> {
    match IntervalModel::fit_mle(family, intervals) {
        Err(Error::Estimation(msg)) if msg.contains("0.5") => {
            let mean = intervals.iter().sum::<f64>() / intervals.len() as f64;
            IntervalModel::gamma(GAMMA_SHAPE_FLOOR, GAMMA_SHAPE_FLOOR / mean)
        }
        other => other,
    }
}

/// M step: fit on the events surviving the MAP removal.
fn fit_remaining(
    seq: &EventSequence,
    removed: &BTreeSet<usize>,
    cfg: &EmConfig,
) -> Result<(IntervalModel, Option<MarkModel>)> {
    let kept: Vec<_> = seq
        .events()
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, e)| *e)
        .collect();
    let intervals: Vec<f64> = kept.windows(2).map(|w| w[1].t - w[0].t).collect();
    let interval_model = fit_intervals_admissible(cfg.family, &intervals)?;
    let mark_model = if cfg.fit_marks {
        let marks: Vec<f64> = kept.iter().filter_map(|e| e.mark).collect();
        if marks.is_empty() {
            return Err(Error::Estimation(
                "mark fit requested but the sequence carries no marks".into(),
            ));
        }
        Some(fit_mark_model(&marks)?)
    } else {
        None
    };
    Ok((interval_model, mark_model))
}

/// Alternate MAP decoding and refitting on one sequence.
///
/// Initialization fits the whole sequence (no-intrusion assumption). The
/// effective `K_max` is additionally capped at `N - 3` so that whenever the
/// MAP set passes the guard, at least two interior intervals remain for the
/// next fit. A degenerate mid-loop fit failure terminates with the previous
/// parameters rather than raising.
pub fn em_fit(seq: &EventSequence, p_epsilon: f64, cfg: &EmConfig) -> Result<EmResult> {
    cfg.validate()?;
    let n = seq.len();
    if n < 3 {
        return Err(Error::Estimation(format!(
            "EM needs at least 3 events so a fit remains after removal, got {n}"
        )));
    }
    let k_max = ((n as f64 * cfg.k_max_fraction).floor() as usize).min(n - 3);

    let mut map_prev: BTreeSet<usize> = BTreeSet::new();
    let mut params: Option<(IntervalModel, Option<MarkModel>)> = None;
    let mut iterations = 0;
    loop {
        // M step.
        match fit_remaining(seq, &map_prev, cfg) {
            Ok(p) => params = Some(p),
            Err(err) => match params {
                // The whole-sequence fit failing is a caller problem.
                None => return Err(err),
                Some((interval_model, mark_model)) => {
                    return Ok(EmResult {
                        interval_model,
                        mark_model,
                        iterations,
                        termination: Termination::KMaxExceeded,
                        final_map: map_prev,
                    })
                }
            },
        }
        iterations += 1;
        let (interval_model, mark_model) = params.as_ref().expect("just fitted");
        if iterations == cfg.n_iter_max {
            return Ok(EmResult {
                interval_model: *interval_model,
                mark_model: *mark_model,
                iterations,
                termination: Termination::MaxIterations,
                final_map: map_prev,
            });
        }
        // E step.
        let ft = build_factors(seq, interval_model, p_epsilon, mark_model.as_ref())?;
        let map = map_subsequence(&ft).intrusion_indices;
        if map == map_prev {
            return Ok(EmResult {
                interval_model: *interval_model,
                mark_model: *mark_model,
                iterations,
                termination: Termination::FixedPoint,
                final_map: map,
            });
        }
        if map.len() > k_max {
            return Ok(EmResult {
                interval_model: *interval_model,
                mark_model: *mark_model,
                iterations,
                termination: Termination::KMaxExceeded,
                final_map: map,
            });
        }
        map_prev = map;
    }
}

/// Logarithmic default grid for prior tuning: 10 points spanning
/// `[0.005, 0.5]`.
pub fn default_p_epsilon_grid() -> Vec<f64> {
    let (lo, hi) = (0.005f64.ln(), 0.5f64.ln());
    (0..10)
        .map(|i| (lo + (hi - lo) * i as f64 / 9.0).exp())
        .collect()
}

/// Pick the candidate prior maximizing entry-level AUC of EM-scored
/// intrusion probabilities on labeled training data; ties go to the
/// smaller prior.
pub fn tune_p_epsilon(
    train: &[EventSequence],
    candidates: &[f64],
    family: Family,
    use_marks: bool,
) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter(
            "the candidate grid for prior tuning is empty".into(),
        ));
    }
    let labels: Vec<bool> = train.iter().map(|s| s.has_intrusion_label()).collect();
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(Error::Evaluation(
            "prior tuning needs both positive and negative training entries".into(),
        ));
    }
    let mut grid: Vec<f64> = candidates.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut best: Option<(f64, f64)> = None;
    for &p in &grid {
        let cfg = EmConfig {
            fit_marks: use_marks,
            ..EmConfig::new(family)
        };
        let scores: Vec<f64> = train
            .par_iter()
            .enumerate()
            .map(|(i, seq)| {
                let em = em_fit(seq, p, &cfg)
                    .map_err(|e| Error::Evaluation(format!("entry {i}: {e}")))?;
                let marks = if use_marks { em.mark_model } else { None };
                let res = infer_all(seq, &em.interval_model, p, marks.as_ref())
                    .map_err(|e| Error::Evaluation(format!("entry {i}: {e}")))?;
                Ok(res.intrusion_probability)
            })
            .collect::<Result<_>>()?;
        let auc = evalkit::auc(&scores, &labels)?;
        if best.is_none_or(|(_, b)| auc > b) {
            best = Some((p, auc));
        }
    }
    Ok(best.expect("non-empty grid").0)
}
