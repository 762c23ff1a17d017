//! Event sequences and the log-domain factor tables of the intrusion model.
//!
//! For a window `[t_start, t_end]` holding events `t_1 <= ... <= t_N`, the
//! unnormalized posterior of an intrusion hypothesis `I` (a subset of the
//! events) factorizes over the transitions between consecutive process
//! (non-intrusion) events `k_1 < ... < k_m`:
//!
//! ```text
//! Pr~(I | S) = P[k_1] · Π_j Q[k_j, k_{j+1}] · R[k_m]
//! ```
//!
//! with the all-intrusion hypothesis covered by a dedicated factor
//! `P[N+1]` (times `R[0] = 1`). Every factor carries one `1/E[f(τ)]`
//! normalizer, prior bookkeeping in powers of `p_ε` and `(1-p_ε)`, and a
//! ratio of interval-tail integrals; the factor into the extra event past
//! the window end uses the length-biased tails of the interval covering the
//! whole window. All factors are stored in natural-log domain: the linear
//! products underflow already for a few dozen events.
//!
//! With per-event marks, each process event's incoming factor additionally
//! gains `ln g(y_k) - ln E[g]`, so intrusion events contribute a neutral
//! mark factor and process events the normalized mark density.

use crate::error::{Error, Result};
use crate::intervals::IntervalModel;
use crate::numeric::tanh_sinh;

/// Ground-truth role of an event; evaluation-only, never read by inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventLabel {
    Process,
    Intrusion,
}

/// One observed event: a time, an optional positive mark, and an optional
/// ground-truth label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub mark: Option<f64>,
    pub label: Option<EventLabel>,
}

impl Event {
    pub fn at(t: f64) -> Self {
        Self {
            t,
            mark: None,
            label: None,
        }
    }

    pub fn with_mark(t: f64, mark: f64) -> Self {
        Self {
            t,
            mark: Some(mark),
            label: None,
        }
    }

    pub fn with_label(mut self, label: EventLabel) -> Self {
        self.label = Some(label);
        self
    }
}

/// An observation window with its ordered events.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSequence {
    t_start: f64,
    t_end: f64,
    events: Vec<Event>,
}

impl EventSequence {
    /// Validate and construct: times ordered and inside the window, window
    /// of positive duration, marks on all events or on none.
    pub fn new(t_start: f64, t_end: f64, events: Vec<Event>) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() || t_end - t_start <= 0.0 {
            return Err(Error::InvalidSequence(format!(
                "window must have positive duration, got [{t_start}, {t_end}]"
            )));
        }
        let mut prev = t_start;
        for (i, e) in events.iter().enumerate() {
            if !e.t.is_finite() || e.t < prev {
                return Err(Error::InvalidSequence(format!(
                    "event {i} at t={} breaks ordering (previous bound {prev})",
                    e.t
                )));
            }
            if e.t > t_end {
                return Err(Error::InvalidSequence(format!(
                    "event {i} at t={} lies past the window end {t_end}",
                    e.t
                )));
            }
            if let Some(mark) = e.mark {
                if !mark.is_finite() || mark <= 0.0 {
                    return Err(Error::InvalidSequence(format!(
                        "event {i} has non-positive mark {mark}"
                    )));
                }
            }
            prev = e.t;
        }
        let marked = events.iter().filter(|e| e.mark.is_some()).count();
        if marked != 0 && marked != events.len() {
            return Err(Error::InvalidSequence(
                "marks must be present on all events or on none".into(),
            ));
        }
        Ok(Self {
            t_start,
            t_end,
            events,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Window duration `T`.
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn has_marks(&self) -> bool {
        self.events.first().is_some_and(|e| e.mark.is_some())
    }

    /// Interior interarrival intervals `t_{k+1} - t_k`; the censored boundary
    /// gaps to the window edges are excluded.
    pub fn interior_intervals(&self) -> Vec<f64> {
        self.events.windows(2).map(|w| w[1].t - w[0].t).collect()
    }

    /// Indices of events labeled as intrusion (evaluation ground truth).
    pub fn intrusion_truth(&self) -> std::collections::BTreeSet<usize> {
        self.events
            .iter()
            .enumerate()
            .filter(|(_, e)| e.label == Some(EventLabel::Intrusion))
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether any event carries an intrusion label.
    pub fn has_intrusion_label(&self) -> bool {
        self.events
            .iter()
            .any(|e| e.label == Some(EventLabel::Intrusion))
    }

    /// Time-reversed copy: `t'_s = -t_e`, `t'_e = -t_s`, `t'_k = -t_{N-k+1}`,
    /// marks and labels riding along their events.
    pub fn reversed(&self) -> Self {
        let events = self
            .events
            .iter()
            .rev()
            .map(|e| Event {
                t: -e.t,
                mark: e.mark,
                label: e.label,
            })
            .collect();
        Self {
            t_start: -self.t_end,
            t_end: -self.t_start,
            events,
        }
    }
}

/// Mark distribution family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkFamily {
    LogNormal,
}

/// Log-normal model of per-event marks, with the cached normalizer
/// `ln E_{y~G}[g(y)] = ln ∫ g(y)² dy = σ²/4 - μ - ln(2σ√π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkModel {
    family: MarkFamily,
    mu: f64,
    sigma: f64,
    log_mean_density: f64,
}

impl MarkModel {
    pub fn log_normal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "log-normal mark model requires finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
            )));
        }
        let log_mean_density =
            sigma * sigma / 4.0 - mu - (2.0 * sigma * std::f64::consts::PI.sqrt()).ln();
        Ok(Self {
            family: MarkFamily::LogNormal,
            mu,
            sigma,
            log_mean_density,
        })
    }

    pub fn family(&self) -> MarkFamily {
        self.family
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// ln E_{y~G}[g(y)].
    pub fn log_mean_density(&self) -> f64 {
        self.log_mean_density
    }

    /// ln g(y) for y > 0.
    pub fn log_density(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let z = (y.ln() - self.mu) / self.sigma;
        -y.ln() - self.sigma.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() - 0.5 * z * z
    }

    /// `ln ∫ g(y)² dy` by quadrature in `u = ln y`; validation oracle for
    /// the cached closed form.
    pub fn quadrature_log_mean_density(&self) -> Result<f64> {
        // g(y)² y du-substituted integrand: e^{-u - (u-μ)²/σ²} / (2πσ²),
        // peaked at u* = μ - σ²/2 with width σ/√2.
        let center = self.mu - self.sigma * self.sigma / 2.0;
        let half_width = 14.0 * self.sigma + 1.0;
        let (mu, sigma) = (self.mu, self.sigma);
        let integrand = move |u: f64| {
            let z = (u - mu) / sigma;
            (-u - z * z).exp() / (2.0 * std::f64::consts::PI * sigma * sigma)
        };
        let v = tanh_sinh(integrand, center - half_width, center + half_width, 1e-12)?;
        Ok(v.ln())
    }
}

/// Log-normal MLE for marks: `mu`, `sigma` are the mean and standard
/// deviation of `ln y`.
pub fn fit_mark_model(marks: &[f64]) -> Result<MarkModel> {
    if marks.iter().any(|&y| !y.is_finite() || y <= 0.0) {
        return Err(Error::Estimation(
            "marks must be positive and finite".into(),
        ));
    }
    let distinct = {
        let mut seen = marks.to_vec();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        seen.dedup();
        seen.len()
    };
    if distinct < 2 {
        return Err(Error::Estimation(
            "mark fit requires at least 2 distinct positive values (zero variance)".into(),
        ));
    }
    let n = marks.len() as f64;
    let mu = marks.iter().map(|&y| y.ln()).sum::<f64>() / n;
    let var = marks.iter().map(|&y| (y.ln() - mu).powi(2)).sum::<f64>() / n;
    MarkModel::log_normal(mu, var.sqrt())
}

/// Precomputed log-domain factors of one sequence under one model.
///
/// Event positions are 0-based (`0..n`). `log_p_first(i)` is the factor for
/// event `i` being the first process event, `log_q_between(i, j)` the
/// transition between process events `i < j`, `log_r_last(i)` the closing
/// factor after the last process event `i`, and `log_p_all_intrusion()` the
/// factor of the everything-is-intrusion hypothesis.
#[derive(Debug, Clone)]
pub struct FactorTable {
    n: usize,
    p_epsilon: f64,
    /// `log_p[i]` for positions `i < n`; `log_p[n]` is the all-intrusion factor.
    log_p: Vec<f64>,
    /// Row-major triangle over pairs `i < j`: entry at `j(j-1)/2 + i`.
    log_q: Vec<f64>,
    /// `log_r[i]` for positions `i < n`.
    log_r: Vec<f64>,
}

impl FactorTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn p_epsilon(&self) -> f64 {
        self.p_epsilon
    }

    pub fn log_p_first(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.log_p[i]
    }

    pub fn log_p_all_intrusion(&self) -> f64 {
        self.log_p[self.n]
    }

    pub fn log_q_between(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < j && j < self.n);
        self.log_q[j * (j - 1) / 2 + i]
    }

    pub fn log_r_last(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.log_r[i]
    }

    /// The `R[0]` factor closing the all-intrusion path; identically zero in
    /// log domain by the normalization.
    pub fn log_r_empty(&self) -> f64 {
        0.0
    }

    /// ln Pr~(I | S) for the intrusion hypothesis given by 0-based event
    /// positions. The all-intrusion case (including the empty sequence)
    /// takes the dedicated factor.
    pub fn log_prob_subsequence(
        &self,
        intrusion: &std::collections::BTreeSet<usize>,
    ) -> Result<f64> {
        if let Some(&bad) = intrusion.iter().find(|&&i| i >= self.n) {
            return Err(Error::Domain(format!(
                "intrusion index {bad} out of range for {} events",
                self.n
            )));
        }
        let mut prev: Option<usize> = None;
        let mut total = 0.0;
        for i in (0..self.n).filter(|i| !intrusion.contains(i)) {
            total += match prev {
                None => self.log_p_first(i),
                Some(p) => self.log_q_between(p, i),
            };
            prev = Some(i);
        }
        Ok(match prev {
            None => self.log_p_all_intrusion() + self.log_r_empty(),
            Some(p) => total + self.log_r_last(p),
        })
    }

    /// Bitmask variant of [`Self::log_prob_subsequence`] for enumeration
    /// callers; bit `i` set means event `i` belongs to the intrusion.
    pub(crate) fn log_prob_mask(&self, intrusion: u32) -> f64 {
        debug_assert!(self.n <= 32);
        let mut prev: Option<usize> = None;
        let mut total = 0.0;
        for i in 0..self.n {
            if intrusion & (1 << i) != 0 {
                continue;
            }
            total += match prev {
                None => self.log_p_first(i),
                Some(p) => self.log_q_between(p, i),
            };
            prev = Some(i);
        }
        match prev {
            None => self.log_p_all_intrusion() + self.log_r_empty(),
            Some(p) => total + self.log_r_last(p),
        }
    }
}

/// Build the factor table for a sequence under an interval model, a prior
/// intrusion probability, and optionally a mark model.
pub fn build_factors(
    seq: &EventSequence,
    model: &IntervalModel,
    p_epsilon: f64,
    marks: Option<&MarkModel>,
) -> Result<FactorTable> {
    if !(p_epsilon > 0.0 && p_epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p_epsilon must lie in (0, 1), got {p_epsilon}"
        )));
    }
    if marks.is_some() && !seq.is_empty() && !seq.has_marks() {
        return Err(Error::InvalidParameter(
            "a mark model was supplied but the sequence carries no marks".into(),
        ));
    }
    let n = seq.len();
    let ln_p = p_epsilon.ln();
    let ln_1mp = (1.0 - p_epsilon).ln();
    let neg_log_ef = -model.log_mean_density();

    // Normalized mark contribution ln g(y_i) - ln E[g] per event.
    let mark_term: Vec<f64> = match marks {
        Some(g) => seq
            .events()
            .iter()
            .map(|e| g.log_density(e.mark.expect("marks validated")) - g.log_mean_density())
            .collect(),
        None => vec![0.0; n],
    };

    let times: Vec<f64> = seq.events().iter().map(|e| e.t).collect();
    let mut log_p = Vec::with_capacity(n + 1);
    let mut log_r = Vec::with_capacity(n);
    for i in 0..n {
        let from_start = times[i] - seq.t_start();
        let p = neg_log_ef + i as f64 * ln_p + model.log_sq_tail(from_start)?
            - model.log_survival(from_start)?
            + mark_term[i];
        log_p.push(p);
        let to_end = seq.t_end() - times[i];
        let r = neg_log_ef
            + ln_1mp
            + (n - 1 - i) as f64 * ln_p
            + model.log_sq_tail(to_end)?
            - model.log_survival(to_end)?;
        log_r.push(r);
    }
    let t = seq.duration();
    log_p.push(neg_log_ef + n as f64 * ln_p + model.log_lb_sq_tail(t)? - model.log_lb_tail(t)?);

    let mut log_q = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            let gap = times[j] - times[i];
            let q = neg_log_ef
                + ln_1mp
                + (j - i - 1) as f64 * ln_p
                + model.log_density_unchecked(gap)
                + mark_term[j];
            log_q.push(q);
        }
    }

    Ok(FactorTable {
        n,
        p_epsilon,
        log_p,
        log_q,
        log_r,
    })
}
