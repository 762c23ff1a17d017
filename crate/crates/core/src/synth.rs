//! Synthetic data generation: renewal-process entries with injected
//! intrusions.
//!
//! Each entry is built by simulating `N - K + 2` process arrivals from time
//! zero; the first and last arrivals become the window bounds `[t_s, t_e]`
//! (and are dropped, so the boundary intervals are genuinely censored), the
//! interior arrivals become process events, and `K` intrusion events are
//! placed i.i.d. uniformly on a random subinterval whose length is drawn
//! `Uniform(0, 2T/3)` — mean one third of the window. For positive entries
//! `K` follows `Binomial(N, injection_rate)` conditioned on `K >= 1`,
//! keeping the total event count fixed at `N`; negative entries use
//! `K = 0`. Optional marks are drawn log-normally per event class.
//!
//! Entry generation is deterministic given the generator seed: datasets
//! derive one independent stream per entry, so entries can be generated in
//! any order or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::intervals::IntervalModel;
use crate::model::{Event, EventLabel, EventSequence, MarkModel};
use crate::special::ln_gamma;

/// Configuration of the synthetic generator.
#[derive(Debug, Clone, Copy)]
pub struct GenSpec {
    n_events: usize,
    interval_model: IntervalModel,
    injection_rate: f64,
    positive_fraction: f64,
    mark_models: Option<(MarkModel, MarkModel)>,
    seed: u64,
}

impl GenSpec {
    /// Validate and construct a generator spec with `positive_fraction` 0.5
    /// and no marks.
    pub fn new(
        n_events: usize,
        interval_model: IntervalModel,
        injection_rate: f64,
        seed: u64,
    ) -> Result<Self> {
        if n_events < 2 {
            return Err(Error::InvalidParameter(format!(
                "entries need at least 2 events, got {n_events}"
            )));
        }
        if !(injection_rate > 0.0 && injection_rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "injection rate must lie in (0, 1), got {injection_rate}"
            )));
        }
        Ok(Self {
            n_events,
            interval_model,
            injection_rate,
            positive_fraction: 0.5,
            mark_models: None,
            seed,
        })
    }

    /// Fraction of dataset entries that contain an intrusion.
    pub fn with_positive_fraction(mut self, fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidParameter(format!(
                "positive fraction must lie in [0, 1], got {fraction}"
            )));
        }
        self.positive_fraction = fraction;
        Ok(self)
    }

    /// Mark models for process and intrusion events.
    pub fn with_mark_models(mut self, process: MarkModel, intrusion: MarkModel) -> Self {
        self.mark_models = Some((process, intrusion));
        self
    }

    pub fn n_events(&self) -> usize {
        self.n_events
    }

    pub fn interval_model(&self) -> &IntervalModel {
        &self.interval_model
    }

    pub fn injection_rate(&self) -> f64 {
        self.injection_rate
    }

    pub fn positive_fraction(&self) -> f64 {
        self.positive_fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draw `K ~ Binomial(n, p)` conditioned on `K >= 1` by inverse-CDF walk
/// over log-domain weights (no rejection, one uniform consumed).
fn truncated_binomial<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> usize {
    let ln_p = p.ln();
    let ln_q = (1.0 - p).ln();
    let ln_n_fact = ln_gamma(n as f64 + 1.0);
    let log_w: Vec<f64> = (1..=n)
        .map(|k| {
            let kf = k as f64;
            ln_n_fact - ln_gamma(kf + 1.0) - ln_gamma((n - k) as f64 + 1.0)
                + kf * ln_p
                + (n - k) as f64 * ln_q
        })
        .collect();
    let m = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_w.iter().map(|&l| (l - m).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen_range(0.0..total);
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i + 1;
        }
        u -= w;
    }
    n
}

/// Uniformly placed subinterval of `[0, t]` with length `Uniform(0, 2t/3)`,
/// so the expected length is `t/3`. Returns `(start, length)`.
fn draw_subinterval<R: Rng + ?Sized>(t: f64, rng: &mut R) -> (f64, f64) {
    let length = rng.gen_range(0.0..(2.0 * t / 3.0));
    let start = rng.gen_range(0.0..(t - length));
    (start, length)
}

/// Generate one entry. Positive entries contain at least one intrusion
/// event; the total event count always equals `spec.n_events()`.
pub fn gen_entry<R: Rng + ?Sized>(spec: &GenSpec, positive: bool, rng: &mut R) -> EventSequence {
    let n = spec.n_events;
    let k = if positive {
        truncated_binomial(n, spec.injection_rate, rng)
    } else {
        0
    };

    // N - K + 2 process arrivals from t_0 = 0; the two boundary arrivals
    // define the window and are not observed as events.
    let mut t = 0.0;
    let mut process_times = Vec::with_capacity(n - k + 2);
    process_times.push(t);
    for _ in 0..(n - k + 1) {
        t += spec.interval_model.sample_interval(rng);
        process_times.push(t);
    }
    let t_start = process_times[0];
    let t_end = *process_times.last().expect("at least two arrivals");

    let mut events: Vec<Event> = process_times[1..process_times.len() - 1]
        .iter()
        .map(|&t| Event::at(t).with_label(EventLabel::Process))
        .collect();

    if k > 0 {
        let (start, length) = draw_subinterval(t_end - t_start, rng);
        for _ in 0..k {
            let ti = t_start + start + rng.gen_range(0.0..length.max(f64::MIN_POSITIVE));
            events.push(Event::at(ti.min(t_end)).with_label(EventLabel::Intrusion));
        }
    }

    if let Some((process_marks, intrusion_marks)) = &spec.mark_models {
        for e in &mut events {
            let g = match e.label {
                Some(EventLabel::Intrusion) => intrusion_marks,
                _ => process_marks,
            };
            let dist = rand_distr::LogNormal::new(g.mu(), g.sigma())
                .expect("mark parameters validated");
            e.mark = Some(dist.sample(rng));
        }
    }

    events.sort_by(|a, b| a.t.partial_cmp(&b.t).expect("finite times"));
    EventSequence::new(t_start, t_end, events).expect("generated entries satisfy the invariants")
}

/// Generate a labeled dataset: `floor(positive_fraction * n_entries)`
/// positive entries evenly interleaved with negatives, each entry on its
/// own seed-derived random stream.
pub fn gen_dataset(spec: &GenSpec, n_entries: usize) -> Result<Vec<EventSequence>> {
    if n_entries < 2 {
        return Err(Error::InvalidParameter(format!(
            "datasets need at least 2 entries, got {n_entries}"
        )));
    }
    let n_pos = (spec.positive_fraction * n_entries as f64).floor() as u64;
    let n = n_entries as u64;
    Ok((0..n_entries)
        .map(|i| {
            let iu = i as u64;
            // Bresenham interleave: exactly n_pos positives, evenly spread.
            let positive = (iu + 1) * n_pos / n > iu * n_pos / n;
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(spec.seed ^ splitmix64(iu)));
            gen_entry(spec, positive, &mut rng)
        })
        .collect())
}
