//! Intrusion detection in renewal processes.
//!
//! A sequence of events observed in a window `[t_start, t_end]` is modeled as
//! a renewal process (i.i.d. interarrival intervals) possibly superimposed
//! with foreign "intrusion" events. Given the interval distribution and a
//! per-event prior intrusion probability, the library computes
//!
//! - the posterior probability that the sequence contains an intrusion,
//! - the maximum a posteriori subsequence of intrusion events, and
//! - the marginal probability of each event to belong to the intrusion,
//!
//! all in `Θ(N²)` time for `N` events. When the process is unknown, its
//! parameters can be estimated from history or from the scored sequence
//! itself by expectation-maximization. Per-event marks (e.g. payment
//! amounts) can be modeled alongside intervals.
//!
//! Modules:
//! - [`intervals`]: interval distributions (Exponential, Gamma) and the tail
//!   integrals the factor construction needs.
//! - [`model`]: event sequences, mark models, and log-domain factor tables.
//! - [`inference`]: MAP decoding, marginal likelihood, forward-backward
//!   event marginals, and a brute-force enumeration oracle.
//! - [`estimation`]: fits from history, per-sequence EM, prior tuning.
//! - [`synth`]: synthetic dataset generation with intrusion injection.
//! - [`evalkit`]: ROC/AUC, Jaccard scores, dataset-level evaluation.

pub mod error;
pub mod estimation;
pub mod evalkit;
pub mod inference;
pub mod intervals;
pub mod model;
pub mod numeric;
pub mod special;
pub mod synth;

pub use error::{Error, Result};
