//! Posterior inference: MAP intrusion subsequence, marginal likelihood, and
//! per-event intrusion marginals, plus a brute-force enumeration oracle.
//!
//! All three algorithms run on a precomputed [`FactorTable`] in `Θ(N²)`:
//!
//! - [`map_subsequence`]: the factor product along any intrusion hypothesis
//!   is a path `e_0 → ... → e_{N+1}` in a complete forward DAG whose edge
//!   weights are negated log factors, so the MAP hypothesis is a shortest
//!   path, found by one dynamic-programming sweep in index order.
//! - [`log_marginal_likelihood`]: forward recurrence
//!   `a_k = P_k + Σ_{j<k} a_j Q_{j,k}`, accumulated with log-sum-exp;
//!   the result `A` sums the unnormalized posterior over all `2^N`
//!   hypotheses.
//! - [`infer_all`]: runs the forward recurrence on the sequence and on its
//!   time reversal and combines `a^f_k · a^b_k · (1-p_ε)` into the
//!   unnormalized probability of event `k` not belonging to the intrusion.
//!   The forward and backward accumulators jointly carry one fewer
//!   `(1-p_ε)` than the factor product along the combined paths, so the
//!   combination multiplies by `(1-p_ε)`; the constant is pinned against
//!   the enumeration oracle.
//! - [`brute_force_posterior`]: exact enumeration of all `2^N` hypotheses
//!   (refused above N = 20), the correctness oracle for the other three.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::intervals::IntervalModel;
use crate::model::{build_factors, EventSequence, FactorTable, MarkModel};
use crate::numeric::{log_add_exp, log_sum_exp};

/// Posterior quantities of one sequence.
#[derive(Debug, Clone)]
pub struct InferenceResult {
    /// ln Pr~(I ∈ 2^S | S), the unnormalized marginal likelihood.
    pub log_marginal: f64,
    /// Pr(I ≠ ∅ | S).
    pub intrusion_probability: f64,
    /// Pr(e_k ∈ I | S) per event.
    pub event_marginals: Vec<f64>,
    /// Forward accumulators a^f in log domain.
    pub log_forward: Vec<f64>,
    /// Backward accumulators a^b in log domain.
    pub log_backward: Vec<f64>,
}

/// MAP decoding output.
#[derive(Debug, Clone)]
pub struct MapResult {
    /// 0-based positions of the MAP intrusion events.
    pub intrusion_indices: BTreeSet<usize>,
    /// ln Pr~(I_MAP | S).
    pub log_posterior: f64,
    /// Length of the shortest path, `-log_posterior`.
    pub path_length: f64,
}

/// Output of the exact enumeration oracle.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub log_marginal: f64,
    pub intrusion_probability: f64,
    pub event_marginals: Vec<f64>,
    pub map_set: BTreeSet<usize>,
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// MAP intrusion subsequence as a shortest path in the complete forward DAG
/// over `{e_0, events, e_{N+1}}`.
///
/// Edge weights: `-log P` out of `e_0` (with the direct edge
/// `e_0 → e_{N+1}` weighing `-log P[N+1]`, the all-intrusion hypothesis),
/// `-log R` into `e_{N+1}`, `-log Q` in between. The intrusion set is the
/// complement of the path's interior vertices. Ties prefer paths with more
/// vertices (fewer intrusion events), then later predecessors.
pub fn map_subsequence(ft: &FactorTable) -> MapResult {
    let n = ft.len();
    // DP vertices: 0 = e_0, 1..=n = events (position v-1), n+1 = e_{N+1}.
    let end = n + 1;
    let mut dist = vec![f64::INFINITY; n + 2];
    let mut depth = vec![0usize; n + 2];
    let mut parent = vec![usize::MAX; n + 2];
    dist[0] = 0.0;
    depth[0] = 1;

    let weight = |u: usize, v: usize| -> f64 {
        if u == 0 {
            if v == end {
                -ft.log_p_all_intrusion()
            } else {
                -ft.log_p_first(v - 1)
            }
        } else if v == end {
            -ft.log_r_last(u - 1)
        } else {
            -ft.log_q_between(u - 1, v - 1)
        }
    };

    for v in 1..=end {
        for u in 0..v {
            if dist[u] == f64::INFINITY {
                continue;
            }
            let cand = dist[u] + weight(u, v);
            if cand == f64::INFINITY {
                continue;
            }
            let cand_depth = depth[u] + 1;
            let better = cand < dist[v]
                || (cand == dist[v]
                    && (cand_depth > depth[v] || (cand_depth == depth[v] && u > parent[v])));
            if better {
                dist[v] = cand;
                depth[v] = cand_depth;
                parent[v] = u;
            }
        }
    }

    let mut on_path = vec![false; n];
    let mut v = end;
    while v != 0 {
        let u = parent[v];
        if u != 0 && u != usize::MAX {
            on_path[u - 1] = true;
        }
        v = u;
    }
    let intrusion_indices: BTreeSet<usize> = (0..n).filter(|&i| !on_path[i]).collect();
    let path_length = dist[end];
    MapResult {
        intrusion_indices,
        log_posterior: -path_length,
        path_length,
    }
}

/// Forward recurrence: returns `(ln A, ln a_k for k in 0..N)` where
/// `a_k = P_k + Σ_{j<k} a_j Q_{j,k}` and `A = P_{N+1} + Σ_j a_j R_j`.
pub fn log_marginal_likelihood(ft: &FactorTable) -> (f64, Vec<f64>) {
    let n = ft.len();
    let mut log_a = Vec::with_capacity(n);
    let mut terms = Vec::with_capacity(n + 1);
    for k in 0..n {
        terms.clear();
        terms.push(ft.log_p_first(k));
        for (j, &a_j) in log_a.iter().enumerate() {
            terms.push(a_j + ft.log_q_between(j, k));
        }
        log_a.push(log_sum_exp(&terms));
    }
    terms.clear();
    terms.push(ft.log_p_all_intrusion());
    for (j, &a_j) in log_a.iter().enumerate() {
        terms.push(a_j + ft.log_r_last(j));
    }
    (log_sum_exp(&terms), log_a)
}

/// Full posterior inference on one sequence: intrusion probability,
/// per-event marginals, and both accumulator sweeps.
pub fn infer_all(
    seq: &EventSequence,
    model: &IntervalModel,
    p_epsilon: f64,
    marks: Option<&MarkModel>,
) -> Result<InferenceResult> {
    let ft = build_factors(seq, model, p_epsilon, marks)?;
    let (log_marginal, log_forward) = log_marginal_likelihood(&ft);
    let log_empty = ft.log_prob_subsequence(&BTreeSet::new())?;
    let intrusion_probability = clamp_probability(-(log_empty - log_marginal).exp_m1());

    let reversed = seq.reversed();
    let ft_rev = build_factors(&reversed, model, p_epsilon, marks)?;
    let (_, log_a_rev) = log_marginal_likelihood(&ft_rev);
    let n = seq.len();
    let log_backward: Vec<f64> = (0..n).map(|k| log_a_rev[n - 1 - k]).collect();

    // a^f_k and a^b_k each carry event k's own incoming mark factor, so it
    // is double-counted in the product and divided out once, exactly like
    // the missing (1-p_ε).
    let ln_1mp = (1.0 - p_epsilon).ln();
    let event_marginals: Vec<f64> = (0..n)
        .map(|k| {
            let mark_k = match marks {
                Some(g) => {
                    let y = seq.events()[k].mark.expect("marks validated");
                    g.log_density(y) - g.log_mean_density()
                }
                None => 0.0,
            };
            let log_not_in = log_forward[k] + log_backward[k] + ln_1mp - mark_k;
            clamp_probability(-(log_not_in - log_marginal).exp_m1())
        })
        .collect();

    Ok(InferenceResult {
        log_marginal,
        intrusion_probability,
        event_marginals,
        log_forward,
        log_backward,
    })
}

/// Largest event count accepted by [`brute_force_posterior`].
pub const BRUTE_FORCE_MAX_EVENTS: usize = 20;

/// Exact enumeration over all `2^N` intrusion hypotheses; MAP argmax ties
/// break toward the lexicographically smallest index set.
pub fn brute_force_posterior(ft: &FactorTable) -> Result<BruteForceResult> {
    let n = ft.len();
    if n > BRUTE_FORCE_MAX_EVENTS {
        return Err(Error::Domain(format!(
            "brute-force enumeration refuses N = {n} > {BRUTE_FORCE_MAX_EVENTS} (cost 2^N · N)"
        )));
    }
    let mut log_total = f64::NEG_INFINITY;
    let mut log_not_in = vec![f64::NEG_INFINITY; n];
    let mut best = f64::NEG_INFINITY;
    let mut best_mask: u32 = 0;
    for mask in 0..(1u32 << n) {
        let lp = ft.log_prob_mask(mask);
        log_total = log_add_exp(log_total, lp);
        for (k, slot) in log_not_in.iter_mut().enumerate() {
            if mask & (1 << k) == 0 {
                *slot = log_add_exp(*slot, lp);
            }
        }
        if lp > best || (lp == best && mask_lex_less(mask, best_mask)) {
            best = lp;
            best_mask = mask;
        }
    }
    let log_empty = ft.log_prob_mask(0);
    let intrusion_probability = clamp_probability(-(log_empty - log_total).exp_m1());
    let event_marginals = log_not_in
        .iter()
        .map(|&l| clamp_probability(-(l - log_total).exp_m1()))
        .collect();
    let map_set = (0..n).filter(|&k| best_mask & (1 << k) != 0).collect();
    Ok(BruteForceResult {
        log_marginal: log_total,
        intrusion_probability,
        event_marginals,
        map_set,
    })
}

/// Lexicographic order on index sets encoded as bitmasks (ascending
/// elements compared first; a proper prefix sorts first).
fn mask_lex_less(a: u32, b: u32) -> bool {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, _) => return b != 0,
            (false, true) => return false,
            (false, false) => {
                let (ia, ib) = (a.trailing_zeros(), b.trailing_zeros());
                if ia != ib {
                    return ia < ib;
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}
