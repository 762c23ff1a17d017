//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured quantities (visible with `--nocapture`).
//!
//! The statistical replications (criteria 4-7) run on seeded synthetic
//! datasets of 1,000 entries, so every number below is deterministic.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rid_core::evalkit::{evaluate_dataset, MarkMode, ParamSource, ScorerConfig};
use rid_core::inference::{
    brute_force_posterior, infer_all, log_marginal_likelihood, map_subsequence,
};
use rid_core::intervals::{Family, IntervalModel, TailIntegrand};
use rid_core::model::{build_factors, Event, EventSequence, MarkModel};
use rid_core::synth::{gen_dataset, gen_entry, GenSpec};

const DATASET_SEED: u64 = 20260809;
const DATASET_ENTRIES: usize = 1000;

/// Random sequence drawn from the model itself, optionally marked.
fn random_sequence(
    model: &IntervalModel,
    n: usize,
    marks: bool,
    rng: &mut ChaCha8Rng,
) -> EventSequence {
    let mut events = Vec::with_capacity(n);
    let mut cursor = model.sample_interval(rng);
    for _ in 0..n {
        let event = if marks {
            Event::with_mark(cursor, rng.gen_range(0.2..3.0))
        } else {
            Event::at(cursor)
        };
        events.push(event);
        cursor += model.sample_interval(rng);
    }
    EventSequence::new(0.0, cursor, events).unwrap()
}

#[test]
fn criterion_01_oracle_equivalence() {
    let shapes = [1.0, 2.0, 4.0, 8.0];
    let rates = [0.5, 1.0, 4.0];
    let priors = [0.05, 0.2];
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let model = IntervalModel::gamma(shapes[case % 4], rates[case % 3]).unwrap();
        let p_eps = priors[case % 2];
        let with_marks = case % 2 == 1;
        let n = rng.gen_range(1..=10);
        let seq = random_sequence(&model, n, with_marks, &mut rng);
        let marks = with_marks.then(|| MarkModel::log_normal(0.0, 0.5).unwrap());

        let ft = build_factors(&seq, &model, p_eps, marks.as_ref()).unwrap();
        let oracle = brute_force_posterior(&ft).unwrap();
        let fast = infer_all(&seq, &model, p_eps, marks.as_ref()).unwrap();
        let map = map_subsequence(&ft);

        let mut delta = (fast.log_marginal - oracle.log_marginal).abs();
        delta = delta.max((fast.intrusion_probability - oracle.intrusion_probability).abs());
        for k in 0..n {
            delta = delta.max((fast.event_marginals[k] - oracle.event_marginals[k]).abs());
        }
        let oracle_map_value = ft.log_prob_subsequence(&oracle.map_set).unwrap();
        delta = delta.max((map.log_posterior - oracle_map_value).abs());
        assert!(
            delta < 1e-9,
            "case {case} (shape {}, rate {}, p {p_eps}, marks {with_marks}): max deviation {delta:e}",
            model.shape(),
            model.rate()
        );
        worst = worst.max(delta);
    }
    println!("criterion 01 oracle equivalence over 100 cases: PASS (worst |delta| = {worst:.3e})");
}

#[test]
fn criterion_02_analytic_spot_check() {
    let seq = EventSequence::new(0.0, 2.0, vec![Event::at(1.0)]).unwrap();
    let model = IntervalModel::exponential(1.0).unwrap();
    let res = infer_all(&seq, &model, 0.1, None).unwrap();
    let expect = 1.0 / 19.0;
    let delta = (res.intrusion_probability - expect).abs();
    assert!(delta < 1e-9, "intrusion probability {} vs 1/19", res.intrusion_probability);
    println!("criterion 02 analytic spot check: PASS (|delta| = {delta:.3e})");
}

#[test]
fn criterion_03_closed_forms_vs_quadrature() {
    let mut worst: f64 = 0.0;
    for &shape in &[0.75, 1.0, 2.0, 4.0, 8.0] {
        for &rate in &[0.5, 1.0, 4.0] {
            let m = IntervalModel::gamma(shape, rate).unwrap();
            for &x in &[0.0, 0.1, 1.0, 5.0] {
                let cases = [
                    (TailIntegrand::Survival, m.log_survival(x).unwrap()),
                    (TailIntegrand::SqTail, m.log_sq_tail(x).unwrap()),
                    (TailIntegrand::LbTail, m.log_lb_tail(x).unwrap()),
                    (TailIntegrand::LbSqTail, m.log_lb_sq_tail(x).unwrap()),
                ];
                for (which, log_closed) in cases {
                    let quad = m.quadrature_reference(which, x).unwrap();
                    let rel = (log_closed.exp() - quad).abs() / quad.abs();
                    assert!(
                        rel <= 1e-8,
                        "{which:?} shape={shape} rate={rate} x={x}: rel={rel:e}"
                    );
                    worst = worst.max(rel);
                }
            }
        }
    }
    println!("criterion 03 closed forms vs quadrature: PASS (worst rel = {worst:.3e})");
}

fn known_config(shape: f64, p_epsilon: f64) -> ScorerConfig {
    ScorerConfig {
        p_epsilon,
        mode: MarkMode::IntervalsOnly,
        params: ParamSource::Known {
            intervals: IntervalModel::gamma(shape, shape).unwrap(),
            marks: None,
        },
    }
}

#[test]
fn criterion_04_posterior_means_by_shape() {
    // Fig. 2 analog: injection 0.2, scoring prior 0.065 (chosen so the
    // shape-1 posterior, which depends only on N, sits near 1/2).
    let mut lines = Vec::new();
    for &shape in &[1.0, 2.0, 4.0, 8.0] {
        let spec = GenSpec::new(
            20,
            IntervalModel::gamma(shape, shape).unwrap(),
            0.2,
            DATASET_SEED,
        )
        .unwrap();
        let data = gen_dataset(&spec, DATASET_ENTRIES).unwrap();
        let report = evaluate_dataset(&data, &known_config(shape, 0.065)).unwrap();
        let (pos, neg) = (report.mean_posterior_positive, report.mean_posterior_negative);
        if shape == 1.0 {
            assert!((0.4..=0.6).contains(&pos), "shape 1 positive mean {pos}");
            assert!((0.4..=0.6).contains(&neg), "shape 1 negative mean {neg}");
        } else {
            assert!(
                pos - neg >= 0.1,
                "shape {shape}: separation {} below 0.1",
                pos - neg
            );
        }
        lines.push(format!("shape {shape}: +{pos:.3}/-{neg:.3}"));
    }
    println!(
        "criterion 04 class-conditional posterior means: PASS ({})",
        lines.join(", ")
    );
}

#[test]
fn criterion_05_entry_auc_by_shape_and_injection() {
    // Fig. 3 analog over the injection grid, scored at the matching prior,
    // with known parameters and with per-entry EM.
    let injections = [0.2, 0.3, 0.4];
    let mut shape8_peak: f64 = 0.0;
    let mut lines = Vec::new();
    for &shape in &[2.0, 4.0, 8.0] {
        for &inj in &injections {
            let spec = GenSpec::new(
                20,
                IntervalModel::gamma(shape, shape).unwrap(),
                inj,
                DATASET_SEED,
            )
            .unwrap();
            let data = gen_dataset(&spec, DATASET_ENTRIES).unwrap();
            let known = evaluate_dataset(&data, &known_config(shape, inj)).unwrap();
            let em_cfg = ScorerConfig {
                p_epsilon: inj,
                mode: MarkMode::IntervalsOnly,
                params: ParamSource::PerEntryEm {
                    family: Family::Gamma,
                },
            };
            let em = evaluate_dataset(&data, &em_cfg).unwrap();
            assert!(
                known.entry_auc > 0.6,
                "shape {shape} inj {inj}: known AUC {}",
                known.entry_auc
            );
            assert!(
                em.entry_auc > 0.6,
                "shape {shape} inj {inj}: EM AUC {}",
                em.entry_auc
            );
            if shape == 8.0 {
                shape8_peak = shape8_peak.max(known.entry_auc);
            }
            lines.push(format!(
                "s{shape}/i{inj}: known {:.3}, em {:.3}",
                known.entry_auc, em.entry_auc
            ));
        }
    }
    assert!(shape8_peak >= 0.8, "shape-8 peak AUC {shape8_peak}");
    println!(
        "criterion 05 entry AUC: PASS (shape-8 peak {shape8_peak:.3}; {})",
        lines.join("; ")
    );
}

#[test]
fn criterion_06_map_jaccard_by_shape() {
    // Fig. 4 analog: heavy injection, per-shape peak over a prior grid.
    let priors = [0.3, 0.45, 0.6];
    let mut peaks = Vec::new();
    for &shape in &[1.0, 2.0, 4.0, 8.0] {
        let spec = GenSpec::new(
            20,
            IntervalModel::gamma(shape, shape).unwrap(),
            0.5,
            DATASET_SEED,
        )
        .unwrap();
        let data = gen_dataset(&spec, DATASET_ENTRIES).unwrap();
        let mut peak: f64 = 0.0;
        for &p in &priors {
            let report = evaluate_dataset(&data, &known_config(shape, p)).unwrap();
            peak = peak.max(report.mean_jaccard_positive);
        }
        peaks.push((shape, peak));
    }
    let shape1_peak = peaks[0].1;
    for &(shape, peak) in &peaks[1..] {
        assert!(peak >= 0.45, "shape {shape}: positives-only Jaccard peak {peak}");
        assert!(
            shape1_peak < peak,
            "shape-1 Jaccard {shape1_peak} not strictly below shape {shape} ({peak})"
        );
    }
    let summary: Vec<String> = peaks
        .iter()
        .map(|(s, j)| format!("shape {s}: {j:.3}"))
        .collect();
    println!("criterion 06 MAP Jaccard: PASS ({})", summary.join(", "));
}

#[test]
fn criterion_07_marked_mode_ordering() {
    // Table 1 analog on synthetic marked data: combined >= intervals-only
    // >= marks-only - 0.02.
    let process_marks = MarkModel::log_normal(0.0, 0.4).unwrap();
    let intrusion_marks = MarkModel::log_normal(0.7, 0.4).unwrap();
    let shape = 4.0;
    let spec = GenSpec::new(
        20,
        IntervalModel::gamma(shape, shape).unwrap(),
        0.2,
        DATASET_SEED,
    )
    .unwrap()
    .with_mark_models(process_marks, intrusion_marks);
    let data = gen_dataset(&spec, DATASET_ENTRIES).unwrap();
    let config = |mode| ScorerConfig {
        p_epsilon: 0.1,
        mode,
        params: ParamSource::Known {
            intervals: IntervalModel::gamma(shape, shape).unwrap(),
            marks: Some(process_marks),
        },
    };
    let combined = evaluate_dataset(&data, &config(MarkMode::Combined)).unwrap().entry_auc;
    let intervals = evaluate_dataset(&data, &config(MarkMode::IntervalsOnly))
        .unwrap()
        .entry_auc;
    let marks = evaluate_dataset(&data, &config(MarkMode::MarksOnly)).unwrap().entry_auc;
    assert!(
        combined >= intervals,
        "combined {combined} below intervals-only {intervals}"
    );
    assert!(
        intervals >= marks - 0.02,
        "intervals-only {intervals} below marks-only {marks} - 0.02"
    );
    println!(
        "criterion 07 marked-mode ordering: PASS (combined {combined:.3} >= intervals {intervals:.3} >= marks {marks:.3} - 0.02)"
    );
}

#[test]
fn criterion_08_quadratic_scaling() {
    let model = IntervalModel::gamma(4.0, 4.0).unwrap();
    let make = |n: usize| {
        let spec = GenSpec::new(n, model, 0.2, 8_888).unwrap();
        gen_entry(&spec, false, &mut ChaCha8Rng::seed_from_u64(8))
    };
    let time_scoring = |seq: &EventSequence| {
        let mut best = Duration::MAX;
        for _ in 0..5 {
            let start = Instant::now();
            let res = infer_all(seq, &model, 0.1, None).unwrap();
            assert!(res.log_marginal.is_finite());
            best = best.min(start.elapsed());
        }
        best
    };
    let small = make(1000);
    let large = make(2000);
    let t_small = time_scoring(&small);
    let t_large = time_scoring(&large);
    let ratio = t_large.as_secs_f64() / t_small.as_secs_f64();
    assert!(
        (3.0..=6.0).contains(&ratio),
        "scaling ratio {ratio:.2} outside [3, 6] (t1000 = {t_small:?}, t2000 = {t_large:?})"
    );
    assert!(
        t_large < Duration::from_secs(2),
        "N=2000 scoring took {t_large:?}"
    );
    println!(
        "criterion 08 quadratic scaling: PASS (t1000 = {:.1} ms, t2000 = {:.1} ms, ratio {ratio:.2})",
        t_small.as_secs_f64() * 1e3,
        t_large.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_09_exponential_exchangeability() {
    let times = [0.9, 2.1, 2.7, 4.0, 4.4, 5.8, 6.9, 7.4];
    let events: Vec<Event> = times.iter().map(|&t| Event::at(t)).collect();
    let seq = EventSequence::new(0.0, 8.5, events).unwrap();
    let model = IntervalModel::exponential(1.0).unwrap();
    let ft = build_factors(&seq, &model, 0.15, None).unwrap();
    let interior: Vec<usize> = (1..times.len() - 1).collect();
    let mut worst: f64 = 0.0;
    for k in 0..=interior.len() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for mask in 0u32..(1 << interior.len()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let set: BTreeSet<usize> = interior
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << *b) != 0)
                .map(|(_, &i)| i)
                .collect();
            let lp = ft.log_prob_subsequence(&set).unwrap();
            lo = lo.min(lp);
            hi = hi.max(lp);
        }
        assert!(hi - lo <= 1e-12, "cardinality {k}: spread {:e}", hi - lo);
        worst = worst.max(hi - lo);
    }
    println!("criterion 09 exponential exchangeability: PASS (worst spread {worst:.3e})");
}

#[test]
fn criterion_10_time_reversal_invariance() {
    let shapes = [1.0, 2.0, 4.0, 8.0];
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let model = IntervalModel::gamma(shapes[case % 4], 1.0).unwrap();
        let n = rng.gen_range(1..=10);
        let seq = random_sequence(&model, n, false, &mut rng);
        let ft = build_factors(&seq, &model, 0.12, None).unwrap();
        let ft_rev = build_factors(&seq.reversed(), &model, 0.12, None).unwrap();
        let (a, _) = log_marginal_likelihood(&ft);
        let (b, _) = log_marginal_likelihood(&ft_rev);
        let delta = (a - b).abs();
        assert!(delta < 1e-9, "case {case}: |delta| = {delta:e}");
        worst = worst.max(delta);
    }
    println!("criterion 10 time-reversal invariance: PASS (worst |delta| = {worst:.3e})");
}
