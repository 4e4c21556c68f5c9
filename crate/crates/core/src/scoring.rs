//! Segment-level confusion counting, event-level matching with a ±1 s
//! onset/offset tolerance, and the derived metrics.
//!
//! Event matching is one-to-one: a truth/hypothesis pair matches iff both
//! the onset difference and the offset difference are within the
//! tolerance. Pairs are resolved greedily in ascending onset order, which
//! is maximum-cardinality here because both lists are sorted and
//! non-overlapping (the unit tests check this against a brute-force
//! optimal matcher).

use crate::events::EventLabel;
use crate::signal::ActivityClass;
use thiserror::Error;

/// TP/TN/FP/FN tallies with seizure as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConfusionCounts {
    #[serde(rename = "tp")]
    pub true_pos: u64,
    #[serde(rename = "tn")]
    pub true_neg: u64,
    #[serde(rename = "fp")]
    pub false_pos: u64,
    #[serde(rename = "fn")]
    pub false_neg: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    /// Element-wise sum, for combining per-recording counts.
    pub fn merge(&self, other: &ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            true_pos: self.true_pos + other.true_pos,
            true_neg: self.true_neg + other.true_neg,
            false_pos: self.false_pos + other.false_pos,
            false_neg: self.false_neg + other.false_neg,
        }
    }
}

/// Event-matching tolerance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EvalConfig {
    pub tolerance_s: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { tolerance_s: 1.0 }
    }
}

/// Accuracy / recall / precision / F1. Accuracy is absent for event-based
/// scoring, where true negatives are undefined.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScoringError {
    #[error("{preds} predictions vs {truths} truths")]
    LengthMismatch { preds: usize, truths: usize },
    #[error("{which} events not sorted by onset at {at_s}s")]
    UnsortedEvents { which: &'static str, at_s: f64 },
    #[error("{which} events overlap at {at_s}s")]
    OverlapWithinList { which: &'static str, at_s: f64 },
}

/// Segment-level confusion tally from aligned prediction/truth lists.
pub fn evaluate_segments(
    preds: &[ActivityClass],
    truths: &[ActivityClass],
) -> Result<ConfusionCounts, ScoringError> {
    if preds.len() != truths.len() {
        return Err(ScoringError::LengthMismatch {
            preds: preds.len(),
            truths: truths.len(),
        });
    }
    let mut c = ConfusionCounts::default();
    for (&p, &t) in preds.iter().zip(truths) {
        match (p, t) {
            (ActivityClass::Seizure, ActivityClass::Seizure) => c.true_pos += 1,
            (ActivityClass::Background, ActivityClass::Background) => c.true_neg += 1,
            (ActivityClass::Seizure, ActivityClass::Background) => c.false_pos += 1,
            (ActivityClass::Background, ActivityClass::Seizure) => c.false_neg += 1,
        }
    }
    Ok(c)
}

fn check_list(events: &[EventLabel], which: &'static str) -> Result<(), ScoringError> {
    for pair in events.windows(2) {
        if pair[1].onset_s < pair[0].onset_s {
            return Err(ScoringError::UnsortedEvents {
                which,
                at_s: pair[1].onset_s,
            });
        }
        if pair[1].onset_s < pair[0].offset_s {
            return Err(ScoringError::OverlapWithinList {
                which,
                at_s: pair[1].onset_s,
            });
        }
    }
    Ok(())
}

fn events_match(t: &EventLabel, h: &EventLabel, tol: f64) -> bool {
    (t.onset_s - h.onset_s).abs() <= tol && (t.offset_s - h.offset_s).abs() <= tol
}

/// Event-level matching: tp = matched pairs, fn = unmatched truths,
/// fp = unmatched hypotheses; tn is zero by definition.
pub fn match_events(
    truth: &[EventLabel],
    hyp: &[EventLabel],
    cfg: &EvalConfig,
) -> Result<ConfusionCounts, ScoringError> {
    check_list(truth, "truth")?;
    check_list(hyp, "hypothesis")?;
    let tol = cfg.tolerance_s;

    let mut taken = vec![false; hyp.len()];
    let mut tp = 0u64;
    for t in truth {
        for (j, h) in hyp.iter().enumerate() {
            if !taken[j] && events_match(t, h, tol) {
                taken[j] = true;
                tp += 1;
                break;
            }
        }
    }
    Ok(ConfusionCounts {
        true_pos: tp,
        true_neg: 0,
        false_pos: hyp.len() as u64 - tp,
        false_neg: truth.len() as u64 - tp,
    })
}

/// Recall, precision, F1 and (for segment scoring) accuracy.
/// Any 0/0 ratio is defined as 0.
pub fn compute_metrics(c: &ConfusionCounts, event_based: bool) -> MetricsReport {
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let recall = ratio(c.true_pos, c.true_pos + c.false_neg);
    let precision = ratio(c.true_pos, c.true_pos + c.false_pos);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    let accuracy = if event_based {
        None
    } else {
        Some(ratio(c.true_pos + c.true_neg, c.total()))
    };
    MetricsReport {
        accuracy,
        recall,
        precision,
        f1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::Source;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ev(onset: f64, offset: f64) -> EventLabel {
        EventLabel::new(onset, offset, Source::Expert).unwrap()
    }

    #[test]
    fn segment_counts_all_correct() {
        let pos = vec![ActivityClass::Seizure; 10];
        let neg = vec![ActivityClass::Background; 10];
        let truths: Vec<_> = pos.iter().chain(&neg).copied().collect();
        let c = evaluate_segments(&truths, &truths).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                true_pos: 10,
                true_neg: 10,
                false_pos: 0,
                false_neg: 0
            }
        );
    }

    #[test]
    fn segment_counts_all_predicted_seizure() {
        let truths: Vec<_> = std::iter::repeat(ActivityClass::Seizure)
            .take(10)
            .chain(std::iter::repeat(ActivityClass::Background).take(10))
            .collect();
        let preds = vec![ActivityClass::Seizure; 20];
        let c = evaluate_segments(&preds, &truths).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                true_pos: 10,
                true_neg: 0,
                false_pos: 10,
                false_neg: 0
            }
        );
    }

    #[test]
    fn segment_counts_match_hand_tally() {
        use ActivityClass::{Background as B, Seizure as S};
        let preds = [S, B, S, B, S, S];
        let truths = [S, S, B, B, B, S];
        let c = evaluate_segments(&preds, &truths).unwrap();
        // item by item: TP, FN, FP, TN, FP, TP
        assert_eq!(
            c,
            ConfusionCounts {
                true_pos: 2,
                true_neg: 1,
                false_pos: 2,
                false_neg: 1
            }
        );
        assert_eq!(c.total(), 6);
    }

    #[test]
    fn segment_length_mismatch() {
        let a = [ActivityClass::Seizure];
        assert!(matches!(
            evaluate_segments(&a, &[]),
            Err(ScoringError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn event_match_within_tolerance() {
        let c = match_events(
            &[ev(10.5, 24.3)],
            &[ev(10.0, 25.0)],
            &EvalConfig::default(),
        )
        .unwrap();
        assert_eq!(c.true_pos, 1);
        assert_eq!(c.false_pos, 0);
        assert_eq!(c.false_neg, 0);
    }

    #[test]
    fn event_onset_violation_fails_match() {
        let c = match_events(
            &[ev(12.0, 24.5)],
            &[ev(10.0, 25.0)],
            &EvalConfig::default(),
        )
        .unwrap();
        assert_eq!((c.true_pos, c.false_pos, c.false_neg), (0, 1, 1));
    }

    #[test]
    fn one_to_one_matching_leaves_extras_unmatched() {
        let truth = [ev(10.0, 20.0)];
        let hyp = [ev(9.5, 20.2), ev(10.4, 20.5)];
        let c = match_events(&truth, &hyp, &EvalConfig::default()).unwrap();
        assert_eq!((c.true_pos, c.false_pos, c.false_neg), (1, 1, 0));
    }

    #[test]
    fn rejects_unsorted_and_overlapping() {
        let unsorted = [ev(5.0, 6.0), ev(1.0, 2.0)];
        assert!(matches!(
            match_events(&unsorted, &[], &EvalConfig::default()),
            Err(ScoringError::UnsortedEvents { .. })
        ));
        let overlapping = [ev(1.0, 4.0), ev(3.0, 6.0)];
        assert!(matches!(
            match_events(&[], &overlapping, &EvalConfig::default()),
            Err(ScoringError::OverlapWithinList { .. })
        ));
    }

    /// Random sorted non-overlapping event list.
    pub(crate) fn random_events(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<EventLabel> {
        let n = rng.gen_range(0..=max_len);
        let mut t = 0.0f64;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            t += rng.gen_range(0.0..4.0);
            let dur = rng.gen_range(0.2..5.0);
            out.push(ev(t, t + dur));
            t += dur;
        }
        out
    }

    /// Brute-force maximum bipartite matching by recursion over truths.
    pub(crate) fn optimal_match_count(truth: &[EventLabel], hyp: &[EventLabel], tol: f64) -> u64 {
        fn rec(i: usize, truth: &[EventLabel], hyp: &[EventLabel], taken: &mut [bool], tol: f64) -> u64 {
            if i == truth.len() {
                return 0;
            }
            // skip truth i
            let mut best = rec(i + 1, truth, hyp, taken, tol);
            for j in 0..hyp.len() {
                if !taken[j]
                    && (truth[i].onset_s - hyp[j].onset_s).abs() <= tol
                    && (truth[i].offset_s - hyp[j].offset_s).abs() <= tol
                {
                    taken[j] = true;
                    best = best.max(1 + rec(i + 1, truth, hyp, taken, tol));
                    taken[j] = false;
                }
            }
            best
        }
        let mut taken = vec![false; hyp.len()];
        rec(0, truth, hyp, &mut taken, tol)
    }

    #[test]
    fn greedy_equals_optimal_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let cfg = EvalConfig { tolerance_s: 1.0 };
        for case in 0..500 {
            let truth = random_events(&mut rng, 8);
            let hyp = random_events(&mut rng, 8);
            let c = match_events(&truth, &hyp, &cfg).unwrap();
            let best = optimal_match_count(&truth, &hyp, cfg.tolerance_s);
            assert_eq!(c.true_pos, best, "case {case}");
            assert_eq!(c.true_pos + c.false_neg, truth.len() as u64);
            assert_eq!(c.true_pos + c.false_pos, hyp.len() as u64);
        }
    }

    #[test]
    fn shrinking_tolerance_never_increases_tp() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let truth = random_events(&mut rng, 6);
            let hyp = random_events(&mut rng, 6);
            let mut prev = u64::MAX;
            for tol in [2.0, 1.0, 0.5, 0.1] {
                let c = match_events(&truth, &hyp, &EvalConfig { tolerance_s: tol }).unwrap();
                assert!(c.true_pos <= prev);
                prev = c.true_pos;
            }
        }
    }

    #[test]
    fn metrics_basics() {
        let c = ConfusionCounts {
            true_pos: 90,
            true_neg: 90,
            false_pos: 10,
            false_neg: 10,
        };
        let m = compute_metrics(&c, false);
        assert_eq!(m.accuracy, Some(0.9));
        assert!((m.recall - 0.9).abs() < 1e-12);
        assert!((m.precision - 0.9).abs() < 1e-12);
        assert!((m.f1 - 0.9).abs() < 1e-12);
    }

    #[test]
    fn f1_combines_precision_and_recall() {
        // precision 0.5, recall 1.0 → F1 = 2/3.
        let c = ConfusionCounts {
            true_pos: 5,
            true_neg: 0,
            false_pos: 5,
            false_neg: 0,
        };
        let m = compute_metrics(&c, true);
        assert_eq!(m.accuracy, None);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_over_zero_is_zero() {
        let c = ConfusionCounts {
            true_pos: 0,
            true_neg: 0,
            false_pos: 0,
            false_neg: 5,
        };
        let m = compute_metrics(&c, true);
        assert_eq!((m.recall, m.precision, m.f1), (0.0, 0.0, 0.0));
    }
}
