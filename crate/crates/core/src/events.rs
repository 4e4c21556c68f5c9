//! Reassembly of overlapping window predictions into a continuous label
//! track and extraction of seizure events with start/end times.
//!
//! Every time bin receives the class predicted by the majority of the
//! windows covering it (ties go to background, bins under no window are
//! background). Maximal seizure runs become events; events separated by a
//! gap below `merge_gap_s` are merged first, then events shorter than
//! `min_duration_s` are dropped.

use crate::signal::ActivityClass;
use crate::windowing::Window;
use thiserror::Error;

/// Who produced an event boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Expert,
    Model,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Expert => write!(f, "expert"),
            Source::Model => write!(f, "model"),
        }
    }
}

/// A seizure event: half-open interval `[onset_s, offset_s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventLabel {
    pub onset_s: f64,
    pub offset_s: f64,
    pub source: Source,
}

impl EventLabel {
    pub fn new(onset_s: f64, offset_s: f64, source: Source) -> Result<Self, TrackError> {
        if offset_s <= onset_s {
            return Err(TrackError::EmptyEvent { onset_s, offset_s });
        }
        Ok(Self {
            onset_s,
            offset_s,
            source,
        })
    }

    pub fn duration_s(&self) -> f64 {
        self.offset_s - self.onset_s
    }
}

/// One classified window with its seizure probability.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub window: Window,
    pub predicted_class: ActivityClass,
    pub score: f64,
}

impl Prediction {
    /// Classify a window by thresholding the seizure probability.
    pub fn from_score(window: Window, score: f64, threshold: f64) -> Self {
        let predicted_class = if score >= threshold {
            ActivityClass::Seizure
        } else {
            ActivityClass::Background
        };
        Self {
            window,
            predicted_class,
            score,
        }
    }
}

/// Per-bin class labels at a fixed temporal resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelTrack {
    pub bin_s: f64,
    pub bins: Vec<ActivityClass>,
    pub origin_s: f64,
}

impl LabelTrack {
    pub fn duration_s(&self) -> f64 {
        self.bins.len() as f64 * self.bin_s
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TrackError {
    #[error("no predictions to reconstruct from")]
    EmptyPredictions,
    #[error("predictions mix recordings `{first}` and `{second}`")]
    MixedRecordings { first: String, second: String },
    #[error("bin size must be positive, got {0}")]
    NonPositiveBin(f64),
    #[error("event [{onset_s}, {offset_s}) is empty or inverted")]
    EmptyEvent { onset_s: f64, offset_s: f64 },
}

/// Majority-vote label track from overlapping window predictions.
///
/// All predictions must come from one recording. The track starts at the
/// recording origin (t = 0) and extends to the end of the last window.
pub fn reconstruct_track(preds: &[Prediction], bin_s: f64) -> Result<LabelTrack, TrackError> {
    if preds.is_empty() {
        return Err(TrackError::EmptyPredictions);
    }
    if bin_s <= 0.0 || !bin_s.is_finite() {
        return Err(TrackError::NonPositiveBin(bin_s));
    }
    let rec = &preds[0].window.recording_id;
    if let Some(p) = preds.iter().find(|p| &p.window.recording_id != rec) {
        return Err(TrackError::MixedRecordings {
            first: rec.clone(),
            second: p.window.recording_id.clone(),
        });
    }

    let end_s = preds
        .iter()
        .map(|p| p.window.end_s())
        .fold(0.0f64, f64::max);
    let n_bins = ((end_s / bin_s) - 1e-9).ceil().max(1.0) as usize;

    let mut seiz = vec![0u32; n_bins];
    let mut back = vec![0u32; n_bins];
    for p in preds {
        let lo = ((p.window.start_s / bin_s) + 1e-9).floor().max(0.0) as usize;
        let hi = (((p.window.end_s() / bin_s) - 1e-9).ceil() as usize).min(n_bins);
        let counts = match p.predicted_class {
            ActivityClass::Seizure => &mut seiz,
            ActivityClass::Background => &mut back,
        };
        for c in &mut counts[lo..hi] {
            *c += 1;
        }
    }

    let bins = seiz
        .iter()
        .zip(&back)
        .map(|(&s, &b)| {
            if s > b {
                ActivityClass::Seizure
            } else {
                ActivityClass::Background
            }
        })
        .collect();

    Ok(LabelTrack {
        bin_s,
        bins,
        origin_s: 0.0,
    })
}

/// Extract seizure events from a label track.
///
/// Maximal runs of seizure bins become `[run_start, run_end)` events;
/// events separated by gaps shorter than `merge_gap_s` are merged, then
/// events shorter than `min_duration_s` are discarded.
pub fn extract_events(track: &LabelTrack, min_duration_s: f64, merge_gap_s: f64) -> Vec<EventLabel> {
    let mut events: Vec<EventLabel> = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, &b) in track.bins.iter().enumerate() {
        match (b, run_start) {
            (ActivityClass::Seizure, None) => run_start = Some(i),
            (ActivityClass::Background, Some(s)) => {
                events.push(bin_event(track, s, i));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        events.push(bin_event(track, s, track.bins.len()));
    }

    // Merge gaps below the threshold, then apply the duration floor.
    let mut merged: Vec<EventLabel> = Vec::new();
    for ev in events {
        match merged.last_mut() {
            Some(last) if ev.onset_s - last.offset_s < merge_gap_s => {
                last.offset_s = ev.offset_s;
            }
            _ => merged.push(ev),
        }
    }
    merged.retain(|ev| ev.duration_s() >= min_duration_s || min_duration_s <= 0.0);
    merged
}

fn bin_event(track: &LabelTrack, start_bin: usize, end_bin: usize) -> EventLabel {
    EventLabel {
        onset_s: track.origin_s + start_bin as f64 * track.bin_s,
        offset_s: track.origin_s + end_bin as f64 * track.bin_s,
        source: Source::Model,
    }
}
