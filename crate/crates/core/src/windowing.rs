//! Segmentation of continuous signals into fixed-duration model windows.
//!
//! Two regimes:
//!
//! * [`segment_by_activity`] — each contiguous run of seizure or background
//!   activity (as partitioned by the expert events) is segmented separately
//!   from its own start, so no window ever mixes the two classes.
//! * [`segment_sliding`] — a label-blind window slides from time zero over
//!   the whole signal; windows may straddle seizure boundaries. This is the
//!   real-world inference regime.
//!
//! Window starts are computed in integer samples (`round(shift_s · rate)`),
//! trailing partial windows are dropped.

use crate::events::EventLabel;
use crate::signal::{ActivityClass, Signal};
use thiserror::Error;

/// Window length and hop, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SegmentationConfig {
    pub window_s: f64,
    pub shift_s: f64,
}

impl SegmentationConfig {
    pub fn new(window_s: f64, shift_s: f64) -> Result<Self, WindowingError> {
        if !(shift_s > 0.0 && window_s >= shift_s) {
            return Err(WindowingError::InvalidConfig { window_s, shift_s });
        }
        Ok(Self { window_s, shift_s })
    }

    pub fn window_samples(&self, rate_hz: f64) -> usize {
        (self.window_s * rate_hz).round() as usize
    }

    pub fn shift_samples(&self, rate_hz: f64) -> usize {
        ((self.shift_s * rate_hz).round() as usize).max(1)
    }
}

/// Fixed-duration slice of a signal, the unit the detectors consume.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub start_s: f64,
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
    pub label: Option<ActivityClass>,
    pub recording_id: String,
}

impl Window {
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn end_s(&self) -> f64 {
        self.start_s + self.duration_s()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum WindowingError {
    #[error("invalid segmentation config: window {window_s}s, shift {shift_s}s")]
    InvalidConfig { window_s: f64, shift_s: f64 },
    #[error("event labels overlap at {at_s}s")]
    OverlappingLabels { at_s: f64 },
    #[error("event labels are not sorted by onset at {at_s}s")]
    UnsortedLabels { at_s: f64 },
}

/// Validate that events are sorted by onset and non-overlapping.
pub(crate) fn check_events(events: &[EventLabel]) -> Result<(), WindowingError> {
    for pair in events.windows(2) {
        if pair[1].onset_s < pair[0].onset_s {
            return Err(WindowingError::UnsortedLabels {
                at_s: pair[1].onset_s,
            });
        }
        if pair[1].onset_s < pair[0].offset_s {
            return Err(WindowingError::OverlappingLabels {
                at_s: pair[1].onset_s,
            });
        }
    }
    Ok(())
}

fn cut_windows(
    sig: &Signal,
    run_start: usize,
    run_end: usize,
    cfg: &SegmentationConfig,
    label: Option<ActivityClass>,
    out: &mut Vec<Window>,
) {
    let rate = sig.sample_rate_hz;
    let win = cfg.window_samples(rate);
    let shift = cfg.shift_samples(rate);
    if win == 0 || run_end < run_start + win {
        return;
    }
    let mut start = run_start;
    while start + win <= run_end {
        out.push(Window {
            start_s: start as f64 / rate,
            samples: sig.samples[start..start + win].to_vec(),
            sample_rate_hz: rate,
            label,
            recording_id: sig.recording_id.clone(),
        });
        start += shift;
    }
}

/// Activity-pure segmentation: each run of one class is segmented
/// independently from its own onset and every window carries the run label.
/// Runs shorter than the window yield nothing.
pub fn segment_by_activity(
    sig: &Signal,
    events: &[EventLabel],
    cfg: &SegmentationConfig,
) -> Result<Vec<Window>, WindowingError> {
    check_events(events)?;
    let rate = sig.sample_rate_hz;
    let n = sig.samples.len();
    let clamp = |t: f64| -> usize { ((t * rate).round() as i64).clamp(0, n as i64) as usize };

    let mut out = Vec::new();
    let mut cursor = 0usize;
    for ev in events {
        let a = clamp(ev.onset_s);
        let b = clamp(ev.offset_s);
        if a > cursor {
            cut_windows(sig, cursor, a, cfg, Some(ActivityClass::Background), &mut out);
        }
        if b > a {
            cut_windows(sig, a, b, cfg, Some(ActivityClass::Seizure), &mut out);
        }
        cursor = cursor.max(b);
    }
    if cursor < n {
        cut_windows(sig, cursor, n, cfg, Some(ActivityClass::Background), &mut out);
    }
    Ok(out)
}

/// Label-blind sliding segmentation from time zero.
///
/// Windows start at `0, shift, 2·shift, …` while they fit; labels are
/// absent. A signal shorter than one window yields an empty list.
pub fn segment_sliding(sig: &Signal, cfg: &SegmentationConfig) -> Vec<Window> {
    let mut out = Vec::new();
    cut_windows(sig, 0, sig.samples.len(), cfg, None, &mut out);
    out
}

/// Label sliding windows against expert events: seizure iff at least half
/// of the window span intersects seizure events (ties go to seizure).
pub fn assign_window_labels(windows: &[Window], events: &[EventLabel]) -> Vec<Window> {
    windows
        .iter()
        .map(|w| {
            let (a, b) = (w.start_s, w.end_s());
            let overlap: f64 = events
                .iter()
                .map(|ev| (b.min(ev.offset_s) - a.max(ev.onset_s)).max(0.0))
                .sum();
            let label = if overlap >= 0.5 * (b - a) {
                ActivityClass::Seizure
            } else {
                ActivityClass::Background
            };
            Window {
                label: Some(label),
                ..w.clone()
            }
        })
        .collect()
}
