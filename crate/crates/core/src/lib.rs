//! # ictus-core — single-channel EEG seizure detection
//!
//! Building blocks for a seizure detection pipeline operating on raw
//! single-channel EEG:
//!
//! ```text
//! raw signal (f32 + JSON sidecar)
//!   │
//!   ├─ signal::resample()          polyphase rational resampler → 100 Hz
//!   ├─ signal::fir_bandpass()      windowed-sinc FIR, 1–20 Hz
//!   ├─ signal::zscore()            stats from seizure-free ranges or prefix
//!   ├─ windowing                   activity-pure or sliding segmentation
//!   ├─ neural                      CNN-6 / CNN+Transformer detectors
//!   ├─ events                      overlap vote → label track → events
//!   └─ scoring                     segment confusion + ±1 s event matching
//! ```
//!
//! Two processing regimes are supported end to end. The *classification*
//! regime segments each contiguous run of seizure or background activity
//! separately, so every window is pure, and scores window predictions
//! directly. The *detection* regime slides a label-blind window from time
//! zero, merges overlapping window predictions by majority vote into a
//! continuous label track, extracts seizure events with start/end times,
//! and matches them against expert events under a ±1 s onset/offset
//! tolerance.
//!
//! [`datasets`] adds leakage-free subject splitting, a loader for the
//! five-set Bonn EEG archive, and a synthetic planted-seizure generator
//! used as ground truth in tests. [`io`] defines the on-disk formats
//! shared with the `ictus` CLI.
//!
//! All randomness flows from explicit seeds; every operation here is
//! deterministic given its inputs.

pub mod datasets;
pub mod events;
pub mod io;
pub mod neural;
pub mod scoring;
pub mod signal;
pub mod windowing;

pub use events::{extract_events, reconstruct_track, EventLabel, LabelTrack, Prediction, Source};
pub use scoring::{
    compute_metrics, evaluate_segments, match_events, ConfusionCounts, EvalConfig, MetricsReport,
};
pub use signal::{
    fir_bandpass, resample, stats_from_prefix, stats_from_ranges, zscore, ActivityClass,
    NormStats, Signal, TimeRange,
};
pub use windowing::{
    assign_window_labels, segment_by_activity, segment_sliding, SegmentationConfig, Window,
};
