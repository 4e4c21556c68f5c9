//! Canonical signal representation, resampling, FIR band-pass filtering and
//! the two z-score normalization regimes.
//!
//! The resampler is a polyphase rational resampler: the rate ratio is
//! replaced by the closest rational `up/down` with `down ≤ 20_000`, the
//! signal is conceptually zero-stuffed by `up`, low-passed with a
//! Hamming-windowed sinc whose per-phase taps are normalized to unit sum
//! (so constants pass through exactly), and decimated by `down`. Group
//! delay is compensated, and the input is reflect-padded so the edges do
//! not ring down to zero.
//!
//! The band-pass is a linear-phase Hamming-windowed sinc whose length is
//! chosen for a ≤ 1 Hz transition band, applied with group-delay
//! compensation so output sample `k` is aligned with input sample `k`.
//! The first and last [`bandpass_edge_len`] samples sit inside the filter
//! transient and should be excluded from measurements.

use thiserror::Error;

/// Maximum denominator when approximating a resampling ratio by a rational.
pub const MAX_RATIO_DENOMINATOR: u64 = 20_000;

/// Taps per polyphase branch of the resampling low-pass.
const RESAMPLE_TAPS_PER_PHASE: usize = 32;

/// Two-sided class of EEG activity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivityClass {
    Seizure,
    Background,
}

impl std::fmt::Display for ActivityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActivityClass::Seizure => write!(f, "seizure"),
            ActivityClass::Background => write!(f, "background"),
        }
    }
}

impl std::str::FromStr for ActivityClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seizure" => Ok(ActivityClass::Seizure),
            "background" => Ok(ActivityClass::Background),
            other => Err(format!("unknown activity class `{other}`")),
        }
    }
}

/// Uniformly sampled single-channel amplitude sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
    pub subject_id: String,
    pub recording_id: String,
}

impl Signal {
    pub fn new(
        samples: Vec<f64>,
        sample_rate_hz: f64,
        subject_id: impl Into<String>,
        recording_id: impl Into<String>,
    ) -> Result<Self, SignalError> {
        if sample_rate_hz <= 0.0 || !sample_rate_hz.is_finite() {
            return Err(SignalError::NonPositiveRate(sample_rate_hz));
        }
        if samples.is_empty() {
            return Err(SignalError::EmptySignal);
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            subject_id: subject_id.into(),
            recording_id: recording_id.into(),
        })
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }
}

/// Mean and standard deviation used for z-score normalization.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormStats {
    pub mean: f64,
    pub std: f64,
}

/// Half-open time interval `[start_s, end_s)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeRange {
    pub start_s: f64,
    pub end_s: f64,
}

impl TimeRange {
    pub fn new(start_s: f64, end_s: f64) -> Result<Self, SignalError> {
        if start_s < 0.0 || end_s <= start_s {
            return Err(SignalError::InvalidRange { start_s, end_s });
        }
        Ok(Self { start_s, end_s })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SignalError {
    #[error("sample rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("signal has no samples")]
    EmptySignal,
    #[error("invalid band [{low_hz}, {high_hz}] Hz at rate {rate_hz} Hz")]
    InvalidBand {
        low_hz: f64,
        high_hz: f64,
        rate_hz: f64,
    },
    #[error("signal ({signal_len} samples) shorter than filter ({filter_len} taps)")]
    SignalShorterThanFilter {
        signal_len: usize,
        filter_len: usize,
    },
    #[error("range list is empty")]
    EmptyRanges,
    #[error("range [{start_s}, {end_s}) is invalid or out of signal bounds")]
    InvalidRange { start_s: f64, end_s: f64 },
    #[error("selected samples have zero variance")]
    ZeroVariance,
}

/// Closest rational `num/den` to `x` with `den ≤ max_den` (Stern-Brocot walk).
pub fn best_rational(x: f64, max_den: u64) -> (u64, u64) {
    assert!(x > 0.0 && x.is_finite() && max_den >= 1);
    // Mediant search between lo = a/b and hi = c/d.
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, 0u64);
    loop {
        let num = a + c;
        let den = b + d;
        if den > max_den {
            break;
        }
        if (num as f64) < x * den as f64 {
            a = num;
            b = den;
        } else if (num as f64) > x * den as f64 {
            c = num;
            d = den;
        } else {
            return (num, den);
        }
    }
    // Pick the closer of the two bounding fractions (c/d may be 1/0 = ∞).
    let lo_err = (x - a as f64 / b as f64).abs();
    if d == 0 {
        return (a, b);
    }
    let hi_err = (x - c as f64 / d as f64).abs();
    if lo_err <= hi_err {
        (a, b)
    } else {
        (c, d)
    }
}

fn hamming(n: usize, len: usize) -> f64 {
    if len <= 1 {
        return 1.0;
    }
    let x = n as f64 / (len - 1) as f64;
    0.54 - 0.46 * (2.0 * std::f64::consts::PI * x).cos()
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Reflect-pad lookup: `x[-k]` mirrors to `x[k]`, `x[n+k]` to `x[n-2-k]`.
fn sample_reflected(samples: &[f64], idx: i64) -> f64 {
    let n = samples.len() as i64;
    if n == 1 {
        return samples[0];
    }
    let mut i = idx;
    loop {
        if i < 0 {
            i = -i;
        } else if i >= n {
            i = 2 * n - 2 - i;
        } else {
            return samples[i as usize];
        }
    }
}

/// Resample to `target_rate_hz` with a polyphase rational resampler.
///
/// Output duration equals input duration within one output sample; DC is
/// preserved exactly by per-phase tap normalization.
pub fn resample(sig: &Signal, target_rate_hz: f64) -> Result<Signal, SignalError> {
    if target_rate_hz <= 0.0 || !target_rate_hz.is_finite() {
        return Err(SignalError::NonPositiveRate(target_rate_hz));
    }
    if sig.samples.is_empty() {
        return Err(SignalError::EmptySignal);
    }
    let ratio = target_rate_hz / sig.sample_rate_hz;
    let (up, down) = best_rational(ratio, MAX_RATIO_DENOMINATOR);
    if up == down {
        let mut out = sig.clone();
        out.sample_rate_hz = target_rate_hz;
        return Ok(out);
    }

    let up_us = up as usize;
    let n_in = sig.samples.len();
    let n_out = ((n_in as u128 * up as u128 + down as u128 - 1) / down as u128) as usize;

    // Low-pass at the tighter of the two Nyquist limits, designed in the
    // zero-stuffed domain. Odd length so the group delay is an integer,
    // and a multiple of `up` below it so the delay aligns with a phase.
    let half = RESAMPLE_TAPS_PER_PHASE / 2 * up_us;
    let len = 2 * half + 1;
    let cutoff = 0.5 / up.max(down) as f64; // cycles per zero-stuffed sample
    let mut taps = vec![0.0f64; len];
    for (i, t) in taps.iter_mut().enumerate() {
        let x = i as f64 - half as f64;
        *t = 2.0 * cutoff * sinc(2.0 * cutoff * x) * hamming(i, len);
    }
    // Normalize each polyphase branch to unit sum: a constant input then
    // reproduces the same constant at every output phase.
    for phase in 0..up_us {
        let sum: f64 = taps[phase..].iter().step_by(up_us).sum();
        if sum.abs() > 1e-12 {
            for t in taps[phase..].iter_mut().step_by(up_us) {
                *t /= sum;
            }
        }
    }

    let mut out = Vec::with_capacity(n_out);
    for n in 0..n_out {
        // Center of output sample n in the zero-stuffed grid, shifted by
        // the filter delay. Nonzero stuffed samples sit at multiples of up.
        let q = n as u128 * down as u128 + half as u128;
        let phase = (q % up as u128) as usize;
        let m_hi = (q / up as u128) as i64; // input index for tap `phase`
        let mut acc = 0.0;
        let mut j = phase;
        let mut m = m_hi;
        while j < len {
            acc += taps[j] * sample_reflected(&sig.samples, m);
            j += up_us;
            m -= 1;
        }
        out.push(acc);
    }

    Ok(Signal {
        samples: out,
        sample_rate_hz: target_rate_hz,
        subject_id: sig.subject_id.clone(),
        recording_id: sig.recording_id.clone(),
    })
}

/// Number of taps of the band-pass filter at a given rate.
///
/// Sized for a ≤ 1 Hz Hamming transition band (≈ 3.3 / N normalized),
/// rounded up to an odd count for integer group delay.
pub fn bandpass_num_taps(rate_hz: f64) -> usize {
    let n = (3.3 * rate_hz).ceil() as usize;
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}

/// Length of the transient edge region after [`fir_bandpass`], in samples.
pub fn bandpass_edge_len(rate_hz: f64) -> usize {
    bandpass_num_taps(rate_hz) / 2
}

/// Linear-phase FIR band-pass between `low_hz` and `high_hz`.
///
/// Group delay is compensated so output sample `k` aligns with input
/// sample `k`; the output has the input's length. The first and last
/// [`bandpass_edge_len`] samples are filter transient.
pub fn fir_bandpass(sig: &Signal, low_hz: f64, high_hz: f64) -> Result<Signal, SignalError> {
    let rate = sig.sample_rate_hz;
    if !(low_hz > 0.0 && low_hz < high_hz && high_hz < rate / 2.0) {
        return Err(SignalError::InvalidBand {
            low_hz,
            high_hz,
            rate_hz: rate,
        });
    }
    let len = bandpass_num_taps(rate);
    let n = sig.samples.len();
    if n < len {
        return Err(SignalError::SignalShorterThanFilter {
            signal_len: n,
            filter_len: len,
        });
    }
    let half = (len - 1) / 2;
    let fl = low_hz / rate;
    let fh = high_hz / rate;
    let taps: Vec<f64> = (0..len)
        .map(|i| {
            let x = i as f64 - half as f64;
            (2.0 * fh * sinc(2.0 * fh * x) - 2.0 * fl * sinc(2.0 * fl * x)) * hamming(i, len)
        })
        .collect();

    // Zero-padded convolution with the delay folded in: y[k] pairs with x[k].
    let mut out = vec![0.0f64; n];
    for (k, y) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        // x index = k + half - j for tap j; clamp j to keep the index in range.
        let j_lo = (k + half).saturating_sub(n - 1);
        let j_hi = (k + half).min(len - 1);
        for j in j_lo..=j_hi {
            acc += taps[j] * sig.samples[k + half - j];
        }
        *y = acc;
    }

    Ok(Signal {
        samples: out,
        sample_rate_hz: rate,
        subject_id: sig.subject_id.clone(),
        recording_id: sig.recording_id.clone(),
    })
}

fn stats_over(values: impl Iterator<Item = f64> + Clone) -> Result<NormStats, SignalError> {
    let mut n = 0usize;
    let mut sum = 0.0;
    for v in values.clone() {
        n += 1;
        sum += v;
    }
    if n == 0 {
        return Err(SignalError::EmptyRanges);
    }
    let mean = sum / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    let std = var.sqrt();
    if std < 1e-12 {
        return Err(SignalError::ZeroVariance);
    }
    Ok(NormStats { mean, std })
}

fn range_to_indices(sig: &Signal, r: &TimeRange) -> Result<(usize, usize), SignalError> {
    let rate = sig.sample_rate_hz;
    let a = (r.start_s * rate).round() as i64;
    let b = (r.end_s * rate).round() as i64;
    let n = sig.samples.len() as i64;
    if r.start_s < 0.0 || r.end_s <= r.start_s || b > n || a >= b {
        return Err(SignalError::InvalidRange {
            start_s: r.start_s,
            end_s: r.end_s,
        });
    }
    Ok((a as usize, b as usize))
}

/// Mean/std (population) over the concatenation of samples inside `ranges`.
pub fn stats_from_ranges(sig: &Signal, ranges: &[TimeRange]) -> Result<NormStats, SignalError> {
    if ranges.is_empty() {
        return Err(SignalError::EmptyRanges);
    }
    let mut bounds = Vec::with_capacity(ranges.len());
    for r in ranges {
        bounds.push(range_to_indices(sig, r)?);
    }
    let values = bounds
        .iter()
        .flat_map(|&(a, b)| sig.samples[a..b].iter().copied());
    stats_over(values)
}

/// Stats over the first `prefix_s` seconds of the signal.
///
/// If the signal is shorter than `prefix_s`, the whole signal is used and
/// the returned flag is `true`.
pub fn stats_from_prefix(sig: &Signal, prefix_s: f64) -> Result<(NormStats, bool), SignalError> {
    if prefix_s <= 0.0 {
        return Err(SignalError::InvalidRange {
            start_s: 0.0,
            end_s: prefix_s,
        });
    }
    let want = (prefix_s * sig.sample_rate_hz).round() as usize;
    let n = sig.samples.len();
    let take = want.min(n);
    let truncated = want > n;
    let stats = stats_over(sig.samples[..take].iter().copied())?;
    Ok((stats, truncated))
}

/// Z-score normalization: `out[k] = (in[k] − mean) / std`.
pub fn zscore(sig: &Signal, stats: &NormStats) -> Result<Signal, SignalError> {
    if stats.std <= 0.0 || !stats.std.is_finite() {
        return Err(SignalError::ZeroVariance);
    }
    let inv = 1.0 / stats.std;
    Ok(Signal {
        samples: sig.samples.iter().map(|&v| (v - stats.mean) * inv).collect(),
        sample_rate_hz: sig.sample_rate_hz,
        subject_id: sig.subject_id.clone(),
        recording_id: sig.recording_id.clone(),
    })
}
