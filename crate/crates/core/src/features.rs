//! Gait statistics over a window of spectrogram rows.
//!
//! * `x1` torso speed: mean absolute speed at each row's strongest bin.
//! * `x2` Doppler bandwidth: `max(upper envelope) - min(lower envelope)`.
//! * `x3` torso bandwidth: `mean(upper) - mean(lower)`.
//! * `x4` limb period: window duration over the number of envelope extrema.
//!
//! The envelopes are per-row: the highest and lowest Doppler bins whose
//! energy is within `rel_threshold_db` of that row's maximum.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::radar_io::{doppler_hz_to_velocity, RadarConfig};
use crate::spectrogram::Tds;

pub const DEFAULT_REL_THRESHOLD_DB: f64 = 10.0;
/// Frames per feature window (11 s at ~15 fps).
pub const DEFAULT_FEATURE_WINDOW: usize = 165;

/// `Z` consecutive spectrogram rows with their Doppler axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TdsWindow {
    values: Vec<f64>,
    rows: usize,
    pub doppler_axis: Vec<f64>,
    pub frame_duration: f64,
}

impl TdsWindow {
    pub fn new(values: Vec<f64>, doppler_axis: Vec<f64>, frame_duration: f64) -> Result<Self> {
        let cols = doppler_axis.len();
        if cols == 0 || values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if !values.len().is_multiple_of(cols) {
            return Err(Error::ShapeMismatch(format!(
                "{} values do not fill rows of {cols}",
                values.len()
            )));
        }
        Ok(Self {
            rows: values.len() / cols,
            values,
            doppler_axis,
            frame_duration,
        })
    }

    /// Rows `[start, start + len)` of a spectrogram.
    pub fn from_tds(tds: &Tds, start: usize, len: usize) -> Result<Self> {
        if start + len > tds.rows() {
            return Err(Error::TooShort {
                frames: tds.rows(),
                needed: start + len,
            });
        }
        Self::new(
            tds.rows_slice(start, len).to_vec(),
            tds.doppler_axis.clone(),
            tds.frame_duration(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.doppler_axis.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.cols();
        &self.values[i * c..(i + 1) * c]
    }

    /// Window duration `T_w = Z * frame duration`.
    pub fn duration(&self) -> f64 {
        self.rows as f64 * self.frame_duration
    }

    fn check(&self) -> Result<()> {
        if self.rows < 2 {
            return Err(Error::EmptyWindow);
        }
        Ok(())
    }
}

/// Lowest index of the maximum; ties go to the lower Doppler bin.
pub(crate) fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    /// Per-row upper Doppler edge (Hz).
    pub upper: Vec<f64>,
    /// Per-row lower Doppler edge (Hz).
    pub lower: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnvelopeSide {
    #[default]
    Upper,
    Lower,
}

impl Envelope {
    pub fn side(&self, side: EnvelopeSide) -> &[f64] {
        match side {
            EnvelopeSide::Upper => &self.upper,
            EnvelopeSide::Lower => &self.lower,
        }
    }
}

pub fn extract_envelopes(w: &TdsWindow, rel_threshold_db: f64) -> Result<Envelope> {
    w.check()?;
    let mut upper = Vec::with_capacity(w.rows());
    let mut lower = Vec::with_capacity(w.rows());
    for i in 0..w.rows() {
        let row = w.row(i);
        let peak = argmax(row);
        let floor = row[peak] - rel_threshold_db;
        let hi = (peak..row.len()).rev().find(|&b| row[b] >= floor).unwrap_or(peak);
        let lo = (0..=peak).find(|&b| row[b] >= floor).unwrap_or(peak);
        upper.push(w.doppler_axis[hi]);
        lower.push(w.doppler_axis[lo]);
    }
    Ok(Envelope { upper, lower })
}

/// Mean absolute speed at each row's strongest Doppler bin (m/s).
pub fn torso_doppler_frequency(w: &TdsWindow, cfg: &RadarConfig) -> Result<f64> {
    w.check()?;
    let total: f64 = (0..w.rows())
        .map(|i| doppler_hz_to_velocity(w.doppler_axis[argmax(w.row(i))], cfg).abs())
        .sum();
    Ok(total / w.rows() as f64)
}

pub fn doppler_bandwidth(env: &Envelope) -> f64 {
    let max = env.upper.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = env.lower.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn torso_bandwidth(env: &Envelope) -> f64 {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    mean(&env.upper) - mean(&env.lower)
}

/// Centered 3-point moving average; the two end points average with their
/// single neighbour.
pub fn smooth3(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Strict interior local extrema of `values`; a flat run counts once.
pub fn count_extrema(values: &[f64]) -> usize {
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * scale;
    let mut runs: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        match runs.last() {
            Some(&last) if (v - last).abs() <= tol => {}
            _ => runs.push(v),
        }
    }
    runs.windows(3)
        .filter(|t| (t[1] > t[0] && t[1] > t[2]) || (t[1] < t[0] && t[1] < t[2]))
        .count()
}

/// Limb period `T_w / extrema` using the smoothed envelope on `side`.
pub fn limb_period(w: &TdsWindow, env: &Envelope, side: EnvelopeSide) -> Result<f64> {
    w.check()?;
    match count_extrema(&smooth3(env.side(side))) {
        0 => Err(Error::NoExtremum),
        n => Ok(w.duration() / n as f64),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureParams {
    pub rel_threshold_db: f64,
    pub extremum_side: EnvelopeSide,
}

impl Default for FeatureParams {
    fn default() -> Self {
        Self {
            rel_threshold_db: DEFAULT_REL_THRESHOLD_DB,
            extremum_side: EnvelopeSide::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    /// x1, m/s.
    pub torso_speed: f64,
    /// x2, Hz.
    pub doppler_bandwidth: f64,
    /// x3, Hz.
    pub torso_bandwidth: f64,
    /// x4, seconds; `None` when the envelope has no extremum.
    pub limb_period: Option<f64>,
}

impl FeatureVector {
    /// `[x1, x2, x3, x4]` for the network. An undefined limb period is
    /// replaced by the window duration: no swing was seen within it.
    pub fn to_input(&self, window_duration: f64) -> [f64; 4] {
        [
            self.torso_speed,
            self.doppler_bandwidth,
            self.torso_bandwidth,
            self.limb_period.unwrap_or(window_duration),
        ]
    }
}

pub fn extract_features(w: &TdsWindow, cfg: &RadarConfig, params: &FeatureParams) -> Result<FeatureVector> {
    let env = extract_envelopes(w, params.rel_threshold_db)?;
    let limb_period = match limb_period(w, &env, params.extremum_side) {
        Ok(p) => Some(p),
        Err(Error::NoExtremum) => None,
        Err(e) => return Err(e),
    };
    Ok(FeatureVector {
        torso_speed: torso_doppler_frequency(w, cfg)?,
        doppler_bandwidth: doppler_bandwidth(&env),
        torso_bandwidth: torso_bandwidth(&env),
        limb_period,
    })
}

/// One row of the feature CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureRecord {
    pub window_start_frame: usize,
    pub features: [f64; 4],
    pub label: Option<u32>,
}

pub fn write_feature_csv(records: &[FeatureRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let inner = || -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "window_start_frame,x1,x2,x3,x4,label")?;
        for r in records {
            let [x1, x2, x3, x4] = r.features;
            let label = r.label.map(|l| l.to_string()).unwrap_or_default();
            writeln!(w, "{},{x1},{x2},{x3},{x4},{label}", r.window_start_frame)?;
        }
        w.flush()?;
        Ok(())
    };
    inner().map_err(|e| e.at(path))
}
