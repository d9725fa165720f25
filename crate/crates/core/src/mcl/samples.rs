//! Time-aligned sample windows and the MCS1 sample store.
//!
//! ```text
//! "MCS1" u32 version, u32 rows, u32 cols, u64 count
//! f64 tds_mean, f64 tds_std, 4 x f64 feature_mean, 4 x f64 feature_std
//! per sample: u64 start_frame, i64 label (-1 = none), 4 x f64 features,
//!             rows*cols x f32 spectrogram
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureParams, TdsWindow, DEFAULT_FEATURE_WINDOW};
use crate::radar_io::RadarConfig;
use crate::spectrogram::Tds;

use super::checkpoint::ByteReader;
use super::{Normalization, Sample, FEATURE_COUNT};

pub const SAMPLE_STORE_MAGIC: [u8; 4] = *b"MCS1";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleParams {
    /// Spectrogram rows per sample.
    pub tds_window: usize,
    /// Frames over which the gait features are measured.
    pub feature_window: usize,
    pub stride: usize,
    pub features: FeatureParams,
}

impl Default for SampleParams {
    fn default() -> Self {
        Self {
            tds_window: 45,
            feature_window: DEFAULT_FEATURE_WINDOW,
            stride: 15,
            features: FeatureParams::default(),
        }
    }
}

impl SampleParams {
    pub fn span(&self) -> usize {
        self.tds_window.max(self.feature_window)
    }
}

/// `floor((n - span) / stride) + 1` for `n >= span`, else 0.
pub fn sample_count(frames: usize, params: &SampleParams) -> usize {
    if frames < params.span() || params.stride == 0 {
        0
    } else {
        (frames - params.span()) / params.stride + 1
    }
}

fn majority(labels: &[Option<u32>]) -> Option<u32> {
    let mut counts = BTreeMap::new();
    for l in labels.iter().flatten() {
        *counts.entry(*l).or_insert(0usize) += 1;
    }
    let mut best: Option<(u32, usize)> = None;
    for (l, c) in counts {
        if best.is_none_or(|(_, bc)| c > bc) {
            best = Some((l, c));
        }
    }
    best.map(|(l, _)| l)
}

/// Cuts a spectrogram into samples. For each start `s` (every `stride`
/// frames) the spectrogram part is rows `[s, s + tds_window)`, the features
/// are measured over `[s, s + feature_window)`, and the label is the most
/// common frame label inside the spectrogram part. `labels` is either empty
/// or one entry per row.
pub fn build_samples(tds: &Tds, cfg: &RadarConfig, labels: &[Option<u32>], params: &SampleParams) -> Result<Vec<Sample>> {
    if params.stride == 0 || params.tds_window == 0 {
        return Err(Error::InvalidConfig("stride and window must be positive".into()));
    }
    let n = tds.rows();
    if n < params.span() {
        return Err(Error::TooShort {
            frames: n,
            needed: params.span(),
        });
    }
    if !labels.is_empty() && labels.len() != n {
        return Err(Error::ShapeMismatch(format!("{} labels for {n} frames", labels.len())));
    }
    let starts: Vec<usize> = (0..sample_count(n, params)).map(|i| i * params.stride).collect();
    starts
        .par_iter()
        .map(|&s| {
            let window = TdsWindow::from_tds(tds, s, params.feature_window)?;
            let fv = extract_features(&window, cfg, &params.features)?;
            let label = if labels.is_empty() {
                None
            } else {
                majority(&labels[s..s + params.tds_window])
            };
            Ok(Sample {
                tds: tds.rows_slice(s, params.tds_window).iter().map(|&v| v as f32).collect(),
                rows: params.tds_window,
                cols: tds.cols(),
                features: fv.to_input(window.duration()),
                label,
                start_frame: s,
            })
        })
        .collect()
}

pub fn encode_samples(samples: &[Sample], normalization: &Normalization) -> Result<Vec<u8>> {
    let (rows, cols) = samples.first().map_or((0, 0), |s| (s.rows, s.cols));
    if samples.iter().any(|s| (s.rows, s.cols) != (rows, cols) || s.tds.len() != rows * cols) {
        return Err(Error::ShapeMismatch("samples differ in window shape".into()));
    }
    let mut out = Vec::with_capacity(48 + samples.len() * (48 + rows * cols * 4));
    out.extend_from_slice(&SAMPLE_STORE_MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.extend_from_slice(&(cols as u32).to_le_bytes());
    out.extend_from_slice(&(samples.len() as u64).to_le_bytes());
    let n = normalization;
    for v in [n.tds_mean, n.tds_std].into_iter().chain(n.feature_mean).chain(n.feature_std) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for s in samples {
        out.extend_from_slice(&(s.start_frame as u64).to_le_bytes());
        out.extend_from_slice(&s.label.map_or(-1i64, i64::from).to_le_bytes());
        for v in s.features {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in &s.tds {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_samples(bytes: &[u8]) -> Result<(Vec<Sample>, Normalization)> {
    let mut r = ByteReader::new(bytes);
    let magic: [u8; 4] = r.take(4)?.try_into().unwrap();
    if magic != SAMPLE_STORE_MAGIC {
        return Err(Error::BadMagic {
            expected: SAMPLE_STORE_MAGIC,
            found: magic,
        });
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::HeaderMismatch(format!("unsupported sample store version {version}")));
    }
    let rows = r.u32()? as usize;
    let cols = r.u32()? as usize;
    let count = r.u64()? as usize;
    let per_sample = 8 + 8 + 8 * FEATURE_COUNT + 4 * rows * cols;
    let mut norm = Normalization {
        tds_mean: r.f64()?,
        tds_std: r.f64()?,
        ..Normalization::default()
    };
    for j in 0..FEATURE_COUNT {
        norm.feature_mean[j] = r.f64()?;
    }
    for j in 0..FEATURE_COUNT {
        norm.feature_std[j] = r.f64()?;
    }
    if count.checked_mul(per_sample) != Some(r.remaining()) {
        return Err(Error::HeaderMismatch(format!(
            "{count} samples of {per_sample} bytes, payload is {} bytes",
            r.remaining()
        )));
    }
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let start_frame = r.u64()? as usize;
        let label = match r.u64()? as i64 {
            -1 => None,
            l => Some(u32::try_from(l).map_err(|_| Error::HeaderMismatch(format!("bad label {l}")))?),
        };
        let mut features = [0.0; FEATURE_COUNT];
        for f in features.iter_mut() {
            *f = r.f64()?;
        }
        samples.push(Sample {
            tds: r.f32s(rows * cols)?,
            rows,
            cols,
            features,
            label,
            start_frame,
        });
    }
    Ok((samples, norm))
}

pub fn write_samples(samples: &[Sample], normalization: &Normalization, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let inner = || -> Result<()> { Ok(std::fs::write(path, encode_samples(samples, normalization)?)?) };
    inner().map_err(|e| e.at(path))
}

pub fn read_samples(path: impl AsRef<Path>) -> Result<(Vec<Sample>, Normalization)> {
    let path = path.as_ref();
    let inner = || decode_samples(&std::fs::read(path)?);
    inner().map_err(|e| e.at(path))
}
