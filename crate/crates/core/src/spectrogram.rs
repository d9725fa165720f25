//! Range-Doppler maps and the time-Doppler spectrogram (TDS).
//!
//! Each frame is transformed with an unnormalised 2D FFT, the magnitude of
//! every range cell is converted to dB and summed per Doppler column, and the
//! resulting energy vectors are stacked over time. The stack is then
//! floor-clamped against a per-bin noise threshold and cropped to a fixed
//! number of Doppler cells with the zero-Doppler column removed.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{ComplexMatrix, Fft2d};
use crate::radar_io::{Frame, RadarConfig};

/// Magnitude floor inside `log10`, so exact zeros map to -240 dB.
pub const DB_FLOOR: f64 = 1e-12;
/// Doppler cells kept after the zero-Doppler crop.
pub const DEFAULT_DOPPLER_CELLS: usize = 205;
/// Noise threshold margin, in MADs above the per-bin median.
pub const DEFAULT_NOISE_MARGIN: f64 = 3.0;
pub const MIN_CALIBRATION_FRAMES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FftMode {
    /// Reject frames whose K or L is not a power of two.
    #[default]
    Strict,
    /// Zero-pad each axis up to the next power of two.
    ZeroPad,
}

/// Range-Doppler map: `S(u, v)` with range bins as rows, Doppler bins as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Rdm(pub ComplexMatrix);

impl Rdm {
    pub fn range_bins(&self) -> usize {
        self.0.rows
    }

    pub fn doppler_bins(&self) -> usize {
        self.0.cols
    }
}

fn frame_matrix(frame: &Frame, mode: FftMode) -> Result<ComplexMatrix> {
    let (k, l) = (frame.samples_per_chirp(), frame.chirps_per_frame());
    let (rows, cols) = match mode {
        FftMode::Strict => {
            for n in [k, l] {
                if !n.is_power_of_two() {
                    return Err(Error::NonPowerOfTwo(n));
                }
            }
            (k, l)
        }
        FftMode::ZeroPad => (k.next_power_of_two(), l.next_power_of_two()),
    };
    let mut m = ComplexMatrix::zeros(rows, cols);
    for ki in 0..k {
        for li in 0..l {
            let s = frame.get(ki, li);
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(Error::NonFinite("frame"));
            }
            m.data[ki * cols + li] = Complex64::new(s.re as f64, s.im as f64);
        }
    }
    Ok(m)
}

/// Unnormalised 2D DFT of one frame,
/// `S(u,v) = Σ_l Σ_k s(k,l) exp(-j2π(uk/K + vl/L))`.
pub fn fft2d(frame: &Frame, mode: FftMode) -> Result<Rdm> {
    let mut m = frame_matrix(frame, mode)?;
    Fft2d::new(m.rows, m.cols)?.process(&mut m);
    Ok(Rdm(m))
}

/// Per-Doppler-column energy `e_v = Σ_u 20 log10 |S(u,v)|`, in natural
/// (unshifted) FFT bin order.
pub fn doppler_energy(rdm: &Rdm) -> Vec<f64> {
    let m = &rdm.0;
    let mut e = vec![0.0; m.cols];
    for row in m.data.chunks_exact(m.cols) {
        for (acc, s) in e.iter_mut().zip(row) {
            *acc += 20.0 * s.norm().max(DB_FLOOR).log10();
        }
    }
    e
}

/// Rotates a natural-order spectrum so zero frequency sits at index `len/2`.
pub fn fftshift<T: Copy>(v: &[T]) -> Vec<T> {
    let n = v.len();
    (0..n).map(|b| v[(b + n - n / 2) % n]).collect()
}

/// Time-Doppler spectrogram: `n` frames by `D` Doppler cells, in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct Tds {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
    /// Doppler frequency of each column, in Hz, strictly increasing.
    pub doppler_axis: Vec<f64>,
    /// Acquisition time of each row, in seconds.
    pub frame_times: Vec<f64>,
}

impl Tds {
    pub fn new(values: Vec<f64>, doppler_axis: Vec<f64>, frame_times: Vec<f64>) -> Result<Self> {
        let cols = doppler_axis.len();
        let rows = frame_times.len();
        if values.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "TDS has {} values for {rows}x{cols}",
                values.len()
            )));
        }
        Ok(Self {
            values,
            rows,
            cols,
            doppler_axis,
            frame_times,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Rows `[start, start + len)` as a contiguous row-major slice.
    pub fn rows_slice(&self, start: usize, len: usize) -> &[f64] {
        &self.values[start * self.cols..(start + len) * self.cols]
    }

    /// Frame period inferred from the time axis; zero for a single row.
    pub fn frame_duration(&self) -> f64 {
        if self.rows < 2 {
            0.0
        } else {
            (self.frame_times[self.rows - 1] - self.frame_times[0]) / (self.rows - 1) as f64
        }
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let inner = || -> Result<()> {
            let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
            let header: Vec<String> = self.doppler_axis.iter().map(|f| format!("{f:.4}")).collect();
            writeln!(w, "time_s,{}", header.join(","))?;
            for r in 0..self.rows {
                let cells: Vec<String> = self.row(r).iter().map(|v| format!("{v:.6}")).collect();
                writeln!(w, "{:.6},{}", self.frame_times[r], cells.join(","))?;
            }
            w.flush()?;
            Ok(())
        };
        inner().map_err(|e| e.at(path))
    }

    /// 8-bit binary PGM, one image row per frame, min..max mapped to 0..255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let mut out = format!("P5\n{} {}\n255\n", self.cols, self.rows).into_bytes();
        out.extend(
            self.values
                .iter()
                .map(|&v| (((v - lo) / span) * 255.0).round().clamp(0.0, 255.0) as u8),
        );
        out
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_pgm()).map_err(|e| Error::from(e).at(path))
    }
}

/// Builds the uncropped TDS, one FFT-shifted energy row per frame.
pub fn assemble_tds(frames: &[Frame], cfg: &RadarConfig, mode: FftMode) -> Result<Tds> {
    if frames.is_empty() {
        return Err(Error::TooFewFrames { needed: 1, got: 0 });
    }
    let first = frame_matrix(&frames[0], mode)?;
    let plan = Fft2d::new(first.rows, first.cols)?;
    let cols = first.cols;
    let rows: Vec<Vec<f64>> = frames
        .par_iter()
        .map(|frame| {
            let mut m = frame_matrix(frame, mode)?;
            if (m.rows, m.cols) != (plan.rows(), plan.cols()) {
                return Err(Error::ShapeMismatch("frames differ in size".into()));
            }
            plan.process(&mut m);
            Ok(fftshift(&doppler_energy(&Rdm(m))))
        })
        .collect::<Result<_>>()?;
    let resolution = cfg.prf() / cols as f64;
    let doppler_axis = (0..cols)
        .map(|b| (b as f64 - (cols / 2) as f64) * resolution)
        .collect();
    let frame_times = (0..frames.len()).map(|i| i as f64 * cfg.frame_duration()).collect();
    Tds::new(rows.concat(), doppler_axis, frame_times)
}

/// Per-Doppler-bin noise threshold: `location + margin * scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub location: Vec<f64>,
    pub scale: Vec<f64>,
    pub margin: f64,
}

impl NoiseModel {
    pub fn threshold(&self, bin: usize) -> f64 {
        self.location[bin] + self.margin * self.scale[bin]
    }

    pub fn bins(&self) -> usize {
        self.location.len()
    }
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Robust per-bin noise estimate from a target-free calibration TDS:
/// median over time for the location, median absolute deviation for the scale.
pub fn estimate_noise_model(calibration: &Tds, margin: f64) -> Result<NoiseModel> {
    if calibration.rows() < MIN_CALIBRATION_FRAMES {
        return Err(Error::TooFewFrames {
            needed: MIN_CALIBRATION_FRAMES,
            got: calibration.rows(),
        });
    }
    let mut location = Vec::with_capacity(calibration.cols());
    let mut scale = Vec::with_capacity(calibration.cols());
    let mut column = vec![0.0; calibration.rows()];
    for c in 0..calibration.cols() {
        for (r, slot) in column.iter_mut().enumerate() {
            *slot = calibration.get(r, c);
        }
        let med = median(&mut column);
        for v in column.iter_mut() {
            *v = (*v - med).abs();
        }
        location.push(med);
        scale.push(median(&mut column));
    }
    Ok(NoiseModel {
        location,
        scale,
        margin,
    })
}

/// Floor-clamps every cell below its bin's noise threshold to the threshold.
pub fn denoise_tds(tds: &Tds, nm: &NoiseModel) -> Result<Tds> {
    if nm.bins() != tds.cols() {
        return Err(Error::ShapeMismatch(format!(
            "noise model has {} bins, TDS has {} columns",
            nm.bins(),
            tds.cols()
        )));
    }
    let thresholds: Vec<f64> = (0..nm.bins()).map(|b| nm.threshold(b)).collect();
    let mut out = tds.clone();
    for row in out.values.chunks_exact_mut(tds.cols) {
        for (v, &t) in row.iter_mut().zip(&thresholds) {
            if *v < t {
                *v = t;
            }
        }
    }
    Ok(out)
}

/// FFT-shifted bin indices kept by the crop: the central `target + 1` bins
/// with the zero-Doppler bin (`L/2`) removed.
pub fn crop_bins(doppler_bins: usize, target_cells: usize) -> Result<Vec<usize>> {
    if doppler_bins < target_cells + 1 {
        return Err(Error::TooFewBins {
            target: target_cells,
            available: doppler_bins,
        });
    }
    let zero = doppler_bins / 2;
    let start = zero - target_cells.div_ceil(2);
    Ok((start..start + target_cells + 1).filter(|&b| b != zero).collect())
}

/// Drops the static-clutter column and keeps `target_cells` Doppler cells
/// around zero. Values are copied unchanged.
pub fn remove_zero_doppler_and_crop(tds: &Tds, target_cells: usize) -> Result<Tds> {
    let keep = crop_bins(tds.cols(), target_cells)?;
    let mut values = Vec::with_capacity(tds.rows() * keep.len());
    for r in 0..tds.rows() {
        let row = tds.row(r);
        values.extend(keep.iter().map(|&b| row[b]));
    }
    let axis = keep.iter().map(|&b| tds.doppler_axis[b]).collect();
    Tds::new(values, axis, tds.frame_times.clone())
}

/// Frames to denoised, cropped TDS in one call.
#[derive(Debug, Clone)]
pub struct SpectrogramPipeline {
    pub mode: FftMode,
    pub noise: Option<NoiseModel>,
    pub doppler_cells: usize,
}

impl Default for SpectrogramPipeline {
    fn default() -> Self {
        Self {
            mode: FftMode::Strict,
            noise: None,
            doppler_cells: DEFAULT_DOPPLER_CELLS,
        }
    }
}

impl SpectrogramPipeline {
    pub fn run(&self, frames: &[Frame], cfg: &RadarConfig) -> Result<Tds> {
        let raw = assemble_tds(frames, cfg, self.mode)?;
        let cleaned = match &self.noise {
            Some(nm) => denoise_tds(&raw, nm)?,
            None => raw,
        };
        remove_zero_doppler_and_crop(&cleaned, self.doppler_cells)
    }
}
