//! Radar configuration, raw frame recordings and the MDF1 file format.
//!
//! An MDF1 file is little-endian:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "MDF1"
//! 4       4     u32 samples per chirp (K)
//! 8       4     u32 chirps per frame (L)
//! 12      4     u32 frame count
//! 16      8     f64 chirp duration (s)
//! 24      8     f64 carrier frequency (Hz)
//! 32      ...   frames, each K*L samples row-major over k then l,
//!               every sample two f32 (re, im)
//! ```
//!
//! Per-frame person labels live in a sidecar CSV, `frame_index,person_id`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex32;

use crate::error::{Error, Result};

pub const MDF_MAGIC: [u8; 4] = *b"MDF1";
pub const MDF_HEADER_LEN: usize = 32;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// FMCW acquisition parameters shared by every frame of a recording.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarConfig {
    /// Fast-time samples per chirp (K).
    pub samples_per_chirp: usize,
    /// Chirps per frame (L).
    pub chirps_per_frame: usize,
    /// Duration of one chirp in seconds.
    pub chirp_duration: f64,
    /// Carrier frequency in Hz. The wavelength is derived from it.
    pub carrier_frequency: f64,
}

impl RadarConfig {
    pub const DEFAULT_CARRIER_HZ: f64 = 77e9;

    pub fn new(
        samples_per_chirp: usize,
        chirps_per_frame: usize,
        chirp_duration: f64,
        carrier_frequency: f64,
    ) -> Result<Self> {
        let cfg = Self {
            samples_per_chirp,
            chirps_per_frame,
            chirp_duration,
            carrier_frequency,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// IDRad acquisition: 256 samples, 256 chirps of 256 µs per frame.
    pub fn idrad() -> Self {
        Self {
            samples_per_chirp: 256,
            chirps_per_frame: 256,
            chirp_duration: 256e-6,
            carrier_frequency: Self::DEFAULT_CARRIER_HZ,
        }
    }

    /// Same slow-time timing as [`RadarConfig::idrad`] with only 2 fast-time
    /// samples. The Doppler axis, frame rate and crop are identical; the
    /// range sum in the spectrogram runs over fewer empty cells.
    pub fn desk() -> Self {
        Self {
            samples_per_chirp: 2,
            ..Self::idrad()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_chirp < 2 || self.chirps_per_frame < 2 {
            return Err(Error::InvalidConfig(format!(
                "K and L must be >= 2 (got K={}, L={})",
                self.samples_per_chirp, self.chirps_per_frame
            )));
        }
        if !(self.chirp_duration.is_finite() && self.chirp_duration > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "chirp duration must be positive, got {}",
                self.chirp_duration
            )));
        }
        if !(self.carrier_frequency.is_finite() && self.carrier_frequency > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "carrier frequency must be positive, got {}",
                self.carrier_frequency
            )));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Chirp repetition frequency, 1 / chirp duration.
    pub fn prf(&self) -> f64 {
        1.0 / self.chirp_duration
    }

    pub fn frame_duration(&self) -> f64 {
        self.chirps_per_frame as f64 * self.chirp_duration
    }

    pub fn frame_rate(&self) -> f64 {
        1.0 / self.frame_duration()
    }

    /// Width of one Doppler bin in Hz.
    pub fn doppler_resolution(&self) -> f64 {
        self.prf() / self.chirps_per_frame as f64
    }

    /// Speed spanned by one Doppler bin.
    pub fn velocity_resolution(&self) -> f64 {
        doppler_hz_to_velocity(self.doppler_resolution(), self)
    }

    pub fn samples_per_frame(&self) -> usize {
        self.samples_per_chirp * self.chirps_per_frame
    }
}

impl Default for RadarConfig {
    fn default() -> Self {
        Self::idrad()
    }
}

/// Doppler frequency of an FFT-shifted bin; bin `L/2` is zero Doppler.
pub fn doppler_bin_to_hz(bin: usize, cfg: &RadarConfig) -> f64 {
    let l = cfg.chirps_per_frame;
    (bin as f64 - (l / 2) as f64) * cfg.prf() / l as f64
}

/// Radial speed `f * λ / 2` for a Doppler shift `f`.
pub fn doppler_hz_to_velocity(f: f64, cfg: &RadarConfig) -> f64 {
    f * cfg.wavelength() / 2.0
}

/// One K×L frame of complex ADC samples, stored row-major over (k, l).
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    samples_per_chirp: usize,
    chirps_per_frame: usize,
    data: Vec<Complex32>,
}

impl Frame {
    pub fn new(samples_per_chirp: usize, chirps_per_frame: usize, data: Vec<Complex32>) -> Result<Self> {
        if data.len() != samples_per_chirp * chirps_per_frame {
            return Err(Error::ShapeMismatch(format!(
                "frame data has {} samples, expected {}x{}",
                data.len(),
                samples_per_chirp,
                chirps_per_frame
            )));
        }
        if let Some(i) = data.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::NonFiniteSample {
                frame: 0,
                k: i / chirps_per_frame,
                l: i % chirps_per_frame,
            });
        }
        Ok(Self {
            samples_per_chirp,
            chirps_per_frame,
            data,
        })
    }

    pub fn zeros(samples_per_chirp: usize, chirps_per_frame: usize) -> Self {
        Self {
            samples_per_chirp,
            chirps_per_frame,
            data: vec![Complex32::new(0.0, 0.0); samples_per_chirp * chirps_per_frame],
        }
    }

    pub fn samples_per_chirp(&self) -> usize {
        self.samples_per_chirp
    }

    pub fn chirps_per_frame(&self) -> usize {
        self.chirps_per_frame
    }

    pub fn get(&self, k: usize, l: usize) -> Complex32 {
        self.data[k * self.chirps_per_frame + l]
    }

    pub fn set(&mut self, k: usize, l: usize, value: Complex32) {
        self.data[k * self.chirps_per_frame + l] = value;
    }

    pub fn data(&self) -> &[Complex32] {
        &self.data
    }
}

/// A sequence of frames in acquisition order with optional per-frame labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecording {
    pub config: RadarConfig,
    pub frames: Vec<Frame>,
    /// `None` marks an unlabeled frame. Same length as `frames`.
    pub labels: Vec<Option<u32>>,
}

impl FrameRecording {
    pub fn new(config: RadarConfig, frames: Vec<Frame>) -> Result<Self> {
        config.validate()?;
        for (i, f) in frames.iter().enumerate() {
            if f.samples_per_chirp != config.samples_per_chirp
                || f.chirps_per_frame != config.chirps_per_frame
            {
                return Err(Error::ShapeMismatch(format!(
                    "frame {i} is {}x{}, config is {}x{}",
                    f.samples_per_chirp,
                    f.chirps_per_frame,
                    config.samples_per_chirp,
                    config.chirps_per_frame
                )));
            }
        }
        let labels = vec![None; frames.len()];
        Ok(Self {
            config,
            frames,
            labels,
        })
    }

    pub fn with_label(mut self, person_id: u32) -> Self {
        self.labels = vec![Some(person_id); self.frames.len()];
        self
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Acquisition time of frame `i` relative to the first frame.
    pub fn frame_time(&self, i: usize) -> f64 {
        i as f64 * self.config.frame_duration()
    }
}

/// Header fields of an MDF1 file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdfHeader {
    pub config: RadarConfig,
    pub frame_count: usize,
}

impl MdfHeader {
    pub fn payload_len(&self) -> usize {
        self.frame_count * self.config.samples_per_frame() * 8
    }
}

fn parse_header(bytes: &[u8; MDF_HEADER_LEN]) -> Result<MdfHeader> {
    let mut magic = [0u8; 4];
    magic.copy_from_slice(&bytes[0..4]);
    if magic != MDF_MAGIC {
        return Err(Error::BadMagic {
            expected: MDF_MAGIC,
            found: magic,
        });
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let config = RadarConfig {
        samples_per_chirp: u32_at(4),
        chirps_per_frame: u32_at(8),
        chirp_duration: f64_at(16),
        carrier_frequency: f64_at(24),
    };
    config
        .validate()
        .map_err(|e| Error::HeaderMismatch(e.to_string()))?;
    Ok(MdfHeader {
        config,
        frame_count: u32_at(12),
    })
}

/// Reads only the 32-byte header of an MDF1 file.
pub fn read_header(path: impl AsRef<Path>) -> Result<MdfHeader> {
    let path = path.as_ref();
    let inner = || -> Result<MdfHeader> {
        let mut f = File::open(path)?;
        let mut buf = [0u8; MDF_HEADER_LEN];
        f.read_exact(&mut buf)?;
        parse_header(&buf)
    };
    inner().map_err(|e| e.at(path))
}

/// Loads an MDF1 recording. Labels are left unset; see [`read_labels`].
pub fn read_recording(path: impl AsRef<Path>) -> Result<FrameRecording> {
    let path = path.as_ref();
    let inner = || -> Result<FrameRecording> {
        let mut bytes = Vec::new();
        File::open(path)?.read_to_end(&mut bytes)?;
        decode_recording(&bytes)
    };
    inner().map_err(|e| e.at(path))
}

pub fn decode_recording(bytes: &[u8]) -> Result<FrameRecording> {
    if bytes.len() < 4 || bytes[0..4] != MDF_MAGIC {
        let mut found = [0u8; 4];
        let n = bytes.len().min(4);
        found[..n].copy_from_slice(&bytes[..n]);
        return Err(Error::BadMagic {
            expected: MDF_MAGIC,
            found,
        });
    }
    if bytes.len() < MDF_HEADER_LEN {
        return Err(Error::HeaderMismatch(format!(
            "file is {} bytes, shorter than the header",
            bytes.len()
        )));
    }
    let header = parse_header(bytes[..MDF_HEADER_LEN].try_into().unwrap())?;
    let payload = &bytes[MDF_HEADER_LEN..];
    if payload.len() != header.payload_len() {
        return Err(Error::HeaderMismatch(format!(
            "K*L*count*8 = {} bytes but payload is {} bytes",
            header.payload_len(),
            payload.len()
        )));
    }
    let cfg = header.config;
    let per_frame = cfg.samples_per_frame();
    let mut frames = Vec::with_capacity(header.frame_count);
    for (fi, chunk) in payload.chunks_exact(per_frame * 8).enumerate() {
        let mut data = Vec::with_capacity(per_frame);
        for (i, s) in chunk.chunks_exact(8).enumerate() {
            let re = f32::from_le_bytes(s[0..4].try_into().unwrap());
            let im = f32::from_le_bytes(s[4..8].try_into().unwrap());
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::NonFiniteSample {
                    frame: fi,
                    k: i / cfg.chirps_per_frame,
                    l: i % cfg.chirps_per_frame,
                });
            }
            data.push(Complex32::new(re, im));
        }
        frames.push(Frame {
            samples_per_chirp: cfg.samples_per_chirp,
            chirps_per_frame: cfg.chirps_per_frame,
            data,
        });
    }
    FrameRecording::new(cfg, frames)
}

pub fn encode_recording(rec: &FrameRecording) -> Vec<u8> {
    let cfg = &rec.config;
    let mut out = Vec::with_capacity(MDF_HEADER_LEN + rec.frames.len() * cfg.samples_per_frame() * 8);
    out.extend_from_slice(&MDF_MAGIC);
    out.extend_from_slice(&(cfg.samples_per_chirp as u32).to_le_bytes());
    out.extend_from_slice(&(cfg.chirps_per_frame as u32).to_le_bytes());
    out.extend_from_slice(&(rec.frames.len() as u32).to_le_bytes());
    out.extend_from_slice(&cfg.chirp_duration.to_le_bytes());
    out.extend_from_slice(&cfg.carrier_frequency.to_le_bytes());
    for frame in &rec.frames {
        for s in &frame.data {
            out.extend_from_slice(&s.re.to_le_bytes());
            out.extend_from_slice(&s.im.to_le_bytes());
        }
    }
    out
}

pub fn write_recording(rec: &FrameRecording, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let inner = || -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&encode_recording(rec))?;
        w.flush()?;
        Ok(())
    };
    inner().map_err(|e| e.at(path))
}

/// Sidecar label path for a recording: `walker_0.mdf` -> `walker_0.labels.csv`.
pub fn labels_path(recording: &Path) -> PathBuf {
    recording.with_extension("labels.csv")
}

pub fn write_labels(labels: &[Option<u32>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let inner = || -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "frame_index,person_id")?;
        for (i, label) in labels.iter().enumerate() {
            if let Some(id) = label {
                writeln!(w, "{i},{id}")?;
            }
        }
        w.flush()?;
        Ok(())
    };
    inner().map_err(|e| e.at(path))
}

/// Reads a label CSV for a recording of `frame_count` frames. Frames not
/// listed stay unlabeled. A leading header line is optional.
pub fn read_labels(path: impl AsRef<Path>, frame_count: usize) -> Result<Vec<Option<u32>>> {
    let path = path.as_ref();
    let inner = || -> Result<Vec<Option<u32>>> {
        let reader = BufReader::new(File::open(path)?);
        let mut labels = vec![None; frame_count];
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || (lineno == 0 && line.starts_with("frame_index")) {
                continue;
            }
            let (idx, id) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `frame_index,person_id`", lineno + 1)))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad frame index {idx:?}", lineno + 1)))?;
            let id: u32 = id
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad person id {id:?}", lineno + 1)))?;
            if idx >= frame_count {
                return Err(Error::Parse(format!(
                    "line {}: frame index {idx} out of range (recording has {frame_count} frames)",
                    lineno + 1
                )));
            }
            labels[idx] = Some(id);
        }
        Ok(labels)
    };
    inner().map_err(|e| e.at(path))
}

/// Reads an MDF1 recording together with its sidecar labels, if present.
pub fn read_labeled_recording(path: impl AsRef<Path>) -> Result<FrameRecording> {
    let path = path.as_ref();
    let mut rec = read_recording(path)?;
    let lp = labels_path(path);
    if lp.exists() {
        rec.labels = read_labels(&lp, rec.len())?;
    }
    Ok(rec)
}
