//! Synthetic FMCW walker: a torso point scatterer plus two limb scatterers
//! whose Doppler swings symmetrically around the torso line.
//!
//! Every scatterer sits in range bin `K/2`, so its fast-time phasor is
//! `(-1)^k` and the range transform concentrates it in a single cell. Limb
//! phase is the closed-form integral of the instantaneous frequency
//! `f_t ± A_d sin(π f_g t)`: each limb completes one swing per two steps,
//! so the outer envelope `f_t + A_d |sin(π f_g t)|` peaks once per step
//! (period `1 / f_g`) and has two extrema per step cycle.

use std::f64::consts::PI;

use num_complex::{Complex32, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::radar_io::{Frame, FrameRecording, RadarConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkerProfile {
    pub id: u32,
    /// m/s, positive towards the radar.
    pub torso_speed: f64,
    /// Peak limb Doppler offset from the torso line, Hz.
    pub limb_doppler_amplitude: f64,
    /// Steps per second, Hz.
    pub gait_frequency: f64,
    pub torso_reflectivity: f64,
    pub limb_reflectivity: f64,
    /// Standard deviation of the complex I/Q noise magnitude, `E|n|^2 = σ^2`.
    pub noise_floor: f64,
}

impl WalkerProfile {
    pub fn new(id: u32, torso_speed: f64, limb_doppler_amplitude: f64, gait_frequency: f64) -> Self {
        Self {
            id,
            torso_speed,
            limb_doppler_amplitude,
            gait_frequency,
            torso_reflectivity: 1.0,
            limb_reflectivity: 0.6,
            noise_floor: 0.0,
        }
    }

    pub fn with_noise(self, noise_floor: f64) -> Self {
        Self { noise_floor, ..self }
    }

    pub fn without_limbs(self) -> Self {
        Self {
            limb_reflectivity: 0.0,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("torso_speed", self.torso_speed),
            ("limb_doppler_amplitude", self.limb_doppler_amplitude),
            ("torso_reflectivity", self.torso_reflectivity),
            ("limb_reflectivity", self.limb_reflectivity),
            ("noise_floor", self.noise_floor),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidProfile(format!("{name} = {v}")));
            }
        }
        if !(self.gait_frequency.is_finite() && self.gait_frequency > 0.0) {
            return Err(Error::InvalidProfile(format!("gait_frequency = {}", self.gait_frequency)));
        }
        Ok(())
    }

    /// Torso Doppler shift `2 v / λ`, Hz.
    pub fn torso_doppler(&self, cfg: &RadarConfig) -> f64 {
        2.0 * self.torso_speed / cfg.wavelength()
    }

    /// Expected torso speed feature, m/s.
    pub fn expected_torso_speed(&self) -> f64 {
        self.torso_speed
    }

    /// Expected outer-envelope spread, Hz.
    pub fn expected_doppler_bandwidth(&self) -> f64 {
        2.0 * self.limb_doppler_amplitude
    }

    /// Expected envelope extremum spacing, s.
    pub fn expected_limb_period(&self) -> f64 {
        1.0 / (2.0 * self.gait_frequency)
    }
}

/// Three walkers with disjoint torso speeds and step rates.
pub fn default_profiles() -> Vec<WalkerProfile> {
    vec![
        WalkerProfile::new(0, 0.5, 150.0, 0.8),
        WalkerProfile::new(1, 1.0, 250.0, 1.0),
        WalkerProfile::new(2, 1.5, 350.0, 1.2),
    ]
}

/// Default I/Q noise for [`default_profiles`] datasets.
pub const DEFAULT_NOISE_FLOOR: f64 = 1e-3;

// Negated comparisons also reject NaN.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn frame_count(cfg: &RadarConfig, duration_s: f64) -> Result<usize> {
    let n = (duration_s / cfg.frame_duration() + 1e-9).floor();
    if !(n >= 1.0) {
        return Err(Error::InvalidProfile(format!(
            "duration {duration_s} s is shorter than one frame ({} s)",
            cfg.frame_duration()
        )));
    }
    Ok(n as usize)
}

/// Slow-time phasor sum of all scatterers at chirp time `t`.
struct Scene {
    torso: (f64, f64, f64),
    limbs: Option<(f64, f64, f64, f64, [f64; 2])>,
}

impl Scene {
    fn new(p: &WalkerProfile, cfg: &RadarConfig, rng: &mut ChaCha8Rng) -> Self {
        let f_t = p.torso_doppler(cfg);
        let torso = (p.torso_reflectivity, f_t, rng.random_range(0.0..2.0 * PI));
        let limbs = (p.limb_reflectivity > 0.0).then(|| {
            let phases = [rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI)];
            (p.limb_reflectivity, f_t, p.limb_doppler_amplitude, p.gait_frequency, phases)
        });
        Self { torso, limbs }
    }

    fn at(&self, t: f64) -> Complex64 {
        let (a, f, phi) = self.torso;
        let mut z = Complex64::from_polar(a, 2.0 * PI * f * t + phi);
        if let Some((a, f_t, amp, f_g, phases)) = self.limbs {
            // ∫ A sin(π f_g τ) dτ from 0 to t
            let swing = amp * (1.0 - (PI * f_g * t).cos()) / (PI * f_g);
            for (sign, phi) in [(1.0, phases[0]), (-1.0, phases[1])] {
                z += Complex64::from_polar(a, 2.0 * PI * (f_t * t + sign * swing) + phi);
            }
        }
        z
    }
}

/// Simulates `floor(duration / frame_duration)` frames of one walker. All
/// frames are labelled with the profile id.
pub fn simulate_walker(profile: &WalkerProfile, cfg: &RadarConfig, duration_s: f64, seed: u64) -> Result<FrameRecording> {
    profile.validate()?;
    cfg.validate()?;
    let frames = frame_count(cfg, duration_s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scene = Scene::new(profile, cfg, &mut rng);
    let noise = Normal::new(0.0, profile.noise_floor / 2f64.sqrt())
        .map_err(|e| Error::InvalidProfile(e.to_string()))?;
    let (k_len, l_len) = (cfg.samples_per_chirp, cfg.chirps_per_frame);
    let mut out = Vec::with_capacity(frames);
    for m in 0..frames {
        let mut frame = Frame::zeros(k_len, l_len);
        for l in 0..l_len {
            let t = (m * l_len + l) as f64 * cfg.chirp_duration;
            let z = scene.at(t);
            for k in 0..k_len {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let mut s = z * sign;
                if profile.noise_floor > 0.0 {
                    s += Complex64::new(noise.sample(&mut rng), noise.sample(&mut rng));
                }
                frame.set(k, l, Complex32::new(s.re as f32, s.im as f32));
            }
        }
        out.push(frame);
    }
    Ok(FrameRecording::new(*cfg, out)?.with_label(profile.id))
}

/// Target-free noise recording for calibrating the spectrogram denoiser.
pub fn simulate_background(cfg: &RadarConfig, noise_floor: f64, duration_s: f64, seed: u64) -> Result<FrameRecording> {
    let empty = WalkerProfile {
        id: 0,
        torso_speed: 0.0,
        limb_doppler_amplitude: 0.0,
        gait_frequency: 1.0,
        torso_reflectivity: 0.0,
        limb_reflectivity: 0.0,
        noise_floor,
    };
    let mut rec = simulate_walker(&empty, cfg, duration_s, seed)?;
    rec.labels.iter_mut().for_each(|l| *l = None);
    Ok(rec)
}

/// Seed of the `index`-th recording derived from a dataset seed.
pub fn recording_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng.random()
}

/// One labelled recording per profile, simulated in parallel.
pub fn make_dataset(
    profiles: &[WalkerProfile],
    per_class_duration_s: f64,
    cfg: &RadarConfig,
    seed: u64,
) -> Result<Vec<FrameRecording>> {
    profiles
        .par_iter()
        .enumerate()
        .map(|(i, p)| simulate_walker(p, cfg, per_class_duration_s, recording_seed(seed, i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrogram::{SpectrogramPipeline, DEFAULT_DOPPLER_CELLS};

    #[test]
    fn frame_counts_follow_duration() {
        let cfg = RadarConfig::desk();
        let p = WalkerProfile::new(0, 1.0, 0.0, 1.0).without_limbs();
        let rec = simulate_walker(&p, &cfg, 1.0, 1).unwrap();
        assert_eq!(rec.len(), 15);
        assert!(rec.labels.iter().all(|&l| l == Some(0)));
        assert!(simulate_walker(&p, &cfg, 0.01, 1).is_err());
        assert_eq!(frame_count(&cfg, 60.0).unwrap(), 915);
    }

    #[test]
    fn deterministic() {
        let cfg = RadarConfig::desk();
        let p = default_profiles()[1].with_noise(0.01);
        let a = simulate_walker(&p, &cfg, 0.5, 4).unwrap();
        assert_eq!(a, simulate_walker(&p, &cfg, 0.5, 4).unwrap());
        assert_ne!(a, simulate_walker(&p, &cfg, 0.5, 5).unwrap());
    }

    #[test]
    fn rejects_bad_profiles() {
        let cfg = RadarConfig::desk();
        let mut p = default_profiles()[0];
        p.gait_frequency = 0.0;
        assert!(matches!(simulate_walker(&p, &cfg, 1.0, 0), Err(Error::InvalidProfile(_))));
        p.gait_frequency = 1.0;
        p.noise_floor = -1.0;
        assert!(matches!(simulate_walker(&p, &cfg, 1.0, 0), Err(Error::InvalidProfile(_))));
    }

    #[test]
    fn pure_torso_has_one_dominant_bin() {
        let cfg = RadarConfig::desk();
        // exactly 20 Doppler bins above zero
        let v = 20.0 * cfg.doppler_resolution() * cfg.wavelength() / 2.0;
        let p = WalkerProfile::new(0, v, 0.0, 1.0).without_limbs();
        let rec = simulate_walker(&p, &cfg, 1.0, 3).unwrap();
        let tds = SpectrogramPipeline::default().run(&rec.frames, &cfg).unwrap();
        assert_eq!(tds.cols(), DEFAULT_DOPPLER_CELLS);
        for r in 0..tds.rows() {
            let row = tds.row(r);
            let peak = crate::features::argmax(row);
            assert!((tds.doppler_axis[peak] - 20.0 * cfg.doppler_resolution()).abs() < 1e-6);
            let second = row
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != peak)
                .map(|(_, &v)| v)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(row[peak] - second >= 20.0);
        }
    }

    #[test]
    fn dataset_has_one_recording_per_profile() {
        let cfg = RadarConfig::desk();
        assert!(make_dataset(&[], 1.0, &cfg, 0).unwrap().is_empty());
        let ds = make_dataset(&default_profiles(), 1.0, &cfg, 7).unwrap();
        assert_eq!(ds.len(), 3);
        for (i, r) in ds.iter().enumerate() {
            assert_eq!(r.labels[0], Some(i as u32));
        }
        assert_ne!(ds[0].frames[0], ds[1].frames[0]);
    }
}
