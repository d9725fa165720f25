//! Turn raw frames into a denoised, cropped time-Doppler spectrogram and
//! export it as CSV and PGM.
//!
//! cargo run --example spectrogram

use mcl_radar::datagen::{default_profiles, simulate_background, simulate_walker, DEFAULT_NOISE_FLOOR};
use mcl_radar::radar_io::RadarConfig;
use mcl_radar::spectrogram::{assemble_tds, estimate_noise_model, FftMode, SpectrogramPipeline, DEFAULT_NOISE_MARGIN};

fn main() -> mcl_radar::Result<()> {
    let cfg = RadarConfig::desk();

    // Noise model from a recording with nobody in the scene.
    let background = simulate_background(&cfg, DEFAULT_NOISE_FLOOR, 5.0, 1)?;
    let raw = assemble_tds(&background.frames, &cfg, FftMode::Strict)?;
    let noise = estimate_noise_model(&raw, DEFAULT_NOISE_MARGIN)?;

    let walker = default_profiles()[1].with_noise(DEFAULT_NOISE_FLOOR);
    let rec = simulate_walker(&walker, &cfg, 10.0, 2)?;
    let pipeline = SpectrogramPipeline {
        noise: Some(noise),
        ..Default::default()
    };
    let tds = pipeline.run(&rec.frames, &cfg)?;
    println!("spectrogram: {} frames x {} Doppler cells", tds.rows(), tds.cols());

    let axis = &tds.doppler_axis;
    let mean_row: Vec<f64> = (0..tds.cols())
        .map(|c| (0..tds.rows()).map(|r| tds.get(r, c)).sum::<f64>() / tds.rows() as f64)
        .collect();
    let peak = (0..mean_row.len())
        .max_by(|&a, &b| mean_row[a].total_cmp(&mean_row[b]))
        .unwrap_or(0);
    println!(
        "strongest cell on average: {:.1} Hz (torso at {:.1} Hz)",
        axis[peak],
        walker.torso_doppler(&cfg)
    );

    let dir = std::env::temp_dir().join("mcl_spectrogram");
    std::fs::create_dir_all(&dir)?;
    tds.write_csv(dir.join("tds.csv"))?;
    tds.write_pgm(dir.join("tds.pgm"))?;
    println!("wrote tds.csv and tds.pgm to {}", dir.display());
    Ok(())
}
