//! Extract the four gait features from noise-free walkers and compare them
//! with the values the simulator was configured with.
//!
//! cargo run --example gait_features

use mcl_radar::datagen::default_profiles;
use mcl_radar::datagen::simulate_walker;
use mcl_radar::features::{extract_features, FeatureParams, TdsWindow, DEFAULT_FEATURE_WINDOW};
use mcl_radar::radar_io::RadarConfig;
use mcl_radar::spectrogram::SpectrogramPipeline;

fn main() -> mcl_radar::Result<()> {
    let cfg = RadarConfig::desk();
    let pipeline = SpectrogramPipeline::default();
    println!("profile |   x1 m/s (want) |  x2 Hz (want) | x3 Hz |  x4 s (want)");
    for profile in default_profiles() {
        let rec = simulate_walker(&profile, &cfg, 15.0, 3)?;
        let tds = pipeline.run(&rec.frames, &cfg)?;
        let window = TdsWindow::from_tds(&tds, 0, DEFAULT_FEATURE_WINDOW)?;
        let f = extract_features(&window, &cfg, &FeatureParams::default())?;
        let x = f.to_input(window.duration());
        println!(
            "{:7} | {:6.3} ({:5.3}) | {:5.0} ({:5.0}) | {:5.0} | {:5.3} ({:5.3})",
            profile.id,
            x[0],
            profile.expected_torso_speed(),
            x[1],
            profile.expected_doppler_bandwidth(),
            x[2],
            x[3],
            profile.expected_limb_period()
        );
    }
    Ok(())
}
