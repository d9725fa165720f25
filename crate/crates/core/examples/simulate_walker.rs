//! Simulate one walker, store it as an MDF1 file with a label CSV, and read
//! both back.
//!
//! cargo run --example simulate_walker -- [seconds] [noise]

use mcl_radar::datagen::{simulate_walker, WalkerProfile};
use mcl_radar::radar_io::{labels_path, read_header, read_labeled_recording, write_labels, write_recording, RadarConfig};

fn main() -> mcl_radar::Result<()> {
    let mut args = std::env::args().skip(1);
    let seconds: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5.0);
    let noise: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1e-3);

    let cfg = RadarConfig::desk();
    let profile = WalkerProfile::new(4, 1.2, 300.0, 1.1).with_noise(noise);
    let rec = simulate_walker(&profile, &cfg, seconds, 42)?;
    println!(
        "{} frames at {:.2} fps, Doppler bin {:.2} Hz, velocity step {:.4} m/s",
        rec.len(),
        cfg.frame_rate(),
        cfg.doppler_resolution(),
        cfg.velocity_resolution()
    );
    println!(
        "torso Doppler {:.1} Hz, expected bandwidth {:.0} Hz, limb period {:.3} s",
        profile.torso_doppler(&cfg),
        profile.expected_doppler_bandwidth(),
        profile.expected_limb_period()
    );

    let dir = std::env::temp_dir().join("mcl_simulate_walker");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("walker.mdf");
    write_recording(&rec, &path)?;
    write_labels(&rec.labels, labels_path(&path))?;

    let header = read_header(&path)?;
    println!("wrote {} ({header:?})", path.display());
    let back = read_labeled_recording(&path)?;
    assert_eq!(back, rec);
    println!("round trip is bit-exact, label of frame 0 = {:?}", back.labels[0]);
    Ok(())
}
