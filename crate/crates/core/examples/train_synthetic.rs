//! End-to-end training on simulated walkers without touching the disk.
//!
//! cargo run --release --example train_synthetic -- [epochs] [seed]

use mcl_radar::datagen::{default_profiles, make_dataset, recording_seed, simulate_background, DEFAULT_NOISE_FLOOR};
use mcl_radar::mcl::{build_model, build_samples, evaluate, train, MclConfig, Normalization, Sample, SampleParams, TrainConfig};
use mcl_radar::radar_io::RadarConfig;
use mcl_radar::spectrogram::{assemble_tds, estimate_noise_model, FftMode, SpectrogramPipeline, DEFAULT_NOISE_MARGIN};

fn main() -> mcl_radar::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(30);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let cfg = RadarConfig::desk();
    let background = simulate_background(&cfg, DEFAULT_NOISE_FLOOR, 10.0, recording_seed(seed, 99))?;
    let noise = estimate_noise_model(&assemble_tds(&background.frames, &cfg, FftMode::Strict)?, DEFAULT_NOISE_MARGIN)?;
    let pipeline = SpectrogramPipeline {
        noise: Some(noise),
        ..Default::default()
    };
    let profiles: Vec<_> = default_profiles()
        .into_iter()
        .map(|p| p.with_noise(DEFAULT_NOISE_FLOOR))
        .collect();

    let mut splits: Vec<Vec<Sample>> = Vec::new();
    for (i, (seconds, stride)) in [(60.0, 15), (30.0, 45), (60.0, 45)].into_iter().enumerate() {
        let mut samples = Vec::new();
        for rec in make_dataset(&profiles, seconds, &cfg, recording_seed(seed, i))? {
            let tds = pipeline.run(&rec.frames, &cfg)?;
            let params = SampleParams {
                stride,
                ..Default::default()
            };
            samples.extend(build_samples(&tds, &cfg, &rec.labels, &params)?);
        }
        splits.push(samples);
    }
    let [train_set, val_set, test_set] = <[_; 3]>::try_from(splits).expect("three splits");
    println!("{} train / {} val / {} test windows", train_set.len(), val_set.len(), test_set.len());

    let mut model = build_model::<f32>(&MclConfig::full(profiles.len()), seed)?;
    model.normalization = Normalization::fit(&train_set)?;
    let config = TrainConfig {
        epochs,
        seed,
        ..Default::default()
    };
    let outcome = train(&mut model, &train_set, &val_set, &config)?;
    for r in outcome.log.epochs.iter().filter(|r| r.epoch % 5 == 0) {
        println!(
            "epoch {:3}: train loss {:.4} acc {:.3} | val loss {:.4} acc {:.3}",
            r.epoch, r.train_loss, r.train_acc, r.val_loss, r.val_acc
        );
    }
    let result = evaluate(&outcome.best, &test_set)?;
    println!("best epoch {}, test accuracy {:.3}", outcome.best_epoch, result.accuracy);
    print!("{}", result.confusion.to_csv());
    Ok(())
}
