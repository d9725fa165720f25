//! Save a model to an MCL1 checkpoint, load it back and confirm the
//! predictions are identical.
//!
//! cargo run --example checkpoint_roundtrip

use mcl_radar::mcl::{build_model, encode_checkpoint, load_checkpoint, save_checkpoint, MclConfig, Sample};

fn main() -> mcl_radar::Result<()> {
    let cfg = MclConfig::full(5);
    let model = build_model::<f32>(&cfg, 9)?;
    println!(
        "{} parameters, CN input {} and output {}",
        model.param_count(),
        model.cn_input_size(),
        model.cn_output_size()
    );

    let path = std::env::temp_dir().join("mcl_checkpoint_roundtrip.mcl");
    save_checkpoint(&model, &path)?;
    let loaded = load_checkpoint::<f32>(&path)?;
    println!("{} bytes written to {}", encode_checkpoint(&model).len(), path.display());

    let sample = Sample {
        tds: (0..cfg.tds_len()).map(|i| ((i % 205) as f32 / 102.0) - 1.0).collect(),
        rows: cfg.tds_rows,
        cols: cfg.tds_cols,
        features: [0.1, 0.3, -0.2, 0.5],
        label: None,
        start_frame: 0,
    };
    let a = model.predict(&model.batch(&[&sample])?)?;
    let b = loaded.predict(&loaded.batch(&[&sample])?)?;
    assert_eq!(a.data(), b.data());
    assert_eq!(encode_checkpoint(&model), encode_checkpoint(&loaded));
    println!("predictions match bit for bit: {:?}", a.data());
    Ok(())
}
