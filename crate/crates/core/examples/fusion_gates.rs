//! Show how the context network's gates mix the two sets of class scores.
//!
//! cargo run --example fusion_gates

use mcl_radar::mcl::{build_model, fuse, MclConfig, Sample};
use mcl_radar::nn::{softmax_rows, Tensor};

fn main() -> mcl_radar::Result<()> {
    // Hand-picked scores: FN1 prefers class 0, FN2 prefers class 1.
    let f1 = Tensor::<f64>::from_vec(vec![1, 2], vec![3.0, 0.0])?;
    let f2 = Tensor::<f64>::from_vec(vec![1, 2], vec![0.0, 3.0])?;
    for (label, gates) in [
        ("trust FN1", [1.0, 1.0, 0.0, 0.0]),
        ("trust FN2", [0.0, 0.0, 1.0, 1.0]),
        ("even mix ", [0.5, 0.5, 0.5, 0.5]),
    ] {
        let g = Tensor::from_vec(vec![1, 4], gates.to_vec())?;
        let logits = fuse(&f1, &f2, &g)?;
        let probs = softmax_rows(&logits)?;
        println!("{label}: logits {:?} -> probabilities {:.3?}", logits.data(), probs.data());
    }

    // The same quantities from an untrained miniature model.
    let cfg = MclConfig::miniature();
    let model = build_model::<f64>(&cfg, 3)?;
    let sample = Sample {
        tds: (0..cfg.tds_len()).map(|i| (i as f32 * 0.37).sin()).collect(),
        rows: cfg.tds_rows,
        cols: cfg.tds_cols,
        features: [0.4, -1.1, 0.2, 0.9],
        label: Some(0),
        start_frame: 0,
    };
    let batch = model.batch(&[&sample])?;
    let out = model.infer(&batch)?;
    println!("untrained model: f1 {:.3?}", out.f1.data());
    println!("                 f2 {:.3?}", out.f2.data());
    println!("                 gates {:.3?}", out.gates.data());
    println!("                 probabilities {:.3?}", model.predict(&batch)?.data());
    Ok(())
}
