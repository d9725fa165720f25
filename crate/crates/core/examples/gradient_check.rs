//! Finite-difference check of every layer type and of the full fused model
//! in double precision.
//!
//! cargo run --example gradient_check

use mcl_radar::mcl::{build_model, grad_check_model, MclConfig, Sample};
use mcl_radar::nn::{grad_check, Conv2d, Elu, Flatten, Linear, MaxPool2d, Sequential, Sigmoid, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> mcl_radar::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let mut fcn = Sequential::<f64>::new();
    fcn.push(Linear::new(4, 5, 1)).push(Elu::new(1.0)).push(Linear::new(5, 3, 2)).push(Sigmoid::new());
    let x: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
    let report = grad_check(&mut fcn, &Tensor::from_vec(vec![3, 4], x)?, 1e-6, 1)?;
    println!("linear/elu/sigmoid: {report:?}");

    let mut cnn = Sequential::<f64>::new();
    cnn.push(Conv2d::new(1, 2, 1, 3))
        .push(MaxPool2d::new())
        .push(Elu::new(1.0))
        .push(Flatten::new())
        .push(Linear::new(24, 2, 4));
    let x: Vec<f64> = (0..2 * 6 * 8).map(|_| rng.random_range(-1.0..1.0)).collect();
    let report = grad_check(&mut cnn, &Tensor::from_vec(vec![2, 1, 6, 8], x)?, 1e-4, 2)?;
    println!("conv/pool stack: {report:?}");

    let cfg = MclConfig::miniature();
    let mut model = build_model::<f64>(&cfg, 5)?;
    let samples: Vec<Sample> = (0..4)
        .map(|i| Sample {
            tds: (0..cfg.tds_len()).map(|_| rng.random_range(-1.0..1.0)).collect(),
            rows: cfg.tds_rows,
            cols: cfg.tds_cols,
            features: [0.0; 4].map(|_| rng.random_range(-1.0..1.0)),
            label: Some(i % cfg.classes as u32),
            start_frame: i as usize,
        })
        .collect();
    let report = grad_check_model(&mut model, &samples, 1e-4)?;
    println!(
        "fused model: {} parameters checked, max relative error {:.2e} at {}, passed = {}",
        report.checked,
        report.max_rel_error,
        report.worst,
        report.passed()
    );
    Ok(())
}
