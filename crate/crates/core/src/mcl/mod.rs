//! Two functional networks and a context network whose sigmoid gates weight
//! the two sets of class scores before a shared softmax.
//!
//! FN1 reads a spectrogram window, FN2 the four gait features, and CN both
//! at once. For class `i` the fused logit is `f1[i] * c[i] + f2[i] * c[X + i]`.

mod checkpoint;
mod samples;
mod train;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nn::{
    cross_entropy, one_hot, softmax_cross_entropy_grad, softmax_rows, Conv2d, Elu, Flatten, Linear, MaxPool2d,
    Module, Scalar, Sequential, Sigmoid, Tensor,
};

pub use checkpoint::{decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, CHECKPOINT_MAGIC};
pub use samples::{
    build_samples, decode_samples, encode_samples, read_samples, sample_count, write_samples, SampleParams,
    SAMPLE_STORE_MAGIC,
};
pub use train::{evaluate, train, ConfusionMatrix, EpochRecord, Evaluation, TrainConfig, TrainOutcome, TrainingLog};

/// Number of scalar gait features fed to FN2.
pub const FEATURE_COUNT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MclConfig {
    pub classes: usize,
    pub tds_rows: usize,
    pub tds_cols: usize,
    /// Output channels of each conv/pool/ELU block in FN1.
    pub conv_channels: Vec<usize>,
    pub fn1_hidden: Vec<usize>,
    pub fn2_hidden: Vec<usize>,
    pub cn_hidden: Vec<usize>,
}

impl MclConfig {
    /// Full-size networks on 45x205 spectrogram windows.
    pub fn full(classes: usize) -> Self {
        Self {
            classes,
            tds_rows: 45,
            tds_cols: 205,
            conv_channels: vec![1, 16, 32, 64],
            fn1_hidden: vec![128],
            fn2_hidden: vec![5, 5],
            cn_hidden: vec![1000, 100],
        }
    }

    /// Two classes on 6x8 windows; small enough for exhaustive gradient checks.
    pub fn miniature() -> Self {
        Self {
            classes: 2,
            tds_rows: 6,
            tds_cols: 8,
            conv_channels: vec![2, 3],
            fn1_hidden: vec![4],
            fn2_hidden: vec![3],
            cn_hidden: vec![5, 4],
        }
    }

    pub fn tds_len(&self) -> usize {
        self.tds_rows * self.tds_cols
    }

    pub fn cn_inputs(&self) -> usize {
        self.tds_len() + FEATURE_COUNT
    }

    pub fn cn_outputs(&self) -> usize {
        2 * self.classes
    }

    /// `(channels, height, width)` after the conv stack, or `None` if the
    /// window shrinks to nothing.
    pub fn conv_output(&self) -> Option<(usize, usize, usize)> {
        let (mut h, mut w) = (self.tds_rows, self.tds_cols);
        for _ in &self.conv_channels {
            (h, w) = MaxPool2d::output_hw(h, w)?;
        }
        Some((*self.conv_channels.last().unwrap_or(&1), h, w))
    }

    pub fn fn1_flatten(&self) -> Option<usize> {
        self.conv_output().map(|(c, h, w)| c * h * w)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ShapeInconsistent(m));
        if self.classes < 2 {
            return bad(format!("need at least 2 classes, got {}", self.classes));
        }
        if self.tds_rows == 0 || self.tds_cols == 0 {
            return bad("empty spectrogram window".into());
        }
        if self.conv_channels.is_empty() || self.conv_channels.contains(&0) {
            return bad(format!("bad conv channels {:?}", self.conv_channels));
        }
        if [&self.fn1_hidden, &self.fn2_hidden, &self.cn_hidden].iter().any(|h| h.contains(&0)) {
            return bad("zero-width hidden layer".into());
        }
        if self.fn1_flatten().is_none() {
            return bad(format!(
                "{}x{} window is too small for {} pooling stages",
                self.tds_rows,
                self.tds_cols,
                self.conv_channels.len()
            ));
        }
        Ok(())
    }
}

/// Input scaling applied inside the model: one mean/std for every
/// spectrogram cell and one pair per gait feature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub tds_mean: f64,
    pub tds_std: f64,
    pub feature_mean: [f64; FEATURE_COUNT],
    pub feature_std: [f64; FEATURE_COUNT],
}

impl Default for Normalization {
    fn default() -> Self {
        Self {
            tds_mean: 0.0,
            tds_std: 1.0,
            feature_mean: [0.0; FEATURE_COUNT],
            feature_std: [1.0; FEATURE_COUNT],
        }
    }
}

fn safe_std(var: f64) -> f64 {
    let s = var.max(0.0).sqrt();
    if s > 1e-12 {
        s
    } else {
        1.0
    }
}

impl Normalization {
    /// Population statistics over a training set.
    pub fn fit(samples: &[Sample]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let (mut sum, mut sq, mut n) = (0.0, 0.0, 0usize);
        for s in samples {
            for &v in &s.tds {
                let v = f64::from(v);
                sum += v;
                sq += v * v;
            }
            n += s.tds.len();
        }
        let mean = sum / n as f64;
        let mut out = Self {
            tds_mean: mean,
            tds_std: safe_std(sq / n as f64 - mean * mean),
            ..Self::default()
        };
        let p = samples.len() as f64;
        for j in 0..FEATURE_COUNT {
            let m = samples.iter().map(|s| s.features[j]).sum::<f64>() / p;
            let v = samples.iter().map(|s| (s.features[j] - m).powi(2)).sum::<f64>() / p;
            out.feature_mean[j] = m;
            out.feature_std[j] = safe_std(v);
        }
        Ok(out)
    }

    pub fn tds(&self, v: f64) -> f64 {
        (v - self.tds_mean) / self.tds_std
    }

    pub fn feature(&self, j: usize, v: f64) -> f64 {
        (v - self.feature_mean[j]) / self.feature_std[j]
    }
}

/// One time-aligned training example.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Row-major spectrogram window in dB.
    pub tds: Vec<f32>,
    pub rows: usize,
    pub cols: usize,
    /// `[x1, x2, x3, x4]` over the feature window starting at the same frame.
    pub features: [f64; FEATURE_COUNT],
    pub label: Option<u32>,
    pub start_frame: usize,
}

impl Sample {
    pub fn labeled(&self) -> Result<usize> {
        self.label.map(|l| l as usize).ok_or(Error::Unlabeled {
            start_frame: self.start_frame,
        })
    }
}

/// Normalized network inputs for a batch of samples.
#[derive(Debug, Clone)]
pub struct Batch<T> {
    /// `[P, 1, rows, cols]`
    pub tds: Tensor<T>,
    /// `[P, 4]`
    pub features: Tensor<T>,
    /// `[P, rows * cols + 4]`
    pub joint: Tensor<T>,
    pub labels: Vec<usize>,
}

impl<T> Batch<T> {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Intermediate outputs of one forward pass, kept for backward and tests.
#[derive(Debug, Clone)]
pub struct FusionOutput<T> {
    pub f1: Tensor<T>,
    pub f2: Tensor<T>,
    pub gates: Tensor<T>,
    pub logits: Tensor<T>,
}

#[derive(Debug, Clone)]
pub struct MclModel<T> {
    pub config: MclConfig,
    pub normalization: Normalization,
    pub fn1: Sequential<T>,
    pub fn2: Sequential<T>,
    pub cn: Sequential<T>,
}

fn fcn<T: Scalar>(net: &mut Sequential<T>, sizes: &[usize], rng: &mut ChaCha8Rng) {
    for (i, pair) in sizes.windows(2).enumerate() {
        net.push(Linear::new(pair[0], pair[1], rng.random()));
        if i + 2 < sizes.len() {
            net.push(Elu::default());
        }
    }
}

/// Factor applied to the He-uniform weights of the FN1 and FN2 output
/// layers, so that an untrained model scores every class almost equally.
pub const HEAD_INIT_SCALE: f64 = 0.01;

fn scale_head<T: Scalar>(net: &mut Sequential<T>) {
    let head = net.layers.iter_mut().rev().find_map(|l| match l {
        crate::nn::Layer::Linear(lin) => Some(lin),
        _ => None,
    });
    if let Some(lin) = head {
        let k = T::lit(HEAD_INIT_SCALE);
        lin.weight.data_mut().iter_mut().for_each(|w| *w = *w * k);
    }
}

/// All three networks with seeded He-uniform weights and zero biases; the
/// FN1 and FN2 output layers are scaled down by [`HEAD_INIT_SCALE`].
pub fn build_model<T: Scalar>(config: &MclConfig, seed: u64) -> Result<MclModel<T>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = config.classes;

    let mut fn1 = Sequential::new();
    let mut cin = 1;
    for &c in &config.conv_channels {
        fn1.push(Conv2d::new(cin, c, 1, rng.random()));
        fn1.push(MaxPool2d::new());
        fn1.push(Elu::default());
        cin = c;
    }
    fn1.push(Flatten::new());
    let flat = config.fn1_flatten().expect("validated");
    let sizes: Vec<usize> = std::iter::once(flat)
        .chain(config.fn1_hidden.iter().copied())
        .chain([x])
        .collect();
    fcn(&mut fn1, &sizes, &mut rng);

    let mut fn2 = Sequential::new();
    let sizes: Vec<usize> = std::iter::once(FEATURE_COUNT)
        .chain(config.fn2_hidden.iter().copied())
        .chain([x])
        .collect();
    fcn(&mut fn2, &sizes, &mut rng);
    scale_head(&mut fn1);
    scale_head(&mut fn2);

    let mut cn = Sequential::new();
    let sizes: Vec<usize> = std::iter::once(config.cn_inputs())
        .chain(config.cn_hidden.iter().copied())
        .chain([config.cn_outputs()])
        .collect();
    fcn(&mut cn, &sizes, &mut rng);
    cn.push(Sigmoid::default());

    let model = MclModel {
        config: config.clone(),
        normalization: Normalization::default(),
        fn1,
        fn2,
        cn,
    };
    let cn_in = model.cn_input_size();
    if cn_in != config.tds_len() + FEATURE_COUNT {
        return Err(Error::ShapeInconsistent(format!(
            "context network takes {cn_in} inputs, expected {}",
            config.tds_len() + FEATURE_COUNT
        )));
    }
    Ok(model)
}

fn first_linear<T: Scalar>(net: &Sequential<T>) -> Option<&Linear<T>> {
    net.layers.iter().find_map(|l| match l {
        crate::nn::Layer::Linear(lin) => Some(lin),
        _ => None,
    })
}

fn last_linear<T: Scalar>(net: &Sequential<T>) -> Option<&Linear<T>> {
    net.layers.iter().rev().find_map(|l| match l {
        crate::nn::Layer::Linear(lin) => Some(lin),
        _ => None,
    })
}

/// `out[p][i] = f1[p][i] * c[p][i] + f2[p][i] * c[p][X + i]`.
pub fn fuse<T: Scalar>(f1: &Tensor<T>, f2: &Tensor<T>, gates: &Tensor<T>) -> Result<Tensor<T>> {
    let (p, x) = match *f1.shape() {
        [p, x] => (p, x),
        _ => return Err(Error::ShapeMismatch(format!("FN1 output {:?}", f1.shape()))),
    };
    if f2.shape() != [p, x] || gates.shape() != [p, 2 * x] {
        return Err(Error::ShapeMismatch(format!(
            "fusion inputs {:?}, {:?}, {:?}",
            f1.shape(),
            f2.shape(),
            gates.shape()
        )));
    }
    let (a, b, c) = (f1.data(), f2.data(), gates.data());
    let mut out = Vec::with_capacity(p * x);
    for s in 0..p {
        let g = &c[s * 2 * x..(s + 1) * 2 * x];
        for i in 0..x {
            out.push(a[s * x + i] * g[i] + b[s * x + i] * g[x + i]);
        }
    }
    Tensor::from_vec(vec![p, x], out)
}

/// Gradients of the fused logits with respect to `(f1, f2, gates)`.
pub fn fuse_backward<T: Scalar>(
    f1: &Tensor<T>,
    f2: &Tensor<T>,
    gates: &Tensor<T>,
    grad: &Tensor<T>,
) -> Result<(Tensor<T>, Tensor<T>, Tensor<T>)> {
    if grad.shape() != f1.shape() {
        return Err(Error::ShapeMismatch(format!("fusion grad {:?}", grad.shape())));
    }
    let (p, x) = (f1.shape()[0], f1.shape()[1]);
    let (a, b, c, g) = (f1.data(), f2.data(), gates.data(), grad.data());
    let mut d1 = vec![T::zero(); p * x];
    let mut d2 = vec![T::zero(); p * x];
    let mut dc = vec![T::zero(); p * 2 * x];
    for s in 0..p {
        for i in 0..x {
            let k = s * x + i;
            let gate = s * 2 * x;
            d1[k] = g[k] * c[gate + i];
            d2[k] = g[k] * c[gate + x + i];
            dc[gate + i] = g[k] * a[k];
            dc[gate + x + i] = g[k] * b[k];
        }
    }
    Ok((
        Tensor::from_vec(vec![p, x], d1)?,
        Tensor::from_vec(vec![p, x], d2)?,
        Tensor::from_vec(vec![p, 2 * x], dc)?,
    ))
}

impl<T: Scalar> MclModel<T> {
    pub fn classes(&self) -> usize {
        self.config.classes
    }

    pub fn cn_input_size(&self) -> usize {
        first_linear(&self.cn).map_or(0, Linear::inputs)
    }

    pub fn cn_output_size(&self) -> usize {
        last_linear(&self.cn).map_or(0, Linear::outputs)
    }

    pub fn fn1_output_size(&self) -> usize {
        last_linear(&self.fn1).map_or(0, Linear::outputs)
    }

    pub fn fn2_output_size(&self) -> usize {
        last_linear(&self.fn2).map_or(0, Linear::outputs)
    }

    pub fn fn1_flatten_size(&self) -> usize {
        first_linear(&self.fn1).map_or(0, Linear::inputs)
    }

    pub fn param_count(&self) -> usize {
        self.fn1.param_count() + self.fn2.param_count() + self.cn.param_count()
    }

    /// Every parameter, prefixed with its network name.
    pub fn named_params(&self) -> Vec<(String, &Tensor<T>)> {
        let mut out = Vec::new();
        for (prefix, net) in [("fn1", &self.fn1), ("fn2", &self.fn2), ("cn", &self.cn)] {
            out.extend(net.params().into_iter().map(|(n, t)| (format!("{prefix}.{n}"), t)));
        }
        out
    }

    pub fn named_params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        let mut out = Vec::new();
        for (prefix, net) in [("fn1", &mut self.fn1), ("fn2", &mut self.fn2), ("cn", &mut self.cn)] {
            out.extend(net.params_mut().into_iter().map(|(n, t)| (format!("{prefix}.{n}"), t)));
        }
        out
    }

    pub fn zero_grad(&mut self) {
        self.fn1.zero_grad();
        self.fn2.zero_grad();
        self.cn.zero_grad();
    }

    pub fn sgd_step(&mut self, learning_rate: T) {
        crate::nn::sgd_step(&mut self.fn1, learning_rate);
        crate::nn::sgd_step(&mut self.fn2, learning_rate);
        crate::nn::sgd_step(&mut self.cn, learning_rate);
    }

    /// Normalizes and packs samples. Unlabeled samples get label 0 here;
    /// training and evaluation reject them before batching.
    pub fn batch(&self, samples: &[&Sample]) -> Result<Batch<T>> {
        let cfg = &self.config;
        let (h, w, d) = (cfg.tds_rows, cfg.tds_cols, cfg.tds_len());
        let p = samples.len();
        let norm = &self.normalization;
        let mut tds = Vec::with_capacity(p * d);
        let mut feats = Vec::with_capacity(p * FEATURE_COUNT);
        let mut joint = Vec::with_capacity(p * (d + FEATURE_COUNT));
        for s in samples {
            if (s.rows, s.cols) != (h, w) || s.tds.len() != d {
                return Err(Error::ShapeMismatch(format!(
                    "sample window {}x{}, model expects {h}x{w}",
                    s.rows, s.cols
                )));
            }
            let m: Vec<T> = s.tds.iter().map(|&v| T::lit(norm.tds(f64::from(v)))).collect();
            let n: Vec<T> = (0..FEATURE_COUNT).map(|j| T::lit(norm.feature(j, s.features[j]))).collect();
            tds.extend_from_slice(&m);
            joint.extend_from_slice(&m);
            joint.extend_from_slice(&n);
            feats.extend_from_slice(&n);
        }
        Ok(Batch {
            tds: Tensor::from_vec(vec![p, 1, h, w], tds)?,
            features: Tensor::from_vec(vec![p, FEATURE_COUNT], feats)?,
            joint: Tensor::from_vec(vec![p, d + FEATURE_COUNT], joint)?,
            labels: samples.iter().map(|s| s.label.unwrap_or(0) as usize).collect(),
        })
    }

    /// Caching forward pass. `gates` replaces the context network's output
    /// when given.
    pub fn forward_with_gates(&mut self, batch: &Batch<T>, gates: Option<&Tensor<T>>) -> Result<FusionOutput<T>> {
        let f1 = self.fn1.forward(&batch.tds)?;
        let f2 = self.fn2.forward(&batch.features)?;
        let gates = match gates {
            Some(g) => g.clone(),
            None => self.cn.forward(&batch.joint)?,
        };
        let logits = fuse(&f1, &f2, &gates)?;
        Ok(FusionOutput { f1, f2, gates, logits })
    }

    pub fn forward(&mut self, batch: &Batch<T>) -> Result<FusionOutput<T>> {
        self.forward_with_gates(batch, None)
    }

    /// Cache-free forward pass for evaluation.
    pub fn infer(&self, batch: &Batch<T>) -> Result<FusionOutput<T>> {
        let f1 = self.fn1.infer(&batch.tds)?;
        let f2 = self.fn2.infer(&batch.features)?;
        let gates = self.cn.infer(&batch.joint)?;
        let logits = fuse(&f1, &f2, &gates)?;
        Ok(FusionOutput { f1, f2, gates, logits })
    }

    /// Class probabilities `softmax(fused logits)`, one row per sample.
    pub fn predict(&self, batch: &Batch<T>) -> Result<Tensor<T>> {
        softmax_rows(&self.infer(batch)?.logits)
    }

    /// Mean cross-entropy of the batch, without touching gradients.
    pub fn loss(&self, batch: &Batch<T>) -> Result<T> {
        let probs = self.predict(batch)?;
        cross_entropy(&one_hot(&batch.labels, self.classes())?, &probs)
    }

    /// Forward, loss, and one joint backward pass through the fusion into
    /// all three networks. Gradients accumulate; call `zero_grad` first.
    pub fn loss_and_grad(&mut self, batch: &Batch<T>) -> Result<(T, FusionOutput<T>)> {
        let out = self.forward(batch)?;
        let probs = softmax_rows(&out.logits)?;
        let labels = one_hot(&batch.labels, self.classes())?;
        let loss = cross_entropy(&labels, &probs)?;
        let grad = softmax_cross_entropy_grad(&labels, &probs)?;
        let (d1, d2, dc) = fuse_backward(&out.f1, &out.f2, &out.gates, &grad)?;
        self.fn1.backward(&d1, false)?;
        self.fn2.backward(&d2, false)?;
        self.cn.backward(&dc, false)?;
        Ok((loss, FusionOutput { logits: probs, ..out }))
    }
}

/// Finite-difference probe of the whole model under its training loss.
struct ModelProbe<'a> {
    model: &'a mut MclModel<f64>,
    batch: Batch<f64>,
}

impl crate::nn::FdTarget for ModelProbe<'_> {
    fn analytic(&mut self) -> Result<Vec<(String, Vec<f64>)>> {
        self.model.zero_grad();
        self.model.loss_and_grad(&self.batch)?;
        Ok(self
            .model
            .named_params()
            .into_iter()
            .map(|(n, t)| (n, t.grad().map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; t.len()])))
            .collect())
    }

    fn get(&self, tensor: usize, index: usize) -> f64 {
        self.model.named_params()[tensor].1.data()[index]
    }

    fn set(&mut self, tensor: usize, index: usize, value: f64) {
        self.model.named_params_mut()[tensor].1.data_mut()[index] = value;
    }

    fn loss(&self) -> Result<f64> {
        self.model.loss(&self.batch)
    }
}

/// Central finite-difference check of every model parameter under the
/// softmax cross-entropy of `samples`.
pub fn grad_check_model(
    model: &mut MclModel<f64>,
    samples: &[Sample],
    tolerance: f64,
) -> Result<crate::nn::GradCheckReport> {
    let refs: Vec<&Sample> = samples.iter().collect();
    let batch = model.batch(&refs)?;
    crate::nn::check_gradients(&mut ModelProbe { model, batch }, tolerance)
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax<T: Scalar>(row: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in row.iter().enumerate() {
        if *v > row[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    pub(crate) fn random_samples(cfg: &MclConfig, n: usize, seed: u64) -> Vec<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| Sample {
                tds: (0..cfg.tds_len()).map(|_| StandardNormal.sample(&mut rng)).collect(),
                rows: cfg.tds_rows,
                cols: cfg.tds_cols,
                features: std::array::from_fn(|_| StandardNormal.sample(&mut rng)),
                label: Some((i % cfg.classes) as u32),
                start_frame: i,
            })
            .collect()
    }

    #[test]
    fn full_size_shapes() {
        let cfg = MclConfig::full(5);
        assert_eq!(cfg.cn_inputs(), 9229);
        assert_eq!(cfg.fn1_flatten(), Some(64 * 2 * 12));
        let cfg3 = MclConfig { classes: 3, ..MclConfig::miniature() };
        let m = build_model::<f32>(&cfg3, 1).unwrap();
        assert_eq!(m.cn_output_size(), 6);
        assert_eq!(m.fn1_output_size(), 3);
        assert_eq!(m.fn2_output_size(), 3);
    }

    #[test]
    fn same_seed_same_parameters() {
        let cfg = MclConfig::miniature();
        let a = build_model::<f32>(&cfg, 9).unwrap();
        let b = build_model::<f32>(&cfg, 9).unwrap();
        let c = build_model::<f32>(&cfg, 10).unwrap();
        let flat = |m: &MclModel<f32>| m.named_params().iter().flat_map(|(_, t)| t.data().to_vec()).collect::<Vec<_>>();
        assert_eq!(flat(&a), flat(&b));
        assert_ne!(flat(&a), flat(&c));
    }

    #[test]
    fn rejects_window_too_small() {
        let cfg = MclConfig {
            tds_rows: 3,
            ..MclConfig::full(5)
        };
        assert!(matches!(build_model::<f32>(&cfg, 0), Err(Error::ShapeInconsistent(_))));
    }

    #[test]
    fn fused_matches_scalar_loop() {
        let cfg = MclConfig::miniature();
        let model = build_model::<f64>(&cfg, 3).unwrap();
        let samples = random_samples(&cfg, 4, 5);
        let refs: Vec<&Sample> = samples.iter().collect();
        let out = model.infer(&model.batch(&refs).unwrap()).unwrap();
        let x = cfg.classes;
        for p in 0..4 {
            for i in 0..x {
                let mut expected = 0.0;
                expected += out.f1.data()[p * x + i] * out.gates.data()[p * 2 * x + i];
                expected += out.f2.data()[p * x + i] * out.gates.data()[p * 2 * x + x + i];
                assert!((out.logits.data()[p * x + i] - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let cfg = MclConfig::miniature();
        let model = build_model::<f64>(&cfg, 3).unwrap();
        let samples = random_samples(&cfg, 6, 2);
        let refs: Vec<&Sample> = samples.iter().collect();
        let probs = model.predict(&model.batch(&refs).unwrap()).unwrap();
        for row in probs.data().chunks(cfg.classes) {
            assert!(row.iter().all(|&p| p > 0.0 && p < 1.0));
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn whole_model_gradient_check() {
        let cfg = MclConfig::miniature();
        let mut model = build_model::<f64>(&cfg, 21).unwrap();
        let samples = random_samples(&cfg, 3, 22);
        let report = grad_check_model(&mut model, &samples, 1e-4).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.checked, model.param_count());
    }

    #[test]
    fn argmax_ties_to_lowest() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[2.0f32, 2.0]), 0);
    }
}
