//! Central finite-difference verification of analytic gradients.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;

use super::{Module, Tensor};

pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    /// Name and element index of the worst entry.
    pub worst: String,
    pub checked: usize,
    pub tolerance: f64,
}

impl GradCheckReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error < self.tolerance
    }
}

/// `|a - n| / max(|a|, |n|, floor)`.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor)
}

/// Something whose scalar loss can be probed one coordinate at a time.
pub trait FdTarget {
    /// Analytic gradient of `loss` for every probed tensor, by name.
    fn analytic(&mut self) -> Result<Vec<(String, Vec<f64>)>>;
    fn get(&self, tensor: usize, index: usize) -> f64;
    fn set(&mut self, tensor: usize, index: usize, value: f64);
    fn loss(&self) -> Result<f64>;
}

/// Compares every analytic gradient entry with `(L(x+h) - L(x-h)) / 2h`.
///
/// Entries are compared relative to the larger of the two values, floored
/// at 1e-3 of the largest analytic entry so that near-zero gradients are
/// judged on an absolute scale.
pub fn check_gradients(target: &mut impl FdTarget, tolerance: f64) -> Result<GradCheckReport> {
    let analytic = target.analytic()?;
    let scale = analytic
        .iter()
        .flat_map(|(_, g)| g.iter())
        .fold(0.0_f64, |m, g| m.max(g.abs()));
    let floor = (1e-3 * scale).max(1e-12);
    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        worst: String::new(),
        checked: 0,
        tolerance,
    };
    for (t, (name, grads)) in analytic.iter().enumerate() {
        for (i, &a) in grads.iter().enumerate() {
            let x = target.get(t, i);
            target.set(t, i, x + FD_STEP);
            let plus = target.loss()?;
            target.set(t, i, x - FD_STEP);
            let minus = target.loss()?;
            target.set(t, i, x);
            let numeric = (plus - minus) / (2.0 * FD_STEP);
            let err = relative_error(a, numeric, floor);
            if err > report.max_rel_error || report.checked == 0 {
                report.max_rel_error = err;
                report.worst = format!("{name}[{i}]");
            }
            report.checked += 1;
        }
    }
    Ok(report)
}

/// Probes a module under the loss `Σ r ⊙ module(input)` with a fixed random
/// projection `r`; checks every parameter and the input itself.
struct ModuleProbe<'a, M> {
    module: &'a mut M,
    input: Tensor<f64>,
    projection: Vec<f64>,
}

impl<M: Module<f64>> FdTarget for ModuleProbe<'_, M> {
    fn analytic(&mut self) -> Result<Vec<(String, Vec<f64>)>> {
        self.module.zero_grad();
        let out = self.module.forward(&self.input)?;
        let r = Tensor::from_vec(out.shape().to_vec(), self.projection.clone())?;
        let dx = self.module.backward(&r, true)?.expect("input gradient requested");
        let mut all: Vec<(String, Vec<f64>)> = self
            .module
            .params()
            .into_iter()
            .map(|(n, p)| (n, p.grad().map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; p.len()])))
            .collect();
        all.push(("input".into(), dx.into_data()));
        Ok(all)
    }

    fn get(&self, tensor: usize, index: usize) -> f64 {
        let params = self.module.params();
        match params.get(tensor) {
            Some((_, p)) => p.data()[index],
            None => self.input.data()[index],
        }
    }

    fn set(&mut self, tensor: usize, index: usize, value: f64) {
        let mut params = self.module.params_mut();
        match params.get_mut(tensor) {
            Some((_, p)) => p.data_mut()[index] = value,
            None => self.input.data_mut()[index] = value,
        }
    }

    fn loss(&self) -> Result<f64> {
        let out = self.module.infer(&self.input)?;
        Ok(out.data().iter().zip(&self.projection).map(|(y, r)| y * r).sum())
    }
}

/// Gradient check of a network fragment at `input`.
pub fn grad_check<M: Module<f64>>(module: &mut M, input: &Tensor<f64>, tolerance: f64, seed: u64) -> Result<GradCheckReport> {
    let out_len = module.infer(input)?.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let projection = (0..out_len).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut probe = ModuleProbe {
        module,
        input: input.clone(),
        projection,
    };
    check_gradients(&mut probe, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Conv2d, Elu, Flatten, Linear, MaxPool2d, Sequential, Sigmoid};

    fn input(shape: Vec<usize>, seed: u64) -> Tensor<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = shape.iter().product();
        let data = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        Tensor::from_vec(shape, data).unwrap()
    }

    #[test]
    fn linear_is_exact_to_fd_precision() {
        let mut l = Linear::<f64>::new(6, 4, 3);
        let r = grad_check(&mut l, &input(vec![3, 6], 1), 1e-6, 9).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checked, 6 * 4 + 4 + 18);
    }

    #[test]
    fn fcn_stack_passes() {
        let mut net = Sequential::<f64>::default();
        net.push(Linear::new(4, 5, 1));
        net.push(Elu::default());
        net.push(Linear::new(5, 5, 2));
        net.push(Elu::default());
        net.push(Linear::new(5, 3, 3));
        net.push(Sigmoid::default());
        let r = grad_check(&mut net, &input(vec![2, 4], 4), 1e-4, 5).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn conv_pool_stack_passes() {
        let mut net = Sequential::<f64>::default();
        net.push(Conv2d::new(1, 2, 1, 11));
        net.push(MaxPool2d::new());
        net.push(Elu::default());
        net.push(Conv2d::new(2, 3, 1, 12));
        net.push(MaxPool2d::new());
        net.push(Elu::default());
        net.push(Flatten::default());
        net.push(Linear::new(6, 2, 13));
        let r = grad_check(&mut net, &input(vec![2, 1, 6, 8], 6), 1e-4, 7).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn corrupted_backward_is_caught() {
        struct Broken(Linear<f64>);
        impl Module<f64> for Broken {
            fn forward(&mut self, x: &Tensor<f64>) -> Result<Tensor<f64>> {
                self.0.forward(x)
            }
            fn infer(&self, x: &Tensor<f64>) -> Result<Tensor<f64>> {
                self.0.infer(x)
            }
            fn backward(&mut self, g: &Tensor<f64>, need: bool) -> Result<Option<Tensor<f64>>> {
                let out = self.0.backward(g, need)?;
                self.0.weight.grad_mut()[0] += 0.5;
                Ok(out)
            }
            fn params(&self) -> Vec<(String, &Tensor<f64>)> {
                self.0.params()
            }
            fn params_mut(&mut self) -> Vec<(String, &mut Tensor<f64>)> {
                self.0.params_mut()
            }
        }
        let mut b = Broken(Linear::new(3, 2, 1));
        let r = grad_check(&mut b, &input(vec![2, 3], 2), 1e-4, 3).unwrap();
        assert!(!r.passed());
        assert!(r.worst.contains("weight[0]"), "{}", r.worst);
    }

    #[test]
    fn relative_error_floor() {
        assert_eq!(relative_error(1.0, 1.0, 1e-12), 0.0);
        assert!((relative_error(2.0, 1.0, 1e-12) - 0.5).abs() < 1e-15);
        assert!((relative_error(1e-9, 0.0, 1e-3) - 1e-6).abs() < 1e-15);
    }
}
