//! A small batched layer engine with hand-written backward passes.
//!
//! Every layer takes and returns [`Tensor`]s whose first axis is the batch.
//! `forward` caches what `backward` needs; `infer` is the cache-free path
//! used for evaluation. Parameter gradients accumulate in each parameter
//! tensor's gradient buffer until [`Module::zero_grad`].

mod gradcheck;
mod init;
mod kernels;
mod layers;
mod loss;
mod tensor;

pub use gradcheck::{check_gradients, grad_check, relative_error, FdTarget, GradCheckReport, FD_STEP};
pub use init::{he_uniform_bound, init_weights};
pub use layers::{Conv2d, Elu, Flatten, Layer, Linear, MaxPool2d, Module, Sequential, Sigmoid};
pub use loss::{
    cross_entropy, cross_entropy_grad, one_hot, softmax, softmax_backward, softmax_cross_entropy_grad,
    softmax_rows, PROB_FLOOR,
};
pub use tensor::{Scalar, Tensor};

/// Plain gradient descent, `p <- p - lr * grad` for every parameter.
pub fn sgd_step<T: Scalar, M: Module<T> + ?Sized>(module: &mut M, learning_rate: T) {
    for (_, p) in module.params_mut() {
        p.descend(learning_rate);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sgd_examples() {
        let mut lin = Linear::<f64>::from_parts(
            Tensor::from_vec(vec![1, 1], vec![1.0]).unwrap(),
            Tensor::from_vec(vec![1], vec![0.5]).unwrap(),
        )
        .unwrap();
        lin.zero_grad();
        sgd_step(&mut lin, 0.1);
        assert_eq!(lin.weight.data(), &[1.0]);
        assert_eq!(lin.bias.data(), &[0.5]);

        lin.weight.grad_mut()[0] = 2.0;
        sgd_step(&mut lin, 0.1);
        assert!((lin.weight.data()[0] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn sgd_on_a_quadratic() {
        let mut w = Tensor::<f64>::from_vec(vec![1], vec![1.0]).unwrap();
        for _ in 0..50 {
            let g = 2.0 * w.data()[0];
            w.grad_mut()[0] = g;
            w.descend(0.1);
        }
        // (1 - 2 * 0.1)^50
        assert!((w.data()[0] - 0.8f64.powi(50)).abs() < 1e-15);
        assert!(w.data()[0].abs() < 1e-4);
    }
}
