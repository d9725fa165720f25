use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Scalar, Tensor};

/// He-uniform half-width `sqrt(6 / fan_in)`, giving variance `2 / fan_in`.
pub fn he_uniform_bound(fan_in: usize) -> f64 {
    (6.0 / fan_in.max(1) as f64).sqrt()
}

/// He-uniform weights for `shape = [outputs, inputs...]`; the fan-in is the
/// product of every axis after the first. Fully determined by `seed`.
pub fn init_weights<T: Scalar>(shape: &[usize], seed: u64) -> Tensor<T> {
    let fan_in: usize = shape.iter().skip(1).product();
    let bound = he_uniform_bound(fan_in);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = shape.iter().product();
    let data = (0..n).map(|_| T::lit(rng.random_range(-bound..bound))).collect();
    Tensor::from_vec(shape.to_vec(), data).expect("shape and data agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = init_weights::<f32>(&[8, 16], 7);
        let b = init_weights::<f32>(&[8, 16], 7);
        let c = init_weights::<f32>(&[8, 16], 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn variance_is_two_over_fan_in() {
        let fan_in = 250;
        let w = init_weights::<f64>(&[400, fan_in], 1);
        assert_eq!(w.len(), 100_000);
        let n = w.len() as f64;
        let mean = w.data().iter().sum::<f64>() / n;
        let var = w.data().iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let expected = 2.0 / fan_in as f64;
        assert!((var - expected).abs() < 0.2 * expected, "{var} vs {expected}");
        let bound = he_uniform_bound(fan_in);
        assert!(w.data().iter().all(|v| v.abs() <= bound));
    }
}
