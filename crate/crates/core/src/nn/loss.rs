use crate::error::{Error, Result};

use super::{Scalar, Tensor};

/// Probabilities are clamped here before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

/// Max-shifted softmax of one logit vector.
pub fn softmax<T: Scalar>(logits: &[T]) -> Vec<T> {
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = logits.iter().map(|&z| (z - max).exp()).collect();
    let total: T = exps.iter().copied().sum();
    exps.into_iter().map(|e| e / total).collect()
}

fn rows2<T: Scalar>(t: &Tensor<T>, what: &str) -> Result<(usize, usize)> {
    match *t.shape() {
        [p, q] => Ok((p, q)),
        _ => Err(Error::ShapeMismatch(format!("{what} must be [P, Q], got {:?}", t.shape()))),
    }
}

fn same_shape<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<(usize, usize)> {
    let pq = rows2(a, "labels")?;
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(pq)
}

/// Row-wise softmax over a `[P, Q]` tensor.
pub fn softmax_rows<T: Scalar>(logits: &Tensor<T>) -> Result<Tensor<T>> {
    let (_, q) = rows2(logits, "logits")?;
    let data = logits.data().chunks_exact(q).flat_map(softmax).collect();
    Tensor::from_vec(logits.shape().to_vec(), data)
}

/// One-hot `[P, Q]` matrix.
pub fn one_hot<T: Scalar>(labels: &[usize], classes: usize) -> Result<Tensor<T>> {
    let mut t = Tensor::zeros(vec![labels.len(), classes]);
    for (i, &l) in labels.iter().enumerate() {
        if l >= classes {
            return Err(Error::ShapeMismatch(format!("label {l} out of {classes} classes")));
        }
        t.data_mut()[i * classes + l] = T::one();
    }
    Ok(t)
}

/// Mean negative log-likelihood `(1/P) Σ_i -Σ_j label_ij log(prob_ij)`.
pub fn cross_entropy<T: Scalar>(labels: &Tensor<T>, probs: &Tensor<T>) -> Result<T> {
    let (p, _) = same_shape(labels, probs)?;
    let floor = T::lit(PROB_FLOOR);
    let mut total = T::zero();
    for (&y, &pr) in labels.data().iter().zip(probs.data()) {
        if y != T::zero() {
            total = total - y * pr.max(floor).ln();
        }
    }
    Ok(total / T::lit(p as f64))
}

/// `d CE / d probs = -label / (P * prob)`.
pub fn cross_entropy_grad<T: Scalar>(labels: &Tensor<T>, probs: &Tensor<T>) -> Result<Tensor<T>> {
    let (p, _) = same_shape(labels, probs)?;
    let scale = T::lit(p as f64);
    let floor = T::lit(PROB_FLOOR);
    let data = labels
        .data()
        .iter()
        .zip(probs.data())
        .map(|(&y, &pr)| -y / (scale * pr.max(floor)))
        .collect();
    Tensor::from_vec(labels.shape().to_vec(), data)
}

/// Pulls a gradient with respect to softmax outputs back to the logits:
/// `g_z = p * (g_p - <g_p, p>)` per row.
pub fn softmax_backward<T: Scalar>(probs: &Tensor<T>, grad_probs: &Tensor<T>) -> Result<Tensor<T>> {
    let (_, q) = same_shape(probs, grad_probs)?;
    let mut out = Vec::with_capacity(probs.len());
    for (p, g) in probs.data().chunks_exact(q).zip(grad_probs.data().chunks_exact(q)) {
        let inner: T = p.iter().zip(g).map(|(&a, &b)| a * b).sum();
        out.extend(p.iter().zip(g).map(|(&a, &b)| a * (b - inner)));
    }
    Tensor::from_vec(probs.shape().to_vec(), out)
}

/// Gradient of `cross_entropy(labels, softmax(z))` with respect to `z`:
/// `(prob - label) / P`.
pub fn softmax_cross_entropy_grad<T: Scalar>(labels: &Tensor<T>, probs: &Tensor<T>) -> Result<Tensor<T>> {
    let (p, _) = same_shape(labels, probs)?;
    let scale = T::lit(p as f64);
    let data = labels
        .data()
        .iter()
        .zip(probs.data())
        .map(|(&y, &pr)| (pr - y) / scale)
        .collect();
    Tensor::from_vec(labels.shape().to_vec(), data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_examples() {
        assert!(softmax(&[0.3f64; 5]).iter().all(|&p| (p - 0.2).abs() < 1e-15));
        let p = softmax(&[2f64.ln(), 0.0]);
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15 && (p[1] - 1.0 / 3.0).abs() < 1e-15);
        let z = [0.1f64, -2.0, 3.5, 0.0];
        let shifted: Vec<f64> = z.iter().map(|v| v + 100.0).collect();
        for (a, b) in softmax(&z).iter().zip(softmax(&shifted)) {
            assert!((a - b).abs() < 1e-14);
        }
        let big = softmax(&[1000.0f64, 0.0]);
        assert!(big.iter().all(|p| p.is_finite()));
    }

    #[test]
    fn cross_entropy_examples() {
        let labels = one_hot::<f64>(&[1, 0], 3).unwrap();
        let perfect = Tensor::from_vec(vec![2, 3], vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(cross_entropy(&labels, &perfect).unwrap(), 0.0);

        let labels = one_hot::<f64>(&[4, 2], 5).unwrap();
        let uniform = Tensor::from_vec(vec![2, 5], vec![0.2; 10]).unwrap();
        let ce = cross_entropy(&labels, &uniform).unwrap();
        assert!((ce - 5f64.ln()).abs() < 1e-12);
        assert!((ce - 1.6094).abs() < 1e-4);
    }

    #[test]
    fn chained_grad_equals_fused_grad() {
        let logits = Tensor::from_vec(vec![2, 3], vec![0.5, -1.0, 2.0, 0.0, 0.3, -0.7]).unwrap();
        let probs = softmax_rows(&logits).unwrap();
        let labels = one_hot::<f64>(&[2, 1], 3).unwrap();
        let chained = softmax_backward(&probs, &cross_entropy_grad(&labels, &probs).unwrap()).unwrap();
        let fused = softmax_cross_entropy_grad(&labels, &probs).unwrap();
        for (a, b) in chained.data().iter().zip(fused.data()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
