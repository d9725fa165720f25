//! Inner loops. Eight independent accumulators let the compiler vectorise
//! the reductions while keeping a fixed summation order.

use super::Scalar;

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [T::zero(); 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for i in 0..8 {
            acc[i] = acc[i] + x[i] * y[i];
        }
    }
    let mut tail = T::zero();
    for (x, y) in ra.iter().zip(rb) {
        tail = tail + *x * *y;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

/// `y += alpha * x`
#[inline]
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * *xi;
    }
}

/// `y += a[0] * x[0] + a[1] * x[1] + a[2] * x[2] + a[3] * x[3]`, one pass over `y`.
#[inline]
pub fn axpy4<T: Scalar>(a: [T; 4], x: [&[T]; 4], y: &mut [T]) {
    let n = y.len();
    debug_assert!(x.iter().all(|v| v.len() == n));
    let (x0, x1, x2, x3) = (&x[0][..n], &x[1][..n], &x[2][..n], &x[3][..n]);
    for k in 0..n {
        y[k] = y[k] + ((a[0] * x0[k] + a[1] * x1[k]) + (a[2] * x2[k] + a[3] * x3[k]));
    }
}

/// `y += Σ_s a[s] * x_s` where `x_s = x[s * stride..s * stride + y.len()]`,
/// four terms per pass over `y`.
pub fn axpy_rows<T: Scalar>(a: &[T], x: &[T], stride: usize, y: &mut [T]) {
    let n = y.len();
    let row = |s: usize| &x[s * stride..s * stride + n];
    let mut s = 0;
    while s + 4 <= a.len() {
        axpy4([a[s], a[s + 1], a[s + 2], a[s + 3]], [row(s), row(s + 1), row(s + 2), row(s + 3)], y);
        s += 4;
    }
    for (t, &c) in a.iter().enumerate().skip(s) {
        axpy(c, row(t), y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_matches_naive() {
        let a: Vec<f64> = (0..37).map(|i| (i as f64 * 0.37).sin()).collect();
        let b: Vec<f64> = (0..37).map(|i| (i as f64 * 0.11).cos()).collect();
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot(&a, &b) - naive).abs() < 1e-12);
    }

    #[test]
    fn axpy_rows_matches_single_rows() {
        let x: Vec<f64> = (0..7 * 5).map(|i| (i as f64 * 0.37).sin()).collect();
        let a: Vec<f64> = (0..7).map(|i| i as f64 - 3.0).collect();
        let mut fast = vec![1.0; 5];
        let mut slow = vec![1.0; 5];
        axpy_rows(&a, &x, 5, &mut fast);
        for (s, &c) in a.iter().enumerate() {
            axpy(c, &x[s * 5..s * 5 + 5], &mut slow);
        }
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f - s).abs() < 1e-12);
        }
    }

    #[test]
    fn axpy_adds() {
        let mut y = vec![1.0f32, 2.0, 3.0];
        axpy(2.0, &[1.0, 1.0, -1.0], &mut y);
        assert_eq!(y, vec![3.0, 4.0, 1.0]);
    }
}
