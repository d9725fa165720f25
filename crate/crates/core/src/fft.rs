//! Iterative radix-2 decimation-in-time FFT.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Precomputed twiddles and bit-reversal permutation for one transform size.
#[derive(Debug, Clone)]
pub struct Radix2Fft {
    len: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl Radix2Fft {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NonPowerOfTwo(len));
        }
        let bits = len.trailing_zeros();
        let bitrev = (0..len)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        // exp(-j 2π k / len) for k < len/2
        let twiddles = (0..len / 2)
            .map(|k| {
                let theta = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        Ok(Self {
            len,
            twiddles,
            bitrev,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Forward transform in place, `X[v] = Σ x[l] exp(-j2π v l / N)`, unscaled.
    pub fn process(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        for i in 0..self.len {
            let j = self.bitrev[i];
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for start in (0..self.len).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Separable 2D transform: along every row, then along every column.
#[derive(Debug, Clone)]
pub struct Fft2d {
    row_plan: Radix2Fft,
    col_plan: Radix2Fft,
}

impl Fft2d {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        Ok(Self {
            row_plan: Radix2Fft::new(cols)?,
            col_plan: Radix2Fft::new(rows)?,
        })
    }

    pub fn rows(&self) -> usize {
        self.col_plan.len()
    }

    pub fn cols(&self) -> usize {
        self.row_plan.len()
    }

    pub fn process(&self, m: &mut ComplexMatrix) {
        assert_eq!((m.rows, m.cols), (self.rows(), self.cols()));
        for row in m.data.chunks_exact_mut(m.cols) {
            self.row_plan.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); m.rows];
        for c in 0..m.cols {
            for (r, v) in col.iter_mut().enumerate() {
                *v = m.data[r * m.cols + c];
            }
            self.col_plan.process(&mut col);
            for (r, v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = *v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(Radix2Fft::new(6), Err(Error::NonPowerOfTwo(6))));
        assert!(Radix2Fft::new(0).is_err());
        assert!(Radix2Fft::new(1).is_ok());
    }

    #[test]
    fn impulse_is_flat() {
        let plan = Radix2Fft::new(16).unwrap();
        let mut buf = vec![Complex64::new(0.0, 0.0); 16];
        buf[0] = Complex64::new(1.0, 0.0);
        plan.process(&mut buf);
        for z in buf {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn single_tone_lands_in_one_bin() {
        let n = 32;
        let plan = Radix2Fft::new(n).unwrap();
        let mut buf: Vec<_> = (0..n)
            .map(|l| Complex64::from_polar(1.0, 2.0 * PI * 5.0 * l as f64 / n as f64))
            .collect();
        plan.process(&mut buf);
        for (v, z) in buf.iter().enumerate() {
            let expected = if v == 5 { n as f64 } else { 0.0 };
            assert!((z.norm() - expected).abs() < 1e-12, "bin {v}: {z}");
        }
    }
}
