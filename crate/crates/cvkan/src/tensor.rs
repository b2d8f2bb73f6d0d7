//! Shaped complex tensors.
//!
//! [`ComplexTensor`] is a row-major array of `Complex64` values with an
//! explicit shape. It is deliberately small: the engine only needs vectors,
//! matrices and batch matrices, plus a handful of dense operations written
//! for contiguous rows.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("shape {shape:?} implies {expected} elements but {actual} were provided")]
    LengthMismatch {
        shape: Vec<usize>,
        expected: usize,
        actual: usize,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Dense complex tensor with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor {
    shape: Vec<usize>,
    data: Vec<Complex64>,
}

impl ComplexTensor {
    /// Builds a tensor from a shape and row-major data.
    pub fn new(shape: Vec<usize>, data: Vec<Complex64>) -> Result<Self, TensorError> {
        let expected: usize = shape.iter().product();
        if expected != data.len() {
            return Err(TensorError::LengthMismatch {
                shape,
                expected,
                actual: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self {
            shape,
            data: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// One-dimensional tensor from a vector.
    pub fn from_vec(data: Vec<Complex64>) -> Self {
        Self {
            shape: vec![data.len()],
            data,
        }
    }

    /// Matrix (2-D tensor) from row-major data.
    pub fn matrix(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, TensorError> {
        Self::new(vec![rows, cols], data)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Bounds-checked element access by multi-index.
    pub fn get(&self, index: &[usize]) -> Option<Complex64> {
        if index.len() != self.shape.len() {
            return None;
        }
        let mut flat = 0usize;
        for (i, (&ix, &extent)) in index.iter().zip(&self.shape).enumerate() {
            if ix >= extent {
                return None;
            }
            flat = if i == 0 { ix } else { flat * extent + ix };
        }
        self.data.get(flat).copied()
    }

    /// Number of rows of a 2-D tensor.
    pub fn rows(&self) -> usize {
        assert_eq!(self.shape.len(), 2, "rows() requires a 2-D tensor");
        self.shape[0]
    }

    /// Number of columns of a 2-D tensor.
    pub fn cols(&self) -> usize {
        assert_eq!(self.shape.len(), 2, "cols() requires a 2-D tensor");
        self.shape[1]
    }

    /// Contiguous row of a 2-D tensor.
    pub fn row(&self, r: usize) -> &[Complex64] {
        let cols = self.cols();
        &self.data[r * cols..(r + 1) * cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        let cols = self.cols();
        &mut self.data[r * cols..(r + 1) * cols]
    }

    /// True when every component of every element is finite.
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius-style sum of squared magnitudes.
    pub fn norm_sqr_sum(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// In-place `self += alpha * other` over congruent tensors.
    pub fn axpy(&mut self, alpha: Complex64, other: &Self) -> Result<(), TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch(format!(
                "axpy over {:?} and {:?}",
                self.shape, other.shape
            )));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
        Ok(())
    }
}

/// `out[s][i] = sum_j w[i][j] * x[s][j] + b[i]` for a batch `x` of row
/// vectors. `w` is `n_out x n_in`, `x` is `batch x n_in`.
pub fn affine_batch(w: &ComplexTensor, b: &[Complex64], x: &ComplexTensor) -> ComplexTensor {
    let n_out = w.rows();
    let n_in = w.cols();
    assert_eq!(x.cols(), n_in, "input width does not match weight matrix");
    assert_eq!(b.len(), n_out, "bias length does not match weight matrix");
    let batch = x.rows();
    let mut out = ComplexTensor::zeros(vec![batch, n_out]);
    for s in 0..batch {
        let xr = x.row(s);
        let or = out.row_mut(s);
        for i in 0..n_out {
            let wr = w.row(i);
            let mut acc = b[i];
            for j in 0..n_in {
                acc += wr[j] * xr[j];
            }
            or[i] = acc;
        }
    }
    out
}

/// Backpropagates a batch of output deltas through the linear map
/// `s = W h + b`, producing `delta_h[s][j] = sum_i conj(w[i][j]) * delta[s][i]`.
pub fn backprop_linear(w: &ComplexTensor, delta: &ComplexTensor) -> ComplexTensor {
    let n_out = w.rows();
    let n_in = w.cols();
    assert_eq!(delta.cols(), n_out);
    let batch = delta.rows();
    let mut out = ComplexTensor::zeros(vec![batch, n_in]);
    for s in 0..batch {
        let dr = delta.row(s);
        let or = out.row_mut(s);
        for i in 0..n_out {
            let d = dr[i];
            let wr = w.row(i);
            for j in 0..n_in {
                or[j] += wr[j].conj() * d;
            }
        }
    }
    out
}

/// Accumulates the weight cogradient `dw[i][j] += sum_s delta[s][i] * conj(h[s][j])`.
pub fn accumulate_outer(dw: &mut ComplexTensor, delta: &ComplexTensor, h: &ComplexTensor) {
    let n_out = dw.rows();
    let n_in = dw.cols();
    assert_eq!(delta.cols(), n_out);
    assert_eq!(h.cols(), n_in);
    assert_eq!(delta.rows(), h.rows());
    for s in 0..delta.rows() {
        let dr = delta.row(s);
        let hr = h.row(s);
        for i in 0..n_out {
            let d = dr[i];
            let wr = dw.row_mut(i);
            for j in 0..n_in {
                wr[j] += d * hr[j].conj();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn new_rejects_length_mismatch() {
        let err = ComplexTensor::new(vec![2, 3], vec![c(1.0, 0.0); 5]).unwrap_err();
        assert!(matches!(err, TensorError::LengthMismatch { expected: 6, actual: 5, .. }));
    }

    #[test]
    fn element_access_is_bounds_checked() {
        let t = ComplexTensor::matrix(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)])
            .unwrap();
        assert_eq!(t.get(&[1, 0]), Some(c(3.0, 0.0)));
        assert_eq!(t.get(&[2, 0]), None);
        assert_eq!(t.get(&[0, 2]), None);
        assert_eq!(t.get(&[0]), None);
    }

    #[test]
    fn affine_batch_matches_hand_product() {
        // 2 -> 1 layer, W = [1, i], b = 0, x = (1, 1)  =>  1 + i
        let w = ComplexTensor::matrix(1, 2, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let x = ComplexTensor::matrix(1, 2, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let out = affine_batch(&w, &[c(0.0, 0.0)], &x);
        assert_eq!(out.row(0)[0], c(1.0, 1.0));
    }

    #[test]
    fn backprop_linear_applies_hermitian_transpose() {
        let w = ComplexTensor::matrix(1, 2, vec![c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        let delta = ComplexTensor::matrix(1, 1, vec![c(1.0, 1.0)]).unwrap();
        let back = backprop_linear(&w, &delta);
        // conj(i) * (1+i) = -i + 1 = 1 - i ... conj(i)=-i, (-i)(1+i) = -i - i^2 = 1 - i
        assert_eq!(back.row(0)[0], c(1.0, -1.0));
        assert_eq!(back.row(0)[1], c(2.0, 2.0));
    }
}
