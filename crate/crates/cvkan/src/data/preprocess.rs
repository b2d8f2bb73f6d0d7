//! Linear input preprocessing into the `[-1, +1]` range.
//!
//! Each input coordinate gets two affine maps, one for the real and one for
//! the imaginary component, fitted on the train split only (min to -1, max
//! to +1) and applied unchanged — without clipping — to every split.
//! Constant coordinates map to 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::tensor::ComplexTensor;

/// `x' = scale * x + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub scale: f64,
    pub offset: f64,
}

impl AffineMap {
    fn from_range(min: f64, max: f64) -> Self {
        if max > min {
            let scale = 2.0 / (max - min);
            Self {
                scale,
                offset: -1.0 - scale * min,
            }
        } else {
            // Constant coordinate: collapse to 0.
            Self {
                scale: 0.0,
                offset: 0.0,
            }
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.offset
    }
}

/// Per-coordinate component maps fitted on the train split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxTransform {
    pub re: Vec<AffineMap>,
    pub im: Vec<AffineMap>,
}

impl MinMaxTransform {
    /// Fits the maps on the given rows (the train split) of `inputs`.
    pub fn fit(inputs: &ComplexTensor, rows: &[usize]) -> Self {
        let dim = inputs.cols();
        let mut re = Vec::with_capacity(dim);
        let mut im = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut re_min = f64::INFINITY;
            let mut re_max = f64::NEG_INFINITY;
            let mut im_min = f64::INFINITY;
            let mut im_max = f64::NEG_INFINITY;
            for &s in rows {
                let z = inputs.row(s)[j];
                re_min = re_min.min(z.re);
                re_max = re_max.max(z.re);
                im_min = im_min.min(z.im);
                im_max = im_max.max(z.im);
            }
            re.push(AffineMap::from_range(re_min, re_max));
            im.push(AffineMap::from_range(im_min, im_max));
        }
        Self { re, im }
    }

    /// Applies the fitted maps to a whole input matrix.
    pub fn apply(&self, inputs: &ComplexTensor) -> ComplexTensor {
        let mut out = inputs.clone();
        let dim = inputs.cols();
        for s in 0..inputs.rows() {
            let row = out.row_mut(s);
            for (j, z) in row.iter_mut().enumerate().take(dim) {
                *z = Complex64::new(self.re[j].apply(z.re), self.im[j].apply(z.im));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::assert_f64_close;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn affine_endpoints() {
        let inputs = ComplexTensor::matrix(
            3,
            1,
            vec![c(0.0, -1.0), c(10.0, 1.0), c(5.0, 0.0)],
        )
        .unwrap();
        let t = MinMaxTransform::fit(&inputs, &[0, 1, 2]);
        assert_f64_close(t.re[0].apply(0.0), -1.0, 1e-15);
        assert_f64_close(t.re[0].apply(10.0), 1.0, 1e-15);
        assert_f64_close(t.re[0].apply(5.0), 0.0, 1e-15);
        // Values outside the fitted range extend without clipping.
        assert_f64_close(t.re[0].apply(20.0), 3.0, 1e-15);
    }

    #[test]
    fn constant_coordinate_maps_to_zero() {
        let inputs = ComplexTensor::matrix(2, 1, vec![c(4.0, 7.0), c(4.0, 9.0)]).unwrap();
        let t = MinMaxTransform::fit(&inputs, &[0, 1]);
        let out = t.apply(&inputs);
        assert_f64_close(out.row(0)[0].re, 0.0, 1e-15);
        assert_f64_close(out.row(1)[0].re, 0.0, 1e-15);
        // The imaginary component still spans [-1, 1].
        assert_f64_close(out.row(0)[0].im, -1.0, 1e-15);
        assert_f64_close(out.row(1)[0].im, 1.0, 1e-15);
    }

    #[test]
    fn fit_ignores_rows_outside_the_train_split() {
        let inputs = ComplexTensor::matrix(
            4,
            1,
            vec![c(0.0, 0.0), c(1.0, 1.0), c(100.0, -50.0), c(-3.0, 2.0)],
        )
        .unwrap();
        let trained = MinMaxTransform::fit(&inputs, &[0, 1]);
        // Permuting the non-train rows leaves the transform unchanged.
        let permuted = ComplexTensor::matrix(
            4,
            1,
            vec![c(0.0, 0.0), c(1.0, 1.0), c(-3.0, 2.0), c(100.0, -50.0)],
        )
        .unwrap();
        let refitted = MinMaxTransform::fit(&permuted, &[0, 1]);
        assert_eq!(trained, refitted);
    }
}
