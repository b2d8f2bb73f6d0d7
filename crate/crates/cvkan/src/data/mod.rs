//! Benchmark datasets: synthetic channel identification, wind-series
//! prediction and DFT-feature digit classification.

pub mod channel;
pub mod mnist;
pub mod preprocess;
pub mod wind;

pub use channel::{make_channel_dataset, ChannelConfig};
pub use mnist::{mnist_fft_pipeline, CoefficientSelection};
pub use preprocess::MinMaxTransform;
pub use wind::{linear_benchmark_series, load_wind_csv, make_wind_dataset, synthetic_wind_series};

use num_complex::Complex64;
use thiserror::Error;

use crate::tensor::ComplexTensor;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv parse error at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("idx format error in {path}: {message}")]
    Idx { path: String, message: String },
    #[error("series too short: need more than {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("invalid dataset configuration: {0}")]
    BadConfig(String),
}

/// Complex regression samples with disjoint split index sets. Preprocessing
/// statistics are always fitted on the train split only.
#[derive(Debug, Clone)]
pub struct RegressionDataset {
    /// `samples x embedding` inputs.
    pub inputs: ComplexTensor,
    pub targets: Vec<Complex64>,
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

impl RegressionDataset {
    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rows and targets for a split index set.
    pub fn gather(&self, idx: &[usize]) -> (ComplexTensor, Vec<Complex64>) {
        let dim = self.inputs.cols();
        let mut data = Vec::with_capacity(idx.len() * dim);
        for &i in idx {
            data.extend_from_slice(self.inputs.row(i));
        }
        let inputs = ComplexTensor::matrix(idx.len(), dim, data).expect("gather shape");
        let targets = idx.iter().map(|&i| self.targets[i]).collect();
        (inputs, targets)
    }

    /// Replaces the inputs (preprocessing), keeping targets and splits.
    pub fn with_inputs(&self, inputs: ComplexTensor) -> Self {
        assert_eq!(inputs.shape(), self.inputs.shape());
        Self {
            inputs,
            targets: self.targets.clone(),
            train: self.train.clone(),
            validation: self.validation.clone(),
            test: self.test.clone(),
        }
    }

    /// Checks the split invariant: no index occurs in two splits.
    pub fn splits_disjoint(&self) -> bool {
        let mut seen = vec![false; self.len()];
        for idx in [&self.train, &self.validation, &self.test] {
            for &i in idx.iter() {
                if seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        true
    }
}

/// Complex classification samples (label per row) with train/test splits.
#[derive(Debug, Clone)]
pub struct ClassificationDataset {
    /// `samples x features` inputs.
    pub inputs: ComplexTensor,
    pub labels: Vec<u8>,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl ClassificationDataset {
    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn gather(&self, idx: &[usize]) -> (ComplexTensor, Vec<u8>) {
        let dim = self.inputs.cols();
        let mut data = Vec::with_capacity(idx.len() * dim);
        for &i in idx {
            data.extend_from_slice(self.inputs.row(i));
        }
        let inputs = ComplexTensor::matrix(idx.len(), dim, data).expect("gather shape");
        let labels = idx.iter().map(|&i| self.labels[i]).collect();
        (inputs, labels)
    }

    pub fn with_inputs(&self, inputs: ComplexTensor) -> Self {
        assert_eq!(inputs.shape(), self.inputs.shape());
        Self {
            inputs,
            labels: self.labels.clone(),
            train: self.train.clone(),
            test: self.test.clone(),
        }
    }
}

/// Doubles complex features into stacked real features
/// `[Re x_1..Re x_d, Im x_1..Im x_d]` (stored with zero imaginary parts) for
/// the real-valued 2R baseline.
pub fn stack_real_imag(inputs: &ComplexTensor) -> ComplexTensor {
    let rows = inputs.rows();
    let dim = inputs.cols();
    let mut data = Vec::with_capacity(rows * dim * 2);
    for s in 0..rows {
        let row = inputs.row(s);
        data.extend(row.iter().map(|z| Complex64::new(z.re, 0.0)));
        data.extend(row.iter().map(|z| Complex64::new(z.im, 0.0)));
    }
    ComplexTensor::matrix(rows, dim * 2, data).expect("stack shape")
}
