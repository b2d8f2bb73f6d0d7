//! Evaluation metrics and the per-run metrics record.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("cannot aggregate an empty error list")]
    Empty,
    #[error("coefficient of determination is undefined for a constant target")]
    DegenerateTarget,
    #[error("series must have equal lengths of at least 2, got {y} and {y_hat}")]
    BadLengths { y: usize, y_hat: usize },
}

/// Mean squared error in decibels: `10 log10(mean of squared errors)`.
pub fn mse_db(squared_errors: &[f64]) -> Result<f64, MetricsError> {
    if squared_errors.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mean = squared_errors.iter().sum::<f64>() / squared_errors.len() as f64;
    Ok(10.0 * mean.log10())
}

/// Coefficient of determination for complex series:
/// `1 - sum |y - y_hat|^2 / sum |y - mean(y)|^2`.
pub fn r_squared(y: &[Complex64], y_hat: &[Complex64]) -> Result<f64, MetricsError> {
    if y.len() != y_hat.len() || y.len() < 2 {
        return Err(MetricsError::BadLengths {
            y: y.len(),
            y_hat: y_hat.len(),
        });
    }
    let mean = y.iter().sum::<Complex64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).norm_sqr()).sum();
    if ss_tot <= 0.0 {
        return Err(MetricsError::DegenerateTarget);
    }
    let ss_res: f64 = y.iter().zip(y_hat).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Fraction of predictions whose argmax matches the label.
pub fn accuracy(probabilities: &[Vec<f64>], labels: &[u8]) -> f64 {
    assert_eq!(probabilities.len(), labels.len());
    let correct = probabilities
        .iter()
        .zip(labels)
        .filter(|(p, &label)| argmax(p) == label as usize)
        .count();
    correct as f64 / labels.len() as f64
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = k;
        }
    }
    best
}

/// Metrics emitted by one experiment repetition.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MetricsRecord {
    pub mse_db: Option<f64>,
    pub r2: Option<f64>,
    pub accuracy: Option<f64>,
    /// Regularized batch loss per iteration, `(iteration, loss)`.
    pub loss_curve: Vec<(u64, f64)>,
}

impl MetricsRecord {
    pub fn is_finite(&self) -> bool {
        self.mse_db.map_or(true, f64::is_finite)
            && self.r2.map_or(true, f64::is_finite)
            && self.accuracy.map_or(true, |a| (0.0..=1.0).contains(&a))
            && self.loss_curve.iter().all(|(_, l)| l.is_finite())
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
    fn mse_db_values() {
        assert_f64_close(mse_db(&[1.0, 1.0, 1.0]).unwrap(), 0.0, 1e-12);
        assert_f64_close(mse_db(&[0.01, 0.01]).unwrap(), -20.0, 1e-12);
        assert_f64_close(mse_db(&[2.0]).unwrap(), 10.0 * 2f64.log10(), 1e-12);
        assert_eq!(mse_db(&[]), Err(MetricsError::Empty));
    }

    #[test]
    fn r_squared_values() {
        let y = [c(0.3, 0.5), c(-1.0, 0.2), c(0.8, -0.4)];
        assert_f64_close(r_squared(&y, &y).unwrap(), 1.0, 1e-15);
        let mean = y.iter().sum::<Complex64>() / 3.0;
        let mean_pred = [mean, mean, mean];
        assert_f64_close(r_squared(&y, &mean_pred).unwrap(), 0.0, 1e-15);
        // y = (0, 2), y_hat = (1, 1): 1 - 2/2 = 0 with mean 1.
        let y = [c(0.0, 0.0), c(2.0, 0.0)];
        let y_hat = [c(1.0, 0.0), c(1.0, 0.0)];
        assert_f64_close(r_squared(&y, &y_hat).unwrap(), 0.0, 1e-15);
        assert_eq!(
            r_squared(&[c(1.0, 1.0), c(1.0, 1.0)], &y_hat),
            Err(MetricsError::DegenerateTarget)
        );
    }

    #[test]
    fn accuracy_counts_argmax_matches() {
        let probs = vec![vec![0.7, 0.3], vec![0.2, 0.8], vec![0.9, 0.1]];
        assert_f64_close(accuracy(&probs, &[0, 1, 1]), 2.0 / 3.0, 1e-15);
    }
}
