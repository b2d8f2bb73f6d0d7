//! Synthetic nonlinear channel-identification task.
//!
//! The channel input is `s_n = sqrt(1 - rho^2) X_n + i rho Y_n` with
//! standard Gaussian `X_n`, `Y_n`; `rho = sqrt(2)/2` gives a circular
//! source, `rho` near 0 or 1 a highly non-circular one. The source passes
//! through a length-5 linear filter, a memoryless quadratic nonlinearity
//! `r_n = t_n + (0.15 - 0.1 i) t_n^2`, and additive white Gaussian noise
//! calibrated to the requested SNR. The network sees an embedding of the
//! last `L` channel inputs and is trained to output the noisy channel
//! output.

use num_complex::Complex64;

use super::{DataError, RegressionDataset};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;

/// Channel generation settings; defaults follow the benchmark protocol.
#[derive(Debug, Clone, Copy)]
pub struct ChannelConfig {
    /// Circularity parameter, in (0, 1).
    pub rho: f64,
    /// Number of generated channel samples.
    pub samples: usize,
    /// Embedding length `L`.
    pub embedding: usize,
    /// Signal-to-noise ratio in dB; `f64::INFINITY` disables the noise.
    pub snr_db: f64,
    /// Fraction of samples withheld for testing (rounded to the nearest
    /// pair count).
    pub test_fraction: f64,
    pub seed: u64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            rho: std::f64::consts::FRAC_1_SQRT_2,
            samples: 2000,
            embedding: 5,
            snr_db: 13.0,
            test_fraction: 0.15,
            seed: 0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), DataError> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(DataError::BadConfig(format!(
                "channel rho must satisfy 0 < rho < 1, got {}",
                self.rho
            )));
        }
        if self.samples <= self.embedding {
            return Err(DataError::BadConfig(format!(
                "need more than {} samples, got {}",
                self.embedding, self.samples
            )));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(DataError::BadConfig(format!(
                "test fraction must lie in (0, 1), got {}",
                self.test_fraction
            )));
        }
        Ok(())
    }
}

/// I.i.d. channel source samples with `E[|s|^2] = 1` and pseudo-variance
/// `E[s^2] = 1 - 2 rho^2`.
pub fn channel_source(rng: &mut Rng, rho: f64, n: usize) -> Vec<Complex64> {
    let re_scale = (1.0 - rho * rho).sqrt();
    (0..n)
        .map(|_| Complex64::new(re_scale * rng.gaussian(), rho * rng.gaussian()))
        .collect()
}

/// The five filter taps
/// `h(k) = 0.432 (1 + cos(2 pi (k-3)/5) - i (1 + cos(2 pi (k-3)/10)))`.
pub fn filter_taps() -> [Complex64; 5] {
    let mut taps = [Complex64::new(0.0, 0.0); 5];
    for (k0, tap) in taps.iter_mut().enumerate() {
        let k = (k0 + 1) as f64;
        let two_pi = 2.0 * std::f64::consts::PI;
        *tap = 0.432
            * Complex64::new(
                1.0 + (two_pi * (k - 3.0) / 5.0).cos(),
                -(1.0 + (two_pi * (k - 3.0) / 10.0).cos()),
            );
    }
    taps
}

/// Linear channel filter `t_n = sum_{k=1..5} h(k) s_{n-k+1}`, evaluated with
/// zero padding before the series start. Dataset construction only uses the
/// transient-free part `n >= L`.
pub fn channel_filter(s: &[Complex64]) -> Vec<Complex64> {
    let taps = filter_taps();
    (0..s.len())
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k0, tap) in taps.iter().enumerate() {
                if n >= k0 {
                    acc += tap * s[n - k0];
                }
            }
            acc
        })
        .collect()
}

/// Memoryless quadratic nonlinearity `r_n = t_n + (0.15 - 0.1 i) t_n^2`.
pub fn channel_nonlinearity(t: &[Complex64]) -> Vec<Complex64> {
    let coefficient = Complex64::new(0.15, -0.1);
    t.iter().map(|&v| v + coefficient * v * v).collect()
}

/// Adds circular white Gaussian noise with variance
/// `mean(|r|^2) / 10^(snr_db/10)`, split equally between the components.
pub fn add_awgn(r: &[Complex64], snr_db: f64, rng: &mut Rng) -> Vec<Complex64> {
    if snr_db.is_infinite() {
        return r.to_vec();
    }
    let signal_power = r.iter().map(|v| v.norm_sqr()).sum::<f64>() / r.len() as f64;
    let noise_variance = signal_power / 10f64.powf(snr_db / 10.0);
    let component_std = (noise_variance / 2.0).sqrt();
    r.iter()
        .map(|&v| {
            v + Complex64::new(
                component_std * rng.gaussian(),
                component_std * rng.gaussian(),
            )
        })
        .collect()
}

/// Builds the channel dataset: embeddings `x_n = [s_{n-L+1}, ..., s_n]`
/// (oldest to newest) against targets `r~_n` for `n >= L`, with a uniformly
/// random test split of `round(test_fraction * samples)` pairs.
pub fn make_channel_dataset(cfg: &ChannelConfig) -> Result<RegressionDataset, DataError> {
    cfg.validate()?;
    let mut rng = Rng::with_seed(cfg.seed);
    let s = channel_source(&mut rng, cfg.rho, cfg.samples);
    let t = channel_filter(&s);
    let r = channel_nonlinearity(&t);
    let noisy = add_awgn(&r, cfg.snr_db, &mut rng);

    let l = cfg.embedding;
    let pairs = cfg.samples - l + 1;
    let mut data = Vec::with_capacity(pairs * l);
    let mut targets = Vec::with_capacity(pairs);
    for n in (l - 1)..cfg.samples {
        data.extend_from_slice(&s[n + 1 - l..=n]);
        targets.push(noisy[n]);
    }
    let inputs = ComplexTensor::matrix(pairs, l, data).expect("embedding shape");

    let requested = (cfg.test_fraction * cfg.samples as f64).round() as usize;
    let test_count = requested.clamp(1, pairs - 1);
    let mut order: Vec<usize> = (0..pairs).collect();
    rng.shuffle(&mut order);
    let test = order[..test_count].to_vec();
    let train = order[test_count..].to_vec();

    Ok(RegressionDataset {
        inputs,
        targets,
        train,
        validation: Vec::new(),
        test,
    })
}
