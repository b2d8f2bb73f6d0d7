//! Complex Adagrad, squared-magnitude regularization and the training loop.
//!
//! Adagrad keeps one nonnegative accumulator per parameter (a single real
//! accumulator per complex parameter, fed by `|g|^2`) and updates
//! `w <- w - lr * g / (sqrt(G) + eps)`, where `g` is the conjugate
//! cogradient for complex parameters and the real gradient for real ones.
//!
//! The regularizer penalizes the squared magnitude of all weights and
//! trainable activation coefficients; bias vectors and the modReLU radius
//! are exempt. It enters the gradients analytically (`lambda * w` for
//! complex parameters, `2 lambda * p` for real ones) and the reported loss
//! curves include it.

use num_complex::Complex64;
use thiserror::Error;

use crate::network::{GradientSet, Network, NetworkError, Targets};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("non-finite loss at iteration {iteration}")]
    NonFiniteLoss { iteration: u64 },
    #[error("non-finite parameter update in layer {layer}")]
    NonFiniteUpdate { layer: usize },
    #[error("dataset is empty")]
    EmptyDataset,
}

/// Per-parameter squared-gradient accumulators, congruent with a network.
pub struct AdagradState {
    pub lr: f64,
    pub epsilon: f64,
    layers: Vec<LayerAccum>,
}

struct LayerAccum {
    weights: Vec<f64>,
    bias: Vec<f64>,
    act_real: Vec<f64>,
    act_complex: Vec<f64>,
}

impl AdagradState {
    pub fn new(net: &Network, lr: f64, epsilon: f64) -> Self {
        let layers = net
            .layers
            .iter()
            .map(|layer| LayerAccum {
                weights: vec![0.0; layer.weights.len()],
                bias: vec![0.0; layer.bias.len()],
                act_real: vec![0.0; layer.activation.real_params().len()],
                act_complex: vec![0.0; layer.activation.complex_params().len()],
            })
            .collect();
        Self { lr, epsilon, layers }
    }

    /// Accumulator snapshot for one layer's weights (testing/introspection).
    pub fn weight_accumulators(&self, layer: usize) -> &[f64] {
        &self.layers[layer].weights
    }

    /// One Adagrad step over every parameter of the network.
    pub fn step(&mut self, net: &mut Network, grads: &GradientSet) -> Result<(), TrainError> {
        let lr = self.lr;
        let eps = self.epsilon;
        for (l, (layer, lg)) in net.layers.iter_mut().zip(&grads.layers).enumerate() {
            let acc = &mut self.layers[l];
            // Zero gradients leave both parameter and accumulator untouched.
            for (k, w) in layer.weights.data_mut().iter_mut().enumerate() {
                let g = lg.weights.data()[k];
                if g.norm_sqr() == 0.0 {
                    continue;
                }
                acc.weights[k] += g.norm_sqr();
                *w -= lr * g / (acc.weights[k].sqrt() + eps);
            }
            for (k, b) in layer.bias.iter_mut().enumerate() {
                let g = lg.bias[k];
                if g.norm_sqr() == 0.0 {
                    continue;
                }
                acc.bias[k] += g.norm_sqr();
                *b -= lr * g / (acc.bias[k].sqrt() + eps);
            }
            for (k, p) in layer
                .activation
                .real_params_mut()
                .iter_mut()
                .enumerate()
            {
                let g = lg.activation.real[k];
                if g == 0.0 {
                    continue;
                }
                acc.act_real[k] += g * g;
                *p -= lr * g / (acc.act_real[k].sqrt() + eps);
            }
            for (k, a) in layer
                .activation
                .complex_params_mut()
                .iter_mut()
                .enumerate()
            {
                let g = lg.activation.complex[k];
                if g.norm_sqr() == 0.0 {
                    continue;
                }
                acc.act_complex[k] += g.norm_sqr();
                *a -= lr * g / (acc.act_complex[k].sqrt() + eps);
            }
            layer.activation.after_update();

            let finite = layer.weights.all_finite()
                && layer.bias.iter().all(|b| b.re.is_finite() && b.im.is_finite())
                && layer.activation.real_params().iter().all(|p| p.is_finite())
                && layer
                    .activation
                    .complex_params()
                    .iter()
                    .all(|a| a.re.is_finite() && a.im.is_finite());
            if !finite {
                return Err(TrainError::NonFiniteUpdate { layer: l });
            }
        }
        Ok(())
    }
}

/// Squared-magnitude penalty over the non-exempt parameters: weights always,
/// activation coefficients unless the kind is exempt (modReLU); biases never.
pub fn penalty(net: &Network) -> f64 {
    let mut sum = 0.0;
    for layer in &net.layers {
        sum += layer.weights.norm_sqr_sum();
        if layer.activation.params_regularized() {
            sum += layer
                .activation
                .real_params()
                .iter()
                .map(|p| p * p)
                .sum::<f64>();
            sum += layer
                .activation
                .complex_params()
                .iter()
                .map(|a| a.norm_sqr())
                .sum::<f64>();
        }
    }
    sum
}

/// Batch loss plus `lambda` times the squared-magnitude penalty.
pub fn regularized_loss(net: &Network, batch_loss: f64, lambda: f64) -> f64 {
    batch_loss + lambda * penalty(net)
}

/// Adds the analytic regularizer gradients: `lambda w` to complex
/// cogradients, `2 lambda p` to real gradients. In real mode the weights are
/// real parameters, so they receive the real-gradient form too.
pub fn add_regularizer_grads(net: &Network, grads: &mut GradientSet, lambda: f64) {
    if lambda == 0.0 {
        return;
    }
    let weight_scale = if net.real_mode { 2.0 * lambda } else { lambda };
    for (layer, lg) in net.layers.iter().zip(&mut grads.layers) {
        for (g, w) in lg.weights.data_mut().iter_mut().zip(layer.weights.data()) {
            *g += weight_scale * w;
        }
        if layer.activation.params_regularized() {
            for (g, p) in lg
                .activation
                .real
                .iter_mut()
                .zip(layer.activation.real_params())
            {
                *g += 2.0 * lambda * p;
            }
            for (g, a) in lg
                .activation
                .complex
                .iter_mut()
                .zip(layer.activation.complex_params())
            {
                *g += lambda * a;
            }
        }
    }
}

/// Draws `size` indices uniformly with replacement; a fresh draw every
/// iteration, deterministic under the seed.
pub fn sample_minibatch(rng: &mut Rng, dataset_len: usize, size: usize) -> Vec<usize> {
    (0..size).map(|_| rng.index(dataset_len)).collect()
}

/// Training-loop settings. Defaults follow the benchmark protocol:
/// `lr = 0.01`, `epsilon = 1e-8`, mini-batches of 40.
#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub iterations: u64,
    pub lr: f64,
    pub epsilon: f64,
    pub batch_size: usize,
    pub lambda: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            lr: 0.01,
            epsilon: 1e-8,
            batch_size: 40,
            lambda: 1e-4,
        }
    }
}

/// Training data: inputs as a `samples x dim` matrix plus targets for the
/// network head.
pub struct TrainData<'a> {
    pub inputs: &'a ComplexTensor,
    pub targets: Targets<'a>,
}

impl<'a> TrainData<'a> {
    fn len(&self) -> usize {
        self.inputs.rows()
    }

    fn gather(&self, idx: &[usize]) -> (ComplexTensor, OwnedTargets) {
        let dim = self.inputs.cols();
        let mut data = Vec::with_capacity(idx.len() * dim);
        for &i in idx {
            data.extend_from_slice(self.inputs.row(i));
        }
        let x = ComplexTensor::matrix(idx.len(), dim, data).expect("gather shape");
        let targets = match self.targets {
            Targets::Regression(ys) => OwnedTargets::Regression(idx.iter().map(|&i| ys[i]).collect()),
            Targets::Classes(ls) => OwnedTargets::Classes(idx.iter().map(|&i| ls[i]).collect()),
        };
        (x, targets)
    }
}

enum OwnedTargets {
    Regression(Vec<Complex64>),
    Classes(Vec<u8>),
}

impl OwnedTargets {
    fn as_targets(&self) -> Targets<'_> {
        match self {
            OwnedTargets::Regression(v) => Targets::Regression(v),
            OwnedTargets::Classes(v) => Targets::Classes(v),
        }
    }
}

/// Runs the forward/backward/Adagrad loop for `cfg.iterations` iterations on
/// random mini-batches, recording the regularized batch loss of every
/// iteration. Aborts with a diagnostic if the loss turns non-finite.
pub fn train(
    net: &mut Network,
    data: &TrainData,
    cfg: &TrainConfig,
    rng: &mut Rng,
) -> Result<Vec<(u64, f64)>, TrainError> {
    if data.len() == 0 {
        return Err(TrainError::EmptyDataset);
    }
    let mut optimizer = AdagradState::new(net, cfg.lr, cfg.epsilon);
    let mut curve = Vec::with_capacity(cfg.iterations as usize);
    for t in 0..cfg.iterations {
        let idx = sample_minibatch(rng, data.len(), cfg.batch_size);
        let (x, targets) = data.gather(&idx);
        let cache = net.forward(&x)?;
        let batch_loss = net.batch_loss(&cache, targets.as_targets())?;
        let loss = regularized_loss(net, batch_loss, cfg.lambda);
        if !loss.is_finite() {
            return Err(TrainError::NonFiniteLoss { iteration: t });
        }
        curve.push((t, loss));
        let mut grads = net.backward(&cache, targets.as_targets())?;
        add_regularizer_grads(net, &mut grads, cfg.lambda);
        optimizer.step(net, &grads)?;
    }
    Ok(curve)
}
