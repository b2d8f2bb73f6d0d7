//! Network assembly, forward propagation and CR-calculus backpropagation.
//!
//! A [`Network`] is a stack of layers `h_l = g(W_l h_{l-1} + b_l)` with
//! complex weights and an output head: plain regression on complex targets,
//! or classification through the magnitude softmax
//! `p_n = exp(|h_n|^2) / sum_t exp(|h_t|^2)`.
//!
//! Backpropagation maintains `delta_l = dJ/dh_l*` per layer:
//!
//! - head initialization: `(y_hat - y) / B` for regression,
//!   `(p_c - t_c) h_c / B` for the magnitude softmax;
//! - through an elementwise activation with pair `(d_z, d_zstar)`:
//!   `delta_pre = conj(delta) d_zstar + delta conj(d_z)`;
//! - through the linear map `s = W h + b`: `grad_W* = delta_s h^H`,
//!   `grad_b* = delta_s`, `delta_h = W^H delta_s`.
//!
//! `real_mode` restricts the same engine to a real-valued network (the 2R
//! baseline): weights and biases are initialized real, parameter gradients
//! are projected onto the real axis (as `2 Re{grad*}`, the true real
//! partial), the regression head pairs two real outputs into one complex
//! prediction, and the softmax head acts on the real parts.

use num_complex::Complex64;
use thiserror::Error;

use crate::activations::{self, ActivationError, ActivationGrads, ActivationSpec, LayerActivation};
use crate::rng::Rng;
use crate::tensor::{accumulate_outer, affine_batch, backprop_linear, ComplexTensor};

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error(transparent)]
    Activation(#[from] ActivationError),
    #[error("network must have at least one layer")]
    Empty,
    #[error("batch width {got} does not match input dimension {expected}")]
    BadInputWidth { expected: usize, got: usize },
    #[error("head expects output dimension {expected}, network produces {got}")]
    BadOutputWidth { expected: usize, got: usize },
    #[error("non-finite gradient encountered in layer {layer}")]
    NonFiniteGradient { layer: usize },
    #[error("target count {targets} does not match batch size {batch}")]
    BadTargetCount { targets: usize, batch: usize },
}

/// Output head of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Head {
    /// Complex regression; in `real_mode` the two real outputs are paired
    /// into one complex prediction.
    Regression,
    /// Cross-entropy classification through the magnitude softmax (standard
    /// softmax on the real parts in `real_mode`).
    SoftmaxClassification,
}

/// One dense layer: complex weights, complex bias, elementwise activation.
pub struct Layer {
    pub weights: ComplexTensor,
    pub bias: Vec<Complex64>,
    pub activation: Box<dyn LayerActivation>,
}

impl Clone for Layer {
    fn clone(&self) -> Self {
        Self {
            weights: self.weights.clone(),
            bias: self.bias.clone(),
            activation: self.activation.clone(),
        }
    }
}

impl Layer {
    pub fn output_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }
}

/// Batch targets for the two heads.
#[derive(Debug, Clone, Copy)]
pub enum Targets<'a> {
    Regression(&'a [Complex64]),
    Classes(&'a [u8]),
}

/// A feed-forward complex-valued network.
pub struct Network {
    pub layers: Vec<Layer>,
    pub head: Head,
    /// Real-valued restriction (2R baseline): real parameters, projected
    /// gradients, paired regression outputs.
    pub real_mode: bool,
    input_dim: usize,
}

impl Clone for Network {
    fn clone(&self) -> Self {
        Self {
            layers: self.layers.clone(),
            head: self.head,
            real_mode: self.real_mode,
            input_dim: self.input_dim,
        }
    }
}

/// Per-layer description used when building a network: width plus the
/// activation applied after the affine map.
#[derive(Debug, Clone)]
pub struct LayerSpec {
    pub width: usize,
    pub activation: ActivationSpec,
}

impl LayerSpec {
    pub fn new(width: usize, activation: ActivationSpec) -> Self {
        Self { width, activation }
    }
}

/// Forward cache: pre-activations and outputs per layer, for backprop.
pub struct ForwardCache {
    pub input: ComplexTensor,
    pub pre: Vec<ComplexTensor>,
    pub post: Vec<ComplexTensor>,
}

impl ForwardCache {
    /// Network output `y_hat = h_L` for the batch.
    pub fn output(&self) -> &ComplexTensor {
        self.post.last().expect("cache of a non-empty network")
    }
}

/// Conjugate cogradients for one layer (real gradients for real activation
/// parameters live inside `activation`).
pub struct LayerGrads {
    pub weights: ComplexTensor,
    pub bias: Vec<Complex64>,
    pub activation: ActivationGrads,
}

/// Gradients for every parameter of the network, shape-congruent with it.
pub struct GradientSet {
    pub layers: Vec<LayerGrads>,
}

impl Network {
    /// Builds a network with random initialization: complex weights have
    /// Rayleigh magnitude with scale `1/sqrt(2 fan_in)` and uniform phase
    /// (variance `1/fan_in` per weight); real mode draws real Gaussian
    /// weights with variance `1/fan_in`. Biases start at zero.
    pub fn build(
        input_dim: usize,
        layers: &[LayerSpec],
        head: Head,
        real_mode: bool,
        rng: &mut Rng,
    ) -> Result<Self, NetworkError> {
        if layers.is_empty() {
            return Err(NetworkError::Empty);
        }
        let mut built = Vec::with_capacity(layers.len());
        let mut fan_in = input_dim;
        for spec in layers {
            let mut weights = ComplexTensor::zeros(vec![spec.width, fan_in]);
            let scale = 1.0 / (2.0 * fan_in as f64).sqrt();
            for w in weights.data_mut() {
                *w = if real_mode {
                    Complex64::new(rng.gaussian() / (fan_in as f64).sqrt(), 0.0)
                } else {
                    rng.complex_rayleigh(scale)
                };
            }
            let bias = vec![Complex64::new(0.0, 0.0); spec.width];
            let activation = activations::build(&spec.activation, spec.width, rng)?;
            built.push(Layer {
                weights,
                bias,
                activation,
            });
            fan_in = spec.width;
        }
        Ok(Self {
            layers: built,
            head,
            real_mode,
            input_dim,
        })
    }

    /// Assembles a network from existing layers, validating the shape chain.
    pub fn from_parts(
        layers: Vec<Layer>,
        head: Head,
        real_mode: bool,
        input_dim: usize,
    ) -> Result<Self, NetworkError> {
        if layers.is_empty() {
            return Err(NetworkError::Empty);
        }
        let mut expected = input_dim;
        for layer in &layers {
            if layer.input_dim() != expected {
                return Err(NetworkError::BadInputWidth {
                    expected,
                    got: layer.input_dim(),
                });
            }
            expected = layer.output_dim();
        }
        Ok(Self {
            layers,
            head,
            real_mode,
            input_dim,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map(Layer::output_dim).unwrap_or(0)
    }

    /// Layer-by-layer forward pass, retaining the cache for backprop.
    pub fn forward(&self, x: &ComplexTensor) -> Result<ForwardCache, NetworkError> {
        if x.cols() != self.input_dim {
            return Err(NetworkError::BadInputWidth {
                expected: self.input_dim,
                got: x.cols(),
            });
        }
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post = Vec::with_capacity(self.layers.len());
        let mut h = x.clone();
        for layer in &self.layers {
            let s = affine_batch(&layer.weights, &layer.bias, &h);
            let out = layer.activation.apply_batch(&s)?;
            pre.push(s);
            h = out.clone();
            post.push(out);
        }
        Ok(ForwardCache {
            input: x.clone(),
            pre,
            post,
        })
    }

    /// Complex predictions for a regression network (pairs the two real
    /// outputs in real mode).
    pub fn predict_regression(&self, cache: &ForwardCache) -> Vec<Complex64> {
        let out = cache.output();
        if self.real_mode {
            (0..out.rows())
                .map(|s| Complex64::new(out.row(s)[0].re, out.row(s)[1].re))
                .collect()
        } else {
            (0..out.rows()).map(|s| out.row(s)[0]).collect()
        }
    }

    /// Class probabilities for a classification network.
    pub fn predict_proba(&self, cache: &ForwardCache) -> Vec<Vec<f64>> {
        let out = cache.output();
        (0..out.rows())
            .map(|s| {
                if self.real_mode {
                    real_softmax(out.row(s))
                } else {
                    magnitude_softmax(out.row(s))
                }
            })
            .collect()
    }

    /// Mean data loss of a batch (regularization is added by the optimizer).
    pub fn batch_loss(&self, cache: &ForwardCache, targets: Targets) -> Result<f64, NetworkError> {
        let out = cache.output();
        let batch = out.rows();
        match (self.head, targets) {
            (Head::Regression, Targets::Regression(ys)) => {
                check_targets(ys.len(), batch)?;
                let preds = self.predict_regression(cache);
                Ok(preds
                    .iter()
                    .zip(ys)
                    .map(|(p, y)| squared_loss(*y, *p))
                    .sum::<f64>()
                    / batch as f64)
            }
            (Head::SoftmaxClassification, Targets::Classes(labels)) => {
                check_targets(labels.len(), batch)?;
                let probs = self.predict_proba(cache);
                Ok(probs
                    .iter()
                    .zip(labels)
                    .map(|(p, &label)| cross_entropy(p, label as usize))
                    .sum::<f64>()
                    / batch as f64)
            }
            _ => panic!("targets do not match the network head"),
        }
    }

    /// Conjugate cogradients of the mean batch loss for every parameter.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        targets: Targets,
    ) -> Result<GradientSet, NetworkError> {
        let mut delta = self.head_delta(cache, targets)?;
        let mut grads: Vec<LayerGrads> = self
            .layers
            .iter()
            .map(|layer| LayerGrads {
                weights: ComplexTensor::zeros(vec![layer.output_dim(), layer.input_dim()]),
                bias: vec![Complex64::new(0.0, 0.0); layer.output_dim()],
                activation: ActivationGrads::zeros_like(layer.activation.as_ref()),
            })
            .collect();

        for l in (0..self.layers.len()).rev() {
            let layer = &self.layers[l];
            let pre = &cache.pre[l];
            let batch = pre.rows();
            let width = pre.cols();
            // Through the activation: delta at the pre-activation.
            let mut delta_pre = ComplexTensor::zeros(vec![batch, width]);
            for s in 0..batch {
                let pre_row = pre.row(s);
                let delta_row = delta.row(s);
                let out_row = delta_pre.row_mut(s);
                for n in 0..width {
                    let d = delta_row[n];
                    let pair =
                        layer
                            .activation
                            .backward(n, pre_row[n], d, &mut grads[l].activation)?;
                    out_row[n] = d.conj() * pair.d_zstar + d * pair.d_z.conj();
                }
            }
            // Through the linear map.
            let below = if l == 0 { &cache.input } else { &cache.post[l - 1] };
            accumulate_outer(&mut grads[l].weights, &delta_pre, below);
            for s in 0..batch {
                let dr = delta_pre.row(s);
                for n in 0..width {
                    grads[l].bias[n] += dr[n];
                }
            }
            if l > 0 {
                delta = backprop_linear(&layer.weights, &delta_pre);
            }
        }

        if self.real_mode {
            for lg in &mut grads {
                project_real(&mut lg.weights);
                for b in &mut lg.bias {
                    *b = Complex64::new(2.0 * b.re, 0.0);
                }
                for a in &mut lg.activation.complex {
                    *a = Complex64::new(2.0 * a.re, 0.0);
                }
            }
        }

        for (l, lg) in grads.iter().enumerate() {
            let finite = lg.weights.all_finite()
                && lg.bias.iter().all(|b| b.re.is_finite() && b.im.is_finite())
                && lg.activation.is_finite();
            if !finite {
                return Err(NetworkError::NonFiniteGradient { layer: l });
            }
        }
        Ok(GradientSet { layers: grads })
    }

    /// Initial delta `dJ/dh_L*` per head, scaled by `1/batch`.
    fn head_delta(
        &self,
        cache: &ForwardCache,
        targets: Targets,
    ) -> Result<ComplexTensor, NetworkError> {
        let out = cache.output();
        let batch = out.rows();
        let width = out.cols();
        let scale = 1.0 / batch as f64;
        let mut delta = ComplexTensor::zeros(vec![batch, width]);
        match (self.head, targets) {
            (Head::Regression, Targets::Regression(ys)) => {
                check_targets(ys.len(), batch)?;
                if self.real_mode {
                    if width != 2 {
                        return Err(NetworkError::BadOutputWidth { expected: 2, got: width });
                    }
                    for s in 0..batch {
                        let y_hat = Complex64::new(out.row(s)[0].re, out.row(s)[1].re);
                        let e = (y_hat - ys[s]) * scale;
                        delta.row_mut(s)[0] = e;
                        delta.row_mut(s)[1] = -Complex64::new(0.0, 1.0) * e;
                    }
                } else {
                    if width != 1 {
                        return Err(NetworkError::BadOutputWidth { expected: 1, got: width });
                    }
                    for s in 0..batch {
                        delta.row_mut(s)[0] = (out.row(s)[0] - ys[s]) * scale;
                    }
                }
            }
            (Head::SoftmaxClassification, Targets::Classes(labels)) => {
                check_targets(labels.len(), batch)?;
                for s in 0..batch {
                    let row = out.row(s);
                    let label = labels[s] as usize;
                    if self.real_mode {
                        let p = real_softmax(row);
                        for (ci, d) in delta.row_mut(s).iter_mut().enumerate() {
                            let t = if ci == label { 1.0 } else { 0.0 };
                            *d = Complex64::new(0.5 * (p[ci] - t) * scale, 0.0);
                        }
                    } else {
                        let p = magnitude_softmax(row);
                        for (ci, d) in delta.row_mut(s).iter_mut().enumerate() {
                            let t = if ci == label { 1.0 } else { 0.0 };
                            *d = (p[ci] - t) * row[ci] * scale;
                        }
                    }
                }
            }
            _ => panic!("targets do not match the network head"),
        }
        Ok(delta)
    }
}

fn check_targets(targets: usize, batch: usize) -> Result<(), NetworkError> {
    if targets != batch {
        return Err(NetworkError::BadTargetCount { targets, batch });
    }
    Ok(())
}

/// Projects a complex cogradient tensor onto real gradients, `2 Re{g}`.
fn project_real(t: &mut ComplexTensor) {
    for g in t.data_mut() {
        *g = Complex64::new(2.0 * g.re, 0.0);
    }
}

/// Squared complex error `|y - y_hat|^2`.
pub fn squared_loss(y: Complex64, y_hat: Complex64) -> f64 {
    (y - y_hat).norm_sqr()
}

/// Magnitude softmax over complex activations:
/// `p_n = exp(|h_n|^2) / sum_t exp(|h_t|^2)`, computed with max-subtraction.
pub fn magnitude_softmax(h: &[Complex64]) -> Vec<f64> {
    let m: Vec<f64> = h.iter().map(|z| z.norm_sqr()).collect();
    softmax_of(&m)
}

/// Standard softmax on the real parts, for real-mode classification.
pub fn real_softmax(h: &[Complex64]) -> Vec<f64> {
    let m: Vec<f64> = h.iter().map(|z| z.re).collect();
    softmax_of(&m)
}

fn softmax_of(m: &[f64]) -> Vec<f64> {
    let max = m.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = m.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

/// Probabilities below this are clamped before the log.
pub const CROSS_ENTROPY_CLAMP: f64 = 1e-12;

/// Cross-entropy `-log p_label` with the probability clamped at `1e-12`.
pub fn cross_entropy(p: &[f64], label: usize) -> f64 {
    -p[label].max(CROSS_ENTROPY_CLAMP).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{assert_cplx_close, assert_f64_close};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity_spec() -> ActivationSpec {
        ActivationSpec::named("identity")
    }

    fn single_layer(
        weights: Vec<Complex64>,
        rows: usize,
        cols: usize,
        bias: Vec<Complex64>,
    ) -> Network {
        let mut rng = Rng::with_seed(0);
        let mut net = Network::build(
            cols,
            &[LayerSpec::new(rows, identity_spec())],
            Head::Regression,
            false,
            &mut rng,
        )
        .unwrap();
        net.layers[0].weights = ComplexTensor::matrix(rows, cols, weights).unwrap();
        net.layers[0].bias = bias;
        net
    }

    #[test]
    fn forward_identity_network_passes_input_through() {
        let net = single_layer(
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            2,
            2,
            vec![c(0.0, 0.0); 2],
        );
        let x = ComplexTensor::matrix(3, 2, vec![c(1.0, 2.0); 6]).unwrap();
        let cache = net.forward(&x).unwrap();
        assert_eq!(cache.output().data(), x.data());
    }

    #[test]
    fn forward_zero_weights_yield_activated_bias() {
        let net = single_layer(vec![c(0.0, 0.0), c(0.0, 0.0)], 1, 2, vec![c(0.4, -0.2)]);
        let x = ComplexTensor::matrix(4, 2, vec![c(3.0, 1.0); 8]).unwrap();
        let cache = net.forward(&x).unwrap();
        for s in 0..4 {
            assert_cplx_close(cache.output().row(s)[0], c(0.4, -0.2), 1e-15);
        }
    }

    #[test]
    fn forward_hand_product() {
        let net = single_layer(vec![c(1.0, 0.0), c(0.0, 1.0)], 1, 2, vec![c(0.0, 0.0)]);
        let x = ComplexTensor::matrix(1, 2, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let cache = net.forward(&x).unwrap();
        assert_cplx_close(cache.output().row(0)[0], c(1.0, 1.0), 1e-15);
    }

    #[test]
    fn squared_loss_values() {
        assert_f64_close(squared_loss(c(0.7, -0.3), c(0.7, -0.3)), 0.0, 1e-15);
        assert_f64_close(squared_loss(c(1.0, 1.0), c(0.0, 0.0)), 2.0, 1e-15);
        assert_f64_close(squared_loss(c(3.0, 0.0), c(0.0, 1.0)), 10.0, 1e-15);
    }

    #[test]
    fn magnitude_softmax_values() {
        let p = magnitude_softmax(&[c(0.6, 0.8), c(0.0, 1.0), c(-1.0, 0.0)]);
        for v in &p {
            assert_f64_close(*v, 1.0 / 3.0, 1e-12);
        }
        let p = magnitude_softmax(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let e = std::f64::consts::E;
        assert_f64_close(p[0], e / (e + 1.0), 1e-12);
        assert_f64_close(p[1], 1.0 / (e + 1.0), 1e-12);
    }

    #[test]
    fn magnitude_softmax_is_phase_invariant_and_normalized() {
        let mut rng = Rng::with_seed(3);
        for _ in 0..10_000 {
            let n = 2 + rng.index(9);
            let h: Vec<Complex64> = (0..n)
                .map(|_| {
                    let magnitude = rng.uniform_in(0.0, 30.0);
                    let phase = rng.uniform_in(-3.14, 3.14);
                    Complex64::from_polar(magnitude, phase)
                })
                .collect();
            let p = magnitude_softmax(&h);
            let sum: f64 = p.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");
            // Entries stay nonnegative even when distant magnitudes
            // underflow after max-subtraction.
            assert!(p.iter().all(|&v| v >= 0.0));
            // At moderate magnitudes every entry is strictly positive.
            let moderate: Vec<Complex64> = h.iter().map(|z| z / 15.0).collect();
            assert!(magnitude_softmax(&moderate).iter().all(|&v| v > 0.0));
            // Per-entry phase rotation leaves probabilities unchanged.
            let theta = rng.uniform_in(-3.0, 3.0);
            let rotated: Vec<Complex64> = h
                .iter()
                .map(|z| z * Complex64::from_polar(1.0, theta))
                .collect();
            let pr = magnitude_softmax(&rotated);
            for (a, b) in p.iter().zip(&pr) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn cross_entropy_values() {
        assert_f64_close(cross_entropy(&[1.0, 0.0], 0), 0.0, 1e-15);
        let uniform = vec![0.1; 10];
        assert_f64_close(cross_entropy(&uniform, 3), 10f64.ln(), 1e-12);
        assert_f64_close(cross_entropy(&[0.0, 1.0], 0), -(1e-12f64).ln(), 1e-9);
    }

    #[test]
    fn backward_zero_error_regression_gives_zero_gradients() {
        let net = single_layer(vec![c(0.5, 0.5)], 1, 1, vec![c(0.0, 0.0)]);
        let x = ComplexTensor::matrix(2, 1, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let cache = net.forward(&x).unwrap();
        let ys = net.predict_regression(&cache);
        let grads = net.backward(&cache, Targets::Regression(&ys)).unwrap();
        assert!(grads.layers[0].weights.norm_sqr_sum() < 1e-30);
        assert!(grads.layers[0].bias[0].norm() < 1e-15);
    }

    #[test]
    fn backward_single_linear_neuron_hand_case() {
        // y_hat = w x with w = 1, x = 1, y = 0: grad_w* = (y_hat - y) conj(x) = 1.
        let net = single_layer(vec![c(1.0, 0.0)], 1, 1, vec![c(0.0, 0.0)]);
        let x = ComplexTensor::matrix(1, 1, vec![c(1.0, 0.0)]).unwrap();
        let cache = net.forward(&x).unwrap();
        let grads = net
            .backward(&cache, Targets::Regression(&[c(0.0, 0.0)]))
            .unwrap();
        assert_cplx_close(grads.layers[0].weights.data()[0], c(1.0, 0.0), 1e-15);
        assert_cplx_close(grads.layers[0].bias[0], c(1.0, 0.0), 1e-15);
    }

    #[test]
    fn forward_is_deterministic() {
        let mut rng = Rng::with_seed(5);
        let net = Network::build(
            3,
            &[
                LayerSpec::new(4, ActivationSpec::named("split_tanh")),
                LayerSpec::new(1, identity_spec()),
            ],
            Head::Regression,
            false,
            &mut rng,
        )
        .unwrap();
        let mut data = Vec::new();
        for _ in 0..6 {
            data.push(c(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0)));
        }
        let x = ComplexTensor::matrix(2, 3, data).unwrap();
        let a = net.forward(&x).unwrap();
        let b = net.forward(&x).unwrap();
        for (za, zb) in a.output().data().iter().zip(b.output().data()) {
            assert_eq!(za.re.to_bits(), zb.re.to_bits());
            assert_eq!(za.im.to_bits(), zb.im.to_bits());
        }
    }

    #[test]
    fn real_mode_keeps_everything_real() {
        let mut rng = Rng::with_seed(7);
        let net = Network::build(
            4,
            &[
                LayerSpec::new(5, ActivationSpec::named("real_tanh")),
                LayerSpec::new(2, identity_spec()),
            ],
            Head::Regression,
            true,
            &mut rng,
        )
        .unwrap();
        for layer in &net.layers {
            assert!(layer.weights.data().iter().all(|w| w.im == 0.0));
        }
        let x = ComplexTensor::matrix(3, 4, vec![c(0.5, 0.0); 12]).unwrap();
        let cache = net.forward(&x).unwrap();
        assert!(cache.output().data().iter().all(|z| z.im == 0.0));
        let ys = vec![c(0.3, -0.1); 3];
        let grads = net.backward(&cache, Targets::Regression(&ys)).unwrap();
        for lg in &grads.layers {
            assert!(lg.weights.data().iter().all(|g| g.im == 0.0));
            assert!(lg.bias.iter().all(|g| g.im == 0.0));
        }
    }
}
