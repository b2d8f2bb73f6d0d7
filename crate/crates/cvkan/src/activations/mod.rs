//! Complex activation functions behind a common trait.
//!
//! Every activation variant — fixed (split, phase-amplitude, holomorphic,
//! ReLU-family) and trainable (modReLU, split KAF, fully complex KAF) —
//! implements [`LayerActivation`] and is constructed by name through
//! [`build`]. A layer owns one boxed activation; the trainable kinds carry
//! their per-neuron coefficients and expose them to the optimizer as flat
//! parameter slices.
//!
//! Backpropagation works on Wirtinger pairs: for an elementwise activation
//! with pair `(d_z, d_zstar)` and upstream delta `δ = ∂J/∂(output*)`, the
//! delta at the pre-activation is `conj(δ) d_zstar + δ conj(d_z)`. Real
//! parameters `p` feeding a complex output `o` receive the gradient
//! `2 Re{conj(δ) ∂o/∂p}`, complex coefficients receive the conjugate
//! cogradient `δ conj(∂o/∂α)`.

mod kaf;
mod scalar;

pub use kaf::{complex_kaf_forward, split_kaf_forward, ComplexKaf, SplitKaf};
pub use scalar::{
    amp, cardioid, complex_tanh, crelu, modrelu, pa_tanh, split_apply, ModRelu,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::{KernelError, KernelKind};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;
use crate::wirtinger::WirtingerPair;

#[derive(Debug, Error, PartialEq)]
pub enum ActivationError {
    #[error("input {z} is within {distance:.2e} of a complex-tanh singularity")]
    NearSingularity { z: Complex64, distance: f64 },
    #[error("unknown activation '{0}'")]
    UnknownActivation(String),
    #[error("activation '{name}' does not support kernel '{kernel}'")]
    UnsupportedKernel { name: &'static str, kernel: &'static str },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Gradient sink for the trainable parameters of one layer's activation,
/// congruent with `real_params` / `complex_params` of the activation.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationGrads {
    pub real: Vec<f64>,
    pub complex: Vec<Complex64>,
}

impl ActivationGrads {
    pub fn zeros_like(act: &dyn LayerActivation) -> Self {
        Self {
            real: vec![0.0; act.real_params().len()],
            complex: vec![Complex64::new(0.0, 0.0); act.complex_params().len()],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.real.iter().all(|g| g.is_finite())
            && self.complex.iter().all(|g| g.re.is_finite() && g.im.is_finite())
    }
}

/// An elementwise complex activation applied across one layer.
///
/// `neuron` selects the per-neuron coefficients of the trainable kinds;
/// fixed activations ignore it.
pub trait LayerActivation: Send + Sync {
    /// Registry name, e.g. `"split_tanh"`.
    fn name(&self) -> &'static str;

    /// Forward value at one neuron.
    fn value(&self, neuron: usize, z: Complex64) -> Result<Complex64, ActivationError>;

    /// Wirtinger pair of the activation with respect to its input.
    fn wirtinger(&self, neuron: usize, z: Complex64) -> Result<WirtingerPair, ActivationError>;

    /// Batch forward over a `samples x neurons` matrix of pre-activations.
    fn apply_batch(&self, pre: &ComplexTensor) -> Result<ComplexTensor, ActivationError> {
        let mut out = ComplexTensor::zeros(pre.shape().to_vec());
        let width = pre.cols();
        for s in 0..pre.rows() {
            for n in 0..width {
                out.row_mut(s)[n] = self.value(n, pre.row(s)[n])?;
            }
        }
        Ok(out)
    }

    /// Backward step at one neuron: accumulates parameter gradients for the
    /// upstream delta and returns the input pair. Trainable kinds override
    /// this with a fused path that shares kernel evaluations.
    fn backward(
        &self,
        neuron: usize,
        z: Complex64,
        delta: Complex64,
        grads: &mut ActivationGrads,
    ) -> Result<WirtingerPair, ActivationError> {
        self.accumulate_param_grads(neuron, z, delta, grads)?;
        self.wirtinger(neuron, z)
    }

    /// Parameter-gradient increments for upstream delta `∂J/∂(output*)`.
    fn accumulate_param_grads(
        &self,
        _neuron: usize,
        _z: Complex64,
        _delta: Complex64,
        _grads: &mut ActivationGrads,
    ) -> Result<(), ActivationError> {
        Ok(())
    }

    /// Trainable real parameters (flattened), empty for fixed activations.
    fn real_params(&self) -> &[f64] {
        &[]
    }

    fn real_params_mut(&mut self) -> &mut [f64] {
        &mut []
    }

    /// Trainable complex parameters, empty except for the complex KAF.
    fn complex_params(&self) -> &[Complex64] {
        &[]
    }

    fn complex_params_mut(&mut self) -> &mut [Complex64] {
        &mut []
    }

    /// Whether the parameters enter the squared-magnitude penalty
    /// (the modReLU radius is exempt, like bias terms).
    fn params_regularized(&self) -> bool {
        true
    }

    /// Maintenance after an optimizer step (bandwidth clamping).
    fn after_update(&mut self) {}

    /// Distance from `z` to the nearest kink or singular point; infinite for
    /// smooth activations. Used to keep finite-difference probes away from
    /// non-differentiable sets.
    fn kink_margin(&self, _neuron: usize, _z: Complex64) -> f64 {
        f64::INFINITY
    }

    fn boxed_clone(&self) -> Box<dyn LayerActivation>;

    /// The construction record for checkpoints and manifests.
    fn spec(&self) -> ActivationSpec;
}

impl Clone for Box<dyn LayerActivation> {
    fn clone(&self) -> Self {
        self.boxed_clone()
    }
}

/// Construction settings resolved for one activation instance. Fixed kinds
/// only use `name`; the KAF kinds read the dictionary, kernel and
/// initialization fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivationSpec {
    pub name: String,
    pub dict_size: usize,
    pub dict_range: (f64, f64),
    pub kernel: KernelKind,
    pub init_std: f64,
}

impl ActivationSpec {
    /// Spec for a fixed (parameter-free or modReLU) activation.
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Self::split_kaf_defaults()
        }
    }

    /// Split-KAF defaults: D = 20 over [-2, 2], Gaussian kernel, coefficient
    /// standard deviation 0.3.
    pub fn split_kaf_defaults() -> Self {
        Self {
            name: "split_kaf".to_string(),
            dict_size: 20,
            dict_range: (-2.0, 2.0),
            kernel: KernelKind::RealGaussian,
            init_std: 0.3,
        }
    }

    /// Complex-KAF defaults: D = 8 grid over [-2, 2] per axis with the
    /// independent kernel.
    pub fn complex_kaf_defaults() -> Self {
        Self {
            name: "complex_kaf".to_string(),
            dict_size: 8,
            dict_range: (-2.0, 2.0),
            kernel: KernelKind::IndependentGaussian,
            init_std: 0.3,
        }
    }
}

/// All registered activation names, in registry order.
pub const ACTIVATION_NAMES: [&str; 13] = [
    "identity",
    "split_tanh",
    "split_relu",
    "real_tanh",
    "real_relu",
    "amp",
    "pa_tanh",
    "complex_tanh",
    "crelu",
    "modrelu",
    "cardioid",
    "split_kaf",
    "complex_kaf",
];

/// Builds an activation for a layer of `width` neurons from its spec.
/// Trainable kinds draw their initial coefficients from `rng`.
pub fn build(
    spec: &ActivationSpec,
    width: usize,
    rng: &mut Rng,
) -> Result<Box<dyn LayerActivation>, ActivationError> {
    scalar::build_scalar(spec, width)
        .map(Ok)
        .or_else(|| kaf::build_kaf(spec, width, rng).transpose())
        .unwrap_or_else(|| Err(ActivationError::UnknownActivation(spec.name.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_every_name() {
        let mut rng = Rng::with_seed(1);
        for name in ACTIVATION_NAMES {
            let spec = match name {
                "complex_kaf" => ActivationSpec::complex_kaf_defaults(),
                _ => ActivationSpec::named(name),
            };
            let act = build(&spec, 3, &mut rng).unwrap();
            assert_eq!(act.name(), name);
        }
    }

    #[test]
    fn registry_rejects_unknown_names() {
        let mut rng = Rng::with_seed(1);
        let err = build(&ActivationSpec::named("swish"), 3, &mut rng)
            .map(|_| ())
            .unwrap_err();
        assert!(matches!(err, ActivationError::UnknownActivation(_)));
    }

    #[test]
    fn boxed_clone_preserves_parameters() {
        let mut rng = Rng::with_seed(9);
        let act = build(&ActivationSpec::split_kaf_defaults(), 4, &mut rng).unwrap();
        let cloned = act.boxed_clone();
        assert_eq!(act.real_params(), cloned.real_params());
        assert_eq!(act.name(), cloned.name());
    }
}
