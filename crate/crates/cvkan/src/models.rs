//! The benchmark model zoo: builds a network for a config and task shape.
//!
//! All models share the engine; they differ in hidden activation, real-mode
//! flag and output width. The real-valued baseline takes the stacked
//! real/imaginary features, so its input dimension doubles.

use crate::config::{ExperimentConfig, ModelKind};
use crate::network::{Head, LayerSpec, Network, NetworkError};
use crate::activations::ActivationSpec;
use crate::rng::Rng;

/// Output-side shape of the task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskShape {
    /// One complex regression target per sample.
    Regression,
    /// Classification over this many classes.
    Classification(usize),
}

/// Builds the network for `cfg` with the given hidden widths.
/// `feature_dim` is the complex feature count before any real stacking.
pub fn build_model(
    cfg: &ExperimentConfig,
    hidden: &[usize],
    feature_dim: usize,
    shape: TaskShape,
    rng: &mut Rng,
) -> Result<Network, NetworkError> {
    let real_mode = cfg.model.is_real_valued();
    let input_dim = if real_mode { feature_dim * 2 } else { feature_dim };
    let (head, output_dim) = match shape {
        TaskShape::Regression => (Head::Regression, if real_mode { 2 } else { 1 }),
        TaskShape::Classification(classes) => (Head::SoftmaxClassification, classes),
    };
    let mut layers = Vec::with_capacity(hidden.len() + 1);
    for &width in hidden {
        layers.push(LayerSpec::new(width, cfg.hidden_activation()));
    }
    layers.push(LayerSpec::new(output_dim, ActivationSpec::named("identity")));
    Network::build(input_dim, &layers, head, real_mode, rng)
}

/// Whether this model consumes stacked real/imaginary features.
pub fn wants_stacked_inputs(model: ModelKind) -> bool {
    model.is_real_valued()
}
