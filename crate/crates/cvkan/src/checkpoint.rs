//! Versioned JSON model checkpoints.
//!
//! A checkpoint stores the network topology (head, mode, dimensions), each
//! layer's complex weights and bias as parallel re/im arrays, and the
//! activation's construction spec plus its trained parameters. JSON numbers
//! round-trip `f64` exactly, so a reloaded model reproduces the original
//! bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::activations;
use crate::activations::ActivationSpec;
use crate::network::{Head, Layer, Network, NetworkError};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("checkpoint decode error: {0}")]
    Decode(String),
    #[error("unsupported checkpoint version {0}")]
    Version(u32),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointFile {
    version: u32,
    head: Head,
    real_mode: bool,
    input_dim: usize,
    layers: Vec<LayerCheckpoint>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LayerCheckpoint {
    output_dim: usize,
    input_dim: usize,
    weights_re: Vec<f64>,
    weights_im: Vec<f64>,
    bias_re: Vec<f64>,
    bias_im: Vec<f64>,
    activation: ActivationSpec,
    activation_real: Vec<f64>,
    activation_complex_re: Vec<f64>,
    activation_complex_im: Vec<f64>,
}

/// Serializes a network to checkpoint JSON.
pub fn to_json(net: &Network) -> String {
    let layers = net
        .layers
        .iter()
        .map(|layer| LayerCheckpoint {
            output_dim: layer.output_dim(),
            input_dim: layer.input_dim(),
            weights_re: layer.weights.data().iter().map(|z| z.re).collect(),
            weights_im: layer.weights.data().iter().map(|z| z.im).collect(),
            bias_re: layer.bias.iter().map(|z| z.re).collect(),
            bias_im: layer.bias.iter().map(|z| z.im).collect(),
            activation: layer.activation.spec(),
            activation_real: layer.activation.real_params().to_vec(),
            activation_complex_re: layer
                .activation
                .complex_params()
                .iter()
                .map(|z| z.re)
                .collect(),
            activation_complex_im: layer
                .activation
                .complex_params()
                .iter()
                .map(|z| z.im)
                .collect(),
        })
        .collect();
    let file = CheckpointFile {
        version: CHECKPOINT_VERSION,
        head: net.head,
        real_mode: net.real_mode,
        input_dim: net.input_dim(),
        layers,
    };
    serde_json::to_string_pretty(&file).expect("checkpoint serialization")
}

/// Reconstructs a network from checkpoint JSON.
pub fn from_json(text: &str) -> Result<Network, CheckpointError> {
    let file: CheckpointFile =
        serde_json::from_str(text).map_err(|e| CheckpointError::Decode(e.to_string()))?;
    if file.version != CHECKPOINT_VERSION {
        return Err(CheckpointError::Version(file.version));
    }
    let mut layers = Vec::with_capacity(file.layers.len());
    for lc in &file.layers {
        if lc.weights_re.len() != lc.output_dim * lc.input_dim
            || lc.weights_im.len() != lc.weights_re.len()
            || lc.bias_re.len() != lc.output_dim
            || lc.bias_im.len() != lc.output_dim
        {
            return Err(CheckpointError::Decode(
                "inconsistent layer dimensions".to_string(),
            ));
        }
        let weights = ComplexTensor::matrix(
            lc.output_dim,
            lc.input_dim,
            lc.weights_re
                .iter()
                .zip(&lc.weights_im)
                .map(|(&re, &im)| Complex64::new(re, im))
                .collect(),
        )
        .map_err(|e| CheckpointError::Decode(e.to_string()))?;
        let bias = lc
            .bias_re
            .iter()
            .zip(&lc.bias_im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        // Initialization randomness is irrelevant: the trained parameters
        // overwrite it entirely.
        let mut scratch_rng = Rng::with_seed(0);
        let mut activation = activations::build(&lc.activation, lc.output_dim, &mut scratch_rng)
            .map_err(|e| CheckpointError::Decode(e.to_string()))?;
        if activation.real_params().len() != lc.activation_real.len()
            || activation.complex_params().len() != lc.activation_complex_re.len()
            || lc.activation_complex_re.len() != lc.activation_complex_im.len()
        {
            return Err(CheckpointError::Decode(
                "activation parameter count mismatch".to_string(),
            ));
        }
        activation
            .real_params_mut()
            .copy_from_slice(&lc.activation_real);
        for (slot, (&re, &im)) in activation
            .complex_params_mut()
            .iter_mut()
            .zip(lc.activation_complex_re.iter().zip(&lc.activation_complex_im))
        {
            *slot = Complex64::new(re, im);
        }
        layers.push(Layer {
            weights,
            bias,
            activation,
        });
    }
    Ok(Network::from_parts(
        layers,
        file.head,
        file.real_mode,
        file.input_dim,
    )?)
}

pub fn save(net: &Network, path: &str) -> Result<(), CheckpointError> {
    std::fs::write(path, to_json(net)).map_err(|source| CheckpointError::Io {
        path: path.to_string(),
        source,
    })
}

pub fn load(path: &str) -> Result<Network, CheckpointError> {
    let text = std::fs::read_to_string(path).map_err(|source| CheckpointError::Io {
        path: path.to_string(),
        source,
    })?;
    from_json(&text)
}
