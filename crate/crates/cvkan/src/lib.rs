//! Complex-valued neural networks with kernel activation functions.
//!
//! This crate implements a small training engine for complex-valued neural
//! networks (CVNNs). Gradients are computed with CR (Wirtinger) calculus, so
//! non-holomorphic activations and real-valued losses are handled directly in
//! the complex domain. Besides the usual catalogue of fixed complex
//! activations (split functions, phase-amplitude functions, complex tanh,
//! complex ReLU variants), the engine provides two trainable kernel
//! activation functions:
//!
//! - a *split* KAF, expanding the real and imaginary parts of each neuron
//!   over a shared one-dimensional Gaussian kernel dictionary, and
//! - a *fully complex* KAF, expanding each neuron over a two-dimensional grid
//!   of complex kernel centers with complex mixing coefficients.
//!
//! Activation variants live behind the [`activations::LayerActivation`]
//! trait and are selected by name at runtime through a registry, so
//! experiment configs can swap them freely.
//!
//! The crate also ships the benchmark harness used by the `cvkan` CLI:
//! a synthetic nonlinear channel-identification task, complex wind-series
//! prediction, and digit classification on 2-D DFT features, together with a
//! finite-difference gradient checker that validates every activation kind.

pub mod activations;
pub mod checkpoint;
pub mod config;
pub mod data;
pub mod experiment;
pub mod gradcheck;
pub mod kernels;
pub mod metrics;
pub mod models;
pub mod network;
pub mod optim;
pub mod rng;
pub mod tensor;
pub mod testing;
pub mod wirtinger;

pub use num_complex::Complex64;

// re-exports added as modules land
pub use kernels::{KernelDictionary, KernelKind};

pub use rng::Rng;
pub use tensor::ComplexTensor;
pub use wirtinger::WirtingerPair;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
