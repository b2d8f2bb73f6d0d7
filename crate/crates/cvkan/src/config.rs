//! Experiment configuration: TOML parsing, validation and defaults.
//!
//! A config file may be nearly empty — every field has a default, and the
//! defaults reproduce the benchmark protocol (one 10-neuron hidden layer,
//! `lambda = 1e-4`, batches of 40 and 15 dataset generations for the
//! channel task; two hidden layers with a width/regularization grid for the
//! wind task; three 100-neuron layers for the digit task). Unknown keys and
//! incompatible task/model combinations are rejected at parse time.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::activations::ActivationSpec;
use crate::kernels::KernelKind;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Channel,
    Wind,
    Mnist,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Channel => "channel",
            Task::Wind => "wind",
            Task::Mnist => "mnist",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        match name {
            "channel" => Ok(Task::Channel),
            "wind" => Ok(Task::Wind),
            "mnist" => Ok(Task::Mnist),
            other => Err(ConfigError::Invalid(format!(
                "unknown task '{other}' (expected channel, wind or mnist)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Complex linear filter.
    Lin,
    /// Real-valued network on stacked real/imaginary inputs.
    Rnn2r,
    /// CVNN with a fixed complex activation.
    CvnnFixed,
    /// CVNN with modReLU neurons.
    Modrelu,
    /// CVNN with the split kernel activation function.
    KafSplit,
    /// CVNN with the fully complex kernel activation function.
    KafComplex,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lin => "lin",
            ModelKind::Rnn2r => "rnn_2r",
            ModelKind::CvnnFixed => "cvnn_fixed",
            ModelKind::Modrelu => "modrelu",
            ModelKind::KafSplit => "kaf_split",
            ModelKind::KafComplex => "kaf_complex",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        match name {
            "lin" => Ok(ModelKind::Lin),
            "rnn_2r" => Ok(ModelKind::Rnn2r),
            "cvnn_fixed" => Ok(ModelKind::CvnnFixed),
            "modrelu" => Ok(ModelKind::Modrelu),
            "kaf_split" => Ok(ModelKind::KafSplit),
            "kaf_complex" => Ok(ModelKind::KafComplex),
            other => Err(ConfigError::Invalid(format!(
                "unknown model '{other}' (expected lin, rnn_2r, cvnn_fixed, modrelu, kaf_split or kaf_complex)"
            ))),
        }
    }

    pub fn is_real_valued(self) -> bool {
        matches!(self, ModelKind::Rnn2r)
    }

    pub fn has_hidden_layers(self) -> bool {
        !matches!(self, ModelKind::Lin)
    }
}

/// Source of the wind series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindSource {
    /// Measured two-column CSV (requires `wind_csv`).
    Csv,
    /// Statistically wind-like synthetic series.
    Synthetic,
    /// Series with an exactly linear prediction target.
    Linear,
}

/// Raw key/value config as read from TOML; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub task: Option<String>,
    pub model: Option<String>,
    pub activation: Option<String>,
    pub kernel: Option<String>,
    pub hidden: Option<Vec<usize>>,
    pub dict_size: Option<usize>,
    pub dict_range: Option<(f64, f64)>,
    pub kaf_init_std: Option<f64>,
    pub lr: Option<f64>,
    pub epsilon: Option<f64>,
    pub iterations: Option<u64>,
    pub batch_size: Option<usize>,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub repetitions: Option<usize>,
    pub rho: Option<f64>,
    pub channel_samples: Option<usize>,
    pub channel_embedding: Option<usize>,
    pub snr_db: Option<f64>,
    pub wind_data: Option<String>,
    pub wind_csv: Option<String>,
    pub wind_embed: Option<usize>,
    pub wind_horizon: Option<usize>,
    pub wind_test_len: Option<usize>,
    pub wind_val_len: Option<usize>,
    pub mnist_dir: Option<String>,
    pub keep_coefficients: Option<usize>,
    pub out: Option<String>,
    pub workers: Option<usize>,
    pub save_model: Option<bool>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn from_file(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Parse(format!("cannot read {path}: {e}")))?;
        Self::from_toml(&text)
    }
}

/// Fully resolved experiment description; serialized into run manifests so
/// a run can be reproduced bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub task: Task,
    pub model: ModelKind,
    /// Hidden activation name for `cvnn_fixed` / `rnn_2r`.
    pub activation: Option<String>,
    /// Kernel for the KAF models.
    pub kernel: Option<KernelKind>,
    /// Candidate hidden widths (each applied to every hidden layer); a
    /// single entry means no width search.
    pub hidden_grid: Vec<Vec<usize>>,
    /// Candidate regularization strengths; a single entry means no search.
    pub lambda_grid: Vec<f64>,
    pub dict_size: usize,
    pub dict_range: (f64, f64),
    pub kaf_init_std: f64,
    pub lr: f64,
    pub epsilon: f64,
    pub iterations: u64,
    pub batch_size: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub rho: f64,
    pub channel_samples: usize,
    pub channel_embedding: usize,
    pub snr_db: f64,
    pub wind_data: WindSource,
    pub wind_csv: Option<String>,
    pub wind_embed: usize,
    pub wind_horizon: usize,
    pub wind_test_len: usize,
    pub wind_val_len: usize,
    pub mnist_dir: String,
    pub keep_coefficients: usize,
    pub out: Option<String>,
    pub workers: usize,
    pub save_model: bool,
}

const FIXED_COMPLEX_ACTIVATIONS: [&str; 7] = [
    "split_tanh",
    "split_relu",
    "amp",
    "pa_tanh",
    "complex_tanh",
    "crelu",
    "cardioid",
];

impl ExperimentConfig {
    /// Materializes defaults and validates cross-field compatibility.
    pub fn resolve(raw: &RawConfig) -> Result<Self, ConfigError> {
        let task = Task::from_name(raw.task.as_deref().unwrap_or("channel"))?;
        let model = ModelKind::from_name(raw.model.as_deref().unwrap_or("kaf_split"))?;

        let activation = match model {
            ModelKind::CvnnFixed => {
                let name = raw.activation.as_deref().unwrap_or("split_tanh");
                if !FIXED_COMPLEX_ACTIVATIONS.contains(&name) {
                    return Err(ConfigError::Invalid(format!(
                        "activation '{name}' is not a fixed complex activation (expected one of {FIXED_COMPLEX_ACTIVATIONS:?})"
                    )));
                }
                Some(name.to_string())
            }
            ModelKind::Rnn2r => {
                let name = raw.activation.as_deref().unwrap_or("real_tanh");
                if !matches!(name, "real_tanh" | "real_relu") {
                    return Err(ConfigError::Invalid(format!(
                        "activation '{name}' is not usable by the real-valued model (expected real_tanh or real_relu)"
                    )));
                }
                Some(name.to_string())
            }
            _ => {
                if let Some(name) = &raw.activation {
                    return Err(ConfigError::Invalid(format!(
                        "model '{}' does not take an activation key (got '{name}')",
                        model.name()
                    )));
                }
                None
            }
        };

        let kernel = match model {
            ModelKind::KafSplit => {
                let kind = match raw.kernel.as_deref() {
                    None => KernelKind::RealGaussian,
                    Some(name) => KernelKind::from_name(name)
                        .map_err(|e| ConfigError::Invalid(e.to_string()))?,
                };
                if kind != KernelKind::RealGaussian {
                    return Err(ConfigError::Invalid(format!(
                        "kaf_split uses the real Gaussian kernel, got '{}'",
                        kind.name()
                    )));
                }
                Some(kind)
            }
            ModelKind::KafComplex => {
                let kind = match raw.kernel.as_deref() {
                    None => KernelKind::IndependentGaussian,
                    Some(name) => KernelKind::from_name(name)
                        .map_err(|e| ConfigError::Invalid(e.to_string()))?,
                };
                if !matches!(
                    kind,
                    KernelKind::ComplexGaussian | KernelKind::IndependentGaussian
                ) {
                    return Err(ConfigError::Invalid(format!(
                        "kaf_complex supports complex_gaussian or independent kernels, got '{}'",
                        kind.name()
                    )));
                }
                Some(kind)
            }
            _ => {
                if let Some(name) = &raw.kernel {
                    return Err(ConfigError::Invalid(format!(
                        "model '{}' does not take a kernel key (got '{name}')",
                        model.name()
                    )));
                }
                None
            }
        };

        if let Some(hidden) = &raw.hidden {
            if model == ModelKind::Lin && !hidden.is_empty() {
                return Err(ConfigError::Invalid(
                    "the linear model has no hidden layers".to_string(),
                ));
            }
            if model != ModelKind::Lin && hidden.is_empty() {
                return Err(ConfigError::Invalid(format!(
                    "model '{}' needs at least one hidden layer",
                    model.name()
                )));
            }
            if hidden.iter().any(|&w| w == 0) {
                return Err(ConfigError::Invalid("hidden widths must be positive".to_string()));
            }
        }

        // Hidden architecture: explicit widths pin the grid to one entry;
        // otherwise the task default (wind searches over widths).
        let hidden_grid: Vec<Vec<usize>> = match (&raw.hidden, model, task) {
            (_, ModelKind::Lin, _) => vec![vec![]],
            (Some(h), _, _) => vec![h.clone()],
            (None, _, Task::Channel) => vec![vec![10]],
            (None, _, Task::Wind) => vec![vec![10, 10], vec![20, 20], vec![30, 30]],
            (None, _, Task::Mnist) => vec![vec![100, 100, 100]],
        };

        let lambda_grid = match (raw.lambda, task) {
            (Some(l), _) => {
                if l < 0.0 {
                    return Err(ConfigError::Invalid(format!(
                        "lambda must be nonnegative, got {l}"
                    )));
                }
                vec![l]
            }
            (None, Task::Wind) => vec![1e-2, 1e-3, 1e-4],
            (None, _) => vec![1e-4],
        };

        let rho = raw.rho.unwrap_or(std::f64::consts::FRAC_1_SQRT_2);
        if task == Task::Channel && !(rho > 0.0 && rho < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "channel rho must satisfy 0 < rho < 1, got {rho}"
            )));
        }

        let wind_data = match raw.wind_data.as_deref() {
            None | Some("csv") => WindSource::Csv,
            Some("synthetic") => WindSource::Synthetic,
            Some("linear") => WindSource::Linear,
            Some(other) => {
                return Err(ConfigError::Invalid(format!(
                    "unknown wind_data '{other}' (expected csv, synthetic or linear)"
                )))
            }
        };
        if task == Task::Wind && wind_data == WindSource::Csv && raw.wind_csv.is_none() {
            return Err(ConfigError::Invalid(
                "wind task needs wind_csv (or wind_data = \"synthetic\" / \"linear\")".to_string(),
            ));
        }

        let keep = raw.keep_coefficients.unwrap_or(100);
        if keep == 0 || keep > 784 {
            return Err(ConfigError::Invalid(format!(
                "keep_coefficients must lie in 1..=784, got {keep}"
            )));
        }

        let dict_size = raw.dict_size.unwrap_or(match model {
            ModelKind::KafComplex => 8,
            _ => 20,
        });
        if dict_size < 2 {
            return Err(ConfigError::Invalid(format!(
                "dict_size must be at least 2, got {dict_size}"
            )));
        }
        let dict_range = raw.dict_range.unwrap_or((-2.0, 2.0));
        if dict_range.0 >= dict_range.1 {
            return Err(ConfigError::Invalid(format!(
                "dict_range must be increasing, got {dict_range:?}"
            )));
        }

        let iterations = raw.iterations.unwrap_or(match task {
            Task::Mnist => 20_000,
            _ => 10_000,
        });
        let repetitions = raw.repetitions.unwrap_or(match task {
            Task::Channel => 15,
            Task::Wind => 5,
            Task::Mnist => 1,
        });
        if repetitions == 0 {
            return Err(ConfigError::Invalid("repetitions must be positive".to_string()));
        }
        let batch_size = raw.batch_size.unwrap_or(40);
        if batch_size == 0 {
            return Err(ConfigError::Invalid("batch_size must be positive".to_string()));
        }
        let lr = raw.lr.unwrap_or(0.01);
        if lr <= 0.0 {
            return Err(ConfigError::Invalid(format!("lr must be positive, got {lr}")));
        }

        Ok(Self {
            task,
            model,
            activation,
            kernel,
            hidden_grid,
            lambda_grid,
            dict_size,
            dict_range,
            kaf_init_std: raw.kaf_init_std.unwrap_or(0.3),
            lr,
            epsilon: raw.epsilon.unwrap_or(1e-8),
            iterations,
            batch_size,
            seed: raw.seed.unwrap_or(0),
            repetitions,
            rho,
            channel_samples: raw.channel_samples.unwrap_or(2000),
            channel_embedding: raw.channel_embedding.unwrap_or(5),
            snr_db: raw.snr_db.unwrap_or(13.0),
            wind_data,
            wind_csv: raw.wind_csv.clone(),
            wind_embed: raw.wind_embed.unwrap_or(10),
            wind_horizon: raw.wind_horizon.unwrap_or(8),
            wind_test_len: raw.wind_test_len.unwrap_or(500),
            wind_val_len: raw.wind_val_len.unwrap_or(500),
            mnist_dir: raw.mnist_dir.clone().unwrap_or_else(|| "data/mnist".to_string()),
            keep_coefficients: keep,
            out: raw.out.clone(),
            workers: raw.workers.unwrap_or(0),
            save_model: raw.save_model.unwrap_or(false),
        })
    }

    /// The activation spec for this config's hidden layers.
    pub fn hidden_activation(&self) -> ActivationSpec {
        match self.model {
            ModelKind::Lin => ActivationSpec::named("identity"),
            ModelKind::Rnn2r | ModelKind::CvnnFixed => {
                ActivationSpec::named(self.activation.as_deref().expect("resolved activation"))
            }
            ModelKind::Modrelu => ActivationSpec::named("modrelu"),
            ModelKind::KafSplit => ActivationSpec {
                dict_size: self.dict_size,
                dict_range: self.dict_range,
                init_std: self.kaf_init_std,
                ..ActivationSpec::split_kaf_defaults()
            },
            ModelKind::KafComplex => ActivationSpec {
                dict_size: self.dict_size,
                dict_range: self.dict_range,
                init_std: self.kaf_init_std,
                kernel: self.kernel.expect("resolved kernel"),
                ..ActivationSpec::complex_kaf_defaults()
            },
        }
    }
}
