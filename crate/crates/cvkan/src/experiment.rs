//! Experiment runner: builds datasets and models from a resolved config,
//! trains with the shared protocol, and emits a reproducible run manifest.
//!
//! Repetitions are independent: repetition `i` derives its dataset from
//! seed `master + i` and its training stream from that value XOR a fixed
//! salt, so every model variant sees identical data when run with the same
//! master seed. Repetitions execute in parallel (worker count configurable)
//! and results are aggregated in repetition order, which keeps all reported
//! numbers bit-reproducible.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::checkpoint;
use crate::config::{ExperimentConfig, ModelKind, Task, WindSource};
use crate::data::{
    self, make_channel_dataset, make_wind_dataset, mnist, ChannelConfig, ClassificationDataset,
    DataError, MinMaxTransform, RegressionDataset,
};
use crate::metrics::{accuracy, mse_db, r_squared, MetricsError, MetricsRecord};
use crate::models::{build_model, wants_stacked_inputs, TaskShape};
use crate::network::{Network, NetworkError, Targets};
use crate::optim::{train, TrainConfig, TrainData, TrainError};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("repetition {rep}: {source}")]
    Repetition {
        rep: usize,
        #[source]
        source: TrainError,
    },
    #[error("grid search: {0}")]
    GridSearch(String),
    #[error(transparent)]
    Checkpoint(#[from] checkpoint::CheckpointError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Salt separating the training stream from the dataset stream of a
/// repetition.
const TRAIN_STREAM_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

fn rep_seed(master: u64, rep: usize) -> u64 {
    master.wrapping_add(rep as u64)
}

fn train_seed(rep_seed: u64) -> u64 {
    rep_seed ^ TRAIN_STREAM_SALT
}

fn grid_seed(master: u64, combo: usize) -> u64 {
    master
        .wrapping_mul(0x2545_F491_4F6C_DD1D)
        .wrapping_add(combo as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(values: &[f64]) -> MeanStd {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    MeanStd { mean, std }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mse_db: Option<MeanStd>,
    pub r2: Option<MeanStd>,
    pub accuracy: Option<MeanStd>,
}

fn aggregate(records: &[MetricsRecord]) -> Aggregate {
    let collect = |get: fn(&MetricsRecord) -> Option<f64>| -> Option<MeanStd> {
        let values: Vec<f64> = records.iter().filter_map(get).collect();
        (values.len() == records.len()).then(|| mean_std(&values))
    };
    Aggregate {
        mse_db: collect(|r| r.mse_db),
        r2: collect(|r| r.r2),
        accuracy: collect(|r| r.accuracy),
    }
}

/// Hyper-parameters chosen on the validation slice (wind task).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedHyperparams {
    pub hidden: Vec<usize>,
    pub lambda: f64,
    pub validation_r2: Option<f64>,
}

/// Everything needed to reproduce and audit one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub rep_seeds: Vec<u64>,
    pub dataset_fingerprints: Vec<String>,
    pub selected: Option<SelectedHyperparams>,
    pub repetitions: Vec<MetricsRecord>,
    pub aggregate: Aggregate,
}

/// Runs the configured experiment and writes outputs when `out` is set.
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest, ExperimentError> {
    let manifest = match cfg.task {
        Task::Channel => run_channel(cfg)?,
        Task::Wind => run_wind(cfg)?,
        Task::Mnist => run_mnist(cfg)?,
    };
    if let Some(out) = &cfg.out {
        write_outputs(&manifest, out)?;
    }
    Ok(manifest)
}

fn thread_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool")
}

/// SHA-256 over the raw complex samples, targets and split indices.
fn fingerprint_regression(ds: &RegressionDataset) -> String {
    let mut hasher = Sha256::new();
    for z in ds.inputs.data() {
        hasher.update(z.re.to_le_bytes());
        hasher.update(z.im.to_le_bytes());
    }
    for z in &ds.targets {
        hasher.update(z.re.to_le_bytes());
        hasher.update(z.im.to_le_bytes());
    }
    for split in [&ds.train, &ds.validation, &ds.test] {
        for &i in split.iter() {
            hasher.update((i as u64).to_le_bytes());
        }
    }
    hex_digest(hasher)
}

fn fingerprint_classification(ds: &ClassificationDataset) -> String {
    let mut hasher = Sha256::new();
    for z in ds.inputs.data() {
        hasher.update(z.re.to_le_bytes());
        hasher.update(z.im.to_le_bytes());
    }
    hasher.update(&ds.labels);
    for split in [&ds.train, &ds.test] {
        for &i in split.iter() {
            hasher.update((i as u64).to_le_bytes());
        }
    }
    hex_digest(hasher)
}

fn hex_digest(hasher: Sha256) -> String {
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Fits the input preprocessing on the train split, applies it everywhere,
/// and stacks real/imaginary features for the real-valued baseline.
fn prepare_regression(cfg: &ExperimentConfig, ds: &RegressionDataset) -> RegressionDataset {
    let transform = MinMaxTransform::fit(&ds.inputs, &ds.train);
    let mut prepared = ds.with_inputs(transform.apply(&ds.inputs));
    if wants_stacked_inputs(cfg.model) {
        prepared = RegressionDataset {
            inputs: data::stack_real_imag(&prepared.inputs),
            targets: prepared.targets,
            train: prepared.train,
            validation: prepared.validation,
            test: prepared.test,
        };
    }
    prepared
}

fn prepare_classification(
    cfg: &ExperimentConfig,
    ds: &ClassificationDataset,
) -> ClassificationDataset {
    let transform = MinMaxTransform::fit(&ds.inputs, &ds.train);
    let mut prepared = ds.with_inputs(transform.apply(&ds.inputs));
    if wants_stacked_inputs(cfg.model) {
        prepared = ClassificationDataset {
            inputs: data::stack_real_imag(&prepared.inputs),
            labels: prepared.labels,
            train: prepared.train,
            test: prepared.test,
        };
    }
    prepared
}

/// The complex feature dimension the model is built for (before stacking).
fn feature_dim(cfg: &ExperimentConfig, prepared_cols: usize) -> usize {
    if wants_stacked_inputs(cfg.model) {
        prepared_cols / 2
    } else {
        prepared_cols
    }
}

fn train_once(
    cfg: &ExperimentConfig,
    hidden: &[usize],
    lambda: f64,
    prepared: &RegressionDataset,
    shape: TaskShape,
    seed: u64,
) -> Result<(Network, Vec<(u64, f64)>), TrainError> {
    let mut rng = Rng::with_seed(seed);
    let mut net = build_model(
        cfg,
        hidden,
        feature_dim(cfg, prepared.inputs.cols()),
        shape,
        &mut rng,
    )?;
    let (inputs, targets) = prepared.gather(&prepared.train);
    let data = TrainData {
        inputs: &inputs,
        targets: Targets::Regression(&targets),
    };
    let train_cfg = TrainConfig {
        iterations: cfg.iterations,
        lr: cfg.lr,
        epsilon: cfg.epsilon,
        batch_size: cfg.batch_size,
        lambda,
    };
    let curve = train(&mut net, &data, &train_cfg, &mut rng)?;
    Ok((net, curve))
}

fn evaluate_regression(
    net: &Network,
    ds: &RegressionDataset,
    idx: &[usize],
) -> Result<(f64, f64), ExperimentError> {
    let (inputs, targets) = ds.gather(idx);
    let cache = net.forward(&inputs)?;
    let preds = net.predict_regression(&cache);
    let squared: Vec<f64> = preds
        .iter()
        .zip(&targets)
        .map(|(p, y)| (p - y).norm_sqr())
        .collect();
    Ok((mse_db(&squared)?, r_squared(&targets, &preds)?))
}

fn save_model_if_requested(
    cfg: &ExperimentConfig,
    net: &Network,
    rep: usize,
) -> Result<(), ExperimentError> {
    if !cfg.save_model {
        return Ok(());
    }
    let Some(out) = &cfg.out else { return Ok(()) };
    std::fs::create_dir_all(out).map_err(|source| ExperimentError::Io {
        path: out.clone(),
        source,
    })?;
    let path = format!("{out}/model_rep{rep}.json");
    checkpoint::save(net, &path)?;
    Ok(())
}

/// Channel identification: a fresh dataset generation per repetition.
pub fn run_channel(cfg: &ExperimentConfig) -> Result<RunManifest, ExperimentError> {
    let hidden = cfg.hidden_grid[0].clone();
    let lambda = cfg.lambda_grid[0];
    let pool = thread_pool(cfg.workers);
    let results: Result<Vec<(MetricsRecord, String)>, ExperimentError> = pool.install(|| {
        (0..cfg.repetitions)
            .into_par_iter()
            .map(|rep| {
                let seed = rep_seed(cfg.seed, rep);
                let channel_cfg = ChannelConfig {
                    rho: cfg.rho,
                    samples: cfg.channel_samples,
                    embedding: cfg.channel_embedding,
                    snr_db: cfg.snr_db,
                    test_fraction: 0.15,
                    seed,
                };
                let ds = make_channel_dataset(&channel_cfg)?;
                let fp = fingerprint_regression(&ds);
                let prepared = prepare_regression(cfg, &ds);
                let (net, curve) = train_once(
                    cfg,
                    &hidden,
                    lambda,
                    &prepared,
                    TaskShape::Regression,
                    train_seed(seed),
                )
                .map_err(|source| ExperimentError::Repetition { rep, source })?;
                let (mse, r2) = evaluate_regression(&net, &prepared, &prepared.test)?;
                save_model_if_requested(cfg, &net, rep)?;
                Ok((
                    MetricsRecord {
                        mse_db: Some(mse),
                        r2: Some(r2),
                        accuracy: None,
                        loss_curve: curve,
                    },
                    fp,
                ))
            })
            .collect()
    });
    let results = results?;
    Ok(manifest_from(cfg, results, None))
}

/// Wind prediction: one dataset; hyper-parameters selected on the
/// validation slice, then `repetitions` independent trainings.
pub fn run_wind(cfg: &ExperimentConfig) -> Result<RunManifest, ExperimentError> {
    let series = match cfg.wind_data {
        WindSource::Csv => data::load_wind_csv(
            cfg.wind_csv.as_deref().expect("validated wind_csv"),
        )?,
        WindSource::Synthetic => data::synthetic_wind_series(cfg.seed, 5000),
        WindSource::Linear => data::linear_benchmark_series(cfg.seed, 5000, cfg.wind_horizon),
    };
    let ds = make_wind_dataset(
        &series,
        cfg.wind_embed,
        cfg.wind_horizon,
        cfg.wind_test_len,
        cfg.wind_val_len,
    )?;
    let fp = fingerprint_regression(&ds);
    let prepared = prepare_regression(cfg, &ds);

    // Validation-driven selection over the width/regularization grid.
    let combos: Vec<(Vec<usize>, f64)> = cfg
        .hidden_grid
        .iter()
        .flat_map(|h| cfg.lambda_grid.iter().map(move |&l| (h.clone(), l)))
        .collect();
    let selected = if combos.len() == 1 {
        SelectedHyperparams {
            hidden: combos[0].0.clone(),
            lambda: combos[0].1,
            validation_r2: None,
        }
    } else {
        if prepared.validation.len() < 2 {
            return Err(ExperimentError::GridSearch(
                "hyper-parameter search needs a validation slice of at least 2 samples"
                    .to_string(),
            ));
        }
        let pool = thread_pool(cfg.workers);
        let scores: Result<Vec<f64>, ExperimentError> = pool.install(|| {
            combos
                .par_iter()
                .enumerate()
                .map(|(ci, (hidden, lambda))| {
                    let (net, _) = train_once(
                        cfg,
                        hidden,
                        *lambda,
                        &prepared,
                        TaskShape::Regression,
                        grid_seed(cfg.seed, ci),
                    )
                    .map_err(|source| ExperimentError::Repetition { rep: ci, source })?;
                    let (_, r2) = evaluate_regression(&net, &prepared, &prepared.validation)?;
                    Ok(r2)
                })
                .collect()
        });
        let scores = scores?;
        let best = scores
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| {
                a.partial_cmp(b)
                    .expect("finite validation scores")
                    .then(ib.cmp(ia))
            })
            .map(|(i, _)| i)
            .expect("non-empty grid");
        SelectedHyperparams {
            hidden: combos[best].0.clone(),
            lambda: combos[best].1,
            validation_r2: Some(scores[best]),
        }
    };

    let pool = thread_pool(cfg.workers);
    let results: Result<Vec<(MetricsRecord, String)>, ExperimentError> = pool.install(|| {
        (0..cfg.repetitions)
            .into_par_iter()
            .map(|rep| {
                let seed = rep_seed(cfg.seed, rep);
                let (net, curve) = train_once(
                    cfg,
                    &selected.hidden,
                    selected.lambda,
                    &prepared,
                    TaskShape::Regression,
                    train_seed(seed),
                )
                .map_err(|source| ExperimentError::Repetition { rep, source })?;
                let (mse, r2) = evaluate_regression(&net, &prepared, &prepared.test)?;
                save_model_if_requested(cfg, &net, rep)?;
                Ok((
                    MetricsRecord {
                        mse_db: Some(mse),
                        r2: Some(r2),
                        accuracy: None,
                        loss_curve: curve,
                    },
                    fp.clone(),
                ))
            })
            .collect()
    });
    let results = results?;
    Ok(manifest_from(cfg, results, Some(selected)))
}

fn idx_path(dir: &str, base: &str) -> Result<String, DataError> {
    for candidate in [format!("{dir}/{base}"), format!("{dir}/{base}.gz")] {
        if std::path::Path::new(&candidate).exists() {
            return Ok(candidate);
        }
    }
    Err(DataError::BadConfig(format!(
        "missing IDX file {dir}/{base}[.gz] — download the dataset out of band"
    )))
}

/// Digit classification on DFT features.
pub fn run_mnist(cfg: &ExperimentConfig) -> Result<RunManifest, ExperimentError> {
    let dir = &cfg.mnist_dir;
    let train_images = mnist::load_idx_images(&idx_path(dir, "train-images-idx3-ubyte")?)?;
    let train_labels = mnist::load_idx_labels(&idx_path(dir, "train-labels-idx1-ubyte")?)?;
    let test_images = mnist::load_idx_images(&idx_path(dir, "t10k-images-idx3-ubyte")?)?;
    let test_labels = mnist::load_idx_labels(&idx_path(dir, "t10k-labels-idx1-ubyte")?)?;
    let (ds, _selection) = mnist::mnist_fft_pipeline(
        &train_images,
        &train_labels,
        &test_images,
        &test_labels,
        cfg.keep_coefficients,
    )?;
    run_classification(cfg, &ds)
}

/// Shared classification path (used by the digit task and the tests).
pub fn run_classification(
    cfg: &ExperimentConfig,
    ds: &ClassificationDataset,
) -> Result<RunManifest, ExperimentError> {
    let classes = usize::from(ds.labels.iter().copied().max().unwrap_or(9)) + 1;
    let fp = fingerprint_classification(ds);
    let prepared = prepare_classification(cfg, ds);
    let hidden = cfg.hidden_grid[0].clone();
    let lambda = cfg.lambda_grid[0];
    let (train_inputs, train_labels) = prepared.gather(&prepared.train);
    let pool = thread_pool(cfg.workers);
    let results: Result<Vec<(MetricsRecord, String)>, ExperimentError> = pool.install(|| {
        (0..cfg.repetitions)
            .into_par_iter()
            .map(|rep| {
                let seed = rep_seed(cfg.seed, rep);
                let mut rng = Rng::with_seed(train_seed(seed));
                let mut net = build_model(
                    cfg,
                    &hidden,
                    feature_dim(cfg, prepared.inputs.cols()),
                    TaskShape::Classification(classes),
                    &mut rng,
                )?;
                let data = TrainData {
                    inputs: &train_inputs,
                    targets: Targets::Classes(&train_labels),
                };
                let train_cfg = TrainConfig {
                    iterations: cfg.iterations,
                    lr: cfg.lr,
                    epsilon: cfg.epsilon,
                    batch_size: cfg.batch_size,
                    lambda,
                };
                let curve = train(&mut net, &data, &train_cfg, &mut rng)
                    .map_err(|source| ExperimentError::Repetition { rep, source })?;
                let (test_inputs, test_labels) = prepared.gather(&prepared.test);
                let cache = net.forward(&test_inputs)?;
                let probs = net.predict_proba(&cache);
                let acc = accuracy(&probs, &test_labels);
                save_model_if_requested(cfg, &net, rep)?;
                Ok((
                    MetricsRecord {
                        mse_db: None,
                        r2: None,
                        accuracy: Some(acc),
                        loss_curve: curve,
                    },
                    fp.clone(),
                ))
            })
            .collect()
    });
    let results = results?;
    Ok(manifest_from(cfg, results, None))
}

fn manifest_from(
    cfg: &ExperimentConfig,
    results: Vec<(MetricsRecord, String)>,
    selected: Option<SelectedHyperparams>,
) -> RunManifest {
    let (repetitions, dataset_fingerprints): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    RunManifest {
        version: crate::VERSION.to_string(),
        config: cfg.clone(),
        rep_seeds: (0..cfg.repetitions).map(|r| rep_seed(cfg.seed, r)).collect(),
        dataset_fingerprints,
        selected,
        aggregate: aggregate(&repetitions),
        repetitions,
    }
}

/// Writes `manifest.json`, `metrics.csv` and `loss_curve.csv` into `dir`.
pub fn write_outputs(manifest: &RunManifest, dir: &str) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.to_string(),
        source,
    })?;
    let write = |name: &str, contents: String| -> Result<(), ExperimentError> {
        let path = format!("{dir}/{name}");
        std::fs::write(&path, contents).map_err(|source| ExperimentError::Io { path, source })
    };
    write(
        "manifest.json",
        serde_json::to_string_pretty(manifest).expect("manifest serialization"),
    )?;

    let mut metrics = String::from("rep,mse_db,r2,accuracy\n");
    for (rep, record) in manifest.repetitions.iter().enumerate() {
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        metrics.push_str(&format!(
            "{rep},{},{},{}\n",
            cell(record.mse_db),
            cell(record.r2),
            cell(record.accuracy)
        ));
    }
    write("metrics.csv", metrics)?;

    let mut curve = String::from("rep,iteration,loss\n");
    for (rep, record) in manifest.repetitions.iter().enumerate() {
        for (iteration, loss) in &record.loss_curve {
            curve.push_str(&format!("{rep},{iteration},{loss}\n"));
        }
    }
    write("loss_curve.csv", curve)?;
    Ok(())
}

/// Which rows `dataset export` writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportSplit {
    All,
    Train,
    Validation,
    Test,
}

impl ExportSplit {
    pub fn from_name(name: &str) -> Result<Self, crate::config::ConfigError> {
        match name {
            "all" => Ok(Self::All),
            "train" => Ok(Self::Train),
            "validation" => Ok(Self::Validation),
            "test" => Ok(Self::Test),
            other => Err(crate::config::ConfigError::Invalid(format!(
                "unknown split '{other}' (expected all, train, validation or test)"
            ))),
        }
    }
}

/// Exports the configured task's generated dataset (raw features, no
/// preprocessing) as CSV: re/im per feature, then target re/im or label.
pub fn export_dataset(
    cfg: &ExperimentConfig,
    split: ExportSplit,
    path: &str,
) -> Result<(), ExperimentError> {
    let contents = match cfg.task {
        Task::Channel => {
            let channel_cfg = ChannelConfig {
                rho: cfg.rho,
                samples: cfg.channel_samples,
                embedding: cfg.channel_embedding,
                snr_db: cfg.snr_db,
                test_fraction: 0.15,
                seed: cfg.seed,
            };
            let ds = make_channel_dataset(&channel_cfg)?;
            regression_csv(&ds, split)
        }
        Task::Wind => {
            let series = match cfg.wind_data {
                WindSource::Csv => data::load_wind_csv(
                    cfg.wind_csv.as_deref().expect("validated wind_csv"),
                )?,
                WindSource::Synthetic => data::synthetic_wind_series(cfg.seed, 5000),
                WindSource::Linear => {
                    data::linear_benchmark_series(cfg.seed, 5000, cfg.wind_horizon)
                }
            };
            let ds = make_wind_dataset(
                &series,
                cfg.wind_embed,
                cfg.wind_horizon,
                cfg.wind_test_len,
                cfg.wind_val_len,
            )?;
            regression_csv(&ds, split)
        }
        Task::Mnist => {
            let dir = &cfg.mnist_dir;
            let train_images =
                mnist::load_idx_images(&idx_path(dir, "train-images-idx3-ubyte")?)?;
            let train_labels =
                mnist::load_idx_labels(&idx_path(dir, "train-labels-idx1-ubyte")?)?;
            let test_images = mnist::load_idx_images(&idx_path(dir, "t10k-images-idx3-ubyte")?)?;
            let test_labels = mnist::load_idx_labels(&idx_path(dir, "t10k-labels-idx1-ubyte")?)?;
            let (ds, _) = mnist::mnist_fft_pipeline(
                &train_images,
                &train_labels,
                &test_images,
                &test_labels,
                cfg.keep_coefficients,
            )?;
            classification_csv(&ds, split)
        }
    };
    std::fs::write(path, contents).map_err(|source| ExperimentError::Io {
        path: path.to_string(),
        source,
    })
}

fn selected_rows(len: usize, train: &[usize], validation: &[usize], test: &[usize], split: ExportSplit) -> Vec<usize> {
    match split {
        ExportSplit::All => (0..len).collect(),
        ExportSplit::Train => train.to_vec(),
        ExportSplit::Validation => validation.to_vec(),
        ExportSplit::Test => test.to_vec(),
    }
}

fn feature_header(dim: usize) -> String {
    (0..dim)
        .flat_map(|j| [format!("feat{j}_re"), format!("feat{j}_im")])
        .collect::<Vec<_>>()
        .join(",")
}

fn push_feature_row(out: &mut String, row: &[Complex64]) {
    for (j, z) in row.iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        out.push_str(&format!("{},{}", z.re, z.im));
    }
}

fn regression_csv(ds: &RegressionDataset, split: ExportSplit) -> String {
    let dim = ds.inputs.cols();
    let mut out = format!("{},target_re,target_im\n", feature_header(dim));
    for i in selected_rows(ds.len(), &ds.train, &ds.validation, &ds.test, split) {
        push_feature_row(&mut out, ds.inputs.row(i));
        out.push_str(&format!(",{},{}\n", ds.targets[i].re, ds.targets[i].im));
    }
    out
}

fn classification_csv(ds: &ClassificationDataset, split: ExportSplit) -> String {
    let dim = ds.inputs.cols();
    let mut out = format!("{},label\n", feature_header(dim));
    for i in selected_rows(ds.len(), &ds.train, &[], &ds.test, split) {
        push_feature_row(&mut out, ds.inputs.row(i));
        out.push_str(&format!(",{}\n", ds.labels[i]));
    }
    out
}
