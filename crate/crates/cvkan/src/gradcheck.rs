//! Finite-difference validation of the analytic gradients.
//!
//! For every registered activation kind, small networks are built for both
//! heads (a 3-5-1 regression net and a 4-5-3 classification net), inputs are
//! resampled until every pre-activation sits at least `1e-3` away from the
//! activation's kinks and singularities, and every parameter's analytic
//! gradient is compared against central finite differences of the batch
//! loss. The report lists the worst relative deviation per kind.

use num_complex::Complex64;

use crate::activations::{ActivationSpec, ACTIVATION_NAMES};
use crate::network::{Head, LayerSpec, Network, Targets};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;

/// Gradcheck passes when every deviation is at or below this.
pub const GRADCHECK_TOLERANCE: f64 = 1e-4;

/// Relative error floor: deviations are measured against
/// `max(|analytic|, |numeric|, GRADCHECK_FLOOR)`.
pub const GRADCHECK_FLOOR: f64 = 1e-4;

const FD_STEP: f64 = 1e-5;
const KINK_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct KindReport {
    pub name: &'static str,
    pub max_rel_err: f64,
}

#[derive(Debug, Clone)]
pub struct GradcheckReport {
    pub tolerance: f64,
    pub seeds: u64,
    pub kinds: Vec<KindReport>,
}

impl GradcheckReport {
    pub fn passed(&self) -> bool {
        self.kinds.iter().all(|k| k.max_rel_err <= self.tolerance)
    }

    pub fn failing_kinds(&self) -> Vec<&'static str> {
        self.kinds
            .iter()
            .filter(|k| k.max_rel_err > self.tolerance)
            .map(|k| k.name)
            .collect()
    }

    /// One line per activation kind plus a verdict line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "gradient check: {} seeds per kind, tolerance {:.0e}\n",
            self.seeds, self.tolerance
        ));
        for kind in &self.kinds {
            let verdict = if kind.max_rel_err <= self.tolerance {
                "ok"
            } else {
                "FAIL"
            };
            out.push_str(&format!(
                "  {:<14} max rel err {:>10.3e}  {}\n",
                kind.name, kind.max_rel_err, verdict
            ));
        }
        out.push_str(if self.passed() { "PASSED\n" } else { "FAILED\n" });
        out
    }
}

fn spec_for(name: &str) -> ActivationSpec {
    match name {
        "complex_kaf" => ActivationSpec::complex_kaf_defaults(),
        "split_kaf" => ActivationSpec::split_kaf_defaults(),
        other => ActivationSpec::named(other),
    }
}

/// Runs the analytic-vs-finite-difference comparison for every activation
/// kind and both heads. `corrupt` deliberately scales the analytic
/// gradients of the named kind so a failure path can be exercised.
pub fn run_gradcheck(seeds: u64, corrupt: Option<&str>) -> GradcheckReport {
    let kinds = ACTIVATION_NAMES
        .iter()
        .map(|&name| {
            let corrupted = corrupt == Some(name);
            let mut worst: f64 = 0.0;
            for seed in 0..seeds {
                for head in [Head::Regression, Head::SoftmaxClassification] {
                    let err = check_kind(name, head, seed, corrupted);
                    worst = worst.max(err);
                }
            }
            KindReport {
                name,
                max_rel_err: worst,
            }
        })
        .collect();
    GradcheckReport {
        tolerance: GRADCHECK_TOLERANCE,
        seeds,
        kinds,
    }
}

fn check_kind(name: &'static str, head: Head, seed: u64, corrupted: bool) -> f64 {
    let mut rng = Rng::with_seed(seed.wrapping_mul(1013).wrapping_add(offset_of(name, head)));
    let (input_dim, hidden, classes) = match head {
        Head::Regression => (3, 5, 0),
        Head::SoftmaxClassification => (4, 5, 3),
    };
    let output_dim = if head == Head::Regression { 1 } else { classes };
    let net = Network::build(
        input_dim,
        &[
            LayerSpec::new(hidden, spec_for(name)),
            LayerSpec::new(output_dim, ActivationSpec::named("identity")),
        ],
        head,
        false,
        &mut rng,
    )
    .expect("gradcheck network");

    let batch = 3;
    let (inputs, regression_targets, class_targets) = loop {
        let data: Vec<Complex64> = (0..batch * input_dim)
            .map(|_| Complex64::new(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0)))
            .collect();
        let candidate = ComplexTensor::matrix(batch, input_dim, data).expect("input shape");
        if pre_activations_clear_of_kinks(&net, &candidate) {
            let ys: Vec<Complex64> = (0..batch)
                .map(|_| Complex64::new(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0)))
                .collect();
            let labels: Vec<u8> = (0..batch).map(|_| rng.index(classes.max(1)) as u8).collect();
            break (candidate, ys, labels);
        }
    };
    let targets = match head {
        Head::Regression => Targets::Regression(&regression_targets),
        Head::SoftmaxClassification => Targets::Classes(&class_targets),
    };

    let cache = net.forward(&inputs).expect("gradcheck forward");
    let analytic = net.backward(&cache, targets).expect("gradcheck backward");
    let corruption = if corrupted { 1.5 } else { 1.0 };

    let loss_of = |probe: &Network| -> f64 {
        let cache = probe.forward(&inputs).expect("probe forward");
        probe.batch_loss(&cache, targets).expect("probe loss")
    };

    let mut worst: f64 = 0.0;
    let mut probe = net.clone();
    for l in 0..net.layers.len() {
        // Complex weights and biases: finite-difference conjugate cogradient.
        for k in 0..net.layers[l].weights.len() {
            let base = net.layers[l].weights.data()[k];
            let fd = fd_cogradient(&mut probe, &loss_of, |n, v| {
                n.layers[l].weights.data_mut()[k] = v;
            }, base);
            let a = corruption * analytic.layers[l].weights.data()[k];
            worst = worst.max(rel_err(a, fd));
        }
        for k in 0..net.layers[l].bias.len() {
            let base = net.layers[l].bias[k];
            let fd = fd_cogradient(&mut probe, &loss_of, |n, v| {
                n.layers[l].bias[k] = v;
            }, base);
            let a = corruption * analytic.layers[l].bias[k];
            worst = worst.max(rel_err(a, fd));
        }
        // Real activation parameters.
        for k in 0..net.layers[l].activation.real_params().len() {
            let base = net.layers[l].activation.real_params()[k];
            probe.layers[l].activation.real_params_mut()[k] = base + FD_STEP;
            let jp = loss_of(&probe);
            probe.layers[l].activation.real_params_mut()[k] = base - FD_STEP;
            let jm = loss_of(&probe);
            probe.layers[l].activation.real_params_mut()[k] = base;
            let fd = (jp - jm) / (2.0 * FD_STEP);
            let a = corruption * analytic.layers[l].activation.real[k];
            worst = worst.max(rel_err(Complex64::new(a, 0.0), Complex64::new(fd, 0.0)));
        }
        // Complex activation parameters.
        for k in 0..net.layers[l].activation.complex_params().len() {
            let base = net.layers[l].activation.complex_params()[k];
            let fd = fd_cogradient(&mut probe, &loss_of, |n, v| {
                n.layers[l].activation.complex_params_mut()[k] = v;
            }, base);
            let a = corruption * analytic.layers[l].activation.complex[k];
            worst = worst.max(rel_err(a, fd));
        }
    }
    worst
}

fn offset_of(name: &str, head: Head) -> u64 {
    let kind_index = ACTIVATION_NAMES
        .iter()
        .position(|&n| n == name)
        .expect("registered kind") as u64;
    kind_index * 2 + if head == Head::Regression { 0 } else { 1 }
}

/// All pre-activations of every layer must clear the activation's kink
/// margin, so finite-difference probes cannot cross a non-smooth point.
fn pre_activations_clear_of_kinks(net: &Network, inputs: &ComplexTensor) -> bool {
    let cache = match net.forward(inputs) {
        Ok(cache) => cache,
        Err(_) => return false,
    };
    for (layer, pre) in net.layers.iter().zip(&cache.pre) {
        for s in 0..pre.rows() {
            for n in 0..pre.cols() {
                if layer.activation.kink_margin(n, pre.row(s)[n]) < KINK_MARGIN {
                    return false;
                }
            }
        }
    }
    true
}

fn fd_cogradient<F, S>(probe: &mut Network, loss: &F, mut set: S, base: Complex64) -> Complex64
where
    F: Fn(&Network) -> f64,
    S: FnMut(&mut Network, Complex64),
{
    set(probe, Complex64::new(base.re + FD_STEP, base.im));
    let jpa = loss(probe);
    set(probe, Complex64::new(base.re - FD_STEP, base.im));
    let jma = loss(probe);
    set(probe, Complex64::new(base.re, base.im + FD_STEP));
    let jpb = loss(probe);
    set(probe, Complex64::new(base.re, base.im - FD_STEP));
    let jmb = loss(probe);
    set(probe, base);
    Complex64::new(
        0.5 * (jpa - jma) / (2.0 * FD_STEP),
        0.5 * (jpb - jmb) / (2.0 * FD_STEP),
    )
}

fn rel_err(analytic: Complex64, numeric: Complex64) -> f64 {
    (analytic - numeric).norm() / analytic.norm().max(numeric.norm()).max(GRADCHECK_FLOOR)
}
