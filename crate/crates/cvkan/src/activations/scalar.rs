//! Fixed complex activations and the modReLU.
//!
//! Split functions apply a real nonlinearity to the real and imaginary parts
//! independently; phase-amplitude functions squash the magnitude and keep
//! the phase; the complex tanh is holomorphic away from its imaginary-axis
//! singularities; and the ReLU family covers the complex ReLU (quadrant
//! gate), modReLU (trainable magnitude threshold) and the complex cardioid.
//!
//! Kink conventions: ReLU-type derivatives evaluate to zero on the kink set
//! itself; modReLU and the cardioid return 0 at the origin where their phase
//! is undefined.

use num_complex::Complex64;

use super::{ActivationError, ActivationGrads, ActivationSpec, LayerActivation};
use crate::wirtinger::WirtingerPair;


fn relu(x: f64) -> f64 {
    x.max(0.0)
}

/// Derivative of ReLU with the kink itself treated as inactive.
fn relu_prime(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn sech_sqr(x: f64) -> f64 {
    let t = x.tanh();
    1.0 - t * t
}

/// Split application of a real function: `g(Re z) + i g(Im z)`.
pub fn split_apply<F: Fn(f64) -> f64>(g: F, z: Complex64) -> Complex64 {
    Complex64::new(g(z.re), g(z.im))
}

/// Wirtinger pair of a split activation from the real derivatives of its
/// component functions evaluated at `Re z` and `Im z`.
fn split_pair(g_re_prime: f64, g_im_prime: f64) -> WirtingerPair {
    WirtingerPair::new(
        Complex64::new(0.5 * (g_re_prime + g_im_prime), 0.0),
        Complex64::new(0.5 * (g_re_prime - g_im_prime), 0.0),
    )
}

/// Amplitude-phase squashing `z / (c + |z| / r)`; preserves phase, bounds
/// the magnitude by `r`.
pub fn amp(z: Complex64, c: f64, r: f64) -> Complex64 {
    z / (c + z.norm() / r)
}

fn amp_pair(z: Complex64, c: f64, r: f64) -> WirtingerPair {
    let m = z.norm();
    if m == 0.0 {
        return WirtingerPair::holomorphic(Complex64::new(1.0 / c, 0.0));
    }
    let denom = c + m / r;
    let dd = 2.0 * r * denom * denom;
    WirtingerPair::new(
        Complex64::new(1.0 / denom - m / dd, 0.0),
        -(z * z) / (m * dd),
    )
}

/// Phase-amplitude tanh `tanh(|z| / m) exp(i phi(z))`, with `g(0) = 0`.
pub fn pa_tanh(z: Complex64, m: f64) -> Complex64 {
    let rho = z.norm();
    if rho == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    z * ((rho / m).tanh() / rho)
}

fn pa_tanh_pair(z: Complex64, m: f64) -> WirtingerPair {
    let rho = z.norm();
    if rho == 0.0 {
        return WirtingerPair::holomorphic(Complex64::new(1.0 / m, 0.0));
    }
    // g = z f(rho) with f(rho) = tanh(rho/m)/rho.
    let f = (rho / m).tanh() / rho;
    let fp = (sech_sqr(rho / m) / m - (rho / m).tanh() / rho) / rho;
    WirtingerPair::new(
        Complex64::new(f + 0.5 * rho * fp, 0.0),
        z * z * (fp / (2.0 * rho)),
    )
}

const TANH_SINGULARITY_GUARD: f64 = 1e-6;

/// Distance from `z` to the nearest singularity `i (n + 1/2) pi` of the
/// complex tanh.
fn tanh_singularity_distance(z: Complex64) -> f64 {
    let pi = std::f64::consts::PI;
    let n = (z.im / pi - 0.5).round();
    let nearest = (n + 0.5) * pi;
    (z.re * z.re + (z.im - nearest) * (z.im - nearest)).sqrt()
}

/// Fully complex hyperbolic tangent. Signals instead of evaluating within
/// `1e-6` of a singular point.
pub fn complex_tanh(z: Complex64) -> Result<Complex64, ActivationError> {
    let distance = tanh_singularity_distance(z);
    if distance < TANH_SINGULARITY_GUARD {
        return Err(ActivationError::NearSingularity { z, distance });
    }
    Ok(z.tanh())
}

/// Complex ReLU: identity on the closed positive quadrant, zero elsewhere.
pub fn crelu(z: Complex64) -> Complex64 {
    if z.re >= 0.0 && z.im >= 0.0 {
        z
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// modReLU `ReLU(|z| + b) exp(i phi(z))` with trainable radius `b`;
/// returns 0 at the origin where the phase is undefined.
pub fn modrelu(z: Complex64, b: f64) -> Complex64 {
    let m = z.norm();
    if m == 0.0 || m + b <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    z * ((m + b) / m)
}

/// Complex cardioid `(1 + cos phi(z)) z / 2`; reduces to ReLU on the real
/// line.
pub fn cardioid(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    0.5 * (1.0 + z.arg().cos()) * z
}

fn cardioid_pair(z: Complex64) -> WirtingerPair {
    let m = z.norm();
    if m == 0.0 {
        return WirtingerPair::zero();
    }
    let u = z / m; // exp(i phi)
    WirtingerPair::new(
        Complex64::new(0.5, 0.0) + (3.0 * u + u.conj()) / 8.0,
        (u - u * u * u) / 8.0,
    )
}

/// The ten fixed scalar activations, as zero-sized strategy types wrapped by
/// [`Fixed`].
#[derive(Debug, Clone, Copy, PartialEq)]
enum FixedKind {
    Identity,
    SplitTanh,
    SplitRelu,
    RealTanh,
    RealRelu,
    Amp,
    PaTanh,
    ComplexTanh,
    CRelu,
    Cardioid,
}

impl FixedKind {
    fn name(self) -> &'static str {
        match self {
            FixedKind::Identity => "identity",
            FixedKind::SplitTanh => "split_tanh",
            FixedKind::SplitRelu => "split_relu",
            FixedKind::RealTanh => "real_tanh",
            FixedKind::RealRelu => "real_relu",
            FixedKind::Amp => "amp",
            FixedKind::PaTanh => "pa_tanh",
            FixedKind::ComplexTanh => "complex_tanh",
            FixedKind::CRelu => "crelu",
            FixedKind::Cardioid => "cardioid",
        }
    }
}

/// Adapter exposing a fixed scalar activation as a [`LayerActivation`].
/// The phase-amplitude constants are fixed at `c = r = m = 1`.
#[derive(Debug, Clone)]
struct Fixed {
    kind: FixedKind,
}

impl LayerActivation for Fixed {
    fn name(&self) -> &'static str {
        self.kind.name()
    }

    fn value(&self, _neuron: usize, z: Complex64) -> Result<Complex64, ActivationError> {
        Ok(match self.kind {
            FixedKind::Identity => z,
            FixedKind::SplitTanh => split_apply(f64::tanh, z),
            FixedKind::SplitRelu => split_apply(relu, z),
            FixedKind::RealTanh => Complex64::new(z.re.tanh(), 0.0),
            FixedKind::RealRelu => Complex64::new(relu(z.re), 0.0),
            FixedKind::Amp => amp(z, 1.0, 1.0),
            FixedKind::PaTanh => pa_tanh(z, 1.0),
            FixedKind::ComplexTanh => complex_tanh(z)?,
            FixedKind::CRelu => crelu(z),
            FixedKind::Cardioid => cardioid(z),
        })
    }

    fn wirtinger(&self, _neuron: usize, z: Complex64) -> Result<WirtingerPair, ActivationError> {
        Ok(match self.kind {
            FixedKind::Identity => WirtingerPair::holomorphic(Complex64::new(1.0, 0.0)),
            FixedKind::SplitTanh => split_pair(sech_sqr(z.re), sech_sqr(z.im)),
            FixedKind::SplitRelu => split_pair(relu_prime(z.re), relu_prime(z.im)),
            FixedKind::RealTanh => {
                let d = 0.5 * sech_sqr(z.re);
                WirtingerPair::new(Complex64::new(d, 0.0), Complex64::new(d, 0.0))
            }
            FixedKind::RealRelu => {
                let d = 0.5 * relu_prime(z.re);
                WirtingerPair::new(Complex64::new(d, 0.0), Complex64::new(d, 0.0))
            }
            FixedKind::Amp => amp_pair(z, 1.0, 1.0),
            FixedKind::PaTanh => pa_tanh_pair(z, 1.0),
            FixedKind::ComplexTanh => {
                let t = complex_tanh(z)?;
                WirtingerPair::holomorphic(Complex64::new(1.0, 0.0) - t * t)
            }
            FixedKind::CRelu => {
                if z.re > 0.0 && z.im > 0.0 {
                    WirtingerPair::holomorphic(Complex64::new(1.0, 0.0))
                } else {
                    WirtingerPair::zero()
                }
            }
            FixedKind::Cardioid => cardioid_pair(z),
        })
    }

    fn kink_margin(&self, _neuron: usize, z: Complex64) -> f64 {
        match self.kind {
            FixedKind::Identity | FixedKind::SplitTanh | FixedKind::RealTanh => f64::INFINITY,
            FixedKind::SplitRelu | FixedKind::CRelu => z.re.abs().min(z.im.abs()),
            FixedKind::RealRelu => z.re.abs(),
            FixedKind::Amp | FixedKind::PaTanh | FixedKind::Cardioid => z.norm(),
            FixedKind::ComplexTanh => tanh_singularity_distance(z),
        }
    }

    fn boxed_clone(&self) -> Box<dyn LayerActivation> {
        Box::new(self.clone())
    }

    fn spec(&self) -> ActivationSpec {
        ActivationSpec::named(self.kind.name())
    }
}

/// modReLU across a layer: one trainable radius per neuron, initialized at
/// 0.1 and exempt from regularization.
#[derive(Debug, Clone)]
pub struct ModRelu {
    radius: Vec<f64>,
}

pub(super) const MODRELU_INIT_RADIUS: f64 = 0.1;

impl ModRelu {
    pub fn new(width: usize) -> Self {
        Self {
            radius: vec![MODRELU_INIT_RADIUS; width],
        }
    }
}

impl LayerActivation for ModRelu {
    fn name(&self) -> &'static str {
        "modrelu"
    }

    fn value(&self, neuron: usize, z: Complex64) -> Result<Complex64, ActivationError> {
        Ok(modrelu(z, self.radius[neuron]))
    }

    fn wirtinger(&self, neuron: usize, z: Complex64) -> Result<WirtingerPair, ActivationError> {
        let b = self.radius[neuron];
        let m = z.norm();
        if m == 0.0 || m + b <= 0.0 {
            return Ok(WirtingerPair::zero());
        }
        // g = z + b z / |z|.
        Ok(WirtingerPair::new(
            Complex64::new(1.0 + b / (2.0 * m), 0.0),
            -(z * z) * (b / (2.0 * m * m * m)),
        ))
    }

    fn accumulate_param_grads(
        &self,
        neuron: usize,
        z: Complex64,
        delta: Complex64,
        grads: &mut ActivationGrads,
    ) -> Result<(), ActivationError> {
        let m = z.norm();
        if m == 0.0 || m + self.radius[neuron] <= 0.0 {
            return Ok(());
        }
        // d(output)/db = exp(i phi) = z / |z|; real-parameter rule.
        grads.real[neuron] += 2.0 * (delta.conj() * (z / m)).re;
        Ok(())
    }

    fn real_params(&self) -> &[f64] {
        &self.radius
    }

    fn real_params_mut(&mut self) -> &mut [f64] {
        &mut self.radius
    }

    fn params_regularized(&self) -> bool {
        false
    }

    fn kink_margin(&self, neuron: usize, z: Complex64) -> f64 {
        let m = z.norm();
        m.min((m + self.radius[neuron]).abs())
    }

    fn boxed_clone(&self) -> Box<dyn LayerActivation> {
        Box::new(self.clone())
    }

    fn spec(&self) -> ActivationSpec {
        ActivationSpec::named("modrelu")
    }
}

/// Builds the fixed kinds and modReLU; returns `None` for names owned by
/// other families.
pub(super) fn build_scalar(
    spec: &ActivationSpec,
    width: usize,
) -> Option<Box<dyn LayerActivation>> {
    let kind = match spec.name.as_str() {
        "identity" => FixedKind::Identity,
        "split_tanh" => FixedKind::SplitTanh,
        "split_relu" => FixedKind::SplitRelu,
        "real_tanh" => FixedKind::RealTanh,
        "real_relu" => FixedKind::RealRelu,
        "amp" => FixedKind::Amp,
        "pa_tanh" => FixedKind::PaTanh,
        "complex_tanh" => FixedKind::ComplexTanh,
        "crelu" => FixedKind::CRelu,
        "cardioid" => FixedKind::Cardioid,
        "modrelu" => return Some(Box::new(ModRelu::new(width))),
        _ => return None,
    };
    Some(Box::new(Fixed { kind }))
}
