//! CR-calculus derivative containers and the finite-difference oracle.
//!
//! A map `f(z)` that is real-differentiable but not necessarily holomorphic
//! has a pair of complex derivatives,
//!
//! ```text
//! d_z     = (df/da - i df/db) / 2      (R-derivative)
//! d_zstar = (df/da + i df/db) / 2      (R*-derivative)
//! ```
//!
//! where `z = a + ib`. For holomorphic maps `d_zstar = 0`; for real-valued
//! outputs `d_zstar = conj(d_z)`, and the conjugate cogradient points in the
//! direction of steepest ascent — which is why training updates subtract it.

use num_complex::Complex64;
use thiserror::Error;

use crate::tensor::ComplexTensor;

/// The pair of CR derivatives of a scalar map at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirtingerPair {
    /// R-derivative, `∂f/∂z` holding `z*` fixed.
    pub d_z: Complex64,
    /// R*-derivative, `∂f/∂z*` holding `z` fixed.
    pub d_zstar: Complex64,
}

impl WirtingerPair {
    pub fn new(d_z: Complex64, d_zstar: Complex64) -> Self {
        Self { d_z, d_zstar }
    }

    /// Pair of a holomorphic map: the R*-derivative vanishes.
    pub fn holomorphic(d_z: Complex64) -> Self {
        Self {
            d_z,
            d_zstar: Complex64::new(0.0, 0.0),
        }
    }

    pub fn zero() -> Self {
        Self::holomorphic(Complex64::new(0.0, 0.0))
    }
}

/// Builds the derivative pair from the partials of `f = u + iv` with respect
/// to the real coordinates `a` and `b` (each partial itself complex).
pub fn wirtinger_from_real_partials(df_da: Complex64, df_db: Complex64) -> WirtingerPair {
    let i = Complex64::new(0.0, 1.0);
    WirtingerPair {
        d_z: 0.5 * (df_da - i * df_db),
        d_zstar: 0.5 * (df_da + i * df_db),
    }
}

#[derive(Debug, Error)]
pub enum FiniteDiffError {
    #[error("loss returned a non-finite value at probe point (entry {entry}, component {component})")]
    NonFiniteLoss { entry: usize, component: &'static str },
}

/// Default central-difference step: balances truncation against round-off in
/// double precision.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Numerical conjugate cogradient of a real-valued loss over a complex
/// parameter tensor: per entry, `(dJ/da + i dJ/db) / 2` by central
/// differences with step `h`.
pub fn finite_difference_cogradient<F>(
    loss: F,
    w: &ComplexTensor,
    h: f64,
) -> Result<ComplexTensor, FiniteDiffError>
where
    F: Fn(&ComplexTensor) -> f64,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut grad = ComplexTensor::zeros(w.shape().to_vec());
    let mut probe = w.clone();
    for k in 0..w.len() {
        let base = w.data()[k];

        probe.data_mut()[k] = Complex64::new(base.re + h, base.im);
        let jp = loss(&probe);
        probe.data_mut()[k] = Complex64::new(base.re - h, base.im);
        let jm = loss(&probe);
        if !jp.is_finite() || !jm.is_finite() {
            return Err(FiniteDiffError::NonFiniteLoss { entry: k, component: "re" });
        }
        let dj_da = (jp - jm) / (2.0 * h);

        probe.data_mut()[k] = Complex64::new(base.re, base.im + h);
        let jp = loss(&probe);
        probe.data_mut()[k] = Complex64::new(base.re, base.im - h);
        let jm = loss(&probe);
        if !jp.is_finite() || !jm.is_finite() {
            return Err(FiniteDiffError::NonFiniteLoss { entry: k, component: "im" });
        }
        let dj_db = (jp - jm) / (2.0 * h);

        probe.data_mut()[k] = base;
        grad.data_mut()[k] = Complex64::new(0.5 * dj_da, 0.5 * dj_db);
    }
    Ok(grad)
}

/// Numerical derivative of a real-valued loss over a single real parameter.
pub fn finite_difference_real<F>(loss: F, p: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    (loss(p + h) - loss(p - h)) / (2.0 * h)
}

/// Numerical Wirtinger pair of a complex-valued scalar map, from central
/// differences of its real partials.
pub fn finite_difference_pair<F>(f: F, z: Complex64, h: f64) -> WirtingerPair
where
    F: Fn(Complex64) -> Complex64,
{
    let df_da = (f(Complex64::new(z.re + h, z.im)) - f(Complex64::new(z.re - h, z.im))) / (2.0 * h);
    let df_db = (f(Complex64::new(z.re, z.im + h)) - f(Complex64::new(z.re, z.im - h))) / (2.0 * h);
    wirtinger_from_real_partials(df_da, df_db)
}
