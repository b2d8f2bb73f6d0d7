//! Kernel functions and dictionaries for kernel activation functions.
//!
//! The split KAF expands over a one-dimensional grid with the real Gaussian
//! kernel; the fully complex KAF expands over the Cartesian square of that
//! grid with a complex-valued kernel. All kernels here are positive
//! semi-definite on their domain, which the test suite verifies through a
//! Gram-matrix eigenvalue oracle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::ComplexTensor;
use crate::wirtinger::WirtingerPair;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("kernel bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("dictionary needs at least 2 elements, got {0}")]
    DictionaryTooSmall(usize),
    #[error("dictionary range is empty: lo {lo} must be below hi {hi}")]
    EmptyRange { lo: f64, hi: f64 },
    #[error("unknown kernel '{0}' (expected real_gaussian, complex_gaussian, independent or szego)")]
    UnknownKernel(String),
    #[error("szego kernel domain error: {0}")]
    SzegoDomain(String),
}

/// The kernel families available to experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    RealGaussian,
    ComplexGaussian,
    #[serde(rename = "independent")]
    IndependentGaussian,
    Szego,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [
        KernelKind::RealGaussian,
        KernelKind::ComplexGaussian,
        KernelKind::IndependentGaussian,
        KernelKind::Szego,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::RealGaussian => "real_gaussian",
            KernelKind::ComplexGaussian => "complex_gaussian",
            KernelKind::IndependentGaussian => "independent",
            KernelKind::Szego => "szego",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, KernelError> {
        match name {
            "real_gaussian" => Ok(KernelKind::RealGaussian),
            "complex_gaussian" => Ok(KernelKind::ComplexGaussian),
            "independent" => Ok(KernelKind::IndependentGaussian),
            "szego" => Ok(KernelKind::Szego),
            other => Err(KernelError::UnknownKernel(other.to_string())),
        }
    }
}

/// Bandwidth rule of thumb for a uniform grid with spacing `delta`:
/// `gamma = 1 / (6 delta^2)`.
pub fn bandwidth_rule(delta: f64) -> Result<f64, KernelError> {
    if delta <= 0.0 {
        return Err(KernelError::InvalidBandwidth(delta));
    }
    Ok(1.0 / (6.0 * delta * delta))
}

/// 1-D Gaussian kernel `exp(-gamma (s - d)^2)`.
pub fn real_gaussian(s: f64, d: f64, gamma: f64) -> f64 {
    let diff = s - d;
    (-gamma * diff * diff).exp()
}

/// Derivative of [`real_gaussian`] with respect to its first argument.
pub fn real_gaussian_ds(s: f64, d: f64, gamma: f64) -> f64 {
    -2.0 * gamma * (s - d) * real_gaussian(s, d, gamma)
}

/// Derivative of [`real_gaussian`] with respect to the bandwidth.
pub fn real_gaussian_dgamma(s: f64, d: f64, gamma: f64) -> f64 {
    let diff = s - d;
    -diff * diff * real_gaussian(s, d, gamma)
}

/// Complex Gaussian kernel `exp(-gamma (z - d*)^2)`.
///
/// Holomorphic in `z`, but not a similarity measure: equal arguments do not
/// evaluate to 1 unless they are real.
pub fn complex_gaussian(z: Complex64, d: Complex64, gamma: f64) -> Complex64 {
    let diff = z - d.conj();
    (-gamma * diff * diff).exp()
}

/// The complex Gaussian kernel written out in real and imaginary components:
/// with `p = z_r - d_r` and `q = z_i + d_i`,
/// `exp(-gamma p^2) exp(gamma q^2) (cos(2 gamma p q) - i sin(2 gamma p q))`.
pub fn complex_gaussian_expanded(z: Complex64, d: Complex64, gamma: f64) -> Complex64 {
    let p = z.re - d.re;
    let q = z.im + d.im;
    let magnitude = (-gamma * p * p).exp() * (gamma * q * q).exp();
    let angle = 2.0 * gamma * p * q;
    Complex64::new(magnitude * angle.cos(), -magnitude * angle.sin())
}

/// Value, R-derivative in `z`, and bandwidth derivative of the complex
/// Gaussian. The R*-derivative is identically zero.
pub fn complex_gaussian_with_grad(
    z: Complex64,
    d: Complex64,
    gamma: f64,
) -> (Complex64, Complex64, Complex64) {
    let diff = z - d.conj();
    let sq = diff * diff;
    let value = (-gamma * sq).exp();
    (value, -2.0 * gamma * diff * value, -sq * value)
}

/// Independent kernel built from a real base kernel applied to the component
/// pairs:
/// `kR(z_r, d_r) + kR(z_i, d_i) + i (kR(z_r, d_i) - kR(z_i, d_r))`.
pub fn independent_kernel(z: Complex64, d: Complex64, gamma: f64) -> Complex64 {
    Complex64::new(
        real_gaussian(z.re, d.re, gamma) + real_gaussian(z.im, d.im, gamma),
        real_gaussian(z.re, d.im, gamma) - real_gaussian(z.im, d.re, gamma),
    )
}

/// Value, Wirtinger pair in `z`, and bandwidth derivative of the independent
/// kernel.
pub fn independent_kernel_with_grad(
    z: Complex64,
    d: Complex64,
    gamma: f64,
) -> (Complex64, WirtingerPair, Complex64) {
    let value = independent_kernel(z, d, gamma);
    // Partials with respect to the real coordinates a = Re z, b = Im z.
    let df_da = Complex64::new(
        real_gaussian_ds(z.re, d.re, gamma),
        real_gaussian_ds(z.re, d.im, gamma),
    );
    let df_db = Complex64::new(
        real_gaussian_ds(z.im, d.im, gamma),
        -real_gaussian_ds(z.im, d.re, gamma),
    );
    let i = Complex64::new(0.0, 1.0);
    let pair = WirtingerPair::new(0.5 * (df_da - i * df_db), 0.5 * (df_da + i * df_db));
    let dgamma = Complex64::new(
        real_gaussian_dgamma(z.re, d.re, gamma) + real_gaussian_dgamma(z.im, d.im, gamma),
        real_gaussian_dgamma(z.re, d.im, gamma) - real_gaussian_dgamma(z.im, d.re, gamma),
    );
    (value, pair, dgamma)
}

const SZEGO_POLE_GUARD: f64 = 1e-9;

/// Szego kernel `1 / (1 - z d*)^2` on the open unit disk.
pub fn szego_kernel(z: Complex64, d: Complex64) -> Result<Complex64, KernelError> {
    if z.norm() >= 1.0 {
        return Err(KernelError::SzegoDomain(format!(
            "|z| = {} is outside the open unit disk",
            z.norm()
        )));
    }
    if d.norm() >= 1.0 {
        return Err(KernelError::SzegoDomain(format!(
            "|d| = {} is outside the open unit disk",
            d.norm()
        )));
    }
    let denom = Complex64::new(1.0, 0.0) - z * d.conj();
    if denom.norm() < SZEGO_POLE_GUARD {
        return Err(KernelError::SzegoDomain(format!(
            "|1 - z d*| = {} is inside the pole guard",
            denom.norm()
        )));
    }
    Ok(1.0 / (denom * denom))
}

/// Evaluates any kernel kind at a pair of complex points. The real Gaussian
/// acts on the real parts of its arguments.
pub fn kernel_eval(
    kind: KernelKind,
    z: Complex64,
    d: Complex64,
    gamma: f64,
) -> Result<Complex64, KernelError> {
    match kind {
        KernelKind::RealGaussian => Ok(Complex64::new(real_gaussian(z.re, d.re, gamma), 0.0)),
        KernelKind::ComplexGaussian => Ok(complex_gaussian(z, d, gamma)),
        KernelKind::IndependentGaussian => Ok(independent_kernel(z, d, gamma)),
        KernelKind::Szego => szego_kernel(z, d),
    }
}

/// Gram matrix `G[n][m] = k(points[n], points[m])`.
pub fn gram_matrix(
    kind: KernelKind,
    points: &[Complex64],
    gamma: f64,
) -> Result<ComplexTensor, KernelError> {
    let m = points.len();
    let mut gram = ComplexTensor::zeros(vec![m, m]);
    for (n, &zn) in points.iter().enumerate() {
        for (t, &zt) in points.iter().enumerate() {
            gram.row_mut(n)[t] = kernel_eval(kind, zn, zt, gamma)?;
        }
    }
    Ok(gram)
}

/// Fixed grid of kernel centers shared by every KAF in a network, plus the
/// initial bandwidth. One-dimensional dictionaries hold `D` points on the
/// real line; two-dimensional ones hold the `D^2` grid `d_n + i d_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDictionary {
    axis: Vec<f64>,
    elements: ComplexTensor,
    spacing: f64,
    gamma: f64,
    two_dimensional: bool,
}

impl KernelDictionary {
    /// `D` equispaced points with endpoints `lo` and `hi`; the bandwidth is
    /// initialized from the grid spacing via [`bandwidth_rule`].
    pub fn build_1d(size: usize, lo: f64, hi: f64) -> Result<Self, KernelError> {
        let axis = build_axis(size, lo, hi)?;
        let spacing = (hi - lo) / (size - 1) as f64;
        let gamma = bandwidth_rule(spacing)?;
        let elements =
            ComplexTensor::from_vec(axis.iter().map(|&d| Complex64::new(d, 0.0)).collect());
        Ok(Self {
            axis,
            elements,
            spacing,
            gamma,
            two_dimensional: false,
        })
    }

    /// Cartesian square of the 1-D grid: element `(n, m)` is `d_n + i d_m`.
    /// The bandwidth comes from the per-axis spacing.
    pub fn build_2d(size: usize, lo: f64, hi: f64) -> Result<Self, KernelError> {
        let axis = build_axis(size, lo, hi)?;
        let spacing = (hi - lo) / (size - 1) as f64;
        let gamma = bandwidth_rule(spacing)?;
        let mut data = Vec::with_capacity(size * size);
        for &dn in &axis {
            for &dm in &axis {
                data.push(Complex64::new(dn, dm));
            }
        }
        let elements = ComplexTensor::new(vec![size, size], data).expect("grid shape");
        Ok(Self {
            axis,
            elements,
            spacing,
            gamma,
            two_dimensional: true,
        })
    }

    pub fn size(&self) -> usize {
        self.axis.len()
    }

    /// The underlying 1-D grid (also the per-axis grid of a 2-D dictionary).
    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn elements(&self) -> &ComplexTensor {
        &self.elements
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Initial bandwidth from the rule of thumb; layers adapt their own copy
    /// during training.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_two_dimensional(&self) -> bool {
        self.two_dimensional
    }

    /// Grid element `d_n + i d_m` of a 2-D dictionary.
    pub fn grid_element(&self, n: usize, m: usize) -> Complex64 {
        Complex64::new(self.axis[n], self.axis[m])
    }
}

fn build_axis(size: usize, lo: f64, hi: f64) -> Result<Vec<f64>, KernelError> {
    if size < 2 {
        return Err(KernelError::DictionaryTooSmall(size));
    }
    if lo >= hi {
        return Err(KernelError::EmptyRange { lo, hi });
    }
    let step = (hi - lo) / (size - 1) as f64;
    Ok((0..size).map(|k| lo + step * k as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use crate::testing::{assert_cplx_close, assert_f64_close};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dictionary_fig3_layout() {
        let dict = KernelDictionary::build_1d(4, -1.5, 1.5).unwrap();
        assert_eq!(dict.axis(), &[-1.5, -0.5, 0.5, 1.5]);
        assert_f64_close(dict.spacing(), 1.0, 1e-15);
    }

    #[test]
    fn dictionary_two_points() {
        let dict = KernelDictionary::build_1d(2, -1.0, 1.0).unwrap();
        assert_eq!(dict.axis(), &[-1.0, 1.0]);
        assert_f64_close(dict.spacing(), 2.0, 1e-15);
    }

    #[test]
    fn dictionary_default_split_spacing() {
        let dict = KernelDictionary::build_1d(20, -2.0, 2.0).unwrap();
        assert_f64_close(dict.spacing(), 4.0 / 19.0, 1e-15);
        assert_f64_close(dict.gamma(), 361.0 / 96.0, 1e-12);
    }

    #[test]
    fn dictionary_rejects_degenerate_inputs() {
        assert!(matches!(
            KernelDictionary::build_1d(1, -1.0, 1.0),
            Err(KernelError::DictionaryTooSmall(1))
        ));
        assert!(matches!(
            KernelDictionary::build_1d(4, 1.0, -1.0),
            Err(KernelError::EmptyRange { .. })
        ));
    }

    #[test]
    fn dictionary_grid_is_cartesian_square() {
        let dict = KernelDictionary::build_2d(3, -1.0, 1.0).unwrap();
        assert_eq!(dict.elements().shape(), &[3, 3]);
        assert_eq!(dict.grid_element(0, 2), c(-1.0, 1.0));
        assert_eq!(dict.elements().get(&[0, 2]), Some(c(-1.0, 1.0)));
        assert_eq!(dict.elements().get(&[2, 1]), Some(c(1.0, 0.0)));
    }

    #[test]
    fn dictionary_axis_is_uniform_and_symmetric() {
        let dict = KernelDictionary::build_1d(20, -2.0, 2.0).unwrap();
        let axis = dict.axis();
        for w in axis.windows(2) {
            assert!(w[1] > w[0]);
            assert_f64_close(w[1] - w[0], dict.spacing(), 1e-12);
        }
        for k in 0..axis.len() {
            assert_f64_close(axis[k], -axis[axis.len() - 1 - k], 1e-12);
        }
    }

    #[test]
    fn bandwidth_rule_values() {
        assert_f64_close(bandwidth_rule(1.0).unwrap(), 1.0 / 6.0, 1e-15);
        assert_f64_close(bandwidth_rule(4.0 / 19.0).unwrap(), 361.0 / 96.0, 1e-12);
        // Scaling delta by 2 scales gamma by 1/4.
        let g1 = bandwidth_rule(0.37).unwrap();
        let g2 = bandwidth_rule(0.74).unwrap();
        assert_f64_close(g2, g1 / 4.0, 1e-15);
        assert!(bandwidth_rule(0.0).is_err());
        assert!(bandwidth_rule(-1.0).is_err());
    }

    #[test]
    fn real_gaussian_values() {
        assert_f64_close(real_gaussian(0.7, 0.7, 2.0), 1.0, 1e-15);
        assert_f64_close(real_gaussian(1.0, 0.0, 1.0), (-1.0f64).exp(), 1e-15);
        let mut rng = Rng::with_seed(3);
        for _ in 0..100 {
            let s = rng.uniform_in(-3.0, 3.0);
            let d = rng.uniform_in(-3.0, 3.0);
            assert_f64_close(
                real_gaussian(s, d, 0.8),
                real_gaussian(d, s, 0.8),
                1e-15,
            );
        }
    }

    #[test]
    fn complex_gaussian_values() {
        assert_cplx_close(complex_gaussian(c(0.0, 0.0), c(0.0, 0.0), 1.0), c(1.0, 0.0), 1e-15);
        // Equal arguments do not give 1: z = d = i gives exp(4).
        assert_cplx_close(
            complex_gaussian(c(0.0, 1.0), c(0.0, 1.0), 1.0),
            c(4.0f64.exp(), 0.0),
            1e-11,
        );
        // Real arguments reduce to the real Gaussian.
        assert_cplx_close(complex_gaussian(c(1.0, 0.0), c(1.0, 0.0), 1.0), c(1.0, 0.0), 1e-15);
    }

    #[test]
    fn complex_gaussian_matches_expanded_form() {
        let mut rng = Rng::with_seed(11);
        for gamma in [0.01, 0.1, 1.0] {
            for _ in 0..1000 {
                let z = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
                let d = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
                let direct = complex_gaussian(z, d, gamma);
                let expanded = complex_gaussian_expanded(z, d, gamma);
                assert!(
                    (direct - expanded).norm() <= 1e-12 * direct.norm().max(1.0),
                    "direct {direct} vs expanded {expanded} at z={z}, d={d}, gamma={gamma}"
                );
            }
        }
    }

    #[test]
    fn independent_kernel_values() {
        let mut rng = Rng::with_seed(5);
        for _ in 0..20 {
            let z = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
            assert_cplx_close(independent_kernel(z, z, 1.3), c(2.0, 0.0), 1e-14);
        }
        let e1 = (-1.0f64).exp();
        assert_cplx_close(
            independent_kernel(c(0.0, 0.0), c(1.0, 0.0), 1.0),
            c(e1 + 1.0, 1.0 - e1),
            1e-14,
        );
    }

    #[test]
    fn complex_kernels_are_hermitian() {
        let mut rng = Rng::with_seed(17);
        for _ in 0..1000 {
            let z = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
            let d = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
            let gamma = rng.uniform_in(0.05, 2.0);
            for kind in [KernelKind::ComplexGaussian, KernelKind::IndependentGaussian] {
                let kzd = kernel_eval(kind, z, d, gamma).unwrap();
                let kdz = kernel_eval(kind, d, z, gamma).unwrap();
                assert!(
                    (kzd - kdz.conj()).norm() <= 1e-12 * kzd.norm().max(1.0),
                    "{} not Hermitian at z={z}, d={d}",
                    kind.name()
                );
            }
            let zd = z * 0.3;
            let dd = d * 0.3;
            let kzd = szego_kernel(zd, dd).unwrap();
            let kdz = szego_kernel(dd, zd).unwrap();
            assert!((kzd - kdz.conj()).norm() <= 1e-12 * kzd.norm().max(1.0));
        }
    }

    #[test]
    fn szego_values_and_domain() {
        assert_cplx_close(szego_kernel(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-15);
        assert_cplx_close(
            szego_kernel(c(0.5, 0.0), c(0.5, 0.0)).unwrap(),
            c(1.0 / 0.5625, 0.0),
            1e-12,
        );
        // 1 / (1 - 0.25 i)^2, computed independently by hand:
        // (1 - 0.25 i)^2 = 0.9375 - 0.5 i, inverse = (0.9375 + 0.5 i) / 1.12890625.
        assert_cplx_close(
            szego_kernel(c(0.0, 0.5), c(0.5, 0.0)).unwrap(),
            c(0.9375 / 1.12890625, 0.5 / 1.12890625),
            1e-12,
        );
        assert!(szego_kernel(c(1.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(szego_kernel(c(0.2, 0.0), c(0.3, 1.1)).is_err());
    }

    #[test]
    fn kernel_kind_round_trips_names() {
        for kind in KernelKind::ALL {
            assert_eq!(KernelKind::from_name(kind.name()).unwrap(), kind);
        }
        assert!(matches!(
            KernelKind::from_name("gauss"),
            Err(KernelError::UnknownKernel(_))
        ));
    }

    #[test]
    fn gram_matrix_single_point_real_gaussian() {
        let gram = gram_matrix(KernelKind::RealGaussian, &[c(0.3, 0.0)], 1.0).unwrap();
        assert_eq!(gram.shape(), &[1, 1]);
        assert_cplx_close(gram.get(&[0, 0]).unwrap(), c(1.0, 0.0), 1e-15);
    }

    #[test]
    fn derivative_helpers_match_finite_differences() {
        use crate::wirtinger::finite_difference_pair;
        let mut rng = Rng::with_seed(23);
        for _ in 0..50 {
            let z = c(rng.uniform_in(-1.5, 1.5), rng.uniform_in(-1.5, 1.5));
            let d = c(rng.uniform_in(-1.5, 1.5), rng.uniform_in(-1.5, 1.5));
            let gamma = rng.uniform_in(0.1, 2.0);

            let (_, dz, dgamma) = complex_gaussian_with_grad(z, d, gamma);
            let fd = finite_difference_pair(|p| complex_gaussian(p, d, gamma), z, 1e-6);
            assert!((dz - fd.d_z).norm() <= 1e-5 * dz.norm().max(1.0));
            assert!(fd.d_zstar.norm() <= 1e-5 * dz.norm().max(1.0), "not holomorphic");
            let fdg = (complex_gaussian(z, d, gamma + 1e-6) - complex_gaussian(z, d, gamma - 1e-6))
                / 2e-6;
            assert!((dgamma - fdg).norm() <= 1e-5 * dgamma.norm().max(1.0));

            let (_, pair, dgamma) = independent_kernel_with_grad(z, d, gamma);
            let fd = finite_difference_pair(|p| independent_kernel(p, d, gamma), z, 1e-6);
            assert!((pair.d_z - fd.d_z).norm() <= 1e-5 * pair.d_z.norm().max(1.0));
            assert!((pair.d_zstar - fd.d_zstar).norm() <= 1e-5 * pair.d_zstar.norm().max(1.0));
            let fdg = (independent_kernel(z, d, gamma + 1e-6)
                - independent_kernel(z, d, gamma - 1e-6))
                / 2e-6;
            assert!((dgamma - fdg).norm() <= 1e-5 * dgamma.norm().max(1.0));
        }
    }

    #[test]
    fn szego_derivative_is_holomorphic() {
        use crate::wirtinger::finite_difference_pair;
        let mut rng = Rng::with_seed(29);
        for _ in 0..50 {
            let z = c(rng.uniform_in(-0.6, 0.6), rng.uniform_in(-0.6, 0.6));
            let d = c(rng.uniform_in(-0.6, 0.6), rng.uniform_in(-0.6, 0.6));
            let fd = finite_difference_pair(|p| szego_kernel(p, d).unwrap(), z, 1e-6);
            assert!(fd.d_zstar.norm() <= 1e-5 * fd.d_z.norm().max(1.0));
        }
    }
}
