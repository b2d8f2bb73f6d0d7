//! Kernel activation functions: the trainable activation kinds.
//!
//! [`SplitKaf`] expands the real and imaginary parts of each neuron over a
//! shared 1-D Gaussian dictionary with per-neuron real mixing coefficients.
//! [`ComplexKaf`] expands each neuron directly in the complex domain over the
//! `D x D` grid `d_n + i d_m` with complex mixing coefficients and either the
//! complex Gaussian or the independent kernel.
//!
//! Both kinds adapt a single bandwidth per layer, initialized from the grid
//! spacing rule and clamped from below after every optimizer step. The hot
//! paths share per-axis kernel rows between the forward value, the input
//! derivative and the coefficient gradients; the free functions
//! [`split_kaf_forward`] and [`complex_kaf_forward`] are the plain
//! double-loop forms the tests check those paths against.

use num_complex::Complex64;

use super::{ActivationError, ActivationGrads, ActivationSpec, LayerActivation};
use crate::kernels::{
    complex_gaussian, independent_kernel, real_gaussian, KernelDictionary, KernelKind,
};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;
use crate::wirtinger::WirtingerPair;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bandwidths are clamped to at least this value after each update.
pub const GAMMA_FLOOR: f64 = 1e-3;

/// Split-KAF expansion of one neuron by direct summation:
/// `sum_n aR_n k(Re z, d_n) + i sum_n aI_n k(Im z, d_n)`.
pub fn split_kaf_forward(
    z: Complex64,
    alpha_re: &[f64],
    alpha_im: &[f64],
    dict: &KernelDictionary,
) -> Complex64 {
    let gamma = dict.gamma();
    let mut re = 0.0;
    let mut im = 0.0;
    for (n, &d) in dict.axis().iter().enumerate() {
        re += alpha_re[n] * real_gaussian(z.re, d, gamma);
        im += alpha_im[n] * real_gaussian(z.im, d, gamma);
    }
    Complex64::new(re, im)
}

/// Complex-KAF expansion of one neuron by brute-force double loop:
/// `sum_{n,m} alpha[n][m] k_C(z, d_n + i d_m)`.
pub fn complex_kaf_forward(
    z: Complex64,
    alpha: &ComplexTensor,
    dict: &KernelDictionary,
    kind: KernelKind,
) -> Result<Complex64, ActivationError> {
    let d = dict.size();
    assert_eq!(alpha.shape(), &[d, d], "coefficient grid must be D x D");
    let gamma = dict.gamma();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..d {
        for m in 0..d {
            let center = dict.grid_element(n, m);
            let k = match kind {
                KernelKind::ComplexGaussian => complex_gaussian(z, center, gamma),
                KernelKind::IndependentGaussian => independent_kernel(z, center, gamma),
                other => {
                    return Err(ActivationError::UnsupportedKernel {
                        name: "complex_kaf",
                        kernel: other.name(),
                    })
                }
            };
            acc += alpha.row(n)[m] * k;
        }
    }
    Ok(acc)
}

/// Split kernel activation function for a layer.
///
/// Parameter layout (all real): `[A_R row-major | A_I row-major | gamma]`,
/// with one coefficient row of length `D` per neuron and a single bandwidth
/// for the layer.
#[derive(Debug, Clone)]
pub struct SplitKaf {
    width: usize,
    dict: KernelDictionary,
    params: Vec<f64>,
    init_std: f64,
}

impl SplitKaf {
    pub fn new(spec: &ActivationSpec, width: usize, rng: &mut Rng) -> Result<Self, ActivationError> {
        let dict = KernelDictionary::build_1d(spec.dict_size, spec.dict_range.0, spec.dict_range.1)?;
        let d = dict.size();
        let mut params = vec![0.0; 2 * width * d + 1];
        for p in params[..2 * width * d].iter_mut() {
            *p = spec.init_std * rng.gaussian();
        }
        params[2 * width * d] = dict.gamma();
        Ok(Self {
            width,
            dict,
            params,
            init_std: spec.init_std,
        })
    }

    fn dict_len(&self) -> usize {
        self.dict.size()
    }

    pub fn gamma(&self) -> f64 {
        self.params[2 * self.width * self.dict_len()]
    }

    pub fn coeff_re(&self, neuron: usize) -> &[f64] {
        let d = self.dict_len();
        &self.params[neuron * d..(neuron + 1) * d]
    }

    pub fn coeff_im(&self, neuron: usize) -> &[f64] {
        let d = self.dict_len();
        let base = self.width * d;
        &self.params[base + neuron * d..base + (neuron + 1) * d]
    }

    pub fn dictionary(&self) -> &KernelDictionary {
        &self.dict
    }
}

impl LayerActivation for SplitKaf {
    fn name(&self) -> &'static str {
        "split_kaf"
    }

    fn value(&self, neuron: usize, z: Complex64) -> Result<Complex64, ActivationError> {
        let gamma = self.gamma();
        let ar = self.coeff_re(neuron);
        let ai = self.coeff_im(neuron);
        let mut re = 0.0;
        let mut im = 0.0;
        for (n, &d) in self.dict.axis().iter().enumerate() {
            re += ar[n] * real_gaussian(z.re, d, gamma);
            im += ai[n] * real_gaussian(z.im, d, gamma);
        }
        Ok(Complex64::new(re, im))
    }

    fn wirtinger(&self, neuron: usize, z: Complex64) -> Result<WirtingerPair, ActivationError> {
        let gamma = self.gamma();
        let ar = self.coeff_re(neuron);
        let ai = self.coeff_im(neuron);
        let mut g_re = 0.0;
        let mut g_im = 0.0;
        for (n, &d) in self.dict.axis().iter().enumerate() {
            g_re += ar[n] * -2.0 * gamma * (z.re - d) * real_gaussian(z.re, d, gamma);
            g_im += ai[n] * -2.0 * gamma * (z.im - d) * real_gaussian(z.im, d, gamma);
        }
        Ok(WirtingerPair::new(
            Complex64::new(0.5 * (g_re + g_im), 0.0),
            Complex64::new(0.5 * (g_re - g_im), 0.0),
        ))
    }

    /// Vectorized layer form: builds the kernel matrices `K_R`, `K_I`
    /// against the dictionary and contracts them with the coefficient rows,
    /// `h = (A_R . K_R) 1 + i (A_I . K_I) 1`.
    fn apply_batch(&self, pre: &ComplexTensor) -> Result<ComplexTensor, ActivationError> {
        let gamma = self.gamma();
        let axis = self.dict.axis();
        let d = axis.len();
        let width = pre.cols();
        let mut out = ComplexTensor::zeros(pre.shape().to_vec());
        let mut k_re = vec![0.0; width * d];
        let mut k_im = vec![0.0; width * d];
        for s in 0..pre.rows() {
            let row = pre.row(s);
            for n in 0..width {
                for (j, &dj) in axis.iter().enumerate() {
                    k_re[n * d + j] = real_gaussian(row[n].re, dj, gamma);
                    k_im[n * d + j] = real_gaussian(row[n].im, dj, gamma);
                }
            }
            let out_row = out.row_mut(s);
            for n in 0..width {
                let ar = self.coeff_re(n);
                let ai = self.coeff_im(n);
                let mut re = 0.0;
                let mut im = 0.0;
                for j in 0..d {
                    re += ar[j] * k_re[n * d + j];
                    im += ai[j] * k_im[n * d + j];
                }
                out_row[n] = Complex64::new(re, im);
            }
        }
        Ok(out)
    }

    fn backward(
        &self,
        neuron: usize,
        z: Complex64,
        delta: Complex64,
        grads: &mut ActivationGrads,
    ) -> Result<WirtingerPair, ActivationError> {
        let gamma = self.gamma();
        let axis = self.dict.axis();
        let d = axis.len();
        let ar = self.coeff_re(neuron);
        let ai = self.coeff_im(neuron);
        let base_im = self.width * d;
        let two_re = 2.0 * delta.re;
        let two_im = 2.0 * delta.im;
        let mut g_re = 0.0;
        let mut g_im = 0.0;
        let mut dgamma_re = 0.0;
        let mut dgamma_im = 0.0;
        for (n, &dn) in axis.iter().enumerate() {
            let pa = z.re - dn;
            let pb = z.im - dn;
            let ka = real_gaussian(z.re, dn, gamma);
            let kb = real_gaussian(z.im, dn, gamma);
            g_re += ar[n] * -2.0 * gamma * pa * ka;
            g_im += ai[n] * -2.0 * gamma * pb * kb;
            // Real-parameter rule: dJ/daR_n = 2 Re(delta) k(Re z, d_n), and
            // dJ/daI_n = 2 Im(delta) k(Im z, d_n).
            grads.real[neuron * d + n] += two_re * ka;
            grads.real[base_im + neuron * d + n] += two_im * kb;
            dgamma_re += ar[n] * -(pa * pa) * ka;
            dgamma_im += ai[n] * -(pb * pb) * kb;
        }
        grads.real[2 * self.width * d] += two_re * dgamma_re + two_im * dgamma_im;
        Ok(WirtingerPair::new(
            Complex64::new(0.5 * (g_re + g_im), 0.0),
            Complex64::new(0.5 * (g_re - g_im), 0.0),
        ))
    }

    fn real_params(&self) -> &[f64] {
        &self.params
    }

    fn real_params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn after_update(&mut self) {
        let idx = 2 * self.width * self.dict_len();
        self.params[idx] = self.params[idx].max(GAMMA_FLOOR);
    }

    fn boxed_clone(&self) -> Box<dyn LayerActivation> {
        Box::new(self.clone())
    }

    fn spec(&self) -> ActivationSpec {
        ActivationSpec {
            name: "split_kaf".to_string(),
            dict_size: self.dict.size(),
            dict_range: (self.dict.axis()[0], *self.dict.axis().last().unwrap()),
            kernel: KernelKind::RealGaussian,
            init_std: self.init_std,
        }
    }
}

/// Fully complex kernel activation function for a layer.
///
/// Each neuron owns a `D x D` grid of complex mixing coefficients; the layer
/// adapts one bandwidth. Supported kernels: complex Gaussian, independent.
#[derive(Debug, Clone)]
pub struct ComplexKaf {
    dict: KernelDictionary,
    kernel: KernelKind,
    alpha: Vec<Complex64>,
    gamma: [f64; 1],
    init_std: f64,
}

impl ComplexKaf {
    pub fn new(spec: &ActivationSpec, width: usize, rng: &mut Rng) -> Result<Self, ActivationError> {
        if !matches!(
            spec.kernel,
            KernelKind::ComplexGaussian | KernelKind::IndependentGaussian
        ) {
            return Err(ActivationError::UnsupportedKernel {
                name: "complex_kaf",
                kernel: spec.kernel.name(),
            });
        }
        let dict = KernelDictionary::build_2d(spec.dict_size, spec.dict_range.0, spec.dict_range.1)?;
        let d = dict.size();
        // Coefficients start at std init_std / D per component, so the
        // initial expansion stays in the dictionary's span.
        let std = spec.init_std / d as f64;
        let alpha = (0..width * d * d)
            .map(|_| Complex64::new(std * rng.gaussian(), std * rng.gaussian()))
            .collect();
        let gamma = [dict.gamma()];
        Ok(Self {
            dict,
            kernel: spec.kernel,
            alpha,
            gamma,
            init_std: spec.init_std,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma[0]
    }

    pub fn coeff(&self, neuron: usize) -> &[Complex64] {
        let dd = self.dict.size() * self.dict.size();
        &self.alpha[neuron * dd..(neuron + 1) * dd]
    }

    pub fn dictionary(&self) -> &KernelDictionary {
        &self.dict
    }

    pub fn kernel_kind(&self) -> KernelKind {
        self.kernel
    }

    /// Per-axis tables for the independent kernel: `k(a, d_n)`, `k(b, d_n)`
    /// and optionally their point derivatives and bandwidth derivatives.
    fn axis_rows(&self, s: f64, gamma: f64) -> Vec<f64> {
        self.dict
            .axis()
            .iter()
            .map(|&d| real_gaussian(s, d, gamma))
            .collect()
    }
}

impl LayerActivation for ComplexKaf {
    fn name(&self) -> &'static str {
        "complex_kaf"
    }

    fn value(&self, neuron: usize, z: Complex64) -> Result<Complex64, ActivationError> {
        let gamma = self.gamma();
        let alpha = self.coeff(neuron);
        let d = self.dict.size();
        let axis = self.dict.axis();
        let mut acc = Complex64::new(0.0, 0.0);
        match self.kernel {
            KernelKind::IndependentGaussian => {
                let ra = self.axis_rows(z.re, gamma);
                let rb = self.axis_rows(z.im, gamma);
                for n in 0..d {
                    for m in 0..d {
                        let k = Complex64::new(ra[n] + rb[m], ra[m] - rb[n]);
                        acc += alpha[n * d + m] * k;
                    }
                }
            }
            KernelKind::ComplexGaussian => {
                for n in 0..d {
                    let p = z.re - axis[n];
                    let ep = (-gamma * p * p).exp();
                    for m in 0..d {
                        let q = z.im + axis[m];
                        let magnitude = ep * (gamma * q * q).exp();
                        let angle = 2.0 * gamma * p * q;
                        let k = Complex64::new(
                            magnitude * angle.cos(),
                            -magnitude * angle.sin(),
                        );
                        acc += alpha[n * d + m] * k;
                    }
                }
            }
            _ => unreachable!("constructor rejects other kernels"),
        }
        Ok(acc)
    }

    fn wirtinger(&self, neuron: usize, z: Complex64) -> Result<WirtingerPair, ActivationError> {
        let gamma = self.gamma();
        let alpha = self.coeff(neuron);
        let d = self.dict.size();
        let axis = self.dict.axis();
        match self.kernel {
            KernelKind::IndependentGaussian => {
                let ra = self.axis_rows(z.re, gamma);
                let rb = self.axis_rows(z.im, gamma);
                // d/ds of the real Gaussian rows.
                let da: Vec<f64> = axis
                    .iter()
                    .enumerate()
                    .map(|(n, &dn)| -2.0 * gamma * (z.re - dn) * ra[n])
                    .collect();
                let db: Vec<f64> = axis
                    .iter()
                    .enumerate()
                    .map(|(n, &dn)| -2.0 * gamma * (z.im - dn) * rb[n])
                    .collect();
                let mut sum_a = Complex64::new(0.0, 0.0);
                let mut sum_b = Complex64::new(0.0, 0.0);
                for n in 0..d {
                    for m in 0..d {
                        let a = alpha[n * d + m];
                        sum_a += a * Complex64::new(da[n], da[m]);
                        sum_b += a * Complex64::new(db[m], -db[n]);
                    }
                }
                Ok(WirtingerPair::new(
                    0.5 * (sum_a - I * sum_b),
                    0.5 * (sum_a + I * sum_b),
                ))
            }
            KernelKind::ComplexGaussian => {
                // Holomorphic: d_z k = -2 gamma (z - d*) k, d_zstar = 0.
                let mut d_z = Complex64::new(0.0, 0.0);
                for n in 0..d {
                    let p = z.re - axis[n];
                    let ep = (-gamma * p * p).exp();
                    for m in 0..d {
                        let q = z.im + axis[m];
                        let magnitude = ep * (gamma * q * q).exp();
                        let angle = 2.0 * gamma * p * q;
                        let k = Complex64::new(
                            magnitude * angle.cos(),
                            -magnitude * angle.sin(),
                        );
                        let diff = Complex64::new(p, q);
                        d_z += alpha[n * d + m] * (-2.0 * gamma) * diff * k;
                    }
                }
                Ok(WirtingerPair::holomorphic(d_z))
            }
            _ => unreachable!("constructor rejects other kernels"),
        }
    }

    fn backward(
        &self,
        neuron: usize,
        z: Complex64,
        delta: Complex64,
        grads: &mut ActivationGrads,
    ) -> Result<WirtingerPair, ActivationError> {
        let gamma = self.gamma();
        let alpha = self.coeff(neuron);
        let d = self.dict.size();
        let axis = self.dict.axis();
        let dd = d * d;
        let alpha_base = neuron * dd;
        let mut dgamma_sum = Complex64::new(0.0, 0.0);
        let pair = match self.kernel {
            KernelKind::IndependentGaussian => {
                let ra = self.axis_rows(z.re, gamma);
                let rb = self.axis_rows(z.im, gamma);
                let mut da = vec![0.0; d];
                let mut db = vec![0.0; d];
                let mut ga = vec![0.0; d];
                let mut gb = vec![0.0; d];
                for (n, &dn) in axis.iter().enumerate() {
                    let pa = z.re - dn;
                    let pb = z.im - dn;
                    da[n] = -2.0 * gamma * pa * ra[n];
                    db[n] = -2.0 * gamma * pb * rb[n];
                    ga[n] = -(pa * pa) * ra[n];
                    gb[n] = -(pb * pb) * rb[n];
                }
                let mut sum_a = Complex64::new(0.0, 0.0);
                let mut sum_b = Complex64::new(0.0, 0.0);
                for n in 0..d {
                    for m in 0..d {
                        let a = alpha[n * d + m];
                        let k = Complex64::new(ra[n] + rb[m], ra[m] - rb[n]);
                        grads.complex[alpha_base + n * d + m] += delta * k.conj();
                        sum_a += a * Complex64::new(da[n], da[m]);
                        sum_b += a * Complex64::new(db[m], -db[n]);
                        dgamma_sum += a * Complex64::new(ga[n] + gb[m], ga[m] - gb[n]);
                    }
                }
                WirtingerPair::new(0.5 * (sum_a - I * sum_b), 0.5 * (sum_a + I * sum_b))
            }
            KernelKind::ComplexGaussian => {
                let mut d_z = Complex64::new(0.0, 0.0);
                for n in 0..d {
                    let p = z.re - axis[n];
                    let ep = (-gamma * p * p).exp();
                    for m in 0..d {
                        let q = z.im + axis[m];
                        let magnitude = ep * (gamma * q * q).exp();
                        let angle = 2.0 * gamma * p * q;
                        let k = Complex64::new(
                            magnitude * angle.cos(),
                            -magnitude * angle.sin(),
                        );
                        let a = alpha[n * d + m];
                        let diff = Complex64::new(p, q);
                        grads.complex[alpha_base + n * d + m] += delta * k.conj();
                        d_z += a * (-2.0 * gamma) * diff * k;
                        dgamma_sum += a * -(diff * diff) * k;
                    }
                }
                WirtingerPair::holomorphic(d_z)
            }
            _ => unreachable!("constructor rejects other kernels"),
        };
        grads.real[0] += 2.0 * (delta.conj() * dgamma_sum).re;
        Ok(pair)
    }

    fn real_params(&self) -> &[f64] {
        &self.gamma
    }

    fn real_params_mut(&mut self) -> &mut [f64] {
        &mut self.gamma
    }

    fn complex_params(&self) -> &[Complex64] {
        &self.alpha
    }

    fn complex_params_mut(&mut self) -> &mut [Complex64] {
        &mut self.alpha
    }

    fn after_update(&mut self) {
        self.gamma[0] = self.gamma[0].max(GAMMA_FLOOR);
    }

    fn boxed_clone(&self) -> Box<dyn LayerActivation> {
        Box::new(self.clone())
    }

    fn spec(&self) -> ActivationSpec {
        ActivationSpec {
            name: "complex_kaf".to_string(),
            dict_size: self.dict.size(),
            dict_range: (self.dict.axis()[0], *self.dict.axis().last().unwrap()),
            kernel: self.kernel,
            init_std: self.init_std,
        }
    }
}

pub(super) fn build_kaf(
    spec: &ActivationSpec,
    width: usize,
    rng: &mut Rng,
) -> Result<Option<Box<dyn LayerActivation>>, ActivationError> {
    match spec.name.as_str() {
        "split_kaf" => Ok(Some(Box::new(SplitKaf::new(spec, width, rng)?))),
        "complex_kaf" => Ok(Some(Box::new(ComplexKaf::new(spec, width, rng)?))),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{assert_cplx_close, rel_err_cplx};
    use crate::wirtinger::{finite_difference_cogradient, finite_difference_pair};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn split_fixture(width: usize, seed: u64) -> SplitKaf {
        let mut rng = Rng::with_seed(seed);
        SplitKaf::new(&ActivationSpec::split_kaf_defaults(), width, &mut rng).unwrap()
    }

    fn complex_fixture(kind: KernelKind, seed: u64) -> ComplexKaf {
        let mut rng = Rng::with_seed(seed);
        let spec = ActivationSpec {
            kernel: kind,
            ..ActivationSpec::complex_kaf_defaults()
        };
        ComplexKaf::new(&spec, 2, &mut rng).unwrap()
    }

    #[test]
    fn split_zero_coefficients_give_zero() {
        let mut act = split_fixture(2, 1);
        for p in act.real_params_mut().iter_mut() {
            *p = 0.0;
        }
        let idx = act.real_params().len() - 1;
        act.real_params_mut()[idx] = 1.0; // bandwidth back to something sane
        assert_cplx_close(act.value(0, c(0.3, -0.8)).unwrap(), c(0.0, 0.0), 1e-15);
    }

    #[test]
    fn split_one_hot_gives_single_kernel_value() {
        let dict = KernelDictionary::build_1d(20, -2.0, 2.0).unwrap();
        let mut alpha_re = vec![0.0; 20];
        alpha_re[7] = 1.0;
        let alpha_im = vec![0.0; 20];
        let z = c(0.45, 0.0);
        let expected = real_gaussian(z.re, dict.axis()[7], dict.gamma());
        assert_cplx_close(
            split_kaf_forward(z, &alpha_re, &alpha_im, &dict),
            c(expected, 0.0),
            1e-15,
        );
    }

    #[test]
    fn split_two_point_example() {
        // D = 2 over {-1, 1} with gamma = 1, unit real coefficients, z = 0:
        // the expansion is k(0,-1) + k(0,1) = 2 exp(-1).
        let dict = KernelDictionary::build_1d(2, -1.0, 1.0).unwrap();
        let value: f64 = dict
            .axis()
            .iter()
            .map(|&d| real_gaussian(0.0, d, 1.0))
            .sum();
        assert!((value - 2.0 * (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn split_layer_value_matches_free_function() {
        let act = split_fixture(3, 5);
        let mut rng = Rng::with_seed(99);
        for _ in 0..50 {
            let z = c(rng.uniform_in(-2.5, 2.5), rng.uniform_in(-2.5, 2.5));
            for neuron in 0..3 {
                let free = split_kaf_forward(
                    z,
                    act.coeff_re(neuron),
                    act.coeff_im(neuron),
                    act.dictionary(),
                );
                let layer = act.value(neuron, z).unwrap();
                assert_cplx_close(layer, free, 1e-12);
            }
        }
    }

    #[test]
    fn split_vectorized_batch_matches_scalar_loop() {
        let act = split_fixture(4, 6);
        let mut rng = Rng::with_seed(123);
        let mut data = Vec::new();
        for _ in 0..6 * 4 {
            data.push(c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0)));
        }
        let pre = ComplexTensor::matrix(6, 4, data).unwrap();
        let vectorized = act.apply_batch(&pre).unwrap();
        for s in 0..6 {
            for n in 0..4 {
                let scalar = act.value(n, pre.row(s)[n]).unwrap();
                assert!((vectorized.row(s)[n] - scalar).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn complex_zero_coefficients_give_zero() {
        for kind in [KernelKind::IndependentGaussian, KernelKind::ComplexGaussian] {
            let mut act = complex_fixture(kind, 2);
            for a in act.complex_params_mut().iter_mut() {
                *a = c(0.0, 0.0);
            }
            assert_cplx_close(act.value(1, c(0.7, 0.3)).unwrap(), c(0.0, 0.0), 1e-15);
        }
    }

    #[test]
    fn complex_single_coefficient_reproduces_kernel() {
        let dict = KernelDictionary::build_2d(4, -1.5, 1.5).unwrap();
        let mut alpha = ComplexTensor::zeros(vec![4, 4]);
        alpha.row_mut(1)[2] = c(1.0, 0.0);
        let z = c(0.2, -0.4);
        let expected = independent_kernel(z, dict.grid_element(1, 2), dict.gamma());
        let got =
            complex_kaf_forward(z, &alpha, &dict, KernelKind::IndependentGaussian).unwrap();
        assert_cplx_close(got, expected, 1e-14);
    }

    #[test]
    fn complex_all_ones_matches_brute_force_at_grid_point() {
        let dict = KernelDictionary::build_2d(2, -1.0, 1.0).unwrap();
        let alpha = ComplexTensor::new(vec![2, 2], vec![c(1.0, 0.0); 4]).unwrap();
        let z = dict.grid_element(0, 1);
        // Brute-force double loop, written out independently of the library.
        let mut expected = c(0.0, 0.0);
        for &dn in dict.axis() {
            for &dm in dict.axis() {
                expected += independent_kernel(z, c(dn, dm), dict.gamma());
            }
        }
        let got =
            complex_kaf_forward(z, &alpha, &dict, KernelKind::IndependentGaussian).unwrap();
        assert_cplx_close(got, expected, 1e-12);
        // The self-term contributes exactly 2.
        let self_term = independent_kernel(z, z, dict.gamma());
        assert_cplx_close(self_term, c(2.0, 0.0), 1e-14);
    }

    #[test]
    fn complex_layer_value_matches_brute_force() {
        for kind in [KernelKind::IndependentGaussian, KernelKind::ComplexGaussian] {
            let act = complex_fixture(kind, 3);
            let d = act.dictionary().size();
            let mut rng = Rng::with_seed(7);
            for _ in 0..20 {
                let z = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
                for neuron in 0..2 {
                    let alpha =
                        ComplexTensor::new(vec![d, d], act.coeff(neuron).to_vec()).unwrap();
                    let reference =
                        complex_kaf_forward(z, &alpha, act.dictionary(), kind).unwrap();
                    let fast = act.value(neuron, z).unwrap();
                    assert!(
                        rel_err_cplx(fast, reference, 1e-9) <= 1e-12,
                        "{kind:?}: fast {fast} vs reference {reference}"
                    );
                }
            }
        }
    }

    #[test]
    fn complex_kaf_rejects_unsupported_kernels() {
        let mut rng = Rng::with_seed(1);
        let spec = ActivationSpec {
            kernel: KernelKind::Szego,
            ..ActivationSpec::complex_kaf_defaults()
        };
        assert!(matches!(
            ComplexKaf::new(&spec, 2, &mut rng),
            Err(ActivationError::UnsupportedKernel { .. })
        ));
    }

    #[test]
    fn kaf_pairs_match_finite_differences() {
        let split = split_fixture(2, 11);
        let mut rng = Rng::with_seed(31);
        for _ in 0..50 {
            let z = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
            let analytic = split.wirtinger(0, z).unwrap();
            let fd = finite_difference_pair(|p| split.value(0, p).unwrap(), z, 1e-5);
            let scale = analytic.d_z.norm().max(analytic.d_zstar.norm()).max(1e-4);
            assert!((analytic.d_z - fd.d_z).norm() / scale <= 1e-4);
            assert!((analytic.d_zstar - fd.d_zstar).norm() / scale <= 1e-4);
        }
        for kind in [KernelKind::IndependentGaussian, KernelKind::ComplexGaussian] {
            let act = complex_fixture(kind, 13);
            for _ in 0..50 {
                let z = c(rng.uniform_in(-1.5, 1.5), rng.uniform_in(-1.5, 1.5));
                let analytic = act.wirtinger(1, z).unwrap();
                let fd = finite_difference_pair(|p| act.value(1, p).unwrap(), z, 1e-5);
                let scale = analytic.d_z.norm().max(analytic.d_zstar.norm()).max(1e-4);
                assert!(
                    (analytic.d_z - fd.d_z).norm() / scale <= 1e-4,
                    "{kind:?} d_z {} vs {}",
                    analytic.d_z,
                    fd.d_z
                );
                assert!(
                    (analytic.d_zstar - fd.d_zstar).norm() / scale <= 1e-4,
                    "{kind:?} d_zstar {} vs {}",
                    analytic.d_zstar,
                    fd.d_zstar
                );
            }
        }
    }

    /// Parameter gradients agree with finite differences of the real loss
    /// `J = 2 Re{conj(delta) g(z)}` (whose analytic gradients are exactly the
    /// accumulated increments, with complex coefficients compared through the
    /// conjugate cogradient).
    #[test]
    fn kaf_param_grads_match_finite_differences() {
        let mut rng = Rng::with_seed(41);
        let split = split_fixture(2, 17);
        for _ in 0..10 {
            let z = c(rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0));
            let delta = c(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0));
            let mut grads = ActivationGrads::zeros_like(&split);
            split.backward(0, z, delta, &mut grads).unwrap();
            let params = split.real_params().to_vec();
            for k in 0..params.len() {
                let mut probe = split.clone();
                let j = |p: f64, probe: &mut SplitKaf| {
                    probe.real_params_mut()[k] = p;
                    let g = probe.value(0, z).unwrap();
                    2.0 * (delta.conj() * g).re
                };
                let fd = (j(params[k] + 1e-6, &mut probe) - j(params[k] - 1e-6, &mut probe))
                    / 2e-6;
                assert!(
                    (grads.real[k] - fd).abs() <= 1e-5 * fd.abs().max(1.0),
                    "split param {k}: {} vs fd {}",
                    grads.real[k],
                    fd
                );
            }
        }

        for kind in [KernelKind::IndependentGaussian, KernelKind::ComplexGaussian] {
            let act = complex_fixture(kind, 19);
            let dd = act.dictionary().size() * act.dictionary().size();
            for _ in 0..5 {
                let z = c(rng.uniform_in(-1.5, 1.5), rng.uniform_in(-1.5, 1.5));
                let delta = c(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0));
                let mut grads = ActivationGrads::zeros_like(&act);
                act.backward(0, z, delta, &mut grads).unwrap();

                // Conjugate cogradient over the neuron-0 coefficients.
                let alpha = ComplexTensor::from_vec(act.coeff(0).to_vec());
                let fd = finite_difference_cogradient(
                    |a| {
                        let mut probe = act.clone();
                        probe.complex_params_mut()[..dd].copy_from_slice(a.data());
                        let g = probe.value(0, z).unwrap();
                        (delta.conj() * g + delta * g.conj()).re
                    },
                    &alpha,
                    1e-6,
                )
                .unwrap();
                for k in 0..dd {
                    assert!(
                        (grads.complex[k] - fd.data()[k]).norm()
                            <= 1e-4 * fd.data()[k].norm().max(1.0),
                        "{kind:?} alpha {k}: {} vs fd {}",
                        grads.complex[k],
                        fd.data()[k]
                    );
                }

                // Bandwidth gradient.
                let g0 = act.gamma();
                let j = |g: f64| {
                    let mut probe = act.clone();
                    probe.real_params_mut()[0] = g;
                    let out = probe.value(0, z).unwrap();
                    2.0 * (delta.conj() * out).re
                };
                let fd_gamma = (j(g0 + 1e-6) - j(g0 - 1e-6)) / 2e-6;
                assert!(
                    (grads.real[0] - fd_gamma).abs() <= 1e-4 * fd_gamma.abs().max(1.0),
                    "{kind:?} gamma: {} vs fd {}",
                    grads.real[0],
                    fd_gamma
                );
            }
        }
    }

    #[test]
    fn gamma_clamp_applies_after_update() {
        let mut act = split_fixture(1, 23);
        let idx = act.real_params().len() - 1;
        act.real_params_mut()[idx] = -0.4;
        act.after_update();
        assert_eq!(act.gamma(), GAMMA_FLOOR);
    }
}
