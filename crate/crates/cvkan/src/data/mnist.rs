//! IDX image parsing and the 2-D DFT feature pipeline.
//!
//! Images are 28x28 bytes in the standard big-endian IDX format (magic 2051
//! for images, 2049 for labels; `.gz` files are decompressed transparently).
//! Pixels are scaled to `[0, 1]`, transformed with the unnormalized 2-D DFT
//! `F = W X W^T` (`W` the 28-point DFT matrix), and the `keep` positions
//! with the largest mean `|F[u, v]|` over the *training* images — ties
//! broken in row-major order — become the complex feature vector of every
//! image, train and test alike.

use std::io::Read;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ClassificationDataset, DataError};
use crate::tensor::ComplexTensor;

pub const IMAGE_SIDE: usize = 28;
pub const IMAGE_PIXELS: usize = IMAGE_SIDE * IMAGE_SIDE;

fn open_maybe_gz(path: &str) -> Result<Box<dyn Read>, DataError> {
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.to_string(),
        source,
    })?;
    let reader = std::io::BufReader::new(file);
    if path.ends_with(".gz") {
        Ok(Box::new(flate2::bufread::GzDecoder::new(reader)))
    } else {
        Ok(Box::new(reader))
    }
}

fn read_u32_be(reader: &mut dyn Read, path: &str) -> Result<u32, DataError> {
    let mut buf = [0u8; 4];
    reader.read_exact(&mut buf).map_err(|e| DataError::Idx {
        path: path.to_string(),
        message: format!("truncated header: {e}"),
    })?;
    Ok(u32::from_be_bytes(buf))
}

/// Loads an IDX3 image file of 28x28 images.
pub fn load_idx_images(path: &str) -> Result<Vec<Vec<u8>>, DataError> {
    let mut reader = open_maybe_gz(path)?;
    let magic = read_u32_be(reader.as_mut(), path)?;
    if magic != 2051 {
        return Err(DataError::Idx {
            path: path.to_string(),
            message: format!("bad image magic {magic}, expected 2051"),
        });
    }
    let count = read_u32_be(reader.as_mut(), path)? as usize;
    let rows = read_u32_be(reader.as_mut(), path)? as usize;
    let cols = read_u32_be(reader.as_mut(), path)? as usize;
    if rows != IMAGE_SIDE || cols != IMAGE_SIDE {
        return Err(DataError::Idx {
            path: path.to_string(),
            message: format!("expected 28x28 images, got {rows}x{cols}"),
        });
    }
    let mut data = vec![0u8; count * IMAGE_PIXELS];
    reader.read_exact(&mut data).map_err(|e| DataError::Idx {
        path: path.to_string(),
        message: format!("truncated image data: {e}"),
    })?;
    Ok(data.chunks(IMAGE_PIXELS).map(|c| c.to_vec()).collect())
}

/// Loads an IDX1 label file.
pub fn load_idx_labels(path: &str) -> Result<Vec<u8>, DataError> {
    let mut reader = open_maybe_gz(path)?;
    let magic = read_u32_be(reader.as_mut(), path)?;
    if magic != 2049 {
        return Err(DataError::Idx {
            path: path.to_string(),
            message: format!("bad label magic {magic}, expected 2049"),
        });
    }
    let count = read_u32_be(reader.as_mut(), path)? as usize;
    let mut data = vec![0u8; count];
    reader.read_exact(&mut data).map_err(|e| DataError::Idx {
        path: path.to_string(),
        message: format!("truncated label data: {e}"),
    })?;
    Ok(data)
}

/// The 28-point DFT matrix `W[u][x] = exp(-2 pi i u x / 28)`.
fn dft_matrix() -> Vec<Complex64> {
    let n = IMAGE_SIDE;
    let mut w = Vec::with_capacity(n * n);
    for u in 0..n {
        for x in 0..n {
            let angle = -std::f64::consts::TAU * (u * x) as f64 / n as f64;
            w.push(Complex64::new(angle.cos(), angle.sin()));
        }
    }
    w
}

/// Unnormalized 2-D DFT of one image (pixels already scaled to `[0, 1]`),
/// computed as `W X W^T`.
pub fn dft2d(pixels: &[f64]) -> Vec<Complex64> {
    assert_eq!(pixels.len(), IMAGE_PIXELS);
    let n = IMAGE_SIDE;
    let w = dft_matrix();
    // T[x][v] = sum_y X[x][y] W[v][y]   (X W^T)
    let mut t = vec![Complex64::new(0.0, 0.0); n * n];
    for x in 0..n {
        for v in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..n {
                acc += pixels[x * n + y] * w[v * n + y];
            }
            t[x * n + v] = acc;
        }
    }
    // F[u][v] = sum_x W[u][x] T[x][v]
    let mut f = vec![Complex64::new(0.0, 0.0); n * n];
    for u in 0..n {
        for v in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..n {
                acc += w[u * n + x] * t[x * n + v];
            }
            f[u * n + v] = acc;
        }
    }
    f
}

fn scaled(image: &[u8]) -> Vec<f64> {
    image.iter().map(|&b| b as f64 / 255.0).collect()
}

/// The retained DFT positions, ranked by training-set significance.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CoefficientSelection {
    /// `(u, v)` positions in significance order (most significant first).
    pub positions: Vec<(usize, usize)>,
}

/// Ranks all 784 DFT positions by the mean `|F[u, v]|` over the training
/// images, ties broken in row-major order, and returns the top `keep`.
fn select_coefficients(train_images: &[Vec<u8>], keep: usize) -> CoefficientSelection {
    let sums: Vec<f64> = train_images
        .par_iter()
        .fold(
            || vec![0.0f64; IMAGE_PIXELS],
            |mut acc, image| {
                for (a, f) in acc.iter_mut().zip(dft2d(&scaled(image))) {
                    *a += f.norm();
                }
                acc
            },
        )
        .reduce(
            || vec![0.0f64; IMAGE_PIXELS],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let mut order: Vec<usize> = (0..IMAGE_PIXELS).collect();
    order.sort_by(|&a, &b| {
        sums[b]
            .partial_cmp(&sums[a])
            .expect("finite significance")
            .then(a.cmp(&b))
    });
    CoefficientSelection {
        positions: order
            .iter()
            .take(keep)
            .map(|&k| (k / IMAGE_SIDE, k % IMAGE_SIDE))
            .collect(),
    }
}

fn extract_features(images: &[Vec<u8>], selection: &CoefficientSelection) -> Vec<Complex64> {
    images
        .par_iter()
        .flat_map_iter(|image| {
            let f = dft2d(&scaled(image));
            selection
                .positions
                .iter()
                .map(|&(u, v)| f[u * IMAGE_SIDE + v])
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Runs the DFT feature pipeline: significance ranking on the training
/// images only, then extraction of the `keep` selected coefficients for
/// train and test alike. Returns the combined dataset (train rows first)
/// with split indices, plus the selection record.
pub fn mnist_fft_pipeline(
    train_images: &[Vec<u8>],
    train_labels: &[u8],
    test_images: &[Vec<u8>],
    test_labels: &[u8],
    keep: usize,
) -> Result<(ClassificationDataset, CoefficientSelection), DataError> {
    if train_images.len() != train_labels.len() {
        return Err(DataError::BadConfig(format!(
            "image/label count mismatch: {} train images vs {} labels",
            train_images.len(),
            train_labels.len()
        )));
    }
    if test_images.len() != test_labels.len() {
        return Err(DataError::BadConfig(format!(
            "image/label count mismatch: {} test images vs {} labels",
            test_images.len(),
            test_labels.len()
        )));
    }
    if keep == 0 || keep > IMAGE_PIXELS {
        return Err(DataError::BadConfig(format!(
            "keep must lie in 1..={IMAGE_PIXELS}, got {keep}"
        )));
    }
    let selection = select_coefficients(train_images, keep);
    let mut data = extract_features(train_images, &selection);
    data.extend(extract_features(test_images, &selection));
    let n_train = train_images.len();
    let n_test = test_images.len();
    let inputs = ComplexTensor::matrix(n_train + n_test, keep, data).expect("feature shape");
    let mut labels = train_labels.to_vec();
    labels.extend_from_slice(test_labels);
    Ok((
        ClassificationDataset {
            inputs,
            labels,
            train: (0..n_train).collect(),
            test: (n_train..n_train + n_test).collect(),
        },
        selection,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use std::io::Write;

    #[test]
    fn dft_of_zero_image_is_zero() {
        let f = dft2d(&vec![0.0; IMAGE_PIXELS]);
        assert!(f.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn dft_of_constant_one_image_concentrates_at_dc() {
        let f = dft2d(&vec![1.0; IMAGE_PIXELS]);
        assert!((f[0] - Complex64::new(784.0, 0.0)).norm() <= 1e-9);
        for (k, z) in f.iter().enumerate().skip(1) {
            assert!(z.norm() <= 1e-9, "coefficient {k} should vanish, got {z}");
        }
    }

    #[test]
    fn dft_of_corner_impulse_is_all_ones() {
        let mut pixels = vec![0.0; IMAGE_PIXELS];
        pixels[0] = 1.0;
        let f = dft2d(&pixels);
        for z in &f {
            assert!((z - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        }
    }

    /// Parseval and agreement with a direct O(N^4) DFT on random images.
    #[test]
    fn dft_matches_direct_quadruple_loop() {
        let mut rng = Rng::with_seed(1);
        for _ in 0..5 {
            let pixels: Vec<f64> = (0..IMAGE_PIXELS).map(|_| rng.uniform()).collect();
            let fast = dft2d(&pixels);
            let n = IMAGE_SIDE;
            let mut energy_direct = 0.0;
            for u in 0..n {
                for v in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..n {
                        for y in 0..n {
                            let angle = -std::f64::consts::TAU
                                * ((u * x) as f64 + (v * y) as f64)
                                / n as f64;
                            acc += pixels[x * n + y]
                                * Complex64::new(angle.cos(), angle.sin());
                        }
                    }
                    let got = fast[u * n + v];
                    assert!(
                        (acc - got).norm() <= 1e-9 * acc.norm().max(1.0),
                        "mismatch at ({u},{v}): {acc} vs {got}"
                    );
                    energy_direct += got.norm_sqr();
                }
            }
            // Parseval for the unnormalized DFT: sum |F|^2 = N^2 sum |x|^2.
            let pixel_energy: f64 = pixels.iter().map(|p| p * p).sum();
            let expected = 784.0 * pixel_energy;
            assert!(
                (energy_direct - expected).abs() <= 1e-9 * expected,
                "parseval: {energy_direct} vs {expected}"
            );
        }
    }

    fn glyph(seed: u64) -> Vec<u8> {
        let mut rng = Rng::with_seed(seed);
        (0..IMAGE_PIXELS).map(|_| rng.index(256) as u8).collect()
    }

    #[test]
    fn keep_all_returns_the_full_coefficient_set() {
        let train: Vec<Vec<u8>> = (0..4).map(glyph).collect();
        let labels = vec![0u8, 1, 2, 3];
        let (ds, selection) =
            mnist_fft_pipeline(&train, &labels, &train, &labels, IMAGE_PIXELS).unwrap();
        assert_eq!(selection.positions.len(), IMAGE_PIXELS);
        assert_eq!(ds.inputs.cols(), IMAGE_PIXELS);
        // Every position occurs exactly once.
        let mut seen = vec![false; IMAGE_PIXELS];
        for &(u, v) in &selection.positions {
            assert!(!seen[u * IMAGE_SIDE + v]);
            seen[u * IMAGE_SIDE + v] = true;
        }
    }

    #[test]
    fn significance_ranking_depends_on_train_only() {
        let train: Vec<Vec<u8>> = (0..6).map(glyph).collect();
        let train_labels = vec![0u8; 6];
        let test_a: Vec<Vec<u8>> = (10..14).map(glyph).collect();
        let test_b: Vec<Vec<u8>> = (20..24).map(glyph).collect();
        let labels = vec![0u8; 4];
        let (_, sel_a) =
            mnist_fft_pipeline(&train, &train_labels, &test_a, &labels, 50).unwrap();
        let (_, sel_b) =
            mnist_fft_pipeline(&train, &train_labels, &test_b, &labels, 50).unwrap();
        assert_eq!(sel_a, sel_b);
    }

    #[test]
    fn count_mismatch_is_rejected() {
        let train: Vec<Vec<u8>> = (0..3).map(glyph).collect();
        assert!(matches!(
            mnist_fft_pipeline(&train, &[0, 1], &train, &[0, 1, 2], 10),
            Err(DataError::BadConfig(_))
        ));
    }

    #[test]
    fn idx_round_trip_and_header_validation() {
        let dir = tempfile::tempdir().unwrap();
        let img_path = dir.path().join("images.idx3-ubyte");
        let lbl_path = dir.path().join("labels.idx1-ubyte");

        let images: Vec<Vec<u8>> = (0..3).map(glyph).collect();
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&2051u32.to_be_bytes());
        bytes.extend_from_slice(&(images.len() as u32).to_be_bytes());
        bytes.extend_from_slice(&28u32.to_be_bytes());
        bytes.extend_from_slice(&28u32.to_be_bytes());
        for image in &images {
            bytes.extend_from_slice(image);
        }
        std::fs::File::create(&img_path)
            .unwrap()
            .write_all(&bytes)
            .unwrap();

        let mut bytes = Vec::new();
        bytes.extend_from_slice(&2049u32.to_be_bytes());
        bytes.extend_from_slice(&3u32.to_be_bytes());
        bytes.extend_from_slice(&[7, 8, 9]);
        std::fs::File::create(&lbl_path)
            .unwrap()
            .write_all(&bytes)
            .unwrap();

        let loaded = load_idx_images(img_path.to_str().unwrap()).unwrap();
        assert_eq!(loaded, images);
        let labels = load_idx_labels(lbl_path.to_str().unwrap()).unwrap();
        assert_eq!(labels, vec![7, 8, 9]);

        // Wrong magic in either file is rejected.
        let err = load_idx_images(lbl_path.to_str().unwrap()).unwrap_err();
        assert!(matches!(err, DataError::Idx { .. }));
        let err = load_idx_labels(img_path.to_str().unwrap()).unwrap_err();
        assert!(matches!(err, DataError::Idx { .. }));
    }
}
