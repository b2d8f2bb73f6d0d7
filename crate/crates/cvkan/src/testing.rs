//! Small assertion helpers shared by unit and integration tests.

use num_complex::Complex64;

/// Relative error with an absolute floor, used throughout the gradient and
/// kernel checks: `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / (a.abs().max(b.abs()).max(floor))
}

/// Relative error between complex values with an absolute floor.
pub fn rel_err_cplx(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / (a.norm().max(b.norm()).max(floor))
}

#[track_caller]
pub fn assert_f64_close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol,
        "expected {expected}, got {actual} (tolerance {tol})"
    );
}

#[track_caller]
pub fn assert_cplx_close(actual: Complex64, expected: Complex64, tol: f64) {
    assert!(
        (actual - expected).norm() <= tol,
        "expected {expected}, got {actual} (tolerance {tol})"
    );
}
