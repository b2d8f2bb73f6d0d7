//! Complex wind-series ingestion and embedding.
//!
//! The real-world task reads hourly wind intensity measured along two axes
//! (north, east) from a two-column CSV and treats each row as one complex
//! sample `north + i east`. Prediction pairs embed the last `embed` hours
//! and target the sample `horizon` hours ahead; the last `test_len` targets
//! form the test set, the `val_len` targets before them the validation set.
//!
//! Two synthetic generators stand in when the original file is not
//! available: [`synthetic_wind_series`] produces a statistically wind-like
//! complex series for smoke runs, and [`linear_benchmark_series`] produces a
//! series whose targets are an exact complex-linear map of the embedding, so
//! a linear model must reach `R^2 -> 1` on it.

use std::io::BufRead;

use num_complex::Complex64;

use super::{DataError, RegressionDataset};
use crate::rng::Rng;
use crate::tensor::ComplexTensor;

/// Reads a two-column CSV (north, east) into a complex series. An optional
/// single header row is auto-detected; both LF and CRLF line endings are
/// accepted; malformed rows are rejected with their line number.
pub fn load_wind_csv(path: &str) -> Result<Vec<Complex64>, DataError> {
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.to_string(),
        source,
    })?;
    let reader = std::io::BufReader::new(file);
    let mut series = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| DataError::Io {
            path: path.to_string(),
            source,
        })?;
        let trimmed = line.trim_end_matches('\r').trim();
        if trimmed.is_empty() {
            continue;
        }
        match parse_row(trimmed) {
            Ok(z) => series.push(z),
            Err(message) => {
                if line_no == 0 && series.is_empty() {
                    // Header row.
                    continue;
                }
                return Err(DataError::Csv {
                    line: line_no + 1,
                    message,
                });
            }
        }
    }
    Ok(series)
}

fn parse_row(row: &str) -> Result<Complex64, String> {
    let mut fields = row.split(',');
    let north = fields.next().ok_or("missing north column")?;
    let east = fields.next().ok_or_else(|| "missing east column".to_string())?;
    if fields.next().is_some() {
        return Err("expected exactly two columns".to_string());
    }
    let north: f64 = north
        .trim()
        .parse()
        .map_err(|_| format!("non-numeric north value '{}'", north.trim()))?;
    let east: f64 = east
        .trim()
        .parse()
        .map_err(|_| format!("non-numeric east value '{}'", east.trim()))?;
    Ok(Complex64::new(north, east))
}

/// Statistically wind-like synthetic series: a slowly wandering magnitude
/// with a drifting direction, plus gusts. Bounded and smooth; intended for
/// smoke runs and CI when the measured file is absent.
pub fn synthetic_wind_series(seed: u64, len: usize) -> Vec<Complex64> {
    let mut rng = Rng::with_seed(seed);
    let mut magnitude = 6.0;
    let mut angle = rng.uniform_in(-std::f64::consts::PI, std::f64::consts::PI);
    let mut series = Vec::with_capacity(len);
    for t in 0..len {
        // Mean-reverting magnitude with a daily swell.
        let swell = 1.5 * (t as f64 * std::f64::consts::TAU / 24.0).sin();
        magnitude += 0.05 * (6.0 - magnitude) + 0.35 * rng.gaussian();
        magnitude = magnitude.max(0.1);
        angle += 0.08 * rng.gaussian() + 0.002;
        series.push(Complex64::from_polar(magnitude + swell.abs(), angle));
    }
    series
}

/// Series whose prediction target is exactly reachable by a linear model:
/// `z_n = e^{i theta} z_{n - (horizon + 1)}`, so the `horizon`-ahead target
/// equals `e^{i theta}` times the second-newest embedding entry. The golden
/// angle makes the orbit fill the circle, which keeps the per-coordinate
/// min/max preprocessing symmetric.
pub fn linear_benchmark_series(seed: u64, len: usize, horizon: usize) -> Vec<Complex64> {
    let mut rng = Rng::with_seed(seed);
    let period = horizon + 1;
    let theta = std::f64::consts::TAU * (5f64.sqrt() - 1.0) / 2.0;
    let rotation = Complex64::from_polar(1.0, theta);
    let mut series = Vec::with_capacity(len);
    for _ in 0..period.min(len) {
        series.push(Complex64::from_polar(
            rng.uniform_in(0.5, 1.5),
            rng.uniform_in(-std::f64::consts::PI, std::f64::consts::PI),
        ));
    }
    for n in period..len {
        let prev = series[n - period];
        series.push(rotation * prev);
    }
    series
}

/// Builds embedding/target pairs from a complex series: input
/// `(z_{t-embed+1}, ..., z_t)` (oldest to newest), target `z_{t+horizon}`.
/// The last `test_len` pairs are the test set, preceded by `val_len`
/// validation pairs; the remainder trains.
pub fn make_wind_dataset(
    series: &[Complex64],
    embed: usize,
    horizon: usize,
    test_len: usize,
    val_len: usize,
) -> Result<RegressionDataset, DataError> {
    if embed == 0 || horizon == 0 {
        return Err(DataError::BadConfig(
            "embedding and horizon must be positive".to_string(),
        ));
    }
    let needed = embed + horizon + test_len + val_len;
    if series.len() <= needed {
        return Err(DataError::SeriesTooShort {
            needed,
            got: series.len(),
        });
    }
    let pairs = series.len() - embed - horizon + 1;
    let mut data = Vec::with_capacity(pairs * embed);
    let mut targets = Vec::with_capacity(pairs);
    for t in (embed - 1)..(series.len() - horizon) {
        data.extend_from_slice(&series[t + 1 - embed..=t]);
        targets.push(series[t + horizon]);
    }
    let inputs = ComplexTensor::matrix(pairs, embed, data).expect("embedding shape");
    let test_start = pairs - test_len;
    let val_start = test_start - val_len;
    Ok(RegressionDataset {
        inputs,
        targets,
        train: (0..val_start).collect(),
        validation: (val_start..test_start).collect(),
        test: (test_start..pairs).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::assert_cplx_close;
    use std::io::Write;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn csv_rows_become_complex_samples() {
        let f = write_temp("1.0,2.0\n-0.5,3.25\n");
        let series = load_wind_csv(f.path().to_str().unwrap()).unwrap();
        assert_eq!(series, vec![c(1.0, 2.0), c(-0.5, 3.25)]);
    }

    #[test]
    fn csv_header_and_crlf_are_accepted() {
        let f = write_temp("north,east\r\n1.0,2.0\r\n3.0,4.0\r\n");
        let series = load_wind_csv(f.path().to_str().unwrap()).unwrap();
        assert_eq!(series, vec![c(1.0, 2.0), c(3.0, 4.0)]);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let f = write_temp("1.0,2.0\n1.0\n");
        let err = load_wind_csv(f.path().to_str().unwrap()).unwrap_err();
        match err {
            DataError::Csv { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
        let f = write_temp("1.0,2.0\nalpha,3.0\n");
        let err = load_wind_csv(f.path().to_str().unwrap()).unwrap_err();
        assert!(matches!(err, DataError::Csv { line: 2, .. }));
    }

    #[test]
    fn five_thousand_rows_give_five_thousand_samples() {
        let mut content = String::new();
        for k in 0..5000 {
            content.push_str(&format!("{},{}\n", k as f64 * 0.1, -(k as f64) * 0.05));
        }
        let f = write_temp(&content);
        let series = load_wind_csv(f.path().to_str().unwrap()).unwrap();
        assert_eq!(series.len(), 5000);
    }

    #[test]
    fn embedding_indexing_contract() {
        // Real ramp z_t = t: the target of the pair at embedding end t is
        // t + horizon.
        let series: Vec<Complex64> = (0..200).map(|t| c(t as f64, 0.0)).collect();
        let ds = make_wind_dataset(&series, 10, 8, 20, 10).unwrap();
        // First pair ends at t = 9: embedding 0..=9, target 17.
        assert_cplx_close(ds.inputs.row(0)[0], c(0.0, 0.0), 1e-15);
        assert_cplx_close(ds.inputs.row(0)[9], c(9.0, 0.0), 1e-15);
        assert_cplx_close(ds.targets[0], c(17.0, 0.0), 1e-15);
    }

    #[test]
    fn pair_counts_for_a_5000_sample_series() {
        let series = synthetic_wind_series(1, 5000);
        let ds = make_wind_dataset(&series, 10, 8, 500, 500).unwrap();
        // 5000 - 10 - 8 + 1 embeddable pairs.
        assert_eq!(ds.len(), 4983);
        assert_eq!(ds.test.len(), 500);
        assert_eq!(ds.validation.len(), 500);
        assert_eq!(ds.train.len(), 4983 - 1000);
        assert!(ds.splits_disjoint());
        // The test block sits at the very end.
        assert_eq!(*ds.test.last().unwrap(), 4982);
    }

    #[test]
    fn too_short_series_is_rejected() {
        let series = vec![c(1.0, 0.0); 100];
        assert!(matches!(
            make_wind_dataset(&series, 10, 8, 500, 500),
            Err(DataError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn linear_benchmark_targets_are_exact_one_tap_maps() {
        let horizon = 8;
        let series = linear_benchmark_series(5, 3000, horizon);
        let theta = std::f64::consts::TAU * (5f64.sqrt() - 1.0) / 2.0;
        let rotation = Complex64::from_polar(1.0, theta);
        let ds = make_wind_dataset(&series, 10, horizon, 300, 300).unwrap();
        for &i in ds.train.iter().chain(&ds.test) {
            // Target = rotation * (second-newest embedding coordinate).
            let predicted = rotation * ds.inputs.row(i)[8];
            assert!((predicted - ds.targets[i]).norm() <= 1e-12);
        }
        // Bounded orbit.
        assert!(series.iter().all(|z| z.norm() <= 1.5 + 1e-9));
    }

    #[test]
    fn synthetic_series_is_deterministic_and_bounded() {
        let a = synthetic_wind_series(9, 2000);
        let b = synthetic_wind_series(9, 2000);
        assert_eq!(a, b);
        assert!(a.iter().all(|z| z.norm().is_finite() && z.norm() < 100.0));
    }
}
