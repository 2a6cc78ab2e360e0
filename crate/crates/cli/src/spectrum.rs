//! Windowed power spectra of sampled observables.

use std::f64::consts::PI;
use std::path::Path;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SpectrumError {
    #[error("need at least {MIN_SAMPLES} samples, found {0}")]
    TooFewSamples(usize),
    #[error("sample spacing must be positive and finite")]
    BadSpacing,
    #[error("samples are not uniformly spaced near t = {0}")]
    NonUniform(f64),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Angular frequencies 2πk/(M Δt), k = 0..=M/2, in units of ω₀.
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    /// Local maxima above the detection threshold, as (frequency, power).
    pub peaks: Vec<(f64, f64)>,
    pub threshold: f64,
}

impl SpectrumResult {
    pub fn bin_width(&self) -> f64 {
        self.frequencies.get(1).copied().unwrap_or(0.0)
    }

    /// Largest detected peak within `bins` bins of `omega`.
    pub fn peak_near(&self, omega: f64, bins: f64) -> Option<(f64, f64)> {
        let tol = bins * self.bin_width() + 1e-12 * omega.abs();
        self.peaks
            .iter()
            .copied()
            .filter(|(f, _)| (f - omega).abs() <= tol)
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Hann-windowed power spectrum of the mean-removed series.
///
/// A peak is a bin above both neighbors whose power exceeds
/// max(10 × median power, 10⁻² × largest power). The DC bin is never a peak.
pub fn spectrum(series: &[f64], dt_sample: f64) -> Result<SpectrumResult, SpectrumError> {
    let m = series.len();
    if m < MIN_SAMPLES {
        return Err(SpectrumError::TooFewSamples(m));
    }
    if !(dt_sample > 0.0 && dt_sample.is_finite()) {
        return Err(SpectrumError::BadSpacing);
    }
    if let Some(i) = series.iter().position(|x| !x.is_finite()) {
        return Err(SpectrumError::NonFinite(i));
    }
    let mean = series.iter().sum::<f64>() / m as f64;
    let scale = series.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut buf: Vec<Complex<f64>> = series
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / (m - 1) as f64).cos();
            Complex::new((x - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);

    let half = m / 2;
    let power: Vec<f64> = buf[..=half].iter().map(|z| z.norm_sqr() / m as f64).collect();
    let frequencies: Vec<f64> = (0..=half).map(|k| 2.0 * PI * k as f64 / (m as f64 * dt_sample)).collect();

    let mut sorted: Vec<f64> = power[1..].to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = sorted.last().copied().unwrap_or(0.0);
    // Rounding residue of a constant series is not a signal.
    let floor = (1e-10 * scale).powi(2) * m as f64;
    let threshold = (10.0 * median).max(1e-2 * max).max(floor);

    let peaks = (1..=half)
        .filter(|&k| {
            let p = power[k];
            p > threshold && p > power[k - 1] && (k == half || p > power[k + 1])
        })
        .map(|k| (frequencies[k], power[k]))
        .collect();
    Ok(SpectrumResult { frequencies, power, peaks, threshold })
}

/// Reads `column` and the time axis from a `frames.csv` file.
///
/// The last row is dropped when it is off the sampling grid (a final frame
/// emitted at the end of a run whose step count is not a multiple of the stride).
pub fn read_column(path: &Path, column: &str) -> Result<(Vec<f64>, Vec<f64>), SpectrumError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpectrumError::Input(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| SpectrumError::Input("empty file".into()))?.split(',').collect();
    let find = |name: &str| {
        header.iter().position(|h| *h == name).ok_or_else(|| {
            SpectrumError::Input(format!("no column `{name}` in {} (have: {})", path.display(), header.join(", ")))
        })
    };
    let (ti, ci) = (find("time")?, find(column)?);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (row, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let parse = |i: usize| -> Result<f64, SpectrumError> {
            cells
                .get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| SpectrumError::Input(format!("row {}: bad number in column {i}", row + 2)))
        };
        times.push(parse(ti)?);
        values.push(parse(ci)?);
    }
    if times.len() >= 3 {
        let n = times.len();
        let step = times[1] - times[0];
        let last = times[n - 1] - times[n - 2];
        if (last - step).abs() > 1e-9 * step.abs() {
            times.pop();
            values.pop();
        }
    }
    Ok((times, values))
}

/// Uniform spacing of `times`, checked to a relative 1e-6.
pub fn uniform_spacing(times: &[f64]) -> Result<f64, SpectrumError> {
    if times.len() < 2 {
        return Err(SpectrumError::TooFewSamples(times.len()));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(SpectrumError::BadSpacing);
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt {
            return Err(SpectrumError::NonUniform(w[0]));
        }
    }
    Ok(dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_cosine_gives_one_peak() {
        let dt = 0.5;
        let omega = 2.0 * PI * 20.0 / (512.0 * dt);
        let xs: Vec<f64> = (0..512).map(|i| (omega * i as f64 * dt).cos()).collect();
        let s = spectrum(&xs, dt).unwrap();
        assert_eq!(s.peaks.len(), 1, "{:?}", s.peaks);
        assert!((s.peaks[0].0 - omega).abs() <= s.bin_width());
    }

    #[test]
    fn off_bin_cosine_within_one_bin() {
        let dt = 1.0;
        let omega = 0.123;
        let xs: Vec<f64> = (0..1000).map(|i| 3.0 + (omega * i as f64).cos()).collect();
        let s = spectrum(&xs, dt).unwrap();
        assert_eq!(s.peaks.len(), 1);
        assert!(s.peak_near(omega, 1.0).is_some());
    }

    #[test]
    fn constant_series_has_no_peaks() {
        let s = spectrum(&[0.1; 300], 1.0).unwrap();
        assert!(s.peaks.is_empty());
        assert!(s.power.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn rejects_short_series() {
        assert_eq!(spectrum(&[1.0; 10], 1.0), Err(SpectrumError::TooFewSamples(10)));
    }

    #[test]
    fn frequencies_uniform_from_stride() {
        let s = spectrum(&vec![0.0; 128], 0.25).unwrap();
        let df = s.bin_width();
        for w in s.frequencies.windows(2) {
            assert!((w[1] - w[0] - df).abs() < 1e-12);
        }
        assert!((df - 2.0 * PI / 32.0).abs() < 1e-12);
    }
}
