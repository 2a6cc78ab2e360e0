//! Time-dependent coupling `g(t)` for pulsed light.
//!
//! The field is homogeneous over the chain, so every site sees the same
//! envelope and the retardation `x / v_gr` is dropped.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Envelope shape; times in units of 1/ω₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Constant,
    /// `exp(−(t−center)²/width²)`.
    Gaussian { center: f64, width: f64 },
    /// `sin²(π(t−start)/duration)` on `[start, start+duration]`, zero elsewhere.
    RaisedCosine { start: f64, duration: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(flatten)]
    pub shape: Shape,
    pub peak_g: f64,
}

/// Minimum envelope time scale, in optical periods, for the rotating-wave
/// approximation to be trusted.
pub const RWA_MIN_PERIODS: f64 = 5.0;

impl Envelope {
    pub fn constant(peak_g: f64) -> Self {
        Envelope { shape: Shape::Constant, peak_g }
    }

    pub fn gaussian(peak_g: f64, center: f64, width: f64) -> Self {
        Envelope { shape: Shape::Gaussian { center, width }, peak_g }
    }

    pub fn raised_cosine(peak_g: f64, start: f64, duration: f64) -> Self {
        Envelope { shape: Shape::RaisedCosine { start, duration }, peak_g }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.peak_g >= 0.0 && self.peak_g.is_finite()) {
            return Err(Error::validation("peak_g", "must be finite and non-negative"));
        }
        match self.shape {
            Shape::Constant => {}
            Shape::Gaussian { center, width } => {
                if !center.is_finite() {
                    return Err(Error::validation("center", "must be finite"));
                }
                if !(width > 0.0 && width.is_finite()) {
                    return Err(Error::validation("width", "must be positive"));
                }
            }
            Shape::RaisedCosine { start, duration } => {
                if !start.is_finite() {
                    return Err(Error::validation("start", "must be finite"));
                }
                if !(duration > 0.0 && duration.is_finite()) {
                    return Err(Error::validation("duration", "must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Envelope time scale (width or duration); `None` for a constant envelope.
    pub fn time_scale(&self) -> Option<f64> {
        match self.shape {
            Shape::Constant => None,
            Shape::Gaussian { width, .. } => Some(width),
            Shape::RaisedCosine { duration, .. } => Some(duration),
        }
    }

    /// Slow-envelope check: the time scale must span at least
    /// [`RWA_MIN_PERIODS`] optical periods 2π/ω₀.
    pub fn check_slow_envelope(&self) -> Result<()> {
        match self.time_scale() {
            Some(tau) if tau < RWA_MIN_PERIODS * 2.0 * PI => Err(Error::validation(
                "envelope",
                format!(
                    "time scale {tau} is shorter than {RWA_MIN_PERIODS} optical periods; \
                     the rotating-wave approximation does not hold"
                ),
            )),
            _ => Ok(()),
        }
    }

    /// Support outside which `g(t)` vanishes (or is negligible, for a Gaussian:
    /// beyond 40 widths the envelope underflows to zero).
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.shape {
            Shape::Constant => None,
            Shape::Gaussian { center, width } => Some((center - 40.0 * width, center + 40.0 * width)),
            Shape::RaisedCosine { start, duration } => Some((start, start + duration)),
        }
    }
}

pub fn coupling_at(envelope: &Envelope, t: f64) -> f64 {
    match envelope.shape {
        Shape::Constant => envelope.peak_g,
        Shape::Gaussian { center, width } => {
            let x = (t - center) / width;
            envelope.peak_g * (-x * x).exp()
        }
        Shape::RaisedCosine { start, duration } => {
            if t < start || t > start + duration {
                0.0
            } else {
                let s = (PI * (t - start) / duration).sin();
                envelope.peak_g * s * s
            }
        }
    }
}

/// ∫ g(t) dt over `[t0, t1]` by adaptive Simpson quadrature.
pub fn pulse_area(envelope: &Envelope, t0: f64, t1: f64) -> Result<f64> {
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(Error::validation("t1", "need finite t0 <= t1"));
    }
    envelope.validate()?;
    if t1 == t0 {
        return Ok(0.0);
    }
    let mut cuts = vec![t0, t1];
    match envelope.shape {
        Shape::Constant => return Ok(envelope.peak_g * (t1 - t0)),
        Shape::Gaussian { center, width } => {
            for k in -40..=40 {
                cuts.push(center + k as f64 * width);
            }
        }
        Shape::RaisedCosine { start, duration } => {
            cuts.push(start);
            cuts.push(start + duration);
        }
    }
    cuts.retain(|&c| c >= t0 && c <= t1);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let f = |t: f64| coupling_at(envelope, t);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let scale = envelope.peak_g * (b - a);
        total += adaptive_simpson(&f, a, b, 1e-12 * scale.max(f64::MIN_POSITIVE), 30);
    }
    Ok(total)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    // Halving stops at the rounding level so flat regions terminate.
    let half = (0.5 * tol).max(8.0 * f64::EPSILON * (left.abs() + right.abs()));
    simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, half, depth - 1)
}
