//! Initial states: Gaussian packets, coherent/vacuum products, entangled Fock
//! pairs and dressed eigenstates.
//!
//! All constructors return unit-norm states at `time = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{dressed_band, Branch};
use crate::error::{Error, Result};
use crate::model::{Band, ChainConfig, StateVector};

/// Gaussian packet `weight · exp(−(p−u)²/σ²) · exp(i k p)`.
///
/// Note the exponent has no factor of two: `sigma` is not a standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub u: f64,
    pub sigma: f64,
    #[serde(default)]
    pub k: f64,
    #[serde(default = "unit_weight")]
    pub weight: Complex64,
}

fn unit_weight() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl GaussianSpec {
    pub fn new(u: f64, sigma: f64, k: f64, weight: Complex64) -> Self {
        GaussianSpec { u, sigma, k, weight }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::validation("sigma", "must be positive"));
        }
        if !(self.u >= 0.0 && self.u < n_sites as f64) {
            return Err(Error::validation("u", format!("must lie in [0, {n_sites})")));
        }
        if !self.k.is_finite() || !self.weight.re.is_finite() || !self.weight.im.is_finite() {
            return Err(Error::validation("k", "packet phase and weight must be finite"));
        }
        Ok(())
    }
}

/// Photon-field part of a product initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PhotonPrep {
    Coherent { mean: f64 },
    Vacuum,
    Fock { n: usize },
}

/// Site envelope of a [`dressed_eigenstate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Uniform,
    Gaussian { u: f64, sigma: f64 },
}

/// Unnormalized site amplitudes of the packet; `weight` is not applied.
pub fn gaussian_amplitudes(spec: &GaussianSpec, n_sites: usize) -> Result<Vec<Complex64>> {
    if !(spec.sigma > 0.0) {
        return Err(Error::validation("sigma", "must be positive"));
    }
    Ok((0..n_sites)
        .map(|p| {
            let x = p as f64 - spec.u;
            let env = (-(x * x) / (spec.sigma * spec.sigma)).exp();
            Complex64::from_polar(env, spec.k * p as f64)
        })
        .collect())
}

/// Amplitudes √Poisson(n; mean) for n = 0..=n_max, normalized after truncation.
///
/// Returns the amplitudes and the Poisson mass lost to the truncation.
pub fn poisson_amplitudes(mean: f64, n_max: usize) -> Result<(Vec<f64>, f64)> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(Error::validation("mean_photons", "must be finite and non-negative"));
    }
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut log_fact = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        let w = if mean == 0.0 {
            if n == 0 { 1.0 } else { 0.0 }
        } else {
            (n as f64 * mean.ln() - mean - log_fact).exp()
        };
        amps.push(w.sqrt());
    }
    let kept: f64 = amps.iter().map(|a| a * a).sum();
    let tail = (1.0 - kept).max(0.0);
    let scale = 1.0 / kept.sqrt();
    for a in &mut amps {
        *a *= scale;
    }
    Ok((amps, tail))
}

fn packet_pair(
    packet_a: &GaussianSpec,
    packet_b: &GaussianSpec,
    n_sites: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if packet_a.weight == Complex64::new(0.0, 0.0) && packet_b.weight == Complex64::new(0.0, 0.0) {
        return Err(Error::validation("weight", "a₀ and b₀ cannot both be zero"));
    }
    packet_a.validate(n_sites)?;
    packet_b.validate(n_sites)?;
    let ga = gaussian_amplitudes(packet_a, n_sites)?;
    let gb = gaussian_amplitudes(packet_b, n_sites)?;
    Ok((
        ga.into_iter().map(|z| z * packet_a.weight).collect(),
        gb.into_iter().map(|z| z * packet_b.weight).collect(),
    ))
}

/// Electron packets times a photon distribution given by real amplitudes `c_n`.
fn product_state(
    packet_a: &GaussianSpec,
    packet_b: &GaussianSpec,
    photon_amps: &[f64],
    config: &ChainConfig,
) -> Result<StateVector> {
    config.validate()?;
    let n_sites = config.n_sites;
    let (ga, gb) = packet_pair(packet_a, packet_b, n_sites)?;
    let mut state = StateVector::zeros(config.layout());
    for (n, &c) in photon_amps.iter().enumerate().take(config.n_max + 1) {
        if c == 0.0 {
            continue;
        }
        for p in 0..n_sites {
            state.set(p, n, Band::Excited, ga[p] * c)?;
            state.set(p, n, Band::Ground, gb[p] * c)?;
        }
    }
    state.normalize()?;
    Ok(state)
}

/// Packets times a coherent field with zero phase and mean photon number `mean_photons`.
pub fn coherent_product_state(
    packet_a: &GaussianSpec,
    packet_b: &GaussianSpec,
    mean_photons: f64,
    config: &ChainConfig,
) -> Result<StateVector> {
    let (amps, tail) = poisson_amplitudes(mean_photons, config.n_max)?;
    if tail > 1e-6 {
        log::warn!(
            "photon truncation n_max = {} drops Poisson mass {tail:.3e} (mean {mean_photons})",
            config.n_max
        );
    }
    product_state(packet_a, packet_b, &amps, config)
}

pub fn vacuum_product_state(
    packet_a: &GaussianSpec,
    packet_b: &GaussianSpec,
    config: &ChainConfig,
) -> Result<StateVector> {
    product_state(packet_a, packet_b, &[1.0], config)
}

/// Packets times the Fock state `|n⟩`.
pub fn fock_product_state(
    packet_a: &GaussianSpec,
    packet_b: &GaussianSpec,
    n: usize,
    config: &ChainConfig,
) -> Result<StateVector> {
    if n > config.n_max {
        return Err(Error::Truncation { needed: n, n_max: config.n_max });
    }
    let mut amps = vec![0.0; n + 1];
    amps[n] = 1.0;
    product_state(packet_a, packet_b, &amps, config)
}

/// Either of the two photon-field product states, dispatched on `photons`.
pub fn product_state_from(
    packet_a: &GaussianSpec,
    packet_b: &GaussianSpec,
    photons: PhotonPrep,
    config: &ChainConfig,
) -> Result<StateVector> {
    match photons {
        PhotonPrep::Coherent { mean } => coherent_product_state(packet_a, packet_b, mean, config),
        PhotonPrep::Vacuum => vacuum_product_state(packet_a, packet_b, config),
        PhotonPrep::Fock { n } => fock_product_state(packet_a, packet_b, n, config),
    }
}

/// `C₀ · G(p) · (|a, p, n⟩ ± |b, p, n+1⟩)` with `sign` = +1 (in phase) or −1.
pub fn entangled_fock_state(
    n: usize,
    u: f64,
    sigma: f64,
    sign: i8,
    config: &ChainConfig,
) -> Result<StateVector> {
    config.validate()?;
    if sign != 1 && sign != -1 {
        return Err(Error::validation("phase", "must be +1 or -1"));
    }
    if n + 1 > config.n_max {
        return Err(Error::Truncation { needed: n + 1, n_max: config.n_max });
    }
    let spec = GaussianSpec::new(u, sigma, 0.0, Complex64::new(1.0, 0.0));
    spec.validate(config.n_sites)?;
    let g = gaussian_amplitudes(&spec, config.n_sites)?;
    let mut state = StateVector::zeros(config.layout());
    for (p, &gp) in g.iter().enumerate() {
        state.set(p, n, Band::Excited, gp)?;
        state.set(p, n + 1, Band::Ground, gp * f64::from(sign))?;
    }
    state.normalize()?;
    Ok(state)
}

/// Dressed plane wave of sector `n` at phase `phi`, optionally windowed.
///
/// Branch 1 carries `(1, −Δₙ)` on `(|a,p,n⟩, |b,p,n+1⟩)`, branch 2 carries `(Δₙ, 1)`,
/// both times `e^{ipφ}`. When Δₙ is infinite the branch-1 state is pure `b`.
pub fn dressed_eigenstate(
    n: usize,
    branch: Branch,
    phi: f64,
    window: Window,
    config: &ChainConfig,
) -> Result<StateVector> {
    config.validate()?;
    if n + 1 > config.n_max {
        return Err(Error::Truncation { needed: n + 1, n_max: config.n_max });
    }
    let band = dressed_band(phi, n, config);
    let (ca, cb) = if band.delta.is_infinite() {
        match branch {
            Branch::Upper => (0.0, -1.0),
            Branch::Lower => (1.0, 0.0),
        }
    } else {
        match branch {
            Branch::Upper => (1.0, -band.delta),
            Branch::Lower => (band.delta, 1.0),
        }
    };
    let profile: Vec<f64> = match window {
        Window::Uniform => vec![1.0; config.n_sites],
        Window::Gaussian { u, sigma } => {
            let spec = GaussianSpec::new(u, sigma, 0.0, Complex64::new(1.0, 0.0));
            spec.validate(config.n_sites)?;
            gaussian_amplitudes(&spec, config.n_sites)?.iter().map(|z| z.re).collect()
        }
    };
    let mut state = StateVector::zeros(config.layout());
    for (p, &w) in profile.iter().enumerate() {
        let phase = Complex64::from_polar(w, phi * p as f64);
        state.set(p, n, Band::Excited, phase * ca)?;
        state.set(p, n + 1, Band::Ground, phase * cb)?;
    }
    state.normalize()?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn gaussian_peak_and_phase() {
        let g = gaussian_amplitudes(&GaussianSpec::new(80.0, 10.0, 0.0, one()), 128).unwrap();
        assert_eq!(g[80], one());
        assert_relative_eq!(g[90].re, (-1.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(g[70].re, g[90].re, epsilon = 1e-15);
        let alt = gaussian_amplitudes(&GaussianSpec::new(4.0, 3.0, PI, one()), 8).unwrap();
        for (p, z) in alt.iter().enumerate() {
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            assert!((z.re.signum() - sign).abs() < 1e-12 && z.im.abs() < 1e-12 * z.norm().max(1.0));
        }
        let flat = gaussian_amplitudes(&GaussianSpec::new(4.0, 1e9, 0.0, one()), 8).unwrap();
        assert!(flat.iter().all(|z| (z.re - 1.0).abs() < 1e-12));
        assert!(gaussian_amplitudes(&GaussianSpec::new(4.0, 0.0, 0.0, one()), 8).is_err());
    }

    #[test]
    fn poisson_reference_weight() {
        let (amps, tail) = poisson_amplitudes(25.0, 60).unwrap();
        // Poisson(25; 25) = e^{-25} 25^25 / 25!, evaluated with a product loop.
        let mut direct = (-25.0f64).exp();
        for k in 1..=25 {
            direct *= 25.0 / k as f64;
        }
        assert_relative_eq!(amps[25] * amps[25], direct / (1.0 - tail), epsilon = 1e-14);
        assert!((amps[25] * amps[25] - 0.0795).abs() < 5e-5);
        assert!(tail < 1e-9);
        let (vac, t0) = poisson_amplitudes(0.0, 5).unwrap();
        assert_eq!(vac, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(t0, 0.0);
    }

    #[test]
    fn coherent_state_photon_marginal() {
        let cfg = ChainConfig::new(32, 0.01, 0.001, 0.002, 0.0, 60);
        let a = GaussianSpec::new(16.0, 3.0, 0.0, one());
        let b = GaussianSpec::new(16.0, 3.0, 0.0, zero());
        let s = coherent_product_state(&a, &b, 25.0, &cfg).unwrap();
        assert!((s.norm().unwrap() - 1.0).abs() < 1e-12);
        let (amps, _) = poisson_amplitudes(25.0, 60).unwrap();
        for n in 0..=60 {
            let pn: f64 = (0..32).map(|p| s.a(p, n).norm_sqr() + s.b(p, n).norm_sqr()).sum();
            assert!((pn - amps[n] * amps[n]).abs() < 1e-10);
        }
    }

    #[test]
    fn coherent_zero_mean_is_vacuum() {
        let cfg = ChainConfig::new(16, 0.01, 0.001, 0.002, 0.0, 3);
        let a = GaussianSpec::new(8.0, 2.0, 0.3, one());
        let b = GaussianSpec::new(6.0, 2.0, 0.0, Complex64::new(0.0, 0.5));
        let c = coherent_product_state(&a, &b, 0.0, &cfg).unwrap();
        let v = vacuum_product_state(&a, &b, &cfg).unwrap();
        assert_eq!(c, v);
    }

    #[test]
    fn vacuum_band_placement() {
        let cfg = ChainConfig::new(16, 0.01, 0.001, 0.002, 0.0, 2);
        let p = GaussianSpec::new(8.0, 2.0, 0.0, one());
        let q = GaussianSpec::new(8.0, 2.0, 0.0, zero());
        let s = vacuum_product_state(&p, &q, &cfg).unwrap();
        let norms = s.sector_norms();
        assert!((norms[&crate::model::SectorLabel::Photon(0)] - 1.0).abs() < 1e-12);
        let s = vacuum_product_state(&q, &p, &cfg).unwrap();
        assert!((s.sector_norms()[&crate::model::SectorLabel::Orphan] - 1.0).abs() < 1e-12);
        assert!(vacuum_product_state(&q, &q, &cfg).is_err());
    }

    #[test]
    fn entangled_state_structure() {
        let cfg = ChainConfig::new(32, 0.01, 0.01, 0.002, 0.0, 3);
        for sign in [1, -1] {
            let s = entangled_fock_state(1, 16.0, 4.0, sign, &cfg).unwrap();
            assert!((s.norm().unwrap() - 1.0).abs() < 1e-12);
            let w: f64 = (0..32).map(|p| s.a(p, 1).norm_sqr() - s.b(p, 2).norm_sqr()).sum();
            assert_eq!(w, 0.0);
            for p in 0..32 {
                assert_eq!(s.b(p, 2), s.a(p, 1) * f64::from(sign));
            }
        }
        assert!(matches!(
            entangled_fock_state(3, 16.0, 4.0, 1, &cfg),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn dressed_state_ratio() {
        let cfg = ChainConfig::new(16, 0.008, 0.0008, 0.00245, 0.0, 1);
        let s = dressed_eigenstate(0, Branch::Upper, 0.0, Window::Uniform, &cfg).unwrap();
        let ratio = -s.b(3, 1) / s.a(3, 0);
        assert_relative_eq!(ratio.re, 0.16551, epsilon = 5e-5);
        assert!(ratio.im.abs() < 1e-15);

        let sym = ChainConfig::new(16, 0.005, 0.005, 0.002, 0.0, 1);
        let s = dressed_eigenstate(0, Branch::Upper, 0.7, Window::Uniform, &sym).unwrap();
        assert_relative_eq!(s.a(2, 0).norm(), s.b(2, 1).norm(), epsilon = 1e-15);

        let weak = ChainConfig::new(16, 0.008, 0.0008, 1e-12, 0.0, 1);
        let s = dressed_eigenstate(0, Branch::Upper, 0.0, Window::Uniform, &weak).unwrap();
        let b_mass: f64 = (0..16).map(|p| s.b(p, 1).norm_sqr()).sum();
        assert!(b_mass < 1e-18);
    }

    #[test]
    fn windowed_dressed_state_normalized() {
        let cfg = ChainConfig::new(64, 0.008, 0.0008, 0.00245, 0.0, 2);
        let env = Window::Gaussian { u: 32.0, sigma: 8.0 };
        let s = dressed_eigenstate(1, Branch::Lower, 0.4, env, &cfg).unwrap();
        assert!((s.norm().unwrap() - 1.0).abs() < 1e-12);
        assert!(s.a(0, 1).norm() < s.a(32, 1).norm() * 1e-6);
    }
}
