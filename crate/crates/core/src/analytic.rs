//! Closed-form dressed-band solution and quasiclassical Bloch kinematics.
//!
//! For a plane wave with phase `φ` per cell and no dc field, sector `n`
//! reduces to the 2×2 problem
//!
//! ```text
//! ν ã = 2 t_a cos φ ã − g_n b̃
//! ν b̃ = 2 t_b cos φ b̃ − g_n ã          g_n = g √(n+1)
//! ```
//!
//! with roots `ν₁,₂ = (t_a+t_b) cos φ ± √((t_a−t_b)² cos²φ + g_n²)`. Branch 1
//! (upper root) has amplitudes `(1, −Δₙ)`, branch 2 has `(Δₙ, 1)`, where
//! `Δₙ = g_n / ((t_a−t_b) cos φ + √(...))`.
//!
//! A weak dc field sweeps `φ` linearly through the Brillouin zone and the
//! dressed branches follow adiabatically.
//!
//! Only the real parts of the tunneling energies enter here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ChainConfig;

/// Dressed-state branch; `Upper` is the `+` root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn from_index(i: u8) -> Option<Branch> {
        match i {
            1 => Some(Branch::Upper),
            2 => Some(Branch::Lower),
            _ => None,
        }
    }
}

/// Eigenpair data of one dressed band at a given phase and photon label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedBand {
    pub n: usize,
    pub phi: f64,
    pub nu1: f64,
    pub nu2: f64,
    /// Mixing ratio Δₙ. Infinite when `g_n = 0` and the lower band lies on top.
    pub delta: f64,
    pub g_n: f64,
    /// `g_n = 0` with `(t_a − t_b) cos φ = 0`: Δₙ is 0/0 and set to 0 by convention.
    pub degenerate: bool,
}

impl DressedBand {
    pub fn nu(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Upper => self.nu1,
            Branch::Lower => self.nu2,
        }
    }

    /// Weight 1/(1+Δ²) of the `|a, n⟩` component in branch 1.
    pub fn excited_weight(&self) -> f64 {
        if self.delta.is_infinite() {
            0.0
        } else {
            1.0 / (1.0 + self.delta * self.delta)
        }
    }
}

/// Quasimomentum phase φ₀ − ω_B t, unwrapped.
///
/// The dc term in [`crate::dynamics`] is −ω_B·p, under which a packet launched
/// with phase `k₀` carries `k₀ + ω_B t`. Every dressed-band quantity depends on
/// `cos φ` only, so such a packet is described by `bloch_phase(t, -k₀, ω_B)`;
/// for `k₀ = 0` the two coincide.
pub fn bloch_phase(t: f64, phi0: f64, omega_b: f64) -> f64 {
    phi0 - omega_b * t
}

fn real_tunneling(config: &ChainConfig) -> (f64, f64) {
    (config.t_a.re, config.t_b.re)
}

/// Dressed eigenfrequencies and mixing ratio at phase `phi` in sector `n`.
pub fn dressed_band(phi: f64, n: usize, config: &ChainConfig) -> DressedBand {
    let (t_a, t_b) = real_tunneling(config);
    dressed_band_raw(phi, n, t_a, t_b, config.g0)
}

pub(crate) fn dressed_band_raw(phi: f64, n: usize, t_a: f64, t_b: f64, g: f64) -> DressedBand {
    let c = phi.cos();
    let g_n = g * ((n + 1) as f64).sqrt();
    let split = (t_a - t_b) * c;
    let root = split.hypot(g_n);
    let mean = (t_a + t_b) * c;

    let mut degenerate = false;
    // The two algebraically equal forms avoid cancellation on either sign of `split`.
    let delta = if split >= 0.0 {
        if g_n == 0.0 && split == 0.0 {
            degenerate = true;
            0.0
        } else {
            g_n / (split + root)
        }
    } else if g_n == 0.0 {
        f64::INFINITY
    } else {
        (root - split) / g_n
    };

    DressedBand {
        n,
        phi,
        nu1: mean + root,
        nu2: mean - root,
        delta,
        g_n,
        degenerate,
    }
}

/// Δₙ along the adiabatic sweep φ(t) = φ₀ − ω_B t.
pub fn delta_of_time(t: f64, n: usize, phi0: f64, config: &ChainConfig) -> f64 {
    dressed_band(bloch_phase(t, phi0, config.omega_b), n, config).delta
}

/// Photon statistics of a single dressed branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticPhotonStats {
    /// Photon number `n` and its probability.
    pub p_n: f64,
    /// Probability of `n + 1` photons.
    pub p_n1: f64,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    /// Non-negative entropy −Σ w ln w over the two Fock weights.
    pub entropy: f64,
}

impl AnalyticPhotonStats {
    /// Probability of `m` photons.
    pub fn probability(&self, m: usize) -> f64 {
        if m == self.n {
            self.p_n
        } else if m == self.n + 1 {
            self.p_n1
        } else {
            0.0
        }
    }
}

/// Photon statistics of branch `branch` at a given mixing ratio.
pub fn photon_stats_for_delta(branch: Branch, n: usize, band: &DressedBand) -> AnalyticPhotonStats {
    let w = band.excited_weight();
    let (p_n, p_n1) = match branch {
        Branch::Upper => (w, 1.0 - w),
        Branch::Lower => (1.0 - w, w),
    };
    AnalyticPhotonStats {
        p_n,
        p_n1,
        n,
        mean: n as f64 + p_n1,
        variance: w * (1.0 - w),
        entropy: binary_entropy(w),
    }
}

/// Photon statistics of branch `branch` at time `t` of the adiabatic sweep.
pub fn analytic_photon_stats(
    branch: Branch,
    n: usize,
    t: f64,
    phi0: f64,
    config: &ChainConfig,
) -> AnalyticPhotonStats {
    let band = dressed_band(bloch_phase(t, phi0, config.omega_b), n, config);
    photon_stats_for_delta(branch, n, &band)
}

fn binary_entropy(w: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    term(w) + term(1.0 - w)
}

/// Final phase φ₀ − ∫₀ᵀ ω_B(τ) dτ for a field ramp sampled uniformly on `[0, T]`
/// (both endpoints included), by the composite trapezoid rule.
pub fn adiabatic_final_phase(samples: &[f64], duration: f64, phi0: f64) -> Result<f64> {
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(Error::validation("duration", "must be finite and non-negative"));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("samples", "must be finite"));
    }
    if duration == 0.0 {
        return Ok(phi0);
    }
    if samples.len() < 2 {
        return Err(Error::validation("samples", "need at least two samples for T > 0"));
    }
    let h = duration / (samples.len() - 1) as f64;
    let inner: f64 = samples[1..samples.len() - 1].iter().sum();
    let integral = h * (0.5 * (samples[0] + samples[samples.len() - 1]) + inner);
    Ok(phi0 - integral)
}

/// Band followed by a quasiclassical packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketBand {
    Excited,
    Ground,
    /// Adiabatically followed dressed branch of sector `n`.
    Dressed { branch: Branch, n: usize },
}

/// Displacement of a packet's center after time `t`, in lattice units.
///
/// Integrating the group velocity along φ(t) gives
/// `Δx = (ν(φ(t)) − ν(φ₀)) / ω_B`; for a bare band this is
/// `(2t_α/ω_B)(cos(ω_B t − φ₀) − cos φ₀)`.
pub fn quasiclassical_center(
    t: f64,
    band: PacketBand,
    phi0: f64,
    config: &ChainConfig,
) -> Result<f64> {
    let omega_b = config.omega_b;
    if omega_b == 0.0 {
        return Err(Error::validation(
            "omega_b",
            "zero Bloch frequency gives unbounded ballistic drift",
        ));
    }
    let phi = bloch_phase(t, phi0, omega_b);
    let (t_a, t_b) = real_tunneling(config);
    let energy = |phi: f64| match band {
        PacketBand::Excited => 2.0 * t_a * phi.cos(),
        PacketBand::Ground => 2.0 * t_b * phi.cos(),
        PacketBand::Dressed { branch, n } => dressed_band(phi, n, config).nu(branch),
    };
    Ok((energy(phi) - energy(phi0)) / omega_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{LN_2, PI};

    fn cfg(t_a: f64, t_b: f64, g: f64, omega_b: f64) -> ChainConfig {
        ChainConfig::new(16, t_a, t_b, g, omega_b, 4)
    }

    // Independent oracle: eigen-decomposition of the 2×2 sector block.
    fn eig2(t_a: f64, t_b: f64, g_n: f64, phi: f64) -> ((f64, f64), f64) {
        let m = nalgebra::Matrix2::new(
            2.0 * t_a * phi.cos(),
            -g_n,
            -g_n,
            2.0 * t_b * phi.cos(),
        );
        let eig = m.symmetric_eigen();
        let (i_hi, i_lo) = if eig.eigenvalues[0] > eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
        let v = eig.eigenvectors.column(i_hi);
        ((eig.eigenvalues[i_hi], eig.eigenvalues[i_lo]), -v[1] / v[0])
    }

    #[test]
    fn reference_band_values() {
        let c = cfg(0.008, 0.0008, 0.00245, 0.0);
        let band = dressed_band(0.0, 0, &c);
        let ((hi, lo), ratio) = eig2(0.008, 0.0008, 0.00245, 0.0);
        assert_relative_eq!(band.nu1, hi, epsilon = 1e-15);
        assert_relative_eq!(band.nu2, lo, epsilon = 1e-15);
        assert_relative_eq!(band.delta, ratio, epsilon = 1e-12);
        // Frozen from the eigen-decomposition above.
        assert!((band.nu1 - 0.016406).abs() < 1e-6);
        assert!((band.nu2 - 0.001194).abs() < 1e-6);
        assert!((band.delta - 0.1655).abs() < 5e-5);
    }

    #[test]
    fn symmetric_tunneling() {
        let c = cfg(0.01, 0.01, 0.003, 0.0);
        for phi in [0.0, 0.4, 2.0, PI] {
            let b = dressed_band(phi, 2, &c);
            let g_n = 0.003 * 3f64.sqrt();
            assert_relative_eq!(b.nu1, 0.02 * phi.cos() + g_n, epsilon = 1e-15);
            assert_relative_eq!(b.nu2, 0.02 * phi.cos() - g_n, epsilon = 1e-15);
            assert_eq!(b.delta, 1.0);
        }
    }

    #[test]
    fn quarter_zone_gives_unit_delta() {
        let c = cfg(0.3, 0.01, 0.02, 0.0);
        let b = dressed_band(PI / 2.0, 0, &c);
        assert_relative_eq!(b.delta, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn decoupling_limit() {
        let c = cfg(0.01, 0.001, 1e-12, 0.0);
        assert!(dressed_band(0.0, 0, &c).delta < 1e-9);
        let zero = cfg(0.01, 0.001, 0.0, 0.0);
        assert!(dressed_band(PI, 0, &zero).delta.is_infinite());
        let degen = cfg(0.01, 0.01, 0.0, 0.0);
        let b = dressed_band(0.3, 0, &degen);
        assert!(b.degenerate);
        assert_eq!(b.delta, 0.0);
    }

    #[test]
    fn bloch_phase_ramp() {
        assert_relative_eq!(bloch_phase(1000.0, 0.0, 0.0008), -0.8, epsilon = 1e-15);
        assert_eq!(bloch_phase(123.0, 0.7, 0.0), 0.7);
        let tb = 2.0 * PI / 0.0008;
        assert_relative_eq!(bloch_phase(tb, 0.3, 0.0008), 0.3 - 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn delta_of_time_periodicity_and_reflection() {
        let c = cfg(0.008, 0.0008, 0.00245, 0.0008);
        let tb = 2.0 * PI / c.omega_b;
        for t in [0.0, 100.0, 1234.5, 5000.0] {
            let d = delta_of_time(t, 1, 0.0, &c);
            assert_relative_eq!(delta_of_time(t + tb, 1, 0.0, &c), d, epsilon = 1e-9);
            assert_relative_eq!(delta_of_time(tb - t, 1, 0.0, &c), d, epsilon = 1e-9);
        }
        let flat = cfg(0.004, 0.004, 0.002, 0.0008);
        for t in [0.0, 777.0, 3000.0] {
            assert_eq!(delta_of_time(t, 0, 0.0, &flat), 1.0);
        }
    }

    #[test]
    fn photon_stats_at_symmetric_point() {
        let c = cfg(0.004, 0.004, 0.002, 0.0008);
        for branch in [Branch::Upper, Branch::Lower] {
            let s = analytic_photon_stats(branch, 3, 50.0, 0.0, &c);
            assert_relative_eq!(s.p_n, 0.5, epsilon = 1e-15);
            assert_relative_eq!(s.p_n1, 0.5, epsilon = 1e-15);
            assert_relative_eq!(s.mean, 3.5, epsilon = 1e-15);
            assert_relative_eq!(s.variance, 0.25, epsilon = 1e-15);
            assert_relative_eq!(s.entropy, LN_2, epsilon = 1e-15);
        }
    }

    #[test]
    fn photon_stats_pure_fock_limit() {
        let c = cfg(0.01, 0.001, 0.0, 0.0);
        let s = analytic_photon_stats(Branch::Upper, 2, 0.0, 0.0, &c);
        assert_eq!((s.p_n, s.mean, s.variance, s.entropy), (1.0, 2.0, 0.0, 0.0));
        assert_eq!(s.probability(5), 0.0);
    }

    #[test]
    fn final_phase_quadrature() {
        assert_eq!(adiabatic_final_phase(&[0.0; 11], 100.0, 0.4).unwrap(), 0.4);
        let tb = 2.0 * PI / 0.0008;
        let rect = vec![0.0008; 1001];
        assert_relative_eq!(
            adiabatic_final_phase(&rect, tb, 0.1).unwrap(),
            0.1 - 2.0 * PI,
            epsilon = 1e-12
        );
        // Triangle with apex on a sample: exact integral peak·T/2.
        let (peak, duration, m) = (0.002, 4000.0, 2000usize);
        let tri: Vec<f64> = (0..=m)
            .map(|i| {
                let x = i as f64 / m as f64;
                peak * (1.0 - (2.0 * x - 1.0).abs())
            })
            .collect();
        let phase = adiabatic_final_phase(&tri, duration, 0.0).unwrap();
        assert!((phase + peak * duration / 2.0).abs() < 1e-10);
        assert!(adiabatic_final_phase(&[1.0], 10.0, 0.0).is_err());
        assert!(adiabatic_final_phase(&[f64::NAN, 1.0], 10.0, 0.0).is_err());
    }

    #[test]
    fn quasiclassical_single_band() {
        let c = cfg(0.008, 0.0008, 0.0, 0.0008);
        let tb = 2.0 * PI / c.omega_b;
        assert!(quasiclassical_center(tb, PacketBand::Excited, 0.0, &c).unwrap().abs() < 1e-9);
        let half = quasiclassical_center(tb / 2.0, PacketBand::Excited, 0.0, &c).unwrap();
        assert_relative_eq!(half, -40.0, epsilon = 1e-9);
        // Closed-form integral of the group velocity, by midpoint quadrature.
        let t = 0.37 * tb;
        let phi0 = 0.6;
        let steps = 20000;
        let h = t / steps as f64;
        let integral: f64 = (0..steps)
            .map(|i| {
                let tau = (i as f64 + 0.5) * h;
                2.0 * 0.008 * (phi0 - c.omega_b * tau).sin() * h
            })
            .sum();
        let x = quasiclassical_center(t, PacketBand::Excited, phi0, &c).unwrap();
        assert_relative_eq!(x, integral, max_relative = 1e-8);
        assert!(quasiclassical_center(1.0, PacketBand::Ground, 0.0, &cfg(0.1, 0.1, 0.0, 0.0)).is_err());
    }

    #[test]
    fn dressed_excursion_at_symmetric_tunneling() {
        let (t, wb) = (0.006, 0.0008);
        let c = cfg(t, t, 0.002, wb);
        let band = PacketBand::Dressed { branch: Branch::Upper, n: 0 };
        let xs: Vec<f64> = (0..=400)
            .map(|i| quasiclassical_center(i as f64 * 2.0 * PI / wb / 400.0, band, 0.0, &c).unwrap())
            .collect();
        let span = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
        // Peak-to-peak 2(t_a + t_b)/ω_B.
        assert_relative_eq!(span, 2.0 * (t + t) / wb, epsilon = 1e-9);
    }

    #[test]
    fn oscillation_suppressed_with_photon_number() {
        for &(t_a, t_b, g) in &[(0.008, 0.0008, 0.00245), (0.01, 0.002, 0.001), (0.003, 0.009, 0.002)] {
            let c = cfg(t_a, t_b, g, 0.0);
            let amp = |n: usize| {
                let ds: Vec<f64> =
                    (0..=200).map(|i| dressed_band(i as f64 * PI / 200.0, n, &c).delta).collect();
                ds.iter().cloned().fold(f64::MIN, f64::max) - ds.iter().cloned().fold(f64::MAX, f64::min)
            };
            for n in 0..10 {
                assert!(amp(n + 1) < amp(n), "n = {n}");
            }
        }
    }

    proptest! {
        #[test]
        fn root_identity_and_eigenvector(
            phi in -PI..PI,
            n in 0usize..50,
            t_a in -0.05f64..0.05,
            t_b in -0.05f64..0.05,
            g in 1e-5f64..0.05,
        ) {
            let b = dressed_band_raw(phi, n, t_a, t_b, g);
            let c = phi.cos();
            for nu in [b.nu1, b.nu2] {
                let lhs = (nu - 2.0 * t_a * c) * (nu - 2.0 * t_b * c);
                prop_assert!((lhs - b.g_n * b.g_n).abs() < 1e-12);
            }
            prop_assert!(b.nu1 >= b.nu2);
            prop_assert!(b.delta > 0.0);
            // Branch 1 = (1, −Δ): ν₁ã = 2t_a c ã − g_n b̃ and ν₁b̃ = 2t_b c b̃ − g_n ã.
            let r1 = (b.nu1 - 2.0 * t_a * c) * 1.0 + b.g_n * (-b.delta);
            let r2 = (b.nu1 - 2.0 * t_b * c) * (-b.delta) + b.g_n * 1.0;
            prop_assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
        }
    }
}
