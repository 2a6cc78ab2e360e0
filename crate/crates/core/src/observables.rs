//! Electronic and photonic observables of a [`StateVector`].
//!
//! The photon entropy is the Shannon entropy of the diagonal Fock weights,
//! which equals the von Neumann entropy of the reduced field state only when
//! coherences between Fock levels vanish.

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{ChainConfig, StateVector};

/// One time sample of every observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableFrame {
    pub time: f64,
    pub inversion: Vec<f64>,
    pub current: Vec<f64>,
    pub photon_dist: Vec<f64>,
    pub mean_n: f64,
    pub var_n: f64,
    pub entropy: f64,
    pub center: f64,
    pub norm: f64,
}

impl ObservableFrame {
    pub fn compute(state: &StateVector, config: &ChainConfig) -> Self {
        let photon_dist = photon_distribution(state);
        let (mean_n, var_n) = moments(&photon_dist);
        ObservableFrame {
            time: state.time,
            inversion: inversion_density(state),
            current: tunneling_current_density(state, config),
            entropy: entropy_of(&photon_dist),
            photon_dist,
            mean_n,
            var_n,
            center: packet_center(state),
            norm: crate::model::norm_sqr(state.as_slice()).sqrt(),
        }
    }

    pub fn inversion_total(&self) -> f64 {
        self.inversion.iter().sum()
    }
}

/// W(p) = Σₙ |a_{p,n}|² − |b_{p,n}|².
pub fn inversion_density(state: &StateVector) -> Vec<f64> {
    (0..state.n_sites())
        .map(|p| {
            (0..=state.n_max())
                .map(|n| state.a(p, n).norm_sqr() - state.b(p, n).norm_sqr())
                .sum()
        })
        .collect()
}

/// Site populations Σₙ |a_{p,n}|² + |b_{p,n}|².
pub fn site_density(state: &StateVector) -> Vec<f64> {
    (0..state.n_sites())
        .map(|p| {
            (0..=state.n_max())
                .map(|n| state.a(p, n).norm_sqr() + state.b(p, n).norm_sqr())
                .sum()
        })
        .collect()
}

/// J(p) = Im[t_a Σₙ (a_{p−1,n} − a_{p+1,n}) a*_{p,n}] + (same for b), periodic in p.
///
/// In units of e·ω₀ (charge times the unit frequency). J(p) is the mean of the
/// bond currents entering and leaving site p.
pub fn tunneling_current_density(state: &StateVector, config: &ChainConfig) -> Vec<f64> {
    let n_sites = state.n_sites();
    (0..n_sites)
        .map(|p| {
            let prev = (p + n_sites - 1) % n_sites;
            let next = (p + 1) % n_sites;
            let mut xa = Complex64::new(0.0, 0.0);
            let mut xb = Complex64::new(0.0, 0.0);
            for n in 0..=state.n_max() {
                xa += (state.a(prev, n) - state.a(next, n)) * state.a(p, n).conj();
                xb += (state.b(prev, n) - state.b(next, n)) * state.b(p, n).conj();
            }
            (config.t_a * xa).im + (config.t_b * xb).im
        })
        .collect()
}

/// p̃(n) = Σ_p |a_{p,n}|² + |b_{p,n}|² for n = 0..=n_max.
pub fn photon_distribution(state: &StateVector) -> Vec<f64> {
    (0..=state.n_max())
        .map(|n| {
            (0..state.n_sites())
                .map(|p| state.a(p, n).norm_sqr() + state.b(p, n).norm_sqr())
                .sum()
        })
        .collect()
}

fn moments(dist: &[f64]) -> (f64, f64) {
    let mean: f64 = dist.iter().enumerate().map(|(n, w)| n as f64 * w).sum();
    let second: f64 = dist.iter().enumerate().map(|(n, w)| (n * n) as f64 * w).sum();
    (mean, (second - mean * mean).max(0.0))
}

fn entropy_of(dist: &[f64]) -> f64 {
    dist.iter().filter(|&&w| w > 0.0).map(|&w| -w * w.ln()).sum()
}

pub fn mean_photon_number(state: &StateVector) -> f64 {
    moments(&photon_distribution(state)).0
}

/// ⟨n²⟩ − ⟨n⟩², clamped at zero against rounding.
pub fn photon_variance(state: &StateVector) -> f64 {
    moments(&photon_distribution(state)).1
}

/// −Σ p̃(n) ln p̃(n), natural log, with 0 ln 0 = 0.
pub fn photon_entropy(state: &StateVector) -> f64 {
    entropy_of(&photon_distribution(state))
}

/// Σ_p p · N_p. Meaningful only while the packet stays clear of the wrap seam.
pub fn packet_center(state: &StateVector) -> f64 {
    site_density(state).iter().enumerate().map(|(p, w)| p as f64 * w).sum()
}

/// Mass within `margin` sites of the periodic seam between p = N−1 and p = 0.
pub fn seam_mass(state: &StateVector, margin: usize) -> f64 {
    let n_sites = state.n_sites();
    site_density(state)
        .iter()
        .enumerate()
        .filter(|(p, _)| *p < margin || *p + margin >= n_sites)
        .map(|(_, w)| w)
        .sum()
}
