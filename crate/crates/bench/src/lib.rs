//! Fixtures shared by the benchmarks.

use blochdress_core::state_prep::{coherent_product_state, GaussianSpec};
use blochdress_core::{ChainConfig, Complex64, StateVector};

/// Coherent-light chain at the production scale: N = 128, n_max = 60.
pub fn production_chain() -> ChainConfig {
    let omega_b = 0.0008;
    let g = 0.025 / (2.0 * 26f64.sqrt());
    ChainConfig::new(128, 10.0 * omega_b, omega_b, g, omega_b, 60)
}

/// Chain of `n_sites` with the production parameters and a given truncation.
pub fn chain(n_sites: usize, n_max: usize) -> ChainConfig {
    ChainConfig { n_sites, n_max, ..production_chain() }
}

/// Excited-band Gaussian packet times coherent light with ⟨n⟩ = 25.
pub fn coherent_state(config: &ChainConfig) -> StateVector {
    let u = 0.6 * config.n_sites as f64;
    let a = GaussianSpec::new(u, 10f64.min(config.n_sites as f64 / 8.0), 0.0, Complex64::new(1.0, 0.0));
    let b = GaussianSpec::new(u, 1.0, 0.0, Complex64::new(0.0, 0.0));
    let mean = 25f64.min(config.n_max as f64 / 2.4);
    coherent_product_state(&a, &b, mean, config).expect("fixture state")
}
