#![allow(dead_code)]

use blochdress_core::{Band, ChainConfig, Complex64, StateVector};
use nalgebra::{DMatrix, DVector};

/// Full Hamiltonian built site by site from the basis labels, independent of
/// the sector assembly used by the integrator.
pub fn dense_hamiltonian(config: &ChainConfig, g: f64) -> DMatrix<Complex64> {
    let layout = config.layout();
    let dim = layout.len();
    let n_sites = config.n_sites;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    let idx = |p: usize, n: usize, band: Band| layout.flat_index(p, n, band).unwrap();
    for n in 0..=config.n_max {
        for p in 0..n_sites {
            let next = (p + 1) % n_sites;
            let prev = (p + n_sites - 1) % n_sites;
            let dc = -config.omega_b * p as f64;
            for (band, eps, t) in [
                (Band::Excited, config.delta_eps, config.t_a),
                (Band::Ground, -config.delta_eps, config.t_b),
            ] {
                let i = idx(p, n, band);
                h[(i, i)] += Complex64::new(eps + dc, 0.0);
                h[(i, idx(next, n, band))] += t;
                h[(i, idx(prev, n, band))] += t.conj();
            }
            if n < config.n_max {
                let coupling = Complex64::new(-g * ((n + 1) as f64).sqrt(), 0.0);
                let (i, j) = (idx(p, n, Band::Excited), idx(p, n + 1, Band::Ground));
                h[(i, j)] += coupling;
                h[(j, i)] += coupling;
            }
        }
    }
    h
}

/// exp(−i H t) ψ through the Hermitian eigendecomposition of `h`.
pub fn exact_propagate(h: &DMatrix<Complex64>, psi: &[Complex64], t: f64) -> Vec<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let coeffs = v.adjoint() * DVector::from_column_slice(psi);
    let phased = DVector::from_iterator(
        coeffs.len(),
        coeffs
            .iter()
            .zip(eig.eigenvalues.iter())
            .map(|(c, &l)| c * Complex64::from_polar(1.0, -l * t)),
    );
    (v * phased).iter().copied().collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Deterministic pseudo-random normalized state.
pub fn scrambled_state(config: &ChainConfig, salt: u64) -> StateVector {
    let mut x = salt.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let amps = (0..config.layout().len()).map(|_| Complex64::new(next(), next())).collect();
    let mut s = StateVector::from_flat(config.layout(), amps).unwrap();
    s.normalize().unwrap();
    s
}
