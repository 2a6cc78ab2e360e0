use num_complex::Complex64;

use super::banded::{PeriodicBanded, PeriodicBandedLu};
use crate::error::{Error, Result};
use crate::model::{ChainConfig, SectorKind, SectorLabel};

/// Hamiltonian restricted to one sector, stored as a periodic band.
///
/// Paired sectors interleave `a_{p,n}` (row `2p`) and `b_{p,n+1}` (row `2p+1`):
///
/// ```text
/// H[2p][2p]     =  δε − ω_B p        H[2p][2p±2]   = t_a, t_a*
/// H[2p+1][2p+1] = −δε − ω_B p        H[2p+1][2p+1±2] = t_b, t_b*
/// H[2p][2p+1]   = H[2p+1][2p] = −g √(n+1)
/// ```
///
/// Single-band sectors keep only their own ring.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorHamiltonian {
    pub label: SectorLabel,
    pub kind: SectorKind,
    /// Coupling strength used in assembly (before the √(n+1) factor).
    pub g: f64,
    matrix: PeriodicBanded,
}

impl SectorHamiltonian {
    pub fn assemble(config: &ChainConfig, label: SectorLabel, g_now: f64) -> Self {
        let layout = config.layout();
        let kind = layout.sector_kind(label);
        let n_sites = config.n_sites;
        let c = |x: f64| Complex64::new(x, 0.0);
        let matrix = match kind {
            SectorKind::Paired => {
                let n = match label {
                    SectorLabel::Photon(n) => n,
                    SectorLabel::Orphan => unreachable!("orphan sector is single-band"),
                };
                let coupling = c(-g_now * ((n + 1) as f64).sqrt());
                let mut m = PeriodicBanded::zeros(2 * n_sites, 2);
                for p in 0..n_sites {
                    let dc = -config.omega_b * p as f64;
                    let (ra, rb) = (2 * p, 2 * p + 1);
                    m.add(ra, 0, c(config.delta_eps + dc));
                    m.add(rb, 0, c(-config.delta_eps + dc));
                    m.add(ra, 2, config.t_a);
                    m.add(ra, -2, config.t_a.conj());
                    m.add(rb, 2, config.t_b);
                    m.add(rb, -2, config.t_b.conj());
                    m.add(ra, 1, coupling);
                    m.add(rb, -1, coupling);
                }
                m
            }
            SectorKind::ExcitedOnly | SectorKind::GroundOnly => {
                let (onsite, t) = if kind == SectorKind::ExcitedOnly {
                    (config.delta_eps, config.t_a)
                } else {
                    (-config.delta_eps, config.t_b)
                };
                let mut m = PeriodicBanded::zeros(n_sites, 1);
                for p in 0..n_sites {
                    m.add(p, 0, c(onsite - config.omega_b * p as f64));
                    m.add(p, 1, t);
                    m.add(p, -1, t.conj());
                }
                m
            }
        };
        SectorHamiltonian { label, kind, g: g_now, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &PeriodicBanded {
        &self.matrix
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matrix.apply(x, y);
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        self.matrix.to_dense()
    }
}

pub fn assemble_sector(config: &ChainConfig, label: SectorLabel, g_now: f64) -> SectorHamiltonian {
    SectorHamiltonian::assemble(config, label, g_now)
}

/// Factorized Cayley operator `1 + i (dt/2) H` of one sector.
#[derive(Debug, Clone)]
pub struct CayleyFactor {
    /// `1 + i (dt/2) H`, kept for residual checks.
    forward: PeriodicBanded,
    lu: PeriodicBandedLu,
    half_dt: f64,
}

impl CayleyFactor {
    pub fn new(h: &SectorHamiltonian, dt: f64) -> Result<Self> {
        let half_dt = 0.5 * dt;
        let forward = h.matrix.affine(Complex64::new(0.0, half_dt), Complex64::new(1.0, 0.0));
        let lu = PeriodicBandedLu::new(&forward)?;
        Ok(CayleyFactor { forward, lu, half_dt })
    }

    pub fn half_dt(&self) -> f64 {
        self.half_dt
    }

    pub fn operator(&self) -> &PeriodicBanded {
        &self.forward
    }

    pub fn dim(&self) -> usize {
        self.forward.dim()
    }
}

/// Relative residual above which a sector solve is rejected.
pub const SOLVE_TOLERANCE: f64 = 1e-10;

/// Solves `(1 + i dt/2 H) x = rhs` and checks the relative residual.
pub fn solve_sector_system(factor: &CayleyFactor, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::new(0.0, 0.0); rhs.len()];
    let mut scratch = vec![Complex64::new(0.0, 0.0); rhs.len()];
    solve_checked(factor, rhs, &mut out, &mut scratch, f64::NAN)?;
    Ok(out)
}

pub(crate) fn solve_checked(
    factor: &CayleyFactor,
    rhs: &[Complex64],
    out: &mut [Complex64],
    scratch: &mut [Complex64],
    time: f64,
) -> Result<()> {
    if rhs.len() != factor.dim() {
        return Err(Error::Range(format!(
            "right-hand side has {} entries, operator dimension is {}",
            rhs.len(),
            factor.dim()
        )));
    }
    factor.lu.solve_into(rhs, out);
    factor.forward.apply(out, scratch);
    let mut res = 0.0;
    let mut scale = 0.0;
    for (ax, b) in scratch.iter().zip(rhs) {
        res += (ax - b).norm_sqr();
        scale += b.norm_sqr();
    }
    if !res.is_finite() {
        return Err(Error::numeric(time, "non-finite amplitudes in sector solve"));
    }
    if scale > 0.0 && res > SOLVE_TOLERANCE * SOLVE_TOLERANCE * scale {
        return Err(Error::numeric(
            time,
            format!("sector solve residual {:.3e} exceeds tolerance", (res / scale).sqrt()),
        ));
    }
    Ok(())
}

/// Checks that a sector operator is Hermitian; intended for small chains.
pub fn check_hermitian(h: &SectorHamiltonian, tol: f64) -> Result<()> {
    let defect = h.matrix.hermitian_defect();
    if defect > tol {
        return Err(Error::numeric(f64::NAN, format!("sector {} not Hermitian: {defect:.3e}", h.label)));
    }
    Ok(())
}
