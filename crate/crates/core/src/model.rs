//! Unit system, chain parameters, the Wannier–Fock index space and the state
//! container.
//!
//! Everything is dimensionless: ħ = 1 and energies/frequencies are measured in
//! units of the atomic transition frequency ω₀. Time is measured in 1/ω₀.
//!
//! # Index layout
//!
//! The dynamics never couples amplitudes across *sectors*. Sector `n` holds
//! the excited-band amplitudes with `n` photons together with the ground-band
//! amplitudes with `n + 1` photons. Two sectors are half-filled by the Fock
//! truncation: sector `n_max` (its ground partner would need `n_max + 1`
//! photons) and the orphan sector `{b_{p,0}}`, which has no coupling partner.
//!
//! Flat storage is sector-contiguous, in this order:
//!
//! ```text
//! [ sector 0 | sector 1 | ... | sector n_max-1 | sector n_max | orphan ]
//!   2N         2N               2N               N (a only)     N (b only)
//! ```
//!
//! Inside a paired sector the two bands interleave per site
//! (`a_0, b_0, a_1, b_1, ...`) so that the sector matrix is banded.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the two atomic levels an amplitude belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    /// Upper level, amplitudes `a_{p,n}`.
    Excited,
    /// Lower level, amplitudes `b_{p,n}`.
    Ground,
}

/// Dimensionless parameters of the chain + single-mode light system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub n_sites: usize,
    /// Tunneling energy of the excited band. Complex values are accepted; the
    /// backward hop carries the conjugate.
    pub t_a: Complex64,
    pub t_b: Complex64,
    /// Bare atom–light coupling. For pulsed runs this is the peak value.
    pub g0: f64,
    /// Bloch frequency eE_dc·a/ħ.
    pub omega_b: f64,
    /// Half the bare level splitting offset, entering as +δε on `a` and −δε on `b`.
    pub delta_eps: f64,
    /// Highest retained photon number.
    pub n_max: usize,
    /// Initial quasimomentum phase per cell.
    pub phi0: f64,
}

impl ChainConfig {
    /// Config with real tunneling energies and zero δε, φ₀.
    pub fn new(n_sites: usize, t_a: f64, t_b: f64, g0: f64, omega_b: f64, n_max: usize) -> Self {
        ChainConfig {
            n_sites,
            t_a: Complex64::new(t_a, 0.0),
            t_b: Complex64::new(t_b, 0.0),
            g0,
            omega_b,
            delta_eps: 0.0,
            n_max,
            phi0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validation_errors().into_iter().next().map_or(Ok(()), Err)
    }

    /// All violated invariants, not only the first one.
    pub fn validation_errors(&self) -> Vec<Error> {
        let mut errors = Vec::new();
        if self.n_sites < 2 {
            errors.push(Error::validation("n_sites", "must be at least 2"));
        }
        let finite = [
            ("t_a", self.t_a.re),
            ("t_a", self.t_a.im),
            ("t_b", self.t_b.re),
            ("t_b", self.t_b.im),
            ("g0", self.g0),
            ("omega_b", self.omega_b),
            ("delta_eps", self.delta_eps),
            ("phi0", self.phi0),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                errors.push(Error::validation(name, "must be finite"));
            }
        }
        if self.g0 < 0.0 {
            errors.push(Error::validation("g0", "must be non-negative"));
        }
        if self.omega_b < 0.0 {
            errors.push(Error::validation("omega_b", "must be non-negative"));
        }
        errors
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.n_sites, self.n_max)
    }

    /// Fock truncation for a coherent input of the given mean photon number:
    /// ⌈⟨n⟩ + 6√⟨n⟩⌉, at least 1.
    pub fn default_n_max(mean_photons: f64) -> usize {
        let n = (mean_photons + 6.0 * mean_photons.sqrt()).ceil();
        (n as usize).max(1)
    }
}

/// Identifies one dynamically closed block of the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SectorLabel {
    /// `{a_{·,n}, b_{·,n+1}}`; for `n = n_max` only the excited half exists.
    Photon(usize),
    /// `{b_{·,0}}`.
    Orphan,
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorLabel::Photon(n) => write!(f, "sector {n}"),
            SectorLabel::Orphan => write!(f, "orphan"),
        }
    }
}

/// Band content of a sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorKind {
    /// Interleaved `a_{p,n}`, `b_{p,n+1}`.
    Paired,
    ExcitedOnly,
    GroundOnly,
}

impl SectorKind {
    /// Amplitudes per site.
    pub fn block(self) -> usize {
        match self {
            SectorKind::Paired => 2,
            _ => 1,
        }
    }
}

/// Position of one amplitude in the Wannier–Fock basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub site: usize,
    pub photons: usize,
    pub band: Band,
}

/// Maps Wannier–Fock labels to flat storage offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    n_sites: usize,
    n_max: usize,
}

impl Layout {
    pub fn new(n_sites: usize, n_max: usize) -> Self {
        Layout { n_sites, n_max }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Total number of amplitudes, 2N(n_max+1).
    pub fn len(&self) -> usize {
        2 * self.n_sites * (self.n_max + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat_index(&self, site: usize, photons: usize, band: Band) -> Result<usize> {
        if site >= self.n_sites {
            return Err(Error::Range(format!("site {site} not in [0, {})", self.n_sites)));
        }
        if photons > self.n_max {
            return Err(Error::Range(format!(
                "photon number {photons} not in [0, {}]",
                self.n_max
            )));
        }
        Ok(self.flat_index_unchecked(site, photons, band))
    }

    #[inline]
    pub(crate) fn flat_index_unchecked(&self, site: usize, photons: usize, band: Band) -> usize {
        let n = self.n_sites;
        match band {
            Band::Excited if photons < self.n_max => 2 * n * photons + 2 * site,
            Band::Excited => 2 * n * self.n_max + site,
            Band::Ground if photons == 0 => 2 * n * self.n_max + n + site,
            Band::Ground => 2 * n * (photons - 1) + 2 * site + 1,
        }
    }

    /// Inverse of [`Layout::flat_index`].
    pub fn unflatten(&self, index: usize) -> Result<BasisIndex> {
        if index >= self.len() {
            return Err(Error::Range(format!("flat index {index} not in [0, {})", self.len())));
        }
        let n = self.n_sites;
        let paired_end = 2 * n * self.n_max;
        let out = if index < paired_end {
            let sector = index / (2 * n);
            let offset = index % (2 * n);
            if offset % 2 == 0 {
                BasisIndex { site: offset / 2, photons: sector, band: Band::Excited }
            } else {
                BasisIndex { site: offset / 2, photons: sector + 1, band: Band::Ground }
            }
        } else if index < paired_end + n {
            BasisIndex { site: index - paired_end, photons: self.n_max, band: Band::Excited }
        } else {
            BasisIndex { site: index - paired_end - n, photons: 0, band: Band::Ground }
        };
        Ok(out)
    }

    /// Sectors in storage order.
    pub fn sectors(&self) -> impl Iterator<Item = SectorLabel> {
        (0..=self.n_max).map(SectorLabel::Photon).chain(std::iter::once(SectorLabel::Orphan))
    }

    pub fn sector_kind(&self, label: SectorLabel) -> SectorKind {
        match label {
            SectorLabel::Photon(n) if n < self.n_max => SectorKind::Paired,
            SectorLabel::Photon(_) => SectorKind::ExcitedOnly,
            SectorLabel::Orphan => SectorKind::GroundOnly,
        }
    }

    pub fn sector_range(&self, label: SectorLabel) -> Range<usize> {
        let n = self.n_sites;
        match label {
            SectorLabel::Photon(k) if k < self.n_max => 2 * n * k..2 * n * (k + 1),
            SectorLabel::Photon(_) => 2 * n * self.n_max..2 * n * self.n_max + n,
            SectorLabel::Orphan => 2 * n * self.n_max + n..self.len(),
        }
    }
}

/// Full quantum state: amplitudes `a_{p,n}`, `b_{p,n}` and the current time.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: Layout,
    amps: Vec<Complex64>,
    pub time: f64,
}

impl StateVector {
    pub fn zeros(layout: Layout) -> Self {
        StateVector {
            layout,
            amps: vec![Complex64::new(0.0, 0.0); layout.len()],
            time: 0.0,
        }
    }

    /// Wraps flat amplitudes stored in [`Layout`] order.
    pub fn from_flat(layout: Layout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.len() {
            return Err(Error::Range(format!(
                "expected {} amplitudes, got {}",
                layout.len(),
                amps.len()
            )));
        }
        Ok(StateVector { layout, amps, time: 0.0 })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn n_sites(&self) -> usize {
        self.layout.n_sites
    }

    pub fn n_max(&self) -> usize {
        self.layout.n_max
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Excited amplitude `a_{p,n}`. Panics when out of range.
    #[inline]
    pub fn a(&self, site: usize, photons: usize) -> Complex64 {
        assert!(site < self.layout.n_sites && photons <= self.layout.n_max);
        self.amps[self.layout.flat_index_unchecked(site, photons, Band::Excited)]
    }

    /// Ground amplitude `b_{p,n}`. Panics when out of range.
    #[inline]
    pub fn b(&self, site: usize, photons: usize) -> Complex64 {
        assert!(site < self.layout.n_sites && photons <= self.layout.n_max);
        self.amps[self.layout.flat_index_unchecked(site, photons, Band::Ground)]
    }

    #[inline]
    pub fn get(&self, site: usize, photons: usize, band: Band) -> Complex64 {
        match band {
            Band::Excited => self.a(site, photons),
            Band::Ground => self.b(site, photons),
        }
    }

    pub fn set(&mut self, site: usize, photons: usize, band: Band, value: Complex64) -> Result<()> {
        let idx = self.layout.flat_index(site, photons, band)?;
        self.amps[idx] = value;
        Ok(())
    }

    pub fn sector(&self, label: SectorLabel) -> &[Complex64] {
        &self.amps[self.layout.sector_range(label)]
    }

    pub fn sector_mut(&mut self, label: SectorLabel) -> &mut [Complex64] {
        let range = self.layout.sector_range(label);
        &mut self.amps[range]
    }

    /// Disjoint mutable views of every sector, in storage order.
    pub fn sectors_mut(&mut self) -> Vec<(SectorLabel, &mut [Complex64])> {
        let layout = self.layout;
        let mut rest: &mut [Complex64] = &mut self.amps;
        let mut out = Vec::with_capacity(layout.n_max + 2);
        for label in layout.sectors() {
            let len = layout.sector_range(label).len();
            let (head, tail) = rest.split_at_mut(len);
            out.push((label, head));
            rest = tail;
        }
        out
    }

    /// Σ(|a|² + |b|²). Fails on non-finite amplitudes.
    pub fn norm(&self) -> Result<f64> {
        let total = norm_sqr(&self.amps);
        if total.is_finite() {
            Ok(total)
        } else {
            Err(Error::numeric(self.time, "non-finite amplitude"))
        }
    }

    /// Probability mass per sector; the values sum to [`StateVector::norm`].
    pub fn sector_norms(&self) -> BTreeMap<SectorLabel, f64> {
        self.layout
            .sectors()
            .map(|label| (label, norm_sqr(self.sector(label))))
            .collect()
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scale(&mut self, factor: Complex64) {
        for z in &mut self.amps {
            *z *= factor;
        }
    }

    /// Rescales to unit norm. Fails for the zero state.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm()?;
        if n == 0.0 {
            return Err(Error::validation("state", "cannot normalize the zero state"));
        }
        self.scale(Complex64::new(1.0 / n.sqrt(), 0.0));
        Ok(())
    }

    /// The same state with the `a` and `b` grids exchanged (photon labels kept).
    pub fn swap_bands(&self) -> StateVector {
        let mut out = StateVector::zeros(self.layout);
        out.time = self.time;
        for n in 0..=self.n_max() {
            for p in 0..self.n_sites() {
                let i = self.layout.flat_index_unchecked(p, n, Band::Excited);
                let j = self.layout.flat_index_unchecked(p, n, Band::Ground);
                out.amps[i] = self.amps[j];
                out.amps[j] = self.amps[i];
            }
        }
        out
    }
}

pub(crate) fn norm_sqr(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_endpoints() {
        let layout = Layout::new(5, 3);
        assert_eq!(layout.flat_index(0, 0, Band::Excited).unwrap(), 0);
        // Last slot belongs to the orphan sector.
        assert_eq!(layout.flat_index(4, 0, Band::Ground).unwrap(), 2 * 5 * 4 - 1);
        // The last paired sector ends with b_{N-1,n_max}.
        assert_eq!(
            layout.flat_index(4, 3, Band::Ground).unwrap(),
            layout.sector_range(SectorLabel::Photon(2)).end - 1
        );
    }

    #[test]
    fn flat_index_is_bijective_exhaustive() {
        for n_sites in 2..=8 {
            for n_max in 0..=4 {
                let layout = Layout::new(n_sites, n_max);
                let mut seen = vec![false; layout.len()];
                for n in 0..=n_max {
                    for p in 0..n_sites {
                        for band in [Band::Excited, Band::Ground] {
                            let i = layout.flat_index(p, n, band).unwrap();
                            assert!(!seen[i], "collision at {i}");
                            seen[i] = true;
                            let back = layout.unflatten(i).unwrap();
                            assert_eq!(back, BasisIndex { site: p, photons: n, band });
                        }
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn out_of_range_indices() {
        let layout = Layout::new(4, 2);
        assert!(matches!(layout.flat_index(4, 0, Band::Excited), Err(Error::Range(_))));
        assert!(matches!(layout.flat_index(0, 3, Band::Ground), Err(Error::Range(_))));
        assert!(matches!(layout.unflatten(layout.len()), Err(Error::Range(_))));
    }

    #[test]
    fn sectors_partition_storage() {
        let layout = Layout::new(6, 3);
        let mut next = 0;
        for label in layout.sectors() {
            let r = layout.sector_range(label);
            assert_eq!(r.start, next);
            next = r.end;
        }
        assert_eq!(next, layout.len());
        // Every amplitude lands in the sector its labels predict.
        for i in 0..layout.len() {
            let b = layout.unflatten(i).unwrap();
            let expected = match (b.band, b.photons) {
                (Band::Excited, n) => SectorLabel::Photon(n),
                (Band::Ground, 0) => SectorLabel::Orphan,
                (Band::Ground, n) => SectorLabel::Photon(n - 1),
            };
            assert!(layout.sector_range(expected).contains(&i));
        }
    }

    #[test]
    fn norm_basics() {
        let layout = Layout::new(3, 2);
        let mut s = StateVector::zeros(layout);
        assert_eq!(s.norm().unwrap(), 0.0);
        s.set(0, 0, Band::Excited, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.norm().unwrap(), 1.0);
        s.scale(Complex64::new(0.0, 3.0));
        assert!((s.norm().unwrap() - 9.0).abs() < 1e-15);
        s.set(1, 1, Band::Ground, Complex64::new(f64::NAN, 0.0)).unwrap();
        assert!(matches!(s.norm(), Err(Error::Numeric { .. })));
    }

    #[test]
    fn sector_norms_sum_to_norm() {
        let layout = Layout::new(4, 3);
        let amps = (0..layout.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let s = StateVector::from_flat(layout, amps).unwrap();
        let total: f64 = s.sector_norms().values().sum();
        assert!((total - s.norm().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn single_sector_mass() {
        let layout = Layout::new(4, 3);
        let mut s = StateVector::zeros(layout);
        s.set(2, 0, Band::Excited, Complex64::new(0.6, 0.0)).unwrap();
        s.set(3, 1, Band::Ground, Complex64::new(0.0, 0.8)).unwrap();
        let norms = s.sector_norms();
        assert!((norms[&SectorLabel::Photon(0)] - 1.0).abs() < 1e-15);
        assert_eq!(norms[&SectorLabel::Orphan], 0.0);
    }

    #[test]
    fn config_validation_collects_all() {
        let mut cfg = ChainConfig::new(1, 0.1, 0.1, -1.0, -0.5, 3);
        cfg.delta_eps = f64::INFINITY;
        let errs = cfg.validation_errors();
        assert_eq!(errs.len(), 4, "{errs:?}");
    }

    #[test]
    fn default_truncation() {
        assert_eq!(ChainConfig::default_n_max(25.0), 55);
        assert_eq!(ChainConfig::default_n_max(0.0), 1);
    }
}
