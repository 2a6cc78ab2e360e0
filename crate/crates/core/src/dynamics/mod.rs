//! Crank–Nicolson propagation of the chain + light amplitudes.
//!
//! Each sector advances independently by the Cayley step
//!
//! ```text
//! (1 + i dt/2 H(t+dt/2)) ψ(t+dt) = (1 − i dt/2 H(t+dt/2)) ψ(t)
//! ```
//!
//! which is exactly unitary for Hermitian `H`. Periodic (Born–von Kármán)
//! boundaries make each sector matrix banded plus two wrap corners; see
//! [`banded`]. Factorizations are cached per sector and rebuilt only when the
//! coupling at the step midpoint changes.

pub mod banded;
mod sector;

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

pub use sector::{
    assemble_sector, check_hermitian, solve_sector_system, CayleyFactor, SectorHamiltonian,
    SOLVE_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::model::{ChainConfig, SectorKind, SectorLabel, StateVector};
use crate::observables::ObservableFrame;
use crate::pulse::{coupling_at, Envelope};

/// Default step as a fraction of 1/E_max.
pub const DT_FACTOR: f64 = 0.05;
/// Largest accepted dt·E_max.
pub const DT_GUARD: f64 = 0.1;
/// Largest accepted per-step change of a sector norm.
pub const STEP_NORM_TOLERANCE: f64 = 1e-12;

/// Time dependence of the atom–light coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingSchedule {
    /// `g(t) = g0` from the chain config.
    Constant,
    Pulsed(Envelope),
}

impl CouplingSchedule {
    pub fn g_at(&self, config: &ChainConfig, t: f64) -> f64 {
        match self {
            CouplingSchedule::Constant => config.g0,
            CouplingSchedule::Pulsed(env) => coupling_at(env, t),
        }
    }

    pub fn g_max(&self, config: &ChainConfig) -> f64 {
        match self {
            CouplingSchedule::Constant => config.g0,
            CouplingSchedule::Pulsed(env) => env.peak_g,
        }
    }
}

/// Fastest frequency scale: max(|δε| + ω_B N, 2(|t_a| + |t_b|), g_max √(n_max+1)).
pub fn max_energy(config: &ChainConfig, schedule: &CouplingSchedule) -> f64 {
    let dc = config.delta_eps.abs() + config.omega_b * config.n_sites as f64;
    let hop = 2.0 * (config.t_a.norm() + config.t_b.norm());
    let light = schedule.g_max(config) * ((config.n_max + 1) as f64).sqrt();
    dc.max(hop).max(light)
}

/// `DT_FACTOR / E_max`, or 1 when the Hamiltonian vanishes.
pub fn default_dt(config: &ChainConfig, schedule: &CouplingSchedule) -> f64 {
    let e = max_energy(config, schedule);
    if e > 0.0 {
        DT_FACTOR / e
    } else {
        1.0
    }
}

/// Time grid and sampling of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionPlan {
    /// Requested step; the grid uses the largest step ≤ dt that divides t_end.
    pub dt: f64,
    pub t_end: f64,
    pub sample_stride: usize,
}

impl EvolutionPlan {
    pub fn new(dt: f64, t_end: f64, sample_stride: usize) -> Self {
        EvolutionPlan { dt, t_end, sample_stride }
    }

    pub fn with_default_dt(
        config: &ChainConfig,
        schedule: &CouplingSchedule,
        t_end: f64,
        sample_stride: usize,
    ) -> Self {
        Self::new(default_dt(config, schedule), t_end, sample_stride)
    }

    pub fn validate(&self, config: &ChainConfig, schedule: &CouplingSchedule) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::validation("dt", "must be positive and finite"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::validation("t_end", "must be finite and non-negative"));
        }
        if self.sample_stride == 0 {
            return Err(Error::validation("sample_stride", "must be at least 1"));
        }
        let e = max_energy(config, schedule);
        if self.dt * e > DT_GUARD {
            return Err(Error::validation(
                "dt",
                format!("dt·E_max = {:.4} exceeds {DT_GUARD}; largest allowed dt is {:.6e}", self.dt * e, DT_GUARD / e),
            ));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        if self.t_end == 0.0 {
            0
        } else {
            ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize
        }
    }

    pub fn effective_dt(&self) -> f64 {
        match self.steps() {
            0 => self.dt,
            n => self.t_end / n as f64,
        }
    }
}

struct SectorSolver {
    label: SectorLabel,
    kind: SectorKind,
    g_key: Option<u64>,
    ham: Option<SectorHamiltonian>,
    factor: Option<CayleyFactor>,
    rhs: Vec<Complex64>,
    out: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl SectorSolver {
    fn prepare(&mut self, config: &ChainConfig, g: f64, dt: f64) -> Result<bool> {
        // Single-band sectors do not see the coupling.
        let key = if self.kind == SectorKind::Paired { g.to_bits() } else { 0 };
        if self.g_key == Some(key) {
            return Ok(false);
        }
        let ham = SectorHamiltonian::assemble(config, self.label, g);
        self.factor = Some(CayleyFactor::new(&ham, dt)?);
        self.ham = Some(ham);
        self.g_key = Some(key);
        Ok(true)
    }

    fn advance(
        &mut self,
        psi: &mut [Complex64],
        config: &ChainConfig,
        g: f64,
        dt: f64,
        t: f64,
    ) -> Result<bool> {
        if psi.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Ok(false);
        }
        let rebuilt = self.prepare(config, g, dt).map_err(|e| at_time(e, t))?;
        let (ham, factor) = match (&self.ham, &self.factor) {
            (Some(h), Some(f)) => (h, f),
            _ => unreachable!("prepared above"),
        };
        ham.apply(psi, &mut self.scratch);
        let theta = Complex64::new(0.0, factor.half_dt());
        for ((r, p), hp) in self.rhs.iter_mut().zip(psi.iter()).zip(&self.scratch) {
            *r = p - theta * hp;
        }
        sector::solve_checked(factor, &self.rhs, &mut self.out, &mut self.scratch, t)?;

        let before = crate::model::norm_sqr(psi).sqrt();
        let after = crate::model::norm_sqr(&self.out).sqrt();
        if !after.is_finite() {
            return Err(Error::numeric(t, format!("non-finite amplitudes in sector {}", self.label)));
        }
        if (after - before).abs() > STEP_NORM_TOLERANCE {
            return Err(Error::numeric(
                t,
                format!("sector {} norm changed by {:.3e} in one step", self.label, after - before),
            ));
        }
        psi.copy_from_slice(&self.out);
        Ok(rebuilt)
    }
}

fn at_time(e: Error, t: f64) -> Error {
    match e {
        Error::Numeric { message, .. } => Error::Numeric { time: t, message },
        other => other,
    }
}

/// Stepper holding one cached Cayley factorization per sector.
pub struct Integrator {
    config: ChainConfig,
    schedule: CouplingSchedule,
    dt: f64,
    solvers: Vec<SectorSolver>,
    refactorizations: usize,
}

impl Integrator {
    pub fn new(config: &ChainConfig, schedule: CouplingSchedule, dt: f64) -> Result<Self> {
        config.validate()?;
        if let CouplingSchedule::Pulsed(env) = &schedule {
            env.validate()?;
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::validation("dt", "must be positive and finite"));
        }
        let layout = config.layout();
        let solvers = layout
            .sectors()
            .map(|label| {
                let dim = layout.sector_range(label).len();
                SectorSolver {
                    label,
                    kind: layout.sector_kind(label),
                    g_key: None,
                    ham: None,
                    factor: None,
                    rhs: vec![Complex64::new(0.0, 0.0); dim],
                    out: vec![Complex64::new(0.0, 0.0); dim],
                    scratch: vec![Complex64::new(0.0, 0.0); dim],
                }
            })
            .collect();
        Ok(Integrator { config: config.clone(), schedule, dt, solvers, refactorizations: 0 })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of sector factorizations built so far.
    pub fn refactorizations(&self) -> usize {
        self.refactorizations
    }

    /// Advances `state` from `state.time` to `state.time + dt`.
    pub fn step(&mut self, state: &mut StateVector) -> Result<()> {
        let t = state.time;
        self.step_from(state, t)?;
        state.time = t + self.dt;
        Ok(())
    }

    fn step_from(&mut self, state: &mut StateVector, t: f64) -> Result<()> {
        if state.layout() != self.config.layout() {
            return Err(Error::Range("state layout does not match the chain config".into()));
        }
        let g = self.schedule.g_at(&self.config, t + 0.5 * self.dt);
        let (config, dt) = (&self.config, self.dt);
        let results: Vec<Result<bool>> = self
            .solvers
            .par_iter_mut()
            .zip(state.sectors_mut().into_par_iter())
            .map(|(solver, (_, psi))| solver.advance(psi, config, g, dt, t))
            .collect();
        for r in results {
            if r? {
                self.refactorizations += 1;
            }
        }
        Ok(())
    }
}

/// One Crank–Nicolson step with the Hamiltonian at `t + dt/2`.
pub fn cn_step(
    state: &StateVector,
    t: f64,
    dt: f64,
    config: &ChainConfig,
    schedule: &CouplingSchedule,
) -> Result<StateVector> {
    let mut integrator = Integrator::new(config, *schedule, dt)?;
    let mut next = state.clone();
    integrator.step_from(&mut next, t)?;
    next.time = t + dt;
    Ok(next)
}

/// Result of [`evolve`].
#[derive(Debug, Clone)]
pub struct TrajectorySummary {
    pub final_state: StateVector,
    pub steps: usize,
    /// Step actually used (t_end / steps).
    pub dt: f64,
    pub frames: usize,
    /// Largest |norm − initial norm| over the emitted frames.
    pub max_norm_drift: f64,
    pub refactorizations: usize,
    pub wall_time: Duration,
}

/// Propagates `state` to `state.time + plan.t_end`, handing a frame to
/// `observer` at step 0, every `sample_stride` steps and at the final step.
pub fn evolve<F>(
    state: StateVector,
    plan: &EvolutionPlan,
    config: &ChainConfig,
    schedule: &CouplingSchedule,
    mut observer: F,
) -> Result<TrajectorySummary>
where
    F: FnMut(&ObservableFrame, &StateVector) -> std::result::Result<(), String>,
{
    let started = Instant::now();
    plan.validate(config, schedule)?;
    let steps = plan.steps();
    let dt = plan.effective_dt();
    let mut integrator = Integrator::new(config, *schedule, dt)?;
    let mut state = state;
    let t0 = state.time;
    let norm0 = state.norm()?;
    let mut frames = 0;
    let mut max_drift = 0.0f64;

    let mut emit = |s: &StateVector, frames: &mut usize, max_drift: &mut f64| -> Result<()> {
        let frame = ObservableFrame::compute(s, config);
        if !frame.norm.is_finite() {
            return Err(Error::numeric(s.time, "non-finite norm"));
        }
        *max_drift = max_drift.max((frame.norm - norm0).abs());
        *frames += 1;
        observer(&frame, s).map_err(|message| Error::Observer { time: s.time, message })
    };

    emit(&state, &mut frames, &mut max_drift)?;
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        integrator.step_from(&mut state, t)?;
        state.time = t0 + (k + 1) as f64 * dt;
        let done = k + 1;
        if done % plan.sample_stride == 0 || done == steps {
            emit(&state, &mut frames, &mut max_drift)?;
        }
    }
    log::debug!(
        "evolved {steps} steps of dt = {dt:.6e} with {} factorizations",
        integrator.refactorizations()
    );
    Ok(TrajectorySummary {
        final_state: state,
        steps,
        dt,
        frames,
        max_norm_drift: max_drift,
        refactorizations: integrator.refactorizations(),
        wall_time: started.elapsed(),
    })
}
