//! Bloch oscillations of a chain of two-level atoms dressed by single-mode
//! quantum light.
//!
//! The state lives in the Wannier–Fock basis `|band, site⟩ ⊗ |n⟩`
//! ([`model`]), is prepared by [`state_prep`], propagated by the
//! Crank–Nicolson integrator in [`dynamics`] and measured by [`observables`].
//! [`analytic`] holds the closed-form dressed-band solution used as an oracle,
//! [`pulse`] the time-dependent coupling and [`device`] the maps from
//! physical device parameters.

pub mod analytic;
pub mod device;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod observables;
pub mod pulse;
pub mod state_prep;

pub use num_complex::Complex64;

pub use analytic::{Branch, DressedBand, PacketBand};
pub use dynamics::{evolve, CouplingSchedule, EvolutionPlan, Integrator, TrajectorySummary};
pub use error::{Error, Result};
pub use model::{Band, ChainConfig, Layout, SectorKind, SectorLabel, StateVector};
pub use observables::ObservableFrame;
pub use pulse::Envelope;
pub use state_prep::{GaussianSpec, PhotonPrep};
