//! Experiment driver: config files, output bundles, spectra, plot scripts
//! and device parameter reports.

pub mod config;
pub mod device;
pub mod plot;
pub mod run;
pub mod spectrum;

pub use config::{load, parse_str, ConfigErrors, ExperimentConfig, InitialState, Observable};
pub use run::{simulate, RunError, RunOutput};
pub use spectrum::{spectrum, SpectrumResult};
