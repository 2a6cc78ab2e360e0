//! Executes a config and writes the output bundle.
//!
//! Data files are CSV with `{:.16e}` numbers and carry no timestamps, so a
//! fixed config always produces byte-identical data. Run metadata, including
//! wall time, goes to `meta.json`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use blochdress_core::state_prep::{dressed_eigenstate, entangled_fock_state, product_state_from};
use blochdress_core::{
    analytic, evolve, Error, ObservableFrame, SectorLabel, StateVector,
};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, InitialState, Observable};

/// Mass within this many sites of the wrap seam that triggers a warning.
const SEAM_MARGIN: usize = 5;
const SEAM_MASS_LIMIT: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// Process exit code: 1 for invalid input, 2 for failures during the run.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(Error::Validation { .. } | Error::Range(_) | Error::Truncation { .. }) => 1,
            _ => 2,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.to_path_buf(), source }
}

/// Everything a run produced, in memory.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub frames: Vec<ObservableFrame>,
    /// Largest |Σ_s w_s − Σ_s w_s(0)| over samples, with w_s the squared sector norms.
    pub max_norm_drift: f64,
    /// Largest change of any single sector's squared norm over samples.
    pub max_sector_drift: f64,
    pub steps: usize,
    pub dt: f64,
    pub wall_time: Duration,
    pub seam_warnings: Vec<String>,
    pub run_hash: String,
    pub final_state: StateVector,
}

impl RunOutput {
    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.time).collect()
    }

    pub fn series(&self, f: impl Fn(&ObservableFrame) -> f64) -> Vec<f64> {
        self.frames.iter().map(f).collect()
    }
}

/// Builds the initial state named by the config.
pub fn initial_state(cfg: &ExperimentConfig) -> Result<StateVector, Error> {
    let chain = &cfg.chain;
    match cfg.initial_state {
        InitialState::Product { a, b, photons } => product_state_from(&a, &b, photons, chain),
        InitialState::Entangled { n, u, sigma, sign } => entangled_fock_state(n, u, sigma, sign, chain),
        InitialState::Dressed { n, branch, phi, window } => dressed_eigenstate(n, branch, phi, window, chain),
    }
}

/// Content hash of the config echo and the program version.
pub fn run_hash(cfg: &ExperimentConfig) -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update(toml::to_string(&cfg.raw).unwrap_or_default().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs the config; writes the bundle to `out_dir` when given.
pub fn simulate(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunOutput, RunError> {
    let state = initial_state(cfg)?;
    let sectors0 = state.sector_norms();
    let norm0: f64 = sectors0.values().sum();
    let mut writers = match out_dir {
        Some(dir) => Some(Writers::create(dir, cfg)?),
        None => None,
    };

    let mut frames = Vec::new();
    let mut max_norm_drift = 0.0f64;
    let mut max_sector_drift = 0.0f64;
    let mut seam_warnings = Vec::new();
    let mut io_failure: Option<RunError> = None;
    let summary = evolve(state, &cfg.plan, &cfg.chain, &cfg.schedule(), |frame, s| {
        let sectors = s.sector_norms();
        let total: f64 = sectors.values().sum();
        max_norm_drift = max_norm_drift.max((total - norm0).abs());
        for (label, w) in &sectors {
            max_sector_drift = max_sector_drift.max((w - sectors0[label]).abs());
        }
        // Short chains have no interior away from the seam to speak of.
        if seam_warnings.is_empty() && cfg.chain.n_sites > 4 * SEAM_MARGIN {
            let seam = blochdress_core::observables::seam_mass(s, SEAM_MARGIN);
            if seam > SEAM_MASS_LIMIT {
                seam_warnings.push(format!(
                    "t = {:.6e}: mass {seam:.3e} within {SEAM_MARGIN} sites of the wrap seam; packet center is unreliable from here on",
                    frame.time
                ));
            }
        }
        if let Some(w) = writers.as_mut() {
            if let Err(e) = w.write(frame, cfg) {
                let msg = e.to_string();
                io_failure = Some(e);
                return Err(msg);
            }
        }
        frames.push(frame.clone());
        Ok(())
    });
    let summary = match (summary, io_failure) {
        (_, Some(e)) => return Err(e),
        (r, None) => r?,
    };
    for w in &seam_warnings {
        log::warn!("{w}");
    }

    let output = RunOutput {
        frames,
        max_norm_drift,
        max_sector_drift,
        steps: summary.steps,
        dt: summary.dt,
        wall_time: summary.wall_time,
        seam_warnings,
        run_hash: run_hash(cfg),
        final_state: summary.final_state,
    };
    if let (Some(w), Some(dir)) = (writers, out_dir) {
        w.finish()?;
        write_analytic(dir, cfg, &output)?;
        write_meta(dir, cfg, &output, summary.refactorizations)?;
    }
    Ok(output)
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

struct Writers {
    frames: (PathBuf, BufWriter<File>),
    inversion: Option<(PathBuf, BufWriter<File>)>,
    current: Option<(PathBuf, BufWriter<File>)>,
    photons: Option<(PathBuf, BufWriter<File>)>,
    bloch_period: Option<f64>,
}

fn open(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), RunError> {
    let path = dir.join(name);
    let f = File::create(&path).map_err(io_err(&path))?;
    Ok((path, BufWriter::new(f)))
}

fn write_line(target: &mut (PathBuf, BufWriter<File>), line: &str) -> Result<(), RunError> {
    let (path, w) = target;
    writeln!(w, "{line}").map_err(io_err(path))
}

impl Writers {
    fn create(dir: &Path, cfg: &ExperimentConfig) -> Result<Self, RunError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        // A stale matrix from an earlier run with other observables would be misleading.
        for name in ["inversion.csv", "current.csv", "photons.csv", "analytic.csv"] {
            let p = dir.join(name);
            if p.exists() {
                fs::remove_file(&p).map_err(io_err(&p))?;
            }
        }
        let bloch_period = cfg.bloch_period();
        let mut frames = open(dir, "frames.csv")?;
        let mut header = vec!["time"];
        if bloch_period.is_some() {
            header.push("time_bloch");
        }
        let out = &cfg.outputs;
        if out.wants(Observable::Inversion) {
            header.push("total_inversion");
        }
        for (o, name) in [
            (Observable::MeanN, "mean_n"),
            (Observable::Variance, "var_n"),
            (Observable::Entropy, "entropy"),
            (Observable::Center, "center"),
        ] {
            if out.wants(o) {
                header.push(name);
            }
        }
        header.push("norm");
        write_line(&mut frames, &header.join(","))?;

        let n_sites = cfg.chain.n_sites;
        let matrix = |name: &str, width: usize, prefix: &str| -> Result<_, RunError> {
            let mut w = open(dir, name)?;
            let cols: Vec<String> =
                std::iter::once("time".to_string()).chain((0..width).map(|i| format!("{prefix}{i}"))).collect();
            write_line(&mut w, &cols.join(","))?;
            Ok(w)
        };
        let inversion = out.wants(Observable::Inversion).then(|| matrix("inversion.csv", n_sites, "p")).transpose()?;
        let current = out.wants(Observable::Current).then(|| matrix("current.csv", n_sites, "p")).transpose()?;
        let photons =
            out.wants(Observable::Photons).then(|| matrix("photons.csv", cfg.chain.n_max + 1, "n")).transpose()?;
        Ok(Writers { frames, inversion, current, photons, bloch_period })
    }

    fn write(&mut self, f: &ObservableFrame, cfg: &ExperimentConfig) -> Result<(), RunError> {
        let out = &cfg.outputs;
        let mut row = vec![fmt(f.time)];
        if let Some(tb) = self.bloch_period {
            row.push(fmt(f.time / tb));
        }
        if out.wants(Observable::Inversion) {
            row.push(fmt(f.inversion_total()));
        }
        for (o, v) in [
            (Observable::MeanN, f.mean_n),
            (Observable::Variance, f.var_n),
            (Observable::Entropy, f.entropy),
            (Observable::Center, f.center),
        ] {
            if out.wants(o) {
                row.push(fmt(v));
            }
        }
        row.push(fmt(f.norm));
        write_line(&mut self.frames, &row.join(","))?;

        let matrix_row = |values: &[f64]| -> String {
            std::iter::once(fmt(f.time)).chain(values.iter().map(|&v| fmt(v))).collect::<Vec<_>>().join(",")
        };
        if let Some(w) = self.inversion.as_mut() {
            write_line(w, &matrix_row(&f.inversion))?;
        }
        if let Some(w) = self.current.as_mut() {
            write_line(w, &matrix_row(&f.current))?;
        }
        if let Some(w) = self.photons.as_mut() {
            write_line(w, &matrix_row(&f.photon_dist))?;
        }
        Ok(())
    }

    fn finish(self) -> Result<(), RunError> {
        for (path, mut w) in [Some(self.frames), self.inversion, self.current, self.photons].into_iter().flatten() {
            w.flush().map_err(io_err(&path))?;
        }
        Ok(())
    }
}

/// Closed-form photon statistics along the sweep, for dressed-state runs.
fn write_analytic(dir: &Path, cfg: &ExperimentConfig, out: &RunOutput) -> Result<(), RunError> {
    let InitialState::Dressed { n, branch, phi, .. } = cfg.initial_state else {
        return Ok(());
    };
    let mut w = open(dir, "analytic.csv")?;
    write_line(&mut w, "time,mean_n,var_n,entropy")?;
    for f in &out.frames {
        let s = analytic::analytic_photon_stats(branch, n, f.time, phi, &cfg.chain);
        write_line(&mut w, &[f.time, s.mean, s.variance, s.entropy].map(fmt).join(","))?;
    }
    let (path, mut w) = w;
    w.flush().map_err(io_err(&path))
}

fn write_meta(dir: &Path, cfg: &ExperimentConfig, out: &RunOutput, refactorizations: usize) -> Result<(), RunError> {
    let chain = &cfg.chain;
    let echo = serde_json::to_value(&cfg.raw).unwrap_or(serde_json::Value::Null);
    let sectors: serde_json::Map<String, serde_json::Value> = out
        .final_state
        .sector_norms()
        .into_iter()
        .map(|(label, w)| {
            let key = match label {
                SectorLabel::Photon(n) => format!("photon_{n}"),
                SectorLabel::Orphan => "orphan".to_string(),
            };
            (key, json!(w))
        })
        .collect();
    let meta = json!({
        "description": cfg.description,
        "config": echo,
        "chain": {
            "n_sites": chain.n_sites,
            "t_a": [chain.t_a.re, chain.t_a.im],
            "t_b": [chain.t_b.re, chain.t_b.im],
            "g0": chain.g0,
            "omega_b": chain.omega_b,
            "delta_eps": chain.delta_eps,
            "n_max": chain.n_max,
            "phi0": chain.phi0,
        },
        "envelope": cfg.envelope,
        "time_unit": "1/omega0",
        "bloch_period": cfg.bloch_period(),
        "dt": out.dt,
        "steps": out.steps,
        "t_end": cfg.plan.t_end,
        "sample_stride": cfg.plan.sample_stride,
        "frames": out.frames.len(),
        "refactorizations": refactorizations,
        "run_hash": out.run_hash,
        "wall_time_s": out.wall_time.as_secs_f64(),
        "max_norm_drift": out.max_norm_drift,
        "max_sector_drift": out.max_sector_drift,
        "final_sector_norms": sectors,
        "seam_warnings": out.seam_warnings,
        "files": bundle_files(cfg),
    });
    let path = dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta).expect("metadata is plain JSON");
    fs::write(&path, text + "\n").map_err(io_err(&path))
}

fn bundle_files(cfg: &ExperimentConfig) -> Vec<&'static str> {
    let mut files = vec!["frames.csv"];
    for (o, f) in [
        (Observable::Inversion, "inversion.csv"),
        (Observable::Current, "current.csv"),
        (Observable::Photons, "photons.csv"),
    ] {
        if cfg.outputs.wants(o) {
            files.push(f);
        }
    }
    if matches!(cfg.initial_state, InitialState::Dressed { .. }) {
        files.push("analytic.csv");
    }
    files
}
