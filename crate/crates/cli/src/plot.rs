//! Emits matplotlib scripts that render an output bundle.
//!
//! The scripts are self-contained: they read the bundle's CSV files relative
//! to their own location and write PNGs next to them.

use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("bundle {dir} has no {file}")]
    Missing { dir: PathBuf, file: &'static str },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Meta { path: PathBuf, message: String },
}

/// What the scripts will draw, as decided from the bundle contents.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPlan {
    pub scripts: Vec<PathBuf>,
    pub heatmaps: Vec<&'static str>,
    pub scalar_columns: Vec<String>,
    pub overlay: bool,
    pub n_sites: Option<usize>,
    pub bloch_period: Option<f64>,
}

const SCALARS: [(&str, &str); 5] = [
    ("total_inversion", "Σ_p W(p)"),
    ("mean_n", "⟨n⟩"),
    ("var_n", "δn"),
    ("entropy", "S"),
    ("center", "packet center (sites)"),
];

/// Writes `plots/scalars.py` and, when the site-resolved matrices exist,
/// `plots/heatmaps.py` into `dir`.
pub fn emit_plots(dir: &Path) -> Result<PlotPlan, PlotError> {
    let frames = dir.join("frames.csv");
    if !frames.is_file() {
        return Err(PlotError::Missing { dir: dir.to_path_buf(), file: "frames.csv" });
    }
    let header = fs::read_to_string(&frames)
        .map_err(|source| PlotError::Io { path: frames.clone(), source })?
        .lines()
        .next()
        .unwrap_or_default()
        .to_string();
    let columns: Vec<&str> = header.split(',').collect();
    let scalar_columns: Vec<String> =
        SCALARS.iter().filter(|(c, _)| columns.contains(c)).map(|(c, _)| c.to_string()).collect();

    let (n_sites, bloch_period) = read_meta(dir)?;
    let heatmaps: Vec<&'static str> =
        ["inversion.csv", "current.csv"].into_iter().filter(|f| dir.join(f).is_file()).collect();
    let overlay = dir.join("analytic.csv").is_file();
    let plots = dir.join("plots");
    fs::create_dir_all(&plots).map_err(|source| PlotError::Io { path: plots.clone(), source })?;

    let mut scripts = Vec::new();
    let scalars_path = plots.join("scalars.py");
    write(&scalars_path, &scalar_script(&scalar_columns, overlay, bloch_period))?;
    scripts.push(scalars_path);
    let heat_path = plots.join("heatmaps.py");
    if heatmaps.is_empty() {
        // Do not leave a script for matrices this bundle no longer has.
        if heat_path.exists() {
            fs::remove_file(&heat_path).map_err(|source| PlotError::Io { path: heat_path.clone(), source })?;
        }
    } else {
        write(&heat_path, &heatmap_script(&heatmaps, n_sites, bloch_period))?;
        scripts.push(heat_path);
    }
    Ok(PlotPlan { scripts, heatmaps, scalar_columns, overlay, n_sites, bloch_period })
}

fn write(path: &Path, text: &str) -> Result<(), PlotError> {
    fs::write(path, text).map_err(|source| PlotError::Io { path: path.to_path_buf(), source })
}

fn read_meta(dir: &Path) -> Result<(Option<usize>, Option<f64>), PlotError> {
    let path = dir.join("meta.json");
    if !path.is_file() {
        return Ok((None, None));
    }
    let text = fs::read_to_string(&path).map_err(|source| PlotError::Io { path: path.clone(), source })?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| PlotError::Meta { path: path.clone(), message: e.to_string() })?;
    let n_sites = v["chain"]["n_sites"].as_u64().map(|n| n as usize);
    let bloch = v["bloch_period"].as_f64();
    Ok((n_sites, bloch))
}

fn py_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("{s:?}")).collect();
    format!("[{}]", quoted.join(", "))
}

fn time_axis(bloch_period: Option<f64>) -> (String, &'static str) {
    match bloch_period {
        Some(tb) => (format!("{tb:.16e}"), "t / T_B"),
        None => ("1.0".to_string(), "t ω₀"),
    }
}

fn scalar_script(columns: &[String], overlay: bool, bloch_period: Option<f64>) -> String {
    let (scale, xlabel) = time_axis(bloch_period);
    let labels: Vec<String> = columns
        .iter()
        .map(|c| SCALARS.iter().find(|(k, _)| k == c).map(|(_, l)| l.to_string()).unwrap_or_default())
        .collect();
    format!(
        r#"# Scalar time series of one run.
import os
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
BUNDLE = os.path.dirname(HERE)
COLUMNS = {columns}
LABELS = {labels}
TIME_SCALE = {scale}
OVERLAY = {overlay}

data = np.genfromtxt(os.path.join(BUNDLE, "frames.csv"), delimiter=",", names=True)
analytic = None
if OVERLAY:
    analytic = np.genfromtxt(os.path.join(BUNDLE, "analytic.csv"), delimiter=",", names=True)

if COLUMNS:
    fig, axes = plt.subplots(len(COLUMNS), 1, sharex=True, figsize=(8, 2.2 * len(COLUMNS)), squeeze=False)
    for ax, col, label in zip(axes[:, 0], COLUMNS, LABELS):
        ax.plot(data["time"] / TIME_SCALE, data[col], lw=0.8, label="numeric")
        if analytic is not None and col in analytic.dtype.names:
            ax.plot(analytic["time"] / TIME_SCALE, analytic[col], "--", lw=0.8, label="analytic")
            ax.legend(loc="best", fontsize="small")
        ax.set_ylabel(label)
    axes[-1, 0].set_xlabel("{xlabel}")
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "scalars.png"), dpi=150)
"#,
        columns = py_list(columns),
        labels = py_list(&labels),
        overlay = if overlay { "True" } else { "False" },
    )
}

fn heatmap_script(files: &[&str], n_sites: Option<usize>, bloch_period: Option<f64>) -> String {
    let (scale, ylabel) = time_axis(bloch_period);
    let files: Vec<String> = files.iter().map(|s| s.to_string()).collect();
    let n = n_sites.map_or("None".to_string(), |n| n.to_string());
    format!(
        r#"# Space-time maps of the site-resolved observables.
import os
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
BUNDLE = os.path.dirname(HERE)
FILES = {files}
TIME_SCALE = {scale}
N_SITES = {n}
TITLES = {{"inversion.csv": "W(p, t)", "current.csv": "J(p, t)"}}

for name in FILES:
    m = np.loadtxt(os.path.join(BUNDLE, name), delimiter=",", skiprows=1, ndmin=2)
    t = m[:, 0] / TIME_SCALE
    z = m[:, 1:]
    n = N_SITES if N_SITES is not None else z.shape[1]
    vmax = np.abs(z).max() or 1.0
    fig, ax = plt.subplots(figsize=(7, 5))
    im = ax.imshow(z, aspect="auto", origin="lower", cmap="RdBu_r", vmin=-vmax, vmax=vmax,
                   extent=(0, n, t[0], t[-1] if len(t) > 1 else t[0] + 1))
    ax.set_xlabel("site p")
    ax.set_ylabel("{ylabel}")
    ax.set_title(TITLES.get(name, name))
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, name.replace(".csv", ".png")), dpi=150)
"#,
        files = py_list(&files),
    )
}
