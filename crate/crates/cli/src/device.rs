//! `device` subcommand: physical parameter files to chain parameters.

use std::fmt::Write as _;
use std::path::Path;

use blochdress_core::device::{
    heterostructure_to_chain, josephson_to_chain, HeterostructureParams, HeterostructureReport, JosephsonParams,
    JosephsonReport,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DeviceKind {
    Josephson,
    Heterostructure,
}

#[derive(Debug, thiserror::Error)]
pub enum DeviceError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Core(#[from] blochdress_core::Error),
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum DeviceReport {
    Josephson(JosephsonReport),
    Heterostructure(HeterostructureReport),
}

pub fn load_report(kind: DeviceKind, path: &Path) -> Result<DeviceReport, DeviceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DeviceError::Parse { path: path.display().to_string(), message: e.to_string() })?;
    let parse_err = |e: toml::de::Error| DeviceError::Parse { path: path.display().to_string(), message: e.to_string() };
    Ok(match kind {
        DeviceKind::Josephson => {
            let p: JosephsonParams = toml::from_str(&text).map_err(parse_err)?;
            DeviceReport::Josephson(josephson_to_chain(&p)?)
        }
        DeviceKind::Heterostructure => {
            let p: HeterostructureParams = toml::from_str(&text).map_err(parse_err)?;
            DeviceReport::Heterostructure(heterostructure_to_chain(&p)?)
        }
    })
}

/// Human-readable report; the chain fragment is printed as a `[chain]` block.
pub fn render_text(report: &DeviceReport) -> String {
    let mut s = String::new();
    let (fragment, ratios, flags) = match report {
        DeviceReport::Josephson(r) => (&r.fragment, &r.ratios, &r.flags),
        DeviceReport::Heterostructure(r) => (&r.fragment, &r.ratios, &r.flags),
    };
    let _ = writeln!(s, "[chain]");
    let _ = writeln!(s, "t_a = {:e}", fragment.t_a);
    let _ = writeln!(s, "t_b = {:e}", fragment.t_b);
    let _ = writeln!(s, "g0 = {:e}", fragment.g0);
    let _ = writeln!(s, "omega_b = {:e}", fragment.omega_b);
    let _ = writeln!(s);
    let _ = writeln!(s, "# g/omega0      = {:.6e}", ratios.g_over_omega0);
    let _ = writeln!(s, "# omega_B/omega0 = {:.6e}", ratios.omega_b_over_omega0);
    let _ = writeln!(s, "# t/(hbar omega0) = {:.6e}", ratios.t_over_hbar_omega0);
    match report {
        DeviceReport::Josephson(r) => {
            let _ = writeln!(s, "# plasma frequency  {:.6} GHz (quoted {} GHz)", r.plasma_ghz, r.plasma_ghz_quoted);
            let _ = writeln!(s, "# bandwidth Delta0  {:.6e} GHz (quoted {} GHz)", r.bandwidth_ghz, r.bandwidth_ghz_quoted);
            let _ = writeln!(s, "# omega_c as printed {:.6e} (SI evaluation, not a frequency)", r.omega_c_as_printed);
        }
        DeviceReport::Heterostructure(r) => {
            let _ = writeln!(s, "# g range          {:.6e} .. {:.6e}", r.g_range.0, r.g_range.1);
            let _ = writeln!(s, "# Bloch period     {:.6e} s", r.bloch_period_s);
            let _ = writeln!(s, "# Rabi period      {:.6e} s", r.rabi_period_s);
            if let (Some(rf), Some(bf)) = (r.rabi_feasibility, r.bloch_feasibility) {
                let _ = writeln!(s, "# coherence vs Rabi period:  {rf:?}");
                let _ = writeln!(s, "# coherence vs Bloch period: {bf:?}");
            }
        }
    }
    for f in flags {
        let _ = writeln!(s, "# warning: {f}");
    }
    s
}
