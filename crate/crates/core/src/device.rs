//! Maps physical device parameters onto the dimensionless chain model.
//!
//! Two platforms are covered: intersubband transitions in semiconductor
//! heterostructures (THz; also usable for quantum-dot chains at optical
//! frequencies, which need no extra formulas), and a Josephson junction in an
//! inductive environment coupled to a microwave resonator.
//!
//! Josephson energies are given as `E/h` in GHz.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant, J·s (exact SI).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Elementary charge, C (exact SI).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Superconducting resistance quantum h/(2e)², Ω.
pub const RESISTANCE_QUANTUM: f64 = PLANCK / (4.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);

/// Plasma frequency quoted in the literature for E_J/h = 30 GHz, E_C/h = 3 GHz.
pub const QUOTED_PLASMA_GHZ: f64 = 150.0;
/// Band width quoted in the literature as "Δ₀ ≈ E_C/2" for the same point.
pub const QUOTED_BANDWIDTH_GHZ: f64 = 1.5;

/// Dimensionless chain parameters derived from a device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainFragment {
    pub t_a: f64,
    pub t_b: f64,
    /// Coupling; for a range of drive amplitudes this is the upper end.
    pub g0: f64,
    pub omega_b: f64,
}

/// The ratios the model's validity rests on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityRatios {
    pub g_over_omega0: f64,
    pub omega_b_over_omega0: f64,
    pub t_over_hbar_omega0: f64,
}

/// Josephson energy Δ₀ bandwidth: 16 √(E_C E_J/π) (E_J/2E_C)^{1/4} exp(−√(8E_J/E_C)).
///
/// Homogeneous of degree one; any consistent energy unit works.
pub fn josephson_bandwidth(e_j: f64, e_c: f64) -> Result<f64> {
    if !(e_j > 0.0 && e_j.is_finite()) {
        return Err(Error::validation("e_j", "must be positive"));
    }
    if !(e_c > 0.0 && e_c.is_finite()) {
        return Err(Error::validation("e_c", "must be positive"));
    }
    let ratio = e_j / e_c;
    Ok(16.0 * (e_c * e_j / PI).sqrt() * (ratio / 2.0).powf(0.25) * (-(8.0 * ratio).sqrt()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JosephsonParams {
    /// Josephson energy E_J/h, GHz.
    pub e_j_ghz: f64,
    /// Charging energy E_C/h = e²/(2C_J h), GHz.
    pub e_c_ghz: f64,
    /// Coupling inductance, H.
    pub l1: f64,
    /// Environment inductance, H.
    pub l2: f64,
    /// Resonator inductance, H.
    pub l_r: f64,
    /// Resonator impedance, Ω.
    pub z_r: f64,
    /// Resistance quantum, Ω; defaults to h/(2e)².
    #[serde(default = "default_r0")]
    pub r0: f64,
    /// Effective dipole matrix element magnitude |φ_eg|.
    pub phi_eg: f64,
}

fn default_r0() -> f64 {
    RESISTANCE_QUANTUM
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JosephsonReport {
    pub fragment: ChainFragment,
    pub ratios: ValidityRatios,
    /// √(8 E_J E_C)/h, GHz: the transition frequency ω_p/2π.
    pub plasma_ghz: f64,
    pub plasma_ghz_quoted: f64,
    pub bandwidth_ghz: f64,
    pub bandwidth_ghz_quoted: f64,
    /// π √(Δ₀ L₂)/e evaluated in SI as written. The expression has the
    /// dimension of a resistance, so `fragment.omega_b` = this / ω_p [rad/s]
    /// is a bare number without a consistent unit.
    pub omega_c_as_printed: f64,
    /// (ħ/2e)²/L_r, J.
    pub resonator_inductive_energy: f64,
    pub flags: Vec<String>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(name, "must be positive and finite"))
    }
}

pub fn josephson_to_chain(params: &JosephsonParams) -> Result<JosephsonReport> {
    positive("e_j_ghz", params.e_j_ghz)?;
    positive("e_c_ghz", params.e_c_ghz)?;
    positive("l2", params.l2)?;
    positive("l_r", params.l_r)?;
    positive("z_r", params.z_r)?;
    positive("r0", params.r0)?;
    if !(params.l1 >= 0.0 && params.l1.is_finite()) {
        return Err(Error::validation("l1", "must be non-negative and finite"));
    }
    if !params.phi_eg.is_finite() {
        return Err(Error::validation("phi_eg", "must be finite"));
    }

    let plasma_ghz = (8.0 * params.e_j_ghz * params.e_c_ghz).sqrt();
    let omega_p = 2.0 * PI * plasma_ghz * 1e9;
    let bandwidth_ghz = josephson_bandwidth(params.e_j_ghz, params.e_c_ghz)?;
    let t = bandwidth_ghz / 2.0 / plasma_ghz;

    let delta0_joule = bandwidth_ghz * 1e9 * PLANCK;
    let omega_c = PI * (delta0_joule * params.l2).sqrt() / ELEMENTARY_CHARGE;
    let omega_b = omega_c / omega_p;

    let g = params.phi_eg.powi(2) / 2f64.sqrt()
        * (params.r0 / (2.0 * PI * params.z_r)).sqrt()
        * (params.l1 / params.l2);

    let flux = HBAR / (2.0 * ELEMENTARY_CHARGE);
    let e_lr = flux * flux / params.l_r;

    let mut flags = Vec::new();
    let ej_ec = params.e_j_ghz / params.e_c_ghz;
    if ej_ec < 10.0 {
        flags.push(format!("E_J/E_C = {ej_ec:.3} is below 10; the tight-binding band picture needs E_J >> E_C"));
    }
    let l_ratio = params.l2 / params.l1;
    if params.l1 > 0.0 && l_ratio < 100.0 {
        flags.push(format!("L2/L1 = {l_ratio:.3} is below 100; the coupling formula assumes L2 >> L1"));
    }
    if g >= 0.1 {
        flags.push(format!("g/omega_p = {g:.3e} is not small; rotating-wave approximation is doubtful"));
    }
    if e_lr >= HBAR * omega_p {
        flags.push(format!(
            "resonator inductive energy {:.3e} J is not below hbar*omega_p = {:.3e} J",
            e_lr,
            HBAR * omega_p
        ));
    }
    flags.push("omega_b derived from an expression with the dimension of a resistance (as printed)".into());

    Ok(JosephsonReport {
        fragment: ChainFragment { t_a: t, t_b: t, g0: g, omega_b },
        ratios: ValidityRatios { g_over_omega0: g, omega_b_over_omega0: omega_b, t_over_hbar_omega0: t },
        plasma_ghz,
        plasma_ghz_quoted: QUOTED_PLASMA_GHZ,
        bandwidth_ghz,
        bandwidth_ghz_quoted: QUOTED_BANDWIDTH_GHZ,
        omega_c_as_printed: omega_c,
        resonator_inductive_energy: e_lr,
        flags,
    })
}

/// Intersubband transition in a superlattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeterostructureParams {
    pub transition_thz: f64,
    /// Transition dipole moment, e·nm.
    pub dipole_e_nm: f64,
    /// Drive amplitude range, kV/cm.
    pub field_kv_cm: (f64, f64),
    /// Bias field, kV/cm.
    pub dc_field_kv_cm: f64,
    /// Superlattice period, nm.
    pub period_nm: f64,
    /// Tunneling energy, meV (both bands when only one is known).
    #[serde(default)]
    pub tunneling_a_mev: f64,
    #[serde(default)]
    pub tunneling_b_mev: Option<f64>,
    /// Dephasing time, fs.
    #[serde(default)]
    pub coherence_fs: Option<f64>,
}

/// How a coherence time compares with a dynamical period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    /// At least ten periods fit in the coherence time.
    Ok,
    /// Between a tenth of a period and ten periods.
    Marginal,
    Violated,
}

impl Feasibility {
    pub fn classify(coherence: f64, period: f64) -> Feasibility {
        let r = coherence / period;
        if r >= 10.0 {
            Feasibility::Ok
        } else if r >= 0.1 {
            Feasibility::Marginal
        } else {
            Feasibility::Violated
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeterostructureReport {
    pub fragment: ChainFragment,
    pub ratios: ValidityRatios,
    /// Couplings at the two ends of the drive range.
    pub g_range: (f64, f64),
    /// ω₀ = 2π f, rad/s.
    pub omega0: f64,
    /// Bloch period 2π/(ω_B ω₀), s; infinite without bias.
    pub bloch_period_s: f64,
    /// Vacuum-normalized Rabi period 2π/(2 g ω₀) at the strongest drive, s.
    pub rabi_period_s: f64,
    pub rabi_feasibility: Option<Feasibility>,
    pub bloch_feasibility: Option<Feasibility>,
    pub flags: Vec<String>,
}

const KV_PER_CM: f64 = 1e5;
const NM: f64 = 1e-9;
const MEV: f64 = 1e-3 * ELEMENTARY_CHARGE;

pub fn heterostructure_to_chain(params: &HeterostructureParams) -> Result<HeterostructureReport> {
    positive("transition_thz", params.transition_thz)?;
    positive("dipole_e_nm", params.dipole_e_nm)?;
    positive("period_nm", params.period_nm)?;
    let (lo, hi) = params.field_kv_cm;
    if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::validation("field_kv_cm", "need 0 <= low <= high"));
    }
    if !(params.dc_field_kv_cm >= 0.0 && params.dc_field_kv_cm.is_finite()) {
        return Err(Error::validation("dc_field_kv_cm", "must be non-negative"));
    }
    let t_b_mev = params.tunneling_b_mev.unwrap_or(params.tunneling_a_mev);
    for (name, v) in [("tunneling_a_mev", params.tunneling_a_mev), ("tunneling_b_mev", t_b_mev)] {
        if !v.is_finite() {
            return Err(Error::validation(name, "must be finite"));
        }
    }
    if let Some(c) = params.coherence_fs {
        positive("coherence_fs", c)?;
    }

    let omega0 = 2.0 * PI * params.transition_thz * 1e12;
    let dipole = params.dipole_e_nm * ELEMENTARY_CHARGE * NM;
    let g_of = |kv_cm: f64| dipole * kv_cm * KV_PER_CM / HBAR / omega0;
    let g_range = (g_of(lo), g_of(hi));
    let omega_b =
        ELEMENTARY_CHARGE * params.dc_field_kv_cm * KV_PER_CM * params.period_nm * NM / HBAR / omega0;
    let t_a = params.tunneling_a_mev * MEV / (HBAR * omega0);
    let t_b = t_b_mev * MEV / (HBAR * omega0);

    let bloch_period_s = if omega_b > 0.0 { 2.0 * PI / (omega_b * omega0) } else { f64::INFINITY };
    let rabi_period_s = if g_range.1 > 0.0 { 2.0 * PI / (2.0 * g_range.1 * omega0) } else { f64::INFINITY };
    let (rabi_feasibility, bloch_feasibility) = match params.coherence_fs {
        Some(c) => {
            let c = c * 1e-15;
            (Some(Feasibility::classify(c, rabi_period_s)), Some(Feasibility::classify(c, bloch_period_s)))
        }
        None => (None, None),
    };

    let mut flags = Vec::new();
    if g_range.1 >= 0.1 {
        flags.push(format!("g/omega0 = {:.3e} at the strongest drive; rotating-wave approximation is doubtful", g_range.1));
    }
    if omega_b >= 0.1 {
        flags.push(format!("omega_B/omega0 = {omega_b:.3e} is not small"));
    }

    Ok(HeterostructureReport {
        fragment: ChainFragment { t_a, t_b, g0: g_range.1, omega_b },
        ratios: ValidityRatios { g_over_omega0: g_range.1, omega_b_over_omega0: omega_b, t_over_hbar_omega0: t_a },
        g_range,
        omega0,
        bloch_period_s,
        rabi_period_s,
        rabi_feasibility,
        bloch_feasibility,
        flags,
    })
}

/// Physical fields and energies recovered from a heterostructure fragment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterostructurePhysical {
    pub field_kv_cm: f64,
    pub dc_field_kv_cm: f64,
    pub tunneling_a_mev: f64,
    pub tunneling_b_mev: f64,
}

/// Inverse of [`heterostructure_to_chain`] for the given device geometry.
pub fn heterostructure_to_physical(
    fragment: &ChainFragment,
    transition_thz: f64,
    dipole_e_nm: f64,
    period_nm: f64,
) -> HeterostructurePhysical {
    let omega0 = 2.0 * PI * transition_thz * 1e12;
    let dipole = dipole_e_nm * ELEMENTARY_CHARGE * NM;
    HeterostructurePhysical {
        field_kv_cm: fragment.g0 * omega0 * HBAR / dipole / KV_PER_CM,
        dc_field_kv_cm: fragment.omega_b * omega0 * HBAR / (ELEMENTARY_CHARGE * period_nm * NM) / KV_PER_CM,
        tunneling_a_mev: fragment.t_a * HBAR * omega0 / MEV,
        tunneling_b_mev: fragment.t_b * HBAR * omega0 / MEV,
    }
}

/// Bloch period 2π/(ω_B ω₀) in seconds for a transition at `transition_hz`.
pub fn bloch_period_seconds(omega_b: f64, transition_hz: f64) -> f64 {
    2.0 * PI / (omega_b * 2.0 * PI * transition_hz)
}
