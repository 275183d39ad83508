//! Laboratory units and the order-of-magnitude estimate for an accelerated
//! atom pair in a nanometre cavity.

use crate::error::{Error, Result};
use crate::expansion::curvature_coefficient;
use crate::model::{validate, AtomState, GeometryConfig, Orientation, ValidatedConfig};
use crate::observables::{low_acceleration_shift, PrefactorUnit, LOW_ACCELERATION_LIMIT};

/// ħc in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;
/// c in m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 2.997_924_58e8;
/// ħ in eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// Order of magnitude quoted in the literature for the acceleration
/// correction in the reference scenario, in eV.
pub const QUOTED_CORRECTION_EV: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScenario {
    pub orientation: Orientation,
    /// Transition energy ħω₀ in eV.
    pub omega0_ev: f64,
    pub l_nm: f64,
    pub d_nm: f64,
    pub z0_nm: f64,
    /// Proper acceleration in m/s².
    pub a_si: f64,
    pub lambda_c: f64,
    pub theta: f64,
}

impl PhysicalScenario {
    /// ω₀ = 5 eV, λ = 0.1, L = 50 nm, d = 20 nm, z0 = 12 nm, a = 10¹⁷ m/s²,
    /// subradiant state, perpendicular orientation.
    pub fn reference() -> Self {
        Self {
            orientation: Orientation::Perpendicular,
            omega0_ev: 5.0,
            l_nm: 50.0,
            d_nm: 20.0,
            z0_nm: 12.0,
            a_si: 1e17,
            lambda_c: 0.1,
            theta: 3.0 * std::f64::consts::PI / 4.0,
        }
    }
}

/// Lengths times ω₀/(ħc); acceleration times ħ/(c·ω₀).
pub fn to_reduced(s: &PhysicalScenario) -> Result<(ValidatedConfig, AtomState)> {
    if !(s.omega0_ev > 0.0) || !s.omega0_ev.is_finite() {
        return Err(Error::Domain(format!("omega0 must be finite and > 0, got {}", s.omega0_ev)));
    }
    let k = s.omega0_ev / HBAR_C_EV_NM;
    let a_r = s.a_si * HBAR_EV_S / (SPEED_OF_LIGHT_M_S * s.omega0_ev);
    let cfg = validate(GeometryConfig::cavity(
        s.orientation,
        s.d_nm * k,
        s.z0_nm * k,
        s.l_nm * k,
        a_r,
    ))?;
    let state = AtomState::new(s.theta, s.lambda_c)?;
    Ok((cfg, state))
}

/// Reduced length back to nanometres.
pub fn length_nm(reduced: f64, omega0_ev: f64) -> f64 {
    reduced * HBAR_C_EV_NM / omega0_ev
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub config: ValidatedConfig,
    /// Full shift including the a² term, in eV.
    pub shift_ev: f64,
    /// The a²-proportional part alone, in eV.
    pub correction_ev: f64,
    pub a_times_l: f64,
    /// a·L < 0.1.
    pub regime_ok: bool,
    /// log₁₀(|correction| / quoted order); 0 means agreement.
    pub decades_from_quoted: f64,
}

impl EstimateReport {
    pub fn render(&self) -> String {
        let c = &self.config;
        format!(
            "reduced: d = {:.6}, z0 = {:.6}, L = {:.6}, a = {:.6e}\n\
             a*L = {:.3e} (regime {})\n\
             shift_eV = {:.6e}\n\
             acceleration_correction_eV = {:.6e}\n\
             quoted_order_eV = {:.0e}\n\
             decades_from_quoted = {:.2}\n",
            c.d_r(),
            c.z0_r(),
            c.l_r(),
            c.a_r(),
            self.a_times_l,
            if self.regime_ok { "ok" } else { "VIOLATED: a*L >= 0.1" },
            self.shift_ev,
            self.correction_ev,
            QUOTED_CORRECTION_EV,
            self.decades_from_quoted,
        )
    }
}

/// Shift and its acceleration correction in eV from the low-acceleration
/// expansion at the scenario's reduced parameters.
pub fn laboratory_estimate(s: &PhysicalScenario) -> Result<EstimateReport> {
    let (cfg, state) = to_reduced(s)?;
    let obs = low_acceleration_shift(&cfg, 1e-12)?;
    let unit = PrefactorUnit::ShiftUnit.value(&state, s.omega0_ev);
    let a = cfg.a_r();
    let correction_ev = if state.is_separable() {
        0.0
    } else {
        unit * curvature_coefficient(&cfg)? * a * a
    };
    let shift_ev = if state.is_separable() { 0.0 } else { unit * obs.reduced_value };
    Ok(EstimateReport {
        config: cfg,
        shift_ev,
        correction_ev,
        a_times_l: a * cfg.l_r(),
        regime_ok: a * cfg.l_r() < LOW_ACCELERATION_LIMIT,
        decades_from_quoted: (correction_ev.abs() / QUOTED_CORRECTION_EV).log10(),
    })
}
