//! Resonance energy shift and relaxation rate for the cavity and its limits.
//!
//! Every evaluator returns the bare bracketed sum (`reduced_value`). The
//! physical value is reduced_value × prefactor with
//! ShiftUnit = −λ²ω₀·sin2θ/(16π) and RateUnit = −λ²ω₀²·sin2θ/(8π).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::dd::{two_prod, Dd};
use crate::error::{Error, Result};
use crate::expansion::curvature_coefficient;
use crate::kernel::{kernel_dd, KernelKind};
use crate::model::{validate, AtomState, GeometryConfig, Orientation, ValidatedConfig};
use crate::series::bilateral_sum;

/// Above this value of a·L the low-acceleration expansion is flagged.
pub const LOW_ACCELERATION_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Shift,
    Rate,
}

impl Quantity {
    pub fn kernel_kind(self) -> KernelKind {
        match self {
            Quantity::Shift => KernelKind::Cosine,
            Quantity::Rate => KernelKind::Sine,
        }
    }

    pub fn unit(self) -> PrefactorUnit {
        match self {
            Quantity::Shift => PrefactorUnit::ShiftUnit,
            Quantity::Rate => PrefactorUnit::RateUnit,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Shift => "shift",
            Quantity::Rate => "rate",
        })
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "shift" => Ok(Quantity::Shift),
            "rate" => Ok(Quantity::Rate),
            other => Err(Error::RunSpec(format!("unknown quantity `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryModel {
    TwoMirror,
    SingleMirror,
    FreeSpace,
    LowAcceleration,
}

impl fmt::Display for BoundaryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryModel::TwoMirror => "two-mirror",
            BoundaryModel::SingleMirror => "single-mirror",
            BoundaryModel::FreeSpace => "free-space",
            BoundaryModel::LowAcceleration => "low-acc",
        })
    }
}

impl FromStr for BoundaryModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "two-mirror" => Ok(BoundaryModel::TwoMirror),
            "single-mirror" => Ok(BoundaryModel::SingleMirror),
            "free-space" => Ok(BoundaryModel::FreeSpace),
            "low-acc" | "low-acceleration" => Ok(BoundaryModel::LowAcceleration),
            other => Err(Error::RunSpec(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Observable {
    quantity: Quantity,
    model: BoundaryModel,
}

impl Observable {
    pub fn new(quantity: Quantity, model: BoundaryModel) -> Result<Self> {
        if model == BoundaryModel::LowAcceleration && quantity != Quantity::Shift {
            return Err(Error::Unsupported(
                "the low-acceleration model exists for the shift only".into(),
            ));
        }
        Ok(Self { quantity, model })
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    pub fn model(&self) -> BoundaryModel {
        self.model
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrefactorUnit {
    /// −λ²ω₀·sin2θ/(16π)
    ShiftUnit,
    /// −λ²ω₀²·sin2θ/(8π)
    RateUnit,
}

impl PrefactorUnit {
    pub fn value(self, state: &AtomState, omega0: f64) -> f64 {
        let lam2 = state.lambda_c() * state.lambda_c();
        let s = state.entanglement_factor();
        match self {
            PrefactorUnit::ShiftUnit => -lam2 * omega0 * s / (16.0 * PI),
            PrefactorUnit::RateUnit => -lam2 * omega0 * omega0 * s / (8.0 * PI),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableValue {
    pub reduced_value: f64,
    pub prefactor_id: PrefactorUnit,
    pub tail_bound: f64,
    /// Set when an approximation is used outside its stated regime.
    pub regime_warning: bool,
}

impl ObservableValue {
    fn exact(quantity: Quantity, reduced_value: f64) -> Self {
        Self {
            reduced_value,
            prefactor_id: quantity.unit(),
            tail_bound: 0.0,
            regime_warning: false,
        }
    }
}

pub fn two_mirror(quantity: Quantity, config: &ValidatedConfig, tol: f64) -> Result<ObservableValue> {
    let r = bilateral_sum(quantity.kernel_kind(), config, tol)?;
    Ok(ObservableValue {
        reduced_value: r.value,
        prefactor_id: quantity.unit(),
        tail_bound: r.tail_bound,
        regime_warning: false,
    })
}

/// k(d) − k(D) with D = d + 2z0 (perpendicular) or √(d² + 4z0²) (parallel).
pub fn single_mirror(
    quantity: Quantity,
    orientation: Orientation,
    d_r: f64,
    z0_r: f64,
    a_r: f64,
) -> Result<ObservableValue> {
    validate(GeometryConfig::single_mirror(orientation, d_r, z0_r, a_r))?;
    let kind = quantity.kernel_kind();
    let direct = kernel_dd(kind, Dd::from(d_r), a_r);
    if z0_r.is_infinite() {
        return Ok(ObservableValue::exact(quantity, direct));
    }
    let image = match orientation {
        Orientation::Perpendicular => Dd::from(d_r).add_f64(2.0 * z0_r),
        Orientation::Parallel => {
            let tz = 2.0 * z0_r;
            Dd::from(two_prod(d_r, d_r)).add(Dd::from(two_prod(tz, tz))).sqrt()
        }
    };
    let reflected = if image.hi.is_finite() {
        kernel_dd(kind, image, a_r)
    } else {
        0.0
    };
    Ok(ObservableValue::exact(quantity, direct - reflected))
}

/// k(d); the same for both orientations.
pub fn free_space(quantity: Quantity, d_r: f64, a_r: f64) -> Result<ObservableValue> {
    validate(GeometryConfig::free_space(Orientation::Perpendicular, d_r, a_r))?;
    Ok(ObservableValue::exact(
        quantity,
        kernel_dd(quantity.kernel_kind(), Dd::from(d_r), a_r),
    ))
}

/// S(0) + C₂·a² for the perpendicular shift, with S(0) the inertial cavity
/// sum at `tol` and C₂ the closed-form a² coefficient. `regime_warning` is
/// set when a·L ≥ 0.1.
pub fn low_acceleration_shift(config: &ValidatedConfig, tol: f64) -> Result<ObservableValue> {
    let c2 = curvature_coefficient(config)?;
    let inertial = config.with_acceleration(0.0)?;
    let s0 = bilateral_sum(KernelKind::Cosine, &inertial, tol)?;
    let a = config.a_r();
    Ok(ObservableValue {
        reduced_value: s0.value + c2 * a * a,
        prefactor_id: PrefactorUnit::ShiftUnit,
        tail_bound: s0.tail_bound,
        regime_warning: a * config.l_r() >= LOW_ACCELERATION_LIMIT,
    })
}

/// Shift in the energy unit of `omega0`, or rate in that unit times ω₀.
/// Exactly zero for separable states.
pub fn physical_value(obs: &ObservableValue, state: &AtomState, omega0: f64) -> f64 {
    if state.is_separable() {
        return 0.0;
    }
    obs.reduced_value * obs.prefactor_id.value(state, omega0)
}

/// Physical value divided by λ²ω₀/(16π) (shift) or λ²ω₀²/(8π) (rate),
/// i.e. −sin2θ × reduced value.
pub fn normalized_value(obs: &ObservableValue, state: &AtomState) -> f64 {
    if state.is_separable() {
        return 0.0;
    }
    -state.entanglement_factor() * obs.reduced_value
}

/// Evaluates `obs` at a raw geometry. Parameters the model does not use
/// (L for the single mirror, z0 and L in free space) are ignored.
pub fn evaluate(obs: Observable, geometry: &GeometryConfig, tol: f64) -> Result<ObservableValue> {
    let g = geometry;
    match obs.model() {
        BoundaryModel::TwoMirror => {
            let v = validate(*g)?;
            if !v.is_cavity() {
                return Err(Error::Unsupported(
                    "two-mirror model needs finite z0 and L".into(),
                ));
            }
            two_mirror(obs.quantity(), &v, tol)
        }
        BoundaryModel::SingleMirror => single_mirror(obs.quantity(), g.orientation, g.d_r, g.z0_r, g.a_r),
        BoundaryModel::FreeSpace => free_space(obs.quantity(), g.d_r, g.a_r),
        BoundaryModel::LowAcceleration => low_acceleration_shift(&validate(*g)?, tol),
    }
}
