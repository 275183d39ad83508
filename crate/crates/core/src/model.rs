//! Reduced parameter space shared by every evaluator.
//!
//! All lengths are multiplied by the transition frequency ω₀ and the proper
//! acceleration is divided by it, so the core math runs with ω₀ = 1. The
//! plates sit at z = 0 and z = L; atom A is at distance z0 from the first
//! plate. In the perpendicular orientation atom B sits at z0 + d, in the
//! parallel orientation it is displaced by d along the plates.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, GeometryError, GeometryField};

/// Orientation of the line joining the two atoms relative to the plates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Perpendicular,
    Parallel,
}

impl Orientation {
    pub fn short_name(self) -> &'static str {
        match self {
            Orientation::Perpendicular => "perp",
            Orientation::Parallel => "par",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "perp" | "perpendicular" => Ok(Orientation::Perpendicular),
            "par" | "parallel" => Ok(Orientation::Parallel),
            other => Err(Error::RunSpec(format!("unknown orientation `{other}`"))),
        }
    }
}

/// Geometry in reduced units. `l_r = ∞` selects the single-mirror limit and
/// `z0_r = l_r = ∞` the free-space limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub orientation: Orientation,
    /// ω₀·d
    pub d_r: f64,
    /// ω₀·z₀
    pub z0_r: f64,
    /// ω₀·L
    pub l_r: f64,
    /// a/ω₀
    pub a_r: f64,
}

impl GeometryConfig {
    pub fn new(orientation: Orientation, d_r: f64, z0_r: f64, l_r: f64, a_r: f64) -> Self {
        Self {
            orientation,
            d_r,
            z0_r,
            l_r,
            a_r,
        }
    }

    pub fn cavity(orientation: Orientation, d_r: f64, z0_r: f64, l_r: f64, a_r: f64) -> Self {
        Self::new(orientation, d_r, z0_r, l_r, a_r)
    }

    pub fn single_mirror(orientation: Orientation, d_r: f64, z0_r: f64, a_r: f64) -> Self {
        Self::new(orientation, d_r, z0_r, f64::INFINITY, a_r)
    }

    pub fn free_space(orientation: Orientation, d_r: f64, a_r: f64) -> Self {
        Self::new(orientation, d_r, f64::INFINITY, f64::INFINITY, a_r)
    }

    pub fn validate(self) -> Result<ValidatedConfig, GeometryError> {
        validate(self)
    }
}

/// Which boundary a validated configuration describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    TwoMirror,
    SingleMirror,
    FreeSpace,
}

/// A [`GeometryConfig`] that passed [`validate`]. Immutable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedConfig {
    inner: GeometryConfig,
    boundary: Boundary,
}

impl ValidatedConfig {
    pub fn config(&self) -> &GeometryConfig {
        &self.inner
    }

    pub fn orientation(&self) -> Orientation {
        self.inner.orientation
    }

    pub fn d_r(&self) -> f64 {
        self.inner.d_r
    }

    pub fn z0_r(&self) -> f64 {
        self.inner.z0_r
    }

    pub fn l_r(&self) -> f64 {
        self.inner.l_r
    }

    pub fn a_r(&self) -> f64 {
        self.inner.a_r
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_cavity(&self) -> bool {
        self.boundary == Boundary::TwoMirror
    }

    /// Same geometry with a different acceleration.
    pub fn with_acceleration(&self, a_r: f64) -> Result<ValidatedConfig, GeometryError> {
        validate(GeometryConfig {
            a_r,
            ..self.inner
        })
    }

    /// Image of the configuration under the reflection that swaps the two
    /// plates. Only defined for a finite cavity.
    pub fn reflected(&self) -> Option<ValidatedConfig> {
        if !self.is_cavity() {
            return None;
        }
        let c = self.inner;
        let z0_r = match c.orientation {
            Orientation::Perpendicular => c.l_r - c.d_r - c.z0_r,
            Orientation::Parallel => c.l_r - c.z0_r,
        };
        validate(GeometryConfig { z0_r, ..c }).ok()
    }
}

fn positive_finite(field: GeometryField, value: f64) -> Result<(), GeometryError> {
    if value.is_nan() {
        return Err(GeometryError::new(field, "is NaN"));
    }
    if !value.is_finite() {
        return Err(GeometryError::new(field, "must be finite"));
    }
    if value <= 0.0 {
        return Err(GeometryError::new(field, format!("must be > 0, got {value}")));
    }
    Ok(())
}

fn positive_or_infinite(field: GeometryField, value: f64) -> Result<(), GeometryError> {
    if value.is_nan() {
        return Err(GeometryError::new(field, "is NaN"));
    }
    if value <= 0.0 {
        return Err(GeometryError::new(field, format!("must be > 0, got {value}")));
    }
    Ok(())
}

/// Checks every geometric constraint. Total: never panics.
pub fn validate(config: GeometryConfig) -> Result<ValidatedConfig, GeometryError> {
    let GeometryConfig {
        orientation,
        d_r,
        z0_r,
        l_r,
        a_r,
    } = config;

    positive_finite(GeometryField::InteratomicDistance, d_r)?;
    if a_r.is_nan() || !a_r.is_finite() || a_r < 0.0 {
        return Err(GeometryError::new(
            GeometryField::Acceleration,
            format!("must be finite and >= 0, got {a_r}"),
        ));
    }
    positive_or_infinite(GeometryField::PlateDistance, z0_r)?;
    positive_or_infinite(GeometryField::PlateSeparation, l_r)?;

    let boundary = match (z0_r.is_finite(), l_r.is_finite()) {
        (true, true) => {
            match orientation {
                Orientation::Perpendicular => {
                    if z0_r + d_r >= l_r {
                        return Err(GeometryError::new(
                            GeometryField::PlateDistance,
                            format!(
                                "z0 + d = {} must be < L = {l_r}; atom B is on or outside the far plate",
                                z0_r + d_r
                            ),
                        ));
                    }
                }
                Orientation::Parallel => {
                    if z0_r >= l_r {
                        return Err(GeometryError::new(
                            GeometryField::PlateDistance,
                            format!("z0 = {z0_r} must be < L = {l_r}"),
                        ));
                    }
                }
            }
            Boundary::TwoMirror
        }
        (true, false) => Boundary::SingleMirror,
        (false, false) => Boundary::FreeSpace,
        (false, true) => {
            return Err(GeometryError::new(
                GeometryField::PlateDistance,
                "infinite z0 requires infinite L",
            ))
        }
    };

    Ok(ValidatedConfig {
        inner: config,
        boundary,
    })
}

/// Two-atom state sinθ|g_A e_B⟩ + cosθ|e_A g_B⟩ with field coupling λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    theta: f64,
    lambda_c: f64,
}

impl AtomState {
    pub fn new(theta: f64, lambda_c: f64) -> Result<Self, Error> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::State(format!("theta must lie in [0, π], got {theta}")));
        }
        if !lambda_c.is_finite() || lambda_c < 0.0 {
            return Err(Error::State(format!(
                "coupling must be finite and >= 0, got {lambda_c}"
            )));
        }
        Ok(Self { theta, lambda_c })
    }

    /// Antisymmetric (subradiant) maximally entangled state, θ = 3π/4.
    pub fn subradiant(lambda_c: f64) -> Result<Self, Error> {
        Self::new(3.0 * PI / 4.0, lambda_c)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda_c(&self) -> f64 {
        self.lambda_c
    }

    /// sin 2θ, snapped to exactly 0 for the separable states θ ∈ {0, π/2, π}.
    pub fn entanglement_factor(&self) -> f64 {
        let quarter_turns = self.theta / FRAC_PI_2;
        if (quarter_turns - quarter_turns.round()).abs() <= 8.0 * f64::EPSILON {
            return 0.0;
        }
        (2.0 * self.theta).sin()
    }

    pub fn is_separable(&self) -> bool {
        self.entanglement_factor() == 0.0
    }
}
