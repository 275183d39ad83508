//! The per-image kernel k(z, a) = trig(T(z, a)) · E(z, a) with
//! T = (2/a)·asinh(a·z/2) and E = 1/(z·√(1 + a²z²/4)).
//!
//! The phase is carried in double-double so that the cosine and sine keep
//! full relative accuracy even near their zeros, where T ≈ (k + ½)π.

use std::fmt;

use crate::dd::{self, Dd};
use crate::error::{Error, Result};

/// Cosine kernels build energy shifts, sine kernels build relaxation rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Cosine,
    Sine,
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::Cosine => "cosine",
            KernelKind::Sine => "sine",
        })
    }
}

/// Below this value of a·z the phase uses its Taylor series.
pub const TAYLOR_SWITCH: f64 = 1e-4;

fn check(z: f64, a: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("z must be finite and > 0, got {z}")));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("a must be finite and >= 0, got {a}")));
    }
    Ok(())
}

/// T(z, a) = (2/a)·asinh(a·z/2), and T = z at a = 0.
pub fn phase(z: f64, a: f64) -> Result<f64> {
    check(z, a)?;
    Ok(phase_dd(Dd::from(z), a).to_f64())
}

/// E(z, a) = 1/(z·√(1 + a²z²/4)).
pub fn envelope(z: f64, a: f64) -> Result<f64> {
    check(z, a)?;
    Ok(envelope_unchecked(z, a))
}

pub fn kernel(kind: KernelKind, z: f64, a: f64) -> Result<f64> {
    check(z, a)?;
    Ok(kernel_dd(kind, Dd::from(z), a))
}

#[inline]
pub(crate) fn envelope_unchecked(z: f64, a: f64) -> f64 {
    if a == 0.0 {
        return 1.0 / z;
    }
    1.0 / (z * (0.5 * a * z).hypot(1.0))
}

pub(crate) fn phase_dd(z: Dd, a: f64) -> Dd {
    if a == 0.0 {
        return z;
    }
    let az = a * z.hi;
    if az < TAYLOR_SWITCH {
        // T/z = 1 - u²/6 + 3u⁴/40 - 5u⁶/112 + 35u⁸/1152, u = a·z/2
        let u = 0.5 * az;
        let u2 = u * u;
        let q = u2 * (1.0 / 6.0 - u2 * (3.0 / 40.0 - u2 * (5.0 / 112.0 - u2 * (35.0 / 1152.0))));
        return z.sub(z.mul_f64(q));
    }
    dd::asinh(z.mul_f64(0.5 * a)).mul_f64(2.0).div_f64(a)
}

/// Kernel at a double-double distance. The phase correction `lo` enters
/// through cos(hi + lo) ≈ cos(hi) − sin(hi)·lo.
#[inline]
pub(crate) fn kernel_dd(kind: KernelKind, z: Dd, a: f64) -> f64 {
    let t = phase_dd(z, a);
    let (s, c) = t.hi.sin_cos();
    let trig = match kind {
        KernelKind::Cosine => c - s * t.lo,
        KernelKind::Sine => s + c * t.lo,
    };
    trig * envelope_unchecked(z.hi, a)
}
