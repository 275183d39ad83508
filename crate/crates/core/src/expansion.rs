//! Small-acceleration expansion of the perpendicular two-mirror shift.
//!
//! Expanding the kernel to second order in a gives
//! k(z, a) ≈ cos z/z − (a²/8)·g(z) with g(z) = z·cos z − z²·sin z/3.
//! Summed image by image the a² coefficient diverges (g grows like z²), so a
//! literal truncation of the expanded series never settles. The coefficient
//! of a² in the full sum is instead obtained by Abel summation of the image
//! families, which has a closed form in terms of Li₀, Li₋₁ and Li₋₂ at
//! ω = e^{2iL}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Orientation, ValidatedConfig};
use crate::sum::CompensatedSum;

fn g(z: f64) -> f64 {
    z * z.cos() - z * z * z.sin() / 3.0
}

/// Abel-regularized Σ_{n≥1} g(2nL + c).
fn regularized_family(l: f64, c: f64) -> f64 {
    let w = Complex64::cis(2.0 * l);
    let q = Complex64::new(1.0, 0.0) - w;
    let li0 = w / q;
    let li1 = w / (q * q);
    let li2 = w * (1.0 + w) / (q * q * q);
    let tl = 2.0 * l;
    let phase = Complex64::cis(c);
    let g1 = phase * (c * li0 + tl * li1);
    let g2 = phase * (c * c * li0 + 2.0 * tl * c * li1 + tl * tl * li2);
    g1.re - g2.im / 3.0
}

fn require_perpendicular_cavity(config: &ValidatedConfig) -> Result<()> {
    if config.orientation() != Orientation::Perpendicular || !config.is_cavity() {
        return Err(Error::Unsupported(
            "the low-acceleration expansion is available for the perpendicular cavity only".into(),
        ));
    }
    Ok(())
}

/// Coefficient C₂ in S(a) = S(0) + C₂·a² + O(a⁴) for the perpendicular
/// cosine sum. Fails when L is a multiple of π, where the families resonate.
pub fn curvature_coefficient(config: &ValidatedConfig) -> Result<f64> {
    require_perpendicular_cavity(config)?;
    let l = config.l_r();
    if (1.0 - Complex64::cis(2.0 * l)).norm() < 1e-8 {
        return Err(Error::Convergence {
            tol: 0.0,
            n_cap: 0,
            bound_at_cap: f64::INFINITY,
        });
    }
    let d = config.d_r();
    let delta = d + 2.0 * config.z0_r();
    let fam = |c| regularized_family(l, c);
    let bracket = g(d) - g(delta) + fam(-d) + fam(d) - fam(-delta) - fam(delta);
    Ok(-bracket / 8.0)
}

/// The expanded series summed image by image up to n_terms, with terms
/// cos M/M − (a²/8)(M·cos M − M²·sin M/3). Reduced-value convention.
/// The a⁰ part converges slowly; the a² part grows like n_terms².
pub fn truncated_expansion(config: &ValidatedConfig, a: f64, n_terms: u64) -> Result<f64> {
    require_perpendicular_cavity(config)?;
    let (d, z0, l) = (config.d_r(), config.z0_r(), config.l_r());
    let term = |m: f64| m.cos() / m - a * a / 8.0 * g(m);
    let mut acc = CompensatedSum::new();
    acc.add(term(d) - term(d + 2.0 * z0));
    for n in 1..=n_terms {
        let w = 2.0 * n as f64 * l;
        acc.add(term(w - d) - term(w - 2.0 * z0 - d));
        acc.add(term(w + d) - term(w + 2.0 * z0 + d));
    }
    Ok(acc.total())
}
