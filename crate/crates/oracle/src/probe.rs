//! Power-law probe of how a value departs from its a = 0 limit.

use std::fmt::Display;

use crate::{OracleError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResult {
    /// Least-squares slope of log|v(a) − v(0)| against log a.
    pub exponent: f64,
    /// RMS residual of the fit in natural-log units.
    pub residual: f64,
    pub points_used: usize,
}

/// Fits |family(a) − family(0)| ∝ a^p over a geometric grid in (0, 10⁻²]
/// with at least six points. Fails with a degenerate-fit error when fewer
/// than two differences are nonzero, in which case the exponent cannot be
/// told apart from anything ≥ 2.
pub fn linear_term_probe<E: Display>(
    family: impl Fn(f64) -> Result<f64, E>,
    a_grid: &[f64],
) -> Result<ProbeResult> {
    if a_grid.len() < 6 {
        return Err(OracleError::InvalidGrid(format!(
            "need at least 6 points, got {}",
            a_grid.len()
        )));
    }
    if a_grid.iter().any(|&a| !(a > 0.0 && a <= 1e-2)) {
        return Err(OracleError::InvalidGrid("points must lie in (0, 1e-2]".into()));
    }
    let ratio = a_grid[1] / a_grid[0];
    let geometric = ratio > 1.0
        && a_grid
            .windows(2)
            .all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-6);
    if !geometric {
        return Err(OracleError::InvalidGrid("grid must be geometric and increasing".into()));
    }
    let eval = |a: f64| family(a).map_err(|e| OracleError::DegenerateFit(format!("a = {a}: {e}")));
    let v0 = eval(0.0)?;
    let mut pts = Vec::new();
    for &a in a_grid {
        let diff = (eval(a)? - v0).abs();
        if diff.is_finite() && diff >= f64::MIN_POSITIVE {
            pts.push((a.ln(), diff.ln()));
        }
    }
    if pts.len() < 2 {
        return Err(OracleError::DegenerateFit(
            "differences vanish at all grid points; exponent indistinguishable from >= 2".into(),
        ));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(ProbeResult {
        exponent: slope,
        residual,
        points_used: pts.len(),
    })
}
