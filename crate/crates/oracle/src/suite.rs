//! Fixed set of configurations for the fast-path/oracle equivalence check.

use resonance_core::{GeometryConfig, KernelKind, Orientation};

use crate::{brute_force_checkpoints, sum_inputs, Method, OracleCache, OracleReport, Result, DEFAULT_BUDGET};

pub const SUITE_N_MAX: u64 = 10_000_000;
pub const SUITE_CHECKPOINT: u64 = 1_000_000;
pub const SUITE_DIGITS: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteEntry {
    pub kind: KernelKind,
    pub config: GeometryConfig,
}

/// Twenty configurations, five each at a = 0, 0.5, 4 and 10.
pub fn equivalence_suite() -> Vec<SuiteEntry> {
    use KernelKind::{Cosine as C, Sine as S};
    use Orientation::{Parallel as Par, Perpendicular as Perp};
    let rows: [(f64, Orientation, KernelKind, f64, f64, f64); 20] = [
        (0.0, Perp, C, 0.5, 0.3, 1.2),
        (0.0, Par, S, 0.5, 0.3, 1.2),
        (0.0, Perp, S, 1.0, 0.7, 2.5),
        (0.0, Par, C, 2.0, 1.5, 4.0),
        (0.0, Perp, C, 0.2, 0.15, 0.9),
        (0.5, Perp, C, 0.5, 0.3, 1.2),
        (0.5, Par, S, 0.5, 0.6, 1.2),
        (0.5, Perp, C, 1.5, 0.4, 3.0),
        (0.5, Par, C, 0.8, 2.0, 5.0),
        (0.5, Perp, S, 0.3, 0.2, 0.7),
        (4.0, Perp, C, 0.5, 0.3, 1.2),
        (4.0, Par, S, 0.5, 0.3, 1.2),
        (4.0, Perp, S, 0.5, 0.3, 1.2),
        (4.0, Par, C, 0.5, 0.3, 1.2),
        (4.0, Perp, C, 2.0, 3.0, 7.5),
        (10.0, Perp, C, 0.5, 0.3, 1.2),
        (10.0, Par, S, 0.5, 0.6, 1.2),
        (10.0, Perp, C, 0.1, 0.1, 0.5),
        (10.0, Par, S, 3.0, 4.0, 9.0),
        (10.0, Perp, S, 1.0, 1.0, 10.0),
    ];
    rows.iter()
        .map(|&(a, o, kind, d, z0, l)| SuiteEntry {
            kind,
            config: GeometryConfig::cavity(o, d, z0, l, a),
        })
        .collect()
}

/// Brute-force reports at `checkpoints` for one entry, from the cache when
/// every checkpoint is present, otherwise computed in one pass and stored.
pub fn cached_brute_force(
    cache: &OracleCache,
    entry: &SuiteEntry,
    checkpoints: &[u64],
    digits: u32,
) -> Result<Vec<OracleReport>> {
    let cfg = entry.config.validate().map_err(resonance_core::Error::from)?;
    let mut found = Vec::new();
    for &n in checkpoints {
        match cache.get(Method::BruteForceSum, &sum_inputs(entry.kind, &cfg, n), digits)? {
            Some(r) => found.push(r),
            None => break,
        }
    }
    if found.len() == checkpoints.len() {
        return Ok(found);
    }
    let reports = brute_force_checkpoints(entry.kind, &cfg, checkpoints, digits, DEFAULT_BUDGET)?;
    for r in &reports {
        cache.put(r)?;
    }
    Ok(reports)
}
