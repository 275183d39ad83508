//! Slow arbitrary-precision reference evaluations (MPFR via `rug`).
//!
//! Nothing here shares arithmetic with the fast path: images, phases and
//! envelopes are recomputed from the raw inputs in big-float arithmetic and
//! every bracket is summed exactly paired.

mod cache;
mod probe;
mod suite;

use std::fmt;
use std::str::FromStr;

use resonance_core::{KernelKind, Orientation, ValidatedConfig};
use rug::float::Round;
use rug::ops::AssignRound;
use rug::Float;

pub use cache::OracleCache;
pub use probe::{linear_term_probe, ProbeResult};
pub use suite::{cached_brute_force, equivalence_suite, SuiteEntry, SUITE_CHECKPOINT, SUITE_DIGITS, SUITE_N_MAX};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("oracle needs a finite two-mirror configuration")]
    NotCavity,
    #[error("precision must be at least 50 digits, got {0}")]
    Precision(u32),
    #[error("n_max must be at least 1000, got {0}")]
    TooFewTerms(u64),
    #[error("kernel domain: z = {z}, a = {a}")]
    Domain { z: f64, a: f64 },
    #[error("budget exceeded: {needed} kernel evaluations requested, {budget} allowed")]
    Budget { needed: u64, budget: u64 },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("invalid probe grid: {0}")]
    InvalidGrid(String),
    #[error("malformed cache record: {0}")]
    Record(String),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] resonance_core::Error),
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    BruteForceSum,
    RichardsonLimit,
    KernelEvaluation,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BruteForceSum => "brute_force_sum",
            Method::RichardsonLimit => "richardson_limit",
            Method::KernelEvaluation => "kernel_evaluation",
        })
    }
}

impl FromStr for Method {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute_force_sum" => Ok(Method::BruteForceSum),
            "richardson_limit" => Ok(Method::RichardsonLimit),
            "kernel_evaluation" => Ok(Method::KernelEvaluation),
            other => Err(OracleError::Record(format!("unknown method `{other}`"))),
        }
    }
}

/// One reference value. `value` is a decimal string with at least the
/// requested number of significant digits; `inputs` is the canonical text
/// of everything the value depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub method: Method,
    pub inputs: String,
    pub precision_digits: u32,
    pub n_max_used: u64,
    pub value: String,
}

impl OracleReport {
    pub fn value_f64(&self) -> f64 {
        self.value.parse().unwrap_or(f64::NAN)
    }

    /// Self-describing text record, as stored in the cache.
    pub fn to_record(&self) -> String {
        let mut s = String::from("# resonance oracle report\n");
        s.push_str(&format!("method = {}\n", self.method));
        for line in self.inputs.lines() {
            s.push_str(&format!("input.{line}\n"));
        }
        s.push_str(&format!("precision_digits = {}\n", self.precision_digits));
        s.push_str(&format!("n_max_used = {}\n", self.n_max_used));
        s.push_str(&format!("value = {}\n", self.value));
        s
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut method = None;
        let mut inputs = String::new();
        let mut digits = None;
        let mut n_max = None;
        let mut value = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| OracleError::Record(format!("bad line `{line}`")))?;
            match k {
                "method" => method = Some(v.parse()?),
                "precision_digits" => digits = v.parse().ok(),
                "n_max_used" => n_max = v.parse().ok(),
                "value" => value = Some(v.to_string()),
                _ => match k.strip_prefix("input.") {
                    Some(name) => inputs.push_str(&format!("{name} = {v}\n")),
                    None => return Err(OracleError::Record(format!("unknown key `{k}`"))),
                },
            }
        }
        let missing = |what: &str| OracleError::Record(format!("missing {what}"));
        Ok(Self {
            method: method.ok_or_else(|| missing("method"))?,
            inputs,
            precision_digits: digits.ok_or_else(|| missing("precision_digits"))?,
            n_max_used: n_max.ok_or_else(|| missing("n_max_used"))?,
            value: value.ok_or_else(|| missing("value"))?,
        })
    }
}

/// Exact decimal of a double together with its bit pattern.
fn describe(x: f64) -> String {
    format!("{x:e} (0x{:016x})", x.to_bits())
}

fn bits_for(digits: u32) -> u32 {
    // log2(10) ≈ 3.3219, plus guard bits
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

fn decimal(x: &Float, digits: u32) -> String {
    format!("{:.*e}", digits as usize + 2, x)
}

/// Evaluation context at a fixed binary precision.
struct Mp {
    prec: u32,
}

impl Mp {
    fn float(&self, x: f64) -> Float {
        Float::with_val(self.prec, x)
    }

    /// trig(T)·E at z, with T = (2/a)·asinh(a·z/2) and E = 1/(z·√(1 + (a·z/2)²)).
    fn kernel(&self, kind: KernelKind, z: &Float, a: f64) -> Float {
        let mut t = Float::with_val(self.prec, z);
        let mut env = Float::with_val(self.prec, z);
        if a != 0.0 {
            let mut u = Float::with_val(self.prec, z * a);
            u /= 2;
            let mut s = Float::with_val(self.prec, u.square_ref());
            s += 1;
            s.sqrt_mut();
            env *= &s;
            u.asinh_mut();
            t.assign_round(&u * 2u32, Round::Nearest);
            t /= a;
        }
        match kind {
            KernelKind::Cosine => t.cos_mut(),
            KernelKind::Sine => t.sin_mut(),
        }
        t /= &env;
        t
    }

    /// The two image distances of bracket n, from the raw inputs.
    fn images(&self, c: &ValidatedConfig, n: i64) -> (Float, Float) {
        let p = self.prec;
        let mut w = Float::with_val(p, c.l_r());
        w *= 2 * n;
        let d = self.float(c.d_r());
        let tz = self.float(2.0 * c.z0_r());
        match c.orientation() {
            Orientation::Perpendicular => {
                let mut z1 = Float::with_val(p, &w - &d);
                let mut z2 = Float::with_val(p, &z1 - &tz);
                z1.abs_mut();
                z2.abs_mut();
                (z1, z2)
            }
            Orientation::Parallel => {
                let d2 = Float::with_val(p, d.square_ref());
                let mut z3 = Float::with_val(p, w.square_ref());
                z3 += &d2;
                z3.sqrt_mut();
                let mut wm = Float::with_val(p, &w - &tz);
                wm.square_mut();
                wm += &d2;
                wm.sqrt_mut();
                (z3, wm)
            }
        }
    }
}

/// Default ceiling on kernel evaluations per oracle call (≈ 2.5·10⁷ terms).
pub const DEFAULT_BUDGET: u64 = 100_000_000;

fn kernel_inputs(kind: KernelKind, z: f64, a: f64) -> String {
    format!("kind = {kind}\nz = {}\na = {}\n", describe(z), describe(a))
}

pub(crate) fn sum_inputs(kind: KernelKind, c: &ValidatedConfig, n_max: u64) -> String {
    format!(
        "kind = {kind}\norientation = {}\nd = {}\nz0 = {}\nL = {}\na = {}\nn_max = {n_max}\n",
        c.orientation(),
        describe(c.d_r()),
        describe(c.z0_r()),
        describe(c.l_r()),
        describe(c.a_r()),
    )
}

/// Extended-precision kernel value.
pub fn kernel_oracle(kind: KernelKind, z: f64, a: f64, digits: u32) -> Result<OracleReport> {
    if digits < 50 {
        return Err(OracleError::Precision(digits));
    }
    if !(z > 0.0 && z.is_finite() && a >= 0.0 && a.is_finite()) {
        return Err(OracleError::Domain { z, a });
    }
    let mp = Mp {
        prec: bits_for(digits),
    };
    let v = mp.kernel(kind, &mp.float(z), a);
    Ok(OracleReport {
        method: Method::KernelEvaluation,
        inputs: kernel_inputs(kind, z, a),
        precision_digits: digits,
        n_max_used: 0,
        value: decimal(&v, digits),
    })
}

/// Extended-precision phase (2/a)·asinh(a·z/2), or z at a = 0, as a decimal string.
pub fn phase_oracle(z: f64, a: f64, digits: u32) -> String {
    let mp = Mp {
        prec: bits_for(digits),
    };
    let mut t = mp.float(z);
    if a != 0.0 {
        t *= a;
        t /= 2;
        t.asinh_mut();
        t *= 2;
        t /= a;
    }
    decimal(&t, digits)
}

pub fn brute_force_sum(
    kind: KernelKind,
    config: &ValidatedConfig,
    n_max: u64,
    digits: u32,
) -> Result<OracleReport> {
    let mut r = brute_force_checkpoints(kind, config, &[n_max], digits, DEFAULT_BUDGET)?;
    Ok(r.pop().expect("one checkpoint"))
}

/// Sums all brackets |n| ≤ N in one pass and reports the partial sum at
/// every requested N (sorted ascending). Each report is exactly what
/// [`brute_force_sum`] returns for that N.
pub fn brute_force_checkpoints(
    kind: KernelKind,
    config: &ValidatedConfig,
    checkpoints: &[u64],
    digits: u32,
    budget: u64,
) -> Result<Vec<OracleReport>> {
    if !config.is_cavity() {
        return Err(OracleError::NotCavity);
    }
    if digits < 50 {
        return Err(OracleError::Precision(digits));
    }
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    let last = *cps.last().ok_or(OracleError::TooFewTerms(0))?;
    if let Some(&first) = cps.first() {
        if first < 1000 {
            return Err(OracleError::TooFewTerms(first));
        }
    }
    let needed = 2 * (2 * last + 1);
    if needed > budget {
        return Err(OracleError::Budget { needed, budget });
    }
    let mp = Mp {
        prec: bits_for(digits),
    };
    let a = config.a_r();
    let bracket = |n: i64| {
        let (z1, z2) = mp.images(config, n);
        let mut k = mp.kernel(kind, &z1, a);
        k -= mp.kernel(kind, &z2, a);
        k
    };
    let mut acc = bracket(0);
    let mut out = Vec::with_capacity(cps.len());
    let mut next = cps.iter().peekable();
    for n in 1..=last as i64 {
        acc += bracket(n);
        acc += bracket(-n);
        if next.peek().is_some_and(|&&c| c == n as u64) {
            let c = *next.next().unwrap();
            out.push(OracleReport {
                method: Method::BruteForceSum,
                inputs: sum_inputs(kind, config, c),
                precision_digits: digits,
                n_max_used: c,
                value: decimal(&acc, digits),
            });
        }
    }
    Ok(out)
}
