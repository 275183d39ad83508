//! Image families and the bilateral sums Σₙ [k(z_first(n)) − k(z_second(n))].
//!
//! Terms n and −n are combined into g(n). For a > 0 the combined terms decay
//! at least like n⁻², and truncation is certified by the smallest of three
//! majorants of Σ_{n>N} |g(n)|: a bare envelope bound, a first-difference
//! bound and a second-difference bound.
//!
//! At a = 0 the series is only conditionally convergent. Writing
//! g(n) = Re/Im[ωⁿ·H(2nL)] with ω = e^{2iL} and H smooth of order 1/w,
//! summation by parts gives a certified bound for plain truncation
//! ([`tail_bound`]) and, one level further, an explicit tail correction
//! whose remainder is O(1/N²). [`bilateral_sum`] uses the corrected
//! estimator at a = 0.

use num_complex::Complex64;

use crate::dd::{two_prod, Dd};
use crate::error::{Error, Result};
use crate::kernel::{kernel_dd, KernelKind};
use crate::model::{Orientation, ValidatedConfig};
use crate::sum::CompensatedSum;

/// The two image distances paired in bracket n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagePair {
    pub n: i64,
    pub z_first: f64,
    pub z_second: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult {
    pub value: f64,
    /// Brackets with |n| ≤ n_max were summed.
    pub n_max: u64,
    /// Certified bound on |value − exact sum|.
    pub tail_bound: f64,
    pub terms_evaluated: u64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub tol: f64,
    pub n_cap: u64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            n_cap: 100_000_000,
        }
    }
}

/// Finite-cavity parameters in the form the summation loop wants.
#[derive(Debug, Clone, Copy)]
struct Cavity {
    orientation: Orientation,
    d: f64,
    z0: f64,
    l: f64,
    a: f64,
}

impl Cavity {
    fn new(cfg: &ValidatedConfig) -> Result<Self> {
        if !cfg.is_cavity() {
            return Err(Error::Unsupported(
                "image sums need a finite cavity (finite z0 and L)".into(),
            ));
        }
        Ok(Self {
            orientation: cfg.orientation(),
            d: cfg.d_r(),
            z0: cfg.z0_r(),
            l: cfg.l_r(),
            a: cfg.a_r(),
        })
    }

    fn images(&self, n: i64) -> (Dd, Dd) {
        match self.orientation {
            Orientation::Perpendicular => {
                if n >= 1 {
                    let w = Dd::from(two_prod(2.0 * n as f64, self.l));
                    let z1 = w.sub_f64(self.d);
                    (z1, z1.sub_f64(2.0 * self.z0))
                } else {
                    let w = Dd::from(two_prod(-2.0 * n as f64, self.l));
                    let z1 = w.add_f64(self.d);
                    (z1, z1.add_f64(2.0 * self.z0))
                }
            }
            Orientation::Parallel => {
                let d2 = Dd::from(two_prod(self.d, self.d));
                let w = Dd::from(two_prod(2.0 * n as f64, self.l));
                let z3 = d2.add(w.sqr()).sqrt();
                let z4 = d2.add(w.sub_f64(2.0 * self.z0).sqr()).sqrt();
                (z3, z4)
            }
        }
    }

    #[inline]
    fn bracket(&self, kind: KernelKind, n: i64) -> f64 {
        let (z1, z2) = self.images(n);
        kernel_dd(kind, z1, self.a) - kernel_dd(kind, z2, self.a)
    }

    /// Lower bound v_N = 2NL + c on every image distance with |n| ≥ N.
    fn v(&self, n: u64) -> f64 {
        let c = match self.orientation {
            Orientation::Perpendicular => -(self.d + 2.0 * self.z0),
            Orientation::Parallel => -2.0 * self.z0,
        };
        2.0 * n as f64 * self.l + c
    }

    /// ρ in the a = 0 bounds: the transverse offset of the image line.
    fn rho(&self) -> f64 {
        match self.orientation {
            Orientation::Perpendicular => 0.0,
            Orientation::Parallel => self.d,
        }
    }

    fn plain_sum(&self, kind: KernelKind, n_max: u64) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.add(self.bracket(kind, 0));
        for n in 1..=n_max as i64 {
            acc.add(self.bracket(kind, n));
            acc.add(self.bracket(kind, -n));
        }
        acc.total()
    }

    fn segment_sum(&self, kind: KernelKind, n_lo: u64, n_hi: u64) -> f64 {
        let mut acc = CompensatedSum::new();
        for n in n_lo as i64 + 1..=n_hi as i64 {
            acc.add(self.bracket(kind, n));
            acc.add(self.bracket(kind, -n));
        }
        acc.total()
    }

    /// Σ_{n>N} |g(n)| majorant for a > 0.
    fn accelerated_bound(&self, n: u64) -> f64 {
        let a = self.a;
        let l = self.l;
        let v = self.v(n);
        if !(v > 0.0) {
            return f64::INFINITY;
        }
        // |k'| ≤ K1/z³ and |k''| ≤ K2/z⁴ for every z > 0.
        let k1 = 4.0 / a + 4.0 / (a * a);
        let k2 = 12.0 / a + 20.0 / (a * a) + 8.0 / (a * a * a);
        let envelope = 4.0 / (a * l * v);
        let first = self.z0 * k1 / (l * v * v);
        let second = match self.orientation {
            Orientation::Perpendicular => {
                let delta = self.d + 2.0 * self.z0;
                (self.d * self.d + delta * delta) * k2 / (6.0 * l * v * v * v)
            }
            Orientation::Parallel => {
                let z02 = self.z0 * self.z0;
                4.0 * z02 * k2 / (6.0 * l * v.powi(3))
                    + 4.0 * z02 * self.d * self.d * k1 / (10.0 * l * v.powi(5))
            }
        };
        envelope.min(first).min(second)
    }

    /// Bound on |S(N') − S(N)| for all N' > N at a = 0 (plain truncation).
    fn inertial_plain_bound(&self, n: u64) -> f64 {
        let s = self.l.sin().abs();
        let v = self.v(n);
        let v1 = self.v(n + 1);
        if s == 0.0 || !(v > 0.0) {
            return f64::INFINITY;
        }
        let rho2 = self.rho().powi(2);
        4.0 * (2.0 / v1 + 1.0 / v + rho2 / (4.0 * v * v)) / (2.0 * s)
    }

    /// Bound on the remainder of the corrected estimator at a = 0.
    fn inertial_corrected_bound(&self, n: u64) -> f64 {
        let s = self.l.sin();
        let v = self.v(n);
        if s == 0.0 || !(v > 0.0) {
            return f64::INFINITY;
        }
        let rho2 = self.rho().powi(2);
        let integral = 1.0 / (v * v)
            + 2.0 * rho2 / (3.0 * v.powi(3))
            + (rho2 + rho2 * rho2 / 4.0) / (4.0 * v.powi(4));
        2.0 * self.l * 4.0 * integral / (4.0 * s * s)
    }

    /// H(w) with g(n) = Re/Im[e^{iw}·H(w)] at w = 2nL, a = 0.
    fn h(&self, w: f64) -> Complex64 {
        let cis = Complex64::cis;
        match self.orientation {
            Orientation::Perpendicular => {
                let d = self.d;
                let delta = d + 2.0 * self.z0;
                cis(-d) / (w - d) + cis(d) / (w + d) - cis(-delta) / (w - delta)
                    - cis(delta) / (w + delta)
            }
            Orientation::Parallel => {
                let d2 = self.d * self.d;
                // z − x = d²/(z + x) with z = √(d² + x²), computed without cancellation
                let offset = |x: f64| {
                    let z = (d2 + x * x).sqrt();
                    (z, d2 / (z + x))
                };
                let tz = 2.0 * self.z0;
                let (z3, e3) = offset(w);
                let (zm, em) = offset(w - tz);
                let (zp, ep) = offset(w + tz);
                2.0 * cis(e3) / z3 - cis(em - tz) / zm - cis(ep + tz) / zp
            }
        }
    }

    fn omega_pow(&self, n: u64) -> Complex64 {
        let w = Dd::from(two_prod(2.0 * n as f64, self.l));
        Complex64::cis(w.hi) * Complex64::new(1.0, w.lo)
    }

    /// Tail correction −ω^{N+1}H_{N+1}/(ω−1) + ω^{N+2}(H_{N+2} − H_{N+1})/(ω−1)².
    fn inertial_correction(&self, kind: KernelKind, n: u64) -> f64 {
        let om1 = Complex64::cis(2.0 * self.l) - 1.0;
        let h1 = self.h(2.0 * (n + 1) as f64 * self.l);
        let h2 = self.h(2.0 * (n + 2) as f64 * self.l);
        let c = -self.omega_pow(n + 1) * h1 / om1 + self.omega_pow(n + 2) * (h2 - h1) / (om1 * om1);
        match kind {
            KernelKind::Cosine => c.re,
            KernelKind::Sine => c.im,
        }
    }

    /// Certified bound used to choose N for the main-path estimator.
    fn estimator_bound(&self, n: u64) -> f64 {
        if self.a > 0.0 {
            self.accelerated_bound(n)
        } else {
            self.inertial_corrected_bound(n)
        }
    }

    fn estimate(&self, kind: KernelKind, n_max: u64) -> SumResult {
        let mut value = self.plain_sum(kind, n_max);
        if self.a == 0.0 {
            value += self.inertial_correction(kind, n_max);
        }
        SumResult {
            value,
            n_max,
            tail_bound: self.estimator_bound(n_max),
            terms_evaluated: 2 * n_max + 1,
            converged: true,
        }
    }
}

pub fn image_pair(config: &ValidatedConfig, n: i64) -> Result<ImagePair> {
    let c = Cavity::new(config)?;
    let (z1, z2) = c.images(n);
    Ok(ImagePair {
        n,
        z_first: z1.to_f64(),
        z_second: z2.to_f64(),
    })
}

/// Certified bound on |S(N') − S(N)| for every N' > N, where S(N) is the
/// plain truncated sum over |n| ≤ N. Infinite when no bound exists (a = 0
/// with L a multiple of π, where the series diverges).
pub fn tail_bound(config: &ValidatedConfig, kind: KernelKind, n_max: u64) -> f64 {
    let _ = kind;
    let Ok(c) = Cavity::new(config) else {
        return f64::INFINITY;
    };
    let n = n_max.max(1);
    if c.a > 0.0 {
        c.accelerated_bound(n)
    } else {
        c.inertial_plain_bound(n)
    }
}

/// Plain truncated sum over |n| ≤ n_max, paired and compensated, with its
/// certified [`tail_bound`]. `converged` reports whether that bound is finite.
pub fn partial_sum(kind: KernelKind, config: &ValidatedConfig, n_max: u64) -> Result<SumResult> {
    let c = Cavity::new(config)?;
    let value = c.plain_sum(kind, n_max);
    let bound = tail_bound(config, kind, n_max);
    Ok(SumResult {
        value,
        n_max,
        tail_bound: bound,
        terms_evaluated: 2 * n_max + 1,
        converged: bound.is_finite(),
    })
}

/// S(n_hi) − S(n_lo) summed directly over n_lo < |n| ≤ n_hi, without the
/// cancellation of differencing two rounded partial sums.
pub fn segment_sum(kind: KernelKind, config: &ValidatedConfig, n_lo: u64, n_hi: u64) -> Result<f64> {
    let c = Cavity::new(config)?;
    Ok(c.segment_sum(kind, n_lo, n_hi))
}

/// The main-path estimator at a fixed truncation index, without searching
/// for N. At a = 0 this includes the summation-by-parts tail correction.
pub fn series_estimate(kind: KernelKind, config: &ValidatedConfig, n_max: u64) -> Result<SumResult> {
    let c = Cavity::new(config)?;
    Ok(c.estimate(kind, n_max.max(1)))
}

pub fn bilateral_sum(kind: KernelKind, config: &ValidatedConfig, tol: f64) -> Result<SumResult> {
    bilateral_sum_with(
        kind,
        config,
        &SeriesOptions {
            tol,
            ..SeriesOptions::default()
        },
    )
}

pub fn bilateral_sum_with(
    kind: KernelKind,
    config: &ValidatedConfig,
    opts: &SeriesOptions,
) -> Result<SumResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tol must be > 0, got {}", opts.tol)));
    }
    let c = Cavity::new(config)?;
    let n = required_terms(|n| c.estimator_bound(n), opts.tol, opts.n_cap.max(1))?;
    Ok(c.estimate(kind, n))
}

/// Smallest N ≥ 1 with bound(N) ≤ tol, assuming bound is non-increasing.
fn required_terms(bound: impl Fn(u64) -> f64, tol: f64, cap: u64) -> Result<u64> {
    let at_cap = bound(cap);
    if !(at_cap <= tol) {
        return Err(Error::Convergence {
            tol,
            n_cap: cap,
            bound_at_cap: at_cap,
        });
    }
    let mut hi = 1u64;
    while !(bound(hi) <= tol) {
        hi = (hi * 2).min(cap);
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(hi);
    }
    // bound(lo) > tol, bound(hi) ≤ tol
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
