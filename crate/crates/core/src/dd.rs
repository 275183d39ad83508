//! Double-double arithmetic: a value is the unevaluated sum `hi + lo` with
//! `|lo| <= ulp(hi) / 2`, giving roughly 106 significant bits.
//!
//! Only what the kernel and the image generator need is implemented.

use std::sync::OnceLock;

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

const LN_TABLE_BITS: i32 = 7;
const LN_TABLE_SIZE: usize = 1 << LN_TABLE_BITS;

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl From<(f64, f64)> for Dd {
    fn from((hi, lo): (f64, f64)) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::from((s1, s2 + t2))
    }

    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    pub fn add_f64(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        Dd::from((s1, s2 + self.lo))
    }

    pub fn sub_f64(self, b: f64) -> Dd {
        self.add_f64(-b)
    }

    pub fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        Dd::from((p1, p2))
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        Dd::from((p1, p2 + self.lo * b))
    }

    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul_f64(q2));
        let q3 = r.hi / b.hi;
        Dd::from((q1, q2)).add_f64(q3)
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let e = e - p2 + self.lo;
        let q2 = (s + e) / b;
        Dd::from((q1, q2))
    }

    pub fn sqr(self) -> Dd {
        self.mul(self)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from(0.0);
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (sq, sq_err) = two_prod(ax, ax);
        let resid = self.sub(Dd { hi: sq, lo: sq_err });
        Dd::from(ax).add_f64(resid.hi * (x * 0.5))
    }

    /// Exact scaling by a power of two (normal range only).
    fn scale_pow2(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    /// Natural logarithm of a positive, normal value.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0 && self.hi.is_normal());
        let k = ((self.hi.to_bits() >> 52) & 0x7ff) as i32 - 1023;
        let m = self.scale_pow2(-k);
        let j = (((m.hi - 1.0) * LN_TABLE_SIZE as f64) as usize).min(LN_TABLE_SIZE - 1);
        let c = table_center(j);
        let r = m.div_f64(c);
        let t = r.sub_f64(1.0).div(r.add_f64(1.0));
        LN2.mul_f64(k as f64)
            .add(ln_table()[j])
            .add(atanh_series(t, 7).mul_f64(2.0))
    }
}

fn table_center(j: usize) -> f64 {
    1.0 + (j as f64 + 0.5) / LN_TABLE_SIZE as f64
}

/// t + t³/3 + t⁵/5 + … with `terms` terms, evaluated by Horner in t².
fn atanh_series(t: Dd, terms: usize) -> Dd {
    let t2 = t.sqr();
    let mut acc = Dd::ONE.div_f64((2 * terms - 1) as f64);
    for j in (0..terms - 1).rev() {
        acc = acc.mul(t2).add(Dd::ONE.div_f64((2 * j + 1) as f64));
    }
    acc.mul(t)
}

fn ln_table() -> &'static [Dd; LN_TABLE_SIZE] {
    static TABLE: OnceLock<[Dd; LN_TABLE_SIZE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [Dd::from(0.0); LN_TABLE_SIZE];
        for (j, slot) in out.iter_mut().enumerate() {
            let c = Dd::from(table_center(j));
            let t = c.sub_f64(1.0).div(c.add_f64(1.0));
            // |t| < 1/3, so 40 terms reach far below 1e-33
            *slot = atanh_series(t, 40).mul_f64(2.0);
        }
        out
    })
}

/// asinh(u) for u > 0 in double-double.
pub(crate) fn asinh(u: Dd) -> Dd {
    if u.hi > 1e8 {
        // asinh(u) = ln(2u) + 1/(4u²) - 3/(32u⁴) + …; the quartic term is below 1e-33
        let inv = 1.0 / u.hi;
        u.ln().add(LN2).add_f64(0.25 * inv * inv)
    } else {
        u.add(u.sqr().add_f64(1.0).sqrt()).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_to_double_double() {
        // √2 = 1.41421356237309504880168872420969807856967…
        let s = Dd::from(2.0).sqrt();
        assert_eq!(s.hi, std::f64::consts::SQRT_2);
        assert!((s.lo - (-9.667_293_313_452_913e-17)).abs() < 1e-31);
    }

    #[test]
    fn ln_two_and_ten() {
        let l2 = Dd::from(2.0).ln();
        assert_eq!(l2.hi, LN2.hi);
        assert!((l2.lo - LN2.lo).abs() < 1e-31);
        // ln 10 = 2.30258509299404568401799145468436420760110148862877…
        let l10 = Dd::from(10.0).ln();
        assert_eq!(l10.hi, std::f64::consts::LN_10);
        assert!((l10.lo - (-2.170_756_223_382_249_4e-16)).abs() < 1e-30);
    }

    #[test]
    fn ln_near_one_absolute_accuracy() {
        let x = Dd::from(1.0).add_f64(1e-10);
        let l = x.ln();
        // reference from a 50-digit evaluation at the exact binary input
        let want = Dd::from((9.999_999_999_500_001e-11, -3.389_513_322_121_794e-27));
        assert!((l.sub(want).to_f64()).abs() < 1e-33);
    }

    #[test]
    fn asinh_of_one() {
        // asinh(1) = ln(1 + √2), 50-digit reference split into hi + lo
        let v = asinh(Dd::from(1.0));
        assert_eq!(v.hi, 0.881_373_587_019_543);
        let err = v.sub(Dd::from((0.881_373_587_019_543, -2.250_545_892_825_866e-17))).to_f64();
        assert!(err.abs() < 1e-31, "{err:e}");
    }

    #[test]
    fn div_round_trips() {
        let x = Dd::from(1.0).div_f64(3.0).mul_f64(3.0);
        assert!(x.sub_f64(1.0).to_f64().abs() < 1e-31);
        let y = Dd::from(7.0).div(Dd::from(3.0)).mul(Dd::from(3.0));
        assert!(y.sub_f64(7.0).to_f64().abs() < 1e-30);
    }
}
