//! Fixed-point big reals and complex numbers with an explicit bit
//! precision: a [`Real`] is `v / 2^bits` for a big integer `v`.
//!
//! Every operation stays within 1-2 ulp of the exact value at the
//! carried precision; callers add guard bits instead of relying on
//! rounding modes. Comparisons are exact comparisons of the fixed-point
//! representatives.

use alloc::string::String;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// `v / 2^bits`, exact fixed point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Real {
    v: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real {
            v: BigInt::zero(),
            bits,
        }
    }

    pub fn one(bits: u32) -> Self {
        Real {
            v: BigInt::one() << bits,
            bits,
        }
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> Self {
        Real { v: n << bits, bits }
    }

    pub fn from_i64(n: i64, bits: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), bits)
    }

    pub fn from_ratio(q: &BigRational, bits: u32) -> Self {
        Real {
            v: (q.numer() << bits) / q.denom(),
            bits,
        }
    }

    /// `p / q` as a real.
    pub fn from_fraction(p: i64, q: i64, bits: u32) -> Self {
        Self::from_ratio(&BigRational::new(BigInt::from(p), BigInt::from(q)), bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn raw(&self) -> &BigInt {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    fn assert_bits(&self, other: &Real) {
        debug_assert_eq!(self.bits, other.bits, "mixed precisions");
    }

    pub fn add(&self, other: &Real) -> Real {
        self.assert_bits(other);
        Real {
            v: &self.v + &other.v,
            bits: self.bits,
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.assert_bits(other);
        Real {
            v: &self.v - &other.v,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Real {
        Real {
            v: -&self.v,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Real {
        Real {
            v: self.v.abs(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        self.assert_bits(other);
        Real {
            v: (&self.v * &other.v) >> self.bits,
            bits: self.bits,
        }
    }

    pub fn div(&self, other: &Real) -> Real {
        self.assert_bits(other);
        debug_assert!(!other.v.is_zero(), "division by zero");
        Real {
            v: (&self.v << self.bits) / &other.v,
            bits: self.bits,
        }
    }

    pub fn div_u64(&self, n: u64) -> Real {
        Real {
            v: &self.v / BigInt::from(n),
            bits: self.bits,
        }
    }

    pub fn mul_u64(&self, n: u64) -> Real {
        Real {
            v: &self.v * BigInt::from(n),
            bits: self.bits,
        }
    }

    pub fn mul_ratio(&self, q: &BigRational) -> Real {
        Real {
            v: (&self.v * q.numer()) / q.denom(),
            bits: self.bits,
        }
    }

    /// Multiplication by `2^e` (exact).
    pub fn shl(&self, e: u32) -> Real {
        Real {
            v: &self.v << e,
            bits: self.bits,
        }
    }

    pub fn shr(&self, e: u32) -> Real {
        Real {
            v: &self.v >> e,
            bits: self.bits,
        }
    }

    /// Floor square root; the argument must be nonnegative.
    pub fn sqrt(&self) -> Result<Real> {
        if self.v.is_negative() {
            return Err(Error::Domain("sqrt of a negative real"));
        }
        let scaled: BigInt = &self.v << self.bits;
        Ok(Real {
            v: scaled.sqrt(),
            bits: self.bits,
        })
    }

    pub fn powi(&self, mut e: u32) -> Real {
        let mut acc = Real::one(self.bits);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// One ulp at this precision.
    pub fn ulp(bits: u32) -> Real {
        Real {
            v: BigInt::one(),
            bits,
        }
    }

    /// Drops precision to `bits` (truncating), or raises it exactly.
    pub fn with_bits(&self, bits: u32) -> Real {
        if bits <= self.bits {
            Real {
                v: &self.v >> (self.bits - bits),
                bits,
            }
        } else {
            Real {
                v: &self.v << (bits - self.bits),
                bits,
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bl = self.v.bits() as i64;
        if bl <= 900 {
            self.v.to_f64().unwrap_or(f64::NAN) * pow2_f64(-(self.bits as i32))
        } else {
            // Scale down first so the conversion cannot overflow.
            let shift = (bl - 64) as u32;
            let top: BigInt = &self.v >> shift;
            top.to_f64().unwrap_or(f64::NAN) * pow2_f64(shift as i32 - self.bits as i32)
        }
    }

    /// Decimal rendering with `digits` fractional digits (truncated).
    pub fn to_decimal(&self, digits: u32) -> String {
        use alloc::string::ToString;
        let neg = self.v.is_negative();
        let v = self.v.abs();
        let int_part: BigInt = &v >> self.bits;
        let mut frac: BigInt = &v - (&int_part << self.bits);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                frac *= 10;
                let digit: BigInt = &frac >> self.bits;
                out.push_str(&digit.to_string());
                frac -= digit << self.bits;
            }
        }
        out
    }
}

/// `2^e` without std float intrinsics (exact in the normal range).
fn pow2_f64(e: i32) -> f64 {
    if e < -1022 {
        0.0
    } else if e > 1023 {
        f64::INFINITY
    } else {
        f64::from_bits(((1023 + e) as u64) << 52)
    }
}

/// pi at the requested precision (Machin's formula).
pub fn pi(bits: u32) -> Real {
    let work = bits + 16;
    let a = atan_small(&Real::from_fraction(1, 5, work));
    let b = atan_small(&Real::from_fraction(1, 239, work));
    let p = a.mul_u64(16).sub(&b.mul_u64(4));
    Real { v: p.v >> 16, bits }
}

/// arctan for `|x| <= 1`, by argument halving plus the Taylor series.
fn atan_small(x: &Real) -> Real {
    let bits = x.bits;
    let mut x = x.clone();
    let mut doublings = 0u32;
    let threshold = Real {
        v: BigInt::one() << (bits - 4),
        bits,
    };
    while x.abs() > threshold {
        // atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
        let denom = Real::one(bits).add(
            &Real::one(bits)
                .add(&x.mul(&x))
                .sqrt()
                .expect("1 + x^2 >= 0"),
        );
        x = x.div(&denom);
        doublings += 1;
    }
    let x2 = x.mul(&x);
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut n = 1u64;
    loop {
        term = term.mul(&x2);
        if term.is_zero() {
            break;
        }
        n += 2;
        let contrib = term.div_u64(n);
        if contrib.is_zero() {
            break;
        }
        if n % 4 == 3 {
            sum = sum.sub(&contrib);
        } else {
            sum = sum.add(&contrib);
        }
    }
    sum.shl(doublings)
}

/// arctan for any nonnegative `x`.
pub fn atan(x: &Real) -> Real {
    debug_assert!(!x.is_negative());
    if *x > Real::one(x.bits) {
        let half_pi = pi(x.bits).div_u64(2);
        half_pi.sub(&atan_small(&Real::one(x.bits).div(x)))
    } else {
        atan_small(x)
    }
}

/// `exp(p/q)` at the requested precision.
pub fn exp_fraction(p: i64, q: i64, bits: u32) -> Real {
    let work = bits + 32;
    let mut x = Real::from_fraction(p, q, work);
    let mut squarings = 0u32;
    let half = Real::from_fraction(1, 2, work);
    while x.abs() > half {
        x = x.shr(1);
        squarings += 1;
    }
    let mut term = Real::one(work);
    let mut sum = Real::one(work);
    let mut n = 0u64;
    loop {
        n += 1;
        term = term.mul(&x).div_u64(n);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    Real {
        v: sum.v >> 32,
        bits,
    }
}

/// Complex number with fixed-point parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Complex {
            re: Real::zero(bits),
            im: Real::zero(bits),
        }
    }

    pub fn one(bits: u32) -> Self {
        Complex {
            re: Real::one(bits),
            im: Real::zero(bits),
        }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits()
    }

    pub fn add(&self, other: &Complex) -> Complex {
        Complex {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Complex) -> Complex {
        Complex {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn mul(&self, other: &Complex) -> Complex {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        Complex { re, im }
    }

    pub fn conj(&self) -> Complex {
        Complex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn scale(&self, c: &Real) -> Complex {
        Complex {
            re: self.re.mul(c),
            im: self.im.mul(c),
        }
    }

    pub fn scale_ratio(&self, q: &BigRational) -> Complex {
        Complex {
            re: self.re.mul_ratio(q),
            im: self.im.mul_ratio(q),
        }
    }

    pub fn div_real(&self, c: &Real) -> Complex {
        Complex {
            re: self.re.div(c),
            im: self.im.div(c),
        }
    }

    pub fn abs_sq(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Real {
        self.abs_sq().sqrt().expect("|z|^2 >= 0")
    }

    pub fn powi(&self, mut e: u32) -> Complex {
        let mut acc = Complex::one(self.bits());
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Principal square root (argument halving into `(-pi/2, pi/2]`).
    pub fn sqrt_principal(&self) -> Complex {
        let bits = self.bits();
        let r = self.abs();
        let re2 = r.add(&self.re).div_u64(2);
        let re2 = if re2.is_negative() {
            Real::zero(bits)
        } else {
            re2.sqrt().expect(">=0")
        };
        let im_abs = {
            let half = r.sub(&self.re).div_u64(2);
            // Guard tiny negatives from fixed-point truncation.
            if half.is_negative() {
                Real::zero(bits)
            } else {
                half.sqrt().expect(">=0")
            }
        };
        if self.im.is_negative() {
            Complex {
                re: re2,
                im: im_abs.neg(),
            }
        } else if self.im.is_zero() && self.re.is_negative() {
            // Branch point on the negative axis: arg pi maps to pi/2.
            Complex {
                re: Real::zero(bits),
                im: im_abs,
            }
        } else {
            Complex {
                re: re2,
                im: im_abs,
            }
        }
    }

    /// Principal fourth root: two principal square roots.
    pub fn quartic_root_principal(&self) -> Complex {
        self.sqrt_principal().sqrt_principal()
    }

    pub fn with_bits(&self, bits: u32) -> Complex {
        Complex {
            re: self.re.with_bits(bits),
            im: self.im.with_bits(bits),
        }
    }
}

/// Embeds `(h + k sqrt(d))/2` as a complex number: real axis only for
/// `d > 0`, vertical component for `d < 0`.
pub fn embed_quad(q: &crate::quadratic::QuadInt, bits: u32) -> Complex {
    let (h, k) = q.coords();
    let d = q.field();
    let half_h = Real {
        v: h << (bits - 1),
        bits,
    };
    let sqrt_abs_d = Real::from_bigint(&d.abs(), bits).sqrt().expect("|d| >= 0");
    let half_k_sqrt = Real {
        v: k << (bits - 1),
        bits,
    }
    .mul(&sqrt_abs_d);
    if d.is_negative() {
        Complex {
            re: half_h,
            im: half_k_sqrt,
        }
    } else {
        Complex {
            re: half_h.add(&half_k_sqrt),
            im: Real::zero(bits),
        }
    }
}
