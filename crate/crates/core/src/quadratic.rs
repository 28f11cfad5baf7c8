//! Exact arithmetic in quadratic fields Q(sqrt(d)) for any nonsquare
//! integer d, plus the minimal solver for `t^2 - d u^2 = +-4`.
//!
//! Values are algebraic integers `(h + k*sqrt(d))/2`, characterized by
//! `h^2 = d k^2 (mod 4)` (integer trace and norm). The same representation
//! serves the real field of the sequences (d > 0) and the imaginary
//! field of `core(N_alpha)` (d < 0).

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intkit::{self, sqrt_exact};
use crate::{Error, Result};

/// `(h + k*sqrt(d))/2`, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadInt {
    h: BigInt,
    k: BigInt,
    d: BigInt,
}

impl QuadInt {
    /// Builds `(h + k*sqrt(d))/2`, enforcing the algebraic-integer
    /// condition. `d` must be a nonsquare integer.
    pub fn new(h: BigInt, k: BigInt, d: BigInt) -> Result<Self> {
        check_field(&d)?;
        // (h + k sqrt d)/2 is an algebraic integer iff its norm is an
        // integer (the trace h always is): h^2 = d k^2 mod 4.
        let four = BigInt::from(4);
        if !(&h * &h - &d * &k * &k).mod_floor(&four).is_zero() {
            return Err(Error::Domain(
                "(h + k sqrt d)/2 is not an algebraic integer",
            ));
        }
        Ok(QuadInt { h, k, d })
    }

    /// Builds `x + y*sqrt(d)` from plain integers.
    pub fn from_integers(x: &BigInt, y: &BigInt, d: BigInt) -> Result<Self> {
        Self::new(x * 2, y * 2, d)
    }

    pub fn one(d: BigInt) -> Result<Self> {
        Self::new(BigInt::from(2), BigInt::zero(), d)
    }

    /// Numerator coordinates `(h, k)` of `(h + k*sqrt(d))/2`.
    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.h, &self.k)
    }

    pub fn field(&self) -> &BigInt {
        &self.d
    }

    /// `x/2` when the value is `x + y*sqrt(d)` with integer parts.
    pub fn rational_part_integer(&self) -> Option<BigInt> {
        if self.h.is_even() {
            Some(&self.h / 2)
        } else {
            None
        }
    }

    pub fn surd_part_integer(&self) -> Option<BigInt> {
        if self.k.is_even() {
            Some(&self.k / 2)
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.h == BigInt::from(2) && self.k.is_zero()
    }

    pub fn mul(&self, other: &QuadInt) -> Result<QuadInt> {
        if self.d != other.d {
            return Err(Error::MismatchedField);
        }
        let h = (&self.h * &other.h + &self.d * &self.k * &other.k) / 2;
        let k = (&self.h * &other.k + &self.k * &other.h) / 2;
        debug_assert!((&self.h * &other.h + &self.d * &self.k * &other.k).is_even());
        Ok(QuadInt {
            h,
            k,
            d: self.d.clone(),
        })
    }

    pub fn add(&self, other: &QuadInt) -> Result<QuadInt> {
        if self.d != other.d {
            return Err(Error::MismatchedField);
        }
        Ok(QuadInt {
            h: &self.h + &other.h,
            k: &self.k + &other.k,
            d: self.d.clone(),
        })
    }

    pub fn sub(&self, other: &QuadInt) -> Result<QuadInt> {
        if self.d != other.d {
            return Err(Error::MismatchedField);
        }
        Ok(QuadInt {
            h: &self.h - &other.h,
            k: &self.k - &other.k,
            d: self.d.clone(),
        })
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt {
            h: -&self.h,
            k: -&self.k,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> QuadInt {
        QuadInt {
            h: &self.h * c,
            k: &self.k * c,
            d: self.d.clone(),
        }
    }

    /// Algebraic conjugate `(h - k*sqrt(d))/2`.
    pub fn conj(&self) -> QuadInt {
        QuadInt {
            h: self.h.clone(),
            k: -&self.k,
            d: self.d.clone(),
        }
    }

    /// Field norm `(h^2 - d k^2)/4`; an integer for algebraic integers.
    pub fn norm(&self) -> BigInt {
        (&self.h * &self.h - &self.d * &self.k * &self.k) / 4
    }

    /// Field trace, equal to `h`.
    pub fn trace(&self) -> BigInt {
        self.h.clone()
    }

    pub fn is_unit(&self) -> bool {
        let n = self.norm();
        n == BigInt::one() || n == BigInt::from(-1)
    }

    /// Binary exponentiation; negative powers require a unit.
    pub fn power(&self, e: i64) -> Result<QuadInt> {
        if e == 0 {
            return QuadInt::one(self.d.clone());
        }
        let base = if e < 0 {
            let n = self.norm();
            if n == BigInt::one() {
                self.conj()
            } else if n == BigInt::from(-1) {
                self.conj().neg()
            } else {
                return Err(Error::Domain("negative power of a non-unit"));
            }
        } else {
            self.clone()
        };
        let mut acc = QuadInt::one(self.d.clone())?;
        let mut sq = base;
        let mut rem = e.unsigned_abs();
        while rem > 0 {
            if rem & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            rem >>= 1;
            if rem > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }
}

fn check_field(d: &BigInt) -> Result<()> {
    if sqrt_exact(d).is_some() {
        return Err(Error::Domain("d must not be a perfect square"));
    }
    Ok(())
}

fn is_one_mod4(d: &BigInt) -> bool {
    d.mod_floor(&BigInt::from(4)) == BigInt::one()
}

/// Minimal positive solution of `t^2 - d u^2 = +-4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub t: BigInt,
    pub u: BigInt,
    /// The right-hand side: +4 or -4.
    pub sign: i8,
}

impl PellSolution {
    /// The unit `(t + u*sqrt(d))/2` in Q(sqrt(d)).
    pub fn unit(&self, d: &BigInt) -> Result<QuadInt> {
        QuadInt::new(self.t.clone(), self.u.clone(), d.clone())
    }
}

/// Fundamental `+-1` solution of `h^2 - d0 k^2 = +-1` for squarefree-ish
/// nonsquare d0, by testing successive continued-fraction convergents.
fn pell1_fundamental(d0: &BigInt) -> (BigInt, BigInt, i8) {
    let a0 = d0.sqrt();
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        let val = &h * &h - d0 * &k * &k;
        if val == BigInt::one() {
            return (h, k, 1);
        }
        if val == BigInt::from(-1) {
            return (h, k, -1);
        }
        p = &a * &q - &p;
        q = (d0 - &p * &p) / &q;
        a = (&p + &a0).div_floor(&q);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = core::mem::replace(&mut h, h_next);
        k_prev = core::mem::replace(&mut k, k_next);
    }
}

/// Minimal positive `(t, u)` with `t^2 - d u^2 = +-4`, preferring the
/// sign -4 when both signs admit a solution with the same `u`. The
/// result generates the unit group relevant to the sequences.
pub fn pell4_min(d: &BigInt) -> Result<PellSolution> {
    if !d.is_positive() {
        return Err(Error::Domain("pell4_min needs d > 0"));
    }
    check_field(d)?;
    let d0 = intkit::core(d)?;
    let m = sqrt_exact(&(d / &d0)).expect("d/core(d) is a square");

    // Fundamental +-4 solution over the squarefree kernel d0.
    let (h, k, sign1) = pell1_fundamental(&d0);
    let mut x0 = &h * 2;
    let mut y0 = &k * 2;
    let mut sign0 = sign1;
    if is_one_mod4(&d0) {
        // A half-integer unit eps with eps^3 = h + k*sqrt(d0) may exist;
        // then t(t^2 - 3*sigma) = 2h pins t near cbrt(2h).
        let two_h: BigInt = &h * 2;
        let c = two_h.cbrt();
        'cand: for delta in -1i64..=1 {
            let t = &c + BigInt::from(delta);
            if !t.is_positive() {
                continue;
            }
            let sigma = BigInt::from(sign1);
            if &t * (&t * &t - &sigma * 3) != two_h {
                continue;
            }
            let usq = (&t * &t - &sigma * 4) / &d0;
            if &usq * &d0 + &sigma * 4 != &t * &t {
                continue 'cand;
            }
            if let Some(u) = sqrt_exact(&usq) {
                if u.is_positive() {
                    x0 = t;
                    y0 = u;
                    sign0 = sign1;
                    break;
                }
            }
        }
    }

    // Walk powers of the fundamental unit until the sqrt(d0) coordinate
    // is divisible by m = sqrt(d/d0).
    let base = QuadInt::new(x0.clone(), y0.clone(), d0.clone())?;
    let mut cur = base.clone();
    let mut sign_cur = sign0;
    let guard = 4 * m.clone() * m.clone() + BigInt::from(64);
    let mut steps = BigInt::zero();
    loop {
        let (x_n, y_n) = cur.coords();
        if y_n.mod_floor(&m).is_zero() {
            let mut t = x_n.clone();
            let u = y_n / &m;
            let mut sign = sign_cur;
            // Same-u preference for -4: only (t,u,d) = (3,1,5) up-converts.
            if sign == 1 {
                if let Some(t_minus) = sqrt_exact(&(&t * &t - BigInt::from(8))) {
                    if t_minus.is_positive() {
                        t = t_minus;
                        sign = -1;
                    }
                }
            }
            return Ok(PellSolution { t, u, sign });
        }
        cur = cur.mul(&base)?;
        sign_cur *= sign0;
        steps += 1;
        if steps > guard {
            return Err(Error::InternalInvariant(
                "pell4_min power walk did not close",
            ));
        }
    }
}

/// The field's fundamental unit written over `sqrt(d)`, when that is
/// possible: for `d = m^2 d0` with `d0` squarefree, the minimal
/// `(X, Y)` with `X^2 - d0 Y^2 = +-4` yields `(t, u) = (X, Y/m)` only
/// if `m | Y`. Non-squarefree `d` whose field unit lives in a smaller
/// order than `Z[sqrt d]` return `None`; [`pell4_min`] would continue
/// to a power of the unit instead.
pub fn pell4_field(d: &BigInt) -> Result<Option<PellSolution>> {
    if !d.is_positive() {
        return Err(Error::Domain("pell4_field needs d > 0"));
    }
    check_field(d)?;
    let d0 = intkit::core(d)?;
    let m = sqrt_exact(&(d / &d0)).expect("d/core(d) is a square");
    let sol = pell4_min(&d0)?;
    if sol.u.mod_floor(&m).is_zero() {
        Ok(Some(PellSolution {
            t: sol.t,
            u: &sol.u / &m,
            sign: sol.sign,
        }))
    } else {
        Ok(None)
    }
}

/// All `+-4` solutions over d with `u <= u_bound`, ascending; brute
/// force, used as an oracle against [`pell4_min`].
pub fn pell4_brute(d: &BigInt, u_bound: u64) -> Vec<PellSolution> {
    let mut out = Vec::new();
    for u in 1..=u_bound {
        let ub = BigInt::from(u);
        let du2 = d * &ub * &ub;
        for (rhs, sign) in [(BigInt::from(-4), -1i8), (BigInt::from(4), 1i8)] {
            let t2 = &du2 + rhs;
            if !t2.is_positive() {
                continue;
            }
            if let Some(t) = sqrt_exact(&t2) {
                if t.is_positive() {
                    out.push(PellSolution {
                        t,
                        u: ub.clone(),
                        sign,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(h: i64, k: i64, d: i64) -> QuadInt {
        QuadInt::new(BigInt::from(h), BigInt::from(k), BigInt::from(d)).unwrap()
    }

    #[test]
    fn mul_examples() {
        // (1+sqrt2)^2 = 3 + 2 sqrt2
        let x = qi(2, 2, 2);
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq, qi(6, 4, 2));
        // ((6+2*sqrt10)/2)^2 = 19 + 6 sqrt10
        let y = qi(6, 2, 10);
        assert_eq!(y.mul(&y).unwrap(), qi(38, 12, 10));
        let one = QuadInt::one(BigInt::from(2)).unwrap();
        assert_eq!(x.mul(&one).unwrap(), x);
        assert_eq!(x.mul(&qi(2, 0, 3)).unwrap_err(), Error::MismatchedField);
    }

    #[test]
    fn norm_trace_conj() {
        // (2+2*sqrt2)/2 = 1+sqrt2 has norm -1
        assert_eq!(qi(2, 2, 2).norm(), BigInt::from(-1));
        // 1 + 9 sqrt2 has norm 1 - 162 = -161
        assert_eq!(qi(2, 18, 2).norm(), BigInt::from(-161));
        assert_eq!(qi(2, 18, 2).trace(), BigInt::from(2));
        let x = qi(3, 1, 5);
        assert_eq!(x.conj().conj(), x);
        // Tr(eps^2) = (t^2 + d u^2)/2 for eps = (t + u sqrt d)/2.
        let eps = qi(2, 2, 2);
        assert_eq!(eps.power(2).unwrap().trace(), BigInt::from(6));
    }

    #[test]
    fn power_examples() {
        let x = qi(2, 2, 2); // 1+sqrt2
        let p6 = x.power(6).unwrap();
        let mut acc = QuadInt::one(BigInt::from(2)).unwrap();
        for _ in 0..6 {
            acc = acc.mul(&x).unwrap();
        }
        assert_eq!(p6, acc);
        assert_eq!(p6, qi(198, 140, 2)); // 99 + 70 sqrt2
        assert!(x.power(0).unwrap().is_one());
        assert_eq!(x.power(-1).unwrap(), qi(-2, 2, 2)); // -1+sqrt2
        assert!(qi(6, 2, 2).power(-1).is_err()); // 3+sqrt2 is not a unit
    }

    #[test]
    fn pell4_examples() {
        let s = pell4_min(&BigInt::from(5)).unwrap();
        assert_eq!((s.t, s.u, s.sign), (BigInt::one(), BigInt::one(), -1));
        let s = pell4_min(&BigInt::from(2)).unwrap();
        assert_eq!((s.t, s.u, s.sign), (BigInt::from(2), BigInt::from(2), -1));
        let s = pell4_min(&BigInt::from(40)).unwrap();
        assert_eq!((s.t, s.u, s.sign), (BigInt::from(6), BigInt::one(), -1));
        assert!(pell4_min(&BigInt::from(9)).is_err());
    }

    #[test]
    fn pell4_is_unit_and_minimal_small_d() {
        for d in 2i64..=120 {
            let db = BigInt::from(d);
            if sqrt_exact(&db).is_some() {
                continue;
            }
            let s = pell4_min(&db).unwrap();
            let eps = s.unit(&db).unwrap();
            let n = eps.norm();
            assert!(n.magnitude() == &1u32.into(), "norm +-1 for d={d}");
            assert_eq!(
                &s.t * &s.t - &db * &s.u * &s.u,
                BigInt::from(4 * s.sign as i64)
            );
            let brute = pell4_brute(&db, 10_000);
            match brute.first() {
                Some(first) => {
                    assert_eq!(s.u, first.u, "minimal u for d={d}");
                    assert_eq!(s.sign, first.sign, "sign preference for d={d}");
                }
                // e.g. d=94, whose fundamental unit has u = 442128.
                None => assert!(s.u > BigInt::from(10_000), "d={d}"),
            }
        }
    }

    #[test]
    fn large_fundamental_unit() {
        // The half-integer unit (39 + 5 sqrt 61)/2 cubes to the huge
        // fundamental solution of x^2 - 61 y^2 = +-1.
        let s = pell4_min(&BigInt::from(61)).unwrap();
        assert_eq!((s.t, s.u, s.sign), (BigInt::from(39), BigInt::from(5), -1));
        for d in [94u32, 661] {
            let db = BigInt::from(d);
            let s = pell4_min(&db).unwrap();
            assert_eq!(
                &s.t * &s.t - &db * &s.u * &s.u,
                BigInt::from(4 * s.sign as i64)
            );
            assert!(s.u > BigInt::from(10_000));
        }
    }
}
