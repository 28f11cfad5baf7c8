//! The sequences `x_k + y_k*sqrt(d) = alpha * eps^(step*k)` with
//! `alpha = a + b0*sqrt(d)`, their square scans, the proved lower
//! bounds on `y_k` and the cutoff index K on the negative branch.
//!
//! Half-integer values never leave this module as floats: elements are
//! carried as numerator pairs `(2x, 2y)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::intkit::{sqrt_exact, square_candidate};
use crate::quadratic::QuadInt;
use crate::{Error, Result};

/// Whether the sequence steps through `eps^k` or `eps^(2k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    One,
    Two,
}

impl Step {
    pub fn factor(self) -> i64 {
        match self {
            Step::One => 1,
            Step::Two => 2,
        }
    }
}

/// Parameters `(a, b0, d, t, u, step)` defining `alpha = a + b0*sqrt(d)`
/// and the unit `eps = (t + u*sqrt(d))/2`. In the squares application
/// `b0 = b^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqParams {
    pub a: BigInt,
    pub b0: BigInt,
    pub d: BigInt,
    pub t: BigInt,
    pub u: BigInt,
    pub step: Step,
}

impl SeqParams {
    pub fn new(a: BigInt, b0: BigInt, d: BigInt, t: BigInt, u: BigInt, step: Step) -> Result<Self> {
        if !a.is_positive() || !b0.is_positive() || !t.is_positive() || !u.is_positive() {
            return Err(Error::Domain("sequence parameters must be positive"));
        }
        if sqrt_exact(&d).is_some() || !d.is_positive() {
            return Err(Error::Domain("d must be a positive nonsquare"));
        }
        let disc = &t * &t - &d * &u * &u;
        if disc.magnitude() != &4u32.into() {
            return Err(Error::Domain(
                "(t + u sqrt d)/2 must satisfy t^2 - d u^2 = +-4",
            ));
        }
        Ok(SeqParams {
            a,
            b0,
            d,
            t,
            u,
            step,
        })
    }

    pub fn from_u64(a: u64, b0: u64, d: u64, t: u64, u: u64, step: Step) -> Result<Self> {
        Self::new(a.into(), b0.into(), d.into(), t.into(), u.into(), step)
    }

    /// `alpha = a + b0*sqrt(d)` as a quadratic integer.
    pub fn alpha(&self) -> QuadInt {
        QuadInt::from_integers(&self.a, &self.b0, self.d.clone()).expect("validated params")
    }

    /// The unit `eps = (t + u*sqrt(d))/2`.
    pub fn eps(&self) -> QuadInt {
        QuadInt::new(self.t.clone(), self.u.clone(), self.d.clone()).expect("validated params")
    }

    /// `N_alpha = a^2 - b0^2 d`.
    pub fn n_alpha(&self) -> BigInt {
        &self.a * &self.a - &self.b0 * &self.b0 * &self.d
    }

    /// `N_eps = (t^2 - d u^2)/4`, either 1 or -1.
    pub fn n_eps(&self) -> i8 {
        if (&self.t * &self.t - &self.d * &self.u * &self.u).is_positive() {
            1
        } else {
            -1
        }
    }

    /// `N(eps^k) = N_eps^k`.
    pub fn n_eps_pow(&self, k: i64) -> i8 {
        if self.n_eps() == -1 && k.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    /// `N(eps^(step*k))`, the norm of the full multiplier at index k.
    pub fn n_eps_at(&self, k: i64) -> i8 {
        self.n_eps_pow(self.step.factor() * k)
    }
}

/// An index with integer square `y_k`, its root and the companion `x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareHit {
    pub k: i64,
    pub y: BigInt,
    pub root: BigInt,
    pub x: BigInt,
}

/// `alpha * eps^(step*k)` as a quadratic integer (coordinates `2x, 2y`).
pub fn element_quad(p: &SeqParams, k: i64) -> QuadInt {
    let e = p.eps().power(p.step.factor() * k).expect("eps is a unit");
    p.alpha().mul(&e).expect("same field")
}

/// `(x_k, y_k)` as exact rationals (denominators 1 or 2).
pub fn element(p: &SeqParams, k: i64) -> (BigRational, BigRational) {
    let q = element_quad(p, k);
    let (h, kk) = q.coords();
    let two = BigInt::from(2);
    (
        BigRational::new(h.clone(), two.clone()),
        BigRational::new(kk.clone(), two),
    )
}

/// Tries to read integer `(x_k, y_k)` off a sequence element.
pub fn element_integers(p: &SeqParams, k: i64) -> Option<(BigInt, BigInt)> {
    let q = element_quad(p, k);
    let x = q.rational_part_integer()?;
    let y = q.surd_part_integer()?;
    Some((x, y))
}

/// Outcome of a window scan: hits in ascending `k` plus the number of
/// distinct square values (repeated values count once).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareScan {
    pub hits: Vec<SquareHit>,
    pub distinct: usize,
}

/// All `k` in `[-window, window]` where `y_k` is a positive integer
/// perfect square.
pub fn scan_squares(p: &SeqParams, window: u32) -> Result<SquareScan> {
    if window == 0 {
        return Err(Error::Domain("window must be at least 1"));
    }
    let w = window as i64;
    let mut hits = Vec::new();
    let start = element_quad(p, -w);
    let stride = p.eps().power(p.step.factor()).expect("unit");
    let mut cur = start;
    for k in -w..=w {
        collect_hit(k, &cur, &mut hits);
        if k < w {
            cur = cur.mul(&stride).expect("same field");
        }
    }
    let mut values: Vec<&BigInt> = hits.iter().map(|h| &h.y).collect();
    values.sort();
    values.dedup();
    let distinct = values.len();
    Ok(SquareScan { hits, distinct })
}

fn collect_hit(k: i64, q: &QuadInt, hits: &mut Vec<SquareHit>) {
    let (h2, k2) = q.coords();
    if k2.is_odd() || !k2.is_positive() {
        return;
    }
    let y: BigInt = k2 / 2;
    if !square_candidate(y.magnitude()) {
        return;
    }
    if let Some(root) = sqrt_exact(&y) {
        let x = h2 / 2;
        debug_assert!(h2.is_even(), "integer y forces integer x");
        hits.push(SquareHit { k, y, root, x });
    }
}

/// The sharpest proved growth factor for the y lower bound:
/// `d u^2` when `N_eps = 1`, else `5 d u^2 / 8` unless
/// `(d,t,u) = (5,1,1)`, where only `2 d u^2 / 5` holds.
fn growth_factor(p: &SeqParams) -> BigRational {
    let du2 = BigRational::from(&p.d * &p.u * &p.u);
    if p.n_eps() == 1 {
        du2
    } else if p.d == BigInt::from(5) && p.t.is_one() && p.u.is_one() {
        du2 * BigRational::new(2.into(), 5.into())
    } else {
        du2 * BigRational::new(5.into(), 8.into())
    }
}

/// Proved lower bound for `y_k` (step 2, `N_alpha < 0`):
/// `(|N_alpha| u^2 / (4 b0)) * F^(k-1)` for `k > 0` and
/// `(|N_alpha| u^2 / (4 b0)) * F^max(0, K-k)` for `k < 0`, with F the
/// sharpest applicable growth factor.
pub fn lower_bound_y(p: &SeqParams, k: i64) -> Result<BigRational> {
    if p.step != Step::Two {
        return Err(Error::Domain("lower bounds are only proved for step 2"));
    }
    if k == 0 {
        return Err(Error::Domain("lower_bound_y needs k != 0"));
    }
    let n_alpha = p.n_alpha();
    if !n_alpha.is_negative() {
        return Err(Error::Domain("lower bounds need N_alpha < 0"));
    }
    let base = BigRational::new(n_alpha.abs() * &p.u * &p.u, BigInt::from(4) * &p.b0);
    let factor = growth_factor(p);
    let e = if k > 0 {
        (k - 1) as u64
    } else {
        let cutoff = k_cutoff(p)?;
        (cutoff - k).max(0) as u64
    };
    let mut acc = base;
    for _ in 0..e {
        acc *= factor.clone();
    }
    Ok(acc)
}

/// Largest negative `K` with `y_K > b0`, found by descending scan
/// (step 2, `N_alpha < 0`). Monotonicity past K makes the first such
/// index the answer; the hard stop at -64 is unreachable in valid
/// inputs and guards against parameter bugs.
pub fn k_cutoff(p: &SeqParams) -> Result<i64> {
    if p.step != Step::Two {
        return Err(Error::Domain("K is only defined for step 2"));
    }
    if !p.n_alpha().is_negative() {
        return Err(Error::Domain("K needs N_alpha < 0"));
    }
    let stride = p.eps().power(-2).expect("unit");
    let mut cur = element_quad(p, -1);
    let threshold = &p.b0 * 2;
    let mut k = -1i64;
    loop {
        let (_, y2) = cur.coords();
        if y2 > &threshold {
            return Ok(k);
        }
        k -= 1;
        if k < -64 {
            return Err(Error::InternalInvariant(
                "K search passed the -64 hard stop",
            ));
        }
        cur = cur.mul(&stride).expect("same field");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: u64, b0: u64, d: u64, t: u64, u: u64, step: Step) -> SeqParams {
        SeqParams::from_u64(a, b0, d, t, u, step).unwrap()
    }

    #[test]
    fn element_examples() {
        // Table-row sequence: alpha = 1 + 9 sqrt2, eps = 1 + sqrt2.
        let p = params(1, 9, 2, 2, 2, Step::Two);
        let (x0, y0) = element_integers(&p, 0).unwrap();
        assert_eq!((x0, y0), (BigInt::one(), BigInt::from(9)));
        let (_, y3) = element_integers(&p, 3).unwrap();
        assert_eq!(y3, BigInt::from(961));

        // y_1 = (n^2-3)^2/4 family at n=5.
        let p = params(4, 1, 37, 12, 2, Step::Two);
        let (_, y1) = element_integers(&p, 1).unwrap();
        assert_eq!(y1, BigInt::from(121));

        let p = params(2, 1, 40, 6, 1, Step::Two);
        let (x1, y1) = element_integers(&p, 1).unwrap();
        assert_eq!((x1, y1), (BigInt::from(158), BigInt::from(25)));
    }

    #[test]
    fn element_matches_recurrence() {
        let p = params(3, 4, 3, 4, 2, Step::Two);
        // u_{k+1} = Tr(eps^2) u_k - u_{k-1}
        let tr: BigInt = (&p.t * &p.t + &p.d * &p.u * &p.u) / 2;
        for k in -6..6i64 {
            let (xm, ym) = element(&p, k - 1);
            let (x0, y0) = element(&p, k);
            let (xp, yp) = element(&p, k + 1);
            let trr = BigRational::from(tr.clone());
            assert_eq!(xp, trr.clone() * x0.clone() - xm);
            assert_eq!(yp, trr * y0 - ym);
        }
    }

    #[test]
    fn step1_recurrence_uses_trace_and_norm() {
        let p = params(1, 1, 10, 6, 2, Step::One);
        // u_{k+1} = t u_k - N_eps u_{k-1}
        let n_eps = BigRational::from(BigInt::from(p.n_eps()));
        let t = BigRational::from(p.t.clone());
        for k in -4..4i64 {
            let (_, ym) = element(&p, k - 1);
            let (_, y0) = element(&p, k);
            let (_, yp) = element(&p, k + 1);
            assert_eq!(yp, t.clone() * y0 - n_eps.clone() * ym);
        }
    }

    #[test]
    fn scan_table_row_one() {
        let p = params(1, 9, 2, 2, 2, Step::Two);
        let scan = scan_squares(&p, 80).unwrap();
        let got: Vec<(i64, i64)> = scan
            .hits
            .iter()
            .map(|h| (h.k, h.root.clone().try_into().unwrap()))
            .collect();
        assert_eq!(got, [(-5, 167), (-1, 5), (0, 3), (3, 31)]);
        assert_eq!(scan.distinct, 4);
    }

    #[test]
    fn scan_step1_example() {
        let p = params(1, 1, 10, 6, 2, Step::One);
        let scan = scan_squares(&p, 3).unwrap();
        let got: Vec<(i64, i64)> = scan
            .hits
            .iter()
            .map(|h| (h.k, h.root.clone().try_into().unwrap()))
            .collect();
        assert_eq!(got, [(0, 1), (1, 2), (2, 5)]);
    }

    #[test]
    fn scan_reports_x_consistent_with_norm() {
        let p = params(2, 1, 40, 6, 1, Step::Two);
        let scan = scan_squares(&p, 1).unwrap();
        let got: Vec<(i64, i64, i64)> = scan
            .hits
            .iter()
            .map(|h| {
                (
                    h.k,
                    h.y.clone().try_into().unwrap(),
                    h.root.clone().try_into().unwrap(),
                )
            })
            .collect();
        assert_eq!(got, [(0, 1, 1), (1, 25, 5)]);
        for h in &scan.hits {
            let lhs = &h.x * &h.x - &p.d * &h.y * &h.y;
            let expect = p.n_alpha() * BigInt::from(p.n_eps_at(h.k) as i64);
            assert_eq!(lhs, expect);
            assert_eq!(&h.root * &h.root, h.y);
        }
    }

    #[test]
    fn lower_bound_examples() {
        let p = params(2, 1, 40, 6, 1, Step::Two);
        let lb = lower_bound_y(&p, 1).unwrap();
        assert_eq!(lb, BigRational::from(BigInt::from(9)));
        let (_, y1) = element_integers(&p, 1).unwrap();
        assert!(BigRational::from(y1) >= lb);

        // (5,1,1) keeps the weaker 2du^2/5 = 2 factor.
        let p = params(1, 1, 5, 1, 1, Step::Two);
        let lb2 = lower_bound_y(&p, 2).unwrap();
        let lb1 = lower_bound_y(&p, 1).unwrap();
        assert_eq!(lb2, lb1 * BigRational::from(BigInt::from(2)));

        assert!(lower_bound_y(&params(7, 1, 5, 1, 1, Step::Two), 1).is_err()); // N_alpha = 44 > 0
    }

    #[test]
    fn k_cutoff_examples() {
        let p = params(3, 1, 13, 3, 1, Step::Two);
        assert_eq!(k_cutoff(&p).unwrap(), -2);
        let (_, ym2) = element_integers(&p, -2).unwrap();
        assert_eq!(ym2, BigInt::from(10));

        let p = params(1, 1, 2, 2, 2, Step::Two);
        assert_eq!(k_cutoff(&p).unwrap(), -2);
        let (_, ym2) = element_integers(&p, -2).unwrap();
        assert_eq!(ym2, BigInt::from(5));

        let p = params(1, 9, 2, 2, 2, Step::Two);
        assert_eq!(k_cutoff(&p).unwrap(), -1);
    }

    #[test]
    fn monotone_after_cutoff() {
        for (a, b0, d, t, u) in [(1, 9, 2, 2, 2), (3, 1, 13, 3, 1), (2, 1, 40, 6, 1)] {
            let p = params(a, b0, d, t, u, Step::Two);
            let cutoff = k_cutoff(&p).unwrap();
            let mut prev = element(&p, cutoff + 1).1;
            for j in 0..6 {
                let cur = element(&p, cutoff - j).1;
                assert!(cur > prev, "descending branch grows");
                prev = cur;
            }
            let mut prev = element(&p, 0).1;
            for k in 1..8 {
                let cur = element(&p, k).1;
                assert!(cur > prev, "ascending branch grows");
                prev = cur;
            }
        }
    }
}
