//! Hypergeometric approximants to quartic roots of unit complex
//! numbers, their integrality denominators, and the approximation
//! bounds `(E, Q, k0, l0, r0)` derived from them.
//!
//! With `nu = m/4`, the polynomials are
//! `X_{m,4,r}(z) = 2F1(-r-nu, -r; 1-nu; z)` and
//! `Y_{m,4,r}(z) = z^r X_{m,4,r}(1/z)`; the remainder
//! `R_{m,4,r}(z) = (z-1)^(2r+1) * C_r * 2F1(r+1-nu, r+1; 2r+2; 1-z)`
//! satisfies `omega^nu Y - X = R` on `|omega - 1| < 1`. Applied to
//! `omega_k = (x_k + N sqrt(N_alpha)) / (x_k - N sqrt(N_alpha))`, the
//! scaled values `p_r, q_r` become algebraic integers of
//! `Q(sqrt(core(N_alpha)))` up to the factor `g^r`; this module keeps
//! the `Q(sqrt t')` numerators exact and carries `g^2` as an exact
//! rational so that non-degeneracy checks never round.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::hp::{atan, embed_quad, exp_fraction, Complex, Real};
use crate::intkit::{self, sqrt_exact};
use crate::quadratic::QuadInt;
use crate::representation::{g_quantities, GSet};
use crate::sequence::SeqParams;
use crate::{Error, Result};

/// Dense polynomial with exact rational coefficients, degree-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficients of `p(1 - w)` as a polynomial in `w`.
    pub fn shift_one_minus(&self) -> RatPoly {
        let n = self.coeffs.len();
        let mut out = alloc::vec![BigRational::zero(); n];
        // binomial(i, j) running row
        for (i, a) in self.coeffs.iter().enumerate() {
            let mut binom = BigRational::one();
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                let signed = if j % 2 == 0 { a.clone() } else { -a.clone() };
                *slot += signed * &binom;
                binom *= BigRational::new(BigInt::from(i - j), BigInt::from(j + 1));
            }
        }
        RatPoly { coeffs: out }
    }
}

/// `X_{m,4,r}`: the terminating 2F1 series, exact.
pub fn xpoly(r: u32, m: u8) -> Result<RatPoly> {
    if m != 1 && m != 3 {
        return Err(Error::Domain("m must be 1 or 3"));
    }
    let mut coeffs = Vec::with_capacity(r as usize + 1);
    let mut a = BigRational::one();
    coeffs.push(a.clone());
    for j in 0..r as i64 {
        // a_{j+1} = a_j * (-r-nu+j)(-r+j) / ((1-nu+j)(j+1)), nu = m/4.
        let num1 = BigRational::new(BigInt::from(4 * (j - r as i64) - m as i64), BigInt::from(4));
        let num2 = BigRational::from(BigInt::from(j - r as i64));
        let den1 = BigRational::new(BigInt::from(4 * (1 + j) - m as i64), BigInt::from(4));
        let den2 = BigRational::from(BigInt::from(j + 1));
        a = a * num1 * num2 / (den1 * den2);
        coeffs.push(a.clone());
    }
    Ok(RatPoly { coeffs })
}

/// `Y_{m,4,r}(z) = z^r X_{m,4,r}(1/z)`: coefficient reversal.
pub fn ypoly(r: u32, m: u8) -> Result<RatPoly> {
    let mut p = xpoly(r, m)?;
    p.coeffs.reverse();
    Ok(p)
}

/// Integer data of `D_{4,r} X_{1,4,r}(1-w)`, reused by the denominator
/// computation and the constant sweep: `D` and the absolute
/// coefficients `|D c_j|` tagged with their degree `j`.
///
/// Only `m = 1` enters: the approximants are built from `X_{1,4,r}`
/// alone, and pooling `m = 3` would shrink the shared content below
/// what the `e^1.68`-normalized bound requires (its maximum at `r = 3`
/// sits at 0.824.. against the cap 0.83 precisely for the `m = 1`
/// quantities).
pub struct OneMinusBasis {
    pub d: BigInt,
    pub terms: Vec<(u32, BigInt)>,
}

pub fn one_minus_basis(r: u32) -> OneMinusBasis {
    let poly = xpoly(r, 1).expect("m=1");
    let mut d = BigInt::one();
    for c in &poly.coeffs {
        d = d.lcm(c.denom());
    }
    // Integer binomial transform of the D-scaled coefficients; signs
    // are irrelevant to the gcds downstream.
    let ints: Vec<BigInt> = poly
        .coeffs
        .iter()
        .map(|c| (c * BigRational::from(d.clone())).to_integer())
        .collect();
    let mut out = alloc::vec![BigInt::zero(); ints.len()];
    for (i, a) in ints.iter().enumerate() {
        let mut binom = BigInt::one();
        for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
            *slot += a * &binom;
            binom = binom * BigInt::from(i - j) / BigInt::from(j + 1);
        }
    }
    let terms = out
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (j as u32, v.abs()))
        .collect();
    OneMinusBasis { d, terms }
}

/// `(D_{4,r}, N_{d',4,r})`: the smallest `D` with `D X_{1,4,r} in Z[x]`
/// and the largest `N` with `(D/N) X_{1,4,r}(1 - sqrt(d') x)` having
/// coordinates in `Z[sqrt(core(d'))]`.
pub fn denominators(r: u32, dprime: &BigInt) -> Result<(BigInt, BigInt)> {
    if dprime.is_zero() {
        return Err(Error::Domain("d' must be nonzero"));
    }
    let basis = one_minus_basis(r);
    Ok((basis.d.clone(), n_from_basis(&basis, dprime)?))
}

fn n_from_basis(basis: &OneMinusBasis, dprime: &BigInt) -> Result<BigInt> {
    let core_d = intkit::core(dprime)?;
    let s = sqrt_exact(&(dprime / &core_d)).expect("d'/core is a square");
    let abs_d = dprime.abs();
    let mut n = BigInt::zero();
    for (j, c) in &basis.terms {
        let factor = if j % 2 == 0 {
            abs_d.pow(j / 2)
        } else {
            abs_d.pow((j - 1) / 2) * &s
        };
        n = n.gcd(&(c * factor));
        if n.is_one() {
            break;
        }
    }
    Ok(n)
}

/// Shared geometry of one sequence index: the algebraic integer
/// `u = x_k + N_(eps^k) sqrt(N_alpha)` over `t' = core(N_alpha)` and
/// its gcd quantities.
pub struct OmegaSite {
    pub x: BigInt,
    pub y: BigInt,
    pub n_alpha: BigInt,
    pub t_prime: BigInt,
    pub u_quad: QuadInt,
    pub gset: GSet,
}

pub fn omega_site(p: &SeqParams, k: i64) -> Result<OmegaSite> {
    let n_alpha = p.n_alpha();
    if !n_alpha.is_negative() {
        return Err(Error::Domain("the omega machinery needs N_alpha < 0"));
    }
    let (x, y) = crate::sequence::element_integers(p, k)
        .ok_or(Error::Domain("x_k and y_k must be integers"))?;
    let t_prime = intkit::core(&n_alpha)?;
    let m = sqrt_exact(&(&n_alpha / &t_prime)).expect("n/core is a square");
    let sign = BigInt::from(p.n_eps_pow(k));
    let u1: BigInt = &x * 2;
    let u2: BigInt = &sign * &m * 2;
    let gset = g_quantities(&t_prime, &u1, &u2)?;
    let u_quad = QuadInt::new(u1, u2, t_prime.clone())?;
    Ok(OmegaSite {
        x,
        y,
        n_alpha,
        t_prime,
        u_quad,
        gset,
    })
}

impl OmegaSite {
    /// `|omega_k - 1| < 1`, decided exactly: `x_k^2 > 3 |N_alpha|`.
    pub fn omega_near_one(&self) -> bool {
        &self.x * &self.x > BigInt::from(3) * self.n_alpha.abs()
    }

    /// `omega = u / sigma(u) = u^2 / N(u)` embedded at `bits`.
    pub fn omega(&self, bits: u32) -> Complex {
        let u_sq = self.u_quad.mul(&self.u_quad).expect("same field");
        let norm = self.u_quad.norm();
        embed_quad(&u_sq, bits).scale_ratio(&BigRational::new(BigInt::one(), norm))
    }

    /// `|phi_k| = 2 atan(sqrt|N_alpha| / |x_k|)`, the argument of omega.
    pub fn phi_abs(&self, bits: u32) -> Real {
        let num = Real::from_bigint(&self.n_alpha.abs(), bits)
            .sqrt()
            .expect(">=0");
        let den = Real::from_bigint(&self.x.abs(), bits);
        atan(&num.div(&den)).mul_u64(2)
    }

    /// `g^r` as a real (handles half-integer powers of `g^2`).
    pub fn g_pow(&self, r: u32, bits: u32) -> Real {
        let gsq = &self.gset.gsq;
        let whole = gsq.pow((r / 2) as i32);
        let base = Real::from_ratio(&whole, bits);
        if r % 2 == 1 {
            base.mul(&Real::from_ratio(gsq, bits).sqrt().expect("g^2 > 0"))
        } else {
            base
        }
    }
}

/// One hypergeometric approximant pair: exact `Q(sqrt t')` numerators
/// with denominator `N * g^r`, plus the numeric residual
/// `q_r omega^(1/4) - p_r`.
pub struct ApproxPair {
    pub r: u32,
    pub p_num: QuadInt,
    pub q_num: QuadInt,
    /// `N_{d',4,r}`.
    pub den: BigInt,
    pub g_sq: BigRational,
    pub residual: Complex,
}

impl ApproxPair {
    /// Exact `|q_r|^2` (imaginary field: the complex modulus squared
    /// of a value is its norm).
    pub fn q_abs_sq(&self) -> BigRational {
        let (h, k) = self.q_num.coords();
        let modulus_sq =
            BigRational::new(h * h + self.q_num.field().abs() * k * k, BigInt::from(4));
        let gr = self.g_sq.pow(self.r as i32);
        modulus_sq / (BigRational::from(&self.den * &self.den) * gr)
    }

    pub fn q_abs(&self, bits: u32) -> Real {
        Real::from_ratio(&self.q_abs_sq(), bits)
            .sqrt()
            .expect(">= 0")
    }

    /// The approximant as a quadratic integer, when `g^r` is rational
    /// and divides the numerator exactly (odd `r` with nonsquare `g^2`
    /// lives in `sqrt(g^2) * Q(sqrt t')` instead and returns `None`).
    pub fn value_quadint(&self, num: &QuadInt) -> Option<QuadInt> {
        let gr = self.g_sq.pow(self.r as i32);
        // g^r rational iff r even or g^2 a rational square.
        let g_pow: BigRational = if self.r % 2 == 0 {
            self.g_sq.pow((self.r / 2) as i32)
        } else {
            let n = crate::intkit::sqrt_exact(gr.numer())?;
            let d = crate::intkit::sqrt_exact(gr.denom())?;
            BigRational::new(n, d)
        };
        let scale = BigRational::from(self.den.clone()) * g_pow;
        let (h, k) = num.coords();
        let hh = BigRational::from(h.clone()) / &scale;
        let kk = BigRational::from(k.clone()) / &scale;
        if !hh.is_integer() || !kk.is_integer() {
            return None;
        }
        QuadInt::new(hh.to_integer(), kk.to_integer(), num.field().clone()).ok()
    }

    pub fn p_quadint(&self) -> Option<QuadInt> {
        self.value_quadint(&self.p_num)
    }

    pub fn q_quadint(&self) -> Option<QuadInt> {
        self.value_quadint(&self.q_num)
    }

    /// Whether `p_r` and `q_r` are algebraic integers of `Q(sqrt t')`,
    /// checked on the squares `p_r^2, q_r^2` so that half-integer
    /// powers of `g` do not require leaving the field.
    pub fn algebraic_integers(&self) -> bool {
        let den_sq = BigRational::from(&self.den * &self.den) * self.g_sq.pow(self.r as i32);
        for num in [&self.p_num, &self.q_num] {
            let sq = num.mul(num).expect("same field");
            let (h, k) = sq.coords();
            let hh = BigRational::from(h.clone()) / &den_sq;
            let kk = BigRational::from(k.clone()) / &den_sq;
            if !hh.is_integer() || !kk.is_integer() {
                return false;
            }
            let q = QuadInt::new(hh.to_integer(), kk.to_integer(), num.field().clone());
            if q.is_err() {
                return false;
            }
        }
        true
    }
}

/// Exact non-degeneracy `p_r q_(r+1) != p_(r+1) q_r` (common positive
/// denominators cancel).
pub fn nondegenerate(a: &ApproxPair, b: &ApproxPair) -> Result<bool> {
    let lhs = a.p_num.mul(&b.q_num)?;
    let rhs = b.p_num.mul(&a.q_num)?;
    Ok(lhs != rhs)
}

fn magnitude_bits(q: &QuadInt) -> u32 {
    let (h, k) = q.coords();
    h.bits().max(k.bits()) as u32
}

/// Builds the pair `(p_r, q_r)` at index `k` and evaluates the residual
/// at the requested precision.
pub fn approx_pair(p: &SeqParams, k: i64, r: u32, bits: u32) -> Result<ApproxPair> {
    if bits < 64 {
        return Err(Error::Domain("precision below 64 bits"));
    }
    let site = omega_site(p, k)?;
    if site.y < BigInt::from(2) {
        return Err(Error::Domain("approximants need y_k >= 2"));
    }
    if !site.omega_near_one() {
        return Err(Error::Domain("|omega - 1| < 1 fails at this index"));
    }
    approx_pair_at(&site, r, bits)
}

pub fn approx_pair_at(site: &OmegaSite, r: u32, bits: u32) -> Result<ApproxPair> {
    let basis = one_minus_basis(r);
    let den = n_from_basis(&basis, &site.gset.dprime)?;
    let xp = xpoly(r, 1)?;
    let u = &site.u_quad;
    let sigma = u.conj();

    // Powers of u and sigma(u) up to r.
    let mut u_pows = Vec::with_capacity(r as usize + 1);
    let mut s_pows = Vec::with_capacity(r as usize + 1);
    let one = QuadInt::one(site.t_prime.clone())?;
    u_pows.push(one.clone());
    s_pows.push(one);
    for i in 1..=r as usize {
        u_pows.push(u_pows[i - 1].mul(u)?);
        s_pows.push(s_pows[i - 1].mul(&sigma)?);
    }

    // D sigma^r X(omega) = sum_j (D a_j) u^j sigma^(r-j); Y reverses.
    let mut p_num = QuadInt::one(site.t_prime.clone())?.scale(&BigInt::zero());
    let mut q_num = p_num.clone();
    for (j, a) in xp.coeffs.iter().enumerate() {
        let coeff = (a * BigRational::from(basis.d.clone())).to_integer();
        let term_p = u_pows[j].mul(&s_pows[r as usize - j])?.scale(&coeff);
        let term_q = u_pows[r as usize - j].mul(&s_pows[j])?.scale(&coeff);
        p_num = p_num.add(&term_p)?;
        q_num = q_num.add(&term_q)?;
    }

    // The cancellation q_r omega^(1/4) - p_r leaves a value around
    // l0 E^-r while the operands are around |q_r|; work at a precision
    // raised by the operand magnitude so the result still carries
    // `bits` good fractional bits.
    let work = bits + 64 + magnitude_bits(&p_num).max(magnitude_bits(&q_num));
    let omega = site.omega(work);
    let w4 = omega.quartic_root_principal();
    let scale = Real::from_bigint(&den, work).mul(&site.g_pow(r, work));
    let residual = embed_quad(&q_num, work)
        .mul(&w4)
        .sub(&embed_quad(&p_num, work))
        .div_real(&scale)
        .with_bits(bits);

    Ok(ApproxPair {
        r,
        p_num,
        q_num,
        den,
        g_sq: site.gset.gsq.clone(),
        residual,
    })
}

/// Numeric value of the scaled remainder
/// `R_r = (D/N) (sigma(u)/g)^r R_{1,4,r}(omega)`.
pub fn remainder(p: &SeqParams, k: i64, r: u32, bits: u32) -> Result<Complex> {
    let site = omega_site(p, k)?;
    if !site.omega_near_one() {
        return Err(Error::Domain("|omega - 1| < 1 fails at this index"));
    }
    remainder_at(&site, r, bits)
}

pub fn remainder_at(site: &OmegaSite, r: u32, bits: u32) -> Result<Complex> {
    let basis = one_minus_basis(r);
    let den = n_from_basis(&basis, &site.gset.dprime)?;
    let bits_in = bits;
    let bits = bits + 64 + (r + 1) * magnitude_bits(&site.u_quad);
    let omega = site.omega(bits);
    let one = Complex::one(bits);
    let z = one.sub(&omega); // 1 - omega, |z| < 1 here

    // C_r = prod_{j=0..r} (j + 1/4) / prod_{j=r+1..2r+1} j
    let mut c_r = BigRational::one();
    for j in 0..=r as i64 {
        c_r *= BigRational::new(BigInt::from(4 * j + 1), BigInt::from(4));
    }
    for j in (r as i64 + 1)..=(2 * r as i64 + 1) {
        c_r /= BigRational::from(BigInt::from(j));
    }

    // 2F1(r + 3/4, r + 1; 2r + 2; z) by direct summation.
    let mut term = Complex::one(bits);
    let mut sum = Complex::one(bits);
    let max_iter = 64 * bits as u64 + 16 * r as u64 + 64;
    let mut m = 0u64;
    loop {
        let num = BigRational::new(
            BigInt::from(4 * (r as i64 + m as i64) + 3) * BigInt::from(r as u64 + 1 + m),
            BigInt::from(4) * BigInt::from(2 * r as u64 + 2 + m) * BigInt::from(m + 1),
        );
        term = term.mul(&z).scale_ratio(&num);
        if term.re.is_zero() && term.im.is_zero() {
            break;
        }
        sum = sum.add(&term);
        m += 1;
        if m > max_iter {
            return Err(Error::InternalInvariant("2F1 tail did not converge"));
        }
    }

    // (omega - 1)^(2r+1) * C_r * sum * (D/N) * (sigma(u)/g)^r
    let om1 = omega.sub(&Complex::one(bits));
    let sigma_pow = embed_quad(&site.u_quad.conj(), bits).powi(r);
    let g_r = site.g_pow(r, bits);
    let d_over_n = BigRational::new(basis.d.clone(), den.clone());
    Ok(om1
        .powi(2 * r + 1)
        .mul(&sum)
        .mul(&sigma_pow)
        .div_real(&g_r)
        .scale_ratio(&(c_r * d_over_n))
        .with_bits(bits_in))
}

/// The bound set of one index: `E`, `Q`, `k0 = 0.89`, `l0 = 0.2 |phi|`
/// plus the computational proxies used by the small-d lemma.
pub struct BoundSet {
    pub e: Real,
    pub q: Real,
    pub k0: Real,
    pub ell0: Real,
    pub c: BigRational,
    pub gn_sq: BigRational,
    pub phi_abs: Real,
    /// `0.1832 |g|N (|x| + sqrt(x^2 - N_alpha)) / (2 |N_alpha|)`, the
    /// lower-bound proxy for `E` that the small-d scan reports.
    pub proxy_e_lb: Real,
    /// `21.12 sqrt(x^2 - N_alpha) / (|g|N)`, the proxy for `Q`.
    pub proxy_q_lb: Real,
}

impl BoundSet {
    pub fn e_exceeds_one(&self) -> bool {
        self.e > Real::one(self.e.bits())
    }

    pub fn q_exceeds_one(&self) -> bool {
        self.q > Real::one(self.q.bits())
    }
}

/// Builds the bound set for a `b0 = 1`, `N_alpha < 0` index with
/// integer `x_k, y_k > 1`.
pub fn bounds(p: &SeqParams, k: i64, c: &BigRational, bits: u32) -> Result<BoundSet> {
    if !p.b0.is_one() {
        return Err(Error::Domain("bounds need b0 = 1"));
    }
    if !(c > &BigRational::zero() && c < &BigRational::one()) {
        return Err(Error::Domain("c must lie in (0, 1)"));
    }
    let site = omega_site(p, k)?;
    if site.y <= BigInt::one() {
        return Err(Error::Domain("bounds need y_k > 1"));
    }
    Ok(bounds_at(&site, c, bits))
}

pub fn bounds_at(site: &OmegaSite, c: &BigRational, bits: u32) -> BoundSet {
    let gn_sq = site.gset.gn_sq();
    let gn = Real::from_ratio(&gn_sq, bits).sqrt().expect("positive");
    let d4 = exp_fraction(168, 100, bits);
    let abs_x = Real::from_bigint(&site.x.abs(), bits);
    let abs_na = Real::from_bigint(&site.n_alpha.abs(), bits);
    // sqrt(x^2 - N_alpha) = sqrt(d) y_k, exact under the root.
    let root_term = Real::from_bigint(&(&site.x * &site.x - &site.n_alpha), bits)
        .sqrt()
        .expect("x^2 - N_alpha > 0");
    let numer = abs_x.add(&root_term).mul_u64(2);
    let e = gn.mul(&numer).div(&d4.mul(&abs_na).mul_u64(4));
    let q = d4.mul(&numer).div(&gn);
    let phi_abs = site.phi_abs(bits);
    let ell0 = phi_abs.mul_ratio(&BigRational::new(1.into(), 5.into()));
    let k0 = Real::from_fraction(89, 100, bits);
    let c1832 = Real::from_fraction(1832, 10_000, bits);
    let proxy_e_lb = c1832
        .mul(&gn)
        .mul(&abs_x.add(&root_term))
        .div(&abs_na.mul_u64(2));
    let c2112 = Real::from_fraction(2112, 100, bits);
    let proxy_q_lb = c2112.mul(&root_term).div(&gn);
    BoundSet {
        e,
        q,
        k0,
        ell0,
        c: c.clone(),
        gn_sq,
        phi_abs,
        proxy_e_lb,
        proxy_q_lb,
    }
}

/// Smallest positive `r0` with `(Q - 1/E) l0 |q| / (Q - 1) < c E^(r0)`,
/// plus the two lower bounds of the approximation lemma:
/// `(1-c)/(k0 Q^(r0))` away from the `r0`-th approximant and
/// `(1-c/E)/(k0 Q^(r0+1))` on it.
pub fn r0_and_lowerbound(
    e: &Real,
    q: &Real,
    ell0: &Real,
    k0: &Real,
    c: &BigRational,
    q_abs: &Real,
) -> Result<(u32, Real, Real)> {
    let bits = e.bits();
    let one = Real::one(bits);
    if !(e > &one && q > &one) {
        return Err(Error::Domain("E and Q must exceed 1"));
    }
    if !(c > &BigRational::zero() && c < &BigRational::one()) {
        return Err(Error::Domain("c must lie in (0, 1)"));
    }
    let threshold = q.sub(&one.div(e)).mul(ell0).mul(q_abs).div(&q.sub(&one));
    let c_real = Real::from_ratio(c, bits);
    let mut r0 = 1u32;
    let mut e_pow = e.clone();
    while threshold >= c_real.mul(&e_pow) {
        r0 += 1;
        e_pow = e_pow.mul(e);
        if r0 > 100_000 {
            return Err(Error::InternalInvariant("r0 search did not terminate"));
        }
    }
    let one_minus_c = one.sub(&c_real);
    let lb_mismatch = one_minus_c.div(&k0.mul(&q.powi(r0)));
    let lb_match = one.sub(&c_real.div(e)).div(&k0.mul(&q.powi(r0 + 1)));
    Ok((r0, lb_mismatch, lb_match))
}

/// `c2 = (2 - c1^2) sqrt(4 - c1^2)`: the growth factor of
/// `|omega - z^4|` over `|omega^(1/4) - z|` for `0 < c1 < sqrt 2`.
pub fn omega_factor_inv(c1: &BigRational, bits: u32) -> Result<Real> {
    let two = BigRational::from(BigInt::from(2));
    if !(c1 > &BigRational::zero() && c1.pow(2) < two) {
        return Err(Error::Domain("c1 must lie in (0, sqrt 2)"));
    }
    let c1sq = Real::from_ratio(&c1.pow(2), bits);
    let two_r = Real::from_i64(2, bits);
    let four_r = Real::from_i64(4, bits);
    Ok(two_r
        .sub(&c1sq)
        .mul(&four_r.sub(&c1sq).sqrt().expect("4 - c1^2 > 0")))
}

/// `c3`: smallest positive real root of
/// `x^8 - 8 x^6 + 20 x^4 - 16 x^2 + c0^2` for `0 < c0 <= 2`, located by
/// bisection on the quartic in `w = x^2`.
pub fn omega_factors(c0: &BigRational, bits: u32) -> Result<Real> {
    let two = BigRational::from(BigInt::from(2));
    if !(c0 > &BigRational::zero() && c0 <= &two) {
        return Err(Error::Domain("c0 must lie in (0, 2]"));
    }
    let c0sq = Real::from_ratio(&c0.pow(2), bits);
    let eval = |w: &Real| -> Real {
        // w^4 - 8 w^3 + 20 w^2 - 16 w + c0^2
        let w2 = w.mul(w);
        let w3 = w2.mul(w);
        let w4 = w2.mul(&w2);
        w4.sub(&w3.mul_u64(8))
            .add(&w2.mul_u64(20))
            .sub(&w.mul_u64(16))
            .add(&c0sq)
    };
    // p(0) = c0^2 > 0; scan for the first sign change.
    let mut lo = Real::zero(bits);
    let mut hi = Real::zero(bits);
    let mut found = false;
    for i in 1..=256u64 {
        let w = Real::from_fraction(i as i64, 64, bits);
        if eval(&w).is_negative() {
            hi = w;
            lo = Real::from_fraction(i as i64 - 1, 64, bits);
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::InternalInvariant(
            "no sign change for the c3 quartic",
        ));
    }
    for _ in 0..bits + 2 {
        let mid = lo.add(&hi).div_u64(2);
        if eval(&mid).is_negative() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo.sqrt()
}

/// Index `j in {0..3}` minimizing `|omega^(1/4) - i^j z|`, ties to the
/// smaller `j`.
pub fn quartic_root_alignment(omega: &Complex, z: &Complex) -> u8 {
    let w4 = omega.quartic_root_principal();
    let mut best = 0u8;
    let mut best_dist = w4.sub(z).abs_sq();
    let mut cand = z.clone();
    for j in 1..4u8 {
        // multiply by i
        cand = Complex::new(cand.im.neg(), cand.re.clone());
        let dist = w4.sub(&cand).abs_sq();
        if dist < best_dist {
            best = j;
            best_dist = dist;
        }
    }
    best
}

/// Per-2-adic-class result of the denominator sweep: where each
/// squared normalized ratio peaks for `1 <= r <= r_max` and the peak
/// value as an exact rational interval (the `e^(3.36 r)` enclosure is
/// the only inexactness).
#[derive(Clone, Debug)]
pub struct SweepClass {
    pub v2: u32,
    pub argmax1: u32,
    pub max1_sq: (BigRational, BigRational),
    pub argmax2: u32,
    pub max2_sq: (BigRational, BigRational),
}

/// Sweeps `r <= r_max` for each 2-adic class of `d'`, computing the two
/// normalized ratios `GammaRatio_i(r) (D/N) N_(d',4)^r / e^(1.68 r)`
/// squared. The maxima certify the global constants 0.83 and 0.2.
/// `r = 0` normalizes to the trivial values and is excluded; the
/// r0 lower-bound machinery only ever consumes `r >= 1`.
pub fn denominator_sweep(r_max: u32) -> Vec<SweepClass> {
    // e^(3.36) enclosure: fixed-point mantissas at scale 2^EB with
    // directed rounding on the running powers.
    const EB: u32 = 320;
    let e336 = exp_fraction(336, 100, EB);
    let e_lo_m: BigInt = e336.raw() - 8;
    let e_hi_m: BigInt = e336.raw() + 8;
    let mut pow_lo: BigInt = BigInt::one() << EB;
    let mut pow_hi: BigInt = BigInt::one() << EB;

    // Unreduced running fractions for the two gamma ratios.
    let mut g1n = BigInt::one();
    let mut g1d = BigInt::one();
    let mut g2n = BigInt::one();
    let mut g2d = BigInt::from(4);

    struct Cand {
        r: u32,
        lo: (BigInt, BigInt),
        hi: (BigInt, BigInt),
    }
    let frac_gt = |a: &(BigInt, BigInt), b: &(BigInt, BigInt)| &a.0 * &b.1 > &b.0 * &a.1;
    let mut best: Vec<[Option<Cand>; 2]> = (0..7).map(|_| [None, None]).collect();

    for r in 0..=r_max {
        if r > 0 {
            g1n *= 4 * r;
            g1d *= 4 * r - 1;
            g2n *= 4 * r + 1;
            g2d *= 4 * r;
            pow_lo = (&pow_lo * &e_lo_m) >> EB;
            pow_hi = ((&pow_hi * &e_hi_m) >> EB) + 1;
        }
        let basis = one_minus_basis(r);
        if r == 0 {
            continue;
        }
        for v2 in 0..7u32 {
            let dprime = -(BigInt::one() << v2);
            let n = n_from_basis(&basis, &dprime).expect("nonzero d'");
            // Sound squared normalizer: the content relation pairs 2s,
            // so odd v2 only certifies the floor power.
            let two_pow: BigInt = BigInt::one() << (r * (2 * (v2 / 2)).min(6));
            for (slot, (gn, gd)) in [(&g1n, &g1d), (&g2n, &g2d)].iter().enumerate() {
                let base_n: BigInt = *gn * *gn * &basis.d * &basis.d * &two_pow;
                let base_d: BigInt = *gd * *gd * &n * &n;
                let cand = Cand {
                    r,
                    lo: (&base_n << EB, &base_d * &pow_hi),
                    hi: (&base_n << EB, &base_d * &pow_lo),
                };
                let cur = &mut best[v2 as usize][slot];
                let replace = match cur {
                    None => true,
                    Some(old) => frac_gt(&cand.lo, &old.hi),
                };
                if replace {
                    *cur = Some(cand);
                }
            }
        }
    }

    best.into_iter()
        .enumerate()
        .map(|(v2, [c1, c2])| {
            let c1 = c1.expect("r_max >= 1");
            let c2 = c2.expect("r_max >= 1");
            let to_rat = |(n, d): (BigInt, BigInt)| BigRational::new(n, d);
            SweepClass {
                v2: v2 as u32,
                argmax1: c1.r,
                max1_sq: (to_rat(c1.lo), to_rat(c1.hi)),
                argmax2: c2.r,
                max2_sq: (to_rat(c2.lo), to_rat(c2.hi)),
            }
        })
        .collect()
}
