//! The quartic representation: for a square term `y_k = root^2` of a
//! step-2 sequence, integers `(f, r, s)` with
//!
//! ```text
//! sign * f^2 (x_k + N_(eps^k) sqrt(N_alpha))
//!     = (a + sqrt(N_alpha)) (r + s sqrt(core(N_alpha)))^4
//! f * root = +- b (r^2 - core(N_alpha) s^2)
//! ```
//!
//! together with a divisibility certificate on `f`. The construction
//! follows the valuation case analysis of the source lemmas: both root
//! branches `r1 = t b^2 + a u +- 2 b root` are formed, the common
//! factor `g1^2 = gcd(4 b^2 r1 / core(r1), r1^2)` is stripped, the
//! branch is chosen by comparing leftover prime content over
//! `core(N_alpha)`, and when `core(N_alpha) = -1` an even `f` with odd
//! `(r, s)` is reduced through division by `1 - i`. Every identity is
//! re-verified exactly before a decomposition is returned.
//!
//! The module also carries the gcd quantities `(g1, g2, g3, g)` and
//! `N_(d',4)` attached to an algebraic integer `(u1 + u2 sqrt(t'))/2`,
//! plus their closed form for `b = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intkit::{self, sqrt_exact, val2, FactorBudget, Factorization};
use crate::quadratic::QuadInt;
use crate::sequence::{element_quad, SeqParams, Step};
use crate::{Error, Result};

/// The gcd quantities attached to `(u1 + u2 sqrt(t'))/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    pub g1: BigInt,
    pub g2: BigInt,
    pub g3: u8,
    /// `g^2 = g1^2 g2 / g3`, exact.
    pub gsq: BigRational,
    /// `d' = u2^2 t' / g^2`, always an integer.
    pub dprime: BigInt,
    /// `N_(d',4)^2 = 2^min(v2(d'), 6)`.
    pub n_sq: BigInt,
    pub t_prime: BigInt,
    pub u1: BigInt,
    pub u2: BigInt,
}

impl GSet {
    /// `(|g| N_(d',4))^2`, an exact positive rational (integral in all
    /// sequence applications).
    pub fn gn_sq(&self) -> BigRational {
        &self.gsq * BigRational::from(self.n_sq.clone())
    }
}

/// Computes `(g1, g2, g3, g, d', N^2)` for an algebraic integer
/// `(u1 + u2 sqrt(t'))/2` with `t'` squarefree.
pub fn g_quantities(t_prime: &BigInt, u1: &BigInt, u2: &BigInt) -> Result<GSet> {
    if t_prime.is_zero() || t_prime.is_one() {
        return Err(Error::Domain("t' must define a quadratic field"));
    }
    if intkit::core(t_prime)? != *t_prime {
        return Err(Error::Domain("t' must be squarefree"));
    }
    if u2.is_zero() {
        return Err(Error::Domain("u2 = 0 degenerates d'"));
    }
    let four = BigInt::from(4);
    if (u1 - u2).is_odd() || (u1.is_odd() && t_prime.mod_floor(&four) != BigInt::one()) {
        return Err(Error::Domain(
            "(u1 + u2 sqrt t')/2 is not an algebraic integer",
        ));
    }

    let g1 = u1.gcd(u2);
    let g2 = (u1 / &g1).gcd(t_prime);
    let even_diff = ((u1 - u2) / &g1).is_even();
    let g3: u8 = if even_diff {
        match u8::try_from(t_prime.mod_floor(&four)).unwrap_or(4) {
            1 => 1,
            3 => 2,
            _ => 4,
        }
    } else {
        4
    };
    let gsq = BigRational::new(&g1 * &g1 * &g2, BigInt::from(g3));
    let dprime_rat = BigRational::from(u2 * u2 * t_prime) / &gsq;
    if !dprime_rat.is_integer() {
        return Err(Error::InternalInvariant("d' must be an integer"));
    }
    let dprime = dprime_rat.to_integer();
    let n_sq = BigInt::one() << val2(&dprime).min(6);
    Ok(GSet {
        g1,
        g2,
        g3,
        gsq,
        dprime,
        n_sq,
        t_prime: t_prime.clone(),
        u1: u1.clone(),
        u2: u2.clone(),
    })
}

/// Which of the two root branches `r1 = t b^2 + a u +- 2 b root` the
/// decomposition used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// A verified quartic representation of one square term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub f: BigInt,
    pub r: BigInt,
    pub s: BigInt,
    /// Sign on the left-hand side of the quartic identity.
    pub sign: i8,
    pub branch: Branch,
    /// The stripped square factor `g1^2` of the chosen branch.
    pub g1sq: BigInt,
    /// The divisor `f'` of `core(N_alpha)` entering the certificate.
    pub fprime: BigInt,
}

/// Exact data shared by `decompose` and `verify_decomposition`.
struct Site {
    b: BigInt,
    x: BigInt,
    root: BigInt,
    t_k: BigInt,
    u_k: BigInt,
    n_eps_k: i8,
    n_alpha: BigInt,
    core: BigInt,
    core_primes: Factorization,
    /// `sqrt(N_alpha / core)`, the positive root.
    m: BigInt,
}

fn site(p: &SeqParams, k: i64, budget: &FactorBudget) -> Result<Site> {
    if p.step != Step::Two {
        return Err(Error::Domain("the representation needs step 2"));
    }
    if k == 0 {
        return Err(Error::Domain("k must be nonzero"));
    }
    let b = sqrt_exact(&p.b0).ok_or(Error::Domain("b0 must be a perfect square here"))?;
    let n_alpha = p.n_alpha();
    if sqrt_exact(&n_alpha).is_some() {
        return Err(Error::Domain("square N_alpha is not supported"));
    }
    let q = element_quad(p, k);
    let x = q
        .rational_part_integer()
        .ok_or(Error::Domain("x_k is not an integer"))?;
    let y = q
        .surd_part_integer()
        .ok_or(Error::Domain("y_k is not an integer"))?;
    if x.is_zero() {
        return Err(Error::Domain("x_k = 0"));
    }
    let root = sqrt_exact(&y).ok_or(Error::Domain("y_k is not a perfect square"))?;
    if !root.is_positive() {
        return Err(Error::Domain("y_k must be positive"));
    }
    let eps_k = p.eps().power(k).expect("unit");
    let (t_k, u_k) = {
        let (h, kk) = eps_k.coords();
        (h.clone(), kk.clone())
    };
    debug_assert!(!u_k.is_zero());
    let fac = intkit::factorize_with(&n_alpha, budget)?;
    let mut core = BigInt::one();
    let mut m = BigInt::one();
    for (prime, e) in &fac.factors {
        if e % 2 == 1 {
            core *= prime;
        }
        m *= prime.pow(e / 2);
    }
    if fac.sign < 0 {
        core = -core;
    }
    let core_primes = Factorization {
        n: core.clone(),
        factors: fac
            .factors
            .iter()
            .filter(|(_, e)| e % 2 == 1)
            .cloned()
            .collect(),
        sign: fac.sign,
    };
    Ok(Site {
        b,
        x,
        root,
        t_k,
        u_k,
        n_eps_k: p.n_eps_pow(k),
        n_alpha,
        core,
        core_primes,
        m,
    })
}

/// `g1^2 = gcd(4 b^2 r1 / core(r1), r1^2)` for one branch, checked
/// against the containing gcd with `s1'^2`.
fn branch_g1sq(b0: &BigInt, r1: &BigInt, s1p: &BigInt, budget: &FactorBudget) -> Result<BigInt> {
    let core_r1 = intkit::core_with(r1, budget)?;
    let a_part: BigInt = BigInt::from(4) * b0 * (r1 / &core_r1);
    let g1sq = a_part.gcd(&(r1 * r1));
    if g1sq.gcd(&(s1p * s1p)) != g1sq {
        return Err(Error::InternalInvariant("g1^2 must divide s1'^2"));
    }
    Ok(g1sq)
}

fn valuation_of(value: &BigInt, prime: &BigInt) -> i64 {
    let mut m = value.abs();
    let mut e = 0i64;
    loop {
        let (q, r) = m.div_rem(prime);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// Decomposes the square term at index `k` per the representation
/// proposition, verifying every identity exactly before returning.
pub fn decompose(p: &SeqParams, k: i64) -> Result<Decomposition> {
    decompose_with(p, k, &FactorBudget::default())
}

pub fn decompose_with(p: &SeqParams, k: i64, budget: &FactorBudget) -> Result<Decomposition> {
    let st = site(p, k, budget)?;
    let s1p: BigInt = -&st.u_k * &st.m;
    let base: BigInt = &st.t_k * &p.b0 + &p.a * &st.u_k;
    let two_b_root: BigInt = BigInt::from(2) * &st.b * &st.root;
    let r1_plus: BigInt = &base + &two_b_root;
    let r1_minus: BigInt = &base - &two_b_root;
    if (&r1_plus * &r1_minus) != (&st.u_k * &st.u_k * &st.n_alpha) {
        return Err(Error::InternalInvariant("r1' r1'' = u^2 N_alpha failed"));
    }

    let g1sq_plus = branch_g1sq(&p.b0, &r1_plus, &s1p, budget)?;
    let g1sq_minus = branch_g1sq(&p.b0, &r1_minus, &s1p, budget)?;

    // Partition the primes of core(N_alpha) by which branch carries the
    // smaller leftover valuation.
    let mut d_plus = BigInt::one();
    let mut d_minus = BigInt::one();
    for (prime, _) in &st.core_primes.factors {
        let v_plus = valuation_of(&r1_plus, prime) - valuation_of(&g1sq_plus, prime);
        let v_minus = valuation_of(&r1_minus, prime) - valuation_of(&g1sq_minus, prime);
        if v_plus < v_minus {
            d_plus *= prime;
        } else if v_minus < v_plus {
            d_minus *= prime;
        }
    }
    let (branch, r1, g1sq) = if d_plus > d_minus {
        (Branch::Plus, r1_plus, g1sq_plus)
    } else {
        (Branch::Minus, r1_minus, g1sq_minus)
    };
    let fprime = d_plus.min(d_minus);

    let g1 = sqrt_exact(&g1sq).ok_or(Error::InternalInvariant("g1^2 must be a square"))?;
    let mut r = &r1 / &g1;
    let mut s = &s1p / &g1;
    if &r * &g1 != r1 || &s * &g1 != s1p {
        return Err(Error::InternalInvariant("g1 must divide r1 and s1'"));
    }
    let mut f: BigInt = BigInt::from(4) * &p.b0 * &r1 / &g1sq;
    let mut sign = 1i8;

    // core(N_alpha) = -1 with even f and odd (r, s): divide r + s*i by
    // 1 - i, turning (r + s i)^4 into -4 (r' + s' i)^4.
    if st.core == BigInt::from(-1) && f.is_even() && r.is_odd() && s.is_odd() {
        let r_new = (&r - &s) / 2;
        let s_new = (&r + &s) / 2;
        r = r_new;
        s = s_new;
        f /= 2;
        sign = -1;
    }
    let f = f.abs();

    let dec = Decomposition {
        f,
        r,
        s,
        sign,
        branch,
        g1sq,
        fprime,
    };
    let check = verify_decomposition_with(p, k, &dec, budget)?;
    if let Some(fail) = check.failure {
        return Err(Error::InternalInvariant(fail.as_str()));
    }
    Ok(dec)
}

/// Why a verification failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    NotASquareTerm,
    QuarticIdentity,
    FyRelation,
    Divisibility,
}

impl VerifyFailure {
    pub fn as_str(self) -> &'static str {
        match self {
            VerifyFailure::NotASquareTerm => "y_k is not a positive integer square",
            VerifyFailure::QuarticIdentity => "quartic identity",
            VerifyFailure::FyRelation => "f sqrt(y) relation",
            VerifyFailure::Divisibility => "f divisibility certificate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub failure: Option<VerifyFailure>,
}

impl VerifyOutcome {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks both identities and the case-appropriate divisibility bound
/// on `f`, exactly.
pub fn verify_decomposition(p: &SeqParams, k: i64, dec: &Decomposition) -> Result<VerifyOutcome> {
    verify_decomposition_with(p, k, dec, &FactorBudget::default())
}

pub fn verify_decomposition_with(
    p: &SeqParams,
    k: i64,
    dec: &Decomposition,
    budget: &FactorBudget,
) -> Result<VerifyOutcome> {
    let st = match site(p, k, budget) {
        Ok(st) => st,
        Err(Error::Domain(_)) => {
            return Ok(VerifyOutcome {
                failure: Some(VerifyFailure::NotASquareTerm),
            })
        }
        Err(e) => return Err(e),
    };
    let fail = |f: VerifyFailure| Ok(VerifyOutcome { failure: Some(f) });

    // sign f^2 (x + N_(eps^k) sqrt(N_alpha)) = (a + sqrt(N_alpha))(r + s sqrt core)^4
    let f_sq = &dec.f * &dec.f;
    let n_eps_m: BigInt = BigInt::from(st.n_eps_k) * &st.m;
    let lhs_x: BigInt = BigInt::from(dec.sign) * &f_sq * &st.x;
    let lhs_y: BigInt = BigInt::from(dec.sign) * &f_sq * &n_eps_m;
    let lhs = QuadInt::from_integers(&lhs_x, &lhs_y, st.core.clone())?;
    let alpha_side = QuadInt::from_integers(&p.a, &st.m, st.core.clone())?;
    let quartic = QuadInt::from_integers(&dec.r, &dec.s, st.core.clone())?.power(4)?;
    let rhs = alpha_side.mul(&quartic)?;
    if lhs != rhs {
        return fail(VerifyFailure::QuarticIdentity);
    }

    // f * root = +- b (r^2 - core s^2)
    let rhs_fy: BigInt = &st.b * (&dec.r * &dec.r - &st.core * &dec.s * &dec.s);
    let lhs_fy: BigInt = &dec.f * &st.root;
    if lhs_fy != rhs_fy && lhs_fy != -&rhs_fy {
        return fail(VerifyFailure::FyRelation);
    }

    // Divisibility certificate for |f|, by strength of the hypothesis.
    let n_eps_big = BigInt::from(st.n_eps_k);
    let bound = if st.core == BigInt::from(-1) {
        // -N_alpha is a square.
        let g = (&st.u_k * &st.n_alpha).gcd(&n_eps_big);
        &p.b0 * intkit::rad_with(&g, budget)?
    } else if is_two_ell_p(&st.core_primes) {
        let quotient: BigInt = &st.n_alpha / &st.core;
        let g = (&st.u_k * &quotient).gcd(&n_eps_big);
        let one_mod4 = st.n_alpha.mod_floor(&BigInt::from(4)).is_one();
        let four_div_d = p.d.mod_floor(&BigInt::from(4)).is_zero();
        let lead = if one_mod4 && four_div_d { 4 } else { 2 };
        BigInt::from(lead) * &p.b0 * intkit::rad_with(&g, budget)?
    } else {
        let quotient: BigInt = &st.n_alpha / &st.core;
        let g = (&st.u_k * &quotient).gcd(&n_eps_big);
        BigInt::from(4) * &p.b0 * intkit::rad_with(&(&dec.fprime * &g), budget)?
    };
    if !bound.mod_floor(&dec.f.abs()).is_zero() {
        return fail(VerifyFailure::Divisibility);
    }

    Ok(VerifyOutcome { failure: None })
}

fn is_two_ell_p(core_primes: &Factorization) -> bool {
    // |core| = 2^l p^m, l, m in {0,1}, l + m >= 1; core is squarefree,
    // so this is |core| in {2, p, 2p}.
    let odd = core_primes
        .factors
        .iter()
        .filter(|(p, _)| p.is_odd())
        .count();
    match core_primes.factors.len() {
        1 => true,
        2 => odd == 1,
        _ => false,
    }
}

/// Closed form of `(|g| N_(d',4))^2` for `b = 1`:
/// `gcd(a^2, d) * 2^(2 + min(4, v2(b')))` with `b' = N_alpha / gcd(a^2, d)`.
pub fn gn_closed_form(p: &SeqParams, k: i64) -> Result<BigInt> {
    if !p.b0.is_one() {
        return Err(Error::Domain("the closed form needs b0 = 1"));
    }
    let n_alpha = p.n_alpha();
    if !n_alpha.is_negative() {
        return Err(Error::Domain("the closed form needs N_alpha < 0"));
    }
    if crate::sequence::element_integers(p, k).is_none() {
        return Err(Error::Domain("x_k and y_k must be integers"));
    }
    let g = (&p.a * &p.a).gcd(&p.d);
    let b_prime: BigInt = &n_alpha / &g;
    let e = 2 + val2(&b_prime).min(4);
    Ok(g * (BigInt::one() << e))
}

/// The direct route: `(|g| N_(d',4))^2` via [`g_quantities`] with
/// `t' = core(N_alpha)`, `u1 = 2 x_k`, `u2 = 2 N_(eps^k) sqrt(N_alpha/core)`.
pub fn gn_direct(p: &SeqParams, k: i64) -> Result<BigRational> {
    let n_alpha = p.n_alpha();
    let core = intkit::core(&n_alpha)?;
    let m = sqrt_exact(&(&n_alpha / &core)).expect("n/core(n) is a square");
    let (x, _) = crate::sequence::element_integers(p, k)
        .ok_or(Error::Domain("x_k and y_k must be integers"))?;
    let u1: BigInt = &x * 2;
    let u2: BigInt = BigInt::from(p.n_eps_pow(k)) * &m * 2;
    Ok(g_quantities(&core, &u1, &u2)?.gn_sq())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: u64, b0: u64, d: u64, t: u64, u: u64) -> SeqParams {
        SeqParams::from_u64(a, b0, d, t, u, Step::Two).unwrap()
    }

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn g_quantities_hand_example() {
        // (8 + 4 sqrt(-1))/2 = 4 + 2i, from (1,1,5,1,1) at k=1.
        let g = g_quantities(&bi(-1), &bi(8), &bi(4)).unwrap();
        assert_eq!(g.g1, bi(4));
        assert_eq!(g.g2, bi(1));
        assert_eq!(g.g3, 4);
        assert_eq!(g.gsq, BigRational::from(bi(4)));
        assert_eq!(g.dprime, bi(-4));
        assert_eq!(g.n_sq, bi(4));
        assert_eq!(g.gn_sq(), BigRational::from(bi(16)));
    }

    #[test]
    fn g_quantities_parity_table() {
        // (2 + 2 sqrt(-1))/2 = 1 + i: (u1-u2)/g1 = 0 even, t' = 3 mod 4.
        let g = g_quantities(&bi(-1), &bi(2), &bi(2)).unwrap();
        assert_eq!(g.g1, bi(2));
        assert_eq!(g.g2, bi(1));
        assert_eq!(g.g3, 2);
        assert_eq!(g.gsq, BigRational::from(bi(2)));
        assert_eq!(g.dprime, bi(-2));

        // u1 = u2 makes g1 = |u1|.
        let g = g_quantities(&bi(-3), &bi(6), &bi(6)).unwrap();
        assert_eq!(g.g1, bi(6));

        assert!(g_quantities(&bi(-4), &bi(2), &bi(2)).is_err()); // not squarefree
        assert!(g_quantities(&bi(-1), &bi(1), &bi(2)).is_err()); // not an algebraic integer
    }

    #[test]
    fn decompose_flagship() {
        let p = params(2, 1, 40, 6, 1);
        let dec = decompose(&p, 1).unwrap();
        assert_eq!(dec.f, bi(1));
        assert_eq!((dec.r.clone(), dec.s.clone()), (bi(1), bi(-2)));
        assert_eq!(dec.sign, -1);
        assert!(verify_decomposition(&p, 1, &dec).unwrap().ok());
        // f sqrt(y): 1*5 = 1*(1 - (-1)*4) = 5.
        assert_eq!(&dec.f * bi(5), bi(1) * (bi(1) - bi(-1) * bi(4)));
    }

    #[test]
    fn verify_rejects_perturbations() {
        let p = params(2, 1, 40, 6, 1);
        let dec = decompose(&p, 1).unwrap();

        let mut bad = dec.clone();
        bad.f = &dec.f * 2;
        let out = verify_decomposition(&p, 1, &bad).unwrap();
        assert_eq!(out.failure, Some(VerifyFailure::QuarticIdentity));

        let mut swapped = dec.clone();
        core::mem::swap(&mut swapped.r, &mut swapped.s);
        assert!(!verify_decomposition(&p, 1, &swapped).unwrap().ok());

        let mut shifted = dec.clone();
        shifted.s += 1;
        assert!(!verify_decomposition(&p, 1, &shifted).unwrap().ok());
    }

    #[test]
    fn decompose_rejects_bad_inputs() {
        // y_1 = 2 is not a square for (1,1,5,1,1).
        let p = params(1, 1, 5, 1, 1);
        assert!(matches!(decompose(&p, 1), Err(Error::Domain(_))));
        // (43, 9, 5): N_alpha = 1849 - 405 = 1444 = 38^2 is a square.
        let p = params(43, 9, 5, 1, 1);
        assert!(matches!(decompose(&p, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn decompose_table_row_hits() {
        // d=2 row: alpha = 1 + 9 sqrt2, squares at k = 3 and k = -5.
        let p = params(1, 9, 2, 2, 2);
        for k in [3i64, -5] {
            let dec = decompose(&p, k).unwrap();
            assert!(verify_decomposition(&p, k, &dec).unwrap().ok(), "k={k}");
        }
    }

    #[test]
    fn gn_closed_form_examples() {
        assert_eq!(gn_closed_form(&params(1, 1, 5, 1, 1), 1).unwrap(), bi(16));
        assert_eq!(gn_closed_form(&params(2, 1, 40, 6, 1), 1).unwrap(), bi(16));
        assert_eq!(gn_closed_form(&params(1, 1, 10, 6, 2), 1).unwrap(), bi(4));
        assert!(gn_closed_form(&params(1, 9, 2, 2, 2), 1).is_err());
    }

    #[test]
    fn gn_closed_form_matches_direct() {
        for (a, d) in [
            (1u64, 5u64),
            (2, 40),
            (1, 10),
            (9, 104),
            (11, 140),
            (10, 140),
            (3, 13),
        ] {
            let pell = crate::quadratic::pell4_min(&bi(d as i64)).unwrap();
            let p = SeqParams::new(
                bi(a as i64),
                BigInt::one(),
                bi(d as i64),
                pell.t.clone(),
                pell.u.clone(),
                Step::Two,
            )
            .unwrap();
            for k in [-3i64, -2, -1, 1, 2, 3] {
                if crate::sequence::element_integers(&p, k).is_none() {
                    continue;
                }
                let closed = gn_closed_form(&p, k).unwrap();
                let direct = gn_direct(&p, k).unwrap();
                assert_eq!(BigRational::from(closed), direct, "a={a} d={d} k={k}");
            }
        }
    }
}
