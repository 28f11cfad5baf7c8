//! Integer utilities: p-adic valuation, squarefree core, radical, exact
//! square detection and factorization with an explicit effort budget.
//!
//! Factorization is trial division (wheel mod 30) up to a configurable
//! limit, then Brent-cycle rho on whatever survives. Every prime that
//! leaves this module is certified by deterministic Miller-Rabin, which
//! is sound below 3.317e24; a candidate beyond that bound or a rho
//! failure surfaces as [`Error::UnfactoredResidue`], never as a wrong
//! answer.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
#[allow(unused_imports)]
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Sign-split prime factorization: `n = sign * prod(p_i ^ e_i)` with the
/// primes strictly increasing and each one certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub n: BigInt,
    pub factors: Vec<(BigInt, u32)>,
    pub sign: i8,
}

impl Factorization {
    /// Multiplies the factorization back together.
    pub fn product(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        if self.sign < 0 {
            acc = -acc;
        }
        acc
    }

    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }
}

/// Effort limits for [`factorize_with`].
#[derive(Clone, Copy, Debug)]
pub struct FactorBudget {
    /// Trial-divide by candidates up to this bound.
    pub trial_limit: u64,
    /// Brent-rho iterations allowed per composite cofactor.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_iterations: 1 << 22,
        }
    }
}

/// Largest power of the prime `p` dividing `n`.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::Domain("valuation of zero"));
    }
    if !is_prime(&p.magnitude().clone())? || p.is_negative() {
        return Err(Error::Domain("valuation base must be a positive prime"));
    }
    let mut m = n.abs();
    let mut e = 0u32;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// `v_2(n)` without a primality detour; `n` must be nonzero.
pub fn val2(n: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    n.magnitude().trailing_zeros().unwrap_or(0) as u32
}

/// The unique squarefree integer with `n / core(n)` a perfect square.
/// Sign-preserving; `core(1) = 1`.
pub fn core(n: &BigInt) -> Result<BigInt> {
    core_with(n, &FactorBudget::default())
}

pub fn core_with(n: &BigInt, budget: &FactorBudget) -> Result<BigInt> {
    let f = factorize_with(n, budget)?;
    let mut c = BigInt::one();
    for (p, e) in &f.factors {
        if e % 2 == 1 {
            c *= p;
        }
    }
    if f.sign < 0 {
        c = -c;
    }
    Ok(c)
}

/// Product of the distinct primes dividing `n`; `rad(+-1) = 1`.
pub fn rad(n: &BigInt) -> Result<BigInt> {
    rad_with(n, &FactorBudget::default())
}

pub fn rad_with(n: &BigInt, budget: &FactorBudget) -> Result<BigInt> {
    let f = factorize_with(n, budget)?;
    let mut r = BigInt::one();
    for (p, _) in &f.factors {
        r *= p;
    }
    Ok(r)
}

/// Integer square root if `n` is a perfect square, `None` otherwise.
/// Never touches floating point.
pub fn sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Cheap non-square filter: quadratic residues modulo 64, 63 and 65.
/// False means certainly not a square; true means run [`sqrt_exact`].
pub fn square_candidate(n: &BigUint) -> bool {
    const fn qr_mask<const M: u64>() -> [u64; 2] {
        let mut mask = [0u64; 2];
        let mut i = 0u64;
        while i < M {
            let q = (i * i) % M;
            mask[(q / 64) as usize] |= 1 << (q % 64);
            i += 1;
        }
        mask
    }
    const QR64: [u64; 2] = qr_mask::<64>();
    const QR63: [u64; 2] = qr_mask::<63>();
    const QR65: [u64; 2] = qr_mask::<65>();
    let hit = |mask: &[u64; 2], r: u64| mask[(r / 64) as usize] >> (r % 64) & 1 == 1;
    hit(&QR64, (n % 64u32).to_u64().unwrap())
        && hit(&QR63, (n % 63u32).to_u64().unwrap())
        && hit(&QR65, (n % 65u32).to_u64().unwrap())
}

/// Deterministic primality for `n < 3.317e24` (fixed Miller-Rabin base
/// set); larger inputs are refused rather than guessed at.
pub fn is_prime(n: &BigUint) -> Result<bool> {
    if let Some(m) = n.to_u64() {
        return Ok(is_prime_u64(m));
    }
    // 3,317,044,064,679,887,385,961,981: sound bound for the 12-base set.
    let bound: BigUint = BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap();
    if *n >= bound {
        return Err(Error::UnfactoredResidue {
            digits: n.to_string().len(),
        });
    }
    Ok(miller_rabin_big(n))
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'base: for &a in MR_BASES.iter() {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

fn miller_rabin_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = &one + &one;
    if n < &two {
        return false;
    }
    if n.is_even() {
        return *n == two;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'base: for &a in MR_BASES.iter() {
        let a = BigUint::from(a);
        if &a % n == BigUint::zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Factorizes a nonzero integer within the default budget.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with(n, &FactorBudget::default())
}

pub fn factorize_with(n: &BigInt, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Domain("factorize(0)"));
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();

    // Wheel mod 30 trial division.
    let push = |factors: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32| {
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        let pb = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        push(&mut factors, pb, e);
    }
    const WHEEL: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];
    let mut base = 0u64;
    'trial: while !m.is_one() {
        if base > budget.trial_limit {
            break;
        }
        // Stop as soon as the remaining cofactor is certainly prime.
        if base > 30 {
            let base_sq = BigUint::from(base) * BigUint::from(base);
            if m < base_sq {
                push(&mut factors, m.clone(), 1);
                m = BigUint::one();
                break 'trial;
            }
        }
        for w in WHEEL {
            let c = base + w;
            if c < 7 {
                continue;
            }
            let cb = BigUint::from(c);
            let mut e = 0;
            loop {
                let (q, r) = m.div_rem(&cb);
                if !r.is_zero() {
                    break;
                }
                m = q;
                e += 1;
            }
            push(&mut factors, cb, e);
        }
        base += 30;
    }

    if !m.is_one() {
        split_residue(&m, budget, &mut factors)?;
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    // Trial division and rho recursion can emit the same prime twice.
    let mut merged: Vec<(BigInt, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        let p = BigInt::from(p);
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization {
        n: n.clone(),
        factors: merged,
        sign,
    })
}

/// Splits a cofactor with no prime divisor below the trial limit.
fn split_residue(m: &BigUint, budget: &FactorBudget, out: &mut Vec<(BigUint, u32)>) -> Result<()> {
    if m.is_one() {
        return Ok(());
    }
    if is_prime(m)? {
        out.push((m.clone(), 1));
        return Ok(());
    }
    // Perfect powers first; rho stalls on them.
    for k in [2u32, 3, 5, 7] {
        let r = m.nth_root(k);
        if r.pow(k) == *m {
            let mut sub = Vec::new();
            split_residue(&r, budget, &mut sub)?;
            for (p, e) in sub {
                out.push((p, e * k));
            }
            return Ok(());
        }
    }
    let d = brent_rho(m, budget.rho_iterations).ok_or(Error::UnfactoredResidue {
        digits: m.to_string().len(),
    })?;
    let q = m / &d;
    split_residue(&d, budget, out)?;
    split_residue(&q, budget, out)?;
    Ok(())
}

/// Brent-cycle Pollard rho with batched gcds.
fn brent_rho(n: &BigUint, max_iters: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u64..64 {
        let cb = BigUint::from(c);
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent: u64 = 0;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &cb) % n;
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let batch = 128.min(r - k);
                for _ in 0..batch {
                    y = (&y * &y + &cb) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
                spent += batch;
                if spent > max_iters {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &cb) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && g > one {
            return Some(g);
        }
    }
    None
}
