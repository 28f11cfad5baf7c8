//! Cross-checks of the proved lemma-level facts on concrete scans.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use recsquares_core::analysis::{classify_squares, gap_check, quartic_solutions, GapPart};
use recsquares_core::hp::{embed_quad, Complex, Real};
use recsquares_core::hypergeom::{omega_site, quartic_root_alignment};
use recsquares_core::intkit::sqrt_exact;
use recsquares_core::quadratic::{pell4_min, QuadInt};
use recsquares_core::representation::{decompose, g_quantities, Decomposition};
use recsquares_core::sequence::{scan_squares, SeqParams, SquareHit, Step};

fn params_for(a: u64, d: u64) -> SeqParams {
    let pell = pell4_min(&BigInt::from(d)).unwrap();
    SeqParams::new(
        BigInt::from(a),
        BigInt::one(),
        BigInt::from(d),
        pell.t,
        pell.u,
        Step::Two,
    )
    .unwrap()
}

/// Sequences with b = 1, N_alpha < 0 and at least two square hits off
/// the origin, for the pair-based lemmas.
fn rich_sequences(limit: usize) -> Vec<(SeqParams, Vec<SquareHit>)> {
    let mut out = Vec::new();
    for d in 2u64..=500 {
        if sqrt_exact(&BigInt::from(d)).is_some() {
            continue;
        }
        for a in 1..d.isqrt() + 1 {
            if a * a >= d {
                break;
            }
            let p = params_for(a, d);
            let hits = scan_squares(&p, 25).unwrap().hits;
            let off_origin = hits.iter().filter(|h| h.k != 0).count();
            if off_origin >= 1 {
                out.push((p, hits));
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

/// The two closed Gamma-ratio inequalities, exact through fourth
/// powers, with equality precisely at r = 1.
#[test]
fn gamma_ratio_inequalities_to_200() {
    let mut gamma1 = BigRational::one(); // r! Gamma(3/4) / Gamma(r+3/4)
    for r in 1u32..=200 {
        // (1/4)(1+1/4)...(r+1/4) / ((r+1)...(2r+1))
        let mut num = BigRational::one();
        for j in 0..=r as i64 {
            num *= BigRational::new(BigInt::from(4 * j + 1), 4.into());
        }
        for j in (r as i64 + 1)..=(2 * r as i64 + 1) {
            num /= BigRational::from(BigInt::from(j));
        }
        gamma1 *= BigRational::new(BigInt::from(4 * r), BigInt::from(4 * r - 1));

        // 5/(24 4^r r^(1/4)) <= prod  <=>  (5/(24 4^r))^4 <= prod^4 r
        let lhs4 = BigRational::new(5.into(), BigInt::from(24) * (BigInt::one() << (2 * r))).pow(4);
        let rhs4 = num.pow(4) * BigRational::from(BigInt::from(r));
        assert!(lhs4 <= rhs4, "first inequality at r={r}");
        assert_eq!(lhs4 == rhs4, r == 1, "first equality only at r=1");

        // gamma1 <= 4 r^(1/4) / 3  <=>  gamma1^4 <= 256 r / 81
        let g4 = gamma1.pow(4);
        let cap = BigRational::new(BigInt::from(256) * BigInt::from(r), 81.into());
        assert!(g4 <= cap, "second inequality at r={r}");
        assert_eq!(g4 == cap, r == 1, "second equality only at r=1");
    }
}

/// |phi_k| < 2.29 sqrt|N_alpha| / |x_k| < 0.6 whenever
/// y_k >= 4 sqrt(|N_alpha|/d).
#[test]
fn phi_bound_on_scanned_hits() {
    let bits = 128;
    let mut checked = 0;
    for (p, hits) in rich_sequences(60) {
        let abs_na = p.n_alpha().abs();
        for h in hits {
            // hypothesis y_k >= 4 sqrt(|N|/d): y^2 d >= 16 |N|
            if &h.y * &h.y * &p.d < BigInt::from(16) * &abs_na {
                continue;
            }
            let site = omega_site(&p, h.k).unwrap();
            let phi = site.phi_abs(bits);
            let bound = Real::from_fraction(229, 100, bits)
                .mul(&Real::from_bigint(&abs_na, bits).sqrt().unwrap())
                .div(&Real::from_bigint(&h.x.abs(), bits));
            assert!(phi < bound, "phi bound at {p:?} k={}", h.k);
            assert!(
                bound < Real::from_fraction(3, 5, bits).add(&Real::ulp(bits).shl(8))
                    || phi < Real::from_fraction(3, 5, bits),
                "0.6 cap at {p:?} k={}",
                h.k
            );
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} hits exercised");
}

/// Root alignment built from two square hits lands on j = 0 or 2 when
/// the two individual alignments agree up to sign.
#[test]
fn alignment_pairs_land_on_even_roots() {
    let bits = 192;
    let zeta = |p: &SeqParams, dec: &Decomposition, k: i64| -> u8 {
        let site = omega_site(p, k).unwrap();
        let core = site.t_prime.clone();
        let num = QuadInt::from_integers(&dec.r, &dec.s, core.clone()).unwrap();
        let den = num.conj();
        let z = embed_quad(&num, bits);
        let w = embed_quad(&den, bits);
        let ratio = complex_div(&z, &w);
        quartic_root_alignment(&site.omega(bits), &ratio)
    };
    let mut pairs_checked = 0;
    // Pairs of off-origin hits need b > 1 rows; the four-square
    // example sequences carry them.
    let rows: &[(u64, u64, u64, u64, u64)] = &[
        (1, 9, 2, 2, 2),
        (1019, 729, 2, 2, 2),
        (167, 169, 2, 2, 2),
        (157, 841, 2, 2, 2),
        (1, 1681, 2, 2, 2),
        (672, 8281, 3, 4, 2),
        (78, 49, 6, 10, 4),
        (138, 25, 37, 12, 2),
    ];
    for &(a, b0, d, t, u) in rows {
        let p = SeqParams::from_u64(a, b0, d, t, u, Step::Two).unwrap();
        let hits = scan_squares(&p, 12).unwrap().hits;
        if sqrt_exact(&-p.n_alpha()).is_some() {
            continue; // part (b) of the root lemma is about nonsquare -N
        }
        let offs: Vec<&SquareHit> = hits.iter().filter(|h| h.k != 0).collect();
        for i in 0..offs.len() {
            for j in 0..offs.len() {
                if i == j {
                    continue;
                }
                let (hk, hl) = (offs[i], offs[j]);
                if hl.y <= hk.y {
                    continue;
                }
                let abs_na = p.n_alpha().abs();
                if &hk.y * &hk.y * &p.d < BigInt::from(16) * &abs_na {
                    continue;
                }
                let (Ok(dk), Ok(dl)) = (decompose(&p, hk.k), decompose(&p, hl.k)) else {
                    continue;
                };
                let zk = zeta(&p, &dk, hk.k);
                let zl = zeta(&p, &dl, hl.k);
                if zk % 2 != zl % 2 {
                    continue; // zeta_k = +- zeta_l required
                }
                let site = omega_site(&p, hk.k).unwrap();
                let core = site.t_prime.clone();
                let left = QuadInt::from_integers(&dk.r, &dk.s, core.clone())
                    .unwrap()
                    .conj();
                let right = QuadInt::from_integers(&dl.r, &dl.s, core.clone()).unwrap();
                let prod = left.mul(&right).unwrap();
                let num = embed_quad(&prod.conj(), bits);
                let den = embed_quad(&prod, bits);
                let ratio = complex_div(&num, &den);
                let j_min = quartic_root_alignment(&site.omega(bits), &ratio);
                assert!(
                    j_min == 0 || j_min == 2,
                    "pair ({}, {}) of {p:?}",
                    hk.k,
                    hl.k
                );
                pairs_checked += 1;
            }
        }
    }
    assert!(pairs_checked >= 5, "only {pairs_checked} pairs exercised");
}

fn complex_div(a: &Complex, b: &Complex) -> Complex {
    let den = b.abs_sq();
    Complex::new(
        a.re.mul(&b.re).add(&a.im.mul(&b.im)).div(&den),
        a.im.mul(&b.re).sub(&a.re.mul(&b.im)).div(&den),
    )
}

/// Every square hit of a b=1 sequence solves x^2 - d root^4 = N_alpha
/// and is found by the bounded quartic solver.
#[test]
fn quartic_solver_agrees_with_scans() {
    for (p, hits) in rich_sequences(40) {
        let n_alpha = p.n_alpha();
        let sols = quartic_solutions(&p.d, &n_alpha, 2_000).unwrap();
        for h in hits {
            assert_eq!(
                &h.x * &h.x - &p.d * &h.y * &h.y,
                n_alpha,
                "norm at k={}",
                h.k
            );
            if h.root <= BigInt::from(2_000) {
                assert!(
                    sols.iter().any(|(x, y)| *x == h.x.abs() && *y == h.root),
                    "hit k={} missing from the solver output",
                    h.k
                );
            }
        }
    }
}

/// Real tuples never contradict the sieve's forced-divisor conclusion:
/// u = 8, t^2 - d u^2 = 4, -N_alpha an odd square and one of y_(+-1) a
/// square force 9 | gcd(a^2, d).
#[test]
fn sieve_conclusion_sound_on_integers() {
    let mut instances = 0;
    for t in 1u64..=500 {
        let t2 = t * t;
        if t2 < 4 || (t2 - 4) % 64 != 0 {
            continue;
        }
        let d = (t2 - 4) / 64;
        if d < 2 || d > 500 || sqrt_exact(&BigInt::from(d)).is_some() {
            continue;
        }
        for a in 1..d.isqrt() + 1 {
            if a * a >= d {
                break;
            }
            let minus_n = d - a * a;
            match sqrt_exact(&BigInt::from(minus_n)) {
                Some(r) if r.is_odd() => {}
                _ => continue,
            }
            let p = SeqParams::from_u64(a, 1, d, t, 8, Step::Two).unwrap();
            let square_at = |k: i64| {
                recsquares_core::sequence::element_integers(&p, k)
                    .map(|(_, y)| sqrt_exact(&y).is_some())
                    .unwrap_or(false)
            };
            if square_at(1) || square_at(-1) {
                instances += 1;
                let g = (a * a).gcd(&d);
                assert_eq!(g % 9, 0, "9 | gcd(a^2, d) at (a,t,d)=({a},{t},{d})");
            }
        }
    }
    assert!(instances >= 1, "no real instances found");
}

/// g^2 / gcd(a^2, d b^4) is a power of two on valid b = 1 sites; the
/// sharper exponent set {0,1,2,4} is logged, not asserted.
#[test]
fn g_squared_over_gcd_is_power_of_two() {
    let mut seen = std::collections::BTreeSet::new();
    for d in 2u64..=200 {
        if sqrt_exact(&BigInt::from(d)).is_some() {
            continue;
        }
        for a in 1..d.isqrt() + 1 {
            if a * a >= d {
                break;
            }
            let p = params_for(a, d);
            for k in [1i64, -1, 2, -2] {
                let Some((x, _)) = recsquares_core::sequence::element_integers(&p, k) else {
                    continue;
                };
                let n_alpha = p.n_alpha();
                let core = recsquares_core::intkit::core(&n_alpha).unwrap();
                let m = sqrt_exact(&(&n_alpha / &core)).unwrap();
                let u1: BigInt = &x * 2;
                let u2: BigInt = BigInt::from(p.n_eps_pow(k)) * &m * 2;
                let g = g_quantities(&core, &u1, &u2).unwrap();
                let gcd = (&p.a * &p.a).gcd(&p.d);
                let ratio = g.gsq.clone() / BigRational::from(gcd);
                // power of two (possibly 2^0)
                assert!(ratio.is_integer(), "integral ratio at ({a},{d},{k})");
                let v = ratio.to_integer();
                assert!(!v.is_zero());
                let m2 = v.bits() - 1;
                assert_eq!(v, BigInt::one() << m2, "power of two at ({a},{d},{k})");
                seen.insert(m2);
            }
        }
    }
    // The remark's sharper claim, logged for inspection.
    println!("observed exponents m: {seen:?}");
    assert!(!seen.is_empty());
}

/// Gap principle part (a) holds on every qualified pair of scanned
/// square hits, and the classifier's bound is never beaten. Two
/// off-origin squares above the part-(a) floor cannot actually occur
/// at desk scale (the classifier's bound already forbids them), so the
/// gap clause is expected to quantify over an empty set; the formula
/// itself is pinned by unit tests.
#[test]
fn gap_and_classifier_on_scans() {
    let mut gap_pairs = 0;
    for d in 2u64..=300 {
        if sqrt_exact(&BigInt::from(d)).is_some() {
            continue;
        }
        for a in 1..d.isqrt() + 1 {
            if a * a >= d {
                break;
            }
            if sqrt_exact(&BigInt::from(d - a * a)).is_none() {
                continue;
            }
            let p = params_for(a, d);
            let scan = scan_squares(&p, 25).unwrap();
            let c = classify_squares(&p).unwrap();
            assert!(
                scan.distinct <= c.bound as usize,
                "classifier bound at (a,d)=({a},{d})"
            );
            let offs: Vec<&SquareHit> = scan.hits.iter().filter(|h| h.k != 0).collect();
            for i in 0..offs.len() {
                for j in 0..offs.len() {
                    let (hi, hj) = (offs[i], offs[j]);
                    if hj.y <= hi.y {
                        continue;
                    }
                    let v =
                        gap_check(&p, hi, hj, &BigInt::one(), &BigInt::one(), GapPart::A).unwrap();
                    if v.applicable {
                        assert!(
                            v.satisfied,
                            "gap at (a,d)=({a},{d}), pair ({},{})",
                            hi.k, hj.k
                        );
                        gap_pairs += 1;
                    }
                }
            }
        }
    }
    let _ = gap_pairs;
}
