//! Acceptance suite: one test per criterion, each printing its own
//! pass line (run with `cargo test --test acceptance -- --nocapture`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use recsquares::fixtures;
use recsquares_core::analysis::{
    congruence_sieve, distinct_above_threshold, proxy_scan_combine, proxy_scan_d, scan_unit,
    squarefree_d, NAlphaCond, ScanRanges, SieveSpec, StepSel,
};
use recsquares_core::hp::Real;
use recsquares_core::hypergeom::{
    approx_pair, bounds, denominator_sweep, nondegenerate, remainder,
};
use recsquares_core::intkit::sqrt_exact;
use recsquares_core::quadratic::pell4_min;
use recsquares_core::representation::{decompose, gn_closed_form, gn_direct, verify_decomposition};
use recsquares_core::sequence::{element_integers, scan_squares, SeqParams, Step};

fn pass(n: u32, what: &str) {
    println!("ACCEPTANCE {n:02} PASS: {what}");
}

fn params(a: u64, b0: u64, d: u64, t: u64, u: u64, step: Step) -> SeqParams {
    SeqParams::from_u64(a, b0, d, t, u, step).unwrap()
}

fn params_for(a: u64, d: u64, step: Step) -> SeqParams {
    let pell = pell4_min(&BigInt::from(d)).unwrap();
    SeqParams::new(
        BigInt::from(a),
        BigInt::one(),
        BigInt::from(d),
        pell.t,
        pell.u,
        step,
    )
    .unwrap()
}

/// Criterion 1: all fourteen d=2 table rows, window 80, exact sets.
#[test]
fn criterion_01_table_d2() {
    let start = std::time::Instant::now();
    for &(a, b, ks, roots) in fixtures::TABLE_D2 {
        let p = params(a, b * b, 2, 2, 2, Step::Two);
        let scan = scan_squares(&p, 80).unwrap();
        let got: Vec<(i64, BigInt)> = scan.hits.iter().map(|h| (h.k, h.root.clone())).collect();
        let mut want: Vec<(i64, BigInt)> = ks
            .iter()
            .copied()
            .zip(roots.iter().map(|&r| BigInt::from(r)))
            .collect();
        want.sort();
        assert_eq!(got, want, "row a={a}, b={b}");
        assert_eq!(scan.distinct, 4, "row a={a}, b={b}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(
        1,
        &format!("14 table rows reproduced exactly in {elapsed:?}"),
    );
}

/// Criterion 2: the four step-1 example square sets, exactly.
#[test]
fn criterion_02_step1_examples() {
    for &(d, t, u, a, b, expect) in fixtures::STEP1_EXAMPLES {
        let p = params(a, b * b, d, t, u, Step::One);
        let scan = scan_squares(&p, 80).unwrap();
        let got: Vec<(i64, BigInt)> = scan.hits.iter().map(|h| (h.k, h.root.clone())).collect();
        let mut want: Vec<(i64, BigInt)> =
            expect.iter().map(|&(k, r)| (k, BigInt::from(r))).collect();
        want.sort();
        assert_eq!(got, want, "(d,t,u,a,b)=({d},{t},{u},{a},{b})");
    }
    pass(
        2,
        "step-1 example square sets reproduced exactly (window 80)",
    );
}

/// Criterion 3: the two cited quartic solution lists, exactly.
#[test]
fn criterion_03_quartic() {
    let start = std::time::Instant::now();
    let sols = |d: i64, n: i64| {
        recsquares_core::analysis::quartic_solutions(&BigInt::from(d), &BigInt::from(n), 10_000)
            .unwrap()
            .into_iter()
            .map(|(x, y)| (x.try_into().unwrap(), y.try_into().unwrap()))
            .collect::<Vec<(i64, i64)>>()
    };
    assert_eq!(sols(17, -16), [(1, 1), (16, 2), (103, 5)]);
    assert_eq!(sols(68, -64), [(2, 1), (32, 2), (206, 5)]);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}");
    pass(3, &format!("quartic solution lists exact in {elapsed:?}"));
}

/// Criterion 4: small-d extremal scan over d in [2, 1000].
#[test]
fn criterion_04_lemma313() {
    let start = std::time::Instant::now();
    let units: Vec<_> = (2u64..=1000)
        .into_par_iter()
        .map(|d| (d, proxy_scan_d(d, 128).unwrap()))
        .collect();
    let report = proxy_scan_combine(units);

    let at_9_104 = report
        .below_one
        .iter()
        .find(|p| p.a == 9 && p.d == 104 && p.k == -1)
        .expect("(9, 104, -1) present with proxy E below 1");
    let v = at_9_104.proxy_e.to_f64();
    assert!((v - 0.973).abs() <= 1e-3, "E proxy at (9,104) = {v}");

    let min_e = report.min_e_ge105.as_ref().unwrap();
    assert_eq!((min_e.a, min_e.d), (11, 140), "min E proxy location");
    assert!((min_e.proxy_e.to_f64() - 1.139).abs() <= 1e-3);

    let min_q = report.min_q_ge105.as_ref().unwrap();
    assert_eq!((min_q.a, min_q.d), (10, 140), "min Q proxy location");
    assert!((min_q.proxy_q.to_f64() - 217.3).abs() <= 0.1);

    assert!(
        report.violations.is_empty(),
        "violations: {:?}",
        report.violations
    );
    assert!(report.below_one.iter().all(|p| p.d <= 104));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    pass(
        4,
        &format!(
            "extremals 1.139@(11,140), 217.3@(10,140), 0.973@(9,104); no violations; {elapsed:?}"
        ),
    );
}

/// Criterion 5: both normalized denominator ratios for r <= 155 peak at
/// r = 3 below 0.83 and 0.2, by exact rational interval arithmetic.
#[test]
fn criterion_05_lemma22() {
    let start = std::time::Instant::now();
    let classes = denominator_sweep(155);
    let cap1 = BigRational::new(83.into(), 100.into()).pow(2);
    let cap2 = BigRational::new(1.into(), 5.into()).pow(2);
    let mut global1: Option<(u32, BigRational, BigRational)> = None;
    let mut global2: Option<(u32, BigRational, BigRational)> = None;
    for c in &classes {
        assert!(c.max1_sq.1 < cap1, "ratio1 cap at v2={}", c.v2);
        assert!(c.max2_sq.1 < cap2, "ratio2 cap at v2={}", c.v2);
        if global1.as_ref().map(|g| c.max1_sq.0 > g.2).unwrap_or(true) {
            global1 = Some((c.argmax1, c.max1_sq.0.clone(), c.max1_sq.1.clone()));
        }
        if global2.as_ref().map(|g| c.max2_sq.0 > g.2).unwrap_or(true) {
            global2 = Some((c.argmax2, c.max2_sq.0.clone(), c.max2_sq.1.clone()));
        }
    }
    let g1 = global1.unwrap();
    let g2 = global2.unwrap();
    assert_eq!(g1.0, 3, "ratio1 maximum is at r = 3");
    assert_eq!(g2.0, 3, "ratio2 maximum is at r = 3");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    let val = |q: &BigRational| Real::from_ratio(q, 96).sqrt().unwrap().to_f64();
    pass(
        5,
        &format!(
            "maxima at r=3: {:.5} < 0.83 and {:.5} < 0.2 ({elapsed:?})",
            val(&g1.2),
            val(&g2.2)
        ),
    );
}

/// Harvest (params, k) pairs whose y_k is a perfect square by solving
/// a = (2 s^2 - b0 P) / Q for integer a, where eps^(2k) = (P + Q sqrt d)/2.
fn harvest_square_hits(target: usize) -> Vec<(SeqParams, i64)> {
    let mut out = Vec::new();
    let mut s_max = 40u64;
    while out.len() < target && s_max <= 1 << 12 {
        out.clear();
        'outer: for d in squarefree_d(40) {
            let pell = pell4_min(&BigInt::from(d)).unwrap();
            for b in 1u64..=3 {
                let b0 = BigInt::from(b * b);
                for k in [1i64, -1, 2, -2] {
                    let eps = SeqParams::new(
                        BigInt::one(),
                        BigInt::one(),
                        BigInt::from(d),
                        pell.t.clone(),
                        pell.u.clone(),
                        Step::Two,
                    )
                    .unwrap()
                    .eps();
                    let pow = eps.power(2 * k).unwrap();
                    let (pp, qq) = pow.coords();
                    for s in 1..=s_max {
                        let num = BigInt::from(2 * s * s) - &b0 * pp;
                        if qq.is_zero() || !num.mod_floor(&qq.abs()).is_zero() {
                            continue;
                        }
                        let a = &num / qq;
                        if !a.is_positive() {
                            continue;
                        }
                        // gcd(a, b^2) squarefree, N_alpha not a square,
                        // x_k nonzero: the decomposition preconditions.
                        let g = a.gcd(&b0);
                        if recsquares_core::intkit::core(&g).unwrap() != g {
                            continue;
                        }
                        let p = SeqParams::new(
                            a,
                            b0.clone(),
                            BigInt::from(d),
                            pell.t.clone(),
                            pell.u.clone(),
                            Step::Two,
                        )
                        .unwrap();
                        if sqrt_exact(&p.n_alpha()).is_some() {
                            continue;
                        }
                        match element_integers(&p, k) {
                            Some((x, y)) => {
                                if x.is_zero() || !y.is_positive() {
                                    continue;
                                }
                                debug_assert_eq!(y, BigInt::from(s * s));
                            }
                            None => continue,
                        }
                        out.push((p, k));
                        if out.len() >= target {
                            break 'outer;
                        }
                    }
                }
            }
        }
        s_max *= 2;
    }
    out
}

/// Criterion 6: >= 1000 decompositions verified exactly, including the
/// divisibility certificate; zero failures.
#[test]
fn criterion_06_representation_suite() {
    let cases = harvest_square_hits(1000);
    assert!(cases.len() >= 1000, "harvested only {}", cases.len());
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(p, k)| {
            let dec = match decompose(p, *k) {
                Ok(d) => d,
                Err(e) => return Some(format!("{p:?} k={k}: {e}")),
            };
            match verify_decomposition(p, *k, &dec) {
                Ok(v) if v.ok() => None,
                Ok(v) => Some(format!("{p:?} k={k}: {:?}", v.failure)),
                Err(e) => Some(format!("{p:?} k={k}: {e}")),
            }
        })
        .collect();
    assert!(
        failures.is_empty(),
        "{} failures, first: {}",
        failures.len(),
        failures[0]
    );
    pass(
        6,
        &format!("{} decompositions verified, zero failures", cases.len()),
    );
}

/// Criterion 7: closed form equals the direct gcd-quantity route on
/// >= 1000 valid (params, k) cases.
#[test]
fn criterion_07_gn_equivalence() {
    let mut count = 0usize;
    for d in 2u64..=320 {
        if sqrt_exact(&BigInt::from(d)).is_some() {
            continue;
        }
        let pell = pell4_min(&BigInt::from(d)).unwrap();
        let mut a = 1u64;
        while a * a < d {
            let p = SeqParams::new(
                BigInt::from(a),
                BigInt::one(),
                BigInt::from(d),
                pell.t.clone(),
                pell.u.clone(),
                Step::Two,
            )
            .unwrap();
            for k in [1i64, -1, 2, -2, 3, -3] {
                if element_integers(&p, k).is_none() {
                    continue;
                }
                let closed = gn_closed_form(&p, k).unwrap();
                let direct = gn_direct(&p, k).unwrap();
                assert_eq!(BigRational::from(closed), direct, "a={a} d={d} k={k}");
                count += 1;
            }
            a += 1;
        }
        if count >= 1000 && d >= 105 {
            break;
        }
    }
    assert!(count >= 1000, "only {count} cases");
    pass(7, &format!("closed form = direct route on {count} cases"));
}

/// Criterion 8: desk-scale threshold property; at most one distinct
/// square above the threshold in every qualifying sequence.
#[test]
fn criterion_08_prop41_property() {
    let start = std::time::Instant::now();
    let mut checked = 0usize;
    let jobs: Vec<(u64, u64)> = (2u64..=500)
        .filter(|&d| sqrt_exact(&BigInt::from(d)).is_none())
        .flat_map(|d| {
            let root = (d as f64).sqrt() as u64 + 1;
            let near = root.saturating_sub(50).max(1)..=root;
            let small = 1..=50u64.min(root);
            near.chain(small).map(move |a| (a, d)).collect::<Vec<_>>()
        })
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut unique = Vec::new();
    for (a, d) in jobs {
        if a * a < d && sqrt_exact(&BigInt::from(d - a * a)).is_some() && seen.insert((a, d)) {
            unique.push((a, d));
        }
    }
    let results: Vec<(u64, u64, usize)> = unique
        .par_iter()
        .map(|&(a, d)| {
            let p = params_for(a, d, Step::Two);
            let (above, _) = distinct_above_threshold(&p, 40).unwrap();
            (a, d, above)
        })
        .collect();
    for (a, d, above) in results {
        checked += 1;
        assert!(
            above <= 1,
            "(a,d)=({a},{d}) has {above} distinct squares above the threshold"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    pass(
        8,
        &format!("{checked} sequences, all with at most one square above threshold ({elapsed:?})"),
    );
}

/// Criterion 9: conjecture scan at desk scale, zero violations.
#[test]
fn criterion_09_conjecture_scan() {
    let start = std::time::Instant::now();
    let ranges = ScanRanges {
        b_max: 20,
        d_max: 200,
        a_near_width: 50,
        a_small_max: 50,
        window: 40,
        steps: StepSel::Both,
    };
    let units: Vec<(u64, u64)> = squarefree_d(200)
        .into_iter()
        .flat_map(|d| (1..=20u64).map(move |b| (d, b)))
        .collect();
    let counts: Vec<(usize, usize)> = units
        .par_iter()
        .map(|&(d, b)| {
            let pell = pell4_min(&BigInt::from(d)).unwrap();
            let records = scan_unit(d, &pell, b, &ranges).unwrap();
            let violations = records.iter().filter(|r| r.violation).count();
            (records.len(), violations)
        })
        .collect();
    let sequences: usize = counts.iter().map(|c| c.0).sum();
    let violations: usize = counts.iter().map(|c| c.1).sum();
    assert_eq!(violations, 0, "conjecture bound violated");
    assert!(
        sequences > 100_000,
        "scan covered only {sequences} sequences"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1800, "took {elapsed:?}");
    pass(
        9,
        &format!("{sequences} sequences, zero violations ({elapsed:?})"),
    );
}

/// Criterion 10: hypergeometric numerics over 50 seeded-random valid
/// sites: identity to 1e-30 at 256 bits, exact non-degeneracy, and the
/// two approximation-lemma hypothesis inequalities for 1 <= r <= 30.
#[test]
fn criterion_10_hypergeometric() {
    let bits = 256;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5ec5_c0de);
    let mut sites = Vec::new();
    while sites.len() < 50 {
        let d = rng.random_range(2u64..=400);
        if sqrt_exact(&BigInt::from(d)).is_some() {
            continue;
        }
        let root = (d as f64).sqrt() as u64;
        if root < 1 {
            continue;
        }
        let a = rng.random_range(1..=root);
        if a * a >= d {
            continue;
        }
        let k = *[-2i64, -1, 1, 2].get(rng.random_range(0..4)).unwrap();
        let p = params_for(a, d, Step::Two);
        let Some((x, y)) = element_integers(&p, k) else {
            continue;
        };
        if y < BigInt::from(2) || &x * &x <= BigInt::from(3) * p.n_alpha().abs() {
            continue;
        }
        sites.push((p, k));
    }

    let c = BigRational::new(3.into(), 4.into());
    let tol = Real::from_fraction(1, 10, bits).powi(30);
    sites.par_iter().for_each(|(p, k)| {
        let bs = bounds(p, *k, &c, bits).unwrap();
        let mut prev = None;
        for r in 0..=30u32 {
            let pair = approx_pair(p, *k, r, bits).unwrap();
            let rem = remainder(p, *k, r, bits).unwrap();
            let diff = pair.residual.sub(&rem).abs();
            assert!(
                diff < tol,
                "identity at r={r} for {p:?} k={k}: {}",
                diff.to_decimal(40)
            );
            if let Some(ref prev_pair) = prev {
                assert!(
                    nondegenerate(prev_pair, &pair).unwrap(),
                    "degenerate at r={r}"
                );
            }
            if r >= 1 {
                let q_abs = pair.q_abs(bits);
                assert!(
                    q_abs < bs.k0.mul(&bs.q.powi(r)),
                    "|q_r| < k0 Q^r at r={r} for {p:?} k={k}"
                );
                let bound = bs.ell0.div(&bs.e.powi(r));
                assert!(
                    rem.abs() <= bound,
                    "|R_r| <= l0 E^-r at r={r} for {p:?} k={k}"
                );
            }
            prev = Some(pair);
        }
    });
    pass(
        10,
        "50 sites x 31 approximants: identity, non-degeneracy and bounds all hold",
    );
}

/// Criterion 11: the four cited sieve conclusions.
#[test]
fn criterion_11_sieve() {
    // (i) u = 4, +4, -N odd square: empty mod 32.
    let mut spec = SieveSpec::new(32, 4, 1);
    spec.n_alpha = NAlphaCond::NegOddSquare;
    assert!(congruence_sieve(&spec).unwrap().empty());

    // (ii) u = 8, +4, odd square mod 9: forced 9 | gcd(a^2, d).
    let mut spec = SieveSpec::new(9, 8, 1);
    spec.n_alpha = NAlphaCond::NegOddSquare;
    let r = congruence_sieve(&spec).unwrap();
    assert!(!r.empty());
    assert!(r.survivors.iter().all(|(a, _, d)| a % 3 == 0 && d % 3 == 0));
    assert_eq!(r.derived_divisor, 9);

    // (iii) u = 6, -4: empty mod 9.
    assert!(congruence_sieve(&SieveSpec::new(9, 6, -1)).unwrap().empty());

    // (iv) -4 with -N an odd square forces u = 2 mod 4 (mod 16).
    for u in 1..=4u64 {
        let mut spec = SieveSpec::new(16, u, -1);
        spec.n_alpha = NAlphaCond::NegOddSquare;
        let r = congruence_sieve(&spec).unwrap();
        assert_eq!(r.empty(), u % 4 != 2, "u = {u}");
    }
    pass(11, "all four cited modular conclusions reproduced");
}
