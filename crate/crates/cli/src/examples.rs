//! Replays the recorded example families and tables, reporting
//! pass/fail per item. Exit is clean only if everything matches.

use anyhow::Result;
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use recsquares_core::analysis::{classify_squares, CaseLabel};
use recsquares_core::sequence::{element_integers, scan_squares, SeqParams, Step};

use crate::fixtures;
use crate::report;

#[derive(Serialize)]
struct Item {
    name: String,
    ok: bool,
    detail: String,
}

fn check_square_set(p: &SeqParams, window: u32, expect: &[(i64, u64)]) -> Result<(bool, String)> {
    let scan = scan_squares(p, window)?;
    let got: Vec<(i64, String)> = scan
        .hits
        .iter()
        .map(|h| (h.k, h.root.to_string()))
        .collect();
    let mut want: Vec<(i64, String)> = expect.iter().map(|&(k, r)| (k, r.to_string())).collect();
    want.sort();
    let ok = got == want;
    let detail = if ok {
        format!("{} squares, exactly the recorded set", got.len())
    } else {
        format!("expected {want:?}, found {got:?}")
    };
    Ok((ok, detail))
}

pub fn run(json: bool) -> Result<bool> {
    let mut items: Vec<Item> = Vec::new();
    let mut push = |name: String, ok: bool, detail: String| {
        items.push(Item { name, ok, detail });
    };

    for &(a, b, ks, roots) in fixtures::TABLE_D2 {
        let p = SeqParams::from_u64(a, b * b, 2, 2, 2, Step::Two)?;
        let expect: Vec<(i64, u64)> = ks.iter().copied().zip(roots.iter().copied()).collect();
        let (ok, detail) = check_square_set(&p, 80, &expect)?;
        push(format!("d=2 table row a={a} b={b}"), ok, detail);
    }

    for &(d, t, u, a, b) in fixtures::EXTRA_FOUR_SQUARES {
        let p = SeqParams::from_u64(a, b * b, d, t, u, Step::Two)?;
        let scan = scan_squares(&p, 40)?;
        let ok = scan.distinct == 4;
        push(
            format!("four squares at (d,t,u,a,b)=({d},{t},{u},{a},{b})"),
            ok,
            format!("{} distinct squares in window 40", scan.distinct),
        );
    }

    for &(d, t, u, a, b, expect) in fixtures::STEP1_EXAMPLES
        .iter()
        .chain(fixtures::STEP1_PRIME_POWER)
    {
        let p = SeqParams::from_u64(a, b * b, d, t, u, Step::One)?;
        let (ok, detail) = check_square_set(&p, 40, expect)?;
        push(
            format!("step-1 squares at (d,t,u,a,b)=({d},{t},{u},{a},{b})"),
            ok,
            detail,
        );
    }

    for n in (5..=15u64).step_by(2) {
        let (a, d, t, u) = fixtures::family_n_odd(n);
        let p = SeqParams::from_u64(a, 1, d, t, u, Step::Two)?;
        let expect_na = BigInt::from(4) - BigInt::from(n * n);
        let y1 = element_integers(&p, 1).map(|(_, y)| y);
        let ym1 = element_integers(&p, -1).map(|(_, y)| y);
        let want_y1 = BigInt::from((n * n - 3) / 2).pow(2);
        let want_ym1 = BigInt::from(n * n);
        let ok = p.n_alpha() == expect_na
            && y1.as_ref() == Some(&want_y1)
            && ym1.as_ref() == Some(&want_ym1);
        push(
            format!("three-square family, n={n}"),
            ok,
            format!("N_alpha={}, y_1={:?}, y_-1={:?}", p.n_alpha(), y1, ym1),
        );
    }

    for n in [9u64, 13, 17, 21, 29] {
        let (a, d, t, u) = fixtures::family_n_1mod4(n);
        let p = SeqParams::from_u64(a, 1, d, t, u, Step::Two)?;
        let y1 = element_integers(&p, 1).map(|(_, y)| y);
        let want_y1 = BigInt::from((n + 1) / 2).pow(2);
        let ok = p.n_alpha() == -BigInt::from(n) && y1.as_ref() == Some(&want_y1);
        push(
            format!("square-norm family, n={n}"),
            ok,
            format!("N_alpha={}, y_1={:?}", p.n_alpha(), y1),
        );
    }

    for (t, root) in fixtures::family_case_a(3) {
        let d = t * t + 4;
        let p = SeqParams::from_u64(2, 1, d, t, 1, Step::Two)?;
        let c = classify_squares(&p)?;
        let y1 = element_integers(&p, 1).map(|(_, y)| y);
        let ok = c.case == CaseLabel::A
            && c.bound == 3
            && y1 == Some(BigInt::from(root) * BigInt::from(root));
        push(
            format!("case-(a) family, t={t}"),
            ok,
            format!(
                "case {:?}, y_1 = {root}^2 (t derived from the Pell condition)",
                c.case
            ),
        );
    }

    for n in 2..=8u64 {
        let Some((a, d, t, u)) = fixtures::family_tight_lower_bound(n) else {
            continue;
        };
        let p = SeqParams::from_u64(a, 1, d, t, u, Step::Two)?;
        let ym1 = element_integers(&p, -1).map(|(_, y)| y);
        let ok = p.n_alpha() == BigInt::one() - BigInt::from(4 * n * n)
            && ym1 == Some(BigInt::from(n * n));
        push(
            format!("tight lower-bound family, n={n}"),
            ok,
            format!("N_alpha={}, y_-1={:?}", p.n_alpha(), ym1),
        );
    }

    let all_ok = items.iter().all(|i| i.ok);
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            ok: bool,
            items: &'a [Item],
        }
        println!(
            "{}",
            serde_json::to_string(&Out {
                schema: report::SCHEMA,
                ok: all_ok,
                items: &items
            })
            .expect("serializable")
        );
    } else {
        for i in &items {
            println!(
                "{} {}: {}",
                if i.ok { "ok  " } else { "FAIL" },
                i.name,
                i.detail
            );
        }
        println!(
            "{}/{} examples reproduced",
            items.iter().filter(|i| i.ok).count(),
            items.len()
        );
    }
    Ok(all_ok)
}
