//! JSON report shapes. Every object carries `schema: 1` and renders
//! big integers as decimal strings so nothing truncates at 64 bits.

use num_bigint::BigInt;
use serde::Serialize;

use recsquares_core::analysis::{one_square_threshold, ProxyPoint, SeqRecord, SieveReport};
use recsquares_core::hp::Real;
use recsquares_core::representation::Decomposition;
use recsquares_core::sequence::{SeqParams, SquareHit, Step};

pub const SCHEMA: u32 = 1;

pub fn big(n: &BigInt) -> String {
    n.to_string()
}

/// Fixed-point values are rendered with enough digits for scripting.
pub fn real(x: &Real) -> String {
    x.to_decimal(12)
}

#[derive(Serialize)]
pub struct ParamsJson {
    pub a: String,
    pub b0: String,
    pub d: String,
    pub t: String,
    pub u: String,
    pub step: u8,
}

impl ParamsJson {
    pub fn of(p: &SeqParams) -> Self {
        ParamsJson {
            a: big(&p.a),
            b0: big(&p.b0),
            d: big(&p.d),
            t: big(&p.t),
            u: big(&p.u),
            step: match p.step {
                Step::One => 1,
                Step::Two => 2,
            },
        }
    }
}

#[derive(Serialize)]
pub struct HitJson {
    pub k: i64,
    pub y: String,
    pub root: String,
    pub x: String,
}

impl HitJson {
    pub fn of(h: &SquareHit) -> Self {
        HitJson {
            k: h.k,
            y: big(&h.y),
            root: big(&h.root),
            x: big(&h.x),
        }
    }
}

#[derive(Serialize)]
pub struct ScanRecordJson {
    pub schema: u32,
    pub params: ParamsJson,
    pub n_alpha: String,
    pub core_class: &'static str,
    pub bound: u8,
    pub hits: Vec<HitJson>,
    pub distinct_count: usize,
    /// The at-most-one-square threshold, when the sequence qualifies
    /// (b = 1 and -N_alpha a square).
    pub threshold: Option<String>,
    pub violations: Vec<String>,
}

impl ScanRecordJson {
    pub fn of(r: &SeqRecord) -> Self {
        let violations = if r.violation {
            vec![format!(
                "distinct squares {} exceed the conjectured bound {}",
                r.distinct, r.bound
            )]
        } else {
            Vec::new()
        };
        let threshold = one_square_threshold(&r.params)
            .ok()
            .map(|t| t.approx(96).to_decimal(6));
        ScanRecordJson {
            schema: SCHEMA,
            params: ParamsJson::of(&r.params),
            n_alpha: big(&r.n_alpha),
            core_class: r.core_class.label(),
            bound: r.bound,
            hits: r.hits.iter().map(HitJson::of).collect(),
            distinct_count: r.distinct,
            threshold,
            violations,
        }
    }
}

#[derive(Serialize)]
pub struct DecompositionJson {
    pub schema: u32,
    pub params: ParamsJson,
    pub k: i64,
    pub f: String,
    pub r: String,
    pub s: String,
    pub sign: i8,
    pub branch: &'static str,
    pub g1_sq: String,
    pub f_prime: String,
    pub verified: bool,
}

impl DecompositionJson {
    pub fn of(p: &SeqParams, k: i64, d: &Decomposition, verified: bool) -> Self {
        DecompositionJson {
            schema: SCHEMA,
            params: ParamsJson::of(p),
            k,
            f: big(&d.f),
            r: big(&d.r),
            s: big(&d.s),
            sign: d.sign,
            branch: match d.branch {
                recsquares_core::representation::Branch::Plus => "r1'",
                recsquares_core::representation::Branch::Minus => "r1''",
            },
            g1_sq: big(&d.g1sq),
            f_prime: big(&d.fprime),
            verified,
        }
    }
}

#[derive(Serialize)]
pub struct SieveJson {
    pub schema: u32,
    pub modulus: u64,
    pub u: u64,
    pub sign: i8,
    pub survivor_count: u64,
    pub survivors_truncated: bool,
    pub survivors: Vec<(u64, u64, u64)>,
    /// (p, min valuation of a, min valuation of d) over survivors.
    pub forced: Vec<(u64, u32, u32)>,
    pub derived_gcd_divisor: u64,
}

impl SieveJson {
    pub fn of(modulus: u64, u: u64, sign: i8, r: &SieveReport) -> Self {
        SieveJson {
            schema: SCHEMA,
            modulus,
            u,
            sign,
            survivor_count: r.survivor_count,
            survivors_truncated: r.survivors_truncated,
            survivors: r.survivors.clone(),
            forced: r.forced.clone(),
            derived_gcd_divisor: r.derived_divisor,
        }
    }
}

#[derive(Serialize)]
pub struct ProxyPointJson {
    pub a: u64,
    pub d: u64,
    pub k: i64,
    pub x: String,
    pub y: String,
    pub proxy_e: String,
    pub proxy_q: String,
}

impl ProxyPointJson {
    pub fn of(p: &ProxyPoint) -> Self {
        ProxyPointJson {
            a: p.a,
            d: p.d,
            k: p.k,
            x: big(&p.x),
            y: big(&p.y),
            proxy_e: real(&p.proxy_e),
            proxy_q: real(&p.proxy_q),
        }
    }
}
