//! Command-line front end: every library operation as a subcommand,
//! with stable human output, `--json` machine output, and exit codes
//! 0 (clean), 1 (violation or failed verification), 2 (usage/domain).

mod config;

use recsquares::{examples, report};

use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use recsquares_core::analysis::{
    classify_squares, congruence_sieve, finish_sieve, gap_check, one_square_threshold,
    proxy_scan_combine, proxy_scan_d, quartic_solutions, scan_unit, sieve_row, AParity, CaseLabel,
    GapPart, NAlphaCond, ScanRanges, SieveSpec, StepSel,
};
use recsquares_core::hp::Real;
use recsquares_core::hypergeom::{bounds, denominator_sweep, r0_and_lowerbound};
use recsquares_core::intkit::FactorBudget;
use recsquares_core::quadratic::pell4_min;
use recsquares_core::representation::{decompose_with, verify_decomposition_with};
use recsquares_core::sequence::{scan_squares, SeqParams, Step};

const PRECISION_ENV: &str = "RECSQUARES_PRECISION";

#[derive(Parser)]
#[command(
    name = "recsquares",
    version,
    about = "Squares in binary recurrence sequences"
)]
struct Cli {
    /// Machine-readable JSON output (one object per line for streams).
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Bit precision for floating evaluations (default 256, env
    /// RECSQUARES_PRECISION).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Write the report stream to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Trial-division bound of the factorization budget.
    #[arg(long, global = true)]
    trial_limit: Option<u64>,
    /// Rho iterations allowed per composite cofactor.
    #[arg(long, global = true)]
    rho_iterations: Option<u64>,
    /// key=value file supplying defaults for the global flags.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SeqArgs {
    #[arg(long)]
    a: String,
    #[arg(long, default_value = "1")]
    b0: String,
    #[arg(long)]
    d: String,
    /// Unit numerator t of (t + u sqrt d)/2; defaults to the minimal
    /// +-4 solution for d.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    u: Option<String>,
    /// 1 steps by eps, 2 by eps^2.
    #[arg(long, default_value = "2")]
    step: u8,
}

impl SeqArgs {
    fn params(&self) -> Result<SeqParams> {
        let d = parse_big(&self.d)?;
        let (t, u) = match (&self.t, &self.u) {
            (Some(t), Some(u)) => (parse_big(t)?, parse_big(u)?),
            (None, None) => {
                let pell = pell4_min(&d)?;
                (pell.t, pell.u)
            }
            _ => bail!("provide both --t and --u, or neither"),
        };
        let step = match self.step {
            1 => Step::One,
            2 => Step::Two,
            _ => bail!("--step must be 1 or 2"),
        };
        Ok(SeqParams::new(
            parse_big(&self.a)?,
            parse_big(&self.b0)?,
            d,
            t,
            u,
            step,
        )?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Scan one sequence for perfect-square terms.
    Squares {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 40)]
        window: u32,
    },
    /// Exhaustive conjecture scan over (b, d, a) ranges.
    Scan {
        #[arg(long, default_value_t = 20)]
        b_max: u64,
        #[arg(long, default_value_t = 200)]
        d_max: u64,
        #[arg(long, default_value_t = 50)]
        a_near_width: u64,
        #[arg(long, default_value_t = 50)]
        a_small_max: u64,
        #[arg(long, default_value_t = 40)]
        window: u32,
        /// 1, 2, or both.
        #[arg(long, default_value = "both")]
        step: String,
        /// Emit every sequence record, not just violations.
        #[arg(long)]
        full: bool,
    },
    /// Quartic decomposition of a square term.
    Decompose {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Re-verify a decomposition (computed, or overridden by flags).
    Verify {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_negative_numbers = true)]
        f: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        s: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        sign: Option<i8>,
    },
    /// Approximation bound set (E, Q, k0, l0) at one index.
    Bounds {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value = "0.75")]
        c: String,
    },
    /// Smallest admissible r0 and the two approximation lower bounds.
    R0 {
        #[arg(long)]
        e: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        ell0: String,
        #[arg(long, default_value = "0.89")]
        k0: String,
        #[arg(long, default_value = "0.75")]
        c: String,
        #[arg(long)]
        q_abs: String,
    },
    /// Gap-principle check between two square indices.
    Gap {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, allow_negative_numbers = true)]
        ki: i64,
        #[arg(long, allow_negative_numbers = true)]
        kj: i64,
        /// a, b, or b182.
        #[arg(long, default_value = "a")]
        part: String,
        #[arg(long, default_value = "1")]
        fi: String,
        #[arg(long, default_value = "1")]
        fj: String,
    },
    /// At-most-one-square threshold for b = 1, -N_alpha square.
    Threshold {
        #[arg(long)]
        a: String,
        #[arg(long)]
        d: String,
    },
    /// All solutions of x^2 - d y^4 = n with y <= ybound.
    Quartic {
        #[arg(long)]
        d: String,
        #[arg(long, allow_negative_numbers = true)]
        n: String,
        #[arg(long, default_value_t = 10_000)]
        ybound: u64,
    },
    /// Congruence sieve over residues (a, t, d) mod M.
    Sieve {
        #[arg(long)]
        u: u64,
        /// "+4" or "-4".
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        #[arg(long)]
        modulus: u64,
        /// any, odd-square, even-square, or square (conditions on -N_alpha).
        #[arg(long, default_value = "any")]
        nalpha: String,
        /// any, odd, or even.
        #[arg(long, default_value = "any")]
        a_parity: String,
        #[arg(long, default_value_t = 1)]
        b0: u64,
    },
    /// Three-case classification with its square-count bound.
    Classify {
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Small-d extremal scan of the two bound proxies.
    Lemma313 {
        #[arg(long, default_value_t = 2)]
        d_min: u64,
        #[arg(long, default_value_t = 1000)]
        d_max: u64,
    },
    /// Normalized denominator-ratio sweep certifying 0.83 and 0.2.
    Lemma22 {
        #[arg(long, default_value_t = 155)]
        r_max: u32,
    },
    /// Replay the recorded example families and tables.
    Examples,
    /// Minimal solution of t^2 - d u^2 = +-4.
    Pell {
        #[arg(long)]
        d: String,
    },
}

fn parse_big(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).with_context(|| format!("not an integer: {s}"))
}

/// Exact decimal-string parser: "0.75" becomes 3/4.
fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        bail!("not a number: {s}");
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .with_context(|| format!("not a number: {s}"))?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(BigInt::from(sign) * num, den))
}

fn parse_real(s: &str, bits: u32) -> Result<Real> {
    Ok(Real::from_ratio(&parse_decimal(s)?, bits))
}

/// Report stream: stdout by default, a file under `--out`.
struct Sink {
    file: Option<std::io::BufWriter<std::fs::File>>,
}

impl Sink {
    fn open(path: &Option<std::path::PathBuf>) -> Result<Sink> {
        let file = match path {
            Some(p) => Some(std::io::BufWriter::new(
                std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => None,
        };
        Ok(Sink { file })
    }

    fn line(&mut self, text: &str) {
        use std::io::Write;
        match &mut self.file {
            Some(f) => writeln!(f, "{text}").expect("report write"),
            None => println!("{text}"),
        }
    }
}

/// Writes a line to the report stream.
macro_rules! out_line {
    ($sink:expr, $($t:tt)*) => {
        $sink.borrow_mut().line(&format!($($t)*))
    };
}

fn emit<T: serde::Serialize>(
    sink: &std::cell::RefCell<Sink>,
    json: bool,
    value: &T,
    human: impl FnOnce(),
) {
    if json {
        let text = serde_json::to_string(value).expect("serializable");
        sink.borrow_mut().line(&text);
    } else {
        human();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match config::Settings::resolve(
        &cli.config,
        cli.jobs,
        cli.precision,
        cli.trial_limit,
        cli.rho_iterations,
    ) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = settings.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli, &settings) {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Ok(true) = clean run; Ok(false) = ran fine but found a violation or
/// failed verification; Err = usage or domain error.
fn run(cli: Cli, settings: &config::Settings) -> Result<bool> {
    let json = cli.json;
    let bits = settings.precision;
    let sink = std::cell::RefCell::new(Sink::open(&cli.out)?);
    let budget = FactorBudget {
        trial_limit: cli
            .trial_limit
            .unwrap_or(FactorBudget::default().trial_limit),
        rho_iterations: cli
            .rho_iterations
            .unwrap_or(FactorBudget::default().rho_iterations),
    };
    match cli.cmd {
        Cmd::Squares { seq, window } => {
            let p = seq.params()?;
            let scan = scan_squares(&p, window)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                params: report::ParamsJson,
                window: u32,
                hits: Vec<report::HitJson>,
                distinct_count: usize,
            }
            let out = Out {
                schema: report::SCHEMA,
                params: report::ParamsJson::of(&p),
                window,
                hits: scan.hits.iter().map(report::HitJson::of).collect(),
                distinct_count: scan.distinct,
            };
            emit(&sink, json, &out, || {
                out_line!(
                    sink,
                    "{} square terms in [-{window}, {window}] ({} distinct values)",
                    scan.hits.len(),
                    scan.distinct
                );
                for h in &scan.hits {
                    out_line!(
                        sink,
                        "  k = {:>4}: y = {} = {}^2, x = {}",
                        h.k,
                        h.y,
                        h.root,
                        h.x
                    );
                }
            });
            Ok(true)
        }
        Cmd::Scan {
            b_max,
            d_max,
            a_near_width,
            a_small_max,
            window,
            step,
            full,
        } => {
            let steps = match step.as_str() {
                "1" => StepSel::One,
                "2" => StepSel::Two,
                "both" => StepSel::Both,
                other => bail!("--step must be 1, 2 or both, not {other}"),
            };
            let ranges = ScanRanges {
                b_max,
                d_max,
                a_near_width,
                a_small_max,
                window,
                steps,
            };
            let ds = recsquares_core::analysis::squarefree_d(d_max);
            let units: Vec<(u64, u64)> = ds
                .iter()
                .flat_map(|&d| (1..=b_max).map(move |b| (d, b)))
                .collect();
            // Chunked: parallel within a chunk, streamed output in
            // canonical order, memory independent of the range size.
            let mut violations = 0usize;
            let mut sequences = 0usize;
            for chunk in units.chunks(256) {
                let results: Vec<_> = chunk
                    .par_iter()
                    .map(|&(d, b)| -> Result<_> {
                        let pell = pell4_min(&BigInt::from(d))?;
                        Ok(scan_unit(d, &pell, b, &ranges)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                for records in &results {
                    for r in records {
                        sequences += 1;
                        if r.violation {
                            violations += 1;
                        }
                        if full || r.violation {
                            let rec = report::ScanRecordJson::of(r);
                            emit(&sink, json, &rec, || {
                                out_line!(
                                    sink,
                                    "a={} b0={} d={} step={:?}: {} distinct (bound {}){}",
                                    r.params.a,
                                    r.params.b0,
                                    r.params.d,
                                    r.params.step,
                                    r.distinct,
                                    r.bound,
                                    if r.violation { " VIOLATION" } else { "" }
                                );
                            });
                        }
                    }
                }
            }
            if !json {
                out_line!(
                    sink,
                    "{sequences} sequences scanned, {violations} violations"
                );
            }
            Ok(violations == 0)
        }
        Cmd::Decompose { seq, k } => {
            let p = seq.params()?;
            let dec = decompose_with(&p, k, &budget)?;
            let ok = verify_decomposition_with(&p, k, &dec, &budget)?.ok();
            let out = report::DecompositionJson::of(&p, k, &dec, ok);
            emit(&sink, json, &out, || {
                out_line!(
                    sink,
                    "f = {}, (r, s) = ({}, {}), sign {}, branch {}, g1^2 = {}, f' = {}",
                    dec.f,
                    dec.r,
                    dec.s,
                    if dec.sign > 0 { "+" } else { "-" },
                    out.branch,
                    dec.g1sq,
                    dec.fprime
                );
                out_line!(sink, "verified: {ok}");
            });
            Ok(ok)
        }
        Cmd::Verify {
            seq,
            k,
            f,
            r,
            s,
            sign,
        } => {
            let p = seq.params()?;
            let mut dec = decompose_with(&p, k, &budget)?;
            if let Some(f) = f {
                dec.f = parse_big(&f)?;
            }
            if let Some(r) = r {
                dec.r = parse_big(&r)?;
            }
            if let Some(s) = s {
                dec.s = parse_big(&s)?;
            }
            if let Some(sign) = sign {
                dec.sign = sign;
            }
            let outcome = verify_decomposition_with(&p, k, &dec, &budget)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                ok: bool,
                failure: Option<&'static str>,
            }
            let out = Out {
                schema: report::SCHEMA,
                ok: outcome.ok(),
                failure: outcome.failure.map(|f| f.as_str()),
            };
            emit(&sink, json, &out, || match outcome.failure {
                None => out_line!(sink, "ok"),
                Some(f) => out_line!(sink, "FAILED: {}", f.as_str()),
            });
            Ok(outcome.ok())
        }
        Cmd::Bounds { seq, k, c } => {
            let p = seq.params()?;
            let c = parse_decimal(&c)?;
            let bs = bounds(&p, k, &c, bits)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                e: String,
                q: String,
                k0: String,
                ell0: String,
                phi_abs: String,
                gn_sq: String,
                proxy_e_lb: String,
                proxy_q_lb: String,
                e_exceeds_one: bool,
                q_exceeds_one: bool,
            }
            let out = Out {
                schema: report::SCHEMA,
                e: report::real(&bs.e),
                q: report::real(&bs.q),
                k0: report::real(&bs.k0),
                ell0: report::real(&bs.ell0),
                phi_abs: report::real(&bs.phi_abs),
                gn_sq: bs.gn_sq.to_string(),
                proxy_e_lb: report::real(&bs.proxy_e_lb),
                proxy_q_lb: report::real(&bs.proxy_q_lb),
                e_exceeds_one: bs.e_exceeds_one(),
                q_exceeds_one: bs.q_exceeds_one(),
            };
            emit(&sink, json, &out, || {
                out_line!(
                    sink,
                    "E      = {}{}",
                    out.e,
                    if bs.e_exceeds_one() { "" } else { "  (E <= 1)" }
                );
                out_line!(sink, "Q      = {}", out.q);
                out_line!(sink, "k0     = {}", out.k0);
                out_line!(sink, "l0     = {}", out.ell0);
                out_line!(sink, "|phi|  = {}", out.phi_abs);
                out_line!(sink, "(gN)^2 = {}", out.gn_sq);
                out_line!(sink, "proxy E lower bound = {}", out.proxy_e_lb);
                out_line!(sink, "proxy Q lower bound = {}", out.proxy_q_lb);
            });
            Ok(true)
        }
        Cmd::R0 {
            e,
            q,
            ell0,
            k0,
            c,
            q_abs,
        } => {
            let (r0, lb_mismatch, lb_match) = r0_and_lowerbound(
                &parse_real(&e, bits)?,
                &parse_real(&q, bits)?,
                &parse_real(&ell0, bits)?,
                &parse_real(&k0, bits)?,
                &parse_decimal(&c)?,
                &parse_real(&q_abs, bits)?,
            )?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                r0: u32,
                lower_bound_mismatch: String,
                lower_bound_match: String,
            }
            let out = Out {
                schema: report::SCHEMA,
                r0,
                lower_bound_mismatch: report::real(&lb_mismatch),
                lower_bound_match: report::real(&lb_match),
            };
            emit(&sink, json, &out, || {
                out_line!(sink, "r0 = {r0}");
                out_line!(
                    sink,
                    "|q theta - p| > {} when p/q misses the r0-th approximant",
                    out.lower_bound_mismatch
                );
                out_line!(
                    sink,
                    "|q theta - p| > {} when it matches",
                    out.lower_bound_match
                );
            });
            Ok(true)
        }
        Cmd::Gap {
            seq,
            ki,
            kj,
            part,
            fi,
            fj,
        } => {
            let p = seq.params()?;
            let part = match part.as_str() {
                "a" => GapPart::A,
                "b" => GapPart::B {
                    strengthened: false,
                },
                "b182" => GapPart::B { strengthened: true },
                other => bail!("--part must be a, b or b182, not {other}"),
            };
            let scan = scan_squares(&p, ki.unsigned_abs().max(kj.unsigned_abs()) as u32)?;
            let find = |k: i64| {
                scan.hits
                    .iter()
                    .find(|h| h.k == k)
                    .cloned()
                    .ok_or_else(|| anyhow!("y_{k} is not a square term"))
            };
            let (hi, hj) = (find(ki)?, find(kj)?);
            let v = gap_check(&p, &hi, &hj, &parse_big(&fi)?, &parse_big(&fj)?, part)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                applicable: bool,
                reason: Option<&'static str>,
                threshold: String,
                satisfied: bool,
            }
            let out = Out {
                schema: report::SCHEMA,
                applicable: v.applicable,
                reason: v.reason,
                threshold: v.threshold.to_string(),
                satisfied: v.satisfied,
            };
            emit(&sink, json, &out, || {
                if v.applicable {
                    out_line!(sink, "threshold: y_j > {}", v.threshold);
                    out_line!(sink, "satisfied: {}", v.satisfied);
                } else {
                    out_line!(
                        sink,
                        "not applicable: {}",
                        v.reason.unwrap_or("hypothesis fails")
                    );
                }
            });
            Ok(!v.applicable || v.satisfied)
        }
        Cmd::Threshold { a, d } => {
            let d = parse_big(&d)?;
            let pell = pell4_min(&d)?;
            let p = SeqParams::new(parse_big(&a)?, BigInt::one(), d, pell.t, pell.u, Step::Two)?;
            let t = one_square_threshold(&p)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                n_alpha_abs: String,
                gn_sq: String,
                threshold: String,
            }
            let out = Out {
                schema: report::SCHEMA,
                n_alpha_abs: report::big(&t.n_alpha_abs),
                gn_sq: report::big(&t.gn_sq),
                threshold: t.approx(bits).to_decimal(6),
            };
            emit(&sink, json, &out, || {
                out_line!(
                    sink,
                    "at most one distinct square above max(1, 76|N|^(3/2)/(sqrt d (gN)^2)) = {}",
                    out.threshold
                );
            });
            Ok(true)
        }
        Cmd::Quartic { d, n, ybound } => {
            let sols = quartic_solutions(&parse_big(&d)?, &parse_big(&n)?, ybound)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                complete_up_to_y: u64,
                solutions: Vec<(String, String)>,
            }
            let out = Out {
                schema: report::SCHEMA,
                complete_up_to_y: ybound,
                solutions: sols
                    .iter()
                    .map(|(x, y)| (x.to_string(), y.to_string()))
                    .collect(),
            };
            emit(&sink, json, &out, || {
                out_line!(
                    sink,
                    "{} solutions with 1 <= y <= {} (complete up to that bound only):",
                    sols.len(),
                    ybound
                );
                for (x, y) in &sols {
                    out_line!(sink, "  (x, y) = ({x}, {y})");
                }
            });
            Ok(true)
        }
        Cmd::Sieve {
            u,
            sign,
            modulus,
            nalpha,
            a_parity,
            b0,
        } => {
            let sign = match sign.as_str() {
                "+4" | "4" | "+" => 1,
                "-4" | "-" => -1,
                other => bail!("--sign must be +4 or -4, not {other}"),
            };
            let n_alpha = match nalpha.as_str() {
                "any" => NAlphaCond::Any,
                "odd-square" => NAlphaCond::NegOddSquare,
                "even-square" => NAlphaCond::NegEvenSquare,
                "square" => NAlphaCond::NegSquare,
                other => {
                    bail!("--nalpha must be any, odd-square, even-square or square, not {other}")
                }
            };
            let a_parity = match a_parity.as_str() {
                "any" => AParity::Any,
                "odd" => AParity::Odd,
                "even" => AParity::Even,
                other => bail!("--a-parity must be any, odd or even, not {other}"),
            };
            let spec = SieveSpec {
                modulus,
                u,
                sign,
                n_alpha,
                a_parity,
                b0,
            };
            // Validate first, then enumerate rows in parallel.
            congruence_sieve(&SieveSpec {
                modulus,
                ..spec.clone()
            })?;
            let rows: Vec<_> = (0..modulus)
                .into_par_iter()
                .map(|a| sieve_row(&spec, a))
                .collect();
            let mut survivors = Vec::new();
            let mut count = 0u64;
            for row in rows {
                for s in row {
                    count += 1;
                    if survivors.len() < 4096 {
                        survivors.push(s);
                    }
                }
            }
            let rep = finish_sieve(&spec, count, survivors);
            let out = report::SieveJson::of(modulus, u, sign, &rep);
            emit(&sink, json, &out, || {
                if rep.empty() {
                    out_line!(
                        sink,
                        "no survivors mod {modulus}: the configuration is impossible"
                    );
                } else {
                    out_line!(sink, "{} survivors mod {modulus}", rep.survivor_count);
                    for (p, va, vd) in &rep.forced {
                        out_line!(
                            sink,
                            "  min v_{p}(a) = {va}, min v_{p}(d) = {vd} over survivors"
                        );
                    }
                    out_line!(
                        sink,
                        "  proved divisor of gcd(a^2, d): {}",
                        rep.derived_divisor
                    );
                }
            });
            Ok(true)
        }
        Cmd::Classify { seq } => {
            let p = seq.params()?;
            let c = classify_squares(&p)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                case: &'static str,
                bound: u8,
                y1_square: bool,
                ym1_square: bool,
                gcd_a2_d: String,
            }
            let out = Out {
                schema: report::SCHEMA,
                case: match c.case {
                    CaseLabel::A => "a",
                    CaseLabel::B => "b",
                    CaseLabel::C => "c",
                },
                bound: c.bound,
                y1_square: c.y1_square,
                ym1_square: c.ym1_square,
                gcd_a2_d: report::big(&c.gcd_a2_d),
            };
            emit(&sink, json, &out, || {
                out_line!(
                    sink,
                    "case ({}), at most {} distinct squares",
                    out.case,
                    c.bound
                );
                out_line!(
                    sink,
                    "y_1 square: {}, y_-1 square: {}, gcd(a^2, d) = {}",
                    c.y1_square,
                    c.ym1_square,
                    c.gcd_a2_d
                );
            });
            Ok(true)
        }
        Cmd::Lemma313 { d_min, d_max } => {
            if d_min < 2 {
                bail!("--d-min must be at least 2");
            }
            let units: Vec<_> = (d_min..=d_max)
                .into_par_iter()
                .map(|d| Ok((d, proxy_scan_d(d, bits.min(160))?)))
                .collect::<Result<Vec<_>>>()?;
            let report = proxy_scan_combine(units);
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                min_proxy_e_ge105: Option<report::ProxyPointJson>,
                min_proxy_q_ge105: Option<report::ProxyPointJson>,
                below_one: Vec<report::ProxyPointJson>,
                violations: Vec<report::ProxyPointJson>,
            }
            let out = Out {
                schema: report::SCHEMA,
                min_proxy_e_ge105: report.min_e_ge105.as_ref().map(report::ProxyPointJson::of),
                min_proxy_q_ge105: report.min_q_ge105.as_ref().map(report::ProxyPointJson::of),
                below_one: report
                    .below_one
                    .iter()
                    .map(report::ProxyPointJson::of)
                    .collect(),
                violations: report
                    .violations
                    .iter()
                    .map(report::ProxyPointJson::of)
                    .collect(),
            };
            emit(&sink, json, &out, || {
                if let Some(p) = &report.min_e_ge105 {
                    out_line!(
                        sink,
                        "min E-proxy for d >= 105: {} at (a, d, k, x, y) = ({}, {}, {}, {}, {})",
                        p.proxy_e.to_decimal(6),
                        p.a,
                        p.d,
                        p.k,
                        p.x,
                        p.y
                    );
                }
                if let Some(p) = &report.min_q_ge105 {
                    out_line!(
                        sink,
                        "min Q-proxy for d >= 105: {} at (a, d, k, x, y) = ({}, {}, {}, {}, {})",
                        p.proxy_q.to_decimal(6),
                        p.a,
                        p.d,
                        p.k,
                        p.x,
                        p.y
                    );
                }
                out_line!(
                    sink,
                    "{} indices with E-proxy < 1 (all d <= 104)",
                    report.below_one.len()
                );
                out_line!(sink, "{} violations for d >= 105", report.violations.len());
            });
            Ok(report.violations.is_empty())
        }
        Cmd::Lemma22 { r_max } => {
            let classes = denominator_sweep(r_max);
            #[derive(serde::Serialize)]
            struct ClassOut {
                v2: u32,
                argmax_ratio1: u32,
                max_ratio1: String,
                argmax_ratio2: u32,
                max_ratio2: String,
            }
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                r_max: u32,
                classes: Vec<ClassOut>,
            }
            let to_dec =
                |q: &BigRational| Real::from_ratio(q, 160).sqrt().expect(">=0").to_decimal(8);
            let out = Out {
                schema: report::SCHEMA,
                r_max,
                classes: classes
                    .iter()
                    .map(|c| ClassOut {
                        v2: c.v2,
                        argmax_ratio1: c.argmax1,
                        max_ratio1: to_dec(&c.max1_sq.1),
                        argmax_ratio2: c.argmax2,
                        max_ratio2: to_dec(&c.max2_sq.1),
                    })
                    .collect(),
            };
            let ok = classes.iter().all(|c| {
                c.max1_sq.1 < BigRational::new(83.into(), 100.into()).pow(2)
                    && c.max2_sq.1 < BigRational::new(1.into(), 5.into()).pow(2)
            });
            emit(&sink, json, &out, || {
                for c in &out.classes {
                    out_line!(
                        sink,
                        "v2(d') = {}: ratio1 peaks at r = {} ({}), ratio2 at r = {} ({})",
                        c.v2,
                        c.argmax_ratio1,
                        c.max_ratio1,
                        c.argmax_ratio2,
                        c.max_ratio2
                    );
                }
                out_line!(sink, "caps 0.83 / 0.2 hold: {ok}");
            });
            Ok(ok)
        }
        Cmd::Examples => examples::run(json),
        Cmd::Pell { d } => {
            let sol = pell4_min(&parse_big(&d)?)?;
            #[derive(serde::Serialize)]
            struct Out {
                schema: u32,
                t: String,
                u: String,
                sign: i8,
            }
            let out = Out {
                schema: report::SCHEMA,
                t: report::big(&sol.t),
                u: report::big(&sol.u),
                sign: sol.sign,
            };
            emit(&sink, json, &out, || {
                out_line!(
                    sink,
                    "t = {}, u = {}: t^2 - d u^2 = {}4",
                    sol.t,
                    sol.u,
                    if sol.sign > 0 { "+" } else { "-" }
                );
            });
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing() {
        assert_eq!(
            parse_decimal("0.75").unwrap(),
            BigRational::new(3.into(), 4.into())
        );
        assert_eq!(
            parse_decimal("-2.5").unwrap(),
            BigRational::new((-5).into(), 2.into())
        );
        assert_eq!(
            parse_decimal("217").unwrap(),
            BigRational::from(BigInt::from(217))
        );
        assert!(parse_decimal("x").is_err());
    }
}
