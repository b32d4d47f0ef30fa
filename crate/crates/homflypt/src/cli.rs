//! Command-line front end: invariant evaluation, word products, measurement
//! curves, simulation, and the reconstruction cross-check, with CSV or JSON
//! output.
//!
//! Exit codes: 0 success, 2 usage, 3 parameter domain, 4 evaluation or
//! reduction, 5 internal.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::braidval::{
    eval_word_exact, eval_word_numeric, reconstruct_invariant, two_strand_invariant, Backend,
    Chirality, EvalError, EvalResult, OperatorWord,
};
use crate::operators::CouplingParams;
use crate::photonics::{curve, CurvePoint, NoiseModel, SimError};
use crate::ring::RingError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_EVAL: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser)]
#[command(
    name = "homflypt",
    version,
    about = "Invariants of two-strand braid closures and a photonic matrix-element simulator"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChiralityArg {
    Pos,
    Neg,
}

impl From<ChiralityArg> for Chirality {
    fn from(c: ChiralityArg) -> Self {
        match c {
            ChiralityArg::Pos => Chirality::Positive,
            ChiralityArg::Neg => Chirality::Negative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariant of the closure of n like-signed two-strand crossings.
    Eval {
        /// Crossing count (odd: torus knot, even: two-component link).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_enum, default_value = "pos")]
        chirality: ChiralityArg,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendArg,
        /// Rank parameter N (numeric backend).
        #[arg(long = "N")]
        rank: Option<i64>,
        /// Level k (numeric backend).
        #[arg(long)]
        k: Option<i64>,
        /// Divide out the framing factor (-A^2)^writhe.
        #[arg(long = "framing-writhe")]
        framing_writhe: Option<i64>,
    },
    /// Evaluate an explicit operator word, e.g. "S Td^3 Sd".
    Word {
        word: String,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendArg,
        #[arg(long = "N")]
        rank: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
    },
    /// Theory and simulated estimates of |(T_nd^n)_11| across levels.
    Curve {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long = "N")]
        rank: i64,
        #[arg(long = "k-min")]
        k_min: i64,
        #[arg(long = "k-max")]
        k_max: i64,
        #[arg(long = "sigma-theta", default_value_t = 0.0)]
        sigma_theta: f64,
        #[arg(long = "sigma-det", default_value_t = 0.0)]
        sigma_det: f64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        repeats: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "pos")]
        chirality: ChiralityArg,
    },
    /// Rebuild the exact invariant from numeric grid samples.
    Reconstruct {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_enum, default_value = "pos")]
        chirality: ChiralityArg,
    },
}

/// Entry point reading process arguments and writing to stdout/stderr.
pub fn run_std() -> i32 {
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run(std::env::args_os(), &mut out, &mut err)
}

/// Runs the CLI against explicit argument and output streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(()) => EXIT_OK,
        Err(code) => code,
    }
}

/// Test helper: captured `(exit_code, stdout, stderr)`.
pub fn run_capture(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(args.iter().copied(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf8 stdout"),
        String::from_utf8(err).expect("utf8 stderr"),
    )
}

fn fail(err: &mut dyn Write, code: i32, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    code
}

fn eval_error_code(e: &EvalError) -> i32 {
    match e {
        EvalError::Param(_) => EXIT_DOMAIN,
        EvalError::MissingParams | EvalError::InvalidInput(_) => EXIT_USAGE,
        EvalError::Basis(_)
        | EvalError::Ring(_)
        | EvalError::EmptyWord
        | EvalError::ReconstructionResidual { .. } => EXIT_EVAL,
    }
}

fn sim_error_code(e: &SimError) -> i32 {
    match e {
        SimError::Param(_) | SimError::InvalidRange { .. } => EXIT_DOMAIN,
        SimError::NotUnitary { .. } | SimError::AllZeroPower => EXIT_EVAL,
    }
}

fn params_from_flags(
    rank: Option<i64>,
    k: Option<i64>,
) -> Result<Option<CouplingParams>, CliFailure> {
    match (rank, k) {
        (Some(n), Some(k)) => Ok(Some(CouplingParams::new(n, k).map_err(|e| CliFailure {
            code: EXIT_DOMAIN,
            msg: e.to_string(),
        })?)),
        (None, None) => Ok(None),
        _ => Err(CliFailure {
            code: EXIT_USAGE,
            msg: "--N and --k must be given together".into(),
        }),
    }
}

struct CliFailure {
    code: i32,
    msg: String,
}

impl From<EvalError> for CliFailure {
    fn from(e: EvalError) -> Self {
        CliFailure {
            code: eval_error_code(&e),
            msg: e.to_string(),
        }
    }
}

impl From<SimError> for CliFailure {
    fn from(e: SimError) -> Self {
        CliFailure {
            code: sim_error_code(&e),
            msg: e.to_string(),
        }
    }
}

/// Fixed 12 decimal places; matches the documented CSV rendering.
fn fmt12(x: f64) -> String {
    format!("{x:.12}")
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "-" } else { "+" };
    format!("{}{}{}i", fmt12(z.re), sign, fmt12(z.im.abs()))
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from("k,theory_abs,p1_norm,estimated_abs,std_error\n");
    for p in points {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            p.k,
            fmt12(p.theory_abs),
            fmt12(p.p1_norm),
            fmt12(p.estimated_abs),
            fmt12(p.std_error)
        ));
    }
    s
}

pub fn curve_json(points: &[CurvePoint]) -> String {
    let rows: Vec<serde_json::Value> = points
        .iter()
        .map(|p| {
            serde_json::json!({
                "k": p.k,
                "theory_abs": p.theory_abs,
                "p1_norm": p.p1_norm,
                "estimated_abs": p.estimated_abs,
                "std_error": p.std_error,
            })
        })
        .collect();
    serde_json::Value::Array(rows).to_string()
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), i32> {
    match run_cmd(cmd, out, err) {
        Ok(()) => Ok(()),
        Err(f) => Err(fail(err, f.code, f.msg)),
    }
}

fn run_cmd(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliFailure> {
    match cmd {
        Cmd::Eval {
            n,
            chirality,
            backend,
            rank,
            k,
            framing_writhe,
        } => {
            let chirality = Chirality::from(chirality);
            match backend {
                BackendArg::Exact => {
                    let res = two_strand_invariant(n, chirality, Backend::Exact, None)?;
                    let exact = match res {
                        EvalResult::Exact(e) => e,
                        EvalResult::Numeric(_) => unreachable!(),
                    };
                    let framed = match framing_writhe {
                        None => exact.invariant.clone(),
                        Some(w) => exact.framed(w),
                    };
                    match framed.into_polynomial() {
                        Ok(poly) => writeln!(out, "{poly}").expect("write"),
                        Err(RingError::NotDivisible) => {
                            return Err(CliFailure {
                                code: EXIT_EVAL,
                                msg: format!(
                                    "NotDivisible: the exact invariant is not a Laurent polynomial: {framed}"
                                ),
                            })
                        }
                        Err(e) => return Err(EvalError::from(e).into()),
                    }
                }
                BackendArg::Numeric => {
                    let params = params_from_flags(rank, k)?.ok_or(CliFailure {
                        code: EXIT_USAGE,
                        msg: "the numeric backend requires --N and --k".into(),
                    })?;
                    let res =
                        two_strand_invariant(n, chirality, Backend::Numeric, Some(&params))?;
                    let numeric = res.as_numeric().expect("numeric backend");
                    let value = match framing_writhe {
                        None => numeric.invariant,
                        Some(w) => numeric.framed(w),
                    };
                    writeln!(out, "{}", fmt_complex(value)).expect("write");
                }
            }
            Ok(())
        }
        Cmd::Word {
            word,
            backend,
            rank,
            k,
        } => {
            let word = OperatorWord::parse(&word).map_err(|e| CliFailure {
                code: EXIT_USAGE,
                msg: e.to_string(),
            })?;
            match backend {
                BackendArg::Exact => {
                    let e = eval_word_exact(&word)?;
                    match e.polynomial() {
                        Ok(poly) => writeln!(out, "{poly}").expect("write"),
                        Err(RingError::NotDivisible) => {
                            return Err(CliFailure {
                                code: EXIT_EVAL,
                                msg: format!(
                                    "NotDivisible: the exact invariant is not a Laurent polynomial: {}",
                                    e.invariant
                                ),
                            })
                        }
                        Err(e) => return Err(EvalError::from(e).into()),
                    }
                }
                BackendArg::Numeric => {
                    let params = params_from_flags(rank, k)?.ok_or(CliFailure {
                        code: EXIT_USAGE,
                        msg: "the numeric backend requires --N and --k".into(),
                    })?;
                    let e = eval_word_numeric(&word, &params)?;
                    writeln!(out, "{}", fmt_complex(e.invariant)).expect("write");
                }
            }
            Ok(())
        }
        Cmd::Curve {
            n,
            rank,
            k_min,
            k_max,
            sigma_theta,
            sigma_det,
            repeats,
            seed,
            format,
            chirality,
        } => {
            let noise = NoiseModel {
                sigma_theta,
                sigma_det,
                repeats,
                seed,
            };
            let points = curve(n, rank, k_min, k_max, Chirality::from(chirality), &noise)?;
            match format {
                FormatArg::Csv => write!(out, "{}", curve_csv(&points)).expect("write"),
                FormatArg::Json => writeln!(out, "{}", curve_json(&points)).expect("write"),
            }
            Ok(())
        }
        Cmd::Reconstruct { n, chirality } => {
            let r = reconstruct_invariant(n, Chirality::from(chirality))?;
            // Residual goes to stderr so stdout stays comparable with `eval`.
            writeln!(err, "residual: {:e}", r.residual).expect("write");
            match r.polynomial {
                Some(poly) => {
                    writeln!(out, "{poly}").expect("write");
                    Ok(())
                }
                None => Err(CliFailure {
                    code: EXIT_EVAL,
                    msg: format!(
                        "NotDivisible: the reconstructed invariant is not a Laurent polynomial: {}",
                        r.invariant
                    ),
                }),
            }
        }
    }
}
