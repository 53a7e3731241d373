//! `wdexp` command-line front end.
//!
//! Exit status: 0 on success, 1 when any bound is violated, 2 on usage or
//! validation errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounds::{max_plus_check, sharpness_suite, CheckResult, Theorem};
use crate::error::{Error, Result};
use crate::exponents::{exponents_of, is_minimal_rep, tensor_exponents, ExponentReport};
use crate::generator::{gen_model_with_stats, GenParams};
use crate::jordan::{unramified_oracle_artin, unramified_reps};
use crate::model::{validate_model, Mode, ModelInstance};
use crate::rational::Rational;
use crate::rep::parse_rep;
use crate::sweep::{run_sweep, ReportFormat, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "wdexp", version, about = "Exact exponent calculus for Weil-Deligne representations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exponents of one representation.
    Eval {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Exponents of a tensor product.
    Tensor {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short = 'a', long)]
        a: String,
        #[arg(short = 'b', long)]
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// In-model minimality of a representation.
    Minimal {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        expr: String,
        #[arg(long, default_value = "eta")]
        mode: Mode,
    },
    /// Validate a model file against the axioms.
    Validate {
        #[arg(short, long)]
        model: PathBuf,
    },
    /// Sweep the bounds over generated models.
    Check {
        #[arg(long, value_delimiter = ',', default_value = "A,AS,B,BS,C,CS")]
        theorems: Vec<Theorem>,
        #[arg(long, default_value_t = 10)]
        models: usize,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator parameters (JSON); the seed field is ignored.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        #[arg(long, default_value_t = 4)]
        max_r: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Generate a model from parameters (JSON file, defaults otherwise).
    GenModel {
        params: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Closed formula against matrix ranks for representations over `u`.
    Oracle {
        #[arg(long, default_value_t = 4)]
        max_r: u32,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
    },
    /// Max-plus pair bound and its optimal witnesses.
    Bound {
        #[arg(long)]
        d1: i64,
        #[arg(long)]
        v1: Rational,
        #[arg(long)]
        d2: i64,
        #[arg(long)]
        v2: Rational,
    },
    /// Equality-attaining witnesses.
    Sharpness {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn load_model(path: &Path) -> Result<ModelInstance> {
    let text = fs::read_to_string(path)?;
    let m = ModelInstance::from_json(&text)?;
    let report = validate_model(&m);
    if !report.ok {
        for v in &report.violations {
            eprintln!("violation {} at {:?}: {} vs {}", v.axiom, v.classes, v.lhs, v.rhs);
        }
        return Err(Error::Precondition(format!(
            "{} fails validation ({} violations)",
            path.display(),
            report.violations.len()
        )));
    }
    Ok(m)
}

fn load_params(path: Option<&Path>) -> Result<GenParams> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(GenParams::default()),
    }
}

fn show(e: &ExponentReport) -> String {
    let q = |v: &Option<Rational>| v.as_ref().map_or("undefined".to_string(), |x| x.to_string());
    format!(
        "dim={} ar={} sw={} eta={} varsigma={}",
        e.dim,
        e.ar,
        e.sw,
        q(&e.eta),
        q(&e.varsigma)
    )
}

fn print_report(e: &ExponentReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string(e).expect("report serializes"));
    } else {
        println!("{}", show(e));
    }
}

fn print_checks(rows: &[CheckResult]) {
    for r in rows {
        println!(
            "{:<10} lhs={} rhs={} holds={} equality={} x={} y={}",
            r.theorem.label(),
            r.lhs,
            r.rhs,
            r.holds,
            r.equality,
            r.inputs.x,
            r.inputs.y
        );
    }
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Eval { model, expr, json } => {
            let m = load_model(&model)?;
            let x = parse_rep(&expr, &m)?;
            print_report(&exponents_of(&x, &m)?, json);
            Ok(EXIT_OK)
        }
        Cmd::Tensor { model, a, b, json } => {
            let m = load_model(&model)?;
            let (x, y) = (parse_rep(&a, &m)?, parse_rep(&b, &m)?);
            print_report(&tensor_exponents(&x, &y, &m)?, json);
            Ok(EXIT_OK)
        }
        Cmd::Minimal { model, expr, mode } => {
            let m = load_model(&model)?;
            let x = parse_rep(&expr, &m)?;
            println!("{}", is_minimal_rep(&x, mode, &m)?);
            Ok(EXIT_OK)
        }
        Cmd::Validate { model } => {
            load_model(&model)?;
            println!("ok");
            Ok(EXIT_OK)
        }
        Cmd::Check {
            theorems,
            models,
            pairs,
            seed,
            params,
            max_terms,
            max_r,
            out,
            format,
        } => {
            let mut cfg = SweepConfig::new(theorems, models, pairs, seed);
            cfg.gen = load_params(params.as_deref())?;
            cfg.max_terms = max_terms;
            cfg.max_r = max_r;
            let report = run_sweep(&cfg)?;
            print!("{}", report.to_csv());
            if let Some(path) = out {
                let format = match format {
                    FormatArg::Json => ReportFormat::Json,
                    FormatArg::Csv => ReportFormat::Csv,
                };
                let text = match format {
                    ReportFormat::Json => report.results_json(),
                    ReportFormat::Csv => report.to_csv(),
                };
                write_out(&path, &text)?;
            }
            let bad: Vec<CheckResult> = report.results.iter().filter(|r| r.is_violation()).cloned().collect();
            if bad.is_empty() {
                Ok(EXIT_OK)
            } else {
                eprintln!("{} violations", bad.len());
                print_checks(&bad);
                Ok(EXIT_VIOLATION)
            }
        }
        Cmd::GenModel { params, seed, out } => {
            let mut p = load_params(params.as_deref())?;
            if let Some(s) = seed {
                p.seed = s;
            }
            let (m, stats) = gen_model_with_stats(&p)?;
            let text = m.to_json();
            match out {
                Some(path) => {
                    write_out(&path, &text)?;
                    println!("{} rounds={}", m.digest(), stats.rounds);
                }
                None => println!("{text}"),
            }
            Ok(EXIT_OK)
        }
        Cmd::Oracle { max_r, max_terms } => {
            if max_r == 0 {
                return Err(Error::InvalidParams("max-r must be >= 1".into()));
            }
            let m = ModelInstance::unit_only();
            let reps = unramified_reps(max_terms, max_r);
            let mismatches: Vec<String> = reps
                .par_iter()
                .flat_map_iter(|x| {
                    let m = &m;
                    reps.iter().filter_map(move |y| {
                        let formula = tensor_exponents(x, y, m).map(|e| e.ar);
                        let rank = unramified_oracle_artin(x, y);
                        match (formula, rank) {
                            (Ok(a), Ok(b)) if a == b => None,
                            (a, b) => Some(format!("{x} ⊗ {y}: formula {a:?} rank {b:?}")),
                        }
                    })
                })
                .collect();
            println!("pairs={} mismatches={}", reps.len() * reps.len(), mismatches.len());
            for line in &mismatches {
                println!("{line}");
            }
            Ok(if mismatches.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Cmd::Bound { d1, v1, d2, v2 } => {
            let r = max_plus_check(d1, &v1, d2, &v2)?;
            println!("witness x={} y={}", r.inputs.x, r.inputs.y);
            println!("v(x∨y)={} bound={} equality={}", r.lhs, r.rhs, r.equality);
            Ok(if r.holds { EXIT_OK } else { EXIT_VIOLATION })
        }
        Cmd::Sharpness { out } => {
            let rows = sharpness_suite()?;
            print_checks(&rows);
            if let Some(path) = out {
                write_out(&path, &serde_json::to_string_pretty(&rows)?)?;
            }
            let ok = rows.iter().all(|r| r.holds && r.equality);
            Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}
