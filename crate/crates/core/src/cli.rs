//! `spcert` command-line front end.
//!
//! Exit status: 0 when every verdict backed by a theorem passed, 1 when an
//! internal invariant failed, 2 for usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::certify::{certify, stats, SumProductStats, DEFAULT_RETRIES};
use crate::dyadic::{dyadic_decompose, select_popular_class, SelectionVerdict};
use crate::error::Error;
use crate::generate::{generate, Family, GenParams};
use crate::setcore::{direction_tally, energy_oracle, tally_invariants, ComplexSet, ORACLE_CAP};
use crate::setfile::{format_set_file, parse_element, parse_set_file};
use crate::sweep::{run_sweep, to_csv, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "spcert",
    version,
    about = "Sum-product statistics and injection certificates over Q(i)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated set file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Ratio for `gp`, in set-file syntax.
        #[arg(long, default_value = "2")]
        ratio: String,
        /// Numerator/denominator bound for `random`.
        #[arg(long, default_value_t = 8)]
        bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sizes, energy, the Cauchy–Schwarz check and the dyadic summary.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare the direction-tally energy with brute-force enumeration.
    OracleCheck {
        file: PathBuf,
        #[arg(long, default_value_t = ORACLE_CAP)]
        cap: usize,
    },
    /// Run the full construction and emit the certificate as JSON.
    Certify {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify every size of a family in a range and write CSV rows.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "2")]
        ratio: String,
        #[arg(long, default_value_t = 8)]
        bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Serialize)]
struct ClassSummary {
    k: u32,
    directions: usize,
    min_nu: u64,
    max_nu: u64,
    mass: u64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    #[serde(flatten)]
    stats: SumProductStats,
    directions: usize,
    classes: Vec<ClassSummary>,
    selected_k: u32,
    selected_mass: u64,
    selection: SelectionVerdict,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GenericityExhausted { .. } | Error::HemisphereExhausted { .. } => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn read_set(path: &Path) -> Result<ComplexSet, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_set_file(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn gen_params(ratio: &str, bound: u32) -> Result<GenParams, Failure> {
    let ratio = parse_element(ratio).map_err(|e| usage(format!("--ratio: {e}")))?;
    Ok(GenParams { ratio, bound })
}

fn analyze(a: &ComplexSet) -> (AnalyzeReport, bool) {
    let tally = direction_tally(a);
    let classes = dyadic_decompose(&tally);
    let (selected, selection) = select_popular_class(&classes, a.len());
    let stats = stats(a);
    let ok = stats.eq1.holds
        && stats.theorem_bound != Some(false)
        && selection.pigeonhole
        && selection.provable_bound
        && selected.is_twofold_comparable()
        && tally_invariants(&tally, a).is_ok();
    let report = AnalyzeReport {
        stats,
        directions: tally.len(),
        classes: classes
            .iter()
            .map(|c| ClassSummary {
                k: c.k,
                directions: c.members.len(),
                min_nu: c.min_nu(),
                max_nu: c.max_nu(),
                mass: c.mass,
            })
            .collect(),
        selected_k: selected.k,
        selected_mass: selected.mass,
        selection,
    };
    (report, ok)
}

fn show_opt(v: Option<bool>) -> String {
    v.map_or_else(|| "n/a".to_string(), |b| b.to_string())
}

fn write_analysis(out: &mut dyn Write, r: &AnalyzeReport) -> std::io::Result<()> {
    let s = &r.stats;
    writeln!(out, "|A| = {}", s.size)?;
    writeln!(out, "|A+A| = {}", s.sumset_size)?;
    writeln!(out, "|A.A| = {}", s.productset_size)?;
    writeln!(out, "E = {}", s.energy)?;
    writeln!(out, "directions |T| = {}", r.directions)?;
    writeln!(
        out,
        "cauchy-schwarz: {} ({})",
        s.eq1,
        if s.eq1.holds { "holds" } else { "VIOLATED" }
    )?;
    for c in &r.classes {
        writeln!(
            out,
            "class k={}: {} directions, nu in [{}, {}], mass {}",
            c.k, c.directions, c.min_nu, c.max_nu, c.mass
        )?;
    }
    writeln!(out, "selected k={} mass={}", r.selected_k, r.selected_mass)?;
    writeln!(
        out,
        "pigeonhole: {}  provable bound: {}  2*log2 bound: {}",
        r.selection.pigeonhole,
        r.selection.provable_bound,
        show_opt(r.selection.log_style_bound)
    )?;
    writeln!(out, "theorem bound (c = 1/64): {}", show_opt(s.theorem_bound))?;
    if let (Some(c), Some(e)) = (s.effective_constant, s.effective_exponent) {
        writeln!(out, "effective constant: {c:.6}  effective exponent: {e:.6}")?;
    }
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| usage(e.to_string());
    match cmd {
        Command::Gen {
            family,
            n,
            ratio,
            bound,
            seed,
            out: path,
        } => {
            let params = gen_params(&ratio, bound)?;
            let a = generate(family, n, &params, seed)?;
            let header = format!("# family={} n={n} seed={seed}\n", family.name());
            write_file(&path, &(header + &format_set_file(&a)))?;
            writeln!(out, "wrote {} elements to {}", a.len(), path.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Analyze { file, json } => {
            let a = read_set(&file)?;
            let (report, ok) = analyze(&a);
            if json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                writeln!(out, "{text}").map_err(io)?;
            } else {
                write_analysis(out, &report).map_err(io)?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
        }
        Command::OracleCheck { file, cap } => {
            let a = read_set(&file)?;
            let oracle = energy_oracle(&a, cap)?;
            let fast = direction_tally(&a).energy();
            if fast == oracle {
                writeln!(out, "{fast} == {oracle}").map_err(io)?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "{fast} != {oracle}").map_err(io)?;
                Ok(EXIT_INVARIANT)
            }
        }
        Command::Certify {
            file,
            seed,
            retries,
            out: path,
        } => {
            let a = read_set(&file)?;
            let cert = certify(&a, seed, retries)?;
            let json = cert.to_json();
            match path {
                Some(p) => write_file(&p, &(json + "\n"))?,
                None => writeln!(out, "{json}").map_err(io)?,
            }
            Ok(if cert.theorems_hold() { EXIT_OK } else { EXIT_INVARIANT })
        }
        Command::Sweep {
            family,
            n_min,
            n_max,
            ratio,
            bound,
            seed,
            retries,
            csv,
        } => {
            let params = gen_params(&ratio, bound)?;
            let cfg = SweepConfig {
                family,
                n_min,
                n_max,
                params,
                seed,
                retries,
            };
            let rows = run_sweep(&cfg)?;
            write_file(&csv, &to_csv(&rows))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), csv.display()).map_err(io)?;
            Ok(if rows.iter().all(|r| r.theorems_hold) {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            })
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "spcert: {}", f.msg);
            f.code
        }
    }
}
