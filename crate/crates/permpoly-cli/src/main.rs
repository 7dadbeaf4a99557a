//! `permpoly` — sweeps and audits for trace-power permutation polynomials
//! over cubic extension towers.
//!
//! Exit codes: 0 success (verify: zero disagreements), 1 disagreement or
//! audit violation, 2 usage error, 3 size cap exceeded, 4 not a permutation,
//! 5 inverse round-trip failure.

mod report;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permpoly::families::Family;

use run::{CmdError, EquivSide};

#[derive(Parser)]
#[command(name = "permpoly", version, about = "permutation-polynomial family sweeps over F_{q^3}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Args)]
struct FieldArgs {
    /// characteristic (prime)
    #[arg(long)]
    p: u64,
    /// base-extension degree: q = p^m
    #[arg(long)]
    m: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one family: predicted condition vs determinant criterion vs
    /// exhaustive evaluation, with determinants per row.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// family f1..f6
        #[arg(long)]
        family: Family,
        /// Frobenius-twist exponent (f1 only)
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// sweep every unit-circle parameter
        #[arg(long, conflicts_with = "a_index")]
        a_all: bool,
        /// single unit-circle parameter by enumeration index
        #[arg(long)]
        a_index: Option<usize>,
        /// single trace exponent
        #[arg(long, conflicts_with = "s_window")]
        s: Option<u64>,
        /// inclusive exponent window A..B
        #[arg(long)]
        s_window: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// write the report to a file instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
    /// Emit the closed-form compositional inverse of one permutation
    /// instance, exhaustively verified.
    Inverse {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        a_index: usize,
        #[arg(long)]
        s: u64,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Root-count audit over the unit circle (characteristic 2).
    Lemma {
        /// which equation: 3.1 = X^{q+1}+(A+1)X+A over all A in F_{q^3}*,
        /// 3.2 = X^{q+1}+(A+1)X^q+A over A in F_q*
        #[arg(long)]
        which: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Quasi-multiplicative and linear equivalence searches between two
    /// family instances.
    Equiv {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        fam_a: Family,
        #[arg(long)]
        fam_b: Family,
        #[arg(long, default_value_t = 1)]
        k_a: u64,
        #[arg(long, default_value_t = 1)]
        k_b: u64,
        /// unit-circle index for the first instance (and the second, unless
        /// overridden)
        #[arg(long, default_value_t = 1)]
        a_index: usize,
        #[arg(long)]
        a_index_b: Option<usize>,
        #[arg(long, default_value_t = 1)]
        s: u64,
        #[arg(long)]
        s_b: Option<u64>,
        /// force both sides onto identical parameters
        #[arg(long)]
        same_params: bool,
        /// qm | linear | both
        #[arg(long, default_value = "both")]
        kind: String,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
}

fn emit(text: String, out: Option<&str>) -> Result<(), CmdError> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CmdError::Usage(format!("cannot write {path}: {e}")))?;
            f.write_all(text.as_bytes())
                .map_err(|e| CmdError::Usage(format!("cannot write {path}: {e}")))?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn csv_unsupported() -> CmdError {
    CmdError::Usage("csv output is only available for verify".into())
}

fn real_main() -> Result<i32, CmdError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            field,
            family,
            k,
            a_all,
            a_index,
            s,
            s_window,
            format,
            out,
        } => {
            let ctx = run::build_ctx(field.p, field.m)?;
            let a_sel = run::select_a(&ctx, a_all, a_index)?;
            let svals = match (s, s_window) {
                (Some(s), None) => vec![s],
                (None, Some(w)) => run::parse_window(&w)?,
                (None, None) => return Err(CmdError::Usage("pass --s or --s-window".into())),
                _ => unreachable!("clap conflicts_with"),
            };
            if svals.iter().any(|&s| s == 0) {
                return Err(CmdError::Usage("s must be >= 1".into()));
            }
            let report = run::run_verify(&ctx, family, k, a_sel, svals)?;
            let text = match format {
                Format::Human => report.render_human(),
                Format::Json => to_json(&report),
                Format::Csv => report.render_csv(),
            };
            emit(text, out.as_deref())?;
            Ok(if report.disagreements == 0 { 0 } else { 1 })
        }
        Command::Inverse {
            field,
            family,
            k,
            a_index,
            s,
            format,
            out,
        } => {
            let ctx = run::build_ctx(field.p, field.m)?;
            let report = run::run_inverse(&ctx, family, k, a_index, s)?;
            let text = match format {
                Format::Human => report.render_human(),
                Format::Json => to_json(&report),
                Format::Csv => return Err(csv_unsupported()),
            };
            emit(text, out.as_deref())?;
            Ok(0)
        }
        Command::Lemma {
            which,
            field,
            format,
            out,
        } => {
            let ctx = run::build_ctx(field.p, field.m)?;
            let report = run::run_lemma(&ctx, &which)?;
            let text = match format {
                Format::Human => report.render_human(),
                Format::Json => to_json(&report),
                Format::Csv => return Err(csv_unsupported()),
            };
            emit(text, out.as_deref())?;
            Ok(if report.violations == 0 { 0 } else { 1 })
        }
        Command::Equiv {
            field,
            fam_a,
            fam_b,
            k_a,
            k_b,
            a_index,
            a_index_b,
            s,
            s_b,
            same_params,
            kind,
            format,
            out,
        } => {
            if !["qm", "linear", "both"].contains(&kind.as_str()) {
                return Err(CmdError::Usage(format!("unknown search kind `{kind}`")));
            }
            let ctx = run::build_ctx(field.p, field.m)?;
            let side_a = EquivSide {
                family: fam_a,
                k: k_a,
                a_index,
                s,
            };
            let side_b = if same_params {
                EquivSide {
                    family: fam_b,
                    k: k_b,
                    a_index,
                    s,
                }
            } else {
                EquivSide {
                    family: fam_b,
                    k: k_b,
                    a_index: a_index_b.unwrap_or(a_index),
                    s: s_b.unwrap_or(s),
                }
            };
            let report = run::run_equiv(&ctx, side_a, side_b, &kind)?;
            let text = match format {
                Format::Human => report.render_human(),
                Format::Json => to_json(&report),
                Format::Csv => return Err(csv_unsupported()),
            };
            emit(text, out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
