//! File-driven command-line front end.
//!
//! Verdict-bearing commands encode their outcome in the exit status so
//! shell pipelines can branch on it: 0 for a positive verdict (majorized,
//! equivalent, doubly stochastic, checks pass), 1 for a negative verdict,
//! and 2 for unreadable or invalid input. Output is deterministic
//! byte-for-byte for fixed inputs and flags; `--format structured`
//! switches every command from prose to JSON.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::demo;
use crate::format;
use crate::label::IndexLabel;
use crate::majorization::{equivalent_by_permutation, majorizes};
use crate::preserver::{
    apply_preserver, build_preserver, check_columns_equivalent, check_row_structure, decompose,
    PreserverError,
};
use crate::scalar::{PNorm, Scalar};

#[derive(Parser)]
#[command(
    name = "majorize",
    version,
    about = "Exact majorization decisions, doubly stochastic witnesses, and order-preserver analysis"
)]
struct Cli {
    /// Truncation depth for `demo shift-truncation`.
    #[arg(long, global = true, default_value_t = 6)]
    depth: u32,

    /// Norm exponent (a rational >= 1) used where a command needs one.
    #[arg(long, global = true, default_value = "2")]
    p: String,

    /// Output style: human-readable text or JSON.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the first vector is majorized by the second;
    /// prints a witness or a refutation.
    Check { f_file: PathBuf, g_file: PathBuf },
    /// Test whether two vectors are relabelings of each other and print
    /// the support bijection.
    Equiv { f_file: PathBuf, g_file: PathBuf },
    /// Validate an operator file's stochasticity and report violations.
    DsValidate { op_file: PathBuf },
    /// Compose two operator files (first applied last).
    DsCompose { a_file: PathBuf, b_file: PathBuf },
    /// Build a doubly stochastic operator from a coefficient file,
    /// rejecting bad sums with the offending index.
    DsBuild { coeff_file: PathBuf },
    /// Conjugate a doubly stochastic operator through a family of
    /// disjoint-image injections.
    Dtilde {
        op_file: PathBuf,
        injections_file: PathBuf,
    },
    /// Materialize a preserver spec over a column window.
    PreserverBuild {
        spec_file: PathBuf,
        /// Column labels of the window.
        #[arg(required = true)]
        window: Vec<String>,
    },
    /// Run the row-structure and column-equivalence checks on an operator
    /// given by columns.
    PreserverCheck { columns_file: PathBuf },
    /// Recover the weighted-injection family from an operator given by
    /// columns.
    PreserverDecompose { columns_file: PathBuf },
    /// Apply a columns-file operator to a vector.
    PreserverApply {
        columns_file: PathBuf,
        f_file: PathBuf,
    },
    /// Run one of the built-in demonstrations.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoName {
    /// Truncated geometric pair related by the shift.
    ShiftTruncation,
    /// Overlapping-image sum that fails to preserve the order.
    SumOfPreservers,
    /// Exponent-1 trace operator outside the injection-sum form.
    L1Trace,
}

/// A completed command: what to print and how to exit.
struct Outcome {
    output: String,
    code: i32,
}

impl Outcome {
    fn pass(output: String) -> Outcome {
        Outcome { output, code: 0 }
    }

    fn fail(output: String) -> Outcome {
        Outcome { output, code: 1 }
    }
}

/// An input problem: exit 2 with a diagnostic naming the offending file.
struct InputError(String);

impl InputError {
    fn in_file(path: &Path, problem: impl fmt::Display) -> InputError {
        InputError(format!("{}: {problem}", path.display()))
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::in_file(path, e))
}

fn load<T>(
    path: &Path,
    parse: impl Fn(&str) -> Result<T, format::FormatError>,
) -> Result<T, InputError> {
    parse(&read(path)?).map_err(|e| InputError::in_file(path, e))
}

/// Parses command-line arguments from the environment, runs the command,
/// prints its output, and returns the exit code.
///
/// A closed output pipe (e.g. piping into `head`) is not an error: the
/// remaining output is dropped and the verdict still reaches the caller
/// through the exit code.
pub fn run() -> i32 {
    use std::io::Write;

    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", outcome.output.trim_end_matches('\n'));
            outcome.code
        }
        Err(InputError(message)) => {
            let _ = writeln!(std::io::stderr(), "error: {message}");
            2
        }
    }
}

fn parse_p(cli: &Cli) -> Result<PNorm, InputError> {
    let value: Scalar = cli
        .p
        .parse()
        .map_err(|e| InputError(format!("--p: {e}")))?;
    PNorm::new(value).map_err(|e| InputError(format!("--p: {e}")))
}

fn execute(cli: &Cli) -> Result<Outcome, InputError> {
    let structured = cli.format == OutputFormat::Structured;
    match &cli.command {
        Command::Check { f_file, g_file } => {
            let f = load(f_file, format::parse_vector)?;
            let g = load(g_file, format::parse_vector)?;
            let certificate = majorizes(&f, &g);
            let output = if structured {
                format::render_certificate(&certificate)
            } else {
                certificate.to_string()
            };
            Ok(if certificate.is_majorized() {
                Outcome::pass(output)
            } else {
                Outcome::fail(output)
            })
        }
        Command::Equiv { f_file, g_file } => {
            let f = load(f_file, format::parse_vector)?;
            let g = load(g_file, format::parse_vector)?;
            Ok(match equivalent_by_permutation(&f, &g) {
                Some(witness) => Outcome::pass(if structured {
                    serde_json::to_string_pretty(&format::permutation_value(&witness))
                        .expect("JSON trees serialize")
                } else {
                    format!("equivalent; bijection (g support -> f support):\n{witness}")
                }),
                None => Outcome::fail(if structured {
                    serde_json::to_string_pretty(&json!({"equivalent": false}))
                        .expect("JSON trees serialize")
                } else {
                    "not equivalent".to_string()
                }),
            })
        }
        Command::DsValidate { op_file } => {
            let op = load(op_file, format::parse_operator)?;
            let verdict = op.validate();
            let output = if structured {
                serde_json::to_string_pretty(&format::verdict_value(&verdict))
                    .expect("JSON trees serialize")
            } else {
                verdict.to_string()
            };
            Ok(if verdict.doubly_stochastic {
                Outcome::pass(output)
            } else {
                Outcome::fail(output)
            })
        }
        Command::DsCompose { a_file, b_file } => {
            let a = load(a_file, format::parse_operator)?;
            let b = load(b_file, format::parse_operator)?;
            let composed = a
                .compose(&b)
                .map_err(|e| InputError(format!("cannot compose: {e}")))?;
            Ok(Outcome::pass(if structured {
                format::render_operator(&composed)
            } else {
                composed.to_string()
            }))
        }
        Command::DsBuild { coeff_file } => {
            let op = load(coeff_file, format::parse_coefficients)?;
            Ok(Outcome::pass(if structured {
                format::render_operator(&op)
            } else {
                format!("doubly stochastic\n{op}")
            }))
        }
        Command::Dtilde {
            op_file,
            injections_file,
        } => {
            let op = load(op_file, format::parse_operator)?;
            let injections = load(injections_file, format::parse_injections)?;
            let conjugated = op
                .conjugate_by_injections(&injections)
                .map_err(|e| InputError(format!("cannot conjugate: {e}")))?;
            Ok(Outcome::pass(if structured {
                format::render_operator(&conjugated)
            } else {
                conjugated.to_string()
            }))
        }
        Command::PreserverBuild { spec_file, window } => {
            let spec = load(spec_file, format::parse_preserver_spec)?;
            let window: Vec<IndexLabel> =
                window.iter().map(|l| IndexLabel::parse(l)).collect();
            let operator = build_preserver(&spec, &window)
                .map_err(|e| InputError(format!("cannot build: {e}")))?;
            Ok(Outcome::pass(if structured {
                format::render_columns(&operator)
            } else {
                operator.to_string()
            }))
        }
        Command::PreserverCheck { columns_file } => {
            let operator = load(columns_file, format::parse_columns)?;
            let rows = check_row_structure(&operator);
            let cols = check_columns_equivalent(&operator);
            let passed = rows.is_ok() && cols.is_ok();
            let describe = |r: &Result<(), crate::preserver::ViolationReport>| match r {
                Ok(()) => "pass".to_string(),
                Err(v) => v.to_string(),
            };
            let output = if structured {
                serde_json::to_string_pretty(&json!({
                    "row_structure": describe(&rows),
                    "columns_equivalent": describe(&cols),
                    "pass": passed,
                }))
                .expect("JSON trees serialize")
            } else {
                format!(
                    "row structure: {}\ncolumns equivalent: {}",
                    describe(&rows),
                    describe(&cols)
                )
            };
            Ok(if passed {
                Outcome::pass(output)
            } else {
                Outcome::fail(output)
            })
        }
        Command::PreserverDecompose { columns_file } => {
            let operator = load(columns_file, format::parse_columns)?;
            let p = parse_p(cli)?;
            match decompose(&operator, p) {
                Ok(spec) => Ok(Outcome::pass(if structured {
                    format::render_preserver_spec(&spec)
                } else {
                    spec.to_string()
                })),
                Err(PreserverError::StructureViolation(violation)) => {
                    Ok(Outcome::fail(if structured {
                        serde_json::to_string_pretty(&json!({
                            "violation": violation.to_string(),
                        }))
                        .expect("JSON trees serialize")
                    } else {
                        violation.to_string()
                    }))
                }
                Err(other) => Err(InputError(format!("cannot decompose: {other}"))),
            }
        }
        Command::PreserverApply {
            columns_file,
            f_file,
        } => {
            let operator = load(columns_file, format::parse_columns)?;
            let f = load(f_file, format::parse_vector)?;
            let image = apply_preserver(&operator, &f)
                .map_err(|e| InputError::in_file(f_file, e))?;
            Ok(Outcome::pass(if structured {
                format::render_vector(&image)
            } else {
                image.to_string()
            }))
        }
        Command::Demo { name } => {
            let output = match name {
                DemoName::ShiftTruncation => {
                    let demo = demo::shift_truncation(cli.depth);
                    if structured {
                        serde_json::to_string_pretty(&demo.to_value())
                            .expect("JSON trees serialize")
                    } else {
                        demo.render_text()
                    }
                }
                DemoName::SumOfPreservers => {
                    let demo = demo::sum_of_preservers();
                    if structured {
                        serde_json::to_string_pretty(&demo.to_value())
                            .expect("JSON trees serialize")
                    } else {
                        demo.render_text()
                    }
                }
                DemoName::L1Trace => {
                    let demo = demo::l1_trace();
                    if structured {
                        serde_json::to_string_pretty(&demo.to_value())
                            .expect("JSON trees serialize")
                    } else {
                        demo.render_text()
                    }
                }
            };
            Ok(Outcome::pass(output))
        }
    }
}
