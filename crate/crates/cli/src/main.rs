//! `folia`: verify Lie n-algebroid presentations of singular
//! foliations and compute their modular classes.

mod builtins;
mod presentation;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use folia_core::modular::{assemble_report, ReportOptions};
use folia_core::parse::parse_ratlog;
use folia_core::poly::Q;
use folia_core::FoliaError;

use presentation::{parse_presentation, serialize_algebroid, serialize_regular, Presentation};

#[derive(Parser)]
#[command(
    name = "folia",
    about = "exact modular-class computations for singular foliations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Presentation file path, or the literal `builtin`.
    source: String,
    /// Builtin name when the source is `builtin`.
    name: Option<String>,
    /// Dimension parameter for builtin families.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structure checks: complex, anchor morphism, higher
    /// Jacobi sweep, and optionally degree-sliced exactness.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Certify exactness of the linear part through this degree.
        #[arg(long)]
        exactness_degree: Option<u32>,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compute the modular 1-form and decide exactness.
    Modular {
        #[command(flatten)]
        source: Source,
        /// Polynomial degree bound for the exactness search.
        #[arg(long)]
        degree_bound: Option<u32>,
        /// Candidate singular point, comma-separated rationals.
        #[arg(long)]
        obstruction_point: Option<String>,
        /// Closed-form witness to verify off the declared locus.
        #[arg(long)]
        witness: Option<String>,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Bott-connection report for a regular presentation.
    Bott {
        #[command(flatten)]
        source: Source,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print a builtin presentation in the file format.
    Builtin {
        /// Builtin name.
        name: String,
        /// Dimension parameter for builtin families.
        #[arg(long)]
        n: Option<usize>,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_PARSE_ERROR: u8 = 2;
const EXIT_MISSING_BRACKET: u8 = 3;

fn load(source: &Source) -> Result<Presentation, (u8, String)> {
    if source.source == "builtin" {
        let name = source
            .name
            .as_deref()
            .ok_or((EXIT_PARSE_ERROR, "builtin requires a name".to_string()))?;
        builtins::lookup(name, source.n).map_err(|e| (EXIT_PARSE_ERROR, e))
    } else {
        let text = std::fs::read_to_string(&source.source)
            .map_err(|e| (EXIT_PARSE_ERROR, format!("{}: {e}", source.source)))?;
        parse_presentation(&text).map_err(|e| (EXIT_PARSE_ERROR, e.to_string()))
    }
}

fn source_label(source: &Source) -> String {
    if source.source == "builtin" {
        let mut s = format!("builtin {}", source.name.as_deref().unwrap_or("?"));
        if let Some(n) = source.n {
            s.push_str(&format!(" (n = {n})"));
        }
        s
    } else {
        source.source.clone()
    }
}

fn parse_point(text: &str) -> Result<Vec<Q>, String> {
    text.split(',')
        .map(|piece| {
            let piece = piece.trim();
            match piece.split_once('/') {
                Some((a, b)) => {
                    let num: num_bigint::BigInt =
                        a.trim().parse().map_err(|_| format!("bad rational {piece:?}"))?;
                    let den: num_bigint::BigInt =
                        b.trim().parse().map_err(|_| format!("bad rational {piece:?}"))?;
                    Ok(Q::new(num, den))
                }
                None => {
                    let n: num_bigint::BigInt =
                        piece.parse().map_err(|_| format!("bad rational {piece:?}"))?;
                    Ok(Q::from_integer(n))
                }
            }
        })
        .collect()
}

fn env_degree_bound() -> Option<u32> {
    std::env::var("FOLIA_DEGREE_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn run() -> Result<u8, (u8, String)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            source,
            exactness_degree,
            json,
        } => {
            let label = source_label(&source);
            let loaded = load(&source)?;
            let Presentation::Algebroid(alg, _) = loaded else {
                return Err((
                    EXIT_PARSE_ERROR,
                    "verify expects an algebroid presentation (use `bott` for regular ones)"
                        .into(),
                ));
            };
            let checks = report::run_structure_checks(&alg, exactness_degree)
                .map_err(|e| (EXIT_PARSE_ERROR, e.to_string()))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&checks.to_json()).unwrap());
            } else {
                print!("{}", checks.to_text(&label));
                for u in checks.jacobi.unchecked.iter().take(5) {
                    println!("  unchecked: {u}");
                }
                if checks.jacobi.unchecked.len() > 5 {
                    println!(
                        "  ... and {} more unchecked tuples",
                        checks.jacobi.unchecked.len() - 5
                    );
                }
            }
            Ok(if checks.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            })
        }
        Command::Modular {
            source,
            degree_bound,
            obstruction_point,
            witness,
            json,
        } => {
            let label = source_label(&source);
            let loaded = load(&source)?;
            let Presentation::Algebroid(alg, file_opts) = loaded else {
                return Err((
                    EXIT_PARSE_ERROR,
                    "modular expects an algebroid presentation".into(),
                ));
            };
            let mut options = ReportOptions {
                degree_bound: degree_bound
                    .or(env_degree_bound())
                    .or(file_opts.degree_bound)
                    .unwrap_or(6),
                obstruction_points: file_opts.obstruction_points.clone(),
                witness: None,
            };
            if let Some(text) = &obstruction_point {
                let pt = parse_point(text).map_err(|e| (EXIT_PARSE_ERROR, e))?;
                if pt.len() != alg.vars().len() {
                    return Err((
                        EXIT_PARSE_ERROR,
                        "obstruction point length must equal the variable count".into(),
                    ));
                }
                options.obstruction_points.insert(0, pt);
            }
            let witness_text = witness.or(file_opts.witness.clone());
            if let Some(text) = &witness_text {
                let w = parse_ratlog(text, alg.vars())
                    .map_err(|e| (EXIT_PARSE_ERROR, e.to_string()))?;
                options.witness = Some(w);
            }
            let structure = report::run_structure_checks(&alg, None)
                .map_err(|e| (EXIT_PARSE_ERROR, e.to_string()))?;
            let modular = assemble_report(&alg, &options).map_err(|e| match e {
                FoliaError::MissingBracket(_) => (EXIT_MISSING_BRACKET, e.to_string()),
                other => (EXIT_VERIFY_FAIL, other.to_string()),
            })?;
            if json {
                let value = report::modular_report_json(
                    &alg,
                    &structure,
                    &modular,
                    options.witness.as_ref(),
                );
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                print!("{}", report::modular_report_text(&alg, &modular, &label));
            }
            let witness_ok = modular.witness_check.as_ref().map_or(true, |w| w.passed);
            Ok(if modular.closedness.passed() && witness_ok {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            })
        }
        Command::Bott { source, json } => {
            let label = source_label(&source);
            let loaded = load(&source)?;
            let Presentation::Regular(pres, file_opts) = loaded else {
                return Err((
                    EXIT_PARSE_ERROR,
                    "bott expects a regular presentation".into(),
                ));
            };
            let vars = pres.generators[0].1.vars().clone();
            let witness = match &file_opts.witness {
                Some(text) => Some(
                    parse_ratlog(text, &vars).map_err(|e| (EXIT_PARSE_ERROR, e.to_string()))?,
                ),
                None => None,
            };
            let r = report::run_bott(&pres, witness.as_ref());
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report::bott_report_json(&r)).unwrap()
                );
            } else {
                print!("{}", report::bott_report_text(&r, &label));
            }
            Ok(if report::bott_passed(&r) {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            })
        }
        Command::Builtin { name, n } => {
            let p = builtins::lookup(&name, n).map_err(|e| (EXIT_PARSE_ERROR, e))?;
            match p {
                Presentation::Algebroid(alg, opts) => {
                    print!("{}", serialize_algebroid(&alg, &opts))
                }
                Presentation::Regular(pres, opts) => {
                    print!("{}", serialize_regular(&pres, &opts))
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
