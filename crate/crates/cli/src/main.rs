use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ratliff_core::bounds::buchsbaum_verdict;
use ratliff_core::rational::{format_q, parse_q};
use ratliff_core::{parse_session, run_corpus, Settings, Q};

#[derive(Parser)]
#[command(name = "ratliff", version, about = "Hilbert coefficients, Ratliff-Rush closures and stability indices of m-primary ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every ideal of a session file.
    Analyze {
        file: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long = "quotient-steps")]
        quotient_steps: Option<u32>,
        /// Print markdown tables on stdout.
        #[arg(long)]
        markdown: bool,
    },
    /// Run the embedded example corpus.
    Corpus {
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the closed-form Buchsbaum bound.
    BoundsEval {
        #[arg(long, allow_hyphen_values = true)]
        rj: i64,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        e2: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        e1j: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        e3: Q,
    },
}

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).ok_or_else(|| format!("not a rational number: {s}"))
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            file,
            json,
            seed,
            nmax,
            quotient_steps,
            markdown,
        } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return code(2);
                }
            };
            let session = match parse_session(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return code(2);
                }
            };
            let mut settings = Settings::from_session(&session);
            if let Some(s) = seed {
                settings.seed = s;
            }
            if let Some(n) = nmax {
                settings.nmax = n;
            }
            if let Some(k) = quotient_steps {
                settings.quotient_steps = k;
            }
            let report = ratliff_core::analyze(&session, &settings);
            let out = report.to_json();
            match json {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, out + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return code(2);
                    }
                }
                None if !markdown => emit(&(out + "\n")),
                None => {}
            }
            if markdown {
                emit(&report.to_markdown());
            }
            for r in &report.ideals {
                for e in &r.errors {
                    eprintln!("{}: {} stage: {}", r.name, e.stage, e.message);
                }
            }
            code(report.exit_code())
        }
        Command::Corpus { seed } => {
            let mut settings = Settings::default();
            if let Some(s) = seed {
                settings.seed = s;
            }
            let outcome = run_corpus(&settings);
            emit(&outcome.table());
            let failed = outcome.checks.iter().filter(|c| !c.pass).count();
            emit(&format!("{} checks, {} failed\n", outcome.checks.len(), failed));
            code(outcome.exit_code())
        }
        Command::BoundsEval { rj, e2, e1j, e3 } => {
            let v = buchsbaum_verdict(rj, &e2, &e1j, &e3);
            match &v.bound_value {
                Some(b) => emit(&format!("{} {}\n", v.theorem, format_q(b))),
                None => emit(&format!("{} -\n", v.theorem)),
            }
            code(0)
        }
    }
}
