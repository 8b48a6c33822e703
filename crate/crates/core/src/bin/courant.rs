//! Verification harness CLI: runs plan files against the exact identity
//! suites and reports results deterministically.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use courant::courant::Corruption;
use courant::plan::{parse_plan, Suite};
use courant::runner::{list_checks, run_plan};

#[derive(Parser)]
#[command(
    name = "courant",
    about = "Exact verification of Courant algebroid identities over polynomial coefficients"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification plan file.
    Verify {
        /// Path to the plan file.
        plan: PathBuf,
        /// Override the plan's RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trials per check.
        #[arg(long)]
        trials: Option<u32>,
        /// Override the maximum polynomial degree of random inputs.
        #[arg(long)]
        degree: Option<u32>,
        /// Restrict to the given suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Inject a test-only corruption (flip-d-term, drop-half-pairing,
        /// drop-axiom3-term) to exercise failure reporting.
        #[arg(long)]
        corruption: Option<String>,
    },
    /// List every check id the runner can emit.
    ListChecks,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::ListChecks => {
            for (suite, check) in list_checks() {
                println!("{suite}/{check}");
            }
            ExitCode::SUCCESS
        }
        Cmd::Verify {
            plan,
            seed,
            trials,
            degree,
            suites,
            json,
            corruption,
        } => {
            let src = match std::fs::read_to_string(&plan) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", plan.display());
                    return ExitCode::from(2);
                }
            };
            let mut plan = match parse_plan(&src) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: parse failure at {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(s) = seed {
                plan.seed = s;
            }
            if let Some(t) = trials {
                if t == 0 {
                    eprintln!("error: trials must be >= 1");
                    return ExitCode::from(2);
                }
                plan.trials = t;
            }
            if let Some(d) = degree {
                plan.degree = d;
            }
            if !suites.is_empty() {
                let mut parsed: Vec<Suite> = Vec::new();
                for s in &suites {
                    match s.parse() {
                        Ok(s) => {
                            if !parsed.contains(&s) {
                                parsed.push(s);
                            }
                        }
                        Err(e) => {
                            eprintln!("error: {e}");
                            return ExitCode::from(2);
                        }
                    }
                }
                plan.suites = parsed;
            }
            if let Some(c) = corruption {
                match c.parse::<Corruption>() {
                    Ok(c) => plan.corruption = Some(c),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            let report = run_plan(&plan);
            if json {
                print!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
    }
}
