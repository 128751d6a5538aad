use std::process::ExitCode;

use bvcalc_cli::eval::{EvalError, EvalRequest};
use bvcalc_cli::report::Report;
use bvcalc_cli::suites;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bvcalc", version, about = "Exact BV calculus on odd symplectic superspace")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operator to expressions and print the canonical result.
    Eval {
        /// One of laplacian, bracket, delta_mu, delta_s, canonical, hat,
        /// tilde, div, ham, berezinian, restrict, integrate.
        op: Option<String>,
        exprs: Vec<String>,
        #[arg(long)]
        pairs: Option<usize>,
        /// One letter per pair: 'o' keeps x_i odd, 'e' makes it even.
        #[arg(long)]
        pattern: Option<String>,
        /// Comma-separated even parameters such as `t`.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Reference density as `c*exp(S)`.
        #[arg(long)]
        mu: Option<String>,
        /// Density weight for delta_s.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Gauge fermion for restrict and integrate.
        #[arg(long)]
        psi: Option<String>,
        /// Read the request from a JSON record; flags override its fields.
        #[arg(long)]
        spec: Option<std::path::PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run a property suite and report every case.
    Check {
        suite: String,
        #[arg(long, env = "BVCALC_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("bvcalc: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Eval { op, exprs, pairs, pattern, params, mu, s, psi, spec, json } => {
            let mut req = match spec {
                Some(path) => {
                    let text = match std::fs::read_to_string(&path) {
                        Ok(t) => t,
                        Err(e) => return fail(2, format!("{}: {e}", path.display())),
                    };
                    match serde_json::from_str::<EvalRequest>(&text) {
                        Ok(r) => r,
                        Err(e) => return fail(2, format!("{}: {e}", path.display())),
                    }
                }
                None => EvalRequest::default(),
            };
            if let Some(op) = op {
                req.op = op;
            }
            if !exprs.is_empty() {
                req.exprs = exprs;
            }
            if let Some(n) = pairs {
                req.pairs = n;
            }
            if !params.is_empty() {
                req.params = params;
            }
            req.pattern = pattern.or(req.pattern);
            req.mu = mu.or(req.mu);
            req.s = s.or(req.s);
            req.psi = psi.or(req.psi);
            let out = if json {
                req.record().map(|r| serde_json::to_string_pretty(&r).expect("record serialises"))
            } else {
                req.run()
            };
            match out {
                Ok(text) => {
                    println!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(exit_code(&e), e),
            }
        }
        Command::Check { suite, seed, size, json } => {
            let names: Vec<&str> = if suite == "all" { suites::SUITES.to_vec() } else { vec![suite.as_str()] };
            let Some(cases) = suites::run(&names, seed, size) else {
                return fail(2, format!("unknown suite {suite:?}; expected one of {}, all", suites::SUITES.join(", ")));
            };
            let report = Report::new(&suite, seed, size, cases);
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn exit_code(e: &EvalError) -> u8 {
    e.exit_code() as u8
}
