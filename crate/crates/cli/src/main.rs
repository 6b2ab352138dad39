mod commands;
mod report;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use fermionant::algebra::{parse_rational, Cap, Rational};
use fermionant::covers::Convention;
use fermionant::gadgets::{search_iff_certificate, GadgetKind};
use fermionant::{Error, Result};

use commands::{load_matrix, Input};
use report::{Format, RunReport, Section};
use suites::{default_ks, run_suite, SuiteOpts, SUITES};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "fermionant", version, about = "Exact fermionant, immanant and reduction checks")]
struct Cli {
    /// Seed for every random input.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "FERMIONANT_JOBS")]
    jobs: Option<usize>,
    /// Largest n enumerated by brute force.
    #[arg(long, global = true, env = "FERMIONANT_CAP", default_value_t = fermionant::algebra::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one polynomial exactly.
    Eval {
        #[command(subcommand)]
        what: Eval,
    },
    /// Immanants (same as `eval imm`).
    Imm {
        #[command(subcommand)]
        what: Imm,
    },
    /// Run a verification suite: basics, iff, lemma1, lemma2, thm1, lemma3, prop4, appendix-b, appendix-c or all.
    Verify(VerifyArgs),
    /// Run one reduction end to end and compare with the direct value.
    Reduce {
        #[command(subcommand)]
        what: Reduce,
    },
    /// Search for and certify gadgets.
    Gadget {
        #[command(subcommand)]
        what: Gadget,
    },
}

#[derive(Args)]
struct Source {
    /// Matrix file: n, then n rows of n rationals.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Graph file: `n m`, then m lines `u v weight`.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Eval {
    Ferm {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        convention: Convention,
    },
    Imm {
        /// Comma-separated row lengths.
        #[arg(long)]
        diagram: String,
        #[command(flatten)]
        src: Source,
    },
    Ham {
        #[command(flatten)]
        src: Source,
    },
    Per {
        #[command(flatten)]
        src: Source,
    },
    Det {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand)]
enum Imm {
    Eval {
        #[arg(long)]
        diagram: String,
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    /// Restrict to one size.
    #[arg(long)]
    n: Option<usize>,
    /// k values, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    k: Vec<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
}

#[derive(Subcommand)]
enum Reduce {
    /// Hamiltonian from fermionant evaluations on replicated graphs.
    Ham {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// iff certificate to load instead of searching.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Staged modular chain on a 0/1 matrix.
    SharpP {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Ferm_2 from square two-column immanants.
    Ferm2 {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Reduction chain for a family of diagrams.
    Family {
        #[arg(long, default_value_t = 2)]
        columns: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum Gadget {
    Search {
        #[arg(long)]
        kind: GadgetKind,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Certificate output; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load a certificate and re-validate it.
    Check {
        #[arg(long)]
        cert: PathBuf,
    },
}

enum Outcome {
    Value(Rational),
    Report(RunReport),
    Text(String),
}

fn command_line() -> String {
    std::iter::once("fermionant".to_string()).chain(std::env::args().skip(1)).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cap = Cap(cli.cap);
    let report = |sections: Vec<Section>| Ok(Outcome::Report(RunReport { command: command_line(), sections }));
    match &cli.command {
        Command::Eval { what } => {
            let v = match what {
                Eval::Ferm { src, k, convention } => {
                    commands::eval_ferm(&Input::load(src.matrix.as_deref(), src.graph.as_deref())?, &parse_rational(k)?, *convention, cap)?
                }
                Eval::Imm { diagram, src } => commands::eval_imm(diagram, &Input::load(src.matrix.as_deref(), src.graph.as_deref())?, cap)?,
                Eval::Ham { src } => commands::eval_simple("ham", &Input::load(src.matrix.as_deref(), src.graph.as_deref())?)?,
                Eval::Per { src } => commands::eval_simple("per", &Input::load(src.matrix.as_deref(), src.graph.as_deref())?)?,
                Eval::Det { src } => commands::eval_simple("det", &Input::load(src.matrix.as_deref(), src.graph.as_deref())?)?,
            };
            Ok(Outcome::Value(v))
        }
        Command::Imm { what: Imm::Eval { diagram, src } } => {
            Ok(Outcome::Value(commands::eval_imm(diagram, &Input::load(src.matrix.as_deref(), src.graph.as_deref())?, cap)?))
        }
        Command::Verify(v) => {
            let ks = v.k.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            let opts = SuiteOpts { seed: cli.seed, cap, n: v.n, ks, trials: v.trials, k1: v.k1, k2: v.k2 };
            let names: Vec<&str> = if v.suite == "all" {
                // warm the shared gadget cache once instead of racing per suite
                let ks = if opts.ks.is_empty() { default_ks() } else { opts.ks.clone() };
                ks.par_iter().for_each(|k| {
                    let _ = search_iff_certificate(k);
                });
                SUITES.to_vec()
            } else if SUITES.contains(&v.suite.as_str()) {
                vec![v.suite.as_str()]
            } else {
                return Err(Error::InvalidParameter(format!("unknown suite `{}` (expected one of {}, all)", v.suite, SUITES.join(", "))));
            };
            let sections = names
                .par_iter()
                .map(|name| {
                    let t = Instant::now();
                    let s = run_suite(name, &opts);
                    eprintln!("[{name}] {:.2?}", t.elapsed());
                    s
                })
                .collect::<Result<Vec<_>>>()?;
            report(sections)
        }
        Command::Reduce { what } => match what {
            Reduce::Ham { matrix, k, cert } => report(vec![commands::reduce_ham(&load_matrix(matrix)?, &parse_rational(k)?, cert.as_deref())?]),
            Reduce::SharpP { matrix, k, modulus } => {
                let modulus = modulus
                    .as_deref()
                    .map(|m| m.parse::<BigInt>().map_err(|e| Error::Parse(format!("modulus `{m}`: {e}"))))
                    .transpose()?;
                report(vec![commands::reduce_sharp_p(&load_matrix(matrix)?, &parse_rational(k)?, modulus)?])
            }
            Reduce::Ferm2 { matrix } => report(vec![commands::reduce_ferm2(&load_matrix(matrix)?, cap)?]),
            Reduce::Family { columns, epsilon, m, trials } => {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                report(vec![commands::reduce_family(*columns, epsilon, m, *trials, &mut rng, cap)?])
            }
        },
        Command::Gadget { what } => match what {
            Gadget::Search { kind, k, out } => {
                let cert = match commands::gadget_search(*kind, &parse_rational(k)?) {
                    Ok(c) => c,
                    Err(Error::SearchExhausted { reason, partial }) => {
                        if let Some(p) = out {
                            std::fs::write(p, partial.to_json())?;
                            eprintln!("partial certificate written to {}", p.display());
                        }
                        return Err(Error::SearchExhausted { reason, partial });
                    }
                    Err(e) => return Err(e),
                };
                match out {
                    Some(p) => {
                        std::fs::write(p, cert.to_json() + "\n")?;
                        report(vec![commands::certificate_section("gadget search", &cert)])
                    }
                    None => Ok(Outcome::Text(cert.to_json())),
                }
            }
            Gadget::Check { cert } => report(vec![commands::certificate_section("gadget check", &commands::load_certificate(cert)?)]),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        // only fails when a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed {:.2?}", start.elapsed());
    let mut out = std::io::stdout().lock();
    match outcome {
        Ok(Outcome::Value(v)) => {
            let _ = writeln!(out, "{v}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Text(t)) => {
            let _ = writeln!(out, "{t}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(r)) => {
            let _ = r.write(&mut out, cli.format);
            if r.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
