//! Command-line surface: every verifiable computation in the library,
//! emitted as a machine-readable report.
//!
//! Exit codes: 0 when all checks pass, 1 when a verified identity fails,
//! 2 for usage errors. Reports go to stdout; diagnostics to stderr. With a
//! fixed configuration (including `--seed`) the output is byte-identical
//! across runs. All computations live in `morlog::runner`; this binary only
//! parses arguments and maps outcomes to exit codes.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use morlog::report::{OutputFormat, Report};
use morlog::runner;
use morlog::{Error, Result};

#[derive(Parser)]
#[command(name = "morlog", version, about = "Exact arithmetic for logarithmic power operations")]
struct Cli {
    /// Output format: json, csv, or text
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the p-series of a built-in formal group law
    Pseries {
        #[arg(long)]
        prime: u64,
        /// additive, multiplicative, or honda
        #[arg(long, default_value = "multiplicative")]
        law: String,
        /// Height parameter for the honda law
        #[arg(long, default_value_t = 1)]
        height: u32,
        /// Series truncation degree
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Check the cyclotomic level structure against the p-series
    LevelCheck {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Enumerate subgroups of a finite abelian p-group
    Subgroups {
        #[arg(long)]
        prime: u64,
        /// Cyclic factor exponents, e.g. "1,1" for (Z/p)^2
        #[arg(long)]
        ranks: String,
    },
    /// Gaussian binomial row and its alternating sum
    Gauss {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        rank: u32,
    },
    /// Moebius function between the trivial and full subgroups
    Moebius {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        ranks: String,
    },
    /// The integral element e of the Burnside ring and its identities
    BurnsideE {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        rank: usize,
    },
    /// Verify the Euler-factor operator inversion on lattice vectors
    HeckeVerify {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Height-one logarithm in a built-in psi-ring family
    K1Log {
        #[arg(long)]
        prime: u64,
        /// zp, eps, or poly
        #[arg(long, default_value = "zp")]
        ring: String,
        /// Element coordinates, comma-separated integers
        #[arg(long)]
        value: String,
        #[arg(long, default_value_t = 20)]
        precision: u32,
        /// psi(eps) = p*scale*eps in the eps ring
        #[arg(long, default_value_t = 0)]
        scale: i64,
        /// Truncation order m of Z_p[t]/(t^m) in the poly ring
        #[arg(long, default_value_t = 8)]
        modulus_degree: usize,
    },
    /// Exponential inverse of the height-one logarithm
    K1Exp {
        #[arg(long)]
        prime: u64,
        /// zp, eps, or poly
        #[arg(long, default_value = "poly")]
        ring: String,
        #[arg(long)]
        value: String,
        #[arg(long, default_value_t = 16)]
        precision: u32,
        #[arg(long, default_value_t = 0)]
        scale: i64,
        #[arg(long, default_value_t = 8)]
        modulus_degree: usize,
    },
    /// Artin-Hasse exponential coefficients
    ArtinHasse {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 20)]
        degree: usize,
    },
    /// Witt components recovered from ghost components
    Witt {
        #[arg(long)]
        prime: u64,
        /// Ghost components, comma-separated integers
        #[arg(long)]
        ghosts: String,
    },
    /// Hecke rewriting of the Morava logarithm on random families
    HeckeForm {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        height: u32,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
    /// Run the full acceptance suite (criteria 1-13)
    Selftest {
        /// Run a single criterion instead of all of them
        #[arg(long)]
        only: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format.parse::<OutputFormat>() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("morlog: {e}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            print!("{}", report.render(format));
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("morlog: {e}");
            match e {
                Error::Verification(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Enumeration work bound, overridable through MORLOG_MAX_WORK.
fn max_work(default: u64) -> Result<u64> {
    match std::env::var("MORLOG_MAX_WORK") {
        Ok(s) => s
            .parse::<u64>()
            .map_err(|_| Error::usage(format!("MORLOG_MAX_WORK={s:?} is not an integer"))),
        Err(_) => Ok(default),
    }
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::usage(format!("{t:?} is not an integer")))
        })
        .collect()
}

fn parse_ranks(s: &str) -> Result<Vec<u32>> {
    let v = parse_i64_list(s)?;
    v.into_iter()
        .map(|x| {
            if (1..=64).contains(&x) {
                Ok(x as u32)
            } else {
                Err(Error::usage(format!("rank exponent {x} out of range")))
            }
        })
        .collect()
}

fn dispatch(cmd: &Cmd) -> Result<Report> {
    let burnside_work = || max_work(morlog::burnside::DEFAULT_MAX_WORK);
    match cmd {
        Cmd::Pseries {
            prime,
            law,
            height,
            degree,
        } => runner::pseries(*prime, law, *height, *degree),
        Cmd::LevelCheck { prime, degree } => runner::level_check(*prime, *degree),
        Cmd::Subgroups { prime, ranks } => {
            runner::subgroups(*prime, &parse_ranks(ranks)?, burnside_work()?)
        }
        Cmd::Gauss { prime, rank } => runner::gauss(*prime, *rank),
        Cmd::Moebius { prime, ranks } => {
            runner::moebius(*prime, &parse_ranks(ranks)?, burnside_work()?)
        }
        Cmd::BurnsideE { prime, rank } => runner::burnside_e(*prime, *rank, burnside_work()?),
        Cmd::HeckeVerify {
            prime,
            rank,
            degree,
        } => runner::hecke_verify(
            *prime,
            *rank,
            *degree,
            max_work(morlog::hecke::DEFAULT_MAX_WORK)?,
        ),
        Cmd::K1Log {
            prime,
            ring,
            value,
            precision,
            scale,
            modulus_degree,
        } => runner::k1_log_run(
            *prime,
            ring,
            &parse_i64_list(value)?,
            *precision,
            *scale,
            *modulus_degree,
        ),
        Cmd::K1Exp {
            prime,
            ring,
            value,
            precision,
            scale,
            modulus_degree,
        } => runner::k1_exp_run(
            *prime,
            ring,
            &parse_i64_list(value)?,
            *precision,
            *scale,
            *modulus_degree,
        ),
        Cmd::ArtinHasse { prime, degree } => runner::artin_hasse_run(*prime, *degree),
        Cmd::Witt { prime, ghosts } => runner::witt_run(*prime, &parse_i64_list(ghosts)?),
        Cmd::HeckeForm {
            prime,
            height,
            trials,
            seed,
        } => runner::hecke_form_run(*prime, *height, *trials, *seed, burnside_work()?),
        Cmd::Selftest { only } => runner::selftest_run(*only, true),
    }
}
