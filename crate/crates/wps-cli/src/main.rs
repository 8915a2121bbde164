//! `wps` — exact point counts and zeta functions of weighted projective
//! spaces over finite fields.
//!
//! Exit codes: 0 success, 2 invalid input or usage, 3 verification mismatch.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;
use wps::counting::PrimePower;
use wps::field::DEFAULT_ENUM_LIMIT;

#[derive(Parser)]
#[command(
    name = "wps",
    version,
    about = "Exact rational point counts, strata, and zeta functions of weighted projective spaces",
    after_help = "The enumeration limit for brute-force orbit runs defaults to 2^24 tuples and \
                  can be set with --limit or the WPS_ENUM_LIMIT environment variable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<std::path::PathBuf>,

    /// Tuple-enumeration ceiling for brute-force methods
    #[arg(long, global = true, value_name = "N")]
    limit: Option<u64>,
}

#[derive(Args)]
struct FieldArg {
    /// Field size q, a prime power (factored automatically)
    #[arg(long, conflicts_with_all = ["p", "alpha"])]
    q: Option<u64>,

    /// Field characteristic (use together with --a)
    #[arg(long, requires = "alpha")]
    p: Option<u64>,

    /// Extension degree, q = p^a
    #[arg(long = "a", id = "alpha", requires = "p")]
    alpha: Option<u32>,
}

impl FieldArg {
    fn resolve(&self) -> Result<PrimePower, Failure> {
        match (self.q, self.p, self.alpha) {
            (Some(q), None, None) => Ok(PrimePower::from_q(q)?),
            (None, Some(p), Some(a)) => Ok(PrimePower::new(p, a)?),
            _ => Err(Failure::Input(
                "specify the field as --q N or as --p P --a A".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count points of P_w^n over F_q (total, singular, smooth)
    Count {
        /// Comma-separated positive weights, e.g. 1,2,3,5
        #[arg(long)]
        weights: String,
        #[command(flatten)]
        field: FieldArg,
        /// Counting route: subset, burnside, bruteforce, or all
        #[arg(long, default_value = "subset")]
        method: commands::MethodArg,
    },
    /// Tabulate counts over the tower q = p^a, a = 1..=max-exp
    Tower {
        #[arg(long)]
        weights: String,
        /// Prime base of the tower
        #[arg(long)]
        p: u64,
        /// Largest exponent a
        #[arg(long, default_value_t = 5)]
        max_exp: u32,
    },
    /// Build the zeta function as a finite product and inspect it
    Zeta {
        #[arg(long)]
        weights: String,
        #[command(flatten)]
        field: FieldArg,
        /// Stratum: total, smooth, or singular
        #[arg(long, default_value = "total")]
        stratum: commands::StratumArg,
        /// Series order R: prints c_0..c_R and checks recovery for r = 1..R
        #[arg(long, default_value_t = 8)]
        series: u32,
    },
    /// Compare counts with the normalized weight vector w / gcd(w)
    Normalize {
        #[arg(long)]
        weights: String,
        #[command(flatten)]
        field: FieldArg,
        /// Also compare zeta data over extensions r = 1..R and expand Z_err
        #[arg(long, value_name = "R")]
        series: Option<u32>,
    },
    /// Compare counts after scaling all but the first weight by gamma
    Scale {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        gamma: u64,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Count points of a weighted hypersurface f = 0
    Hypersurface {
        #[arg(long)]
        weights: String,
        /// Weighted-homogeneous polynomial, e.g. "y - x^2"
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        field: FieldArg,
        /// Also verify the normalization relation for w and w / gcd(w)
        #[arg(long)]
        check_pch1: bool,
    },
    /// Cross-validate formulas, oracle, and zeta recovery over a sweep
    Verify {
        /// Largest dimension index n
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// Largest weight in the sweep
        #[arg(long, default_value_t = 6)]
        wmax: u64,
        /// Comma-separated prime powers to sweep
        #[arg(long, default_value = "2,3,4,5,7,8,9")]
        qs: String,
        /// Zeta recovery checked for r = 1..=rmax
        #[arg(long, default_value_t = 4)]
        rmax: u32,
    },
}

/// Failures with their exit codes: input problems exit 2, verification
/// mismatches exit 3.
enum Failure {
    Input(String),
    Mismatch(String),
    Io(std::io::Error),
}

impl From<wps::Error> for Failure {
    fn from(e: wps::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn enumeration_limit(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("WPS_ENUM_LIMIT")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_ENUM_LIMIT)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = enumeration_limit(cli.limit);
    let sink = output::Sink {
        format: cli.format,
        out: cli.out.clone(),
    };
    let result = match &cli.command {
        Command::Count {
            weights,
            field,
            method,
        } => commands::count(weights, field, *method, limit, &sink),
        Command::Tower {
            weights,
            p,
            max_exp,
        } => commands::tower(weights, *p, *max_exp, &sink),
        Command::Zeta {
            weights,
            field,
            stratum,
            series,
        } => commands::zeta(weights, field, *stratum, *series, &sink),
        Command::Normalize {
            weights,
            field,
            series,
        } => commands::normalize(weights, field, *series, &sink),
        Command::Scale {
            weights,
            gamma,
            field,
        } => commands::scale(weights, *gamma, field, &sink),
        Command::Hypersurface {
            weights,
            poly,
            field,
            check_pch1,
        } => commands::hypersurface(weights, poly, field, *check_pch1, limit, &sink),
        Command::Verify {
            nmax,
            wmax,
            qs,
            rmax,
        } => commands::verify(*nmax, *wmax, qs, *rmax, limit, &sink),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("verification mismatch: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::FAILURE
        }
    }
}
