use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bispectral_core::{Error, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "bsl",
    version,
    about = "Exact eigenpolynomials, recurrences and Geronimus transforms"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for grid commands.
    #[arg(long, default_value_t = 1, global = true)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Differential operators: spectrum, delta table, eigenpolynomials.
    #[command(subcommand)]
    Op(OpCommand),
    /// Banded recurrences: generate a family, fit a recurrence.
    #[command(subcommand)]
    Rec(RecCommand),
    /// UL factorization, Geronimus transforms, conjugation by T.
    #[command(subcommand)]
    Darboux(DarbouxCommand),
    /// Necessary condition for transformed families.
    #[command(subcommand)]
    Test(TestCommand),
    /// Hermite program: Sigma_H, gamma sequences, tables.
    #[command(subcommand)]
    Hermite(HermiteCommand),
}

#[derive(Debug, Subcommand)]
pub enum OpCommand {
    Spectrum {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        n: usize,
    },
    Delta {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        n: usize,
    },
    Eigenpoly {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Backsub)]
        method: Method,
    },
    /// Check `L P_n = lambda_n P_n` for computed or supplied polynomials.
    Verify {
        #[arg(long)]
        op: PathBuf,
        /// Largest degree when no family is given.
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Coefficient triangle to check instead of the computed family.
        #[arg(long)]
        family: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Backsub,
    Explicit,
    Both,
}

/// Source of a banded recurrence matrix.
#[derive(Debug, Args)]
pub struct MatrixSource {
    /// Banded Hessenberg document.
    #[arg(long, conflicts_with = "hermite")]
    pub rec: Option<PathBuf>,
    /// Use the Hermite matrix with rows 0..=N.
    #[arg(long, value_name = "N")]
    pub hermite: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum RecCommand {
    Gen {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        n: usize,
    },
    Fit {
        /// Coefficient triangle of a monic family.
        #[arg(long)]
        family: PathBuf,
        #[arg(long, conflicts_with = "p_max")]
        p: Option<usize>,
        /// Try p = 1..=P_MAX and report each.
        #[arg(long)]
        p_max: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DarbouxCommand {
    Factorize {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        c: Rational,
        #[arg(long, value_parser = parse_rational)]
        gamma1: Rational,
        /// Last row of the factorization; defaults to the last row of J.
        #[arg(long)]
        n_max: Option<usize>,
        /// Reject vanishing truncation determinants.
        #[arg(long)]
        strict: bool,
    },
    Transform {
        /// JSON list of bidiagonal factors `[U, L1, ..., Lp]`.
        #[arg(long)]
        factors: PathBuf,
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        c: Rational,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        block: usize,
    },
    Conjugate {
        #[command(flatten)]
        source: MatrixSource,
        #[command(flatten)]
        gammas: GammaSource,
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct GammaSource {
    /// Comma-separated gamma_1, gamma_2, ...
    #[arg(long, value_delimiter = ',', value_parser = parse_rational, conflicts_with = "hermite_gamma1")]
    pub gammas: Option<Vec<Rational>>,
    /// Constrained Hermite sequence starting at this gamma_1.
    #[arg(long, value_parser = parse_rational)]
    pub hermite_gamma1: Option<Rational>,
}

#[derive(Debug, Subcommand)]
pub enum TestCommand {
    Necessary {
        /// Operator document; the Hermite operator when omitted.
        #[arg(long)]
        op: Option<PathBuf>,
        #[arg(long, value_parser = parse_range)]
        n_range: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range)]
        k_range: RangeInclusive<usize>,
        #[command(flatten)]
        gammas: GammaSource,
        /// Exit 2 if any value is nonzero.
        #[arg(long)]
        expect_zero: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaSelect {
    All,
    Bruteforce,
    Sum,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaKind {
    Constrained,
    General,
}

#[derive(Debug, Subcommand)]
pub enum HermiteCommand {
    Sigma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        gamma1: Rational,
        #[arg(long, value_enum, default_value_t = SigmaSelect::All)]
        mode: SigmaSelect,
    },
    Gamma {
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        gamma1: Rational,
        #[arg(long)]
        m_max: usize,
        #[arg(long, value_enum, default_value_t = GammaKind::Constrained)]
        mode: GammaKind,
        /// Required in general mode.
        #[arg(long, value_parser = parse_rational)]
        gamma2: Option<Rational>,
    },
    Table {
        #[arg(long, value_parser = parse_range)]
        n_range: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range)]
        k_range: RangeInclusive<usize>,
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        gamma1: Rational,
    },
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e: Error| e.to_string())
}

/// `a..b` or `a..=b` (both inclusive), or a single value.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bound = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad range bound {t:?}: {e}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (bound(lo)?, bound(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let v = bound(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}
