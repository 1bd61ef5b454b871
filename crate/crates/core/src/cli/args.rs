use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::beta::BetaParams;
use crate::limit::{ConjugacyFault, LimitCandidate};
use crate::multiset::Bit;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Parser)]
#[command(name = "definetti", version, about = "Exact de Finetti experiments on binary urns")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Highest level K to compute.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,

    /// Upper bound accepted for --horizon and --ks.
    #[arg(long, global = true, env = "DEFINETTI_MAX_HORIZON", default_value_t = 64, hide = true)]
    pub max_horizon: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the draw-delete cone condition on every level.
    ConeVerify(SourceArgs),
    /// Extract moments, test complete monotonicity and match a candidate.
    Definetti {
        #[command(flatten)]
        source: SourceArgs,
        /// Candidate limit measure to match against.
        #[arg(long = "match", value_parser = parse_candidate)]
        target: Option<LimitCandidate>,
    },
    /// Approximant tables on the grid k/K, or the hypergeometric TV column.
    Table {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_delimiter = ',', default_value = "5,10,50")]
        ks: Vec<usize>,
        /// Tokens `K=5 p=1/2 N=10,100,1000`.
        #[arg(long, num_args = 1..)]
        hypergeom: Option<Vec<String>>,
    },
    /// One Pólya step against a coin flip under the beta prior.
    Conjugacy {
        #[arg(long)]
        black: u64,
        #[arg(long)]
        white: u64,
        #[arg(long, default_value_t = 8)]
        orders: u64,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Two-step swap test at the start state and the states it reaches.
    Exchangeable(SourceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    PosteriorShift,
}

impl From<Option<FaultArg>> for ConjugacyFault {
    fn from(f: Option<FaultArg>) -> Self {
        match f {
            Some(FaultArg::PosteriorShift) => ConjugacyFault::PosteriorShift,
            None => ConjugacyFault::None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoalgebraName {
    Polya,
    Alternating,
    Bernoulli,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long, value_enum, conflicts_with = "candidate")]
    pub coalgebra: Option<CoalgebraName>,
    #[arg(long, value_parser = parse_candidate)]
    pub candidate: Option<LimitCandidate>,
    #[arg(long, default_value_t = 1)]
    pub black: u64,
    #[arg(long, default_value_t = 1)]
    pub white: u64,
    /// Start bit of the alternating coalgebra.
    #[arg(long, value_parser = parse_bit, default_value = "0")]
    pub state: Bit,
    #[arg(long, value_parser = parse_rational_arg)]
    pub bias: Option<Rational>,
}

pub fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| format!("{s:?}: {e}"))
}

fn parse_bit(s: &str) -> Result<Bit, String> {
    s.parse().map_err(|_| format!("{s:?} is not a bit (0 or 1)"))
}

/// `lebesgue`, `point-mass:R` or `beta:A,B` with integer parameters.
pub fn parse_candidate(s: &str) -> Result<LimitCandidate, String> {
    let (kind, params) = s.split_once(':').unwrap_or((s, ""));
    let bad = |why: &str| format!("{s:?}: {why}");
    match kind {
        "lebesgue" | "uniform" if params.is_empty() => Ok(LimitCandidate::Lebesgue),
        "point-mass" => {
            let r = parse_rational(params).map_err(|e| bad(&e.to_string()))?;
            LimitCandidate::point_mass(r).map_err(|e| bad(&e.to_string()))
        }
        "beta" => {
            let (a, b) = params.split_once(',').ok_or_else(|| bad("expected beta:A,B"))?;
            let (a, b) = (a.trim(), b.trim());
            match (a.parse::<u64>(), b.parse::<u64>()) {
                (Ok(a), Ok(b)) => LimitCandidate::beta(a, b).map_err(|e| bad(&e.to_string())),
                _ => {
                    let a: f64 = a.parse().map_err(|_| bad("alpha is not a number"))?;
                    let b: f64 = b.parse().map_err(|_| bad("beta is not a number"))?;
                    BetaParams::real(a, b)
                        .map(LimitCandidate::Beta)
                        .map_err(|e| bad(&e.to_string()))
                }
            }
        }
        _ => Err(bad("expected lebesgue, point-mass:R or beta:A,B")),
    }
}
