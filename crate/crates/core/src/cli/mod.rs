//! The `definetti` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails and a
//! witness is printed, 2 on usage or input errors.

mod args;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use num_bigint::BigInt;
use serde::Serialize;

pub use args::{parse_candidate, Cli, CoalgebraName, Command, Format, SourceArgs};
use report::*;

use crate::channels::{binomial, hypergeometric};
use crate::coalgebra::{alternating, bernoulli, is_exchangeable, polya, reachable_states, BiasState, Coalgebra, Exchangeability, UrnState};
use crate::dist::total_variation;
use crate::limit::{
    approximant, check_complete_monotone, cone_from_candidate, cone_from_coalgebra, conjugacy_check, match_candidate,
    moments_from_cone, verify_cone, ConePrefix, LimitCandidate, MatchVerdict,
};
use crate::multiset::Bit;
use crate::rational::{check_probability, format_rational, parse_rational, to_decimal, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_HORIZON: usize = 8;
pub const DECIMAL_PLACES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (program name first) and runs the command without touching
/// the process's stdout.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome {
                code: EXIT_OK,
                stdout: e.render().to_string(),
                stderr: String::new(),
            }
        }
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: e.render().to_string(),
            }
        }
    };
    match dispatch(&cli) {
        Ok((passed, stdout)) => Outcome {
            code: if passed { EXIT_OK } else { EXIT_FAILED },
            stdout,
            stderr: String::new(),
        },
        Err(msg) => Outcome::usage(msg),
    }
}

type Dispatched = Result<(bool, String), String>;

fn dispatch(cli: &Cli) -> Dispatched {
    match &cli.command {
        Command::ConeVerify(src) => cone_verify(cli, src),
        Command::Definetti { source, target } => definetti(cli, source, target.as_ref()),
        Command::Table { source, ks, hypergeom } => match hypergeom {
            Some(tokens) => hypergeom_table(cli, tokens),
            None => table(cli, source, ks),
        },
        Command::Conjugacy {
            black,
            white,
            orders,
            inject_fault,
        } => {
            let r = conjugacy_check(*black, *white, *orders, (*inject_fault).into()).map_err(|e| e.to_string())?;
            let out = match cli.format {
                Format::Json => json(&r)?,
                Format::Csv => csv_rows(&r.rows)?,
            };
            Ok((r.commutes(), out))
        }
        Command::Exchangeable(src) => exchangeable(cli, src),
    }
}

enum Source {
    Polya(UrnState),
    Alternating(Bit),
    Bernoulli(BiasState),
    Candidate(LimitCandidate),
}

impl Source {
    fn resolve(a: &SourceArgs) -> Result<Self, String> {
        match (&a.coalgebra, &a.candidate) {
            (Some(CoalgebraName::Polya), _) => UrnState::new(a.black, a.white)
                .map(Source::Polya)
                .map_err(|e| e.to_string()),
            (Some(CoalgebraName::Alternating), _) => Ok(Source::Alternating(a.state)),
            (Some(CoalgebraName::Bernoulli), _) => {
                let r = a.bias.clone().ok_or("--coalgebra bernoulli needs --bias")?;
                bernoulli(r).map(|(_, s)| Source::Bernoulli(s)).map_err(|e| e.to_string())
            }
            (None, Some(c)) => Ok(Source::Candidate(c.clone())),
            (None, None) => Err("one of --coalgebra or --candidate is required".into()),
        }
    }

    fn name(&self) -> String {
        match self {
            Source::Polya(u) => format!("polya{u:?}"),
            Source::Alternating(b) => format!("alternating({b})"),
            Source::Bernoulli(s) => format!("bernoulli({})", format_rational(s.bias())),
            Source::Candidate(c) => c.name(),
        }
    }

    fn cone(&self, horizon: usize) -> Result<ConePrefix, String> {
        Ok(match self {
            Source::Polya(u) => cone_from_coalgebra(&polya(), u, horizon),
            Source::Alternating(b) => cone_from_coalgebra(&alternating(), b, horizon),
            Source::Bernoulli(s) => cone_from_coalgebra(&crate::coalgebra::Coin, s, horizon),
            Source::Candidate(c) => cone_from_candidate(c, horizon).map_err(|e| e.to_string())?,
        })
    }
}

fn horizon(cli: &Cli) -> Result<usize, String> {
    let h = cli.horizon.unwrap_or(DEFAULT_HORIZON);
    check_cap(cli, h)?;
    Ok(h)
}

fn check_cap(cli: &Cli, h: usize) -> Result<(), String> {
    if h > cli.max_horizon {
        return Err(format!(
            "horizon {h} exceeds DEFINETTI_MAX_HORIZON = {}",
            cli.max_horizon
        ));
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| e.to_string())
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn decimal(r: &Rational) -> String {
    to_decimal(r, DECIMAL_PLACES)
}

fn level_rows(c: &ConePrefix) -> Vec<LevelRow> {
    c.levels()
        .iter()
        .enumerate()
        .flat_map(|(size, d)| {
            (0..=size as u64).map(move |k| {
                let weight = d.prob(&k);
                LevelRow {
                    size,
                    ones: k,
                    weight_decimal_12: decimal(&weight),
                    weight,
                }
            })
        })
        .collect()
}

fn cone_verify(cli: &Cli, src: &SourceArgs) -> Dispatched {
    let source = Source::resolve(src)?;
    let c = source.cone(horizon(cli)?)?;
    let verdict = verify_cone(&c);
    let passed = verdict.is_ok();
    let out = match cli.format {
        Format::Json => json(&ConeReport {
            source: source.name(),
            cone: verdict,
        })?,
        Format::Csv => csv_rows(&level_rows(&c))?,
    };
    Ok((passed, out))
}

fn definetti(cli: &Cli, src: &SourceArgs, candidate: Option<&LimitCandidate>) -> Dispatched {
    let source = Source::resolve(src)?;
    let c = source.cone(horizon(cli)?)?;
    let mut report = DefinettiReport {
        source: source.name(),
        cone: verify_cone(&c),
        moments: None,
        monotonicity: None,
        candidate: candidate.map(LimitCandidate::name),
        matched: None,
    };
    if report.cone.is_ok() {
        let m = moments_from_cone(&c).map_err(|e| e.to_string())?;
        report.monotonicity = Some(check_complete_monotone(&m));
        if let Some(cand) = candidate {
            report.matched = Some(match_candidate(&c, cand).map_err(|e| e.to_string())?);
        }
        report.moments = Some(m);
    }
    let passed = report.cone.is_ok()
        && report.monotonicity.as_ref().is_some_and(|m| m.is_yes())
        && report.matched.as_ref().is_none_or(MatchVerdict::is_match);
    let out = match cli.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let rows: Vec<MomentRow> = report
                .moments
                .iter()
                .flat_map(|m| m.values().iter().enumerate())
                .map(|(size, b)| MomentRow {
                    size,
                    moment: b.clone(),
                    moment_decimal_12: decimal(b),
                })
                .collect();
            csv_rows(&rows)?
        }
    };
    Ok((passed, out))
}

fn table(cli: &Cli, src: &SourceArgs, ks: &[usize]) -> Dispatched {
    let source = Source::resolve(src)?;
    if ks.is_empty() {
        return Err("--ks needs at least one K".into());
    }
    if ks.contains(&0) {
        return Err("K = 0 has no approximant; use K >= 1".into());
    }
    let top = *ks.iter().max().expect("nonempty");
    check_cap(cli, top)?;
    let c = source.cone(top)?;
    let mut rows = Vec::new();
    for &k in ks {
        let a = approximant(&c, k).map_err(|e| e.to_string())?;
        rows.extend(a.rows().into_iter().map(|r| TableRow {
            size: r.size,
            grid_point: r.grid_point,
            weight_decimal_12: decimal(&r.weight),
            weight: r.weight,
        }));
    }
    let out = match cli.format {
        Format::Json => json(&TableReport {
            source: source.name(),
            cone: verify_cone(&c),
            rows,
        })?,
        Format::Csv => csv_rows(&rows)?,
    };
    Ok((true, out))
}

/// Parses `K=5 p=1/2 N=10,100`, tokens possibly joined by spaces.
pub fn parse_hypergeom(tokens: &[String]) -> Result<(u64, Rational, Vec<u64>), String> {
    let (mut size, mut p, mut ns) = (None, None, None);
    for tok in tokens.iter().flat_map(|t| t.split_whitespace()) {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| format!("{tok:?}: expected KEY=VALUE"))?;
        let bad = |why: &str| format!("{tok:?}: {why}");
        match key {
            "K" => size = Some(value.parse::<u64>().map_err(|_| bad("K is not an integer"))?),
            "p" => {
                let r = parse_rational(value).map_err(|e| bad(&e.to_string()))?;
                check_probability(&r).map_err(|e| bad(&e.to_string()))?;
                p = Some(r);
            }
            "N" => {
                ns = Some(
                    value
                        .split(',')
                        .map(|n| n.trim().parse::<u64>().map_err(|_| bad("N is not a list of integers")))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            _ => return Err(bad("unknown key; expected K, p or N")),
        }
    }
    match (size, p, ns) {
        (Some(k), Some(p), Some(ns)) => Ok((k, p, ns)),
        _ => Err("--hypergeom needs K=.., p=.. and N=..".into()),
    }
}

/// `round(p (K + N))`, halves rounded up.
pub fn nearest_ell(size: u64, p: &Rational, deletions: u64) -> u64 {
    let x = p * Rational::from_integer(BigInt::from(size + deletions)) + Rational::new(1.into(), 2.into());
    u64::try_from(x.floor().to_integer()).expect("ell fits in u64")
}

/// TV between `DD^N` from an urn with `round(p (K+N))` ones and `binomial(K, p)`.
pub fn hypergeom_rows(size: u64, p: &Rational, ns: &[u64]) -> Vec<HypergeomRow> {
    let target = binomial(size, p).expect("p checked");
    crate::par::map(ns, |&n| {
        let ell = nearest_ell(size, p, n);
        let tv = total_variation(&hypergeometric(size, n, ell).expect("ell <= K+N"), &target);
        HypergeomRow {
            deletions: n,
            ell,
            tv_decimal_12: decimal(&tv),
            tv,
        }
    })
}

fn hypergeom_table(cli: &Cli, tokens: &[String]) -> Dispatched {
    let (size, p, ns) = parse_hypergeom(tokens)?;
    check_cap(cli, size as usize)?;
    let rows = hypergeom_rows(size, &p, &ns);
    let decreasing = rows.windows(2).all(|w| w[1].tv < w[0].tv);
    let out = match cli.format {
        Format::Json => json(&HypergeomReport {
            size,
            p,
            strictly_decreasing: decreasing,
            rows,
        })?,
        Format::Csv => csv_rows(&rows)?,
    };
    Ok((true, out))
}

fn exchange_rows<H: Coalgebra>(h: &H, x: &H::State, depth: usize) -> Vec<StateCheck> {
    reachable_states(h, x, depth)
        .into_iter()
        .map(|st| {
            let verdict = match is_exchangeable(h, &st) {
                Exchangeability::Exchangeable => SwapVerdict::Exchangeable,
                Exchangeability::NotExchangeable(w) => SwapVerdict::NotExchangeable {
                    outcome: format!("{:?}", w.outcome),
                    state: format!("{:?}", w.state),
                    weight: w.weight,
                    swapped: format!("{:?}", w.swapped),
                    swapped_weight: w.swapped_weight,
                },
            };
            StateCheck {
                state: format!("{st:?}"),
                verdict,
            }
        })
        .collect()
}

fn exchangeable(cli: &Cli, src: &SourceArgs) -> Dispatched {
    let source = Source::resolve(src)?;
    let depth = match cli.horizon {
        Some(h) => {
            check_cap(cli, h)?;
            h.saturating_sub(2)
        }
        None => 0,
    };
    let states = match &source {
        Source::Polya(u) => exchange_rows(&polya(), u, depth),
        Source::Alternating(b) => exchange_rows(&alternating(), b, depth),
        Source::Bernoulli(s) => exchange_rows(&crate::coalgebra::Coin, s, depth),
        Source::Candidate(_) => return Err("exchangeable needs --coalgebra".into()),
    };
    let first_failure = states
        .iter()
        .find(|s| s.verdict != SwapVerdict::Exchangeable)
        .map(|s| s.verdict.clone());
    let passed = first_failure.is_none();
    let out = match cli.format {
        Format::Json => json(&ExchangeReport {
            source: source.name(),
            depth,
            states_checked: states.len(),
            verdict: first_failure.unwrap_or(SwapVerdict::Exchangeable),
        })?,
        Format::Csv => {
            let rows: Vec<StateCsvRow> = states.iter().map(StateCsvRow::from).collect();
            csv_rows(&rows)?
        }
    };
    Ok((passed, out))
}
