//! The beta/bernoulli square at the level of moments.
//!
//! Both paths compute `E[1{outcome = o} r^j]`. The coin path draws `r` from
//! `beta(b, w)` and flips a coin of bias `r`. The urn path takes one Pólya
//! step from `(b, w)` and draws `r` from the posterior beta at the new
//! state.

use serde::{Deserialize, Serialize};

use crate::beta::{beta_mixed_moment, beta_moment, BetaParams};
use crate::coalgebra::{polya, Coalgebra, UrnState};
use crate::error::Result;
use crate::multiset::Bit;
use crate::rational::{serde_str, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugacyFault {
    #[default]
    None,
    /// Uses `beta(b+2, w)` after a one.
    PosteriorShift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyRow {
    pub outcome: u8,
    pub order: u64,
    #[serde(with = "serde_str")]
    pub coin_path: Rational,
    #[serde(with = "serde_str")]
    pub urn_path: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ConjugacyVerdict {
    Commutes,
    Mismatch {
        outcome: u8,
        order: u64,
        #[serde(with = "serde_str")]
        lhs: Rational,
        #[serde(with = "serde_str")]
        rhs: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub black: u64,
    pub white: u64,
    pub orders: u64,
    pub fault: ConjugacyFault,
    pub verdict: ConjugacyVerdict,
    pub rows: Vec<ConjugacyRow>,
}

impl ConjugacyReport {
    pub fn commutes(&self) -> bool {
        self.verdict == ConjugacyVerdict::Commutes
    }
}

fn coin_path(prior: &BetaParams, outcome: Bit, j: u64) -> Result<Rational> {
    match outcome {
        Bit::One => beta_moment(prior, j + 1),
        Bit::Zero => beta_mixed_moment(prior, j, 1),
    }
}

fn posterior(next: &UrnState, outcome: Bit, fault: ConjugacyFault) -> Result<BetaParams> {
    match (outcome, fault) {
        (Bit::One, ConjugacyFault::PosteriorShift) => BetaParams::integer(next.black() + 1, next.white()),
        _ => BetaParams::integer(next.black(), next.white()),
    }
}

/// Compares both paths for `o in {1, 0}` and `j <= orders`; the verdict names
/// the first row that differs.
pub fn conjugacy_check(black: u64, white: u64, orders: u64, fault: ConjugacyFault) -> Result<ConjugacyReport> {
    let prior = BetaParams::integer(black, white)?;
    let start = UrnState::new(black, white)?;
    let step = polya().step(&start);
    let mut rows = Vec::new();
    let mut atoms: Vec<_> = step.iter().collect();
    atoms.reverse();
    for (&(outcome, next), weight) in atoms {
        let post = posterior(&next, outcome, fault)?;
        for j in 0..=orders {
            rows.push(ConjugacyRow {
                outcome: outcome.as_u8(),
                order: j,
                coin_path: coin_path(&prior, outcome, j)?,
                urn_path: weight * beta_moment(&post, j)?,
            });
        }
    }
    let verdict = rows
        .iter()
        .find(|r| r.coin_path != r.urn_path)
        .map_or(ConjugacyVerdict::Commutes, |r| ConjugacyVerdict::Mismatch {
            outcome: r.outcome,
            order: r.order,
            lhs: r.coin_path.clone(),
            rhs: r.urn_path.clone(),
        });
    Ok(ConjugacyReport {
        black,
        white,
        orders,
        fault,
        verdict,
        rows,
    })
}
