//! Moment sequences, the difference operator, complete monotonicity and
//! reconstruction of a cone from its all-ones weights.
//!
//! All checks are finite: a sequence known up to horizon `N` is tested on
//! the triangle `k + n <= N`. Passing is necessary for being a moment
//! sequence, not sufficient.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::cone::{verify_cone, ConePrefix};
use crate::dist::FinDist;
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{binomial_coefficient, check_probability, serde_str, serde_vec, Rational};

/// `b_0 .. b_N` with `b_0 = 1` and every value in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMoments")]
pub struct MomentSeq {
    #[serde(with = "serde_vec")]
    values: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawMoments {
    #[serde(with = "serde_vec")]
    values: Vec<Rational>,
}

impl TryFrom<RawMoments> for MomentSeq {
    type Error = Error;

    fn try_from(raw: RawMoments) -> Result<Self> {
        MomentSeq::new(raw.values)
    }
}

impl MomentSeq {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        match values.first() {
            Some(b0) if b0.is_one() => {}
            Some(b0) => {
                return Err(Error::OutOfRange {
                    value: crate::rational::format_rational(b0),
                    range: "b_0 = 1".into(),
                })
            }
            None => {
                return Err(Error::OutOfRange {
                    value: "empty".into(),
                    range: "b_0 = 1".into(),
                })
            }
        }
        for v in &values {
            check_probability(v)?;
        }
        Ok(MomentSeq { values })
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, j: usize) -> Option<&Rational> {
        self.values.get(j)
    }

    pub fn truncate(&self, horizon: usize) -> Result<Self> {
        if horizon > self.horizon() {
            return Err(Error::HorizonExceeded {
                requested: horizon,
                available: self.horizon(),
            });
        }
        Ok(MomentSeq {
            values: self.values[..=horizon].to_vec(),
        })
    }
}

/// Rows `(D^k b)_n` for `k + n <= N`; row `k` has `N - k + 1` entries.
pub(crate) struct DifferenceTable {
    rows: Vec<Vec<Rational>>,
}

impl DifferenceTable {
    pub(crate) fn new(values: &[Rational]) -> Self {
        let mut rows = vec![values.to_vec()];
        while rows.last().map_or(0, Vec::len) > 1 {
            let prev = rows.last().expect("nonempty");
            let next = par::map_range(prev.len() - 1, |n| &prev[n + 1] - &prev[n]);
            rows.push(next);
        }
        DifferenceTable { rows }
    }

    pub(crate) fn get(&self, k: usize, n: usize) -> &Rational {
        &self.rows[k][n]
    }

    /// `(-1)^k (D^k b)_n`.
    pub(crate) fn signed(&self, k: usize, n: usize) -> Rational {
        let v = self.get(k, n).clone();
        if k.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }
}

/// `(D^k m)_n` where `(D a)_n = a_{n+1} - a_n`.
pub fn finite_difference(m: &MomentSeq, k: usize, n: usize) -> Result<Rational> {
    if k + n > m.horizon() {
        return Err(Error::HorizonExceeded {
            requested: k + n,
            available: m.horizon(),
        });
    }
    let mut window: Vec<Rational> = m.values[n..=n + k].to_vec();
    for _ in 0..k {
        window = window.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    Ok(window.pop().expect("one value left"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Monotonicity {
    CompletelyMonotone {
        horizon: usize,
    },
    /// `value = (-1)^k (D^k m)_n < 0`, the first violation with `k`
    /// ascending, then `n` ascending.
    Violation {
        k: usize,
        n: usize,
        #[serde(with = "serde_str")]
        value: Rational,
    },
}

impl Monotonicity {
    pub fn is_yes(&self) -> bool {
        matches!(self, Monotonicity::CompletelyMonotone { .. })
    }
}

fn monotone_in(table: &DifferenceTable, horizon: usize) -> Monotonicity {
    for k in 0..=horizon {
        for n in 0..=horizon - k {
            let value = table.signed(k, n);
            if value.is_negative() {
                return Monotonicity::Violation { k, n, value };
            }
        }
    }
    Monotonicity::CompletelyMonotone { horizon }
}

/// Checks `(-1)^k (D^k m)_n >= 0` for all `k + n <= N`.
pub fn check_complete_monotone(m: &MomentSeq) -> Monotonicity {
    monotone_in(&DifferenceTable::new(&m.values), m.horizon())
}

/// `omega_K(k) = C(K,k) (-1)^{K-k} (D^{K-k} b)_k` for `K <= horizon`.
pub(crate) fn levels_from_table(table: &DifferenceTable, horizon: usize) -> Result<Vec<FinDist<u64>>> {
    par::map_range(horizon + 1, |size| {
        FinDist::from_weights((0..=size).map(|k| {
            let c = Rational::from_integer(binomial_coefficient(size as u64, k as u64));
            (k as u64, c * table.signed(size - k, k))
        }))
    })
    .into_iter()
    .collect()
}

/// The unique cone prefix whose all-ones weights are `m`.
pub fn reconstruct_cone(m: &MomentSeq, horizon: usize) -> Result<ConePrefix> {
    let m = m.truncate(horizon)?;
    let table = DifferenceTable::new(&m.values);
    if let Monotonicity::Violation { k, n, value } = monotone_in(&table, horizon) {
        return Err(Error::NotCompletelyMonotone { k, n, value });
    }
    ConePrefix::new(levels_from_table(&table, horizon)?)
}

/// `b_K = omega_K(K)`, after checking the cone condition.
pub fn moments_from_cone(c: &ConePrefix) -> Result<MomentSeq> {
    if let Some(e) = verify_cone(c).into_error() {
        return Err(e);
    }
    let values = c
        .levels()
        .iter()
        .enumerate()
        .map(|(size, d)| d.prob(&(size as u64)))
        .collect();
    MomentSeq::new(values)
}
