use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::candidate::LimitCandidate;
use super::cone::ConePrefix;
use crate::dist::FinDist;
use crate::error::{Error, Result};
use crate::rational::{serde_str, Rational};

/// `sum_k omega_K(k) |k/K>`, a distribution on the grid `{0, 1/K, .., 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximant {
    size: usize,
    dist: FinDist<Rational>,
}

pub fn approximant(c: &ConePrefix, size: usize) -> Result<Approximant> {
    if size == 0 {
        return Err(Error::OutOfRange {
            value: "0".into(),
            range: "K >= 1".into(),
        });
    }
    let level = c.level(size).ok_or(Error::HorizonExceeded {
        requested: size,
        available: c.horizon(),
    })?;
    let n = BigInt::from(size);
    let dist = crate::dist::pushforward(|&k: &u64| Rational::new(BigInt::from(k), n.clone()), level);
    Ok(Approximant { size, dist })
}

impl Approximant {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dist(&self) -> &FinDist<Rational> {
        &self.dist
    }

    /// Every grid point `k/K` with its weight, zeros included.
    pub fn rows(&self) -> Vec<ApproxRow> {
        let n = BigInt::from(self.size);
        (0..=self.size)
            .map(|k| {
                let grid_point = Rational::new(BigInt::from(k), n.clone());
                let weight = self.dist.prob(&grid_point);
                ApproxRow {
                    size: self.size,
                    grid_point,
                    weight,
                }
            })
            .collect()
    }

    /// Mass of the closed interval `[lo, hi]`.
    pub fn mass_between(&self, lo: &Rational, hi: &Rational) -> Rational {
        self.dist
            .iter()
            .filter(|(x, _)| *x >= lo && *x <= hi)
            .map(|(_, w)| w.clone())
            .sum()
    }

    pub fn cdf(&self, t: &Rational) -> Rational {
        self.dist
            .iter()
            .take_while(|(x, _)| *x <= t)
            .map(|(_, w)| w.clone())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxRow {
    #[serde(rename = "K")]
    pub size: usize,
    #[serde(with = "serde_str")]
    pub grid_point: Rational,
    #[serde(with = "serde_str")]
    pub weight: Rational,
}

/// `max_t |F_a(t) - F_cand(t)|` over the grid.
pub fn cdf_distance(a: &Approximant, cand: &LimitCandidate, grid: &[Rational]) -> Result<Rational> {
    grid.iter().try_fold(Rational::zero(), |acc, t| {
        let gap = (a.cdf(t) - cand.cdf(t)?).abs();
        Ok(acc.max(gap))
    })
}

pub fn decile_grid() -> Vec<Rational> {
    (0..=10).map(|i| Rational::new(BigInt::from(i), BigInt::from(10))).collect()
}
