use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_traits::One;

use crate::channels::draw_delete_count;
use crate::coalgebra::{iterate_accumulated, Coalgebra};
use crate::dist::{bind, marginal_first, FinDist};
use crate::error::{Error, Result};
use crate::multiset::{counts_to_multisets, multisets_to_counts, BinaryCountIso, Bit, Multiset};
use crate::par;
use crate::rational::{serde_str, Rational};

/// Levels `omega_0 .. omega_N`, one distribution on `{0..K}` per level
/// `K`, counting ones. Only the shape is checked on construction; the
/// cone condition is checked by [`verify_cone`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePrefix {
    levels: Vec<FinDist<u64>>,
}

impl ConePrefix {
    pub fn new(levels: Vec<FinDist<u64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::MalformedCone {
                level: 0,
                reason: "no levels".into(),
            });
        }
        if levels[0] != FinDist::dirac(0) {
            return Err(Error::MalformedCone {
                level: 0,
                reason: "level 0 must be the point mass on the empty urn".into(),
            });
        }
        for (size, d) in levels.iter().enumerate() {
            if let Some(k) = d.support().find(|&&k| k > size as u64) {
                return Err(Error::MalformedCone {
                    level: size,
                    reason: format!("atom {k} exceeds the level size"),
                });
            }
        }
        Ok(ConePrefix { levels })
    }

    /// Builds a prefix from distributions on size-`K` binary multisets.
    pub fn from_multisets(levels: &[FinDist<Multiset<Bit>>]) -> Result<Self> {
        let counts = levels
            .iter()
            .enumerate()
            .map(|(size, d)| multisets_to_counts(d, size as u64))
            .collect::<Result<Vec<_>>>()?;
        Self::new(counts)
    }

    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, size: usize) -> Option<&FinDist<u64>> {
        self.levels.get(size)
    }

    pub fn levels(&self) -> &[FinDist<u64>] {
        &self.levels
    }

    pub fn level_multisets(&self, size: usize) -> Result<FinDist<Multiset<Bit>>> {
        let d = self.level(size).ok_or(Error::HorizonExceeded {
            requested: size,
            available: self.horizon(),
        })?;
        counts_to_multisets(d, size as u64)
    }

    pub fn truncate(&self, horizon: usize) -> Result<Self> {
        if horizon > self.horizon() {
            return Err(Error::HorizonExceeded {
                requested: horizon,
                available: self.horizon(),
            });
        }
        Ok(ConePrefix {
            levels: self.levels[..=horizon].to_vec(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ConeVerdict {
    Ok {
        horizon: usize,
    },
    /// `lhs = omega_K(atom)`, `rhs` is the same weight recomputed from level `K+1`.
    Fail {
        level: usize,
        ones: u64,
        atom: String,
        #[serde(with = "serde_str")]
        lhs: Rational,
        #[serde(with = "serde_str")]
        rhs: Rational,
    },
}

impl ConeVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, ConeVerdict::Ok { .. })
    }

    pub(crate) fn into_error(self) -> Option<Error> {
        match self {
            ConeVerdict::Ok { .. } => None,
            ConeVerdict::Fail {
                level, atom, lhs, rhs, ..
            } => Some(Error::NotACone {
                level,
                atom,
                lhs,
                rhs,
            }),
        }
    }
}

/// `omega_{K+1}` pushed one level down:
/// `(k+1)/(K+1) omega_{K+1}(k+1) + (K+1-k)/(K+1) omega_{K+1}(k)`.
fn pulled_down(upper: &FinDist<u64>, size: u64, k: u64) -> Rational {
    let n = BigInt::from(size + 1);
    Rational::new(BigInt::from(k + 1), n.clone()) * upper.prob(&(k + 1))
        + Rational::new(BigInt::from(size + 1 - k), n) * upper.prob(&k)
}

fn check_level(c: &ConePrefix, size: usize) -> Option<ConeVerdict> {
    let lower = &c.levels[size];
    let upper = &c.levels[size + 1];
    let iso = BinaryCountIso::new(size as u64);
    (0..=size as u64).find_map(|k| {
        let lhs = lower.prob(&k);
        let rhs = pulled_down(upper, size as u64, k);
        (lhs != rhs).then(|| ConeVerdict::Fail {
            level: size,
            ones: k,
            atom: iso.to_multiset(k).expect("k <= size").to_string(),
            lhs,
            rhs,
        })
    })
}

/// Checks `DD . omega_{K+1} = omega_K` at every level below the horizon
/// and reports the lowest failing level.
pub fn verify_cone(c: &ConePrefix) -> ConeVerdict {
    par::map_range(c.horizon(), |size| check_level(c, size))
        .into_iter()
        .flatten()
        .next()
        .unwrap_or(ConeVerdict::Ok {
            horizon: c.horizon(),
        })
}

/// `bind(omega_{K+1}, DD)` on counts.
pub fn draw_delete_level(upper: &FinDist<u64>, upper_size: u64) -> Result<FinDist<u64>> {
    if upper_size == 0 {
        return Err(Error::EmptyUrn);
    }
    if let Some(k) = upper.support().find(|&&k| k > upper_size) {
        return Err(Error::OutOfRange {
            value: k.to_string(),
            range: format!("0..={upper_size}"),
        });
    }
    Ok(bind(upper, &|l: &u64| {
        draw_delete_count(upper_size, *l).expect("checked range")
    }))
}

/// Levels `h_K(x)` for `K <= horizon`.
pub fn cone_from_coalgebra<H: Coalgebra>(h: &H, x: &H::State, horizon: usize) -> ConePrefix {
    let mut levels = Vec::with_capacity(horizon + 1);
    let mut d = iterate_accumulated(h, x, 0);
    for size in 0..=horizon {
        if size > 0 {
            d = bind(&d, &|(phi, st): &(Multiset<Bit>, H::State)| {
                crate::dist::pushforward(
                    |(b, next): &(Bit, H::State)| (phi.add(*b), next.clone()),
                    &h.step(st),
                )
            });
        }
        let marg = marginal_first(&d);
        levels.push(multisets_to_counts(&marg, size as u64).expect("level has size K"));
    }
    debug_assert!(levels[0].prob(&0).is_one());
    ConePrefix { levels }
}
