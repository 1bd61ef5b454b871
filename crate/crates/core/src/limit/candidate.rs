use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cone::{verify_cone, ConePrefix};
use super::moments::{levels_from_table, DifferenceTable, MomentSeq};
use crate::beta::{beta_mixed_moment, beta_moment, BetaParams};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{
    binomial_coefficient, check_probability, format_rational, pow, rising, serde_str, Rational,
};

/// A measure on `[0, 1]`, represented by its exact moments.
#[derive(Clone, Debug, PartialEq)]
pub enum LimitCandidate {
    PointMass(Rational),
    Lebesgue,
    Beta(BetaParams),
    /// Known only up to the sequence's horizon.
    RawMoments(MomentSeq),
}

impl LimitCandidate {
    pub fn point_mass(r: Rational) -> Result<Self> {
        check_probability(&r)?;
        Ok(LimitCandidate::PointMass(r))
    }

    pub fn beta(alpha: u64, beta: u64) -> Result<Self> {
        Ok(LimitCandidate::Beta(BetaParams::integer(alpha, beta)?))
    }

    pub fn name(&self) -> String {
        match self {
            LimitCandidate::PointMass(r) => format!("point-mass({})", format_rational(r)),
            LimitCandidate::Lebesgue => "lebesgue".into(),
            LimitCandidate::Beta(p) => {
                let (a, b) = p.as_f64();
                format!("beta({a}, {b})")
            }
            LimitCandidate::RawMoments(m) => format!("raw-moments(horizon {})", m.horizon()),
        }
    }

    /// `E[r^j]`.
    pub fn moment(&self, j: usize) -> Result<Rational> {
        match self {
            LimitCandidate::PointMass(r) => Ok(pow(r, j as u64)),
            LimitCandidate::Lebesgue => Ok(Rational::new(1.into(), (j as u64 + 1).into())),
            LimitCandidate::Beta(p) => beta_moment(p, j as u64),
            LimitCandidate::RawMoments(m) => m.get(j).cloned().ok_or(Error::HorizonExceeded {
                requested: j,
                available: m.horizon(),
            }),
        }
    }

    pub fn moments(&self, horizon: usize) -> Result<MomentSeq> {
        if let LimitCandidate::RawMoments(m) = self {
            return m.truncate(horizon);
        }
        MomentSeq::new((0..=horizon).map(|j| self.moment(j)).collect::<Result<_>>()?)
    }

    /// Closed form of `E[r^n (1-r)^k]`, where one exists.
    pub fn closed_mixed_moment(&self, n: usize, k: usize) -> Result<Option<Rational>> {
        let (n, k) = (n as u64, k as u64);
        Ok(match self {
            LimitCandidate::PointMass(r) => Some(pow(r, n) * pow(&(Rational::one() - r), k)),
            // B(n+1, k+1) = n! k! / (n+k+1)!
            LimitCandidate::Lebesgue => Some(Rational::new(
                crate::rational::factorial(n) * crate::rational::factorial(k),
                crate::rational::factorial(n + k + 1),
            )),
            LimitCandidate::Beta(p) => Some(beta_mixed_moment(p, n, k)?),
            LimitCandidate::RawMoments(_) => None,
        })
    }

    /// Exact CDF `mu([0, t])`, for point masses and Lebesgue measure.
    pub fn cdf(&self, t: &Rational) -> Result<Rational> {
        match self {
            LimitCandidate::PointMass(r) => Ok(if t >= r { Rational::one() } else { Rational::zero() }),
            LimitCandidate::Lebesgue => Ok(t.clone().max(Rational::zero()).min(Rational::one())),
            other => Err(Error::InexactCandidate(format!(
                "{} has no exact rational CDF",
                other.name()
            ))),
        }
    }
}

/// Exact cone prefix `binomial[K] . c` for `K <= horizon`, built from the
/// candidate's moments through `C(K,k) (-1)^{K-k} (D^{K-k} m)_k`.
pub fn cone_from_candidate(c: &LimitCandidate, horizon: usize) -> Result<ConePrefix> {
    if let LimitCandidate::Beta(p) = c {
        if !p.is_exact() {
            return Err(Error::InexactCandidate(c.name()));
        }
    }
    let m = c.moments(horizon)?;
    let table = DifferenceTable::new(m.values());
    ConePrefix::new(levels_from_table(&table, horizon)?)
}

/// `E[r^n (1-r)^k]` by two routes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedMoment {
    #[serde(with = "crate::rational::serde_opt")]
    pub closed_form: Option<Rational>,
    #[serde(with = "serde_str")]
    pub from_differences: Rational,
}

impl MixedMoment {
    pub fn agrees(&self) -> bool {
        self.closed_form
            .as_ref()
            .is_none_or(|c| *c == self.from_differences)
    }
}

/// `int x^n (1-x)^k dmu = (-1)^k (D^k m)_n`, alongside the closed form.
pub fn mixed_moment(c: &LimitCandidate, n: usize, k: usize) -> Result<MixedMoment> {
    if let LimitCandidate::Beta(p) = c {
        if !p.is_exact() {
            return Err(Error::InexactCandidate(c.name()));
        }
    }
    let m = c.moments(n + k)?;
    let d = super::moments::finite_difference(&m, k, n)?;
    let signed = if k.is_multiple_of(2) { d } else { -d };
    Ok(MixedMoment {
        closed_form: c.closed_mixed_moment(n, k)?,
        from_differences: signed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MatchVerdict {
    Match {
        horizon: usize,
    },
    /// `lhs = omega_K(k)` from the cone, `rhs` from the candidate.
    Mismatch {
        level: usize,
        ones: u64,
        #[serde(with = "serde_str")]
        lhs: Rational,
        #[serde(with = "serde_str")]
        rhs: Rational,
    },
}

impl MatchVerdict {
    pub fn is_match(&self) -> bool {
        matches!(self, MatchVerdict::Match { .. })
    }
}

/// Checks `omega_K(k) = C(K,k) (-1)^{K-k} (D^{K-k} m)_k` at every level,
/// with `m` the candidate's moments.
pub fn match_candidate(c: &ConePrefix, cand: &LimitCandidate) -> Result<MatchVerdict> {
    if let LimitCandidate::Beta(p) = cand {
        if !p.is_exact() {
            return Err(Error::InexactCandidate(cand.name()));
        }
    }
    if let Some(e) = verify_cone(c).into_error() {
        return Err(e);
    }
    let horizon = c.horizon();
    let m = cand.moments(horizon)?;
    let table = DifferenceTable::new(m.values());
    let found = par::map_range(horizon + 1, |size| {
        let level = c.level(size).expect("size <= horizon");
        (0..=size).find_map(|k| {
            let lhs = level.prob(&(k as u64));
            let rhs = Rational::from_integer(binomial_coefficient(size as u64, k as u64))
                * table.signed(size - k, k);
            (lhs != rhs).then_some(MatchVerdict::Mismatch {
                level: size,
                ones: k as u64,
                lhs,
                rhs,
            })
        })
    });
    Ok(found
        .into_iter()
        .flatten()
        .next()
        .unwrap_or(MatchVerdict::Match { horizon }))
}

/// `prod_{i<K} (b+i)/(b+w+i)`, the all-ones probability of a Pólya urn.
pub fn polya_all_ones(black: u64, white: u64, size: u64) -> Rational {
    Rational::new(rising(black, size), rising(black + white, size))
}
