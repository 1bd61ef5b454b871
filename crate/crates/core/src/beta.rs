//! The Beta function, beta moments and the beta-binomial channel.
//!
//! Integer parameters go through `B(n+1, m+1) = n! m! / (n+m+1)!` and stay
//! exact. Real parameters use log-gamma in `f64`; results agree with the
//! exact values to a relative error of [`REAL_BETA_RTOL`].
//!
//! `alpha` belongs to symbol one: `beta_binomial(K, (a, b))(k)` is the
//! probability of `k` ones.

use statrs::function::gamma::ln_gamma;

use crate::dist::FinDist;
use crate::error::{Error, Result};
use crate::rational::{binomial_coefficient, factorial, Rational};

/// Relative tolerance of the floating Beta path.
pub const REAL_BETA_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaParams {
    Integer { alpha: u64, beta: u64 },
    Real { alpha: f64, beta: f64 },
}

impl BetaParams {
    pub fn integer(alpha: u64, beta: u64) -> Result<Self> {
        if alpha == 0 || beta == 0 {
            return Err(Error::BadParams {
                alpha: alpha.to_string(),
                beta: beta.to_string(),
            });
        }
        Ok(BetaParams::Integer { alpha, beta })
    }

    /// Real parameters; integral values are kept on the real path.
    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0) {
            return Err(Error::BadParams {
                alpha: alpha.to_string(),
                beta: beta.to_string(),
            });
        }
        Ok(BetaParams::Real { alpha, beta })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BetaParams::Integer { .. })
    }

    pub fn as_f64(&self) -> (f64, f64) {
        match *self {
            BetaParams::Integer { alpha, beta } => (alpha as f64, beta as f64),
            BetaParams::Real { alpha, beta } => (alpha, beta),
        }
    }

    fn exact(&self) -> Result<(u64, u64)> {
        match *self {
            BetaParams::Integer { alpha, beta } => Ok((alpha, beta)),
            BetaParams::Real { alpha, beta } => Err(Error::InexactCandidate(format!(
                "beta({alpha}, {beta}) has non-integer parameters"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BetaValue {
    Exact(Rational),
    Approx(f64),
}

impl BetaValue {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            BetaValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            BetaValue::Approx(x) => *x,
        }
    }
}

/// `B(a, b)` for positive integers.
pub fn beta_exact(alpha: u64, beta: u64) -> Result<Rational> {
    BetaParams::integer(alpha, beta)?;
    Ok(Rational::new(
        factorial(alpha - 1) * factorial(beta - 1),
        factorial(alpha + beta - 1),
    ))
}

/// `ln B(a, b)` through log-gamma.
pub fn ln_beta(alpha: f64, beta: f64) -> f64 {
    ln_gamma(alpha) + ln_gamma(beta) - ln_gamma(alpha + beta)
}

pub fn beta_fn(p: &BetaParams) -> Result<BetaValue> {
    match *p {
        BetaParams::Integer { alpha, beta } => beta_exact(alpha, beta).map(BetaValue::Exact),
        BetaParams::Real { alpha, beta } => {
            BetaParams::real(alpha, beta)?;
            Ok(BetaValue::Approx(ln_beta(alpha, beta).exp()))
        }
    }
}

/// `E[r^j] = B(a + j, b) / B(a, b) = prod_{i<j} (a+i)/(a+b+i)`.
pub fn beta_moment(p: &BetaParams, j: u64) -> Result<Rational> {
    let (a, b) = p.exact()?;
    Ok(Rational::new(
        crate::rational::rising(a, j),
        crate::rational::rising(a + b, j),
    ))
}

/// `E[r^n (1-r)^k] = B(a + n, b + k) / B(a, b)`.
pub fn beta_mixed_moment(p: &BetaParams, n: u64, k: u64) -> Result<Rational> {
    let (a, b) = p.exact()?;
    Ok(beta_exact(a + n, b + k)? / beta_exact(a, b)?)
}

/// `betabinomial[K](a, b)(k) = C(K,k) B(a+k, b+K-k) / B(a, b)`, exact.
pub fn beta_binomial(size: u64, p: &BetaParams) -> Result<FinDist<u64>> {
    let (a, b) = p.exact().map_err(|_| {
        let (alpha, beta) = p.as_f64();
        Error::BadParams {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
        }
    })?;
    let base = beta_exact(a, b)?;
    let mut pairs = Vec::with_capacity(size as usize + 1);
    for k in 0..=size {
        let c = Rational::from_integer(binomial_coefficient(size, k));
        pairs.push((k, c * beta_exact(a + k, b + size - k)? / &base));
    }
    Ok(FinDist::from_normalized(pairs))
}

/// Floating beta-binomial weights for arbitrary positive parameters.
pub fn beta_binomial_approx(size: u64, p: &BetaParams) -> Result<Vec<f64>> {
    let (a, b) = p.as_f64();
    BetaParams::real(a, b)?;
    let base = ln_beta(a, b);
    Ok((0..=size)
        .map(|k| {
            let ln_c = ln_gamma(size as f64 + 1.0)
                - ln_gamma(k as f64 + 1.0)
                - ln_gamma((size - k) as f64 + 1.0);
            (ln_c + ln_beta(a + k as f64, b + (size - k) as f64) - base).exp()
        })
        .collect())
}

/// `B(n+1, m+1) = n! m! / (n+m+1)!` as a standalone check value.
pub fn beta_factorial_identity(n: u64, m: u64) -> Rational {
    Rational::new(factorial(n) * factorial(m), factorial(n + m + 1))
}
