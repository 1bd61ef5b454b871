//! Urn channels: draw, draw-and-delete, binomial, multinomial and
//! hypergeometric.
//!
//! On `{0..K}` a count is the number of ones (see [`BinaryCountIso`]), and
//! a bias `r` is the probability of symbol one.
//!
//! [`BinaryCountIso`]: crate::multiset::BinaryCountIso

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dist::{pushforward, FinDist};
use crate::error::{Error, Result};
use crate::multiset::{Multiset, Symbol};
use crate::rational::{binomial_coefficient, check_probability, factorial, pow, Rational};

/// Draws one ball: `(x, phi - 1|x>)` with probability `phi(x) / |phi|`.
pub fn draw<X: Symbol>(phi: &Multiset<X>) -> Result<FinDist<(X, Multiset<X>)>> {
    let size = phi.size();
    if size == 0 {
        return Err(Error::EmptyUrn);
    }
    let size = BigInt::from(size);
    Ok(FinDist::from_normalized(phi.support().map(|(x, n)| {
        let rest = phi.remove(x).expect("x is in the support");
        ((x.clone(), rest), Rational::new(BigInt::from(n), size.clone()))
    })))
}

/// Draws one ball and forgets its colour.
pub fn draw_delete<X: Symbol>(phi: &Multiset<X>) -> Result<FinDist<Multiset<X>>> {
    Ok(pushforward(|(_, rest)| rest.clone(), &draw(phi)?))
}

/// Draw-and-delete on counts, `{0..K+1} -> {0..K}` where `from_size = K+1`:
/// `ell/(K+1) |ell-1> + (K+1-ell)/(K+1) |ell>`.
pub fn draw_delete_count(from_size: u64, ell: u64) -> Result<FinDist<u64>> {
    if from_size == 0 {
        return Err(Error::EmptyUrn);
    }
    if ell > from_size {
        return Err(Error::OutOfRange {
            value: ell.to_string(),
            range: format!("0..={from_size}"),
        });
    }
    let n = BigInt::from(from_size);
    let mut pairs = Vec::with_capacity(2);
    if ell > 0 {
        pairs.push((ell - 1, Rational::new(BigInt::from(ell), n.clone())));
    }
    pairs.push((ell, Rational::new(BigInt::from(from_size - ell), n)));
    Ok(FinDist::from_normalized(pairs))
}

/// `binomial[K](r)(k) = C(K,k) r^k (1-r)^(K-k)`.
pub fn binomial(size: u64, r: &Rational) -> Result<FinDist<u64>> {
    check_probability(r)?;
    let q = Rational::one() - r;
    Ok(FinDist::from_normalized((0..=size).map(|k| {
        let c = Rational::from_integer(binomial_coefficient(size, k));
        (k, c * pow(r, k) * pow(&q, size - k))
    })))
}

/// `multinomial[K](omega)(phi) = K! / prod phi(x)! * prod omega(x)^phi(x)`,
/// over size-`K` multisets on the support of `omega`.
pub fn multinomial<X: Symbol>(size: u64, omega: &FinDist<X>) -> FinDist<Multiset<X>> {
    let support: Vec<(X, Rational)> = omega.iter().map(|(x, w)| (x.clone(), w.clone())).collect();
    let symbols: Vec<X> = support.iter().map(|(x, _)| x.clone()).collect();
    let k_fact = factorial(size);
    let atoms = crate::multiset::multisets_of_size(&symbols, size);
    FinDist::from_normalized(atoms.into_iter().map(|phi| {
        let mut denom = BigInt::one();
        let mut w = Rational::one();
        for (x, p) in &support {
            let n = phi.count(x);
            denom *= factorial(n);
            w *= pow(p, n);
        }
        let coeff = Rational::new(k_fact.clone(), denom);
        (phi, coeff * w)
    }))
}

/// Hypergeometric `DD^N(ell)` on `{0..K}` from an urn of `K+N` balls with
/// `ell` ones: `C(ell,k) C(K+N-ell, K-k) / C(K+N, K)`.
pub fn hypergeometric(size: u64, deletions: u64, ell: u64) -> Result<FinDist<u64>> {
    let total = size + deletions;
    if ell > total {
        return Err(Error::OutOfRange {
            value: ell.to_string(),
            range: format!("0..={total}"),
        });
    }
    let denom = binomial_coefficient(total, size);
    Ok(FinDist::from_normalized((0..=size).filter_map(|k| {
        let num = binomial_coefficient(ell, k) * binomial_coefficient(total - ell, size - k);
        (!num.is_zero()).then(|| (k, Rational::new(num, denom.clone())))
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{bind, dirac, marginal_first, marginal_second};
    use crate::rational::{int, ratio};

    fn bw(b: u64, w: u64) -> Multiset<String> {
        Multiset::from_counts([("B".to_string(), b), ("W".to_string(), w)])
    }

    #[test]
    fn draw_worked_example() {
        let d = draw(&bw(3, 2)).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.prob(&("B".into(), bw(2, 2))), ratio(3, 5));
        assert_eq!(d.prob(&("W".into(), bw(3, 1))), ratio(2, 5));
        let colours = marginal_first(&d);
        assert_eq!(colours.prob(&"B".to_string()), ratio(3, 5));
        assert_eq!(marginal_second(&d), draw_delete(&bw(3, 2)).unwrap());
    }

    #[test]
    fn draw_edge_cases() {
        assert_eq!(draw(&bw(1, 0)).unwrap(), dirac(("B".to_string(), Multiset::empty())));
        let even = draw(&bw(2, 2)).unwrap();
        assert_eq!(even.prob(&("B".into(), bw(1, 2))), ratio(1, 2));
        assert_eq!(even.prob(&("W".into(), bw(2, 1))), ratio(1, 2));
        assert_eq!(draw(&Multiset::<String>::empty()), Err(Error::EmptyUrn));
        assert_eq!(draw_delete(&Multiset::<String>::empty()), Err(Error::EmptyUrn));
    }

    #[test]
    fn draw_delete_values() {
        let d = draw_delete(&bw(3, 2)).unwrap();
        assert_eq!(d.prob(&bw(2, 2)), ratio(3, 5));
        assert_eq!(d.prob(&bw(3, 1)), ratio(2, 5));
        assert_eq!(draw_delete(&bw(4, 0)).unwrap(), dirac(bw(3, 0)));
        let c = draw_delete_count(5, 2).unwrap();
        assert_eq!(c.prob(&1), ratio(2, 5));
        assert_eq!(c.prob(&2), ratio(3, 5));
        assert_eq!(draw_delete_count(5, 0).unwrap(), dirac(0));
        assert_eq!(draw_delete_count(5, 5).unwrap(), dirac(4));
        assert!(draw_delete_count(5, 6).is_err());
        assert_eq!(draw_delete_count(0, 0), Err(Error::EmptyUrn));
    }

    #[test]
    fn binomial_values() {
        let b = binomial(2, &ratio(1, 2)).unwrap();
        assert_eq!(b.prob(&0), ratio(1, 4));
        assert_eq!(b.prob(&1), ratio(1, 2));
        assert_eq!(b.prob(&2), ratio(1, 4));
        assert_eq!(binomial(5, &ratio(1, 3)).unwrap().prob(&5), ratio(1, 243));
        assert_eq!(binomial(0, &ratio(2, 7)).unwrap(), dirac(0));
        assert_eq!(binomial(3, &int(1)).unwrap(), dirac(3));
        assert!(matches!(binomial(3, &ratio(3, 2)), Err(Error::BadProbability(_))));
        assert!(matches!(binomial(3, &ratio(-1, 2)), Err(Error::BadProbability(_))));
    }

    #[test]
    fn multinomial_values() {
        let unit = multinomial(4, &dirac("x".to_string()));
        assert_eq!(unit, dirac(Multiset::from_counts([("x".to_string(), 4)])));
        let rgb = FinDist::from_weights([
            ("R".to_string(), ratio(3, 10)),
            ("G".to_string(), ratio(1, 2)),
            ("B".to_string(), ratio(1, 5)),
        ])
        .unwrap();
        let m = multinomial(3, &rgb);
        let phi = Multiset::from_counts([("R".to_string(), 1), ("G".to_string(), 2)]);
        assert_eq!(m.prob(&phi), ratio(9, 40));
        assert_eq!(m.len(), 10);
    }

    #[test]
    fn multinomial_binary_is_binomial() {
        use crate::multiset::{multisets_to_counts, Bit};
        let fair = FinDist::from_weights([(Bit::Zero, ratio(1, 2)), (Bit::One, ratio(1, 2))]).unwrap();
        let m = multisets_to_counts(&multinomial(2, &fair), 2).unwrap();
        assert_eq!(m, binomial(2, &ratio(1, 2)).unwrap());
    }

    #[test]
    fn hypergeometric_values() {
        for ell in 0..=3 {
            assert_eq!(hypergeometric(3, 0, ell).unwrap(), dirac(ell));
        }
        let h = hypergeometric(1, 1, 1).unwrap();
        assert_eq!(h.prob(&0), ratio(1, 2));
        assert_eq!(h.prob(&1), ratio(1, 2));
        assert_eq!(h, draw_delete_count(2, 1).unwrap());
        // three deletions from an urn of five with three ones
        let mut d = dirac(3u64);
        for from in [5u64, 4, 3] {
            d = bind(&d, &|l: &u64| draw_delete_count(from, *l).unwrap());
        }
        assert_eq!(hypergeometric(2, 3, 3).unwrap(), d);
        assert!(hypergeometric(2, 3, 6).is_err());
    }
}
