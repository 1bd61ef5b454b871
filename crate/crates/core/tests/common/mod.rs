//! Generators and property checks shared by the property suite and the
//! acceptance harness.

#![allow(dead_code)]

use std::collections::BTreeMap;

use definetti::coalgebra::{
    accumulate_ordered, bernoulli, iterate_accumulated, iterate_ordered, polya, Coalgebra, UrnState,
};
use definetti::dist::{bind, dirac, FinDist, Kernel};
use definetti::multiset::{accumulate, Bit};
use definetti::rational::ratio;
use definetti::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const ATOMS: u64 = 6;

/// Weights `w_i / sum w`, atoms drawn from `0..ATOMS`, possibly repeated.
pub fn raw_weights() -> impl Strategy<Value = Vec<(u64, u32)>> {
    prop::collection::vec((0..ATOMS, 0u32..5), 1..6).prop_map(|mut v| {
        if v.iter().all(|(_, w)| *w == 0) {
            v[0].1 = 1;
        }
        v
    })
}

pub fn normalize(raw: &[(u64, u32)]) -> Vec<(u64, Rational)> {
    let total: u32 = raw.iter().map(|(_, w)| w).sum();
    raw.iter()
        .map(|&(a, w)| (a, Rational::new(BigInt::from(w), BigInt::from(total))))
        .collect()
}

pub fn dist() -> impl Strategy<Value = FinDist<u64>> {
    raw_weights().prop_map(|raw| FinDist::from_weights(normalize(&raw)).expect("normalized"))
}

pub fn kernel() -> impl Strategy<Value = Kernel<u64, u64>> {
    prop::collection::vec(dist(), ATOMS as usize).prop_map(|ds| {
        Kernel::new(ds.into_iter().enumerate().map(|(a, d)| (a as u64, d)).collect::<BTreeMap<_, _>>())
    })
}

pub fn bias() -> impl Strategy<Value = Rational> {
    (1i64..9).prop_flat_map(|den| (0..=den).prop_map(move |num| ratio(num, den)))
}

pub fn urn() -> impl Strategy<Value = UrnState> {
    (0u64..5, 0u64..5)
        .prop_filter("nonempty urn", |(b, w)| b + w > 0)
        .prop_map(|(b, w)| UrnState::new(b, w).expect("nonempty"))
}

pub fn bits() -> impl Strategy<Value = Vec<Bit>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { Bit::One } else { Bit::Zero }), 0..12)
}

/// `bind(dirac(a), f) = f(a)`, `bind(d, dirac) = d` and associativity.
pub fn monad_laws(d: &FinDist<u64>, f: &Kernel<u64, u64>, g: &Kernel<u64, u64>, a: u64) -> Result<(), TestCaseError> {
    let a = a % ATOMS;
    prop_assert_eq!(bind(&dirac(a), f), f.get(&a).unwrap().clone());
    prop_assert_eq!(&bind(d, &|x: &u64| dirac(*x)), d);
    let left = bind(&bind(d, f), g);
    let right = bind(d, &|x: &u64| bind(&f.get(x).unwrap().clone(), g));
    prop_assert_eq!(left, right);
    Ok(())
}

/// Results of bind sum to exactly one with strictly positive weights, and
/// `from_weights` rejects totals other than one.
pub fn normalization(d: &FinDist<u64>, f: &Kernel<u64, u64>, raw: &[(u64, u32)]) -> Result<(), TestCaseError> {
    let b = bind(d, f);
    prop_assert!(b.total().is_one());
    prop_assert!(b.iter().all(|(_, w)| w.is_positive()));
    let doubled: Vec<(u64, Rational)> = normalize(raw).into_iter().map(|(a, w)| (a, w * ratio(2, 1))).collect();
    prop_assert!(FinDist::from_weights(doubled).is_err());
    Ok(())
}

/// Zero weights never survive construction, and duplicate atoms merge.
pub fn pruning(raw: &[(u64, u32)]) -> Result<(), TestCaseError> {
    let pairs = normalize(raw);
    let d = FinDist::from_weights(pairs.clone()).unwrap();
    prop_assert!(d.iter().all(|(_, w)| !w.is_zero()));
    for a in 0..ATOMS {
        let expected: Rational = pairs.iter().filter(|(x, _)| *x == a).map(|(_, w)| w.clone()).sum();
        prop_assert_eq!(d.prob(&a), expected.clone());
        prop_assert_eq!(d.support().any(|x| *x == a), !expected.is_zero());
    }
    Ok(())
}

/// `acc` forgets order.
pub fn acc_permutation(seq: &[Bit], perm: &[Bit]) -> Result<(), TestCaseError> {
    prop_assert_eq!(accumulate(seq), accumulate(perm));
    prop_assert_eq!(accumulate(seq).size(), seq.len() as u64);
    Ok(())
}

fn two_routes_at<H: Coalgebra>(h: &H, x: &H::State, steps: usize) -> Result<(), TestCaseError> {
    let ordered = accumulate_ordered(&iterate_ordered(h, x, steps));
    prop_assert_eq!(ordered, iterate_accumulated(h, x, steps));
    Ok(())
}

/// `acc` after ordered iteration equals accumulated iteration.
pub fn two_routes(u: &UrnState, r: &Rational, steps: usize) -> Result<(), TestCaseError> {
    two_routes_at(&polya(), u, steps)?;
    let (coin, s) = bernoulli(r.clone()).unwrap();
    two_routes_at(&coin, &s, steps)?;
    two_routes_at(&definetti::coalgebra::alternating(), &Bit::Zero, steps)
}
