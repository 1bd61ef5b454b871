//! Finite-support distributions with exact rational weights and the
//! channel (Kleisli) algebra over them.
//!
//! A [`FinDist`] never stores zero-weight atoms and its weights always sum
//! to exactly one. Atoms are kept in their `Ord` order, which is also the
//! order used for JSON output, so equal distributions serialize equally.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::par;
use crate::rational::{format_rational, parse_rational, Rational};

/// Anything that can be the outcome of a finite distribution.
///
/// The JSON encoding is the canonical atom encoding used by the CLI.
pub trait Atom: Ord + Clone + fmt::Debug + Send + Sync {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Atom for u64 {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_u64()
            .ok_or_else(|| Error::Json(format!("expected unsigned integer, got {v}")))
    }
}

impl Atom for String {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_str()
            .map(str::to_string)
            .ok_or_else(|| Error::Json(format!("expected string, got {v}")))
    }
}

impl Atom for Rational {
    fn to_json(&self) -> Value {
        json!(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        let s = v
            .as_str()
            .ok_or_else(|| Error::Json(format!("expected rational string, got {v}")))?;
        parse_rational(s)
    }
}

impl<A: Atom, B: Atom> Atom for (A, B) {
    fn to_json(&self) -> Value {
        json!([self.0.to_json(), self.1.to_json()])
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((A::from_json(a)?, B::from_json(b)?)),
            _ => Err(Error::Json(format!("expected pair, got {v}"))),
        }
    }
}

/// A finite-support probability distribution.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinDist<A: Ord> {
    weights: BTreeMap<A, Rational>,
}

impl<A: Atom> FinDist<A> {
    /// The point mass `1|x>`.
    pub fn dirac(x: A) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(x, Rational::one());
        FinDist { weights }
    }

    /// Builds a distribution from weighted atoms. Duplicate atoms are
    /// merged and zero weights dropped; the total must be exactly one.
    pub fn from_weights(pairs: impl IntoIterator<Item = (A, Rational)>) -> Result<Self> {
        let mut weights: BTreeMap<A, Rational> = BTreeMap::new();
        for (a, w) in pairs {
            if w.is_negative() {
                return Err(Error::NegativeWeight {
                    atom: format!("{a:?}"),
                    weight: format_rational(&w),
                });
            }
            *weights.entry(a).or_insert_with(Rational::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::NotNormalized(format_rational(&total)));
        }
        Ok(FinDist { weights })
    }

    /// Uniform distribution over the given (distinct) atoms.
    pub fn uniform(atoms: impl IntoIterator<Item = A>) -> Result<Self> {
        let atoms: Vec<A> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::NotNormalized("0/1".into()));
        }
        let w = Rational::new(1.into(), (atoms.len() as u64).into());
        Self::from_weights(atoms.into_iter().map(|a| (a, w.clone())))
    }

    /// Used only where the caller's arithmetic already guarantees
    /// nonnegative weights summing to one.
    pub(crate) fn from_normalized(pairs: impl IntoIterator<Item = (A, Rational)>) -> Self {
        let mut weights: BTreeMap<A, Rational> = BTreeMap::new();
        for (a, w) in pairs {
            *weights.entry(a).or_insert_with(Rational::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        debug_assert!(
            weights.values().sum::<Rational>().is_one(),
            "weights do not sum to one"
        );
        debug_assert!(weights.values().all(|w| w.is_positive()));
        FinDist { weights }
    }

    /// Weight of `x`, zero outside the support.
    pub fn prob(&self, x: &A) -> Rational {
        self.weights.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&A, &Rational)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &A> {
        self.weights.keys()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Sum of the weights. Always one; exposed for assertions.
    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn to_json(&self) -> Value {
        let support: Vec<Value> = self
            .weights
            .iter()
            .map(|(a, w)| json!({ "atom": a.to_json(), "prob": format_rational(w) }))
            .collect();
        json!({ "support": support })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let support = v
            .get("support")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing \"support\" array".into()))?;
        let mut pairs = Vec::with_capacity(support.len());
        for entry in support {
            let atom = entry
                .get("atom")
                .ok_or_else(|| Error::Json("support entry without \"atom\"".into()))?;
            let prob = entry
                .get("prob")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Json("support entry without \"prob\" string".into()))?;
            pairs.push((A::from_json(atom)?, parse_rational(prob)?));
        }
        Self::from_weights(pairs)
    }
}

impl<A: Atom> fmt::Debug for FinDist<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (a, w) in &self.weights {
            m.entry(a, &format_rational(w));
        }
        m.finish()
    }
}

/// A channel `A -> FinDist<B>`.
pub trait Channel<A, B: Ord>: Sync {
    fn apply(&self, input: &A) -> FinDist<B>;
}

impl<A, B, F> Channel<A, B> for F
where
    B: Ord,
    F: Fn(&A) -> FinDist<B> + Sync,
{
    fn apply(&self, input: &A) -> FinDist<B> {
        self(input)
    }
}

/// Extensional channel: an explicit table over a finite domain.
#[derive(Clone)]
pub struct Kernel<A: Ord, B: Ord> {
    table: BTreeMap<A, FinDist<B>>,
}

impl<A: Atom, B: Atom> Kernel<A, B> {
    pub fn new(table: BTreeMap<A, FinDist<B>>) -> Self {
        Kernel { table }
    }

    /// Tabulates an intensional channel over `domain`.
    pub fn tabulate(domain: impl IntoIterator<Item = A>, ch: &impl Channel<A, B>) -> Self {
        let table = domain
            .into_iter()
            .map(|a| {
                let d = ch.apply(&a);
                (a, d)
            })
            .collect();
        Kernel { table }
    }

    pub fn domain(&self) -> impl Iterator<Item = &A> {
        self.table.keys()
    }

    pub fn get(&self, a: &A) -> Option<&FinDist<B>> {
        self.table.get(a)
    }
}

impl<A: Atom, B: Atom> fmt::Debug for Kernel<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.table.iter()).finish()
    }
}

impl<A: Atom, B: Atom> Channel<A, B> for Kernel<A, B> {
    /// Panics when `input` is outside the tabulated domain.
    fn apply(&self, input: &A) -> FinDist<B> {
        match self.table.get(input) {
            Some(d) => d.clone(),
            None => panic!("kernel evaluated outside its domain at {input:?}"),
        }
    }
}

/// Lifts a pure function to the channel `x |-> 1|f(x)>`.
pub struct Deterministic<F>(pub F);

impl<A, B, F> Channel<A, B> for Deterministic<F>
where
    B: Atom,
    F: Fn(&A) -> B + Sync,
{
    fn apply(&self, input: &A) -> FinDist<B> {
        FinDist::dirac((self.0)(input))
    }
}

pub fn dirac_lift<A, B: Atom, F: Fn(&A) -> B + Sync>(f: F) -> Deterministic<F> {
    Deterministic(f)
}

/// `dirac(x)`, the unit of the distribution monad.
pub fn dirac<A: Atom>(x: A) -> FinDist<A> {
    FinDist::dirac(x)
}

/// Image of `d` under a pure function; weights of colliding atoms add.
pub fn pushforward<A: Atom, B: Atom>(f: impl Fn(&A) -> B, d: &FinDist<A>) -> FinDist<B> {
    FinDist::from_normalized(d.iter().map(|(a, w)| (f(a), w.clone())))
}

/// Kleisli extension: `sum_y (sum_x d(x) f(x)(y)) |y>`.
pub fn bind<A: Atom, B: Atom>(d: &FinDist<A>, f: &(impl Channel<A, B> + ?Sized)) -> FinDist<B> {
    let atoms: Vec<(&A, &Rational)> = d.iter().collect();
    let parts = par::map(&atoms, |(a, w)| {
        f.apply(a)
            .weights
            .into_iter()
            .map(|(b, v)| (b, v * *w))
            .collect::<Vec<_>>()
    });
    FinDist::from_normalized(parts.into_iter().flatten())
}

/// Kleisli composite `g . f`, first `f` then `g`.
pub struct Composed<F, G, B> {
    first: F,
    second: G,
    _mid: PhantomData<fn() -> B>,
}

impl<A, B, C, F, G> Channel<A, C> for Composed<F, G, B>
where
    B: Atom,
    C: Atom,
    F: Channel<A, B>,
    G: Channel<B, C>,
{
    fn apply(&self, input: &A) -> FinDist<C> {
        bind(&self.first.apply(input), &self.second)
    }
}

pub fn kleisli_compose<A, B, C, F, G>(f: F, g: G) -> Composed<F, G, B>
where
    B: Atom,
    C: Atom,
    F: Channel<A, B>,
    G: Channel<B, C>,
{
    Composed {
        first: f,
        second: g,
        _mid: PhantomData,
    }
}

/// `id (x) f`: keeps the left component and runs `f` on the right.
pub struct TensorId<F, C>(F, PhantomData<fn() -> C>);

impl<A, B, C, F> Channel<(C, A), (C, B)> for TensorId<F, C>
where
    B: Atom,
    C: Atom,
    F: Channel<A, B>,
{
    fn apply(&self, (c, a): &(C, A)) -> FinDist<(C, B)> {
        pushforward(|b: &B| (c.clone(), b.clone()), &self.0.apply(a))
    }
}

pub fn tensor_id_channel<A, B: Atom, C: Atom, F: Channel<A, B>>(f: F) -> TensorId<F, C> {
    TensorId(f, PhantomData)
}

/// Which leg of a pair to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    First,
    Second,
}

pub fn marginal_first<A: Atom, B: Atom>(d: &FinDist<(A, B)>) -> FinDist<A> {
    pushforward(|(a, _)| a.clone(), d)
}

pub fn marginal_second<A: Atom, B: Atom>(d: &FinDist<(A, B)>) -> FinDist<B> {
    pushforward(|(_, b)| b.clone(), d)
}

/// Marginal along a leg of a homogeneous pair.
pub fn marginal<A: Atom>(d: &FinDist<(A, A)>, leg: Leg) -> FinDist<A> {
    match leg {
        Leg::First => marginal_first(d),
        Leg::Second => marginal_second(d),
    }
}

/// `(1/2) sum_a |d1(a) - d2(a)|`.
pub fn total_variation<A: Atom>(d1: &FinDist<A>, d2: &FinDist<A>) -> Rational {
    let mut diff: BTreeMap<&A, Rational> = BTreeMap::new();
    for (a, w) in d1.iter() {
        diff.insert(a, w.clone());
    }
    for (a, w) in d2.iter() {
        *diff.entry(a).or_insert_with(Rational::zero) -= w;
    }
    diff.values().map(|v| v.abs()).sum::<Rational>() / Rational::from_integer(2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn coin(p: Rational) -> FinDist<u64> {
        FinDist::from_weights([(1, p.clone()), (0, Rational::one() - p)]).unwrap()
    }

    #[test]
    fn dirac_is_point_mass() {
        let d = dirac(0u64);
        assert_eq!(d.prob(&0), int(1));
        assert_eq!(d.len(), 1);
        let pair = dirac((String::from("B"), String::new()));
        assert_eq!(pair.prob(&("B".into(), String::new())), int(1));
        assert_eq!(pushforward(|x: &u64| *x, &d), d);
    }

    #[test]
    fn pushforward_merges_and_collapses() {
        let d = coin(ratio(1, 2));
        let neg = pushforward(|b: &u64| 1 - b, &d);
        assert_eq!(neg, d);
        let c = pushforward(|_: &u64| 7u64, &coin(ratio(1, 3)));
        assert_eq!(c, dirac(7));
    }

    #[test]
    fn bind_hand_mixture() {
        let d = coin(ratio(2, 3));
        let flip = |b: &u64| FinDist::from_weights([(*b, ratio(3, 4)), (1 - *b, ratio(1, 4))]).unwrap();
        let out = bind(&d, &flip);
        assert_eq!(out.prob(&0), ratio(5, 12));
        assert_eq!(out.prob(&1), ratio(7, 12));
        assert_eq!(bind(&dirac(1u64), &flip), flip(&1));
        assert_eq!(bind(&d, &|x: &u64| dirac(*x)), d);
    }

    #[test]
    fn deterministic_composition() {
        let h = dirac_lift(|x: &u64| x + 1);
        let k = dirac_lift(|x: &u64| x * 3);
        let hk = kleisli_compose(h, k);
        for x in 0..5u64 {
            assert_eq!(hk.apply(&x), dirac((x + 1) * 3));
        }
    }

    #[test]
    fn tensor_id_keeps_left() {
        let t = tensor_id_channel::<u64, u64, String, _>(dirac_lift(|a: &u64| a + 10));
        assert_eq!(t.apply(&("c".to_string(), 1)), dirac(("c".to_string(), 11)));
    }

    #[test]
    fn kernel_from_table() {
        let k = Kernel::tabulate(0..3u64, &|x: &u64| coin(ratio(*x as i64, 2)));
        assert_eq!(k.apply(&1), coin(ratio(1, 2)));
        assert_eq!(k.domain().count(), 3);
    }

    #[test]
    #[should_panic(expected = "outside its domain")]
    fn kernel_outside_domain_panics() {
        let k = Kernel::tabulate(0..2u64, &|x: &u64| dirac(*x));
        k.apply(&5);
    }

    #[test]
    fn marginals_of_pairs() {
        assert_eq!(marginal(&dirac((1u64, 2u64)), Leg::First), dirac(1));
        assert_eq!(marginal(&dirac((1u64, 2u64)), Leg::Second), dirac(2));
    }

    #[test]
    fn total_variation_values() {
        let d = coin(ratio(1, 2));
        assert_eq!(total_variation(&d, &d), int(0));
        assert_eq!(total_variation(&dirac(0u64), &dirac(1u64)), int(1));
        assert_eq!(total_variation(&d, &coin(ratio(3, 4))), ratio(1, 4));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            FinDist::from_weights([(0u64, ratio(1, 2))]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            FinDist::from_weights([(0u64, ratio(3, 2)), (1, ratio(-1, 2))]),
            Err(Error::NegativeWeight { .. })
        ));
        let d = FinDist::from_weights([(0u64, ratio(1, 2)), (1, int(0)), (0, ratio(1, 2))]).unwrap();
        assert_eq!(d, dirac(0));
    }

    #[test]
    fn json_shape() {
        let d = coin(ratio(1, 3));
        let v = d.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"support":[{"atom":0,"prob":"2/3"},{"atom":1,"prob":"1/3"}]}"#
        );
        assert_eq!(FinDist::<u64>::from_json(&v).unwrap(), d);
    }
}
