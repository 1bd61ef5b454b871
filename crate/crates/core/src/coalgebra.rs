//! Coalgebras `h: X -> FinDist<(Bit, X)>` as data generating processes:
//! ordered and accumulated iteration, the exchangeability test, and the
//! Pólya, alternating and coin examples.
//!
//! Bit strings are stored most recent last. Branches that reach the same
//! state merge, so accumulated iteration of the Pólya urn stays
//! polynomial in the number of steps.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::dist::{bind, marginal_first, pushforward, tensor_id_channel, Atom, FinDist};
use crate::error::{Error, Result};
use crate::multiset::{accumulate, Bit, BitString, Multiset};
use crate::rational::{binomial_coefficient, check_probability, format_rational, parse_rational, Rational};

pub trait Coalgebra: Sync {
    type State: Atom;

    fn step(&self, state: &Self::State) -> FinDist<(Bit, Self::State)>;
}

/// Contents of a nonempty two-colour urn.
///
/// `black` balls emit bit one, `white` balls emit bit zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UrnState {
    black: u64,
    white: u64,
}

impl UrnState {
    pub fn new(black: u64, white: u64) -> Result<Self> {
        if black + white == 0 {
            return Err(Error::EmptyUrn);
        }
        Ok(UrnState { black, white })
    }

    pub fn black(&self) -> u64 {
        self.black
    }

    pub fn white(&self) -> u64 {
        self.white
    }

    /// The urn as a multiset over `2`, black as symbol one.
    pub fn as_multiset(&self) -> Multiset<Bit> {
        Multiset::from_counts([(Bit::One, self.black), (Bit::Zero, self.white)])
    }
}

impl fmt::Debug for UrnState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.black, self.white)
    }
}

impl Atom for UrnState {
    fn to_json(&self) -> Value {
        json!({ "black": self.black, "white": self.white })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Json(format!("urn state without {k:?}: {v}")))
        };
        UrnState::new(get("black")?, get("white")?)
    }
}

/// A known coin bias `r`, the probability of bit one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiasState(Rational);

impl BiasState {
    pub fn new(r: Rational) -> Result<Self> {
        check_probability(&r)?;
        Ok(BiasState(r))
    }

    pub fn bias(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Debug for BiasState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl Atom for BiasState {
    fn to_json(&self) -> Value {
        json!(format_rational(&self.0))
    }

    fn from_json(v: &Value) -> Result<Self> {
        let s = v
            .as_str()
            .ok_or_else(|| Error::Json(format!("expected bias string, got {v}")))?;
        BiasState::new(parse_rational(s)?)
    }
}

/// Pólya's urn: draw a ball, return it with one more of the same colour.
#[derive(Clone, Copy, Debug, Default)]
pub struct Polya;

impl Coalgebra for Polya {
    type State = UrnState;

    /// `b/(b+w) |1, (b+1, w)> + w/(b+w) |0, (b, w+1)>`.
    fn step(&self, s: &UrnState) -> FinDist<(Bit, UrnState)> {
        let n = BigInt::from(s.black + s.white);
        FinDist::from_normalized([
            (
                (Bit::One, UrnState { black: s.black + 1, ..*s }),
                Rational::new(s.black.into(), n.clone()),
            ),
            (
                (Bit::Zero, UrnState { white: s.white + 1, ..*s }),
                Rational::new(s.white.into(), n),
            ),
        ])
    }
}

/// Emits the current bit and flips it.
#[derive(Clone, Copy, Debug, Default)]
pub struct Alternating;

impl Coalgebra for Alternating {
    type State = Bit;

    fn step(&self, b: &Bit) -> FinDist<(Bit, Bit)> {
        FinDist::dirac((*b, b.flip()))
    }
}

/// A coin of known bias: `r |1, r> + (1-r) |0, r>`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Coin;

impl Coalgebra for Coin {
    type State = BiasState;

    fn step(&self, s: &BiasState) -> FinDist<(Bit, BiasState)> {
        FinDist::from_normalized([
            ((Bit::One, s.clone()), s.0.clone()),
            ((Bit::Zero, s.clone()), Rational::one() - &s.0),
        ])
    }
}

pub fn polya() -> Polya {
    Polya
}

pub fn alternating() -> Alternating {
    Alternating
}

/// The coin coalgebra together with its start state.
pub fn bernoulli(r: Rational) -> Result<(Coin, BiasState)> {
    Ok((Coin, BiasState::new(r)?))
}

/// `h^#K(x)`: all length-`K` outputs in order, with the final state.
pub fn iterate_ordered<H: Coalgebra>(h: &H, x: &H::State, steps: usize) -> FinDist<(BitString, H::State)> {
    let mut d = FinDist::dirac((BitString::new(), x.clone()));
    for _ in 0..steps {
        d = bind(&d, &|(s, st): &(BitString, H::State)| {
            pushforward(|(b, next): &(Bit, H::State)| (s.push(*b), next.clone()), &h.step(st))
        });
    }
    d
}

/// `h#_K(x)`, the first leg of [`iterate_ordered`].
pub fn ordered_marginal<H: Coalgebra>(h: &H, x: &H::State, steps: usize) -> FinDist<BitString> {
    marginal_first(&iterate_ordered(h, x, steps))
}

/// `h^K(x)`: outputs accumulated into a multiset via `add(phi, b) = phi + 1|b>`.
pub fn iterate_accumulated<H: Coalgebra>(
    h: &H,
    x: &H::State,
    steps: usize,
) -> FinDist<(Multiset<Bit>, H::State)> {
    let mut d = FinDist::dirac((Multiset::empty(), x.clone()));
    for _ in 0..steps {
        d = bind(&d, &|(phi, st): &(Multiset<Bit>, H::State)| {
            pushforward(|(b, next): &(Bit, H::State)| (phi.add(*b), next.clone()), &h.step(st))
        });
    }
    d
}

/// The same distribution as [`iterate_accumulated`], obtained by
/// accumulating the ordered outputs.
pub fn accumulate_ordered<S: Atom>(d: &FinDist<(BitString, S)>) -> FinDist<(Multiset<Bit>, S)> {
    pushforward(|(s, st)| (accumulate(s.bits()), st.clone()), d)
}

/// `h_K(x)`, the first leg of [`iterate_accumulated`].
pub fn accumulated_marginal<H: Coalgebra>(h: &H, x: &H::State, steps: usize) -> FinDist<Multiset<Bit>> {
    marginal_first(&iterate_accumulated(h, x, steps))
}

/// `(id (x) h) . h` at `x`, outputs paired as a length-2 bit string.
pub fn two_step<H: Coalgebra>(h: &H, x: &H::State) -> FinDist<(BitString, H::State)> {
    let again = tensor_id_channel::<H::State, (Bit, H::State), Bit, _>(|s: &H::State| h.step(s));
    let d = bind(&h.step(x), &again);
    pushforward(
        |(b1, (b2, st)): &(Bit, (Bit, H::State))| (BitString(vec![*b1, *b2]), st.clone()),
        &d,
    )
}

/// A two-step outcome whose weight differs from that of its swap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapWitness<S> {
    pub outcome: BitString,
    pub state: S,
    pub weight: Rational,
    pub swapped: BitString,
    pub swapped_weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exchangeability<S> {
    Exchangeable,
    NotExchangeable(SwapWitness<S>),
}

impl<S> Exchangeability<S> {
    pub fn is_exchangeable(&self) -> bool {
        matches!(self, Exchangeability::Exchangeable)
    }
}

fn swap2(s: &BitString) -> BitString {
    BitString(vec![s.0[1], s.0[0]])
}

/// Compares the two-step distribution at `x` with its swap image. The
/// witness is the first outcome, in atom order, whose weight differs from
/// the weight of the outcome with the two bits exchanged.
pub fn is_exchangeable<H: Coalgebra>(h: &H, x: &H::State) -> Exchangeability<H::State> {
    let d = two_step(h, x);
    let swapped = pushforward(|(s, st): &(BitString, H::State)| (swap2(s), st.clone()), &d);
    if swapped == d {
        return Exchangeability::Exchangeable;
    }
    let mut candidates: BTreeSet<(BitString, H::State)> = d.support().cloned().collect();
    candidates.extend(swapped.support().cloned());
    for (s, st) in candidates {
        let w = d.prob(&(s.clone(), st.clone()));
        let sw = swap2(&s);
        let w_sw = d.prob(&(sw.clone(), st.clone()));
        if w != w_sw {
            return Exchangeability::NotExchangeable(SwapWitness {
                outcome: s,
                state: st,
                weight: w,
                swapped: sw,
                swapped_weight: w_sw,
            });
        }
    }
    unreachable!("swap images differ but no outcome disagrees")
}

/// States reachable from `x` in at most `depth` steps.
pub fn reachable_states<H: Coalgebra>(h: &H, x: &H::State, depth: usize) -> BTreeSet<H::State> {
    let mut seen = BTreeSet::from([x.clone()]);
    let mut frontier = vec![x.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for (_, st) in h.step(s).support() {
                if seen.insert(st.clone()) {
                    next.push(st.clone());
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Probability that the first `bits.len()` outputs from `x` are exactly `bits`.
pub fn path_weight<H: Coalgebra>(h: &H, x: &H::State, bits: &[Bit]) -> Rational {
    // sub-probability over states, conditioned on the prefix so far
    let mut mass: Vec<(H::State, Rational)> = vec![(x.clone(), Rational::one())];
    for b in bits {
        let mut next: std::collections::BTreeMap<H::State, Rational> = Default::default();
        for (st, w) in &mass {
            for ((out, after), p) in h.step(st).iter() {
                if out == b {
                    *next.entry(after.clone()).or_insert_with(Rational::zero) += p * w;
                }
            }
        }
        mass = next.into_iter().collect();
    }
    mass.into_iter().map(|(_, w)| w).sum()
}

/// `h_K(x) = sum_k C(K,k) h#_K(x)(1..1 0..0) |k|1> + (K-k)|0>>`.
///
/// Exchangeability is checked at every state reachable within `K - 2`
/// steps, which is where the two-step swap is used when reordering a
/// length-`K` output into normal form.
pub fn exchangeable_accumulated<H: Coalgebra>(
    h: &H,
    x: &H::State,
    steps: usize,
) -> Result<FinDist<Multiset<Bit>>> {
    if steps >= 2 {
        for st in reachable_states(h, x, steps - 2) {
            if let Exchangeability::NotExchangeable(w) = is_exchangeable(h, &st) {
                return Err(Error::NotExchangeable {
                    outcome: format!("({:?}, {:?})", w.outcome, w.state),
                    weight: w.weight,
                    swapped_weight: w.swapped_weight,
                });
            }
        }
    }
    let k_total = steps as u64;
    let pairs: Vec<(Multiset<Bit>, Rational)> = (0..=steps)
        .map(|k| {
            let normal = BitString::ones_then_zeros(k, steps);
            let c = Rational::from_integer(binomial_coefficient(k_total, k as u64));
            let phi = Multiset::from_counts([(Bit::One, k as u64), (Bit::Zero, k_total - k as u64)]);
            (phi, c * path_weight(h, x, normal.bits()))
        })
        .collect();
    FinDist::from_weights(pairs)
}
