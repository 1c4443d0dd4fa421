//! Random bottom-up deterministic automata for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::semifield::{SemifieldKind, Weight};
use crate::terms::RankedAlphabet;
use crate::util::index_tuples;
use crate::wta::{StateId, Wta, WtaBuilder};

/// `{σ⁽²⁾, α⁽⁰⁾}`.
pub fn binary_alphabet() -> RankedAlphabet {
    RankedAlphabet::from_pairs([("sigma", 2), ("alpha", 0)]).expect("valid")
}

/// `{γ⁽¹⁾, α⁽⁰⁾, β⁽⁰⁾}`.
pub fn unary_alphabet() -> RankedAlphabet {
    RankedAlphabet::from_pairs([("gamma", 1), ("alpha", 0), ("beta", 0)]).expect("valid")
}

/// `{σ⁽²⁾, γ⁽¹⁾, α⁽⁰⁾}`.
pub fn mixed_alphabet() -> RankedAlphabet {
    RankedAlphabet::from_pairs([("sigma", 2), ("gamma", 1), ("alpha", 0)]).expect("valid")
}

/// Small non-zero weights whose products stay readable.
pub fn weight_pool(kind: SemifieldKind) -> Vec<Weight> {
    let texts: &[&str] = match kind {
        SemifieldKind::Rational => &["1", "2", "3", "1/2", "-1", "2/3"],
        SemifieldKind::Boolean => &["1"],
        SemifieldKind::MaxTimes => &["1", "2", "3", "1/2", "3/2"],
        SemifieldKind::Tropical => &["0", "1", "2", "-1", "5/2"],
    };
    texts
        .iter()
        .map(|t| Weight::parse(t, kind).expect("pool weights parse"))
        .collect()
}

pub fn random_weight<R: Rng + ?Sized>(rng: &mut R, kind: SemifieldKind) -> Weight {
    weight_pool(kind)
        .choose(rng)
        .cloned()
        .expect("pools are non-empty")
}

/// Shape of a random automaton.
#[derive(Clone, Debug)]
pub struct Shape {
    pub alphabet: RankedAlphabet,
    pub kind: SemifieldKind,
    pub states: usize,
    /// Probability that a left-hand side gets a transition.
    pub density: f64,
    /// Probability that a state gets a non-zero final weight.
    pub final_density: f64,
}

/// A bu-deterministic automaton: each left-hand side independently gets at
/// most one target.
pub fn random_wta<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Wta {
    let mut b = WtaBuilder::new(shape.kind, shape.alphabet.clone());
    let ids: Vec<StateId> = (0..shape.states.max(1))
        .map(|i| b.state(&format!("q{i}")).expect("fresh name"))
        .collect();
    for symbol in shape.alphabet.symbols() {
        for tuple in index_tuples(ids.len(), shape.alphabet.arity(symbol)) {
            if rng.gen_bool(shape.density) {
                let inputs = tuple.iter().map(|&i| ids[i]).collect();
                let target = *ids.choose(rng).expect("non-empty");
                b.transition(symbol, inputs, target, random_weight(rng, shape.kind))
                    .expect("fresh transition");
            }
        }
    }
    for &q in &ids {
        if rng.gen_bool(shape.final_density) {
            b.set_final(q, random_weight(rng, shape.kind))
                .expect("fresh final");
        }
    }
    b.build().expect("valid random automaton")
}

/// Splits `q` into itself and a copy that carries runs scaled by `c`,
/// redirecting each incoming transition to the copy with probability one
/// half. The copy observes everything divided by `c`, so the language is
/// unchanged and the copy is congruent to `q`.
pub fn split_state<R: Rng + ?Sized>(rng: &mut R, a: &Wta, q: StateId, c: &Weight) -> Wta {
    let kind = a.kind();
    let inv = c.reciprocal().expect("split factor is non-zero");
    let mut b = WtaBuilder::new(kind, a.alphabet().clone());
    for name in a.state_names() {
        b.state(name).expect("existing name");
    }
    let mut name = format!("{}s", a.state_name(q));
    while a.state_id(&name).is_some() || a.alphabet().lookup(&name).is_some() {
        name.push('s');
    }
    let copy = b.state(&name).expect("fresh name");
    for (key, target, w) in a.transitions() {
        let slots: Vec<usize> = (0..key.inputs.len())
            .filter(|&i| key.inputs[i] == q)
            .collect();
        // every way of replacing occurrences of q by the copy
        for mask in 0..(1usize << slots.len()) {
            let mut inputs = key.inputs.clone();
            let mut weight = w.clone();
            for (bit, &i) in slots.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    inputs[i] = copy;
                    weight = weight.mul(&inv);
                }
            }
            let (target, weight) = if target == q && rng.gen_bool(0.5) {
                (copy, weight.mul(c))
            } else {
                (target, weight)
            };
            b.transition(key.symbol, inputs, target, weight)
                .expect("fresh transition");
        }
    }
    for p in a.states() {
        let f = a.final_weight(p);
        if !f.is_zero() {
            b.set_final(p, f.clone()).expect("fresh final");
        }
    }
    let fq = a.final_weight(q);
    if !fq.is_zero() {
        b.set_final(copy, fq.mul(&inv)).expect("fresh final");
    }
    b.build().expect("split of a valid automaton")
}

/// Adds a state that no tree reaches, with a non-zero final weight and a
/// transition out of it, so the result is equivalent but not slim.
pub fn add_unreachable_state(a: &Wta) -> Wta {
    let kind = a.kind();
    let mut b = a.to_builder();
    let mut name = String::from("unreached");
    while a.state_id(&name).is_some() || a.alphabet().lookup(&name).is_some() {
        name.push('_');
    }
    let u = b.state(&name).expect("fresh name");
    b.set_final(u, Weight::one(kind)).expect("fresh final");
    let alphabet = a.alphabet().clone();
    if let Some(symbol) = alphabet.symbols().find(|&s| alphabet.arity(s) > 0) {
        let inputs = vec![u; alphabet.arity(symbol)];
        b.transition(symbol, inputs, u, Weight::one(kind))
            .expect("fresh transition");
    }
    b.build().expect("valid automaton")
}

/// A slim bu-deterministic automaton with at most `max_states` states and a
/// non-zero language, often with states that are rescaled copies of each
/// other.
pub fn random_slim_wta<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    kind: SemifieldKind,
    max_states: usize,
) -> Wta {
    loop {
        let base_states = rng.gen_range(1..=max_states.max(1));
        let shape = Shape {
            alphabet: alphabet.clone(),
            kind,
            states: base_states,
            density: rng.gen_range(0.5..0.95),
            final_density: rng.gen_range(0.3..0.8),
        };
        let mut a = random_wta(rng, &shape).slim().expect("deterministic");
        while a.num_states() < max_states && rng.gen_bool(0.5) {
            let q = StateId(rng.gen_range(0..a.num_states()));
            let c = random_weight(rng, kind);
            a = split_state(rng, &a, q, &c).slim().expect("deterministic");
        }
        let live = a.states().any(|q| !a.final_weight(q).is_zero());
        if live && a.num_states() <= max_states {
            return a;
        }
    }
}
