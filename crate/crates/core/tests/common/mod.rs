#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use wta_core::random::{binary_alphabet, mixed_alphabet, random_slim_wta, unary_alphabet};
use wta_core::terms::enumerate_trees;
use wta_core::{parse_wta, Monomial, SemifieldKind, Tree, Weight, Wta};

pub const EVEN_ODD: &str = include_str!("../data/even_odd.wta");
pub const GAMMA: &str = include_str!("../data/gamma3.wta");
pub const NOT_INDEPENDENT: &str = include_str!("../data/not_independent.wta");
pub const STATE_ALGEBRA: &str = include_str!("../data/state_algebra.wta");

pub fn load(text: &str) -> Wta {
    parse_wta(text).expect("test automaton parses")
}

pub fn w(text: &str, kind: SemifieldKind) -> Weight {
    Weight::parse(text, kind).expect("test weight parses")
}

/// Slim bu-deterministic automata with at most four states, alternating
/// between the rational and boolean semifields.
pub fn corpus<R: Rng>(rng: &mut R, count: usize) -> Vec<Wta> {
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let alphabet = match (i / 2) % 3 {
                    0 => binary_alphabet(),
                    1 => unary_alphabet(),
                    _ => mixed_alphabet(),
                };
                random_slim_wta(rng, &alphabet, SemifieldKind::Rational, 4)
            } else {
                let alphabet = if (i / 2) % 2 == 0 {
                    binary_alphabet()
                } else {
                    mixed_alphabet()
                };
                random_slim_wta(rng, &alphabet, SemifieldKind::Boolean, 4)
            }
        })
        .collect()
}

/// Scalars used for monomials, zero included.
pub fn monomial_weights(kind: SemifieldKind) -> Vec<Weight> {
    let texts: &[&str] = match kind {
        SemifieldKind::Boolean => &["0", "1"],
        SemifieldKind::Tropical => &["inf", "0", "1", "-2", "1/2"],
        SemifieldKind::MaxTimes => &["0", "1", "2", "1/2", "3"],
        SemifieldKind::Rational => &["0", "1", "2", "1/2", "3", "-1"],
    };
    texts.iter().map(|t| w(t, kind)).collect()
}

pub fn monomials(a: &Wta, trees: &[Tree]) -> Vec<Monomial> {
    monomial_weights(a.kind())
        .into_iter()
        .flat_map(|b| {
            trees
                .iter()
                .map(move |t| Monomial::new(b.clone(), t.clone()))
        })
        .collect()
}

/// `count` distinct monomial pairs over trees of height at most
/// `tree_height`: half drawn uniformly, half rescaled so the two monomials
/// already agree at the root, which makes congruent pairs common.
pub fn monomial_pairs<R: Rng>(
    rng: &mut R,
    a: &Wta,
    tree_height: usize,
    count: usize,
) -> Vec<(Monomial, Monomial)> {
    let trees = enumerate_trees(a.alphabet(), tree_height);
    let ms = monomials(a, &trees);
    let mut out: Vec<(Monomial, Monomial)> = Vec::with_capacity(count);
    let mut seen = std::collections::HashSet::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let m1 = ms.choose(rng).expect("non-empty").clone();
        let mut m2 = ms.choose(rng).expect("non-empty").clone();
        if attempts % 2 == 0 {
            let v1 = m1.weight.times(&a.evaluate(&m1.tree)).unwrap();
            let v2 = a.evaluate(&m2.tree);
            if !v2.is_zero() {
                m2.weight = v1.divide(&v2).unwrap();
            }
        }
        let key = (
            m1.weight.to_string(),
            m1.tree.clone(),
            m2.weight.to_string(),
            m2.tree.clone(),
        );
        if seen.insert(key) {
            out.push((m1, m2));
        }
    }
    out
}
