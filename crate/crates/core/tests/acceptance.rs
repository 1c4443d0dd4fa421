//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use wta_core::batch;
use wta_core::congruence::{BruteForceOracle, SyntacticQuotient};
use wta_core::minimize::{
    build_wta_from_basis, candidate_set, equivalent, is_minimal, minimize, scalar_basis,
};
use wta_core::random::{
    add_unreachable_state, binary_alphabet, mixed_alphabet, random_wta, unary_alphabet, Shape,
};
use wta_core::scalar::{Dependency, DependencyOracle, Direction, Monomial};
use wta_core::terms::{enumerate_trees, RankedAlphabet};
use wta_core::{SemifieldKind, StateId, Tree, Weight, Wta, WtaBuilder};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CORPUS_SIZE: usize = 200;
const PAIRS_PER_AUTOMATON: usize = 1000;

fn rat(text: &str) -> Weight {
    w(text, SemifieldKind::Rational)
}

fn shared_corpus() -> Vec<Wta> {
    corpus(&mut ChaCha8Rng::seed_from_u64(2024), CORPUS_SIZE)
}

fn trees_up_to(alphabet: &RankedAlphabet, height: usize) -> Vec<Tree> {
    enumerate_trees(alphabet, height)
}

fn even_odd_values() -> Outcome {
    let a = load(EVEN_ODD);
    let alpha = a.alphabet().lookup("alpha").unwrap();
    let trees = trees_up_to(a.alphabet(), 3);
    for t in &trees {
        let n = t.count_symbol(alpha) as i64;
        let base = if n % 2 == 0 { 2 } else { 3 };
        let expected = Weight::from_int(SemifieldKind::Rational, base * (1 << n)).unwrap();
        ensure!(
            a.evaluate(t) == expected,
            "value of {} is {}",
            t.format(a.alphabet()),
            a.evaluate(t)
        );
    }
    let alpha_tree = a.alphabet().parse_tree("alpha").unwrap();
    let pair = a.alphabet().parse_tree("sigma(alpha,alpha)").unwrap();
    ensure!(a.evaluate(&alpha_tree) == rat("6"), "value at alpha");
    ensure!(a.evaluate(&pair) == rat("8"), "value at sigma(alpha,alpha)");
    Ok(format!(
        "{} trees of height <= 3; alpha -> 6, sigma(alpha,alpha) -> 8",
        trees.len()
    ))
}

/// The two-state automaton over classes of `1.alpha` and
/// `1.sigma(alpha,alpha)`, written down directly.
fn expected_reconstruction() -> Wta {
    let k = SemifieldKind::Rational;
    let alphabet = RankedAlphabet::from_pairs([("sigma", 2), ("alpha", 0)]).unwrap();
    let sigma = alphabet.lookup("sigma").unwrap();
    let alpha = alphabet.lookup("alpha").unwrap();
    let mut b = WtaBuilder::new(k, alphabet);
    let a = b.state("c0__alpha").unwrap();
    let s = b.state("c1__sigma_alpha_alpha").unwrap();
    b.transition(alpha, vec![], a, rat("1")).unwrap();
    b.transition(sigma, vec![a, s], a, rat("4")).unwrap();
    b.transition(sigma, vec![s, a], a, rat("4")).unwrap();
    b.transition(sigma, vec![a, a], s, rat("1")).unwrap();
    b.transition(sigma, vec![s, s], s, rat("4")).unwrap();
    b.set_final(a, rat("6")).unwrap();
    b.set_final(s, rat("8")).unwrap();
    b.build().unwrap()
}

fn reconstruction() -> Outcome {
    let a = load(EVEN_ODD);
    let qt = SyntacticQuotient::build(&a).map_err(|e| e.to_string())?;
    let basis = scalar_basis(&qt).map_err(|e| e.to_string())?;
    let built = build_wta_from_basis(&qt, &basis).map_err(|e| e.to_string())?;
    let got = built.to_string();
    let want = expected_reconstruction().to_string();
    ensure!(got == want, "serializations differ:\n{got}\nvs\n{want}");
    ensure!(
        equivalent(&a, &built).unwrap(),
        "reconstruction is not equivalent"
    );
    Ok(format!("{} bytes identical", got.len()))
}

fn gamma_minimization() -> Outcome {
    let a = load(GAMMA);
    let m = minimize(&a).map_err(|e| e.to_string())?;
    ensure!(
        a.num_states() == 3 && m.num_states() == 2,
        "states: {} -> {}",
        a.num_states(),
        m.num_states()
    );
    ensure!(
        m.transitions().all(|(_, _, w)| w.is_one()),
        "a transition weight is not 1"
    );
    ensure!(
        m.final_weight(StateId(0)) == &rat("2") && m.final_weight(StateId(1)) == &rat("3"),
        "final weights {} {}",
        m.final_weight(StateId(0)),
        m.final_weight(StateId(1))
    );
    ensure!(
        equivalent(&a, &m).unwrap(),
        "minimized automaton is not equivalent"
    );
    Ok("states: 3 -> 2, all transition weights 1, finals (2, 3), equivalent".into())
}

fn not_independent() -> Outcome {
    let a = load(NOT_INDEPENDENT);
    let k = a.kind();
    let qt = SyntacticQuotient::build(&a).map_err(|e| e.to_string())?;
    let candidates = candidate_set(&qt).map_err(|e| e.to_string())?;
    ensure!(
        candidates.len() == 2,
        "candidate set has {} elements",
        candidates.len()
    );
    let dep = qt.dependency(&candidates[0].1, &candidates[1].1);
    ensure!(
        dep == Dependency::Dependent {
            factor: rat("2"),
            direction: Direction::LeftOfRight
        },
        "dependency {dep:?}"
    );
    let m = minimize(&a).map_err(|e| e.to_string())?;
    ensure!(m.num_states() == 1, "{} states", m.num_states());
    let alpha = m.alphabet().parse_tree("alpha").unwrap();
    let beta = m.alphabet().parse_tree("beta").unwrap();
    ensure!(
        m.evaluate(&alpha) == w("2", k),
        "value at alpha {}",
        m.evaluate(&alpha)
    );
    ensure!(
        m.evaluate(&beta) == w("1", k),
        "value at beta {}",
        m.evaluate(&beta)
    );
    Ok("[1.alpha] = 2·[1.beta]; 1 state; alpha -> 2, beta -> 1".into())
}

fn oracle_agreement(corpus: &[Wta]) -> Outcome {
    let results = batch::map(&corpus.iter().enumerate().collect::<Vec<_>>(), |&(i, a)| {
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let qt = SyntacticQuotient::build(a).map_err(|e| e.to_string())?;
        let oracle = BruteForceOracle::new(a, 2 * a.num_states()).map_err(|e| e.to_string())?;
        let pairs = monomial_pairs(&mut rng, a, 3, PAIRS_PER_AUTOMATON);
        if pairs.len() < PAIRS_PER_AUTOMATON {
            return Err(format!(
                "automaton {i}: only {} distinct pairs",
                pairs.len()
            ));
        }
        let mut congruent = 0usize;
        for (m1, m2) in &pairs {
            let fast = qt.congruent(m1, m2).map_err(|e| e.to_string())?;
            let slow = oracle.congruent(m1, m2).map_err(|e| e.to_string())?;
            if fast != slow {
                return Err(format!(
                    "automaton {i}: {} vs {}: quotient says {fast}, oracle says {slow}\n{a}",
                    m1.display(a.alphabet()),
                    m2.display(a.alphabet())
                ));
            }
            congruent += fast as usize;
        }
        Ok((pairs.len(), congruent))
    });
    let mut pairs = 0;
    let mut congruent = 0;
    for r in results {
        let (p, c) = r?;
        pairs += p;
        congruent += c;
    }
    let merged = corpus
        .iter()
        .filter(|a| {
            SyntacticQuotient::build(a)
                .map(|q| q.num_blocks() < a.num_states())
                .unwrap_or(false)
        })
        .count();
    Ok(format!(
        "{} automata, {pairs} pairs ({congruent} congruent), 0 disagreements; {merged} automata have merged states",
        corpus.len()
    ))
}

fn preservation(corpus: &[Wta]) -> Outcome {
    let alphabets = [binary_alphabet(), unary_alphabet(), mixed_alphabet()];
    let tree_sets: Vec<Vec<Tree>> = alphabets.iter().map(|a| trees_up_to(a, 4)).collect();
    let mut evaluated = 0usize;
    let mut shrunk = 0usize;
    for (i, a) in corpus.iter().enumerate() {
        let trees = &tree_sets[alphabets.iter().position(|x| x == a.alphabet()).unwrap()];
        let m = minimize(a).map_err(|e| e.to_string())?;
        let mm = minimize(&m).map_err(|e| e.to_string())?;
        ensure!(m.num_states() <= a.num_states(), "automaton {i} grew");
        ensure!(
            mm.num_states() == m.num_states(),
            "automaton {i}: not size-idempotent"
        );
        let before = batch::evaluate_all(a, trees);
        let after = batch::evaluate_all(&m, trees);
        if let Some(j) = (0..trees.len()).find(|&j| before[j] != after[j]) {
            return Err(format!(
                "automaton {i}: {} -> {} but minimized gives {}",
                trees[j].format(a.alphabet()),
                before[j],
                after[j]
            ));
        }
        evaluated += trees.len();
        shrunk += (m.num_states() < a.num_states()) as usize;
    }
    Ok(format!(
        "{} automata, {evaluated} tree evaluations at height <= 4 agree; {shrunk} shrank; idempotent",
        corpus.len()
    ))
}

fn addition_irrelevance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let alphabets = [binary_alphabet(), unary_alphabet(), mixed_alphabet()];
    let tree_sets: Vec<Vec<Tree>> = alphabets.iter().map(|a| trees_up_to(a, 4)).collect();
    let mut compared = 0;
    for i in 0..50 {
        let shape = Shape {
            alphabet: alphabets[i % 3].clone(),
            kind: SemifieldKind::MaxTimes,
            states: 1 + i % 3,
            density: 0.8,
            final_density: 0.6,
        };
        let max = random_wta(&mut rng, &shape);
        let plus = max
            .with_kind(SemifieldKind::Rational)
            .map_err(|e| e.to_string())?;
        let trees = &tree_sets[i % 3];
        let a = batch::map(trees, |t| max.evaluate_general(t).to_string());
        let b = batch::map(trees, |t| plus.evaluate_general(t).to_string());
        ensure!(a == b, "automaton {i}: max and + disagree");
        compared += trees.len();
    }
    Ok(format!(
        "50 automata, {compared} trees of height <= 4, identical values"
    ))
}

fn weight_strategy(kind: SemifieldKind) -> BoxedStrategy<Weight> {
    let zero = Weight::zero(kind);
    let nonzero: BoxedStrategy<Weight> = match kind {
        SemifieldKind::Boolean => Just(Weight::one(kind)).boxed(),
        SemifieldKind::MaxTimes => (1i64..60, 1i64..12)
            .prop_map(move |(n, d)| Weight::from_ratio(kind, n, d).unwrap())
            .boxed(),
        _ => (-60i64..60, 1i64..12)
            .prop_map(move |(n, d)| Weight::from_ratio(kind, n, d).unwrap())
            .boxed(),
    };
    prop_oneof![1 => Just(zero), 6 => nonzero].boxed()
}

fn axioms_hold(a: &Weight, b: &Weight, c: &Weight) -> Result<(), TestCaseError> {
    let kind = a.kind();
    let (zero, one) = (Weight::zero(kind), Weight::one(kind));
    let p = |x: &Weight, y: &Weight| x.plus(y).unwrap();
    let t = |x: &Weight, y: &Weight| x.times(y).unwrap();
    prop_assert_eq!(p(&p(a, b), c), p(a, &p(b, c)));
    prop_assert_eq!(t(&t(a, b), c), t(a, &t(b, c)));
    prop_assert_eq!(p(a, b), p(b, a));
    prop_assert_eq!(t(a, b), t(b, a));
    prop_assert_eq!(t(a, &p(b, c)), p(&t(a, b), &t(a, c)));
    prop_assert_eq!(p(a, &zero), a.clone());
    prop_assert_eq!(t(a, &one), a.clone());
    prop_assert_eq!(t(a, &zero), zero.clone());
    if !a.is_zero() {
        prop_assert_eq!(t(a, &a.reciprocal().unwrap()), one.clone());
    }
    prop_assert_eq!(t(a, b).is_zero(), a.is_zero() || b.is_zero());
    Ok(())
}

fn semifield_axioms() -> Outcome {
    let mut lines = Vec::new();
    for kind in SemifieldKind::ALL {
        let mut runner = TestRunner::new(Config {
            cases: 10_000,
            failure_persistence: None,
            ..Config::default()
        });
        let s = weight_strategy(kind);
        runner
            .run(&(s.clone(), s.clone(), s), |(a, b, c)| {
                axioms_hold(&a, &b, &c)
            })
            .map_err(|e| format!("{kind}: {e}"))?;
        lines.push(format!("{kind} 10000"));
    }
    Ok(format!("cases per semifield: {}", lines.join(", ")))
}

fn minimality(corpus: &[Wta]) -> Outcome {
    for (i, a) in corpus.iter().enumerate() {
        let m = minimize(a).map_err(|e| e.to_string())?;
        ensure!(
            is_minimal(&m).unwrap(),
            "automaton {i}: minimized result not minimal"
        );
        let padded = add_unreachable_state(a);
        ensure!(
            !is_minimal(&padded).unwrap(),
            "automaton {i}: padded automaton reported minimal"
        );
    }
    Ok(format!(
        "{} automata: minimized minimal, padded not minimal",
        corpus.len()
    ))
}

fn main() {
    let corpus = shared_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("alpha-parity automaton values", Box::new(even_odd_values)),
        (
            "reconstruction from the congruence",
            Box::new(reconstruction),
        ),
        ("gamma automaton minimization", Box::new(gamma_minimization)),
        ("dependent candidate set", Box::new(not_independent)),
        (
            "quotient agrees with bounded oracle",
            Box::new(|| oracle_agreement(&corpus)),
        ),
        (
            "semantics preservation and idempotence",
            Box::new(|| preservation(&corpus)),
        ),
        ("addition irrelevance", Box::new(addition_irrelevance)),
        ("semifield axioms", Box::new(semifield_axioms)),
        (
            "minimality characterization",
            Box::new(|| minimality(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

#[allow(dead_code)]
fn unit_monomial(kind: SemifieldKind, tree: Tree) -> Monomial {
    Monomial::unit(kind, tree)
}
