//! Minimization of bottom-up deterministic automata through the syntactic
//! quotient, the minimality test and an exact equivalence check.

use std::collections::{HashMap, HashSet};

use crate::congruence::{ClassRep, SyntacticQuotient};
use crate::error::{Result, WtaError};
use crate::scalar::{self, Monomial};
use crate::semifield::Weight;
use crate::terms::{RankedAlphabet, Symbol, Tree};
use crate::util::index_tuples;
use crate::wta::{StateId, Wta, WtaBuilder};

/// The first tree whose run ends in each state.
pub fn representative_trees(a: &Wta) -> Result<Vec<Tree>> {
    a.representative_trees()?
        .into_iter()
        .map(|t| t.ok_or(WtaError::NotSlim))
        .collect()
}

/// `[𝟙.t(q)]` for every state `q` in order, keeping the first tree of each
/// class.
pub fn candidate_set(qt: &SyntacticQuotient) -> Result<Vec<(Tree, ClassRep)>> {
    let mut out: Vec<(Tree, ClassRep)> = Vec::new();
    for q in qt.wta().states() {
        let tree = qt.rep_tree(q).clone();
        let class = qt.class_of(&Monomial::unit(qt.kind(), tree.clone()))?;
        if out.iter().all(|(_, c)| *c != class) {
            out.push((tree, class));
        }
    }
    Ok(out)
}

/// A pair-independent generating set of the quotient with witness trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    pub elements: Vec<(Tree, ClassRep)>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn classes(&self) -> Vec<ClassRep> {
        self.elements.iter().map(|(_, c)| c.clone()).collect()
    }

    fn is_zero_language(&self) -> bool {
        self.elements.iter().all(|(_, c)| c.is_zero())
    }
}

pub fn scalar_basis(qt: &SyntacticQuotient) -> Result<Basis> {
    let candidates = candidate_set(qt)?;
    let classes: Vec<ClassRep> = candidates.iter().map(|(_, c)| c.clone()).collect();
    let kept = scalar::pair_independent_subset(&classes, qt);
    let elements = kept
        .into_iter()
        .map(|c| {
            candidates
                .iter()
                .find(|(_, k)| *k == c)
                .cloned()
                .expect("kept classes come from the candidates")
        })
        .collect();
    Ok(Basis { elements })
}

/// `c<i>__<tree>` with the tree's punctuation flattened to underscores.
fn state_name(index: usize, tree: &Tree, alphabet: &RankedAlphabet) -> String {
    let flat: String = tree
        .format(alphabet)
        .chars()
        .filter_map(|ch| match ch {
            '(' | ',' => Some('_'),
            ')' => None,
            c => Some(c),
        })
        .collect();
    let mut name = format!("c{index}__{flat}");
    while alphabet.lookup(&name).is_some() {
        name.push('_');
    }
    name
}

/// The automaton whose states are the basis elements, with
/// `δ(ζ₁⋯ζ_k, σ, ζ) = scal([𝟙.σ(ζ₁,…,ζ_k)])` when the generator is `ζ`,
/// and `F_ζ = ⟦A⟧(ζ)`.
pub fn build_wta_from_basis(qt: &SyntacticQuotient, basis: &Basis) -> Result<Wta> {
    let a = qt.wta();
    let alphabet = a.alphabet().clone();
    let kind = a.kind();
    let names: Vec<String> = basis
        .elements
        .iter()
        .enumerate()
        .map(|(i, (t, _))| state_name(i, t, &alphabet))
        .collect();
    if basis.is_zero_language() {
        let name = names.first().map(String::as_str);
        return Ok(Wta::zero_language(kind, alphabet, name));
    }
    let classes = basis.classes();
    let mut b = WtaBuilder::new(kind, alphabet.clone());
    let ids: Vec<StateId> = names.iter().map(|n| b.state(n)).collect::<Result<_>>()?;
    for symbol in alphabet.symbols() {
        for tuple in index_tuples(basis.len(), alphabet.arity(symbol)) {
            let children = tuple.iter().map(|&i| basis.elements[i].0.clone()).collect();
            let tree = Tree::node(symbol, children);
            let class = qt.class_of(&Monomial::unit(kind, tree))?;
            if let Some((scal, j)) = scalar::decompose(&class, &classes, qt)? {
                let inputs = tuple.iter().map(|&i| ids[i]).collect();
                b.transition(symbol, inputs, ids[j], scal)?;
            }
        }
    }
    for (i, (tree, _)) in basis.elements.iter().enumerate() {
        let f = a.evaluate(tree);
        if !f.is_zero() {
            b.set_final(ids[i], f)?;
        }
    }
    b.build()
}

/// The basis of the quotient of `slim(a)`, together with that quotient.
fn analyse(a: &Wta) -> Result<(SyntacticQuotient, Basis)> {
    if !a.is_bu_deterministic() {
        return Err(WtaError::NotDeterministic);
    }
    let slim = a.slim()?;
    let qt = SyntacticQuotient::build(&slim)?;
    let basis = scalar_basis(&qt)?;
    Ok((qt, basis))
}

/// A minimal bu-deterministic automaton with the same semantics.
pub fn minimize(a: &Wta) -> Result<Wta> {
    let (qt, basis) = analyse(a)?;
    build_wta_from_basis(&qt, &basis)
}

/// The degree of the quotient of monomials by the congruence of `⟦a⟧`.
pub fn degree(a: &Wta) -> Result<usize> {
    Ok(analyse(a)?.1.len())
}

/// Slim and exactly as many states as the degree.
pub fn is_minimal(a: &Wta) -> Result<bool> {
    if !a.is_bu_deterministic() {
        return Err(WtaError::NotDeterministic);
    }
    Ok(a.is_slim()? && a.num_states() == degree(a)?)
}

type Pair = (Option<StateId>, Option<StateId>);

/// `⟦a⟧ = ⟦b⟧`, decided on the product of the two state algebras.
///
/// Every pair of run states reachable by a common tree gets the weight
/// ratio of its first derivation. If some context observes a non-zero
/// value from a pair, all trees reaching it must share that ratio, and the
/// two languages agree iff this holds for every such pair together with the
/// final weights.
pub fn equivalent(a: &Wta, b: &Wta) -> Result<bool> {
    if a.kind() != b.kind() {
        return Err(WtaError::KindMismatch(a.kind(), b.kind()));
    }
    if !a.is_bu_deterministic() || !b.is_bu_deterministic() {
        return Err(WtaError::NotDeterministic);
    }
    let symbol_map = match_alphabets(a.alphabet(), b.alphabet())?;
    let kind = a.kind();

    let mut pairs: Vec<Pair> = Vec::new();
    let mut index: HashMap<Pair, usize> = HashMap::new();
    let mut ratio: Vec<Option<Weight>> = Vec::new();
    // (children, result, ratio of this derivation when both sides live)
    let mut edges: Vec<(Vec<usize>, usize, Option<Weight>)> = Vec::new();
    let mut seen_tuples: HashSet<(Symbol, Vec<usize>)> = HashSet::new();
    loop {
        let before = pairs.len();
        for sa in a.alphabet().symbols() {
            let sb = symbol_map[sa.0];
            let k = a.alphabet().arity(sa);
            for tuple in index_tuples(before, k) {
                if !seen_tuples.insert((sa, tuple.clone())) {
                    continue;
                }
                let side = |w: &Wta, sym: Symbol, pick: fn(&Pair) -> Option<StateId>| {
                    let inputs: Option<Vec<StateId>> =
                        tuple.iter().map(|&i| pick(&pairs[i])).collect();
                    inputs.and_then(|inp| w.det_step(sym, &inp).map(|(t, w)| (t, w.clone())))
                };
                let ra = side(a, sa, |p| p.0);
                let rb = side(b, sb, |p| p.1);
                if ra.is_none() && rb.is_none() {
                    continue;
                }
                let r = match (&ra, &rb) {
                    (Some((_, wa)), Some((_, wb))) => {
                        let mut acc = wa.div(wb);
                        for &i in &tuple {
                            acc = acc.mul(ratio[i].as_ref().expect("both sides live"));
                        }
                        Some(acc)
                    }
                    _ => None,
                };
                let pair = (ra.map(|x| x.0), rb.map(|x| x.0));
                let id = *index.entry(pair).or_insert_with(|| {
                    pairs.push(pair);
                    ratio.push(r.clone());
                    pairs.len() - 1
                });
                edges.push((tuple, id, r));
            }
        }
        if pairs.len() == before {
            break;
        }
    }

    let final_of = |w: &Wta, q: Option<StateId>| match q {
        Some(q) => w.final_weight(q).clone(),
        None => Weight::zero(kind),
    };
    let mut observable: Vec<bool> = pairs
        .iter()
        .map(|p| !final_of(a, p.0).is_zero() || !final_of(b, p.1).is_zero())
        .collect();
    loop {
        let mut changed = false;
        for (children, result, _) in &edges {
            if observable[*result] {
                for &c in children {
                    if !observable[c] {
                        observable[c] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    for (i, p) in pairs.iter().enumerate() {
        if !observable[i] {
            continue;
        }
        let Some(rho) = &ratio[i] else {
            return Ok(false);
        };
        if rho.mul(&final_of(a, p.0)) != final_of(b, p.1) {
            return Ok(false);
        }
    }
    for (_, result, r) in &edges {
        if observable[*result] && r != &ratio[*result] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For each symbol of `a`, the symbol of `b` with the same name and arity.
fn match_alphabets(a: &RankedAlphabet, b: &RankedAlphabet) -> Result<Vec<Symbol>> {
    if a.len() != b.len() {
        return Err(WtaError::AlphabetMismatch);
    }
    a.symbols()
        .map(|s| match b.lookup(a.name(s)) {
            Some(t) if b.arity(t) == a.arity(s) => Ok(t),
            _ => Err(WtaError::AlphabetMismatch),
        })
        .collect()
}
