//! The syntactic congruence of the language of a slim bu-deterministic
//! automaton, as a partition of its states with scaling witnesses, and a
//! bounded-height oracle for cross-checking it.
//!
//! For a state `q` write `β_q(c)` for the weight observed at the root when
//! a run in `q` with weight `𝟙` is plugged into context `c`. Two monomials
//! `b₁.ξ₁`, `b₂.ξ₂` with runs `(q₁, w₁)`, `(q₂, w₂)` are congruent exactly
//! when `b₁w₁·β_{q₁} = b₂w₂·β_{q₂}` as functions of `c`.

use std::collections::HashMap;

use crate::error::{Result, WtaError};
use crate::scalar::{Dependency, DependencyOracle, Direction, Monomial};
use crate::semifield::{SemifieldKind, Weight};
use crate::terms::{Symbol, Tree};
use crate::wta::{DetValue, StateId, Wta};

/// An elementary context with its side subtrees abstracted to their run
/// states: symbol, hole position, and the states of the other children.
type Step = (Symbol, usize, Vec<StateId>);

/// For each state, every elementary step that can consume it, with the
/// resulting state and transition weight. Sorted by step.
fn step_index(a: &Wta) -> Vec<Vec<(Step, StateId, Weight)>> {
    let mut out = vec![Vec::new(); a.num_states()];
    for (key, target, w) in a.transitions() {
        for (i, q) in key.inputs.iter().enumerate() {
            let mut sides = key.inputs.clone();
            sides.remove(i);
            out[q.0].push(((key.symbol, i, sides), target, w.clone()));
        }
    }
    for v in &mut out {
        v.sort_by(|x, y| x.0.cmp(&y.0));
    }
    out
}

/// The congruence class of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassRep {
    Zero,
    Class { block: usize, scal: Weight },
}

impl ClassRep {
    pub fn is_zero(&self) -> bool {
        matches!(self, ClassRep::Zero)
    }

    /// `b · [m] = [b · m]`.
    pub fn scale(&self, b: &Weight) -> ClassRep {
        match self {
            ClassRep::Class { block, scal } if !b.is_zero() => ClassRep::Class {
                block: *block,
                scal: scal.mul(b),
            },
            _ => ClassRep::Zero,
        }
    }
}

/// Finite encoding of the congruence for one slim bu-deterministic wta.
#[derive(Clone, Debug)]
pub struct SyntacticQuotient {
    wta: Wta,
    block_of: Vec<Option<usize>>,
    representatives: Vec<StateId>,
    lambda: Vec<Weight>,
    rep_trees: Vec<Tree>,
}

impl SyntacticQuotient {
    /// Partitions the states of `a` by their observation functions up to a
    /// uniform non-zero scalar.
    ///
    /// Each live state gets a potential: the observation along the
    /// shortest, then least, abstract context that observes something
    /// non-zero. States related by a scalar have the same such context and
    /// potentials related by that scalar, so dividing by the potential makes
    /// the scalar disappear and Moore refinement on the normalized
    /// transition weights decides the relation.
    pub fn build(a: &Wta) -> Result<SyntacticQuotient> {
        if !a.is_bu_deterministic() {
            return Err(WtaError::NotDeterministic);
        }
        if !a.is_slim()? {
            return Err(WtaError::NotSlim);
        }
        let n = a.num_states();
        let kind = a.kind();
        let steps = step_index(a);

        let mut live: Vec<bool> = a.states().map(|q| !a.final_weight(q).is_zero()).collect();
        let mut dist: Vec<usize> = live
            .iter()
            .map(|&l| if l { 0 } else { usize::MAX })
            .collect();
        loop {
            let mut changed = false;
            for q in 0..n {
                for (_, t, _) in &steps[q] {
                    if live[t.0] && dist[t.0] + 1 < dist[q] {
                        dist[q] = dist[t.0] + 1;
                        live[q] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let mut potential: Vec<Option<Weight>> = vec![None; n];
        let mut order: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        order.sort_by_key(|&q| dist[q]);
        for &q in &order {
            let value = if dist[q] == 0 {
                a.final_weight(StateId(q)).clone()
            } else {
                let (_, t, w) = steps[q]
                    .iter()
                    .find(|(_, t, _)| live[t.0] && dist[t.0] + 1 == dist[q])
                    .expect("a live state at positive distance has a witnessing step");
                w.mul(potential[t.0].as_ref().expect("smaller distance is done"))
            };
            potential[q] = Some(value);
        }
        let pot = |q: usize| potential[q].as_ref().expect("live");

        let mut block: Vec<usize> = vec![0; n];
        let mut count = 1;
        loop {
            let mut ids: HashMap<(usize, Weight, Vec<(&Step, usize, Weight)>), usize> =
                HashMap::new();
            let mut next = vec![0; n];
            for q in (0..n).filter(|&q| live[q]) {
                let inv = pot(q).reciprocal()?;
                let moves: Vec<(&Step, usize, Weight)> = steps[q]
                    .iter()
                    .filter(|(_, t, _)| live[t.0])
                    .map(|(s, t, w)| (s, block[t.0], w.mul(pot(t.0)).mul(&inv)))
                    .collect();
                let sig = (block[q], a.final_weight(StateId(q)).mul(&inv), moves);
                let fresh = ids.len();
                next[q] = *ids.entry(sig).or_insert(fresh);
            }
            let refined = ids.len();
            block = next;
            if refined == count {
                break;
            }
            count = refined;
        }

        let mut block_of = vec![None; n];
        let mut representatives: Vec<StateId> = Vec::new();
        let mut lambda = vec![Weight::one(kind); n];
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        for q in (0..n).filter(|&q| live[q]) {
            let id = *renumber.entry(block[q]).or_insert_with(|| {
                representatives.push(StateId(q));
                representatives.len() - 1
            });
            block_of[q] = Some(id);
            lambda[q] = pot(q).mul(&pot(representatives[id].0).reciprocal()?);
        }
        let rep_trees = a
            .representative_trees()?
            .into_iter()
            .map(|t| t.ok_or(WtaError::NotSlim))
            .collect::<Result<Vec<Tree>>>()?;
        Ok(SyntacticQuotient {
            wta: a.clone(),
            block_of,
            representatives,
            lambda,
            rep_trees,
        })
    }

    pub fn wta(&self) -> &Wta {
        &self.wta
    }

    pub fn kind(&self) -> SemifieldKind {
        self.wta.kind()
    }

    /// Number of live blocks.
    pub fn num_blocks(&self) -> usize {
        self.representatives.len()
    }

    /// The live block of `q`, or `None` when every observation of `q` is
    /// `𝟘`.
    pub fn block_of(&self, q: StateId) -> Option<usize> {
        self.block_of[q.0]
    }

    pub fn is_dead(&self, q: StateId) -> bool {
        self.block_of[q.0].is_none()
    }

    pub fn representative(&self, block: usize) -> StateId {
        self.representatives[block]
    }

    /// `β_q = λ(q) · β_{rep}` for the representative of `q`'s block.
    pub fn lambda(&self, q: StateId) -> &Weight {
        &self.lambda[q.0]
    }

    /// The first tree in enumeration order whose run ends in `q`.
    pub fn rep_tree(&self, q: StateId) -> &Tree {
        &self.rep_trees[q.0]
    }

    /// The members of each live block, in state order.
    pub fn blocks(&self) -> Vec<Vec<StateId>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for q in self.wta.states() {
            if let Some(b) = self.block_of[q.0] {
                out[b].push(q);
            }
        }
        out
    }

    pub fn dead_states(&self) -> Vec<StateId> {
        self.wta.states().filter(|&q| self.is_dead(q)).collect()
    }

    pub fn class_of(&self, m: &Monomial) -> Result<ClassRep> {
        if !self.wta.alphabet().admits(&m.tree) {
            return Err(WtaError::AlphabetMismatch);
        }
        if m.weight.kind() != self.kind() {
            return Err(WtaError::KindMismatch(self.kind(), m.weight.kind()));
        }
        if m.is_zero() {
            return Ok(ClassRep::Zero);
        }
        Ok(match self.wta.h_det_unchecked(&m.tree) {
            DetValue::Zero => ClassRep::Zero,
            DetValue::Live { state, weight } => match self.block_of[state.0] {
                None => ClassRep::Zero,
                Some(block) => ClassRep::Class {
                    block,
                    scal: m.weight.mul(&weight).mul(&self.lambda[state.0]),
                },
            },
        })
    }

    pub fn congruent(&self, m1: &Monomial, m2: &Monomial) -> Result<bool> {
        Ok(self.class_of(m1)? == self.class_of(m2)?)
    }

    pub fn dependency_oracle(&self) -> &dyn DependencyOracle<ClassRep> {
        self
    }
}

impl DependencyOracle<ClassRep> for SyntacticQuotient {
    fn dependency(&self, u: &ClassRep, v: &ClassRep) -> Dependency {
        let kind = self.kind();
        match (u, v) {
            (ClassRep::Zero, ClassRep::Zero) => Dependency::Dependent {
                factor: Weight::one(kind),
                direction: Direction::LeftOfRight,
            },
            (ClassRep::Zero, _) => Dependency::Dependent {
                factor: Weight::zero(kind),
                direction: Direction::LeftOfRight,
            },
            (_, ClassRep::Zero) => Dependency::Dependent {
                factor: Weight::zero(kind),
                direction: Direction::RightOfLeft,
            },
            (
                ClassRep::Class {
                    block: b1,
                    scal: s1,
                },
                ClassRep::Class {
                    block: b2,
                    scal: s2,
                },
            ) => {
                if b1 == b2 {
                    Dependency::Dependent {
                        factor: s1.div(s2),
                        direction: Direction::LeftOfRight,
                    }
                } else {
                    Dependency::Independent
                }
            }
        }
    }

    fn is_zero(&self, u: &ClassRep) -> bool {
        u.is_zero()
    }
}

/// The set of non-zero ratios `ρ` with `ρ · β_x = β_y` on a family of
/// contexts. Constraints of the form `ρ·u = v` only ever produce these
/// three shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Ratios {
    All,
    Only(Weight),
    Empty,
}

impl Ratios {
    /// Solutions of `ρ · u = v`.
    fn solve(u: &Weight, v: &Weight) -> Ratios {
        match (u.is_zero(), v.is_zero()) {
            (true, true) => Ratios::All,
            (true, false) | (false, true) => Ratios::Empty,
            (false, false) => Ratios::Only(v.div(u)),
        }
    }

    fn meet(self, other: &Ratios) -> Ratios {
        match (self, other) {
            (Ratios::Empty, _) | (_, Ratios::Empty) => Ratios::Empty,
            (Ratios::All, r) => r.clone(),
            (r, Ratios::All) => r,
            (Ratios::Only(a), Ratios::Only(b)) => {
                if &a == b {
                    Ratios::Only(a)
                } else {
                    Ratios::Empty
                }
            }
        }
    }

    fn scale(&self, b: &Weight) -> Ratios {
        match self {
            Ratios::Only(r) => Ratios::Only(r.mul(b)),
            other => other.clone(),
        }
    }

    fn contains(&self, r: &Weight) -> bool {
        match self {
            Ratios::All => true,
            Ratios::Only(x) => x == r,
            Ratios::Empty => false,
        }
    }
}

/// Congruence restricted to contexts of bounded height, decided from the
/// definition without the partition.
///
/// A context of height at most `H` is a chain of elementary contexts whose
/// `i`-th member from the root has side subtrees of height at most
/// `H - i - 1`. Side subtrees contribute their run state and a weight that
/// multiplies both sides of every comparison alike, so only the set of
/// states reachable by trees of each height matters. For every pair of
/// states (or `⊥`) and every depth `j` the table holds the ratios that make
/// the two observation functions agree on all outer parts of depth `j`.
#[derive(Clone, Debug)]
pub struct BruteForceOracle {
    wta: Wta,
    height: usize,
    // agree[x][y] over all depths 0..=height; index n is ⊥.
    agree: Vec<Vec<Ratios>>,
}

impl BruteForceOracle {
    pub fn new(a: &Wta, ctx_height: usize) -> Result<BruteForceOracle> {
        if !a.is_bu_deterministic() {
            return Err(WtaError::NotDeterministic);
        }
        let n = a.num_states();
        let bot = n;
        let kind = a.kind();

        // by_height[h]: states of trees of height at most h.
        let mut by_height: Vec<Vec<StateId>> = Vec::with_capacity(ctx_height);
        let mut reached = vec![false; n];
        for _ in 0..ctx_height {
            let snapshot = reached.clone();
            for (key, target, _) in a.transitions() {
                if key.inputs.iter().all(|q| snapshot[q.0]) {
                    reached[target.0] = true;
                }
            }
            by_height.push(a.states().filter(|q| reached[q.0]).collect());
        }

        let depth0: Vec<Vec<Ratios>> = (0..=n)
            .map(|x| {
                (0..=n)
                    .map(|y| {
                        let f = |s: usize| {
                            if s == bot {
                                Weight::zero(kind)
                            } else {
                                a.final_weight(StateId(s)).clone()
                            }
                        };
                        Ratios::solve(&f(x), &f(y))
                    })
                    .collect()
            })
            .collect();

        let mut layer = depth0.clone();
        let mut agree = depth0;
        for j in 1..=ctx_height {
            let sides = &by_height[ctx_height - j];
            let mut next = vec![vec![Ratios::All; n + 1]; n + 1];
            for x in 0..=n {
                for y in 0..=n {
                    if x == bot && y == bot {
                        continue;
                    }
                    let mut acc = Ratios::All;
                    for symbol in a.alphabet().symbols() {
                        let k = a.alphabet().arity(symbol);
                        for hole in 0..k {
                            for tuple in crate::util::index_tuples(sides.len(), k - 1) {
                                let mut inputs: Vec<StateId> =
                                    tuple.iter().map(|&i| sides[i]).collect();
                                let mut step = |s: usize| -> (usize, Weight) {
                                    if s == bot {
                                        return (bot, Weight::zero(kind));
                                    }
                                    inputs.insert(hole, StateId(s));
                                    let r = a.det_step(symbol, &inputs);
                                    inputs.remove(hole);
                                    match r {
                                        Some((t, w)) => (t.0, w.clone()),
                                        None => (bot, Weight::zero(kind)),
                                    }
                                };
                                let (tx, wx) = step(x);
                                let (ty, wy) = step(y);
                                let r = &layer[tx][ty];
                                let moved = if tx == bot || ty == bot {
                                    r.clone()
                                } else {
                                    // ρ·wx·β_tx = wy·β_ty  ⇔  ρ·wx/wy ∈ r
                                    r.scale(&wy.div(&wx))
                                };
                                acc = acc.meet(&moved);
                                if acc == Ratios::Empty {
                                    break;
                                }
                            }
                        }
                    }
                    next[x][y] = acc;
                }
            }
            for x in 0..=n {
                for y in 0..=n {
                    let merged =
                        std::mem::replace(&mut agree[x][y], Ratios::Empty).meet(&next[x][y]);
                    agree[x][y] = merged;
                }
            }
            layer = next;
        }
        Ok(BruteForceOracle {
            wta: a.clone(),
            height: ctx_height,
            agree,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// The run of `m` as (state index or ⊥, accumulated weight).
    fn run(&self, m: &Monomial) -> Result<(usize, Weight)> {
        if !self.wta.alphabet().admits(&m.tree) {
            return Err(WtaError::AlphabetMismatch);
        }
        if m.weight.kind() != self.wta.kind() {
            return Err(WtaError::KindMismatch(self.wta.kind(), m.weight.kind()));
        }
        let bot = (self.wta.num_states(), Weight::zero(self.wta.kind()));
        if m.is_zero() {
            return Ok(bot);
        }
        Ok(match self.wta.h_det_unchecked(&m.tree) {
            DetValue::Zero => bot,
            DetValue::Live { state, weight } => (state.0, m.weight.mul(&weight)),
        })
    }

    fn zero_run(&self, x: usize) -> bool {
        let bot = self.wta.num_states();
        x == bot || self.agree[x][bot] == Ratios::All
    }

    /// `b₁ ⊗ ⟦A⟧(c[ξ₁]) = b₂ ⊗ ⟦A⟧(c[ξ₂])` for every context `c` of height
    /// at most the oracle's bound.
    pub fn congruent(&self, m1: &Monomial, m2: &Monomial) -> Result<bool> {
        let (x, wx) = self.run(m1)?;
        let (y, wy) = self.run(m2)?;
        let bot = self.wta.num_states();
        Ok(if x == bot || y == bot {
            self.agree[x][y] == Ratios::All
        } else {
            self.agree[x][y].contains(&wx.div(&wy))
        })
    }
}

impl DependencyOracle<Monomial> for BruteForceOracle {
    fn dependency(&self, u: &Monomial, v: &Monomial) -> Dependency {
        let kind = self.wta.kind();
        let (x, wx) = self.run(u).expect("monomial over the oracle's alphabet");
        let (y, wy) = self.run(v).expect("monomial over the oracle's alphabet");
        let (zu, zv) = (self.zero_run(x), self.zero_run(y));
        let dependent = |factor, direction| Dependency::Dependent { factor, direction };
        match (zu, zv) {
            (true, true) => dependent(Weight::one(kind), Direction::LeftOfRight),
            (true, false) => dependent(Weight::zero(kind), Direction::LeftOfRight),
            (false, true) => dependent(Weight::zero(kind), Direction::RightOfLeft),
            (false, false) => match &self.agree[x][y] {
                // ρ·β_x = β_y, so u = wx·β_x = (wx / (wy·ρ)) · v
                Ratios::Only(rho) => dependent(wx.div(&wy.mul(rho)), Direction::LeftOfRight),
                _ => Dependency::Independent,
            },
        }
    }

    fn is_zero(&self, u: &Monomial) -> bool {
        let (x, _) = self.run(u).expect("monomial over the oracle's alphabet");
        self.zero_run(x)
    }
}

/// [`BruteForceOracle::congruent`] for a single query.
pub fn brute_force_congruent(
    a: &Wta,
    m1: &Monomial,
    m2: &Monomial,
    ctx_height: usize,
) -> Result<bool> {
    BruteForceOracle::new(a, ctx_height)?.congruent(m1, m2)
}
