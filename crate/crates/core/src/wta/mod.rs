//! Weighted tree automata: the model, the sum-product semantics, the
//! bottom-up deterministic fast path and the slim construction.

mod format;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Result, WtaError};
use crate::semifield::{SemifieldKind, Weight};
use crate::terms::{is_identifier, Context, RankedAlphabet, Symbol, Tree, CONTEXT_VARIABLE};
use crate::util::index_tuples;

pub use format::parse_wta;

/// Index of a state, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// A state or the sink `⊥` of the state algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateOrBot {
    State(StateId),
    Bot,
}

impl StateOrBot {
    pub fn state(self) -> Option<StateId> {
        match self {
            StateOrBot::State(q) => Some(q),
            StateOrBot::Bot => None,
        }
    }
}

/// A vector with at most one non-zero entry: `Zero` is `𝟘^Q` and
/// `Live { state, weight }` is `weight · 𝟙_state`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DetValue {
    Zero,
    Live { state: StateId, weight: Weight },
}

impl DetValue {
    pub fn unit(state: StateId, kind: SemifieldKind) -> DetValue {
        DetValue::Live {
            state,
            weight: Weight::one(kind),
        }
    }

    pub fn state(&self) -> StateOrBot {
        match self {
            DetValue::Zero => StateOrBot::Bot,
            DetValue::Live { state, .. } => StateOrBot::State(*state),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, DetValue::Zero)
    }

    /// `b · v`.
    pub fn scale(&self, b: &Weight) -> DetValue {
        match self {
            DetValue::Live { state, weight } if !b.is_zero() => DetValue::Live {
                state: *state,
                weight: weight.mul(b),
            },
            _ => DetValue::Zero,
        }
    }

    /// The dense vector over `n` states.
    pub fn to_vector(&self, n: usize, kind: SemifieldKind) -> Vec<Weight> {
        let mut v = vec![Weight::zero(kind); n];
        if let DetValue::Live { state, weight } = self {
            v[state.0] = weight.clone();
        }
        v
    }
}

/// Left-hand side of a transition: the symbol and its input states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionKey {
    pub symbol: Symbol,
    pub inputs: Vec<StateId>,
}

/// A `(Σ, B)`-wta with sparse transitions. Absent entries are `𝟘`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wta {
    kind: SemifieldKind,
    alphabet: RankedAlphabet,
    states: Vec<String>,
    delta: BTreeMap<TransitionKey, BTreeMap<StateId, Weight>>,
    finals: Vec<Weight>,
    deterministic: bool,
}

/// Incremental construction of a [`Wta`]. States are introduced by use.
#[derive(Clone, Debug)]
pub struct WtaBuilder {
    kind: SemifieldKind,
    alphabet: RankedAlphabet,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    delta: BTreeMap<TransitionKey, BTreeMap<StateId, Weight>>,
    finals: BTreeMap<StateId, Weight>,
}

impl WtaBuilder {
    pub fn new(kind: SemifieldKind, alphabet: RankedAlphabet) -> Self {
        WtaBuilder {
            kind,
            alphabet,
            states: Vec::new(),
            state_index: HashMap::new(),
            delta: BTreeMap::new(),
            finals: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> SemifieldKind {
        self.kind
    }

    /// Returns the id of `name`, declaring it if needed.
    pub fn state(&mut self, name: &str) -> Result<StateId> {
        if let Some(&id) = self.state_index.get(name) {
            return Ok(id);
        }
        if !is_identifier(name) || name == CONTEXT_VARIABLE {
            return Err(WtaError::Invalid(format!("invalid state name {name:?}")));
        }
        if self.alphabet.lookup(name).is_some() {
            return Err(WtaError::Invalid(format!(
                "state {name:?} clashes with a symbol of the alphabet"
            )));
        }
        let id = StateId(self.states.len());
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.state_index.contains_key(name)
    }

    fn check_weight(&self, weight: &Weight) -> Result<()> {
        if weight.kind() != self.kind {
            return Err(WtaError::KindMismatch(self.kind, weight.kind()));
        }
        Ok(())
    }

    /// Sets `δ(inputs, symbol, target) = weight`. Setting the same entry
    /// twice is an error; `𝟘` entries are dropped.
    pub fn transition(
        &mut self,
        symbol: Symbol,
        inputs: Vec<StateId>,
        target: StateId,
        weight: Weight,
    ) -> Result<()> {
        self.check_weight(&weight)?;
        if !self.alphabet.contains(symbol) {
            return Err(WtaError::Invalid(format!(
                "unknown symbol index {}",
                symbol.0
            )));
        }
        let arity = self.alphabet.arity(symbol);
        if inputs.len() != arity {
            return Err(WtaError::Invalid(format!(
                "symbol {} has arity {arity} but the transition has {} inputs",
                self.alphabet.name(symbol),
                inputs.len()
            )));
        }
        let n = self.states.len();
        if inputs.iter().chain(Some(&target)).any(|q| q.0 >= n) {
            return Err(WtaError::Invalid(
                "transition uses an undeclared state".into(),
            ));
        }
        let key = TransitionKey { symbol, inputs };
        let targets = self.delta.entry(key).or_default();
        if targets.contains_key(&target) {
            return Err(WtaError::Invalid("duplicate transition".into()));
        }
        targets.insert(target, weight);
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId, weight: Weight) -> Result<()> {
        self.check_weight(&weight)?;
        if state.0 >= self.states.len() {
            return Err(WtaError::Invalid(
                "final weight for an undeclared state".into(),
            ));
        }
        if self.finals.insert(state, weight).is_some() {
            return Err(WtaError::Invalid(format!(
                "duplicate final weight for state {}",
                self.states[state.0]
            )));
        }
        Ok(())
    }

    pub fn build(self) -> Result<Wta> {
        self.alphabet.validate()?;
        if self.states.is_empty() {
            return Err(WtaError::Invalid(
                "an automaton needs at least one state".into(),
            ));
        }
        for name in &self.states {
            if self.alphabet.lookup(name).is_some() {
                return Err(WtaError::Invalid(format!(
                    "state {name:?} clashes with a symbol of the alphabet"
                )));
            }
        }
        let mut delta = self.delta;
        for targets in delta.values_mut() {
            targets.retain(|_, w| !w.is_zero());
        }
        delta.retain(|_, targets| !targets.is_empty());
        let deterministic = delta.values().all(|t| t.len() <= 1);
        let mut finals = vec![Weight::zero(self.kind); self.states.len()];
        for (q, w) in self.finals {
            finals[q.0] = w;
        }
        Ok(Wta {
            kind: self.kind,
            alphabet: self.alphabet,
            states: self.states,
            delta,
            finals,
            deterministic,
        })
    }
}

impl Wta {
    pub fn kind(&self) -> SemifieldKind {
        self.kind
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn final_weight(&self, q: StateId) -> &Weight {
        &self.finals[q.0]
    }

    /// All non-zero transitions `(key, target, weight)` in key order.
    pub fn transitions(&self) -> impl Iterator<Item = (&TransitionKey, StateId, &Weight)> {
        self.delta
            .iter()
            .flat_map(|(k, targets)| targets.iter().map(move |(q, w)| (k, *q, w)))
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.values().map(BTreeMap::len).sum()
    }

    /// `δ(inputs, symbol, target)`.
    pub fn weight(&self, symbol: Symbol, inputs: &[StateId], target: StateId) -> Weight {
        self.delta
            .get(&TransitionKey {
                symbol,
                inputs: inputs.to_vec(),
            })
            .and_then(|t| t.get(&target))
            .cloned()
            .unwrap_or_else(|| Weight::zero(self.kind))
    }

    /// The unique target with non-zero weight, for a bu-deterministic
    /// automaton.
    pub fn det_step(&self, symbol: Symbol, inputs: &[StateId]) -> Option<(StateId, &Weight)> {
        let key = TransitionKey {
            symbol,
            inputs: inputs.to_vec(),
        };
        self.delta
            .get(&key)
            .and_then(|t| t.iter().next())
            .map(|(q, w)| (*q, w))
    }

    /// A builder pre-populated with this automaton's states, transitions
    /// and final weights.
    pub fn to_builder(&self) -> WtaBuilder {
        let mut b = WtaBuilder::new(self.kind, self.alphabet.clone());
        for name in &self.states {
            b.state(name).expect("existing state names are valid");
        }
        b.delta = self.delta.clone();
        b.finals = self
            .states()
            .filter(|q| !self.finals[q.0].is_zero())
            .map(|q| (q, self.finals[q.0].clone()))
            .collect();
        b
    }

    pub fn is_bu_deterministic(&self) -> bool {
        self.deterministic
    }

    fn require_deterministic(&self) -> Result<()> {
        if self.deterministic {
            Ok(())
        } else {
            Err(WtaError::NotDeterministic)
        }
    }

    /// Every `(w, σ)` with `w ∈ Q^{rk(σ)}` has at least one non-zero
    /// target.
    pub fn is_total(&self) -> bool {
        let n = self.num_states();
        self.alphabet.symbols().all(|symbol| {
            index_tuples(n, self.alphabet.arity(symbol)).all(|tuple| {
                let key = TransitionKey {
                    symbol,
                    inputs: tuple.into_iter().map(StateId).collect(),
                };
                self.delta.contains_key(&key)
            })
        })
    }

    /// `h_A(ξ)` by the sum-product recursion over all state tuples.
    pub fn h_general(&self, tree: &Tree) -> Vec<Weight> {
        let children: Vec<Vec<Weight>> = tree.children.iter().map(|c| self.h_general(c)).collect();
        let mut out = vec![Weight::zero(self.kind); self.num_states()];
        let lo = TransitionKey {
            symbol: tree.symbol,
            inputs: Vec::new(),
        };
        for (key, targets) in self.delta.range(lo..) {
            if key.symbol != tree.symbol {
                break;
            }
            let factor = key
                .inputs
                .iter()
                .zip(&children)
                .fold(Weight::one(self.kind), |acc, (q, v)| acc.mul(&v[q.0]));
            if factor.is_zero() {
                continue;
            }
            for (q, w) in targets {
                out[q.0] = out[q.0].add(&factor.mul(w));
            }
        }
        out
    }

    /// `⟦A⟧(ξ) = h_A(ξ) · F`, always through the sum-product recursion.
    pub fn evaluate_general(&self, tree: &Tree) -> Weight {
        self.h_general(tree)
            .iter()
            .zip(&self.finals)
            .fold(Weight::zero(self.kind), |acc, (h, f)| acc.add(&h.mul(f)))
    }

    /// The run state of `tree` in the state algebra.
    pub fn state_of(&self, tree: &Tree) -> Result<StateOrBot> {
        self.require_deterministic()?;
        Ok(self.state_unchecked(tree))
    }

    fn state_unchecked(&self, tree: &Tree) -> StateOrBot {
        let mut inputs = Vec::with_capacity(tree.children.len());
        for c in &tree.children {
            match self.state_unchecked(c) {
                StateOrBot::State(q) => inputs.push(q),
                StateOrBot::Bot => return StateOrBot::Bot,
            }
        }
        match self.det_step(tree.symbol, &inputs) {
            Some((q, _)) => StateOrBot::State(q),
            None => StateOrBot::Bot,
        }
    }

    /// `h_A(ξ)` for a bu-deterministic automaton, computed as a product
    /// along the unique run without using `⊕`.
    pub fn h_det(&self, tree: &Tree) -> Result<DetValue> {
        self.require_deterministic()?;
        Ok(self.h_det_unchecked(tree))
    }

    pub(crate) fn h_det_unchecked(&self, tree: &Tree) -> DetValue {
        let mut inputs = Vec::with_capacity(tree.children.len());
        let mut weight = Weight::one(self.kind);
        for c in &tree.children {
            match self.h_det_unchecked(c) {
                DetValue::Zero => return DetValue::Zero,
                DetValue::Live { state, weight: w } => {
                    inputs.push(state);
                    weight = weight.mul(&w);
                }
            }
        }
        match self.det_step(tree.symbol, &inputs) {
            Some((state, w)) => DetValue::Live {
                state,
                weight: weight.mul(w),
            },
            None => DetValue::Zero,
        }
    }

    /// `⟦A⟧(ξ)`: the run product when bu-deterministic, otherwise the
    /// sum-product semantics.
    pub fn evaluate(&self, tree: &Tree) -> Weight {
        if self.deterministic {
            self.observe(&self.h_det_unchecked(tree))
        } else {
            self.evaluate_general(tree)
        }
    }

    /// `v · F` for a value with at most one non-zero entry.
    pub fn observe(&self, value: &DetValue) -> Weight {
        match value {
            DetValue::Zero => Weight::zero(self.kind),
            DetValue::Live { state, weight } => weight.mul(&self.finals[state.0]),
        }
    }

    /// `h_A^C(c)(v)`, folding the elementary decomposition of `c` from the
    /// innermost context outwards.
    pub fn context_transform(&self, context: &Context, value: &DetValue) -> Result<DetValue> {
        self.require_deterministic()?;
        let mut v = value.clone();
        for e in context.decompose_elementary().iter().rev() {
            let DetValue::Live { state, weight } = v else {
                return Ok(DetValue::Zero);
            };
            let mut inputs = Vec::with_capacity(e.siblings.len() + 1);
            let mut acc = weight;
            for s in &e.siblings {
                match self.h_det_unchecked(s) {
                    DetValue::Zero => return Ok(DetValue::Zero),
                    DetValue::Live { state, weight } => {
                        inputs.push(state);
                        acc = acc.mul(&weight);
                    }
                }
            }
            inputs.insert(e.hole, state);
            v = match self.det_step(e.symbol, &inputs) {
                Some((t, w)) => DetValue::Live {
                    state: t,
                    weight: acc.mul(w),
                },
                None => DetValue::Zero,
            };
        }
        Ok(v)
    }

    /// Drops `q0` with every transition that mentions it.
    ///
    /// Semantics are preserved when `h_A(ξ)_{q0} = 𝟘` for every tree; that
    /// condition is the caller's responsibility.
    pub fn remove_state(&self, q0: StateId) -> Result<Wta> {
        if q0.0 >= self.num_states() {
            return Err(WtaError::UnknownState(format!("#{}", q0.0)));
        }
        if self.num_states() == 1 {
            return Err(WtaError::SingleState);
        }
        let keep: Vec<bool> = self.states().map(|q| q != q0).collect();
        Ok(self.restrict(&keep))
    }

    /// The sub-automaton on the states with `keep[q]`, renumbered in order.
    fn restrict(&self, keep: &[bool]) -> Wta {
        let mut b = WtaBuilder::new(self.kind, self.alphabet.clone());
        let mut map = vec![None; self.num_states()];
        for q in self.states().filter(|q| keep[q.0]) {
            map[q.0] = Some(b.state(&self.states[q.0]).expect("existing name"));
        }
        for (key, target, w) in self.transitions() {
            let inputs: Option<Vec<StateId>> = key.inputs.iter().map(|q| map[q.0]).collect();
            if let (Some(inputs), Some(target)) = (inputs, map[target.0]) {
                b.transition(key.symbol, inputs, target, w.clone())
                    .expect("restriction of a valid automaton");
            }
        }
        for q in self.states() {
            if let Some(nq) = map[q.0] {
                if !self.finals[q.0].is_zero() {
                    b.set_final(nq, self.finals[q.0].clone())
                        .expect("fresh final");
                }
            }
        }
        b.build().expect("restriction keeps at least one state")
    }

    /// `im(state_A) ∩ Q` as a membership vector, by the fixpoint
    /// `P₀ ⊆ P₁ ⊆ …` starting from the nullary symbols.
    pub fn reachable_states(&self) -> Result<Vec<bool>> {
        self.require_deterministic()?;
        let mut reached = vec![false; self.num_states()];
        loop {
            let mut changed = false;
            for (key, target, _) in self.transitions() {
                if !reached[target.0] && key.inputs.iter().all(|q| reached[q.0]) {
                    reached[target.0] = true;
                    changed = true;
                }
            }
            if !changed {
                return Ok(reached);
            }
        }
    }

    /// Every state is the run state of some tree.
    pub fn is_slim(&self) -> Result<bool> {
        Ok(self.reachable_states()?.into_iter().all(|r| r))
    }

    /// An equivalent slim automaton. When no tree has a run, this is the
    /// one-state automaton with all transitions `𝟙` into that state and
    /// final weight `𝟘`.
    pub fn slim(&self) -> Result<Wta> {
        let reached = self.reachable_states()?;
        if reached.iter().any(|&r| r) {
            Ok(self.restrict(&reached))
        } else {
            Ok(Wta::zero_language(self.kind, self.alphabet.clone(), None))
        }
    }

    /// The slim one-state automaton recognizing the zero language.
    pub fn zero_language(kind: SemifieldKind, alphabet: RankedAlphabet, name: Option<&str>) -> Wta {
        let name = match name {
            Some(n) => n.to_string(),
            None => fresh_state_name(&alphabet, "p"),
        };
        let mut b = WtaBuilder::new(kind, alphabet);
        let p = b.state(&name).expect("fresh state name");
        let symbols: Vec<(Symbol, usize)> = b
            .alphabet()
            .symbols()
            .map(|s| (s, b.alphabet().arity(s)))
            .collect();
        for (symbol, arity) in symbols {
            b.transition(symbol, vec![p; arity], p, Weight::one(kind))
                .expect("fresh transition");
        }
        b.build().expect("one state")
    }

    /// The first tree, in the order of [`crate::terms::enumerate_trees`],
    /// whose run ends in each state; `None` for unreachable states.
    ///
    /// Computed per (state, exact height) without enumerating trees: the
    /// earliest tree for a fixed tuple of child states takes each child at
    /// its earliest tree and, if that does not reach the required height,
    /// raises only the last child that can.
    pub fn representative_trees(&self) -> Result<Vec<Option<Tree>>> {
        self.require_deterministic()?;
        let n = self.num_states();
        let mut best: Vec<Option<Tree>> = vec![None; n];
        // exact[q]: earliest tree of state q at the current height - 1
        let mut exact: Vec<Option<Tree>> = vec![None; n];
        let mut height = 0usize;
        loop {
            let mut next: Vec<Option<Tree>> = vec![None; n];
            for (key, target, _) in self.transitions() {
                let candidate = if height == 0 {
                    if !key.inputs.is_empty() {
                        continue;
                    }
                    Tree::leaf(key.symbol)
                } else {
                    if key.inputs.is_empty() {
                        continue;
                    }
                    let Some(mut children) = key
                        .inputs
                        .iter()
                        .map(|q| best[q.0].clone())
                        .collect::<Option<Vec<Tree>>>()
                    else {
                        continue;
                    };
                    if children.iter().all(|c| c.height() + 1 < height) {
                        let Some(j) = (0..children.len())
                            .rev()
                            .find(|&j| exact[key.inputs[j].0].is_some())
                        else {
                            continue;
                        };
                        children[j] = exact[key.inputs[j].0].clone().expect("checked");
                    }
                    Tree::node(key.symbol, children)
                };
                let slot = &mut next[target.0];
                if slot
                    .as_ref()
                    .is_none_or(|cur| candidate.enumeration_cmp(cur).is_lt())
                {
                    *slot = Some(candidate);
                }
            }
            for q in 0..n {
                if best[q].is_none() {
                    best[q] = next[q].clone();
                }
            }
            let done = best.iter().all(Option::is_some);
            // Heights beyond |Q| cannot reveal new states.
            if done || height > n {
                return Ok(best);
            }
            exact = next;
            height += 1;
        }
    }

    /// Reinterprets every weight in another semifield with the same
    /// underlying values (used to compare `max` and `+` over `ℚ≥0`).
    pub fn with_kind(&self, kind: SemifieldKind) -> Result<Wta> {
        let convert = |w: &Weight| Weight::parse(&w.to_string(), kind);
        let mut b = WtaBuilder::new(kind, self.alphabet.clone());
        for name in &self.states {
            b.state(name)?;
        }
        for (key, target, w) in self.transitions() {
            b.transition(key.symbol, key.inputs.clone(), target, convert(w)?)?;
        }
        for q in self.states() {
            if !self.finals[q.0].is_zero() {
                b.set_final(q, convert(&self.finals[q.0])?)?;
            }
        }
        b.build()
    }
}

/// `base`, or `base` with a numeric suffix, avoiding symbol names.
pub(crate) fn fresh_state_name(alphabet: &RankedAlphabet, base: &str) -> String {
    if alphabet.lookup(base).is_none() && base != CONTEXT_VARIABLE {
        return base.to_string();
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|n| alphabet.lookup(n).is_none())
        .expect("infinitely many candidates")
}

impl fmt::Display for Wta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::to_wta_string(self))
    }
}
