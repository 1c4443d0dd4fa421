//! Ranked alphabets, trees, contexts and their text syntax.
//!
//! A [`Context`] is stored as its unique decomposition into elementary
//! contexts, outermost first. Composition is concatenation and the empty
//! path is the trivial context `z`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::util::index_tuples;

/// Name of the context variable.
pub const CONTEXT_VARIABLE: &str = "z";

/// Index of a symbol in its [`RankedAlphabet`], in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol {symbol:?} has arity {expected} but was given {found} arguments")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid symbol name {0:?}")]
    InvalidName(String),
    #[error("symbol {0:?} declared twice")]
    DuplicateSymbol(String),
    #[error("ranked alphabet has no nullary symbol")]
    NoNullarySymbol,
    #[error("a context must contain exactly one z, found {0}")]
    VariableCount(usize),
}

pub fn is_identifier(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Symbols with their arities, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankedAlphabet {
    names: Vec<String>,
    arities: Vec<usize>,
    index: HashMap<String, Symbol>,
}

impl RankedAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, arity)` pairs and validates it.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, TermError>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut alphabet = RankedAlphabet::new();
        for (name, arity) in pairs {
            alphabet.add(name, arity)?;
        }
        alphabet.validate()?;
        Ok(alphabet)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<Symbol, TermError> {
        if !is_identifier(name) || name == CONTEXT_VARIABLE {
            return Err(TermError::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(TermError::DuplicateSymbol(name.to_string()));
        }
        let symbol = Symbol(self.names.len());
        self.names.push(name.to_string());
        self.arities.push(arity);
        self.index.insert(name.to_string(), symbol);
        Ok(symbol)
    }

    /// Checks that at least one nullary symbol exists.
    pub fn validate(&self) -> Result<(), TermError> {
        if self.arities.contains(&0) {
            Ok(())
        } else {
            Err(TermError::NoNullarySymbol)
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(Symbol)
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.names[symbol.0]
    }

    pub fn arity(&self, symbol: Symbol) -> usize {
        self.arities[symbol.0]
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn max_arity(&self) -> usize {
        self.arities.iter().copied().max().unwrap_or(0)
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol.0 < self.names.len()
    }

    pub fn parse_tree(&self, text: &str) -> Result<Tree, TermError> {
        let raw = Parser::new(text).parse_all()?;
        raw.into_tree(self)
    }

    pub fn parse_context(&self, text: &str) -> Result<Context, TermError> {
        let raw = Parser::new(text).parse_all()?;
        let holes = raw.count_variables();
        if holes != 1 {
            return Err(TermError::VariableCount(holes));
        }
        raw.into_context(self)
    }

    /// Checks that `tree` only uses symbols of this alphabet with their
    /// declared arity.
    pub fn admits(&self, tree: &Tree) -> bool {
        self.contains(tree.symbol)
            && self.arity(tree.symbol) == tree.children.len()
            && tree.children.iter().all(|c| self.admits(c))
    }
}

/// A finite ranked tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    pub symbol: Symbol,
    pub children: Vec<Tree>,
}

impl Tree {
    pub fn leaf(symbol: Symbol) -> Tree {
        Tree {
            symbol,
            children: Vec::new(),
        }
    }

    pub fn node(symbol: Symbol, children: Vec<Tree>) -> Tree {
        Tree { symbol, children }
    }

    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    /// Number of occurrences of `symbol`.
    pub fn count_symbol(&self, symbol: Symbol) -> usize {
        usize::from(self.symbol == symbol)
            + self
                .children
                .iter()
                .map(|c| c.count_symbol(symbol))
                .sum::<usize>()
    }

    pub fn display<'a>(&'a self, alphabet: &'a RankedAlphabet) -> TreeDisplay<'a> {
        TreeDisplay {
            tree: self,
            alphabet,
        }
    }

    pub fn format(&self, alphabet: &RankedAlphabet) -> String {
        self.display(alphabet).to_string()
    }

    /// Compares two trees by their position in [`enumerate_trees`]:
    /// height first, then symbol declaration order, then the children
    /// lexicographically under the same order.
    pub fn enumeration_cmp(&self, other: &Tree) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.cmp_same_height(other))
    }

    fn cmp_same_height(&self, other: &Tree) -> Ordering {
        self.symbol.cmp(&other.symbol).then_with(|| {
            for (a, b) in self.children.iter().zip(&other.children) {
                match a.enumeration_cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

pub struct TreeDisplay<'a> {
    tree: &'a Tree,
    alphabet: &'a RankedAlphabet,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.alphabet.name(self.tree.symbol))?;
        if !self.tree.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.tree.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                c.display(self.alphabet).fmt(f)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A context of depth one: `σ(ξ₁,…,z,…,ξ_k)` with `z` at `hole`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryContext {
    pub symbol: Symbol,
    pub hole: usize,
    /// The `k - 1` side subtrees, left to right, skipping the hole.
    pub siblings: Vec<Tree>,
}

impl ElementaryContext {
    pub fn apply(&self, tree: Tree) -> Tree {
        let mut children = self.siblings.clone();
        children.insert(self.hole, tree);
        Tree::node(self.symbol, children)
    }

    fn sibling_height(&self) -> usize {
        self.siblings.iter().map(Tree::height).max().unwrap_or(0)
    }
}

/// A tree over `Σ ∪ {z}` with exactly one occurrence of `z`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    path: Vec<ElementaryContext>,
}

impl Context {
    /// The trivial context `z`.
    pub fn hole() -> Context {
        Context { path: Vec::new() }
    }

    pub fn from_elementary(path: Vec<ElementaryContext>) -> Context {
        Context { path }
    }

    pub fn is_hole(&self) -> bool {
        self.path.is_empty()
    }

    /// Depth of `z`.
    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// Elementary contexts `e₁,…,e_n`, outermost first, with
    /// `self = e₁ ∘ … ∘ e_n`.
    pub fn decompose_elementary(&self) -> &[ElementaryContext] {
        &self.path
    }

    /// `self ∘ inner`, i.e. `inner` plugged into the hole of `self`.
    pub fn compose(&self, inner: &Context) -> Context {
        let mut path = self.path.clone();
        path.extend(inner.path.iter().cloned());
        Context { path }
    }

    /// `self[tree]`.
    pub fn apply(&self, tree: &Tree) -> Tree {
        self.path
            .iter()
            .rev()
            .fold(tree.clone(), |acc, e| e.apply(acc))
    }

    pub fn height(&self) -> usize {
        let mut h = 0;
        for e in self.path.iter().rev() {
            h = 1 + h.max(if e.siblings.is_empty() {
                0
            } else {
                e.sibling_height()
            });
        }
        h
    }

    pub fn count_symbol(&self, symbol: Symbol) -> usize {
        self.path
            .iter()
            .map(|e| {
                usize::from(e.symbol == symbol)
                    + e.siblings
                        .iter()
                        .map(|s| s.count_symbol(symbol))
                        .sum::<usize>()
            })
            .sum()
    }

    pub fn format(&self, alphabet: &RankedAlphabet) -> String {
        let mut out = CONTEXT_VARIABLE.to_string();
        for e in self.path.iter().rev() {
            let mut parts: Vec<String> = e.siblings.iter().map(|s| s.format(alphabet)).collect();
            parts.insert(e.hole, out);
            out = format!("{}({})", alphabet.name(e.symbol), parts.join(","));
        }
        out
    }
}

/// Either a tree or a context, the two things a context can be applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plug {
    Tree(Tree),
    Context(Context),
}

/// `c[t]`: a tree when `t` is a tree, `c ∘ t` when `t` is a context.
pub fn substitute(c: &Context, t: &Plug) -> Plug {
    match t {
        Plug::Tree(tree) => Plug::Tree(c.apply(tree)),
        Plug::Context(inner) => Plug::Context(c.compose(inner)),
    }
}

/// All trees of height at most `max_height`, grouped by exact height and
/// ordered by symbol declaration, then lexicographically by children.
pub fn enumerate_trees_by_height(alphabet: &RankedAlphabet, max_height: usize) -> Vec<Vec<Tree>> {
    let mut levels: Vec<Vec<Tree>> = Vec::with_capacity(max_height + 1);
    let mut all: Vec<Tree> = Vec::new();
    for h in 0..=max_height {
        let mut level = Vec::new();
        for symbol in alphabet.symbols() {
            let k = alphabet.arity(symbol);
            if h == 0 {
                if k == 0 {
                    level.push(Tree::leaf(symbol));
                }
                continue;
            }
            if k == 0 {
                continue;
            }
            for combo in index_tuples(all.len(), k) {
                if combo.iter().any(|&i| all[i].height() == h - 1) {
                    level.push(Tree::node(
                        symbol,
                        combo.into_iter().map(|i| all[i].clone()).collect(),
                    ));
                }
            }
        }
        all.extend(level.iter().cloned());
        levels.push(level);
    }
    levels
}

pub fn enumerate_trees(alphabet: &RankedAlphabet, max_height: usize) -> Vec<Tree> {
    enumerate_trees_by_height(alphabet, max_height)
        .into_iter()
        .flatten()
        .collect()
}

/// All contexts of height at most `max_height`, each exactly once, in
/// height-then-lexicographic order.
pub fn enumerate_contexts(alphabet: &RankedAlphabet, max_height: usize) -> Vec<Context> {
    let tree_levels = enumerate_trees_by_height(alphabet, max_height.saturating_sub(1));
    let mut all: Vec<Context> = vec![Context::hole()];
    let mut heights: Vec<usize> = vec![0];
    for h in 1..=max_height {
        let trees: Vec<&Tree> = tree_levels[..h].iter().flatten().collect();
        let below = all.len();
        for symbol in alphabet.symbols() {
            let k = alphabet.arity(symbol);
            for hole in 0..k {
                for ci in 0..below {
                    let inner_h = heights[ci];
                    for sides in index_tuples(trees.len(), k - 1) {
                        let side_h = sides.iter().map(|&i| trees[i].height()).max();
                        if inner_h != h - 1 && side_h != Some(h - 1) {
                            continue;
                        }
                        let e = ElementaryContext {
                            symbol,
                            hole,
                            siblings: sides.into_iter().map(|i| trees[i].clone()).collect(),
                        };
                        all.push(Context::from_elementary(vec![e]).compose(&all[ci]));
                        heights.push(h);
                    }
                }
            }
        }
    }
    all
}

// Generic parse result used for both trees and contexts.
#[derive(Debug)]
struct RawTerm {
    name: String,
    children: Vec<RawTerm>,
}

impl RawTerm {
    fn is_variable(&self) -> bool {
        self.name == CONTEXT_VARIABLE && self.children.is_empty()
    }

    fn count_variables(&self) -> usize {
        usize::from(self.is_variable())
            + self
                .children
                .iter()
                .map(RawTerm::count_variables)
                .sum::<usize>()
    }

    fn resolve(&self, alphabet: &RankedAlphabet) -> Result<Symbol, TermError> {
        let symbol = alphabet
            .lookup(&self.name)
            .ok_or_else(|| TermError::UnknownSymbol(self.name.clone()))?;
        let expected = alphabet.arity(symbol);
        if expected != self.children.len() {
            return Err(TermError::Arity {
                symbol: self.name.clone(),
                expected,
                found: self.children.len(),
            });
        }
        Ok(symbol)
    }

    fn into_tree(self, alphabet: &RankedAlphabet) -> Result<Tree, TermError> {
        if self.is_variable() {
            return Err(TermError::VariableCount(1));
        }
        let symbol = self.resolve(alphabet)?;
        let children = self
            .children
            .into_iter()
            .map(|c| c.into_tree(alphabet))
            .collect::<Result<_, _>>()?;
        Ok(Tree::node(symbol, children))
    }

    fn into_context(self, alphabet: &RankedAlphabet) -> Result<Context, TermError> {
        let mut path = Vec::new();
        let mut cur = self;
        while !cur.is_variable() {
            let symbol = cur.resolve(alphabet)?;
            let hole = cur
                .children
                .iter()
                .position(|c| c.count_variables() == 1)
                .expect("caller checked that exactly one z occurs");
            let mut children = cur.children;
            let next = children.remove(hole);
            let siblings = children
                .into_iter()
                .map(|c| c.into_tree(alphabet))
                .collect::<Result<_, _>>()?;
            path.push(ElementaryContext {
                symbol,
                hole,
                siblings,
            });
            cur = next;
        }
        Ok(Context { path })
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> TermError {
        TermError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn parse_all(mut self) -> Result<RawTerm, TermError> {
        let term = self.parse_term()?;
        if self.peek().is_some() {
            return Err(self.error("trailing input"));
        }
        Ok(term)
    }

    fn parse_term(&mut self) -> Result<RawTerm, TermError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..]
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        if len == 0 {
            return Err(self.error("expected a symbol"));
        }
        self.pos += len;
        let name = self.text[start..self.pos].to_string();
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            if self.peek() == Some(')') {
                self.pos += 1;
            } else {
                loop {
                    children.push(self.parse_term()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
            }
        }
        Ok(RawTerm { name, children })
    }
}
