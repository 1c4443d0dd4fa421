//! Scalar-algebra utilities: monomials, dependence, pair-independent
//! reduction and decomposition over a basis.
//!
//! Everything except [`Monomial`] is generic over the element type and a
//! [`DependencyOracle`], so the exact quotient and the brute-force oracle
//! share the same reduction code.

use std::fmt;

use crate::error::{Result, WtaError};
use crate::semifield::{SemifieldKind, Weight};
use crate::terms::{RankedAlphabet, Tree};

/// The weighted tree language that is `weight` at `tree` and `𝟘` elsewhere.
///
/// All monomials with weight `𝟘` denote the same language and compare
/// equal.
#[derive(Clone, Debug)]
pub struct Monomial {
    pub weight: Weight,
    pub tree: Tree,
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => self.weight.kind() == other.weight.kind(),
            (false, false) => self.weight == other.weight && self.tree == other.tree,
            _ => false,
        }
    }
}

impl Eq for Monomial {}

impl Monomial {
    pub fn new(weight: Weight, tree: Tree) -> Self {
        Monomial { weight, tree }
    }

    pub fn unit(kind: SemifieldKind, tree: Tree) -> Self {
        Monomial::new(Weight::one(kind), tree)
    }

    pub fn is_zero(&self) -> bool {
        self.weight.is_zero()
    }

    /// `b · (w.ξ) = (b ⊗ w).ξ`.
    pub fn scale(&self, b: &Weight) -> Result<Monomial> {
        Ok(Monomial::new(b.times(&self.weight)?, self.tree.clone()))
    }

    /// Parses `<weight>.<tree>`, e.g. `2.sigma(alpha,alpha)`.
    pub fn parse(text: &str, alphabet: &RankedAlphabet, kind: SemifieldKind) -> Result<Monomial> {
        let (weight, tree) = text.trim().split_once('.').ok_or_else(|| {
            WtaError::Invalid(format!("monomial {text:?} is not of the form WEIGHT.TREE"))
        })?;
        Ok(Monomial::new(
            Weight::parse(weight.trim(), kind)?,
            alphabet.parse_tree(tree)?,
        ))
    }

    pub fn display<'a>(&'a self, alphabet: &'a RankedAlphabet) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Monomial, &'a RankedAlphabet);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}.{}", self.0.weight, self.0.tree.display(self.1))
            }
        }
        D(self, alphabet)
    }
}

/// Which side is the multiple in a dependency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `u = factor · v`.
    LeftOfRight,
    /// `v = factor · u`.
    RightOfLeft,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dependency {
    Independent,
    Dependent {
        factor: Weight,
        direction: Direction,
    },
}

impl Dependency {
    pub fn is_dependent(&self) -> bool {
        matches!(self, Dependency::Dependent { .. })
    }
}

/// Decides dependence in a scalar algebra.
///
/// Implementations must be side-effect free. When both directions hold
/// with non-zero elements, `LeftOfRight` is reported.
pub trait DependencyOracle<T> {
    fn dependency(&self, u: &T, v: &T) -> Dependency;

    /// Whether `u` is the zero element.
    fn is_zero(&self, u: &T) -> bool;
}

/// Reduces a generating list to a pair-independent generating list.
///
/// Scans in input order and drops each element that is a multiple of an
/// element already kept. The zero element is the exception: it is dropped
/// even when it comes first, since nothing else is a multiple of it. A list
/// whose only elements are zero reduces to its first element.
pub fn pair_independent_subset<T, O>(elements: &[T], oracle: &O) -> Vec<T>
where
    T: Clone,
    O: DependencyOracle<T> + ?Sized,
{
    let mut kept: Vec<T> = Vec::new();
    for x in elements {
        if kept.is_empty() {
            kept.push(x.clone());
            continue;
        }
        if oracle.is_zero(x) {
            continue;
        }
        if kept.len() == 1 && oracle.is_zero(&kept[0]) {
            kept[0] = x.clone();
            continue;
        }
        if !kept.iter().any(|k| oracle.dependency(k, x).is_dependent()) {
            kept.push(x.clone());
        }
    }
    kept
}

/// `v = scal · basis[index]`, or `None` when `v` is zero.
pub fn decompose<T, O>(v: &T, basis: &[T], oracle: &O) -> Result<Option<(Weight, usize)>>
where
    O: DependencyOracle<T> + ?Sized,
{
    if oracle.is_zero(v) {
        return Ok(None);
    }
    for (i, h) in basis.iter().enumerate() {
        if let Dependency::Dependent { factor, direction } = oracle.dependency(v, h) {
            if factor.is_zero() {
                continue;
            }
            let scal = match direction {
                Direction::LeftOfRight => factor,
                Direction::RightOfLeft => factor.reciprocal()?,
            };
            return Ok(Some((scal, i)));
        }
    }
    Err(WtaError::Internal(
        "element is not a multiple of any basis element".into(),
    ))
}

/// The degree witnessed by a pair-independent generating list.
pub fn degree<T>(basis: &[T]) -> usize {
    basis.len()
}
