//! Batch operations over many trees or automata.
//!
//! With the `parallel` feature (on by default) [`map`] spreads work over the
//! rayon thread pool; without it, and always in [`map_sequential`], items
//! are processed in order on the calling thread. Results keep input order
//! either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::minimize;
use crate::semifield::Weight;
use crate::terms::Tree;
use crate::wta::Wta;

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_sequential(items, f)
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// `⟦a⟧(t)` for every tree.
pub fn evaluate_all(a: &Wta, trees: &[Tree]) -> Vec<Weight> {
    map(trees, |t| a.evaluate(t))
}

pub fn evaluate_all_sequential(a: &Wta, trees: &[Tree]) -> Vec<Weight> {
    map_sequential(trees, |t| a.evaluate(t))
}

pub fn minimize_all(automata: &[Wta]) -> Vec<Result<Wta>> {
    map(automata, minimize::minimize)
}

pub fn minimize_all_sequential(automata: &[Wta]) -> Vec<Result<Wta>> {
    map_sequential(automata, minimize::minimize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{load, EVEN_ODD, GAMMA};
    use crate::terms::enumerate_trees;

    #[test]
    fn parallel_matches_sequential() {
        let a = load(EVEN_ODD);
        let trees = enumerate_trees(a.alphabet(), 3);
        assert_eq!(
            evaluate_all(&a, &trees),
            evaluate_all_sequential(&a, &trees)
        );
        let automata = [load(EVEN_ODD), load(GAMMA)];
        assert_eq!(minimize_all(&automata), minimize_all_sequential(&automata));
    }
}
