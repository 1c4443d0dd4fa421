//! Weighted tree automata over commutative semifields, with exact
//! arithmetic and minimization of bottom-up deterministic automata.

pub mod batch;
pub mod congruence;
pub mod error;
pub mod minimize;
pub mod random;
pub mod scalar;
pub mod semifield;
pub mod terms;
pub mod wta;

#[cfg(test)]
mod fixtures;
mod util;

pub use congruence::{brute_force_congruent, BruteForceOracle, ClassRep, SyntacticQuotient};
pub use error::{Result, WtaError};
pub use minimize::{equivalent, is_minimal, minimize};
pub use scalar::Monomial;
pub use semifield::{SemifieldKind, Weight};
pub use terms::{Context, RankedAlphabet, Symbol, Tree};
pub use wta::{parse_wta, DetValue, StateId, StateOrBot, Wta, WtaBuilder};
