//! Small automata shared by the unit tests.

use crate::semifield::{SemifieldKind, Weight};
use crate::terms::Tree;
use crate::wta::{parse_wta, Wta};

pub const EVEN_ODD: &str = "\
semifield rational
rank sigma 2
rank alpha 0
trans alpha() -> o @ 2
trans sigma(o,o) -> e @ 1
trans sigma(e,e) -> e @ 1
trans sigma(o,e) -> o @ 1
trans sigma(e,o) -> o @ 1
final o @ 3
final e @ 2
";

pub const STATE_ALGEBRA: &str = "\
semifield rational
rank alpha 0
rank beta 0
states p1 p2
trans alpha -> p1 @ 1
final p1 @ 1
final p2 @ 1
";

pub const GAMMA: &str = "\
semifield rational
rank gamma 1
rank alpha 0
trans alpha -> q1 @ 1
trans gamma(q1) -> q2 @ 1
trans gamma(q2) -> q3 @ 1
trans gamma(q3) -> q2 @ 1
final q1 @ 2
final q2 @ 3
final q3 @ 2
";

pub const NOT_INDEPENDENT: &str = "\
semifield rational
rank alpha 0
rank beta 0
trans alpha -> q0 @ 1
trans beta -> q1 @ 1
final q0 @ 2
final q1 @ 1
";

pub fn load(text: &str) -> Wta {
    parse_wta(text).unwrap()
}

pub fn rat(n: i64) -> Weight {
    Weight::from_int(SemifieldKind::Rational, n).unwrap()
}

pub fn ratio(n: i64, d: i64) -> Weight {
    Weight::from_ratio(SemifieldKind::Rational, n, d).unwrap()
}

pub fn tree(a: &Wta, text: &str) -> Tree {
    a.alphabet().parse_tree(text).unwrap()
}
