//! Exact arithmetic for the supported commutative semifields.
//!
//! Every [`Weight`] carries its [`SemifieldKind`] at runtime, so a single
//! automaton type covers all four weight structures. Mixing kinds in one
//! operation is an error rather than a coercion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// The weight structures a wta can be defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemifieldKind {
    /// `(ℚ, +, ·, 0, 1)`, a field.
    Rational,
    /// `({0,1}, ∨, ∧, 0, 1)`.
    Boolean,
    /// `(ℚ≥0, max, ·, 0, 1)`.
    MaxTimes,
    /// `(ℚ ∪ {∞}, min, +, ∞, 0)`.
    Tropical,
}

impl SemifieldKind {
    pub const ALL: [SemifieldKind; 4] = [
        SemifieldKind::Rational,
        SemifieldKind::Boolean,
        SemifieldKind::MaxTimes,
        SemifieldKind::Tropical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemifieldKind::Rational => "rational",
            SemifieldKind::Boolean => "boolean",
            SemifieldKind::MaxTimes => "maxtimes",
            SemifieldKind::Tropical => "tropical",
        }
    }
}

impl fmt::Display for SemifieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemifieldKind {
    type Err = SemifieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(SemifieldKind::Rational),
            "boolean" => Ok(SemifieldKind::Boolean),
            "maxtimes" => Ok(SemifieldKind::MaxTimes),
            "tropical" => Ok(SemifieldKind::Tropical),
            other => Err(SemifieldError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemifieldError {
    #[error("semifield kind mismatch: {left} vs {right}")]
    KindMismatch {
        left: SemifieldKind,
        right: SemifieldKind,
    },
    #[error("reciprocal of zero")]
    DivisionByZero,
    #[error("cannot parse {text:?} as a {kind} weight: {reason}")]
    Parse {
        text: String,
        kind: SemifieldKind,
        reason: &'static str,
    },
    #[error("unknown semifield {0:?} (expected rational, boolean, maxtimes or tropical)")]
    UnknownKind(String),
}

/// An element of one of the supported semifields.
///
/// Equality is structural and exact. Tropical `∞` is represented by
/// `Tropical(None)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Rational(BigRational),
    Boolean(bool),
    MaxTimes(BigRational),
    Tropical(Option<BigRational>),
}

impl Weight {
    pub fn kind(&self) -> SemifieldKind {
        match self {
            Weight::Rational(_) => SemifieldKind::Rational,
            Weight::Boolean(_) => SemifieldKind::Boolean,
            Weight::MaxTimes(_) => SemifieldKind::MaxTimes,
            Weight::Tropical(_) => SemifieldKind::Tropical,
        }
    }

    pub fn zero(kind: SemifieldKind) -> Weight {
        match kind {
            SemifieldKind::Rational => Weight::Rational(BigRational::zero()),
            SemifieldKind::Boolean => Weight::Boolean(false),
            SemifieldKind::MaxTimes => Weight::MaxTimes(BigRational::zero()),
            SemifieldKind::Tropical => Weight::Tropical(None),
        }
    }

    pub fn one(kind: SemifieldKind) -> Weight {
        match kind {
            SemifieldKind::Rational => Weight::Rational(BigRational::one()),
            SemifieldKind::Boolean => Weight::Boolean(true),
            SemifieldKind::MaxTimes => Weight::MaxTimes(BigRational::one()),
            SemifieldKind::Tropical => Weight::Tropical(Some(BigRational::zero())),
        }
    }

    /// Builds a weight from an integer-valued ratio. For `Boolean` any
    /// non-zero ratio maps to `1`; for `Tropical` the ratio is the finite
    /// exponent. Fails for negative `MaxTimes` values and zero denominators.
    pub fn from_ratio(
        kind: SemifieldKind,
        numer: i64,
        denom: i64,
    ) -> Result<Weight, SemifieldError> {
        if denom == 0 {
            return Err(SemifieldError::DivisionByZero);
        }
        let r = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        Weight::from_rational(kind, r)
    }

    pub fn from_int(kind: SemifieldKind, value: i64) -> Result<Weight, SemifieldError> {
        Weight::from_ratio(kind, value, 1)
    }

    fn from_rational(kind: SemifieldKind, r: BigRational) -> Result<Weight, SemifieldError> {
        match kind {
            SemifieldKind::Rational => Ok(Weight::Rational(r)),
            SemifieldKind::Boolean => Ok(Weight::Boolean(!r.is_zero())),
            SemifieldKind::MaxTimes => {
                if r.is_negative() {
                    Err(SemifieldError::Parse {
                        text: r.to_string(),
                        kind,
                        reason: "maxtimes weights must be non-negative",
                    })
                } else {
                    Ok(Weight::MaxTimes(r))
                }
            }
            SemifieldKind::Tropical => Ok(Weight::Tropical(Some(r))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Rational(r) | Weight::MaxTimes(r) => r.is_zero(),
            Weight::Boolean(b) => !*b,
            Weight::Tropical(t) => t.is_none(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Weight::one(self.kind())
    }

    fn check_kind(&self, other: &Weight) -> Result<(), SemifieldError> {
        if self.kind() == other.kind() {
            Ok(())
        } else {
            Err(SemifieldError::KindMismatch {
                left: self.kind(),
                right: other.kind(),
            })
        }
    }

    /// `self ⊕ other`.
    pub fn plus(&self, other: &Weight) -> Result<Weight, SemifieldError> {
        self.check_kind(other)?;
        Ok(match (self, other) {
            (Weight::Rational(a), Weight::Rational(b)) => Weight::Rational(a + b),
            (Weight::Boolean(a), Weight::Boolean(b)) => Weight::Boolean(*a || *b),
            (Weight::MaxTimes(a), Weight::MaxTimes(b)) => Weight::MaxTimes(a.max(b).clone()),
            (Weight::Tropical(a), Weight::Tropical(b)) => Weight::Tropical(match (a, b) {
                (None, x) | (x, None) => x.clone(),
                (Some(x), Some(y)) => Some(x.min(y).clone()),
            }),
            _ => unreachable!(),
        })
    }

    /// `self ⊗ other`.
    pub fn times(&self, other: &Weight) -> Result<Weight, SemifieldError> {
        self.check_kind(other)?;
        Ok(match (self, other) {
            (Weight::Rational(a), Weight::Rational(b)) => Weight::Rational(a * b),
            (Weight::Boolean(a), Weight::Boolean(b)) => Weight::Boolean(*a && *b),
            (Weight::MaxTimes(a), Weight::MaxTimes(b)) => Weight::MaxTimes(a * b),
            (Weight::Tropical(a), Weight::Tropical(b)) => Weight::Tropical(match (a, b) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            }),
            _ => unreachable!(),
        })
    }

    /// The multiplicative inverse of a non-zero weight.
    pub fn reciprocal(&self) -> Result<Weight, SemifieldError> {
        if self.is_zero() {
            return Err(SemifieldError::DivisionByZero);
        }
        Ok(match self {
            Weight::Rational(a) => Weight::Rational(a.recip()),
            Weight::Boolean(_) => Weight::Boolean(true),
            Weight::MaxTimes(a) => Weight::MaxTimes(a.recip()),
            Weight::Tropical(Some(a)) => Weight::Tropical(Some(-a)),
            Weight::Tropical(None) => unreachable!(),
        })
    }

    /// `self ⊗ other⁻¹`.
    pub fn divide(&self, other: &Weight) -> Result<Weight, SemifieldError> {
        self.check_kind(other)?;
        self.times(&other.reciprocal()?)
    }

    /// Folds `⊗` over `items`, starting from `𝟙`.
    pub fn product<'a, I>(kind: SemifieldKind, items: I) -> Result<Weight, SemifieldError>
    where
        I: IntoIterator<Item = &'a Weight>,
    {
        items
            .into_iter()
            .try_fold(Weight::one(kind), |acc, w| acc.times(w))
    }

    // Same-kind shorthands for code paths where the kinds were already
    // checked when the automaton was built.
    pub(crate) fn mul(&self, other: &Weight) -> Weight {
        self.times(other)
            .expect("weights of one automaton share a kind")
    }

    pub(crate) fn div(&self, other: &Weight) -> Weight {
        self.divide(other)
            .expect("divisor is a non-zero weight of the same kind")
    }

    pub(crate) fn add(&self, other: &Weight) -> Weight {
        self.plus(other)
            .expect("weights of one automaton share a kind")
    }

    /// Parses `text` in the weight grammar for `kind`.
    ///
    /// Accepted forms: an integer, `p/q` with `q > 0` (reduced on parse),
    /// `inf` for tropical zero, and `0` / `1` for booleans.
    pub fn parse(text: &str, kind: SemifieldKind) -> Result<Weight, SemifieldError> {
        let err = |reason| SemifieldError::Parse {
            text: text.to_string(),
            kind,
            reason,
        };
        let t = text.trim();
        if kind == SemifieldKind::Boolean {
            return match t {
                "0" => Ok(Weight::Boolean(false)),
                "1" => Ok(Weight::Boolean(true)),
                _ => Err(err("boolean weights are 0 or 1")),
            };
        }
        if t == "inf" {
            return if kind == SemifieldKind::Tropical {
                Ok(Weight::Tropical(None))
            } else {
                Err(err("inf is only valid for the tropical semifield"))
            };
        }
        let r = parse_rational(t).ok_or_else(|| err("expected an integer or p/q"))?;
        if kind == SemifieldKind::MaxTimes && r.is_negative() {
            return Err(err("maxtimes weights must be non-negative"));
        }
        Weight::from_rational(kind, r)
    }
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => parse_integer(s).map(BigRational::from_integer),
        Some((p, q)) => {
            let p = parse_integer(p)?;
            // The denominator must be a positive integer without a sign.
            if q.starts_with('-') {
                return None;
            }
            let q = parse_integer(q)?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Rational(r) | Weight::MaxTimes(r) => fmt_rational(r, f),
            Weight::Boolean(b) => f.write_str(if *b { "1" } else { "0" }),
            Weight::Tropical(None) => f.write_str("inf"),
            Weight::Tropical(Some(r)) => fmt_rational(r, f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SemifieldKind::*;

    fn w(kind: SemifieldKind, s: &str) -> Weight {
        Weight::parse(s, kind).unwrap()
    }

    #[test]
    fn plus_examples() {
        assert_eq!(
            w(Rational, "2").plus(&w(Rational, "3")).unwrap(),
            w(Rational, "5")
        );
        assert_eq!(
            w(Boolean, "1").plus(&w(Boolean, "1")).unwrap(),
            w(Boolean, "1")
        );
        assert_eq!(
            w(MaxTimes, "2").plus(&w(MaxTimes, "3")).unwrap(),
            w(MaxTimes, "3")
        );
        assert_eq!(
            w(Tropical, "2").plus(&w(Tropical, "inf")).unwrap(),
            w(Tropical, "2")
        );
    }

    #[test]
    fn times_examples() {
        assert_eq!(
            w(Rational, "2").times(&w(Rational, "2")).unwrap(),
            w(Rational, "4")
        );
        assert_eq!(
            w(Tropical, "2").times(&w(Tropical, "3")).unwrap(),
            w(Tropical, "5")
        );
        for kind in SemifieldKind::ALL {
            let b = Weight::one(kind);
            assert!(Weight::zero(kind).times(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(w(Rational, "2").reciprocal().unwrap(), w(Rational, "1/2"));
        assert_eq!(w(Boolean, "1").reciprocal().unwrap(), w(Boolean, "1"));
        assert_eq!(w(Tropical, "3").reciprocal().unwrap(), w(Tropical, "-3"));
        assert_eq!(
            Weight::zero(Rational).reciprocal(),
            Err(SemifieldError::DivisionByZero)
        );
        assert_eq!(
            Weight::zero(Tropical).reciprocal(),
            Err(SemifieldError::DivisionByZero)
        );
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let e = w(Rational, "1").plus(&w(MaxTimes, "1")).unwrap_err();
        assert!(matches!(e, SemifieldError::KindMismatch { .. }));
        assert!(w(Boolean, "1").times(&w(Tropical, "0")).is_err());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(w(Rational, "3/6").to_string(), "1/2");
        assert!(w(Tropical, "inf").is_zero());
        assert_eq!(w(MaxTimes, "2").to_string(), "2");
        assert_eq!(w(Rational, "-4/2").to_string(), "-2");
        assert_eq!(w(Tropical, "0"), Weight::one(Tropical));
    }

    #[test]
    fn parse_errors() {
        for (kind, text) in [
            (MaxTimes, "-1"),
            (Rational, "inf"),
            (Rational, "1/0"),
            (Rational, "1/-2"),
            (Rational, "abc"),
            (Rational, ""),
            (Rational, "1.5"),
            (Boolean, "2"),
            (Tropical, "+3"),
        ] {
            assert!(Weight::parse(text, kind).is_err(), "{text} as {kind}");
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in SemifieldKind::ALL {
            assert_eq!(kind.name().parse::<SemifieldKind>().unwrap(), kind);
        }
        assert!("real".parse::<SemifieldKind>().is_err());
    }
}
