//! The line-based `.wta` text format.
//!
//! ```text
//! semifield rational
//! rank sigma 2
//! rank alpha 0
//! states e o
//! trans alpha() -> o @ 2
//! trans sigma(e,o) -> o @ 1
//! final o @ 3
//! ```

use std::fmt::Write as _;

use super::{StateId, Wta, WtaBuilder};
use crate::error::{Result, WtaError};
use crate::semifield::{SemifieldKind, Weight};
use crate::terms::{is_identifier, RankedAlphabet};

fn err(line: usize, message: impl Into<String>) -> WtaError {
    WtaError::Format {
        line,
        message: message.into(),
    }
}

/// Parses an automaton. Errors carry the 1-based line number.
pub fn parse_wta(text: &str) -> Result<Wta> {
    let mut builder: Option<WtaBuilder> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((line, ""));
        let Some(b) = builder.as_mut() else {
            if keyword != "semifield" {
                return Err(err(line_no, "the first line must be `semifield KIND`"));
            }
            let kind: SemifieldKind = rest.parse().map_err(|e| err(line_no, format!("{e}")))?;
            builder = Some(WtaBuilder::new(kind, RankedAlphabet::new()));
            continue;
        };
        match keyword {
            "semifield" => return Err(err(line_no, "duplicate `semifield` line")),
            "rank" => parse_rank(b, rest).map_err(|m| err(line_no, m))?,
            "states" => {
                for name in rest.split_whitespace() {
                    if b.has_state(name) {
                        return Err(err(line_no, format!("state {name} declared twice")));
                    }
                    b.state(name).map_err(|e| err(line_no, e.to_string()))?;
                }
            }
            "trans" => parse_trans(b, rest).map_err(|m| err(line_no, m))?,
            "final" => parse_final(b, rest).map_err(|m| err(line_no, m))?,
            other => return Err(err(line_no, format!("unknown keyword `{other}`"))),
        }
    }
    let builder = builder.ok_or_else(|| err(last_line.max(1), "missing `semifield` line"))?;
    builder.build().map_err(|e| match e {
        WtaError::Format { .. } => e,
        other => err(last_line.max(1), other.to_string()),
    })
}

fn parse_rank(b: &mut WtaBuilder, rest: &str) -> std::result::Result<(), String> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    let [name, arity] = parts[..] else {
        return Err("expected `rank SYMBOL ARITY`".into());
    };
    let arity: usize = arity
        .parse()
        .map_err(|_| format!("invalid arity `{arity}`"))?;
    if b.has_state(name) {
        return Err(format!("symbol {name} clashes with a state"));
    }
    b.alphabet.add(name, arity).map_err(|e| e.to_string())?;
    Ok(())
}

fn split_weight(rest: &str) -> std::result::Result<(&str, &str), String> {
    rest.rsplit_once('@')
        .map(|(l, w)| (l.trim(), w.trim()))
        .ok_or_else(|| "missing `@ WEIGHT`".to_string())
}

fn parse_trans(b: &mut WtaBuilder, rest: &str) -> std::result::Result<(), String> {
    let (lhs, weight) = split_weight(rest)?;
    let weight = Weight::parse(weight, b.kind()).map_err(|e| e.to_string())?;
    let (head, target) = lhs
        .split_once("->")
        .map(|(h, t)| (h.trim(), t.trim()))
        .ok_or_else(|| "missing `->`".to_string())?;
    let (name, args) = match head.split_once('(') {
        Some((name, tail)) => {
            let inner = tail
                .trim_end()
                .strip_suffix(')')
                .ok_or_else(|| "unbalanced parentheses".to_string())?;
            let args: Vec<&str> = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            (name.trim(), args)
        }
        None => (head, Vec::new()),
    };
    let symbol = b
        .alphabet()
        .lookup(name)
        .ok_or_else(|| format!("undeclared symbol `{name}`"))?;
    let arity = b.alphabet().arity(symbol);
    if args.len() != arity {
        return Err(format!(
            "symbol {name} has arity {arity} but {} states are given",
            args.len()
        ));
    }
    if !is_identifier(target) {
        return Err(format!("invalid target state `{target}`"));
    }
    let inputs = args
        .into_iter()
        .map(|a| b.state(a).map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<StateId>, String>>()?;
    let target = b.state(target).map_err(|e| e.to_string())?;
    b.transition(symbol, inputs, target, weight)
        .map_err(|e| e.to_string())
}

fn parse_final(b: &mut WtaBuilder, rest: &str) -> std::result::Result<(), String> {
    let (state, weight) = split_weight(rest)?;
    let weight = Weight::parse(weight, b.kind()).map_err(|e| e.to_string())?;
    let q = b.state(state).map_err(|e| e.to_string())?;
    b.set_final(q, weight).map_err(|e| e.to_string())
}

/// Canonical serialization: ranks in declaration order, the state list,
/// transitions sorted by symbol, inputs and target, then non-zero finals.
pub(crate) fn to_wta_string(a: &Wta) -> String {
    let mut out = String::new();
    let alphabet = a.alphabet();
    writeln!(out, "semifield {}", a.kind()).unwrap();
    for s in alphabet.symbols() {
        writeln!(out, "rank {} {}", alphabet.name(s), alphabet.arity(s)).unwrap();
    }
    writeln!(out, "states {}", a.state_names().join(" ")).unwrap();
    for (key, target, w) in a.transitions() {
        let inputs: Vec<&str> = key.inputs.iter().map(|q| a.state_name(*q)).collect();
        writeln!(
            out,
            "trans {}({}) -> {} @ {}",
            alphabet.name(key.symbol),
            inputs.join(","),
            a.state_name(target),
            w
        )
        .unwrap();
    }
    for q in a.states() {
        let f = a.final_weight(q);
        if !f.is_zero() {
            writeln!(out, "final {} @ {}", a.state_name(q), f).unwrap();
        }
    }
    out
}
