//! Line-oriented netlist text format.
//!
//! ```text
//! # comment
//! circuit <name>
//! input <name>
//! const <name> = <digit>
//! gate <id> = <KIND>(<sig>[, <sig>]) [@ <even-slot>]
//! output <name> = <sig>
//! ```

use std::collections::HashMap;
use std::fmt::{self, Write};

use thiserror::Error;

use super::check::{assign_slots, attach_lines, validate, ValidationError, ValidationKind};
use super::{Constant, GateInstance, Netlist, Output};
use crate::gate::{GateKind, Logic};

const DEFAULT_NAME: &str = "top";

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{}", join_errors(.0))]
    Invalid(Vec<ValidationError>),
}

impl NetlistError {
    pub fn validation_kinds(&self) -> Vec<ValidationKind> {
        match self {
            NetlistError::Invalid(errs) => errs.iter().map(|e| e.kind).collect(),
            NetlistError::Syntax { .. } => Vec::new(),
        }
    }
}

fn join_errors(errors: &[ValidationError]) -> String {
    errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

fn ident(s: &str, line: usize, what: &str) -> Result<String, NetlistError> {
    let s = s.trim();
    if is_ident(s) {
        Ok(s.to_string())
    } else {
        Err(NetlistError::Syntax { line, msg: format!("invalid {what} name {s:?}") })
    }
}

fn split_assign(rest: &str, line: usize) -> Result<(&str, &str), NetlistError> {
    rest.split_once('=')
        .ok_or_else(|| NetlistError::Syntax { line, msg: "expected `<name> = ...`".to_string() })
}

/// Parses, levelizes and validates a netlist.
pub fn parse_netlist<K: GateKind>(text: &str) -> Result<Netlist<K>, NetlistError> {
    let mut n = Netlist::<K>::new(DEFAULT_NAME);
    let mut named = false;
    let mut lines: HashMap<String, usize> = HashMap::new();
    let mut range_errors = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "circuit" => {
                if named {
                    return Err(NetlistError::Syntax { line, msg: "circuit name given twice".to_string() });
                }
                n.name = ident(rest, line, "circuit")?;
                named = true;
            }
            "input" => {
                let name = ident(rest, line, "input")?;
                lines.entry(name.clone()).or_insert(line);
                n.inputs.push(name);
            }
            "const" => {
                let (name, value) = split_assign(rest, line)?;
                let name = ident(name, line, "constant")?;
                let value = value.trim();
                let digit: u64 = value
                    .parse()
                    .map_err(|_| NetlistError::Syntax { line, msg: format!("constant value {value:?} is not a number") })?;
                let value = K::Value::from_digit(digit).unwrap_or_else(|e| {
                    let mut err = ValidationError::new(ValidationKind::ValueOutOfRange, &name, e.to_string());
                    err.line = Some(line);
                    range_errors.push(err);
                    K::Value::from_digit(0).expect("zero is always valid")
                });
                lines.entry(name.clone()).or_insert(line);
                n.constants.push(Constant { name, value });
            }
            "gate" => {
                let (id, rhs) = split_assign(rest, line)?;
                let id = ident(id, line, "gate")?;
                let (call, slot) = match rhs.split_once('@') {
                    Some((call, slot)) => {
                        let slot = slot.trim();
                        let slot: u32 = slot
                            .parse()
                            .map_err(|_| NetlistError::Syntax { line, msg: format!("invalid slot {slot:?}") })?;
                        (call.trim(), Some(slot))
                    }
                    None => (rhs.trim(), None),
                };
                let (kind, args) = call
                    .strip_suffix(')')
                    .and_then(|c| c.split_once('('))
                    .ok_or_else(|| NetlistError::Syntax { line, msg: "expected `KIND(<sig>, ...)`".to_string() })?;
                let kind: K = kind
                    .trim()
                    .parse()
                    .map_err(|e: crate::error::UnknownGate| NetlistError::Syntax { line, msg: e.to_string() })?;
                let inputs = if args.trim().is_empty() {
                    Vec::new()
                } else {
                    args.split(',').map(|a| ident(a, line, "signal")).collect::<Result<Vec<_>, _>>()?
                };
                lines.entry(id.clone()).or_insert(line);
                n.gates.push(GateInstance { id, kind, inputs, slot });
            }
            "output" => {
                let (name, source) = split_assign(rest, line)?;
                let name = ident(name, line, "output")?;
                let source = ident(source, line, "signal")?;
                lines.entry(name.clone()).or_insert(line);
                n.outputs.push(Output { name, source });
            }
            other => {
                return Err(NetlistError::Syntax { line, msg: format!("unknown statement `{other}`") });
            }
        }
    }

    let finish = |mut errors: Vec<ValidationError>| {
        errors.extend(range_errors.iter().cloned());
        attach_lines(&mut errors, &lines);
        errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        NetlistError::Invalid(errors)
    };
    let n = assign_slots(&n).map_err(finish)?;
    let errors = validate(&n);
    if !errors.is_empty() || !range_errors.is_empty() {
        return Err(finish(errors));
    }
    Ok(n)
}

/// Canonical text: header, inputs, constants, gates, outputs, each in
/// declaration order, with explicit slots.
pub fn serialize_netlist<K: GateKind>(n: &Netlist<K>) -> String {
    n.to_string()
}

impl<K: GateKind> fmt::Display for Netlist<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit {}", self.name)?;
        for i in &self.inputs {
            writeln!(f, "input {i}")?;
        }
        for c in &self.constants {
            writeln!(f, "const {} = {}", c.name, c.value.digit())?;
        }
        for g in &self.gates {
            let mut line = format!("gate {} = {}({})", g.id, g.kind, g.inputs.join(", "));
            if let Some(s) = g.slot {
                write!(line, " @ {s}")?;
            }
            writeln!(f, "{line}")?;
        }
        for o in &self.outputs {
            writeln!(f, "output {} = {}", o.name, o.source)?;
        }
        Ok(())
    }
}
