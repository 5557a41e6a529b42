use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{Netlist, Source};
use crate::gate::{template_group, GateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValidationKind {
    UnknownSignal,
    DuplicateName,
    ArityMismatch,
    SlotViolation,
    ValueOutOfRange,
    CombinationalCycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationError {
    pub kind: ValidationKind,
    /// The offending input, constant, gate or output.
    pub item: String,
    pub line: Option<usize>,
    pub detail: String,
}

impl ValidationError {
    pub(crate) fn new(kind: ValidationKind, item: &str, detail: impl Into<String>) -> Self {
        ValidationError { kind, item: item.to_string(), line: None, detail: detail.into() }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(f, "{:?} at `{}`: {}", self.kind, self.item, self.detail)
    }
}

impl std::error::Error for ValidationError {}

/// May gate `reader` (at `slot`) read gate `src`?
fn reads_ok<K: GateKind>(n: &Netlist<K>, reader: usize, slot: u32, src: usize) -> bool {
    let Some(src_slot) = n.gates[src].slot else { return true };
    if src_slot < slot {
        return true;
    }
    K::TEMPLATE_SLOTS
        && src_slot == slot
        && src < reader
        && template_group(&n.gates[src].id).is_some()
        && template_group(&n.gates[src].id) == template_group(&n.gates[reader].id)
}

/// Gate indices in dependency order, or the gates found on a cycle.
pub(crate) fn topo_order<K: GateKind>(n: &Netlist<K>) -> Result<Vec<usize>, Vec<usize>> {
    let table = n.signal_table();
    let deps: Vec<Vec<usize>> = n
        .gates
        .iter()
        .map(|g| {
            g.inputs
                .iter()
                .filter_map(|s| match table.get(s.as_str()) {
                    Some(Source::Gate(j)) => Some(*j),
                    _ => None,
                })
                .collect()
        })
        .collect();

    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n.gates.len()];
    let mut order = Vec::with_capacity(n.gates.len());
    let mut cyclic = Vec::new();
    for root in 0..n.gates.len() {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(top) = stack.last_mut() {
            let node = top.0;
            if let Some(&dep) = deps[node].get(top.1) {
                top.1 += 1;
                match state[dep] {
                    0 => {
                        state[dep] = 1;
                        stack.push((dep, 0));
                    }
                    1 => cyclic.push(dep),
                    _ => {}
                }
            } else {
                state[node] = 2;
                order.push(node);
                stack.pop();
            }
        }
    }
    if cyclic.is_empty() {
        Ok(order)
    } else {
        cyclic.sort_unstable();
        cyclic.dedup();
        Err(cyclic)
    }
}

fn structural_errors<K: GateKind>(n: &Netlist<K>) -> Vec<ValidationError> {
    use ValidationKind::*;
    let mut errors = Vec::new();

    let mut seen = HashSet::new();
    let names = n.inputs.iter().chain(n.constants.iter().map(|c| &c.name)).chain(n.gates.iter().map(|g| &g.id));
    for name in names {
        if !seen.insert(name.as_str()) {
            errors.push(ValidationError::new(DuplicateName, name, "signal name declared more than once"));
        }
    }
    let mut seen_out = HashSet::new();
    for o in &n.outputs {
        if !seen_out.insert(o.name.as_str()) {
            errors.push(ValidationError::new(DuplicateName, &o.name, "output name declared more than once"));
        }
    }

    let table = n.signal_table();
    for g in &n.gates {
        if g.inputs.len() != g.kind.arity() {
            errors.push(ValidationError::new(
                ArityMismatch,
                &g.id,
                format!("{} takes {} operand(s), got {}", g.kind, g.kind.arity(), g.inputs.len()),
            ));
        }
        for s in &g.inputs {
            if !table.contains_key(s.as_str()) {
                errors.push(ValidationError::new(UnknownSignal, &g.id, format!("reads undeclared signal `{s}`")));
            }
        }
    }
    for o in &n.outputs {
        if !table.contains_key(o.source.as_str()) {
            errors.push(ValidationError::new(UnknownSignal, &o.name, format!("taps undeclared signal `{}`", o.source)));
        }
    }
    errors
}

fn slot_errors<K: GateKind>(n: &Netlist<K>) -> Vec<ValidationError> {
    use ValidationKind::SlotViolation;
    let table = n.signal_table();
    let mut errors = Vec::new();
    for (i, g) in n.gates.iter().enumerate() {
        let Some(slot) = g.slot else {
            errors.push(ValidationError::new(SlotViolation, &g.id, "no timeslot assigned"));
            continue;
        };
        if slot < 2 || slot % 2 != 0 {
            errors.push(ValidationError::new(SlotViolation, &g.id, format!("slot {slot} is not an even slot >= 2")));
            continue;
        }
        for s in &g.inputs {
            if let Some(Source::Gate(j)) = table.get(s.as_str()) {
                if !reads_ok(n, i, slot, *j) {
                    errors.push(ValidationError::new(
                        SlotViolation,
                        &g.id,
                        format!("slot {slot} reads `{s}` at slot {}", n.gates[*j].slot.unwrap_or(0)),
                    ));
                }
            }
        }
    }
    errors
}

/// Every broken invariant of `n`; empty iff the netlist is well formed.
pub fn validate<K: GateKind>(n: &Netlist<K>) -> Vec<ValidationError> {
    let mut errors = structural_errors(n);
    errors.extend(slot_errors(n));
    if let Err(cycle) = topo_order(n) {
        for i in cycle {
            errors.push(ValidationError::new(
                ValidationKind::CombinationalCycle,
                &n.gates[i].id,
                "gate depends on its own output",
            ));
        }
    }
    errors
}

/// Levelizes gates without a slot: each lands at `2 * (1 + deepest source level)`.
/// Explicit slots are kept when consistent with their sources.
pub fn assign_slots<K: GateKind>(n: &Netlist<K>) -> Result<Netlist<K>, Vec<ValidationError>> {
    let structural = structural_errors(n);
    if !structural.is_empty() {
        return Err(structural);
    }
    let order = topo_order(n).map_err(|cycle| {
        cycle
            .into_iter()
            .map(|i| {
                ValidationError::new(ValidationKind::CombinationalCycle, &n.gates[i].id, "gate depends on its own output")
            })
            .collect::<Vec<_>>()
    })?;

    let table = n.signal_table();
    let mut out = n.clone();
    let mut errors = Vec::new();
    for i in order {
        let sources: Vec<usize> = out.gates[i]
            .inputs
            .iter()
            .filter_map(|s| match table.get(s.as_str()) {
                Some(Source::Gate(j)) => Some(*j),
                _ => None,
            })
            .collect();
        match out.gates[i].slot {
            Some(slot) => {
                if slot < 2 || slot % 2 != 0 {
                    errors.push(ValidationError::new(
                        ValidationKind::SlotViolation,
                        &out.gates[i].id,
                        format!("slot {slot} is not an even slot >= 2"),
                    ));
                } else if let Some(&j) = sources.iter().find(|&&j| !reads_ok(&out, i, slot, j)) {
                    errors.push(ValidationError::new(
                        ValidationKind::SlotViolation,
                        &out.gates[i].id,
                        format!("slot {slot} reads `{}` at slot {}", out.gates[j].id, out.gates[j].slot.unwrap_or(0)),
                    ));
                }
            }
            None => {
                let deepest = sources.iter().map(|&j| out.gates[j].slot.unwrap_or(0)).max().unwrap_or(0);
                out.gates[i].slot = Some(deepest + 2);
            }
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

/// Maps item names to source lines, for attaching line numbers to errors.
pub(crate) fn attach_lines(errors: &mut [ValidationError], lines: &HashMap<String, usize>) {
    for e in errors.iter_mut() {
        if e.line.is_none() {
            e.line = lines.get(&e.item).copied();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{BGateKind, QGateKind};
    use crate::netlist::{BNetlist, QNetlist};
    use crate::qudit::Qudit;

    fn kinds(errors: &[ValidationError]) -> Vec<ValidationKind> {
        errors.iter().map(|e| e.kind).collect()
    }

    #[test]
    fn one_level() {
        let n = QNetlist::new("t").input("S").constant("C0", Qudit::ZERO).gate("g", QGateKind::Eq, &["S", "C0"]);
        let n = assign_slots(&n).unwrap();
        assert_eq!(n.gates[0].slot, Some(2));
    }

    #[test]
    fn two_levels() {
        let n = QNetlist::new("t")
            .input("A")
            .input("B")
            .gate("g3", QGateKind::Or, &["g1", "g2"])
            .gate("g1", QGateKind::And, &["A", "B"])
            .gate("g2", QGateKind::Xor, &["A", "B"]);
        let n = assign_slots(&n).unwrap();
        let slots: Vec<_> = n.gates.iter().map(|g| g.slot.unwrap()).collect();
        assert_eq!(slots, [4, 2, 2]);
        assert!(validate(&n).is_empty());
    }

    #[test]
    fn chain() {
        let n = QNetlist::new("t")
            .input("A")
            .gate("a", QGateKind::Not, &["A"])
            .gate("b", QGateKind::Not, &["a"])
            .gate("c", QGateKind::Not, &["b"]);
        let n = assign_slots(&n).unwrap();
        let slots: Vec<_> = n.gates.iter().map(|g| g.slot.unwrap()).collect();
        assert_eq!(slots, [2, 4, 6]);
        assert_eq!(assign_slots(&n).unwrap(), n);
    }

    #[test]
    fn explicit_slots_kept_or_rejected() {
        let n = QNetlist::new("t").input("A").gate_at("a", QGateKind::Not, &["A"], 6).gate("b", QGateKind::Not, &["a"]);
        let n2 = assign_slots(&n).unwrap();
        assert_eq!(n2.gates[1].slot, Some(8));

        let bad = QNetlist::new("t").input("A").gate_at("a", QGateKind::Not, &["A"], 4).gate_at("b", QGateKind::Not, &["a"], 2);
        assert_eq!(kinds(&assign_slots(&bad).unwrap_err()), [ValidationKind::SlotViolation]);
        assert_eq!(kinds(&validate(&bad)), [ValidationKind::SlotViolation]);

        let odd = QNetlist::new("t").input("A").gate_at("a", QGateKind::Not, &["A"], 3);
        assert_eq!(kinds(&validate(&odd)), [ValidationKind::SlotViolation]);
    }

    #[test]
    fn same_slot_rejected_for_quaternary() {
        let n = QNetlist::new("t").input("A").gate_at("x__t0", QGateKind::Not, &["A"], 2).gate_at("x__t1", QGateKind::Not, &["x__t0"], 2);
        assert_eq!(kinds(&validate(&n)), [ValidationKind::SlotViolation]);
    }

    #[test]
    fn same_slot_template_group_allowed_for_binary() {
        let n = BNetlist::new("t")
            .input("a")
            .gate_at("g__t0", BGateKind::Not, &["a"], 2)
            .gate_at("g__t1", BGateKind::Not, &["g__t0"], 2);
        assert!(validate(&n).is_empty());
        // different groups may not share a slot
        let n = BNetlist::new("t")
            .input("a")
            .gate_at("g__t0", BGateKind::Not, &["a"], 2)
            .gate_at("h__t0", BGateKind::Not, &["g__t0"], 2);
        assert_eq!(kinds(&validate(&n)), [ValidationKind::SlotViolation]);
        // nor may a later group member be read
        let n = BNetlist::new("t")
            .input("a")
            .gate_at("g__t1", BGateKind::Not, &["g__t0"], 2)
            .gate_at("g__t0", BGateKind::Not, &["a"], 2);
        assert_eq!(kinds(&validate(&n)), [ValidationKind::SlotViolation]);
    }

    #[test]
    fn cycles() {
        let n = QNetlist::new("t").input("A").gate("a", QGateKind::And, &["A", "b"]).gate("b", QGateKind::Not, &["a"]);
        let errs = assign_slots(&n).unwrap_err();
        assert!(errs.iter().all(|e| e.kind == ValidationKind::CombinationalCycle));
        assert!(!errs.is_empty());
        let self_loop = QNetlist::new("t").gate("a", QGateKind::Not, &["a"]);
        assert!(kinds(&validate(&self_loop)).contains(&ValidationKind::CombinationalCycle));
    }

    #[test]
    fn structural() {
        let n = QNetlist::new("t").input("A").input("A").gate("g", QGateKind::Not, &["A", "A"]).gate("h", QGateKind::Not, &["Z"]).output("o", "nope");
        let n = QNetlist { gates: n.gates.into_iter().map(|mut g| { g.slot = Some(2); g }).collect(), ..n };
        let k = kinds(&validate(&n));
        assert_eq!(
            k,
            [
                ValidationKind::DuplicateName,
                ValidationKind::ArityMismatch,
                ValidationKind::UnknownSignal,
                ValidationKind::UnknownSignal
            ]
        );
    }

    #[test]
    fn passthrough_valid() {
        let n = QNetlist::new("p").input("A").output("Y", "A");
        assert!(validate(&n).is_empty());
    }
}
