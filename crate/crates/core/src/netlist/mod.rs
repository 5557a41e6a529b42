//! Time-slotted combinational netlists.
//!
//! Inputs and constants sit in slot 0. Gates sit in even slots from 2 up and
//! may only read signals from strictly earlier slots; odd slots carry wiring
//! only. The same structure serves quaternary (`.mvl`) and binary (`.bvl`)
//! circuits, parameterised by the gate kind.

mod check;
mod text;

use std::collections::HashMap;

pub use check::{assign_slots, validate, ValidationError, ValidationKind};
pub use text::{parse_netlist, serialize_netlist, NetlistError};

use crate::gate::{BGateKind, GateKind, QGateKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constant<V> {
    pub name: String,
    pub value: V,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateInstance<K> {
    pub id: String,
    pub kind: K,
    pub inputs: Vec<String>,
    /// `None` until levelized by [`assign_slots`].
    pub slot: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Netlist<K: GateKind> {
    pub name: String,
    pub inputs: Vec<String>,
    pub constants: Vec<Constant<K::Value>>,
    pub gates: Vec<GateInstance<K>>,
    pub outputs: Vec<Output>,
}

pub type QNetlist = Netlist<QGateKind>;
pub type BNetlist = Netlist<BGateKind>;

/// What a signal name resolves to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Input(usize),
    Constant(usize),
    Gate(usize),
}

impl<K: GateKind> Netlist<K> {
    pub fn new(name: impl Into<String>) -> Self {
        Netlist { name: name.into(), inputs: Vec::new(), constants: Vec::new(), gates: Vec::new(), outputs: Vec::new() }
    }

    pub fn input(mut self, name: &str) -> Self {
        self.inputs.push(name.to_string());
        self
    }

    pub fn constant(mut self, name: &str, value: K::Value) -> Self {
        self.constants.push(Constant { name: name.to_string(), value });
        self
    }

    pub fn gate(mut self, id: &str, kind: K, inputs: &[&str]) -> Self {
        self.gates.push(GateInstance {
            id: id.to_string(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            slot: None,
        });
        self
    }

    pub fn gate_at(mut self, id: &str, kind: K, inputs: &[&str], slot: u32) -> Self {
        self = self.gate(id, kind, inputs);
        self.gates.last_mut().expect("just pushed").slot = Some(slot);
        self
    }

    pub fn output(mut self, name: &str, source: &str) -> Self {
        self.outputs.push(Output { name: name.to_string(), source: source.to_string() });
        self
    }

    /// Signal name to its definition. Later duplicates do not override earlier ones.
    pub fn signal_table(&self) -> HashMap<&str, Source> {
        let mut map = HashMap::new();
        for (i, n) in self.inputs.iter().enumerate() {
            map.entry(n.as_str()).or_insert(Source::Input(i));
        }
        for (i, c) in self.constants.iter().enumerate() {
            map.entry(c.name.as_str()).or_insert(Source::Constant(i));
        }
        for (i, g) in self.gates.iter().enumerate() {
            map.entry(g.id.as_str()).or_insert(Source::Gate(i));
        }
        map
    }

    /// Gate indices sorted by slot, ties kept in declaration order.
    ///
    /// Only meaningful once every gate has a slot.
    pub fn slot_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.gates.len()).collect();
        order.sort_by_key(|&i| self.gates[i].slot.unwrap_or(u32::MAX));
        order
    }

    /// Highest occupied slot (0 for a gate-free circuit).
    pub fn depth(&self) -> u32 {
        self.gates.iter().filter_map(|g| g.slot).max().unwrap_or(0)
    }

    /// Number of gates reading each signal, plus outputs tapping it.
    pub fn fan_out(&self) -> HashMap<&str, usize> {
        let mut map: HashMap<&str, usize> = HashMap::new();
        for g in &self.gates {
            for s in &g.inputs {
                *map.entry(s.as_str()).or_default() += 1;
            }
        }
        for o in &self.outputs {
            *map.entry(o.source.as_str()).or_default() += 1;
        }
        map
    }
}
