//! Graphviz DOT schematic emission.
//!
//! Topology and rank constraints only: each timeslot is one rank, laid out
//! left to right, and every gate operand or output tap is its own edge, so a
//! signal with fan-out `k` has `k` outgoing edges. Coordinates are left to
//! the layout tool.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use crate::gate::{GateKind, Logic};
use crate::netlist::{Netlist, Source};

#[derive(Clone, Debug)]
pub struct RenderOptions<V> {
    /// Draw each slot as a labelled cluster instead of a bare rank.
    pub show_slots: bool,
    /// Annotate every edge with the value it carries under this assignment.
    pub values: Option<HashMap<String, V>>,
}

impl<V> Default for RenderOptions<V> {
    fn default() -> Self {
        RenderOptions { show_slots: false, values: None }
    }
}

fn node_id<K: GateKind>(n: &Netlist<K>, table: &HashMap<&str, Source>, signal: &str) -> String {
    match table[signal] {
        Source::Input(_) => format!("\"in:{signal}\""),
        Source::Constant(_) => format!("\"const:{signal}\""),
        Source::Gate(i) => format!("\"gate:{}\"", n.gates[i].id),
    }
}

/// Value of every signal, when the assignment covers every input.
fn signal_values<K: GateKind>(n: &Netlist<K>, inputs: &HashMap<String, K::Value>) -> Option<HashMap<String, K::Value>> {
    let mut vals: HashMap<String, K::Value> = HashMap::new();
    for i in &n.inputs {
        vals.insert(i.clone(), *inputs.get(i)?);
    }
    for c in &n.constants {
        vals.insert(c.name.clone(), c.value);
    }
    for gi in n.slot_order() {
        let g = &n.gates[gi];
        let ops: Vec<K::Value> = g.inputs.iter().map(|s| vals.get(s).copied()).collect::<Option<_>>()?;
        vals.insert(g.id.clone(), g.kind.eval(&ops).ok()?);
    }
    Some(vals)
}

/// Renders a validated netlist as DOT. Output depends only on the arguments.
pub fn render<K: GateKind>(n: &Netlist<K>, opts: &RenderOptions<K::Value>) -> String {
    let table = n.signal_table();
    let values = opts.values.as_ref().and_then(|v| signal_values(n, v));
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", n.name);
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [fontname=\"Helvetica\"];");

    let mut ranks: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for i in &n.inputs {
        ranks.entry(0).or_default().push(format!("\"in:{i}\" [shape=circle, label=\"{i}\"];"));
    }
    for c in &n.constants {
        ranks
            .entry(0)
            .or_default()
            .push(format!("\"const:{}\" [shape=plaintext, label=\"{} = {}\"];", c.name, c.name, c.value.digit()));
    }
    for g in &n.gates {
        ranks
            .entry(g.slot.unwrap_or(0))
            .or_default()
            .push(format!("\"gate:{}\" [shape=box, label=\"{}\\n{}\"];", g.id, g.kind, g.id));
    }
    let out_rank = n.depth() + 1;
    for o in &n.outputs {
        ranks
            .entry(out_rank)
            .or_default()
            .push(format!("\"out:{}\" [shape=doublecircle, label=\"{}\"];", o.name, o.name));
    }

    for (slot, nodes) in &ranks {
        if opts.show_slots {
            let label = if *slot == out_rank { "outputs".to_string() } else { format!("slot {slot}") };
            let _ = writeln!(out, "  subgraph cluster_slot_{slot} {{");
            let _ = writeln!(out, "    label=\"{label}\";");
        } else {
            let _ = writeln!(out, "  {{");
            let _ = writeln!(out, "    rank=same;");
        }
        for node in nodes {
            let _ = writeln!(out, "    {node}");
        }
        let _ = writeln!(out, "  }}");
    }

    let edge_label = |signal: &str| match &values {
        Some(v) => format!(" [label=\"{}\"]", v[signal].digit()),
        None => String::new(),
    };
    for g in &n.gates {
        for s in &g.inputs {
            let _ = writeln!(out, "  {} -> \"gate:{}\"{};", node_id(n, &table, s), g.id, edge_label(s));
        }
    }
    for o in &n.outputs {
        let _ = writeln!(out, "  {} -> \"out:{}\"{};", node_id(n, &table, &o.source), o.name, edge_label(&o.source));
    }
    out.push_str("}\n");
    out
}
