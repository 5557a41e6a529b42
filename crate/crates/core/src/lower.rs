//! Replacement-based lowering of quaternary circuits to binary ones.
//!
//! Every quaternary signal `s` becomes a wire pair `s.1` (MSB) and `s.0`
//! (LSB). Each gate is replaced in place by a fixed binary template; the
//! template's gates inherit the slot of the gate they replace and are named
//! `<gate-id>__t<k>`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gate::{BGateKind, GateKind, QGateKind};
use crate::netlist::{validate, BNetlist, Constant, GateInstance, Output, QNetlist, ValidationError};
use crate::qudit::{BitPair, Qudit};
use crate::sim::{TableError, TableRow, TruthTable};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LowerError {
    #[error("invalid netlist: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ValidationError>),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Name of the MSB wire of quaternary signal `s`.
pub fn msb_name(s: &str) -> String {
    format!("{s}.1")
}

/// Name of the LSB wire of quaternary signal `s`.
pub fn lsb_name(s: &str) -> String {
    format!("{s}.0")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Port {
    AMsb,
    ALsb,
    BMsb,
    BLsb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wire {
    Port(Port),
    /// Output of the template's k-th gate.
    Gate(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateGate {
    pub kind: BGateKind,
    pub inputs: Vec<Wire>,
}

/// Binary replacement for one quaternary gate kind. Gates only read ports and
/// earlier gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTemplate {
    pub kind: QGateKind,
    pub gates: Vec<TemplateGate>,
    pub out_msb: Wire,
    pub out_lsb: Wire,
}

impl BTemplate {
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Runs the template on packed operands.
    pub fn eval(&self, a: BitPair, b: Option<BitPair>) -> BitPair {
        let b = b.unwrap_or(BitPair::new(false, false));
        let mut vals: Vec<bool> = Vec::with_capacity(self.gates.len());
        let read = |w: Wire, vals: &[bool]| match w {
            Wire::Port(Port::AMsb) => a.msb,
            Wire::Port(Port::ALsb) => a.lsb,
            Wire::Port(Port::BMsb) => b.msb,
            Wire::Port(Port::BLsb) => b.lsb,
            Wire::Gate(k) => vals[k],
        };
        for g in &self.gates {
            let ops: Vec<bool> = g.inputs.iter().map(|&w| read(w, &vals)).collect();
            vals.push(g.kind.eval(&ops).expect("template arity"));
        }
        BitPair::new(read(self.out_msb, &vals), read(self.out_lsb, &vals))
    }

    /// Decoded template output for quaternary operands.
    pub fn eval_qudits(&self, a: Qudit, b: Option<Qudit>) -> Qudit {
        Qudit::from_bits(self.eval(a.to_bits(), b.map(Qudit::to_bits)))
    }
}

impl fmt::Display for BTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &Wire| match w {
            Wire::Port(Port::AMsb) => "a.1".to_string(),
            Wire::Port(Port::ALsb) => "a.0".to_string(),
            Wire::Port(Port::BMsb) => "b.1".to_string(),
            Wire::Port(Port::BLsb) => "b.0".to_string(),
            Wire::Gate(k) => format!("t{k}"),
        };
        writeln!(f, "template {}", self.kind)?;
        for (k, g) in self.gates.iter().enumerate() {
            let ins: Vec<String> = g.inputs.iter().map(show).collect();
            writeln!(f, "  t{k} = {}({})", g.kind, ins.join(", "))?;
        }
        write!(f, "  out.1 = {}\n  out.0 = {}", show(&self.out_msb), show(&self.out_lsb))
    }
}

/// Incremental template construction.
struct Builder {
    gates: Vec<TemplateGate>,
}

impl Builder {
    fn new() -> Self {
        Builder { gates: Vec::new() }
    }

    fn add(&mut self, kind: BGateKind, inputs: &[Wire]) -> Wire {
        self.gates.push(TemplateGate { kind, inputs: inputs.to_vec() });
        Wire::Gate(self.gates.len() - 1)
    }

    fn finish(self, kind: QGateKind, out_msb: Wire, out_lsb: Wire) -> BTemplate {
        BTemplate { kind, gates: self.gates, out_msb, out_lsb }
    }
}

/// The fixed binary replacement for `kind`.
pub fn lower_gate(kind: QGateKind) -> BTemplate {
    use BGateKind::*;
    use Port::*;
    let (a1, a0, b1, b0) = (Wire::Port(AMsb), Wire::Port(ALsb), Wire::Port(BMsb), Wire::Port(BLsb));
    let mut t = Builder::new();
    let (msb, lsb) = match kind {
        QGateKind::And => (t.add(And2, &[a1, b1]), t.add(And2, &[a0, b0])),
        QGateKind::Or => (t.add(Or2, &[a1, b1]), t.add(Or2, &[a0, b0])),
        QGateKind::Xor => (t.add(Xor2, &[a1, b1]), t.add(Xor2, &[a0, b0])),
        QGateKind::Not => (t.add(Not, &[a1]), t.add(Not, &[a0])),
        QGateKind::Bitswap => (a0, a1),
        QGateKind::Inward => (t.add(Not, &[a1]), a1),
        QGateKind::Outward => {
            let n = t.add(Not, &[a1]);
            (n, n)
        }
        QGateKind::Eq => {
            let hi = t.add(Xnor2, &[a1, b1]);
            let lo = t.add(Xnor2, &[a0, b0]);
            let e = t.add(And2, &[hi, lo]);
            (e, e)
        }
        QGateKind::Max => {
            // When the MSBs tie the LSBs are ORed; otherwise the larger
            // operand's LSB passes: a0.(a1 + !b1) + b0.(b1 + !a1).
            let msb = t.add(Or2, &[a1, b1]);
            let nb1 = t.add(Not, &[b1]);
            let na1 = t.add(Not, &[a1]);
            let a_wins = t.add(Or2, &[a1, nb1]);
            let b_wins = t.add(Or2, &[b1, na1]);
            let a_term = t.add(And2, &[a0, a_wins]);
            let b_term = t.add(And2, &[b0, b_wins]);
            (msb, t.add(Or2, &[a_term, b_term]))
        }
        QGateKind::Min => {
            // Dual of MAX: (a0 + a1.!b1) . (b0 + b1.!a1).
            let msb = t.add(And2, &[a1, b1]);
            let nb1 = t.add(Not, &[b1]);
            let na1 = t.add(Not, &[a1]);
            let a_loses = t.add(And2, &[a1, nb1]);
            let b_loses = t.add(And2, &[b1, na1]);
            let a_term = t.add(Or2, &[a0, a_loses]);
            let b_term = t.add(Or2, &[b0, b_loses]);
            (msb, t.add(And2, &[a_term, b_term]))
        }
    };
    t.finish(kind, msb, lsb)
}

/// Replaces every gate of `n` with its template, using `templates` to pick
/// the replacement for each kind.
pub fn lower_netlist_with<F>(n: &QNetlist, templates: F) -> Result<BNetlist, LowerError>
where
    F: Fn(QGateKind) -> BTemplate,
{
    let errors = validate(n);
    if !errors.is_empty() {
        return Err(LowerError::Invalid(errors));
    }

    let mut out = BNetlist::new(n.name.clone());
    // quaternary signal -> (msb wire, lsb wire)
    let mut pairs: HashMap<&str, (String, String)> = HashMap::new();

    for s in &n.inputs {
        out.inputs.push(msb_name(s));
        out.inputs.push(lsb_name(s));
        pairs.insert(s, (msb_name(s), lsb_name(s)));
    }
    for c in &n.constants {
        let bits = c.value.to_bits();
        out.constants.push(Constant { name: msb_name(&c.name), value: bits.msb });
        out.constants.push(Constant { name: lsb_name(&c.name), value: bits.lsb });
        pairs.insert(&c.name, (msb_name(&c.name), lsb_name(&c.name)));
    }

    let mut cache: HashMap<QGateKind, BTemplate> = HashMap::new();
    for i in n.slot_order() {
        let g = &n.gates[i];
        let tpl = cache.entry(g.kind).or_insert_with(|| templates(g.kind));
        let a = &pairs[g.inputs[0].as_str()];
        let b = g.inputs.get(1).map(|s| &pairs[s.as_str()]);
        let ids: Vec<String> = (0..tpl.gates.len()).map(|k| format!("{}__t{k}", g.id)).collect();
        let resolve = |w: Wire| -> String {
            match w {
                Wire::Port(Port::AMsb) => a.0.clone(),
                Wire::Port(Port::ALsb) => a.1.clone(),
                Wire::Port(Port::BMsb) => b.expect("dyadic template on dyadic gate").0.clone(),
                Wire::Port(Port::BLsb) => b.expect("dyadic template on dyadic gate").1.clone(),
                Wire::Gate(k) => ids[k].clone(),
            }
        };
        for (k, tg) in tpl.gates.iter().enumerate() {
            out.gates.push(GateInstance {
                id: ids[k].clone(),
                kind: tg.kind,
                inputs: tg.inputs.iter().map(|&w| resolve(w)).collect(),
                slot: g.slot,
            });
        }
        let pair = (resolve(tpl.out_msb), resolve(tpl.out_lsb));
        pairs.insert(&g.id, pair);
    }

    for o in &n.outputs {
        let (m, l) = &pairs[o.source.as_str()];
        out.outputs.push(Output { name: msb_name(&o.name), source: m.clone() });
        out.outputs.push(Output { name: lsb_name(&o.name), source: l.clone() });
    }

    let errors = validate(&out);
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(LowerError::Invalid(errors))
    }
}

pub fn lower_netlist(n: &QNetlist) -> Result<BNetlist, LowerError> {
    lower_netlist_with(n, lower_gate)
}

/// Rewrites a quaternary table as a binary one: column `X` becomes `X.1, X.0`
/// and each digit its bit pair. Row order carries over unchanged.
pub fn pack_truth_table(t: &TruthTable) -> Result<TruthTable, LowerError> {
    if t.radix != 4 {
        return Err(TableError::Malformed(format!("expected a quaternary table, got radix {}", t.radix)).into());
    }
    t.check()?;
    let split_names = |names: &[String]| names.iter().flat_map(|s| [msb_name(s), lsb_name(s)]).collect::<Vec<_>>();
    let split_digits = |ds: &[u8]| ds.iter().flat_map(|&d| [d >> 1, d & 1]).collect::<Vec<_>>();
    Ok(TruthTable {
        radix: 2,
        inputs: split_names(&t.inputs),
        outputs: split_names(&t.outputs),
        rows: t
            .rows
            .iter()
            .map(|r| TableRow { inputs: split_digits(&r.inputs), outputs: split_digits(&r.outputs) })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::eval_qgate;
    use crate::netlist::{assign_slots, serialize_netlist};
    use crate::sim::{truth_table_b, truth_table_q};

    fn operand_sets(kind: QGateKind) -> Vec<(Qudit, Option<Qudit>)> {
        if kind.arity() == 1 {
            Qudit::ALL.iter().map(|&a| (a, None)).collect()
        } else {
            Qudit::ALL.iter().flat_map(|&a| Qudit::ALL.iter().map(move |&b| (a, Some(b)))).collect()
        }
    }

    #[test]
    fn max_min_lsb_formulas_by_brute_force() {
        // Oracle for the derived LSB circuits: numeric max/min on plain
        // integers, compared with the boolean formulas the templates encode.
        for a in 0u8..4 {
            for b in 0u8..4 {
                let (a1, a0, b1, b0) = (a >> 1 == 1, a & 1 == 1, b >> 1 == 1, b & 1 == 1);
                let max_lsb = (a0 && (a1 || !b1)) || (b0 && (b1 || !a1));
                let min_lsb = (a0 || (a1 && !b1)) && (b0 || (b1 && !a1));
                assert_eq!(max_lsb as u8, a.max(b) & 1, "max {a} {b}");
                assert_eq!(min_lsb as u8, a.min(b) & 1, "min {a} {b}");
            }
        }
    }

    #[test]
    fn every_template_is_sound() {
        for kind in QGateKind::ALL {
            let t = lower_gate(kind);
            for (a, b) in operand_sets(kind) {
                assert_eq!(t.eval_qudits(a, b), eval_qgate(kind, a, b).unwrap(), "{kind} {a} {b:?}");
            }
        }
    }

    #[test]
    fn template_sizes() {
        assert_eq!(lower_gate(QGateKind::Eq).gate_count(), 3);
        let eq = lower_gate(QGateKind::Eq);
        assert_eq!(eq.gates.iter().filter(|g| g.kind == BGateKind::Xnor2).count(), 2);
        assert_eq!(eq.gates.iter().filter(|g| g.kind == BGateKind::And2).count(), 1);
        assert_eq!(lower_gate(QGateKind::Bitswap).gate_count(), 0);
        assert_eq!(lower_gate(QGateKind::Inward).gate_count(), 1);
        assert_eq!(lower_gate(QGateKind::Outward).gate_count(), 1);
        for k in [QGateKind::And, QGateKind::Or, QGateKind::Xor, QGateKind::Not] {
            assert_eq!(lower_gate(k).gate_count(), 2);
        }
    }

    #[test]
    fn single_not() {
        let n = assign_slots(&QNetlist::new("n").input("A").gate("g", QGateKind::Not, &["A"]).output("Y", "g")).unwrap();
        let b = lower_netlist(&n).unwrap();
        assert_eq!(b.inputs, ["A.1", "A.0"]);
        assert_eq!(b.gates.len(), 2);
        assert!(b.gates.iter().all(|g| g.kind == BGateKind::Not && g.slot == Some(2)));
        assert_eq!(b.gates[0].inputs, ["A.1"]);
        assert_eq!(b.gates[1].inputs, ["A.0"]);
        let outs: Vec<_> = b.outputs.iter().map(|o| (o.name.as_str(), o.source.as_str())).collect();
        assert_eq!(outs, [("Y.1", "g__t0"), ("Y.0", "g__t1")]);
    }

    #[test]
    fn two_gate_chain_equivalent() {
        let n = assign_slots(
            &QNetlist::new("chain")
                .input("A")
                .input("B")
                .input("C")
                .gate("g1", QGateKind::And, &["A", "B"])
                .gate("g2", QGateKind::Or, &["g1", "C"])
                .output("Y", "g2"),
        )
        .unwrap();
        let b = lower_netlist(&n).unwrap();
        assert_eq!(b.gates.len(), 4);
        let tq = truth_table_q(&n).unwrap();
        assert_eq!(tq.rows.len(), 64);
        assert_eq!(pack_truth_table(&tq).unwrap(), truth_table_b(&b).unwrap());
    }

    #[test]
    fn bitswap_is_wiring() {
        let n = assign_slots(&QNetlist::new("s").input("A").gate("g", QGateKind::Bitswap, &["A"]).output("Y", "g")).unwrap();
        let b = lower_netlist(&n).unwrap();
        assert!(b.gates.is_empty());
        assert_eq!(b.outputs[0].source, "A.0");
        assert_eq!(b.outputs[1].source, "A.1");
    }

    #[test]
    fn constants_expand_to_bits() {
        let n = QNetlist::new("k").constant("K", Qudit::TWO).output("Y", "K");
        let b = lower_netlist(&n).unwrap();
        assert_eq!(b.constants, vec![
            Constant { name: "K.1".into(), value: true },
            Constant { name: "K.0".into(), value: false }
        ]);
    }

    #[test]
    fn deterministic_text() {
        let n = assign_slots(
            &QNetlist::new("d").input("A").input("B").gate("m", QGateKind::Max, &["A", "B"]).gate("e", QGateKind::Eq, &["m", "A"]).output("Y", "e"),
        )
        .unwrap();
        let one = serialize_netlist(&lower_netlist(&n).unwrap());
        let two = serialize_netlist(&lower_netlist(&n).unwrap());
        assert_eq!(one, two);
        let reparsed: BNetlist = crate::netlist::parse_netlist(&one).unwrap();
        assert_eq!(serialize_netlist(&reparsed), one);
    }

    #[test]
    fn invalid_input_rejected() {
        let n = QNetlist::new("bad").input("A").gate_at("g", QGateKind::Not, &["Z"], 2);
        assert!(matches!(lower_netlist(&n), Err(LowerError::Invalid(_))));
    }

    #[test]
    fn pack_examples() {
        let t = TruthTable {
            radix: 4,
            inputs: vec!["A".into()],
            outputs: vec!["Y".into()],
            rows: (0..4).map(|i| TableRow { inputs: vec![i], outputs: vec![3 - i] }).collect(),
        };
        let p = pack_truth_table(&t).unwrap();
        assert_eq!(p.inputs, ["A.1", "A.0"]);
        assert_eq!(p.rows[0], TableRow { inputs: vec![0, 0], outputs: vec![1, 1] });
        assert_eq!(p.rows[2], TableRow { inputs: vec![1, 0], outputs: vec![0, 1] });
        p.check().unwrap();

        let mut bad = t.clone();
        bad.rows.swap(0, 1);
        assert!(matches!(pack_truth_table(&bad), Err(LowerError::Table(_))));
        let mut bin = t;
        bin.radix = 2;
        assert!(pack_truth_table(&bin).is_err());
    }
}
