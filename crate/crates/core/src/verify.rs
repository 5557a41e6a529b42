//! Gate-template checks, exhaustive circuit equivalence and a seeded
//! random-netlist generator for fuzzing the lowering.

use std::fmt;

use thiserror::Error;

use crate::exec::{self, Strategy};
use crate::gate::{eval_qgate, GateKind, QGateKind};
use crate::lower::{lower_gate, lower_netlist_with, BTemplate, LowerError};
use crate::netlist::{assign_slots, QNetlist};
use crate::qudit::{BitPair, Qudit};
use crate::sim::{odometer_digits, Compiled, SimError, MAX_Q_INPUTS};

/// Default input cap for fuzzed circuits (256 assignments).
pub const FUZZ_MAX_INPUTS: usize = 4;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{count} inputs exceed the equivalence cap of {cap}")]
    TooManyInputs { count: usize, cap: usize },
    #[error(transparent)]
    Lower(#[from] LowerError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Outcome of the exhaustive template check for one gate kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateCheck {
    pub kind: QGateKind,
    pub cases: usize,
    /// First operands where the template disagrees: (a, b, expected, got).
    pub witness: Option<(Qudit, Option<Qudit>, Qudit, Qudit)>,
}

impl GateCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for GateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{:<8} pass ({} cases)", self.kind.to_string(), self.cases),
            Some((a, b, want, got)) => {
                let ops = match b {
                    Some(b) => format!("{a}, {b}"),
                    None => a.to_string(),
                };
                write!(f, "{:<8} FAIL at ({ops}): expected {want}, template gives {got}", self.kind.to_string())
            }
        }
    }
}

pub fn check_template(tpl: &BTemplate) -> GateCheck {
    let kind = tpl.kind;
    let operands: Vec<(Qudit, Option<Qudit>)> = if kind.arity() == 1 {
        Qudit::ALL.iter().map(|&a| (a, None)).collect()
    } else {
        Qudit::ALL.iter().flat_map(|&a| Qudit::ALL.iter().map(move |&b| (a, Some(b)))).collect()
    };
    let witness = operands.iter().find_map(|&(a, b)| {
        let want = eval_qgate(kind, a, b).expect("arity");
        let got = tpl.eval_qudits(a, b);
        (want != got).then_some((a, b, want, got))
    });
    GateCheck { kind, cases: operands.len(), witness }
}

/// Exhaustively compares each kind's template against the gate semantics.
pub fn check_gate_templates() -> Vec<GateCheck> {
    check_gate_templates_with(lower_gate)
}

pub fn check_gate_templates_with<F: Fn(QGateKind) -> BTemplate>(templates: F) -> Vec<GateCheck> {
    QGateKind::ALL.iter().map(|&k| check_template(&templates(k))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceStatus {
    Equivalent,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MismatchWitness {
    pub assignment: Vec<(String, Qudit)>,
    pub quaternary: Vec<(String, Qudit)>,
    /// Binary outputs decoded pairwise back to qudits.
    pub binary: Vec<(String, Qudit)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub circuit: String,
    pub assignments_checked: usize,
    pub status: EquivalenceStatus,
    pub witness: Option<MismatchWitness>,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.status == EquivalenceStatus::Equivalent
    }

    pub fn csv_header() -> &'static str {
        "circuit,status,witness"
    }

    pub fn csv_row(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let status = match self.status {
            EquivalenceStatus::Equivalent => "equivalent",
            EquivalenceStatus::Mismatch => "mismatch",
        };
        let witness = self.witness.as_ref().map(|m| fmt_pairs(&m.assignment)).unwrap_or_default();
        w.write_record([self.circuit.as_str(), status, witness.as_str()]).expect("in-memory write");
        let bytes = w.into_inner().expect("flush");
        String::from_utf8(bytes).expect("utf8").trim_end().to_string()
    }
}

fn fmt_pairs(pairs: &[(String, Qudit)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: equivalent over {} assignments", self.circuit, self.assignments_checked),
            Some(m) => write!(
                f,
                "{}: MISMATCH at {} (quaternary {}; binary {})",
                self.circuit,
                fmt_pairs(&m.assignment),
                fmt_pairs(&m.quaternary),
                fmt_pairs(&m.binary)
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EquivOptions {
    pub max_inputs: usize,
    pub strategy: Strategy,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions { max_inputs: MAX_Q_INPUTS, strategy: Strategy::default() }
    }
}

/// Lowers `n` and co-simulates both circuits over every quaternary assignment.
pub fn check_equivalence(n: &QNetlist) -> Result<EquivalenceReport, VerifyError> {
    check_equivalence_with(n, EquivOptions::default(), lower_gate)
}

pub fn check_equivalence_with<F>(n: &QNetlist, opts: EquivOptions, templates: F) -> Result<EquivalenceReport, VerifyError>
where
    F: Fn(QGateKind) -> BTemplate,
{
    if n.inputs.len() > opts.max_inputs {
        return Err(VerifyError::TooManyInputs { count: n.inputs.len(), cap: opts.max_inputs });
    }
    let lowered = lower_netlist_with(n, templates)?;
    let qprog = Compiled::new(n)?;
    let bprog = Compiled::new(&lowered)?;
    let total = 4usize.pow(n.inputs.len() as u32);

    let decode = |bits: &[bool]| -> Vec<Qudit> {
        bits.chunks(2).map(|p| Qudit::from_bits(BitPair::new(p[0], p[1]))).collect()
    };
    let mismatch = exec::find_first(opts.strategy, total, |i| {
        let digits = odometer_digits(4, n.inputs.len(), i);
        let qin: Vec<Qudit> = digits.iter().map(|&d| Qudit::new(d).expect("digit")).collect();
        let bin: Vec<bool> = qin.iter().flat_map(|q| {
            let b = q.to_bits();
            [b.msb, b.lsb]
        }).collect();
        let qout = qprog.eval(&qin);
        let bout = decode(&bprog.eval(&bin));
        (qout != bout).then_some((qin, qout, bout))
    });

    let names = |vals: Vec<Qudit>, names: Vec<String>| names.into_iter().zip(vals).collect::<Vec<_>>();
    let out_names: Vec<String> = n.outputs.iter().map(|o| o.name.clone()).collect();
    Ok(EquivalenceReport {
        circuit: n.name.clone(),
        assignments_checked: total,
        status: if mismatch.is_some() { EquivalenceStatus::Mismatch } else { EquivalenceStatus::Equivalent },
        witness: mismatch.map(|(qin, qout, bout)| MismatchWitness {
            assignment: names(qin, n.inputs.clone()),
            quaternary: names(qout, out_names.clone()),
            binary: names(bout, out_names.clone()),
        }),
    })
}

/// SplitMix64 (Steele, Lea, Flood): state += 0x9E3779B97F4A7C15, then the
/// output mix with multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (modulo reduction; the bias is negligible for small n).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// A valid random circuit: `n_inputs` inputs `I<k>`, constants `K0..K3`,
/// `n_gates` gates `g<k>` each reading earlier signals, and one output per
/// gate nothing else reads.
///
/// Panics unless `1 <= n_inputs <= 6` and `1 <= n_gates <= 64`.
pub fn random_netlist(seed: u64, n_inputs: usize, n_gates: usize) -> QNetlist {
    assert!((1..=6).contains(&n_inputs), "n_inputs must be in 1..=6");
    assert!((1..=64).contains(&n_gates), "n_gates must be in 1..=64");
    let mut rng = SplitMix64::new(seed);
    let mut n = QNetlist::new(format!("rand_{seed}"));
    let mut signals: Vec<String> = Vec::new();
    for i in 0..n_inputs {
        n.inputs.push(format!("I{i}"));
        signals.push(format!("I{i}"));
    }
    for (i, q) in Qudit::ALL.iter().enumerate() {
        n = n.constant(&format!("K{i}"), *q);
        signals.push(format!("K{i}"));
    }
    let mut read = vec![false; n_gates];
    for g in 0..n_gates {
        let kind = QGateKind::ALL[rng.below(QGateKind::ALL.len())];
        let ops: Vec<String> = (0..kind.arity()).map(|_| signals[rng.below(signals.len())].clone()).collect();
        for op in &ops {
            if let Some(idx) = op.strip_prefix('g').and_then(|s| s.parse::<usize>().ok()) {
                read[idx] = true;
            }
        }
        let refs: Vec<&str> = ops.iter().map(String::as_str).collect();
        n = n.gate(&format!("g{g}"), kind, &refs);
        signals.push(format!("g{g}"));
    }
    for (g, was_read) in read.iter().enumerate() {
        if !was_read {
            n = n.output(&format!("Y{g}"), &format!("g{g}"));
        }
    }
    assign_slots(&n).expect("generated netlists are acyclic and well formed")
}

/// Shape of fuzz case `seed`: 1..=4 inputs, 1..=`max_gates` gates.
pub fn fuzz_case(seed: u64, max_gates: usize) -> QNetlist {
    let mut rng = SplitMix64::new(seed ^ 0xA5A5_A5A5_A5A5_A5A5);
    let n_inputs = 1 + rng.below(FUZZ_MAX_INPUTS);
    let n_gates = 1 + rng.below(max_gates.clamp(1, 32));
    random_netlist(seed, n_inputs, n_gates)
}

/// Equivalence reports for fuzz cases `seeds`, in seed order.
pub fn fuzz_campaign(seeds: std::ops::Range<u64>, max_gates: usize, strategy: Strategy) -> Result<Vec<EquivalenceReport>, VerifyError> {
    let start = seeds.start;
    let count = (seeds.end.saturating_sub(seeds.start)) as usize;
    let inner = EquivOptions { max_inputs: FUZZ_MAX_INPUTS, strategy: Strategy::Sequential };
    exec::map_indices(strategy, count, |i| {
        let n = fuzz_case(start + i as u64, max_gates);
        check_equivalence_with(&n, inner, lower_gate)
    })
    .into_iter()
    .collect()
}
