//! Netlist evaluation and exhaustive truth tables.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::exec::{self, Strategy};
use crate::gate::{BGateKind, GateKind, Logic, QGateKind};
use crate::netlist::{validate, BNetlist, Netlist, QNetlist, Source, ValidationError};
use crate::qudit::Qudit;

/// Default cap on quaternary inputs for exhaustive enumeration (4096 rows).
pub const MAX_Q_INPUTS: usize = 6;
/// Default cap on binary inputs (same row budget as [`MAX_Q_INPUTS`]).
pub const MAX_B_INPUTS: usize = 12;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("no value given for input `{0}`")]
    IncompleteAssignment(String),
    #[error("`{0}` is not an input of the circuit")]
    UnknownInput(String),
    #[error("{count} inputs exceed the enumeration cap of {cap}")]
    TooManyInputs { count: usize, cap: usize },
    #[error("invalid netlist: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ValidationError>),
}

/// A netlist flattened to index form, gates in slot order.
#[derive(Clone, Debug)]
pub struct Compiled<K: GateKind> {
    n_inputs: usize,
    constants: Vec<K::Value>,
    /// (kind, operand signal indices, destination signal index)
    steps: Vec<(K, Vec<usize>, usize)>,
    outputs: Vec<usize>,
    n_signals: usize,
}

impl<K: GateKind> Compiled<K> {
    pub fn new(n: &Netlist<K>) -> Result<Self, SimError> {
        let errors = validate(n);
        if !errors.is_empty() {
            return Err(SimError::Invalid(errors));
        }
        let n_inputs = n.inputs.len();
        let n_consts = n.constants.len();
        let table = n.signal_table();
        let index = |name: &str| match table[name] {
            Source::Input(i) => i,
            Source::Constant(i) => n_inputs + i,
            Source::Gate(i) => n_inputs + n_consts + i,
        };
        let steps = n
            .slot_order()
            .into_iter()
            .map(|i| {
                let g = &n.gates[i];
                (g.kind, g.inputs.iter().map(|s| index(s)).collect(), n_inputs + n_consts + i)
            })
            .collect();
        Ok(Compiled {
            n_inputs,
            constants: n.constants.iter().map(|c| c.value).collect(),
            steps,
            outputs: n.outputs.iter().map(|o| index(&o.source)).collect(),
            n_signals: n_inputs + n_consts + n.gates.len(),
        })
    }

    /// Output values in declaration order for inputs given in declaration order.
    pub fn eval(&self, inputs: &[K::Value]) -> Vec<K::Value> {
        assert_eq!(inputs.len(), self.n_inputs, "one value per input");
        let zero = K::Value::from_digit(0).expect("zero");
        let mut sig = vec![zero; self.n_signals];
        sig[..self.n_inputs].copy_from_slice(inputs);
        sig[self.n_inputs..self.n_inputs + self.constants.len()].copy_from_slice(&self.constants);
        let mut ops = Vec::with_capacity(2);
        for (kind, srcs, dst) in &self.steps {
            ops.clear();
            ops.extend(srcs.iter().map(|&s| sig[s]));
            sig[*dst] = kind.eval(&ops).expect("arity validated");
        }
        self.outputs.iter().map(|&o| sig[o]).collect()
    }
}

/// Evaluates `n` on one total assignment; outputs come back in declaration order.
pub fn simulate<K: GateKind>(
    n: &Netlist<K>,
    assignment: &HashMap<String, K::Value>,
) -> Result<Vec<(String, K::Value)>, SimError> {
    if let Some(extra) = assignment.keys().find(|k| !n.inputs.contains(k)) {
        return Err(SimError::UnknownInput(extra.clone()));
    }
    let values = n
        .inputs
        .iter()
        .map(|i| assignment.get(i).copied().ok_or_else(|| SimError::IncompleteAssignment(i.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let out = Compiled::new(n)?.eval(&values);
    Ok(n.outputs.iter().map(|o| o.name.clone()).zip(out).collect())
}

pub fn sim_q(n: &QNetlist, assignment: &HashMap<String, Qudit>) -> Result<Vec<(String, Qudit)>, SimError> {
    simulate(n, assignment)
}

pub fn sim_b(n: &BNetlist, assignment: &HashMap<String, bool>) -> Result<Vec<(String, bool)>, SimError> {
    simulate(n, assignment)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub inputs: Vec<u8>,
    pub outputs: Vec<u8>,
}

/// Exhaustive table, rows in odometer order (first input most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub radix: u8,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("malformed truth table: {0}")]
    Malformed(String),
    #[error("csv: {0}")]
    Csv(String),
}

/// Digits of `idx` in `radix`, most significant first, `width` digits.
pub fn odometer_digits(radix: u8, width: usize, mut idx: usize) -> Vec<u8> {
    let mut digits = vec![0u8; width];
    for d in digits.iter_mut().rev() {
        *d = (idx % radix as usize) as u8;
        idx /= radix as usize;
    }
    digits
}

impl TruthTable {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Checks shape, digit ranges and odometer ordering.
    pub fn check(&self) -> Result<(), TableError> {
        let expect = (self.radix as usize)
            .checked_pow(self.inputs.len() as u32)
            .ok_or_else(|| TableError::Malformed("too many inputs".into()))?;
        if self.rows.len() != expect {
            return Err(TableError::Malformed(format!("{} rows, expected {expect}", self.rows.len())));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.inputs.len() != self.inputs.len() || row.outputs.len() != self.outputs.len() {
                return Err(TableError::Malformed(format!("row {} has the wrong number of columns", i + 1)));
            }
            if row.inputs.iter().chain(&row.outputs).any(|&d| d >= self.radix) {
                return Err(TableError::Malformed(format!("row {} has a digit outside radix {}", i + 1, self.radix)));
            }
            if row.inputs != odometer_digits(self.radix, self.inputs.len(), i) {
                return Err(TableError::Malformed(format!("row {} is out of odometer order", i + 1)));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.inputs.iter().chain(&self.outputs)).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.inputs.iter().chain(&row.outputs).map(|d| d.to_string())).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    /// Reads a complete table. The input/output split is implied by the row
    /// count: a table over `m` inputs has exactly `radix^m` rows.
    pub fn from_csv(text: &str, radix: u8) -> Result<Self, TableError> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header: Vec<String> =
            r.headers().map_err(|e| TableError::Csv(e.to_string()))?.iter().map(str::to_string).collect();
        let mut cells: Vec<Vec<u8>> = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| TableError::Csv(e.to_string()))?;
            let row = rec
                .iter()
                .map(|c| c.parse::<u8>().map_err(|_| TableError::Malformed(format!("row {}: bad digit {c:?}", i + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            cells.push(row);
        }
        let mut n_inputs = 0usize;
        while (radix as usize).pow(n_inputs as u32) < cells.len() {
            n_inputs += 1;
        }
        if (radix as usize).pow(n_inputs as u32) != cells.len() || n_inputs > header.len() {
            return Err(TableError::Malformed(format!(
                "{} rows is not a power of {radix} no larger than the column count",
                cells.len()
            )));
        }
        let table = TruthTable {
            radix,
            inputs: header[..n_inputs].to_vec(),
            outputs: header[n_inputs..].to_vec(),
            rows: cells
                .into_iter()
                .map(|mut c| {
                    let outputs = c.split_off(n_inputs.min(c.len()));
                    TableRow { inputs: c, outputs }
                })
                .collect(),
        };
        table.check()?;
        Ok(table)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head_in = self.inputs.join(" ");
        let head_out = self.outputs.join(" ");
        writeln!(f, "{head_in} | {head_out}")?;
        let w_in: Vec<usize> = self.inputs.iter().map(|s| s.len()).collect();
        let w_out: Vec<usize> = self.outputs.iter().map(|s| s.len()).collect();
        for row in &self.rows {
            let cells = |d: &[u8], w: &[usize]| {
                d.iter().zip(w).map(|(d, w)| format!("{d:>w$}")).collect::<Vec<_>>().join(" ")
            };
            writeln!(f, "{} | {}", cells(&row.inputs, &w_in), cells(&row.outputs, &w_out))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub max_inputs: usize,
    pub strategy: Strategy,
}

impl TableOptions {
    pub fn quaternary() -> Self {
        TableOptions { max_inputs: MAX_Q_INPUTS, strategy: Strategy::default() }
    }

    pub fn binary() -> Self {
        TableOptions { max_inputs: MAX_B_INPUTS, strategy: Strategy::default() }
    }
}

pub fn truth_table<K: GateKind>(n: &Netlist<K>, opts: TableOptions) -> Result<TruthTable, SimError> {
    if n.inputs.len() > opts.max_inputs {
        return Err(SimError::TooManyInputs { count: n.inputs.len(), cap: opts.max_inputs });
    }
    let prog = Compiled::new(n)?;
    let radix = K::Value::RADIX;
    let total = (radix as usize).pow(n.inputs.len() as u32);
    let rows = exec::map_indices(opts.strategy, total, |i| {
        let digits = odometer_digits(radix, n.inputs.len(), i);
        let values: Vec<K::Value> = digits.iter().map(|&d| K::Value::from_digit(d as u64).expect("digit")).collect();
        let outputs = prog.eval(&values).into_iter().map(Logic::digit).collect();
        TableRow { inputs: digits, outputs }
    });
    Ok(TruthTable {
        radix,
        inputs: n.inputs.clone(),
        outputs: n.outputs.iter().map(|o| o.name.clone()).collect(),
        rows,
    })
}

pub fn truth_table_q(n: &QNetlist) -> Result<TruthTable, SimError> {
    truth_table::<QGateKind>(n, TableOptions::quaternary())
}

pub fn truth_table_b(n: &BNetlist) -> Result<TruthTable, SimError> {
    truth_table::<BGateKind>(n, TableOptions::binary())
}
