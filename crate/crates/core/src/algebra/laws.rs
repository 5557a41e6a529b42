//! Registered catalog of quaternary algebra laws and the suite that checks
//! each one exhaustively.
//!
//! Every law carries the status it is expected to have. A handful of laws are
//! recorded as they are commonly printed even though they are false; those
//! carry a note so a report shows the discrepancy instead of hiding it.

use std::fmt;

use super::expr::{parse_expr, Expr};
use super::prove::{Counterexample, Predicate, ProveError, Prover};
use crate::exec;
use crate::gate::{GateKind, Logic, QGateKind};
use crate::qudit::Qudit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawStatus {
    Holds,
    FailsAsExpected,
    Violated,
}

impl fmt::Display for LawStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LawStatus::Holds => "holds",
            LawStatus::FailsAsExpected => "fails-as-expected",
            LawStatus::Violated => "violated",
        })
    }
}

#[derive(Clone, Debug)]
pub enum LawCheck {
    /// Every gate maps every operand combination into the value domain.
    Closure,
    Identity { lhs: Expr, rhs: Expr },
    /// Holds whenever the predicate does, and fails somewhere it does not.
    Conditional { lhs: Expr, rhs: Expr, predicate: Predicate },
}

#[derive(Clone, Debug)]
pub struct Law {
    pub name: String,
    /// Family and item, e.g. `huntington/complement`.
    pub locus: String,
    pub check: LawCheck,
    pub expected: Expected,
    /// Set when the commonly printed form of this law disagrees with brute force.
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct LawResult {
    pub name: String,
    pub locus: String,
    pub statement: String,
    pub expected: Expected,
    pub status: LawStatus,
    pub counterexample: Option<Counterexample>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn all_as_expected(&self) -> bool {
        self.results.iter().all(|r| r.status != LawStatus::Violated)
    }

    /// Laws whose printed form is false.
    pub fn discrepancies(&self) -> impl Iterator<Item = &LawResult> {
        self.results.iter().filter(|r| r.note.is_some())
    }

    /// Rows of (law, locus, status) for CSV output.
    pub fn rows(&self) -> Vec<[String; 3]> {
        self.results.iter().map(|r| [r.name.clone(), r.locus.clone(), r.status.to_string()]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["law", "locus", "status"]).expect("in-memory write");
        for row in self.rows() {
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            write!(f, "{:<18} {:<40} {:<34} {}", r.status.to_string(), r.locus, r.name, r.statement)?;
            if let Some(c) = &r.counterexample {
                write!(f, "  [counterexample: {c}]")?;
            }
            if let Some(n) = &r.note {
                write!(f, "  [note: {n}]")?;
            }
            writeln!(f)?;
        }
        let violated = self.results.iter().filter(|r| r.status == LawStatus::Violated).count();
        write!(f, "{} laws, {} violated", self.results.len(), violated)
    }
}

fn law(locus: &str, name: &str, lhs: &str, rhs: &str, expected: Expected) -> Law {
    Law {
        name: name.to_string(),
        locus: locus.to_string(),
        check: LawCheck::Identity {
            lhs: parse_expr(lhs).expect("catalog expression"),
            rhs: parse_expr(rhs).expect("catalog expression"),
        },
        expected,
        note: None,
    }
}

fn holds(locus: &str, name: &str, lhs: &str, rhs: &str) -> Law {
    law(locus, name, lhs, rhs, Expected::Holds)
}

fn fails(locus: &str, name: &str, lhs: &str, rhs: &str) -> Law {
    law(locus, name, lhs, rhs, Expected::Fails)
}

fn conditional(locus: &str, name: &str, lhs: &str, rhs: &str, predicate: Predicate) -> Law {
    Law {
        name: name.to_string(),
        locus: locus.to_string(),
        check: LawCheck::Conditional {
            lhs: parse_expr(lhs).expect("catalog expression"),
            rhs: parse_expr(rhs).expect("catalog expression"),
            predicate,
        },
        expected: Expected::Holds,
        note: None,
    }
}

fn noted(mut l: Law, note: &str) -> Law {
    l.note = Some(note.to_string());
    l
}

/// The full registered catalog, in report order.
pub fn catalog() -> Vec<Law> {
    use Predicate::*;
    let v = |s: &str| s.to_string();
    vec![
        Law {
            name: v("closure"),
            locus: v("huntington/closure"),
            check: LawCheck::Closure,
            expected: Expected::Holds,
            note: None,
        },
        holds("huntington/complement", "complement (OR)", "A + NOT(A)", "3"),
        holds("huntington/complement", "complement (AND)", "A . NOT(A)", "0"),
        holds("huntington/associativity", "associativity (OR)", "A + (B + C)", "(A + B) + C"),
        holds("huntington/associativity", "associativity (AND)", "A . (B . C)", "(A . B) . C"),
        holds("huntington/commutativity", "commutativity (OR)", "A + B", "B + A"),
        holds("huntington/commutativity", "commutativity (AND)", "A . B", "B . A"),
        holds("huntington/distributivity", "distributivity (OR over AND)", "A + B . C", "(A + B) . (A + C)"),
        holds("huntington/distributivity", "distributivity (AND over OR)", "A . (B + C)", "A . B + A . C"),
        holds("huntington/boundedness", "OR identity element", "A + 0", "A"),
        holds("huntington/boundedness", "AND identity element", "A . 3", "A"),
        holds("huntington/boundedness", "OR absorbing element", "A + 3", "3"),
        holds("huntington/boundedness", "AND absorbing element", "A . 0", "0"),
        noted(
            fails("huntington/boundedness", "AND identity element (printed)", "A . 1", "A"),
            "printed with constant 1; the packed pair <1,1> is 3",
        ),
        noted(
            fails("huntington/boundedness", "OR absorbing element (printed)", "A + 1", "1"),
            "printed with constant 1; the packed pair <1,1> is 3",
        ),
        holds("operator/bitswap-distribution", "bitswap over OR", "BITSWAP(A + B)", "BITSWAP(A) + BITSWAP(B)"),
        holds("operator/bitswap-distribution", "bitswap over AND", "BITSWAP(A . B)", "BITSWAP(A) . BITSWAP(B)"),
        holds("operator/not-de-morgan", "De Morgan (NOT of OR)", "NOT(A + B)", "NOT(A) . NOT(B)"),
        holds("operator/not-de-morgan", "De Morgan (NOT of AND)", "NOT(A . B)", "NOT(A) + NOT(B)"),
        holds("operator/nand-nor-universality", "NOT as NAND", "NOT(A)", "NOT(A . A)"),
        holds("operator/nand-nor-universality", "NOT as NOR", "NOT(A)", "NOT(A + A)"),
        holds("operator/nand-nor-universality", "AND from NAND", "A . B", "NOT(NOT(A . B) . NOT(A . B))"),
        holds("operator/nand-nor-universality", "AND from NOR", "A . B", "NOT(NOT(A + A) + NOT(B + B))"),
        holds("operator/nand-nor-universality", "OR from NAND", "A + B", "NOT(NOT(A . A) . NOT(B . B))"),
        holds("operator/nand-nor-universality", "OR from NOR", "A + B", "NOT(NOT(A + B) + NOT(A + B))"),
        holds("operator/outward-de-morgan", "De Morgan (OUTWARD of OR)", "OUTWARD(A + B)", "OUTWARD(A) . OUTWARD(B)"),
        holds("operator/outward-de-morgan", "De Morgan (OUTWARD of AND)", "OUTWARD(A . B)", "OUTWARD(A) + OUTWARD(B)"),
        fails("operator/inward-no-distribution", "inward over OR", "INWARD(A + B)", "INWARD(A) + INWARD(B)"),
        fails("operator/inward-no-distribution", "inward over AND", "INWARD(A . B)", "INWARD(A) . INWARD(B)"),
        fails("operator/inward-no-distribution", "inward De Morgan (OR)", "INWARD(A + B)", "INWARD(A) . INWARD(B)"),
        fails("operator/inward-no-distribution", "inward De Morgan (AND)", "INWARD(A . B)", "INWARD(A) + INWARD(B)"),
        holds("operator/inward-not-order", "inward and NOT commute", "INWARD(NOT(A))", "NOT(INWARD(A))"),
        holds("operator/outward-not-order", "outward and NOT commute", "OUTWARD(NOT(A))", "NOT(OUTWARD(A))"),
        holds("operator/bitswap-not-order", "bitswap and NOT commute", "BITSWAP(NOT(A))", "NOT(BITSWAP(A))"),
        conditional(
            "operator/bitswap-inward-order",
            "bitswap and inward commute iff asymmetric",
            "INWARD(BITSWAP(A))",
            "BITSWAP(INWARD(A))",
            Asymmetric(v("A")),
        ),
        conditional(
            "operator/bitswap-outward-order",
            "bitswap and outward commute iff symmetric",
            "BITSWAP(OUTWARD(A))",
            "OUTWARD(BITSWAP(A))",
            Symmetric(v("A")),
        ),
        fails("operator/inward-outward-order", "inward and outward commute", "INWARD(OUTWARD(A))", "OUTWARD(INWARD(A))"),
        holds(
            "operator/inward-outward-order",
            "inward and outward never agree",
            "EQ(INWARD(OUTWARD(A)), OUTWARD(INWARD(A)))",
            "0",
        ),
        holds("theorem/idempotency", "idempotency (OR)", "X + X", "X"),
        holds("theorem/idempotency", "idempotency (AND)", "X . X", "X"),
        holds("theorem/absorption", "absorption (OR)", "X + X . Y", "X"),
        holds("theorem/absorption", "absorption (AND)", "X . (X + Y)", "X"),
        conditional("theorem/identity", "identity (OR)", "X + Y", "X", Equal(v("X"), v("Y"))),
        conditional("theorem/identity", "identity (AND)", "X . Y", "X", Equal(v("X"), v("Y"))),
        conditional("theorem/complements", "complements (OR)", "X + Y", "3", ComplementOf(v("X"), v("Y"))),
        conditional("theorem/complements", "complements (AND)", "X . Y", "0", ComplementOf(v("X"), v("Y"))),
        holds("theorem/involution", "involution (NOT)", "NOT(NOT(X))", "X"),
        holds("theorem/involution", "involution (BITSWAP)", "BITSWAP(BITSWAP(X))", "X"),
        holds("theorem/elimination", "elimination (OR)", "X + NOT(X) . Y", "X + Y"),
        holds("theorem/elimination", "elimination (AND)", "X . (NOT(X) + Y)", "X . Y"),
        holds("theorem/consensus", "consensus (sum of products)", "X . Y + NOT(X) . Z + Y . Z", "X . Y + NOT(X) . Z"),
        holds(
            "theorem/consensus",
            "consensus (product of sums)",
            "(X + Y) . (NOT(X) + Z) . (Y + Z)",
            "(X + Y) . (NOT(X) + Z)",
        ),
        noted(
            fails("theorem/interchange", "interchange (printed first form)", "X . Y + NOT(X) . Z", "(X + Y) . (NOT(X) + Z)"),
            "printed as an identity; the right side equals X.Z + NOT(X).Y instead",
        ),
        holds("theorem/interchange", "interchange (second form)", "(X + Y) . (NOT(X) + Z)", "X . Z + NOT(X) . Y"),
        holds("theorem/interchange", "interchange (corrected first form)", "X . Y + NOT(X) . Z", "(X + Z) . (NOT(X) + Y)"),
        holds("inverter-relations/outward-from-inward", "outward from inward", "OUTWARD(X)", "XOR(INWARD(X), 1)"),
        holds("inverter-relations/inward-from-outward", "inward from outward", "INWARD(X)", "XOR(OUTWARD(X), 1)"),
    ]
}

fn statement(check: &LawCheck) -> String {
    match check {
        LawCheck::Closure => "every gate output lies in {0,1,2,3}".to_string(),
        LawCheck::Identity { lhs, rhs } => format!("{lhs} = {rhs}"),
        LawCheck::Conditional { lhs, rhs, predicate } => format!("{lhs} = {rhs} when {predicate}"),
    }
}

fn closure_holds() -> bool {
    QGateKind::ALL.iter().all(|&k| {
        let ops: Vec<Vec<Qudit>> = if k.arity() == 1 {
            Qudit::all().map(|a| vec![a]).collect()
        } else {
            Qudit::all().flat_map(|a| Qudit::all().map(move |b| vec![a, b])).collect()
        };
        ops.iter().all(|o| k.eval(o).map(|v| v.value() < 4).unwrap_or(false))
    })
}

/// Checks one law and classifies it against its expectation.
pub fn check_law(prover: &Prover, law: &Law) -> Result<LawResult, ProveError> {
    let (held, counterexample) = match &law.check {
        LawCheck::Closure => (closure_holds(), None),
        LawCheck::Identity { lhs, rhs } => {
            let cex = prover.verify_identity(lhs, rhs)?;
            (cex.is_none(), cex)
        }
        LawCheck::Conditional { lhs, rhs, predicate } => {
            let r = prover.verify_conditional(lhs, rhs, predicate)?;
            (r.confirmed(), r.failure_inside)
        }
    };
    let status = match (held, law.expected) {
        (true, Expected::Holds) => LawStatus::Holds,
        (false, Expected::Fails) => LawStatus::FailsAsExpected,
        _ => LawStatus::Violated,
    };
    Ok(LawResult {
        name: law.name.clone(),
        locus: law.locus.clone(),
        statement: statement(&law.check),
        expected: law.expected,
        status,
        counterexample,
        note: law.note.clone(),
    })
}

pub fn run_laws(prover: &Prover, laws: &[Law]) -> Result<LawReport, ProveError> {
    // Each law enumerates sequentially; the catalog itself is spread across workers.
    let inner = Prover { strategy: exec::Strategy::Sequential, ..*prover };
    let results = exec::map_indices(prover.strategy, laws.len(), |i| check_law(&inner, &laws[i]));
    Ok(LawReport { results: results.into_iter().collect::<Result<_, _>>()? })
}

/// Runs the full catalog with default settings.
pub fn run_law_suite() -> LawReport {
    run_laws(&Prover::default(), &catalog()).expect("catalog laws stay within the variable cap")
}
