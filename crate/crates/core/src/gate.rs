//! Gate kinds and single-gate evaluation.
//!
//! Quaternary dyadic gates are commutative, so every gate is defined on all
//! sixteen ordered operand pairs. AND, OR, XOR and NOT act bitwise on the
//! packed-binary pair; the functional inverters only look at the MSB.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{ArityMismatch, UnknownGate, ValueError};
use crate::qudit::Qudit;

/// A logic value domain: quaternary qudits or binary bits.
pub trait Logic: Copy + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    const RADIX: u8;

    fn from_digit(d: u64) -> Result<Self, ValueError>;
    fn digit(self) -> u8;

    fn all() -> impl Iterator<Item = Self> {
        (0..Self::RADIX as u64).map(|d| Self::from_digit(d).expect("digit below radix"))
    }
}

impl Logic for Qudit {
    const RADIX: u8 = 4;

    fn from_digit(d: u64) -> Result<Self, ValueError> {
        if d < 4 {
            Ok(Qudit::new(d as u8).expect("checked"))
        } else {
            Err(ValueError::OutOfRange { value: d, radix: 4 })
        }
    }

    fn digit(self) -> u8 {
        self.value()
    }
}

impl Logic for bool {
    const RADIX: u8 = 2;

    fn from_digit(d: u64) -> Result<Self, ValueError> {
        match d {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(ValueError::OutOfRange { value: d, radix: 2 }),
        }
    }

    fn digit(self) -> u8 {
        self as u8
    }
}

/// Common surface of quaternary and binary gate kinds, so netlists,
/// simulation and rendering can be written once.
pub trait GateKind:
    Copy + Eq + Hash + fmt::Debug + fmt::Display + FromStr<Err = UnknownGate> + Send + Sync + 'static
{
    type Value: Logic;

    /// Every kind, in declaration order.
    const KINDS: &'static [Self];

    /// When set, a gate may read another gate in the same timeslot as long as
    /// both come from the same lowered template (see [`template_group`]).
    const TEMPLATE_SLOTS: bool;

    fn arity(self) -> usize;
    fn name(self) -> &'static str;

    /// Evaluates on exactly `arity()` operands.
    fn eval(self, operands: &[Self::Value]) -> Result<Self::Value, ArityMismatch>;
}

/// Template group of a gate id: the part before `__t<k>`, if any.
pub fn template_group(id: &str) -> Option<&str> {
    let (head, tail) = id.rsplit_once("__t")?;
    if !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
        Some(head)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QGateKind {
    And,
    Or,
    Not,
    Bitswap,
    Xor,
    Inward,
    Outward,
    Eq,
    Max,
    Min,
}

impl QGateKind {
    pub const ALL: [QGateKind; 10] = [
        QGateKind::And,
        QGateKind::Or,
        QGateKind::Not,
        QGateKind::Bitswap,
        QGateKind::Xor,
        QGateKind::Inward,
        QGateKind::Outward,
        QGateKind::Eq,
        QGateKind::Max,
        QGateKind::Min,
    ];

    pub fn is_fundamental(self) -> bool {
        matches!(self, QGateKind::And | QGateKind::Or | QGateKind::Not | QGateKind::Bitswap)
    }

    pub fn is_unary(self) -> bool {
        matches!(self, QGateKind::Not | QGateKind::Bitswap | QGateKind::Inward | QGateKind::Outward)
    }

    pub fn unary(self, a: Qudit) -> Qudit {
        let v = a.value();
        let out = match self {
            QGateKind::Not => 3 - v,
            QGateKind::Bitswap => ((v & 1) << 1) | (v >> 1),
            // <!a1, a1>
            QGateKind::Inward => if v & 2 == 0 { 2 } else { 1 },
            // <!a1, !a1>
            QGateKind::Outward => if v & 2 == 0 { 3 } else { 0 },
            _ => panic!("{self} is not a unary gate"),
        };
        Qudit::new(out).expect("unary result in range")
    }

    pub fn binary(self, a: Qudit, b: Qudit) -> Qudit {
        let (x, y) = (a.value(), b.value());
        let out = match self {
            QGateKind::And => x & y,
            QGateKind::Or => x | y,
            QGateKind::Xor => x ^ y,
            QGateKind::Eq => if x == y { 3 } else { 0 },
            QGateKind::Max => x.max(y),
            QGateKind::Min => x.min(y),
            _ => panic!("{self} is not a dyadic gate"),
        };
        Qudit::new(out).expect("dyadic result in range")
    }
}

/// Evaluates one quaternary gate; `b` must be present exactly for dyadic kinds.
pub fn eval_qgate(kind: QGateKind, a: Qudit, b: Option<Qudit>) -> Result<Qudit, ArityMismatch> {
    match (kind.is_unary(), b) {
        (true, None) => Ok(kind.unary(a)),
        (false, Some(b)) => Ok(kind.binary(a, b)),
        (_, b) => Err(ArityMismatch { gate: kind.name(), expected: kind.arity(), got: 1 + b.is_some() as usize }),
    }
}

impl GateKind for QGateKind {
    type Value = Qudit;
    const KINDS: &'static [Self] = &QGateKind::ALL;
    const TEMPLATE_SLOTS: bool = false;

    fn arity(self) -> usize {
        if self.is_unary() { 1 } else { 2 }
    }

    fn name(self) -> &'static str {
        match self {
            QGateKind::And => "AND",
            QGateKind::Or => "OR",
            QGateKind::Not => "NOT",
            QGateKind::Bitswap => "BITSWAP",
            QGateKind::Xor => "XOR",
            QGateKind::Inward => "INWARD",
            QGateKind::Outward => "OUTWARD",
            QGateKind::Eq => "EQ",
            QGateKind::Max => "MAX",
            QGateKind::Min => "MIN",
        }
    }

    fn eval(self, operands: &[Qudit]) -> Result<Qudit, ArityMismatch> {
        match *operands {
            [a] => eval_qgate(self, a, None),
            [a, b] => eval_qgate(self, a, Some(b)),
            _ => Err(ArityMismatch { gate: self.name(), expected: self.arity(), got: operands.len() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BGateKind {
    And2,
    Or2,
    Not,
    Xor2,
    Xnor2,
}

impl BGateKind {
    pub const ALL: [BGateKind; 5] = [BGateKind::And2, BGateKind::Or2, BGateKind::Not, BGateKind::Xor2, BGateKind::Xnor2];
}

/// Evaluates one binary gate; `b` must be present exactly for two-input kinds.
pub fn eval_bgate(kind: BGateKind, a: bool, b: Option<bool>) -> Result<bool, ArityMismatch> {
    match (kind, b) {
        (BGateKind::Not, None) => Ok(!a),
        (BGateKind::And2, Some(b)) => Ok(a & b),
        (BGateKind::Or2, Some(b)) => Ok(a | b),
        (BGateKind::Xor2, Some(b)) => Ok(a ^ b),
        (BGateKind::Xnor2, Some(b)) => Ok(a == b),
        (_, b) => Err(ArityMismatch { gate: kind.name(), expected: kind.arity(), got: 1 + b.is_some() as usize }),
    }
}

impl GateKind for BGateKind {
    type Value = bool;
    const KINDS: &'static [Self] = &BGateKind::ALL;
    const TEMPLATE_SLOTS: bool = true;

    fn arity(self) -> usize {
        if self == BGateKind::Not { 1 } else { 2 }
    }

    fn name(self) -> &'static str {
        match self {
            BGateKind::And2 => "AND2",
            BGateKind::Or2 => "OR2",
            BGateKind::Not => "NOT",
            BGateKind::Xor2 => "XOR2",
            BGateKind::Xnor2 => "XNOR2",
        }
    }

    fn eval(self, operands: &[bool]) -> Result<bool, ArityMismatch> {
        match *operands {
            [a] => eval_bgate(self, a, None),
            [a, b] => eval_bgate(self, a, Some(b)),
            _ => Err(ArityMismatch { gate: self.name(), expected: self.arity(), got: operands.len() }),
        }
    }
}

macro_rules! kind_text {
    ($ty:ty) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = UnknownGate;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <$ty>::ALL.iter().copied().find(|k| k.name() == s).ok_or_else(|| UnknownGate(s.to_string()))
            }
        }
    };
}

kind_text!(QGateKind);
kind_text!(BGateKind);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: u8) -> Qudit {
        Qudit::new(v).unwrap()
    }

    #[test]
    fn documented_examples() {
        use QGateKind::*;
        assert_eq!(eval_qgate(And, q(1), Some(q(2))).unwrap(), q(0));
        assert_eq!(eval_qgate(Or, q(1), Some(q(2))).unwrap(), q(3));
        assert_eq!(eval_qgate(Not, q(1), None).unwrap(), q(2));
        assert_eq!(eval_qgate(Bitswap, q(2), None).unwrap(), q(1));
        assert_eq!(eval_qgate(Xor, q(1), Some(q(3))).unwrap(), q(2));
        assert_eq!(eval_qgate(Inward, q(3), None).unwrap(), q(1));
        assert_eq!(eval_qgate(Outward, q(1), None).unwrap(), q(3));
        assert_eq!(eval_qgate(Eq, q(0), Some(q(3))).unwrap(), q(0));
        assert_eq!(eval_qgate(Eq, q(2), Some(q(2))).unwrap(), q(3));
        assert_eq!(eval_qgate(Max, q(1), Some(q(2))).unwrap(), q(2));
        assert_eq!(eval_qgate(Min, q(2), Some(q(3))).unwrap(), q(2));
    }

    #[test]
    fn binary_examples() {
        assert!(eval_bgate(BGateKind::And2, true, Some(true)).unwrap());
        assert!(eval_bgate(BGateKind::Or2, false, Some(true)).unwrap());
        assert!(eval_bgate(BGateKind::Xnor2, false, Some(false)).unwrap());
        assert!(!eval_bgate(BGateKind::Xor2, true, Some(true)).unwrap());
        assert!(!eval_bgate(BGateKind::Not, true, None).unwrap());
    }

    #[test]
    fn arity_mismatch() {
        assert!(eval_qgate(QGateKind::Not, q(1), Some(q(2))).is_err());
        assert!(eval_qgate(QGateKind::And, q(1), None).is_err());
        assert!(eval_bgate(BGateKind::Not, true, Some(true)).is_err());
        assert!(eval_bgate(BGateKind::Xor2, true, None).is_err());
        assert!(QGateKind::Eq.eval(&[q(0), q(1), q(2)]).is_err());
        assert!(BGateKind::And2.eval(&[]).is_err());
    }

    #[test]
    fn arities() {
        for k in QGateKind::ALL {
            let expect = matches!(k, QGateKind::Not | QGateKind::Bitswap | QGateKind::Inward | QGateKind::Outward);
            assert_eq!(k.arity() == 1, expect, "{k}");
        }
        assert_eq!(BGateKind::Not.arity(), 1);
        assert_eq!(BGateKind::Xnor2.arity(), 2);
    }

    #[test]
    fn names_round_trip() {
        for k in QGateKind::ALL {
            assert_eq!(k.name().parse::<QGateKind>().unwrap(), k);
        }
        for k in BGateKind::ALL {
            assert_eq!(k.to_string().parse::<BGateKind>().unwrap(), k);
        }
        assert!("NAND".parse::<QGateKind>().is_err());
        assert!("and".parse::<QGateKind>().is_err());
    }

    #[test]
    fn template_groups() {
        assert_eq!(template_group("g1__t0"), Some("g1"));
        assert_eq!(template_group("a__b__t12"), Some("a__b"));
        assert_eq!(template_group("g1"), None);
        assert_eq!(template_group("g1__t"), None);
        assert_eq!(template_group("g1__tx"), None);
    }

    #[test]
    fn packed_binary_identities() {
        let bits = |x: Qudit| x.to_bits();
        let join = |m: bool, l: bool| Qudit::from_bits(crate::BitPair::new(m, l));
        for x in Qudit::ALL {
            let b = bits(x);
            assert_eq!(QGateKind::Not.unary(x), join(!b.msb, !b.lsb));
            assert_eq!(QGateKind::Bitswap.unary(x), join(b.lsb, b.msb));
            assert_eq!(QGateKind::Outward.unary(x), join(!b.msb, !b.msb));
            assert_eq!(QGateKind::Inward.unary(x), join(!b.msb, b.msb));
            for y in Qudit::ALL {
                let c = bits(y);
                assert_eq!(QGateKind::And.binary(x, y), join(b.msb & c.msb, b.lsb & c.lsb));
                assert_eq!(QGateKind::Or.binary(x, y), join(b.msb | c.msb, b.lsb | c.lsb));
                assert_eq!(QGateKind::Xor.binary(x, y), join(b.msb ^ c.msb, b.lsb ^ c.lsb));
            }
        }
    }
}
