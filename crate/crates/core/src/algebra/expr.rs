//! Quaternary expressions and their text syntax.
//!
//! ```text
//! sum   := prod ('+' prod)*          OR, left-associative
//! prod  := atom ('.' atom)*          AND, binds tighter than '+'
//! atom  := 0..3 | ident | FUNC '(' sum (',' sum)? ')' | '(' sum ')'
//! ```
//!
//! `FUNC` is a gate name: NOT, BITSWAP, INWARD, OUTWARD take one argument;
//! AND, OR, XOR, EQ, MAX, MIN take two. Gate names are reserved and cannot be
//! used as variables.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gate::{GateKind, QGateKind};
use crate::qudit::Qudit;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Qudit),
    Var(String),
    Unary(QGateKind, Box<Expr>),
    Binary(QGateKind, Box<Expr>, Box<Expr>),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown operator {name:?} at byte {pos}")]
    UnknownOperator { pos: usize, name: String },
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
}

impl Expr {
    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }

    pub fn constant(q: Qudit) -> Self {
        Expr::Const(q)
    }

    pub fn unary(op: QGateKind, e: Expr) -> Self {
        assert!(op.is_unary(), "{op} is not unary");
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: QGateKind, l: Expr, r: Expr) -> Self {
        assert!(!op.is_unary(), "{op} is not dyadic");
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    /// Variable names, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Unary(_, e) => e.collect_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Bottom-up evaluation with `lookup` supplying variable values.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<Qudit, ExprError>
    where
        F: Fn(&str) -> Option<Qudit>,
    {
        Ok(match self {
            Expr::Const(q) => *q,
            Expr::Var(v) => lookup(v).ok_or_else(|| ExprError::UnboundVariable(v.clone()))?,
            Expr::Unary(op, e) => op.unary(e.eval_with(lookup)?),
            Expr::Binary(op, l, r) => op.binary(l.eval_with(lookup)?, r.eval_with(lookup)?),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(QGateKind::Or, ..) => 1,
            Expr::Binary(QGateKind::And, ..) => 2,
            _ => 3,
        }
    }
}

/// Evaluates `e` under an environment mapping variable names to values.
pub fn eval_expr<S: std::hash::BuildHasher>(
    e: &Expr,
    env: &std::collections::HashMap<String, Qudit, S>,
) -> Result<Qudit, ExprError> {
    e.eval_with(&|v: &str| env.get(v).copied())
}

pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", c as char)))
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.prod()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let rhs = self.prod()?;
            lhs = Expr::binary(QGateKind::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(b'.') {
            self.pos += 1;
            let rhs = self.atom()?;
            lhs = Expr::binary(QGateKind::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                text.parse::<Qudit>()
                    .map(Expr::Const)
                    .map_err(|_| ExprError::Syntax { pos: start, msg: format!("constant {text} is not a qudit") })
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let op = name
                        .parse::<QGateKind>()
                        .map_err(|_| ExprError::UnknownOperator { pos: start, name: name.clone() })?;
                    let first = self.sum()?;
                    let e = if op.arity() == 1 {
                        Expr::unary(op, first)
                    } else {
                        self.expect(b',')?;
                        let second = self.sum()?;
                        Expr::binary(op, first, second)
                    };
                    self.expect(b')')?;
                    Ok(e)
                } else if name.parse::<QGateKind>().is_ok() {
                    Err(ExprError::Syntax { pos: start, msg: format!("operator {name} used without arguments") })
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(q) => write!(f, "{q}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Unary(op, e) => write!(f, "{op}({e})"),
            Expr::Binary(op @ (QGateKind::Or | QGateKind::And), l, r) => {
                let prec = self.precedence();
                let sym = if *op == QGateKind::Or { " + " } else { " . " };
                // left-associative: a right operand of equal precedence needs parentheses
                if l.precedence() < prec {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                f.write_str(sym)?;
                if r.precedence() <= prec {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Expr::Binary(op, l, r) => write!(f, "{op}({l}, {r})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use proptest::prelude::*;

    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(p("A + B"), Expr::binary(QGateKind::Or, Expr::var("A"), Expr::var("B")));
        assert_eq!(
            p("NOT(A . B)"),
            Expr::unary(QGateKind::Not, Expr::binary(QGateKind::And, Expr::var("A"), Expr::var("B")))
        );
        assert_eq!(p("EQ(A, 3)"), Expr::binary(QGateKind::Eq, Expr::var("A"), Expr::Const(Qudit::THREE)));
    }

    #[test]
    fn and_binds_tighter() {
        assert_eq!(p("A + B . C"), p("A + (B . C)"));
        assert_ne!(p("A + B . C"), p("(A + B) . C"));
        assert_eq!(p("A + B + C"), p("(A + B) + C"));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("FOO(A)"), Err(ExprError::UnknownOperator { pos: 0, .. })));
        assert!(matches!(parse_expr("A +"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expr("A + 4"), Err(ExprError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expr("(A"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expr("XOR(A)"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expr("NOT + A"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expr("A B"), Err(ExprError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn evaluation_examples() {
        let env = |a: u8| HashMap::from([("A".to_string(), Qudit::new(a).unwrap())]);
        assert_eq!(eval_expr(&p("A + NOT(A)"), &env(2)).unwrap(), Qudit::THREE);
        assert_eq!(eval_expr(&p("A . NOT(A)"), &env(1)).unwrap(), Qudit::ZERO);
        assert_eq!(eval_expr(&p("BITSWAP(BITSWAP(A))"), &env(1)).unwrap(), Qudit::ONE);
        assert_eq!(
            eval_expr(&p("A + B"), &env(1)),
            Err(ExprError::UnboundVariable("B".to_string()))
        );
    }

    #[test]
    fn vars_sorted() {
        let v: Vec<_> = p("Z . NOT(A) + MAX(B, A)").vars().into_iter().collect();
        assert_eq!(v, ["A", "B", "Z"]);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u8..4).prop_map(|v| Expr::Const(Qudit::new(v).unwrap())),
            prop::sample::select(vec!["A", "B", "C", "x_1"]).prop_map(Expr::var),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            let unary = prop::sample::select(
                QGateKind::ALL.iter().copied().filter(|k| k.is_unary()).collect::<Vec<_>>(),
            );
            let dyadic = prop::sample::select(
                QGateKind::ALL.iter().copied().filter(|k| !k.is_unary()).collect::<Vec<_>>(),
            );
            prop_oneof![
                (unary, inner.clone()).prop_map(|(op, e)| Expr::unary(op, e)),
                (dyadic, inner.clone(), inner).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_parses_back(e in arb_expr()) {
            prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }
}
