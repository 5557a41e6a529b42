//! Exhaustive identity checking over all quaternary assignments.
//!
//! Assignments are enumerated odometer-style: variables sorted by name, the
//! first variable most significant, values ascending. "First counterexample"
//! always means first in that order.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::expr::{Expr, ExprError};
use crate::exec::{self, Strategy};
use crate::gate::QGateKind;
use crate::qudit::Qudit;

pub const DEFAULT_MAX_VARS: usize = 4;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProveError {
    #[error("{count} variables exceed the cap of {cap}")]
    TooManyVariables { count: usize, cap: usize },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// An assignment under which the two sides disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: BTreeMap<String, Qudit>,
    pub lhs_value: Qudit,
    pub rhs_value: Qudit,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{} => {} vs {}", parts.join(" "), self.lhs_value, self.rhs_value)
    }
}

/// Condition on the variables that restricts where an identity must hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    /// The variable is 0 or 3.
    Symmetric(String),
    /// The variable is 1 or 2.
    Asymmetric(String),
    /// The two variables are equal.
    Equal(String, String),
    /// The first variable is NOT of the second.
    ComplementOf(String, String),
}

impl Predicate {
    fn vars(&self) -> Vec<&str> {
        match self {
            Predicate::Symmetric(v) | Predicate::Asymmetric(v) => vec![v],
            Predicate::Equal(a, b) | Predicate::ComplementOf(a, b) => vec![a, b],
        }
    }

    fn test(&self, env: &BTreeMap<String, Qudit>) -> bool {
        let get = |v: &str| env[v];
        match self {
            Predicate::Symmetric(v) => get(v).is_symmetric(),
            Predicate::Asymmetric(v) => get(v).is_asymmetric(),
            Predicate::Equal(a, b) => get(a) == get(b),
            Predicate::ComplementOf(a, b) => get(a) == QGateKind::Not.unary(get(b)),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Symmetric(v) => write!(f, "symmetric({v})"),
            Predicate::Asymmetric(v) => write!(f, "asymmetric({v})"),
            Predicate::Equal(a, b) => write!(f, "{a} = {b}"),
            Predicate::ComplementOf(a, b) => write!(f, "{a} = NOT({b})"),
        }
    }
}

/// Result of a conditional check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalReport {
    /// First assignment satisfying the predicate where the sides differ.
    pub failure_inside: Option<Counterexample>,
    /// First assignment violating the predicate where the sides differ.
    pub witness_outside: Option<Counterexample>,
}

impl ConditionalReport {
    /// Holds under the predicate, and not in general.
    pub fn confirmed(&self) -> bool {
        self.failure_inside.is_none() && self.witness_outside.is_some()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Prover {
    pub max_vars: usize,
    pub strategy: Strategy,
}

impl Default for Prover {
    fn default() -> Self {
        Prover { max_vars: DEFAULT_MAX_VARS, strategy: Strategy::default() }
    }
}

impl Prover {
    pub fn with_max_vars(mut self, max_vars: usize) -> Self {
        self.max_vars = max_vars;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    fn variables<'a>(&self, exprs: &[&Expr], extra: impl IntoIterator<Item = &'a str>) -> Result<Vec<String>, ProveError> {
        let mut vars = std::collections::BTreeSet::new();
        for e in exprs {
            vars.extend(e.vars());
        }
        vars.extend(extra.into_iter().map(str::to_string));
        if vars.len() > self.max_vars {
            return Err(ProveError::TooManyVariables { count: vars.len(), cap: self.max_vars });
        }
        Ok(vars.into_iter().collect())
    }

    /// First assignment (odometer order) with `lhs != rhs`, restricted to
    /// assignments where `filter` returns true.
    fn first_difference<P>(&self, vars: &[String], lhs: &Expr, rhs: &Expr, filter: P) -> Result<Option<Counterexample>, ProveError>
    where
        P: Fn(&BTreeMap<String, Qudit>) -> bool + Sync,
    {
        let total = 4usize.pow(vars.len() as u32);
        let found = exec::find_first(self.strategy, total, |idx| {
            let env = assignment(vars, idx);
            if !filter(&env) {
                return None;
            }
            let look = |v: &str| env.get(v).copied();
            let result = lhs.eval_with(&look).and_then(|l| Ok((l, rhs.eval_with(&look)?)));
            match result {
                Ok((l, r)) if l == r => None,
                Ok((l, r)) => Some(Ok(Counterexample { assignment: env, lhs_value: l, rhs_value: r })),
                Err(e) => Some(Err(e)),
            }
        });
        found.transpose().map_err(ProveError::from)
    }

    /// `None` when `lhs = rhs` for every assignment, else the first counterexample.
    pub fn verify_identity(&self, lhs: &Expr, rhs: &Expr) -> Result<Option<Counterexample>, ProveError> {
        let vars = self.variables(&[lhs, rhs], [])?;
        self.first_difference(&vars, lhs, rhs, |_| true)
    }

    pub fn verify_conditional(&self, lhs: &Expr, rhs: &Expr, predicate: &Predicate) -> Result<ConditionalReport, ProveError> {
        let vars = self.variables(&[lhs, rhs], predicate.vars())?;
        Ok(ConditionalReport {
            failure_inside: self.first_difference(&vars, lhs, rhs, |env| predicate.test(env))?,
            witness_outside: self.first_difference(&vars, lhs, rhs, |env| !predicate.test(env))?,
        })
    }
}

/// Decodes assignment number `idx` in odometer order over `vars`.
pub fn assignment(vars: &[String], mut idx: usize) -> BTreeMap<String, Qudit> {
    let mut env = BTreeMap::new();
    for v in vars.iter().rev() {
        env.insert(v.clone(), Qudit::new((idx % 4) as u8).expect("mod 4"));
        idx /= 4;
    }
    env
}

/// [`Prover::verify_identity`] with default settings.
pub fn verify_identity(lhs: &Expr, rhs: &Expr) -> Result<Option<Counterexample>, ProveError> {
    Prover::default().verify_identity(lhs, rhs)
}

/// [`Prover::verify_conditional`] with default settings.
pub fn verify_conditional(lhs: &Expr, rhs: &Expr, predicate: &Predicate) -> Result<ConditionalReport, ProveError> {
    Prover::default().verify_conditional(lhs, rhs, predicate)
}

#[cfg(test)]
mod tests {
    use super::super::expr::parse_expr;
    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn de_morgan_and_bitswap_hold() {
        assert_eq!(verify_identity(&p("NOT(A + B)"), &p("NOT(A) . NOT(B)")).unwrap(), None);
        assert_eq!(verify_identity(&p("BITSWAP(A + B)"), &p("BITSWAP(A) + BITSWAP(B)")).unwrap(), None);
    }

    #[test]
    fn inward_does_not_distribute() {
        // Brute force over (a, b) on the bit formula <!x1, x1>: the first
        // disagreement in A-major order is A=0, B=2 (msb of A+B is 1, but
        // INWARD(0) + INWARD(2) = 2 + 1 = 3).
        let mut first = None;
        for a in 0u8..4 {
            for b in 0u8..4 {
                let inward = |x: u8| if x & 2 == 0 { 2 } else { 1 };
                let (l, r) = (inward(a | b), inward(a) | inward(b));
                if l != r && first.is_none() {
                    first = Some((a, b, l, r));
                }
            }
        }
        assert_eq!(first, Some((0, 2, 1, 3)));

        let cex = verify_identity(&p("INWARD(A + B)"), &p("INWARD(A) + INWARD(B)")).unwrap().unwrap();
        assert_eq!(cex.assignment["A"], Qudit::ZERO);
        assert_eq!(cex.assignment["B"], Qudit::TWO);
        assert_eq!((cex.lhs_value.value(), cex.rhs_value.value()), (1, 3));
    }

    #[test]
    fn deterministic_across_strategies() {
        let l = p("MAX(A, B) . C");
        let r = p("OR(A, B) . C + D");
        let seq = Prover::default().with_strategy(Strategy::Sequential).verify_identity(&l, &r).unwrap();
        for _ in 0..5 {
            let par = Prover::default().with_strategy(Strategy::Parallel).verify_identity(&l, &r).unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn variable_cap() {
        let e = p("A + B + C + D + E");
        assert_eq!(
            verify_identity(&e, &e),
            Err(ProveError::TooManyVariables { count: 5, cap: 4 })
        );
        assert_eq!(Prover::default().with_max_vars(5).verify_identity(&e, &e).unwrap(), None);
    }

    #[test]
    fn conditional_properties() {
        let r = verify_conditional(
            &p("INWARD(BITSWAP(A))"),
            &p("BITSWAP(INWARD(A))"),
            &Predicate::Asymmetric("A".into()),
        )
        .unwrap();
        assert!(r.confirmed(), "{r:?}");
        assert!(r.witness_outside.unwrap().assignment["A"].is_symmetric());

        let r = verify_conditional(
            &p("BITSWAP(OUTWARD(A))"),
            &p("OUTWARD(BITSWAP(A))"),
            &Predicate::Symmetric("A".into()),
        )
        .unwrap();
        assert!(r.confirmed(), "{r:?}");

        // the wrong predicate is rejected
        let r = verify_conditional(
            &p("BITSWAP(OUTWARD(A))"),
            &p("OUTWARD(BITSWAP(A))"),
            &Predicate::Asymmetric("A".into()),
        )
        .unwrap();
        assert!(!r.confirmed());
    }

    #[test]
    fn inward_outward_never_commute() {
        let (l, r) = (p("INWARD(OUTWARD(A))"), p("OUTWARD(INWARD(A))"));
        for a in Qudit::ALL {
            let look = |_: &str| Some(a);
            assert_ne!(l.eval_with(&look).unwrap(), r.eval_with(&look).unwrap());
        }
    }

    #[test]
    fn odometer_order() {
        let vars = vec!["A".to_string(), "B".to_string()];
        let env = assignment(&vars, 6);
        assert_eq!((env["A"].value(), env["B"].value()), (1, 2));
    }
}
