//! Quaternary algebra: expressions, an exhaustive identity prover and the
//! law catalog.

mod expr;
mod laws;
mod prove;

pub use expr::{eval_expr, parse_expr, Expr, ExprError};
pub use laws::{catalog, check_law, run_law_suite, run_laws, Expected, Law, LawCheck, LawReport, LawResult, LawStatus};
pub use prove::{
    assignment, verify_conditional, verify_identity, ConditionalReport, Counterexample, Predicate, ProveError, Prover,
    DEFAULT_MAX_VARS,
};
