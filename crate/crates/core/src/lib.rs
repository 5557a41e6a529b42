//! Quaternary (four-valued) logic toolchain.
//!
//! Values are qudits in `0..=3`, packed as bit pairs `<x1, x0>`. The crate
//! covers gate semantics, an algebra prover, time-slotted netlists with a text
//! format, exhaustive simulation, replacement-based lowering to binary
//! circuits, equivalence checking and DOT rendering.
//!
//! Exhaustive loops run on rayon when the `parallel` feature (on by default)
//! is enabled and sequentially otherwise; see [`exec::Strategy`].

pub mod algebra;
pub mod builtin;
pub mod error;
pub mod exec;
pub mod gate;
pub mod lower;
pub mod netlist;
pub mod qudit;
pub mod render;
pub mod sim;
pub mod verify;

pub use error::{ArityMismatch, UnknownGate, ValueError};
pub use gate::{eval_bgate, eval_qgate, BGateKind, GateKind, Logic, QGateKind};
pub use netlist::{BNetlist, QNetlist};
pub use qudit::{bits_to_qudit, qudit_to_bits, BitPair, Qudit};
