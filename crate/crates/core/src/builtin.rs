//! Built-in example circuits.

use crate::netlist::{parse_netlist, QNetlist};

pub const DECODER: &str = "\
# quaternary 1-to-4 decoder: L[i] = 3 when S = i, else 0
circuit decoder
input S
const C0 = 0
const C1 = 1
const C2 = 2
const C3 = 3
gate e0 = EQ(S, C0)
gate e1 = EQ(S, C1)
gate e2 = EQ(S, C2)
gate e3 = EQ(S, C3)
output L0 = e0
output L1 = e1
output L2 = e2
output L3 = e3
";

pub const DEMUX: &str = "\
# quaternary 1-to-4 demultiplexer: L[i] = D when S = i, else 0
circuit demux
input S
input D
const C0 = 0
const C1 = 1
const C2 = 2
const C3 = 3
gate e0 = EQ(S, C0)
gate e1 = EQ(S, C1)
gate e2 = EQ(S, C2)
gate e3 = EQ(S, C3)
gate l0 = AND(D, e0)
gate l1 = AND(D, e1)
gate l2 = AND(D, e2)
gate l3 = AND(D, e3)
output L0 = l0
output L1 = l1
output L2 = l2
output L3 = l3
";

pub const MUX4: &str = "\
# quaternary 4x1 multiplexer built on a 1-to-4 decoder: F = D[S]
circuit mux4
input S
input D0
input D1
input D2
input D3
const C0 = 0
const C1 = 1
const C2 = 2
const C3 = 3
gate e0 = EQ(S, C0)
gate e1 = EQ(S, C1)
gate e2 = EQ(S, C2)
gate e3 = EQ(S, C3)
gate a0 = AND(D0, e0)
gate a1 = AND(D1, e1)
gate a2 = AND(D2, e2)
gate a3 = AND(D3, e3)
gate o01 = OR(a0, a1)
gate o23 = OR(a2, a3)
gate f = OR(o01, o23)
output F = f
";

pub const NAMES: [&str; 3] = ["decoder", "demux", "mux4"];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "decoder" => Some(DECODER),
        "demux" => Some(DEMUX),
        "mux4" => Some(MUX4),
        _ => None,
    }
}

pub fn example(name: &str) -> Option<QNetlist> {
    source(name).map(|s| parse_netlist(s).expect("built-in examples parse"))
}
