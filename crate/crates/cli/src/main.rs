use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Stdio};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mvl_core::algebra::{catalog, run_law_suite, run_laws, Prover};
use mvl_core::builtin;
use mvl_core::exec::Strategy;
use mvl_core::gate::{GateKind, Logic};
use mvl_core::lower::{lower_gate, lower_netlist, pack_truth_table};
use mvl_core::netlist::{parse_netlist, serialize_netlist, Netlist};
use mvl_core::render::{render, RenderOptions};
use mvl_core::sim::{simulate, truth_table, TableOptions, TruthTable, MAX_B_INPUTS, MAX_Q_INPUTS};
use mvl_core::verify::{check_equivalence_with, check_gate_templates, fuzz_campaign, EquivOptions, EquivalenceReport};
use mvl_core::{BGateKind, QGateKind};

/// Header written on binary netlists so they are recognised on stdin.
const BINARY_MARKER: &str = "# binary netlist";

#[derive(Parser, Debug)]
#[command(name = "mvl", version, about = "Quaternary logic circuits: simulate, lower to binary, verify")]
struct Cli {
    /// Run exhaustive loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct Input {
    /// Netlist file (`.mvl` quaternary, `.bvl` binary); `-` or omitted reads stdin.
    file: Option<PathBuf>,
    /// Treat the netlist as binary regardless of extension.
    #[arg(long)]
    binary: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and validate a netlist.
    Check(Input),
    /// Evaluate a netlist on one assignment.
    Sim {
        #[command(flatten)]
        input: Input,
        /// Input value, repeatable.
        #[arg(long = "set", value_name = "NAME=V")]
        set: Vec<String>,
    },
    /// Print or export the exhaustive truth table.
    Tt {
        #[command(flatten)]
        input: Input,
        /// Write CSV to PATH (`-` for stdout) instead of the aligned table.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Replace every quaternary gate by its binary template.
    Lower {
        file: Option<PathBuf>,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Check a netlist against its lowering, or every gate template with --gates.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        gates: bool,
        /// Emit `circuit,status,witness` CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Run the algebra law suite.
    Laws {
        /// Emit `law,locus,status` CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Pack a quaternary CSV truth table into its binary form.
    PackTt {
        input: PathBuf,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Emit a DOT schematic.
    Render {
        #[command(flatten)]
        input: Input,
        /// Pipe through Graphviz `dot` and emit SVG.
        #[arg(long)]
        svg: bool,
        /// Group nodes into labelled slot clusters.
        #[arg(long)]
        slots: bool,
        /// Annotate wires with values under this assignment, repeatable.
        #[arg(long = "set", value_name = "NAME=V")]
        set: Vec<String>,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Write a built-in example netlist.
    Example {
        /// One of decoder, demux, mux4.
        name: String,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Random lowering-equivalence campaign.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 16)]
        max_gates: usize,
        #[arg(long)]
        csv: bool,
    },
}

/// Bad invocation rather than a failed check; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn is_stdin(p: &Option<PathBuf>) -> bool {
    p.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn read_source(file: &Option<PathBuf>) -> Result<String> {
    match file {
        Some(p) if !is_stdin(file) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn write_dest(dest: &Option<PathBuf>, text: &str) -> Result<()> {
    match dest {
        Some(p) if !is_stdin(dest) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

enum Loaded {
    Q(Netlist<QGateKind>),
    B(Netlist<BGateKind>),
}

fn looks_binary(input: &Input, text: &str) -> bool {
    if input.binary {
        return true;
    }
    match input.file.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("bvl") => return true,
        Some("mvl") => return false,
        _ => {}
    }
    text.lines().any(|l| {
        let l = l.trim();
        l == BINARY_MARKER || (l.starts_with("gate ") && ["AND2(", "OR2(", "XOR2(", "XNOR2("].iter().any(|k| l.contains(k)))
    })
}

fn load(input: &Input) -> Result<Loaded> {
    let text = read_source(&input.file)?;
    let what = input.file.as_ref().map_or("<stdin>".to_string(), |p| p.display().to_string());
    if looks_binary(input, &text) {
        Ok(Loaded::B(parse_netlist(&text).with_context(|| what)?))
    } else {
        Ok(Loaded::Q(parse_netlist(&text).with_context(|| what)?))
    }
}

fn load_q(file: &Option<PathBuf>) -> Result<Netlist<QGateKind>> {
    match load(&Input { file: file.clone(), binary: false })? {
        Loaded::Q(n) => Ok(n),
        Loaded::B(_) => Err(usage("this command needs a quaternary netlist")),
    }
}

fn parse_assignment<V: Logic>(pairs: &[String]) -> Result<HashMap<String, V>> {
    pairs
        .iter()
        .map(|p| {
            let (name, v) = p.split_once('=').ok_or_else(|| usage(format!("expected NAME=V, got {p:?}")))?;
            let d: u64 = v.trim().parse().map_err(|_| usage(format!("{name}: not a number: {v:?}")))?;
            let value = V::from_digit(d).map_err(|e| usage(format!("{name}: {e}")))?;
            Ok((name.trim().to_string(), value))
        })
        .collect()
}

fn describe<K: GateKind>(n: &Netlist<K>) -> String {
    format!(
        "{}: ok, {} inputs, {} constants, {} gates, {} outputs, depth {}",
        n.name,
        n.inputs.len(),
        n.constants.len(),
        n.gates.len(),
        n.outputs.len(),
        n.depth()
    )
}

fn sim_generic<K: GateKind>(n: &Netlist<K>, set: &[String]) -> Result<()> {
    let env = parse_assignment::<K::Value>(set)?;
    let out = simulate(n, &env).map_err(|e| usage(e.to_string()))?;
    for (name, v) in out {
        println!("{name} = {}", v.digit());
    }
    Ok(())
}

fn tt_generic<K: GateKind>(n: &Netlist<K>, strategy: Strategy, csv: &Option<PathBuf>) -> Result<()> {
    let cap = if K::Value::RADIX == 2 { MAX_B_INPUTS } else { MAX_Q_INPUTS };
    let t: TruthTable = truth_table(n, TableOptions { max_inputs: cap, strategy })?;
    match csv {
        Some(_) => write_dest(csv, &t.to_csv()),
        None => write_dest(&None, &t.to_string()),
    }
}

fn render_generic<K: GateKind>(n: &Netlist<K>, slots: bool, set: &[String]) -> Result<String> {
    let values = if set.is_empty() { None } else { Some(parse_assignment::<K::Value>(set)?) };
    if let Some(v) = &values {
        if let Some(missing) = n.inputs.iter().find(|i| !v.contains_key(*i)) {
            return Err(usage(format!("no value given for input `{missing}`")));
        }
    }
    Ok(render(n, &RenderOptions { show_slots: slots, values }))
}

fn to_svg(dot: &str) -> Result<String> {
    let mut child = Command::new("dot")
        .arg("-Tsvg")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .context("running Graphviz `dot` (is it installed?)")?;
    child.stdin.take().expect("piped stdin").write_all(dot.as_bytes())?;
    let out = child.wait_with_output()?;
    if !out.status.success() {
        bail!("dot exited with {}", out.status);
    }
    Ok(String::from_utf8(out.stdout)?)
}

fn print_reports(reports: &[EquivalenceReport], csv: bool) {
    if csv {
        println!("{}", EquivalenceReport::csv_header());
        for r in reports {
            println!("{}", r.csv_row());
        }
    } else {
        for r in reports {
            println!("{r}");
        }
    }
}

/// Ok(true) on success, Ok(false) on a failed check.
fn run(cli: Cli) -> Result<bool> {
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::default() };
    match cli.command {
        Cmd::Check(input) => {
            match load(&input) {
                Ok(Loaded::Q(n)) => println!("{}", describe(&n)),
                Ok(Loaded::B(n)) => println!("{}", describe(&n)),
                Err(e) if e.is::<UsageError>() => return Err(e),
                Err(e) => {
                    eprintln!("{e:#}");
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Cmd::Sim { input, set } => {
            match load(&input)? {
                Loaded::Q(n) => sim_generic(&n, &set)?,
                Loaded::B(n) => sim_generic(&n, &set)?,
            }
            Ok(true)
        }
        Cmd::Tt { input, csv } => {
            match load(&input)? {
                Loaded::Q(n) => tt_generic(&n, strategy, &csv)?,
                Loaded::B(n) => tt_generic(&n, strategy, &csv)?,
            }
            Ok(true)
        }
        Cmd::Lower { file, output } => {
            let b = lower_netlist(&load_q(&file)?)?;
            write_dest(&output, &format!("{BINARY_MARKER}\n{}", serialize_netlist(&b)))?;
            Ok(true)
        }
        Cmd::Verify { file, gates, csv } => {
            if gates {
                let checks = check_gate_templates();
                for c in &checks {
                    println!("{c}");
                }
                return Ok(checks.iter().all(|c| c.passed()));
            }
            let n = load_q(&file)?;
            let r = check_equivalence_with(&n, EquivOptions { strategy, ..EquivOptions::default() }, lower_gate)?;
            print_reports(std::slice::from_ref(&r), csv);
            Ok(r.is_equivalent())
        }
        Cmd::Laws { csv } => {
            let report = if cli.sequential {
                run_laws(&Prover { strategy, ..Prover::default() }, &catalog())?
            } else {
                run_law_suite()
            };
            if csv {
                print!("{}", report.to_csv());
            } else {
                println!("{report}");
            }
            Ok(report.all_as_expected())
        }
        Cmd::PackTt { input, output } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let t = TruthTable::from_csv(&text, 4).with_context(|| input.display().to_string())?;
            write_dest(&output, &pack_truth_table(&t)?.to_csv())?;
            Ok(true)
        }
        Cmd::Render { input, svg, slots, set, output } => {
            let dot = match load(&input)? {
                Loaded::Q(n) => render_generic(&n, slots, &set)?,
                Loaded::B(n) => render_generic(&n, slots, &set)?,
            };
            let text = if svg { to_svg(&dot)? } else { dot };
            write_dest(&output, &text)?;
            Ok(true)
        }
        Cmd::Example { name, output } => {
            let src = builtin::source(&name)
                .ok_or_else(|| usage(format!("unknown example {name:?}; try one of {}", builtin::NAMES.join(", "))))?;
            write_dest(&output, src)?;
            Ok(true)
        }
        Cmd::Fuzz { seeds, start, max_gates, csv } => {
            if !(1..=32).contains(&max_gates) {
                return Err(usage("--max-gates must be in 1..=32"));
            }
            let reports = fuzz_campaign(start..start + seeds, max_gates, strategy)?;
            let bad: Vec<EquivalenceReport> = reports.iter().filter(|r| !r.is_equivalent()).cloned().collect();
            if csv {
                print_reports(&reports, true);
            } else {
                print_reports(&bad, false);
                println!("{} circuits checked, {} mismatches", reports.len(), bad.len());
            }
            Ok(bad.is_empty())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
