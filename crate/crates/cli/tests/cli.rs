use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn mvl(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mvl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn example(name: &str) -> String {
    let o = mvl(&["example", name], None);
    assert!(o.status.success());
    stdout(&o)
}

#[test]
fn example_pipe_tt_gives_decoder_table() {
    let o = mvl(&["tt", "--csv", "-"], Some(&example("decoder")));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "S,L0,L1,L2,L3\n0,3,0,0,0\n1,0,3,0,0\n2,0,0,3,0\n3,0,0,0,3\n");
}

#[test]
fn example_pipe_lower_pipe_tt_gives_one_hot_pairs() {
    let lowered = stdout(&mvl(&["lower"], Some(&example("decoder"))));
    let o = mvl(&["tt", "--csv", "-"], Some(&lowered));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "S.1,S.0,L0.1,L0.0,L1.1,L1.0,L2.1,L2.0,L3.1,L3.0\n\
         0,0,1,1,0,0,0,0,0,0\n\
         0,1,0,0,1,1,0,0,0,0\n\
         1,0,0,0,0,0,1,1,0,0\n\
         1,1,0,0,0,0,0,0,1,1\n"
    );
}

#[test]
fn files_and_extensions() {
    let dir = tempfile::tempdir().unwrap();
    let mvl_path = dir.path().join("mux4.mvl");
    let bvl_path = dir.path().join("mux4.bvl");
    let p = |x: &Path| x.to_str().unwrap().to_string();
    assert!(mvl(&["example", "mux4", "-o", &p(&mvl_path)], None).status.success());
    assert!(mvl(&["lower", &p(&mvl_path), "-o", &p(&bvl_path)], None).status.success());
    let o = mvl(&["check", &p(&bvl_path)], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("10 inputs"));
    let o = mvl(&["sim", &p(&mvl_path), "--set", "S=2", "--set", "D0=1", "--set", "D1=1", "--set", "D2=3", "--set", "D3=0"], None);
    assert_eq!(stdout(&o), "F = 3\n");
    let o = mvl(&["sim", &p(&bvl_path), "--set", "S.1=1", "--set", "S.0=0", "--set", "D2.1=1", "--set", "D2.0=1",
        "--set", "D0.1=0", "--set", "D0.0=0", "--set", "D1.1=0", "--set", "D1.0=0", "--set", "D3.1=0", "--set", "D3.0=0"], None);
    assert_eq!(stdout(&o), "F.1 = 1\nF.0 = 1\n");
    let first = fs::read_to_string(&bvl_path).unwrap();
    assert!(mvl(&["lower", &p(&mvl_path), "-o", &p(&bvl_path)], None).status.success());
    assert_eq!(fs::read_to_string(&bvl_path).unwrap(), first);
}

#[test]
fn sim_out_of_range_is_a_usage_error() {
    let o = mvl(&["sim", "--set", "S=5"], Some(&example("decoder")));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("out of range"));
}

#[test]
fn verify_examples_exit_zero() {
    for (name, count) in [("decoder", 4), ("demux", 16), ("mux4", 1024)] {
        let o = mvl(&["verify", "--csv"], Some(&example(name)));
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(stdout(&o), format!("circuit,status,witness\n{name},equivalent,\n"));
        let o = mvl(&["--sequential", "verify"], Some(&example(name)));
        assert!(stdout(&o).contains(&format!("equivalent over {count} assignments")));
    }
    let o = mvl(&["verify", "--gates"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("pass").count(), 10);
}

#[test]
fn verify_rejects_binary_input() {
    let lowered = stdout(&mvl(&["lower"], Some(&example("decoder"))));
    assert_eq!(mvl(&["verify"], Some(&lowered)).status.code(), Some(2));
}

#[test]
fn laws_report() {
    let o = mvl(&["laws", "--csv"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("law,locus,status\n"));
    assert!(text.contains("theorem/interchange,fails-as-expected"));
    assert!(!text.contains("violated"));
    let o = mvl(&["--sequential", "laws"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("counterexample"));
}

#[test]
fn pack_tt_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.csv");
    let b = dir.path().join("b.csv");
    fs::write(&q, "A,B,Y\n0,0,1\n0,1,1\n0,2,1\n0,3,1\n1,0,2\n1,1,2\n1,2,2\n1,3,2\n2,0,3\n2,1,3\n2,2,3\n2,3,3\n3,0,0\n3,1,0\n3,2,0\n3,3,0\n").unwrap();
    let o = mvl(&["pack-tt", q.to_str().unwrap(), "-o", b.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let packed = fs::read_to_string(&b).unwrap();
    assert!(packed.starts_with("A.1,A.0,B.1,B.0,Y.1,Y.0\n0,0,0,0,0,1\n"));
    assert_eq!(packed.lines().count(), 17);
}

#[test]
fn render_decoder() {
    let o = mvl(&["render"], Some(&example("decoder")));
    let dot = stdout(&o);
    assert_eq!(dot.matches(" -> ").count(), 12);
    assert_eq!(dot.matches("shape=box").count(), 4);
    let o = mvl(&["render", "--slots", "--set", "S=2"], Some(&example("decoder")));
    let dot = stdout(&o);
    assert!(dot.contains("\"gate:e2\" -> \"out:L2\" [label=\"3\"];"));
    assert!(dot.contains("\"gate:e0\" -> \"out:L0\" [label=\"0\"];"));
    assert_eq!(mvl(&["render", "--set", "D=1"], Some(&example("demux"))).status.code(), Some(2));
}

#[test]
fn render_svg_needs_graphviz() {
    let has_dot = Command::new("dot").arg("-V").stderr(Stdio::null()).status().is_ok_and(|s| s.success());
    let o = mvl(&["render", "--svg"], Some(&example("decoder")));
    if has_dot {
        assert!(stdout(&o).contains("<svg"));
    } else {
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).contains("dot"));
    }
}

#[test]
fn check_reports_line_numbers() {
    let o = mvl(&["check"], Some("input A\nconst K = 4\ngate g = AND(A, K)\noutput Y = g\n"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let o = mvl(&["check"], Some("input A\ngate g = FROB(A)\n"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn fuzz_campaign_is_clean_and_deterministic() {
    let a = mvl(&["fuzz", "--seeds", "150", "--csv"], None);
    let b = mvl(&["--sequential", "fuzz", "--seeds", "150", "--csv"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 151);
}

#[test]
fn usage_errors() {
    assert_eq!(mvl(&["example", "adder"], None).status.code(), Some(2));
    assert_eq!(mvl(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(mvl(&["sim", "--set", "S"], Some(&example("decoder"))).status.code(), Some(2));
}
