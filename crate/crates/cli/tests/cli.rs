use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn psts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psts")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn counterexample_w4() {
    let dir = tempfile::tempdir().unwrap();
    let out = psts(&["counterexample", "--w", "4", "--out-dir", &p(dir.path(), "cx")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = stdout(&out);
    assert_eq!(value(&r, "decomposition"), Some("proved-no"));
    assert_eq!(value(&r, "conditions_hold"), Some("true"));
    assert_eq!(value(&r, "counterexample"), Some("true"));
    for f in ["psts15.psts", "leave.graph", "report.txt"] {
        assert!(dir.path().join("cx").join(f).exists(), "{f}");
    }
    let v = psts(&["verify", &p(dir.path(), "cx/psts15.psts")]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value(&stdout(&v), "leave_edges"), Some("24"));
}

#[test]
fn embed_empty_seven() {
    let dir = tempfile::tempdir().unwrap();
    let file = p(dir.path(), "empty7.psts");
    fs::write(&file, "psts 7 0\np 0\np 1\np 2\np 3\np 4\np 5\np 6\n").unwrap();
    let out = psts(&["embed", "--psts", &file, "--orders", "7", "--out-dir", &p(dir.path(), "w")]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout(&out);
    assert_eq!(value(&r, "order_7"), Some("proved-yes"));
    let witness = value(&r, "order_7_witness").unwrap();
    let v = psts(&["verify", witness, "--contains", &file]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value(&stdout(&v), "complete"), Some("true"));
}

#[test]
fn decompose_k5_is_no() {
    let dir = tempfile::tempdir().unwrap();
    let file = p(dir.path(), "k5.graph");
    let mut text = String::from("graph 5 10\n");
    (0..5).for_each(|i| text.push_str(&format!("v {i}\n")));
    for i in 0..5 {
        for j in i + 1..5 {
            text.push_str(&format!("e {i} {j}\n"));
        }
    }
    fs::write(&file, text).unwrap();
    let out = psts(&["decompose", &file, "--exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(value(&stdout(&out), "status"), Some("proved-no"));
}

#[test]
fn decompose_with_hole_writes_verifiable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = p(dir.path(), "k9.graph");
    let mut text = String::from("graph 9 33\n");
    (0..9).for_each(|i| text.push_str(&format!("v {i}\n")));
    for i in 0..9 {
        for j in i + 1..9 {
            if !(i < 3 && j < 3) {
                text.push_str(&format!("e {i} {j}\n"));
            }
        }
    }
    fs::write(&file, text).unwrap();
    let out_file = p(dir.path(), "d.psts");
    let out = psts(&["decompose", &file, "--hole", "0..2", "--climb", "--seed", "3", "--out", &out_file]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(value(&stdout(&out), "triples"), Some("11"));
    assert_eq!(psts(&["verify", &out_file]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = p(dir.path(), "bad.psts");
    fs::write(&bad, "psts 3 1\np 1\np 2\np 3\nt 1 1 2\n").unwrap();
    let out = psts(&["verify", &bad]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5") && err.contains("degenerate triple"), "{err}");

    assert_eq!(psts(&["verify", "--no-such-flag", &bad]).status.code(), Some(3));
    assert_eq!(psts(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(psts(&["verify", &p(dir.path(), "missing.psts")]).status.code(), Some(3));
    assert_eq!(psts(&["--help"]).status.code(), Some(0));
}

#[test]
fn chromatic_index_of_petersen() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "petersen.graph");
    assert_eq!(psts(&["generate", "petersen", "--out", &g]).status.code(), Some(0));
    let c = p(dir.path(), "petersen.ecol");
    let out = psts(&["chromatic-index", &g, "--out", &c]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout(&out);
    assert_eq!((value(&r, "chromatic_index"), value(&r, "class")), (Some("4"), Some("2")));
    assert_eq!(psts(&["verify", &c, "--graph", &g]).status.code(), Some(0));
    assert_eq!(psts(&["chromatic-index", &g, "--colors", "3"]).status.code(), Some(1));
}

#[test]
fn small_background_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "prism.graph");
    let c = p(dir.path(), "prism.ecol");
    let out = psts(&["generate", "prism", "--k", "5", "--out", &g, "--hamiltonian-coloring", &c]);
    assert_eq!(out.status.code(), Some(0));
    // Ten vertices is far below the guaranteed range.
    assert_eq!(psts(&["reduce", "--graph", &g, "-u", "43", "-v", "61", "--out", &p(dir.path(), "bg")]).status.code(), Some(3));
    let red = psts(&["reduce", "--graph", &g, "-u", "43", "-v", "61", "--best-effort", "--out", &p(dir.path(), "bg")]);
    assert_eq!(red.status.code(), Some(0), "{}", String::from_utf8_lossy(&red.stderr));
    assert_eq!(value(&stdout(&red), "check_leave_exact"), Some("true # 0 unexpected, 0 missing edges"));
    let bg = p(dir.path(), "bg.psts");
    let sts = p(dir.path(), "sts.psts");
    let cert = psts(&["certify", "--background", &bg, "--coloring", &c, "--out", &sts]);
    assert_eq!(cert.status.code(), Some(0), "{}", String::from_utf8_lossy(&cert.stderr));
    assert_eq!(psts(&["verify", &sts, "--contains", &bg]).status.code(), Some(0));
    let back = p(dir.path(), "back.ecol");
    let ex = psts(&["extract", "--background", &bg, "--embedding", &sts, "--out", &back]);
    assert_eq!(ex.status.code(), Some(0));
    assert_eq!(value(&stdout(&ex), "proper"), Some("true"));
    assert_eq!(psts(&["verify", &back, "--graph", &g]).status.code(), Some(0));
}

#[test]
fn identical_seeds_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "prism.graph");
    let c = p(dir.path(), "prism.ecol");
    psts(&["generate", "prism", "--k", "5", "--out", &g, "--hamiltonian-coloring", &c]);
    let mut runs = Vec::new();
    for k in 0..2 {
        let bg = p(dir.path(), &format!("bg{k}"));
        // Same output names in separate directories keep the reports comparable.
        let sub = dir.path().join(format!("run{k}"));
        fs::create_dir_all(&sub).unwrap();
        let report = p(&sub, "report.txt");
        psts(&["reduce", "--graph", &g, "-u", "43", "-v", "61", "--best-effort", "--seed", "11", "--out", &bg, "--report", &report]);
        runs.push((fs::read(format!("{bg}.psts")).unwrap(), fs::read_to_string(&report).unwrap()));
    }
    assert_eq!(runs[0].0, runs[1].0);
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("background=") && !l.starts_with("meta=")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&runs[0].1), strip(&runs[1].1));
}

#[test]
fn family_and_conjecture_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = psts(&["family", "--w", "6", "--out", &p(dir.path(), "f6")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = stdout(&out);
    assert_eq!(value(&r, "u"), Some("25"));
    assert_eq!(value(&r, "leave_check_holds"), Some("true"));
    let g = p(dir.path(), "f6.graph");
    assert_eq!(psts(&["verify", &p(dir.path(), "f6.ecol"), "--graph", &g]).status.code(), Some(0));

    let cx = tempfile::tempdir().unwrap();
    psts(&["counterexample", "--w", "4", "--out-dir", &p(cx.path(), "")]);
    let leave = p(cx.path(), "leave.graph");
    let chk = psts(&["check-conjecture", "--graph", &leave, "--w", "4"]);
    assert_eq!(chk.status.code(), Some(1));
    assert_eq!(value(&stdout(&chk), "counterexample"), Some("true"));
}

#[test]
fn realize_leave_and_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let cx = p(dir.path(), "cx");
    psts(&["counterexample", "--w", "4", "--out-dir", &cx]);
    let sys = p(dir.path(), "real.psts");
    let out = psts(&["realize-leave", "--graph", &p(dir.path(), "cx/leave.graph"), "--seed", "2", "--out", &sys]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let leave = psts(&["leave", &sys]);
    assert_eq!(stdout(&leave), fs::read_to_string(p(dir.path(), "cx/leave.graph")).unwrap());

    let st = psts(&["selftest"]);
    assert_eq!(st.status.code(), Some(0), "{}", stdout(&st));
    assert_eq!(value(&stdout(&st), "result"), Some("PASS"));
}

#[test]
fn budget_environment_override() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "petersen.graph");
    psts(&["generate", "petersen", "--out", &g]);
    let out = Command::new(env!("CARGO_BIN_EXE_psts"))
        .args(["chromatic-index", &g, "--colors", "3"])
        .env("PSTS_EXACT_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let bad = Command::new(env!("CARGO_BIN_EXE_psts"))
        .args(["chromatic-index", &g])
        .env("PSTS_EXACT_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}
