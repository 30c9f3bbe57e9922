use std::path::Path;
use std::process::{Command, Output};

fn symadapt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symadapt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn build_reports_counts() {
    let o = symadapt(&["build", "--fixture", "lih_sto3g", "--mapping", "parity"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"]["hamiltonian"], 118);
    assert_eq!(v["terms"]["number"], 7);
    assert_eq!(v["terms"]["s2"], 40);
    assert_eq!(v["n_qubits"], 6);
}

#[test]
fn build_writes_reproducible_files() {
    let dir = tempfile::tempdir().unwrap();
    let fcidump = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/h2o_631g.fcidump");
    let out = dir.path().join("out");
    let names = ["hamiltonian.json", "number.json", "s2.json", "summary.json"];
    let run = || {
        let o = symadapt(&[
            "build",
            "--fcidump",
            fcidump.to_str().unwrap(),
            "--mapping",
            "bk",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        names.map(|n| std::fs::read(out.join(n)).unwrap())
    };
    assert_eq!(run(), run());
    let a = &out;
    let h: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("hamiltonian.json")).unwrap()).unwrap();
    assert_eq!(h["terms"].as_array().unwrap().len(), 185);
    assert_eq!(h["provenance"]["fixture"], "h2o_631g");
    assert_eq!(h["provenance"]["run"]["mapping"], "bk");
    let back = symadapt::pauli::PauliSum::from_json(&std::fs::read_to_string(a.join("s2.json")).unwrap()).unwrap();
    assert_eq!(back.term_count(), 77);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "fixture = \"lih_sto3g\"\nmapping = \"jw\"\nmethod = \"php\"\n").unwrap();
    let o = symadapt(&["adapt", "--config", cfg.to_str().unwrap(), "--mapping", "parity"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 400);
    assert_eq!(v["provenance"]["method"], "lowdin_php");
    assert_eq!(v["provenance"]["mapping"], "parity");
    assert_eq!(v["provenance"]["run"]["method"], "lowdin_php");
}

#[test]
fn adapt_grid_table() {
    let o = symadapt(&["adapt", "--fixture", "lih_sto3g", "--mapping", "parity", "--format", "table"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row = |name: &str| -> Vec<String> {
        text.lines()
            .find(|l| l.starts_with(name))
            .unwrap()
            .split_whitespace()
            .skip(1)
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(row("neutral"), ["400", "118", "381"]);
    assert_eq!(row("anion"), ["320", "118", "273"]);
    assert_eq!(row("singlet"), ["544", "169", "525*"]);
}

#[test]
fn spectra_table_rows() {
    let o = symadapt(&["spectra", "--fixture", "lih_sto3g", "--mapping", "parity", "--format", "table"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    let first: Vec<&str> = lines[1].split_whitespace().collect();
    assert_eq!(first[..3], ["0", "(2,", "0.0)"]);
    assert_eq!(first[3], "-8.2889385");
    assert!(first[4..].iter().all(|v| v.trim_end_matches('*') == "-8.2889385" && v.ends_with('*')));
    let last: Vec<&str> = lines[64].split_whitespace().collect();
    assert_eq!(last[..4], ["63", "(6,", "0.0)", "-6.1517285"]);
    assert_eq!(last[5], "121.8482715");
}

#[test]
fn spectra_json_levels() {
    let o = symadapt(&["spectra", "--fixture", "lih_sto3g", "--method", "shift", "--mu", "16"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 64);
    assert_eq!(v["reports"][0]["matched"], 15);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.fcidump");
    std::fs::write(&empty, "&FCI NORB=0,NELEC=0,MS2=0 &END\n").unwrap();
    let bad = dir.path().join("bad.fcidump");
    std::fs::write(&bad, "&FCI NORB=1,NELEC=1 &END\n0.5 1 x 0 0\n").unwrap();

    // usage
    assert_eq!(code(&symadapt(&["build", "--fcidump", empty.to_str().unwrap()])), 2);
    assert_eq!(code(&symadapt(&["build", "--mapping", "xyz"])), 2);
    assert_eq!(code(&symadapt(&["build"])), 2);
    // parse
    assert_eq!(code(&symadapt(&["build", "--fcidump", bad.to_str().unwrap()])), 3);
    // capacity and contract
    assert_eq!(code(&symadapt(&["spectra", "--fixture", "lih_sto3g", "--dense-limit", "4"])), 4);
    assert_eq!(
        code(&symadapt(&["adapt", "--fixture", "lih_sto3g", "--method", "reflect-singlet", "--symmetry", "number"])),
        4
    );
    assert_eq!(code(&symadapt(&["adapt", "--fixture", "lih_sto3g", "--method", "php", "--target", "9"])), 4);
}

#[test]
fn verify_passes_small_suite() {
    let o = symadapt(&["verify", "--trials", "5", "--format", "table"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
