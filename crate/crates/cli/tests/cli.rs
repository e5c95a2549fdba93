use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn charcom(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charcom"))
        .current_dir(dir)
        .env_remove("CHARCOM_ORDER_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

fn write_x_circuit(dir: &Path) -> String {
    let path = dir.join("x.jsonl");
    std::fs::write(&path, "{\"n\":1,\"family_tag\":\"custom\"}\n{\"name\":\"X\",\"targets\":[0]}\n").unwrap();
    path.display().to_string()
}

#[test]
fn group_info_reports_structure() {
    let d = TempDir::new().unwrap();
    let o = charcom(d.path(), &["group-info", "--group", "pauli1", "--out-dir", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "order 16\nclasses 10\nabelian false\n");
    assert_eq!(json(&d.path().join("out"), "group.json")["order"], 16);

    let o = charcom(d.path(), &["group-info", "--group", "z2", "--out-dir", "out"]);
    assert!(stdout(&o).contains("order 2\n") && stdout(&o).contains("abelian true"));
    let o = charcom(d.path(), &["group-info", "--group", "clifford1", "--out-dir", "out"]);
    assert!(stdout(&o).starts_with("order 192\n"));
}

#[test]
fn char_table_outputs() {
    let d = TempDir::new().unwrap();
    let o = charcom(d.path(), &["char-table", "--group", "s3", "--out-dir", "."]);
    assert!(o.status.success());
    let rep = json(d.path(), "orthogonality.json");
    assert!(rep["max_row_residual"].as_f64().unwrap() < 1e-10);
    assert!(rep["max_col_residual"].as_f64().unwrap() < 1e-10);

    let o = charcom(d.path(), &["char-table", "--group", "z2", "--out-dir", "."]);
    assert!(o.status.success());
    assert_eq!(read(d.path(), "char_table.csv"), "class_rep,class_size,chi_1,chi_2\n0,1,1+0j,1+0j\n1,1,1+0j,-1+0j\n");
    assert_eq!(json(d.path(), "orthogonality.json")["max_row_residual"], 0.0);
}

#[test]
fn unclosable_group_exits_with_one() {
    let d = TempDir::new().unwrap();
    let o = charcom(d.path(), &["char-table", "--group", "clifford1", "--order-cap", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("char-table: close_group"), "{}", stderr(&o));
    let gens = d.path().join("ht.json");
    let t = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &gens,
        format!(
            "{{\"generators\": [[[[{t},0],[{t},0]],[[{t},0],[-{t},0]]], [[[1,0],[0,0]],[[0,0],[{t},{t}]]]]}}"
        ),
    )
    .unwrap();
    let o = charcom(d.path(), &["group-info", "--group", gens.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("order cap 20000"));
}

#[test]
fn env_var_sets_the_cap_and_flags_override_it() {
    let d = TempDir::new().unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_charcom"))
            .current_dir(d.path())
            .env("CHARCOM_ORDER_CAP", "100")
            .args(args)
            .output()
            .unwrap()
    };
    assert_eq!(run(&["group-info", "--group", "clifford1"]).status.code(), Some(1));
    assert!(run(&["group-info", "--group", "clifford1", "--order-cap", "200"]).status.success());
}

#[test]
fn complexity_values() {
    let d = TempDir::new().unwrap();
    let o = charcom(d.path(), &["complexity", "--group", "pauli1", "--class", "0"]);
    assert!(o.status.success());
    assert!((json(d.path(), "complexity.json")["complexity"].as_f64().unwrap() - 0.75).abs() < 1e-12);

    for cls in 0..8 {
        let o = charcom(d.path(), &["complexity", "--group", "z8", "--class", &cls.to_string()]);
        assert!(o.status.success());
        assert!((json(d.path(), "complexity.json")["complexity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    charcom(d.path(), &["complexity", "--group", "s3", "--class", "1"]);
    let v = json(d.path(), "complexity.json");
    assert!((v["complexity"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);

    let circuit = write_x_circuit(d.path());
    let o = charcom(d.path(), &["complexity", "--group", "pauli1", "--circuit", &circuit]);
    assert!(o.status.success());
    assert!((json(d.path(), "complexity.json")["complexity"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let o = charcom(d.path(), &["complexity", "--group", "s3", "--class", "9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_full_empty_and_golden() {
    let d = TempDir::new().unwrap();
    let circuit = write_x_circuit(d.path());
    let o = charcom(
        d.path(),
        &["simulate", "--group", "pauli2", "--circuit", &circuit, "--threshold", "0"],
    );
    // a one-qubit circuit is not an element of a two-qubit group
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("dimension mismatch"));

    let h = d.path().join("h.jsonl");
    std::fs::write(&h, "{\"n\":1,\"family_tag\":\"custom\"}\n{\"name\":\"H\",\"targets\":[0]}\n{\"name\":\"S\",\"targets\":[0]}\n").unwrap();
    let o = charcom(
        d.path(),
        &["simulate", "--group", "clifford1", "--circuit", h.to_str().unwrap(), "--threshold", "0", "--state", "random", "--seed", "3"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(json(d.path(), "decomposition.json")["l2_error"].as_f64().unwrap() < 1e-8);
    for line in read(d.path(), "measurement.csv").lines().skip(1) {
        let err: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < 1e-8);
    }

    let o = charcom(
        d.path(),
        &["simulate", "--group", "clifford1", "--circuit", h.to_str().unwrap(), "--threshold", "5", "--state", "random"],
    );
    assert!(o.status.success());
    assert!((json(d.path(), "decomposition.json")["l2_error"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let o = charcom(
        d.path(),
        &["simulate", "--group", "pauli1", "--circuit", &circuit, "--thresholds", "1e-6,0.01,0.3,0.6"],
    );
    assert!(o.status.success());
    assert_eq!(
        read(d.path(), "truncation.csv"),
        "threshold,set_size,l2_error\n1e-06,8,1\n0.01,8,1\n0.0625,8,1\n0.3,8,1\n0.6,8,1\n"
    );
    let o = charcom(
        d.path(),
        &["simulate", "--group", "pauli1", "--circuit", &circuit, "--mode", "verbatim-eq3"],
    );
    assert!(stdout(&o).contains("decomposition_residual 1.41421356237\n"));
}

#[test]
fn simulate_without_group_uses_the_circuit_group() {
    let d = TempDir::new().unwrap();
    let circuit = write_x_circuit(d.path());
    let o = charcom(d.path(), &["simulate", "--circuit", &circuit, "--threshold", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("group_order 2\n"));
}

#[test]
fn element_outside_group_is_a_domain_error() {
    let d = TempDir::new().unwrap();
    let h = d.path().join("h.jsonl");
    std::fs::write(&h, "{\"n\":1,\"family_tag\":\"custom\"}\n{\"name\":\"H\",\"targets\":[0]}\n").unwrap();
    let o = charcom(d.path(), &["complexity", "--group", "pauli1", "--circuit", h.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn experiments_are_deterministic() {
    let d = TempDir::new().unwrap();
    for kind in ["hist", "heatmap", "scaling", "cloud"] {
        for out in ["a", "b"] {
            let o = charcom(
                d.path(),
                &["experiment", kind, "--seed", "42", "--samples", "10", "--out-dir", out],
            );
            assert!(o.status.success(), "{kind}: {}", stderr(&o));
        }
        for ext in ["csv", "json", "svg"] {
            let name = format!("{kind}.{ext}");
            assert_eq!(read(&d.path().join("a"), &name), read(&d.path().join("b"), &name), "{name}");
        }
    }
}

#[test]
fn zero_samples_give_valid_empty_outputs() {
    let d = TempDir::new().unwrap();
    let o = charcom(d.path(), &["experiment", "hist", "--samples", "0", "--bins", "5"]);
    assert!(o.status.success());
    assert_eq!(
        read(d.path(), "hist.csv"),
        "bin_lo,bin_hi,count\n0,0.2,0\n0.2,0.4,0\n0.4,0.6,0\n0.6,0.8,0\n0.8,1,0\n"
    );
    assert!(read(d.path(), "hist.svg").ends_with("</svg>\n"));
    let o = charcom(d.path(), &["experiment", "cloud", "--samples", "0"]);
    assert!(o.status.success());
    assert_eq!(read(d.path(), "cloud.csv"), "x,y,z,radius,complexity\n");
}

#[test]
fn golden_pauli1_histogram() {
    let d = TempDir::new().unwrap();
    let o = charcom(
        d.path(),
        &[
            "experiment", "hist", "--family", "random", "--gate-set", "X,Y,Z", "--qubits", "1", "--gates", "10",
            "--samples", "200", "--bins", "30", "--seed", "42",
        ],
    );
    assert!(o.status.success());
    assert_eq!(read(d.path(), "hist.csv"), include_str!("../../core/tests/golden/pauli1_hist_seed42.csv"));
    assert_eq!(read(d.path(), "hist.svg"), include_str!("../../core/tests/golden/pauli1_hist_seed42.svg"));
}

#[test]
fn config_file_and_flag_precedence() {
    let d = TempDir::new().unwrap();
    std::fs::write(
        d.path().join("run.toml"),
        "group = \"pauli1\"\nout_dir = \"from_file\"\ngate_counts = [0, 3]\nqubit_values = \"1\"\nsamples = 2\n",
    )
    .unwrap();
    let o = charcom(d.path(), &["group-info", "--config", "run.toml"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(d.path().join("from_file/group.json").exists());
    let o = charcom(d.path(), &["group-info", "--config", "run.toml", "--group", "z2", "--out-dir", "flag"]);
    assert!(o.status.success());
    assert_eq!(json(&d.path().join("flag"), "group.json")["order"], 2);

    let o = charcom(d.path(), &["experiment", "heatmap", "--config", "run.toml"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read(&d.path().join("from_file"), "heatmap.csv").lines().count(), 3);
}

#[test]
fn config_errors_exit_with_two() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("bad.toml"), "group = \"z2\"\ncolour = \"red\"\n").unwrap();
    let o = charcom(d.path(), &["group-info", "--config", "bad.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));

    let o = charcom(d.path(), &["group-info", "--config", "missing.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let o = charcom(d.path(), &["simulate", "--group", "pauli1", "--circuit", "missing.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
    let o = charcom(d.path(), &["simulate", "--group", "pauli1", "--circuit", "x", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(2));
    let o = charcom(d.path(), &["experiment", "hist", "--bins", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn writes_only_inside_out_dir() {
    let d = TempDir::new().unwrap();
    let cwd = d.path().join("cwd");
    std::fs::create_dir(&cwd).unwrap();
    let out = d.path().join("out");
    let out_s = out.to_str().unwrap();
    for args in [
        vec!["group-info", "--group", "s3"],
        vec!["char-table", "--group", "s3"],
        vec!["complexity", "--group", "s3"],
        vec!["experiment", "scaling", "--samples", "3"],
    ] {
        let mut args = args.clone();
        args.extend(["--out-dir", out_s]);
        assert!(charcom(&cwd, &args).status.success());
    }
    assert_eq!(std::fs::read_dir(&cwd).unwrap().count(), 0);
    assert!(std::fs::read_dir(&out).unwrap().count() >= 6);
}
