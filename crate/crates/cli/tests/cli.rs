use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn divform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divform"))
        .args(args)
        .output()
        .expect("failed to launch divform")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

/// The `value` column of an `n,value` CSV table.
fn csv_values(out: &Output) -> Vec<String> {
    let text = stdout(out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,value"));
    lines
        .enumerate()
        .map(|(i, line)| {
            let (n, v) = line.split_once(',').unwrap();
            assert_eq!(n, (i + 1).to_string());
            v.to_string()
        })
        .collect()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("divform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn seq_theorem5_phi_csv() {
    let out = divform(&[
        "seq",
        "theorem5-phi",
        "--j",
        "2",
        "--n-max",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "n,value\n1,1\n2,7\n3,13\n4,35\n");
}

#[test]
fn seq_theorem4() {
    let out = divform(&[
        "seq", "theorem4", "--j", "2", "--k", "0", "--m", "1", "--n-max", "3",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_values(&out), ["1", "3", "4"]);
}

#[test]
fn seq_theorem5_psi_first_value() {
    let out = divform(&["seq", "theorem5-psi", "--j", "3", "--n-max", "1"]);
    assert_eq!(csv_values(&out), ["3"]);
}

#[test]
fn seq_accepts_expressions() {
    let out = divform(&["seq", "lin(2,theorem5phi(2),-1,const(1))", "--n-max", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_values(&out), ["1", "13", "25", "69"]);
    let out = divform(&["seq", "dilate(theorem5phi(2),2)", "--n-max", "3"]);
    assert_eq!(csv_values(&out), ["7", "35", "199"]);
}

#[test]
fn seq_reads_table_files() {
    let path = temp_file("squares.txt", "# squares\n1\n4\n9\n");
    let spec = format!("table({})", path.display());
    let out = divform(&["seq", &spec, "--n-max", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_values(&out), ["1", "4", "9"]);
    let out = divform(&["seq", &spec, "--n-max", "4"]);
    assert_ne!(code(&out), 0);
}

#[test]
fn seq_tsv() {
    let out = divform(&[
        "seq",
        "theorem5-phi",
        "--j",
        "2",
        "--n-max",
        "2",
        "--format",
        "tsv",
    ]);
    assert_eq!(stdout(&out), "n\tvalue\n1\t1\n2\t7\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["seq", "theorem4"][..],
        &["seq", "theorem5-phi", "--j", "1"],
        &["seq", "nonsense(3)"],
        &["seq", "theorem5-phi", "--j", "2", "--n-max", "0"],
        &["frobnicate"],
        &["oracle"],
        &["oracle", "--map-file", "/nonexistent/divform.map"],
        &["crosscheck", "--j", "1"],
    ] {
        let out = divform(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_guaranteed_sequences_pass() {
    let out = divform(&[
        "verify",
        "theorem5-phi",
        "--j",
        "3",
        "--mode",
        "phi1-mod-n",
        "--n-max",
        "48",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,q,phi,modulus,remainder,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 48);
    assert!(rows.iter().all(|r| r.ends_with(",0,true")));

    let out = divform(&[
        "verify",
        "theorem5-psi",
        "--j",
        "2",
        "--mode",
        "phi2-mod-2n",
        "--n-max",
        "48",
    ]);
    assert_eq!(code(&out), 0);
    let out = divform(&[
        "verify",
        "const(7)",
        "--mode",
        "phi1-mod-n",
        "--n-max",
        "30",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_default_mode_follows_guarantees() {
    let out = divform(&[
        "verify",
        "theorem5-psi",
        "--j",
        "2",
        "--n-max",
        "6",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["params"]["mode"], "phi2-mod-2n");
    assert_eq!(v["rows"][4]["modulus"], "10");
    let out = divform(&[
        "verify",
        "theorem5-phi",
        "--j",
        "2",
        "--n-max",
        "6",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["params"]["mode"], "phi1-mod-n");
}

#[test]
fn verify_failures_exit_1() {
    let out = divform(&[
        "verify",
        "const(2)",
        "--mode",
        "phi2-mod-2n",
        "--n-max",
        "4",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("\n1,2,1,2,1,false\n"));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("first at n = 1"), "{stderr}");
}

#[test]
fn verify_counts_evaluation_errors() {
    let path = temp_file("short.txt", "1\n3\n4\n");
    let spec = format!("table({})", path.display());
    let out = divform(&["verify", &spec, "--n-max", "5", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[3]["q"], Value::Null);
    assert_eq!(rows[3]["pass"], false);
    assert_eq!(v["summary"]["failures"], "2");
    assert_eq!(v["summary"]["first_failure"], "4");
    assert_eq!(v["errors"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_gj() {
    let out = divform(&["oracle", "--j", "2", "--equation", "fixed", "--n-max", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_values(&out), ["1", "7", "13"]);
    let out = divform(&[
        "oracle",
        "--j",
        "2",
        "--equation",
        "antifixed",
        "--n-max",
        "2",
    ]);
    assert_eq!(csv_values(&out), ["3", "5"]);
}

#[test]
fn oracle_map_file() {
    let path = temp_file("tent.map", "# full tent\ndomain 0 1\n0 0\n1/2 1\n1 0\n");
    let p = path.to_str().unwrap();
    let out = divform(&[
        "oracle",
        "--map-file",
        p,
        "--equation",
        "fixed",
        "--n-max",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_values(&out), ["2"]);
    let out = divform(&["oracle", "--map-file", p, "--n-max", "4"]);
    assert_eq!(csv_values(&out), ["2", "4", "8", "16"]);
    // The tent map's domain is not symmetric about 0.
    let out = divform(&[
        "oracle",
        "--map-file",
        p,
        "--equation",
        "antifixed",
        "--n-max",
        "1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn oracle_rejects_malformed_maps() {
    let path = temp_file("bad.map", "domain 0 1\n0 0\n1/2 2\n1 0\n");
    let out = divform(&["oracle", "--map-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn oracle_cap_overflow_keeps_completed_rows() {
    let out = divform(&["oracle", "--j", "3", "--n-max", "8", "--piece-cap", "300"]);
    assert_eq!(code(&out), 3);
    assert_eq!(csv_values(&out), ["1", "7", "25", "63", "181"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("n = 6"), "{stderr}");
}

#[test]
fn crosscheck_agrees() {
    for (j, n) in [("3", "6"), ("4", "5")] {
        let out = divform(&["crosscheck", "--j", j, "--n-max", n]);
        assert_eq!(code(&out), 0, "j = {j}");
        let text = stdout(&out);
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("n,phi_recurrence,phi_oracle,phi_symbolic,psi_recurrence,psi_oracle,psi_symbolic,agree")
        );
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len().to_string(), n);
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            assert_eq!(cells[7], "true");
            assert!(cells[1] == cells[2] && cells[2] == cells[3]);
            assert!(cells[4] == cells[5] && cells[5] == cells[6]);
        }
    }
}

#[test]
fn crosscheck_j2_has_no_symbolic_column() {
    let out = divform(&["crosscheck", "--j", "2", "--n-max", "8"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for row in text.lines().skip(1) {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[3], "n/a");
        assert_eq!(cells[6], "n/a");
        assert_eq!(cells[1], cells[2]);
        assert_eq!(cells[4], cells[5]);
    }
}

#[test]
fn crosscheck_cap_overflow_exits_3() {
    let out = divform(&[
        "crosscheck",
        "--j",
        "3",
        "--n-max",
        "6",
        "--piece-cap",
        "200",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains(",error,"));
}

#[test]
fn conjecture_scan() {
    for j in ["2", "3"] {
        let out = divform(&["conjecture", "--j", j, "--n-max", "36"]);
        assert_eq!(code(&out), 0);
        let text = stdout(&out);
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 36);
        assert_eq!(rows[0], "1,3,3,1,0,true");
        assert!(rows.iter().all(|r| r.ends_with(",true")), "j = {j}");
    }
}

#[test]
fn json_integers_are_strings() {
    let out = divform(&[
        "seq",
        "theorem5-phi",
        "--j",
        "2",
        "--n-max",
        "50",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["command"], "seq");
    assert_eq!(v["meta"]["params"]["sequence"], "theorem5phi(2)");
    assert!(v["meta"]["version"].is_string());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 50);
    for row in rows {
        assert!(row["n"].is_string());
        assert!(row["value"].is_string());
    }
    // Past 2^53 the values must not lose precision.
    let last: num_bigint::BigInt = rows[49]["value"].as_str().unwrap().parse().unwrap();
    assert!(last > num_bigint::BigInt::from(1u64 << 53));
}

#[test]
fn csv_and_json_round_trip() {
    let base = [
        "seq",
        "lin(3,theorem5phi(3),-2,theorem4(3,1,7))",
        "--n-max",
        "30",
    ];
    let csv = divform(&[&base[..], &["--format", "csv"]].concat());
    let json = divform(&[&base[..], &["--format", "json"]].concat());
    let mut from_csv: Vec<(String, String)> = stdout(&csv)
        .lines()
        .skip(1)
        .map(|l| {
            let (n, v) = l.split_once(',').unwrap();
            (n.to_string(), v.to_string())
        })
        .collect();
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    let mut from_json: Vec<(String, String)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["n"].as_str().unwrap().to_string(),
                r["value"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    from_csv.sort();
    from_json.sort();
    assert_eq!(from_csv, from_json);
    assert_eq!(from_csv.len(), 30);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &[
            "seq",
            "prod(theorem5phi(2),theorem5psi(3))",
            "--n-max",
            "25",
            "--format",
            "json",
        ][..],
        &["verify", "theorem5-psi", "--j", "3", "--n-max", "30"],
        &["oracle", "--j", "3", "--n-max", "5", "--format", "tsv"],
        &["crosscheck", "--j", "3", "--n-max", "5", "--format", "json"],
    ] {
        let a = divform(args);
        let b = divform(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn no_carriage_returns() {
    let out = divform(&["verify", "theorem5-phi", "--j", "2", "--n-max", "10"]);
    assert!(!out.stdout.contains(&b'\r'));
}
