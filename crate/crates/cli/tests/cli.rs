use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn freechaos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freechaos"))
        .args(args)
        .env_remove("FREECHAOS_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Rows of the named TSV section, header excluded.
fn tsv_rows(text: &str, section: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines().skip_while(|l| *l != format!("# {section}"));
    lines.next().expect("section present");
    lines.next();
    lines
        .take_while(|l| !l.is_empty())
        .map(|l| l.split('\t').map(String::from).collect())
        .collect()
}

fn json_table<'a>(doc: &'a Value, name: &str) -> &'a Vec<Value> {
    doc["tables"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["name"] == name)
        .unwrap()["rows"]
        .as_array()
        .unwrap()
}

fn kernel_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn counts_row_four() {
    let out = freechaos(&["counts", "--max-m", "4"]);
    assert!(out.status.success());
    let rows = tsv_rows(&stdout(&out), "counts");
    assert_eq!(rows[4], ["4", "14", "3", "1", "2", "0", "0", "ok", "ok"]);
}

#[test]
fn counts_conventions_and_identities() {
    let out = freechaos(&["counts", "--max-m", "0"]);
    assert_eq!(tsv_rows(&stdout(&out), "counts"), vec![vec!["0", "1", "1", "ok", "ok"]]);
    let out = freechaos(&["counts", "--max-m", "12"]);
    assert!(out.status.success());
    assert!(tsv_rows(&stdout(&out), "counts").iter().all(|r| r[r.len() - 2..] == ["ok", "ok"]));
    let out = freechaos(&["counts", "--max-m", "15"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn centered_poisson_at_unit_rate() {
    let out = freechaos(&["moments", "cpoisson", "1", "--max-m", "4", "--mode", "exact"]);
    assert!(out.status.success());
    let rows = tsv_rows(&stdout(&out), "moments");
    assert_eq!(rows[3], ["4", "3"]);
}

#[test]
fn semicircle_sixth_moment() {
    let out = freechaos(&["moments", "semicircle", "1", "--max-m", "6"]);
    let rows = tsv_rows(&stdout(&out), "moments");
    assert_eq!(rows[5][1].parse::<f64>().unwrap(), 5.0);
}

#[test]
fn quadrature_gaps_are_small() {
    let out = freechaos(&["moments", "cpoisson", "1/2", "--max-m", "6", "--method", "both"]);
    assert!(out.status.success());
    for row in tsv_rows(&stdout(&out), "moments") {
        assert!(row[3].parse::<f64>().unwrap() <= 1e-6);
    }
    let out = freechaos(&["moments", "gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn poisson_kernel_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(dir.path(), "p22.txt", "# rate 2\n2 2\n1 1 1 0\n2 2 1 0\n");
    for mode in ["exact", "float"] {
        let out = freechaos(&["chaos", &path, "--m-max", "4", "--oracle", "--mode", mode]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let text = stdout(&out);
        let moments: Vec<f64> = tsv_rows(&text, "moments").iter().map(|r| r[1].parse().unwrap()).collect();
        assert_eq!(moments, [2.0, 2.0, 10.0]);
        let fourth = tsv_rows(&text, "fourth_moment");
        assert_eq!(fourth[1][0], "statistic");
        assert_eq!(fourth[1][1].parse::<f64>().unwrap(), 6.0);
    }
}

#[test]
fn zero_kernel_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(dir.path(), "zero.txt", "4 2\n");
    let out = freechaos(&["chaos", &path, "--m-max", "5", "--report-sequences"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for row in tsv_rows(&text, "moments") {
        assert!(row[1..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    }
    assert!(!tsv_rows(&text, "sequences").is_empty());
}

#[test]
fn kernel_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(dir.path(), "dup.txt", "2 2\n1 1 1 0\n1 1 2 0\n");
    let out = freechaos(&["chaos", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn failed_checks_exit_nonzero_with_a_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(dir.path(), "p22.txt", "2 2\n1 1 1 0\n2 2 1 0\n");
    // No quadrature gap is below 1e-300 at a non-dyadic rate.
    let out = freechaos(&["moments", "cpoisson", "1/3", "--method", "both", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(stderr.lines().all(|l| l.starts_with("FAIL\tquadrature_gap")));
    let out = freechaos(&["chaos", &path, "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_families() {
    let out = freechaos(&["scan", "poisson", "--p", "2", "--d", "3", "--n", "1,2,3", "--m-max", "6"]);
    assert!(out.status.success());
    for row in tsv_rows(&stdout(&out), "scan") {
        assert!(row[3..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0), "{row:?}");
    }
    let out = freechaos(&["scan", "semicircle4", "--lambda", "1", "--n", "4,16,64", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = json_table(&doc, "scan");
    let offband: Vec<f64> = rows.iter().map(|r| r[5].as_f64().unwrap()).collect();
    assert_eq!(offband, [0.25, 0.0625, 0.015625]);
    let stat_gap = rows[2][3].as_f64().unwrap();
    assert!(stat_gap > 0.5 && stat_gap < 1.0);
    let out = freechaos(&["scan", "semicircle4", "--m-max", "2", "--n", "4,16"]);
    for row in tsv_rows(&stdout(&out), "scan") {
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row.last().unwrap().parse::<f64>().unwrap(), 0.0);
    }
    assert_eq!(freechaos(&["scan", "poisson", "--mode", "exact"]).status.code(), Some(2));
}

#[test]
fn json_and_tsv_carry_the_same_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = kernel_file(
        dir.path(),
        "k.txt",
        "2 2\n1 1 0.3 0\n1 2 0.1 0.2\n2 1 0.1 -0.2\n2 2 -0.7 0\n",
    );
    let tsv = stdout(&freechaos(&["chaos", &path, "--m-max", "6", "--oracle"]));
    let json: Value = serde_json::from_str(&stdout(&freechaos(&["chaos", &path, "--m-max", "6", "--oracle", "--format", "json"]))).unwrap();
    for section in ["moments", "fourth_moment", "defect"] {
        let t = tsv_rows(&tsv, section);
        let j = json_table(&json, section);
        assert_eq!(t.len(), j.len());
        for (tr, jr) in t.iter().zip(j) {
            for (tc, jc) in tr.iter().zip(jr.as_array().unwrap()) {
                match jc {
                    Value::Number(n) => assert_eq!(tc.parse::<f64>().unwrap(), n.as_f64().unwrap()),
                    Value::String(s) => assert_eq!(tc, s),
                    other => panic!("unexpected cell {other}"),
                }
            }
        }
    }
}

#[test]
fn oracle_subcommand_and_odd_order() {
    let dir = tempfile::tempdir().unwrap();
    let unit = kernel_file(dir.path(), "e1.txt", "1 2\n1 0.6 0\n2 0.8 0\n");
    let out = freechaos(&["oracle", &unit, "--m-max", "6"]);
    assert!(out.status.success());
    let rows = tsv_rows(&stdout(&out), "oracle");
    let sixth: f64 = rows[5][1].parse().unwrap();
    assert!((sixth - 5.0).abs() < 1e-12);
    assert_eq!(rows[5][2], "-");
    let p = kernel_file(dir.path(), "p.txt", "2 2\n1 1 1 0\n2 2 1 0\n");
    let out = freechaos(&["oracle", &p, "--m-max", "5", "--mode", "exact"]);
    assert!(out.status.success());
    let rows = tsv_rows(&stdout(&out), "oracle");
    assert_eq!(rows[4][1], "22");
    assert_eq!(rows[4][2], "22");
}

#[test]
fn out_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_freechaos"))
        .args(["counts", "--max-m", "3", "--out", "counts.tsv"])
        .env("FREECHAOS_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(dir.path().join("counts.tsv")).unwrap();
    assert!(written.starts_with("# counts\n"));
}

#[test]
fn runs_are_deterministic() {
    let a = freechaos(&["scan", "semicircle4", "--n", "4,16", "--format", "json"]);
    let b = freechaos(&["scan", "semicircle4", "--n", "4,16", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}
