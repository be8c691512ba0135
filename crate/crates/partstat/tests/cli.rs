use std::process::Command;

fn partstat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_partstat"))
        .args(args)
        .env_remove("PARTSTAT_TABLE_N")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn three_paths_agree() {
    let (code, out, _) = partstat(&["mean", "--stat", "los", "--n", "3", "--method", "all"]);
    assert_eq!(code, 0);
    let lines: Vec<Vec<&str>> = out.lines().map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(
        lines,
        [["closed", "7/5"], ["engine", "7/5"], ["brute", "7/5"], ["verdict", "match"]]
    );
}

#[test]
fn theorem_variant_is_flagged() {
    let (code, out, err) = partstat(&["mean", "--stat", "croc", "--n", "4", "--variant", "theorem"]);
    assert_eq!(code, 2);
    assert!(out.contains("13/15") && out.contains("MISMATCH"), "{out}");
    assert!(err.contains("13/15 vs brute 1/15"), "{err}");
}

#[test]
fn unknown_statistic_prints_catalog() {
    let (code, _, err) = partstat(&["mean", "--stat", "crossings", "--n", "3"]);
    assert_eq!(code, 1);
    for token in ["los", "croc", "semb", "occ:", "klazar:", "blocks"] {
        assert!(err.contains(token), "{err}");
    }
}

#[test]
fn help_and_usage_codes() {
    assert_eq!(partstat(&["--help"]).0, 0);
    assert_eq!(partstat(&["--version"]).0, 0);
    assert_eq!(partstat(&["mean", "--n", "3"]).0, 1);
    assert_eq!(partstat(&["mean", "--stat", "los", "--n", "3", "--k", "4"]).0, 1);
    assert_eq!(partstat(&["--table-n", "10", "table", "--kind", "bell", "--n", "11"]).0, 1);
}

#[test]
fn table_limit_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_partstat"))
        .args(["table", "--kind", "bell", "--n", "6"])
        .env("PARTSTAT_TABLE_N", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_small_ledger() {
    let (code, out, _) = partstat(&["verify", "--max-n", "5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    assert!(out.contains("theorem form 13/15 (mismatch)"));
}

#[test]
fn catalog_lists_both_forms() {
    let (code, out, _) = partstat(&["verify", "--catalog"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    let croc: Vec<&serde_json::Value> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["name"] == "mean_croc")
        .collect();
    assert_eq!(croc.len(), 2);
    assert!(croc.iter().any(|r| r["variant"] == "theorem" && r["canonical"] == false));
}

#[test]
fn json_mean_is_exact() {
    let (code, out, _) = partstat(&["mean", "--stat", "crol", "--n", "5", "--k", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "match");
    assert_eq!(v["brute"]["mean"], v["closed"]["mean"]);
    assert!(v["brute"]["total"].is_string());
}

#[test]
fn sampling_is_reproducible() {
    let args = ["sample", "--n", "12", "--seed", "99", "--trials", "20"];
    let (code, first, _) = partstat(&args);
    assert_eq!(code, 0);
    assert_eq!(first.lines().count(), 20);
    assert_eq!(partstat(&args).1, first);
    let (_, est, _) = partstat(&["sample", "--n", "10", "--stat", "blocks", "--trials", "500", "--seed", "3"]);
    let v: serde_json::Value = serde_json::from_str(&est).unwrap();
    assert_eq!(v["trials"], 500);
}

#[test]
fn enumerate_counts() {
    let (_, out, _) = partstat(&["enumerate", "--n", "5", "--k", "2"]);
    assert_eq!(out.lines().count(), 15);
    let (_, out, _) = partstat(&["enumerate", "--regular", "2", "--count", "3", "--blocks"]);
    assert_eq!(out.lines().count(), 15);
    assert_eq!(out.lines().next(), Some("1 2/3 4/5 6"));
}

#[test]
fn csv_outputs() {
    let (code, out, _) = partstat(&["asymptotics", "--stat", "ov", "--grid", "50,100"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("n,exact,leading,ratio,correction_ratio"));
    assert_eq!(out.lines().count(), 3);
    let (_, out, _) = partstat(&["asymptotics", "--stat", "los", "--grid", "30,60", "--k", "3"]);
    assert_eq!(out.lines().next(), Some("n,k,exact,leading,gap"));
    let (_, out, _) = partstat(&["table", "--kind", "v", "--n", "5", "--stat", "los"]);
    assert_eq!(out.lines().last(), Some("5,32"));
    let (_, out, _) = partstat(&["stat", "--stat", "crol", "--partition", "1 3/2 4"]);
    assert_eq!(out.trim(), "1");
}
