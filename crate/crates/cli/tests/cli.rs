use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn gen_writes_a_readable_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("petersen.json");
    let p = path.to_str().unwrap();
    let out = bin(&["gen", "kneser-usual", "n=5", "k=2", "r=2", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["vertices"], 10);
    assert_eq!(report["edges"], 15);
    let back = kneser_lab::Hypergraph::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back.num_edges(), 15);

    let out = bin(&["chromatic", p]);
    assert_eq!(json(&out)["chi"], 3);
}

#[test]
fn gen_counts() {
    assert_eq!(json(&bin(&["gen", "stable", "n=5", "k=2"]))["edges"], 5);
    assert_eq!(json(&bin(&["gen", "complete-ksubsets:n=4,k=2"]))["edges"], 6);
}

#[test]
fn bound_examples() {
    let r = json(&bin(&["bound", "complete-ksubsets:n=5,k=2", "--r", "2"]));
    assert_eq!((r["chi"].clone(), r["cd_bound"].clone(), r["alt_bound"].clone()), (3.into(), 3.into(), 3.into()));
    assert_eq!(r["ok"], true);

    let r = json(&bin(&["bound", "kneser-usual:n=6,k=2,r=3"]));
    assert_eq!((r["chi"].clone(), r["cd_bound"].clone(), r["alt_bound"].clone()), (2.into(), 2.into(), 2.into()));

    let r = json(&bin(&["bound", "edgeless:n=4", "--r", "2"]));
    assert_eq!(r["chi"], 0);
    assert_eq!((r["cd_bound"].clone(), r["alt_bound"].clone()), (0.into(), 0.into()));
}

#[test]
fn csv_output() {
    let out = bin(&["--csv", "defect", "complete-ksubsets:n=5,k=2", "--r", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,r,cd,usual_defect");
    assert_eq!(lines[1], "\"complete-ksubsets:k=2,n=5\",2,3,3");
}

#[test]
fn product_examples() {
    let r = json(&bin(&["product", "complete-ksubsets:n=4,k=2", "complete-ksubsets:n=4,k=2", "--r", "2"]));
    assert_eq!(r["chi"], 2);
    assert_eq!(r["ok"], true);
    let r = json(&bin(&["product", "kneser-usual:n=5,k=2,r=2", "kneser-usual:n=6,k=2,r=2"]));
    assert_eq!(r["chi"], 3);
    assert_eq!(r["expected_from_formula"], 3);
}

#[test]
fn verify_reduction_examples() {
    for spec in ["complete-ksubsets:n=4,k=2", "complete-ksubsets:n=5,k=2", "edgeless:n=3"] {
        let out = bin(&["verify-reduction", spec, "--r", "2", "--s", "2", "-C", "1"]);
        assert_eq!(out.status.code(), Some(0), "{spec}");
        assert_eq!(json(&out)["holds"], true);
    }
}

#[test]
fn alt_modes() {
    let r = json(&bin(&["alt", "complete-ksubsets:n=5,k=2", "--r", "2"]));
    assert_eq!(r["alt"], 2);
    let r = json(&bin(&["alt", "complete-ksubsets:n=5,k=2", "--r", "2", "--perm", "5,4,3,2,1"]));
    assert_eq!(r["mode"], "fixed");
    let out = bin(&["alt", "complete-ksubsets:n=5,k=2", "--r", "3", "--strong"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_writes_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = bin(&[
        "certify",
        "--factor",
        "complete-ksubsets:n=4,k=2",
        "--p",
        "2",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["passed"], true);
    assert_eq!(c["report"]["conclusion"]["lhs"], 4);
    assert_eq!(c["report"]["conclusion"]["rhs"], 4);
    assert_eq!(c["report"]["patterns"]["equivariance"], 81);
}

#[test]
fn certify_with_a_coloring_file_and_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    std::fs::write(&file, "[1, 1, 1, 2, 2, 2]").unwrap();
    let f = file.to_str().unwrap();
    let out = bin(&[
        "--seed", "5", "certify", "--factor", "complete-ksubsets:n=4,k=2", "--p", "2",
        "--coloring", "file", "--coloring-file", f, "--mode", "sampled", "--samples", "500",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["report"]["mode"]["kind"], "sampled");
    assert_eq!(r["report"]["mode"]["seed"], 5);

    std::fs::write(&file, "[1, 1, 1, 1, 1, 2]").unwrap();
    let out = bin(&[
        "certify", "--factor", "complete-ksubsets:n=4,k=2", "--p", "2", "--coloring", "file",
        "--coloring-file", f,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not proper"));
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["bound", "nonsense:n=3", "--r", "2"]).status.code(), Some(2));
    assert_eq!(bin(&["certify", "--factor", "complete-ksubsets:n=4,k=2", "--p", "4"]).status.code(), Some(2));
    let out = bin(&["--budget", "10", "chromatic", "kneser-usual:n=9,k=3,r=2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = bin(&["--budget", "100", "certify", "--factor", "complete-ksubsets:n=4,k=2", "--p", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

fn cache_lines(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn cache_hits_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let c = cache.to_str().unwrap();
    let args = ["--cache", c, "bound", "complete-ksubsets:n=5,k=2", "--r", "2"];
    let first = json(&bin(&args));
    let second = json(&bin(&args));
    assert_eq!(first, second);
    let lines = cache_lines(&cache);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["kind"], "result");
    assert_eq!(lines[1]["kind"], "hit");

    let mut recheck = vec!["--recheck"];
    recheck.extend_from_slice(&args);
    assert_eq!(bin(&recheck).status.code(), Some(0));

    // a tampered entry must be caught on recheck
    let mut tampered = lines[0].clone();
    tampered["output"]["report"]["chi"] = 7.into();
    std::fs::write(&cache, serde_json::to_string(&tampered).unwrap() + "\n").unwrap();
    assert_eq!(json(&bin(&args))["chi"], 7);
    let out = bin(&recheck);
    assert_eq!(out.status.code(), Some(1));
}
