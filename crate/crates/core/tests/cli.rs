//! The binary: output determinism, caching and exit codes.

use std::process::Command;

fn m0n() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_m0n"));
    for var in ["M0N_CAP_N", "M0N_CAP_K", "M0N_CACHE_DIR", "M0N_EMIT", "M0N_OUTPUT", "M0N_WORKERS"] {
        c.env_remove(var);
    }
    c
}

#[test]
fn rep_rerun_reads_cache_and_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        let status = m0n()
            .args(["rep", "--cap-n", "8", "--cap-k", "6", "--print", "5", "--emit", "csv"])
            .arg("--cache-dir")
            .arg(dir.path().join("cache"))
            .arg("--output")
            .arg(dir.path().join(out))
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(dir.path().join(out)).unwrap()
    };
    let first = run("a.csv");
    assert!(dir.path().join("cache/rep/manifest.json").exists());
    assert!(dir.path().join("cache/rep/q_8.json").exists());
    let second = run("b.csv");
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    // Q_5 = h_5 + (h_5 + h_(4,1) + h_(3,2))t + … in the printed terms
    assert!(text.contains("q,1,\"(4,1)\",1"), "{text}");
}

#[test]
fn env_overrides_mirror_flags() {
    let out = m0n().args(["inv"]).env("M0N_CAP_N", "7").env("M0N_EMIT", "markdown").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("### invariant Betti numbers, caps (7, 5)"), "{text}");
}

#[test]
fn conjecture_failures_exit_zero() {
    let out = m0n().args(["conj", "ultra", "--cap-n", "20"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reports"][0]["verdict"], "fails");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(m0n().args(["conj", "nonsense"]).output().unwrap().status.code(), Some(1));
    assert_eq!(m0n().args(["oracle", "--cap-n", "13"]).output().unwrap().status.code(), Some(1));
    assert_eq!(m0n().args(["rep", "--cap-n", "4", "--print", "6"]).output().unwrap().status.code(), Some(1));
}

#[test]
fn oracle_and_manin_commands() {
    let out = m0n().args(["oracle", "--cap-n", "7"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mismatches"], 0);
    let out = m0n().args(["manin", "--cap-n", "8"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["routes_agree"], true);
}

#[test]
fn corrupt_cache_is_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["inv", "--cap-n", "10"];
    let first = m0n().args(args).arg("--cache-dir").arg(dir.path()).output().unwrap();
    std::fs::write(dir.path().join("inv/inv_q.json"), "garbage").unwrap();
    let second = m0n().args(args).arg("--cache-dir").arg(dir.path()).output().unwrap();
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("discarding"));
}
