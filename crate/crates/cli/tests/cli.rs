use std::process::Command;

fn permlat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_permlat"))
}

#[test]
fn recognize_paper_example_not_permutation() {
    let out = permlat()
        .args(["recognize", "--fixture", "paper-example"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "NotPermutation");
}

#[test]
fn recognize_regular_emits_certificate() {
    let out = permlat()
        .args(["recognize", "--fixture", "regular-q8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "IsPermutation");
    let mults = v["result"]["certificate"]["multiplicities"].as_array().unwrap();
    assert_eq!(mults.len(), 1);
    assert_eq!(mults[0]["multiplicity"], 1);
    assert_eq!(mults[0]["index"], 8);
}

#[test]
fn roundtrip_fixture_passes() {
    let out = permlat()
        .args(["hnn-roundtrip", "--fixture", "c2-mixed"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["roundtrip"], true);
    assert_eq!(v["kernel_rank"], 5);
}

#[test]
fn malformed_input_exits_one() {
    let dir = std::env::temp_dir().join("permlat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = permlat()
        .args([
            "recognize",
            "--group",
            bad.to_str().unwrap(),
            "--lattice",
            bad.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn prime_mismatch_is_input_error() {
    let out = permlat()
        .args(["recognize", "--fixture", "paper-example", "--p", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_byte_identical_across_runs() {
    let run = || {
        permlat()
            .args(["weiss-classic", "--fixture", "paper-example", "--normal", "0,1"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn weiss_generalized_inconclusive_exit_code() {
    // the bounded search on the paper example is inconclusive: exit 2
    let out = permlat()
        .args([
            "weiss-generalized",
            "--fixture",
            "paper-example",
            "--normal",
            "0,1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["hypothesis_i"]["verdict"], "inconclusive");
    assert_eq!(v["report"]["consistent"], true);
}

#[test]
fn subgroups_classification() {
    let out = permlat()
        .args(["subgroups", "--fixture", "d4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["subgroup_count"], 10);
    assert_eq!(v["class_count"], 8);
}

#[test]
fn file_based_group_and_lattice() {
    let dir = std::env::temp_dir().join("permlat-cli-files");
    std::fs::create_dir_all(&dir).unwrap();
    let gpath = dir.join("c2xc2.json");
    let lpath = dir.join("paper.json");
    std::fs::write(
        &gpath,
        serde_json::to_string(&serde_json::json!({
            "schema": 1, "p": 2, "degree": 4,
            "generators": [[[0,1],[2,3]], [[0,2],[1,3]]]
        }))
        .unwrap(),
    )
    .unwrap();
    std::fs::write(
        &lpath,
        serde_json::to_string(&serde_json::json!({
            "schema": 1, "group": "c2xc2", "rank": 3,
            "action": {
                "g0": [[1,0,0],[0,0,1],[0,1,0]],
                "g1": [[1,0,0],[1,-1,0],[1,0,-1]]
            }
        }))
        .unwrap(),
    )
    .unwrap();
    let out = permlat()
        .args([
            "recognize",
            "--group",
            gpath.to_str().unwrap(),
            "--lattice",
            lpath.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "NotPermutation");
}

#[test]
fn selftest_small() {
    let out = permlat().args(["selftest", "--seeds", "1"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
}
