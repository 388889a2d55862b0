//! End-to-end checks of the binary's contract: exit codes, the
//! verify round trip for exit-0 payloads, config and env defaults, and
//! byte-identical JSON regardless of thread count.

use flowforge::catalog::{named, write_edgelist};
use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn graph_file(name: &str, stem: &str) -> PathBuf {
    scratch(&format!("surface-{stem}.edges"), &write_edgelist(&named(name).unwrap()))
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flowforge"));
    cmd.args(args);
    for &(k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn solve_payload_reverifies_and_z2z2_hits_fourteen_fifteenths() {
    let petersen = graph_file("petersen", "petersen-z2z2");
    let out = run(&["solve", petersen.to_str().unwrap(), "--group", "z2z2"], &[]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ratio"], "14/15");
    assert_eq!(v["support"], 14);

    let cert = scratch("surface-petersen-z2z2.json", &String::from_utf8(out.stdout).unwrap());
    let verify =
        run(&["verify", petersen.to_str().unwrap(), cert.to_str().unwrap()], &[]);
    assert_eq!(code(&verify), 0, "stderr: {}", String::from_utf8_lossy(&verify.stderr));
}

#[test]
fn bounds_payload_reverifies() {
    let petersen = graph_file("petersen", "petersen-bounds");
    let out = run(&["bounds", petersen.to_str().unwrap(), "--which", "14/15"], &[]);
    assert_eq!(code(&out), 0);
    let cert = scratch("surface-petersen-1415.json", &String::from_utf8(out.stdout).unwrap());
    let verify = run(&["verify", petersen.to_str().unwrap(), cert.to_str().unwrap()], &[]);
    assert_eq!(code(&verify), 0, "stderr: {}", String::from_utf8_lossy(&verify.stderr));
}

#[test]
fn sweep_json_is_byte_identical_across_thread_counts() {
    let manifest = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/manifests/tripods.txt");
    let one = run(&["sweep", manifest], &[("RAYON_NUM_THREADS", "1")]);
    let four = run(&["sweep", manifest], &[("RAYON_NUM_THREADS", "4")]);
    assert_eq!(code(&one), 0);
    assert_eq!(code(&four), 0);
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout, "sweep JSON depends on thread count");
}

#[test]
fn unbalanced_weights_exit_four() {
    let k4 = graph_file("k4", "k4-mu");
    let mu = scratch("surface-k4.mu", "1 0 0 0\n");
    let out = run(&["solve", k4.to_str().unwrap(), "--mu", mu.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 4, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unreadable_input_exits_two() {
    let bad = scratch("surface-bad.edges", "this is not an edge list\n");
    assert_eq!(code(&run(&["solve", bad.to_str().unwrap()], &[])), 2);
    let missing = std::env::temp_dir().join("surface-does-not-exist.edges");
    assert_eq!(code(&run(&["solve", missing.to_str().unwrap()], &[])), 2);
}

#[test]
fn tampered_and_misdirected_certificates_are_told_apart() {
    let petersen = graph_file("petersen", "petersen-tamper");
    let out = run(&["solve", petersen.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 0);
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();

    let value = &mut v["certificate"]["edges"][0]["value"][0];
    let flipped = if value.as_u64().unwrap() == 1 { 2 } else { 1 };
    *value = serde_json::json!(flipped);
    let tampered = scratch("surface-tampered.json", &v.to_string());
    let verify = run(&["verify", petersen.to_str().unwrap(), tampered.to_str().unwrap()], &[]);
    assert_eq!(code(&verify), 1, "a flipped edge value must read as tampering");

    let k4 = graph_file("k4", "k4-misdirect");
    let good = scratch("surface-good.json", &String::from_utf8(out.stdout).unwrap());
    let verify = run(&["verify", k4.to_str().unwrap(), good.to_str().unwrap()], &[]);
    assert_eq!(code(&verify), 2, "a certificate for another graph must not verify");
}

#[test]
fn budget_defaults_flow_from_flag_env_and_config() {
    let petersen = graph_file("petersen", "petersen-budget");
    let path = petersen.to_str().unwrap();

    let out = run(&["solve", path, "--budget", "10"], &[]);
    assert_eq!(code(&out), 3, "flag budget too small to finish");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["optimal"], false, "truncated payload still printed");

    assert_eq!(code(&run(&["solve", path], &[("FLOWFORGE_BUDGET", "10")])), 3);

    let conf = scratch("surface-small-budget.conf", "# defaults\nbudget = 10\n");
    let out = run(&["--config", conf.to_str().unwrap(), "solve", path], &[]);
    assert_eq!(code(&out), 3);

    // precedence: flag beats env, env beats config
    let out = run(&["solve", path, "--budget", "1000000"], &[("FLOWFORGE_BUDGET", "10")]);
    assert_eq!(code(&out), 0);
    let out = run(
        &["--config", conf.to_str().unwrap(), "solve", path],
        &[("FLOWFORGE_BUDGET", "1000000")],
    );
    assert_eq!(code(&out), 0);

    let grp = scratch("surface-group.conf", "group = z2z2\n");
    let out = run(&["--config", grp.to_str().unwrap(), "solve", path], &[]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ratio"], "14/15", "config group default not honored");
}

#[test]
fn reduce_without_a_qualifying_cut_exits_four() {
    let theta = graph_file("theta", "theta-reduce");
    assert_eq!(code(&run(&["reduce", theta.to_str().unwrap(), "--to", "bullet"], &[])), 4);

    let petersen = graph_file("petersen", "petersen-reduce");
    let out = run(&["reduce", petersen.to_str().unwrap(), "--to", "delta"], &[]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let delta = &v["delta"];
    let residues = delta["residues"].as_array().unwrap();
    assert_eq!(residues.len(), delta["num_edges"].as_u64().unwrap() as usize);
    assert_eq!(delta["cubic"], true);
    assert_eq!(delta["cyclically_four_edge_connected"], true);
}
