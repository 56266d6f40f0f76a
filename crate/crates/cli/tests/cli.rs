//! End-to-end runs of the binary on small inputs with known answers.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multicurve"))
        .args(args)
        .env_remove("MULTICURVE_CORRELATOR_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Rows of a CSV table as (header, rows), skipping `#` lines.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn col(t: &(Vec<String>, Vec<Vec<String>>), name: &str) -> Vec<String> {
    let i = t.0.iter().position(|h| h == name).unwrap();
    t.1.iter().map(|r| r[i].clone()).collect()
}

fn meta(text: &str, key: &str) -> f64 {
    let prefix = format!("# {key}: ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap().parse().unwrap()
}

#[test]
fn genus_two_volumes() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["volumes", "--g", "2"])).unwrap();
    assert_eq!(v["graph_count"], 6);
    assert_eq!(v["total"]["rational"], "1/15");
    assert_eq!(v["total"]["pi_power"], 6);
    assert_eq!(v["separating"]["rational"], "67/315");
}

#[test]
fn four_punctured_sphere() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["volumes", "--g", "0", "--n", "4"])).unwrap();
    assert_eq!(v["total"]["rational"], "2");
    assert_eq!(v["total"]["pi_power"], 2);
}

#[test]
fn unstable_signature_is_rejected() {
    assert_eq!(run(&["volumes", "--g", "1", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn genus_two_distribution() {
    let t = csv(&stdout(&["distribution", "--g", "2"]));
    assert_eq!(col(&t, "p_g_rational"), ["7/27", "5/9", "5/27"]);
    let s: f64 = col(&t, "p_g").iter().map(|x| x.parse::<f64>().unwrap()).sum();
    assert!((s - 1.0).abs() < 1e-12);
}

#[test]
fn approximation_only_at_genus_26() {
    let t = csv(&stdout(&["distribution", "--g", "26", "--approx-only"]));
    let u: Vec<f64> = col(&t, "u").iter().map(|x| x.parse().unwrap()).collect();
    for (want, got) in [0.0724, 0.2022, 0.2675, 0.2251].iter().zip(&u) {
        assert!((want - got).abs() < 5e-4, "{want} vs {got}");
    }
}

#[test]
fn uniform_permutations_give_stirling_numbers() {
    let t = csv(&stdout(&["perm", "--n", "6", "--m", "1", "--alpha", "1"]));
    let want = ["1/6", "137/360", "5/16", "17/144", "1/48", "1/720"];
    assert_eq!(col(&t, "q_rational"), want);
}

#[test]
fn involution_free_weights() {
    let t = csv(&stdout(&["perm", "--n", "2", "--theta", "1,0"]));
    assert_eq!(col(&t, "q_rational"), ["0", "1"]);
}

#[test]
fn first_cumulant_at_n_75() {
    let text = stdout(&["perm", "--n", "75"]);
    let gamma = 0.577_215_664_901_532_9;
    let want = 0.5 * 150f64.ln() + 0.5 * gamma + 2f64.ln();
    assert!((meta(&text, "kappa_1_exact") - want).abs() < 0.1);
}

#[test]
fn sampling_one_point_and_determinism() {
    let t = csv(&stdout(&["sample", "--n", "1", "--samples", "100", "--seed", "3"]));
    assert_eq!(col(&t, "q_empirical"), ["1.0000000000000000e0"]);
    let args = ["sample", "--n", "20", "--samples", "2000", "--seed", "11"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn emitted_files_validate() {
    let dir = std::env::temp_dir().join(format!("multicurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("perm.json");
    let p = path.to_str().unwrap();
    stdout(&["perm", "--n", "9", "--format", "json", "--output", p]);
    assert!(stdout(&["validate", p]).starts_with("ok:"));
    std::fs::remove_dir_all(&dir).unwrap();
}
