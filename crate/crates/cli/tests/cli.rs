use std::path::Path;
use std::process::{Command, Output};

fn compcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compcorr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write_matrix(path: &Path, diag: [f64; 4]) {
    let mut text = String::from("2\n");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{} 0", if i == j { diag[i] } else { 0.0 })).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn analyze_phi_plus_flags_entanglement() {
    let o = compcorr(&["analyze", "--state", "phi_plus"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("I_sum=2.000000"), "{out}");
    let verdict_lines: Vec<_> = out.lines().filter(|l| l.ends_with("entangled") || l.ends_with("not detected")).collect();
    assert!(!verdict_lines.is_empty());
    for l in verdict_lines {
        // the printed witness set has no member that flags Φ⁺
        let is_witness = l.starts_with('W') || l.starts_with("witness");
        assert_eq!(l.ends_with("not detected"), is_witness, "{l}");
    }
}

#[test]
fn analyze_rho_cc_flags_nothing() {
    let o = compcorr(&["analyze", "--state", "rho_cc"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("I_sum=1.000000"), "{out}");
    assert!(!out.lines().any(|l| l.ends_with(" entangled")), "{out}");
}

#[test]
fn analyze_json() {
    let o = compcorr(&["analyze", "--state", "werner", "--json"]);
    // werner is a family, not a catalog state
    assert_eq!(code(&o), 2);
    let o = compcorr(&["analyze", "--state", "psi-minus", "--json", "--mubs", "2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["pairs"].as_array().unwrap().len(), 2);
    assert!(v["verdicts"].as_array().unwrap().iter().any(|x| x["detector"] == "Ppt" && x["detected_entangled"] == true));
}

#[test]
fn analyze_matrix_file_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    write_matrix(&good, [0.25; 4]);
    assert_eq!(code(&compcorr(&["analyze", "--matrix-file", good.to_str().unwrap()])), 0);

    let bad = dir.path().join("bad.txt");
    write_matrix(&bad, [1.5, -0.5, 0.0, 0.0]);
    let o = compcorr(&["analyze", "--matrix-file", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));

    let trace = dir.path().join("trace.txt");
    write_matrix(&trace, [0.5; 4]);
    assert_eq!(code(&compcorr(&["analyze", "--matrix-file", trace.to_str().unwrap()])), 3);

    let garbled = dir.path().join("garbled.txt");
    std::fs::write(&garbled, "2\n1 0 zero").unwrap();
    assert_eq!(code(&compcorr(&["analyze", "--matrix-file", garbled.to_str().unwrap()])), 2);

    assert_eq!(code(&compcorr(&["analyze", "--matrix-file", "/nonexistent/m.txt"])), 2);
    assert_eq!(code(&compcorr(&["analyze"])), 2);
}

#[test]
fn sweep_werner_crosses_at_one_third() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = compcorr(&[
        "sweep", "--family", "werner", "--measure", "pearson", "--mubs", "3", "-o", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("p,I_sum,C_sum,S_sum,mi_threshold,c_threshold"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 101);
    let first_above = rows.iter().find(|r| r[2].parse::<f64>().unwrap() > 1.0 + 1e-9).unwrap();
    assert_eq!(first_above[0], "0.34");
    assert!(rows.iter().all(|r| r[1].is_empty() && r[3].is_empty()));
}

#[test]
fn sweep_rejects_bad_input() {
    assert_eq!(code(&compcorr(&["sweep", "--family", "werner", "--grid", "0:1.5:0.1"])), 2);
    assert_eq!(code(&compcorr(&["sweep", "--family", "werner", "--grid", "-0.5:1:0.1"])), 2);
    assert_eq!(code(&compcorr(&["sweep", "--family", "nope"])), 2);
    assert_eq!(code(&compcorr(&["sweep", "--family", "werner", "--mubs", "4"])), 2);
}

#[test]
fn montecarlo_json_and_thread_independence() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let o = compcorr(&[
            "montecarlo", "--n", "9000", "--seed", "11", "--threads", threads, "--format", "json", "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["meta"]["seed"], 11);
    assert_eq!(v["meta"]["n"], 9000);
    let frac = v["results"]["entangled_fraction"].as_f64().unwrap();
    assert!((frac - 0.3687).abs() < 0.03, "{frac}");
    let venn = v["results"]["venn"].as_object().unwrap();
    assert_eq!(venn.len(), 16);
    assert!(venn.contains_key("3"));
}

#[test]
fn seed_changes_output() {
    let run = |seed: &str| stdout(&compcorr(&["montecarlo", "--n", "2000", "--seed", seed]));
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\nn = 2000\nseed = 5\nformat = json\n").unwrap();
    let from_cfg = compcorr(&["montecarlo", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&from_cfg), 0);
    let explicit = compcorr(&["montecarlo", "--n", "2000", "--seed", "5", "--format", "json"]);
    assert_eq!(from_cfg.stdout, explicit.stdout);

    let overridden = compcorr(&["montecarlo", "--config", cfg.to_str().unwrap(), "--seed", "6"]);
    let v: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(v["meta"]["seed"], 6);
    assert_eq!(v["meta"]["n"], 2000);

    std::fs::write(&cfg, "bogus_key = 1\n").unwrap();
    assert_eq!(code(&compcorr(&["montecarlo", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&compcorr(&["montecarlo", "--config", "/nonexistent.cfg"])), 2);
}

#[test]
fn lur_compare_and_optimize_run() {
    let o = compcorr(&["lur-compare", "--n", "3000", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("venn:4:lur"));

    let o = compcorr(&["optimize", "--n", "500", "--modes", "fixed,optimize_second,optimize_3mub", "--directions", "20"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("mode,n_states,n_entangled,detected_entangled"));
    assert_eq!(text.lines().count(), 4);
    assert_eq!(code(&compcorr(&["optimize", "--n", "10", "--modes", "sideways"])), 2);
}

#[test]
fn counts_accept_scientific_notation() {
    let o = compcorr(&["montecarlo", "--n", "2e3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["n"], 2000);
    assert_eq!(code(&compcorr(&["montecarlo", "--n", "1.5"])), 2);
}
