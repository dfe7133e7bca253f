use std::path::Path;
use std::process::{Command, Output};

fn pinch_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinch-sim")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    std::fs::write(
        &config,
        "axis = \"tx_power\"\naxis_values = [0, 20]\nuser_counts = [2]\nbetas = [0.1]\npa_count = 4\ndrops = 3\nmaster_seed = 5\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let out = pinch_sim(&[
        "simulate",
        "--config",
        path_str(&config),
        "--out",
        path_str(&csv),
        "--json",
        path_str(&json),
        "--threads",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scheme,axis_name,axis_value,M,beta,mean_min_rate_bps,stderr_bps,drops,master_seed");
    // 2 power points x 3 schemes
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("ofdma,tx_power_dbm,0,2,0.1,"));
    assert!(lines[1].ends_with(",3,5"));

    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
}

#[test]
fn seed_and_drops_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = pinch_sim(&[
        "sweep-n", "--users", "2", "--betas", "0.05", "--n-values", "3", "--seed", "11", "--drops", "2", "--out",
        path_str(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",2,11")), "{text}");
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let csv = dir.path().join(format!("t{threads}.csv"));
        let out = pinch_sim(&[
            "sweep-power", "--users", "2,3", "--betas", "0.05", "--power-values", "-10,10", "--pa-count", "6",
            "--drops", "8", "--threads", threads, "--out", path_str(&csv),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn unknown_config_key_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "drops = 3\nnot_a_key = true\n").unwrap();
    let out = pinch_sim(&["simulate", "--config", path_str(&config), "--out", path_str(&dir.path().join("o.csv"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_a_key"));
}

#[test]
fn trace_drop_prints_json() {
    let out = pinch_sim(&["trace-drop", "--seed", "3", "--index", "7", "--users", "3", "--pa-count", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(trace["drop_index"], 7);
    assert_eq!(trace["realization"]["users"].as_array().unwrap().len(), 3);
    assert_eq!(trace["realization"]["pas"].as_array().unwrap().len(), 5);
    let k = trace["frame"]["subcarriers"].as_u64().unwrap() as usize;
    assert_eq!(trace["allocation"]["owners"].as_array().unwrap().len(), k);
}
