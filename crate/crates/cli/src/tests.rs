use serde_json::Value;

use super::*;

struct Run {
    code: u8,
    stdout: Vec<u8>,
    stderr: String,
}

fn cli_env(args: &[&str], env_threads: Option<&str>) -> Run {
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let argv = std::iter::once("temporal-bell").chain(args.iter().copied());
    let code = run(argv, env_threads, &mut stdout, &mut stderr);
    Run {
        code,
        stdout,
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn cli(args: &[&str]) -> Run {
    cli_env(args, None)
}

fn json_lines(out: &Run) -> Vec<Value> {
    std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn code(out: &Run) -> u8 {
    out.code
}

#[test]
fn vector_parsing() {
    assert_eq!(parse_vec3("0, -1,0.5").unwrap(), [0.0, -1.0, 0.5]);
    assert!(parse_vec3("1,2").is_err());
    assert!(parse_vec3("1,2,x").is_err());
    assert!(parse_vec3("1,nan,0").is_err());
    assert_eq!(
        parse_dirs("0,0,1;1,0,0").unwrap().0,
        vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
    );
}

#[test]
fn clap_definition_is_consistent() {
    use clap::CommandFactory;
    Cli::command().debug_assert();
}

#[test]
fn help_goes_to_stdout() {
    let out = cli(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("bound-sweep"));
}

#[test]
fn sweep_ratios() {
    let out = cli(&["bound-sweep", "--n-min", "1", "--n-max", "3"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    let ratios: Vec<&str> = lines.iter().map(|l| l["violation_ratio"].as_str().unwrap()).collect();
    assert_eq!(ratios, ["1/2^0", "1/2^0", "2/2^0"]);
    for l in &lines {
        assert_eq!(l["schema"], "1");
        assert_eq!(l["search_mode"], "reduced");
        assert_eq!(l["classical_max"], l["classical_bound"]);
        assert_eq!(l["quantum_fidelity"], 1.0);
    }
}

#[test]
fn sweep_single_points() {
    let three = json_lines(&cli(&["bound-sweep", "--n-min", "3", "--n-max", "3"]));
    assert_eq!(three.len(), 1);
    assert_eq!(three[0]["classical_max"], "1/2^1");
    assert_eq!(three[0]["classical_max_f64"], 0.5);
    let one = json_lines(&cli(&["bound-sweep", "--n-min", "1", "--n-max", "1"]));
    assert_eq!(one[0]["violation_ratio_f64"], 1.0);
}

#[test]
fn sweep_beyond_capacity() {
    let out = cli(&["bound-sweep", "--n-min", "15", "--n-max", "16"]);
    assert_eq!(code(&out), 3);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["error"], "capacity");
    assert_eq!(lines[1]["n"], 16);
}

#[test]
fn sweep_usage_errors() {
    assert_eq!(code(&cli(&["bound-sweep", "--n-min", "4", "--n-max", "2"])), 2);
    assert_eq!(code(&cli(&["bound-sweep", "--n-min", "0", "--n-max", "2"])), 2);
    assert_eq!(code(&cli(&["bound-sweep", "--n-min", "1"])), 2);
    assert_eq!(code(&cli(&["frobnicate"])), 2);
    assert_eq!(code(&cli(&["chsh", "--threads", "0"])), 2);
}

#[test]
fn verify_small_n() {
    for (n, max) in [("1", "1/2^0"), ("2", "1/2^0"), ("3", "1/2^1")] {
        let out = cli(&["verify", "--n", n]);
        assert_eq!(code(&out), 0, "n = {n}");
        let l = &json_lines(&out)[0];
        assert_eq!(l["search_mode"], "brute_force");
        assert_eq!(l["classical_max"], max);
        assert_eq!(l["reduced_max"], max);
        assert_eq!(l["pass"], true);
    }
}

#[test]
fn verify_refuses_long_run() {
    let out = cli(&["verify", "--n", "4"]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("--allow-long"));
    assert_eq!(code(&cli(&["verify", "--n", "5", "--allow-long"])), 3);
}

#[test]
fn verify_with_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let p = path.to_str().unwrap();
    let first = cli(&["verify", "--n", "3", "--checkpoint", p, "--no-timing"]);
    assert_eq!(code(&first), 0);
    assert!(path.exists());
    // A finished checkpoint resumes straight to the same answer.
    let second = cli(&["verify", "--n", "3", "--checkpoint", p, "--no-timing"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn protocol_reports() {
    let out = cli(&["protocol", "--n", "5", "--samples", "10000", "--seed", "99"]);
    assert_eq!(code(&out), 0);
    let l = &json_lines(&out)[0];
    assert_eq!(l["quantum_empirical"], 1.0);
    assert_eq!(l["quantum_exact"], "1/2^0");
    assert_eq!(l["classical_exact"], "1/2^2");
    let c = l["classical_empirical"].as_f64().unwrap();
    assert!((c - 0.25).abs() <= 5.0 / 100.0, "{c}");
    assert_eq!(l["tolerance"], 0.05);
}

#[test]
fn protocol_exact_only() {
    let out = cli(&["protocol", "--n", "4", "--samples", "0"]);
    assert_eq!(code(&out), 0);
    let l = &json_lines(&out)[0];
    assert_eq!(l["classical_exact"], "1/2^1");
    assert!(l.get("quantum_empirical").is_none());
    assert!(l.get("tolerance").is_none());
}

#[test]
fn protocol_uses_mc_samples_default() {
    let l = &json_lines(&cli(&["protocol", "--n", "2", "--mc-samples", "123"]))[0];
    assert_eq!(l["samples"], 123);
}

#[test]
fn correlator_examples() {
    let l = &json_lines(&cli(&["correlators", "--s", "0,0,1", "--dirs", "0,0,1;0,0,1"]))[0];
    assert_eq!((l["exact"].as_f64(), l["analytic"].as_f64()), (Some(1.0), Some(1.0)));
    let out = cli(&["correlators", "--s", "0,0,0", "--dirs", "0,0,1;1,0,0;0.6,0.8,0"]);
    assert_eq!(code(&out), 0);
    assert!(json_lines(&out)[0]["exact"].as_f64().unwrap().abs() <= 1e-12);
    let out = cli(&[
        "correlators",
        "--s",
        "-0.3,0.2,0.5",
        "--dirs",
        "0.6,0,0.8;-1,0,0;0.8,0.6,0",
    ]);
    let l = &json_lines(&out)[0];
    assert!(l["difference"].as_f64().unwrap().abs() <= 1e-12);
    let expected = (-0.3 * 0.6 + 0.5 * 0.8) * -0.8;
    assert!((l["exact"].as_f64().unwrap() - expected).abs() <= 1e-12);
}

#[test]
fn correlator_usage_errors() {
    assert_eq!(code(&cli(&["correlators", "--s", "0,0", "--dirs", "0,0,1"])), 2);
    assert_eq!(code(&cli(&["correlators", "--s", "0,0,2", "--dirs", "0,0,1"])), 2);
    assert_eq!(code(&cli(&["correlators", "--s", "0,0,1", "--dirs", "0,0,3"])), 2);
    assert_eq!(
        code(&cli(&["correlators", "--s", "0,0,1", "--dirs", "0,0,3", "--normalize"])),
        0
    );
    assert_eq!(code(&cli(&["correlators", "--s", "0,0,1", "--dirs", "0,0,1;"])), 2);
}

#[test]
fn chsh_reports() {
    let out = cli(&["chsh"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    assert_eq!(lines[0]["name"], "chsh");
    assert!((lines[0]["lhs"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() <= 1e-6);
    assert_eq!(lines[0]["violated"], true);
    assert_eq!(lines[0]["bound"], 2.0);
    // The three-time expression reaches the same maximum with the chain-rule
    // correlator; it is reported as it is.
    assert_eq!(lines[1]["name"], "mermin");
    assert!((lines[1]["lhs"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() <= 1e-6);
    assert!(lines[1]["witness"]["s"].is_array());
}

#[test]
fn csv_matches_json() {
    let json = json_lines(&cli(&["bound-sweep", "--n-min", "2", "--n-max", "5", "--no-timing"]));
    let csv = cli(&[
        "bound-sweep",
        "--n-min",
        "2",
        "--n-max",
        "5",
        "--no-timing",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,classical_max,classical_bound,quantum_fidelity,violation_ratio,search_mode,elapsed_ms"
    );
    for (row, j) in lines.zip(&json) {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[0], j["n"].to_string());
        assert_eq!(f[1], j["classical_max"]);
        assert_eq!(f[2], j["classical_bound"]);
        assert_eq!(f[3], j["quantum_fidelity"].to_string());
        assert_eq!(f[4], j["violation_ratio"]);
        assert_eq!(f[5], j["search_mode"]);
        assert_eq!(f[6], j["elapsed_ms"].to_string());
    }
}

#[test]
fn out_file_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.jsonl");
    let out = cli(&[
        "bound-sweep",
        "--n-min",
        "1",
        "--n-max",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);
}

#[test]
fn thread_env_fallback() {
    let args = ["protocol", "--n", "3", "--samples", "5000"];
    let two = cli_env(&args, Some("2"));
    assert_eq!(code(&two), 0);
    assert_eq!(two.stdout, cli_env(&args, Some("5")).stdout);
    assert_eq!(code(&cli_env(&args, Some("zero"))), 2);
    // The flag wins over the environment.
    assert_eq!(code(&cli_env(&["chsh", "--threads", "2"], Some("zero"))), 0);
}
