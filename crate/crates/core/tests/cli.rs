use nilalg::cli::{run, EXIT_CAPACITY, EXIT_CONFIG, EXIT_FAILED, EXIT_OK};

fn nilalg(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("nilalg").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn nil_verdicts() {
    let (code, out, _) = nilalg(&["nil", "--element", "x", "--exponent", "8"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("true\n"));
    assert!(out.contains("\"windows\""));
    let (code, out, _) = nilalg(&["nil", "--element", "x", "--exponent", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("false\n"));
}

#[test]
fn non_homogeneous_element_is_rejected() {
    let (code, _, err) = nilalg(&["nil", "--element", "x + xy", "--exponent", "2"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("non-homogeneous"));
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(&dir, "bad.json", "{\"p\": ");
    assert_eq!(nilalg(&["--config", &bad, "verify"]).0, EXIT_CONFIG);
    let unknown = write_config(&dir, "unknown.json", "{\"colour\": 1}");
    assert_eq!(nilalg(&["--config", &unknown, "verify"]).0, EXIT_CONFIG);
    let cap = write_config(&dir, "cap.json", "{\"denseCap\": 17}");
    assert_eq!(nilalg(&["--config", &cap, "verify"]).0, EXIT_CONFIG);
    assert_eq!(nilalg(&["verify", "--suite", "nope"]).0, EXIT_CONFIG);
    assert_eq!(nilalg(&["frobnicate"]).0, EXIT_CONFIG);
}

#[test]
fn sampling_needs_a_seed() {
    let (code, _, err) = nilalg(&["verify", "--suite", "lemma41"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("seed"));
    assert_eq!(nilalg(&["--seed", "1", "verify", "--suite", "lemma41"]).0, EXIT_OK);
}

#[test]
fn capacity_exits_three() {
    let (code, _, err) = nilalg(&["hilbert", "--n-max", "200"]);
    assert_eq!(code, EXIT_CAPACITY);
    assert!(err.contains("level 6"));
}

#[test]
fn prop31_suite_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "toy.json",
        r#"{"towers": [{"name": "x^4", "tower": {"f": ["2"], "g": ["1"], "slots": [{"words": ["xxxx"]}]}}], "suitePrimes": [2]}"#,
    );
    let (code, out, err) = nilalg(&["--config", &cfg, "verify", "--suite", "prop31"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("PASS prop31"));
}

#[test]
fn single_power_case() {
    assert_eq!(nilalg(&["verify", "--suite", "lemma41", "--S", "x,y", "--n", "4", "--p", "2"]).0, EXIT_OK);
}

#[test]
fn published_growth_estimate_exits_one() {
    let (code, out, _) = nilalg(&["verify", "--suite", "prop36"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.starts_with("FAIL prop36"));
}

#[test]
fn hilbert_csv_rows() {
    let (code, out, _) = nilalg(&["hilbert", "--n-max", "7", "--exact-max", "7"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "n,exact_dim,upper_bound,n_pow_alpha,within_bound");
    assert_eq!(lines[1], "0,1,1,1,1");
    let (_, out, _) = nilalg(&["hilbert", "--n-max", "9", "--exact-max", "7"]);
    assert!(out.lines().nth(9).unwrap().starts_with("8,,"));
}

#[test]
fn schedule_and_tower_commands() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("s.json");
    let (code, _, _) = nilalg(&["schedule", "build", "--out", sched.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = nilalg(&["schedule", "verify", "--input", sched.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"chainHolds\": true"));
    let toy = write_config(&dir, "toy.json", r#"{"schedule": {"grade": "toy", "iMax": 1, "f": [4], "g": [2], "sets": [["x"]]}}"#);
    let (code, out, err) = nilalg(&["--config", &toy, "schedule", "build"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("\"grade\": \"toy\""));
    let (code, out, _) = nilalg(&["tower", "build"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"tLevels\""));
    assert_eq!(nilalg(&["tower", "dump"]).0, EXIT_OK);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run_id in 0..2 {
        let out_dir = dir.path().join(format!("run{run_id}"));
        let cfg = write_config(&dir, &format!("c{run_id}.json"), &format!(r#"{{"outDir": {:?}, "seed": 11, "threads": 3}}"#, out_dir));
        let (_, out, _) = nilalg(&["--config", &cfg, "verify", "--suite", "lemma41", "--suite", "ideal", "--suite", "schedule"]);
        let mut files = Vec::new();
        for name in ["lemma41", "ideal", "schedule", "summary"] {
            files.push(std::fs::read(out_dir.join(format!("{name}.json"))).unwrap());
        }
        outputs.push((out, files));
    }
    assert_eq!(outputs[0], outputs[1]);
}
