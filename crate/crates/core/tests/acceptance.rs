//! Acceptance gate, printing one PASS/FAIL line per criterion. Criterion 7
//! is expected to fail: the published chain estimate is exceeded on small
//! towers, and the test asserts that it stays red.

use std::io::Write;
use std::time::{Duration, Instant};

use nilalg::cli::{run, EXIT_FAILED};
use nilalg::suites::*;
use nilalg::{AlphaSpec, FieldSpec};

const KNOWN_RED: [u32; 1] = [7];

struct Outcome {
    id: u32,
    passed: bool,
    note: String,
}

fn timed(id: u32, limit: Duration, what: &str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let passed = ok && in_time;
    let note = format!("{what}: {detail}; {:.2}s of {}s", elapsed.as_secs_f64(), limit.as_secs());
    // Written to the process stdout so the line shows without --nocapture.
    let line = format!("{} criterion {id}: {note}\n", if passed { "PASS" } else { "FAIL" });
    std::io::stdout().write_all(line.as_bytes()).unwrap();
    Outcome { id, passed, note }
}

fn summary(r: &SuiteReport) -> String {
    let mut s = format!("{} checks, {} failures", r.checks, r.failures.len());
    if let Some(f) = r.failures.first() {
        s.push_str(&format!(" (first: {f})"));
    }
    s
}

fn towers(names: &[&str], primes: &[u64], level: u32) -> Vec<NamedTower> {
    let specs: Vec<_> = default_tower_specs().into_iter().filter(|s| names.contains(&s.name.as_str())).collect();
    build_towers(&specs, primes, level).unwrap()
}

/// Exit code, stdout and every report file of one `verify` run.
type RunBytes = (i32, Vec<u8>, Vec<(String, Vec<u8>)>);

fn full_run(dir: &std::path::Path) -> RunBytes {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, format!(r#"{{"outDir": {:?}, "seed": 2024}}"#, dir.join("reports"))).unwrap();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["nilalg", "--config", cfg.to_str().unwrap(), "verify"], &mut out, &mut err);
    let mut names: Vec<String> = SUITES.iter().map(|s| s.to_string()).collect();
    names.push("summary".into());
    let files = names.into_iter().map(|n| {
        let bytes = std::fs::read(dir.join("reports").join(format!("{n}.json"))).unwrap_or_default();
        (n, bytes)
    });
    (code, out, files.collect())
}

#[test]
fn acceptance() {
    let all = ["plain", "x^4", "xxxx+xyxy", "Y(x,16)"];
    let mut outcomes = Vec::new();

    outcomes.push(timed(1, Duration::from_secs(10), "tower conditions", || {
        let t = towers(&all, &[2], 6);
        let r = suite_tower_conditions(&t, 6, false).unwrap();
        let dense_to_3 = r.details["towers"].as_array().unwrap().iter().all(|d| d["denseMax"] == 3 && d["kMax"] == 6);
        let rejected = r.details["oversizedRelation"] != "accepted";
        (r.passed && dense_to_3 && rejected && t.len() >= 3, summary(&r))
    }));

    outcomes.push(timed(2, Duration::from_secs(10), "projection and dense U agree", || {
        let t = towers(&["x^4", "Y(x,16)"], &[2, 3], 3);
        let r = suite_projection_oracle(&t, 3).unwrap();
        let per_tower = r.details["towers"].as_array().unwrap().iter().all(|d| d["words"] == 2 + 4 + 16 + 256 && d["mismatches"] == 0);
        (r.passed && per_tower, summary(&r))
    }));

    outcomes.push(timed(3, Duration::from_secs(60), "chains fill A(n), n <= 12", || {
        let r = suite_chain_span(&towers(&all, &[2, 3], 4), 12).unwrap();
        (r.passed, summary(&r))
    }));

    outcomes.push(timed(4, Duration::from_secs(60), "power containment", || {
        let r = suite_power_containment(&default_power_cases(), Some(2024)).unwrap();
        (r.passed && r.checks == 8, summary(&r))
    }));

    outcomes.push(timed(5, Duration::from_secs(300), "ideal components, n <= 7", || {
        let r = suite_ideal(&towers(&["x^4", "Y(x,16)"], &[2, 3], 5), 7).unwrap();
        (r.passed, summary(&r))
    }));

    outcomes.push(timed(6, Duration::from_secs(300), "nil demonstration", || {
        let r = suite_nil(FieldSpec::new(2).unwrap(), 7).unwrap();
        (r.passed && r.details["f"] == 4 && r.details["positive"]["exponent"] == 32, summary(&r))
    }));

    outcomes.push(timed(7, Duration::from_secs(1), "published chain estimate", || {
        let r = suite_chain_estimate(&towers(&all, &[2, 3], 7)).unwrap();
        let recount = r.details["towers"]
            .as_array()
            .unwrap()
            .iter()
            .all(|d| d["rows"].as_array().unwrap().iter().all(|row| row["correctedHolds"] == true));
        (r.passed, format!("{}; recount charging started ramps holds: {recount}", summary(&r)))
    }));

    outcomes.push(timed(8, Duration::from_secs(10), "schedule", || {
        let r = suite_schedule(&AlphaSpec::Log2Log2, 10).unwrap();
        let threshold = &r.details["chain"]["thresholdLog2N"];
        (r.passed, format!("{}; alpha >= 85 reached at log2 n = {threshold}", summary(&r)))
    }));

    outcomes.push(timed(9, Duration::from_secs(600), "two full runs", || {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let first = full_run(a.path());
        let second = full_run(b.path());
        let nonempty = first.2.iter().all(|(_, bytes)| !bytes.is_empty());
        let same = first == second;
        (
            same && nonempty && first.0 == EXIT_FAILED,
            format!("exit {} and {}, {} reports byte-identical: {same}", first.0, second.0, first.2.len()),
        )
    }));

    for o in &outcomes {
        if KNOWN_RED.contains(&o.id) {
            assert!(!o.passed, "criterion {} turned green: {}", o.id, o.note);
        } else {
            assert!(o.passed, "criterion {}: {}", o.id, o.note);
        }
    }
}
