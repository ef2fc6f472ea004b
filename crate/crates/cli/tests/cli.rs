use std::fs;
use std::path::Path;
use std::process::Command;

fn bifurjet(dir: &Path, args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_bifurjet"))
        .current_dir(dir)
        .env_remove("BIFURJET_THREADS")
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn gen(dir: &Path, process: &str, n: &str, seed: &str, out: &str) {
    bifurjet(dir, &["gen", "--process", process, "--events", n, "--seed", seed, "--out", out]);
}

#[test]
fn gen_then_durham_gives_one_record_per_event() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "z", "10", "1", "e.jsonl");
    bifurjet(dir.path(), &["durham", "--events", "e.jsonl", "--njet", "2", "--out", "j.jsonl"]);
    let text = fs::read_to_string(dir.path().join("j.jsonl")).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 10);
    for (k, l) in lines.iter().enumerate() {
        assert_eq!(l["event"], k);
        assert_eq!(l["jets"].as_array().unwrap().len(), 2);
    }
    assert!(dir.path().join("j.jsonl.config.json").exists());
}

#[test]
fn cluster_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "z", "6", "3", "e.jsonl");
    let run = |out: &str, threads: &str| {
        bifurjet(
            dir.path(),
            &[
                "--threads", threads, "cluster", "--events", "e.jsonl", "--njet", "2", "--metric", "eekt",
                "--solver", "bsb", "--shots", "100", "--steps", "1000", "--seed", "7", "--out", out,
            ],
        );
        fs::read(dir.path().join(out)).unwrap()
    };
    let a = run("a.jsonl", "1");
    let b = run("b.jsonl", "1");
    let c = run("c.jsonl", "3");
    assert_eq!(a, b);
    assert_eq!(a, c);

    let first: serde_json::Value = serde_json::from_str(std::str::from_utf8(&a).unwrap().lines().next().unwrap()).unwrap();
    let n_input = first["n_input"].as_u64().unwrap();
    assert_eq!(first["qubo_size"].as_u64().unwrap(), 2 * n_input);
    for key in ["best_energy", "violations", "efficiency", "masses"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    let timing = fs::read_to_string(dir.path().join("a.jsonl.timing.csv")).unwrap();
    assert_eq!(timing.lines().count(), 7);
}

#[test]
fn bench_energies_are_monotone_per_solver() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "z", "2", "5", "e.jsonl");
    bifurjet(
        dir.path(),
        &["bench", "--events", "e.jsonl", "--solver", "bsb,dsb,sa", "--record-every", "10", "--shots", "8", "--out", "traj.csv"],
    );
    let mut reader = csv::Reader::from_path(dir.path().join("traj.csv")).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["solver", "step", "time_s", "energy_mean", "energy_std", "eff_mean", "eff_std"]
    );
    let mut last: Option<(String, f64)> = None;
    let mut solvers = Vec::new();
    for rec in reader.records() {
        let rec = rec.unwrap();
        let (solver, e) = (rec[0].to_string(), rec[3].parse::<f64>().unwrap());
        if let Some((s, prev)) = &last {
            if *s == solver {
                assert!(e <= *prev, "{solver}: {e} after {prev}");
            }
        }
        if !solvers.contains(&solver) {
            solvers.push(solver.clone());
        }
        last = Some((solver, e));
    }
    assert_eq!(solvers, ["bsb", "dsb", "sa"]);
}

#[test]
fn mass_reads_durham_output() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "zh", "4", "9", "e.jsonl");
    bifurjet(dir.path(), &["durham", "--events", "e.jsonl", "--out", "j.jsonl"]);
    bifurjet(dir.path(), &["mass", "--jets", "j.jsonl", "--out", "m.csv"]);
    let text = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert!(text.starts_with("event,n_jet,n_btag,preselected,m_z,m_h"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn anneal_and_tts_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "z", "1", "2", "e.jsonl");
    bifurjet(
        dir.path(),
        &["anneal", "--events", "e.jsonl", "--keep", "4", "--time", "20", "--steps", "400", "--record-every", "100", "--out", "a.csv"],
    );
    let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,energy_expectation,ground_probability,norm");
    assert_eq!(lines.len(), 1 + 5);
    assert!(lines[5].starts_with("1.0,"));

    bifurjet(dir.path(), &["tts", "--events", "e.jsonl", "--keep", "4", "--times", "1,10", "--out", "t.csv"]);
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_bifurjet"))
            .current_dir(dir.path())
            .args(args)
            .output()
            .unwrap()
    };
    assert!(!run(&["durham", "--events", "missing.jsonl", "--njet", "2", "--out", "x"]).status.success());
    assert!(!run(&["cluster", "--bogus"]).status.success());
    assert!(!run(&["frobnicate"]).status.success());
    gen(dir.path(), "z", "1", "1", "e.jsonl");
    let out = run(&["cluster", "--events", "e.jsonl", "--njet", "2", "--shots", "0", "--out", "r.jsonl"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--shots"));
    // a mismatched jet count runs with a warning
    let out = run(&["durham", "--events", "e.jsonl", "--njet", "3", "--out", "j.jsonl"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
