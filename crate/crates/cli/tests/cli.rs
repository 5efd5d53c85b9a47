use std::path::PathBuf;
use std::process::{Command, Output};

fn machine(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../machines").join(name);
    p.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_learncomp"))
        .args(args)
        .env_remove("LEARNCOMP_EVAL_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn simulate_exit_codes() {
    let o = run(&["simulate", &machine("halt3.tm"), "--budget", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Halted(3)\n");

    let o = run(&["simulate", &machine("loop.tm"), "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "StillRunning(100)\n");
}

#[test]
fn simulate_malformed_machine() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tm");
    std::fs::write(&path, "initial: a\nhalting: h\n\na _ -> _ X h\n").unwrap();
    let o = run(&["simulate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn dim_examples() {
    let halt3 = format!("halting:{}", machine("halt3.tm"));
    let o = run(&["dim", "--class", &halt3, "--measure", "vc", "--schedule", "default"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stabilized value 3"), "{}", stdout(&o));

    let o = run(&["dim", "--class", "goedel:consistent", "--measure", "teaching"]);
    assert!(stdout(&o).contains("stabilized value 0"));

    let o = run(&["dim", "--class", "step", "--measure", "vc", "--window", "8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 1);
    assert_eq!(v["certificate"]["points"], serde_json::json!([0]));
}

#[test]
fn dim_budget_gives_partial_report() {
    let looper = format!("halting:{}", machine("loop.tm"));
    let o = run(&["dim", "--class", &looper, "--measure", "ldim", "--budget", "50", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    let csv = stdout(&o);
    assert!(csv.starts_with("domain_max,index_count,value,class_size\n3,16,4,16\n"), "{csv}");

    let o = Command::new(env!("CARGO_BIN_EXE_learncomp"))
        .args(["dim", "--class", &looper, "--measure", "vc"])
        .env("LEARNCOMP_EVAL_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("stopped early"));
}

#[test]
fn game_examples() {
    let halt3 = format!("halting:{}", machine("halt3.tm"));
    let o = run(&["game", "--class", &halt3, "--window", "5"]);
    assert_eq!(stdout(&o), "mistakes: 3, Ldim: 3\n");
    for seed in ["0", "1", "2"] {
        let o = run(&["game", "--class", &halt3, "--window", "5", "--adversary", "random-consistent", "--seed", seed]);
        let text = stdout(&o);
        let mistakes: usize = text["mistakes: ".len()..text.find(',').unwrap()].parse().unwrap();
        assert!(mistakes <= 3);
    }
    let o = run(&["game", "--class", &halt3, "--learner", "oracle"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn reduce_and_suite() {
    let o = run(&["reduce", &machine("halt3.tm")]);
    assert_eq!(stdout(&o), "Halts (VCdim = 3)\n");
    let o = run(&["reduce", &machine("loop.tm"), "--budget", "10000"]);
    assert_eq!(stdout(&o), "NoAnswer\n");
    let o = run(&["suite"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("15 machines: 10 Halts, 5 NoAnswer, 0 disagreements\n"));
}

#[test]
fn teach_tree_and_pac() {
    let o = run(&["teach", "--class", "step", "--window", "8", "--indices", "12", "--witness", "3"]);
    assert_eq!(stdout(&o), "index 3: {(1,0), (2,1)} size 2\n");
    let o = run(&["teach", "--escape", "2,7,4", "--format", "csv"]);
    assert_eq!(stdout(&o), "threshold\n8\n");

    let o = run(&["tree", "--class", "goedel:inconsistent", "--depth", "4", "--labeling", "active"]);
    assert!(stdout(&o).contains("layers [1, 2, 17, 18], 16 paths verified"));
    let o = run(&["tree", "--class", &format!("halting:{}", machine("halt3.tm")), "--depth", "4"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["pac", "--class", "hypercube:3", "--trials", "2000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sample_size_bound"], 715);
    assert!(v["rows"][0]["frequency"].as_f64().unwrap() >= 0.85);
}

#[test]
fn json_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let outputs: Vec<String> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("run{i}.json"));
            let o = run(&[
                "game",
                "--class",
                "hypercube:4",
                "--learner",
                "random",
                "--adversary",
                "random-consistent",
                "--seed",
                "42",
                "--format",
                "json",
                "--out",
                out.to_str().unwrap(),
            ]);
            assert!(o.status.success());
            assert!(stdout(&o).starts_with("mistakes: "));
            std::fs::read_to_string(out).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    let v: serde_json::Value = serde_json::from_str(&outputs[0]).unwrap();
    assert_eq!(v["rounds"].as_array().unwrap().len(), 32);
}

#[test]
fn class_spec_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("class.json");
    std::fs::write(&spec, r#"{"construction": "goedel", "system": {"kind": "inconsistent_at", "onset": 3}}"#).unwrap();
    let arg = format!("@{}", spec.display());
    let o = run(&["dim", "--class", &arg, "--measure", "vc", "--window", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["dim", "--class", "goedel:nonsense", "--measure", "vc"]);
    assert_eq!(o.status.code(), Some(1));
}
