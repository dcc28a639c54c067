use std::process::{Command, Output};

use serde_json::Value;
use torus_sl2::cli::Report;
use torus_sl2::sl2mod::Summand;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-sl2")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn json_report(k: i64, qmax: i64) -> (String, Report) {
    let text = stdout(&["compute", "--k", &k.to_string(), "--qmax", &qmax.to_string(), "--format", "json"]);
    let report = serde_json::from_str(&text).expect("report parses");
    (text, report)
}

#[test]
fn json_round_trips() {
    for k in [2, 3, 6] {
        let (text, report) = json_report(k, 16);
        let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
        assert_eq!(again, text);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
    }
}

#[test]
fn json_schema_keys() {
    let (text, _) = json_report(4, 12);
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["k", "normalized", "degrees", "notes"]);
    let top = &v["degrees"][4];
    assert_eq!(top["summands"][0], serde_json::json!({"kind": "DualVermaExt", "lambda": 2}));
    assert_eq!(top["tail"], serde_json::json!({"start": -2, "step": -2}));
    assert_eq!(top["dims"][0], serde_json::json!([-2, 1]));
    assert!(v["degrees"][3]["tail"].is_null());
}

fn parse_summand(s: &str) -> Summand {
    let (head, rest) = s.split_once('(').unwrap();
    let lambda: i64 = rest.trim_end_matches(')').parse().unwrap();
    match head {
        "M" => Summand::Verma(lambda),
        "L" => Summand::Simple(lambda),
        "M*" => Summand::DualVermaExt(lambda),
        other => panic!("unknown summand {other}"),
    }
}

#[test]
fn text_and_json_agree() {
    for k in [2, 5, 6] {
        let (_, report) = json_report(k, 20);
        let text = stdout(&["compute", "--k", &k.to_string(), "--qmax", "20"]);
        let mut blocks = text.split("\nH^").skip(1);
        for d in &report.degrees {
            let block = blocks.next().expect("one block per degree");
            let field = |name: &str| {
                block.lines().find_map(|l| l.trim().strip_prefix(name)).map(str::trim).unwrap().to_string()
            };
            assert!(block.starts_with(&format!("{}\n", d.i)));
            let dims: Vec<(i64, usize)> = match field("dims:").as_str() {
                "0" => vec![],
                s => s
                    .split(' ')
                    .map(|p| {
                        let (q, n) = p.split_once(':').unwrap();
                        (q.parse().unwrap(), n.parse().unwrap())
                    })
                    .collect(),
            };
            assert_eq!(dims, d.dims);
            let summands: Vec<Summand> = match field("summands:").as_str() {
                "none" => vec![],
                s => s.split(" ⊕ ").map(parse_summand).collect(),
            };
            assert_eq!(summands, d.summands);
            let tail = field("tail:");
            match d.tail {
                Some(t) => assert_eq!(tail, format!("start={} step={}", t.start, t.step)),
                None => assert_eq!(tail, "none"),
            }
            let gens: Vec<String> = d.generators.iter().map(|g| format!("{} (q={})", g.name, g.q)).collect();
            let expected = if gens.is_empty() { "none".to_string() } else { gens.join("; ") };
            assert_eq!(field("generators:"), expected);
        }
        for note in &report.notes {
            assert!(text.contains(note.as_str()));
        }
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["compute", "--k", "5", "--qmax", "12", "--format", "json"]);
    let b = run(&["compute", "--k", "5", "--qmax", "12", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_and_fault_injection() {
    let ok = run(&["verify", "--k-min", "2", "--k-max", "3", "--qmax", "8"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["verify", "--k-min", "2", "--k-max", "2", "--qmax", "8", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text.contains("[FAIL] k=2 sl2-equivariance"));
    assert!(text.contains("first counterexample"));
}

#[test]
fn character_printouts() {
    assert_eq!(stdout(&["character", "--k", "2", "--degree", "2", "--bound", "10"]), "2:1\n0:2\n-2:3\n-4:4\n-6:5\n-8:6\n-10:7\n");
    let zeros = stdout(&["character", "--k", "5", "--degree", "4", "--bound", "10"]);
    assert!(zeros.lines().all(|l| l.ends_with(":0")));
    assert_eq!(zeros.lines().last(), Some("-10:0"));
    let torsion = stdout(&["character", "--k", "4", "--degree", "2", "--bound", "10"]);
    assert_eq!(torsion, "-2:1\n-4:1\n-6:1\n-8:1\n-10:1\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["compute", "--k", "1"][..],
        &["compute", "--k", "3", "--format", "yaml"],
        &["character", "--k", "3", "--degree", "4"],
        &["character", "--k", "3", "--degree", "-1"],
        &["verify", "--k-min", "5", "--k-max", "3"],
        &["compute", "--k", "two"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
