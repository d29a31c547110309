use std::path::Path;

use hypersel_cli::report::strip_timing;
use hypersel_cli::{generate, load, load_str, parse_scenario, report_exit_code, CliError, Overrides, Runner, Status};

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

#[test]
fn fixtures_load_or_fail_as_documented() {
    for ok in ["ordinal_omega.json", "broken_selection.json", "broken_decomposition.json", "wedge.json", "omega_two.json"] {
        assert!(load(&fixture(ok)).is_ok(), "{ok}");
    }
    match load(&fixture("malformed.json")) {
        Err(CliError::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{:?}", other.err()),
    }
    match load(&fixture("unresolved.json")) {
        Err(CliError::Invalid(problems)) => assert_eq!(problems.len(), 2, "{problems:?}"),
        other => panic!("{:?}", other.err()),
    }
}

#[test]
fn generated_scenarios_round_trip() {
    for sc in [generate::ordinal(&"w*2".parse().unwrap()), generate::wedge(2).unwrap(), generate::fan(3).unwrap()] {
        let text = serde_json::to_string(&sc).unwrap();
        assert_eq!(parse_scenario(&text, "generated").unwrap(), sc);
        assert!(load_str(&text, "generated").is_ok());
    }
}

#[test]
fn selection_cycles_are_rejected() {
    let text = r#"{
        "name": "cycle",
        "space": { "tops": ["w"] },
        "selections": {
            "a": { "kind": "restrict", "parent": "b", "subspace": ["[0,w]"] },
            "b": { "kind": "patched", "base": "a", "at": ["{w}"], "value": "w" }
        }
    }"#;
    match load_str(text, "cycle") {
        Err(CliError::Invalid(p)) => assert!(p.iter().any(|m| m.contains("refers to itself")), "{p:?}"),
        other => panic!("{:?}", other.err()),
    }
}

#[test]
fn broken_selection_reports_a_closed_witness() {
    let model = load(&fixture("broken_selection.json")).unwrap();
    let report = Runner::new(&model, Overrides::default()).run();
    assert_eq!(report_exit_code(&report), 1);
    let failed: Vec<_> = report.checks.iter().filter(|c| c.status == Status::Fail).collect();
    assert_eq!(failed.len(), 2);
    let w = failed[0].witness.as_ref().unwrap();
    let items: Vec<String> = serde_json::from_value(w["set"].clone()).unwrap();
    let s = model.space.parse_set(&items).unwrap();
    assert!(model.space.is_closed(&s));
    let f = &model.selections["broken"];
    assert_eq!(f.eval(&model.space, &s).unwrap().to_string(), w["value"].as_str().unwrap());
}

#[test]
fn reports_are_deterministic_and_seeded() {
    let model = load(&fixture("ordinal_omega.json")).unwrap();
    let run = |seed| {
        let r = Runner::new(&model, Overrides { seed: Some(seed), ..Overrides::default() }).run();
        let mut v = serde_json::to_value(&r).unwrap();
        strip_timing(&mut v);
        (report_exit_code(&r), v.to_string())
    };
    let (code, a) = run(7);
    assert_eq!(code, 0);
    assert_eq!(a, run(7).1);
    assert!(a.contains("\"seed\":7"));
}

#[test]
fn overrides_reach_every_check() {
    let model = load(&fixture("ordinal_omega.json")).unwrap();
    let r = Runner::new(&model, Overrides { grid: Some(3), window: Some(32), seed: None }).run();
    assert!(r.checks.iter().all(|c| c.params.grid == 3 && c.params.window == 32));
    assert_eq!(r.status, Status::Pass);
}
