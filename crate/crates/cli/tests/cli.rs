use cycalc::{dispatch_with_dataset, module_operations, ROUTES, SCHEMA, SUBCOMMANDS};
use serde_json::Value;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycalc"))
        .args(args)
        .env_remove(cycalc::DATASET_ENV)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const DEGREE_TEN: &[&str] = &[
    "fixlocus",
    "wps",
    "--weights",
    "1,1,1,2,5",
    "--degree",
    "10",
    "--poly",
    "x^10+y^10+z^10+w^5-t^2",
    "--signs",
    "+,+,+,+,-",
];

const QUADRIC_QUARTIC: &[&str] = &[
    "fermat",
    "count",
    "--ambient",
    "5",
    "--eqs",
    "2:1,1,1,1,1,1;4:1,1,1,1,1,1",
    "--signs",
    "-,-,-,+,+,+",
];

#[test]
fn theorem_sixteen_trace() {
    let out = run(&["theorem", "sixteen"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["k"], 16);
    assert_eq!(v["slope"], "1/16");
    let last = v["trace"].as_array().unwrap().last().unwrap().as_str().unwrap();
    assert!(last.ends_with("k = 16"), "{last}");
    assert_eq!(v["relation"]["holds"], true);
}

#[test]
fn invariants_of_p1112() {
    let out = run(&["invariants", "compute", "--s", "10", "--n", "1", "--d", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["h3"], "1");
    assert_eq!(v["hc2"], "34");
}

#[test]
fn tables_validate_and_query() {
    assert_eq!(run(&["tables", "validate"]).status.code(), Some(0));
    let v = json(&run(&["tables", "query", "--n", "8"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let v = json(&run(&["tables", "query", "--s", "10"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    let v = json(&run(&["tables", "query", "--h3", ">44"]));
    assert!(v["rows"].as_array().unwrap().is_empty());

    let tsv = run(&["--format", "tsv", "tables", "query", "--n", "8"]);
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert_eq!(text.lines().count(), 4, "{text}");
    assert!(text.starts_with(cycalc_core::tables::HEADER));
}

#[test]
fn byte_identical_json() {
    let cases: [&[&str]; 5] = [
        &["theorem", "sixteen"],
        &["tables", "validate"],
        &["invariants", "compute", "--s", "10", "--n", "1", "--d", "1/2", "--euler-y", "4"],
        DEGREE_TEN,
        QUADRIC_QUARTIC,
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let bogus = run(&["bogus"]);
    assert_eq!(bogus.status.code(), Some(2));
    assert!(!bogus.stderr.is_empty());
    let range = run(&["tables", "query", "--h3", "1..x"]);
    assert_eq!(range.status.code(), Some(1));
    assert_eq!(json(&range)["error"]["kind"], "tables");
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let err = run(&["fermat", "count", "--ambient", "5", "--eqs", "2:1,1,1,1,1,1", "--signs", "-,-,-,+,+,+"]);
    assert_eq!(err.status.code(), Some(1));
    let v = json(&err);
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["error"]["kind"], "fermat");
    assert!(v["error"]["message"].is_string());

    let zero = run(&["invariants", "compute", "--s", "0", "--n", "1", "--d", "1/2"]);
    assert_eq!(zero.status.code(), Some(1));
    assert_eq!(json(&zero)["error"]["kind"], "invariants");
}

#[test]
fn routes_cover_every_operation_once() {
    let subs: BTreeSet<&str> = SUBCOMMANDS.iter().copied().collect();
    let mut seen = BTreeSet::new();
    for (module, op, sub) in ROUTES {
        assert!(subs.contains(sub), "{sub}");
        assert!(seen.insert((*module, *op)), "{module}::{op} routed twice");
    }
    let declared: BTreeSet<(&str, &str)> = module_operations()
        .into_iter()
        .flat_map(|(m, ops)| ops.iter().map(move |o| (m, *o)))
        .collect();
    assert_eq!(seen, declared);
    // each subcommand parses
    for sub in SUBCOMMANDS {
        let mut argv = vec!["cycalc"];
        argv.extend(sub.split(' '));
        argv.push("--help");
        assert_eq!(dispatch_with_dataset(argv, None).exit_code, 0, "{sub}");
    }
}

#[test]
fn fermat_count_reports_both_paths() {
    let out = run(QUADRIC_QUARTIC);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 16);
    for s in v["strata"].as_array().unwrap() {
        assert_eq!(s["count"], 8);
        assert_eq!(s["symbolic_count"], 8);
        assert_eq!(s["enumerated_count"], 8);
        assert_eq!(s["bezout"], 8);
    }
}

#[test]
fn fixlocus_checks_a_point() {
    let mut args = DEGREE_TEN.to_vec();
    args.extend(["--check-point", "0,0,0,0,1;0,0,0,1,1"]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checked = v["checked_points"].as_array().unwrap();
    assert_eq!(checked.len(), 2);
    assert_eq!(checked[0]["on_hypersurface"], false);
    assert_eq!(checked[1]["on_hypersurface"], true);
    assert_eq!(v["hypersurface"]["surfaces"], 1);
    assert_eq!(v["quotient"]["all_passed"], true);
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cycalc-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn dataset_override() {
    let dir = temp_dir("override");
    let path = dir.join("tables.tsv");
    let bin = env!("CARGO_BIN_EXE_cycalc");

    // a copy of the shipped fixture validates
    std::fs::write(&path, cycalc_core::tables::TABLES_TSV).unwrap();
    let ok = Command::new(bin)
        .args(["tables", "validate"])
        .env(cycalc::DATASET_ENV, &path)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    // one perturbed hc2: a failed check, exit 1
    let bad = cycalc_core::tables::TABLES_TSV.replacen("0\t2\t4\t52\t", "0\t2\t4\t53\t", 1);
    std::fs::write(&path, &bad).unwrap();
    let out = Command::new(bin)
        .args(["tables", "validate"])
        .env(cycalc::DATASET_ENV, &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);

    // a sidecar that disagrees is a checksum error
    std::fs::write(dir.join("tables.tsv.sha256"), cycalc_core::tables::TABLES_SHA256).unwrap();
    let r = dispatch_with_dataset(["cycalc", "tables", "validate"], Some(path.clone()));
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.payload["error"]["kind"], "tables");

    // and one that agrees is accepted
    std::fs::write(
        dir.join("tables.tsv.sha256"),
        cycalc_core::tables::sha256_hex(bad.as_bytes()),
    )
    .unwrap();
    let r = dispatch_with_dataset(["cycalc", "tables", "validate"], Some(path.clone()));
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.payload["passed"], false);

    let missing = dispatch_with_dataset(["cycalc", "tables", "validate"], Some(dir.join("nope.tsv")));
    assert_eq!(missing.exit_code, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
