use std::process::Command;

use lacunary::dto::*;
use lacunary::{run, tables_data, Outcome};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("lacunary").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> String {
    let mut v = vec!["--format", "json"];
    v.extend_from_slice(args);
    let out = cli(&v);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

/// Parses with unknown fields rejected and checks the bytes survive a round trip.
fn round_trip<T: Serialize + DeserializeOwned>(line: &str) -> T {
    let doc: T = serde_json::from_str(line).unwrap_or_else(|e| panic!("{e}: {line}"));
    assert_eq!(serde_json::to_string(&doc).unwrap(), line.trim_end());
    doc
}

#[test]
fn documented_examples() {
    let u: UhsOut = round_trip(&json(&["uhs-check", "8^n + 27^n + 3*12^n + 3*18^n"]));
    assert_eq!((u.status.as_str(), u.rule.as_str()), ("NOT_UHS", "12dep-cube"));
    let w = u.witness.unwrap();
    assert_eq!((w.b, w.beta, w.d), ([Num::Int(1), Num::Int(1)], [Num::Int(2), Num::Int(3)], 3));

    assert_eq!(cli(&["vandermonde", "--d", "3", "--n", "7"]).stdout, "0\n");

    let d: DigitsVerifyOut = round_trip(&json(&["digits-verify", "--family", "5last-1", "--param", "2"]));
    let i = &d.instances[0];
    assert!(i.verified);
    assert_eq!((i.y.as_str(), i.value.as_str(), i.m.clone()), ("11", "121", vec![1, 2, 3, 4]));
}

#[test]
fn every_subcommand_round_trips() {
    let e: ExpandOut = round_trip(&json(&["expand", "(1 + X)^2 - 2*X", "--power", "2"]));
    assert_eq!(e.text, "X^4 + 2*X^2 + 1");
    assert_eq!(e.result.to_poly().unwrap().term_count(), 3);

    let c: ComposeOut = round_trip(&json(&["compose", "T^2", "X1 + X2 + X1^2*X2^-1"]));
    assert_eq!(c.term_count, 5);

    round_trip::<SweepOut>(&json(&["verify-tables"]));
    let r: RowCheckOut = round_trip(&json(&["verify-tables", "--row", "T4.1", "--xi1", "2"]));
    assert!(r.shape_ok);
    round_trip::<OracleOut>(&json(&["oracle-search", "--d", "2", "--k", "3", "--max-deg", "2"]));
    round_trip::<VandermondeOut>(&json(&["vandermonde", "--d", "4", "--n", "9"]));
    let i: IndepOut = round_trip(&json(&["indep", "8", "27", "12", "18"]));
    assert_eq!(i.sigma, 2);
    round_trip::<UhsOut>(&json(&["uhs-check", "2^n + 3^n"]));
    let g: GapOut = round_trip(&json(&["gap-report", "T^2 + T", "X1 + X2"]));
    assert_eq!((g.w, g.c, g.k), (5, 0, 5));
    let s: SigmaposOut = round_trip(&json(&["gap-report", "--witness", "2,3"]));
    assert!(s.holds);
    let z: RuzsaOut = round_trip(&json(&["gap-report", "--set-a", "0,0;1,1", "--set-b", "0,0;1,1"]));
    assert_eq!(z.status, "inapplicable");
    let k: KminOut = round_trip(&json(&["kmin-search", "--sigma", "1", "--box", "-2,2", "--h-max", "2", "--f", "T^2", "--f", "T^3"]));
    assert_eq!((k.best.k, k.best.g.as_str(), k.best.f.as_str()), (1, "X1", "T^2"));
    let v: VecfactOut = round_trip(&json(&["vecfact", "--w", "2,2", "--gens", "1,0;0,1;1,1", "--j", "2,4"]));
    assert_eq!(v.factorizations.len(), 2);
    round_trip::<DigitsVerifyOut>(&json(&["digits-verify", "--family", "all", "--up-to", "6"]));

    let lines = json(&["digits-search", "--x", "3", "--m-max", "10"]);
    let mut lines: Vec<&str> = lines.lines().collect();
    let summary: DigitsSummary = round_trip(lines.pop().unwrap());
    assert!(summary.complete);
    assert_eq!(summary.solutions, lines.len());
    for l in lines {
        round_trip::<SolutionJson>(l);
    }
}

#[test]
fn exit_codes() {
    let out = cli(&["expand", "1 + * 2"]);
    assert_eq!(out.code, 1);
    let err: ErrorJson = round_trip(&out.stdout);
    assert_eq!((err.kind.as_str(), err.span), ("parse", Some(SpanJson { start: 4, end: 5 })));
    assert!(out.stderr.contains("    ^"), "{}", out.stderr);

    assert_eq!(cli(&["no-such-command"]).code, 2);
    assert_eq!(cli(&["vandermonde", "--d", "3"]).code, 2);
    assert_eq!(cli(&["gap-report"]).code, 2);
    assert_eq!(cli(&["--threads", "0", "vandermonde", "--d", "3", "--n", "4"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);

    let out = cli(&["digits-verify", "--family", "5last-2", "--param", "3"]);
    assert_eq!(out.code, 1);
    assert_eq!(round_trip::<ErrorJson>(&out.stdout).kind, "domain");
    let out = cli(&["oracle-search", "--d", "2", "--k", "5", "--max-deg", "40"]);
    assert_eq!(round_trip::<ErrorJson>(&out.stdout).kind, "bound");
    assert_eq!(cli(&["uhs-check", "--file", "/nonexistent/input"]).code, 1);
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_lacunary");
    let out = Command::new(bin).args(["--format", "json", "indep", "4", "8"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), json(&["indep", "4", "8"]));
    let out = Command::new(bin).args(["expand", "1 +"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_data_file_matches_builtin_rows() {
    assert_eq!(tables_data::SHIPPED, tables_data::render_file(&tables_data::builtin_file()));
    let rows = tables_data::parse_file(tables_data::SHIPPED).unwrap();
    assert_eq!(rows, lacunary_core::classify::builtin_rows());
}

#[test]
fn data_file_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    let mut file = tables_data::builtin_file();
    // fix the documented typo of the first row; the sweep must then accept it
    file.rows[0].cells[2].formula = Some("1/256*xi1^4".into());
    std::fs::write(&path, tables_data::render_file(&file)).unwrap();
    let p = path.to_str().unwrap();
    let s: SweepOut = round_trip(&json(&["verify-tables", "--data", p]));
    assert!(!s.mismatches.iter().any(|m| m.row == "T1.1"));
    assert!(s.flagged_but_matching.contains(&"T1.1:xi4".to_string()));

    std::fs::write(&path, "{\"schema\":\"lacunary.tables.v1\",\"rows\":[],\"extra\":1}").unwrap();
    assert_eq!(cli(&["verify-tables", "--data", p]).code, 1);
}

#[test]
fn checkpoint_resume_reproduces_full_run() {
    let args = ["digits-search", "--x", "2", "--m-max", "16"];
    let full = json(&args);
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("search.json");
    let cp = cp.to_str().unwrap();

    let mut partial = args.to_vec();
    partial.extend(["--checkpoint", cp, "--max-shards", "5", "--threads", "2"]);
    let first = json(&partial);
    let summary: DigitsSummary = round_trip(first.lines().last().unwrap());
    assert!(!summary.complete);
    assert!(summary.shards_done >= 4 && summary.shards_done < summary.shards_total);
    let saved: DigitsCheckpoint = serde_json::from_str(&std::fs::read_to_string(cp).unwrap()).unwrap();
    assert_eq!(saved.solutions.len(), summary.solutions);

    let mut resume = args.to_vec();
    resume.extend(["--checkpoint", cp, "--threads", "3"]);
    assert_eq!(json(&resume), full);

    // a checkpoint from another search is refused
    let out = cli(&["digits-search", "--x", "3", "--m-max", "16", "--checkpoint", cp]);
    assert_eq!(out.code, 1);
}

#[test]
fn thread_count_does_not_change_output() {
    for args in [
        vec!["oracle-search", "--d", "2", "--k", "5", "--max-deg", "3"],
        vec!["kmin-search", "--sigma", "2", "--box", "-1,1", "--h-max", "3", "--f", "T^2"],
        vec!["digits-search", "--x", "2", "--m-max", "14"],
    ] {
        let one = json(&[&["--threads", "1"][..], &args[..]].concat());
        let many = json(&[&["--threads", "7"][..], &args[..]].concat());
        assert_eq!(one, many, "{args:?}");
    }
}

#[test]
fn kmin_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kmin.json");
    std::fs::write(&path, r#"{"sigma":2,"box":[-2,2],"h_max":3,"f":["T^2","T^3"]}"#).unwrap();
    let k: KminOut = round_trip(&json(&["kmin-search", "--config", path.to_str().unwrap()]));
    assert_eq!(k.best.k, 3);
    assert_eq!(k.config.coeffs, default_kmin_coeffs());
}

#[test]
fn leading_minus_is_an_expression() {
    let u: UhsOut = round_trip(&json(&["uhs-check", "-2^n + 5*3^n"]));
    assert_eq!(u.status, "UHS");
    let e: ExpandOut = round_trip(&json(&["expand", "-T^2", "--power", "2"]));
    assert_eq!(e.text, "T^4");
    let c: ComposeOut = round_trip(&json(&["compose", "-T", "-X1"]));
    assert_eq!(c.text, "X1");
}
