use cmcert::arith::Integer;
use cmcert_cli::report::{self, Format};
use cmcert_cli::{run_pipeline, summarize, FieldDossier, PipelineConfig, Status};
use std::process::Command;

fn small(bound: u64) -> PipelineConfig {
    PipelineConfig { disc_bound: Integer::from(bound), prec: 128, prec_cap: 512, ..PipelineConfig::default() }
}

fn exact_json(ds: &[FieldDossier]) -> String {
    serde_json::to_string(&ds.iter().map(|d| d.exact()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn single_field_bound() {
    let out = run_pipeline(&small(125)).unwrap();
    assert_eq!(out.dossiers.len(), 1);
    let d = &out.dossiers[0];
    assert_eq!(d.error, None);
    assert_eq!(d.status(), Status::Pass, "{:?}", d.checks);
    assert_eq!(out.shortlist, ["125"]);
}

#[test]
fn deterministic_across_jobs() {
    let a = run_pipeline(&small(20_000)).unwrap();
    let b = run_pipeline(&PipelineConfig { jobs: 3, ..small(20_000) }).unwrap();
    assert_eq!(a.dossiers.len(), 3);
    assert_eq!(exact_json(&a.dossiers), exact_json(&b.dossiers));
}

#[test]
fn cache_reproduces_dossiers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig { cache_dir: Some(dir.path().to_path_buf()), ..small(10_000) };
    let a = run_pipeline(&cfg).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    let b = run_pipeline(&cfg).unwrap();
    // reloaded dossiers are identical, timing included
    assert_eq!(serde_json::to_string(&a.dossiers).unwrap(), serde_json::to_string(&b.dossiers).unwrap());
    // reloaded balls keep their radii
    let (pa, pb) = (&a.dossiers[1].types[0].points[0], &b.dossiers[1].types[0].points[0]);
    assert_eq!(pa.log_chi10.mid, pb.log_chi10.mid);
    assert_eq!(pa.log_chi10.rad, pb.log_chi10.rad);
    // another precision is another key
    let c = run_pipeline(&PipelineConfig { prec: 160, ..cfg.clone() }).unwrap();
    assert_eq!(c.dossiers.len(), 2);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
}

#[test]
fn injected_fault_is_isolated() {
    let out = run_pipeline(&PipelineConfig { fault_disc: Some("8000".into()), ..small(20_000) }).unwrap();
    assert_eq!(out.dossiers.len(), 3);
    let bad: Vec<_> = out.dossiers.iter().filter(|d| d.error.is_some()).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].disc().to_string(), "8000");
    assert!(bad[0].error.as_ref().unwrap().contains("injected"));
    assert_eq!(out.status, Status::Undecided);
    assert!(out.dossiers.iter().filter(|d| d.error.is_none()).all(|d| d.class_group.is_some()));
}

#[test]
fn empty_report_is_valid() {
    let out = summarize(&PipelineConfig::default(), Vec::new());
    let dir = tempfile::tempdir().unwrap();
    for f in [Format::Json, Format::Csv, Format::Svg] {
        report::emit_report(&out, f, dir.path()).unwrap();
    }
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), report::SUMMARY_COLUMNS.len());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(v["fields"], 0);
    let svg = std::fs::read_to_string(dir.path().join("slack_ineq_a_y1y2.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn json_round_trip() {
    let out = run_pipeline(&small(10_000)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = report::emit_report(&out, Format::Json, dir.path()).unwrap();
    assert_eq!(files.len(), 3);
    for d in &out.dossiers {
        let s = std::fs::read_to_string(dir.path().join(format!("fields/{}.json", d.disc()))).unwrap();
        let back: FieldDossier = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), s);
    }
    let csv = report::summary_csv(&out.dossiers).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

fn cmcert(args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_cmcert")).args(args).env_remove("CM_CERT_CACHE").output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned())
}

#[test]
fn cli_exit_codes() {
    let (c, s) = cmcert(&["fields", "--disc-bound", "8000"]);
    assert_eq!(c, 0);
    assert_eq!(s.lines().count(), 2);
    let row: cmcert::fieldenum::FieldDbRow = serde_json::from_str(s.lines().next().unwrap()).unwrap();
    assert_eq!(row.record.disc_k, 125);
    // the constants criterion is a certified violation
    let (c, s) = cmcert(&["verify", "--suite", "constants"]);
    assert_eq!(c, 3, "{}", s);
    assert!(s.contains("constants") && s.contains("fail"));
    let (c, s) = cmcert(&["analytic", "--check", "delta-lemma", "--hi", "5000"]);
    assert_eq!(c, 0);
    assert!(s.contains("\"counterexamples\": []"));
    let (c, s) = cmcert(&["analytic", "--check", "main-bound"]);
    assert_eq!(c, 0);
    assert!(s.contains("\"branch\": 0"));
    let (c, s) = cmcert(&["verify", "--suite", "inequalities", "--disc-bound", "10000", "--prec", "128"]);
    assert_eq!(c, 0, "{}", s);
    let (c, _) = cmcert(&["reduce", "--prec", "1.5"]);
    assert_eq!(c, 1);
    let (c, _) = cmcert(&["fields", "--disc-bound", "100"]);
    assert_eq!(c, 1);
}

#[test]
fn cli_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (c, s) = cmcert(&["report", "--disc-bound", "10000", "--prec", "128", "--out-dir", d]);
    assert_eq!(c, 0, "{}", s);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["shortlist"], serde_json::json!(["125", "8000"]));
    for f in ["summary.json", "summary.csv", "chi10_normalization.csv", "fields/8000.json", "slack_ineq_c_z12.svg"] {
        assert!(dir.path().join(f).exists(), "{}", f);
    }
}
