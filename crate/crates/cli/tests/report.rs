use qthalf_cli::{emit_report, Kind, Metric, Report, RunConfig, Series};

#[test]
fn empty_report_is_valid_json() {
    let config = RunConfig::default();
    let report = Report::new(&config, Vec::new(), Vec::new());
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v["metrics"], serde_json::json!([]));
    assert_eq!(v["passed"], serde_json::json!(true));
    assert_eq!(v["kind"], serde_json::json!("invariants"));
    assert_eq!(v["provenance"]["seed"], serde_json::json!(42));
    assert_eq!(v["provenance"]["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn metric_relations() {
    assert!(Metric::at_most("a", 1.0, 1.0, "s").passed);
    assert!(!Metric::at_most("a", 1.0 + 1e-15, 1.0, "s").passed);
    assert!(Metric::at_least("a", 2.0, 1.9, "s").passed);
    assert!(Metric::within("a", -0.2, -0.25, 0.15, "s").passed);
    assert!(!Metric::within("a", -0.45, -0.25, 0.15, "s").passed);
    assert!(!Metric::at_most("a", f64::NAN, 1.0, "s").passed);
    let config = RunConfig::default();
    let failing = Report::new(&config, vec![Metric::at_most("x", 2.0, 1.0, "s")], Vec::new());
    assert!(!failing.passed);
}

#[test]
fn files_and_csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::default();
    config.run.kind = Kind::Simulate;
    let mut series = Series::new("diagnostics", &["t", "energy"]);
    series.push(vec![0.0, 1.5]);
    series.push(vec![0.5, 0.25]);
    let mut report = Report::new(&config, vec![Metric::at_most("x", 0.5, 1.0, "s")], vec![series]);
    report.attachments.push(("blob.bin".into(), vec![1, 2, 3]));
    let written = emit_report(&report, &config, dir.path()).unwrap();
    let names: Vec<String> = written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["report.json", "config.toml", "diagnostics.csv", "blob.bin"]);

    let csv = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(csv, "t,energy\n0e0,1.5e0\n5e-1,2.5e-1\n");
    let echoed = RunConfig::load(&dir.path().join("config.toml")).unwrap();
    assert_eq!(echoed, config);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["series"], serde_json::json!(["diagnostics.csv"]));
    assert_eq!(std::fs::read(dir.path().join("blob.bin")).unwrap(), [1, 2, 3]);
}

#[test]
fn unwritable_directory_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("occupied");
    std::fs::write(&file, b"x").unwrap();
    let config = RunConfig::default();
    let report = Report::new(&config, Vec::new(), Vec::new());
    let err = emit_report(&report, &config, &file.join("sub")).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("occupied"), "{err}");
}
