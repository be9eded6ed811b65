use ringpir::experiment::records::read_json_lines;
use ringpir::experiment::{
    cmd_attack, cmd_roundtrip, write_output, AttackSummary, ExperimentConfig, OutputFormat, RoundtripSummary,
};
use ringpir::zm::NfConvention;

fn jsonl(records: &[ringpir::experiment::TrialRecord]) -> String {
    let mut buf = Vec::new();
    ringpir::experiment::records::write_json_lines(&mut buf, records).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn replays_are_byte_identical() {
    let cfg = ExperimentConfig { trials: 12, t: 9, seed: 77, ..Default::default() };
    let (a, _) = cmd_attack(&cfg).unwrap();
    let (b, _) = cmd_attack(&cfg).unwrap();
    assert_eq!(jsonl(&a), jsonl(&b));
    let (c, _) = cmd_roundtrip(&cfg).unwrap();
    let (d, _) = cmd_roundtrip(&cfg).unwrap();
    assert_eq!(jsonl(&c), jsonl(&d));
    let other = ExperimentConfig { seed: 78, ..cfg.clone() };
    assert_ne!(jsonl(&c), jsonl(&cmd_roundtrip(&other).unwrap().0));
}

#[test]
fn trials_do_not_depend_on_the_campaign_size() {
    let small = ExperimentConfig { trials: 3, t: 6, ..Default::default() };
    let large = ExperimentConfig { trials: 8, ..small.clone() };
    let (a, _) = cmd_roundtrip(&small).unwrap();
    let (b, _) = cmd_roundtrip(&large).unwrap();
    assert_eq!(a[..], b[..3]);
}

#[test]
fn summaries_are_recomputable_from_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("attack.jsonl");
    let cfg = ExperimentConfig {
        trials: 10,
        t: 9,
        nf_convention: NfConvention::Standard,
        out: Some(path.clone()),
        format: OutputFormat::Json,
        ..Default::default()
    };
    let (records, summary) = cmd_attack(&cfg).unwrap();
    write_output(&cfg, &records, &summary.rows()).unwrap();
    let back = read_json_lines(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, records);
    assert_eq!(AttackSummary::from_records(&back), summary);

    let (records, summary) = cmd_roundtrip(&ExperimentConfig { trials: 5, ..Default::default() }).unwrap();
    assert_eq!(RoundtripSummary::from_records(&records), summary);
}

#[test]
fn roundtrips_without_repair_are_counted_not_raised() {
    let cfg = ExperimentConfig { trials: 40, repair: false, ..Default::default() };
    let (_, summary) = cmd_roundtrip(&cfg).unwrap();
    assert_eq!(summary.trials, 40);
    assert!(summary.success_fraction < 1.0);
    assert_eq!(summary.errors, 0);
    assert_eq!(summary.recovered + summary.ambiguous + summary.wrong, 40);
}

#[test]
fn repair_on_the_fixed_suite_is_recorded_as_an_error() {
    let cfg = ExperimentConfig {
        trials: 1,
        t: 3,
        suite: ringpir::experiment::SuiteSpec::Named("worked".into()),
        ..Default::default()
    };
    let (records, summary) = cmd_roundtrip(&cfg).unwrap();
    assert_eq!(summary.errors, 1);
    assert!(matches!(records[0].outcome, ringpir::experiment::Outcome::Error { .. }));
}

#[test]
fn timing_is_opt_in() {
    let cfg = ExperimentConfig { trials: 2, timing: true, ..Default::default() };
    let (records, summary) = cmd_roundtrip(&cfg).unwrap();
    assert!(records.iter().all(|r| r.timing.is_some()));
    assert!(summary.timing.is_some());
}
