mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use transferability::exec::Exec;
use transferability::harness::{
    load_runs, run_experiment, run_experiment_with, ExperimentConfig, CHART_FILE, STATS_FILE,
    SUMMARY_FILE,
};
use transferability::treatments::Treatment;

fn config(dir: &Path) -> ExperimentConfig {
    ExperimentConfig {
        treatments: vec![Treatment::Transferability, Treatment::SimOnly],
        out_dir: dir.to_path_buf(),
        ..ExperimentConfig::default()
    }
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn two_treatments_give_twenty_rows_and_recomputable_stats() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&config(dir.path())).unwrap();

    let summary = csv(&dir.path().join(SUMMARY_FILE));
    assert_eq!(summary.len(), 20);
    let mut real: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut sim: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for row in &summary {
        real.entry(row[0].clone())
            .or_default()
            .push(row[4].parse().unwrap());
        sim.entry(row[0].clone())
            .or_default()
            .push(row[3].parse().unwrap());
    }

    let stats = csv(&dir.path().join(STATS_FILE));
    assert_eq!(stats.len(), 2);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
    for row in &stats {
        let fields: Vec<f64> = row[1..5].iter().map(|f| f.parse().unwrap()).collect();
        assert!(fields.iter().all(|v| v.is_finite()));
        let (mr, vr) = common::mean_var(&real[&row[0]]);
        let (ms, vs) = common::mean_var(&sim[&row[0]]);
        assert!(close(fields[0], mr) && close(fields[1], vr.sqrt()));
        assert!(close(fields[2], ms) && close(fields[3], vs.sqrt()));
        let (t, df) = common::welch_by_hand(&real[&row[0]], &real["transferability"]);
        let t_csv: f64 = row[5].parse().unwrap();
        let df_csv: f64 = row[6].parse().unwrap();
        let p_csv: f64 = row[7].parse().unwrap();
        if row[0] == "transferability" {
            assert_eq!((t_csv, p_csv), (0.0, 1.0));
        } else {
            assert!(close(t_csv, t) && close(df_csv, df));
            assert!((p_csv - common::t_two_sided_p(t, df)).abs() < 1e-4);
        }
    }
}

#[test]
fn bar_heights_match_stats() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&config(dir.path())).unwrap();
    let svg = fs::read_to_string(dir.path().join(CHART_FILE)).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let mm_per_px: f64 = doc
        .root_element()
        .attribute("data-mm-per-px")
        .unwrap()
        .parse()
        .unwrap();
    let stats = csv(&dir.path().join(STATS_FILE));
    let bars: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("bar"))
        .collect();
    assert_eq!(bars.len(), stats.len());
    for row in &stats {
        let bar = bars
            .iter()
            .find(|b| b.attribute("data-treatment") == Some(row[0].as_str()))
            .unwrap();
        let mean: f64 = row[1].parse().unwrap();
        let h: f64 = bar.attribute("height").unwrap().parse().unwrap();
        assert!((h * mm_per_px - mean).abs() < 1e-6 * mean.max(1.0));
        assert_eq!(
            bar.attribute("data-mean-real")
                .unwrap()
                .parse::<f64>()
                .unwrap(),
            mean
        );
    }
}

#[test]
fn outputs_are_byte_identical_across_runs_and_schedulers() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment_with(&config(a.path()), Exec::Parallel).unwrap();
    run_experiment_with(&config(b.path()), Exec::Sequential).unwrap();
    for f in [SUMMARY_FILE, STATS_FILE, CHART_FILE] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn adding_a_treatment_leaves_other_runs_unchanged() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut small = config(a.path());
    small.treatments = vec![Treatment::SimOnly];
    small.replicates = 3;
    let mut big = config(b.path());
    big.treatments = vec![Treatment::SimOnly, Treatment::SurrogateIdw];
    big.replicates = 3;
    let x = run_experiment(&small).unwrap();
    let y = run_experiment(&big).unwrap();
    let only: Vec<_> = y
        .runs
        .iter()
        .filter(|r| r.result.treatment == Treatment::SimOnly)
        .cloned()
        .collect();
    assert_eq!(x.runs, only);
}

#[test]
fn report_round_trips_through_run_records() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_experiment(&config(dir.path())).unwrap();
    let (runs, report) = load_runs(dir.path()).unwrap();
    assert_eq!(runs, outcome.runs);
    assert_eq!(report, outcome.report);
}
