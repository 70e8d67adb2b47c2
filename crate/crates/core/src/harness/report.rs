use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::experiment::RunRecord;
use super::stats::{build_report, StatReport};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const STATS_FILE: &str = "stats.csv";
pub const CHART_FILE: &str = "treatments.svg";
pub const RUNS_DIR: &str = "runs";

pub fn summary_csv(runs: &[RunRecord]) -> String {
    let mut out =
        String::from("treatment,replicate,seed,sim_fitness_mm,real_fitness_mm,real_evals_used\n");
    for r in runs {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.result.treatment,
            r.replicate,
            r.result.seed,
            r.result.sim_fitness,
            r.result.real_fitness,
            r.result.real_evals_used
        );
    }
    out
}

/// One row per treatment. Welch columns are left empty when the test is
/// undefined (no transferability runs, or fewer than two runs).
pub fn stats_csv(report: &StatReport) -> String {
    let mut out =
        String::from("treatment,mean_real,sd_real,mean_sim,sd_sim,t_vs_transferability,df,p\n");
    for s in &report.treatments {
        let welch = s
            .vs_transferability
            .map(|w| format!("{},{},{}", w.t, w.df, w.p))
            .unwrap_or_else(|| ",,".into());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.treatment, s.mean_real, s.sd_real, s.mean_sim, s.sd_sim, welch
        );
    }
    out
}

/// Bar per treatment at its mean real fitness with +-1 sd whiskers.
pub fn render_bar_chart(report: &StatReport) -> String {
    const BAR_W: f64 = 60.0;
    const GAP: f64 = 30.0;
    const PLOT_H: f64 = 300.0;
    const TOP: f64 = 20.0;
    const LEFT: f64 = 50.0;
    let n = report.treatments.len().max(1) as f64;
    let width = LEFT + n * (BAR_W + GAP) + GAP;
    let height = TOP + PLOT_H + 60.0;
    let top_value = report
        .treatments
        .iter()
        .map(|s| s.mean_real + s.sd_real)
        .fold(1.0, f64::max);
    let scale = PLOT_H / top_value;
    let base = TOP + PLOT_H;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" data-mm-per-px="{}">
<title>Mean real fitness per treatment (mm)</title>
<line x1="{LEFT}" y1="{base}" x2="{width}" y2="{base}" stroke="black"/>
<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base}" stroke="black"/>
<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{top_value:.0}</text>"#,
        1.0 / scale,
        LEFT - 4.0,
        TOP + 4.0,
    );
    for (k, s) in report.treatments.iter().enumerate() {
        let x = LEFT + GAP + k as f64 * (BAR_W + GAP);
        let h = s.mean_real * scale;
        let cx = x + BAR_W / 2.0;
        let lo = base - (s.mean_real - s.sd_real).max(0.0) * scale;
        let hi = base - (s.mean_real + s.sd_real) * scale;
        let _ = writeln!(
            svg,
            r##"<rect class="bar" data-treatment="{t}" data-mean-real="{m}" x="{x}" y="{y}" width="{BAR_W}" height="{h}" fill="#4c78a8"/>
<line class="whisker" data-treatment="{t}" x1="{cx}" y1="{lo}" x2="{cx}" y2="{hi}" stroke="black"/>
<line x1="{a}" y1="{hi}" x2="{b}" y2="{hi}" stroke="black"/>
<line x1="{a}" y1="{lo}" x2="{b}" y2="{lo}" stroke="black"/>
<text x="{cx}" y="{ly}" font-family="sans-serif" font-size="9" text-anchor="middle">{t}</text>"##,
            t = s.treatment,
            m = s.mean_real,
            y = base - h,
            a = cx - 8.0,
            b = cx + 8.0,
            ly = base + 16.0,
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `runs/*.json`, `summary.csv`, `stats.csv` and the chart.
pub fn write_report(report: &StatReport, runs: &[RunRecord], dir: &Path) -> Result<()> {
    let runs_dir = dir.join(RUNS_DIR);
    fs::create_dir_all(&runs_dir).map_err(|e| Error::io(&runs_dir, e))?;
    for r in runs {
        let name = format!("{}-{:03}.json", r.result.treatment, r.replicate);
        let json = serde_json::to_string_pretty(r).map_err(|e| Error::Config(e.to_string()))?;
        write(&runs_dir, &name, &json)?;
    }
    write(dir, SUMMARY_FILE, &summary_csv(runs))?;
    write(dir, STATS_FILE, &stats_csv(report))?;
    write(dir, CHART_FILE, &render_bar_chart(report))
}

/// Reads every run record under `dir/runs`, sorted by treatment name then
/// replicate, and rebuilds the report.
pub fn load_runs(dir: &Path) -> Result<(Vec<RunRecord>, StatReport)> {
    let runs_dir = dir.join(RUNS_DIR);
    let entries = fs::read_dir(&runs_dir).map_err(|e| Error::io(&runs_dir, e))?;
    let mut runs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(&runs_dir, e))?.path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            runs.push(
                serde_json::from_str::<RunRecord>(&text).map_err(|e| Error::parse(&path, e))?,
            );
        }
    }
    if runs.is_empty() {
        return Err(Error::parse(runs_dir, "no run records found"));
    }
    runs.sort_by(|a, b| {
        (a.result.treatment.name(), a.replicate).cmp(&(b.result.treatment.name(), b.replicate))
    });
    let report = build_report(&runs);
    Ok((runs, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::ControlParams;
    use crate::treatments::{RunResult, Treatment};

    fn record(t: Treatment, replicate: usize, real: f64) -> RunRecord {
        RunRecord {
            replicate,
            result: RunResult {
                treatment: t,
                seed: 42,
                selected: ControlParams::center(),
                sim_fitness: 100.0,
                real_fitness: real,
                real_evals_used: 1,
                max_real_evals: 1,
                validation_evals: 0,
                transfers: vec![],
            },
        }
    }

    #[test]
    fn stats_leave_welch_empty_without_reference() {
        let runs = [
            record(Treatment::SimOnly, 0, 1.0),
            record(Treatment::SimOnly, 1, 2.0),
        ];
        let csv = stats_csv(&build_report(&runs));
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            "sim_only,1.5,0.7071067811865476,100,0,,,"
        );
    }

    #[test]
    fn chart_has_one_bar_per_treatment() {
        let runs = [
            record(Treatment::SimOnly, 0, 1.0),
            record(Treatment::Transferability, 0, 900.0),
            record(Treatment::Transferability, 1, 1000.0),
        ];
        let svg = render_bar_chart(&build_report(&runs));
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let bars: Vec<_> = doc
            .descendants()
            .filter(|n| n.attribute("class") == Some("bar"))
            .collect();
        assert_eq!(bars.len(), 2);
        assert_eq!(bars[0].attribute("data-treatment"), Some("sim_only"));
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let runs = vec![
            record(Treatment::SimOnly, 1, 3.0),
            record(Treatment::SimOnly, 0, 2.5),
        ];
        let report = build_report(&runs);
        write_report(&report, &runs, dir.path()).unwrap();
        let (loaded, again) = load_runs(dir.path()).unwrap();
        assert_eq!(loaded[0].replicate, 0);
        assert_eq!(again, report);
    }
}
