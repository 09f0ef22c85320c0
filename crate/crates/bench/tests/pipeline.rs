use std::fs;
use std::path::Path;

use ppnnn_bench::bench::{self, Grid, RunRecord};
use ppnnn_bench::plot;
use ppnnn_bench::registry::Registry;
use ppnnn_bench::{run_benchmark, Algorithm, Context, RunSpec};
use ppnnn_core::ClusterAssignment;

fn pairs_context(dir: &Path) -> Context {
    fs::write(dir.join("pairs.csv"), "0,0,a\n0,1,a\n10,0,b\n10,1,b\n").unwrap();
    let reg = Registry::from_json(r#"{"datasets":[{"name":"pairs","file":"pairs.csv","format":"csv"}]}"#).unwrap();
    Context::new(reg, dir, 2)
}

fn builtin(dir: &Path) -> Context {
    Context::new(Registry::builtin(), dir, 4)
}

fn small_ppnnn(dataset: &str) -> RunSpec {
    let mut spec = RunSpec::new(dataset, Algorithm::DpcPpnnn);
    spec.grid = Grid {
        c: Some(vec![0.5, 0.8]),
        boost_factor: Some(vec![1.5]),
        ..Default::default()
    };
    spec.seeds = Some(vec![0, 1, 2]);
    spec
}

#[test]
fn degenerate_kmeans_grid_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = pairs_context(dir.path());
    let mut spec = RunSpec::new("pairs", Algorithm::Kmeans);
    spec.grid.k = Some(vec![2]);
    spec.seeds = Some(vec![0]);
    let out = run_benchmark(&spec, &ctx).unwrap();
    assert_eq!(out.report.runs.len(), 1);
    let best = out.report.best.as_ref().unwrap();
    assert_eq!(best.scores.as_ref().unwrap().ari, 1.0);
    assert_eq!(best.seed, Some(0));
    let again = run_benchmark(&spec, &ctx).unwrap();
    assert_eq!(
        serde_json::to_string(&out.report).unwrap(),
        serde_json::to_string(&again.report).unwrap()
    );
}

#[test]
fn repeated_runs_write_identical_reports() {
    let data = tempfile::tempdir().unwrap();
    let ctx = builtin(data.path());
    let outs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for out in &outs {
        let mut outcomes = Vec::new();
        for spec in [small_ppnnn("two_moons"), RunSpec::new("two_moons", Algorithm::Dbscan)] {
            outcomes.push(run_benchmark(&spec, &ctx).unwrap());
        }
        bench::write_outputs(&outcomes, out.path(), false).unwrap();
    }
    let read = |d: &Path, f: &str| fs::read(d.join(f)).unwrap();
    assert_eq!(read(outs[0].path(), "report.json"), read(outs[1].path(), "report.json"));
    assert_eq!(read(outs[0].path(), "table.txt"), read(outs[1].path(), "table.txt"));
    let mut names: Vec<_> = fs::read_dir(outs[0].path().join("labels")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 6 + bench::DEFAULT_EPS_QUANTILES * bench::DEFAULT_MIN_PTS.len());
    for name in names {
        let f = Path::new("labels").join(&name);
        assert_eq!(
            fs::read(outs[0].path().join(&f)).unwrap(),
            fs::read(outs[1].path().join(&f)).unwrap()
        );
    }
}

#[test]
fn persisted_runs_replay_exactly() {
    let data = tempfile::tempdir().unwrap();
    let ctx = builtin(data.path());
    let out = tempfile::tempdir().unwrap();
    let mut outcomes = Vec::new();
    for algo in Algorithm::ALL {
        let mut spec = match algo {
            Algorithm::DpcPpnnn => small_ppnnn("jain"),
            _ => RunSpec::new("jain", algo),
        };
        if algo == Algorithm::Kmeans {
            spec.seeds = Some(vec![3, 4]);
        }
        outcomes.push(run_benchmark(&spec, &ctx).unwrap());
    }
    bench::write_outputs(&outcomes, out.path(), false).unwrap();
    for o in &outcomes {
        for rec in &o.records {
            let text = fs::read_to_string(out.path().join("runs").join(format!("{}.json", rec.run))).unwrap();
            let stored: RunRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(&stored, rec);
            let labels = fs::read_to_string(out.path().join("labels").join(format!("{}.csv", rec.run))).unwrap();
            let stored_labels = ClusterAssignment::read_csv(&labels).unwrap();
            assert_eq!(bench::replay(&stored, &ctx).unwrap().labels, stored_labels.labels, "{}", rec.run);
        }
    }
}

#[test]
fn best_run_dominates_every_run() {
    let data = tempfile::tempdir().unwrap();
    let ctx = builtin(data.path());
    for spec in [small_ppnnn("gauss2_unbalanced"), RunSpec::new("gauss2_unbalanced", Algorithm::Dpc)] {
        let out = run_benchmark(&spec, &ctx).unwrap();
        let best = out.report.best.as_ref().unwrap().scores.unwrap();
        let best_idx = out.best_index().unwrap();
        for (i, r) in out.report.runs.iter().enumerate() {
            let s = r.scores.as_ref().unwrap();
            assert!(best.ari > s.ari || (best.ari == s.ari && best.ami >= s.ami));
            if i < best_idx {
                assert!(bench::better(&best, s), "earlier run {i} ties the best");
            }
        }
    }
}

#[test]
fn best_plot_has_one_colour_per_cluster() {
    let data = tempfile::tempdir().unwrap();
    let ctx = builtin(data.path());
    let out = tempfile::tempdir().unwrap();
    let outcome = run_benchmark(&small_ppnnn("blobs"), &ctx).unwrap();
    bench::write_outputs(std::slice::from_ref(&outcome), out.path(), false).unwrap();
    let best = outcome.best_index().unwrap();
    let asg = &outcome.labels[best];
    let svg = fs::read_to_string(out.path().join("plots").join(format!("{}.svg", outcome.records[best].run))).unwrap();
    let fills = plot::point_fills(&svg);
    let noise = usize::from(asg.noise_count() > 0);
    assert_eq!(fills.len(), asg.cluster_count() + noise);
    assert_eq!(svg.matches(r#"class="center""#).count(), asg.centers_used.len());
    let plots = fs::read_dir(out.path().join("plots")).unwrap().count();
    assert_eq!(plots, 1);
}
