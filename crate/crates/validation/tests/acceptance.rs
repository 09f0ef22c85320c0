//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p ppnnn-validation --test acceptance`.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ppnnn_bench::bench::{self, Grid};
use ppnnn_bench::registry::{self, Registry};
use ppnnn_bench::{run_benchmark, Algorithm, Context, RunSpec};
use ppnnn_core::centers::{self, SpreadMode};
use ppnnn_core::density::{self, DensityProfile};
use ppnnn_core::metrics;
use ppnnn_core::neighborhood::{NeighborOrder, NeighborhoodIndex, NnnMode};
use ppnnn_core::propagation::{self, PropagationConfig};
use ppnnn_core::{Dataset, NOISE};
use rand::{Rng, SeedableRng};
use ppnnn_validation as oracle;
use rand_chacha::ChaCha8Rng;

type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    let grid = rng.random_bool(0.2);
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if grid {
                        rng.random_range(0..8) as f64
                    } else {
                        rng.random_range(-10.0..10.0)
                    }
                })
                .collect()
        })
        .collect()
}

fn dataset(points: &[Vec<f64>]) -> Dataset {
    Dataset::from_rows("random", points.to_vec(), None).unwrap()
}

fn context() -> Context {
    let jobs = std::thread::available_parallelism().map_or(4, |n| n.get());
    Context::new(Registry::builtin(), registry::default_data_dir(), jobs)
}

fn best_ari(ctx: &Context, spec: &RunSpec) -> (f64, String) {
    let out = run_benchmark(spec, ctx).unwrap_or_else(|e| panic!("{} {}: {e}", spec.dataset, spec.algorithm.id()));
    let ari = out
        .report
        .best
        .as_ref()
        .and_then(|b| b.scores.as_ref())
        .map_or(f64::NAN, |s| s.ari);
    (ari, out.report.source.to_string())
}

fn nnn_correctness() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.random_range(5..=100);
        let d = rng.random_range(1..=5);
        let pts = random_points(&mut rng, n, d);
        let dm = dataset(&pts).pairwise_distances();
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&dm), NnnMode::Exact);
        let dd: Vec<Vec<f64>> = (0..n).map(|i| dm.row(i).to_vec()).collect();
        let (lambda, sets) = oracle::natural_eigenvalue(&dd);
        let same_sets = (0..n).all(|i| idx.nnn[i].iter().copied().collect::<BTreeSet<_>>() == sets[i]);
        if idx.lambda != lambda || !same_sets {
            mismatches += 1;
        }
    }
    let took = start.elapsed();
    verdict(
        mismatches == 0 && took < Duration::from_secs(60),
        format!("{mismatches} mismatches over 200 datasets in {:.1}s", took.as_secs_f64()),
    )
}

fn metric_correctness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(2..=30);
        let ka = rng.random_range(1..=n.min(8));
        let kb = rng.random_range(1..=n.min(8));
        let t: Vec<usize> = (0..n).map(|_| rng.random_range(0..ka)).collect();
        let p: Vec<i32> = (0..n).map(|_| rng.random_range(-1..kb as i32)).collect();
        let s = metrics::score(&t, &p).unwrap();
        worst = worst
            .max((s.ari - oracle::ari_pairs(&t, &p)).abs())
            .max((s.fmi - oracle::fmi_pairs(&t, &p)).abs())
            .max((s.ami - oracle::ami_direct(&t, &p)).abs());
    }
    let (mut ari_sum, mut ami_sum) = (0.0, 0.0);
    for _ in 0..1000 {
        let t: Vec<u8> = (0..60).map(|_| rng.random_range(0..3)).collect();
        let p: Vec<u8> = (0..60).map(|_| rng.random_range(0..3)).collect();
        let s = metrics::score(&t, &p).unwrap();
        ari_sum += s.ari;
        ami_sum += s.ami;
    }
    let (ari_mean, ami_mean) = (ari_sum / 1000.0, ami_sum / 1000.0);
    verdict(
        worst <= 1e-10 && ari_mean.abs() <= 0.02 && ami_mean.abs() <= 0.02,
        format!("max oracle deviation {worst:.1e}; chance means ARI {ari_mean:+.4}, AMI {ami_mean:+.4}"),
    )
}

fn benchmark_reproduction(ctx: &Context) -> Verdict {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut high = 0;
    for name in ["jain", "3-spiral", "cassini", "dartboard1", "shapes"] {
        let (ari, source) = best_ari(ctx, &RunSpec::new(name, Algorithm::DpcPpnnn));
        if ari >= 0.95 {
            high += 1;
        }
        lines.push(format!("{name} {ari:.4} [{source}]"));
    }
    let (r15, source) = best_ari(ctx, &RunSpec::new("r15", Algorithm::DpcPpnnn));
    lines.push(format!("r15 {r15:.4} [{source}]"));
    let took = start.elapsed();
    verdict(
        high >= 4 && r15 >= 0.90 && took < Duration::from_secs(600),
        format!(
            "{high}/5 at ARI >= 0.95, R15 {r15:.4} (need 0.90), {:.0}s; {}",
            took.as_secs_f64(),
            lines.join("; ")
        ),
    )
}

fn baseline_sanity(ctx: &Context) -> Verdict {
    let km = |name: &str| best_ari(ctx, &RunSpec::new(name, Algorithm::Kmeans));
    let db = |name: &str| best_ari(ctx, &RunSpec::new(name, Algorithm::Dbscan));
    let (km_r15, s1) = km("r15");
    let (km_dart, s2) = km("dartboard1");
    let (db_dart, _) = db("dartboard1");
    let (db_cas, s3) = db("cassini");
    verdict(
        km_r15 >= 0.95 && km_dart <= 0.10 && db_dart >= 0.99 && db_cas >= 0.99,
        format!(
            "K-means R15 {km_r15:.4} [{s1}], K-means Dartboard1 {km_dart:.4} [{s2}], DBSCAN Dartboard1 {db_dart:.4}, DBSCAN Cassini {db_cas:.4} [{s3}]"
        ),
    )
}

fn counterexamples(ctx: &Context) -> Verdict {
    let mut ok = true;
    let mut dpc_lower = false;
    let mut parts = Vec::new();
    for name in ["gauss2_unbalanced", "two_moons"] {
        let (ppnnn, source) = best_ari(ctx, &RunSpec::new(name, Algorithm::DpcPpnnn));
        let mut dpc_spec = RunSpec::new(name, Algorithm::Dpc);
        dpc_spec.grid = Grid {
            k: Some(vec![2]),
            ..Default::default()
        };
        let (dpc, _) = best_ari(ctx, &dpc_spec);
        ok &= ppnnn >= 0.95;
        dpc_lower |= dpc < ppnnn;
        parts.push(format!("{name}: DPC-PPNNN {ppnnn:.4}, DPC {dpc:.4} [{source}]"));
    }
    verdict(ok && dpc_lower, parts.join("; "))
}

fn propagation_invariants(ctx: &Context) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut mismatches = 0;
    for case in 0..100u64 {
        let n = rng.random_range(3..=200);
        let d = rng.random_range(1..=4);
        let pts = random_points(&mut rng, n, d);
        let dm = dataset(&pts).pairwise_distances();
        let mode = if case % 2 == 0 { NnnMode::Exact } else { NnnMode::Logarithmic };
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&dm), mode);
        let profile = DensityProfile::from_nnn(&dm, &idx, false);
        let sel = centers::select(&profile, SpreadMode::StdDev);
        let cfg = PropagationConfig {
            always_infect: true,
            seed: case,
            ..Default::default()
        };
        let asg = propagation::propagate(&idx, &profile, &sel, &cfg).unwrap();
        let flood = oracle::flood_labels(&idx.nnn, &profile.rho, &sel.centers);
        let fallback: BTreeSet<usize> = asg.fallback_assigned.iter().copied().collect();
        let agrees = (0..n).all(|i| match flood[i] {
            Some(l) => asg.labels[i] == l as i32 && !fallback.contains(&i),
            None => asg.labels[i] == NOISE || fallback.contains(&i),
        });
        if !agrees {
            mismatches += 1;
        }
    }

    let dirs: Vec<tempfile::TempDir> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for dir in &dirs {
        let mut outcomes = Vec::new();
        for algo in Algorithm::ALL {
            outcomes.push(run_benchmark(&RunSpec::new("two_moons", algo), ctx).unwrap());
        }
        bench::write_outputs(&outcomes, dir.path(), true).unwrap();
    }
    let trees: Vec<Vec<(String, Vec<u8>)>> = dirs.iter().map(|d| snapshot(d.path())).collect();
    let identical = trees.windows(2).all(|w| w[0] == w[1]) && !trees[0].is_empty();
    verdict(
        mismatches == 0 && identical,
        format!(
            "{mismatches} reachability mismatches over 100 datasets; 3 pipeline runs {} ({} files each, timings excluded)",
            if identical { "byte-identical" } else { "DIFFER" },
            trees[0].len()
        ),
    )
}

/// Every output file except wall-clock timings, keyed by relative path.
fn snapshot(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n != "timings.json") {
                let rel = path.strip_prefix(root).unwrap().display().to_string();
                out.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn gamma_orders(base: &Dataset) -> Vec<Vec<usize>> {
    [0.01, 1.0, 100.0]
        .iter()
        .map(|&s| {
            let dm = base.scaled(s).pairwise_distances();
            let idx = NeighborhoodIndex::search(&NeighborOrder::build(&dm), NnnMode::Exact);
            DensityProfile::from_nnn(&dm, &idx, false).gamma_order()
        })
        .collect()
}

fn order_changes(base: &Dataset) -> bool {
    let orders = gamma_orders(base);
    orders[0] != orders[1] || orders[1] != orders[2]
}

fn density_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut order_breaks = 0;
    let mut lattice_breaks = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(5..=100);
        let d = rng.random_range(1..=5);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(-10.0..10.0)).collect()).collect();
        let base = dataset(&pts);
        order_breaks += usize::from(order_changes(&base));
        let lattice: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|v| (v / 2.5).round()).collect()).collect();
        lattice_breaks += usize::from(order_changes(&dataset(&lattice)));

        let dm = base.pairwise_distances();
        let dd: Vec<Vec<f64>> = (0..n).map(|i| dm.row(i).to_vec()).collect();
        let dc = rng.random_range(0.5..6.0);
        let pairs = [
            (density::rho_gaussian(&dm, dc).unwrap(), oracle::rho_gaussian(&dd, dc)),
            (density::rho_cutoff(&dm, dc).unwrap(), oracle::rho_cutoff(&dd, dc)),
        ];
        for (got, want) in pairs {
            for (a, b) in got.iter().zip(&want) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    verdict(
        order_breaks == 0 && worst <= 1e-12,
        format!(
            "{order_breaks}/50 datasets change gamma order under scaling; max kernel deviation {worst:.1e} \
             (not scored: {lattice_breaks}/50 integer-lattice copies change order, since exact ties do not survive rescaling in floating point)"
        ),
    )
}

fn main() -> ExitCode {
    let ctx = context();
    let criteria: Vec<(&str, Check)> = vec![
        ("1 NNN correctness", Box::new(nnn_correctness)),
        ("2 metric correctness", Box::new(metric_correctness)),
        ("3 benchmark reproduction", Box::new(|| benchmark_reproduction(&ctx))),
        ("4 baseline sanity", Box::new(|| baseline_sanity(&ctx))),
        ("5 counterexample behaviour", Box::new(|| counterexamples(&ctx))),
        ("6 propagation invariants", Box::new(|| propagation_invariants(&ctx))),
        ("7 density properties", Box::new(density_properties)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let v = check();
        println!("{} criterion {name}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        if !v.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
