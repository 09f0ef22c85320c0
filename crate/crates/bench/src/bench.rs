//! Grid × seed benchmark runs, best-run selection and report artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use ppnnn_core::baselines::{self, DbscanParams, DpcParams, Kernel, KmeansParams};
use ppnnn_core::dataset::distance_percentile;
use ppnnn_core::metrics::{self, Scores};
use ppnnn_core::pipeline::{PpnnnOptions, Prepared};
use ppnnn_core::{ClusterAssignment, Dataset, DistanceMatrix, PropagationConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::plot;
use crate::registry::{Registry, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    DpcPpnnn,
    Dpc,
    Kmeans,
    Dbscan,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Self::DpcPpnnn, Self::Dpc, Self::Kmeans, Self::Dbscan];

    pub fn id(self) -> &'static str {
        match self {
            Self::DpcPpnnn => "dpc-ppnnn",
            Self::Dpc => "dpc",
            Self::Kmeans => "kmeans",
            Self::Dbscan => "dbscan",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Self::DpcPpnnn => "DPC-PPNNN",
            Self::Dpc => "DPC",
            Self::Kmeans => "K-means",
            Self::Dbscan => "DBSCAN",
        }
    }

    /// Seeds used when a spec gives none; deterministic methods run once.
    pub fn default_seeds(self) -> Vec<u64> {
        match self {
            Self::DpcPpnnn => (0..10).collect(),
            Self::Kmeans => (0..20).collect(),
            Self::Dpc | Self::Dbscan => vec![0],
        }
    }

    fn seeded(self) -> bool {
        matches!(self, Self::DpcPpnnn | Self::Kmeans)
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dpc-ppnnn" | "ppnnn" => Ok(Self::DpcPpnnn),
            "dpc" => Ok(Self::Dpc),
            "kmeans" | "k-means" => Ok(Self::Kmeans),
            "dbscan" => Ok(Self::Dbscan),
            other => Err(BenchError::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Per-algorithm parameter ranges. Unset ranges take the defaults below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub c: Option<Vec<f64>>,
    pub boost_factor: Option<Vec<f64>>,
    pub boost_checks: Option<usize>,
    pub d_c_percentile: Option<Vec<f64>>,
    pub kernel: Option<Kernel>,
    /// Cluster counts for DPC and K-means; defaults to the gold class count.
    pub k: Option<Vec<usize>>,
    pub max_iters: Option<usize>,
    pub eps: Option<Vec<f64>>,
    /// Number of pairwise-distance quantiles used as the DBSCAN eps grid.
    pub eps_quantiles: Option<usize>,
    pub min_pts: Option<Vec<usize>>,
}

pub const DEFAULT_C: [f64; 6] = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const DEFAULT_BOOST: [f64; 3] = [1.0, 1.5, 2.0];
pub const DEFAULT_PERCENTILES: [f64; 6] = [1.0, 1.2, 1.4, 1.6, 1.8, 2.0];
pub const DEFAULT_MIN_PTS: [usize; 4] = [3, 4, 5, 10];
pub const DEFAULT_EPS_QUANTILES: usize = 20;
/// DBSCAN eps quantiles run geometrically from this fraction of all pair
/// distances up to `EPS_Q_HI`.
pub const EPS_Q_LO: f64 = 0.0005;
pub const EPS_Q_HI: f64 = 0.10;

/// Geometric quantile levels for the DBSCAN eps grid.
pub fn eps_quantile_levels(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![EPS_Q_HI],
        _ => (0..count)
            .map(|i| EPS_Q_LO * (EPS_Q_HI / EPS_Q_LO).powf(i as f64 / (count - 1) as f64))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub dataset: String,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    /// Min-max normalisation; defaults to on for real-world datasets only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
    #[serde(default)]
    pub options: PpnnnOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunSpec {
    pub fn new(dataset: impl Into<String>, algorithm: Algorithm) -> Self {
        Self {
            dataset: dataset.into(),
            algorithm,
            grid: Grid::default(),
            seeds: None,
            normalize: None,
            options: PpnnnOptions::default(),
            out: None,
        }
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.seeds.clone().unwrap_or_else(|| self.algorithm.default_seeds())
    }
}

/// Parameters of one grid cell; together with the dataset and seed this
/// replays a run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum CellParams {
    DpcPpnnn {
        c: f64,
        boost_factor: f64,
        boost_checks: Option<usize>,
        options: PpnnnOptions,
    },
    Dpc(DpcParams),
    Kmeans {
        k: usize,
        max_iters: usize,
    },
    Dbscan {
        #[serde(flatten)]
        params: DbscanParams,
        #[serde(skip_serializing_if = "Option::is_none")]
        quantile: Option<f64>,
    },
}

impl CellParams {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            Self::DpcPpnnn { .. } => Algorithm::DpcPpnnn,
            Self::Dpc(_) => Algorithm::Dpc,
            Self::Kmeans { .. } => Algorithm::Kmeans,
            Self::Dbscan { .. } => Algorithm::Dbscan,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Self::DpcPpnnn { c, boost_factor, .. } => format!("C={c} boost={boost_factor}"),
            Self::Dpc(p) => format!("d_c={}% k={}", p.d_c_percentile, p.k),
            Self::Kmeans { k, .. } => format!("k={k}"),
            Self::Dbscan { params, .. } => format!("eps={:.4} min_pts={}", params.eps, params.min_pts),
        }
    }
}

fn require_nonempty<T: Clone>(name: &str, v: &Option<Vec<T>>, default: &[T]) -> Result<Vec<T>> {
    match v {
        Some(v) if v.is_empty() => Err(BenchError::Config(format!("grid {name} is empty"))),
        Some(v) => Ok(v.clone()),
        None => Ok(default.to_vec()),
    }
}

/// Expands the grid of `spec` over `ws` into concrete cells.
pub fn expand_grid(spec: &RunSpec, ws: &Workspace) -> Result<Vec<CellParams>> {
    let g = &spec.grid;
    let gold_k = ws.dataset.class_count();
    let ks = || -> Result<Vec<usize>> {
        match (&g.k, gold_k) {
            (Some(_), _) => require_nonempty("k", &g.k, &[]),
            (None, Some(k)) => Ok(vec![k]),
            (None, None) => Err(BenchError::Config(
                "k grid required for a dataset without gold labels".into(),
            )),
        }
    };
    let mut cells = Vec::new();
    match spec.algorithm {
        Algorithm::DpcPpnnn => {
            for c in require_nonempty("c", &g.c, &DEFAULT_C)? {
                for b in require_nonempty("boost_factor", &g.boost_factor, &DEFAULT_BOOST)? {
                    cells.push(CellParams::DpcPpnnn {
                        c,
                        boost_factor: b,
                        boost_checks: g.boost_checks,
                        options: spec.options,
                    });
                }
            }
        }
        Algorithm::Dpc => {
            for k in ks()? {
                for p in require_nonempty("d_c_percentile", &g.d_c_percentile, &DEFAULT_PERCENTILES)? {
                    cells.push(CellParams::Dpc(DpcParams {
                        d_c_percentile: p,
                        k,
                        kernel: g.kernel.unwrap_or_default(),
                    }));
                }
            }
        }
        Algorithm::Kmeans => {
            for k in ks()? {
                cells.push(CellParams::Kmeans {
                    k,
                    max_iters: g.max_iters.unwrap_or(300),
                });
            }
        }
        Algorithm::Dbscan => {
            let eps: Vec<(f64, Option<f64>)> = match &g.eps {
                Some(_) => require_nonempty("eps", &g.eps, &[])?.into_iter().map(|e| (e, None)).collect(),
                None => {
                    let count = g.eps_quantiles.unwrap_or(DEFAULT_EPS_QUANTILES);
                    if count == 0 {
                        return Err(BenchError::Config("grid eps_quantiles is zero".into()));
                    }
                    let sorted = ws.distances().sorted_pair_distances();
                    let mut seen = Vec::new();
                    for q in eps_quantile_levels(count) {
                        let e = distance_percentile(&sorted, q * 100.0);
                        if e > 0.0 && !seen.iter().any(|&(s, _)| s == e) {
                            seen.push((e, Some(q)));
                        }
                    }
                    seen
                }
            };
            for mp in require_nonempty("min_pts", &g.min_pts, &DEFAULT_MIN_PTS)? {
                for &(e, q) in &eps {
                    cells.push(CellParams::Dbscan {
                        params: DbscanParams { eps: e, min_pts: mp },
                        quantile: q,
                    });
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(BenchError::Config("parameter grid is empty".into()));
    }
    Ok(cells)
}

/// A dataset with whatever precomputation its algorithm needs.
pub struct Workspace {
    pub dataset: Dataset,
    pub source: Source,
    pub normalized: bool,
    distances: DistanceMatrix,
    prepared: Option<Prepared>,
}

impl Workspace {
    pub fn new(dataset: Dataset, source: Source, normalized: bool) -> Self {
        let distances = dataset.pairwise_distances();
        Self {
            dataset,
            source,
            normalized,
            distances,
            prepared: None,
        }
    }

    pub fn prepare(&mut self, options: &PpnnnOptions) {
        if self.prepared.is_none() {
            self.prepared = Some(Prepared::from_distances(self.distances.clone(), options));
        }
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    pub fn prepared(&self) -> Option<&Prepared> {
        self.prepared.as_ref()
    }

    /// Runs one cell.
    pub fn execute(&self, params: &CellParams, seed: u64) -> Result<ClusterAssignment> {
        Ok(match params {
            CellParams::DpcPpnnn {
                c,
                boost_factor,
                boost_checks,
                options,
            } => {
                let cfg = PropagationConfig {
                    c: *c,
                    boost_factor: *boost_factor,
                    boost_checks: *boost_checks,
                    seed,
                    ..Default::default()
                };
                match &self.prepared {
                    Some(p) => p.run(&cfg)?,
                    None => Prepared::from_distances(self.distances.clone(), options).run(&cfg)?,
                }
            }
            CellParams::Dpc(p) => baselines::dpc_cluster(&self.distances, p)?,
            CellParams::Kmeans { k, max_iters } => {
                baselines::kmeans_cluster(
                    &self.dataset,
                    &KmeansParams {
                        k: *k,
                        max_iters: *max_iters,
                        seed,
                        restarts: 1,
                    },
                )?
                .assignment
            }
            CellParams::Dbscan { params, .. } => baselines::dbscan_cluster(&self.distances, params)?,
        })
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: String,
    pub dataset: String,
    pub source: Source,
    pub normalized: bool,
    pub params: CellParams,
    /// `None` for deterministic algorithms.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub run: String,
    pub params: CellParams,
    pub seed: Option<u64>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub scores: Option<Scores>,
    pub clusters: usize,
    pub noise: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub source: Source,
    pub points: usize,
    pub dim: usize,
    pub classes: Option<usize>,
    pub normalized: bool,
    pub noise_convention: String,
    pub selection: String,
    pub best: Option<RunRow>,
    pub runs: Vec<RunRow>,
}

pub const SELECTION: &str = "max ARI, ties by AMI, then earliest run";
pub const NOISE_CONVENTION: &str = "noise points form one extra predicted cluster";

/// Wall-clock timings; kept apart from the report so that reports compare byte for byte.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub dataset: String,
    pub algorithm: Option<Algorithm>,
    pub setup_ms: f64,
    pub runs_ms: Vec<(String, f64)>,
    pub total_ms: f64,
}

/// A finished benchmark with the labelling of every run.
pub struct Outcome {
    pub report: EvalReport,
    pub records: Vec<RunRecord>,
    pub labels: Vec<ClusterAssignment>,
    pub timings: Timings,
    pub dataset: Dataset,
}

impl Outcome {
    pub fn best_index(&self) -> Option<usize> {
        let best = self.report.best.as_ref()?;
        self.report.runs.iter().position(|r| r.run == best.run)
    }
}

/// Shared settings for a batch of benchmark runs.
pub struct Context {
    pub registry: Registry,
    pub data_dir: PathBuf,
    pub jobs: usize,
}

impl Context {
    pub fn new(registry: Registry, data_dir: impl Into<PathBuf>, jobs: usize) -> Self {
        Self {
            registry,
            data_dir: data_dir.into(),
            jobs: jobs.max(1),
        }
    }

    pub fn workspace(&self, dataset: &str, normalize: Option<bool>) -> Result<Workspace> {
        let resolved = self.registry.resolve(dataset, &self.data_dir)?;
        let normalize = normalize.unwrap_or(resolved.entry.real_world);
        let ds = if normalize {
            let n = resolved.dataset.min_max_normalize();
            if !n.constant_columns.is_empty() {
                log::warn!("{dataset}: constant columns {:?} mapped to 0", n.constant_columns);
            }
            n.dataset
        } else {
            resolved.dataset
        };
        Ok(Workspace::new(ds, resolved.source, normalize))
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| BenchError::Config(format!("thread pool: {e}")))
    }
}

/// Strict "better than" under the selection order.
pub fn better(a: &Scores, b: &Scores) -> bool {
    a.ari > b.ari || (a.ari == b.ari && a.ami > b.ami)
}

pub fn run_benchmark(spec: &RunSpec, ctx: &Context) -> Result<Outcome> {
    let start = Instant::now();
    let mut ws = ctx.workspace(&spec.dataset, spec.normalize)?;
    let pool = ctx.pool()?;
    if spec.algorithm == Algorithm::DpcPpnnn {
        pool.install(|| ws.prepare(&spec.options));
    }
    let cells = expand_grid(spec, &ws)?;
    let seeds = spec.seeds();
    if seeds.is_empty() {
        return Err(BenchError::Config("seed list is empty".into()));
    }
    let seeds: Vec<Option<u64>> = if spec.algorithm.seeded() {
        seeds.into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    let name = ws.dataset.name().to_string();
    let jobs: Vec<(String, &CellParams, Option<u64>)> = cells
        .iter()
        .flat_map(|c| seeds.iter().map(move |&s| (c, s)))
        .enumerate()
        .map(|(i, (c, s))| (format!("{name}.{}.{i:04}", spec.algorithm.id()), c, s))
        .collect();
    let setup_ms = start.elapsed().as_secs_f64() * 1e3;

    let gold = ws.dataset.gold_labels().map(<[usize]>::to_vec);
    let results: Vec<Result<(ClusterAssignment, Option<Scores>, f64)>> = pool.install(|| {
        jobs.par_iter()
            .map(|(_, params, seed)| {
                let t = Instant::now();
                let asg = ws.execute(params, seed.unwrap_or(0))?;
                let scores = match &gold {
                    Some(g) => Some(metrics::score(g, &asg.labels)?),
                    None => None,
                };
                Ok((asg, scores, t.elapsed().as_secs_f64() * 1e3))
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(jobs.len());
    let mut records = Vec::with_capacity(jobs.len());
    let mut labels = Vec::with_capacity(jobs.len());
    let mut timings = Timings {
        dataset: name.clone(),
        algorithm: Some(spec.algorithm),
        setup_ms,
        ..Default::default()
    };
    let mut best: Option<usize> = None;
    for ((run, params, seed), res) in jobs.into_iter().zip(results) {
        let (asg, scores, ms) = res?;
        if let Some(s) = &scores {
            let replace = match best {
                None => true,
                Some(b) => better(s, rows.get(b).and_then(|r: &RunRow| r.scores.as_ref()).expect("scored")),
            };
            if replace {
                best = Some(rows.len());
            }
        }
        timings.runs_ms.push((run.clone(), ms));
        records.push(RunRecord {
            run: run.clone(),
            dataset: name.clone(),
            source: ws.source.clone(),
            normalized: ws.normalized,
            params: params.clone(),
            seed,
        });
        rows.push(RunRow {
            run,
            params: params.clone(),
            seed,
            scores,
            clusters: asg.cluster_count(),
            noise: asg.noise_count(),
        });
        labels.push(asg);
    }
    timings.total_ms = start.elapsed().as_secs_f64() * 1e3;

    let report = EvalReport {
        dataset: name,
        algorithm: spec.algorithm,
        source: ws.source.clone(),
        points: ws.dataset.len(),
        dim: ws.dataset.dim(),
        classes: ws.dataset.class_count(),
        normalized: ws.normalized,
        noise_convention: NOISE_CONVENTION.into(),
        selection: SELECTION.into(),
        best: best.map(|b| rows[b].clone()),
        runs: rows,
    };
    Ok(Outcome {
        report,
        records,
        labels,
        timings,
        dataset: ws.dataset,
    })
}

/// Re-executes a persisted run.
pub fn replay(record: &RunRecord, ctx: &Context) -> Result<ClusterAssignment> {
    let mut ws = ctx.workspace(&record.dataset, Some(record.normalized))?;
    if ws.source != record.source {
        log::warn!("{}: data source changed since the run was recorded", record.dataset);
    }
    if let CellParams::DpcPpnnn { options, .. } = &record.params {
        ws.prepare(options);
    }
    ws.execute(&record.params, record.seed.unwrap_or(0))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| BenchError::io(path, e))
}

fn fmt_score(v: Option<f64>) -> String {
    v.map_or_else(|| "     -".to_string(), |x| format!("{x:.4}"))
}

/// Text table grouped by dataset, one row per algorithm.
pub fn format_table(reports: &[EvalReport]) -> String {
    let mut datasets: Vec<&str> = Vec::new();
    for r in reports {
        if !datasets.contains(&r.dataset.as_str()) {
            datasets.push(&r.dataset);
        }
    }
    let mut out = String::new();
    for (i, d) in datasets.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let group: Vec<&EvalReport> = reports.iter().filter(|r| r.dataset == *d).collect();
        let _ = writeln!(out, "{d} ({}, n={}, d={})", group[0].source, group[0].points, group[0].dim);
        let _ = writeln!(out, "{:<12} {:>7} {:>7} {:>7}  {:>5}  best run", "Algorithm", "ARI", "AMI", "FMI", "noise");
        for r in group {
            match &r.best {
                Some(b) => {
                    let s = b.scores.as_ref();
                    let seed = b.seed.map(|s| format!(" seed={s}")).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "{:<12} {:>7} {:>7} {:>7}  {:>5}  {}{seed}",
                        r.algorithm.display_name(),
                        fmt_score(s.map(|s| s.ari)),
                        fmt_score(s.map(|s| s.ami)),
                        fmt_score(s.map(|s| s.fmi)),
                        b.noise,
                        b.params.summary(),
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{:<12} {:>7} {:>7} {:>7}  {:>5}  no gold labels ({} runs)",
                        r.algorithm.display_name(),
                        "-",
                        "-",
                        "-",
                        "-",
                        r.runs.len()
                    );
                }
            }
        }
    }
    out
}

/// Writes `report.json`, `table.txt`, `timings.json`, and per-run
/// `labels/`, `runs/` and `plots/` files under `out`.
pub fn write_outputs(outcomes: &[Outcome], out: &Path, plot_all: bool) -> Result<()> {
    let reports: Vec<&EvalReport> = outcomes.iter().map(|o| &o.report).collect();
    write(&out.join("report.json"), serde_json::to_string_pretty(&reports)? + "\n")?;
    let owned: Vec<EvalReport> = reports.iter().map(|r| (*r).clone()).collect();
    write(&out.join("table.txt"), format_table(&owned))?;
    let timings: Vec<&Timings> = outcomes.iter().map(|o| &o.timings).collect();
    write(&out.join("timings.json"), serde_json::to_string_pretty(&timings)? + "\n")?;
    for o in outcomes {
        let best = o.best_index();
        for (i, (rec, asg)) in o.records.iter().zip(&o.labels).enumerate() {
            let mut csv = Vec::new();
            asg.write_csv(&mut csv).map_err(|e| BenchError::io(out.join("labels"), e))?;
            write(&out.join("labels").join(format!("{}.csv", rec.run)), csv)?;
            write(
                &out.join("runs").join(format!("{}.json", rec.run)),
                serde_json::to_string_pretty(rec)? + "\n",
            )?;
            if plot_all || best == Some(i) {
                plot::emit_scatter(&o.dataset, asg, &out.join("plots").join(format!("{}.svg", rec.run)))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_levels_span() {
        let q = eps_quantile_levels(20);
        assert_eq!(q.len(), 20);
        assert!((q[0] - EPS_Q_LO).abs() < 1e-15);
        assert!((q[19] - EPS_Q_HI).abs() < 1e-12);
        assert!(q.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(eps_quantile_levels(1), vec![EPS_Q_HI]);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.id().parse::<Algorithm>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{}\"", a.id()));
        }
        assert!("spectral".parse::<Algorithm>().is_err());
    }

    #[test]
    fn selection_order() {
        let s = |ari, ami| Scores { ari, ami, fmi: 0.0 };
        assert!(better(&s(0.9, 0.1), &s(0.8, 0.9)));
        assert!(better(&s(0.9, 0.5), &s(0.9, 0.4)));
        assert!(!better(&s(0.9, 0.5), &s(0.9, 0.5)));
    }

    #[test]
    fn run_spec_json() {
        let spec: RunSpec = serde_json::from_str(
            r#"{"dataset":"jain","algorithm":"dpc-ppnnn","grid":{"c":[0.5]},"seeds":[1,2],"options":{"nnn_mode":"log","spread_mode":"var"}}"#,
        )
        .unwrap();
        assert_eq!(spec.grid.c, Some(vec![0.5]));
        assert_eq!(spec.seeds(), vec![1, 2]);
        assert!(serde_json::from_str::<RunSpec>(r#"{"dataset":"jain","algorithm":"dpc","grid":{"bogus":1}}"#).is_err());
    }
}
