//! Named datasets: downloadable benchmark files, built-in generators, and the
//! stand-in generator used when a benchmark file is absent.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ppnnn_core::dataset::{CsvOptions, LabelColumn};
use ppnnn_core::Dataset;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::synth::{self, SynthKind, SynthParams};

const BUILTIN_MANIFEST: &str = include_str!("../datasets.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    #[default]
    Arff,
    /// Headerless CSV with the class in the last column.
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    /// Hex SHA-256 of the downloaded file, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    #[serde(default)]
    pub format: FileFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub records: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<usize>,
    #[serde(default)]
    pub real_world: bool,
    /// Generator used in place of the file (stand-in) or as the sole source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stand_in: Option<SynthKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthKind>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Registry {
    #[serde(default)]
    pub base_url: String,
    pub datasets: Vec<DatasetEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    File { path: String },
    Generated { generator: SynthKind, seed: u64 },
    StandIn { generator: SynthKind, seed: u64 },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::File { path } => write!(f, "file {path}"),
            Source::Generated { generator, seed } => write!(f, "generator {} (seed {seed})", generator.name()),
            Source::StandIn { generator, seed } => {
                write!(f, "synthetic stand-in {} (seed {seed})", generator.name())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub entry: DatasetEntry,
    pub dataset: Dataset,
    pub source: Source,
}

/// Seed for generated datasets; fixed so that every run sees the same points.
pub const DATA_SEED: u64 = 0;

impl Registry {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_MANIFEST).expect("embedded manifest parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let reg: Registry = serde_json::from_str(text)?;
        for e in &reg.datasets {
            if e.file.is_none() && e.synth.is_none() {
                return Err(BenchError::Config(format!(
                    "manifest entry {:?} has neither a file nor a generator",
                    e.name
                )));
            }
        }
        Ok(reg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.datasets.iter().map(|e| e.name.as_str())
    }

    pub fn get(&self, name: &str) -> Result<&DatasetEntry> {
        let key = name.to_ascii_lowercase();
        self.datasets
            .iter()
            .find(|e| e.name == key)
            .ok_or_else(|| BenchError::Dataset(format!("unknown dataset {name:?}")))
    }

    pub fn url(&self, entry: &DatasetEntry) -> Option<String> {
        entry.url.as_ref().map(|u| u.replace("{base}", &self.base_url))
    }

    /// Loads `name` from `data_dir`, falling back to its stand-in generator.
    pub fn resolve(&self, name: &str, data_dir: &Path) -> Result<Resolved> {
        let entry = self.get(name)?.clone();
        if let Some(kind) = entry.synth {
            let dataset = synth::generate(kind, &SynthParams::default(), DATA_SEED)?.with_name(&entry.name);
            return Ok(Resolved {
                entry,
                dataset,
                source: Source::Generated {
                    generator: kind,
                    seed: DATA_SEED,
                },
            });
        }
        let file = entry.file.as_deref().expect("validated in from_json");
        let path = data_dir.join(file);
        if path.exists() {
            let dataset = load_file(&path, entry.format)?.with_name(&entry.name);
            check_shape(&entry, &dataset)?;
            return Ok(Resolved {
                entry,
                dataset,
                source: Source::File {
                    path: path.display().to_string(),
                },
            });
        }
        match entry.stand_in {
            Some(kind) => {
                log::warn!("{} not found, using synthetic stand-in {}", path.display(), kind.name());
                let dataset = synth::generate(kind, &SynthParams::default(), DATA_SEED)?.with_name(&entry.name);
                Ok(Resolved {
                    entry,
                    dataset,
                    source: Source::StandIn {
                        generator: kind,
                        seed: DATA_SEED,
                    },
                })
            }
            None => Err(BenchError::Dataset(format!(
                "{} not found; run `ppnnn fetch-datasets` or place the file there",
                path.display()
            ))),
        }
    }
}

fn check_shape(entry: &DatasetEntry, ds: &Dataset) -> Result<()> {
    if entry.attributes.is_some_and(|d| d != ds.dim()) {
        return Err(BenchError::Dataset(format!(
            "{}: expected {} attributes, file has {}",
            entry.name,
            entry.attributes.unwrap_or_default(),
            ds.dim()
        )));
    }
    if entry.records.is_some_and(|n| n != ds.len()) {
        log::warn!(
            "{}: expected {} records, file has {}",
            entry.name,
            entry.records.unwrap_or_default(),
            ds.len()
        );
    }
    if let (Some(k), Some(found)) = (entry.clusters, ds.class_count()) {
        if k != found {
            log::warn!("{}: expected {k} classes, file has {found}", entry.name);
        }
    }
    Ok(())
}

/// Reads a labelled dataset; the class is the last column.
pub fn load_file(path: &Path, format: FileFormat) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    let body = match format {
        FileFormat::Arff => arff_body(&text)?,
        FileFormat::Csv => text,
    };
    let columns = body
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').count())
        .ok_or_else(|| BenchError::Dataset(format!("{}: no data rows", path.display())))?;
    if columns < 2 {
        return Err(BenchError::Dataset(format!(
            "{}: need at least one feature and a class column",
            path.display()
        )));
    }
    let options = CsvOptions {
        has_header: false,
        label_column: Some(LabelColumn::Index(columns - 1)),
        ..Default::default()
    };
    Dataset::read_csv(name, body.as_bytes(), &options).map_err(|e| BenchError::Dataset(format!("{}: {e}", path.display())))
}

/// The `@data` section of an ARFF file as plain CSV.
pub fn arff_body(text: &str) -> Result<String> {
    let mut in_data = false;
    let mut out = String::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            if line.to_ascii_lowercase().starts_with("@data") {
                in_data = true;
            }
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(|c| c.trim().trim_matches(|q| q == '\'' || q == '"')).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    if !in_data {
        return Err(BenchError::Dataset("ARFF file has no @data section".into()));
    }
    Ok(out)
}

pub fn default_data_dir() -> PathBuf {
    std::env::var_os("PPNNN_DATA_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("data"))
}
