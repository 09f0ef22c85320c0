//! Point sets, CSV ingestion, min-max normalisation and the dense
//! Euclidean distance matrix every other module works from.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point matrix with optional gold labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    dim: usize,
    /// Row-major, `n * dim` values.
    values: Vec<f64>,
    gold_labels: Option<Vec<usize>>,
    /// Original label strings, indexed by interned id.
    label_names: Option<Vec<String>>,
}

/// Which CSV column carries the gold label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub has_header: bool,
    pub label_column: Option<LabelColumn>,
    pub delimiter: u8,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            has_header: false,
            label_column: None,
            delimiter: b',',
        }
    }
}

/// Output of [`Dataset::min_max_normalize`].
#[derive(Debug, Clone)]
pub struct Normalized {
    pub dataset: Dataset,
    /// Columns with `max == min`; they were mapped to all zeros.
    pub constant_columns: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset from rows. Rows must be non-empty, equally sized and finite.
    pub fn from_rows(
        name: impl Into<String>,
        rows: Vec<Vec<f64>>,
        gold_labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::InvalidParameter("points must have at least one feature".into()));
        }
        let mut values = Vec::with_capacity(n * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::RaggedRows {
                    row: r,
                    expected: dim,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: r, column: c });
                }
            }
            values.extend_from_slice(row);
        }
        if let Some(labels) = &gold_labels {
            if labels.len() != n {
                return Err(Error::LabelLength {
                    labels: labels.len(),
                    points: n,
                });
            }
        }
        Ok(Self {
            name: name.into(),
            dim,
            values,
            gold_labels,
            label_names: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn gold_labels(&self) -> Option<&[usize]> {
        self.gold_labels.as_deref()
    }

    pub fn label_names(&self) -> Option<&[String]> {
        self.label_names.as_deref()
    }

    /// Number of distinct gold classes, if labels are present.
    pub fn class_count(&self) -> Option<usize> {
        self.gold_labels
            .as_ref()
            .map(|l| l.iter().copied().max().map_or(0, |m| m + 1))
    }

    pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::read_csv(name, file, options)
    }

    /// Parses CSV from any reader. Row numbers in errors are 1-based and
    /// count data rows only (the header is not counted).
    pub fn read_csv<R: Read>(name: impl Into<String>, reader: R, options: &CsvOptions) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(options.has_header)
            .delimiter(options.delimiter)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);

        let label_idx = match &options.label_column {
            None => None,
            Some(LabelColumn::Index(i)) => Some(*i),
            Some(LabelColumn::Name(col)) => {
                if !options.has_header {
                    return Err(Error::UnknownLabelColumn(col.clone()));
                }
                let headers = rdr.headers()?;
                let pos = headers
                    .iter()
                    .position(|h| h == col)
                    .ok_or_else(|| Error::UnknownLabelColumn(col.clone()))?;
                Some(pos)
            }
        };

        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut labels: Vec<usize> = Vec::new();
        let mut interned: HashMap<String, usize> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut width: Option<usize> = None;

        for (k, record) in rdr.records().enumerate() {
            let row_no = k + 1;
            let record = record?;
            if record.iter().all(|c| c.is_empty()) {
                continue;
            }
            match width {
                None => {
                    if let Some(li) = label_idx {
                        if li >= record.len() {
                            return Err(Error::UnknownLabelColumn(li.to_string()));
                        }
                    }
                    width = Some(record.len());
                }
                Some(w) if w != record.len() => {
                    return Err(Error::MalformedRow {
                        row: row_no,
                        expected: w,
                        found: record.len(),
                    });
                }
                _ => {}
            }
            let mut row = Vec::with_capacity(record.len());
            for (c, cell) in record.iter().enumerate() {
                if Some(c) == label_idx {
                    let next = interned.len();
                    let id = *interned.entry(cell.to_string()).or_insert_with(|| {
                        names.push(cell.to_string());
                        next
                    });
                    labels.push(id);
                    continue;
                }
                let v: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                    row: row_no,
                    column: c,
                    value: cell.to_string(),
                })?;
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: row_no, column: c });
                }
                row.push(v);
            }
            rows.push(row);
        }

        let gold = label_idx.map(|_| labels);
        let mut ds = Self::from_rows(name, rows, gold)?;
        if label_idx.is_some() {
            ds.label_names = Some(names);
        }
        Ok(ds)
    }

    /// Writes features (and the gold label as a trailing column, if any).
    /// Values use the shortest representation that parses back bit-exactly.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().from_writer(writer);
        for (i, p) in self.points().enumerate() {
            let mut rec: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
            if let Some(labels) = &self.gold_labels {
                let l = labels[i];
                let s = match &self.label_names {
                    Some(names) => names[l].clone(),
                    None => l.to_string(),
                };
                rec.push(s);
            }
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Per-column min-max scaling to `[0, 1]`. Constant columns become zeros
    /// and are reported rather than rejected.
    pub fn min_max_normalize(&self) -> Normalized {
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for p in self.points() {
            for j in 0..d {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        let constant_columns: Vec<usize> = (0..d).filter(|&j| hi[j] <= lo[j]).collect();
        for &j in &constant_columns {
            log::warn!("{}: column {j} is constant; normalised to zero", self.name);
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let j = k % d;
                let range = hi[j] - lo[j];
                if range > 0.0 {
                    (v - lo[j]) / range
                } else {
                    0.0
                }
            })
            .collect();
        Normalized {
            dataset: Self {
                values,
                ..self.clone()
            },
            constant_columns,
        }
    }

    /// Multiplies every coordinate by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    pub fn pairwise_distances(&self) -> DistanceMatrix {
        DistanceMatrix::from_dataset(self)
    }
}

/// Dense symmetric `n x n` Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl DistanceMatrix {
    pub fn from_dataset(ds: &Dataset) -> Self {
        let n = ds.len();
        let mut entries = vec![0.0; n * n];
        entries
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, row)| {
                let pi = ds.point(i);
                for (j, slot) in row.iter_mut().enumerate() {
                    if j != i {
                        *slot = euclidean(pi, ds.point(j));
                    }
                }
            });
        Self { n, entries }
    }

    /// Wraps a precomputed matrix. Fails unless it is square, symmetric,
    /// non-negative and zero on the diagonal.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "distance matrix needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let a = entries[i * n + j];
                if !(a >= 0.0 && a.is_finite()) || a != entries[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i}, {j}) is negative, non-finite or asymmetric"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// All `n(n-1)/2` off-diagonal distances, ascending.
    pub fn sorted_pair_distances(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            out.extend_from_slice(&self.row(i)[i + 1..]);
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Quantile of the off-diagonal distance distribution, using the
/// rounded-position rule `sorted[round(m * pct / 100) - 1]` (clamped to the
/// valid range) common in density-peak code.
pub fn distance_percentile(sorted: &[f64], pct: f64) -> f64 {
    let m = sorted.len();
    let pos = ((m as f64) * pct / 100.0).round() as usize;
    sorted[pos.clamp(1, m) - 1]
}
