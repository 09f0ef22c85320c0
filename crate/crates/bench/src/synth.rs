//! Seeded 2-D generators.
//!
//! `two_moons`, `donut3`, `gauss2_unbalanced` and `blobs` reproduce the
//! failure cases of classic DPC. The remaining kinds are stand-ins with the
//! point counts and cluster geometry of the public shape benchmarks, used when
//! the original files are not on disk.

use std::f64::consts::PI;
use std::str::FromStr;

use ppnnn_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    TwoMoons,
    Donut3,
    Gauss2Unbalanced,
    Blobs,
    Cassini,
    Dartboard,
    Spirals3,
    Crescents,
    Ring15,
    Shapes,
}

impl SynthKind {
    pub const ALL: [SynthKind; 10] = [
        Self::TwoMoons,
        Self::Donut3,
        Self::Gauss2Unbalanced,
        Self::Blobs,
        Self::Cassini,
        Self::Dartboard,
        Self::Spirals3,
        Self::Crescents,
        Self::Ring15,
        Self::Shapes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::TwoMoons => "two_moons",
            Self::Donut3 => "donut3",
            Self::Gauss2Unbalanced => "gauss2_unbalanced",
            Self::Blobs => "blobs",
            Self::Cassini => "cassini",
            Self::Dartboard => "dartboard",
            Self::Spirals3 => "spirals3",
            Self::Crescents => "crescents",
            Self::Ring15 => "ring15",
            Self::Shapes => "shapes",
        }
    }
}

impl FromStr for SynthKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown generator {s:?}")))
    }
}

/// Generator parameters. Unset fields take per-kind defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    /// Total points (or points per cluster for `blobs`).
    pub n: Option<usize>,
    /// Second-cluster size for `gauss2_unbalanced`.
    pub n2: Option<usize>,
    /// Cluster count for `blobs`.
    pub k: Option<usize>,
    /// Gaussian noise / standard deviation.
    pub noise: Option<f64>,
    /// Spread of the sparse cluster relative to the dense one (`gauss2_unbalanced`).
    pub ratio: Option<f64>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(BenchError::Config(format!("{name} must be positive, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<usize> {
    if v >= min {
        Ok(v)
    } else {
        Err(BenchError::Config(format!("{name} must be at least {min}, got {v}")))
    }
}

struct Builder {
    rng: ChaCha8Rng,
    rows: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl Builder {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rows: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn push(&mut self, x: f64, y: f64, label: usize) {
        self.rows.push(vec![x, y]);
        self.labels.push(label);
    }

    fn normal(&mut self, sd: f64) -> f64 {
        if sd == 0.0 {
            return 0.0;
        }
        Normal::new(0.0, sd).expect("finite sd").sample(&mut self.rng)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    fn gaussian(&mut self, cx: f64, cy: f64, sd: f64, count: usize, label: usize) {
        for _ in 0..count {
            let (dx, dy) = (self.normal(sd), self.normal(sd));
            self.push(cx + dx, cy + dy, label);
        }
    }

    /// Uniform over an annulus sector.
    fn band(&mut self, center: (f64, f64), r: (f64, f64), angle: (f64, f64), count: usize, label: usize) {
        for _ in 0..count {
            let a = self.uniform(angle.0, angle.1);
            let rr = (self.uniform(r.0 * r.0, r.1 * r.1)).sqrt();
            self.push(center.0 + rr * a.cos(), center.1 + rr * a.sin(), label);
        }
    }

    fn finish(self, name: &str) -> Result<Dataset> {
        Ok(Dataset::from_rows(name, self.rows, Some(self.labels))?)
    }
}

pub fn generate(kind: SynthKind, params: &SynthParams, seed: u64) -> Result<Dataset> {
    let mut b = Builder::new(seed);
    match kind {
        SynthKind::TwoMoons => {
            let n = at_least("n", params.n.unwrap_or(400), 2)?;
            let noise = params.noise.unwrap_or(0.06);
            if noise < 0.0 || !noise.is_finite() {
                return Err(BenchError::Config(format!("noise must be non-negative, got {noise}")));
            }
            let upper = n / 2;
            for i in 0..n {
                let (label, m, cnt) = if i < upper { (0, i, upper) } else { (1, i - upper, n - upper) };
                let t = PI * m as f64 / (cnt.max(2) - 1) as f64;
                let (x, y) = if label == 0 {
                    (t.cos(), t.sin())
                } else {
                    (1.0 - t.cos(), 0.5 - t.sin())
                };
                let (dx, dy) = (b.normal(noise), b.normal(noise));
                b.push(x + dx, y + dy, label);
            }
        }
        SynthKind::Donut3 => {
            // Two filled donuts inside a wide, sparser ring.
            let n = at_least("n", params.n.unwrap_or(1000), 10)?;
            let inner = n * 3 / 10;
            b.band((-2.0, 0.0), (0.6, 1.2), (0.0, 2.0 * PI), inner, 0);
            b.band((2.0, 0.0), (0.6, 1.2), (0.0, 2.0 * PI), inner, 1);
            b.band((0.0, 0.0), (4.6, 5.0), (0.0, 2.0 * PI), n - 2 * inner, 2);
        }
        SynthKind::Gauss2Unbalanced => {
            let n1 = at_least("n", params.n.unwrap_or(500), 1)?;
            let n2 = at_least("n2", params.n2.unwrap_or(50), 1)?;
            let sd = positive("noise", params.noise.unwrap_or(1.0))?;
            let ratio = positive("ratio", params.ratio.unwrap_or(1.0))?;
            b.gaussian(0.0, 0.0, sd, n1, 0);
            b.gaussian(7.0 * sd * ratio.max(1.0), 0.0, sd * ratio, n2, 1);
        }
        SynthKind::Blobs => {
            let k = at_least("k", params.k.unwrap_or(3), 1)?;
            let per = at_least("n", params.n.unwrap_or(50), 1)?;
            let sd = positive("noise", params.noise.unwrap_or(0.5))?;
            for c in 0..k {
                let a = 2.0 * PI * c as f64 / k as f64;
                let r = if k == 1 { 0.0 } else { 10.0 * sd * k as f64 / PI };
                b.gaussian(r * a.cos(), r * a.sin(), sd, per, c);
            }
        }
        SynthKind::Cassini => {
            // Two arched bands around a central disc, sizes 2:2:1.
            let n = at_least("n", params.n.unwrap_or(1000), 5)?;
            let arc = n * 2 / 5;
            for (label, sign) in [(0usize, 1.0f64), (1, -1.0)] {
                for _ in 0..arc {
                    let x = b.uniform(-2.0, 2.0);
                    let off = b.uniform(-0.2, 0.2);
                    b.push(x, sign * (1.6 - 0.3 * x * x + off), label);
                }
            }
            b.band((0.0, 0.0), (0.0, 0.6), (0.0, 2.0 * PI), n - 2 * arc, 2);
        }
        SynthKind::Dartboard => {
            // Four concentric rings of equal size with slight radial jitter.
            let n = at_least("n", params.n.unwrap_or(1000), 4)?;
            let per = n / 4;
            for ring in 0..4 {
                let count = if ring == 3 { n - 3 * per } else { per };
                let r = 0.25 * (ring + 1) as f64;
                for k in 0..count {
                    let a = 2.0 * PI * (k as f64 + b.uniform(0.0, 0.5)) / count as f64;
                    let rr = r + b.uniform(-0.01, 0.01);
                    b.push(rr * a.cos(), rr * a.sin(), ring);
                }
            }
        }
        SynthKind::Spirals3 => {
            let n = at_least("n", params.n.unwrap_or(312), 3)?;
            let sizes = [n * 106 / 312, n * 101 / 312];
            let sizes = [sizes[0], sizes[1], n - sizes[0] - sizes[1]];
            for (arm, &count) in sizes.iter().enumerate() {
                let phase = 2.0 * PI * arm as f64 / 3.0;
                for k in 0..count {
                    let t = PI / 2.0 + 2.5 * PI * k as f64 / count as f64;
                    let r = t + b.uniform(-0.05, 0.05);
                    b.push(r * (t + phase).cos(), r * (t + phase).sin(), arm);
                }
            }
        }
        SynthKind::Crescents => {
            // Interleaved crescents, the first about three times denser.
            let n = at_least("n", params.n.unwrap_or(373), 4)?;
            let dense = n * 276 / 373;
            b.band((0.0, 0.0), (8.8, 11.2), (0.0, PI), dense, 0);
            b.band((10.0, 5.0), (8.8, 11.2), (PI, 2.0 * PI), n - dense, 1);
        }
        SynthKind::Ring15 => {
            // 15 Gaussians: one central, six around it, eight on an outer ring.
            let per = at_least("n", params.n.unwrap_or(40), 1)?;
            let sd = positive("noise", params.noise.unwrap_or(0.375))?;
            b.gaussian(10.0, 10.0, sd, per, 0);
            for c in 0..6 {
                let a = PI / 3.0 * c as f64;
                b.gaussian(10.0 + 1.7 * a.cos(), 10.0 + 1.7 * a.sin(), sd, per, 1 + c);
            }
            for c in 0..8 {
                let a = PI / 4.0 * c as f64 + PI / 8.0;
                b.gaussian(10.0 + 6.0 * a.cos(), 10.0 + 6.0 * a.sin(), sd, per, 7 + c);
            }
        }
        SynthKind::Shapes => {
            // Gaussian blob, square, C-shaped arc and triangle.
            let n = at_least("n", params.n.unwrap_or(1000), 4)?;
            let per = n / 4;
            b.gaussian(0.0, 0.0, 0.8, per, 0);
            for _ in 0..per {
                let (x, y) = (b.uniform(8.0, 12.0), b.uniform(-2.0, 2.0));
                b.push(x, y, 1);
            }
            b.band((0.0, 11.0), (2.2, 3.0), (0.35 * PI, 1.65 * PI), per, 2);
            for _ in 0..n - 3 * per {
                let (mut u, mut v) = (b.uniform(0.0, 1.0), b.uniform(0.0, 1.0));
                if u + v > 1.0 {
                    u = 1.0 - u;
                    v = 1.0 - v;
                }
                b.push(8.0 + 4.0 * u + 2.0 * v, 9.0 + 4.0 * v, 3);
            }
        }
    }
    b.finish(kind.name())
}
