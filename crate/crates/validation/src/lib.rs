//! Slow reference implementations written straight from the definitions.
//! They share no code with `ppnnn-core` and exist to check it.
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn distances(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points.iter().map(|p| points.iter().map(|q| euclid(p, q)).collect()).collect()
}

/// Neighbours of `i` by (distance, index), self excluded.
pub fn neighbour_list(d: &[Vec<f64>], i: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..d.len()).filter(|&j| j != i).collect();
    v.sort_by(|&a, &b| d[i][a].total_cmp(&d[i][b]).then(a.cmp(&b)));
    v
}

/// `NNN_r` for every point, straight from NN_r and RNN_r.
pub fn nnn_at(d: &[Vec<f64>], r: usize) -> Vec<BTreeSet<usize>> {
    let n = d.len();
    let nn: Vec<BTreeSet<usize>> = (0..n).map(|i| neighbour_list(d, i)[..r].iter().copied().collect()).collect();
    (0..n)
        .map(|i| {
            let rnn: BTreeSet<usize> = (0..n).filter(|&j| nn[j].contains(&i)).collect();
            nn[i].intersection(&rnn).copied().collect()
        })
        .collect()
}

/// Smallest `r` with every `NNN_r` non-empty, and those sets.
pub fn natural_eigenvalue(d: &[Vec<f64>]) -> (usize, Vec<BTreeSet<usize>>) {
    for r in 1..d.len() {
        let sets = nnn_at(d, r);
        if sets.iter().all(|s| !s.is_empty()) {
            return (r, sets);
        }
    }
    unreachable!("r = n - 1 makes every NNN set full")
}

/// (same/same, same truth only, same pred only, different/different) pair counts.
pub fn pair_counts<A: PartialEq, B: PartialEq>(t: &[A], p: &[B]) -> (u64, u64, u64, u64) {
    let (mut a, mut b, mut c, mut dd) = (0, 0, 0, 0);
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            match (t[i] == t[j], p[i] == p[j]) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => dd += 1,
            }
        }
    }
    (a, b, c, dd)
}

pub fn ari_pairs<A: PartialEq, B: PartialEq>(t: &[A], p: &[B]) -> f64 {
    let (a, b, c, d) = pair_counts(t, p);
    let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
    let den = (a + b) * (b + d) + (a + c) * (c + d);
    if den == 0.0 {
        return if b == 0.0 && c == 0.0 { 1.0 } else { 0.0 };
    }
    2.0 * (a * d - b * c) / den
}

pub fn fmi_pairs<A: PartialEq, B: PartialEq>(t: &[A], p: &[B]) -> f64 {
    let (a, b, c, _) = pair_counts(t, p);
    if a + b == 0 || a + c == 0 {
        return 0.0;
    }
    a as f64 / (((a + b) as f64) * ((a + c) as f64)).sqrt()
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn counts<T: Ord + Copy>(v: &[T]) -> BTreeMap<T, u64> {
    let mut m = BTreeMap::new();
    for &x in v {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

/// AMI with max normalisation from the textbook sums; hypergeometric weights
/// from exact binomial coefficients.
pub fn ami_direct<A: Ord + Copy, B: Ord + Copy>(t: &[A], p: &[B]) -> f64 {
    let n = t.len() as u64;
    let nf = n as f64;
    let a = counts(t);
    let b = counts(p);
    let mut joint: BTreeMap<(A, B), u64> = BTreeMap::new();
    for (&x, &y) in t.iter().zip(p) {
        *joint.entry((x, y)).or_insert(0) += 1;
    }
    // Identical up to renaming.
    if a.len() == b.len() && joint.len() == a.len() {
        return 1.0;
    }
    let h = |m: Vec<u64>| -> f64 {
        m.into_iter()
            .map(|v| {
                let q = v as f64 / nf;
                -q * q.ln()
            })
            .sum()
    };
    let mut mi = 0.0;
    for (&(x, y), &v) in &joint {
        let v = v as f64;
        mi += v / nf * (nf * v / (a[&x] as f64 * b[&y] as f64)).ln();
    }
    let mut emi = 0.0;
    for &ai in a.values() {
        for &bj in b.values() {
            let lo = (ai + bj).saturating_sub(n).max(1);
            for k in lo..=ai.min(bj) {
                let pmf = (binom(ai, k) * binom(n - ai, bj - k)) as f64 / binom(n, bj) as f64;
                let kf = k as f64;
                emi += kf / nf * (nf * kf / (ai as f64 * bj as f64)).ln() * pmf;
            }
        }
    }
    let den = h(a.values().copied().collect()).max(h(b.values().copied().collect())) - emi;
    if den == 0.0 {
        0.0
    } else {
        (mi - emi) / den
    }
}

pub fn rho_cutoff(d: &[Vec<f64>], dc: f64) -> Vec<f64> {
    let n = d.len();
    let mut rho = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && d[i][j] < dc {
                rho[i] += 1.0;
            }
        }
    }
    rho
}

pub fn rho_gaussian(d: &[Vec<f64>], dc: f64) -> Vec<f64> {
    let n = d.len();
    let mut rho = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                rho[i] += (-(d[i][j] / dc).powi(2)).exp();
            }
        }
    }
    rho
}

pub fn rho_nnn(d: &[Vec<f64>], nnn: &[BTreeSet<usize>]) -> Vec<f64> {
    nnn.iter()
        .enumerate()
        .map(|(i, set)| {
            let sigma = set.iter().map(|&j| d[i][j]).fold(0.0, f64::max);
            set.iter()
                .map(|&j| if sigma == 0.0 { 1.0 } else { (-(d[i][j] / sigma).powi(2)).exp() })
                .sum()
        })
        .collect()
}

/// `a` denser than `b`: higher density, ties to the larger index.
pub fn denser(rho: &[f64], a: usize, b: usize) -> bool {
    rho[a] > rho[b] || (rho[a] == rho[b] && a > b)
}

/// Separation and nearest denser neighbour by scanning all points.
pub fn delta_nhd(d: &[Vec<f64>], rho: &[f64]) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = d.len();
    let mut delta = vec![0.0; n];
    let mut nhd = vec![None; n];
    for i in 0..n {
        let mut best: Option<usize> = None;
        for j in 0..n {
            if j != i && denser(rho, j, i) {
                best = match best {
                    Some(b) if d[i][b] < d[i][j] || (d[i][b] == d[i][j] && b < j) => Some(b),
                    _ => Some(j),
                };
            }
        }
        match best {
            Some(b) => {
                delta[i] = d[i][b];
                nhd[i] = Some(b);
            }
            None => delta[i] = (0..n).map(|j| d[i][j]).fold(0.0, f64::max),
        }
    }
    (delta, nhd)
}

/// Components of the (symmetric) NNN graph via union-find.
pub struct Components {
    parent: Vec<usize>,
}

impl Components {
    pub fn new(nnn: &[Vec<usize>]) -> Self {
        let mut c = Self {
            parent: (0..nnn.len()).collect(),
        };
        for (i, set) in nnn.iter().enumerate() {
            for &j in set {
                c.union(i, j);
            }
        }
        c
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Cluster of every point reached by flooding from the centres in
/// descending density order; `None` for unreached points.
pub fn flood_labels(nnn: &[Vec<usize>], rho: &[f64], centers: &[usize]) -> Vec<Option<usize>> {
    let mut comps = Components::new(nnn);
    let mut order = centers.to_vec();
    order.sort_by(|&a, &b| {
        if denser(rho, a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let mut roots: Vec<usize> = Vec::new();
    for &c in &order {
        let r = comps.find(c);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    (0..nnn.len())
        .map(|i| {
            let r = comps.find(i);
            roots.iter().position(|&x| x == r)
        })
        .collect()
}

/// Population mean and standard deviation.
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64;
    (m, var.sqrt())
}

/// `min(1, g * C * (p' + p''))` with both ranks counted directly.
pub fn infection_probability(rho: &[f64], y: usize, infected: &[usize], frontier: &[usize], c: f64, g: f64) -> f64 {
    let share = |others: &[usize]| {
        let below = others.iter().filter(|&&z| denser(rho, y, z)).count();
        (below + 1) as f64 / (others.len() + 1) as f64
    };
    (g * c * (share(infected) + share(frontier))).min(1.0)
}
