//! Standalone SVG scatter plots of a labelling.
//!
//! One fill colour per cluster, noise in gray, centres overdrawn in red. The
//! cluster palette never uses red or gray, so the three roles stay distinct.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ppnnn_core::{ClusterAssignment, Dataset, NOISE};

use crate::error::{BenchError, Result};

pub const NOISE_COLOR: &str = "#9e9e9e";
pub const CENTER_COLOR: &str = "#ff0000";

const PALETTE: [&str; 16] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#6b6ecf", "#31a354", "#3182bd", "#e6550d", "#756bb1",
];

/// Fill for the `rank`-th distinct cluster. Beyond the fixed palette, hues are
/// spread by the golden angle and kept away from red.
pub fn cluster_color(rank: usize) -> String {
    if let Some(c) = PALETTE.get(rank) {
        return (*c).to_string();
    }
    let k = rank - PALETTE.len();
    // Hue in [30, 330) degrees; lightness cycles so nearby hues differ.
    let hue = 30.0 + (k as f64 * 137.507_764) % 300.0;
    let light = [40.0, 55.0, 30.0][k % 3];
    let sat = [70.0, 50.0, 85.0][(k / 3) % 3];
    format!("hsl({hue:.3},{sat:.0}%,{light:.0}%)")
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

fn render(ds: &Dataset, asg: &ClusterAssignment) -> Result<String> {
    if asg.len() != ds.len() {
        return Err(BenchError::Config(format!(
            "labelling has {} entries for {} points",
            asg.len(),
            ds.len()
        )));
    }
    let xy: Vec<(f64, f64)> = ds
        .points()
        .map(|p| (p[0], if ds.dim() > 1 { p[1] } else { 0.0 }))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &xy {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0);
    let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
    let px = |x: f64| MARGIN + (x - x0) * scale;
    let py = |y: f64| SIZE - MARGIN - (y - y0) * scale;

    let mut ranks = BTreeMap::new();
    for &l in &asg.labels {
        if l != NOISE {
            let next = ranks.len();
            ranks.entry(l).or_insert(next);
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(ds.name()));
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    if ds.dim() != 2 {
        let _ = writeln!(
            svg,
            r##"<text x="{MARGIN}" y="14" font-size="12" fill="#000000">{}-dimensional data: first {} feature(s) shown</text>"##,
            ds.dim(),
            ds.dim().min(2)
        );
    }
    for (i, &(x, y)) in xy.iter().enumerate() {
        let l = asg.labels[i];
        let fill = if l == NOISE {
            NOISE_COLOR.to_string()
        } else {
            cluster_color(ranks[&l])
        };
        let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{fill}"/>"#, px(x), py(y));
    }
    for &c in &asg.centers_used {
        if let Some(&(x, y)) = xy.get(c) {
            let _ = writeln!(
                svg,
                r##"<circle class="center" cx="{:.2}" cy="{:.2}" r="6" fill="{CENTER_COLOR}" stroke="#000000" stroke-width="1"/>"##,
                px(x),
                py(y)
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes the scatter plot of `asg` over `ds` to `out`.
pub fn emit_scatter(ds: &Dataset, asg: &ClusterAssignment, out: &Path) -> Result<()> {
    let svg = render(ds, asg)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    fs::write(out, svg).map_err(|e| BenchError::io(out, e))
}

/// Distinct fills used by ordinary points (centres excluded).
pub fn point_fills(svg: &str) -> Vec<String> {
    let mut fills: Vec<String> = svg
        .lines()
        .filter(|l| l.starts_with("<circle ") && !l.contains(r#"class="center""#))
        .filter_map(|l| l.split("fill=\"").nth(1)?.split('"').next().map(str::to_string))
        .collect();
    fills.sort();
    fills.dedup();
    fills
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds3() -> Dataset {
        Dataset::from_rows("t", vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![5.0, 5.0]], None).unwrap()
    }

    #[test]
    fn two_clusters_and_center_marks() {
        let mut asg = ClusterAssignment::from_labels(vec![0, 0, 1]);
        asg.centers_used = vec![0, 2];
        let svg = render(&ds3(), &asg).unwrap();
        let fills = point_fills(&svg);
        assert_eq!(fills.len(), 2);
        assert!(!fills.iter().any(|f| f == CENTER_COLOR || f == NOISE_COLOR));
        assert_eq!(svg.matches(r#"class="center""#).count(), 2);
        assert_eq!(svg.matches(&format!(r#"fill="{CENTER_COLOR}""#)).count(), 2);
    }

    #[test]
    fn noise_only_is_gray() {
        let asg = ClusterAssignment::from_labels(vec![NOISE; 3]);
        let svg = render(&ds3(), &asg).unwrap();
        assert_eq!(point_fills(&svg), vec![NOISE_COLOR.to_string()]);
    }

    #[test]
    fn many_clusters_stay_distinct() {
        let mut colors: Vec<String> = (0..200).map(cluster_color).collect();
        colors.sort();
        colors.dedup();
        assert_eq!(colors.len(), 200);
        assert!(!colors.iter().any(|c| c == CENTER_COLOR || c == NOISE_COLOR));
    }

    #[test]
    fn higher_dimensions_get_a_note() {
        let ds = Dataset::from_rows("t", vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 2.0]], None).unwrap();
        let svg = render(&ds, &ClusterAssignment::from_labels(vec![0, 0])).unwrap();
        assert!(svg.contains("3-dimensional data"));
        assert!(render(&ds, &ClusterAssignment::from_labels(vec![0])).is_err());
    }

    #[test]
    fn unwritable_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let asg = ClusterAssignment::from_labels(vec![0, 0, 1]);
        assert!(emit_scatter(&ds3(), &asg, &blocker.join("plot.svg")).is_err());
        let ok = dir.path().join("plots/p.svg");
        emit_scatter(&ds3(), &asg, &ok).unwrap();
        assert!(ok.exists());
    }
}
