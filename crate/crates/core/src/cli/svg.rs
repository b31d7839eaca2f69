//! Minimal SVG plots.
//!
//! Scatter plots map the data bounding box (first two coordinates, 5% margin
//! on each side) onto a canvas at most [`CANVAS_WIDTH`] wide and draw every node as a filled
//! circle of radius [`MARKER_RADIUS`] in its cluster's rank color.

use std::fmt::Write;

use crate::cli::formats::BenchEntry;
use crate::clustering::{ClusterTable, LabelVector};
use crate::geometry::PointSet;

pub const CANVAS_WIDTH: f64 = 800.0;
pub const MARKER_RADIUS: f64 = 4.0;
const MAX_HEIGHT: f64 = 4.0 * CANVAS_WIDTH;
const MARGIN: f64 = 0.05;

struct Viewport {
    min_x: f64,
    max_y: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Viewport {
    fn fit(xs: &[f64], ys: &[f64]) -> Self {
        let bounds = |v: &[f64]| {
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - MARGIN * span, hi + MARGIN * span)
        };
        let (min_x, max_x) = bounds(xs);
        let (min_y, max_y) = bounds(ys);
        let (dx, dy) = (max_x - min_x, max_y - min_y);
        let scale = (CANVAS_WIDTH / dx).min(MAX_HEIGHT / dy);
        Viewport {
            min_x,
            max_y,
            scale,
            width: dx * scale,
            height: dy * scale,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.min_x) * self.scale, (self.max_y - y) * self.scale)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn scatter(ps: &PointSet, labels: &LabelVector, table: &ClusterTable, title: &str) -> String {
    let xs: Vec<f64> = ps.points().iter().map(|p| p.coords()[0]).collect();
    let ys: Vec<f64> = ps
        .points()
        .iter()
        .map(|p| p.coords().get(1).copied().unwrap_or(0.0))
        .collect();
    let vp = Viewport::fit(&xs, &ys);

    let mut color_of = vec![""; table.num_clusters() + 1];
    for rec in table.records() {
        color_of[rec.label as usize] = rec.color;
    }

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = vp.width,
        h = vp.height
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", escape(title)).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
        let (px, py) = vp.map(x, y);
        let label = labels[i];
        writeln!(
            out,
            r#"<circle cx="{px:.2}" cy="{py:.2}" r="{MARKER_RADIUS}" fill="{}" data-id="{}" data-label="{label}"/>"#,
            color_of[label as usize],
            ps.points()[i].id()
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Multiplication counts of both methods against `n`, log-scaled on both axes.
pub fn bench_plot(entries: &[BenchEntry]) -> String {
    let (w, h, pad) = (CANVAS_WIDTH, 500.0, 50.0);
    let max_n = entries.iter().map(|e| e.n).max().unwrap_or(2).max(2) as f64;
    let max_mults = entries
        .iter()
        .map(|e| e.naive_mults.max(e.fast_mults))
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let px = |n: usize| pad + (n.max(1) as f64).ln() / max_n.ln() * (w - 2.0 * pad);
    let py =
        |m: usize| h - pad - ((m as f64) + 1.0).ln() / (max_mults + 1.0).ln() * (h - 2.0 * pad);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(
        out,
        "<title>matrix products: naive vs repeated squaring</title>"
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (series, color, get) in [
        (
            "naive",
            "red",
            (|e: &BenchEntry| e.naive_mults) as fn(&BenchEntry) -> usize,
        ),
        ("fast", "blue", |e: &BenchEntry| e.fast_mults),
    ] {
        let pts: Vec<String> = entries
            .iter()
            .map(|e| format!("{:.2},{:.2}", px(e.n), py(get(e))))
            .collect();
        writeln!(
            out,
            r#"<polyline data-series="{series}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::cluster_pointset;
    use crate::geometry::ClusteringConfig;

    #[test]
    fn one_circle_per_node_with_rank_colors() {
        let ps = PointSet::from_coords(
            [
                [0.0, 0.0],
                [0.5, 0.0],
                [1.0, 0.0],
                [5.0, 5.0],
                [5.3, 5.0],
                [9.0, 0.0],
            ]
            .iter()
            .map(|c| c.to_vec()),
        )
        .unwrap();
        let (labels, table) = cluster_pointset(&ps, &ClusteringConfig::new(1.0).unwrap()).unwrap();
        let svg = scatter(&ps, &labels, &table, "a <b>");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 6);
        assert_eq!(svg.matches(r#"fill="red""#).count(), 3);
        assert_eq!(svg.matches(r#"fill="green""#).count(), 2);
        assert_eq!(svg.matches(r#"fill="blue""#).count(), 1);
        assert!(svg.contains("a &lt;b&gt;"));
    }

    #[test]
    fn degenerate_bbox() {
        let ps = PointSet::from_coords([vec![2.0]]).unwrap();
        let (labels, table) = cluster_pointset(&ps, &ClusteringConfig::new(1.0).unwrap()).unwrap();
        let svg = scatter(&ps, &labels, &table, "one");
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
