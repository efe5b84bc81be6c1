//! Graph exporters: DOT and a two-panel SVG figure.
//!
//! Both exporters are pure functions of their inputs; repeated export is
//! byte-identical.

use std::fmt::Write as _;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::lens::LensValues;
use crate::nerve::{format_multi_index, MapperGraph};

/// Undirected DOT rendering, nodes in vertex-id order. Node labels read
/// `i{cover}:{label} ({size})`.
pub fn export_dot(graph: &MapperGraph) -> String {
    let mut out = String::from("graph mapper {\n");
    for v in &graph.vertices {
        let _ = writeln!(
            out,
            "  v{} [label=\"i{}:{} ({})\"];",
            v.id,
            format_multi_index(&v.cover_index),
            v.cluster_label,
            v.size
        );
    }
    for e in &graph.edges {
        let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.a, e.b, e.intersection);
    }
    out.push_str("}\n");
    out
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];
const NOISE_COLOR: &str = "#bbbbbb";

const W: f64 = 900.0;
const H: f64 = 450.0;
const MARGIN: f64 = 40.0;
const PANEL_W: f64 = 400.0;

/// Two panels: the data scatter colored by fiber on the left, the Mapper
/// graph on the right. The graph layout is intentionally plain so output is
/// deterministic: x is the vertex's mean lens value (first lens axis), y
/// spreads the vertices of one cover element evenly around the centerline.
pub fn export_svg(graph: &MapperGraph, dataset: &Dataset, lens: &LensValues) -> Result<String> {
    if !graph.vertices.is_empty() && graph.vertices.iter().all(|v| v.members.is_empty()) {
        return Err(Error::InvalidConfig(
            "SVG export needs vertex member lists; rerun with include_members enabled".into(),
        ));
    }
    if lens.len() != dataset.len() {
        return Err(Error::LensLengthMismatch {
            expected: dataset.len(),
            got: lens.len(),
        });
    }

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));

    // distinct cover indices in order; a point is colored by the first
    // vertex that contains it
    let mut cover_indices: Vec<Vec<usize>> =
        graph.vertices.iter().map(|v| v.cover_index.clone()).collect();
    cover_indices.sort();
    cover_indices.dedup();
    let color_of_cover = |cover: &Vec<usize>| -> &str {
        let rank = cover_indices.iter().position(|c| c == cover).unwrap_or(0);
        PALETTE[rank % PALETTE.len()]
    };
    let mut point_color = vec![NOISE_COLOR; dataset.len()];
    for v in graph.vertices.iter().rev() {
        for &m in &v.members {
            point_color[m] = color_of_cover(&v.cover_index);
        }
    }

    // left panel: data scatter (first two coordinates; 1-D data flattens)
    if !dataset.is_empty() {
        let (sx, sy) = scaler(
            dataset.points().iter().map(|p| p[0]),
            dataset.points().iter().map(|p| if dataset.dim() > 1 { p[1] } else { 0.0 }),
            MARGIN,
            MARGIN + PANEL_W,
        );
        for (i, p) in dataset.points().iter().enumerate() {
            let y = if dataset.dim() > 1 { p[1] } else { 0.0 };
            svg.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{}\"/>\n",
                sx(p[0]),
                sy(y),
                point_color[i]
            ));
        }
    }

    // right panel: the Mapper graph
    if !graph.vertices.is_empty() {
        let (gx, gy) = graph_layout(graph);
        let (sx, sy) = scaler(
            gx.iter().copied(),
            gy.iter().copied(),
            W - MARGIN - PANEL_W,
            W - MARGIN,
        );
        for e in &graph.edges {
            svg.push_str(&format!(
                "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"#555555\" stroke-width=\"1.5\"/>\n",
                sx(gx[e.a]),
                sy(gy[e.a]),
                sx(gx[e.b]),
                sy(gy[e.b])
            ));
        }
        for v in &graph.vertices {
            svg.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"7\" fill=\"{}\" \
                 stroke=\"#333333\" stroke-width=\"1\"/>\n",
                sx(gx[v.id]),
                sy(gy[v.id]),
                color_of_cover(&v.cover_index)
            ));
            svg.push_str(&format!(
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"9\" \
                 text-anchor=\"middle\" fill=\"#222222\">i{}:{}</text>\n",
                sx(gx[v.id]),
                sy(gy[v.id]) - 10.0,
                format_multi_index(&v.cover_index),
                v.cluster_label
            ));
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Abstract layout coordinates: x is the mean lens value, y spreads the
/// vertices that share a cover element evenly around zero, ordered by
/// cluster label.
fn graph_layout(graph: &MapperGraph) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; graph.vertices.len()];
    let mut ys = vec![0.0; graph.vertices.len()];
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for v in &graph.vertices {
        xs[v.id] = v.mean_lens.first().copied().unwrap_or(0.0);
        groups.entry(v.cover_index.clone()).or_default().push(v.id);
    }
    for ids in groups.values() {
        let m = ids.len();
        for (pos, &id) in ids.iter().enumerate() {
            ys[id] = pos as f64 - (m as f64 - 1.0) / 2.0;
        }
    }
    (xs, ys)
}

/// Maps data ranges onto a pixel band (y inverted, SVG grows downward).
/// Degenerate ranges collapse to the band center.
fn scaler(
    xs: impl Iterator<Item = f64>,
    ys: impl Iterator<Item = f64>,
    lo_px: f64,
    hi_px: f64,
) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in xs {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
    }
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in ys {
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    let map = move |v: f64, lo: f64, hi: f64, a: f64, b: f64| {
        if hi > lo {
            a + (v - lo) / (hi - lo) * (b - a)
        } else {
            (a + b) / 2.0
        }
    };
    let (a, b) = (lo_px, hi_px);
    let sx = move |v: f64| map(v, x_lo, x_hi, a, b);
    let sy = move |v: f64| map(v, y_lo, y_hi, H - MARGIN, MARGIN);
    (sx, sy)
}
