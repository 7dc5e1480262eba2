//! SVG output and the plain-text geometry dump.

use std::fmt::Write as _;

use super::table::Pt;
use super::GeometricMap;
use crate::seq::Stratino;
use crate::word::WordAnalysis;

/// Color class 0..=3 of every pair, from its row parity (root class 0).
pub fn word_colors(analysis: &WordAnalysis) -> Vec<u8> {
    analysis
        .pairs
        .iter()
        .map(|&(alpha, _)| {
            let row: &Stratino = &analysis.sigma[&alpha];
            if row.is_empty() {
                0
            } else {
                let p = row.len() % 2 == 1;
                let n = row.last().expect("nonempty").value % 2 == 1;
                match (p, n) {
                    (true, true) => 1,
                    (true, false) => 3,
                    (false, true) => 0,
                    (false, false) => 2,
                }
            }
        })
        .collect()
}

fn pts_to_path(pts: &[Pt], scale: i64, margin: i64) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{} {} ", p.0 * scale + margin, p.1 * scale + margin);
    }
    d.trim_end().to_string()
}

/// Renders the drawing: optional region fills, the three outline families,
/// the root edge, and one label per region at its opener cell.
pub fn render_svg(gm: &GeometricMap, analysis: &WordAnalysis, colored: bool) -> String {
    const SCALE: i64 = 40;
    const MARGIN: i64 = 30;
    const FILLS: [&str; 4] = ["#ffffff", "#d9d9d9", "#bfe3ff", "#8c8c8c"];
    let width = gm.table.width() * SCALE + 2 * MARGIN;
    let height = gm.table.height() * SCALE + 2 * MARGIN;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    if colored {
        let colors = word_colors(analysis);
        for (p, cells) in gm.region_cells.iter().enumerate() {
            let fill = FILLS[colors[p] as usize];
            for &(cx, cy) in cells {
                let _ = writeln!(
                    svg,
                    "<rect x=\"{}\" y=\"{}\" width=\"{SCALE}\" height=\"{SCALE}\" fill=\"{fill}\"/>",
                    cx * SCALE + MARGIN,
                    cy * SCALE + MARGIN
                );
            }
        }
    }
    for c in &gm.arrangement.curves {
        let _ = writeln!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"3\"/>",
            pts_to_path(&c.pts, SCALE, MARGIN)
        );
    }
    for s in &gm.arrangement.segments {
        let _ = writeln!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"#2471a3\" stroke-width=\"3\"/>",
            pts_to_path(&s.pts, SCALE, MARGIN)
        );
    }
    for t in &gm.arrangement.transversals {
        let _ = writeln!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"#1e8449\" stroke-width=\"3\"/>",
            pts_to_path(&t.pts, SCALE, MARGIN)
        );
    }
    let _ = writeln!(
        svg,
        "<path d=\"{}\" fill=\"none\" stroke=\"#6c3483\" stroke-width=\"5\" \
         stroke-dasharray=\"10 6\"/>",
        pts_to_path(&gm.arrangement.lambda, SCALE, MARGIN)
    );
    for (p, &(alpha, _)) in analysis.pairs.iter().enumerate() {
        let (x, y) = gm.table.point(alpha);
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"18\">w{p}</text>",
            x * SCALE + MARGIN + 8,
            y * SCALE + MARGIN + 26
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn dump_pts(pts: &[Pt]) -> String {
    pts.iter()
        .map(|p| format!("({},{})", p.0, p.1))
        .collect::<Vec<_>>()
        .join(" ")
}

/// One line per polyline: kind, anchor, point list.
pub fn geometry_dump(gm: &GeometricMap) -> String {
    let mut out = String::new();
    for c in &gm.arrangement.curves {
        let _ = writeln!(out, "curve {} {}", c.anchor, dump_pts(&c.pts));
    }
    for s in &gm.arrangement.segments {
        let _ = writeln!(out, "segment {} {}", s.anchor, dump_pts(&s.pts));
    }
    for t in &gm.arrangement.transversals {
        let _ = writeln!(out, "transversal {} {}", t.opener, dump_pts(&t.pts));
    }
    let _ = writeln!(out, "root-edge {}", dump_pts(&gm.arrangement.lambda));
    out
}
