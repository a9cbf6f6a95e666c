//! SVG rendering of two-dimensional lattice packings.
//!
//! The window is the square of cells `[0, w) × [0, w)`. Each lattice point
//! whose quasi-cross reaches the window gets its cells drawn, the origin cell
//! of each cross is marked with a dot, the parallelogram spanned by the basis
//! rows is hatched, and any cell covered more than once is drawn in the
//! overlap colour. Output is byte-stable for identical input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{IntegerLattice, QuotientTorus};
use crate::splitting::QuasiCrossShape;

const UNIT: i64 = 24;
const MARGIN: i64 = 24;
const PALETTE: [&str; 6] = ["#8dd3c7", "#ffffb3", "#bebada", "#80b1d3", "#fdb462", "#b3de69"];
const OVERLAP: &str = "#e41a1c";

pub fn render_2d(lattice: &IntegerLattice, shape: &QuasiCrossShape, window: u32) -> Result<String> {
    if lattice.dim() != 2 || shape.n != 2 {
        return Err(Error::Precondition("rendering needs a two-dimensional lattice".into()));
    }
    let w = window as i64;
    let side = w * UNIT + 2 * MARGIN;
    let px = |x: i64| MARGIN + x * UNIT;
    // y grows upward: cell row y spans pixel rows px_y(y+1)..px_y(y).
    let py = |y: i64| MARGIN + (w - y) * UNIT;

    let torus = QuotientTorus::new(lattice)?;
    let h = lattice.hermite_form()?;
    let (t1, a, t2) = (h.basis()[0][0], h.basis()[1][0], h.basis()[1][1]);
    let kp = shape.k_plus as i64;
    let km = shape.k_minus as i64;
    let (lo, hi) = (-kp - 1, w + km + 1);

    let mut points = Vec::new();
    if w > 0 {
        for j in lo.div_euclid(t2)..=hi.div_euclid(t2) + 1 {
            let y = j * t2;
            if y < lo || y > hi {
                continue;
            }
            let shift = j * a;
            for i in (lo - shift).div_euclid(t1)..=(hi - shift).div_euclid(t1) + 1 {
                let x = i * t1 + shift;
                if (lo..=hi).contains(&x) {
                    points.push((x, y));
                }
            }
        }
    }
    points.sort_unstable();
    debug_assert!(points.iter().all(|&(x, y)| torus.index(&[x, y]).map(|i| i == 0).unwrap_or(false)));

    let offsets: Vec<(i64, i64)> = shape.cells().into_iter().map(|c| (c[0], c[1])).collect();
    let mut coverage: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    let in_window = |x: i64, y: i64| (0..w).contains(&x) && (0..w).contains(&y);
    for &(x, y) in &points {
        for &(dx, dy) in &offsets {
            let c = (x + dx, y + dy);
            if in_window(c.0, c.1) {
                *coverage.entry(c).or_insert(0) += 1;
            }
        }
    }

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(svg, "<defs>");
    let _ = writeln!(
        svg,
        r##"<pattern id="hatch" patternUnits="userSpaceOnUse" width="6" height="6" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="6" stroke="#333333" stroke-width="1.5"/></pattern>"##
    );
    let _ = writeln!(svg, "</defs>");
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{side}" height="{side}" fill="#ffffff"/>"##);

    let _ = writeln!(svg, r##"<g id="cells" stroke="#555555" stroke-width="0.5">"##);
    for (k, &(x, y)) in points.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        for &(dx, dy) in &offsets {
            let (cx, cy) = (x + dx, y + dy);
            if !in_window(cx, cy) {
                continue;
            }
            let (fill, class) = if coverage[&(cx, cy)] > 1 { (OVERLAP, "overlap") } else { (colour, "cell") };
            let _ = writeln!(
                svg,
                r#"<rect class="{class}" x="{}" y="{}" width="{UNIT}" height="{UNIT}" fill="{fill}"/>"#,
                px(cx),
                py(cy + 1)
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    if w > 0 {
        let b = lattice.basis();
        let corners = [(0, 0), (b[0][0], b[0][1]), (b[0][0] + b[1][0], b[0][1] + b[1][1]), (b[1][0], b[1][1])];
        let pts: Vec<String> = corners.iter().map(|&(x, y)| format!("{},{}", px(x), py(y))).collect();
        let _ = writeln!(
            svg,
            r##"<polygon id="fundamental-region" points="{}" fill="url(#hatch)" stroke="#000000" stroke-width="1"/>"##,
            pts.join(" ")
        );
    }

    let _ = writeln!(svg, r##"<g id="lattice-points" fill="#000000">"##);
    for &(x, y) in points.iter().filter(|&&(x, y)| in_window(x, y)) {
        let _ = writeln!(svg, r#"<circle cx="{}" cy="{}" r="3"/>"#, px(x) + UNIT / 2, py(y + 1) + UNIT / 2);
    }
    let _ = writeln!(svg, "</g>");

    let end = (w * UNIT).max(MARGIN);
    let _ = writeln!(
        svg,
        r##"<g id="axes" stroke="#000000" stroke-width="1.5"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"##,
        x0 = MARGIN,
        y0 = side - MARGIN,
        x1 = MARGIN + end,
        y1 = (side - MARGIN - end).max(0)
    );
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_from_splitting;
    use crate::splitting::Splitting;

    fn example_lattice() -> (IntegerLattice, QuasiCrossShape) {
        (
            IntegerLattice::new(vec![vec![4, 1], vec![3, 5]]).unwrap(),
            QuasiCrossShape::new(3, 2, 2).unwrap(),
        )
    }

    #[test]
    fn example_packing_renders() {
        let (l, s) = example_lattice();
        let svg = render_2d(&l, &s, 12).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"id="fundamental-region""#));
        assert!(!svg.contains(r#"class="overlap""#));
        // Packing density 11/17 of 144 window cells, up to boundary effects.
        let cells = svg.matches(r#"class="cell""#).count();
        assert!(cells > 60 && cells < 144, "{cells}");
        assert_eq!(svg, render_2d(&l, &s, 12).unwrap());
    }

    #[test]
    fn empty_window() {
        let (l, s) = example_lattice();
        let svg = render_2d(&l, &s, 0).unwrap();
        assert!(svg.contains(r#"id="axes""#));
        assert!(!svg.contains("<rect class"));
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn overlaps_highlighted() {
        let sp = Splitting::cyclic(17, 3, 2, &[1, 2]).unwrap();
        let l = lattice_from_splitting(&sp).unwrap().lattice;
        let svg = render_2d(&l, &sp.shape(), 10).unwrap();
        assert!(svg.contains(r#"class="overlap""#));
    }

    #[test]
    fn rejects_other_dimensions() {
        let l = IntegerLattice::new(vec![vec![4]]).unwrap();
        assert!(render_2d(&l, &QuasiCrossShape::new(2, 1, 1).unwrap(), 4).is_err());
    }
}
