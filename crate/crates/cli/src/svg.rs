//! Projection figures for lattice polygons: the polygon on its lattice
//! grid, the direction drawn as an arrow, and the image segment of the
//! projection `m ↦ ⟨m, v⟩` on a number line below.
//!
//! All coordinates are integers so the output is byte-stable.

use std::fmt::Write;

use torwidth_core::{LatticePolytope, LatticeVector};

use crate::error::CliError;

const UNIT: i64 = 40;
const MARGIN: i64 = 40;
const LINE_GAP: i64 = 70;

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Vertices in counterclockwise order starting from the lexicographically
/// smallest one.
fn boundary(p: &LatticePolytope) -> Vec<Vec<i64>> {
    let mut vs: Vec<Vec<i64>> = p.vertices().iter().map(|v| v.coords().to_vec()).collect();
    if vs.len() < 3 {
        return vs;
    }
    let o = vs.remove(0);
    vs.sort_by(|a, b| 0.cmp(&cross(&o, a, b)));
    vs.insert(0, o);
    vs
}

pub fn render(p: &LatticePolytope, v: &LatticeVector) -> Result<String, CliError> {
    if p.rank() != 2 {
        return Err(CliError::Precondition(format!(
            "svg needs a polytope of dim 2, found dim {}",
            p.rank()
        )));
    }
    if v.rank() != 2 {
        return Err(CliError::Malformed(format!(
            "direction has {} coordinates, expected 2",
            v.rank()
        )));
    }
    if v.is_zero() {
        return Err(torwidth_core::Error::ZeroVector.into());
    }
    let (lo, hi) = p.pairing_range(v)?;
    let (bmin, bmax) = p.bounding_box();
    let (x0, y0) = (bmin[0] - 1, bmin[1] - 1);
    let (x1, y1) = (bmax[0] + 1, bmax[1] + 1);
    let px = |x: i64| MARGIN + (x - x0) * UNIT;
    let py = |y: i64| MARGIN + (y1 - y) * UNIT;

    let plot_w = (x1 - x0) * UNIT;
    let line_w = (hi - lo + 2) * UNIT;
    let width = plot_w.max(line_w) + 2 * MARGIN;
    let line_y = py(y0) + LINE_GAP;
    let height = line_y + MARGIN + 20;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    s.push_str(concat!(
        "  <defs>\n",
        "    <marker id=\"head\" markerWidth=\"10\" markerHeight=\"8\" refX=\"9\" refY=\"4\" orient=\"auto\">\n",
        "      <path d=\"M0,0 L10,4 L0,8 z\" fill=\"#b03a2e\"/>\n",
        "    </marker>\n",
        "  </defs>\n",
        "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
    ));

    let outline: Vec<String> = boundary(p)
        .iter()
        .map(|q| format!("{},{}", px(q[0]), py(q[1])))
        .collect();
    let _ = writeln!(
        s,
        r##"  <polygon points="{}" fill="#dbe6f4" stroke="#1f4e8c" stroke-width="2"/>"##,
        outline.join(" ")
    );

    for y in y0..=y1 {
        for x in x0..=x1 {
            let inside = p.contains(&LatticeVector::m([x, y]))?;
            let (r, fill) = if inside { (4, "#1f4e8c") } else { (2, "#a0a0a0") };
            let _ = writeln!(s, r#"  <circle cx="{}" cy="{}" r="{r}" fill="{fill}"/>"#, px(x), py(y));
        }
    }

    let start = &p.vertices()[0];
    let (sx, sy) = (px(start.coords()[0]), py(start.coords()[1]));
    let (c0, c1) = (v.coords()[0], v.coords()[1]);
    let _ = writeln!(
        s,
        r##"  <line x1="{sx}" y1="{sy}" x2="{}" y2="{}" stroke="#b03a2e" stroke-width="2" marker-end="url(#head)"/>"##,
        sx + c0 * UNIT,
        sy - c1 * UNIT
    );

    let lx = |t: i64| MARGIN + (t - lo + 1) * UNIT;
    let _ = writeln!(
        s,
        r##"  <line x1="{}" y1="{line_y}" x2="{}" y2="{line_y}" stroke="#606060" stroke-width="1"/>"##,
        MARGIN,
        lx(hi + 1)
    );
    let _ = writeln!(
        s,
        r##"  <line x1="{}" y1="{line_y}" x2="{}" y2="{line_y}" stroke="#b03a2e" stroke-width="4"/>"##,
        lx(lo),
        lx(hi)
    );
    for t in lo..=hi {
        let _ = writeln!(s, r##"  <circle cx="{}" cy="{line_y}" r="3" fill="#b03a2e"/>"##, lx(t));
        let _ = writeln!(
            s,
            r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{t}</text>"#,
            lx(t),
            line_y + 20
        );
    }
    let _ = writeln!(
        s,
        r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="14">width {} in direction ({}, {})</text>"#,
        MARGIN,
        MARGIN / 2,
        hi - lo,
        c0,
        c1
    );
    s.push_str("</svg>\n");
    Ok(s)
}
