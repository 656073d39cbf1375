//! Static SVG charts of spectral sequence pages.

use std::collections::BTreeMap;
use std::fmt::Write;

use tatelab::serre::{BigradedPage, DifferentialSpec, Position};

const CELL: f64 = 48.0;
const MARGIN: f64 = 40.0;
const DOT: f64 = 4.0;

/// Draw the entries of `page` with internal degree `t` in the `(p, q)` plane, the
/// components of `differentials`, and highlight the classes that survive to `survivors`.
pub fn page_svg(title: &str, page: &BigradedPage, differentials: &DifferentialSpec, survivors: &BigradedPage, t: i64) -> String {
    let mut cells: BTreeMap<(i64, i64), usize> = page
        .entries
        .iter()
        .filter(|(&(_, _, tt), v)| tt == t && !v.is_empty())
        .map(|(&(p, q, _), v)| ((p, q), v.len()))
        .collect();
    for &(p, q, _) in page.integral.iter().filter(|pos| pos.2 == t) {
        cells.entry((p, q)).or_insert(1);
    }
    let p_max = page.window.p_max.max(cells.keys().map(|k| k.0).max().unwrap_or(0));
    let q_min = cells.keys().map(|k| k.1).min().unwrap_or(0).min(0);
    let q_max = cells.keys().map(|k| k.1).max().unwrap_or(0).max(1);
    let width = MARGIN * 2.0 + CELL * (p_max + 1) as f64;
    let height = MARGIN * 2.0 + CELL * (q_max - q_min + 1) as f64;
    let x = |p: i64| MARGIN + CELL * (p as f64 + 0.5);
    let y = |q: i64| height - MARGIN - CELL * ((q - q_min) as f64 + 0.5);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="20" font-size="13">{}</text>"#, escape(title));
    for p in 0..=p_max {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{p}</text>"#, x(p), height - MARGIN + 16.0);
        let _ = writeln!(
            s,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/>"##,
            x(p) - CELL / 2.0,
            MARGIN,
            height - MARGIN
        );
    }
    for q in q_min..=q_max {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{q}</text>"#, MARGIN - 6.0, y(q) + 4.0);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="#ddd"/>"##,
            y(q) + CELL / 2.0,
            width - MARGIN
        );
    }
    for e in differentials.entries.iter().filter(|e| e.source.2 == t && cells.contains_key(&(e.source.0, e.source.1))) {
        if !cells.contains_key(&(e.target.0, e.target.1)) {
            continue;
        }
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f4fd1" stroke-width="1.5" marker-end="url(#arrow)"/>"##,
            x(e.source.0),
            y(e.source.1),
            x(e.target.0),
            y(e.target.1)
        );
    }
    let _ = writeln!(
        s,
        r##"<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="#1f4fd1"/></marker></defs>"##
    );
    for (&(p, q), &n) in &cells {
        let pos: Position = (p, q, t);
        let kept = survivors.dimension(pos);
        for i in 0..n {
            let dx = (i as f64 - (n as f64 - 1.0) / 2.0) * (DOT * 2.5);
            let (cx, cy) = (x(p) + dx, y(q));
            let fill = if q.rem_euclid(2) == 1 { "#2a9d3a" } else { "black" };
            if page.integral.contains(&pos) {
                let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#, cx - DOT, cy - DOT, 2.0 * DOT, 2.0 * DOT);
            } else {
                let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="{DOT}" fill="{fill}"/>"#);
            }
            if i < kept || page.integral.contains(&pos) {
                let _ = writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="{}" fill="none" stroke="#e07b00" stroke-width="1.5"/>"##, DOT + 3.0);
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
