//! Number formatting, tables and the SVG age plot.

use std::fmt::Write as _;

use crate::trajectory::AgeTrajectory;

/// Rounds to 12 significant digits and prints in plain decimal notation.
pub fn num(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

pub fn join(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(" ")
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const TICKS: usize = 5;

fn short(v: f64) -> String {
    let s: f64 = format!("{v:.3e}").parse().expect("formatted float parses");
    s.to_string()
}

/// Standalone SVG of the age curve: one polyline per stretch between drops,
/// with axis lines and tick labels inline.
pub fn trajectory_svg(traj: &AgeTrajectory) -> String {
    let x_max = traj.horizon.max(f64::MIN_POSITIVE);
    let y_max = traj
        .breakpoints
        .iter()
        .map(|b| b.age_before.max(b.age_after))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let px = |t: f64| MARGIN + t / x_max * (WIDTH - 2.0 * MARGIN);
    let py = |a: f64| HEIGHT - MARGIN - a / y_max * (HEIGHT - 2.0 * MARGIN);

    let mut polylines: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    let first = traj.breakpoints[0];
    polylines[0].push((first.t, first.age_after));
    for b in &traj.breakpoints[1..] {
        let current = polylines.last_mut().expect("non-empty");
        current.push((b.t, b.age_before));
        if b.is_drop() {
            polylines.push(vec![(b.t, b.age_after)]);
        }
    }
    polylines.retain(|p| p.len() > 1);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let (x0, y0) = (px(0.0), py(0.0));
    let _ = writeln!(
        svg,
        r#"  <line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        px(x_max)
    );
    let _ = writeln!(
        svg,
        r#"  <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}" stroke="black"/>"#,
        py(y_max)
    );
    for k in 0..=TICKS {
        let frac = k as f64 / TICKS as f64;
        let (tx, ty) = (px(frac * x_max), py(frac * y_max));
        let _ = writeln!(
            svg,
            r#"  <line x1="{tx}" y1="{y0}" x2="{tx}" y2="{}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{tx}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            y0 + 18.0,
            short(frac * x_max)
        );
        let _ = writeln!(
            svg,
            r#"  <line x1="{}" y1="{ty}" x2="{x0}" y2="{ty}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            ty + 4.0,
            short(frac * y_max)
        );
    }
    let _ = writeln!(
        svg,
        r#"  <text x="{}" y="{}" font-size="12" text-anchor="middle">t</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"  <text x="14" y="{}" font-size="12" text-anchor="middle">age</text>"#,
        HEIGHT / 2.0
    );
    for line in &polylines {
        let points: Vec<String> = line
            .iter()
            .map(|&(t, a)| format!("{:.3},{:.3}", px(t), py(a)))
            .collect();
        let _ = writeln!(
            svg,
            r#"  <polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}
