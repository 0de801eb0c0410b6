//! Standalone SVG chart of basis-constant estimates against `3^n`.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Result};

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

/// `(degree, estimate, ceiling)` points on a log-scaled y axis.
pub fn write_svg(path: &Path, points: &[(u32, f64, f64)]) -> Result<()> {
    if points.is_empty() {
        bail!("nothing to plot");
    }
    let (lo_n, hi_n) = points
        .iter()
        .fold((u32::MAX, 0), |(lo, hi), &(n, _, _)| (lo.min(n), hi.max(n)));
    let top = points
        .iter()
        .map(|p| p.1.max(p.2))
        .fold(1.0, f64::max)
        .log10()
        .ceil()
        .max(1.0);
    let x = |n: u32| {
        let span = (hi_n - lo_n).max(1) as f64;
        MARGIN + (n - lo_n) as f64 / span * (WIDTH - 2.0 * MARGIN)
    };
    let y = |v: f64| HEIGHT - MARGIN - v.max(1.0).log10() / top * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    )?;
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    writeln!(
        svg,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" stroke="black" fill="none"/>"#
    )?;
    for decade in 0..=top as i32 {
        let v = 10f64.powi(decade);
        writeln!(
            svg,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{v}</text>"#,
            x0 - 4.0,
            y(v) + 4.0
        )?;
    }
    for &(n, _, _) in points {
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{n}</text>"#,
            x(n),
            y0 + 16.0
        )?;
    }
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">degree n</text>"#,
        WIDTH / 2.0,
        HEIGHT - 8.0
    )?;
    for (series, colour, pick) in [("3^n", "#c0392b", 2usize), ("estimate", "#2c3e50", 1)] {
        let path: Vec<String> = points
            .iter()
            .map(|p| {
                let v = if pick == 1 { p.1 } else { p.2 };
                format!("{:.1},{:.1}", x(p.0), y(v))
            })
            .collect();
        writeln!(
            svg,
            r#"<polyline points="{}" stroke="{colour}" fill="none" stroke-width="2"/>"#,
            path.join(" ")
        )?;
        for pt in &path {
            let (px, py) = pt.split_once(',').unwrap_or(("0", "0"));
            writeln!(svg, r#"<circle cx="{px}" cy="{py}" r="3" fill="{colour}"/>"#)?;
        }
        let ly = if pick == 1 { MARGIN - 20.0 } else { MARGIN - 6.0 };
        writeln!(
            svg,
            r#"<text x="{}" y="{ly}" fill="{colour}">{series}</text>"#,
            x1 - 60.0
        )?;
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}
