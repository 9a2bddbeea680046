//! Curve export: CSV (exact) and SVG (presentation only).

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use pba::{format_rational, RationalParetoSet};

pub fn curve_csv(curve: &RationalParetoSet, k: usize) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=k)
        .map(|i| format!("p{i}"))
        .chain(["value".to_string()])
        .collect();
    let _ = writeln!(out, "{}", header.join(","));
    for m in curve.iter() {
        let mut row: Vec<String> = m.weight.components().iter().map(format_rational).collect();
        row.push(format_rational(&m.value()));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Scatter of `(p_1, p_2)` on the unit square with the members joined in
/// curve order.
pub fn curve_svg(curve: &RationalParetoSet) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 40.0;
    let span = SIZE - 2.0 * PAD;
    let points: Vec<(f64, f64)> = curve
        .iter()
        .map(|m| {
            let c = m.weight.components();
            let x = c.first().and_then(|v| v.to_f64()).unwrap_or(0.0);
            let y = c.get(1).and_then(|v| v.to_f64()).unwrap_or(0.0);
            (PAD + x * span, SIZE - PAD - y * span)
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"{PAD}\" y=\"{PAD}\" width=\"{span}\" height=\"{span}\" fill=\"none\" stroke=\"#999\"/>"
    );
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\">p1</text>",
        SIZE - PAD,
        SIZE - PAD / 3.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\">p2</text>",
        PAD / 4.0,
        PAD
    );
    if points.len() > 1 {
        let path: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            out,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#36c\"/>",
            path.join(" ")
        );
    }
    for (x, y) in &points {
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#c33\"/>"
        );
    }
    out.push_str("</svg>\n");
    out
}
