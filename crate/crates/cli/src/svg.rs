//! Minimal SVG drawing of a panel concept.

use std::fmt::Write;

use ideal_rpm::domain::decode_panel;
use ideal_rpm::{AttrKind, Concept, Schema, VariableId};

const SIDE: f64 = 200.0;

/// Parses `(a,b,...)` into numbers.
fn tuple(label: &str) -> Option<Vec<f64>> {
    let inner = label.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

fn index_in(schema: &Schema, attr: AttrKind, v: VariableId) -> (usize, usize) {
    let vars = &schema.attribute(attr).vars;
    (vars.iter().position(|&w| w == v).unwrap_or(0), vars.len().max(1))
}

/// Center `(x, y)` and cell width as fractions of the panel.
fn placement(schema: &Schema, pos: VariableId) -> (f64, f64, f64) {
    match tuple(schema.label(pos)).as_deref() {
        Some([row, col, w]) => (*col, *row, *w),
        _ => {
            let (i, n) = index_in(schema, AttrKind::Pos, pos);
            let slots = n.saturating_sub(1).max(1);
            ((i as f64 + 0.5) / slots as f64, 0.5, 1.0 / slots as f64)
        }
    }
}

fn fill(schema: &Schema, color: VariableId) -> String {
    let label = schema.label(color);
    let level = match label.strip_prefix('#').and_then(|s| s.parse::<u8>().ok()) {
        Some(l) => l,
        None => match label {
            "white" => 255,
            "gray" => 160,
            "dgray" => 80,
            "black" => 0,
            _ => {
                let (i, n) = index_in(schema, AttrKind::Color, color);
                (255 - 255 * i / n.saturating_sub(1).max(1)) as u8
            }
        },
    };
    format!("rgb({level},{level},{level})")
}

fn scale(schema: &Schema, size: VariableId) -> f64 {
    match tuple(schema.label(size)).as_deref() {
        Some([rel, ..]) => *rel,
        _ => {
            let (i, n) = index_in(schema, AttrKind::Size, size);
            0.4 + 0.5 * i as f64 / n.saturating_sub(1).max(1) as f64
        }
    }
}

fn polygon(cx: f64, cy: f64, r: f64, sides: usize) -> String {
    let pts: Vec<String> = (0..sides)
        .map(|k| {
            let a = -std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * k as f64 / sides as f64;
            format!("{:.2},{:.2}", cx + r * a.cos(), cy + r * a.sin())
        })
        .collect();
    pts.join(" ")
}

pub fn render(c: &Concept, schema: &Schema) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIDE}" height="{SIDE}" viewBox="0 0 {SIDE} {SIDE}">"#);
    let _ = writeln!(out, r#"  <rect x="0" y="0" width="{SIDE}" height="{SIDE}" fill="white" stroke="black"/>"#);
    for e in decode_panel(c, schema).unwrap_or_default() {
        let (x, y, w) = placement(schema, e.pos);
        let (cx, cy) = (x * SIDE, y * SIDE);
        let r = 0.45 * w * SIDE * scale(schema, e.size);
        let paint = format!(r#"fill="{}" stroke="black" stroke-width="2""#, fill(schema, e.color));
        let shape = match schema.label(e.shape) {
            "circle" => format!(r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" {paint}/>"#),
            other => {
                let sides = match other {
                    "triangle" => 3,
                    "square" => 4,
                    "pentagon" => 5,
                    _ => 6,
                };
                format!(r#"<polygon points="{}" {paint}/>"#, polygon(cx, cy, r, sides))
            }
        };
        let _ = writeln!(out, "  {shape}");
    }
    out.push_str("</svg>\n");
    out
}
