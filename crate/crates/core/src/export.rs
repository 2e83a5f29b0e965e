//! Window factor tables as JSON, DOT, or plain text.

use std::fmt::Write;

use serde::Serialize;

use crate::error::Result;
use crate::factorization::{FactorId, FactorLabel, Factorization};
use crate::groups::Element;
use crate::verify::Window;

/// Every window edge of `Cay[G:S]` with its factor, in window pair order.
pub fn window_table(f: &dyn Factorization, n: usize) -> Result<Vec<(Element, Element, FactorId)>> {
    let g = f.group();
    let window = Window::new(g, n);
    let mut rows = Vec::new();
    for (x, y) in window.pairs() {
        if f.in_connection_set(&g.diff(x, y)?)? {
            rows.push((x.clone(), y.clone(), f.factor_of_edge(x, y)?));
        }
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct EdgeRow {
    u: String,
    v: String,
    factor: FactorLabel,
}

#[derive(Debug, Serialize)]
struct TableJson {
    group: String,
    connection_set: String,
    window: usize,
    edges: Vec<EdgeRow>,
}

pub fn to_json(f: &dyn Factorization, n: usize, rows: &[(Element, Element, FactorId)]) -> String {
    let doc = TableJson {
        group: f.group().to_string(),
        connection_set: f.describe_set(),
        window: Window::new(f.group(), n).len(),
        edges: rows
            .iter()
            .map(|(u, v, id)| EdgeRow {
                u: u.encode(),
                v: v.encode(),
                factor: id.to_json(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("table serializes")
}

/// One line per edge: `{0,1} ↦ Trans(0)`.
pub fn to_text(rows: &[(Element, Element, FactorId)]) -> String {
    let mut out = String::new();
    for (u, v, id) in rows {
        let _ = writeln!(out, "{{{},{}}} ↦ {id}", u.encode(), v.encode());
    }
    out
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// A color determined by the factor label alone.
pub fn factor_color(id: &FactorId) -> String {
    let h = fnv1a(&id.to_string());
    let hue = (h % 360) as f64 / 360.0;
    let sat = 0.55 + ((h >> 16) % 40) as f64 / 100.0;
    format!("{hue:.3} {sat:.3} 0.850")
}

pub fn to_dot(f: &dyn Factorization, rows: &[(Element, Element, FactorId)]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "graph \"Cay[{} : {}]\" {{",
        f.group(),
        f.describe_set()
    );
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    for (u, v, id) in rows {
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [color=\"{}\", label=\"{id}\"];",
            u.encode(),
            v.encode(),
            factor_color(id)
        );
    }
    out.push_str("}\n");
    out
}
