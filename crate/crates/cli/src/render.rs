use std::fmt::Write as _;

use modinv::IntMatrix;

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let mut l = String::new();
        for (i, (c, w)) in cells.iter().zip(&width).enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            l.push_str(c);
            if i + 1 < cells.len() {
                l.extend(std::iter::repeat_n(' ', w - c.chars().count()));
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let esc = |c: &str| {
        if c.contains([',', '"', '\n']) {
            format!("\"{}\"", c.replace('"', "\"\""))
        } else {
            c.to_string()
        }
    };
    let _ = writeln!(out, "{}", header.iter().map(|h| esc(h)).collect::<Vec<_>>().join(","));
    for r in rows {
        let _ = writeln!(out, "{}", r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(","));
    }
    out
}

/// A matrix as CSV rows, prefixed by `key` columns.
pub fn matrix_rows(key: &[String], m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            key.iter()
                .cloned()
                .chain(std::iter::once(i.to_string()))
                .chain(m.row(i).iter().map(ToString::to_string))
                .collect()
        })
        .collect()
}

pub fn json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

pub fn float(x: f64) -> String {
    format!("{x:.10}")
}
