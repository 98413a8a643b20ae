//! Serialization of results: CSV tables, minimal SVG line plots and JSON.
//!
//! Numbers are written with 12 significant digits in scientific notation so
//! that identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;

use crate::hom::{CurveKind, HomCurve};

/// 12 significant digits; non-finite values become empty cells.
pub fn fmt_sig(v: f64) -> String {
    if v.is_finite() {
        if v == 0.0 {
            // fold −0 into 0 so mirrored grids print identically
            "0.00000000000e0".to_string()
        } else {
            format!("{v:.11e}")
        }
    } else {
        String::new()
    }
}

/// A rectangular table with `key=value` metadata written as comment lines.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(fmt_sig).unwrap_or_default()).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii csv")
    }
}

fn curve_value_label(kind: CurveKind) -> &'static str {
    match kind {
        CurveKind::SplitProbability => "w_split",
        CurveKind::UnsplitProbability => "w_unsplit",
        CurveKind::Density => "density",
    }
}

impl From<&HomCurve<f64>> for Table {
    fn from(c: &HomCurve<f64>) -> Self {
        let mut t = Table::new(&[c.axis.label(), curve_value_label(c.kind)])
            .with_meta("scheme", c.scheme.label())
            .with_meta("xi", fmt_sig(c.xi))
            .with_meta("omega0_t_osc", fmt_sig(c.t_osc))
            .with_meta("omega0_t_decoh", fmt_sig(c.t_decoh));
        if let Some(d) = c.delay {
            t = t.with_meta("omega0_dt", fmt_sig(d));
        }
        if c.fragile {
            t = t.with_meta("model_fragile", true);
        }
        for (&x, &y) in c.x.iter().zip(&c.y) {
            t.push(vec![Some(x), Some(y)]);
        }
        t
    }
}

/// One polyline of a plot.
#[derive(Debug, Clone)]
pub struct Series<'a> {
    pub label: String,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Polylines with axes, tick labels and a legend; non-finite points break
/// the line.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let (w, h) = (720.0, 480.0);
    let (ml, mr, mt, mb) = (80.0, 20.0, 40.0, 60.0);
    let finite = |v: &&f64| v.is_finite();
    let xs = series.iter().flat_map(|s| s.x.iter()).filter(finite);
    let ys = series.iter().flat_map(|s| s.y.iter()).filter(finite);
    let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{ml},{mt} V{} H{}" fill="none" stroke="black"/>"#,
        h - mb,
        w - mr
    );
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            px(fx),
            h - mb + 18.0,
            tick(fx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            ml - 6.0,
            py(fy) + 4.0,
            tick(fy)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (ml + w - mr) / 2.0, h - 16.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        (mt + h - mb) / 2.0,
        (mt + h - mb) / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        let mut pen_down = false;
        for (&x, &y) in ser.x.iter().zip(ser.y) {
            if x.is_finite() && y.is_finite() {
                let _ = write!(d, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, px(x), py(y));
                pen_down = true;
            } else {
                pen_down = false;
            }
        }
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#, d.trim_end());
        if !ser.label.is_empty() {
            let ly = mt + 8.0 + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}"/><text x="{}" y="{}">{}</text>"#,
                w - mr - 150.0,
                w - mr - 130.0,
                w - mr - 125.0,
                ly + 4.0,
                escape(&ser.label)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{}", (v * 1e4).round() / 1e4)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_sig(-0.0), fmt_sig(0.0));
        assert_eq!(fmt_sig(f64::NAN), "");
        let v: f64 = fmt_sig(std::f64::consts::PI).parse().unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]).with_meta("xi", 0.1);
        t.push(vec![Some(1.0), None]);
        let csv = t.to_csv();
        assert_eq!(csv, "# xi=0.1\na,b\n1.00000000000e0,\n");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, f64::NAN, 1.0];
        let svg = svg_plot("t<1>", "x", "y", &[Series { label: "s".into(), x: &x, y: &y }]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("t&lt;1&gt;"));
        assert_eq!(svg.matches(" M").count() + svg.matches("\"M").count(), 3);
    }
}
