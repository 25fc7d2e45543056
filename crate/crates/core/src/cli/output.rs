//! CSV rows and a small log-log SVG emitter.

use std::fmt::Write as _;

use crate::stats::LineFit;

/// One CSV field. Floats are written with 17 significant digits.
pub enum Cell {
    F(f64),
    I(i128),
    B(bool),
    S(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i128)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::I(v as i128)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::I(v as i128)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub struct Csv {
    out: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { out: header.join(",") + "\n", columns: header.len() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns);
        let fields: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::F(v) => format_float(v),
                Cell::I(v) => v.to_string(),
                Cell::B(v) => v.to_string(),
                Cell::S(s) => s,
                Cell::Empty => String::new(),
            })
            .collect();
        self.out.push_str(&fields.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Join points with a line instead of drawing markers.
    pub line: bool,
}

impl Series {
    pub fn markers(name: &str, points: Vec<(f64, f64)>) -> Self {
        Series { name: name.into(), points, line: false }
    }

    pub fn line(name: &str, points: Vec<(f64, f64)>) -> Self {
        Series { name: name.into(), points, line: true }
    }
}

const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Log-log scatter plot; nonpositive points are dropped. The optional fit is
/// `ln y = intercept + slope · ln x`, drawn dashed across the x range.
pub fn loglog_svg(title: &str, x_label: &str, y_label: &str, series: &[Series], fit: Option<&LineFit>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const L: f64 = 80.0;
    const R: f64 = 150.0;
    const T: f64 = 40.0;
    const B: f64 = 60.0;
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    if pts.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let fold = |f: fn(f64, f64) -> f64, init: f64, pick: fn(&(f64, f64)) -> f64| pts.iter().map(pick).fold(init, f);
    let (mut x0, mut x1) = (fold(f64::min, f64::INFINITY, |p| p.0).floor(), fold(f64::max, f64::NEG_INFINITY, |p| p.0).ceil());
    let (mut y0, mut y1) = (fold(f64::min, f64::INFINITY, |p| p.1).floor(), fold(f64::max, f64::NEG_INFINITY, |p| p.1).ceil());
    if x1 <= x0 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if y1 <= y0 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let px = |lx: f64| L + (lx - x0) / (x1 - x0) * (W - L - R);
    let py = |ly: f64| H - B - (ly - y0) / (y1 - y0) * (H - T - B);
    let _ = writeln!(
        svg,
        r#"<rect x="{L}" y="{T}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - L - R,
        H - T - B
    );
    for e in x0 as i64..=x1 as i64 {
        let x = px(e as f64);
        let _ = writeln!(svg, r##"<line x1="{x:.1}" y1="{T}" x2="{x:.1}" y2="{}" stroke="#ddd"/>"##, H - B);
        let _ = writeln!(svg, r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{e}</text>"#, H - B + 16.0);
    }
    for e in y0 as i64..=y1 as i64 {
        let y = py(e as f64);
        let _ = writeln!(svg, r##"<line x1="{L}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/>"##, W - R);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{e}</text>"#, L - 6.0, y + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (L + W - R) / 2.0, H - 20.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
        (T + H - B) / 2.0,
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .map(|(x, y)| (px(x.log10()), py(y.log10())))
            .collect();
        if s.line {
            let path: Vec<String> = coords.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
            let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        } else {
            for (x, y) in coords {
                let _ = writeln!(svg, r#"<circle cx="{x:.1}" cy="{y:.1}" r="3" fill="{color}"/>"#);
            }
        }
        let ly = T + 16.0 + 18.0 * i as f64;
        let _ = writeln!(svg, r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#, W - R + 10.0, ly - 9.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{ly}">{}</text>"#, W - R + 26.0, escape(&s.name));
    }
    if let Some(f) = fit {
        let (a, b) = (x0 * std::f64::consts::LN_10, x1 * std::f64::consts::LN_10);
        let (ya, yb) = (f.predict(a) / std::f64::consts::LN_10, f.predict(b) / std::f64::consts::LN_10);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-dasharray="6 4"/>"#,
            px(x0),
            py(ya),
            px(x1),
            py(yb)
        );
        let ly = T + 16.0 + 18.0 * series.len() as f64;
        let _ = writeln!(svg, r#"<text x="{}" y="{ly}">slope {:.3}</text>"#, W - R + 10.0, f.slope);
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_rows() {
        let mut c = Csv::new(&["a", "b", "c"]);
        c.row(vec![1usize.into(), 0.5.into(), Cell::from(None::<f64>)]);
        assert_eq!(c.finish(), "a,b,c\n1,5.0000000000000000e-1,\n");
    }

    #[test]
    fn svg_is_well_formed() {
        let s = loglog_svg("t", "x", "y", &[Series::markers("p", vec![(1.0, 2.0), (10.0, 0.2), (0.0, 1.0)])], None);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 2);
    }
}
