//! CSV and SVG emission. Every file starts with a comment header naming the
//! tool version, the config hash and the method tags behind the numbers.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Nine significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.8e}")
}

pub struct Emitter {
    dir: PathBuf,
    config_hash: String,
    command: &'static str,
    pub svg: bool,
    written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(
        dir: &Path,
        config_hash: String,
        command: &'static str,
        svg: bool,
    ) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            config_hash,
            command,
            svg,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn header_lines(&self, tags: &[(&str, String)]) -> Vec<String> {
        let mut lines = vec![
            format!("cadsim {}", env!("CARGO_PKG_VERSION")),
            format!("command = {}", self.command),
            format!("config_sha256 = {}", self.config_hash),
        ];
        lines.extend(tags.iter().map(|(k, v)| format!("{k} = {v}")));
        lines
    }

    pub fn csv(
        &mut self,
        name: &str,
        tags: &[(&str, String)],
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let file =
            File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut out = BufWriter::new(file);
        for line in self.header_lines(tags) {
            writeln!(out, "# {line}")?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(columns)?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        out.flush()?;
        self.written.push(path);
        Ok(())
    }

    /// Line plot of one or more series sharing the x axis. Non-finite points
    /// are skipped.
    pub fn svg_plot(
        &mut self,
        name: &str,
        tags: &[(&str, String)],
        x_label: &str,
        y_label: &str,
        series: &[(&str, &[f64], &[f64])],
    ) -> Result<(), CliError> {
        if !self.svg {
            return Ok(());
        }
        let path = self.dir.join(name);
        let body = render_svg(&self.header_lines(tags), x_label, y_label, series);
        std::fs::write(&path, body)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn render_svg(
    header: &[String],
    x_label: &str,
    y_label: &str,
    series: &[(&str, &[f64], &[f64])],
) -> String {
    let finite = |v: &f64| v.is_finite();
    let pts = || {
        series
            .iter()
            .flat_map(|(_, x, y)| x.iter().zip(y.iter()))
            .filter(|(x, y)| finite(x) && finite(y))
    };
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (&x, &y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    for line in header {
        let _ = writeln!(s, "<!-- {line} -->");
    }
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (l, r, t, b) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(
        s,
        r#"<text x="{l}" y="{}" text-anchor="middle">{}</text>"#,
        b + 15.0,
        num_short(x0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{r}" y="{}" text-anchor="middle">{}</text>"#,
        b + 15.0,
        num_short(x1)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{b}" text-anchor="end">{}</text>"#,
        l - 4.0,
        num_short(y0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        l - 4.0,
        t + 4.0,
        num_short(y1)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (i, (name, _, _)) in series.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
            r - 120.0,
            t + 14.0 * i as f64,
            COLORS[i % COLORS.len()],
            escape(name)
        );
    }
    let _ = writeln!(s, "</g>");
    for (i, (_, x, y)) in series.iter().enumerate() {
        let points: Vec<String> = x
            .iter()
            .zip(y.iter())
            .filter(|(x, y)| finite(x) && finite(y))
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
            COLORS[i % COLORS.len()],
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

fn num_short(v: f64) -> String {
    format!("{v:.3e}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(1.0), "1.00000000e0");
        assert_eq!(num(-2608.123456789), "-2.60812346e3");
    }

    #[test]
    fn svg_skips_non_finite() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, f64::NAN, 3.0];
        let s = render_svg(&[], "x", "y", &[("a", &x, &y)]);
        assert!(s.contains("<polyline"));
        assert!(!s.contains("NaN"));
        assert_eq!(s.matches(',').count(), 2);
    }
}
