//! Static log-log scatter plots.
//!
//! The output holds one `<circle>` per sample and, when a fit is given, a
//! single `<line>` for the fitted power law. Axes and ticks are `<path>`
//! elements so the data marks can be counted by element name.

use std::fmt::Write as _;
use std::path::Path;

use allometry_core::{ScalingFit, SystemSample};

use crate::error::{CliError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 56.0;

/// Rounds to four significant digits for display.
pub fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // Take the exponent after rounding so 0.99996 becomes "1.000".
    let sci = format!("{x:.3e}");
    let mag: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if !(-4..=6).contains(&mag) {
        return sci;
    }
    let decimals = (3 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Whole decades `[lo, hi]` covering `values` (base-10 exponents).
pub fn decade_range(values: impl Iterator<Item = f64>) -> (i32, i32) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        let l = v.log10();
        lo = lo.min(l);
        hi = hi.max(l);
    }
    let lo = lo.floor() as i32;
    let hi = (hi.ceil() as i32).max(lo + 1);
    (lo, hi)
}

struct Axis {
    lo: i32,
    hi: i32,
    start: f64,
    end: f64,
}

impl Axis {
    fn map(&self, value: f64) -> f64 {
        let t = (value.log10() - self.lo as f64) / (self.hi - self.lo) as f64;
        self.start + t * (self.end - self.start)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders `samples` (and the fitted line, if any) as an SVG document.
pub fn scatter_svg(
    samples: &[SystemSample],
    fit: Option<&ScalingFit>,
    title: &str,
) -> Result<String> {
    if samples.is_empty() {
        return Err(CliError::BadInput("cannot plot an empty scatter".into()));
    }
    let (xlo, xhi) = decade_range(samples.iter().map(|s| s.population as f64));
    let (ylo, yhi) = decade_range(samples.iter().map(|s| s.new_tags));
    let x = Axis {
        lo: xlo,
        hi: xhi,
        start: LEFT,
        end: WIDTH - RIGHT,
    };
    let y = Axis {
        lo: ylo,
        hi: yhi,
        start: HEIGHT - BOTTOM,
        end: TOP,
    };

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        w,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    let mut heading = escape(title);
    if let Some(f) = fit {
        if !heading.is_empty() {
            heading.push_str(": ");
        }
        let _ = write!(heading, "γ = {}, R² = {}", sig4(f.gamma), sig4(f.r_squared));
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="15">{heading}</text>"#,
        WIDTH / 2.0
    );

    // Frame.
    let _ = writeln!(
        w,
        r#"<path d="M{:.2},{:.2} H{:.2} M{:.2},{:.2} V{:.2}" stroke="black" fill="none"/>"#,
        x.start, y.start, x.end, x.start, y.start, y.end
    );
    // Ticks and labels at each decade.
    for d in xlo..=xhi {
        let px = x.map(10f64.powi(d));
        let _ = writeln!(
            w,
            r#"<path d="M{px:.2},{:.2} V{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">10^{d}</text>"#,
            y.start,
            y.start + 5.0,
            y.start + 20.0
        );
    }
    for d in ylo..=yhi {
        let py = y.map(10f64.powi(d));
        let _ = writeln!(
            w,
            r#"<path d="M{:.2},{py:.2} H{:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">10^{d}</text>"#,
            x.start,
            x.start - 5.0,
            x.start - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">active population P</text>"#,
        (x.start + x.end) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">new tags T</text>"#,
        (y.start + y.end) / 2.0,
        (y.start + y.end) / 2.0
    );

    for s in samples {
        let _ = writeln!(
            w,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#1f77b4" fill-opacity="0.7"/>"##,
            x.map(s.population as f64),
            y.map(s.new_tags)
        );
    }

    if let Some(f) = fit {
        let p0 = samples.iter().map(|s| s.population).min().unwrap_or(1);
        let p1 = samples.iter().map(|s| s.population).max().unwrap_or(1);
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
            x.map(p0 as f64),
            y.map(f.predict(p0)),
            x.map(p1 as f64),
            y.map(f.predict(p1))
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_scatter_svg(
    samples: &[SystemSample],
    fit: Option<&ScalingFit>,
    title: &str,
    path: &Path,
) -> Result<()> {
    let doc = scatter_svg(samples, fit, title)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, doc).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_digits() {
        assert_eq!(sig4(1.23456), "1.235");
        assert_eq!(sig4(0.98765), "0.9877");
        assert_eq!(sig4(123.456), "123.5");
        assert_eq!(sig4(2.0), "2.000");
        assert_eq!(sig4(12345.0), "12345");
        assert_eq!(sig4(0.99996), "1.000");
        assert_eq!(sig4(2.1714e-5), "2.171e-5");
    }

    #[test]
    fn decades_cover_values() {
        assert_eq!(decade_range([10.0, 10_000.0].into_iter()), (1, 4));
        assert_eq!(decade_range([12.0, 9_000.0].into_iter()), (1, 4));
        assert_eq!(decade_range([5.0].into_iter()), (0, 1));
    }
}
