//! Standalone SVG chart of the scaled amplitude and the bunching magnitude.

use std::fmt::Write as _;

use anyhow::{bail, Result};

use crate::output::Row;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
/// Smallest value drawn on a log axis.
const LOG_FLOOR: f64 = 1e-8;

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        let t = if self.log {
            (v.max(LOG_FLOOR).log10() - self.lo) / (self.hi - self.lo)
        } else {
            (v - self.lo) / (self.hi - self.lo)
        };
        TOP + (HEIGHT - TOP - BOTTOM) * (1.0 - t.clamp(0.0, 1.0))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            (self.lo as i32..=self.hi as i32)
                .map(|e| (10f64.powi(e), format!("1e{e}")))
                .collect()
        } else {
            let step = nice_step(self.hi - self.lo);
            let n = ((self.hi - self.lo) / step).floor() as i32;
            (0..=n)
                .map(|k| {
                    let v = self.lo + step * f64::from(k);
                    (v, format!("{v:.2}"))
                })
                .collect()
        }
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let nice = if m < 1.5 {
        1.0
    } else if m < 3.5 {
        2.0
    } else if m < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn x_pos(tau: f64, t0: f64, t1: f64) -> f64 {
    let span = if t1 > t0 { t1 - t0 } else { 1.0 };
    LEFT + (WIDTH - LEFT - RIGHT) * (tau - t0) / span
}

fn polyline(rows: &[Row], value: impl Fn(&Row) -> f64, y: &Axis, t0: f64, t1: f64, color: &str) -> String {
    let mut pts = String::new();
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            pts.push(' ');
        }
        let _ = write!(pts, "{:.2},{:.2}", x_pos(r.tau, t0, t1), y.map(value(r)));
    }
    format!("<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{pts}\"/>\n")
}

/// Render `A0(tau)` and `|b|(tau)`. With `log_scale` the vertical axis is
/// logarithmic, which shows the exponential gain phase as a straight line.
pub fn render_svg(rows: &[Row], log_scale: bool) -> Result<String> {
    if rows.is_empty() {
        bail!("cannot plot an empty trajectory");
    }
    let t0 = rows[0].tau;
    let t1 = rows[rows.len() - 1].tau;
    let top = rows
        .iter()
        .map(|r| r.amplitude.max(r.bunching_abs()))
        .fold(0.0_f64, f64::max);
    let y = if log_scale {
        let bottom = rows
            .iter()
            .flat_map(|r| [r.amplitude, r.bunching_abs()])
            .filter(|v| *v > 0.0)
            .fold(f64::INFINITY, f64::min)
            .max(LOG_FLOOR);
        let lo = if bottom.is_finite() { bottom.log10().floor() } else { -8.0 };
        let hi = top.max(LOG_FLOOR).log10().ceil().max(lo + 1.0);
        Axis { lo, hi, log: true }
    } else {
        let hi = if top > 0.0 { top * 1.05 } else { 1.0 };
        Axis { lo: 0.0, hi, log: false }
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let (x0, x1, yb, yt) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        svg,
        "<path d=\"M{x0},{yt} L{x0},{yb} L{x1},{yb}\" fill=\"none\" stroke=\"black\"/>"
    );
    for (v, label) in y.ticks() {
        let py = y.map(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{x0}\" y1=\"{py:.2}\" x2=\"{x1}\" y2=\"{py:.2}\" stroke=\"#ddd\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>",
            x0 - 6.0,
            py + 4.0
        );
    }
    let step = nice_step((t1 - t0).max(1e-12));
    let mut k = (t0 / step).ceil();
    while k * step <= t1 + 1e-9 * step {
        let tau = k * step;
        let px = x_pos(tau, t0, t1);
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            yb + 18.0,
            trim_zero(tau)
        );
        k += 1.0;
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">tau</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );
    svg.push_str(&polyline(rows, |r| r.amplitude, &y, t0, t1, "#1f77b4"));
    svg.push_str(&polyline(rows, Row::bunching_abs, &y, t0, t1, "#d62728"));
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"20\" fill=\"#1f77b4\">A0 (scaled)</text><text x=\"{:.2}\" y=\"20\" fill=\"#d62728\">|b|</text>",
        x0 + 10.0,
        x0 + 110.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn trim_zero(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}
