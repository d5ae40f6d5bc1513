//! Minimal line plots: axes, ticks, optional log ordinate and a legend.

use std::fmt::Write;

use uwrelay_core::metrics::Provenance;

use crate::sweep::Series;

const PLOT_WIDTH: f64 = 500.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn dash(p: Provenance) -> &'static str {
    match p {
        Provenance::ClosedForm => "",
        Provenance::Asymptotic => " stroke-dasharray=\"6 4\"",
        Provenance::Quadrature => " stroke-dasharray=\"2 3\"",
        Provenance::MonteCarlo => " stroke-opacity=\"0\"",
    }
}

/// Nice linear ticks covering `[lo, hi]`.
fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(if t.abs() < 1e-12 * span { 0.0 } else { t });
        t += step;
    }
    out
}

pub fn plot(title: &str, y_label: &str, log_y: bool, series: &[Series]) -> String {
    let pts = |s: &Series| -> Vec<(f64, f64)> {
        s.curve
            .mean_snr_db()
            .iter()
            .zip(s.curve.values())
            .filter(|(_, v)| v.is_finite() && (!log_y || **v > 0.0))
            .map(|(x, v)| (*x, if log_y { v.log10() } else { *v }))
            .collect()
    };
    let all: Vec<(f64, f64)> = series.iter().flat_map(pts).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if all.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if log_y {
        y0 = y0.floor();
        y1 = y1.ceil();
    } else {
        y0 = y0.min(0.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    if !log_y {
        // Extend to the next round tick.
        let t = linear_ticks(y0, y1);
        if t.len() >= 2 && *t.last().unwrap() < y1 {
            y1 = t.last().unwrap() + (t[1] - t[0]);
        }
    }
    // Series sharing a scenario and RF setting share a colour.
    let mut groups: Vec<(&str, &str)> = Vec::new();
    let color_of: Vec<&str> = series
        .iter()
        .map(|s| {
            let key = (s.scenario.as_str(), s.rf.as_str());
            let i = groups.iter().position(|g| *g == key).unwrap_or_else(|| {
                groups.push(key);
                groups.len() - 1
            });
            PALETTE[i % PALETTE.len()]
        })
        .collect();
    let longest = series.iter().map(|s| s.label.chars().count()).max().unwrap_or(0) as f64;
    let right = 60.0 + 6.0 * longest;
    let pw = PLOT_WIDTH;
    let width = LEFT + PLOT_WIDTH + right;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{HEIGHT}\" viewBox=\"0 0 {width} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        LEFT + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    for t in linear_ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/><text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\">{t}</text>",
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0
        );
    }
    let y_ticks: Vec<(f64, String)> = if log_y {
        let step = ((y1 - y0) / 10.0).ceil().max(1.0);
        let mut v = Vec::new();
        let mut e = y0;
        while e <= y1 + 1e-9 {
            v.push((e, format!("1e{}", e as i64)));
            e += step;
        }
        v
    } else {
        linear_ticks(y0, y1).into_iter().map(|t| (t, format!("{t}"))).collect()
    };
    for (t, text) in y_ticks {
        let y = sy(t);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/><line x1=\"{LEFT}\" y1=\"{y:.2}\" x2=\"{}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/><text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{text}</text>",
            LEFT - 5.0,
            LEFT + pw,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">mean SNR (dB)</text>",
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">{1}</text>",
        TOP + ph / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = color_of[i];
        let p = pts(s);
        let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let method = s.curve.provenance();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{} points=\"{}\"/>",
            dash(method),
            path.join(" ")
        );
        if method == Provenance::MonteCarlo {
            for &(x, y) in &p {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"none\" stroke=\"{color}\"/>",
                    sx(x),
                    sy(y)
                );
            }
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        if method == Provenance::MonteCarlo {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{ly}\" r=\"3\" fill=\"none\" stroke=\"{color}\"/>",
                lx + 12.0
            );
        } else {
            let _ = writeln!(
                out,
                "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"1.5\"{}/>",
                lx + 24.0,
                dash(method)
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>",
            lx + 30.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use uwrelay_core::metrics::MetricCurve;

    #[test]
    fn ticks_are_round() {
        assert_eq!(linear_ticks(0.0, 40.0), vec![0.0, 10.0, 20.0, 30.0, 40.0]);
        assert_eq!(linear_ticks(0.0, 1.0).len(), 6);
    }

    #[test]
    fn log_plot_skips_non_positive_values() {
        let s = Series {
            label: "a<b".into(),
            scenario: "x".into(),
            rf: "y".into(),
            curve: MetricCurve::new(
                vec![0.0, 10.0, 20.0],
                vec![0.1, 0.0, 1e-4],
                Provenance::MonteCarlo,
                Some(vec![0.0; 3]),
            )
            .unwrap(),
        };
        let doc = plot("t", "p", true, &[s]);
        assert!(doc.starts_with("<svg") && doc.ends_with("</svg>\n"));
        assert!(doc.contains("a&lt;b"));
        assert!(doc.contains("1e-4") && doc.contains("1e-1"));
        assert_eq!(doc.matches("<circle").count(), 3);
    }
}
