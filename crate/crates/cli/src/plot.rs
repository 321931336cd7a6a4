//! Two-panel SVG line charts: body rates and Euler angles against time.

use std::fmt::Write;

use adcslab::sim::TelemetryRecord;

const WIDTH: f64 = 900.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 110.0;
const MARGIN_T: f64 = 40.0;
const GAP: f64 = 70.0;
const MAX_POINTS: usize = 4000;
const COLORS: [&str; 3] = ["#d62728", "#2ca02c", "#1f77b4"];

struct Panel<'a> {
    title: &'a str,
    unit: &'a str,
    labels: [&'a str; 3],
    series: [Vec<f64>; 3],
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (-1.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn panel(svg: &mut String, p: &Panel, t: &[f64], top: f64) {
    let x0 = MARGIN_L;
    let x1 = WIDTH - MARGIN_R;
    let (t_lo, t_hi) = (t[0], *t.last().unwrap());
    let t_span = if t_hi > t_lo { t_hi - t_lo } else { 1.0 };
    let all = p.series.iter().flatten().copied().filter(|v| v.is_finite());
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (y_lo, y_hi) = nice_range(lo, hi);
    let sx = |v: f64| x0 + (v - t_lo) / t_span * (x1 - x0);
    let sy = |v: f64| top + PANEL_H - (v - y_lo) / (y_hi - y_lo) * PANEL_H;

    let _ = writeln!(svg, r##"<rect x="{x0}" y="{top}" width="{}" height="{PANEL_H}" fill="none" stroke="#333"/>"##, x1 - x0);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="15" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, top - 12.0, p.title);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let yv = y_lo + f * (y_hi - y_lo);
        let y = sy(yv);
        let tv = t_lo + f * t_span;
        let x = sx(tv);
        let _ = writeln!(svg, r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/>"##);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#, x0 - 6.0, y + 4.0, fmt_tick(yv));
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{}" font-size="11" text-anchor="middle">{}</text>"#, top + PANEL_H + 16.0, fmt_tick(tv));
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
        20.0,
        top + PANEL_H / 2.0,
        20.0,
        top + PANEL_H / 2.0,
        p.unit
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">t (s)</text>"#, (x0 + x1) / 2.0, top + PANEL_H + 34.0);

    for (k, ys) in p.series.iter().enumerate() {
        let mut d = String::new();
        let mut pen_up = true;
        for (tv, yv) in t.iter().zip(ys) {
            if !yv.is_finite() {
                pen_up = true;
                continue;
            }
            let _ = write!(d, "{}{:.2},{:.2} ", if pen_up { 'M' } else { 'L' }, sx(*tv), sy(*yv));
            pen_up = false;
        }
        let _ = writeln!(svg, r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.2"/>"#, d.trim_end(), COLORS[k]);
        let ly = top + 18.0 + 18.0 * k as f64;
        let _ = writeln!(svg, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/>"#, x1 + 10.0, x1 + 30.0, COLORS[k]);
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12">{}</text>"#, x1 + 36.0, ly + 4.0, p.labels[k]);
    }
}

/// Every n-th row plus the last, so plotted values are all CSV rows.
fn decimate(records: &[TelemetryRecord]) -> Vec<&TelemetryRecord> {
    let stride = records.len().div_ceil(MAX_POINTS).max(1);
    let mut picked: Vec<&TelemetryRecord> = records.iter().step_by(stride).collect();
    if let (Some(last), Some(p)) = (records.last(), picked.last()) {
        if p.t != last.t {
            picked.push(last);
        }
    }
    picked
}

/// Renders the rate and Euler-angle histories of `records`.
pub fn render(records: &[TelemetryRecord], title: &str) -> String {
    let picked = decimate(records);
    let t: Vec<f64> = picked.iter().map(|r| r.t).collect();
    let rates = Panel {
        title: "Body rates",
        unit: "rad/s",
        labels: ["wx", "wy", "wz"],
        series: [0, 1, 2].map(|i| picked.iter().map(|r| r.omega[i]).collect()),
    };
    let euler = Panel {
        title: "Euler angles (3-2-1)",
        unit: "deg",
        labels: ["roll", "pitch", "yaw"],
        series: [0, 1, 2].map(|i| picked.iter().map(|r| r.euler_deg[i]).collect()),
    };
    let height = MARGIN_T + 2.0 * PANEL_H + GAP + 50.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !t.is_empty() {
        panel(&mut svg, &rates, &t, MARGIN_T);
        panel(&mut svg, &euler, &t, MARGIN_T + PANEL_H + GAP);
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
