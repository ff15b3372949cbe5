//! Static SVG plot of a dip curve with an optional closed-form overlay.

use std::fmt::Write as _;

use homdip_core::DipCurve;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const OVERLAY_SAMPLES: usize = 600;

/// A reference curve drawn dashed over the computed one.
pub struct Overlay {
    pub label: String,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Overlay {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Box::new(f),
        }
    }

    pub fn evaluate(&self, tau: f64) -> f64 {
        (self.f)(tau)
    }
}

impl std::fmt::Debug for Overlay {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Overlay")
            .field("label", &self.label)
            .finish()
    }
}

/// Tick positions at a 1-2-5 step covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render_svg(curve: &DipCurve, overlay: Option<&Overlay>, title: &str) -> String {
    const PS: f64 = 1e12;
    let x_lo = curve.taus[0] * PS;
    let x_hi = curve.taus[curve.taus.len() - 1] * PS;
    let p_top = curve.probabilities.iter().copied().fold(0.5, f64::max);
    let y_hi = (p_top * 1.1 * 10.0).ceil() / 10.0;
    let y_lo = curve.probabilities.iter().copied().fold(0.0, f64::min);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">Coincidence probability: {}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    for t in ticks(x_lo, x_hi, 8) {
        let x = sx(t);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
            TOP,
            TOP + plot_h
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 18.0,
            label(t)
        );
    }
    for t in ticks(y_lo, y_hi, 6) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            y + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">delay τ (ps)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">p(τ)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let mut points = String::new();
    for (t, p) in curve.taus.iter().zip(&curve.probabilities) {
        let _ = write!(points, "{:.2},{:.2} ", sx(t * PS), sy(*p));
    }
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#1f5fbf" stroke-width="2" points="{}"/>"##,
        points.trim_end()
    );

    let mut legend = vec![("#1f5fbf", "computed", "")];
    if let Some(o) = overlay {
        let mut pts = String::new();
        let (t0, t1) = (curve.taus[0], curve.taus[curve.taus.len() - 1]);
        for k in 0..OVERLAY_SAMPLES {
            let t = t0 + (t1 - t0) * k as f64 / (OVERLAY_SAMPLES - 1) as f64;
            let _ = write!(pts, "{:.2},{:.2} ", sx(t * PS), sy(o.evaluate(t)));
        }
        let _ = writeln!(
            s,
            r##"<polyline fill="none" stroke="#d04020" stroke-width="1.5" stroke-dasharray="6 4" points="{}"/>"##,
            pts.trim_end()
        );
        legend.push(("#d04020", o.label.as_str(), "6 4"));
    }
    for (k, (color, text, dash)) in legend.iter().enumerate() {
        let y = TOP + 16.0 + 18.0 * k as f64;
        let x = LEFT + plot_w - 220.0;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2" stroke-dasharray="{dash}"/>"#,
            x + 28.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            x + 36.0,
            y + 4.0,
            escape(text)
        );
    }
    s.push_str("</svg>\n");
    s
}
