//! Dependency-free static SVG line charts: stacked panels, one polyline per
//! series, fixed layout. Output is a pure function of the data.

pub const PALETTE: [&str; 6] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#b07aa1",
];

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 960.0;
const PANEL_HEIGHT: f64 = 300.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 44.0;

fn fmt_tick(v: f64) -> String {
    let s = format!("{:.4}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn data_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Render stacked panels sharing the x axis. Every series becomes exactly
/// one `<polyline>`.
pub fn render(panels: &[Panel], x_label: &str) -> String {
    let total_height = PANEL_HEIGHT * panels.len() as f64;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        WIDTH, total_height, WIDTH, total_height
    ));
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let (x_lo, x_hi) = data_range(
        panels
            .iter()
            .flat_map(|p| p.series.iter())
            .flat_map(|s| s.points.iter().map(|(x, _)| *x)),
    );

    for (idx, panel) in panels.iter().enumerate() {
        let top = MARGIN_TOP + idx as f64 * PANEL_HEIGHT;
        let bottom = (idx + 1) as f64 * PANEL_HEIGHT - MARGIN_BOTTOM;
        let left = MARGIN_LEFT;
        let right = WIDTH - MARGIN_RIGHT;
        let (y_lo, y_hi) = data_range(
            panel
                .series
                .iter()
                .flat_map(|s| s.points.iter().map(|(_, y)| *y)),
        );
        let sx = |x: f64| left + (x - x_lo) / (x_hi - x_lo) * (right - left);
        let sy = |y: f64| bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top);

        // frame
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            left, top, right - left, bottom - top
        ));
        // ticks
        for i in 0..=5 {
            let fx = x_lo + (x_hi - x_lo) * i as f64 / 5.0;
            let px = sx(fx);
            out.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                px, bottom, px, bottom + 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                px, bottom + 18.0, fmt_tick(fx)
            ));
            let fy = y_lo + (y_hi - y_lo) * i as f64 / 5.0;
            let py = sy(fy);
            out.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
                left - 5.0, py, left, py
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
                left - 8.0, py + 4.0, fmt_tick(fy)
            ));
        }
        // axis labels
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 {:.2} {:.2})\">{}</text>\n",
            16.0,
            (top + bottom) / 2.0,
            16.0,
            (top + bottom) / 2.0,
            panel.y_label
        ));
        if idx == panels.len() - 1 {
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                (left + right) / 2.0,
                bottom + 34.0,
                x_label
            ));
        }
        // series
        for series in &panel.series {
            let mut points = String::new();
            for (x, y) in &series.points {
                points.push_str(&format!("{:.2},{:.2} ", sx(*x), sy(*y)));
            }
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                series.color,
                points.trim_end()
            ));
        }
        // legend
        for (i, series) in panel.series.iter().enumerate() {
            let ly = top + 14.0 + i as f64 * 18.0;
            out.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n",
                right + 10.0,
                ly - 10.0,
                series.color
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                right + 27.0,
                ly,
                series.label
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
