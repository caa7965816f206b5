//! Dependency-free SVG line plots of summary data.

use std::fmt::Write;

use crate::report::SummaryRow;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 56.0;
const LEGEND: f64 = 150.0;
const COLORS: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Mean test metric against layer count, one line per model, with ±1 std
/// whiskers.
pub fn line_plot(title: &str, y_label: &str, rows: &[&SummaryRow]) -> String {
    let mut models: Vec<&str> = rows.iter().map(|r| r.model.as_str()).collect();
    models.sort_unstable();
    models.dedup();
    let (lmin, lmax) = rows
        .iter()
        .fold((usize::MAX, 0), |(a, b), r| (a.min(r.layers), b.max(r.layers)));
    let (ymin, ymax) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(r.test_mean - r.test_std), b.max(r.test_mean + r.test_std))
    });
    let (ymin, ymax) = if ymax > ymin { (ymin, ymax) } else { (ymin - 0.5, ymax + 0.5) };
    let plot_w = W - 2.0 * MARGIN - LEGEND;
    let plot_h = H - 2.0 * MARGIN;
    let x = |l: usize| {
        if lmax > lmin {
            MARGIN + plot_w * (l - lmin) as f64 / (lmax - lmin) as f64
        } else {
            MARGIN + plot_w / 2.0
        }
    };
    let y = |v: f64| MARGIN + plot_h * (1.0 - (v - ymin) / (ymax - ymin));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{MARGIN},{MARGIN} V{} H{}" stroke="black" fill="none"/>"#,
        MARGIN + plot_h,
        MARGIN + plot_w
    );
    for l in lmin..=lmax {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{l}</text>"#, x(l), MARGIN + plot_h + 16.0);
    }
    for i in 0..=4 {
        let v = ymin + (ymax - ymin) * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"#, MARGIN - 6.0, y(v) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">layers</text>"#, MARGIN + plot_w / 2.0, H - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        MARGIN + plot_h / 2.0,
        MARGIN + plot_h / 2.0,
        escape(y_label)
    );
    for (k, m) in models.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut pts: Vec<&&SummaryRow> = rows.iter().filter(|r| r.model == *m).collect();
        pts.sort_by_key(|r| r.layers);
        let path: Vec<String> = pts.iter().map(|r| format!("{:.1},{:.1}", x(r.layers), y(r.test_mean))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="2"/>"#, path.join(" "));
        for r in &pts {
            let _ = writeln!(
                s,
                r#"<line x1="{0:.1}" x2="{0:.1}" y1="{1:.1}" y2="{2:.1}" stroke="{color}"/>"#,
                x(r.layers),
                y(r.test_mean - r.test_std),
                y(r.test_mean + r.test_std)
            );
        }
        let ly = MARGIN + 18.0 * k as f64;
        let lx = W - LEGEND - MARGIN / 2.0;
        let _ = writeln!(s, r#"<rect x="{lx:.1}" y="{:.1}" width="12" height="12" fill="{color}"/>"#, ly - 10.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}">{}</text>"#, lx + 18.0, escape(m));
    }
    s.push_str("</svg>\n");
    s
}
