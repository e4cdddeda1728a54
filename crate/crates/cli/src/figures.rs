//! Dependency-free SVG renderings of ROC curves and confusion matrices.

use std::fmt::Write;

use iotsentry::metrics::{ConfusionMatrix, RocCurve};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt_auc(auc: f64) -> String {
    if auc.is_nan() {
        "n/a".into()
    } else {
        format!("{auc:.4}")
    }
}

/// One-vs-rest curves per class plus the macro and micro averages.
pub fn roc_svg(title: &str, per_class: &[RocCurve], macro_avg: &RocCurve, micro_avg: &RocCurve) -> String {
    let (size, left, top, plot) = (560.0, 60.0, 40.0, 440.0);
    let px = |x: f64| left + x * plot;
    let py = |y: f64| top + (1.0 - y) * plot;
    let path = |c: &RocCurve| {
        c.points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        left + plot / 2.0,
        escape(title)
    );
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let _ = writeln!(
            s,
            r##"<line x1="{x}" y1="{t}" x2="{x}" y2="{b}" stroke="#eee"/><line x1="{l}" y1="{y}" x2="{r}" y2="{y}" stroke="#eee"/>"##,
            x = px(v),
            y = py(v),
            t = top,
            b = top + plot,
            l = left,
            r = left + plot
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{v:.1}</text><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.1}</text>"#,
            px(v),
            top + plot + 16.0,
            left - 6.0,
            py(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r##"<rect x="{left}" y="{top}" width="{plot}" height="{plot}" fill="none" stroke="#333"/>"##
    );
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999" stroke-dasharray="4 4"/>"##,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    );
    for (i, c) in per_class.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-opacity="0.55" stroke-width="1" points="{}"><title>{} (AUC {})</title></polyline>"#,
            PALETTE[i % PALETTE.len()],
            path(c),
            escape(&c.tag),
            fmt_auc(c.auc)
        );
    }
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#000" stroke-width="2.5" points="{}"/>"##,
        path(macro_avg)
    );
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#c00" stroke-width="2" stroke-dasharray="6 3" points="{}"/>"##,
        path(micro_avg)
    );
    let (lx, ly) = (left + plot - 190.0, top + plot - 46.0);
    let _ = writeln!(
        s,
        r##"<rect x="{lx}" y="{ly}" width="180" height="38" fill="white" stroke="#999"/>
<line x1="{a}" y1="{b}" x2="{c}" y2="{b}" stroke="#000" stroke-width="2.5"/><text x="{d}" y="{e}">macro average (AUC {m})</text>
<line x1="{a}" y1="{f}" x2="{c}" y2="{f}" stroke="#c00" stroke-width="2" stroke-dasharray="6 3"/><text x="{d}" y="{g}">micro average (AUC {u})</text>"##,
        a = lx + 8.0,
        b = ly + 12.0,
        c = lx + 30.0,
        d = lx + 36.0,
        e = ly + 16.0,
        f = ly + 28.0,
        g = ly + 32.0,
        m = fmt_auc(macro_avg.auc),
        u = fmt_auc(micro_avg.auc)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">False positive rate</text>"#,
        left + plot / 2.0,
        top + plot + 36.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">True positive rate</text>"#,
        top + plot / 2.0
    );
    s.push_str("</svg>\n");
    s
}

/// Row-normalized heat map; each cell's title carries the raw count.
pub fn confusion_svg(title: &str, cm: &ConfusionMatrix) -> String {
    let k = cm.class_names.len();
    let norm = cm.normalized();
    let cell = (520.0 / k.max(1) as f64).clamp(12.0, 60.0);
    let margin = 170.0;
    let grid = cell * k as f64;
    let (w, h) = (margin + grid + 20.0, margin + grid + 20.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="{:.0}">"#,
        (cell * 0.6).clamp(8.0, 12.0)
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        margin + grid / 2.0,
        escape(title)
    );
    for (i, name) in cm.class_names.iter().enumerate() {
        let c = margin + (i as f64 + 0.5) * cell;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{c:.1}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            margin - 4.0,
            escape(name)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate({c:.1} {:.1}) rotate(-60)" text-anchor="start">{}</text>"#,
            margin - 4.0,
            escape(name)
        );
    }
    for (i, row) in norm.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            // white → dark blue
            let shade = |lo: f64, hi: f64| (lo + (hi - lo) * v).round() as u8;
            let (r, g, b) = (shade(255.0, 8.0), shade(255.0, 48.0), shade(255.0, 107.0));
            let (x, y) = (margin + j as f64 * cell, margin + i as f64 * cell);
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{cell:.1}" height="{cell:.1}" fill="rgb({r},{g},{b})"><title>{} → {}: {} ({v:.4})</title></rect>"#,
                escape(&cm.class_names[i]),
                escape(&cm.class_names[j]),
                cm.counts[i][j]
            );
            if k <= 12 {
                let ink = if v > 0.5 { "white" } else { "black" };
                let _ = writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" dominant-baseline="middle" fill="{ink}">{v:.2}</text>"#,
                    x + cell / 2.0,
                    y + cell / 2.0
                );
            }
        }
    }
    let _ = writeln!(
        s,
        r##"<rect x="{margin}" y="{margin}" width="{grid:.1}" height="{grid:.1}" fill="none" stroke="#333"/>"##
    );
    s.push_str("</svg>\n");
    s
}
