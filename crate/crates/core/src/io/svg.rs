use std::fmt::Write as _;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 60.0;

/// Self-contained 600x600 SVG scatter of QQ pairs with the unit diagonal.
pub fn qq_svg(pairs: &[(f64, f64)], title: &str) -> String {
    let finite = pairs.iter().filter(|(a, b)| a.is_finite() && b.is_finite());
    let extent = finite
        .flat_map(|(a, b)| [a.abs(), b.abs()])
        .fold(1.0f64, f64::max)
        .ceil();
    let span = SIZE - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x + extent) / (2.0 * extent) * span;
    let sy = |y: f64| SIZE - MARGIN - (y + extent) / (2.0 * extent) * span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 600 600">"#
    );
    let _ = writeln!(out, r#"<rect width="600" height="600" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{m}" y="{m}" width="{s}" height="{s}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        s = span
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="red" stroke-width="1"/>"#,
        sx(-extent),
        sy(-extent),
        sx(extent),
        sy(extent)
    );
    for (q, s) in pairs.iter().filter(|(a, b)| a.is_finite() && b.is_finite()) {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="black"/>"#,
            sx(*q),
            sy(*s)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="300" y="{:.0}" text-anchor="middle" font-size="14">Theoretical quantiles</text>"#,
        SIZE - 20.0
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="300" text-anchor="middle" font-size="14" transform="rotate(-90 20 300)">Sample quantiles</text>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="300" y="35" text-anchor="middle" font-size="16">{}</text>"#,
        escape(title)
    );
    for (x, anchor) in [(-extent, "start"), (extent, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.0}" text-anchor="{anchor}" font-size="12">{x}</text>"#,
            sx(x),
            SIZE - MARGIN + 16.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
