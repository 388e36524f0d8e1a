//! Minimal SVG line plot of the two SEP curves.

use std::fmt::Write;

use superjam::SepCurve;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

pub fn sep_curves(curve: &SepCurve) -> String {
    let a_min = curve.points.first().map_or(0.0, |p| p.a);
    let a_max = curve.points.last().map_or(0.5, |p| p.a);
    let span = (a_max - a_min).max(f64::EPSILON);
    let x = |a: f64| PAD + (a - a_min) / span * (W - 2.0 * PAD);
    let y = |p: f64| H - PAD - p * (H - 2.0 * PAD);

    let polyline = |f: &dyn Fn(&superjam::SepPoint) -> f64| {
        curve
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", x(p.a), y(f(p))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD},{PAD} V{} H{}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD
    );
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" font-size="11" text-anchor="end">{tick}</text>"#,
            PAD - 6.0,
            y(tick) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">PAC a ({a_min} to {a_max}), SNR {} dB</text>"#,
        W / 2.0,
        H - 12.0,
        curve.snr_db
    );
    let _ = writeln!(
        s,
        r#"<polyline points="{}" stroke="red" fill="none"/>"#,
        polyline(&|p| p.sep_leg)
    );
    let _ = writeln!(
        s,
        r#"<polyline points="{}" stroke="blue" fill="none"/>"#,
        polyline(&|p| p.sep_eve)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" fill="red">legitimate</text>"#,
        W - PAD - 90.0,
        PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" fill="blue">eavesdropper</text>"#,
        W - PAD - 90.0,
        PAD + 16.0
    );
    s.push_str("</svg>\n");
    s
}
