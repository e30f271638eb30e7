//! Static line charts, one panel per series pair.

use std::fmt::Write;

pub struct Panel<'a> {
    pub title: &'a str,
    pub t: &'a [f64],
    pub re: &'a [f64],
    pub im: &'a [f64],
}

const W: f64 = 420.0;
const H: f64 = 300.0;
const PAD: f64 = 40.0;

fn polyline(out: &mut String, xs: &[f64], ys: &[f64], map: impl Fn(f64, f64) -> (f64, f64), dashed: bool) {
    let mut pts = String::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let (px, py) = map(x, y);
        let _ = write!(pts, "{px:.2},{py:.2} ");
    }
    let dash = if dashed { r#" stroke-dasharray="6,4""# } else { "" };
    let _ =
        writeln!(out, r#"<polyline fill="none" stroke="black" stroke-width="1.2"{dash} points="{}"/>"#, pts.trim_end());
}

pub fn render(panels: &[Panel]) -> String {
    let total_w = W * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{H}" viewBox="0 0 {total_w} {H}">"#
    );
    for (i, p) in panels.iter().enumerate() {
        let x0 = i as f64 * W;
        let (t_lo, t_hi) = (p.t.first().copied().unwrap_or(0.0), p.t.last().copied().unwrap_or(1.0));
        let (mut y_lo, mut y_hi) = (0.0f64, 0.0f64);
        for v in p.re.iter().chain(p.im) {
            y_lo = y_lo.min(*v);
            y_hi = y_hi.max(*v);
        }
        let span = (y_hi - y_lo).max(1e-12);
        let map = |t: f64, y: f64| {
            let px = x0 + PAD + (t - t_lo) / (t_hi - t_lo) * (W - 2.0 * PAD);
            let py = H - PAD - (y - y_lo) / span * (H - 2.0 * PAD);
            (px, py)
        };
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{PAD}" width="{:.2}" height="{:.2}" fill="none" stroke="gray"/>"#,
            x0 + PAD,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let (ax0, ay) = map(t_lo, 0.0);
        let (ax1, _) = map(t_hi, 0.0);
        let _ = writeln!(
            out,
            r#"<line x1="{ax0:.2}" y1="{ay:.2}" x2="{ax1:.2}" y2="{ay:.2}" stroke="gray" stroke-width="0.5"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
            x0 + W / 2.0,
            PAD - 12.0,
            p.title
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">[{t_lo:.2}, {t_hi:.2}] x [{y_lo:.3}, {y_hi:.3}]</text>"#,
            x0 + W / 2.0,
            H - 12.0
        );
        polyline(&mut out, p.t, p.re, map, false);
        polyline(&mut out, p.t, p.im, map, true);
    }
    out.push_str("</svg>\n");
    out
}
