//! Rose layout of an übercrossing diagram on a fixed 1000 x 1000 canvas.

use std::f64::consts::PI;
use std::fmt::Write;

use petalknot::UbercrossingDiagram;

const SIZE: f64 = 1000.0;
const CENTRE: f64 = SIZE / 2.0;
const RADIUS: f64 = 260.0;

/// Canvas point at angle `theta` (clockwise from the top) and radius `r`.
fn polar(theta: f64, r: f64) -> (f64, f64) {
    (CENTRE + r * theta.sin(), CENTRE - r * theta.cos())
}

fn angle(n: usize, j: usize) -> f64 {
    PI * j as f64 / n as f64
}

/// Draws strands as diameters, adjacent arcs as petals and nesting arcs
/// as wide loops outside the circle. Each strand is labelled with its
/// height near endpoint `k`.
pub fn render(d: &UbercrossingDiagram) -> String {
    let n = d.n();
    let m = 2 * n;
    let nesting = d.nesting_arcs();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" viewBox="0 0 1000 1000">"#
    );
    let _ = writeln!(out, r#"<rect width="1000" height="1000" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<circle cx="500" cy="500" r="{RADIUS:.0}" fill="none" stroke="#bbbbbb" stroke-dasharray="4 6"/>"##
    );
    for (a, b) in d.arcs() {
        let (ta, tb) = (angle(n, a), angle(n, b));
        let (pa, pb) = (polar(ta, RADIUS), polar(tb, RADIUS));
        let path = if nesting.contains(&(a, b)) || nesting.contains(&(b, a)) {
            // run around the side the span covers, well outside the petals
            let len = d.span(a).len() + 1;
            let forward = (a + len) % m == b;
            let step = if forward { PI / n as f64 } else { -PI / n as f64 };
            let mut s = format!("M {:.2} {:.2}", pa.0, pa.1);
            let steps = 8 * len;
            for i in 0..=steps {
                let t = ta + step * len as f64 * i as f64 / steps as f64;
                let q = polar(t, RADIUS + 190.0);
                let _ = write!(s, " L {:.2} {:.2}", q.0, q.1);
            }
            let _ = write!(s, " L {:.2} {:.2}", pb.0, pb.1);
            s
        } else {
            let (lo, hi) = if (a + 1) % m == b { (ta, tb) } else { (tb, ta) };
            let hi = if hi < lo { hi + 2.0 * PI } else { hi };
            let c1 = polar(lo - 0.12, RADIUS + 150.0);
            let c2 = polar(hi + 0.12, RADIUS + 150.0);
            let (p0, p1) = if (a + 1) % m == b { (pa, pb) } else { (pb, pa) };
            format!(
                "M {:.2} {:.2} C {:.2} {:.2} {:.2} {:.2} {:.2} {:.2}",
                p0.0, p0.1, c1.0, c1.1, c2.0, c2.1, p1.0, p1.1
            )
        };
        let _ = writeln!(out, r#"<path d="{path}" fill="none" stroke="black" stroke-width="2"/>"#);
    }
    for k in 0..n {
        let (p, q) = (polar(angle(n, k), RADIUS), polar(angle(n, k + n), RADIUS));
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
            p.0, p.1, q.0, q.1
        );
    }
    for k in 0..n {
        let t = angle(n, k) + 0.5 * PI / n as f64 / 3.0;
        let l = polar(t, RADIUS - 30.0);
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="18" text-anchor="middle" fill="#c0392b">{}</text>"##,
            l.0,
            l.1 + 6.0,
            d.heights()[k]
        );
    }
    out.push_str("</svg>\n");
    out
}
