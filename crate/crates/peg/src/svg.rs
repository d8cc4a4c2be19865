//! SVG drawing of a curve and rectangle hits.

use std::fmt::Write;

use peg_core::curve::PlaneCurve;
use peg_core::rect::RectangleHit;

/// Margin around the curve's bounding box, as a fraction of its size.
const MARGIN: f64 = 0.05;

pub fn render(curve: &PlaneCurve, hits: &[RectangleHit]) -> String {
    let (lo, hi) = curve.bounding_box();
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let (mx, my) = (MARGIN * w, MARGIN * h);
    let (x0, y0, vw, vh) = (lo.x - mx, -hi.y - my, w + 2.0 * mx, h + 2.0 * my);
    let stroke = 0.003 * vw.max(vh);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {vw} {vh}">"#).unwrap();
    let pts: Vec<String> = curve.vertices().iter().map(|p| format!("{},{}", p.x, -p.y)).collect();
    writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="{stroke}"/>"#, pts.join(" ")).unwrap();
    for hit in hits {
        let pts: Vec<String> = hit.vertices.iter().map(|p| format!("{},{}", p.x, -p.y)).collect();
        writeln!(
            s,
            r#"<polygon points="{}" fill="none" stroke="crimson" stroke-width="{stroke}"><title>n={} k={} aspect={:.6}</title></polygon>"#,
            pts.join(" "),
            hit.n,
            hit.k,
            hit.aspect
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
