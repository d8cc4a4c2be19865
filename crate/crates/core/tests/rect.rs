use std::f64::consts::PI;

use peg_core::curve::{PlaneCurve, Point2};
use peg_core::rect::{aspect_ratio, find_rectangles, psi, verify_rectangle, RectangleHit, SearchConfig};
use proptest::prelude::*;

const CHECK_TOL: f64 = 1e-7;

fn config() -> SearchConfig {
    SearchConfig { grid: 512, ..SearchConfig::default() }
}

fn wobbly() -> impl Strategy<Value = PlaneCurve> {
    prop::collection::vec((-0.05f64..0.05, -0.05f64..0.05), 1..4)
        .prop_map(|c| PlaneCurve::fourier_perturbed_circle(&c, 1000, "wobbly").unwrap())
}

fn check_hit(curve: &PlaneCurve, h: &RectangleHit) -> Result<(), TestCaseError> {
    let (p, q) = h.pairs();
    let (a, b) = (psi(curve, p, h.n).unwrap(), psi(curve, q, h.n).unwrap());
    let scale = h.diameter.powi(2 * h.n as i32);
    prop_assert!(a.mid.dist(b.mid) < CHECK_TOL, "midpoints differ by {}", a.mid.dist(b.mid));
    prop_assert!(a.pow.dist(b.pow) < CHECK_TOL * scale.max(1.0), "powers differ by {}", a.pow.dist(b.pow));
    let check = verify_rectangle(h, curve);
    prop_assert!(check.max() < CHECK_TOL, "{:?}", check);
    prop_assert!(check.max() <= h.residual.max(CHECK_TOL));
    prop_assert!(1 <= h.k && 2 * h.k <= h.n);
    let [v0, v1, v2, v3] = h.vertices;
    let (u, w) = (v2 - v0, v3 - v1);
    let theta = u.cross(w).abs().atan2(u.dot(w));
    let acute = theta.min(PI - theta);
    prop_assert!((acute - h.k as f64 * PI / h.n as f64).abs() < CHECK_TOL);
    prop_assert!((h.aspect - (acute / 2.0).tan()).abs() < CHECK_TOL);
    prop_assert!((h.aspect - aspect_ratio(h.n, h.k).unwrap()).abs() < 1e-12);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn hits_are_rectangles(curve in wobbly(), n in 2u32..=4) {
        let res = find_rectangles(&curve, n, &config()).unwrap();
        prop_assert!(!res.hits.is_empty());
        for h in &res.hits {
            check_hit(&curve, h)?;
        }
    }

    #[test]
    fn hits_follow_rigid_motions(theta in 0.0f64..(2.0 * PI), dx in -2.0f64..2.0, dy in -2.0f64..2.0) {
        let curve = PlaneCurve::ellipse(2.0, 1.0, 1000).unwrap();
        let shift = Point2::new(dx, dy);
        let moved = curve.transformed(theta, shift).unwrap();
        for n in [2u32, 3] {
            let here = find_rectangles(&curve, n, &config()).unwrap().hits;
            let there = find_rectangles(&moved, n, &config()).unwrap().hits;
            prop_assert_eq!(here.len(), there.len());
            for h in &here {
                let mut image = h.clone();
                image.vertices = h.vertices.map(|p| p.rotate(theta) + shift);
                prop_assert!(there.iter().any(|t| t.matches(&image, 1e-6) && t.k == h.k), "n = {}: {:?}", n, h.vertices);
                let t = there.iter().find(|t| t.matches(&image, 1e-6)).unwrap();
                prop_assert!((t.diameter - h.diameter).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn ellipse_has_its_square() {
    let e = PlaneCurve::ellipse(2.0, 1.0, 2000).unwrap();
    let hits = find_rectangles(&e, 2, &config()).unwrap().hits;
    let sq = hits.iter().find(|h| h.k == 1).expect("square");
    // the square on x²/4 + y² = 1 has corners (±2/√5, ±2/√5)
    let c = 2.0 / 5f64.sqrt();
    for v in sq.vertices {
        assert!((v.x.abs() - c).abs() < 1e-3 && (v.y.abs() - c).abs() < 1e-3, "{v:?}");
    }
}
