use peg::io::{load_curve, parse_csv, perturbed_circle, VertexFile};
use peg::json::{big, bundle, rational};
use peg_core::exact::frac;
use serde_json::json;

#[test]
fn csv_headers_and_errors() {
    let pts = parse_csv("x,y\n0,0\n1, 0\n 1,1\n").unwrap();
    assert_eq!(pts.len(), 3);
    assert_eq!((pts[1].x, pts[1].y), (1.0, 0.0));
    assert!(parse_csv("0,0\nfoo,1\n").is_err());
    assert!(parse_csv("0\n").is_err());
}

#[test]
fn vertex_json_loads() {
    let dir = std::env::temp_dir().join(format!("peg-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("poly.json");
    let vertices: Vec<[f64; 2]> = (0..12)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / 12.0;
            [t.cos(), t.sin()]
        })
        .collect();
    std::fs::write(&path, serde_json::to_string(&VertexFile { vertices }).unwrap()).unwrap();
    let c = load_curve(path.to_str().unwrap(), 0).unwrap();
    assert_eq!(c.len(), 12);
}

#[test]
fn presets() {
    assert_eq!(load_curve("preset:circle:2", 100).unwrap().len(), 100);
    assert!((load_curve("preset:circle:2", 1000).unwrap().diameter() - 4.0).abs() < 1e-9);
    assert!((load_curve("preset:ellipse:3,1", 1000).unwrap().diameter() - 6.0).abs() < 1e-9);
    let a = perturbed_circle(11, 0.3, 500).unwrap();
    let b = load_curve("preset:lipschitz_perturbed_circle:11,0.3", 500).unwrap();
    assert_eq!(a.vertices(), b.vertices());
    assert_ne!(a.vertices(), perturbed_circle(12, 0.3, 500).unwrap().vertices());
    assert!(a.is_simple());
    assert!(perturbed_circle(1, 0.5, 100).is_err());
}

#[test]
fn number_encoding() {
    assert_eq!(rational(&frac(-173, 46)), "-173/46");
    assert_eq!(rational(&frac(4, 2)), "2/1");
    assert_eq!(big(&12i64), json!(12));
    let huge = num_bigint::BigInt::from(10).pow(30);
    assert_eq!(big(&huge), json!("1000000000000000000000000000000"));
    let b = bundle("x", json!({}), json!(null), None);
    assert_eq!(b["command"], "x");
    assert!(b.get("timing_ms").is_none());
}
