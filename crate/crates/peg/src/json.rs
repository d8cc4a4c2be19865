//! Evidence bundles. Rationals are written as `"num/den"` strings and
//! integers beyond `i64` as decimal strings.

use peg_core::dinv::DTable;
use peg_core::exact::{Fraction, IntMatrix};
use peg_core::rect::{RectangleHit, SearchStats};
use peg_core::report::{Fact, ObstructionReport};
use peg_core::seifert::{alexander_2x2, Gamma4Bounds, PairCertificate};
use serde_json::{json, Map, Value};

/// An integer as a JSON number when it fits in `i64`, else as a string.
pub fn big(b: &impl ToString) -> Value {
    let s = b.to_string();
    match s.parse::<i64>() {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(s),
    }
}

pub fn rational(q: &Fraction) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(big).collect())).collect())
}

pub fn fact(f: &Fact) -> Value {
    match f {
        Fact::Flag(b) => Value::Bool(*b),
        Fact::Integer(i) => big(i),
        Fact::Integers(v) => Value::Array(v.iter().map(big).collect()),
        Fact::Rational(q) => Value::String(rational(q)),
        Fact::Rationals(v) => Value::Array(v.iter().map(|q| Value::String(rational(q))).collect()),
        Fact::Vector(v) => json!(v),
        Fact::Matrix(m) => matrix(m),
        Fact::Text(s) => Value::String(s.clone()),
    }
}

pub fn report(r: &ObstructionReport) -> Value {
    let mut evidence = Map::new();
    for e in &r.evidence {
        evidence.insert(e.label.clone(), fact(&e.fact));
    }
    json!({ "knot": r.knot, "verdict": r.verdict.name(), "evidence": evidence })
}

pub fn hit(h: &RectangleHit) -> Value {
    json!({
        "vertices": h.vertices.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "params": h.params,
        "n": h.n,
        "k": h.k,
        "aspect": h.aspect,
        "diameter": h.diameter,
        "residual": h.residual,
    })
}

pub fn stats(s: &SearchStats) -> Value {
    json!({ "seeds": s.seeds, "candidates": s.candidates, "refined": s.refined, "dropped": s.dropped })
}

pub fn certificate(c: &PairCertificate) -> Value {
    let induced = c.induced();
    let poly = alexander_2x2(&induced).expect("2x2");
    json!({
        "a": c.a,
        "b": c.b,
        "aMa": big(&c.products[0]),
        "aMb": big(&c.products[1]),
        "bMa": big(&c.products[2]),
        "bMb": big(&c.products[3]),
        "induced": matrix(&induced),
        "alexander_coefficients": poly.iter().map(big).collect::<Vec<_>>(),
        "pair_condition": c.satisfies_pair_condition(),
    })
}

pub fn gamma4(b: &Gamma4Bounds) -> Value {
    json!({
        "n": b.n,
        "knot": format!("T({},{})", 2 * b.n - 1, 2 * b.n),
        "smooth": b.smooth,
        "top_upper": b.top_upper,
        "top_lower": b.top_lower,
        "certificate": certificate(&b.certificate),
        "lower_bound_evidence": b.lower_bound_evidence.as_ref().map(report),
    })
}

pub fn dtable(t: &DTable) -> Value {
    json!({
        "n": t.n,
        "classes": t.entries.len(),
        "entries": t.entries.iter().map(|e| json!({
            "class": [e.class.representative.0, e.class.representative.1],
            "d": rational(&e.d),
            "eta": [e.eta.0, e.eta.1],
        })).collect::<Vec<_>>(),
    })
}

/// Top-level bundle. `timing_ms` is only present when requested, so
/// repeated runs stay byte-identical by default.
pub fn bundle(command: &str, input: Value, result: Value, timing_ms: Option<f64>) -> Value {
    let mut out = json!({
        "tool": "peg",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input": input,
        "result": result,
    });
    if let Some(t) = timing_ms {
        out["timing_ms"] = json!(t);
    }
    out
}
