//! Curve sources: presets and vertex files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use peg_core::curve::{PlaneCurve, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Highest harmonic used by the perturbed-circle preset.
const PERTURBATION_HARMONICS: usize = 6;

#[derive(Debug, Serialize, Deserialize)]
pub struct VertexFile {
    pub vertices: Vec<[f64; 2]>,
}

/// Bad user input, reported with the usage exit status.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("not a number: {x}")))).collect()
}

/// `preset:circle:R`, `preset:ellipse:a,b`,
/// `preset:lipschitz_perturbed_circle:seed,amp`, or a `.json` / `.csv` file.
pub fn load_curve(source: &str, samples: usize) -> Result<PlaneCurve> {
    if let Some(rest) = source.strip_prefix("preset:") {
        let (name, args) = rest.split_once(':').unwrap_or((rest, ""));
        return match name {
            "circle" => {
                let r = if args.is_empty() { 1.0 } else { parse_floats(args)?[0] };
                Ok(PlaneCurve::circle(r, samples)?)
            }
            "ellipse" => match parse_floats(args)?.as_slice() {
                [a, b] => Ok(PlaneCurve::ellipse(*a, *b, samples)?),
                _ => Err(usage("ellipse preset takes a,b")),
            },
            "lipschitz_perturbed_circle" => {
                let (seed, amp) = args.split_once(',').ok_or_else(|| usage("perturbed circle takes seed,amp"))?;
                let seed: u64 = seed.trim().parse().map_err(|_| usage("seed must be an integer"))?;
                let amp: f64 = amp.trim().parse().map_err(|_| usage("amplitude must be a number"))?;
                perturbed_circle(seed, amp, samples)
            }
            other => Err(usage(format!("unknown preset {other}"))),
        };
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {source}: {e}")))?;
    let vertices = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => parse_csv(&text)?,
        _ => match serde_json::from_str::<VertexFile>(&text) {
            Ok(f) => f.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect(),
            Err(_) => parse_csv(&text).map_err(|_| usage(format!("{source} is neither vertex JSON nor x,y CSV")))?,
        },
    };
    Ok(PlaneCurve::new(vertices, source)?)
}

/// Radius `1 + Σ_{j=2}^{6} amp·(uⱼ cos jθ + vⱼ sin jθ)/j²` with `uⱼ, vⱼ`
/// uniform on `[−1, 1]` from a ChaCha8 stream seeded by `seed`.
pub fn perturbed_circle(seed: u64, amp: f64, samples: usize) -> Result<PlaneCurve> {
    if !(0.0..0.5).contains(&amp) {
        bail!(usage("amplitude must lie in [0, 0.5)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (2..=PERTURBATION_HARMONICS)
        .map(|j| {
            let scale = amp / (j * j) as f64;
            (scale * rng.random_range(-1.0..=1.0), scale * rng.random_range(-1.0..=1.0))
        })
        .collect();
    Ok(PlaneCurve::fourier_perturbed_circle(
        &coeffs,
        samples,
        format!("preset:lipschitz_perturbed_circle:{seed},{amp}"),
    )?)
}

/// `x,y` rows; a non-numeric first row is taken as a header.
pub fn parse_csv(text: &str) -> Result<Vec<Point2>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            bail!(usage(format!("row {} needs two columns", i + 1)));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => out.push(Point2::new(x, y)),
            _ if i == 0 => continue,
            _ => bail!(usage(format!("row {} is not numeric", i + 1))),
        }
    }
    Ok(out)
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
