//! `peg` subcommands.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use peg_core::curve::{chord_map_degree, lipschitz_certificate, midpoint_curve, ChartFailure};
use peg_core::dinv::{d_table, smooth_mobius_obstruction};
use peg_core::lattice::two_bridge_check;
use peg_core::linking::{find_obstructed_k, torus_knot_check, Sign};
use peg_core::rect::{canonical_sort, find_rectangles, rows_of, SearchConfig};
use peg_core::seifert::{build_mk, gamma4_bounds, pair_products, verify_pair};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::io::{load_curve, usage, write_output, UsageError};
use crate::{json as js, svg, worker_pool};

#[derive(Parser, Debug)]
#[command(name = "peg", version, about = "Inscribed rectangles and Möbius-band obstructions")]
pub struct Cli {
    /// Add wall-clock timing to the output bundle.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inscribed-rectangle search.
    #[command(subcommand)]
    Rect(RectCommand),
    /// Möbius-band obstructions.
    #[command(subcommand)]
    Obstruct(ObstructCommand),
    /// Non-orientable 4-genus bounds.
    #[command(subcommand)]
    Genus(GenusCommand),
    /// Correction terms of Σ(2, 2n, 2n+1).
    Dinv(DinvArgs),
    /// Curve diagnostics.
    #[command(subcommand)]
    Curve(CurveCommand),
}

#[derive(Args, Debug, Clone)]
pub struct CurveSource {
    /// `preset:circle:R`, `preset:ellipse:a,b`,
    /// `preset:lipschitz_perturbed_circle:seed,amp`, or a .json/.csv file.
    #[arg(long)]
    pub curve: String,
    /// Vertex count for presets.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0.0)]
    pub min_diameter: f64,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Hits kept per aspect class.
    #[arg(long, default_value_t = 8)]
    pub max_hits: usize,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            grid: self.grid,
            tolerance: self.tol,
            max_hits: self.max_hits,
            min_diameter: self.min_diameter,
            ..SearchConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum RectCommand {
    Find {
        #[command(flatten)]
        source: CurveSource,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    Sweep {
        #[command(flatten)]
        source: CurveSource,
        /// `2..6` (inclusive) or a comma list.
        #[arg(long)]
        n: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ObstructCommand {
    /// `T(2n, 2n±1)` via the linking form.
    Torus {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `T(2p, 2kp±1)` families from the prime construction.
    TorusEven {
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `T(2n, 2n+1)` via correction terms.
    SmoothTorus {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `K(p/(p−2))` via lattice embeddings.
    TwoBridge {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenusCommand {
    /// Bounds for `T(2n−1, 2n)`.
    Torus {
        #[arg(long)]
        n: u64,
        /// Replay vectors `a;b`, e.g. `-1,-1,0,1;4,1,2,-4`.
        #[arg(long, allow_hyphen_values = true)]
        verify: Option<String>,
        /// Twist parameter of the matrix used by `--verify`.
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct DinvArgs {
    #[arg(long)]
    pub n: u64,
    /// Emit every class.
    #[arg(long)]
    pub table: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CurveCommand {
    Check {
        #[command(flatten)]
        source: CurveSource,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 64)]
        angles: usize,
        /// Chord length for the midpoint curve and degree.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    match s {
        "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
        "-" | "-1" | "minus" => Ok(Sign::Minus),
        _ => Err(format!("sign must be + or -, got {s}")),
    }
}

/// `2..6`, `2..=6` or `2,3,4`.
pub fn parse_n_list(s: &str) -> Result<Vec<u32>> {
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| usage(format!("bad n value {x}")));
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        return Ok((num(a)?..=num(b)?).collect());
    }
    s.split(',').map(num).collect()
}

/// `T(a,b)` or `a,b`.
pub fn parse_torus(s: &str) -> Result<(u64, u64)> {
    let inner = s.trim().trim_start_matches(['T', 't']).trim_start_matches('(').trim_end_matches(')');
    let (a, b) = inner.split_once(',').ok_or_else(|| usage(format!("expected T(a,b), got {s}")))?;
    let p = |x: &str| x.trim().parse::<u64>().map_err(|_| usage(format!("bad torus parameter {x}")));
    Ok((p(a)?, p(b)?))
}

fn parse_vector(s: &str) -> Result<Vec<i64>> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| usage(format!("bad coordinate {x}")))).collect()
}

fn emit(cli: &Cli, command: &str, input: Value, result: Value, start: Instant, out: Option<&PathBuf>) -> Result<()> {
    let timing = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let b = js::bundle(command, input, result, timing);
    write_output(out.map(|p| p.as_path()), &serde_json::to_string_pretty(&b)?)
}

fn precondition(knot: &str, reason: &str) -> Value {
    json!({ "knot": knot, "verdict": "PreconditionFailed", "evidence": { "precondition": reason } })
}

pub fn run(cli: &Cli) -> Result<()> {
    let start = Instant::now();
    match &cli.command {
        Command::Rect(RectCommand::Find { source, n, search, out, svg: svg_path }) => {
            let curve = load_curve(&source.curve, source.samples)?;
            let res = find_rectangles(&curve, *n, &search.config())?;
            if let Some(p) = svg_path {
                std::fs::write(p, svg::render(&curve, &res.hits))?;
            }
            let input = json!({ "curve": source.curve, "samples": curve.len(), "n": n, "grid": search.grid,
                "tol": search.tol, "min_diameter": search.min_diameter, "max_hits": search.max_hits });
            let result = json!({ "hits": res.hits.iter().map(js::hit).collect::<Vec<_>>(), "stats": js::stats(&res.stats) });
            emit(cli, "rect find", input, result, start, out.as_ref())
        }
        Command::Rect(RectCommand::Sweep { source, n, search, out, csv }) => {
            let curve = load_curve(&source.curve, source.samples)?;
            let ns = parse_n_list(n)?;
            let cfg = search.config();
            let pool = worker_pool()?;
            let per_n: Vec<_> =
                pool.install(|| ns.par_iter().map(|&n| find_rectangles(&curve, n, &cfg)).collect::<Vec<_>>());
            let mut hits = Vec::new();
            for r in per_n {
                hits.extend(r?.hits);
            }
            canonical_sort(&mut hits);
            let rows: Vec<_> = rows_of(&hits).collect();
            if let Some(p) = csv {
                let mut w = csv::Writer::from_path(p)?;
                w.write_record(["n", "k", "aspect", "diameter", "residual"])?;
                for r in &rows {
                    w.write_record([r.n.to_string(), r.k.to_string(), r.aspect.to_string(), r.diameter.to_string(), r.residual.to_string()])?;
                }
                w.flush()?;
            }
            let input = json!({ "curve": source.curve, "samples": curve.len(), "n": ns, "grid": search.grid, "tol": search.tol });
            let result = json!({ "rows": rows.iter().map(|r| json!({ "n": r.n, "k": r.k, "aspect": r.aspect,
                "diameter": r.diameter, "residual": r.residual })).collect::<Vec<_>>() });
            emit(cli, "rect sweep", input, result, start, out.as_ref())
        }
        Command::Obstruct(ObstructCommand::Torus { knot, out }) => {
            let (a, b) = parse_torus(knot)?;
            let report = torus_knot_check(a, b);
            emit(cli, "obstruct torus", json!({ "knot": knot }), js::report(&report), start, out.as_ref())
        }
        Command::Obstruct(ObstructCommand::TorusEven { p, sign, count, bound, out }) => {
            let input = json!({ "p": p, "sign": sign.symbol().to_string(), "count": count, "bound": bound });
            let search = find_obstructed_k(*p, *sign, *count, *bound)?;
            let pool = worker_pool()?;
            let reports: Vec<_> = pool.install(|| {
                search
                    .found
                    .par_iter()
                    .map(|w| peg_core::linking::mobius_obstruction_topological(*p, w.k, *sign))
                    .collect::<Vec<_>>()
            });
            let reports = reports.into_iter().collect::<std::result::Result<Vec<_>, _>>()?;
            let result = json!({
                "q": search.q,
                "h0": search.h0,
                "a": search.a,
                "found": search.found.iter().zip(&reports).map(|(w, r)| json!({ "k": w.k, "r": w.r, "report": js::report(r) })).collect::<Vec<_>>(),
                "diagnostic": search.diagnostic,
            });
            emit(cli, "obstruct torus-even", input, result, start, out.as_ref())
        }
        Command::Obstruct(ObstructCommand::SmoothTorus { n, out }) => {
            let report = smooth_mobius_obstruction(*n);
            emit(cli, "obstruct smooth-torus", json!({ "n": n }), js::report(&report), start, out.as_ref())
        }
        Command::Obstruct(ObstructCommand::TwoBridge { p, out }) => {
            let report = two_bridge_check(*p)?;
            emit(cli, "obstruct two-bridge", json!({ "p": p }), js::report(&report), start, out.as_ref())
        }
        Command::Genus(GenusCommand::Torus { n, verify, k, out }) => {
            let input = json!({ "n": n, "verify": verify, "k": k });
            let mut result = match gamma4_bounds(*n) {
                Ok(b) => js::gamma4(&b),
                Err(peg_core::Error::Precondition(reason)) => {
                    precondition(&format!("T({},{})", (2 * n).saturating_sub(1), 2 * n), &reason)
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(v) = verify {
                let (a, b) = v.split_once(';').ok_or_else(|| usage("--verify expects a;b"))?;
                let (a, b) = (parse_vector(a)?, parse_vector(b)?);
                let m = build_mk(*n, *k)?;
                let products = pair_products(&m, &a, &b)?;
                let valid = verify_pair(&m, &a, &b)?.is_some();
                result["verify"] = json!({ "k": k, "valid": valid, "certificate": js::certificate(&products) });
            }
            emit(cli, "genus torus", input, result, start, out.as_ref())
        }
        Command::Dinv(DinvArgs { n, table, csv, out }) => {
            let t = d_table(*n)?;
            if let Some(p) = csv {
                let mut w = csv::Writer::from_path(p)?;
                w.write_record(["j", "d", "eta1", "eta2"])?;
                for e in &t.entries {
                    w.write_record([e.class.representative.0.to_string(), js::rational(&e.d), e.eta.0.to_string(), e.eta.1.to_string()])?;
                }
                w.flush()?;
            }
            let result = if *table {
                js::dtable(&t)
            } else {
                let max = t.entries.iter().map(|e| e.d.clone()).max().expect("nonempty");
                json!({ "n": n, "classes": t.entries.len(), "max_d": js::rational(&max) })
            };
            emit(cli, "dinv", json!({ "n": n, "table": table }), result, start, out.as_ref())
        }
        Command::Curve(CurveCommand::Check { source, epsilon, angles, r, power, out }) => {
            let curve = load_curve(&source.curve, source.samples)?;
            let report = lipschitz_certificate(&curve, *epsilon, *angles)?;
            let failures: Vec<Value> = report
                .failures()
                .iter()
                .map(|(i, f)| {
                    let reason = match f {
                        ChartFailure::NonContiguous => "non-contiguous",
                        ChartFailure::WholeCurve => "whole-curve",
                        ChartFailure::NoRotation => "no-rotation",
                    };
                    json!({ "vertex": i, "reason": reason })
                })
                .collect();
            let mut result = json!({
                "vertices": curve.len(),
                "length": curve.length(),
                "diameter": curve.diameter(),
                "simple": curve.is_simple(),
                "lipschitz": { "epsilon": epsilon, "angle_grid": angles, "certified": report.certified(), "failures": failures },
            });
            if let Some(r) = r {
                let mid = midpoint_curve(&curve, *r)?;
                result["chords"] = json!({
                    "r": r,
                    "power": power,
                    "degree": chord_map_degree(&curve, *r, *power)?,
                    "midpoint_curve_simple": mid.is_simple(),
                });
            }
            let input = json!({ "curve": source.curve, "samples": curve.len(), "epsilon": epsilon, "angles": angles, "r": r, "power": power });
            emit(cli, "curve check", input, result, start, out.as_ref())
        }
    }
}

/// Exit status for a failed run: 2 for bad input, 3 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<peg_core::Error>() {
        Some(peg_core::Error::InvalidInput(_)) => 2,
        _ => 3,
    }
}

pub fn main(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
