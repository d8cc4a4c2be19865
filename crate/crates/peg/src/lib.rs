//! Std companion of `peg-core`: curve ingestion, JSON/CSV/SVG emission and
//! the `peg` command line.

pub mod cli;
pub mod io;
pub mod json;
pub mod svg;

/// Thread pool sized by `PEG_WORKERS` (rayon's default when unset).
pub fn worker_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PEG_WORKERS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("PEG_WORKERS must be a positive integer"))?;
        builder = builder.num_threads(n.max(1));
    }
    Ok(builder.build()?)
}
