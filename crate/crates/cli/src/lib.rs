//! Configuration, presets, runners and file output for `latinvis`.

pub mod config;
pub mod expr;
pub mod output;
pub mod presets;
pub mod runner;
pub mod selftest;
pub mod sweep;

use std::path::{Path, PathBuf};
use std::thread;

use anyhow::Result;

use config::ExperimentConfig;

pub struct RunSummary {
    pub manifest: PathBuf,
    /// Edge monitor tripped under the abort policy.
    pub aborted: bool,
}

/// Runs one config and writes its outputs into `dir`.
pub fn run_to_dir(cfg: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    let outcome = runner::execute(cfg)?;
    let manifest = output::write_outcome(dir, cfg, &outcome)?;
    Ok(RunSummary { manifest, aborted: outcome.aborts(cfg) })
}

/// Runs `configs` concurrently into `root/sweep-000`, `root/sweep-001`, ...
/// Results come back in input order.
pub fn run_many(configs: &[ExperimentConfig], root: &Path) -> Vec<Result<RunSummary>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get());
    let mut results = Vec::with_capacity(configs.len());
    for (batch, chunk) in configs.chunks(workers).enumerate() {
        let done: Vec<Result<RunSummary>> = thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .enumerate()
                .map(|(i, cfg)| {
                    let dir = root.join(format!("sweep-{:03}", batch * workers + i));
                    s.spawn(move || run_to_dir(cfg, &dir))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
        });
        results.extend(done);
    }
    results
}
