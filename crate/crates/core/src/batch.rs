//! Batch runs over a directory of `.hcp` files with CSV output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};

use crate::error::SolveError;
use crate::graph::parse_hcp;
use crate::solver::{solve, SolverConfig};

pub const CSV_HEADER: [&str; 8] = ["name", "n", "m", "solved", "phase", "time_ms", "generations", "seed"];

/// One CSV row. `phase` is `check`, `dp`, `ma`, or `parse_error` for files
/// that could not be read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchRow {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub solved: bool,
    pub phase: String,
    pub time_ms: u128,
    pub generations: usize,
    pub seed: u64,
}

/// `.hcp` files directly inside `dir`, sorted by file name.
pub fn instance_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("hcp")))
        .collect();
    files.sort();
    Ok(files)
}

/// Solves every instance of `dir` in name order. Unreadable files become
/// unsolved `parse_error` rows and the batch moves on.
pub fn run_batch(dir: &Path, cfg: &SolverConfig) -> Result<Vec<BatchRow>, BatchError> {
    let mut rows = Vec::new();
    for path in instance_files(dir)? {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let parsed = fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_hcp(&text).map_err(|e| e.to_string()));
        let g = match parsed {
            Ok(g) => g,
            Err(e) => {
                warn!("{}: {e}", path.display());
                rows.push(BatchRow {
                    name,
                    n: 0,
                    m: 0,
                    solved: false,
                    phase: "parse_error".to_string(),
                    time_ms: 0,
                    generations: 0,
                    seed: cfg.seed,
                });
                continue;
            }
        };
        let res = solve(&g, &name, cfg)?;
        info!(
            "{name}: solved={} phase={} time={}ms",
            res.solved,
            res.phase,
            res.wall_time.as_millis()
        );
        rows.push(BatchRow {
            name,
            n: res.n,
            m: res.m,
            solved: res.solved,
            phase: res.phase.to_string(),
            time_ms: res.wall_time.as_millis(),
            generations: res.generations,
            seed: res.seed,
        });
    }
    Ok(rows)
}

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Summary over the solved rows' times.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub instances: usize,
    pub solved: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub max_ms: u128,
    pub min_ms: u128,
}

/// `None` when there are no rows. Time statistics cover solved rows, or
/// all rows when nothing was solved.
pub fn summarize(rows: &[BatchRow]) -> Option<Summary> {
    if rows.is_empty() {
        return None;
    }
    let solved: Vec<u128> = rows.iter().filter(|r| r.solved).map(|r| r.time_ms).collect();
    let mut times = if solved.is_empty() {
        rows.iter().map(|r| r.time_ms).collect()
    } else {
        solved
    };
    times.sort_unstable();
    let k = times.len();
    let median_ms = if k % 2 == 1 {
        times[k / 2] as f64
    } else {
        (times[k / 2 - 1] + times[k / 2]) as f64 / 2.0
    };
    Some(Summary {
        instances: rows.len(),
        solved: rows.iter().filter(|r| r.solved).count(),
        mean_ms: times.iter().sum::<u128>() as f64 / k as f64,
        median_ms,
        max_ms: times[k - 1],
        min_ms: times[0],
    })
}

/// Header, one record per row, then `#` summary lines when there are rows.
pub fn write_csv<W: Write>(rows: &[BatchRow], out: W) -> Result<(), BatchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.name.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.solved.to_string(),
            r.phase.clone(),
            r.time_ms.to_string(),
            r.generations.to_string(),
            r.seed.to_string(),
        ])?;
    }
    let mut out = w.into_inner().map_err(|e| e.into_error())?;
    if let Some(s) = summarize(rows) {
        writeln!(out, "# solved {}/{}", s.solved, s.instances)?;
        writeln!(
            out,
            "# time_ms mean {:.1} median {:.1} max {} min {}",
            s.mean_ms, s.median_ms, s.max_ms, s.min_ms
        )?;
    }
    out.flush()?;
    Ok(())
}
