use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hcma::batch::{run_batch, write_csv};
use hcma::decomposition::min_fill_decomposition;
use hcma::graph::{parse_hcp, verify_hc, Graph};
use hcma::reduction::{sr_reduce_with, tc_reduce_with, Precision};
use hcma::solver::{solve, SolverConfig};
use hcma::tour::{parse_tour, write_tour};

const SOLVED: u8 = 0;
const UNSOLVED: u8 = 1;
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "hcma", version, about = "Hamiltonian cycle solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search one instance for a Hamiltonian cycle.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Write the cycle as a TSPLIB tour file.
        #[arg(long)]
        tour_out: Option<PathBuf>,
    },
    /// Solve every .hcp file in a directory and emit CSV.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check a tour file against a graph.
    Verify { graph: PathBuf, tour: PathBuf },
    /// Print a TSPLIB distance matrix for the instance.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Store cells as 16-bit integers.
        #[arg(long)]
        compact: bool,
    },
    /// Print a min-fill tree decomposition in PACE format.
    Decompose { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Sr,
    Tc,
}

#[derive(Args)]
struct SolveOpts {
    /// Seconds; defaults to 600, or 1800 with --set-cf.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, env = "HCMA_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    mutation_rate: f64,
    #[arg(long)]
    no_dp: bool,
    #[arg(long)]
    no_sparsify: bool,
    #[arg(long, default_value_t = 10)]
    dp_width_cap: usize,
    #[arg(long, default_value_t = 5)]
    neighbor_k: usize,
    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// 30 minute time limit preset.
    #[arg(long)]
    set_cf: bool,
}

impl SolveOpts {
    fn config(&self) -> Result<SolverConfig, String> {
        let base = if self.set_cf {
            SolverConfig::set_cf()
        } else {
            SolverConfig::default()
        };
        let time_limit = match self.time_limit {
            Some(s) if !(s.is_finite() && s > 0.0) => return Err("time limit must be positive".into()),
            Some(s) => Duration::from_secs_f64(s),
            None => base.time_limit,
        };
        let cfg = SolverConfig {
            time_limit,
            seed: self.seed,
            mutation_rate: self.mutation_rate,
            dp: !self.no_dp,
            sparsify: !self.no_sparsify,
            dp_width_cap: self.dp_width_cap,
            neighbor_k: self.neighbor_k,
            workers: self.workers,
            ..base
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

fn read_graph(path: &Path) -> Result<Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_hcp(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into())
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Solve { file, opts, tour_out } => {
            let cfg = opts.config()?;
            let g = read_graph(&file)?;
            let name = instance_name(&file);
            let res = solve(&g, &name, &cfg).map_err(|e| e.to_string())?;
            let mut line = format!(
                "{name}: n={} m={} solved={} phase={} time_ms={} generations={} seed={}",
                res.n,
                res.m,
                res.solved,
                res.phase,
                res.wall_time.as_millis(),
                res.generations,
                res.seed
            );
            if let Some(w) = res.width {
                line += &format!(" width={w}");
            }
            if let Some(c) = res.best_cost {
                line += &format!(" best_cost={c}");
            }
            if let Some(r) = res.reason {
                line += &format!(" reason=\"{r}\"");
            }
            println!("{line}");
            match res.cycle {
                Some(cycle) => {
                    let text = write_tour(&name, cycle.order());
                    match tour_out {
                        Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?,
                        None => print!("{text}"),
                    }
                    Ok(SOLVED)
                }
                None => Ok(UNSOLVED),
            }
        }
        Command::Batch { dir, opts, csv } => {
            let cfg = opts.config()?;
            if !dir.is_dir() {
                return Err(format!("{}: not a directory", dir.display()));
            }
            let rows = run_batch(&dir, &cfg).map_err(|e| e.to_string())?;
            match csv {
                Some(p) => {
                    let f = fs::File::create(&p).map_err(|e| format!("{}: {e}", p.display()))?;
                    write_csv(&rows, io::BufWriter::new(f))
                }
                None => write_csv(&rows, io::stdout().lock()),
            }
            .map_err(|e| e.to_string())?;
            Ok(if rows.iter().all(|r| r.solved) { SOLVED } else { UNSOLVED })
        }
        Command::Verify { graph, tour } => {
            let g = read_graph(&graph)?;
            let text = fs::read_to_string(&tour).map_err(|e| format!("{}: {e}", tour.display()))?;
            let cycle = parse_tour(&text).map_err(|e| format!("{}: {e}", tour.display()))?;
            if cycle.len() != g.n() {
                return Err(format!("tour has {} cities, graph has {}", cycle.len(), g.n()));
            }
            if verify_hc(&g, &cycle) {
                println!("valid Hamiltonian cycle");
                Ok(SOLVED)
            } else {
                println!("not a Hamiltonian cycle");
                Ok(UNSOLVED)
            }
        }
        Command::Reduce { file, method, compact } => {
            let g = read_graph(&file)?;
            let precision = if compact { Precision::Compact } else { Precision::Wide };
            if compact && g.n() + 1 > u16::MAX as usize {
                return Err("graph too large for --compact".into());
            }
            let m = match method {
                Method::Sr => sr_reduce_with(&g, precision),
                Method::Tc => tc_reduce_with(&g, precision).map_err(|e| e.to_string())?,
            };
            let mut out = io::stdout().lock();
            out.write_all(m.to_tsplib(&instance_name(&file)).as_bytes())
                .map_err(|e| e.to_string())?;
            Ok(SOLVED)
        }
        Command::Decompose { file } => {
            let g = read_graph(&file)?;
            let td = min_fill_decomposition(&g, usize::MAX).map_err(|e| e.to_string())?;
            print!("{}", td.to_pace(g.n()));
            Ok(SOLVED)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
