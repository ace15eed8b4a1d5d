//! Writes a few generated instances to a temporary directory and runs the
//! batch harness over them, printing the CSV.

use std::time::Duration;

use hcma::batch::{run_batch, write_csv};
use hcma::generate::{cycle, petersen, planted_cubic, planted_hamiltonian};
use hcma::rng::stream;
use hcma::solver::SolverConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let dir = tempfile::tempdir()?;
    let mut rng = stream(5, &[]);
    let instances = [
        ("c50", cycle(50)),
        ("petersen", petersen()),
        ("cubic300", planted_cubic(300, &mut rng).0),
        ("dense120", planted_hamiltonian(120, 0.05, &mut rng).0),
    ];
    for (name, g) in &instances {
        std::fs::write(dir.path().join(format!("{name}.hcp")), g.to_hcp(name))?;
    }
    std::fs::write(dir.path().join("broken.hcp"), "DIMENSION : x\n")?;

    let cfg = SolverConfig {
        time_limit: Duration::from_secs(30),
        workers: 1,
        ..SolverConfig::default()
    };
    let rows = run_batch(dir.path(), &cfg)?;
    write_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
