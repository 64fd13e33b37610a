//! Grid-searches τ for each model and noise level, then prints the result
//! tables and writes them with the restored images to `bench-out/`.
//!
//! `cargo run --release --example bench_table -- [size]`

use wstv::bench::{run_bench, ExperimentPlan, ImageSource};
use wstv::ModelKind;

fn main() -> wstv::Result<()> {
    let size: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(96);
    let mut plan = ExperimentPlan::new(
        vec![
            ImageSource::Fixture { name: "cameraman".into(), size },
            ImageSource::Fixture { name: "house".into(), size },
        ],
        vec![0.05, 0.1],
        ModelKind::ALL.to_vec(),
    );
    plan.tau_grid = wstv::bench::log_grid(0.01, 0.2, 7);
    plan.master_seed = 2024;
    plan.output_dir = Some("bench-out".into());
    let report = run_bench(&plan)?;
    println!("{}", report.markdown());
    print!("{}", report.csv());
    Ok(())
}
