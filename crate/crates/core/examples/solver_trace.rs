//! Runs the dual solver with tracing on and prints the primal/dual objectives
//! and duality gap as it converges.
//!
//! `cargo run --release --example solver_trace -- [trace.csv]`

use wstv::{add_gaussian_noise, denoise, fixtures, ModelKind, ModelParams, NoiseSpec, SolverConfig};

fn main() -> wstv::Result<()> {
    let clean = fixtures::house_like(64);
    let noisy = add_gaussian_noise(&clean, NoiseSpec::new(0.1, 4))?;
    let cfg = SolverConfig::new(0.06).with_max_iter(200).with_rel_tol(1e-7).with_trace(true);
    let (_, trace) = denoise(&noisy, &ModelParams::new(ModelKind::Wstv), &cfg)?;
    println!("iter  primal        dual          gap");
    for r in trace.records.iter().filter(|r| r.iteration == 1 || r.iteration % 20 == 0) {
        println!("{:<4}  {:<12.6}  {:<12.6}  {:.3e}", r.iteration, r.primal, r.dual, r.gap);
    }
    if let Some(path) = std::env::args().nth(1) {
        trace.save_csv(&path)?;
        println!("wrote {path}");
    }
    Ok(())
}
