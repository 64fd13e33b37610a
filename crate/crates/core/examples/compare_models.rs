//! TV, STV and WSTV on the same noisy input, each at its best τ on a small grid.
//!
//! `cargo run --release --example compare_models`

use wstv::{
    add_gaussian_noise, denoise, fixtures, MetricReport, ModelKind, ModelParams, NoiseSpec,
    SolverConfig,
};

fn main() -> wstv::Result<()> {
    let clean = fixtures::cameraman_like(128);
    let noisy = add_gaussian_noise(&clean, NoiseSpec::new(0.1, 3))?;
    let grid = wstv::bench::log_grid(0.02, 0.2, 7);
    println!("model  best tau  psnr(dB)  ssim    iters");
    for kind in ModelKind::ALL {
        let params = ModelParams::new(kind);
        let mut best: Option<(f64, MetricReport, usize)> = None;
        for &tau in &grid {
            let cfg = SolverConfig::new(tau).with_max_iter(kind.default_max_iter());
            let (u, trace) = denoise(&noisy, &params, &cfg)?;
            let m = MetricReport::compute(&clean, &u)?;
            if best.as_ref().is_none_or(|b| m.psnr > b.1.psnr) {
                best = Some((tau, m, trace.iterations));
            }
        }
        let (tau, m, iters) = best.expect("grid is nonempty");
        println!("{:<5}  {tau:<8.4}  {:>8.3}  {:.4}  {iters}", kind.name(), m.psnr, m.ssim);
    }
    Ok(())
}
