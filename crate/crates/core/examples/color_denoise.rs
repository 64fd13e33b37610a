//! Vectorial denoising of a color image: the channels share one nuclear-norm
//! block per pixel, so edges are aligned across channels.
//!
//! `cargo run --release --example color_denoise`

use wstv::{
    add_gaussian_noise, denoise, fixtures, save_image, MetricReport, ModelKind, ModelParams,
    NoiseSpec, SolverConfig,
};

fn main() -> wstv::Result<()> {
    let clean = fixtures::color_peppers_like(128);
    let noisy = add_gaussian_noise(&clean, NoiseSpec::new(0.1, 9))?;
    println!("noisy  {:?}", MetricReport::compute(&clean, &noisy)?);
    for kind in [ModelKind::Stv, ModelKind::Wstv] {
        let (u, trace) = denoise(&noisy, &ModelParams::new(kind), &SolverConfig::new(0.08))?;
        println!("{:<6} {:?} after {} iterations", kind.name(), MetricReport::compute(&clean, &u)?, trace.iterations);
        save_image(&u, format!("color-{}.ppm", kind.name().to_ascii_lowercase()))?;
    }
    save_image(&noisy, "color-noisy.ppm")?;
    Ok(())
}
