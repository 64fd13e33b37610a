//! Writes |restored − original| images for TV and WSTV so their residual
//! structure can be compared side by side.
//!
//! `cargo run --release --example difference_images`

use wstv::{
    add_gaussian_noise, denoise, emit_difference_image, fixtures, save_image, ModelKind,
    ModelParams, NoiseSpec, SolverConfig,
};

fn main() -> wstv::Result<()> {
    let clean = fixtures::house_like(128);
    let noisy = add_gaussian_noise(&clean, NoiseSpec::new(0.1, 11))?;
    save_image(&clean, "diff-original.pgm")?;
    for (kind, tau) in [(ModelKind::Tv, 0.05), (ModelKind::Wstv, 0.07)] {
        let cfg = SolverConfig::new(tau).with_max_iter(kind.default_max_iter());
        let (u, _) = denoise(&noisy, &ModelParams::new(kind), &cfg)?;
        let name = format!("diff-{}.pgm", kind.name().to_ascii_lowercase());
        let scale = emit_difference_image(&clean, &u, &name)?;
        println!("{name}: largest error {:.4}", 1.0 / scale);
    }
    Ok(())
}
