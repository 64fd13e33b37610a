//! Corrupts a scene with seeded Gaussian noise and scores it.
//!
//! `cargo run --example add_noise_and_metrics`

use wstv::{add_gaussian_noise, fixtures, MetricReport, NoiseSpec};

fn main() -> wstv::Result<()> {
    let clean = fixtures::cameraman_like(128);
    println!("sigma   psnr(dB)  ssim");
    for sigma in [0.01, 0.05, 0.1, 0.15] {
        let noisy = add_gaussian_noise(&clean, NoiseSpec::new(sigma, 42))?;
        let m = MetricReport::compute(&clean, &noisy)?;
        println!("{sigma:<6}  {:>8.3}  {:.4}", m.psnr, m.ssim);
    }
    // Same seed, same realization.
    let a = add_gaussian_noise(&clean, NoiseSpec::new(0.1, 42))?;
    let b = add_gaussian_noise(&clean, NoiseSpec::new(0.1, 42))?;
    assert_eq!(a, b);
    Ok(())
}
