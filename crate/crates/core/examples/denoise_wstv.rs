//! Denoises a noisy image with WSTV and writes the result.
//!
//! `cargo run --release --example denoise_wstv -- [noisy.pgm] [out.pgm] [tau]`
//!
//! Without arguments a procedural scene is corrupted at σ = 0.1 and the
//! restoration is written to `denoised.pgm`.

use wstv::{
    add_gaussian_noise, denoise, fixtures, load_image, psnr, save_image, ModelKind, ModelParams,
    NoiseSpec, SolverConfig,
};

fn main() -> wstv::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (noisy, clean) = match args.first() {
        Some(path) => (load_image(path)?, None),
        None => {
            let clean = fixtures::cameraman_like(128);
            (add_gaussian_noise(&clean, NoiseSpec::new(0.1, 1))?, Some(clean))
        }
    };
    let out = args.get(1).map_or("denoised.pgm", String::as_str);
    let tau: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.07);

    let cfg = SolverConfig::new(tau);
    let (u, trace) = denoise(&noisy, &ModelParams::new(ModelKind::Wstv), &cfg)?;
    println!(
        "tau {tau}: {} iterations, converged {}, last relative change {:.2e}",
        trace.iterations, trace.converged, trace.final_rel_change
    );
    if let Some(clean) = clean {
        println!("psnr noisy {:.3} dB -> restored {:.3} dB", psnr(&clean, &noisy)?, psnr(&clean, &u)?);
    }
    save_image(&u, out)?;
    println!("wrote {out}");
    Ok(())
}
