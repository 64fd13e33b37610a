//! Experiment harness: noise injection, per-model τ grid search, result tables
//! and difference images.
//!
//! Every `(image, σ)` pair gets one noisy realization whose seed is derived
//! from the image id, the bit pattern of σ and the plan's master seed, so all
//! models in a plan denoise identical inputs. Cells run in parallel and are
//! reported in plan order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::image::{add_gaussian_noise, Image, NoiseSpec, NOISE_RNG_NAME};
use crate::metrics::{psnr, ssim, PSNR_INFINITE};
use crate::pnm::{load_image, save_image};
use crate::solver::{fgp_denoise, ModelKind, ModelParams, SolverConfig};

pub const CSV_HEADER: &str = "image,model,sigma,tau,psnr,ssim,iters,wall_ms";

/// `n` values spaced evenly in log scale over `[lo, hi]`, ascending.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo * (hi / lo).powf(k as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

/// 15 log-spaced values in `[0.005, 0.5]`.
pub fn default_tau_grid() -> Vec<f64> {
    log_grid(0.005, 0.5, 15)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImageSource {
    Path(PathBuf),
    Fixture { name: String, size: usize },
}

impl ImageSource {
    /// File stem for paths, fixture name otherwise.
    pub fn id(&self) -> String {
        match self {
            ImageSource::Path(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            ImageSource::Fixture { name, .. } => name.clone(),
        }
    }

    pub fn load(&self) -> Result<Image> {
        match self {
            ImageSource::Path(p) => load_image(p),
            ImageSource::Fixture { name, size } => fixtures::by_name(name, *size)
                .ok_or_else(|| Error::Config(format!("unknown fixture {name:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub images: Vec<ImageSource>,
    pub sigmas: Vec<f64>,
    pub models: Vec<ModelKind>,
    /// Shared by every `(image, σ, model)` cell.
    pub tau_grid: Vec<f64>,
    pub master_seed: u64,
    /// Template for per-model parameters; `kind` is overwritten per cell.
    pub params: ModelParams,
    /// Overrides the per-model iteration cap when set.
    pub max_iter: Option<usize>,
    pub rel_tol: f64,
    /// Where tables and images go; nothing is written when `None`.
    pub output_dir: Option<PathBuf>,
    pub diff_images: bool,
}

impl ExperimentPlan {
    pub fn new(images: Vec<ImageSource>, sigmas: Vec<f64>, models: Vec<ModelKind>) -> Self {
        Self {
            images,
            sigmas,
            models,
            tau_grid: default_tau_grid(),
            master_seed: 0,
            params: ModelParams::new(ModelKind::Wstv),
            max_iter: None,
            rel_tol: 1e-5,
            output_dir: None,
            diff_images: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.images.is_empty() || self.sigmas.is_empty() || self.models.is_empty() {
            return Err(Error::Config("plan needs at least one image, sigma and model".into()));
        }
        if self.tau_grid.is_empty() {
            return Err(Error::Config("tau grid is empty".into()));
        }
        if let Some(t) = self.tau_grid.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::Config(format!("tau grid value {t} must be positive")));
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::Config(format!("noise level {s} must be >= 0")));
        }
        if self.max_iter == Some(0) {
            return Err(Error::Config("max_iter must be >= 1".into()));
        }
        self.params.smooth.validate()
    }

    fn max_iter_for(&self, kind: ModelKind) -> usize {
        self.max_iter.unwrap_or_else(|| kind.default_max_iter())
    }
}

/// Noise seed shared by all models for one `(image, σ)` pair.
pub fn noise_seed(image_id: &str, sigma: f64, master_seed: u64) -> u64 {
    let mut h = Sha256::new();
    h.update((image_id.len() as u64).to_le_bytes());
    h.update(image_id.as_bytes());
    h.update(sigma.to_bits().to_le_bytes());
    h.update(master_seed.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub model: ModelKind,
    pub sigma: f64,
    pub tau: f64,
    pub psnr: f64,
    pub ssim: f64,
    pub iters: usize,
    pub wall_ms: f64,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3}",
            self.image,
            self.model.name(),
            self.sigma,
            self.tau,
            fmt_psnr(self.psnr),
            self.ssim,
            self.iters,
            self.wall_ms
        )
    }
}

fn fmt_psnr(p: f64) -> String {
    if p == PSNR_INFINITE {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

/// Result of one `(image, σ, model)` cell, including the best restoration.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub row: BenchRow,
    pub noise_seed: u64,
    pub restored: Image,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub cells: Vec<CellResult>,
}

impl BenchReport {
    pub fn rows(&self) -> impl Iterator<Item = &BenchRow> {
        self.cells.iter().map(|c| &c.row)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for row in self.rows() {
            s.push_str(&row.csv_line());
            s.push('\n');
        }
        s
    }

    /// One table per image: models as rows, noise levels as columns,
    /// cells holding `PSNR / SSIM`.
    pub fn markdown(&self) -> String {
        let mut out = String::new();
        let mut images: Vec<&str> = Vec::new();
        for r in self.rows() {
            if !images.contains(&r.image.as_str()) {
                images.push(&r.image);
            }
        }
        for (k, image) in images.iter().enumerate() {
            let rows: Vec<&BenchRow> = self.rows().filter(|r| r.image == *image).collect();
            let mut sigmas: Vec<f64> = Vec::new();
            let mut models: Vec<ModelKind> = Vec::new();
            for r in &rows {
                if !sigmas.contains(&r.sigma) {
                    sigmas.push(r.sigma);
                }
                if !models.contains(&r.model) {
                    models.push(r.model);
                }
            }
            if k > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "### {image} (PSNR dB / SSIM)\n");
            out.push_str("| model |");
            for s in &sigmas {
                let _ = write!(out, " σ = {s} |");
            }
            out.push_str("\n|---|");
            out.push_str(&"---|".repeat(sigmas.len()));
            out.push('\n');
            for m in &models {
                let _ = write!(out, "| {m} |");
                for s in &sigmas {
                    match rows.iter().find(|r| r.model == *m && r.sigma == *s) {
                        Some(r) if r.psnr == PSNR_INFINITE => {
                            let _ = write!(out, " inf / {:.4} |", r.ssim);
                        }
                        Some(r) => {
                            let _ = write!(out, " {:.4} / {:.4} |", r.psnr, r.ssim);
                        }
                        None => out.push_str(" - |"),
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Same CSV with the `wall_ms` column removed, for reproducibility checks.
pub fn csv_without_wall_time(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

fn image_ext(img: &Image) -> &'static str {
    if img.channels() == 1 {
        "pgm"
    } else {
        "ppm"
    }
}

/// Runs every cell of the plan and, when an output directory is set, writes
/// `results.csv`, `results.md`, `metadata.txt` and the images.
pub fn run_bench(plan: &ExperimentPlan) -> Result<BenchReport> {
    plan.validate()?;
    // Load everything up front so a bad path fails before any work is done.
    let images: Vec<(String, Image)> = plan
        .images
        .iter()
        .map(|src| Ok((src.id(), src.load()?)))
        .collect::<Result<_>>()?;

    let mut noisy: Vec<(usize, f64, u64, Image)> = Vec::new();
    for (k, (id, clean)) in images.iter().enumerate() {
        for &sigma in &plan.sigmas {
            let seed = noise_seed(id, sigma, plan.master_seed);
            noisy.push((k, sigma, seed, add_gaussian_noise(clean, NoiseSpec::new(sigma, seed))?));
        }
    }

    let jobs: Vec<(usize, ModelKind)> = (0..noisy.len())
        .flat_map(|n| plan.models.iter().map(move |&m| (n, m)))
        .collect();
    let cells: Vec<CellResult> = jobs
        .par_iter()
        .map(|&(n, kind)| {
            let (k, sigma, seed, ref f) = noisy[n];
            let (id, clean) = &images[k];
            run_cell(plan, id, clean, f, sigma, seed, kind)
        })
        .collect::<Result<_>>()?;
    let report = BenchReport { cells };

    if let Some(dir) = &plan.output_dir {
        write_outputs(plan, dir, &report, &images, &noisy)?;
    }
    Ok(report)
}

fn run_cell(
    plan: &ExperimentPlan,
    id: &str,
    clean: &Image,
    f: &Image,
    sigma: f64,
    seed: u64,
    kind: ModelKind,
) -> Result<CellResult> {
    let start = Instant::now();
    let smallest = plan.tau_grid.iter().copied().fold(f64::INFINITY, f64::min);
    // Noise-free input: nothing to remove, the input itself is returned.
    if sigma == 0.0 {
        return Ok(CellResult {
            row: BenchRow {
                image: id.to_string(),
                model: kind,
                sigma,
                tau: smallest,
                psnr: psnr(clean, f)?,
                ssim: ssim(clean, f)?,
                iters: 0,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            },
            noise_seed: seed,
            restored: f.clone(),
        });
    }
    let mut params = plan.params;
    params.kind = kind;
    // Kernel and weights depend only on f.
    let (kernel, weights) = params.build(f)?;
    let mut best: Option<(f64, f64, usize, Image)> = None;
    for &tau in &plan.tau_grid {
        let cfg = SolverConfig::new(tau)
            .with_max_iter(plan.max_iter_for(kind))
            .with_rel_tol(plan.rel_tol);
        let (u, trace) = fgp_denoise(f, &cfg, &kernel, &weights)?;
        let p = psnr(clean, &u)?;
        let better = match &best {
            None => true,
            // Ties go to the smaller τ.
            Some((bt, bp, _, _)) => p > *bp || (p == *bp && tau < *bt),
        };
        if better {
            best = Some((tau, p, trace.iterations, u));
        }
    }
    let (tau, p, iters, restored) = best.expect("grid is nonempty");
    Ok(CellResult {
        row: BenchRow {
            image: id.to_string(),
            model: kind,
            sigma,
            tau,
            psnr: p,
            ssim: ssim(clean, &restored)?,
            iters,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        noise_seed: seed,
        restored,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_outputs(
    plan: &ExperimentPlan,
    dir: &Path,
    report: &BenchReport,
    images: &[(String, Image)],
    noisy: &[(usize, f64, u64, Image)],
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_text(&dir.join("results.csv"), &report.csv())?;
    write_text(&dir.join("results.md"), &report.markdown())?;

    let mut meta = String::new();
    let _ = writeln!(meta, "noise_rng: {NOISE_RNG_NAME}");
    let _ = writeln!(meta, "master_seed: {}", plan.master_seed);
    let _ = writeln!(meta, "noise_seed: sha256(len(id) || id || sigma bits || master seed), first 8 bytes LE");
    let _ = writeln!(meta, "psnr: 10 log10(1 / mse), mse joint over all channels, peak 1");
    let _ = writeln!(meta, "ssim: 11x11 Gaussian window, sigma 1.5, K1 0.01, K2 0.03, valid windows, channel mean");
    let _ = writeln!(meta, "tau_grid: {:?}", plan.tau_grid);
    let _ = writeln!(meta, "tie_break: smaller tau");
    for (k, sigma, seed, _) in noisy {
        let _ = writeln!(meta, "cell: image={} sigma={} noise_seed={}", images[*k].0, sigma, seed);
    }
    write_text(&dir.join("metadata.txt"), &meta)?;

    for (k, sigma, _, f) in noisy {
        let id = &images[*k].0;
        save_image(f, dir.join(format!("{id}_noisy_sigma{sigma}.{}", image_ext(f))))?;
    }
    for cell in &report.cells {
        let r = &cell.row;
        let stem = format!("{}_{}_sigma{}", r.image, r.model.name().to_ascii_lowercase(), r.sigma);
        let ext = image_ext(&cell.restored);
        save_image(&cell.restored, dir.join(format!("{stem}.{ext}")))?;
        if plan.diff_images {
            let clean = &images.iter().find(|(id, _)| *id == r.image).expect("row image exists").1;
            emit_difference_image(clean, &cell.restored, dir.join(format!("{stem}_diff.{ext}")))?;
        }
    }
    Ok(())
}

/// `|restored − original|` scaled so the largest difference maps to 1.
/// Returns the scale factor, which is 0 when the images are identical.
pub fn difference_image(original: &Image, restored: &Image) -> Result<(Image, f64)> {
    original.check_same_shape(restored)?;
    let mut diff = Image::zeros(original.height(), original.width(), original.channels());
    for ((d, a), b) in diff.data_mut().iter_mut().zip(original.data()).zip(restored.data()) {
        *d = (b - a).abs();
    }
    let max = diff.data().iter().copied().fold(0.0, f64::max);
    let scale = if max > 0.0 { 1.0 / max } else { 0.0 };
    for d in diff.data_mut() {
        *d *= scale;
    }
    Ok((diff, scale))
}

/// Sidecar path holding the scale factor of a difference image.
pub fn scale_sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".scale.txt");
    path.with_file_name(name)
}

/// Writes the scaled difference image and its scale-factor sidecar.
pub fn emit_difference_image(original: &Image, restored: &Image, path: impl AsRef<Path>) -> Result<f64> {
    let path = path.as_ref();
    let (diff, scale) = difference_image(original, restored)?;
    save_image(&diff, path)?;
    let max = if scale > 0.0 { 1.0 / scale } else { 0.0 };
    write_text(
        &scale_sidecar_path(path),
        &format!("scale {scale}\nmax_abs_diff {max}\n"),
    )?;
    Ok(scale)
}
