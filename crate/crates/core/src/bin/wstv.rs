use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wstv::bench::{emit_difference_image, run_bench, ExperimentPlan, ImageSource};
use wstv::{
    add_gaussian_noise, denoise, load_image, save_image, Error, MetricReport, ModelKind,
    ModelParams, NoiseSpec, SmoothSpec, SolverConfig,
};

#[derive(Parser)]
#[command(name = "wstv", version, about = "Weighted structure tensor TV denoising")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Denoise one image.
    Denoise(DenoiseArgs),
    /// Add seeded Gaussian noise to an image.
    AddNoise(AddNoiseArgs),
    /// Print PSNR and SSIM of an image against a reference.
    Metrics(MetricsArgs),
    /// Grid-search τ per (image, σ, model) and tabulate the best results.
    Bench(BenchArgs),
    /// Write |in − ref| rescaled to [0, 1].
    DiffImage(DiffArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Tv,
    Stv,
    Wstv,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Tv => ModelKind::Tv,
            Model::Stv => ModelKind::Stv,
            Model::Wstv => ModelKind::Wstv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Csv,
    Md,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 10.0)]
    kappa: f64,
    /// Standard deviation of the Gaussian applied before the weight map.
    #[arg(long, default_value_t = 1.0)]
    sigma_smooth: f64,
    /// Defaults to ceil(3 · sigma-smooth).
    #[arg(long)]
    smooth_radius: Option<usize>,
    #[arg(long, default_value_t = 1)]
    kernel_radius: usize,
    #[arg(long, default_value_t = 0.5)]
    kernel_sigma: f64,
}

impl ModelArgs {
    fn params(&self, kind: ModelKind) -> ModelParams {
        let mut smooth = SmoothSpec::new(self.kappa, self.sigma_smooth);
        if let Some(r) = self.smooth_radius {
            smooth.radius = r;
        }
        ModelParams {
            kind,
            smooth,
            kernel_radius: self.kernel_radius,
            kernel_sigma: self.kernel_sigma,
        }
    }
}

#[derive(Args)]
struct DenoiseArgs {
    #[arg(long, value_enum, default_value = "wstv")]
    model: Model,
    #[arg(long)]
    tau: f64,
    #[command(flatten)]
    model_args: ModelArgs,
    /// Defaults to 500 for TV and 100 otherwise.
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    /// Per-iteration CSV: iteration,primal,dual,gap,rel_change,t
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct AddNoiseArgs {
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Image files; repeatable.
    #[arg(long = "in")]
    inputs: Vec<PathBuf>,
    /// Built-in procedural scenes (cameraman, house, peppers-color); repeatable.
    #[arg(long)]
    fixture: Vec<String>,
    #[arg(long, default_value_t = 256)]
    fixture_size: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1,0.15")]
    sigma: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "tv,stv,wstv")]
    model: Vec<Model>,
    /// Comma-separated τ values; defaults to 15 log-spaced values in [0.005, 0.5].
    #[arg(long, value_delimiter = ',')]
    tau: Vec<f64>,
    #[command(flatten)]
    model_args: ModelArgs,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for tables and images.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "md")]
    table: Table,
    /// Also write difference images next to the restorations.
    #[arg(long)]
    diff_images: bool,
}

#[derive(Args)]
struct DiffArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn run(cli: Cli) -> wstv::Result<()> {
    match cli.command {
        Command::Denoise(a) => {
            let f = load_image(&a.input)?;
            let kind = ModelKind::from(a.model);
            let cfg = SolverConfig::new(a.tau)
                .with_max_iter(a.max_iter.unwrap_or_else(|| kind.default_max_iter()))
                .with_rel_tol(a.tol)
                .with_trace(a.trace.is_some());
            let (u, trace) = denoise(&f, &a.model_args.params(kind), &cfg)?;
            save_image(&u, &a.out)?;
            if let Some(path) = &a.trace {
                trace.save_csv(path)?;
            }
            eprintln!(
                "{kind}: {} iterations, converged: {}",
                trace.iterations, trace.converged
            );
            if let Some(r) = &a.reference {
                print_metrics(&MetricReport::compute(&load_image(r)?, &u)?);
            }
        }
        Command::AddNoise(a) => {
            let img = load_image(&a.input)?;
            save_image(&add_gaussian_noise(&img, NoiseSpec::new(a.sigma, a.seed))?, &a.out)?;
        }
        Command::Metrics(a) => {
            let m = MetricReport::compute(&load_image(&a.reference)?, &load_image(&a.input)?)?;
            print_metrics(&m);
        }
        Command::Bench(a) => {
            let mut images: Vec<ImageSource> = a.inputs.into_iter().map(ImageSource::Path).collect();
            images.extend(a.fixture.into_iter().map(|name| ImageSource::Fixture {
                name,
                size: a.fixture_size,
            }));
            let models: Vec<ModelKind> = a.model.into_iter().map(ModelKind::from).collect();
            let mut plan = ExperimentPlan::new(images, a.sigma, models);
            if !a.tau.is_empty() {
                plan.tau_grid = a.tau;
            }
            plan.params = a.model_args.params(ModelKind::Wstv);
            plan.max_iter = a.max_iter;
            plan.rel_tol = a.tol;
            plan.master_seed = a.seed;
            plan.output_dir = a.out;
            plan.diff_images = a.diff_images;
            let report = run_bench(&plan)?;
            match a.table {
                Table::Csv => print!("{}", report.csv()),
                Table::Md => print!("{}", report.markdown()),
            }
        }
        Command::DiffImage(a) => {
            let scale = emit_difference_image(&load_image(&a.reference)?, &load_image(&a.input)?, &a.out)?;
            println!("scale {scale}");
        }
    }
    Ok(())
}

fn print_metrics(m: &MetricReport) {
    if m.psnr.is_infinite() {
        println!("psnr inf");
    } else {
        println!("psnr {:.4}", m.psnr);
    }
    println!("ssim {:.6}", m.ssim);
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::UnsupportedOrder(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
