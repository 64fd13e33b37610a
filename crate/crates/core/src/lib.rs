//! Image denoising with the weighted structure tensor total variation (WSTV)
//! regularizer.
//!
//! The regularizer sums, over pixels, the nuclear norm of a patch of
//! anisotropically weighted gradients gathered under a small Gaussian kernel.
//! Minimization is done on the dual problem with fast gradient projection
//! (FISTA-style momentum, projection onto per-pixel spectral unit balls).
//! TV and STV are the special cases `K = δ, W = I` and `W = I`.
//!
//! ```no_run
//! use wstv::{denoise, ModelKind, ModelParams, SolverConfig};
//!
//! let noisy = wstv::load_image("noisy.pgm")?;
//! let (restored, trace) = denoise(&noisy, &ModelParams::new(ModelKind::Wstv), &SolverConfig::new(0.05))?;
//! println!("stopped after {} iterations", trace.iterations);
//! wstv::save_image(&restored, "restored.pgm")?;
//! # Ok::<(), wstv::Error>(())
//! ```

pub mod bench;
mod boundary;
pub mod diff;
pub mod error;
pub mod fixtures;
pub mod image;
pub mod jacobian;
pub mod metrics;
pub mod pnm;
pub mod solver;
pub mod spectral;
pub mod weights;

pub use bench::{emit_difference_image, run_bench, BenchReport, BenchRow, ExperimentPlan, ImageSource};
pub use boundary::reflect;
pub use diff::{divergence, forward_gradient, GradientField};
pub use error::{Error, Result};
pub use image::{add_gaussian_noise, Image, NoiseSpec, NOISE_RNG_NAME};
pub use jacobian::{
    jacobian_adjoint, jacobian_apply, make_gaussian_kernel, operator_norm_sq_estimate, ConvKernel,
    JacobianOperator, PatchJacobianField,
};
pub use metrics::{psnr, ssim, MetricReport, PSNR_INFINITE};
pub use pnm::{load_image, save_image};
pub use solver::{
    denoise, dual_gradient, dual_objective, fgp_denoise, momentum_step, primal_objective,
    project_box, DualProblem, ModelKind, ModelParams, SolverConfig, SolverTrace, StepRule,
    TraceRecord,
};
pub use spectral::{project_binf_sinf, singular_pair, wstv_value, SingularPair};
pub use weights::{compute_weights, gaussian_smooth, SmoothSpec, WeightField};
