//! Fast gradient projection on the dual of the box-constrained denoising problem
//!
//! ```text
//! min_{u in C}  ½‖u − f‖² + τ ‖Ĵ_K u‖_{1,1}
//! ```
//!
//! The dual variable `Φ` lives in the ℓ∞-S∞ unit ball; the primal solution is
//! recovered as `P_C(f − τ Ĵ_K* Φ)`. The dual objective
//!
//! ```text
//! d(Φ) = ½‖s − P_C(s)‖² + ½‖f‖² − ½‖s‖²,   s = f − τ Ĵ_K* Φ
//! ```
//!
//! is concave with gradient `τ Ĵ_K P_C(s)`, Lipschitz with constant `8√2 τ²`.
//! The iteration keeps the usual two FISTA sequences: the projected iterate
//! `Φ_i` and the extrapolated point `Y_i`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::jacobian::{make_gaussian_kernel, ConvKernel, JacobianOperator, PatchJacobianField};
use crate::spectral::{nuclear_norm_sum, project_binf_sinf_in_place};
use crate::weights::{compute_weights, SmoothSpec, WeightField};

/// The bound `‖Ĵ_K‖² ≤ 8√2` used for the step size.
pub const OPERATOR_NORM_SQ_BOUND: f64 = 8.0 * std::f64::consts::SQRT_2;

/// Iterations between non-finite checks.
const FINITE_CHECK_PERIOD: usize = 10;

/// Lipschitz constant of the dual gradient, `8√2 τ²`.
pub fn lipschitz_bound(tau: f64) -> f64 {
    OPERATOR_NORM_SQ_BOUND * tau * tau
}

/// Coefficient on `Ĵ_K z` in the dual ascent step, `1 / (8√2 τ)`.
pub fn bound_step(tau: f64) -> f64 {
    1.0 / (OPERATOR_NORM_SQ_BOUND * tau)
}

/// `t_{i+1} = (1 + sqrt(1 + 4 t_i²)) / 2`.
pub fn momentum_step(t: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// Delta kernel, unit weights.
    Tv,
    /// Gaussian kernel, unit weights.
    Stv,
    /// Gaussian kernel, anisotropic weights from the observed image.
    Wstv,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Tv, ModelKind::Stv, ModelKind::Wstv];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Tv => "tv",
            ModelKind::Stv => "stv",
            ModelKind::Wstv => "wstv",
        }
    }

    /// Iteration cap used by the experiments: 500 for TV, 100 otherwise.
    pub fn default_max_iter(self) -> usize {
        match self {
            ModelKind::Tv => 500,
            ModelKind::Stv | ModelKind::Wstv => 100,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Tv => "TV",
            ModelKind::Stv => "STV",
            ModelKind::Wstv => "WSTV",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tv" => Ok(ModelKind::Tv),
            "stv" => Ok(ModelKind::Stv),
            "wstv" => Ok(ModelKind::Wstv),
            other => Err(Error::Config(format!("unknown model {other:?}"))),
        }
    }
}

/// Everything needed to turn an observed image into a kernel and weight field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub smooth: SmoothSpec,
    pub kernel_radius: usize,
    pub kernel_sigma: f64,
}

impl ModelParams {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            smooth: SmoothSpec::default(),
            kernel_radius: 1,
            kernel_sigma: 0.5,
        }
    }

    /// TV and STV are parameterizations of the same operator: TV forces the
    /// delta kernel, and both force `W = I`.
    pub fn build(&self, f: &Image) -> Result<(ConvKernel, WeightField)> {
        let (h, w) = (f.height(), f.width());
        match self.kind {
            ModelKind::Tv => Ok((ConvKernel::delta(), WeightField::ones(h, w))),
            ModelKind::Stv => Ok((
                make_gaussian_kernel(self.kernel_radius, self.kernel_sigma)?,
                WeightField::ones(h, w),
            )),
            ModelKind::Wstv => Ok((
                make_gaussian_kernel(self.kernel_radius, self.kernel_sigma)?,
                compute_weights(f, &self.smooth)?,
            )),
        }
    }
}

/// How the dual step size is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum StepRule {
    /// `1 / L(d)` with `L(d) = 8√2 τ²`.
    #[default]
    FixedBound,
    /// `L(d) = 1.01 τ² ‖Ĵ_K‖²` with the norm from `iters` power iterations.
    Estimated { iters: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tau: f64,
    pub max_iter: usize,
    /// Stop once `‖u_i − u_{i−1}‖ / ‖u_{i−1}‖` falls to this value.
    pub rel_tol: f64,
    pub box_low: f64,
    pub box_high: f64,
    pub record_trace: bool,
    pub step_rule: StepRule,
}

impl SolverConfig {
    pub fn new(tau: f64) -> Self {
        Self {
            tau,
            max_iter: 100,
            rel_tol: 1e-5,
            box_low: 0.0,
            box_high: 1.0,
            record_trace: false,
            step_rule: StepRule::FixedBound,
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_trace(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }

    pub fn with_box(mut self, low: f64, high: f64) -> Self {
        self.box_low = low;
        self.box_high = high;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Config(format!("tau must be > 0, got {}", self.tau)));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be >= 1".into()));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::Config(format!("rel_tol must be >= 0, got {}", self.rel_tol)));
        }
        if !(self.box_low < self.box_high) {
            return Err(Error::Config(format!(
                "box bounds must satisfy low < high, got [{}, {}]",
                self.box_low, self.box_high
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub rel_change: f64,
    /// Momentum parameter `t_i` used for the extrapolation after this iteration.
    pub t: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverTrace {
    /// Primal objective at `u_0 = P_C(f)`; only set when tracing.
    pub initial_primal: Option<f64>,
    pub records: Vec<TraceRecord>,
    pub iterations: usize,
    pub converged: bool,
    pub final_rel_change: f64,
}

impl SolverTrace {
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "iteration,primal,dual,gap,rel_change,t")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12}",
                r.iteration, r.primal, r.dual, r.gap, r.rel_change, r.t
            )?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }
}

/// Elementwise clamp to `[low, high]`.
pub fn project_box(u: &Image, low: f64, high: f64) -> Image {
    u.map(|v| v.clamp(low, high))
}

/// One denoising problem: the operator, the data and the configuration.
pub struct DualProblem<'a> {
    op: JacobianOperator,
    f: &'a Image,
    cfg: SolverConfig,
}

impl<'a> DualProblem<'a> {
    pub fn new(f: &'a Image, cfg: &SolverConfig, kernel: &ConvKernel, weights: &WeightField) -> Result<Self> {
        cfg.validate()?;
        let op = JacobianOperator::for_image(f, kernel, weights)?;
        Ok(Self { op, f, cfg: *cfg })
    }

    pub fn operator(&self) -> &JacobianOperator {
        &self.op
    }

    fn check_field(&self, phi: &PatchJacobianField) -> Result<()> {
        if phi.height() != self.f.height()
            || phi.width() != self.f.width()
            || phi.channels() != self.f.channels()
            || phi.shifts() != self.op.kernel().len()
        {
            return Err(Error::Shape("dual field does not match the problem".into()));
        }
        Ok(())
    }

    /// `s = f − τ Ĵ_K* Φ`, written into `s`.
    fn shifted_data(&self, phi: &PatchJacobianField, s: &mut Image) {
        self.op.adjoint_into(phi, s);
        let tau = self.cfg.tau;
        s.data_mut()
            .par_iter_mut()
            .zip(self.f.data().par_iter())
            .for_each(|(v, fv)| *v = fv - tau * *v);
    }

    fn clamp_in_place(&self, u: &mut Image) {
        let (lo, hi) = (self.cfg.box_low, self.cfg.box_high);
        u.data_mut().par_iter_mut().for_each(|v| *v = v.clamp(lo, hi));
    }

    /// `P_C(f − τ Ĵ_K* Φ)`.
    pub fn reconstruct(&self, phi: &PatchJacobianField) -> Result<Image> {
        self.check_field(phi)?;
        let mut u = self.f.clone();
        self.shifted_data(phi, &mut u);
        self.clamp_in_place(&mut u);
        Ok(u)
    }

    fn dual_from_shifted(&self, s: &Image) -> f64 {
        let (lo, hi) = (self.cfg.box_low, self.cfg.box_high);
        // ½‖f‖² − ½‖s‖² expanded as ½⟨f − s, f + s⟩ to avoid cancellation.
        let terms: Vec<f64> = s
            .data()
            .par_iter()
            .zip(self.f.data().par_iter())
            .map(|(&sv, &fv)| {
                let r = sv - sv.clamp(lo, hi);
                0.5 * (r * r + (fv - sv) * (fv + sv))
            })
            .collect();
        terms.iter().sum()
    }

    pub fn dual_objective(&self, phi: &PatchJacobianField) -> Result<f64> {
        self.check_field(phi)?;
        let mut s = self.f.clone();
        self.shifted_data(phi, &mut s);
        Ok(self.dual_from_shifted(&s))
    }

    /// `∇d(Φ) = τ Ĵ_K P_C(f − τ Ĵ_K* Φ)`.
    pub fn dual_gradient(&self, phi: &PatchJacobianField) -> Result<PatchJacobianField> {
        let z = self.reconstruct(phi)?;
        let mut g = PatchJacobianField::zeros_like(&self.op);
        self.op.apply_into(&z, &mut g);
        let tau = self.cfg.tau;
        g.data_mut().par_iter_mut().for_each(|v| *v *= tau);
        Ok(g)
    }

    /// `½‖u − f‖² + τ ‖Ĵ_K u‖_{1,1}`.
    pub fn primal_objective(&self, u: &Image) -> Result<f64> {
        self.f.check_same_shape(u)?;
        let j = self.op.apply(u)?;
        Ok(self.primal_with_field(u, &j))
    }

    fn primal_with_field(&self, u: &Image, ju: &PatchJacobianField) -> f64 {
        let fid: f64 = u
            .data()
            .iter()
            .zip(self.f.data())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        0.5 * fid + self.cfg.tau * nuclear_norm_sum(ju)
    }

    /// Ascent step coefficient applied to `Ĵ_K z`, i.e. `τ / L(d)`.
    pub fn step(&self) -> f64 {
        let tau = self.cfg.tau;
        match self.cfg.step_rule {
            StepRule::FixedBound => {
                let step = tau / lipschitz_bound(tau);
                debug_assert!((step - bound_step(tau)).abs() <= 4.0 * f64::EPSILON * step);
                step
            }
            StepRule::Estimated { iters } => {
                let norm_sq = self.op.norm_sq_estimate(iters, 0x5eed) * 1.01;
                if norm_sq > 0.0 {
                    tau / (norm_sq * tau * tau)
                } else {
                    bound_step(tau)
                }
            }
        }
    }

    /// Runs the fast gradient projection iteration from `Φ_0 = 0`.
    pub fn solve(&self) -> Result<(Image, SolverTrace)> {
        self.solve_with(|_, _| {}).map(|(u, _, tr)| (u, tr))
    }

    /// As [`solve`](Self::solve), also returning the final dual iterate and
    /// calling `observe(i, Φ_i)` after every iteration.
    pub fn solve_with(
        &self,
        mut observe: impl FnMut(usize, &PatchJacobianField),
    ) -> Result<(Image, PatchJacobianField, SolverTrace)> {
        if !self.f.is_finite() {
            return Err(Error::Divergence { iteration: 0 });
        }
        let cfg = &self.cfg;
        let step = self.step();

        let mut phi_prev = PatchJacobianField::zeros_like(&self.op);
        let mut y = phi_prev.clone();
        let mut work = phi_prev.clone();
        let mut z = self.f.clone();
        let mut u = self.f.clone();
        self.clamp_in_place(&mut u);
        let mut u_prev = u.clone();
        let mut jfield = cfg.record_trace.then(|| PatchJacobianField::zeros_like(&self.op));

        let mut trace = SolverTrace::default();
        if let Some(j) = jfield.as_mut() {
            self.op.apply_into(&u, j);
            trace.initial_primal = Some(self.primal_with_field(&u, j));
        }

        let mut t = 1.0;
        for i in 1..=cfg.max_iter {
            // z = P_C(f − τ Ĵ* Y_i)
            self.shifted_data(&y, &mut z);
            self.clamp_in_place(&mut z);

            // Φ_i = P_B(Y_i + step · Ĵ z), built in `work`.
            self.op.apply_into(&z, &mut work);
            work.data_mut()
                .par_iter_mut()
                .zip(y.data().par_iter())
                .for_each(|(g, yv)| *g = yv + step * *g);
            project_binf_sinf_in_place(&mut work);

            let t_next = momentum_step(t);
            let beta = (t - 1.0) / t_next;
            y.data_mut()
                .par_iter_mut()
                .zip(work.data().par_iter().zip(phi_prev.data().par_iter()))
                .for_each(|(yv, (p, q))| *yv = p + beta * (p - q));
            std::mem::swap(&mut phi_prev, &mut work);
            let phi = &phi_prev;

            // u_i = P_C(f − τ Ĵ* Φ_i); s is kept in `u` before clamping for the dual value.
            self.shifted_data(phi, &mut u);
            let dual = cfg.record_trace.then(|| self.dual_from_shifted(&u));
            self.clamp_in_place(&mut u);

            let check = i % FINITE_CHECK_PERIOD == 0 || i == cfg.max_iter;
            if check && (!u.is_finite() || !z.is_finite()) {
                return Err(Error::Divergence { iteration: i });
            }

            let diff: f64 = u
                .data()
                .iter()
                .zip(u_prev.data())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let base = u_prev.norm();
            let rel = if base > 0.0 {
                diff / base
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };

            if let (Some(j), Some(dual)) = (jfield.as_mut(), dual) {
                self.op.apply_into(&u, j);
                let primal = self.primal_with_field(&u, j);
                trace.records.push(TraceRecord {
                    iteration: i,
                    primal,
                    dual,
                    gap: primal - dual,
                    rel_change: rel,
                    t: t_next,
                });
            }
            observe(i, phi);

            t = t_next;
            trace.iterations = i;
            trace.final_rel_change = rel;
            std::mem::swap(&mut u, &mut u_prev);
            if rel <= cfg.rel_tol {
                trace.converged = true;
                break;
            }
        }
        if !u_prev.is_finite() {
            return Err(Error::Divergence {
                iteration: trace.iterations,
            });
        }
        Ok((u_prev, phi_prev, trace))
    }
}

pub fn dual_objective(
    phi: &PatchJacobianField,
    f: &Image,
    cfg: &SolverConfig,
    kernel: &ConvKernel,
    weights: &WeightField,
) -> Result<f64> {
    DualProblem::new(f, cfg, kernel, weights)?.dual_objective(phi)
}

pub fn dual_gradient(
    phi: &PatchJacobianField,
    f: &Image,
    cfg: &SolverConfig,
    kernel: &ConvKernel,
    weights: &WeightField,
) -> Result<PatchJacobianField> {
    DualProblem::new(f, cfg, kernel, weights)?.dual_gradient(phi)
}

pub fn primal_objective(
    u: &Image,
    f: &Image,
    cfg: &SolverConfig,
    kernel: &ConvKernel,
    weights: &WeightField,
) -> Result<f64> {
    DualProblem::new(f, cfg, kernel, weights)?.primal_objective(u)
}

/// Denoises `f`; `weights` must have been computed from `f` beforehand.
pub fn fgp_denoise(
    f: &Image,
    cfg: &SolverConfig,
    kernel: &ConvKernel,
    weights: &WeightField,
) -> Result<(Image, SolverTrace)> {
    DualProblem::new(f, cfg, kernel, weights)?.solve()
}

/// Builds the model's kernel and weights from `f` and runs the solver.
pub fn denoise(f: &Image, model: &ModelParams, cfg: &SolverConfig) -> Result<(Image, SolverTrace)> {
    let (kernel, weights) = model.build(f)?;
    fgp_denoise(f, cfg, &kernel, &weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(h: usize, w: usize) -> Image {
        Image::from_fn(h, w, |y, x| {
            let v = if (x / 3 + y / 4) % 2 == 0 { 0.25 } else { 0.75 };
            v + 0.1 * (((x * 7 + y * 13) % 5) as f64 - 2.0) / 2.0
        })
    }

    #[test]
    fn momentum_values() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((momentum_step(1.0) - golden).abs() < 1e-15);
        let t3 = momentum_step(golden);
        assert!((t3 - 0.5 * (1.0 + (1.0 + 4.0 * golden * golden).sqrt())).abs() < 1e-15);
        assert!((t3 - 2.193527085331054).abs() < 1e-12);
        let mut t = 1.0;
        for i in 1..200 {
            assert!(t >= (i as f64 + 1.0) / 2.0);
            let n = momentum_step(t);
            assert!(n > t);
            t = n;
        }
    }

    #[test]
    fn step_formulations_agree() {
        for tau in [1e-3, 0.05, 0.3, 2.0] {
            let a = tau / lipschitz_bound(tau);
            let b = bound_step(tau);
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * b);
        }
    }

    #[test]
    fn box_projection() {
        let u = Image::from_vec(1, 3, 1, vec![-0.2, 0.4, 1.3]).unwrap();
        let p = project_box(&u, 0.0, 1.0);
        assert_eq!(p.data(), &[0.0, 0.4, 1.0]);
        assert_eq!(project_box(&p, 0.0, 1.0), p);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(0.0).validate().is_err());
        assert!(SolverConfig::new(0.1).with_max_iter(0).validate().is_err());
        assert!(SolverConfig::new(0.1).with_box(1.0, 1.0).validate().is_err());
        assert!(SolverConfig::new(0.1).validate().is_ok());
    }

    #[test]
    fn dual_objective_closed_forms() {
        let k = ConvKernel::delta();
        let w = WeightField::ones(2, 2);
        let cfg = SolverConfig::new(0.3);
        let phi = PatchJacobianField::zeros(2, 2, 1, 1);
        let inside = Image::from_vec(2, 2, 1, vec![0.1, 0.5, 0.7, 0.9]).unwrap();
        assert_eq!(dual_objective(&phi, &inside, &cfg, &k, &w).unwrap(), 0.0);
        let outside = Image::from_vec(2, 2, 1, vec![0.1, 1.5, 0.7, 0.9]).unwrap();
        assert!((dual_objective(&phi, &outside, &cfg, &k, &w).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn dual_gradient_at_zero() {
        let f = pattern(6, 6).map(|v| v.clamp(0.05, 0.95));
        let k = make_gaussian_kernel(1, 0.5).unwrap();
        let w = WeightField::ones(6, 6);
        let cfg = SolverConfig::new(0.2);
        let phi = PatchJacobianField::zeros(6, 6, 1, 9);
        let g = dual_gradient(&phi, &f, &cfg, &k, &w).unwrap();
        let jf = crate::jacobian::jacobian_apply(&f, &k, &w).unwrap();
        for (a, b) in g.data().iter().zip(jf.data()) {
            assert!((a - 0.2 * b).abs() < 1e-15);
        }
        let zero = dual_gradient(&phi, &Image::zeros(6, 6, 1), &cfg, &k, &w).unwrap();
        assert!(zero.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn primal_objective_simple_cases() {
        let f = pattern(5, 5).map(|v| v.clamp(0.0, 1.0));
        let k = make_gaussian_kernel(1, 0.5).unwrap();
        let w = WeightField::ones(5, 5);
        let c = Image::filled(5, 5, 1, 0.3);
        assert_eq!(primal_objective(&c, &c, &SolverConfig::new(0.5), &k, &w).unwrap(), 0.0);
        let g = c.clone();
        let fid = 0.5 * f.data().iter().map(|v| (v - 0.3).powi(2)).sum::<f64>();
        let p = primal_objective(&g, &f, &SolverConfig::new(1e-300), &k, &w).unwrap();
        assert!((p - fid).abs() < 1e-14);
    }

    #[test]
    fn tiny_tau_returns_box_projection() {
        let f = pattern(8, 8).map(|v| 1.4 * v - 0.2);
        let cfg = SolverConfig::new(1e-12);
        let (u, _) = denoise(&f, &ModelParams::new(ModelKind::Wstv), &cfg).unwrap();
        assert!(u.max_abs_diff(&project_box(&f, 0.0, 1.0)) <= 1e-8);
    }

    #[test]
    fn constant_image_is_a_fixed_point() {
        let f = Image::filled(9, 7, 3, 0.42);
        for tau in [0.01, 0.5, 3.0] {
            let (u, _) = denoise(&f, &ModelParams::new(ModelKind::Stv), &SolverConfig::new(tau)).unwrap();
            assert!(u.max_abs_diff(&f) <= 1e-8);
        }
    }

    #[test]
    fn trace_is_consistent() {
        let f = pattern(12, 12);
        let cfg = SolverConfig::new(0.1).with_trace(true).with_max_iter(30).with_rel_tol(0.0);
        let (u, tr) = denoise(&f, &ModelParams::new(ModelKind::Wstv), &cfg).unwrap();
        assert_eq!(tr.records.len(), 30);
        assert!(tr.initial_primal.unwrap() > 0.0);
        let mut t = 1.0;
        for r in &tr.records {
            t = momentum_step(t);
            assert_eq!(r.t, t);
            assert!(r.gap >= -1e-12, "negative gap {}", r.gap);
        }
        assert!(u.data().iter().all(|v| (0.0..=1.0).contains(v)));
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("iteration,primal,dual,gap,rel_change,t\n"));
        assert_eq!(text.lines().count(), 31);
    }

    #[test]
    fn non_finite_input_is_reported() {
        let mut f = pattern(6, 6);
        f.data_mut()[3] = f64::NAN;
        let r = denoise(&f, &ModelParams::new(ModelKind::Tv), &SolverConfig::new(0.1));
        assert!(matches!(r, Err(Error::Divergence { iteration: 0 })));
    }

    #[test]
    fn model_kind_parsing() {
        assert_eq!("WSTV".parse::<ModelKind>().unwrap(), ModelKind::Wstv);
        assert_eq!("tv".parse::<ModelKind>().unwrap(), ModelKind::Tv);
        assert!("atv".parse::<ModelKind>().is_err());
        assert_eq!(ModelKind::Tv.default_max_iter(), 500);
        assert_eq!(ModelKind::Stv.default_max_iter(), 100);
    }

    #[test]
    fn estimated_step_is_larger_for_tv() {
        let f = pattern(16, 16);
        let (k, w) = ModelParams::new(ModelKind::Tv).build(&f).unwrap();
        let mut cfg = SolverConfig::new(0.1);
        cfg.step_rule = StepRule::Estimated { iters: 50 };
        let p = DualProblem::new(&f, &cfg, &k, &w).unwrap();
        assert!(p.step() > bound_step(0.1));
        let (u, tr) = p.solve().unwrap();
        assert!(u.is_finite() && tr.iterations >= 1);
    }
}
