//! Weighted patch-based Jacobian and its adjoint.
//!
//! For every pixel `i`, channel `m` and kernel shift `g_l` the operator stores
//! the row
//!
//! ```text
//! sqrt(K[g_l]) * (W grad u_m)(x_i - g_l)
//! ```
//!
//! so each pixel owns an `(L*M) × 2` block, row `m * L + l`. Source positions
//! that fall outside the image are mirrored (half-sample symmetric). The
//! Gram matrix of a block is the kernel-smoothed structure tensor of the
//! weighted gradient at that pixel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary::AxisMap;
use crate::diff::{divergence_plane, gradient_plane};
use crate::error::{Error, Result};
use crate::image::{dot, Image};
use crate::weights::{gaussian_taps, WeightField};

/// Nonnegative `(2r+1)²` convolution mask with unit mass.
///
/// Weights are indexed row-major by shift: entry `l` corresponds to
/// `g_l = (l / (2r+1) - r, l % (2r+1) - r)` as `(dy, dx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvKernel {
    radius: usize,
    weights: Vec<f64>,
    sqrt_weights: Vec<f64>,
}

impl ConvKernel {
    /// The single-tap identity kernel (`L = 1`).
    pub fn delta() -> Self {
        Self {
            radius: 0,
            weights: vec![1.0],
            sqrt_weights: vec![1.0],
        }
    }

    pub fn from_weights(radius: usize, weights: Vec<f64>) -> Result<Self> {
        let side = 2 * radius + 1;
        if weights.len() != side * side {
            return Err(Error::Shape(format!(
                "a radius-{radius} kernel needs {} weights, got {}",
                side * side,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::Config("kernel weights must be finite and >= 0".into()));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("kernel weights sum to {mass}, expected 1")));
        }
        let sqrt_weights = weights.iter().map(|w| w.sqrt()).collect();
        Ok(Self {
            radius,
            weights,
            sqrt_weights,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of shifts `L`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sqrt_weights(&self) -> &[f64] {
        &self.sqrt_weights
    }

    /// Shift `(dy, dx)` of entry `l`.
    pub fn shift(&self, l: usize) -> (isize, isize) {
        let side = 2 * self.radius + 1;
        let r = self.radius as isize;
        ((l / side) as isize - r, (l % side) as isize - r)
    }

    pub fn is_delta(&self) -> bool {
        self.radius == 0
    }
}

/// Sampled 2-D Gaussian on the `(2 L_K + 1)²` grid, normalized to sum 1.
/// `radius == 0` yields the delta kernel regardless of `sigma`.
pub fn make_gaussian_kernel(radius: usize, sigma: f64) -> Result<ConvKernel> {
    if radius == 0 {
        return Ok(ConvKernel::delta());
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Config(format!("kernel sigma must be > 0, got {sigma}")));
    }
    // The sampled isotropic Gaussian factors into two 1-D profiles.
    let taps = gaussian_taps(sigma, radius);
    let mut weights = Vec::with_capacity(taps.len() * taps.len());
    for a in &taps {
        for b in &taps {
            weights.push(a * b);
        }
    }
    let mass: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= mass);
    ConvKernel::from_weights(radius, weights)
}

/// Dual-space element: `pixels` blocks of `rows × 2`, block-contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchJacobianField {
    height: usize,
    width: usize,
    channels: usize,
    shifts: usize,
    data: Vec<f64>,
}

impl PatchJacobianField {
    pub fn zeros(height: usize, width: usize, channels: usize, shifts: usize) -> Self {
        Self {
            height,
            width,
            channels,
            shifts,
            data: vec![0.0; height * width * channels * shifts * 2],
        }
    }

    pub fn from_vec(
        height: usize,
        width: usize,
        channels: usize,
        shifts: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        let n = height * width * channels * shifts * 2;
        if data.len() != n {
            return Err(Error::Shape(format!("field needs {n} entries, got {}", data.len())));
        }
        Ok(Self {
            height,
            width,
            channels,
            shifts,
            data,
        })
    }

    /// Zero field in the range of `op`.
    pub fn zeros_like(op: &JacobianOperator) -> Self {
        Self::zeros(op.height, op.width, op.channels, op.kernel.len())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Kernel size `L`.
    pub fn shifts(&self) -> usize {
        self.shifts
    }

    pub fn pixels(&self) -> usize {
        self.height * self.width
    }

    /// Rows per block, `L * M`.
    pub fn rows(&self) -> usize {
        self.shifts * self.channels
    }

    pub fn block_len(&self) -> usize {
        2 * self.rows()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Row-major `rows × 2` block of pixel `i`.
    pub fn block(&self, i: usize) -> &[f64] {
        let b = self.block_len();
        &self.data[i * b..(i + 1) * b]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut [f64] {
        let b = self.block_len();
        &mut self.data[i * b..(i + 1) * b]
    }

    /// Entry `(row h = m * L + l, column c)` of pixel `i`.
    pub fn get(&self, i: usize, h: usize, c: usize) -> f64 {
        self.data[i * self.block_len() + 2 * h + c]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.height == other.height
            && self.width == other.width
            && self.channels == other.channels
            && self.shifts == other.shifts
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.data, &other.data)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// `Ĵ_K` bound to an image shape, a kernel and a weight field.
#[derive(Debug, Clone)]
pub struct JacobianOperator {
    height: usize,
    width: usize,
    channels: usize,
    kernel: ConvKernel,
    weights: WeightField,
    rows_map: AxisMap,
    cols_map: AxisMap,
}

impl JacobianOperator {
    pub fn new(
        height: usize,
        width: usize,
        channels: usize,
        kernel: ConvKernel,
        weights: WeightField,
    ) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::Shape("empty image".into()));
        }
        weights.matches(height, width)?;
        let r = kernel.radius();
        Ok(Self {
            height,
            width,
            channels,
            rows_map: AxisMap::new(height, r),
            cols_map: AxisMap::new(width, r),
            kernel,
            weights,
        })
    }

    pub fn for_image(u: &Image, kernel: &ConvKernel, weights: &WeightField) -> Result<Self> {
        Self::new(u.height(), u.width(), u.channels(), kernel.clone(), weights.clone())
    }

    pub fn kernel(&self) -> &ConvKernel {
        &self.kernel
    }

    pub fn weights(&self) -> &WeightField {
        &self.weights
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    fn check_image(&self, u: &Image) -> Result<()> {
        if u.height() != self.height || u.width() != self.width || u.channels() != self.channels {
            return Err(Error::Shape(format!(
                "operator expects {}x{}x{}, got {}x{}x{}",
                self.height,
                self.width,
                self.channels,
                u.height(),
                u.width(),
                u.channels()
            )));
        }
        Ok(())
    }

    fn check_field(&self, x: &PatchJacobianField) -> Result<()> {
        if x.height != self.height
            || x.width != self.width
            || x.channels != self.channels
            || x.shifts != self.kernel.len()
        {
            return Err(Error::Shape("dual field does not match operator".into()));
        }
        Ok(())
    }

    /// `W grad u_m` for every channel, interleaved pairs, channel-major.
    fn weighted_gradient(&self, u: &Image) -> Vec<f64> {
        let n = self.height * self.width;
        let mut g = vec![0.0; 2 * n * self.channels];
        let (w1, w2) = (self.weights.w1(), self.weights.w2());
        for c in 0..self.channels {
            let plane = &mut g[2 * n * c..2 * n * (c + 1)];
            gradient_plane(u.plane(c), self.height, self.width, plane);
            plane.par_chunks_mut(2).enumerate().for_each(|(i, p)| {
                p[0] *= w1[i];
                p[1] *= w2[i];
            });
        }
        g
    }

    pub fn apply(&self, u: &Image) -> Result<PatchJacobianField> {
        self.check_image(u)?;
        let mut out = PatchJacobianField::zeros_like(self);
        self.apply_into(u, &mut out);
        Ok(out)
    }

    /// Writes `Ĵ_K u` into `out`. Shapes must already match.
    pub fn apply_into(&self, u: &Image, out: &mut PatchJacobianField) {
        let (h, w, m) = (self.height, self.width, self.channels);
        let n = h * w;
        let l_count = self.kernel.len();
        let side = 2 * self.kernel.radius() + 1;
        let sq = self.kernel.sqrt_weights();
        let g = self.weighted_gradient(u);
        let block = 2 * l_count * m;
        out.data
            .par_chunks_mut(block)
            .enumerate()
            .for_each(|(i, blk)| {
                let (y, x) = (i / w, i % w);
                for c in 0..m {
                    let gp = &g[2 * n * c..2 * n * (c + 1)];
                    for l in 0..l_count {
                        let sy = self.rows_map.source(l / side, y);
                        let sx = self.cols_map.source(l % side, x);
                        let k = 2 * (sy * w + sx);
                        let row = 2 * (c * l_count + l);
                        blk[row] = sq[l] * gp[k];
                        blk[row + 1] = sq[l] * gp[k + 1];
                    }
                }
            });
    }

    pub fn adjoint(&self, x: &PatchJacobianField) -> Result<Image> {
        self.check_field(x)?;
        let mut out = Image::zeros(self.height, self.width, self.channels);
        self.adjoint_into(x, &mut out);
        Ok(out)
    }

    /// Writes `Ĵ_K* x` into `out`: the transposed shifts are gathered per output
    /// pixel, weighted by `W`, then passed through `-div`.
    pub fn adjoint_into(&self, x: &PatchJacobianField, out: &mut Image) {
        let (h, w, m) = (self.height, self.width, self.channels);
        let n = h * w;
        let l_count = self.kernel.len();
        let side = 2 * self.kernel.radius() + 1;
        let sq = self.kernel.sqrt_weights();
        let block = 2 * l_count * m;
        let (w1, w2) = (self.weights.w1(), self.weights.w2());
        let mut gathered = vec![0.0; 2 * n];
        for c in 0..m {
            gathered.par_chunks_mut(2).enumerate().for_each(|(p, acc)| {
                let (py, px) = (p / w, p % w);
                let (mut ax, mut ay) = (0.0, 0.0);
                for l in 0..l_count {
                    let row = 2 * (c * l_count + l);
                    let (mut sx, mut sy) = (0.0, 0.0);
                    for &iy in self.rows_map.preimages(l / side, py) {
                        for &ix in self.cols_map.preimages(l % side, px) {
                            let k = (iy * w + ix) * block + row;
                            sx += x.data[k];
                            sy += x.data[k + 1];
                        }
                    }
                    ax += sq[l] * sx;
                    ay += sq[l] * sy;
                }
                acc[0] = w1[p] * ax;
                acc[1] = w2[p] * ay;
            });
            let dst = out.plane_mut(c);
            divergence_plane(&gathered, h, w, dst);
            dst.par_iter_mut().for_each(|v| *v = -*v);
        }
    }

    /// Power-iteration estimate of the largest eigenvalue of `Ĵ_K* Ĵ_K`.
    ///
    /// Every Rayleigh quotient is a lower bound on the true value; the maximum
    /// seen so far is returned, so the estimate never decreases with `iters`.
    pub fn norm_sq_estimate(&self, iters: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = self.height * self.width * self.channels;
        let mut v = Image::from_vec(
            self.height,
            self.width,
            self.channels,
            (0..len).map(|_| rng.random::<f64>() - 0.5).collect(),
        )
        .expect("shape is consistent");
        let mut field = PatchJacobianField::zeros_like(self);
        let mut best: f64 = 0.0;
        for _ in 0..iters.max(1) {
            let nv = v.norm();
            if nv == 0.0 {
                break;
            }
            v.data_mut().iter_mut().for_each(|e| *e /= nv);
            self.apply_into(&v, &mut field);
            best = best.max(field.dot(&field));
            self.adjoint_into(&field, &mut v);
        }
        best
    }
}

pub fn jacobian_apply(u: &Image, kernel: &ConvKernel, weights: &WeightField) -> Result<PatchJacobianField> {
    JacobianOperator::for_image(u, kernel, weights)?.apply(u)
}

pub fn jacobian_adjoint(
    x: &PatchJacobianField,
    kernel: &ConvKernel,
    weights: &WeightField,
) -> Result<Image> {
    JacobianOperator::new(x.height, x.width, x.channels, kernel.clone(), weights.clone())?.adjoint(x)
}

/// `‖Ĵ_K‖²` estimated on a single-channel image the size of `weights`.
pub fn operator_norm_sq_estimate(kernel: &ConvKernel, weights: &WeightField, iters: usize) -> f64 {
    JacobianOperator::new(weights.height(), weights.width(), 1, kernel.clone(), weights.clone())
        .map(|op| op.norm_sq_estimate(iters, 0x5eed))
        .unwrap_or(0.0)
}
