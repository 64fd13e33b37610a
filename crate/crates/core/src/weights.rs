//! Anisotropic edge-stopping weights.
//!
//! Each pixel gets a pair `(w1, w2)` that damps the horizontal and vertical
//! gradient components:
//!
//! ```text
//! w1 = 1 / (1 + kappa * |G * d_x f|)
//! w2 = 1 / (1 + kappa * |G * d_y f|)
//! ```
//!
//! where `G` is a truncated Gaussian of standard deviation `sigma_hat` and the
//! signed difference is smoothed before the absolute value is taken. Weights
//! depend on the observed image only and stay fixed while the solver runs.

use crate::boundary::reflect;
use crate::diff::forward_gradient;
use crate::error::{Error, Result};
use crate::image::Image;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothSpec {
    /// Edge sensitivity; `0` disables weighting.
    pub kappa: f64,
    /// Presmoothing standard deviation in pixels.
    pub sigma_hat: f64,
    /// Truncation radius of the presmoothing kernel in pixels.
    pub radius: usize,
}

impl SmoothSpec {
    /// Settings with the radius derived as `ceil(3 * sigma_hat)`.
    pub fn new(kappa: f64, sigma_hat: f64) -> Self {
        Self {
            kappa,
            sigma_hat,
            radius: default_radius(sigma_hat),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::Config(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        if !(self.sigma_hat >= 0.0 && self.sigma_hat.is_finite()) {
            return Err(Error::Config(format!(
                "sigma_hat must be >= 0, got {}",
                self.sigma_hat
            )));
        }
        Ok(())
    }
}

impl Default for SmoothSpec {
    fn default() -> Self {
        Self::new(10.0, 1.0)
    }
}

pub fn default_radius(sigma_hat: f64) -> usize {
    (3.0 * sigma_hat).ceil().max(0.0) as usize
}

/// Per-pixel weight pair, shared by all channels.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    height: usize,
    width: usize,
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl WeightField {
    /// `W = I`.
    pub fn ones(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            w1: vec![1.0; height * width],
            w2: vec![1.0; height * width],
        }
    }

    pub fn new(height: usize, width: usize, w1: Vec<f64>, w2: Vec<f64>) -> Result<Self> {
        let n = height * width;
        if w1.len() != n || w2.len() != n {
            return Err(Error::Shape(format!(
                "weight planes must have {n} entries, got {} and {}",
                w1.len(),
                w2.len()
            )));
        }
        if let Some(bad) = w1.iter().chain(&w2).find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Config(format!("weights must be positive and finite, got {bad}")));
        }
        Ok(Self {
            height,
            width,
            w1,
            w2,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn w2(&self) -> &[f64] {
        &self.w2
    }

    pub fn max_weight(&self) -> f64 {
        self.w1.iter().chain(&self.w2).copied().fold(0.0, f64::max)
    }

    pub fn min_weight(&self) -> f64 {
        self.w1
            .iter()
            .chain(&self.w2)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn matches(&self, height: usize, width: usize) -> Result<()> {
        if self.height == height && self.width == width {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "weights are {}x{}, image is {height}x{width}",
                self.height, self.width
            )))
        }
    }
}

/// Normalized sampled Gaussian on `[-radius, radius]`.
pub fn gaussian_taps(sigma: f64, radius: usize) -> Vec<f64> {
    let mut taps: Vec<f64> = (-(radius as isize)..=radius as isize)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= s);
    taps
}

/// Separable Gaussian smoothing with mirror boundary extension, per channel.
/// `sigma_hat == 0` or `radius == 0` returns the input unchanged.
pub fn gaussian_smooth(img: &Image, sigma_hat: f64, radius: usize) -> Image {
    if sigma_hat == 0.0 || radius == 0 {
        return img.clone();
    }
    let taps = gaussian_taps(sigma_hat, radius);
    let r = radius as isize;
    let (h, w) = (img.height(), img.width());
    let mut out = img.clone();
    let mut tmp = vec![0.0; h * w];
    for c in 0..img.channels() {
        let src = img.plane(c);
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for (k, t) in taps.iter().enumerate() {
                    let xs = reflect(x as isize + k as isize - r, w);
                    acc += t * src[y * w + xs];
                }
                tmp[y * w + x] = acc;
            }
        }
        let dst = out.plane_mut(c);
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for (k, t) in taps.iter().enumerate() {
                    let ys = reflect(y as isize + k as isize - r, h);
                    acc += t * tmp[ys * w + x];
                }
                dst[y * w + x] = acc;
            }
        }
    }
    out
}

/// Weights from the observed image. Multichannel input uses the gradient of
/// the channel mean.
pub fn compute_weights(f: &Image, spec: &SmoothSpec) -> Result<WeightField> {
    spec.validate()?;
    let (h, w) = (f.height(), f.width());
    let lum = f.channel_mean();
    let grad = forward_gradient(&lum);
    let g = grad.plane(0);
    let dx = Image::from_vec(h, w, 1, g.iter().step_by(2).copied().collect())?;
    let dy = Image::from_vec(h, w, 1, g.iter().skip(1).step_by(2).copied().collect())?;
    let sdx = gaussian_smooth(&dx, spec.sigma_hat, spec.radius);
    let sdy = gaussian_smooth(&dy, spec.sigma_hat, spec.radius);
    let weight = |v: &f64| 1.0 / (1.0 + spec.kappa * v.abs());
    let w1: Vec<f64> = sdx.data().iter().map(weight).collect();
    let w2: Vec<f64> = sdy.data().iter().map(weight).collect();
    WeightField::new(h, w, w1, w2)
}
