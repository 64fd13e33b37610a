//! Procedurally generated test scenes.
//!
//! The classic benchmark photographs are not redistributable, so experiments
//! and tests run on synthetic scenes with the same ingredients: large smooth
//! areas, sharp object boundaries, thin structures and a textured region.
//! All generators are deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::Image;

/// Supersampling factor per axis for anti-aliased edges.
const SUPERSAMPLE: usize = 4;

/// Smooth value noise on a `cells × cells` lattice with bicubic-like fade.
struct ValueNoise {
    cells: usize,
    lattice: Vec<f64>,
}

impl ValueNoise {
    fn new(cells: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lattice = (0..(cells + 1) * (cells + 1))
            .map(|_| rng.random::<f64>() * 2.0 - 1.0)
            .collect();
        Self { cells, lattice }
    }

    /// `u, v` in `[0, 1]`; result in `[-1, 1]`.
    fn sample(&self, u: f64, v: f64) -> f64 {
        let fx = (u * self.cells as f64).clamp(0.0, self.cells as f64 - 1e-9);
        let fy = (v * self.cells as f64).clamp(0.0, self.cells as f64 - 1e-9);
        let (ix, iy) = (fx as usize, fy as usize);
        let (tx, ty) = (fade(fx - ix as f64), fade(fy - iy as f64));
        let s = self.cells + 1;
        let at = |y: usize, x: usize| self.lattice[y * s + x];
        let top = at(iy, ix) * (1.0 - tx) + at(iy, ix + 1) * tx;
        let bot = at(iy + 1, ix) * (1.0 - tx) + at(iy + 1, ix + 1) * tx;
        top * (1.0 - ty) + bot * ty
    }
}

fn fade(t: f64) -> f64 {
    t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
}

/// Renders `shade(u, v)` (coordinates in `[0, 1]`) with box-filter supersampling.
fn render(size: usize, shade: impl Fn(f64, f64) -> f64) -> Image {
    let inv = 1.0 / (size * SUPERSAMPLE) as f64;
    let norm = 1.0 / (SUPERSAMPLE * SUPERSAMPLE) as f64;
    Image::from_fn(size, size, |y, x| {
        let mut acc = 0.0;
        for sy in 0..SUPERSAMPLE {
            for sx in 0..SUPERSAMPLE {
                let v = ((y * SUPERSAMPLE + sy) as f64 + 0.5) * inv;
                let u = ((x * SUPERSAMPLE + sx) as f64 + 0.5) * inv;
                acc += shade(u, v);
            }
        }
        (acc * norm).clamp(0.0, 1.0)
    })
}

fn in_ellipse(u: f64, v: f64, cu: f64, cv: f64, ru: f64, rv: f64) -> bool {
    let (a, b) = ((u - cu) / ru, (v - cv) / rv);
    a * a + b * b <= 1.0
}

/// Distance from `(u, v)` to the segment `p`–`q`.
fn segment_distance(u: f64, v: f64, p: (f64, f64), q: (f64, f64)) -> f64 {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let t = (((u - p.0) * dx + (v - p.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    ((u - p.0 - t * dx).powi(2) + (v - p.1 - t * dy).powi(2)).sqrt()
}

/// A photographer-on-a-field scene: bright graded sky, distant buildings,
/// a textured lawn, a dark standing figure and a thin-legged tripod.
pub fn cameraman_like(size: usize) -> Image {
    let lawn_fine = ValueNoise::new(160, 10);
    let lawn = ValueNoise::new(48, 11);
    let lawn_coarse = ValueNoise::new(6, 12);
    let coat = ValueNoise::new(24, 13);
    let sky = ValueNoise::new(3, 14);
    render(size, move |u, v| {
        let horizon = 0.58 + 0.03 * (u * 5.0).sin();
        // Background.
        let mut val = if v < horizon {
            0.80 + 0.10 * v + 0.03 * sky.sample(u, v)
        } else {
            0.52 + 0.16 * lawn_fine.sample(u, v) + 0.12 * lawn.sample(u, v)
                + 0.06 * lawn_coarse.sample(u, v)
                - 0.12 * (v - horizon)
        };
        // Distant buildings on the horizon.
        let towers = [(0.06, 0.14, 0.47), (0.15, 0.20, 0.42), (0.70, 0.78, 0.50), (0.80, 0.86, 0.45)];
        for (a, b, top) in towers {
            if u >= a && u <= b && v >= top && v < horizon {
                val = 0.62 + 0.04 * ((u - a) / (b - a));
                // Window grid.
                let (wx, wy) = (((u - a) * 90.0).fract(), ((v - top) * 70.0).fract());
                if wx > 0.5 && wy > 0.45 {
                    val = 0.40;
                }
            }
        }
        // Tripod legs and camera.
        let legs = [
            ((0.66, 0.52), (0.58, 0.95)),
            ((0.66, 0.52), (0.73, 0.96)),
            ((0.66, 0.52), (0.67, 0.93)),
        ];
        for (p, q) in legs {
            if segment_distance(u, v, p, q) < 0.0045 {
                val = 0.18;
            }
        }
        if u > 0.60 && u < 0.70 && v > 0.44 && v < 0.52 {
            val = 0.12;
        }
        if in_ellipse(u, v, 0.585, 0.48, 0.02, 0.02) {
            val = 0.30;
        }
        // Figure: head, body and legs.
        if in_ellipse(u, v, 0.44, 0.25, 0.055, 0.07) {
            val = 0.16 + 0.05 * coat.sample(u, v);
        }
        if in_ellipse(u, v, 0.455, 0.24, 0.03, 0.035) {
            val = 0.55;
        }
        let body_half = 0.07 + 0.09 * ((v - 0.30) / 0.35).clamp(0.0, 1.0);
        if v >= 0.31 && v <= 0.66 && (u - 0.44).abs() <= body_half {
            val = 0.10 + 0.06 * coat.sample(u * 1.7, v) + 0.05 * ((u - 0.44) / body_half);
        }
        if v > 0.66 && v < 0.97 && ((u - 0.39).abs() < 0.035 || (u - 0.50).abs() < 0.035) {
            val = 0.09 + 0.03 * coat.sample(u, v * 1.3);
        }
        // Arm reaching for the camera.
        if segment_distance(u, v, (0.50, 0.38), (0.60, 0.47)) < 0.022 {
            val = 0.13;
        }
        val
    })
}

/// A house facade: shaded walls, roof, windows with frames and a door,
/// against a graded sky and a darker hedge.
pub fn house_like(size: usize) -> Image {
    let hedge = ValueNoise::new(40, 21);
    let brick = ValueNoise::new(20, 22);
    render(size, move |u, v| {
        let mut val = 0.72 + 0.18 * v;
        // Roof (triangle) and walls.
        let roof_h = 0.32 - 0.55 * (u - 0.5).abs();
        if v >= roof_h && v < 0.38 && u > 0.12 && u < 0.88 {
            val = 0.30 + 0.08 * (u - 0.5).signum() * 0.5;
        }
        if v >= 0.38 && v < 0.86 && u > 0.16 && u < 0.84 {
            val = if u < 0.5 { 0.68 } else { 0.56 } + 0.025 * brick.sample(u, v);
        }
        // Windows with frames.
        for (cu, cv) in [(0.27, 0.50), (0.41, 0.50), (0.60, 0.50), (0.74, 0.50), (0.27, 0.68), (0.74, 0.68)] {
            if (u - cu).abs() < 0.055 && (v - cv).abs() < 0.065 {
                val = 0.92;
                if (u - cu).abs() < 0.045 && (v - cv).abs() < 0.055 {
                    val = if (u - cu).abs() < 0.004 || (v - cv).abs() < 0.004 { 0.92 } else { 0.22 };
                }
            }
        }
        // Door.
        if (u - 0.5).abs() < 0.06 && v > 0.64 && v < 0.86 {
            val = 0.35;
        }
        // Chimney.
        if u > 0.66 && u < 0.72 && v > 0.12 && v < roof_h + 0.02 {
            val = 0.40;
        }
        // Hedge along the bottom.
        if v > 0.84 + 0.02 * (u * 19.0).sin() {
            val = 0.30 + 0.12 * hedge.sample(u, v);
        }
        val
    })
}

/// Three-channel scene of overlapping colored blobs with soft shading.
pub fn color_peppers_like(size: usize) -> Image {
    let skin = ValueNoise::new(10, 31);
    let blobs = [
        (0.30, 0.35, 0.22, 0.18, [0.80, 0.15, 0.10]),
        (0.68, 0.30, 0.20, 0.22, [0.25, 0.65, 0.15]),
        (0.50, 0.70, 0.28, 0.20, [0.90, 0.70, 0.10]),
        (0.20, 0.78, 0.15, 0.14, [0.55, 0.10, 0.25]),
    ];
    let planes: Vec<Image> = (0..3)
        .map(|c| {
            render(size, |u, v| {
                let mut val = 0.15 + 0.10 * u;
                for (cu, cv, ru, rv, col) in blobs {
                    if in_ellipse(u, v, cu, cv, ru, rv) {
                        let (a, b) = ((u - cu) / ru, (v - cv) / rv);
                        let shade = 1.0 - 0.35 * (a * a + b * b) + 0.2 * (-a - b).max(0.0);
                        val = col[c] * shade + 0.03 * skin.sample(u, v);
                    }
                }
                val
            })
        })
        .collect();
    Image::from_planes(&planes).expect("planes share a shape")
}

/// Named fixtures for the CLI and examples.
pub fn by_name(name: &str, size: usize) -> Option<Image> {
    match name {
        "cameraman" => Some(cameraman_like(size)),
        "house" => Some(house_like(size)),
        "peppers-color" => Some(color_peppers_like(size)),
        _ => None,
    }
}

pub const NAMES: [&str; 3] = ["cameraman", "house", "peppers-color"];
