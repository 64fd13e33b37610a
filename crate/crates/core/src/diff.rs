//! Forward-difference gradient and backward-difference divergence.
//!
//! The gradient uses a zero difference on the last column (x) and last row (y).
//! [`divergence`] is its exact negative adjoint: `<grad u, g> = -<u, div g>`.

use rayon::prelude::*;

use crate::image::{dot, Image};

/// Per-channel gradient, two components per pixel stored interleaved:
/// `data[2 * (c * pixels + i)]` is `d_x`, the next entry is `d_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl GradientField {
    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self {
            height,
            width,
            channels,
            data: vec![0.0; 2 * height * width * channels],
        }
    }

    pub fn from_vec(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), 2 * height * width * channels, "gradient field length");
        Self {
            height,
            width,
            channels,
            data,
        }
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Interleaved `(d_x, d_y)` pairs of channel `c`.
    pub fn plane(&self, c: usize) -> &[f64] {
        let n = 2 * self.height * self.width;
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = 2 * self.height * self.width;
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, c: usize) -> (f64, f64) {
        let k = 2 * ((c * self.height + y) * self.width + x);
        (self.data[k], self.data[k + 1])
    }

    pub fn dot(&self, other: &GradientField) -> f64 {
        dot(&self.data, &other.data)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Forward-difference gradient of one `h × w` plane into interleaved pairs.
pub(crate) fn gradient_plane(src: &[f64], h: usize, w: usize, out: &mut [f64]) {
    out.par_chunks_mut(2 * w).enumerate().for_each(|(y, row)| {
        let line = &src[y * w..(y + 1) * w];
        let below = (y + 1 < h).then(|| &src[(y + 1) * w..(y + 2) * w]);
        for x in 0..w {
            row[2 * x] = if x + 1 < w { line[x + 1] - line[x] } else { 0.0 };
            row[2 * x + 1] = match below {
                Some(b) => b[x] - line[x],
                None => 0.0,
            };
        }
    });
}

/// Backward-difference divergence of one interleaved plane.
pub(crate) fn divergence_plane(g: &[f64], h: usize, w: usize, out: &mut [f64]) {
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, o) in row.iter_mut().enumerate() {
            let k = 2 * (y * w + x);
            let mut v = 0.0;
            if x + 1 < w {
                v += g[k];
            }
            if x > 0 {
                v -= g[k - 2];
            }
            if y + 1 < h {
                v += g[k + 1];
            }
            if y > 0 {
                v -= g[k + 1 - 2 * w];
            }
            *o = v;
        }
    });
}

pub fn forward_gradient(img: &Image) -> GradientField {
    let (h, w, m) = (img.height(), img.width(), img.channels());
    let mut field = GradientField::zeros(h, w, m);
    for c in 0..m {
        gradient_plane(img.plane(c), h, w, field.plane_mut(c));
    }
    field
}

pub fn divergence(g: &GradientField) -> Image {
    let (h, w, m) = (g.height, g.width, g.channels);
    let mut out = Image::zeros(h, w, m);
    for c in 0..m {
        divergence_plane(g.plane(c), h, w, out.plane_mut(c));
    }
    out
}
