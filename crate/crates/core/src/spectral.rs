//! Per-pixel spectral computations on `rows × 2` blocks.
//!
//! Singular values come from a Gram–Schmidt reduction of the block to a 2×2
//! upper-triangular factor `R` (so `RᵀR` is the block's Gram matrix), followed
//! by the closed-form singular values of `R`. The smaller value is formed as
//! `|det R| / σ₊`, which keeps rank-one blocks exactly rank one instead of
//! leaking `sqrt(eps)`-sized noise the way `sqrt(λ₋)` of the Gram matrix does.
//!
//! The projection onto the spectral unit ball follows the right-singular-vector
//! construction: `P(Φ) = Φ V Σ⁺ diag(min(σ, 1)) Vᵀ` with `V` the eigenvectors
//! of `ΦᵀΦ`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::jacobian::{ConvKernel, JacobianOperator, PatchJacobianField};
use crate::weights::WeightField;

/// Singular values treated as zero by the pseudo-inverse: `ε · max(1, σ₊)`.
pub const RANK_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPair {
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

impl SingularPair {
    /// Nuclear (Schatten-1) norm.
    pub fn nuclear(&self) -> f64 {
        self.sigma_plus + self.sigma_minus
    }

    /// Spectral (Schatten-∞) norm.
    pub fn spectral(&self) -> f64 {
        self.sigma_plus
    }
}

/// Singular values of a row-major `rows × 2` block.
pub fn singular_pair(block: &[f64]) -> SingularPair {
    debug_assert!(block.len() % 2 == 0);
    let mut a = 0.0;
    for row in block.chunks_exact(2) {
        a += row[0] * row[0];
    }
    let r11 = a.sqrt();
    if r11 == 0.0 {
        let c: f64 = block.chunks_exact(2).map(|r| r[1] * r[1]).sum();
        return SingularPair {
            sigma_plus: c.sqrt(),
            sigma_minus: 0.0,
        };
    }
    let inv = 1.0 / r11;
    let mut r12 = 0.0;
    for row in block.chunks_exact(2) {
        r12 += row[0] * inv * row[1];
    }
    let mut rr = 0.0;
    for row in block.chunks_exact(2) {
        let e = row[1] - r12 * (row[0] * inv);
        rr += e * e;
    }
    let r22 = rr.sqrt();
    let s1 = (r11 + r22).hypot(r12);
    let s2 = (r11 - r22).hypot(r12);
    let sigma_plus = 0.5 * (s1 + s2);
    let sigma_minus = if sigma_plus > 0.0 {
        r11 * r22 / sigma_plus
    } else {
        0.0
    };
    SingularPair {
        sigma_plus,
        sigma_minus: sigma_minus.min(sigma_plus),
    }
}

/// Gram matrix entries `(a, b, c)` of `[[a, b], [b, c]] = BᵀB`.
#[inline]
fn gram(block: &[f64]) -> (f64, f64, f64) {
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for row in block.chunks_exact(2) {
        a += row[0] * row[0];
        b += row[0] * row[1];
        c += row[1] * row[1];
    }
    (a, b, c)
}

/// Unit eigenvector of `[[a, b], [b, c]]` for its larger eigenvalue.
#[inline]
fn top_eigenvector(a: f64, b: f64, c: f64) -> (f64, f64) {
    if b == 0.0 {
        return if a >= c { (1.0, 0.0) } else { (0.0, 1.0) };
    }
    let half = 0.5 * (a - c);
    let root = half.hypot(b);
    // Pick the candidate free of cancellation.
    let (x, y) = if a >= c {
        (half + root, b)
    } else {
        (b, root - half)
    };
    let n = x.hypot(y);
    (x / n, y / n)
}

/// Projects one block onto `{σ₊ ≤ 1}` in place. Blocks already inside the ball
/// are left bit-for-bit unchanged.
#[inline]
pub fn project_block(block: &mut [f64]) {
    let sp = singular_pair(block);
    if sp.sigma_plus <= 1.0 {
        return;
    }
    let (a, b, c) = gram(block);
    let (vx, vy) = top_eigenvector(a, b, c);
    let eps = RANK_EPS * sp.sigma_plus.max(1.0);
    // Pseudo-inverse convention: sub-threshold directions pass through.
    let scale = |s: f64| if s > eps { s.min(1.0) / s } else { 1.0 };
    let s_plus = scale(sp.sigma_plus);
    let s_minus = scale(sp.sigma_minus);
    // M = V diag(s+, s-) Vᵀ = s- I + (s+ - s-) v vᵀ
    let d = s_plus - s_minus;
    let m00 = s_minus + d * vx * vx;
    let m01 = d * vx * vy;
    let m11 = s_minus + d * vy * vy;
    for row in block.chunks_exact_mut(2) {
        let (p, q) = (row[0], row[1]);
        row[0] = p * m00 + q * m01;
        row[1] = p * m01 + q * m11;
    }
}

/// Projection onto the ℓ∞-S∞ unit ball, block by block, in place.
pub fn project_binf_sinf_in_place(phi: &mut PatchJacobianField) {
    let b = phi.block_len();
    phi.data_mut().par_chunks_mut(b).for_each(project_block);
}

pub fn project_binf_sinf(phi: &PatchJacobianField) -> PatchJacobianField {
    let mut out = phi.clone();
    project_binf_sinf_in_place(&mut out);
    out
}

/// `Σ_i ‖X(i)‖_{S1}` with a fixed sequential summation order.
pub fn nuclear_norm_sum(field: &PatchJacobianField) -> f64 {
    let per_pixel: Vec<f64> = field
        .data()
        .par_chunks(field.block_len())
        .map(|blk| singular_pair(blk).nuclear())
        .collect();
    per_pixel.iter().sum()
}

/// Largest per-block spectral norm.
pub fn max_spectral_norm(field: &PatchJacobianField) -> f64 {
    field
        .data()
        .chunks(field.block_len())
        .map(|blk| singular_pair(blk).spectral())
        .fold(0.0, f64::max)
}

/// The weighted structure-tensor regularizer `Σ_i ‖(Ĵ_K u)(i)‖_{S_p}`.
/// Only `p = 1` is supported.
pub fn wstv_value(u: &Image, kernel: &ConvKernel, weights: &WeightField, p: f64) -> Result<f64> {
    if p != 1.0 {
        return Err(Error::UnsupportedOrder(p));
    }
    let op = JacobianOperator::for_image(u, kernel, weights)?;
    Ok(nuclear_norm_sum(&op.apply(u)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_row() {
        let sp = singular_pair(&[3.0, 4.0]);
        assert_eq!(sp.sigma_plus, 5.0);
        assert_eq!(sp.sigma_minus, 0.0);
    }

    #[test]
    fn orthogonal_columns() {
        // Columns (1, 0, 0) and (0, 2, 0).
        let sp = singular_pair(&[1.0, 0.0, 0.0, 2.0, 0.0, 0.0]);
        assert!((sp.sigma_plus - 2.0).abs() < 1e-15);
        assert!((sp.sigma_minus - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_block() {
        let sp = singular_pair(&[0.0; 6]);
        assert_eq!((sp.sigma_plus, sp.sigma_minus), (0.0, 0.0));
        let mut z = [0.0; 6];
        project_block(&mut z);
        assert_eq!(z, [0.0; 6]);
    }

    #[test]
    fn first_column_zero() {
        let sp = singular_pair(&[0.0, 3.0, 0.0, 4.0]);
        assert_eq!((sp.sigma_plus, sp.sigma_minus), (5.0, 0.0));
    }

    #[test]
    fn feasible_block_unchanged() {
        // diag(0.5, 0.2) padded with a zero row.
        let mut blk = [0.5, 0.0, 0.0, 0.2, 0.0, 0.0];
        let orig = blk;
        project_block(&mut blk);
        assert_eq!(blk, orig);
    }

    #[test]
    fn rank_one_row_rescaled() {
        let mut blk = [3.0, 4.0];
        project_block(&mut blk);
        assert!((blk[0] - 0.6).abs() < 1e-15 && (blk[1] - 0.8).abs() < 1e-15);
        let sp = singular_pair(&blk);
        assert!((sp.sigma_plus - 1.0).abs() < 1e-15);
        assert_eq!(sp.sigma_minus, 0.0);
    }

    #[test]
    fn unsupported_order() {
        let u = Image::zeros(3, 3, 1);
        let r = wstv_value(&u, &ConvKernel::delta(), &WeightField::ones(3, 3), 2.0);
        assert!(matches!(r, Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn single_gradient_contributes_its_norm() {
        // u has one nonzero forward difference pair (3, 4) at the origin.
        let mut u = Image::zeros(3, 3, 1);
        u.set(0, 1, 0, 3.0);
        u.set(1, 0, 0, 4.0);
        let j = crate::jacobian::jacobian_apply(&u, &ConvKernel::delta(), &WeightField::ones(3, 3)).unwrap();
        assert_eq!(singular_pair(j.block(0)).nuclear(), 5.0);
    }

    #[test]
    fn constant_image_has_zero_regularizer() {
        let k = crate::jacobian::make_gaussian_kernel(1, 0.5).unwrap();
        let v = wstv_value(&Image::filled(5, 5, 3, 0.6), &k, &WeightField::ones(5, 5), 1.0).unwrap();
        assert_eq!(v, 0.0);
    }
}
