//! Independent reference implementations and random instance generators.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wstv::{ConvKernel, Image, JacobianOperator, PatchJacobianField, WeightField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut impl Rng, h: usize, w: usize, m: usize, lo: f64, hi: f64) -> Image {
    let data = (0..h * w * m).map(|_| rng.random_range(lo..hi)).collect();
    Image::from_vec(h, w, m, data).unwrap()
}

/// Weights in `(0, 1]`.
pub fn random_weights(rng: &mut impl Rng, h: usize, w: usize) -> WeightField {
    let mut draw = || (0..h * w).map(|_| rng.random_range(0.05..=1.0)).collect::<Vec<f64>>();
    let (w1, w2) = (draw(), draw());
    WeightField::new(h, w, w1, w2).unwrap()
}

/// Nonnegative, normalized kernel with `K[g] = K[-g]`.
pub fn random_symmetric_kernel(rng: &mut impl Rng, radius: usize) -> ConvKernel {
    let side = 2 * radius + 1;
    let n = side * side;
    let mut k = vec![0.0; n];
    for l in 0..=n / 2 {
        let v: f64 = rng.random_range(0.0..1.0);
        k[l] = v;
        k[n - 1 - l] = v;
    }
    let s: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= s);
    ConvKernel::from_weights(radius, k).unwrap()
}

pub fn random_field(rng: &mut impl Rng, op: &JacobianOperator, scale: f64) -> PatchJacobianField {
    let mut x = PatchJacobianField::zeros_like(op);
    x.data_mut().iter_mut().for_each(|v| *v = scale * rng.random_range(-1.0..1.0));
    x
}

/// Dense matrix of the operator, one column per unit input.
pub fn dense_matrix(op: &JacobianOperator) -> DMatrix<f64> {
    let (h, w, m) = (op.height(), op.width(), op.channels());
    let n = h * w * m;
    let mut e = Image::zeros(h, w, m);
    let rows = PatchJacobianField::zeros_like(op).data().len();
    let mut a = DMatrix::zeros(rows, n);
    for j in 0..n {
        e.data_mut()[j] = 1.0;
        let col = op.apply(&e).unwrap();
        for (i, v) in col.data().iter().enumerate() {
            a[(i, j)] = *v;
        }
        e.data_mut()[j] = 0.0;
    }
    a
}

pub fn largest_eigenvalue_of_gram(a: &DMatrix<f64>) -> f64 {
    let g = a.transpose() * a;
    SymmetricEigen::new(g).eigenvalues.iter().copied().fold(f64::MIN, f64::max)
}

pub fn block_matrix(block: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(block.len() / 2, 2, block)
}

/// Full SVD `B = (Q U) Σ Vᵀ` from a thin QR and an SVD of the 2×2 factor.
/// The direct nalgebra SVD of tall, numerically rank-one matrices can return
/// factors that do not recompose the input, so it is not used on `B` itself.
pub fn reference_svd(block: &[f64]) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let b = block_matrix(block);
    if b.nrows() < 2 {
        let svd = b.clone().svd(true, true);
        return (svd.u.unwrap(), svd.singular_values.iter().copied().collect(), svd.v_t.unwrap());
    }
    let qr = b.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let svd = r.svd(true, true);
    let u = q * svd.u.unwrap();
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    let vt = svd.v_t.unwrap();
    let back = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.clone())) * &vt;
    assert!((back - &b).norm() <= 1e-12 * (1.0 + b.norm()), "reference SVD failed to recompose");
    (u, s, vt)
}

/// Singular values from the reference SVD, descending.
pub fn svd_singular_values(block: &[f64]) -> (f64, f64) {
    let (_, s, _) = reference_svd(block);
    let (a, b) = (s[0], if s.len() > 1 { s[1] } else { 0.0 });
    (a.max(b), a.min(b))
}

/// Full SVD, clamp singular values at 1, reassemble.
pub fn svd_project(block: &[f64]) -> Vec<f64> {
    let (u, s, vt) = reference_svd(block);
    let clamped = nalgebra::DVector::from_vec(s.iter().map(|v| v.min(1.0)).collect());
    let p = u * DMatrix::from_diagonal(&clamped) * vt;
    let mut out = Vec::with_capacity(block.len());
    for i in 0..p.nrows() {
        out.push(p[(i, 0)]);
        out.push(p[(i, 1)]);
    }
    out
}

/// Nuclear norm via the eigenvalues of the 2×2 Gram matrix.
pub fn gram_nuclear(block: &[f64]) -> f64 {
    let m = block_matrix(block);
    let g = m.transpose() * &m;
    SymmetricEigen::new(g).eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum()
}

/// Isotropic TV with forward differences, zero past the last row and column.
pub fn isotropic_tv(u: &Image) -> f64 {
    let (h, w) = (u.height(), u.width());
    let mut total = 0.0;
    for c in 0..u.channels() {
        for y in 0..h {
            for x in 0..w {
                let v = u.get(y, x, c);
                let dx = if x + 1 < w { u.get(y, x + 1, c) - v } else { 0.0 };
                let dy = if y + 1 < h { u.get(y + 1, x, c) - v } else { 0.0 };
                total += (dx * dx + dy * dy).sqrt();
            }
        }
    }
    total
}

pub fn psnr_oracle(a: &Image, b: &Image) -> f64 {
    let n = a.len() as f64;
    let mse: f64 = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / n;
    -10.0 * mse.log10()
}

/// SSIM computed window by window with a 2-D Gaussian and centered moments.
pub fn ssim_literal(a: &Image, b: &Image) -> f64 {
    const WIN: usize = 11;
    let sigma: f64 = 1.5;
    let mut kernel = [[0.0; WIN]; WIN];
    let mut total = 0.0;
    for (i, row) in kernel.iter_mut().enumerate() {
        for (j, k) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
            *k = (-(di * di + dj * dj) / (2.0 * sigma * sigma)).exp();
            total += *k;
        }
    }
    let c1 = (0.01f64 * 1.0).powi(2);
    let c2 = (0.03f64 * 1.0).powi(2);
    let (h, w) = (a.height(), a.width());
    let mut per_channel = 0.0;
    for c in 0..a.channels() {
        let mut acc = 0.0;
        let mut count = 0usize;
        for y0 in 0..=h - WIN {
            for x0 in 0..=w - WIN {
                let (mut mx, mut my) = (0.0, 0.0);
                for i in 0..WIN {
                    for j in 0..WIN {
                        let k = kernel[i][j] / total;
                        mx += k * a.get(y0 + i, x0 + j, c);
                        my += k * b.get(y0 + i, x0 + j, c);
                    }
                }
                let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
                for i in 0..WIN {
                    for j in 0..WIN {
                        let k = kernel[i][j] / total;
                        let (p, q) = (a.get(y0 + i, x0 + j, c) - mx, b.get(y0 + i, x0 + j, c) - my);
                        vx += k * p * p;
                        vy += k * q * q;
                        cxy += k * p * q;
                    }
                }
                acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2));
                count += 1;
            }
        }
        per_channel += acc / count as f64;
    }
    per_channel / a.channels() as f64
}
