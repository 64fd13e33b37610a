//! Numerical sanity checks of the patch Jacobian: the adjoint identity and the
//! operator-norm bound that fixes the solver's step size.
//!
//! `cargo run --release --example operator_checks`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wstv::solver::OPERATOR_NORM_SQ_BOUND;
use wstv::{
    compute_weights, fixtures, make_gaussian_kernel, ConvKernel, Image, JacobianOperator,
    PatchJacobianField, SmoothSpec, WeightField,
};

fn main() -> wstv::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = fixtures::house_like(48);
    let weights = compute_weights(&f, &SmoothSpec::default())?;
    let kernel = make_gaussian_kernel(1, 0.5)?;
    let op = JacobianOperator::for_image(&f, &kernel, &weights)?;

    let mut u = Image::zeros(48, 48, 1);
    u.data_mut().iter_mut().for_each(|v| *v = rng.random::<f64>() - 0.5);
    let mut x = PatchJacobianField::zeros_like(&op);
    x.data_mut().iter_mut().for_each(|v| *v = rng.random::<f64>() - 0.5);
    let lhs = op.apply(&u)?.dot(&x);
    let rhs = u.dot(&op.adjoint(&x)?);
    println!("<J u, X> = {lhs:.12}");
    println!("<u, J*X> = {rhs:.12}");
    println!("relative mismatch {:.2e}", (lhs - rhs).abs() / (u.norm() * x.norm()));

    let est = op.norm_sq_estimate(200, 1);
    println!("||J||^2 estimate (WSTV weights) {est:.6}, bound {OPERATOR_NORM_SQ_BOUND:.6}");
    let tv = JacobianOperator::new(48, 48, 1, ConvKernel::delta(), WeightField::ones(48, 48))?;
    println!("||grad||^2 estimate {:.6}, bound 8", tv.norm_sq_estimate(200, 1));
    Ok(())
}
