mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use wstv::{
    divergence, forward_gradient, jacobian_adjoint, jacobian_apply, make_gaussian_kernel,
    wstv_value, ConvKernel, GradientField, Image, JacobianOperator, WeightField,
};

fn image_strategy(max_channels: usize) -> impl Strategy<Value = Image> {
    (1usize..12, 1usize..12, 1..=max_channels).prop_flat_map(|(h, w, m)| {
        prop::collection::vec(-1.0f64..1.0, h * w * m)
            .prop_map(move |d| Image::from_vec(h, w, m, d).unwrap())
    })
}

proptest! {
    #[test]
    fn gradient_divergence_adjoint(u in image_strategy(3), seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = GradientField::from_vec(
            u.height(), u.width(), u.channels(),
            (0..2 * u.len()).map(|_| r.random_range(-1.0..1.0)).collect(),
        );
        let lhs = forward_gradient(&u).dot(&g);
        let rhs = -u.dot(&divergence(&g));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + u.norm() * g.norm()));
    }

    #[test]
    fn jacobian_adjoint_identity(
        h in 2usize..14, w in 2usize..14, m in 1usize..4, radius in 0usize..3, seed in any::<u64>()
    ) {
        let mut r = rng(seed);
        let kernel = if radius == 0 { ConvKernel::delta() } else { random_symmetric_kernel(&mut r, radius) };
        let weights = random_weights(&mut r, h, w);
        let op = JacobianOperator::new(h, w, m, kernel, weights).unwrap();
        let u = random_image(&mut r, h, w, m, -1.0, 1.0);
        let x = random_field(&mut r, &op, 1.0);
        let lhs = op.apply(&u).unwrap().dot(&x);
        let rhs = u.dot(&op.adjoint(&x).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * u.norm() * x.norm());
    }

    #[test]
    fn jacobian_is_linear(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let mut r = rng(seed);
        let kernel = make_gaussian_kernel(1, 0.5).unwrap();
        let weights = random_weights(&mut r, 9, 7);
        let u = random_image(&mut r, 9, 7, 2, -1.0, 1.0);
        let v = random_image(&mut r, 9, 7, 2, -1.0, 1.0);
        let mut comb = u.clone();
        for (c, (p, q)) in comb.data_mut().iter_mut().zip(u.data().iter().zip(v.data())) {
            *c = a * p + b * q;
        }
        let ju = jacobian_apply(&u, &kernel, &weights).unwrap();
        let jv = jacobian_apply(&v, &kernel, &weights).unwrap();
        let jc = jacobian_apply(&comb, &kernel, &weights).unwrap();
        for ((c, p), q) in jc.data().iter().zip(ju.data()).zip(jv.data()) {
            prop_assert!((c - (a * p + b * q)).abs() <= 1e-12 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn tv_special_case_matches_isotropic_tv(u in image_strategy(1)) {
        let ones = WeightField::ones(u.height(), u.width());
        let v = wstv_value(&u, &ConvKernel::delta(), &ones, 1.0).unwrap();
        let oracle = isotropic_tv(&u);
        prop_assert!((v - oracle).abs() <= 1e-12 * oracle.max(1e-300));
    }
}

#[test]
fn free_adjoint_matches_operator() {
    let mut r = rng(3);
    let kernel = make_gaussian_kernel(2, 0.8).unwrap();
    let weights = random_weights(&mut r, 10, 6);
    let op = JacobianOperator::new(10, 6, 3, kernel.clone(), weights.clone()).unwrap();
    let x = random_field(&mut r, &op, 1.0);
    assert_eq!(jacobian_adjoint(&x, &kernel, &weights).unwrap(), op.adjoint(&x).unwrap());
}

#[test]
fn dense_adjoint_is_transpose() {
    let mut r = rng(17);
    let kernel = random_symmetric_kernel(&mut r, 1);
    let weights = random_weights(&mut r, 5, 4);
    let op = JacobianOperator::new(5, 4, 2, kernel, weights).unwrap();
    let a = dense_matrix(&op);
    let x = random_field(&mut r, &op, 1.0);
    let xv = nalgebra::DVector::from_column_slice(x.data());
    let expect = a.transpose() * xv;
    let got = op.adjoint(&x).unwrap();
    for (g, e) in got.data().iter().zip(expect.iter()) {
        assert!((g - e).abs() < 1e-13, "{g} vs {e}");
    }
}

#[test]
fn power_estimate_matches_dense_eigenvalue() {
    let mut r = rng(99);
    for radius in [0, 1, 2] {
        let kernel = if radius == 0 { ConvKernel::delta() } else { random_symmetric_kernel(&mut r, radius) };
        let weights = random_weights(&mut r, 6, 6);
        let op = JacobianOperator::new(6, 6, 1, kernel, weights).unwrap();
        let exact = largest_eigenvalue_of_gram(&dense_matrix(&op));
        let est = op.norm_sq_estimate(5000, 1);
        assert!(est <= exact * (1.0 + 1e-12), "estimate {est} above exact {exact}");
        assert!((exact - est) / exact <= 1e-6, "radius {radius}: {est} vs {exact}");
    }
}

#[test]
fn symmetric_kernel_keeps_gradient_bound() {
    // With symmetric K and weights in (0, 1], ‖Ĵ‖² stays within the bare gradient's 8.
    let mut r = rng(5);
    for radius in [1, 2] {
        let kernel = random_symmetric_kernel(&mut r, radius);
        let weights = random_weights(&mut r, 7, 7);
        let op = JacobianOperator::new(7, 7, 1, kernel, weights).unwrap();
        assert!(largest_eigenvalue_of_gram(&dense_matrix(&op)) <= 8.0 + 1e-9);
    }
}
