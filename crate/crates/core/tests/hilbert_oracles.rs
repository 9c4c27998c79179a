//! Tensor-product machinery against direct index arithmetic.

mod common;

use common::*;
use condprep::hilbert::{
    apply_on_factors, embed, hermitian_exp, max_norm, partial_trace, tensor_product, trace, unitarity_defect,
};
use condprep::objects::DensityOperator;
use condprep::oracle::brute_trace;
use condprep::{SpaceLayout, UnitaryOperator};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

const LABELS: [&str; 4] = ["a", "b", "c", "d"];

fn random_layout(rng: &mut impl Rng, max_factors: usize, max_dim: usize) -> SpaceLayout {
    let n = rng.random_range(1..=max_factors);
    SpaceLayout::new((0..n).map(|k| (LABELS[k], rng.random_range(1..=max_dim)))).unwrap()
}

#[test]
fn kronecker_matches_elementwise_definition() {
    let mut rng = rng(1);
    for _ in 0..50 {
        let (p, q, r, s) =
            (rng.random_range(1..4), rng.random_range(1..4), rng.random_range(1..4), rng.random_range(1..4));
        let a = random_matrix(&mut rng, p, q);
        let b = random_matrix(&mut rng, r, s);
        let k = tensor_product(&a, &b);
        assert_eq!((k.nrows(), k.ncols()), (p * r, q * s));
        for i in 0..p {
            for j in 0..q {
                for x in 0..r {
                    for y in 0..s {
                        assert_eq!(k[(i * r + x, j * s + y)], a[(i, j)] * b[(x, y)]);
                    }
                }
            }
        }
    }
}

#[test]
fn partial_trace_matches_brute_force_on_random_inputs() {
    let mut rng = rng(2);
    for _ in 0..1000 {
        let layout = random_layout(&mut rng, 4, 3);
        let n = layout.total_dim();
        let x = random_matrix(&mut rng, n, n);
        let labels = layout.labels();
        let keep: Vec<&str> = labels.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        let traced: Vec<&str> = labels.iter().copied().filter(|l| !keep.contains(l)).collect();
        let fast = partial_trace(&x, &layout, &keep).unwrap();
        let slow = brute_trace(&x, &layout, &traced).unwrap();
        assert!(max_norm(&(fast - slow)) < 1e-12, "layout {layout}, keep {keep:?}");
    }
}

#[test]
fn partial_trace_of_product_returns_factor() {
    let mut rng = rng(3);
    let layout = SpaceLayout::new([("a", 2), ("b", 3), ("c", 2)]).unwrap();
    let a = random_matrix(&mut rng, 2, 2);
    let b = random_matrix(&mut rng, 3, 3);
    let c = random_matrix(&mut rng, 2, 2);
    let abc = tensor_product(&tensor_product(&a, &b), &c);
    // Kept factors come back in layout order whatever order they are named in.
    let got = partial_trace(&abc, &layout, &["c", "a"]).unwrap();
    let expected = tensor_product(&a, &c) * trace(&b);
    assert!(max_norm(&(got - expected)) < 1e-12);
}

#[test]
fn embed_respects_factor_order() {
    let mut rng = rng(4);
    let layout = SpaceLayout::new([("a", 2), ("b", 3), ("c", 2)]).unwrap();
    let a = random_matrix(&mut rng, 2, 2);
    let c = random_matrix(&mut rng, 2, 2);
    let id3 = condprep::ComplexMatrix::identity(3, 3);
    let direct = tensor_product(&tensor_product(&a, &id3), &c);
    let forward = embed(&tensor_product(&a, &c), &layout, &["a", "c"]).unwrap();
    let reversed = embed(&tensor_product(&c, &a), &layout, &["c", "a"]).unwrap();
    assert!(max_norm(&(&forward - &direct)) < 1e-13);
    assert!(max_norm(&(&reversed - &direct)) < 1e-13);
}

#[test]
fn embedded_operators_on_disjoint_factors_commute() {
    let mut rng = rng(5);
    for _ in 0..30 {
        let layout = SpaceLayout::new([("a", 2), ("b", 3), ("c", 2), ("d", 2)]).unwrap();
        let mut labels = layout.labels();
        labels.shuffle(&mut rng);
        let (left, right) = (&labels[..2], &labels[2..]);
        let dim = |ls: &[&str]| ls.iter().map(|l| layout.dim_of(l).unwrap()).product::<usize>();
        let x = embed(&random_matrix(&mut rng, dim(left), dim(left)), &layout, left).unwrap();
        let y = embed(&random_matrix(&mut rng, dim(right), dim(right)), &layout, right).unwrap();
        assert!(max_norm(&(&x * &y - &y * &x)) < 1e-12);
    }
}

#[test]
fn apply_on_factors_matches_embedded_matrix() {
    let mut rng = rng(6);
    for _ in 0..100 {
        let layout = random_layout(&mut rng, 4, 3);
        let mut labels = layout.labels();
        labels.shuffle(&mut rng);
        let k = rng.random_range(1..=labels.len());
        let acting = &labels[..k];
        let d: usize = acting.iter().map(|l| layout.dim_of(l).unwrap()).product();
        let op = random_matrix(&mut rng, d, d);
        let v = random_vector(&mut rng, layout.total_dim());
        let fast = apply_on_factors(&op, &layout, acting, &v).unwrap();
        let slow = embed(&op, &layout, acting).unwrap() * &v;
        assert!((fast - slow).norm() < 1e-12);
    }
}

#[test]
fn hermitian_exponential_is_unitary_up_to_dim_64() {
    let mut rng = rng(7);
    for n in [1, 2, 3, 5, 8, 16, 33, 64] {
        let h = random_hermitian(&mut rng, n) * Complex64::from(3.0);
        let layout = SpaceLayout::single("h", n).unwrap();
        let u = hermitian_exp(&h, &layout).unwrap();
        assert!(unitarity_defect(u.matrix()) < 1e-10, "dim {n}");
        // exp(−iH) exp(+iH) = I
        let back = hermitian_exp(&(-h), &layout).unwrap();
        let id = u.compose(&back).unwrap();
        assert!(max_norm(&(id.matrix() - UnitaryOperator::identity(layout).matrix())) < 1e-10);
    }
}

#[test]
fn non_finite_inputs_are_rejected() {
    let layout = SpaceLayout::single("q", 2).unwrap();
    let mut m = condprep::ComplexMatrix::identity(2, 2) * Complex64::from(0.5);
    m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
    assert!(DensityOperator::new(layout.clone(), m.clone()).is_err());
    assert!(hermitian_exp(&m, &layout).is_err());
    m[(0, 1)] = Complex64::new(f64::INFINITY, 0.0);
    assert!(UnitaryOperator::new(layout, m).is_err());
}

#[test]
fn non_unitary_and_non_hermitian_inputs_are_rejected() {
    let layout = SpaceLayout::single("q", 2).unwrap();
    let m = condprep::ComplexMatrix::identity(2, 2) * Complex64::from(1.1);
    assert!(UnitaryOperator::new(layout.clone(), m).is_err());
    let mut h = condprep::ComplexMatrix::zeros(2, 2);
    h[(0, 1)] = Complex64::from(1.0);
    assert!(hermitian_exp(&h, &layout).is_err());
}

proptest! {
    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), factors in 1usize..4, dim in 1usize..4) {
        let mut rng = common::rng(seed);
        let layout = SpaceLayout::new((0..factors).map(|k| (LABELS[k], dim))).unwrap();
        let n = layout.total_dim();
        let x = random_matrix(&mut rng, n, n);
        let keep = &layout.labels()[..factors / 2];
        let reduced = partial_trace(&x, &layout, keep).unwrap();
        prop_assert!((trace(&reduced) - trace(&x)).norm() < 1e-12);
    }

    #[test]
    fn reduced_density_is_a_state(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let layout = SpaceLayout::new([("a", 2), ("b", 3)]).unwrap();
        let rho = random_density(&mut rng, layout);
        let r = rho.reduce(&["b"]).unwrap();
        prop_assert!((r.trace() - 1.0).abs() < 1e-12);
        prop_assert!(r.purity() <= 1.0 + 1e-12);
    }
}
