//! Apparatus models: conditional states, statistics and the POVMs they imply.

mod common;

use common::*;
use condprep::conditioning::{conditional_states, final_object_state, joint_distribution, outcome_probabilities};
use condprep::hilbert::{max_norm, min_eigenvalue, trace};
use condprep::models::{
    build_first_kind, build_lambda_model, build_second_kind, extract_povm, verify_nonideality,
    with_detector_efficiency, NonidealityCheck, NonidealityMatrix, Povm,
};
use condprep::objects::{trace_distance, DensityOperator, ObservableBasis};
use condprep::{ComplexMatrix, SpaceLayout};
use proptest::prelude::*;
use rand::Rng;

fn object(n: usize) -> SpaceLayout {
    SpaceLayout::single("object", n).unwrap()
}

#[test]
fn first_kind_leaves_eigenstates_and_reproduces_born_statistics() {
    let mut rng = rng(11);
    for n in 2..=4 {
        for _ in 0..10 {
            let a = random_basis(&mut rng, object(n));
            let b = random_basis(&mut rng, object(n));
            let rho = random_density(&mut rng, object(n));
            let model = build_first_kind(&a).unwrap();
            let states = conditional_states(&model, &rho).unwrap();
            let joint = joint_distribution(&model, &rho, &Povm::from_basis(&b)).unwrap();
            for m in 0..n {
                let s = states.state(m).unwrap();
                assert!(trace_distance(s.matrix(), &projector_onto(a.vector(m))) < 1e-10);
                let cond = joint.conditional(m).unwrap();
                for (k, p) in cond.iter().enumerate() {
                    let born = a.vector(m).dotc(b.vector(k)).norm_sqr();
                    assert!((p - born).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn second_kind_with_eigenvectors_matches_first_kind() {
    let mut rng = rng(12);
    for n in 2..=4 {
        let a = random_basis(&mut rng, object(n));
        let rho = random_density(&mut rng, object(n));
        let first = conditional_states(&build_first_kind(&a).unwrap(), &rho).unwrap();
        let second = conditional_states(&build_second_kind(&a, a.vectors()).unwrap(), &rho).unwrap();
        for (x, y) in first.outcomes.iter().zip(&second.outcomes) {
            assert!((x.probability - y.probability).abs() < 1e-12);
            assert!(x.state.as_ref().unwrap().trace_distance(y.state.as_ref().unwrap()) < 1e-10);
        }
    }
}

#[test]
fn second_kind_prepares_configured_states() {
    let mut rng = rng(13);
    for n in 2..=4 {
        let a = random_basis(&mut rng, object(n));
        let psi: Vec<_> = (0..n).map(|_| random_vector(&mut rng, n)).collect();
        let rho = random_density(&mut rng, object(n));
        let model = build_second_kind(&a, &psi).unwrap();
        let states = conditional_states(&model, &rho).unwrap();
        for (m, o) in states.outcomes.iter().enumerate() {
            assert!((o.probability - rho.fidelity_to(a.vector(m))).abs() < 1e-12);
            assert!(trace_distance(o.state.as_ref().unwrap().matrix(), &projector_onto(&psi[m])) < 1e-10);
        }
        // Orthogonal pointer states keep the statistics ideal even when the
        // final object states overlap.
        let lam = verify_nonideality(&model, &a).unwrap();
        assert!(lam.matrix().unwrap().max_abs_diff(&NonidealityMatrix::identity(n)) < 1e-10);
    }
}

#[test]
fn measuring_in_the_wrong_basis_is_detected() {
    let mut rng = rng(18);
    let a = random_basis(&mut rng, object(3));
    let other = random_basis(&mut rng, object(3));
    let model = build_first_kind(&a).unwrap();
    assert!(matches!(verify_nonideality(&model, &other).unwrap(), NonidealityCheck::OffDiagonal { .. }));
}

#[test]
fn selected_states_recombine_into_unselected_state() {
    let mut rng = rng(14);
    for n in 2..=4 {
        let a = random_basis(&mut rng, object(n));
        let rows = rng.random_range(1..=4);
        let lam = random_stochastic(&mut rng, rows, n);
        let model = build_lambda_model(&a, &lam).unwrap();
        let rho = random_density(&mut rng, object(n));
        let mixture = conditional_states(&model, &rho).unwrap().mixture().unwrap();
        let whole = final_object_state(&model, &rho).unwrap();
        assert!(max_norm(&(mixture - whole.matrix())) < 1e-12);
    }
}

#[test]
fn joint_distribution_factorizes_through_conditional_states() {
    let mut rng = rng(15);
    for n in 2..=4 {
        let a = random_basis(&mut rng, object(n));
        let b = random_basis(&mut rng, object(n));
        let lam = random_stochastic(&mut rng, n, n);
        let model = build_lambda_model(&a, &lam).unwrap();
        let rho = random_density(&mut rng, object(n));
        let f = Povm::from_basis(&b);
        let joint = joint_distribution(&model, &rho, &f).unwrap();
        let states = conditional_states(&model, &rho).unwrap();
        assert!((joint.total() - 1.0).abs() < 1e-12);
        for (m, o) in states.outcomes.iter().enumerate() {
            let s = o.state.as_ref().unwrap();
            for (k, e) in f.elements().iter().enumerate() {
                let predicted = o.probability * trace(&(s.matrix() * e)).re;
                assert!((joint.table[m][k] - predicted).abs() < 1e-12);
            }
        }
        // The test observable does not change the pointer statistics.
        let p = outcome_probabilities(&model, &rho).unwrap();
        for (x, y) in joint.pointer_marginal().iter().zip(&p) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn extracted_povm_is_complete_positive_and_predicts_outcomes() {
    let mut rng = rng(16);
    for _ in 0..20 {
        let n = rng.random_range(2..=4);
        let a = random_basis(&mut rng, object(n));
        let rows = rng.random_range(1..=5);
        let lam = random_stochastic(&mut rng, rows, n);
        let model = build_lambda_model(&a, &lam).unwrap().with_object_rotation(&random_unitary(&mut rng, n)).unwrap();
        let povm = extract_povm(&model).unwrap();
        assert!(povm.completeness_defect() < 1e-10);
        for e in povm.elements() {
            assert!(min_eigenvalue(e) > -1e-10);
        }
        let rho = random_density(&mut rng, object(n));
        for (x, y) in povm.probabilities(&rho).iter().zip(outcome_probabilities(&model, &rho).unwrap()) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn lambda_povm_is_diagonal_in_the_measured_basis() {
    let mut rng = rng(17);
    let a = random_basis(&mut rng, object(3));
    let lam = random_stochastic(&mut rng, 3, 3);
    let povm = extract_povm(&build_lambda_model(&a, &lam).unwrap()).unwrap();
    for (m, e) in povm.elements().iter().enumerate() {
        let mut expected = ComplexMatrix::zeros(3, 3);
        for k in 0..3 {
            expected += projector_onto(a.vector(k)) * num_complex::Complex64::from(lam.get(m, k));
        }
        assert!(max_norm(&(e - expected)) < 1e-12);
    }
}

#[test]
fn zero_probability_outcomes_have_no_state() {
    let a = ObservableBasis::computational(object(2));
    let rho = condprep::objects::PureState::basis(object(2), 0).unwrap().to_density();
    let states = conditional_states(&build_first_kind(&a).unwrap(), &rho).unwrap();
    assert!(states.state(1).is_none());
    assert_eq!(states.outcomes[1].probability, 0.0);
}

#[test]
fn efficiency_rows_and_validation() {
    let lam = NonidealityMatrix::symmetric_noise(3, 0.2).unwrap();
    let eff = with_detector_efficiency(&lam, 0.7).unwrap();
    assert_eq!(eff.pointer_outcomes(), 4);
    for k in 0..3 {
        assert!((eff.get(3, k) - 0.3).abs() < 1e-15);
        assert!((eff.get(k, k) - 0.7 * 0.8).abs() < 1e-15);
    }
    assert!(with_detector_efficiency(&lam, 1.2).is_err());
    assert!(with_detector_efficiency(&lam, -0.1).is_err());
    assert!(NonidealityMatrix::new(vec![vec![0.5, 0.5], vec![0.4, 0.5]]).is_err());
    assert!(NonidealityMatrix::new(vec![vec![1.5, 0.0], vec![-0.5, 1.0]]).is_err());
}

#[test]
fn invalid_states_are_rejected() {
    let layout = object(2);
    let not_psd = ComplexMatrix::from_diagonal(&condprep::ComplexVector::from_vec(vec![1.5.into(), (-0.5).into()]));
    assert!(DensityOperator::new(layout.clone(), not_psd).is_err());
    let wrong_trace = ComplexMatrix::identity(2, 2);
    assert!(DensityOperator::new(layout, wrong_trace).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lambda_round_trips_through_the_apparatus(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let mut rng = common::rng(seed);
        let a = random_basis(&mut rng, object(cols));
        let lam = random_stochastic(&mut rng, rows, cols);
        let model = build_lambda_model(&a, &lam).unwrap();
        match verify_nonideality(&model, &a).unwrap() {
            NonidealityCheck::Nonideal(found) => prop_assert!(found.max_abs_diff(&lam) < 1e-10),
            other => prop_assert!(false, "unexpected {other}"),
        }
    }
}
