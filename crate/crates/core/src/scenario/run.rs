use crate::conditioning::{conditional_states, joint_distribution, ConditioningResult};
use crate::epr::{self, EprState, PARTICLE_1, PARTICLE_2};
use crate::hilbert::{outer, ComplexMatrix, SpaceLayout};
use crate::models::{
    build_first_kind, build_lambda_model, build_second_kind, with_detector_efficiency, MeasurementModel,
    NonidealityMatrix, Povm,
};
use crate::objects::{DensityOperator, ObservableBasis, PureState};
use crate::oracle;
use crate::tol;

use super::config::{from_matrix, to_matrix, to_vector, ModelConfig, ScenarioConfig, ScenarioKind, StateConfig};
use super::report::{OutcomeReport, ReportBody, ReportHeader, RunReport, Verification, VerificationOutcome};
use super::ScenarioError;

const OBJECT: &str = "object";

fn engine(context: impl Into<String>) -> impl FnOnce(crate::Error) -> ScenarioError {
    let context = context.into();
    move |source| ScenarioError::Engine { context, source }
}

fn basis_on(label: &str, vectors: &[Vec<[f64; 2]>]) -> Result<ObservableBasis, ScenarioError> {
    let layout = SpaceLayout::single(label, vectors.len()).map_err(engine(format!("{label} layout")))?;
    ObservableBasis::from_vectors(layout, vectors.iter().map(|v| to_vector(v)).collect())
        .map_err(engine(format!("{label} basis")))
}

/// The model to simulate, plus the `λ` its closed form uses (identity for
/// first- and second-kind couplings, whose particle-2 statistics are ideal).
fn build_model(
    config: &ScenarioConfig,
    basis: &ObservableBasis,
) -> Result<(MeasurementModel, NonidealityMatrix, Option<f64>), ScenarioError> {
    let ideal = NonidealityMatrix::identity(config.dim);
    match &config.model {
        ModelConfig::FirstKind => Ok((build_first_kind(basis).map_err(engine("first-kind model"))?, ideal, None)),
        ModelConfig::SecondKind { psi } => {
            let psi: Vec<_> = psi.iter().map(|v| to_vector(v)).collect();
            Ok((build_second_kind(basis, &psi).map_err(engine("second-kind model"))?, ideal, None))
        }
        ModelConfig::Lambda { lambda, eta } => {
            let effective = match eta {
                Some(eta) => with_detector_efficiency(lambda, *eta).map_err(engine("detector efficiency"))?,
                None => lambda.clone(),
            };
            let model = build_lambda_model(basis, &effective).map_err(engine("λ model"))?;
            Ok((model, effective, *eta))
        }
    }
}

fn outcome_label(m: usize, no_click: bool) -> String {
    if no_click {
        "no-click".to_owned()
    } else {
        m.to_string()
    }
}

/// Probabilities at or below the conditioning threshold are reported as 0.
fn reported_probability(p: f64) -> f64 {
    if p <= tol::CONDITIONING {
        0.0
    } else {
        p
    }
}

/// Run a validated scenario.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport, ScenarioError> {
    let body = match config.kind {
        ScenarioKind::Single => run_single(config)?,
        ScenarioKind::Epr => run_epr(config)?,
    };
    Ok(RunReport { header: ReportHeader::current(), body })
}

fn run_single(config: &ScenarioConfig) -> Result<ReportBody, ScenarioError> {
    let basis = basis_on(OBJECT, &config.basis)?;
    let layout = basis.layout().clone();
    let rho = match &config.state {
        StateConfig::Coefficients(c) => {
            PureState::normalized(layout.clone(), to_vector(c)).map_err(engine("initial state"))?.to_density()
        }
        StateConfig::Density(m) => {
            DensityOperator::new(layout.clone(), to_matrix(m)).map_err(engine("initial state"))?
        }
    };
    let (model, lam, eta) = build_model(config, &basis)?;
    let direct = conditional_states(&model, &rho).map_err(engine("conditioning"))?;
    let predicted = predicted_object_states(config, &basis, &lam, &rho)?;
    let clicks = if eta.is_some() { lam.pointer_outcomes() - 1 } else { lam.pointer_outcomes() };

    let outcomes = direct
        .outcomes
        .iter()
        .zip(&predicted.outcomes)
        .map(|(d, p)| {
            let no_click = d.outcome >= clicks;
            let fidelity = match (&d.state, no_click) {
                (Some(s), false) => Some(s.fidelity_to(basis.vector(d.outcome))),
                _ => None,
            };
            let distance = match (&d.state, &p.state) {
                (Some(a), Some(b)) => Some(a.trace_distance(b)),
                _ => None,
            };
            OutcomeReport {
                outcome: d.outcome,
                label: outcome_label(d.outcome, no_click),
                probability: reported_probability(d.probability),
                probability_closed_form: reported_probability(p.probability),
                absent: d.state.is_none(),
                state: d.state.as_ref().map(|s| from_matrix(s.matrix())),
                closed_form_state: p.state.as_ref().map(|s| from_matrix(s.matrix())),
                fidelity_to_target: fidelity,
                trace_distance_routes: distance,
            }
        })
        .collect();

    let joint = match &config.test_observable {
        Some(vectors) => {
            let test = basis_on(OBJECT, vectors)?;
            let f = Povm::from_basis(&test);
            Some(joint_distribution(&model, &rho, &f).map_err(engine("joint distribution"))?.table)
        }
        None => None,
    };

    let verification = if config.verify {
        let per = direct
            .outcomes
            .iter()
            .zip(&predicted.outcomes)
            .filter_map(|(d, p)| Some((d.outcome, d.state.as_ref()?, p.state.as_ref()?)))
            .map(|(m, d, p)| {
                let tomo = oracle::tomographic_conditional(&model, &rho, m)
                    .map_err(engine(format!("tomography of outcome {m}")))?;
                Ok(VerificationOutcome::new(m, d, &tomo, p))
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        Some(Verification::new(config.tolerance, per))
    } else {
        None
    };

    Ok(ReportBody {
        config: config.clone(),
        prepared_system: OBJECT.to_owned(),
        lambda: lambda_rows(config, &lam),
        outcomes,
        total_click_probability: total_clicks(&direct, clicks),
        joint_distribution: joint,
        verification,
    })
}

fn run_epr(config: &ScenarioConfig) -> Result<ReportBody, ScenarioError> {
    let StateConfig::Coefficients(c) = &config.state else {
        return Err(ScenarioError::Validation {
            field: "state".to_owned(),
            message: "EPR scenarios need Schmidt coefficients".to_owned(),
        });
    };
    let basis1 = basis_on(PARTICLE_1, &config.basis)?;
    let basis2 = basis_on(PARTICLE_2, config.basis2.as_deref().unwrap_or(&config.basis))?;
    let coefficients = to_vector(c).iter().copied().collect();
    let pair = EprState::new(coefficients, basis1.clone(), basis2).map_err(engine("EPR state"))?;
    let (model, lam, eta) = build_model(config, &basis1)?;
    let report = epr::compare_routes(&pair, &model, &lam, eta).map_err(engine("EPR routes"))?;

    let outcomes = report
        .outcomes
        .iter()
        .map(|o| OutcomeReport {
            outcome: o.outcome,
            label: outcome_label(o.outcome, o.no_click),
            probability: reported_probability(o.probability),
            probability_closed_form: reported_probability(o.probability_closed_form),
            absent: o.simulated.is_none(),
            state: o.simulated.as_ref().map(|s| from_matrix(s.matrix())),
            closed_form_state: o.closed_form.as_ref().map(|s| from_matrix(s.matrix())),
            fidelity_to_target: o.fidelity,
            trace_distance_routes: o.trace_distance,
        })
        .collect();

    let verification = if config.verify {
        let per = report
            .outcomes
            .iter()
            .filter_map(|o| Some((o.outcome, o.simulated.as_ref()?, o.closed_form.as_ref()?)))
            .map(|(m, d, p)| {
                let tomo = oracle::tomographic_particle2(&pair, &model, m)
                    .map_err(engine(format!("tomography of outcome {m}")))?;
                Ok(VerificationOutcome::new(m, d, &tomo, p))
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        Some(Verification::new(config.tolerance, per))
    } else {
        None
    };

    let clicks = if eta.is_some() { lam.pointer_outcomes() - 1 } else { lam.pointer_outcomes() };
    let total = report.outcomes.iter().take(clicks).map(|o| o.probability).sum();
    Ok(ReportBody {
        config: config.clone(),
        prepared_system: PARTICLE_2.to_owned(),
        lambda: lambda_rows(config, &lam),
        outcomes,
        total_click_probability: total,
        joint_distribution: None,
        verification,
    })
}

fn lambda_rows(config: &ScenarioConfig, lam: &NonidealityMatrix) -> Option<Vec<Vec<f64>>> {
    matches!(config.model, ModelConfig::Lambda { .. }).then(|| lam.rows().to_vec())
}

fn total_clicks(result: &ConditioningResult, clicks: usize) -> f64 {
    result.outcomes.iter().take(clicks).map(|o| o.probability).sum()
}

/// Prepared object states predicted without simulating the coupling:
/// `|ψ_m⟩⟨ψ_m|` for a second-kind model, otherwise the `λ`-weighted
/// dephased state `Σ_k λ_mk ⟨a_k|ρ|a_k⟩ |a_k⟩⟨a_k| / p(m)`.
fn predicted_object_states(
    config: &ScenarioConfig,
    basis: &ObservableBasis,
    lam: &NonidealityMatrix,
    rho: &DensityOperator,
) -> Result<ConditioningResult, ScenarioError> {
    use crate::conditioning::OutcomeEntry;
    let populations: Vec<f64> = basis.vectors().iter().map(|a| rho.fidelity_to(a)).collect();
    let layout = basis.layout().clone();
    let outcomes = match &config.model {
        ModelConfig::SecondKind { psi } => psi
            .iter()
            .enumerate()
            .map(|(m, v)| {
                let probability = populations[m];
                let state = (probability > tol::CONDITIONING)
                    .then(|| PureState::normalized(layout.clone(), to_vector(v)).map(|s| s.to_density()))
                    .transpose()
                    .map_err(engine("second-kind prediction"))?;
                Ok(OutcomeEntry { outcome: m, probability, state })
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?,
        _ => lam
            .rows()
            .iter()
            .enumerate()
            .map(|(m, row)| {
                let n = layout.total_dim();
                let mut x = ComplexMatrix::zeros(n, n);
                for ((l, w), a) in row.iter().zip(&populations).zip(basis.vectors()) {
                    x += outer(a, a).scale(l * w);
                }
                let probability: f64 = row.iter().zip(&populations).map(|(l, w)| l * w).sum();
                let state = (probability > tol::CONDITIONING)
                    .then(|| DensityOperator::from_unnormalized(layout.clone(), &x))
                    .transpose()
                    .map_err(engine("λ prediction"))?;
                Ok(OutcomeEntry { outcome: m, probability, state })
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?,
    };
    Ok(ConditioningResult { outcomes })
}
