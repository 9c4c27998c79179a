//! EPR pairs: a measurement on particle 1 conditionally prepares particle 2.
//!
//! For a nonideal measurement `λ` of the Schmidt observable of particle 1 the
//! prepared particle-2 state is diagonal in the Schmidt basis,
//!
//! ```text
//! ρ2_m = Σ_k λ_mk |c_k|² |b_k⟩⟨b_k| / Σ_k λ_mk |c_k|²,
//! ```
//!
//! which is the projection `|b_m⟩⟨b_m|` only when `λ` is the identity. The
//! module computes it both from this formula and by simulating the coupling.

use num_complex::Complex64;

use crate::conditioning::{two_particle_conditional, ConditioningResult, OutcomeEntry};
use crate::error::{Error, Result};
use crate::hilbert::{check_orthonormal, outer, tensor_vector, ComplexMatrix, ComplexVector, SpaceLayout};
use crate::models::{build_lambda_model, with_detector_efficiency, MeasurementModel, NonidealityMatrix};
use crate::objects::{DensityOperator, ObservableBasis, PureState};
use crate::tol;

pub const PARTICLE_1: &str = "particle1";
pub const PARTICLE_2: &str = "particle2";

/// Fidelity convention used in reports.
pub const FIDELITY_CONVENTION: &str = "squared overlap F = <a2_m|rho|a2_m>";
/// How the efficiency is modelled when a no-click outcome is present.
pub const EFFICIENCY_MODEL: &str =
    "no-click pointer row with entries 1 - eta in every column; click rows scaled by eta";

/// `Σ_m c_m |a1_m⟩|a2_m⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EprState {
    coefficients: Vec<Complex64>,
    basis1: ObservableBasis,
    basis2: ObservableBasis,
    state: PureState,
}

impl EprState {
    pub fn new(coefficients: Vec<Complex64>, basis1: ObservableBasis, basis2: ObservableBasis) -> Result<Self> {
        let n = coefficients.len();
        if basis1.vectors().len() != n || basis2.vectors().len() != n {
            return Err(Error::layout(format!(
                "{n} Schmidt coefficients for bases of dimension {} and {}",
                basis1.vectors().len(),
                basis2.vectors().len()
            )));
        }
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::validation(format!("Schmidt coefficients have norm {norm}, expected 1")));
        }
        check_orthonormal(basis1.vectors(), "particle-1 basis")?;
        check_orthonormal(basis2.vectors(), "particle-2 basis")?;
        let layout = SpaceLayout::new([(PARTICLE_1, n), (PARTICLE_2, n)])?;
        let mut amplitudes = ComplexVector::zeros(n * n);
        for ((c, a), b) in coefficients.iter().zip(basis1.vectors()).zip(basis2.vectors()) {
            amplitudes += tensor_vector(a, b) * *c;
        }
        let state = PureState::new(layout, amplitudes)?;
        Ok(EprState { coefficients, basis1, basis2, state })
    }

    /// Schmidt form in the computational bases of both particles.
    pub fn computational(coefficients: Vec<Complex64>) -> Result<Self> {
        let n = coefficients.len();
        if n == 0 {
            return Err(Error::validation("at least one Schmidt coefficient is required"));
        }
        let b1 = ObservableBasis::computational(SpaceLayout::single(PARTICLE_1, n)?);
        let b2 = ObservableBasis::computational(SpaceLayout::single(PARTICLE_2, n)?);
        Self::new(coefficients, b1, b2)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let s = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        Self::computational(vec![s, s]).expect("Bell state is valid")
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `|c_m|²`.
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn basis1(&self) -> &ObservableBasis {
        &self.basis1
    }

    pub fn basis2(&self) -> &ObservableBasis {
        &self.basis2
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn density(&self) -> DensityOperator {
        self.state.to_density()
    }

    /// `Tr_1 |ψ⟩⟨ψ|`.
    pub fn reduced_particle2(&self) -> Result<DensityOperator> {
        self.density().reduce(&[PARTICLE_2])
    }

    fn particle2_layout(&self) -> SpaceLayout {
        self.state.layout().sublayout(&[PARTICLE_2]).expect("particle 2 is in the layout")
    }

    /// `Σ_k w_k |a2_k⟩⟨a2_k|` for non-negative weights summing to one.
    fn particle2_diagonal(&self, weights: &[f64]) -> Result<DensityOperator> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (w, b) in weights.iter().zip(self.basis2.vectors()) {
            m += outer(b, b).scale(*w);
        }
        DensityOperator::from_unnormalized(self.particle2_layout(), &m)
    }
}

/// Closed-form outcome `m`: `p(m) = Σ_k λ_mk |c_k|²` and, when positive, the
/// diagonal weights `λ_mk |c_k|² / p(m)` of the prepared particle-2 state.
pub fn closed_form_weights(weights: &[f64], lam: &NonidealityMatrix) -> Result<Vec<(f64, Option<Vec<f64>>)>> {
    if lam.object_outcomes() != weights.len() {
        return Err(Error::layout(format!(
            "λ has {} columns for {} Schmidt coefficients",
            lam.object_outcomes(),
            weights.len()
        )));
    }
    Ok(lam
        .rows()
        .iter()
        .map(|row| {
            let joint: Vec<f64> = row.iter().zip(weights).map(|(l, w)| l * w).collect();
            let p: f64 = joint.iter().sum();
            let diag = (p > tol::CONDITIONING).then(|| joint.iter().map(|x| x / p).collect());
            (p, diag)
        })
        .collect())
}

/// Particle-2 states prepared by a nonideal measurement `λ` on particle 1,
/// from the closed form.
pub fn particle2_conditional_closed_form(epr: &EprState, lam: &NonidealityMatrix) -> Result<ConditioningResult> {
    let outcomes = closed_form_weights(&epr.weights(), lam)?
        .into_iter()
        .enumerate()
        .map(|(m, (probability, diag))| {
            let state = diag.map(|w| epr.particle2_diagonal(&w)).transpose()?;
            Ok(OutcomeEntry { outcome: m, probability, state })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditioningResult { outcomes })
}

/// Particle-2 states prepared by `model` acting on particle 1, from the full
/// simulation: couple, select on the pointer, trace out particle 1.
pub fn particle2_conditional_simulated(epr: &EprState, model: &MeasurementModel) -> Result<ConditioningResult> {
    if model.object_layout().total_dim() != epr.dim() {
        return Err(Error::layout(format!(
            "model measures a {}-dimensional object, particle 1 has dimension {}",
            model.object_layout().total_dim(),
            epr.dim()
        )));
    }
    two_particle_conditional(model, &epr.density())?.reduce(&[PARTICLE_2])
}

/// Per-outcome comparison of the two routes.
#[derive(Debug, Clone, PartialEq)]
pub struct EprOutcome {
    pub outcome: usize,
    /// Whether this is the appended no-click outcome.
    pub no_click: bool,
    pub probability: f64,
    pub probability_closed_form: f64,
    pub simulated: Option<DensityOperator>,
    pub closed_form: Option<DensityOperator>,
    /// `⟨a2_m|ρ|a2_m⟩` of the simulated state; click outcomes only.
    pub fidelity: Option<f64>,
    /// Trace distance between the simulated and closed-form states.
    pub trace_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EprReport {
    /// `λ` actually used, including any no-click row.
    pub lambda: NonidealityMatrix,
    pub efficiency: Option<f64>,
    pub outcomes: Vec<EprOutcome>,
}

impl EprReport {
    pub fn max_trace_distance(&self) -> f64 {
        self.outcomes.iter().filter_map(|o| o.trace_distance).fold(0.0, f64::max)
    }

    pub fn click_outcomes(&self) -> impl Iterator<Item = &EprOutcome> {
        self.outcomes.iter().filter(|o| !o.no_click)
    }

    pub fn no_click(&self) -> Option<&EprOutcome> {
        self.outcomes.iter().find(|o| o.no_click)
    }
}

/// Run both routes for a nonideal measurement `lam` on particle 1, with an
/// optional detector efficiency adding a no-click outcome.
pub fn epr_report(epr: &EprState, lam: &NonidealityMatrix, eta: Option<f64>) -> Result<EprReport> {
    let effective = match eta {
        Some(eta) => with_detector_efficiency(lam, eta)?,
        None => lam.clone(),
    };
    let model = build_lambda_model(epr.basis1(), &effective)?;
    compare_routes(epr, &model, &effective, eta)
}

/// Compare the simulated states of an arbitrary particle-1 `model` against the
/// closed form for `lam`. With `eta` set, the last row of `lam` is the
/// no-click outcome.
pub fn compare_routes(
    epr: &EprState,
    model: &MeasurementModel,
    lam: &NonidealityMatrix,
    eta: Option<f64>,
) -> Result<EprReport> {
    if model.outcome_count() != lam.pointer_outcomes() {
        return Err(Error::layout(format!(
            "model has {} pointer outcomes, λ has {} rows",
            model.outcome_count(),
            lam.pointer_outcomes()
        )));
    }
    let simulated = particle2_conditional_simulated(epr, model)?;
    let closed = particle2_conditional_closed_form(epr, lam)?;
    let clicks = if eta.is_some() { lam.pointer_outcomes() - 1 } else { lam.pointer_outcomes() };
    let outcomes = simulated
        .outcomes
        .into_iter()
        .zip(closed.outcomes)
        .map(|(sim, cf)| {
            let no_click = sim.outcome >= clicks;
            let fidelity = match (&sim.state, no_click) {
                (Some(s), false) => epr.basis2().vectors().get(sim.outcome).map(|target| s.fidelity_to(target)),
                _ => None,
            };
            let trace_distance = match (&sim.state, &cf.state) {
                (Some(a), Some(b)) => Some(a.trace_distance(b)),
                _ => None,
            };
            EprOutcome {
                outcome: sim.outcome,
                no_click,
                probability: sim.probability,
                probability_closed_form: cf.probability,
                simulated: sim.state,
                closed_form: cf.state,
                fidelity,
                trace_distance,
            }
        })
        .collect();
    Ok(EprReport { lambda: lam.clone(), efficiency: eta, outcomes })
}
