//! Conditional preparation: final states, detection probabilities, joint
//! statistics and the states prepared by selecting on a pointer reading.
//!
//! The final state `ρ_f = U (ρ ⊗ ρ_a) U†` is carried as weighted pure
//! components `U(|v_k⟩ ⊗ |φ_j⟩)` built from the spectral decompositions of the
//! inputs. `Tr_a(ρ_f E_m)` is then `Σ w |χ⟩⟨χ|` over the contractions
//! `|χ⟩ = (I ⊗ ⟨θ_mi|)|Ψ⟩`, which never forms the joint density matrix.

use crate::error::{Error, Result};
use crate::hilbert::{self, apply_on_factors, contract, outer, ComplexMatrix, ComplexVector, SpaceLayout};
use crate::models::{MeasurementModel, Povm};
use crate::objects::DensityOperator;
use crate::tol;

/// One pointer outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeEntry {
    pub outcome: usize,
    pub probability: f64,
    /// Prepared state, absent when `probability ≤ ε_cond`.
    pub state: Option<DensityOperator>,
}

/// Outcome probabilities and conditionally prepared states.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningResult {
    pub outcomes: Vec<OutcomeEntry>,
}

impl ConditioningResult {
    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    /// `Σ_m p(m)`; below one when the pointer does not resolve the identity.
    pub fn total_click_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn state(&self, m: usize) -> Option<&DensityOperator> {
        self.outcomes.get(m).and_then(|o| o.state.as_ref())
    }

    /// `Σ_m p(m) ρ_fm` over present outcomes.
    pub fn mixture(&self) -> Option<ComplexMatrix> {
        let mut acc: Option<ComplexMatrix> = None;
        for o in &self.outcomes {
            if let Some(s) = &o.state {
                let term = s.matrix().scale(o.probability);
                acc = Some(match acc {
                    Some(a) => a + term,
                    None => term,
                });
            }
        }
        acc
    }

    /// Per-outcome reduction onto the factors in `keep`.
    pub fn reduce(&self, keep: &[&str]) -> Result<ConditioningResult> {
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| {
                Ok(OutcomeEntry {
                    outcome: o.outcome,
                    probability: o.probability,
                    state: o.state.as_ref().map(|s| s.reduce(keep)).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConditioningResult { outcomes })
    }
}

/// Joint distribution `p(m, n)` of pointer outcome `m` and object test outcome `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    /// Row `m`, column `n`.
    pub table: Vec<Vec<f64>>,
}

impl JointDistribution {
    pub fn pointer_marginal(&self) -> Vec<f64> {
        self.table.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn test_marginal(&self) -> Vec<f64> {
        let cols = self.table.first().map_or(0, Vec::len);
        (0..cols).map(|n| self.table.iter().map(|row| row[n]).sum()).collect()
    }

    pub fn total(&self) -> f64 {
        self.table.iter().flatten().sum()
    }

    /// `p(n|m) = p(mn)/p(m)`, or `None` when `p(m) ≤ ε_cond`.
    pub fn conditional(&self, m: usize) -> Option<Vec<f64>> {
        let pm: f64 = self.table[m].iter().sum();
        (pm > tol::CONDITIONING).then(|| self.table[m].iter().map(|p| p / pm).collect())
    }
}

/// Final state as weighted pure components on `layout`.
pub(crate) struct Evolved {
    pub layout: SpaceLayout,
    pub apparatus: Vec<String>,
    pub components: Vec<(f64, ComplexVector)>,
}

impl Evolved {
    fn apparatus_labels(&self) -> Vec<&str> {
        self.apparatus.iter().map(String::as_str).collect()
    }

    pub fn density(&self) -> ComplexMatrix {
        let n = self.layout.total_dim();
        self.components.iter().fold(ComplexMatrix::zeros(n, n), |acc, (w, v)| acc + outer(v, v).scale(*w))
    }

    /// Unnormalized `Tr_a(ρ_f E_m)` on the non-apparatus factors.
    pub fn selected(&self, model: &MeasurementModel, m: usize) -> Result<ComplexMatrix> {
        let labels = self.apparatus_labels();
        let n = self.layout.total_dim() / model.apparatus_layout().total_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (w, psi) in &self.components {
            for theta in model.pointer().vectors(m) {
                let chi = contract(psi, &self.layout, &labels, theta)?;
                out += outer(&chi, &chi).scale(*w);
            }
        }
        Ok(out)
    }

    /// Unnormalized states for every outcome, with `p(m)` as their traces.
    fn condition(&self, model: &MeasurementModel, layout: &SpaceLayout) -> Result<ConditioningResult> {
        let outcomes = (0..model.outcome_count())
            .map(|m| {
                let selected = self.selected(model, m)?;
                let probability = hilbert::trace(&selected).re;
                let state = if probability > tol::CONDITIONING {
                    Some(DensityOperator::from_unnormalized(layout.clone(), &selected)?)
                } else {
                    None
                };
                Ok(OutcomeEntry { outcome: m, probability, state })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConditioningResult { outcomes })
    }
}

/// Couple `rho` to the apparatus with the model's unitary acting on `coupled`
/// (which together must match the model's object) and the apparatus factors.
pub(crate) fn evolve_components(model: &MeasurementModel, rho: &DensityOperator, coupled: &[&str]) -> Result<Evolved> {
    let coupled_dim: usize =
        coupled.iter().map(|l| rho.layout().dim_of(l)).collect::<Result<Vec<_>>>()?.into_iter().product();
    if coupled_dim != model.object_layout().total_dim() {
        return Err(Error::layout(format!(
            "factors {coupled:?} have dimension {coupled_dim}, the model's object is {}",
            model.object_layout()
        )));
    }
    let layout = rho.layout().concat(model.apparatus_layout())?;
    let apparatus: Vec<String> = model.apparatus_layout().labels().into_iter().map(String::from).collect();
    let mut acts_on: Vec<&str> = coupled.to_vec();
    acts_on.extend(apparatus.iter().map(String::as_str));
    let u = model.coupling().matrix();
    let ready = model.apparatus_state().components();
    let mut components = Vec::new();
    for (w, v) in rho.components() {
        for (q, phi) in &ready {
            let psi = apply_on_factors(u, &layout, &acts_on, &hilbert::tensor_vector(&v, phi))?;
            components.push((w * q, psi));
        }
    }
    Ok(Evolved { layout, apparatus, components })
}

fn object_input(model: &MeasurementModel, rho_o: &DensityOperator) -> Result<DensityOperator> {
    if rho_o.layout().dims() != model.object_layout().dims() {
        return Err(Error::layout(format!(
            "object state lives on {} but the model expects {}",
            rho_o.layout(),
            model.object_layout()
        )));
    }
    rho_o.clone().relabel(model.object_layout().clone())
}

fn single_system(model: &MeasurementModel, rho_o: &DensityOperator) -> Result<Evolved> {
    let rho = object_input(model, rho_o)?;
    let labels = model.object_layout().labels();
    evolve_components(model, &rho, &labels)
}

/// `ρ_f = U (ρ_o ⊗ ρ_a) U†` on object ⊗ apparatus.
pub fn evolve(model: &MeasurementModel, rho_o: &DensityOperator) -> Result<DensityOperator> {
    let evolved = single_system(model, rho_o)?;
    DensityOperator::from_unnormalized(evolved.layout.clone(), &evolved.density())
}

/// Detection probabilities `p(m) = Tr_oa ρ_f E_m`.
pub fn outcome_probabilities(model: &MeasurementModel, rho_o: &DensityOperator) -> Result<Vec<f64>> {
    let evolved = single_system(model, rho_o)?;
    let labels = evolved.apparatus_labels();
    let mut probs = vec![0.0; model.outcome_count()];
    for (m, p) in probs.iter_mut().enumerate() {
        for (w, psi) in &evolved.components {
            for theta in model.pointer().vectors(m) {
                *p += w * contract(psi, &evolved.layout, &labels, theta)?.norm_squared();
            }
        }
    }
    Ok(probs)
}

/// Conditionally prepared object states `ρ_fm = Tr_a(ρ_f E_m) / p(m)`.
pub fn conditional_states(model: &MeasurementModel, rho_o: &DensityOperator) -> Result<ConditioningResult> {
    single_system(model, rho_o)?.condition(model, model.object_layout())
}

/// Reduced final object state `Tr_a ρ_f` without any selection.
pub fn final_object_state(model: &MeasurementModel, rho_o: &DensityOperator) -> Result<DensityOperator> {
    let evolved = single_system(model, rho_o)?;
    let object_labels = model.object_layout().labels();
    let reduced = hilbert::partial_trace(&evolved.density(), &evolved.layout, &object_labels)?;
    DensityOperator::from_unnormalized(model.object_layout().clone(), &reduced)
}

/// Joint probabilities `p(mn) = Tr_oa ρ_f E_m F_n` for a test POVM `f` on the object.
pub fn joint_distribution(model: &MeasurementModel, rho_o: &DensityOperator, f: &Povm) -> Result<JointDistribution> {
    if f.layout().dims() != model.object_layout().dims() {
        return Err(Error::layout(format!(
            "test POVM lives on {} but the object is {}",
            f.layout(),
            model.object_layout()
        )));
    }
    let evolved = single_system(model, rho_o)?;
    let table = (0..model.outcome_count())
        .map(|m| {
            let selected = evolved.selected(model, m)?;
            Ok(f.elements().iter().map(|e| hilbert::trace(&(&selected * e)).re).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JointDistribution { table })
}

/// Conditional two-particle states `ρ^(12)_fm = Tr_a(ρ_f E_m) / Tr_12a(ρ_f E_m)`
/// for a model coupling the apparatus to the first factor of `rho_12` only.
pub fn two_particle_conditional(model: &MeasurementModel, rho_12: &DensityOperator) -> Result<ConditioningResult> {
    let layout = rho_12.layout();
    if layout.len() != 2 {
        return Err(Error::layout(format!("expected a two-particle layout, got {layout}")));
    }
    let first = layout.labels()[0].to_owned();
    let evolved = evolve_components(model, rho_12, &[first.as_str()])?;
    evolved.condition(model, layout)
}
