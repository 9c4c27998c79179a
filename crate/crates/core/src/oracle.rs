//! Brute-force cross-checks, independent of the conditioning engine.
//!
//! [`tomographic_conditional`] never forms `Tr_a(ρ_f E_m)`. It evolves the
//! dense joint density matrix literally, measures the pointer jointly with an
//! informationally complete test family `{F_n}` on the object, and rebuilds
//! the prepared state from the conditional statistics `p(n|m) = p(mn)/p(m)`
//! alone. [`brute_trace`] is a naive partial trace by explicit basis
//! sandwiches.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::epr::{EprState, PARTICLE_1, PARTICLE_2};
use crate::error::{Error, Result};
use crate::hilbert::{self, check_square, outer, ComplexMatrix, ComplexVector, SpaceLayout};
use crate::models::MeasurementModel;
use crate::objects::DensityOperator;
use crate::tol;

/// Label of the object factor of families built by [`make_ic_family`].
pub const OBJECT: &str = "object";

/// Informationally complete POVM `{F_n}` on a `d`-dimensional space, with
/// `d²` elements.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFamily {
    layout: SpaceLayout,
    elements: Vec<ComplexMatrix>,
    gram: DMatrix<f64>,
    singular_values: Vec<f64>,
}

/// Deterministic family for dimension `dim ≥ 2`.
///
/// The `d²` seed vectors are `|j⟩`, `(|j⟩+|k⟩)/√2` and `(|j⟩+i|k⟩)/√2` for
/// `j < k`. With `S = Σ_v |v⟩⟨v|` the elements are `F_v = S^{-1/2}|v⟩⟨v|S^{-1/2}`.
pub fn make_ic_family(dim: usize) -> Result<TestFamily> {
    make_ic_family_on(SpaceLayout::single(OBJECT, dim)?)
}

/// Same as [`make_ic_family`] on an arbitrary layout.
pub fn make_ic_family_on(layout: SpaceLayout) -> Result<TestFamily> {
    let d = layout.total_dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut seeds: Vec<ComplexVector> = (0..d).map(|j| hilbert::basis_vector(d, j)).collect();
    for j in 0..d {
        for k in (j + 1)..d {
            let mut real = ComplexVector::zeros(d);
            real[j] = s.into();
            real[k] = s.into();
            let mut imag = ComplexVector::zeros(d);
            imag[j] = s.into();
            imag[k] = Complex64::new(0.0, s);
            seeds.push(real);
            seeds.push(imag);
        }
    }
    let projectors: Vec<ComplexMatrix> = seeds.iter().map(|v| outer(v, v)).collect();
    let frame = projectors.iter().fold(ComplexMatrix::zeros(d, d), |acc, p| acc + p);
    let inv_sqrt = hilbert::hermitian_function(&frame, |e| Complex64::from(1.0 / e.sqrt()));
    let elements: Vec<ComplexMatrix> =
        projectors.iter().map(|p| hilbert::hermitian_part(&(&inv_sqrt * p * &inv_sqrt))).collect();
    let count = elements.len();
    let gram = DMatrix::from_fn(count, count, |a, b| hilbert::trace(&(&elements[a] * &elements[b])).re);
    let mut singular_values: Vec<f64> = gram.clone().svd(false, false).singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Ok(TestFamily { layout, elements, gram, singular_values })
}

impl TestFamily {
    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `G_ab = Tr(F_a F_b)`.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Numerical rank of the Gram matrix; `d²` for an informationally complete family.
    pub fn rank(&self) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|&&s| s > top * 1e-12).count()
    }

    pub fn condition_number(&self) -> f64 {
        match (self.singular_values.first(), self.singular_values.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            _ => f64::INFINITY,
        }
    }

    /// Born probabilities `Tr(ρ F_n)`.
    pub fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.elements.iter().map(|f| hilbert::trace(&(rho * f)).re).collect()
    }

    /// The Hermitian operator `X = Σ_b x_b F_b` with `Tr(X F_a) = probs[a]`, by
    /// least squares on the Gram system `G x = p`.
    pub fn reconstruct(&self, probs: &[f64]) -> Result<ComplexMatrix> {
        if probs.len() != self.elements.len() {
            return Err(Error::layout(format!(
                "{} probabilities for a family of {} elements",
                probs.len(),
                self.elements.len()
            )));
        }
        let rhs = DMatrix::from_column_slice(probs.len(), 1, probs);
        let x = self.gram.clone().svd(true, true).solve(&rhs, 1e-14).map_err(|e| {
            Error::validation(format!("Gram system solve failed ({e}); condition number {:e}", self.condition_number()))
        })?;
        let d = self.layout.total_dim();
        Ok(self.elements.iter().zip(x.iter()).fold(ComplexMatrix::zeros(d, d), |acc, (f, &c)| acc + f.scale(c)))
    }

    /// Reconstruct a state from its probabilities.
    pub fn reconstruct_state(&self, probs: &[f64]) -> Result<DensityOperator> {
        let x = self.reconstruct(probs)?;
        DensityOperator::from_unnormalized(self.layout.clone(), &x)
            .map_err(|e| Error::validation(format!("{e}; Gram condition number {:e}", self.condition_number())))
    }
}

/// `Tr(ρ X)` by elementwise summation.
fn expectation(rho: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    let n = rho.nrows();
    let mut acc = Complex64::from(0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * x[(j, i)];
        }
    }
    acc.re
}

/// Dense `ρ_f = U (ρ ⊗ ρ_a) U†` on `layout = rho.layout ⊗ apparatus` with the
/// coupling embedded on `coupled` and the apparatus.
fn dense_final_state(
    model: &MeasurementModel,
    rho: &ComplexMatrix,
    layout: &SpaceLayout,
    coupled: &[&str],
) -> Result<ComplexMatrix> {
    let mut acts_on = coupled.to_vec();
    let apparatus = model.apparatus_layout().labels();
    acts_on.extend(apparatus.iter().copied());
    let u = hilbert::embed(model.coupling().matrix(), layout, &acts_on)?;
    let initial = hilbert::tensor_product(rho, model.apparatus_state().matrix());
    Ok(&u * initial * u.adjoint())
}

/// Prepared state on the factors `target` rebuilt from `p(n|m)`.
fn tomograph(
    rho_f: &ComplexMatrix,
    layout: &SpaceLayout,
    target: &[&str],
    model: &MeasurementModel,
    m: usize,
    family: &TestFamily,
) -> Result<DensityOperator> {
    if m >= model.outcome_count() {
        return Err(Error::layout(format!("outcome {m} out of range ({} outcomes)", model.outcome_count())));
    }
    let pointer = model.pointer().projector(m);
    let mut acts_on = target.to_vec();
    acts_on.extend(model.apparatus_layout().labels());
    let joint: Vec<f64> = family
        .elements()
        .iter()
        .map(|f| {
            let x = hilbert::embed(&hilbert::tensor_product(f, &pointer), layout, &acts_on)?;
            Ok(expectation(rho_f, &x))
        })
        .collect::<Result<_>>()?;
    // Σ_n F_n = I, so the pointer marginal is the row sum
    let pm: f64 = joint.iter().sum();
    if pm <= tol::CONDITIONING {
        return Err(Error::ZeroProbability { probability: pm, threshold: tol::CONDITIONING });
    }
    let conditional: Vec<f64> = joint.iter().map(|p| p / pm).collect();
    let state = family.reconstruct_state(&conditional)?;
    let target_layout = layout.sublayout(target)?;
    DensityOperator::from_unnormalized(target_layout, state.matrix())
}

/// Prepared object state for outcome `m`, from joint pointer/test statistics only.
pub fn tomographic_conditional(model: &MeasurementModel, rho_o: &DensityOperator, m: usize) -> Result<DensityOperator> {
    if rho_o.layout().dims() != model.object_layout().dims() {
        return Err(Error::layout(format!(
            "object state lives on {} but the model expects {}",
            rho_o.layout(),
            model.object_layout()
        )));
    }
    let layout = model.joint_layout();
    let object = model.object_layout().labels();
    let rho_f = dense_final_state(model, rho_o.matrix(), &layout, &object)?;
    let family = make_ic_family_on(model.object_layout().clone())?;
    tomograph(&rho_f, &layout, &object, model, m, &family)
}

/// Prepared particle-2 state of an EPR pair when `model` measures particle 1,
/// from joint pointer/particle-2 statistics only.
pub fn tomographic_particle2(epr: &EprState, model: &MeasurementModel, m: usize) -> Result<DensityOperator> {
    let rho = epr.density();
    let layout = rho.layout().concat(model.apparatus_layout())?;
    let rho_f = dense_final_state(model, rho.matrix(), &layout, &[PARTICLE_1])?;
    let family = make_ic_family_on(rho.layout().sublayout(&[PARTICLE_2])?)?;
    tomograph(&rho_f, &layout, &[PARTICLE_2], model, m, &family)
}

/// Partial trace over the factors `traced`, as `Σ_k V_k† X V_k` where the
/// columns of `V_k` are the product basis vectors with traced index `k`.
pub fn brute_trace(x: &ComplexMatrix, layout: &SpaceLayout, traced: &[&str]) -> Result<ComplexMatrix> {
    check_square(x, layout.total_dim(), "operator")?;
    for l in traced {
        layout.position(l)?;
    }
    let factors = layout.factors();
    let is_traced: Vec<bool> = factors.iter().map(|f| traced.contains(&f.label.as_str())).collect();
    let kept_dims: Vec<usize> = factors.iter().zip(&is_traced).filter(|(_, &t)| !t).map(|(f, _)| f.dim).collect();
    let traced_dims: Vec<usize> = factors.iter().zip(&is_traced).filter(|(_, &t)| t).map(|(f, _)| f.dim).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();
    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    for k in 0..traced_total {
        let traced_digits = digits(k, &traced_dims);
        let columns: Vec<ComplexVector> = (0..kept_total)
            .map(|r| {
                let kept_digits = digits(r, &kept_dims);
                let (mut ki, mut ti) = (0, 0);
                let mut v = ComplexVector::from_element(1, hilbert::ONE);
                for (f, &t) in factors.iter().zip(&is_traced) {
                    let idx = if t {
                        ti += 1;
                        traced_digits[ti - 1]
                    } else {
                        ki += 1;
                        kept_digits[ki - 1]
                    };
                    v = hilbert::tensor_vector(&v, &hilbert::basis_vector(f.dim, idx));
                }
                v
            })
            .collect();
        let sandwich = ComplexMatrix::from_columns(&columns);
        out += sandwich.adjoint() * x * sandwich;
    }
    Ok(out)
}

/// Mixed-radix digits of `n`, most significant first.
fn digits(mut n: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = n % r;
        n /= r;
    }
    out
}
