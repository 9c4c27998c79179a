//! Premeasurement models: apparatus state, coupling unitary and pointer
//! observable, plus the POVM each model induces on the object.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    self, apply_on_factors, basis_vector, check_orthonormal, complete_isometry, max_norm, outer, tensor_product,
    tensor_vector, ComplexMatrix, ComplexVector, SpaceLayout, UnitaryOperator,
};
use crate::objects::{DensityOperator, ObservableBasis, PureState};
use crate::tol;

/// Label given to the apparatus factor by the model constructors.
pub const APPARATUS: &str = "apparatus";

/// Pointer observable: outcome `m` owns the projector `E_m = Σ_i |θ_mi⟩⟨θ_mi|`.
/// All pointer vectors together form one orthonormal family, so the `E_m` are
/// mutually orthogonal and `Σ_m E_m ≤ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerObservable {
    layout: SpaceLayout,
    outcomes: Vec<Vec<ComplexVector>>,
}

impl PointerObservable {
    pub fn new(layout: SpaceLayout, outcomes: Vec<Vec<ComplexVector>>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::validation("pointer observable needs at least one outcome"));
        }
        let n = layout.total_dim();
        let all: Vec<ComplexVector> = outcomes.iter().flatten().cloned().collect();
        if let Some(v) = all.iter().find(|v| v.len() != n) {
            return Err(Error::layout(format!("pointer vector of length {} on {layout}", v.len())));
        }
        check_orthonormal(&all, "pointer vectors")?;
        Ok(PointerObservable { layout, outcomes })
    }

    /// One outcome per computational basis state of the apparatus.
    pub fn computational(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        let outcomes = (0..n).map(|k| vec![basis_vector(n, k)]).collect();
        PointerObservable { layout, outcomes }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    /// Orthonormal vectors `|θ_mi⟩` spanning `E_m`.
    pub fn vectors(&self, m: usize) -> &[ComplexVector] {
        &self.outcomes[m]
    }

    pub fn projector(&self, m: usize) -> ComplexMatrix {
        let n = self.layout.total_dim();
        self.outcomes[m].iter().fold(ComplexMatrix::zeros(n, n), |acc, v| acc + outer(v, v))
    }

    /// Whether `Σ_m E_m = I` on the apparatus space.
    pub fn is_complete(&self) -> bool {
        self.outcomes.iter().map(Vec::len).sum::<usize>() == self.layout.total_dim()
    }
}

/// Complete description of a premeasurement: `ρ_f = U (ρ_o ⊗ ρ_a) U†`,
/// read out by a pointer observable.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementModel {
    object: SpaceLayout,
    apparatus: SpaceLayout,
    apparatus_state: DensityOperator,
    coupling: UnitaryOperator,
    pointer: PointerObservable,
}

impl MeasurementModel {
    pub fn new(
        object: SpaceLayout,
        apparatus_state: DensityOperator,
        coupling: UnitaryOperator,
        pointer: PointerObservable,
    ) -> Result<Self> {
        let apparatus = apparatus_state.layout().clone();
        if pointer.layout() != &apparatus {
            return Err(Error::layout(format!(
                "pointer acts on {} but apparatus state lives on {apparatus}",
                pointer.layout()
            )));
        }
        let joint = object.concat(&apparatus)?;
        if coupling.layout() != &joint {
            return Err(Error::layout(format!(
                "coupling acts on {} but object ⊗ apparatus is {joint}",
                coupling.layout()
            )));
        }
        Ok(MeasurementModel { object, apparatus, apparatus_state, coupling, pointer })
    }

    pub fn object_layout(&self) -> &SpaceLayout {
        &self.object
    }

    pub fn apparatus_layout(&self) -> &SpaceLayout {
        &self.apparatus
    }

    /// Object factors followed by apparatus factors.
    pub fn joint_layout(&self) -> SpaceLayout {
        self.object.concat(&self.apparatus).expect("checked at construction")
    }

    pub fn apparatus_state(&self) -> &DensityOperator {
        &self.apparatus_state
    }

    pub fn coupling(&self) -> &UnitaryOperator {
        &self.coupling
    }

    pub fn pointer(&self) -> &PointerObservable {
        &self.pointer
    }

    pub fn outcome_count(&self) -> usize {
        self.pointer.outcome_count()
    }

    /// Same model with the coupling replaced by `coupling · (pre ⊗ I)`, i.e.
    /// the object is first rotated by `pre`.
    pub fn with_object_rotation(&self, pre: &ComplexMatrix) -> Result<Self> {
        let joint = self.joint_layout();
        let object_labels = self.object.labels();
        let pre = UnitaryOperator::new(joint.clone(), hilbert::embed(pre, &joint, &object_labels)?)?;
        Self::new(self.object.clone(), self.apparatus_state.clone(), self.coupling.compose(&pre)?, self.pointer.clone())
    }
}

/// Column-stochastic matrix `λ_mm'`: rows are pointer outcomes, columns are
/// eigenvalues of the measured observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct NonidealityMatrix {
    rows: Vec<Vec<f64>>,
}

impl NonidealityMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || ncols == 0 {
            return Err(Error::validation("λ must have at least one row and one column"));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != ncols) {
            return Err(Error::validation(format!("λ row {r} has {} entries, row 0 has {ncols}", rows[r].len())));
        }
        for (m, row) in rows.iter().enumerate() {
            for (k, &x) in row.iter().enumerate() {
                if !x.is_finite() || x < -tol::STOCHASTIC {
                    return Err(Error::validation(format!("λ[{m}][{k}] = {x} is not a probability")));
                }
            }
        }
        for k in 0..ncols {
            let sum: f64 = rows.iter().map(|r| r[k]).sum();
            if (sum - 1.0).abs() > tol::STOCHASTIC {
                return Err(Error::validation(format!("λ column {k} sums to {sum}, expected 1")));
            }
        }
        Ok(NonidealityMatrix { rows })
    }

    /// Ideal measurement, `λ_mm' = δ_mm'`.
    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|m| (0..n).map(|k| if m == k { 1.0 } else { 0.0 }).collect()).collect();
        NonidealityMatrix { rows }
    }

    /// Correct outcome with probability `1 − p`, otherwise uniformly one of the
    /// `n − 1` others.
    pub fn symmetric_noise(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation(format!("noise level {p} outside [0, 1]")));
        }
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let off = p / (n as f64 - 1.0);
        let rows = (0..n).map(|m| (0..n).map(|k| if m == k { 1.0 - p } else { off }).collect()).collect();
        Self::new(rows)
    }

    /// Every entry `1/n`: the pointer carries no information.
    pub fn uniform(n: usize) -> Self {
        NonidealityMatrix { rows: vec![vec![1.0 / n as f64; n]; n] }
    }

    pub fn pointer_outcomes(&self) -> usize {
        self.rows.len()
    }

    pub fn object_outcomes(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, m: usize, k: usize) -> f64 {
        self.rows[m][k]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn max_abs_diff(&self, other: &NonidealityMatrix) -> f64 {
        if self.rows.len() != other.rows.len() || self.object_outcomes() != other.object_outcomes() {
            return f64::INFINITY;
        }
        self.rows.iter().flatten().zip(other.rows.iter().flatten()).fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

impl TryFrom<Vec<Vec<f64>>> for NonidealityMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<NonidealityMatrix> for Vec<Vec<f64>> {
    fn from(lam: NonidealityMatrix) -> Self {
        lam.rows
    }
}

/// Append a no-click pointer outcome for a detector of efficiency `eta`: every
/// click row is scaled by `eta` and the new last row holds `1 − eta`.
pub fn with_detector_efficiency(lam: &NonidealityMatrix, eta: f64) -> Result<NonidealityMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::validation(format!("detector efficiency {eta} outside [0, 1]")));
    }
    let mut rows: Vec<Vec<f64>> = lam.rows.iter().map(|r| r.iter().map(|x| x * eta).collect()).collect();
    rows.push(vec![1.0 - eta; lam.object_outcomes()]);
    NonidealityMatrix::new(rows)
}

/// Positive operator-valued measure on the object.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    layout: SpaceLayout,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    /// Elements must be Hermitian and positive semidefinite with `Σ M_m ≤ I`.
    pub fn new(layout: SpaceLayout, elements: Vec<ComplexMatrix>) -> Result<Self> {
        let n = layout.total_dim();
        if elements.is_empty() {
            return Err(Error::validation("POVM needs at least one element"));
        }
        for (m, e) in elements.iter().enumerate() {
            if e.nrows() != n || e.ncols() != n {
                return Err(Error::layout(format!("POVM element {m} has the wrong shape for {layout}")));
            }
            if hilbert::hermiticity_defect(e) >= tol::HERMITIAN {
                return Err(Error::validation(format!("POVM element {m} is not Hermitian")));
            }
            let min = hilbert::min_eigenvalue(e);
            if min < -tol::PSD {
                return Err(Error::validation(format!("POVM element {m} has eigenvalue {min:e}")));
            }
        }
        let povm = Povm { layout, elements };
        let slack = ComplexMatrix::identity(n, n) - povm.sum();
        let min = hilbert::min_eigenvalue(&slack);
        if min < -tol::PSD {
            return Err(Error::validation(format!("POVM elements sum beyond the identity (eigenvalue {min:e})")));
        }
        Ok(povm)
    }

    /// Projective measurement onto the eigenspaces of `basis`.
    pub fn from_basis(basis: &ObservableBasis) -> Self {
        let elements = basis.projectors().into_iter().map(|p| p.matrix().clone()).collect();
        Povm { layout: basis.layout().clone(), elements }
    }

    /// Single element `I`.
    pub fn trivial(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        Povm { layout, elements: vec![ComplexMatrix::identity(n, n)] }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> ComplexMatrix {
        let n = self.layout.total_dim();
        self.elements.iter().fold(ComplexMatrix::zeros(n, n), |acc, e| acc + e)
    }

    /// `‖Σ M_m − I‖_max`.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.layout.total_dim();
        max_norm(&(self.sum() - ComplexMatrix::identity(n, n)))
    }

    /// Born probabilities `Tr(ρ M_m)`.
    pub fn probabilities(&self, rho: &DensityOperator) -> Vec<f64> {
        self.elements.iter().map(|e| hilbert::trace(&(rho.matrix() * e)).re).collect()
    }
}

fn require_nondegenerate(basis: &ObservableBasis) -> Result<()> {
    if basis.is_nondegenerate() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "measurement models need a nondegenerate basis; {} vectors fall into {} eigenspaces",
            basis.vectors().len(),
            basis.outcome_count()
        )))
    }
}

fn apparatus_layout(dim: usize) -> Result<SpaceLayout> {
    SpaceLayout::single(APPARATUS, dim)
}

/// `Σ_k |a_k⟩⟨a_k| ⊗ V_k`: a unitary controlled by the object's eigenbasis.
fn controlled_unitary(
    basis: &ObservableBasis,
    blocks: &[ComplexMatrix],
    joint: &SpaceLayout,
) -> Result<UnitaryOperator> {
    let mut u = ComplexMatrix::zeros(joint.total_dim(), joint.total_dim());
    for (a, v) in basis.vectors().iter().zip(blocks) {
        u += tensor_product(&outer(a, a), v);
    }
    UnitaryOperator::new(joint.clone(), u)
}

/// First-kind measurement: `U|a_m⟩|θ⟩ = |a_m⟩|θ_m⟩`. The apparatus has one
/// basis state per outcome with `|θ⟩ = |θ_0⟩`, and `U` is the controlled cyclic
/// shift `|a_m⟩|θ_k⟩ ↦ |a_m⟩|θ_{k+m mod M}⟩`.
pub fn build_first_kind(basis: &ObservableBasis) -> Result<MeasurementModel> {
    require_nondegenerate(basis)?;
    let n = basis.vectors().len();
    let apparatus = apparatus_layout(n)?;
    let joint = basis.layout().concat(&apparatus)?;
    let shifts: Vec<ComplexMatrix> = (0..n)
        .map(|m| ComplexMatrix::from_fn(n, n, |r, c| if r == (c + m) % n { hilbert::ONE } else { hilbert::ZERO }))
        .collect();
    let coupling = controlled_unitary(basis, &shifts, &joint)?;
    let ready = PureState::basis(apparatus.clone(), 0)?.to_density();
    MeasurementModel::new(basis.layout().clone(), ready, coupling, PointerObservable::computational(apparatus))
}

/// Second-kind measurement: `U|a_m⟩|θ⟩ = |ψ_m⟩|θ_m⟩` with normalized, not
/// necessarily orthogonal `ψ_m`. `U` is fixed on the coupled subspace and
/// completed to a unitary by Gram-Schmidt.
pub fn build_second_kind(basis: &ObservableBasis, final_states: &[ComplexVector]) -> Result<MeasurementModel> {
    require_nondegenerate(basis)?;
    let n = basis.vectors().len();
    if final_states.len() != n {
        return Err(Error::layout(format!(
            "{} final object states given for a basis with {n} outcomes",
            final_states.len()
        )));
    }
    for (m, psi) in final_states.iter().enumerate() {
        if psi.len() != n {
            return Err(Error::layout(format!("final state ψ_{m} has dimension {}, object has {n}", psi.len())));
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::validation(format!("final state ψ_{m} is not normalized: ‖ψ‖ = {norm}")));
        }
    }
    let apparatus = apparatus_layout(n)?;
    let joint = basis.layout().concat(&apparatus)?;
    let ready = basis_vector(n, 0);
    let from: Vec<ComplexVector> = basis.vectors().iter().map(|a| tensor_vector(a, &ready)).collect();
    let to: Vec<ComplexVector> =
        final_states.iter().enumerate().map(|(m, psi)| tensor_vector(psi, &basis_vector(n, m))).collect();
    let coupling = complete_isometry(&from, &to, &joint)?;
    let ready = PureState::basis(apparatus.clone(), 0)?.to_density();
    MeasurementModel::new(basis.layout().clone(), ready, coupling, PointerObservable::computational(apparatus))
}

/// Nonideal measurement of the observable with eigenbasis `basis`:
/// `U|a_k⟩|θ⟩ = |a_k⟩ Σ_m √λ_mk |θ_{m,k}⟩`. The apparatus carries one
/// orthonormal vector `|θ_{m,k}⟩` per (pointer outcome, source eigenvalue)
/// pair, `E_m = Σ_k |θ_{m,k}⟩⟨θ_{m,k}|`, and `|θ⟩ = |θ_{0,0}⟩`.
pub fn build_lambda_model(basis: &ObservableBasis, lam: &NonidealityMatrix) -> Result<MeasurementModel> {
    require_nondegenerate(basis)?;
    let n = basis.vectors().len();
    if lam.object_outcomes() != n {
        return Err(Error::layout(format!(
            "λ has {} columns but the basis has {n} eigenvalues",
            lam.object_outcomes()
        )));
    }
    let rows = lam.pointer_outcomes();
    let dim = rows * n;
    let index = |m: usize, k: usize| m * n + k;
    let apparatus = apparatus_layout(dim)?;
    let joint = basis.layout().concat(&apparatus)?;
    let ready = basis_vector(dim, 0);
    let blocks = (0..n)
        .map(|k| {
            let mut target = ComplexVector::zeros(dim);
            for m in 0..rows {
                target[index(m, k)] = Complex64::from(lam.get(m, k).max(0.0).sqrt());
            }
            let target = target.unscale(target.norm());
            complete_isometry(std::slice::from_ref(&ready), &[target], &apparatus).map(|v| v.matrix().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let coupling = controlled_unitary(basis, &blocks, &joint)?;
    let outcomes = (0..rows).map(|m| (0..n).map(|k| basis_vector(dim, index(m, k))).collect()).collect();
    let pointer = PointerObservable::new(apparatus.clone(), outcomes)?;
    let ready = PureState::basis(apparatus, 0)?.to_density();
    MeasurementModel::new(basis.layout().clone(), ready, coupling, pointer)
}

/// `M_m = Tr_a[(I ⊗ ρ_a) U† (I ⊗ E_m) U]`.
pub fn extract_povm(model: &MeasurementModel) -> Result<Povm> {
    let joint = model.joint_layout();
    let apparatus_labels = model.apparatus_layout().labels();
    let object_labels = model.object_layout().labels();
    let u = model.coupling().matrix();
    let ready = hilbert::embed(model.apparatus_state().matrix(), &joint, &apparatus_labels)?;
    let elements = (0..model.outcome_count())
        .map(|m| {
            let e = hilbert::embed(&model.pointer().projector(m), &joint, &apparatus_labels)?;
            let heisenberg = u.adjoint() * e * u;
            let reduced = hilbert::partial_trace(&(&ready * heisenberg), &joint, &object_labels)?;
            Ok(hilbert::hermitian_part(&reduced))
        })
        .collect::<Result<Vec<_>>>()?;
    Povm::new(model.object_layout().clone(), elements)
}

/// Outcome of [`verify_nonideality`].
#[derive(Debug, Clone, PartialEq)]
pub enum NonidealityCheck {
    /// All off-diagonal traces vanish; the diagonal ones form this `λ`.
    Nonideal(NonidealityMatrix),
    /// Largest off-diagonal trace `Tr U|a_k⟩⟨a_l|ρ_a U† E_m` with `k ≠ l`.
    OffDiagonal { outcome: usize, column: usize, row: usize, magnitude: f64 },
    /// Off-diagonal traces vanish but the diagonal ones are not column-stochastic.
    NotStochastic { reason: String },
}

impl NonidealityCheck {
    pub fn matrix(&self) -> Option<&NonidealityMatrix> {
        match self {
            NonidealityCheck::Nonideal(lam) => Some(lam),
            _ => None,
        }
    }
}

impl fmt::Display for NonidealityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonidealityCheck::Nonideal(lam) => write!(f, "nonideal measurement with λ = {:?}", lam.rows()),
            NonidealityCheck::OffDiagonal { outcome, column, row, magnitude } => {
                write!(f, "off-diagonal trace {magnitude:e} at outcome {outcome}, eigenvector pair ({column}, {row})")
            }
            NonidealityCheck::NotStochastic { reason } => write!(f, "diagonal traces are not stochastic: {reason}"),
        }
    }
}

/// Check whether `model` measures the observable of `basis` nonideally, i.e.
/// `Tr_oa U|a_k⟩⟨a_l| ρ_a U† E_m = λ_mk δ_kl`, and extract `λ` if so.
pub fn verify_nonideality(model: &MeasurementModel, basis: &ObservableBasis) -> Result<NonidealityCheck> {
    if basis.layout().total_dim() != model.object_layout().total_dim() {
        return Err(Error::layout(format!(
            "basis lives on {} but the model's object is {}",
            basis.layout(),
            model.object_layout()
        )));
    }
    let joint = model.joint_layout();
    let apparatus_labels = model.apparatus_layout().labels();
    let u = model.coupling().matrix();
    let components = model.apparatus_state().components();
    let n = basis.vectors().len();
    let outcomes = model.outcome_count();
    // images[c][k] = U (|a_k⟩ ⊗ |φ_c⟩)
    let images: Vec<Vec<ComplexVector>> =
        components.iter().map(|(_, phi)| basis.vectors().iter().map(|a| u * tensor_vector(a, phi)).collect()).collect();
    let mut lam = vec![vec![0.0; n]; outcomes];
    let mut worst: Option<(usize, usize, usize, f64)> = None;
    for (m, lam_row) in lam.iter_mut().enumerate() {
        let e = model.pointer().projector(m);
        for k in 0..n {
            // Σ_c w_c ⟨U a_l φ_c| E_m |U a_k φ_c⟩ for every l
            let mut column = vec![Complex64::from(0.0); n];
            for ((w, _), imgs) in components.iter().zip(&images) {
                let projected = apply_on_factors(&e, &joint, &apparatus_labels, &imgs[k])?;
                for (l, img) in imgs.iter().enumerate() {
                    column[l] += img.dotc(&projected) * *w;
                }
            }
            for (l, t) in column.iter().enumerate() {
                if l == k {
                    lam_row[k] = t.re;
                } else if worst.is_none_or(|w| t.norm() > w.3) {
                    worst = Some((m, k, l, t.norm()));
                }
            }
        }
    }
    if let Some((outcome, column, row, magnitude)) = worst {
        if magnitude >= tol::NONIDEAL_OFF_DIAGONAL {
            return Ok(NonidealityCheck::OffDiagonal { outcome, column, row, magnitude });
        }
    }
    Ok(match NonidealityMatrix::new(lam) {
        Ok(lam) => NonidealityCheck::Nonideal(lam),
        Err(e) => NonidealityCheck::NotStochastic { reason: e.to_string() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{ONE, ZERO};

    fn qubit_basis() -> ObservableBasis {
        ObservableBasis::computational(SpaceLayout::single("o", 2).unwrap())
    }

    fn projector(v: &ComplexVector) -> ComplexMatrix {
        outer(v, v)
    }

    #[test]
    fn first_kind_is_controlled_shift() {
        let model = build_first_kind(&qubit_basis()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let input = ComplexVector::from_vec(vec![s.into(), ZERO, s.into(), ZERO]); // (|0⟩+|1⟩)/√2 ⊗ |θ⟩
        let out = model.coupling().matrix() * input;
        let expected = ComplexVector::from_vec(vec![s.into(), ZERO, ZERO, s.into()]);
        assert!((out - expected).norm() < 1e-15);
    }

    #[test]
    fn first_kind_rejects_degenerate_basis() {
        let l = SpaceLayout::single("o", 2).unwrap();
        let b = ObservableBasis::new(l, vec![1.0, 1.0], vec![basis_vector(2, 0), basis_vector(2, 1)]).unwrap();
        assert!(matches!(build_first_kind(&b), Err(Error::Unsupported(_))));
    }

    #[test]
    fn first_kind_povm_is_projective() {
        let povm = extract_povm(&build_first_kind(&qubit_basis()).unwrap()).unwrap();
        assert!(max_norm(&(&povm.elements()[0] - projector(&basis_vector(2, 0)))) < 1e-14);
        assert!(max_norm(&(&povm.elements()[1] - projector(&basis_vector(2, 1)))) < 1e-14);
    }

    #[test]
    fn second_kind_rejects_unnormalized() {
        let psi = vec![basis_vector(2, 0), ComplexVector::from_vec(vec![ONE, ONE])];
        assert!(matches!(build_second_kind(&qubit_basis(), &psi), Err(Error::Validation(_))));
    }

    #[test]
    fn second_kind_dimension_mismatch() {
        let psi = vec![basis_vector(2, 0); 3];
        assert!(matches!(build_second_kind(&qubit_basis(), &psi), Err(Error::Layout(_))));
    }

    #[test]
    fn lambda_model_povm_mixes_projectors() {
        let lam = NonidealityMatrix::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let povm = extract_povm(&build_lambda_model(&qubit_basis(), &lam).unwrap()).unwrap();
        let p0 = projector(&basis_vector(2, 0));
        let p1 = projector(&basis_vector(2, 1));
        assert!(max_norm(&(&povm.elements()[0] - (p0.scale(0.9) + p1.scale(0.1)))) < 1e-14);
        assert!(max_norm(&(&povm.elements()[1] - (p0.scale(0.1) + p1.scale(0.9)))) < 1e-14);
    }

    #[test]
    fn lambda_validation_cites_column() {
        let err = NonidealityMatrix::new(vec![vec![0.5, 0.4], vec![0.5, 0.5]]).unwrap_err();
        assert!(err.to_string().contains("column 1"), "{err}");
    }

    #[test]
    fn efficiency_edges() {
        let lam = NonidealityMatrix::identity(2);
        let full = with_detector_efficiency(&lam, 1.0).unwrap();
        assert_eq!(full.rows(), &[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]);
        let dead = with_detector_efficiency(&lam, 0.0).unwrap();
        assert_eq!(dead.rows(), &[vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 1.0]]);
        assert!(matches!(with_detector_efficiency(&lam, 1.2), Err(Error::Validation(_))));
        assert!(matches!(with_detector_efficiency(&lam, -0.1), Err(Error::Validation(_))));
    }

    #[test]
    fn first_kind_verifies_as_ideal() {
        let b = qubit_basis();
        let check = verify_nonideality(&build_first_kind(&b).unwrap(), &b).unwrap();
        assert!(check.matrix().unwrap().max_abs_diff(&NonidealityMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn rotated_coupling_fails_verification() {
        let b = qubit_basis();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = ComplexMatrix::from_row_slice(2, 2, &[s.into(), s.into(), s.into(), (-s).into()]);
        let model = build_first_kind(&b).unwrap().with_object_rotation(&hadamard).unwrap();
        match verify_nonideality(&model, &b).unwrap() {
            NonidealityCheck::OffDiagonal { magnitude, .. } => assert!((magnitude - 0.5).abs() < 1e-12),
            other => panic!("expected an off-diagonal violation, got {other}"),
        }
    }

    #[test]
    fn povm_rejects_overcomplete() {
        let l = SpaceLayout::single("o", 2).unwrap();
        let i = ComplexMatrix::identity(2, 2);
        assert!(Povm::new(l, vec![i.clone(), i]).is_err());
    }
}
