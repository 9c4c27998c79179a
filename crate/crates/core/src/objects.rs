//! Quantum states, observables and the projection postulates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    self, check_finite, check_orthonormal, check_square, hermiticity_defect, max_norm, outer, ComplexMatrix,
    ComplexVector, SpaceLayout,
};
use crate::tol;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: SpaceLayout,
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(layout: SpaceLayout, amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::layout(format!(
                "state has {} amplitudes, layout {layout} needs {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("state has non-finite amplitudes"));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::validation(format!("state is not normalized: ‖ψ‖ = {norm}")));
        }
        Ok(PureState { layout, amplitudes })
    }

    /// Rescale `amplitudes` to unit norm first.
    pub fn normalized(layout: SpaceLayout, amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::validation("cannot normalize a zero or non-finite vector"));
        }
        Self::new(layout, amplitudes / Complex64::from(norm))
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(layout: SpaceLayout, k: usize) -> Result<Self> {
        let dim = layout.total_dim();
        if k >= dim {
            return Err(Error::layout(format!("basis index {k} out of range for dimension {dim}")));
        }
        Self::new(layout, hilbert::basis_vector(dim, k))
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// `|⟨self|other⟩|²`. States are only ever compared this way, since global
    /// phases carry no physics.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            layout: self.layout.clone(),
            matrix: outer(&self.amplitudes, &self.amplitudes),
            pure: Some(self.amplitudes.clone()),
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    layout: SpaceLayout,
    matrix: ComplexMatrix,
    // state vector when built from a pure state; spares an eigensolve later
    pure: Option<ComplexVector>,
}

impl PartialEq for DensityOperator {
    fn eq(&self, other: &Self) -> bool {
        self.layout == other.layout && self.matrix == other.matrix
    }
}

impl DensityOperator {
    pub fn new(layout: SpaceLayout, matrix: ComplexMatrix) -> Result<Self> {
        check_square(&matrix, layout.total_dim(), "density matrix")?;
        check_finite(&matrix)?;
        let herm = hermiticity_defect(&matrix);
        if herm >= tol::HERMITIAN {
            return Err(Error::validation(format!("density matrix is not Hermitian: defect {herm:e}")));
        }
        let tr = hilbert::trace(&matrix);
        if (tr - Complex64::from(1.0)).norm() > tol::TRACE {
            return Err(Error::validation(format!("density matrix trace is {tr}, expected 1")));
        }
        let min = hilbert::min_eigenvalue(&matrix);
        if min < -tol::PSD {
            return Err(Error::validation(format!("density matrix has negative eigenvalue {min:e}")));
        }
        Ok(DensityOperator { layout, matrix, pure: None })
    }

    /// `(X + X†)/2` divided by its trace, then validated. Negative eigenvalues
    /// are not clipped.
    pub fn from_unnormalized(layout: SpaceLayout, matrix: &ComplexMatrix) -> Result<Self> {
        let herm = hilbert::hermitian_part(matrix);
        let tr = hilbert::trace(&herm).re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::validation(format!("cannot normalize operator with trace {tr:e}")));
        }
        Self::new(layout, herm.unscale(tr))
    }

    pub fn maximally_mixed(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        DensityOperator { layout, matrix: ComplexMatrix::identity(n, n).unscale(n as f64), pure: None }
    }

    /// `Σ_k w_k |v_k⟩⟨v_k|` for a probability vector `w` and unit vectors `v`.
    pub fn mixture(layout: SpaceLayout, weights: &[f64], vectors: &[ComplexVector]) -> Result<Self> {
        if weights.len() != vectors.len() {
            return Err(Error::validation("mixture weights and vectors differ in length"));
        }
        let n = layout.total_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (&w, v) in weights.iter().zip(vectors) {
            if v.len() != n {
                return Err(Error::layout(format!("mixture vector of length {} on {layout}", v.len())));
            }
            m += outer(v, v).scale(w);
        }
        Self::new(layout, m)
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        hilbert::trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        hilbert::trace(&(&self.matrix * &self.matrix)).re
    }

    /// `⟨v|ρ|v⟩`: fidelity to a pure target in the squared-overlap convention.
    pub fn fidelity_to(&self, target: &ComplexVector) -> f64 {
        target.dotc(&(&self.matrix * target)).re
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityOperator) -> f64 {
        trace_distance(&self.matrix, &other.matrix)
    }

    /// Reduced state on the factors in `keep`.
    pub fn reduce(&self, keep: &[&str]) -> Result<DensityOperator> {
        let reduced = hilbert::partial_trace(&self.matrix, &self.layout, keep)?;
        DensityOperator::from_unnormalized(self.layout.sublayout(keep)?, &reduced)
    }

    /// `ρ ⊗ σ` on the concatenated layout.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let layout = self.layout.concat(&other.layout)?;
        let pure = match (&self.pure, &other.pure) {
            (Some(a), Some(b)) => Some(hilbert::tensor_vector(a, b)),
            _ => None,
        };
        Ok(DensityOperator { layout, matrix: hilbert::tensor_product(&self.matrix, &other.matrix), pure })
    }

    /// Weighted pure components `(w_k, |v_k⟩)` with `ρ = Σ w_k |v_k⟩⟨v_k|`.
    /// Spectral weights that are not strictly positive are left out.
    pub fn components(&self) -> Vec<(f64, ComplexVector)> {
        if let Some(v) = &self.pure {
            return vec![(1.0, v.clone())];
        }
        let (values, vectors) = hilbert::hermitian_eigen(&self.matrix);
        values
            .into_iter()
            .enumerate()
            .filter(|&(_, w)| w > 0.0)
            .map(|(k, w)| (w, vectors.column(k).into_owned()))
            .collect()
    }

    pub(crate) fn relabel(mut self, layout: SpaceLayout) -> Result<Self> {
        if layout.total_dim() != self.layout.total_dim() {
            return Err(Error::layout(format!("cannot relabel {} as {layout}", self.layout)));
        }
        self.layout = layout;
        Ok(self)
    }
}

/// `½‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = hilbert::hermitian_part(&(a - b));
    0.5 * diff.symmetric_eigenvalues().iter().map(|e| e.abs()).sum::<f64>()
}

/// Orthogonal projector `P = P² = P†`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    layout: SpaceLayout,
    matrix: ComplexMatrix,
}

impl Projector {
    pub fn new(layout: SpaceLayout, matrix: ComplexMatrix) -> Result<Self> {
        check_square(&matrix, layout.total_dim(), "projector")?;
        check_finite(&matrix)?;
        let herm = hermiticity_defect(&matrix);
        let idem = max_norm(&(&matrix * &matrix - &matrix));
        if herm >= tol::ORTHONORMAL || idem >= tol::ORTHONORMAL {
            return Err(Error::validation(format!(
                "not an orthogonal projector: ‖P − P†‖ = {herm:e}, ‖P² − P‖ = {idem:e}"
            )));
        }
        Ok(Projector { layout, matrix })
    }

    /// `Σ_i |v_i⟩⟨v_i|` over orthonormal `vectors`.
    pub fn from_vectors(layout: SpaceLayout, vectors: &[ComplexVector]) -> Result<Self> {
        check_orthonormal(vectors, "projector vectors")?;
        let n = layout.total_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for v in vectors {
            if v.len() != n {
                return Err(Error::layout(format!("projector vector of length {} on {layout}", v.len())));
            }
            m += outer(v, v);
        }
        Ok(Projector { layout, matrix: m })
    }

    pub fn identity(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        Projector { layout, matrix: ComplexMatrix::identity(n, n) }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        hilbert::trace(&self.matrix).re.round() as usize
    }

    /// Pad with identities to act on `acts_on` inside a larger layout.
    pub fn embed(&self, layout: &SpaceLayout, acts_on: &[&str]) -> Result<Projector> {
        Ok(Projector { layout: layout.clone(), matrix: hilbert::embed(&self.matrix, layout, acts_on)? })
    }
}

/// Observable `A = Σ_m a_m P_m` given by eigenvalues and orthonormal
/// eigenvectors. Eigenvalues within the degeneracy tolerance share one
/// eigenspace; outcomes are numbered by first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    layout: SpaceLayout,
    eigenvalues: Vec<f64>,
    vectors: Vec<ComplexVector>,
    groups: Vec<Vec<usize>>,
}

impl ObservableBasis {
    pub fn new(layout: SpaceLayout, eigenvalues: Vec<f64>, vectors: Vec<ComplexVector>) -> Result<Self> {
        let n = layout.total_dim();
        if vectors.len() != n || eigenvalues.len() != n {
            return Err(Error::layout(format!(
                "basis on {layout} needs {n} eigenpairs, got {} values and {} vectors",
                eigenvalues.len(),
                vectors.len()
            )));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::layout(format!("eigenvector of length {} on {layout}", v.len())));
        }
        if eigenvalues.iter().any(|a| !a.is_finite()) {
            return Err(Error::validation("eigenvalues must be finite"));
        }
        check_orthonormal(&vectors, "eigenvectors")?;
        let groups = group_degenerate(&eigenvalues);
        Ok(ObservableBasis { layout, eigenvalues, vectors, groups })
    }

    /// Nondegenerate basis from orthonormal vectors, eigenvalue `k` for vector `k`.
    pub fn from_vectors(layout: SpaceLayout, vectors: Vec<ComplexVector>) -> Result<Self> {
        let eigenvalues = (0..vectors.len()).map(|k| k as f64).collect();
        Self::new(layout, eigenvalues, vectors)
    }

    /// Computational basis with eigenvalues `0, 1, …, d−1`.
    pub fn computational(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        let vectors = (0..n).map(|k| hilbert::basis_vector(n, k)).collect();
        Self::from_vectors(layout, vectors).expect("computational basis is orthonormal")
    }

    /// Eigenbasis of a Hermitian matrix.
    pub fn from_hermitian(layout: SpaceLayout, observable: &ComplexMatrix) -> Result<Self> {
        check_square(observable, layout.total_dim(), "observable")?;
        let herm = hermiticity_defect(observable);
        if herm >= tol::HERMITIAN {
            return Err(Error::validation(format!("observable is not Hermitian: defect {herm:e}")));
        }
        let (values, vecs) = hilbert::hermitian_eigen(observable);
        let vectors = (0..values.len()).map(|k| vecs.column(k).into_owned()).collect();
        Self::new(layout, values, vectors)
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &ComplexVector {
        &self.vectors[k]
    }

    /// Number of distinct eigenvalues.
    pub fn outcome_count(&self) -> usize {
        self.groups.len()
    }

    /// Vector indices spanning eigenspace `m`.
    pub fn group(&self, m: usize) -> &[usize] {
        &self.groups[m]
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.groups.len() == self.vectors.len()
    }

    pub fn projector(&self, m: usize) -> Result<Projector> {
        let group = self
            .groups
            .get(m)
            .ok_or_else(|| Error::layout(format!("outcome {m} out of range ({} outcomes)", self.groups.len())))?;
        let vecs: Vec<ComplexVector> = group.iter().map(|&k| self.vectors[k].clone()).collect();
        Projector::from_vectors(self.layout.clone(), &vecs)
    }

    pub fn projectors(&self) -> Vec<Projector> {
        (0..self.groups.len()).map(|m| self.projector(m).expect("outcome in range")).collect()
    }

    /// `A = Σ_k a_k |a_k⟩⟨a_k|`.
    pub fn observable(&self) -> ComplexMatrix {
        let n = self.layout.total_dim();
        let mut a = ComplexMatrix::zeros(n, n);
        for (v, &e) in self.vectors.iter().zip(&self.eigenvalues) {
            a += outer(v, v).scale(e);
        }
        a
    }

    /// Expansion coefficients `c_k = ⟨a_k|ψ⟩`.
    pub fn coefficients(&self, state: &PureState) -> Vec<Complex64> {
        self.vectors.iter().map(|v| v.dotc(state.amplitudes())).collect()
    }
}

fn group_degenerate(eigenvalues: &[f64]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, &a) in eigenvalues.iter().enumerate() {
        match groups.iter_mut().find(|g| g.iter().any(|&j| (eigenvalues[j] - a).abs() <= tol::DEGENERACY)) {
            Some(g) => g.push(k),
            None => groups.push(vec![k]),
        }
    }
    groups
}

/// `P|ψ⟩ / ‖P|ψ⟩‖`.
pub fn luders_project(state: &PureState, p: &Projector) -> Result<PureState> {
    if state.layout() != p.layout() {
        return Err(Error::layout(format!("state on {} but projector on {}", state.layout(), p.layout())));
    }
    let image = p.matrix() * state.amplitudes();
    let prob = image.norm_squared();
    if prob <= tol::CONDITIONING {
        return Err(Error::ZeroProbability { probability: prob, threshold: tol::CONDITIONING });
    }
    PureState::normalized(state.layout().clone(), image)
}

/// `PρP / Tr(PρP)`.
pub fn luders_project_density(rho: &DensityOperator, p: &Projector) -> Result<DensityOperator> {
    if rho.layout() != p.layout() {
        return Err(Error::layout(format!("state on {} but projector on {}", rho.layout(), p.layout())));
    }
    let projected = p.matrix() * rho.matrix() * p.matrix();
    let prob = hilbert::trace(&projected).re;
    if prob <= tol::CONDITIONING {
        return Err(Error::ZeroProbability { probability: prob, threshold: tol::CONDITIONING });
    }
    DensityOperator::from_unnormalized(rho.layout().clone(), &projected)
}

/// Projection of a two-particle state after outcome `m` of `basis1` on the
/// first particle. Contracts `⟨a_mi|` on particle 1 rather than forming the
/// embedded projector; returns the state and the outcome probability.
pub fn epr_luders(state: &PureState, basis1: &ObservableBasis, m: usize) -> Result<(PureState, f64)> {
    let layout = state.layout();
    if layout.len() != 2 {
        return Err(Error::layout(format!("expected a two-particle layout, got {layout}")));
    }
    let dims = layout.dims();
    let (d1, d2) = (dims[0], dims[1]);
    if basis1.layout().total_dim() != d1 {
        return Err(Error::layout(format!(
            "particle-1 basis has dimension {}, particle 1 has {d1}",
            basis1.layout().total_dim()
        )));
    }
    if m >= basis1.outcome_count() {
        return Err(Error::layout(format!("outcome {m} out of range ({} outcomes)", basis1.outcome_count())));
    }
    let psi = state.amplitudes();
    let mut out = ComplexVector::zeros(d1 * d2);
    for &k in basis1.group(m) {
        let a = basis1.vector(k);
        // φ_k = (⟨a_k| ⊗ I)|ψ⟩
        let phi = ComplexVector::from_fn(d2, |j, _| (0..d1).map(|i| a[i].conj() * psi[i * d2 + j]).sum());
        out += hilbert::tensor_vector(a, &phi);
    }
    let prob = out.norm_squared();
    if prob <= tol::CONDITIONING {
        return Err(Error::ZeroProbability { probability: prob, threshold: tol::CONDITIONING });
    }
    Ok((PureState::normalized(layout.clone(), out)?, prob))
}
