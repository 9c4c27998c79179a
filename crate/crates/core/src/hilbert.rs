//! Dense complex algebra over finite-dimensional multipartite Hilbert spaces.
//!
//! A [`SpaceLayout`] names the tensor factors of a space in order. Operators
//! and vectors on the full space use the Kronecker (row-major) index
//! convention: the last factor varies fastest. [`partial_trace`], [`embed`]
//! and [`apply_on_factors`] take label sets and do all permutation bookkeeping
//! internally.

use std::collections::HashSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex matrix used for every operator and state.
pub type ComplexMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// One labelled tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labelled tensor factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Factor>", into = "Vec<Factor>")]
pub struct SpaceLayout {
    factors: Vec<Factor>,
}

impl SpaceLayout {
    pub fn new<I, S>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let factors: Vec<Factor> =
            factors.into_iter().map(|(label, dim)| Factor { label: label.into(), dim }).collect();
        Self::from_factors(factors)
    }

    fn from_factors(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::layout("a layout needs at least one factor"));
        }
        let mut seen = HashSet::new();
        for f in &factors {
            if f.dim == 0 {
                return Err(Error::layout(format!("factor `{}` has dimension 0", f.label)));
            }
            if !seen.insert(f.label.as_str()) {
                return Err(Error::layout(format!("duplicate factor label `{}`", f.label)));
            }
        }
        Ok(SpaceLayout { factors })
    }

    /// Single-factor layout.
    pub fn single(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(label.into(), dim)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.label.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::layout(format!("unknown factor label `{label}` in layout {self}")))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.position(label)?].dim)
    }

    /// Layout of `self` followed by `other`. Labels must stay unique.
    pub fn concat(&self, other: &SpaceLayout) -> Result<SpaceLayout> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::from_factors(factors)
    }

    /// Layout restricted to `labels`, kept in this layout's order.
    pub fn sublayout(&self, labels: &[&str]) -> Result<SpaceLayout> {
        let positions = self.sorted_positions(labels)?;
        Self::from_factors(positions.into_iter().map(|p| self.factors[p].clone()).collect())
    }

    /// Strides of the Kronecker index: last factor fastest.
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factors.len()];
        for k in (0..self.factors.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.factors[k + 1].dim;
        }
        strides
    }

    fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut seen = HashSet::new();
        labels
            .iter()
            .map(|l| {
                let p = self.position(l)?;
                if !seen.insert(p) {
                    return Err(Error::layout(format!("label `{l}` listed twice")));
                }
                Ok(p)
            })
            .collect()
    }

    fn sorted_positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut p = self.positions(labels)?;
        p.sort_unstable();
        Ok(p)
    }

    /// Full-space offsets of every multi-index over the factors at `positions`,
    /// enumerated in Kronecker order of those factors.
    fn offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &p in positions {
            let dim = self.factors[p].dim;
            let mut next = Vec::with_capacity(offsets.len() * dim);
            for &base in &offsets {
                for i in 0..dim {
                    next.push(base + i * strides[p]);
                }
            }
            offsets = next;
        }
        offsets
    }

    fn complement(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.factors.len()).filter(|p| !positions.contains(p)).collect()
    }
}

impl TryFrom<Vec<Factor>> for SpaceLayout {
    type Error = Error;

    fn try_from(factors: Vec<Factor>) -> Result<Self> {
        Self::from_factors(factors)
    }
}

impl From<SpaceLayout> for Vec<Factor> {
    fn from(layout: SpaceLayout) -> Self {
        layout.factors
    }
}

impl fmt::Display for SpaceLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, factor) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ⊗ ")?;
            }
            write!(f, "{}:{}", factor.label, factor.dim)?;
        }
        write!(f, ")")
    }
}

/// Unitary operator on a labelled space.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    layout: SpaceLayout,
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(layout: SpaceLayout, matrix: ComplexMatrix) -> Result<Self> {
        check_square(&matrix, layout.total_dim(), "unitary")?;
        check_finite(&matrix)?;
        let dev = unitarity_defect(&matrix);
        if dev >= tol::UNITARY {
            return Err(Error::validation(format!("operator is not unitary: ‖U†U − I‖_max = {dev:e}")));
        }
        Ok(UnitaryOperator { layout, matrix })
    }

    pub fn identity(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        UnitaryOperator { layout, matrix: ComplexMatrix::identity(n, n) }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> UnitaryOperator {
        UnitaryOperator { layout: self.layout.clone(), matrix: self.matrix.adjoint() }
    }

    /// Product `self · other` on the same layout.
    pub fn compose(&self, other: &UnitaryOperator) -> Result<UnitaryOperator> {
        if self.layout != other.layout {
            return Err(Error::layout(format!("cannot compose unitaries on {} and {}", self.layout, other.layout)));
        }
        Ok(UnitaryOperator { layout: self.layout.clone(), matrix: &self.matrix * &other.matrix })
    }
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    max_norm(&(u.adjoint() * u - ComplexMatrix::identity(n, n)))
}

/// Largest entry magnitude.
pub fn max_norm(x: &ComplexMatrix) -> f64 {
    x.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `‖X − X†‖_max`.
pub fn hermiticity_defect(x: &ComplexMatrix) -> f64 {
    if !x.is_square() {
        return f64::INFINITY;
    }
    max_norm(&(x - x.adjoint()))
}

/// `(X + X†)/2`.
pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()).scale(0.5)
}

pub fn trace(x: &ComplexMatrix) -> Complex64 {
    x.diagonal().sum()
}

pub fn check_finite(x: &ComplexMatrix) -> Result<()> {
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::validation("matrix has non-finite entries"))
    }
}

pub(crate) fn check_square(x: &ComplexMatrix, dim: usize, what: &str) -> Result<()> {
    if x.nrows() != dim || x.ncols() != dim {
        return Err(Error::layout(format!("{what} is {}×{}, expected {dim}×{dim}", x.nrows(), x.ncols())));
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = hermitian_part(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_columns(
        &order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> f64 {
    hermitian_part(h).symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(h: &ComplexMatrix, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let diag = ComplexMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&v| f(v))));
    &vectors * diag * vectors.adjoint()
}

/// Kronecker product; `a` is the leading factor.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of column vectors.
pub fn tensor_vector(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

/// `|u⟩⟨v|`.
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

/// Computational basis vector `|k⟩` of dimension `dim`.
pub fn basis_vector(dim: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[k] = ONE;
    v
}

/// Trace out every factor not in `keep`. The result acts on the kept factors
/// in layout order.
pub fn partial_trace(x: &ComplexMatrix, layout: &SpaceLayout, keep: &[&str]) -> Result<ComplexMatrix> {
    check_square(x, layout.total_dim(), "operator")?;
    let kept = layout.sorted_positions(keep)?;
    let traced = layout.complement(&kept);
    let kept_off = layout.offsets(&kept);
    let traced_off = layout.offsets(&traced);
    let n = kept_off.len();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (row, col) = (kept_off[r], kept_off[c]);
        traced_off.iter().map(|&t| x[(row + t, col + t)]).sum()
    }))
}

/// Pad `op` with identities on the factors not in `acts_on`. `op`'s own tensor
/// order follows the order of `acts_on`.
pub fn embed(op: &ComplexMatrix, layout: &SpaceLayout, acts_on: &[&str]) -> Result<ComplexMatrix> {
    let (act_off, rest_off) = action_offsets(op, layout, acts_on)?;
    let n = layout.total_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for &r in &rest_off {
        for (a, &ra) in act_off.iter().enumerate() {
            for (b, &rb) in act_off.iter().enumerate() {
                out[(ra + r, rb + r)] = op[(a, b)];
            }
        }
    }
    Ok(out)
}

/// `embed(op, layout, acts_on) · v` without forming the embedded matrix.
pub fn apply_on_factors(
    op: &ComplexMatrix,
    layout: &SpaceLayout,
    acts_on: &[&str],
    v: &ComplexVector,
) -> Result<ComplexVector> {
    if v.len() != layout.total_dim() {
        return Err(Error::layout(format!(
            "vector has length {}, layout {layout} needs {}",
            v.len(),
            layout.total_dim()
        )));
    }
    let (act_off, rest_off) = action_offsets(op, layout, acts_on)?;
    let mut out = ComplexVector::zeros(v.len());
    let mut local = ComplexVector::zeros(act_off.len());
    for &r in &rest_off {
        for (b, &rb) in act_off.iter().enumerate() {
            local[b] = v[rb + r];
        }
        let image = op * &local;
        for (a, &ra) in act_off.iter().enumerate() {
            out[ra + r] = image[a];
        }
    }
    Ok(out)
}

/// `(⟨bra| ⊗ I) v` with `bra` on the factors `labels` (in that order). The
/// result lives on the remaining factors in layout order.
pub fn contract(
    v: &ComplexVector,
    layout: &SpaceLayout,
    labels: &[&str],
    bra: &ComplexVector,
) -> Result<ComplexVector> {
    if v.len() != layout.total_dim() {
        return Err(Error::layout(format!("vector of length {} on layout {layout}", v.len())));
    }
    let positions = layout.positions(labels)?;
    let bra_off = layout.offsets(&positions);
    if bra.len() != bra_off.len() {
        return Err(Error::layout(format!("bra of length {} for factors {labels:?}", bra.len())));
    }
    let rest_off = layout.offsets(&layout.complement(&positions));
    Ok(ComplexVector::from_iterator(
        rest_off.len(),
        rest_off.iter().map(|&r| bra_off.iter().zip(bra.iter()).map(|(&b, z)| z.conj() * v[b + r]).sum()),
    ))
}

fn action_offsets(op: &ComplexMatrix, layout: &SpaceLayout, acts_on: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
    let acting = layout.positions(acts_on)?;
    let dim: usize = acting.iter().map(|&p| layout.factors[p].dim).product();
    check_square(op, dim, "embedded operator")?;
    let rest = layout.complement(&acting);
    Ok((layout.offsets(&acting), layout.offsets(&rest)))
}

/// `exp(−i·h_scaled)` through the spectral decomposition of the Hermitian
/// input. `h_scaled` is the product of an interaction Hamiltonian and its
/// duration.
pub fn hermitian_exp(h_scaled: &ComplexMatrix, layout: &SpaceLayout) -> Result<UnitaryOperator> {
    check_square(h_scaled, layout.total_dim(), "Hamiltonian")?;
    check_finite(h_scaled)?;
    let dev = hermiticity_defect(h_scaled);
    if dev >= tol::HERMITIAN {
        return Err(Error::validation(format!("Hamiltonian is not Hermitian: ‖H − H†‖_max = {dev:e}")));
    }
    let u = hermitian_function(h_scaled, |e| Complex64::from_polar(1.0, -e));
    UnitaryOperator::new(layout.clone(), u)
}

/// Unitary taking each `from[k]` to `to[k]`, completed on the orthogonal
/// complements by Gram-Schmidt over the canonical basis in index order.
///
/// Both families must be orthonormal.
pub fn complete_isometry(
    from: &[ComplexVector],
    to: &[ComplexVector],
    layout: &SpaceLayout,
) -> Result<UnitaryOperator> {
    let n = layout.total_dim();
    if from.len() != to.len() {
        return Err(Error::layout(format!("{} source vectors but {} targets", from.len(), to.len())));
    }
    for v in from.iter().chain(to) {
        if v.len() != n {
            return Err(Error::layout(format!("vector of length {} on layout {layout}", v.len())));
        }
    }
    check_orthonormal(from, "source vectors")?;
    check_orthonormal(to, "target vectors")?;
    let domain = extend_to_basis(from);
    let range = extend_to_basis(to);
    let mut u = ComplexMatrix::zeros(n, n);
    for (d, r) in domain.iter().zip(&range) {
        u += outer(r, d);
    }
    UnitaryOperator::new(layout.clone(), u)
}

pub(crate) fn check_orthonormal(vectors: &[ComplexVector], what: &str) -> Result<()> {
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate().skip(i) {
            let expected = if i == j { ONE } else { ZERO };
            let dev = (u.dotc(v) - expected).norm();
            if dev >= tol::ORTHONORMAL {
                return Err(Error::validation(format!("{what} are not orthonormal: |⟨v{i}|v{j}⟩ − δ| = {dev:e}")));
            }
        }
    }
    Ok(())
}

/// Extend an orthonormal family to a full basis with modified Gram-Schmidt
/// over `|0⟩, |1⟩, …`.
fn extend_to_basis(vectors: &[ComplexVector]) -> Vec<ComplexVector> {
    let n = vectors.first().map_or(0, |v| v.len());
    let mut basis: Vec<ComplexVector> = vectors.to_vec();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut candidate = basis_vector(n, k);
        // two passes keep the residual orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&candidate);
                candidate -= b * overlap;
            }
        }
        let norm = candidate.norm();
        if norm > 1e-6 {
            basis.push(candidate / Complex64::from(norm));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    fn layout(dims: &[usize]) -> SpaceLayout {
        SpaceLayout::new(dims.iter().enumerate().map(|(k, &d)| (format!("f{k}"), d))).unwrap()
    }

    #[test]
    fn layout_rejects_zero_dims_and_duplicate_labels() {
        assert!(matches!(SpaceLayout::new([("a", 0)]), Err(Error::Layout(_))));
        assert!(matches!(SpaceLayout::new([("a", 2), ("a", 3)]), Err(Error::Layout(_))));
        assert_eq!(layout(&[2, 3, 4]).total_dim(), 24);
    }

    #[test]
    fn identity_tensor_identity() {
        let i6 = tensor_product(&ComplexMatrix::identity(2, 2), &ComplexMatrix::identity(3, 3));
        assert_eq!(i6, ComplexMatrix::identity(6, 6));
    }

    #[test]
    fn basis_bookkeeping() {
        let v = tensor_vector(&basis_vector(2, 0), &basis_vector(2, 1));
        assert_eq!(v.as_slice(), &[ZERO, ONE, ZERO, ZERO]);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(0.5, -1.0), c(3.0, 0.0)]);
        let b = ComplexMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(-0.5, 0.0)]);
        let l = layout(&[2, 2]);
        let reduced = partial_trace(&tensor_product(&a, &b), &l, &["f0"]).unwrap();
        assert!(max_norm(&(reduced - a.scale(1.5))) < 1e-14);
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexVector::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]);
        let rho = outer(&bell, &bell);
        let reduced = partial_trace(&rho, &layout(&[2, 2]), &["f1"]).unwrap();
        let half = ComplexMatrix::identity(2, 2).scale(0.5);
        assert!(max_norm(&(reduced - half)) < 1e-15);
    }

    #[test]
    fn partial_trace_unknown_label() {
        let x = ComplexMatrix::identity(4, 4);
        assert!(matches!(partial_trace(&x, &layout(&[2, 2]), &["nope"]), Err(Error::Layout(_))));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = hermitian_exp(&ComplexMatrix::zeros(3, 3), &layout(&[3])).unwrap();
        assert!(max_norm(&(u.matrix() - ComplexMatrix::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn exp_of_half_pi_sigma_x() {
        // exp(−iπσx/2) = cos(π/2)·I − i·sin(π/2)·σx = −iσx
        let h = sigma_x().scale(std::f64::consts::FRAC_PI_2);
        let u = hermitian_exp(&h, &layout(&[2])).unwrap();
        let expected = ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, -I, ZERO]);
        assert!(max_norm(&(u.matrix() - expected)) < 1e-14);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let h = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(hermitian_exp(&h, &layout(&[2])), Err(Error::Validation(_))));
    }

    #[test]
    fn embed_pads_with_identity() {
        let l = layout(&[2, 2]);
        let e = embed(&sigma_z(), &l, &["f0"]).unwrap();
        assert_eq!(e, tensor_product(&sigma_z(), &ComplexMatrix::identity(2, 2)));
        let e = embed(&ComplexMatrix::identity(2, 2), &l, &["f1"]).unwrap();
        assert_eq!(e, ComplexMatrix::identity(4, 4));
    }

    #[test]
    fn embed_respects_acts_on_order() {
        // op = σz ⊗ σx with tensor order (f1, f0) is σx ⊗ σz in layout order
        let l = layout(&[2, 2]);
        let op = tensor_product(&sigma_z(), &sigma_x());
        let e = embed(&op, &l, &["f1", "f0"]).unwrap();
        assert_eq!(e, tensor_product(&sigma_x(), &sigma_z()));
    }

    #[test]
    fn embed_dim_mismatch() {
        let l = layout(&[2, 3]);
        assert!(matches!(embed(&sigma_z(), &l, &["f1"]), Err(Error::Layout(_))));
    }

    #[test]
    fn apply_matches_embed() {
        let l = layout(&[2, 3, 2]);
        let op = tensor_product(&sigma_x(), &sigma_z().scale(2.0));
        let v = ComplexVector::from_fn(12, |k, _| c(k as f64, 1.0 - k as f64));
        let direct = embed(&op, &l, &["f2", "f0"]).unwrap() * &v;
        let applied = apply_on_factors(&op, &l, &["f2", "f0"], &v).unwrap();
        assert!((direct - applied).norm() < 1e-13);
    }

    #[test]
    fn isometry_completion_is_unitary_and_maps_vectors() {
        let l = layout(&[3]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let from = vec![basis_vector(3, 0)];
        let to = vec![ComplexVector::from_vec(vec![ZERO, c(s, 0.0), c(0.0, s)])];
        let u = complete_isometry(&from, &to, &l).unwrap();
        assert!((u.matrix() * &from[0] - &to[0]).norm() < 1e-14);
        assert!(unitarity_defect(u.matrix()) < 1e-14);
    }
}
