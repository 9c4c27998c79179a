// Labelled tensor-product spaces: embedding operators on chosen factors,
// partial traces, and unitary evolution from a Hermitian generator.

use condprep::hilbert::{embed, hermitian_exp, outer, partial_trace, tensor_product, ComplexMatrix};
use condprep::objects::{DensityOperator, PureState};
use condprep::{ComplexVector, SpaceLayout};
use num_complex::Complex64;

pub fn run() -> condprep::Result<()> {
    let layout = SpaceLayout::new([("a", 2), ("b", 3), ("c", 2)])?;
    println!("layout {layout}, total dimension {}", layout.total_dim());

    // σx on factor c, then on a: embedding handles the ordering.
    let sx = ComplexMatrix::from_row_slice(2, 2, &[0.0.into(), 1.0.into(), 1.0.into(), 0.0.into()]);
    let on_c = embed(&sx, &layout, &["c"])?;
    let on_a = embed(&sx, &layout, &["a"])?;
    println!("[σx_a, σx_c] = 0: {}", (&on_a * &on_c - &on_c * &on_a).norm() < 1e-14);

    // A product state traces back to its factors.
    let plus = ComplexVector::from_vec(vec![Complex64::from(0.6), Complex64::from(0.8)]);
    let mid = ComplexVector::from_vec(vec![Complex64::from(1.0), Complex64::from(0.0), Complex64::from(0.0)]);
    let rho = tensor_product(&tensor_product(&outer(&plus, &plus), &outer(&mid, &mid)), &outer(&plus, &plus));
    let rho_ac = partial_trace(&rho, &layout, &["a", "c"])?;
    println!("Tr_b ρ on (a, c): {}×{} with trace {:.3}", rho_ac.nrows(), rho_ac.ncols(), rho_ac.trace().re);

    // exp(-i t σx) rotates |0⟩ towards |1⟩.
    let qubit = SpaceLayout::single("q", 2)?;
    let u = hermitian_exp(&(sx * Complex64::from(std::f64::consts::FRAC_PI_4)), &qubit)?;
    let zero = PureState::basis(qubit.clone(), 0)?;
    let out = DensityOperator::new(qubit, u.matrix() * zero.to_density().matrix() * u.matrix().adjoint())?;
    println!("exp(-iπσx/4)|0⟩ has populations ({:.3}, {:.3})", out.matrix()[(0, 0)].re, out.matrix()[(1, 1)].re);
    Ok(())
}

#[allow(dead_code)]
fn main() -> condprep::Result<()> {
    run()
}
