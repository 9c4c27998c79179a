// Lüders projection on a degenerate observable, and the EPR collapse it
// predicts for particle 2.

use condprep::epr::{EprState, PARTICLE_2};
use condprep::hilbert::ComplexMatrix;
use condprep::objects::{epr_luders, luders_project, ObservableBasis, PureState};
use condprep::{ComplexVector, SpaceLayout};
use num_complex::Complex64;

fn show(v: &ComplexVector) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:+.3}{:+.3}i", z.re, z.im)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn run() -> condprep::Result<()> {
    // Qutrit observable diag(1, 1, -1): outcome 1 is doubly degenerate.
    let layout = SpaceLayout::single("q", 3)?;
    let a = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![1.0.into(), 1.0.into(), (-1.0).into()]));
    let basis = ObservableBasis::from_hermitian(layout.clone(), &a)?;
    println!("eigenvalues {:?}, {} outcomes", basis.eigenvalues(), basis.outcome_count());

    let psi = PureState::normalized(
        layout,
        ComplexVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]),
    )?;
    for m in 0..basis.outcome_count() {
        let p = basis.projector(m)?;
        let post = luders_project(&psi, &p)?;
        println!("outcome {m}: rank {} projector, post-state {}", p.rank(), show(post.amplitudes()));
    }

    let bell = EprState::bell();
    for m in 0..2 {
        let (post, p) = epr_luders(bell.state(), bell.basis1(), m)?;
        let rho2 = post.to_density().reduce(&[PARTICLE_2])?;
        println!(
            "EPR outcome {m}: p = {p:.3}, particle 2 fidelity to |a2_{m}> = {:.3}",
            rho2.fidelity_to(bell.basis2().vector(m))
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> condprep::Result<()> {
    run()
}
