// Ideal measurement models: a first-kind coupling leaves the object in the
// measured eigenstate, a second-kind coupling leaves it in |ψ_m⟩.

use condprep::conditioning::conditional_states;
use condprep::hilbert::basis_vector;
use condprep::models::{build_first_kind, build_second_kind};
use condprep::objects::{ObservableBasis, PureState};
use condprep::{ComplexVector, SpaceLayout};
use num_complex::Complex64;

pub fn run() -> condprep::Result<()> {
    let layout = SpaceLayout::single("object", 2)?;
    let basis = ObservableBasis::computational(layout.clone());
    let rho = PureState::normalized(
        layout.clone(),
        ComplexVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]),
    )?
    .to_density();

    let first = conditional_states(&build_first_kind(&basis)?, &rho)?;
    for o in &first.outcomes {
        let f = o.state.as_ref().map(|s| s.fidelity_to(basis.vector(o.outcome)));
        println!("first kind  m={}: p = {:.3}, fidelity to |a_m> = {:?}", o.outcome, o.probability, f);
    }

    // Non-orthogonal final states.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = vec![basis_vector(2, 0), ComplexVector::from_vec(vec![s.into(), s.into()])];
    let second = conditional_states(&build_second_kind(&basis, &psi)?, &rho)?;
    for o in &second.outcomes {
        let f = o.state.as_ref().map(|st| st.fidelity_to(&psi[o.outcome]));
        println!("second kind m={}: p = {:.3}, fidelity to |psi_m> = {:?}", o.outcome, o.probability, f);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> condprep::Result<()> {
    run()
}
