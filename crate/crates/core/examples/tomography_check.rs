// Reconstruct a prepared particle-2 state from joint statistics with an
// informationally complete family, and compare it with the other routes.

use condprep::epr::{particle2_conditional_closed_form, particle2_conditional_simulated, EprState};
use condprep::models::{build_lambda_model, NonidealityMatrix};
use condprep::oracle::{make_ic_family, tomographic_particle2};
use num_complex::Complex64;

pub fn run() -> condprep::Result<()> {
    let family = make_ic_family(3)?;
    println!(
        "IC family: {} elements, rank {}, condition {:.2}",
        family.elements().len(),
        family.rank(),
        family.condition_number()
    );

    let pair =
        EprState::computational(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.64), Complex64::new(0.48, 0.0)])?;
    let lam = NonidealityMatrix::symmetric_noise(3, 0.15)?;
    let model = build_lambda_model(pair.basis1(), &lam)?;
    let direct = particle2_conditional_simulated(&pair, &model)?;
    let closed = particle2_conditional_closed_form(&pair, &lam)?;
    for m in 0..3 {
        let (Some(d), Some(c)) = (direct.state(m), closed.state(m)) else { continue };
        let t = tomographic_particle2(&pair, &model, m)?;
        println!(
            "m={m}: direct-tomo {:.1e}  direct-closed {:.1e}  tomo-closed {:.1e}",
            d.trace_distance(&t),
            d.trace_distance(c),
            t.trace_distance(c)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> condprep::Result<()> {
    run()
}
