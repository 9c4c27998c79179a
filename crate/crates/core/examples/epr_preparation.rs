// Conditional preparation of particle 2 by a noisy measurement on particle 1
// of a Bell pair: closed form against full simulation.

use condprep::epr::{epr_report, EprState};
use condprep::models::NonidealityMatrix;

pub fn run() -> condprep::Result<()> {
    let bell = EprState::bell();
    for p in [0.0, 0.1, 0.3] {
        let lam = NonidealityMatrix::symmetric_noise(2, p)?;
        let report = epr_report(&bell, &lam, None)?;
        println!("flip probability {p}:");
        for o in &report.outcomes {
            println!(
                "  m={} p = {:.3}  fidelity = {:.3}  route distance = {:.1e}",
                o.outcome,
                o.probability,
                o.fidelity.unwrap_or(f64::NAN),
                o.trace_distance.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> condprep::Result<()> {
    run()
}
