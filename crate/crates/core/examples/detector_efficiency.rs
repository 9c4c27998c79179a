// Finite detector efficiency adds a no-click outcome; selecting on it leaves
// particle 2 in the unconditioned reduced state.

use condprep::epr::{epr_report, EprState};
use condprep::models::NonidealityMatrix;

pub fn run() -> condprep::Result<()> {
    let bell = EprState::bell();
    let report = epr_report(&bell, &NonidealityMatrix::identity(2), Some(0.8))?;
    for o in &report.outcomes {
        let label = if o.no_click { "no-click".to_owned() } else { o.outcome.to_string() };
        println!("{label:>8}: p = {:.3}", o.probability);
    }
    if let Some(state) = report.no_click().and_then(|o| o.simulated.as_ref()) {
        let m = state.matrix();
        println!(
            "no-click particle-2 state: diag ({:.3}, {:.3}), purity {:.3}",
            m[(0, 0)].re,
            m[(1, 1)].re,
            state.purity()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> condprep::Result<()> {
    run()
}
