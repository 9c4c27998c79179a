// A nonideal measurement described by λ: build the apparatus model, read λ
// back from it, and extract the POVM it implements.

use condprep::conditioning::outcome_probabilities;
use condprep::models::{build_lambda_model, extract_povm, verify_nonideality, NonidealityCheck, NonidealityMatrix};
use condprep::objects::{DensityOperator, ObservableBasis};
use condprep::SpaceLayout;

pub fn run() -> condprep::Result<()> {
    let layout = SpaceLayout::single("object", 3)?;
    let basis = ObservableBasis::computational(layout.clone());
    let lam = NonidealityMatrix::new(vec![vec![0.8, 0.1, 0.0], vec![0.2, 0.7, 0.3], vec![0.0, 0.2, 0.7]])?;
    let model = build_lambda_model(&basis, &lam)?;
    println!("apparatus dimension {}", model.apparatus_layout().total_dim());

    match verify_nonideality(&model, &basis)? {
        NonidealityCheck::Nonideal(found) => println!("recovered λ, max deviation {:.2e}", found.max_abs_diff(&lam)),
        other => println!("not a λ-measurement: {other}"),
    }

    let povm = extract_povm(&model)?;
    println!("POVM completeness defect {:.2e}", povm.completeness_defect());
    let rho = DensityOperator::mixture(layout, &[0.5, 0.3, 0.2], basis.vectors())?;
    println!("Tr(rho M_m)        = {:.6?}", povm.probabilities(&rho));
    println!("simulated p(m)     = {:.6?}", outcome_probabilities(&model, &rho)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> condprep::Result<()> {
    run()
}
