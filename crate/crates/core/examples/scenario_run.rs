// Run a scenario from JSON text, the same path the CLI takes.

use condprep::scenario::{emit_report, parse_scenario, run_scenario, OutputFormat};

const SCENARIO: &str = r#"{
  "kind": "epr",
  "state": { "schmidt_weights": [0.5, 0.3, 0.2] },
  "model": { "type": "lambda", "lambda": { "symmetric-noise": 0.1 } },
  "verify": true
}"#;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_scenario(SCENARIO)?;
    let report = run_scenario(&config)?;
    print!("{}", emit_report(&report, OutputFormat::Table));
    print!("{}", emit_report(&report, OutputFormat::Csv));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
