use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::epr::{EFFICIENCY_MODEL, FIDELITY_CONVENTION};
use crate::objects::DensityOperator;
use crate::tol;

use super::config::{OutputFormat, ScenarioConfig, WireMatrix};

/// Engine identification and numerical settings. Kept apart from the body so
/// that the body depends only on the scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub engine: String,
    pub version: String,
    pub tolerances: Tolerances,
    pub fidelity_convention: String,
    pub efficiency_model: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub unitary: f64,
    pub conditioning: f64,
    pub trace: f64,
    pub psd: f64,
    pub degeneracy: f64,
    pub nonideal_off_diagonal: f64,
    pub oracle: f64,
}

impl ReportHeader {
    pub fn current() -> Self {
        ReportHeader {
            engine: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            tolerances: Tolerances {
                hermitian: tol::HERMITIAN,
                unitary: tol::UNITARY,
                conditioning: tol::CONDITIONING,
                trace: tol::TRACE,
                psd: tol::PSD,
                degeneracy: tol::DEGENERACY,
                nonideal_off_diagonal: tol::NONIDEAL_OFF_DIAGONAL,
                oracle: tol::ORACLE,
            },
            fidelity_convention: FIDELITY_CONVENTION.to_owned(),
            efficiency_model: EFFICIENCY_MODEL.to_owned(),
        }
    }
}

/// One pointer outcome of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeReport {
    pub outcome: usize,
    /// Outcome index, or `no-click`.
    pub label: String,
    /// Simulated `p(m)`; exactly 0 when at or below the conditioning threshold.
    pub probability: f64,
    pub probability_closed_form: f64,
    /// No prepared state exists for this outcome.
    pub absent: bool,
    /// Simulated prepared state (object, or particle 2 for EPR runs).
    pub state: Option<WireMatrix>,
    pub closed_form_state: Option<WireMatrix>,
    /// `⟨a_m|ρ_m|a_m⟩` against the projection target; click outcomes only.
    pub fidelity_to_target: Option<f64>,
    /// Trace distance between the simulated and closed-form states.
    pub trace_distance_routes: Option<f64>,
}

/// Pairwise trace distances between the three routes for one outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub outcome: usize,
    pub direct_vs_tomographic: f64,
    pub direct_vs_closed_form: f64,
    pub tomographic_vs_closed_form: f64,
}

impl VerificationOutcome {
    pub(crate) fn new(
        outcome: usize,
        direct: &DensityOperator,
        tomographic: &DensityOperator,
        closed: &DensityOperator,
    ) -> Self {
        VerificationOutcome {
            outcome,
            direct_vs_tomographic: direct.trace_distance(tomographic),
            direct_vs_closed_form: direct.trace_distance(closed),
            tomographic_vs_closed_form: tomographic.trace_distance(closed),
        }
    }

    fn max(&self) -> f64 {
        self.direct_vs_tomographic.max(self.direct_vs_closed_form).max(self.tomographic_vs_closed_form)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub tolerance: f64,
    pub outcomes: Vec<VerificationOutcome>,
    pub max_disagreement: f64,
    pub agreed: bool,
}

impl Verification {
    pub(crate) fn new(tolerance: f64, outcomes: Vec<VerificationOutcome>) -> Self {
        let max_disagreement = outcomes.iter().map(VerificationOutcome::max).fold(0.0, f64::max);
        Verification { tolerance, outcomes, max_disagreement, agreed: max_disagreement <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    /// The resolved scenario, defaults filled in.
    pub config: ScenarioConfig,
    /// Which system the prepared states live on.
    pub prepared_system: String,
    /// `λ` actually simulated, including any no-click row.
    pub lambda: Option<Vec<Vec<f64>>>,
    pub outcomes: Vec<OutcomeReport>,
    pub total_click_probability: f64,
    /// `p(m, n)` against the configured test observable.
    pub joint_distribution: Option<Vec<Vec<f64>>>,
    pub verification: Option<Verification>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub header: ReportHeader,
    pub body: ReportBody,
}

impl RunReport {
    /// Whether `--verify` found the routes disagreeing beyond tolerance.
    pub fn disagrees(&self) -> bool {
        self.body.verification.as_ref().is_some_and(|v| !v.agreed)
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Render a report. JSON is the lossless canonical form; CSV has one row per
/// outcome; the table is for reading.
pub fn emit_report(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("outcome,p,fidelity_to_target,trace_distance_routes,absent\n");
            for o in &report.body.outcomes {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    o.label,
                    o.probability,
                    opt(o.fidelity_to_target),
                    opt(o.trace_distance_routes),
                    o.absent
                );
            }
            s
        }
        OutputFormat::Table => table(report),
    }
}

fn table(report: &RunReport) -> String {
    let body = &report.body;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} | {:?} scenario, dim {}, prepared system: {}",
        report.header.engine, report.header.version, body.config.kind, body.config.dim, body.prepared_system
    );
    let headers = ["outcome", "p", "fidelity", "trace distance", "state"];
    let rows: Vec<[String; 5]> = body
        .outcomes
        .iter()
        .map(|o| {
            [
                o.label.clone(),
                format!("{:.6}", o.probability),
                o.fidelity_to_target.map(|f| format!("{f:.6}")).unwrap_or_else(|| "-".into()),
                o.trace_distance_routes.map(|d| format!("{d:.3e}")).unwrap_or_else(|| "-".into()),
                if o.absent { "absent".into() } else { "present".into() },
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..5)
        .map(|k| rows.iter().map(|r| r[k].chars().count()).chain([headers[k].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: [&str; 5]| -> String {
        let mut l = String::new();
        for (k, c) in cells.iter().enumerate() {
            let pad = widths[k] - c.chars().count();
            if k > 0 {
                l.push_str("  ");
            }
            l.push_str(&" ".repeat(pad));
            l.push_str(c);
        }
        l.trim_end().to_owned()
    };
    let _ = writeln!(s, "{}", line(headers));
    for r in &rows {
        let _ = writeln!(s, "{}", line([&r[0], &r[1], &r[2], &r[3], &r[4]]));
    }
    let _ = writeln!(s, "total click probability: {:.6}", body.total_click_probability);
    if let Some(joint) = &body.joint_distribution {
        let _ = writeln!(s, "joint distribution p(m, n):");
        for (m, row) in joint.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|p| format!("{p:.6}")).collect();
            let _ = writeln!(s, "  m={m}: {}", cells.join("  "));
        }
    }
    if let Some(v) = &body.verification {
        let _ = writeln!(
            s,
            "verification: max route disagreement {:.3e} (tolerance {:e}) {}",
            v.max_disagreement,
            v.tolerance,
            if v.agreed { "ok" } else { "DISAGREE" }
        );
    }
    s
}
