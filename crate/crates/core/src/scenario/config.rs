//! Scenario files.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "kind": "epr",
//!   "state": { "coefficients": [0.7071, 0.7071] },
//!   "model": { "type": "lambda", "lambda": [[0.9, 0.1], [0.1, 0.9]], "eta": 0.8 },
//!   "verify": true,
//!   "format": "json"
//! }
//! ```
//!
//! Complex numbers are a bare real number or a `[re, im]` pair; matrices are
//! row-major nested lists. State vectors (coefficients, `psi`, basis vectors)
//! are normalized on load. See `docs/scenario.schema.json` for the full schema.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hilbert::{ComplexMatrix, ComplexVector};
use crate::models::NonidealityMatrix;
use crate::tol;

use super::ScenarioError;

/// Complex number on the wire, `[re, im]`.
pub type WireComplex = [f64; 2];
/// Row-major complex matrix on the wire.
pub type WireMatrix = Vec<Vec<WireComplex>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// One object measured directly.
    #[serde(alias = "single-system")]
    Single,
    /// Entangled pair; particle 1 is measured, particle 2 is prepared.
    Epr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!("unknown format `{other}` (expected json, csv or table)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Table => "table",
        })
    }
}

/// Initial state after resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateConfig {
    /// State vector; Schmidt coefficients for EPR scenarios.
    Coefficients(Vec<WireComplex>),
    /// Density matrix (single-system scenarios only).
    Density(WireMatrix),
}

/// Measurement model after resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ModelConfig {
    FirstKind,
    SecondKind { psi: Vec<Vec<WireComplex>> },
    Lambda { lambda: NonidealityMatrix, eta: Option<f64> },
}

/// Fully resolved, validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub dim: usize,
    pub state: StateConfig,
    /// Eigenbasis of the measured observable (particle 1 for EPR).
    pub basis: Vec<Vec<WireComplex>>,
    /// Schmidt basis of particle 2; EPR only.
    pub basis2: Option<Vec<Vec<WireComplex>>>,
    pub model: ModelConfig,
    /// Eigenbasis of a test observable measured jointly with the pointer.
    pub test_observable: Option<Vec<Vec<WireComplex>>>,
    pub verify: bool,
    pub tolerance: f64,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Real(f64),
    Pair(WireComplex),
}

impl RawComplex {
    fn value(&self) -> Complex64 {
        match *self {
            RawComplex::Real(re) => Complex64::new(re, 0.0),
            RawComplex::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawState {
    Coefficients(Vec<RawComplex>),
    Density(Vec<Vec<RawComplex>>),
    Preset(String),
    SchmidtWeights(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawLambda {
    Matrix(Vec<Vec<f64>>),
    Named(String),
    Noise {
        #[serde(rename = "symmetric-noise")]
        p: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum RawModel {
    FirstKind,
    SecondKind { psi: Vec<Vec<RawComplex>> },
    Lambda { lambda: RawLambda, eta: Option<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: ScenarioKind,
    dim: Option<usize>,
    state: RawState,
    model: RawModel,
    basis: Option<Vec<Vec<RawComplex>>>,
    basis2: Option<Vec<Vec<RawComplex>>>,
    test_observable: Option<Vec<Vec<RawComplex>>>,
    #[serde(default)]
    verify: bool,
    tolerance: Option<f64>,
    format: Option<OutputFormat>,
}

/// Named initial states.
pub const STATE_PRESETS: &[(&str, &str)] = &[
    ("bell", "epr: maximally entangled state Σ_m |m⟩|m⟩/√d (d defaults to 2)"),
    ("ghz-like", "epr: diagonal Schmidt state Σ_m √w_m |m⟩|m⟩, given as {\"schmidt_weights\": [w_0, …]}"),
    ("uniform", "single: equal superposition Σ_m |m⟩/√d"),
    ("maximally-mixed", "single: I/d"),
];

/// Named nonideality patterns.
pub const LAMBDA_PRESETS: &[(&str, &str)] = &[
    ("identity", "\"identity\": ideal measurement, λ_mm' = δ_mm'"),
    ("symmetric-noise", "{\"symmetric-noise\": p}: λ_mm = 1 − p, off-diagonal p/(d − 1)"),
    ("uniform", "\"uniform\": every entry 1/d, the pointer carries no information"),
];

fn validation(field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation { field: field.to_owned(), message: message.into() }
}

fn wire(z: Complex64) -> WireComplex {
    [z.re, z.im]
}

fn normalize(field: &str, raw: &[RawComplex]) -> Result<Vec<WireComplex>, ScenarioError> {
    let values: Vec<Complex64> = raw.iter().map(RawComplex::value).collect();
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(validation(field, "entries must be finite"));
    }
    let norm = values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm.is_nan() || norm <= 0.0 {
        return Err(validation(field, "vector is zero"));
    }
    // Leave unit vectors untouched so a resolved config re-parses to itself.
    let scale = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON { 1.0 } else { norm };
    Ok(values.into_iter().map(|z| wire(z / scale)).collect())
}

fn vectors(field: &str, raw: &[Vec<RawComplex>]) -> Result<Vec<Vec<WireComplex>>, ScenarioError> {
    raw.iter().enumerate().map(|(k, v)| normalize(&format!("{field}[{k}]"), v)).collect()
}

/// Tracks which field first fixed the dimension.
struct DimResolver {
    source: Option<(String, usize)>,
}

impl DimResolver {
    fn observe(&mut self, field: &str, dim: usize) -> Result<(), ScenarioError> {
        if dim == 0 {
            return Err(validation(field, "dimension must be positive"));
        }
        match &self.source {
            None => {
                self.source = Some((field.to_owned(), dim));
                Ok(())
            }
            Some((first, d)) if *d != dim => Err(validation(
                field,
                format!("dimension mismatch: {field} implies dimension {dim} but {first} implies {d}"),
            )),
            Some(_) => Ok(()),
        }
    }
}

/// Parse and validate a scenario from JSON text.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    resolve(raw)
}

/// Read and parse a scenario file.
pub fn parse_scenario_file(path: impl AsRef<Path>) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| ScenarioError::Io { path: path.as_ref().display().to_string(), message: e.to_string() })?;
    parse_scenario(&text)
}

fn resolve(raw: RawScenario) -> Result<ScenarioConfig, ScenarioError> {
    let mut dims = DimResolver { source: None };
    if let Some(d) = raw.dim {
        dims.observe("dim", d)?;
    }
    let epr = raw.kind == ScenarioKind::Epr;

    // state
    let mut preset_dim: Option<(&str, String)> = None;
    let state = match &raw.state {
        RawState::Coefficients(c) => {
            dims.observe("state.coefficients", c.len())?;
            Some(StateConfig::Coefficients(normalize("state.coefficients", c)?))
        }
        RawState::Density(rows) => {
            if epr {
                return Err(validation(
                    "state.density",
                    "EPR scenarios need Schmidt coefficients, not a density matrix",
                ));
            }
            dims.observe("state.density", rows.len())?;
            if let Some(r) = rows.iter().position(|r| r.len() != rows.len()) {
                return Err(validation(
                    "state.density",
                    format!("row {r} has {} entries, expected {}", rows[r].len(), rows.len()),
                ));
            }
            let m: WireMatrix = rows.iter().map(|r| r.iter().map(|z| wire(z.value())).collect()).collect();
            Some(StateConfig::Density(m))
        }
        RawState::SchmidtWeights(w) => {
            if !epr {
                return Err(validation("state.schmidt_weights", "Schmidt weights need kind `epr`"));
            }
            dims.observe("state.schmidt_weights", w.len())?;
            if let Some(k) = w.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
                return Err(validation("state.schmidt_weights", format!("weight {k} is not a non-negative number")));
            }
            let c: Vec<RawComplex> = w.iter().map(|x| RawComplex::Real(x.sqrt())).collect();
            Some(StateConfig::Coefficients(normalize("state.schmidt_weights", &c)?))
        }
        RawState::Preset(name) => {
            match (name.as_str(), epr) {
                ("bell", true) | ("uniform", false) | ("maximally-mixed", false) => {}
                ("bell", false) => return Err(validation("state.preset", "preset `bell` needs kind `epr`")),
                ("uniform" | "maximally-mixed", true) => {
                    return Err(validation("state.preset", format!("preset `{name}` needs kind `single`")))
                }
                _ => {
                    let known: Vec<&str> = STATE_PRESETS.iter().map(|p| p.0).collect();
                    return Err(validation(
                        "state.preset",
                        format!("unknown preset `{name}`; known presets: {}", known.join(", ")),
                    ));
                }
            }
            preset_dim = Some(("state.preset", name.clone()));
            None
        }
    };

    // model
    let model = match &raw.model {
        RawModel::FirstKind => ModelConfig::FirstKind,
        RawModel::SecondKind { psi } => {
            dims.observe("model.psi (number of vectors)", psi.len())?;
            for (k, v) in psi.iter().enumerate() {
                dims.observe(&format!("model.psi[{k}] (length)"), v.len())?;
            }
            ModelConfig::SecondKind { psi: vectors("model.psi", psi)? }
        }
        RawModel::Lambda { lambda, eta } => {
            if let Some(eta) = eta {
                if !(0.0..=1.0).contains(eta) {
                    return Err(validation("model.eta", format!("detector efficiency {eta} outside [0, 1]")));
                }
            }
            let lam = match lambda {
                RawLambda::Matrix(rows) => {
                    if let Some(first) = rows.first() {
                        dims.observe("model.lambda (columns)", first.len())?;
                    }
                    NonidealityMatrix::new(rows.clone()).map_err(|e| validation("model.lambda", e.to_string()))?
                }
                RawLambda::Named(name) => {
                    let d = named_dim(&dims, raw.basis.as_deref(), raw.basis2.as_deref());
                    match name.as_str() {
                        "identity" => NonidealityMatrix::identity(d),
                        "uniform" => NonidealityMatrix::uniform(d),
                        other => {
                            return Err(validation(
                                "model.lambda",
                                format!(
                                    "unknown λ preset `{other}`; use identity, uniform or {{\"symmetric-noise\": p}}"
                                ),
                            ))
                        }
                    }
                }
                RawLambda::Noise { p } => {
                    let d = named_dim(&dims, raw.basis.as_deref(), raw.basis2.as_deref());
                    NonidealityMatrix::symmetric_noise(d, *p).map_err(|e| validation("model.lambda", e.to_string()))?
                }
            };
            ModelConfig::Lambda { lambda: lam, eta: *eta }
        }
    };

    // bases
    let basis = match &raw.basis {
        Some(b) => {
            dims.observe("basis (number of vectors)", b.len())?;
            for (k, v) in b.iter().enumerate() {
                dims.observe(&format!("basis[{k}] (length)"), v.len())?;
            }
            Some(vectors("basis", b)?)
        }
        None => None,
    };
    let basis2 = match &raw.basis2 {
        Some(_) if !epr => return Err(validation("basis2", "a particle-2 basis needs kind `epr`")),
        Some(b) => {
            dims.observe("basis2 (number of vectors)", b.len())?;
            for (k, v) in b.iter().enumerate() {
                dims.observe(&format!("basis2[{k}] (length)"), v.len())?;
            }
            Some(vectors("basis2", b)?)
        }
        None => None,
    };
    let test_observable = match &raw.test_observable {
        Some(_) if epr => {
            return Err(validation("test_observable", "test observables are only supported for kind `single`"))
        }
        Some(b) => {
            dims.observe("test_observable (number of vectors)", b.len())?;
            for (k, v) in b.iter().enumerate() {
                dims.observe(&format!("test_observable[{k}] (length)"), v.len())?;
            }
            Some(vectors("test_observable", b)?)
        }
        None => None,
    };

    let dim = match (&dims.source, &preset_dim) {
        (Some((_, d)), _) => *d,
        (None, Some(_)) if epr => 2,
        (None, _) => return Err(validation("dim", "cannot infer the dimension; give `dim` or an explicit state")),
    };
    let state = match state {
        Some(s) => s,
        None => preset_state(preset_dim.map(|p| p.1).as_deref().unwrap_or_default(), dim),
    };
    let computational = || -> Vec<Vec<WireComplex>> {
        (0..dim).map(|k| (0..dim).map(|j| if j == k { [1.0, 0.0] } else { [0.0, 0.0] }).collect()).collect()
    };
    let basis = basis.unwrap_or_else(computational);
    let basis2 = if epr { Some(basis2.unwrap_or_else(computational)) } else { None };

    let tolerance = raw.tolerance.unwrap_or(tol::ORACLE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(validation("tolerance", format!("tolerance {tolerance} must be a non-negative number")));
    }
    let config = ScenarioConfig {
        kind: raw.kind,
        dim,
        state,
        basis,
        basis2,
        model,
        test_observable,
        verify: raw.verify,
        tolerance,
        format: raw.format.unwrap_or_default(),
    };
    config.check_orthonormal()?;
    Ok(config)
}

/// Dimension for a named λ pattern: whatever fixed it so far, else the basis
/// length, else 2.
fn named_dim(dims: &DimResolver, basis: Option<&[Vec<RawComplex>]>, basis2: Option<&[Vec<RawComplex>]>) -> usize {
    dims.source.as_ref().map(|s| s.1).or(basis.map(<[_]>::len)).or(basis2.map(<[_]>::len)).unwrap_or(2)
}

fn preset_state(name: &str, dim: usize) -> StateConfig {
    let amp = 1.0 / (dim as f64).sqrt();
    match name {
        "maximally-mixed" => StateConfig::Density(
            (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { [1.0 / dim as f64, 0.0] } else { [0.0, 0.0] }).collect())
                .collect(),
        ),
        // bell and uniform share the equal-weight coefficient list
        _ => StateConfig::Coefficients(vec![[amp, 0.0]; dim]),
    }
}

impl ScenarioConfig {
    fn check_orthonormal(&self) -> Result<(), ScenarioError> {
        let check = |field: &str, vs: &[Vec<WireComplex>]| -> Result<(), ScenarioError> {
            let vs: Vec<ComplexVector> = vs.iter().map(|v| to_vector(v)).collect();
            crate::hilbert::check_orthonormal(&vs, field).map_err(|e| validation(field, e.to_string()))
        };
        check("basis", &self.basis)?;
        if let Some(b) = &self.basis2 {
            check("basis2", b)?;
        }
        if let Some(b) = &self.test_observable {
            check("test_observable", b)?;
        }
        Ok(())
    }

    /// Serialize back to the scenario file format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

pub(crate) fn to_vector(v: &[WireComplex]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|&[re, im]| Complex64::new(re, im)))
}

pub(crate) fn to_matrix(m: &WireMatrix) -> ComplexMatrix {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    ComplexMatrix::from_fn(n, cols, |i, j| Complex64::new(m[i][j][0], m[i][j][1]))
}

pub(crate) fn from_matrix(m: &ComplexMatrix) -> WireMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| wire(m[(i, j)])).collect()).collect()
}
