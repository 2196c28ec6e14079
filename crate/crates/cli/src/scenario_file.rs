//! Scenario documents.
//!
//! ```json
//! {
//!   "hbar": 1.0,
//!   "hamiltonian": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
//!   "initial_state": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
//!   "time": {"start": 0, "stop": 12.566370614359172, "steps": 1000},
//!   "observables": {"sx": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `hbar` defaults to 1 and `time` to two
//! periods of the widest energy gap. Observables are recorded in name order.
//! A scenario argument that is not an existing file may name a qubit preset,
//! either bare (`fig2D`) or as `preset:fig2D`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use quncert::dynamics::TimeGrid;
use quncert::hilbert::{ComplexMatrix, HermitianObservable, QuantumState};
use quncert::toymodel::{preset, qubit_scenario, standard_observables, PRESET_NAMES};
use quncert::Scenario;

use crate::error::CliError;

/// Initial states further than this from unit norm are rejected; closer ones
/// are renormalized.
pub const LOAD_NORM_TOL: f64 = 1e-9;

type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    pub hamiltonian: MatrixDoc,
    pub initial_state: Vec<[f64; 2]>,
    #[serde(default)]
    pub time: Option<TimeSpec>,
    #[serde(default)]
    pub observables: BTreeMap<String, MatrixDoc>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

fn default_hbar() -> f64 {
    1.0
}

/// A validated scenario plus where it came from.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub label: String,
    pub scenario: Scenario,
    /// Hex SHA-256 of the file bytes, or of `preset:<name>`.
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn preset_name(arg: &str) -> Option<&str> {
    let name = arg.strip_prefix("preset:").unwrap_or(arg);
    PRESET_NAMES.contains(&name).then_some(name)
}

/// Loads a preset by name.
pub fn load_preset(name: &str) -> Result<LoadedScenario, CliError> {
    let p = preset(name)?;
    let scenario = qubit_scenario(&p, standard_observables())?;
    Ok(LoadedScenario { label: name.to_string(), scenario, digest: sha256_hex(format!("preset:{name}").as_bytes()) })
}

/// Resolves a scenario argument: an existing file, else a preset name.
pub fn load(arg: &str) -> Result<LoadedScenario, CliError> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(name) = preset_name(arg) {
            return load_preset(name);
        }
    }
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let scenario = parse(&text, arg)?;
    Ok(LoadedScenario { label: arg.to_string(), scenario, digest: sha256_hex(&bytes) })
}

/// 1-based line of the first `"key"` at or after byte `from`.
fn key_line(text: &str, key: &str, from: usize) -> Option<usize> {
    let needle = format!("\"{key}\"");
    let pos = text.get(from..)?.find(&needle)? + from;
    Some(text[..pos].matches('\n').count() + 1)
}

fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

/// Parses and validates a scenario document; `path` is used in messages.
pub fn parse(text: &str, path: &str) -> Result<Scenario, CliError> {
    let doc: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let invalid = |field: &str, key: &str, from: usize, message: String| CliError::Invalid {
        location: match key_line(text, key, from) {
            Some(line) => format!("{path}:{line}"),
            None => path.to_string(),
        },
        field: field.to_string(),
        message,
    };

    let observables_at = text.find("\"observables\"").unwrap_or(0);
    let matrix =
        |field: &str, key: &str, from: usize, rows: &MatrixDoc| -> Result<HermitianObservable<f64>, CliError> {
            let n = rows.len();
            if n == 0 {
                return Err(invalid(field, key, from, "matrix is empty".into()));
            }
            if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
                return Err(invalid(field, key, from, format!("row {r} has {} entries, expected {n}", row.len())));
            }
            let m =
                ComplexMatrix::from_rows(rows.iter().map(|row| row.iter().copied().map(complex).collect()).collect())
                    .map_err(|e| invalid(field, key, from, e.to_string()))?;
            HermitianObservable::new(m).map_err(|e| invalid(field, key, from, e.to_string()))
        };

    let hamiltonian = matrix("hamiltonian", "hamiltonian", 0, &doc.hamiltonian)?;
    let n = hamiltonian.dim();

    if doc.initial_state.len() != n {
        return Err(invalid(
            "initial_state",
            "initial_state",
            0,
            format!("has {} components, hamiltonian has dimension {n}", doc.initial_state.len()),
        ));
    }
    let amps: Vec<Complex64> = doc.initial_state.iter().copied().map(complex).collect();
    let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if !((norm_sqr - 1.0).abs() <= LOAD_NORM_TOL) {
        return Err(invalid(
            "initial_state",
            "initial_state",
            0,
            format!("squared norm {norm_sqr} differs from 1 by more than {LOAD_NORM_TOL:e}"),
        ));
    }
    let psi = QuantumState::normalize(amps).map_err(|e| invalid("initial_state", "initial_state", 0, e.to_string()))?;

    let mut observables = Vec::with_capacity(doc.observables.len());
    for (name, rows) in &doc.observables {
        let field = format!("observables.{name}");
        let obs = matrix(&field, name, observables_at, rows)?;
        if obs.dim() != n {
            return Err(invalid(&field, name, observables_at, format!("dimension {}, hamiltonian has {n}", obs.dim())));
        }
        observables.push((name.clone(), obs));
    }

    let wrap = |field: &str, key: &str, e: quncert::Error| invalid(field, key, 0, e.to_string());
    match doc.time {
        Some(t) => {
            let grid = TimeGrid::new(t.start, t.stop, t.steps).map_err(|e| wrap("time", "time", e))?;
            Scenario::new(doc.hbar, hamiltonian, psi, grid, observables).map_err(|e| wrap("scenario", "hbar", e))
        }
        None => Scenario::with_default_grid(doc.hbar, hamiltonian, psi, observables)
            .map_err(|e| wrap("scenario", "hbar", e)),
    }
}
