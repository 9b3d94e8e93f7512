//! Batch comparison of variational energies against the finite-difference
//! eigensolver.

use std::path::Path;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wedge_stark::fd_oracle::{compare, Mesh};
use wedge_stark::{Direction, FieldConfig, Wedge};

use crate::aperture::Aperture;

pub const DEFAULT_MESH: usize = 256;

fn default_mesh() -> usize {
    DEFAULT_MESH
}

fn default_thickness() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCase {
    pub d: f64,
    pub theta0: String,
    #[serde(rename = "L", default = "default_thickness")]
    pub thickness: f64,
    pub f: f64,
    pub direction: String,
    /// Overrides the batch mesh.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    #[serde(default = "default_mesh")]
    pub mesh: usize,
    pub configurations: Vec<OracleCase>,
}

impl OracleConfig {
    /// Twelve configurations over d ∈ {1, 5, 10}, θ0 ∈ {π/20, π/2, 3π/2},
    /// f ∈ {0, 1, 10} and both directions.
    pub fn default_batch() -> Self {
        let case = |d: f64, theta0: &str, f: f64, direction: &str| OracleCase {
            d,
            theta0: theta0.into(),
            thickness: 1.0,
            f,
            direction: direction.into(),
            mesh: None,
        };
        Self {
            mesh: DEFAULT_MESH,
            configurations: vec![
                case(1.0, "pi/20", 0.0, "wide"),
                case(5.0, "pi/2", 0.0, "wide"),
                case(10.0, "3pi/2", 0.0, "wide"),
                case(1.0, "pi/2", 1.0, "wide"),
                case(5.0, "pi/20", 1.0, "wide"),
                case(10.0, "3pi/2", 1.0, "wide"),
                case(1.0, "3pi/2", 10.0, "wide"),
                case(10.0, "pi/20", 10.0, "wide"),
                case(5.0, "3pi/2", 1.0, "tip"),
                case(10.0, "pi/2", 10.0, "tip"),
                case(1.0, "pi/20", 1.0, "tip"),
                case(5.0, "pi/20", 10.0, "tip"),
            ],
        }
    }

    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if config.configurations.is_empty() {
            bail!("{} lists no configurations", path.display());
        }
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub d: f64,
    pub theta0: String,
    #[serde(rename = "L")]
    pub thickness: f64,
    pub f: f64,
    pub direction: String,
    pub mesh: usize,
    pub variational_energy: f64,
    pub beta_star: f64,
    pub fd_energy: f64,
    pub error_estimate: f64,
    pub gap: f64,
    pub bound_holds: bool,
    pub reliable: bool,
    pub observed_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub all_bounds_hold: bool,
    /// Index into `results` of the first configuration whose bound fails.
    pub first_violation: Option<usize>,
    pub results: Vec<OracleEntry>,
}

fn run_case(case: &OracleCase, mesh: usize) -> anyhow::Result<OracleEntry> {
    let aperture: Aperture = case.theta0.parse()?;
    let direction: Direction = case.direction.parse()?;
    let wedge = Wedge::new(case.d, aperture.radians(), case.thickness)?;
    let field = FieldConfig::new(case.f, direction)?;
    let r = compare(&wedge, field, Mesh::square(mesh)?)?;
    Ok(OracleEntry {
        d: case.d,
        theta0: aperture.to_string(),
        thickness: case.thickness,
        f: case.f,
        direction: direction.label().to_string(),
        mesh,
        variational_energy: r.variational_energy,
        beta_star: r.beta_star,
        fd_energy: r.fd_energy,
        error_estimate: r.error_estimate,
        gap: r.gap,
        bound_holds: r.bound_holds,
        reliable: r.reliable,
        observed_order: r.observed_order,
    })
}

/// Runs every configuration in parallel; results keep the config order.
pub fn run_oracle(config: &OracleConfig) -> anyhow::Result<OracleSummary> {
    if config.configurations.is_empty() {
        bail!("oracle batch lists no configurations");
    }
    let results = config
        .configurations
        .par_iter()
        .enumerate()
        .map(|(i, case)| run_case(case, case.mesh.unwrap_or(config.mesh)).with_context(|| format!("configuration {i}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let first_violation = results.iter().position(|r| !r.bound_holds);
    Ok(OracleSummary { all_bounds_hold: first_violation.is_none(), first_violation, results })
}
