//! Cartesian-product sweeps of the Stark shift and the named figure presets.

use std::io::Write;

use rayon::prelude::*;
use serde::Deserialize;
use wedge_stark::variational::{stark_shift_with, MinimizerOptions, VariationalResult};
use wedge_stark::{Direction, FieldConfig, Wedge};

use crate::aperture::Aperture;
use crate::format::{sig6, significant};

pub const PRESETS: &[&str] = &["fig3", "fig4", "fig5", "fig6", "fig9"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub radii: Vec<f64>,
    pub apertures: Vec<Aperture>,
    pub thicknesses: Vec<f64>,
    pub fields: Vec<f64>,
    pub direction: Direction,
    pub options: MinimizerOptions,
}

fn pi_over(dens: &[u32]) -> Vec<Aperture> {
    dens.iter().map(|&d| Aperture::pi_over(d)).collect()
}

fn apertures(labels: &[&str]) -> Vec<Aperture> {
    labels.iter().map(|s| s.parse().expect("preset aperture")).collect()
}

fn one_to_ten() -> Vec<f64> {
    (1..=10).map(f64::from).collect()
}

impl SweepSpec {
    /// Named plotting parameter sets; thickness is 1 throughout.
    pub fn preset(name: &str) -> Option<Self> {
        let (radii, apertures, fields, direction) = match name {
            // ΔE against radius, narrow wedges, field toward the wide end
            "fig3" => (one_to_ten(), pi_over(&[20, 10, 2]), vec![1.0, 10.0], Direction::TowardWide),
            // ΔE against aperture at d = 5, f = 1
            "fig4" => (
                vec![5.0],
                apertures(&[
                    "pi/20", "pi/15", "pi/10", "pi/8", "pi/6", "pi/4", "pi/3", "pi/2", "2pi/3", "3pi/4", "pi", "5pi/4",
                    "4pi/3", "3pi/2", "7pi/4",
                ]),
                vec![1.0],
                Direction::TowardWide,
            ),
            // as fig3 for apertures of π and beyond
            "fig5" => (one_to_ten(), apertures(&["pi", "5pi/4", "3pi/2"]), vec![1.0, 10.0], Direction::TowardWide),
            // ΔE against field for the two extreme apertures
            "fig6" => (
                vec![1.0, 2.0, 5.0, 10.0],
                apertures(&["pi/20", "3pi/2"]),
                vec![0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
                Direction::TowardWide,
            ),
            // field toward the tip
            "fig9" => (
                one_to_ten(),
                apertures(&["pi/20", "pi/15", "pi/10", "pi/2", "pi", "3pi/2"]),
                vec![0.5, 1.0, 10.0],
                Direction::TowardTip,
            ),
            _ => return None,
        };
        Some(Self { radii, apertures, thicknesses: vec![1.0], fields, direction, options: MinimizerOptions::default() })
    }

    /// Points in output order: `d` outermost, then `θ0`, `L`, and `f` innermost.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out =
            Vec::with_capacity(self.radii.len() * self.apertures.len() * self.thicknesses.len() * self.fields.len());
        for &d in &self.radii {
            for &aperture in &self.apertures {
                for &thickness in &self.thicknesses {
                    for &f in &self.fields {
                        out.push(SweepPoint { d, aperture, thickness, f, direction: self.direction });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub d: f64,
    pub aperture: Aperture,
    pub thickness: f64,
    pub f: f64,
    pub direction: Direction,
}

impl SweepPoint {
    pub fn solve(&self, options: MinimizerOptions) -> wedge_stark::Result<VariationalResult> {
        let wedge = Wedge::new(self.d, self.aperture.radians(), self.thickness)?;
        let field = FieldConfig::new(self.f, self.direction)?;
        stark_shift_with(&wedge, field, options)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub result: Result<VariationalResult, String>,
}

/// Evaluates every point on the current rayon pool; rows come back in
/// [`SweepSpec::points`] order whatever the completion order.
pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    spec.points()
        .into_par_iter()
        .map(|point| SweepRow { point, result: point.solve(spec.options).map_err(|e| e.to_string()) })
        .collect()
}

pub const SWEEP_HEADER: [&str; 10] =
    ["d", "theta0", "theta0_rad", "L", "f", "direction", "beta_star", "energy", "shift", "error"];

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        let p = &row.point;
        let (beta, energy, shift, error) = match &row.result {
            Ok(r) => (sig6(r.beta_star), sig6(r.energy), sig6(r.shift), String::new()),
            Err(e) => (String::new(), String::new(), String::new(), e.clone()),
        };
        w.write_record([
            sig6(p.d),
            p.aperture.to_string(),
            significant(p.aperture.radians(), 10),
            sig6(p.thickness),
            sig6(p.f),
            p.direction.label().to_string(),
            beta,
            energy,
            shift,
            error,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A sweep row as read back from CSV.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SweepRecord {
    pub d: f64,
    pub theta0: String,
    pub theta0_rad: f64,
    #[serde(rename = "L")]
    pub thickness: f64,
    pub f: f64,
    pub direction: String,
    pub beta_star: Option<f64>,
    pub energy: Option<f64>,
    pub shift: Option<f64>,
    pub error: String,
}

pub fn read_sweep_csv<R: std::io::Read>(input: R) -> anyhow::Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<SweepRecord>, _>>()?)
}
