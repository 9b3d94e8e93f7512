//! Geometry, field and quantum-number types in reduced atomic units.
//!
//! Lengths are multiples of the effective Bohr radius `a* = ħ²ε/(m*e²)`,
//! energies of the effective Rydberg `R* = m*e⁴/(2ħ²ε²)`, and fields of
//! `F0 = e/(2εa*²)` with `ε = 1`. In these units the Hamiltonian inside the
//! box reads `H = -∇² ± f·x`, with `f = F/F0`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Wedge-shaped infinite well: `0 ≤ ρ ≤ d`, `|θ| ≤ θ0/2`, `|z| ≤ L/2`.
///
/// The wedge axis is the `+x` direction; the tip sits at the origin and the
/// curved rim at `ρ = d`. Apertures above `π` give the "Packman" shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wedge {
    radius: f64,
    aperture: f64,
    thickness: f64,
}

impl Wedge {
    pub fn new(radius: f64, aperture: f64, thickness: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Geometry(format!("radius must be positive, got {radius}")));
        }
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(Error::Geometry(format!("thickness must be positive, got {thickness}")));
        }
        if !(aperture > 0.0 && aperture < 2.0 * PI) {
            return Err(Error::Geometry(format!("aperture must lie in (0, 2π), got {aperture}")));
        }
        Ok(Self { radius, aperture, thickness })
    }

    /// Radius `d`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Angular aperture `θ0` in radians.
    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    /// Thickness `L`.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Order `π/θ0` of the Bessel factor of the ground state. Always > 1/2.
    pub fn ground_order(&self) -> f64 {
        PI / self.aperture
    }

    /// Axial confinement energy `(π/L)²` of the lowest `z` mode.
    pub fn axial_energy(&self) -> f64 {
        (PI / self.thickness).powi(2)
    }

    pub fn contains(&self, rho: f64, theta: f64, z: f64) -> bool {
        (0.0..=self.radius).contains(&rho) && theta.abs() <= 0.5 * self.aperture && z.abs() <= 0.5 * self.thickness
    }

    /// Whether the cross-section is wider than a half-disc.
    pub fn is_packman(&self) -> bool {
        self.aperture > PI
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Field along `+x`, toward the wide end; pushes an electron into the tip.
    TowardWide,
    /// Field along `-x`, toward the tip; pushes an electron to the rim.
    TowardTip,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::TowardWide => "wide",
            Direction::TowardTip => "tip",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wide" | "towardwide" | "toward-wide" | "+x" | "+" => Ok(Direction::TowardWide),
            "tip" | "towardtip" | "toward-tip" | "-x" | "-" => Ok(Direction::TowardTip),
            other => Err(Error::Domain(format!("unknown field direction '{other}'"))),
        }
    }
}

/// Static field of reduced strength `f = F/F0` along the wedge axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    strength: f64,
    direction: Direction,
}

impl FieldConfig {
    pub fn new(strength: f64, direction: Direction) -> Result<Self> {
        if !(strength.is_finite() && strength >= 0.0) {
            return Err(Error::Domain(format!("field strength must be finite and non-negative, got {strength}")));
        }
        Ok(Self { strength, direction })
    }

    pub fn zero() -> Self {
        Self { strength: 0.0, direction: Direction::TowardWide }
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Sign `s` of the electron's potential term `s·f·ρcosθ`.
    ///
    /// A hole would carry the opposite sign; only electrons are modelled.
    pub fn sign(&self) -> f64 {
        match self.direction {
            Direction::TowardWide => 1.0,
            Direction::TowardTip => -1.0,
        }
    }

    /// Potential energy `s·f·x` at the point `x = ρcosθ`.
    pub fn potential(&self, x: f64) -> f64 {
        if self.strength == 0.0 {
            return 0.0;
        }
        self.sign() * self.strength * x
    }

    /// Signed coefficient `s·f`.
    pub fn signed_strength(&self) -> f64 {
        if self.strength == 0.0 {
            0.0
        } else {
            self.sign() * self.strength
        }
    }
}

/// Quantum numbers `(n, nθ, nz)` of a zero-field level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n: u32,
    pub n_theta: u32,
    pub n_z: u32,
}

impl QuantumNumbers {
    pub const GROUND: QuantumNumbers = QuantumNumbers { n: 1, n_theta: 0, n_z: 0 };

    pub fn new(n: u32, n_theta: u32, n_z: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("radial index n starts at 1".into()));
        }
        Ok(Self { n, n_theta, n_z })
    }

    /// Bessel order `(2nθ + 1)·π/θ0`.
    pub fn order(&self, wedge: &Wedge) -> f64 {
        f64::from(2 * self.n_theta + 1) * wedge.ground_order()
    }

    /// Odd axial index `l = 2nz + 1`.
    pub fn axial_index(&self) -> u32 {
        2 * self.n_z + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_table_geometries() {
        assert!(Wedge::new(1.0, PI / 20.0, 1.0).is_ok());
        let packman = Wedge::new(1.0, 1.5 * PI, 1.0).unwrap();
        assert!(packman.is_packman());
        assert!((packman.ground_order() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_geometry() {
        assert!(matches!(Wedge::new(0.0, PI / 2.0, 1.0), Err(Error::Geometry(_))));
        assert!(Wedge::new(1.0, 0.0, 1.0).is_err());
        assert!(Wedge::new(1.0, 2.0 * PI, 1.0).is_err());
        assert!(Wedge::new(1.0, PI, -1.0).is_err());
        assert!(Wedge::new(f64::NAN, PI, 1.0).is_err());
    }

    #[test]
    fn field_sign_convention() {
        let wide = FieldConfig::new(2.0, Direction::TowardWide).unwrap();
        let tip = FieldConfig::new(2.0, Direction::TowardTip).unwrap();
        assert_eq!(wide.sign(), 1.0);
        assert_eq!(tip.sign(), -1.0);
        assert_eq!(wide.potential(0.5), 1.0);
        assert_eq!(tip.potential(0.5), -1.0);
        for dir in [Direction::TowardWide, Direction::TowardTip] {
            let zero = FieldConfig::new(0.0, dir).unwrap();
            assert_eq!(zero.potential(3.0), 0.0);
            assert_eq!(zero.signed_strength(), 0.0);
        }
        assert!(FieldConfig::new(-1.0, Direction::TowardTip).is_err());
    }

    #[test]
    fn derived_quantum_numbers() {
        let w = Wedge::new(1.0, PI / 2.0, 1.0).unwrap();
        let qn = QuantumNumbers::new(2, 1, 3).unwrap();
        assert!((qn.order(&w) - 6.0).abs() < 1e-14);
        assert_eq!(qn.axial_index(), 7);
        assert!(QuantumNumbers::new(0, 0, 0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn wedge_round_trip(d in 1e-3f64..1e3, t in 1e-3f64..6.25, l in 1e-3f64..1e3) {
            let w = Wedge::new(d, t, l).unwrap();
            proptest::prop_assert_eq!((w.radius(), w.aperture(), w.thickness()), (d, t, l));
            proptest::prop_assert!(w.ground_order() > 0.5);
        }
    }
}
