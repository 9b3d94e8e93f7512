use std::f64::consts::PI;

use wedge_stark::fd_oracle::{compare, Mesh};
use wedge_stark::specfun::first_zero;
use wedge_stark::variational::{level_energy, GroundState};
use wedge_stark::{stark_shift, Direction, FieldConfig, QuantumNumbers, Wedge};

fn field(f: f64, dir: Direction) -> FieldConfig {
    FieldConfig::new(f, dir).unwrap()
}

#[test]
fn zero_field_energy_scales_with_radius() {
    // (α/d)² + (π/L)²: quadrupling d divides the planar part by 16
    for t in [PI / 20.0, PI / 2.0, 1.5 * PI] {
        let small = GroundState::new(&Wedge::new(1.0, t, 1.0).unwrap()).unwrap();
        let large = GroundState::new(&Wedge::new(4.0, t, 1.0).unwrap()).unwrap();
        assert!((small.planar_energy() / large.planar_energy() - 16.0).abs() < 1e-12);
        assert_eq!(small.alpha, first_zero(PI / t).unwrap().value);
    }
}

#[test]
fn excited_axial_level_sits_above_ground() {
    let w = Wedge::new(3.0, PI / 3.0, 2.0).unwrap();
    let ground = level_energy(&w, QuantumNumbers::GROUND).unwrap();
    let axial = level_energy(&w, QuantumNumbers::new(1, 0, 1).unwrap()).unwrap();
    assert!((axial - ground - 8.0 * (PI / 2.0).powi(2)).abs() < 1e-12);
}

#[test]
fn tip_field_always_lowers_energy() {
    for t in [PI / 20.0, PI / 15.0, PI / 10.0, PI / 2.0, PI, 1.5 * PI] {
        for d in [1.0, 3.0, 7.0, 10.0] {
            for f in [0.5, 1.0, 10.0] {
                let r = stark_shift(&Wedge::new(d, t, 1.0).unwrap(), field(f, Direction::TowardTip)).unwrap();
                assert!(r.shift < 0.0, "θ0={t} d={d} f={f}: {}", r.shift);
            }
        }
    }
}

#[test]
fn variational_energy_is_an_upper_bound() {
    // both directions on a Packman wedge, where the trial function is poorest
    for dir in [Direction::TowardWide, Direction::TowardTip] {
        let w = Wedge::new(5.0, 1.5 * PI, 1.0).unwrap();
        let r = compare(&w, field(10.0, dir), Mesh::square(128).unwrap()).unwrap();
        assert!(r.bound_holds, "{r:?}");
        assert!(r.gap > 0.0);
    }
}
