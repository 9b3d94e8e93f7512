//! Zero-field spectrum of the wedge and the one-parameter variational treatment
//! of the static field.
//!
//! The trial state is `Ψ = Ψ0 · exp(-s·β·ρcosθ)` where `Ψ0` is the zero-field
//! ground state and `s` the sign of the field term. Its energy is the Rayleigh
//! quotient `⟨Ψ|H|Ψ⟩ / ⟨Ψ|Ψ⟩`, with the kinetic part taken in the gradient form
//! `∫|∇Ψ|²`. Since the trial factor does not depend on `z`, the axial sector
//! only contributes the constant `(π/L)²` and all integrals are two-dimensional.
//!
//! Integrating the kinetic term by parts and using `-∇²Ψ0 = E₁₁₁Ψ0` gives the
//! reduced identity `E(β) = E₁₁₁ + β² + s·f·⟨x⟩_β`, which is kept as a second,
//! independent evaluation path.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureRule, RadialMap, Sum, MAX_NODES};
use crate::specfun::{bessel_j, bessel_j_prime, bessel_zero, first_zero};
use crate::units::{FieldConfig, QuantumNumbers, Wedge};

/// Largest exponent span `2|β|d` the trial factor may take before most of the
/// domain underflows.
const MAX_EXPONENT_SPAN: f64 = 1400.0;
const INITIAL_NODES: usize = 64;

/// Zero-field level `(α_{m',n}/d)² + (lπ/L)²`.
pub fn level_energy(wedge: &Wedge, qn: QuantumNumbers) -> Result<f64> {
    let alpha = bessel_zero(qn.order(wedge), qn.n)?.value;
    let l = f64::from(qn.axial_index());
    Ok((alpha / wedge.radius()).powi(2) + (l * PI / wedge.thickness()).powi(2))
}

/// The zero-field ground state `Ψ0 = N0 J_{m0}(αρ/d) cos(m0θ) cos(πz/L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub wedge: Wedge,
    /// `E₁₁₁ = (α/d)² + (π/L)²`.
    pub energy: f64,
    /// First zero of `J_{m0}`.
    pub alpha: f64,
    /// Normalization constant making `∫Ψ0² dV = 1`.
    pub n0: f64,
}

impl GroundState {
    pub fn new(wedge: &Wedge) -> Result<Self> {
        let m0 = wedge.ground_order();
        let alpha = first_zero(m0)?.value;
        let d = wedge.radius();
        let energy = (alpha / d).powi(2) + wedge.axial_energy();
        // ∫J_ν(αρ/d)²ρ dρ = (d²/2) J_{ν+1}(α)²; the cosines contribute θ0/2 and L/2
        let radial = 0.5 * d * d * bessel_j(m0 + 1.0, alpha)?.powi(2);
        let n0 = 1.0 / (radial * 0.5 * wedge.aperture() * 0.5 * wedge.thickness()).sqrt();
        Ok(Self { wedge: *wedge, energy, alpha, n0 })
    }

    /// In-plane part `(α/d)²` of the ground energy.
    pub fn planar_energy(&self) -> f64 {
        (self.alpha / self.wedge.radius()).powi(2)
    }

    pub fn wavenumber(&self) -> f64 {
        self.alpha / self.wedge.radius()
    }

    /// `Ψ0(ρ, θ, z)`; zero outside the box.
    pub fn wavefunction(&self, rho: f64, theta: f64, z: f64) -> f64 {
        if !self.wedge.contains(rho, theta, z) {
            return 0.0;
        }
        let m0 = self.wedge.ground_order();
        let radial = bessel_j(m0, self.wavenumber() * rho).unwrap_or(0.0);
        self.n0 * radial * (m0 * theta).cos() * (PI * z / self.wedge.thickness()).cos()
    }
}

pub fn ground_energy(wedge: &Wedge) -> Result<GroundState> {
    GroundState::new(wedge)
}

/// Quadrature moments of the trial state at one `β`.
///
/// All three sums carry the same factor `exp(-c)` that keeps the exponential
/// representable; it cancels in every ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialMoments {
    pub beta: f64,
    /// `∫ u² e^{-2sβx - c}`.
    pub norm: f64,
    /// `∫ |∇(u e^{-sβx})|²` on the same scale.
    pub kinetic: f64,
    /// `∫ x u² e^{-2sβx}` on the same scale.
    pub first_moment: f64,
    /// `∫ x² u² e^{-2sβx}` on the same scale.
    pub second_moment: f64,
    /// The subtracted exponent `c`.
    pub log_scale: f64,
}

impl TrialMoments {
    /// `⟨x⟩_β`.
    pub fn mean_x(&self) -> f64 {
        self.first_moment / self.norm
    }

    pub fn variance_x(&self) -> f64 {
        let m = self.mean_x();
        self.second_moment / self.norm - m * m
    }

    /// In-plane kinetic energy `∫|∇Ψ|² / ∫Ψ²`.
    pub fn kinetic_energy(&self) -> f64 {
        self.kinetic / self.norm
    }
}

/// Samples of the zero-field cross-section factor `u = J_{m0}(kρ) cos(m0θ)`
/// and its derivatives on a fixed quadrature rule.
#[derive(Debug, Clone)]
pub struct TrialSampler {
    rule: QuadratureRule,
    // per radial node: J, k·J', weight·ρ
    radial: Vec<[f64; 3]>,
    // per angular node: cos(m0θ), sin(m0θ), cosθ, sinθ, weight
    angular: Vec<[f64; 5]>,
    m0: f64,
    radius: f64,
}

impl TrialSampler {
    pub fn new(gs: &GroundState, n_rho: usize, n_theta: usize) -> Result<Self> {
        let rule = QuadratureRule::with_map(&gs.wedge, n_rho, n_theta, RadialMap::Cubic);
        let m0 = gs.wedge.ground_order();
        let k = gs.wavenumber();
        let radial = rule
            .rho_nodes()
            .iter()
            .zip(rule.rho_weights())
            .map(|(&rho, &w)| Ok([bessel_j(m0, k * rho)?, k * bessel_j_prime(m0, k * rho)?, w * rho]))
            .collect::<Result<Vec<_>>>()?;
        let angular = rule
            .theta_nodes()
            .iter()
            .zip(rule.theta_weights())
            .map(|(&t, &w)| [(m0 * t).cos(), (m0 * t).sin(), t.cos(), t.sin(), w])
            .collect();
        Ok(Self { rule, radial, angular, m0, radius: gs.wedge.radius() })
    }

    pub fn nodes(&self) -> (usize, usize) {
        (self.rule.n_rho(), self.rule.n_theta())
    }

    /// Moments of `u·exp(-sign·β·x)`.
    pub fn moments(&self, beta: f64, sign: f64) -> Result<TrialMoments> {
        if !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be finite, got {beta}")));
        }
        let span = 2.0 * beta.abs() * self.radius;
        if span > MAX_EXPONENT_SPAN {
            return Err(Error::Overflow(beta.abs() * self.radius));
        }
        let rate = -2.0 * sign * beta;
        let log_scale = self
            .rule
            .rho_nodes()
            .iter()
            .flat_map(|&rho| self.angular.iter().map(move |a| rate * rho * a[2]))
            .fold(f64::NEG_INFINITY, f64::max);

        let sb = sign * beta;
        let m0 = self.m0;
        let (mut norm, mut kinetic, mut first, mut second) =
            (Sum::default(), Sum::default(), Sum::default(), Sum::default());
        for (&rho, r) in self.rule.rho_nodes().iter().zip(&self.radial) {
            let [j, dj, w_rho] = *r;
            let (mut n_row, mut k_row, mut x_row, mut xx_row) = (0.0, 0.0, 0.0, 0.0);
            for a in &self.angular {
                let [c, s, cos_t, sin_t, w_t] = *a;
                let x = rho * cos_t;
                let weight = w_t * (rate * x - log_scale).exp();
                let u = j * c;
                let du_rho = dj * c;
                let du_theta_over_rho = -m0 * j * s / rho;
                let grad2 = du_rho * du_rho + du_theta_over_rho * du_theta_over_rho;
                let du_x = cos_t * du_rho - sin_t * du_theta_over_rho;
                let u2 = u * u;
                n_row += weight * u2;
                k_row += weight * (grad2 - 2.0 * sb * u * du_x + beta * beta * u2);
                x_row += weight * x * u2;
                xx_row += weight * x * x * u2;
            }
            norm.add(w_rho * n_row);
            kinetic.add(w_rho * k_row);
            first.add(w_rho * x_row);
            second.add(w_rho * xx_row);
        }
        let moments = TrialMoments {
            beta,
            norm: norm.value(),
            kinetic: kinetic.value(),
            first_moment: first.value(),
            second_moment: second.value(),
            log_scale,
        };
        if !(moments.norm > 0.0 && moments.kinetic.is_finite() && moments.first_moment.is_finite()) {
            return Err(Error::Overflow(beta.abs() * self.radius));
        }
        Ok(moments)
    }
}

/// `E(β)` for one ground state and field on a fixed rule.
#[derive(Debug, Clone)]
pub struct EnergyFunctional {
    gs: GroundState,
    field: FieldConfig,
    sampler: TrialSampler,
}

impl EnergyFunctional {
    pub fn new(gs: &GroundState, field: FieldConfig, n_rho: usize, n_theta: usize) -> Result<Self> {
        Ok(Self { gs: *gs, field, sampler: TrialSampler::new(gs, n_rho, n_theta)? })
    }

    pub fn ground_state(&self) -> &GroundState {
        &self.gs
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn nodes(&self) -> (usize, usize) {
        self.sampler.nodes()
    }

    pub fn moments(&self, beta: f64) -> Result<TrialMoments> {
        self.sampler.moments(beta, self.field.sign())
    }

    /// Gradient-form Rayleigh quotient.
    pub fn energy(&self, beta: f64) -> Result<f64> {
        let m = self.moments(beta)?;
        Ok(self.gradient_energy(&m))
    }

    pub fn gradient_energy(&self, m: &TrialMoments) -> f64 {
        m.kinetic_energy() + self.field.signed_strength() * m.mean_x() + self.gs.wedge.axial_energy()
    }

    /// `E₁₁₁ + β² + s·f·⟨x⟩_β`.
    pub fn reduced_energy(&self, m: &TrialMoments) -> f64 {
        self.gs.energy + m.beta * m.beta + self.field.signed_strength() * m.mean_x()
    }
}

fn default_functional(gs: &GroundState, field: FieldConfig) -> Result<EnergyFunctional> {
    EnergyFunctional::new(gs, field, 2 * INITIAL_NODES, 2 * INITIAL_NODES)
}

/// `E(β)` by the gradient-form quadrature on a 128×128 rule.
pub fn energy_at_beta(gs: &GroundState, field: FieldConfig, beta: f64) -> Result<f64> {
    default_functional(gs, field)?.energy(beta)
}

/// `E(β)` through the reduced identity; shares only `⟨x⟩_β` with
/// [`energy_at_beta`].
pub fn energy_at_beta_reduced(gs: &GroundState, field: FieldConfig, beta: f64) -> Result<f64> {
    let functional = default_functional(gs, field)?;
    let m = functional.moments(beta)?;
    Ok(functional.reduced_energy(&m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerOptions {
    /// Absolute tolerance on `β*`.
    pub tol_beta: f64,
    /// Relative agreement required between the energies at `β*` from a rule
    /// and its doubled refinement.
    pub tol_energy: f64,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        Self { tol_beta: 1e-8, tol_energy: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalResult {
    pub beta_star: f64,
    /// `E(β*)`.
    pub energy: f64,
    /// Zero-field ground energy `E₁₁₁`.
    pub ground_energy: f64,
    /// `ΔE = E(β*) − E₁₁₁`.
    pub shift: f64,
    /// `⟨ρcosθ⟩` in the optimal trial state.
    pub mean_x: f64,
    /// Number of energy evaluations spent in the final minimization pass.
    pub evaluations: usize,
    /// Quadrature nodes `(ρ, θ)` used for the reported energy.
    pub nodes: (usize, usize),
}

/// Minimizes `E(β)` over all real `β`.
pub fn minimize(gs: &GroundState, field: FieldConfig) -> Result<VariationalResult> {
    minimize_with(gs, field, MinimizerOptions::default())
}

pub fn minimize_with(gs: &GroundState, field: FieldConfig, opts: MinimizerOptions) -> Result<VariationalResult> {
    if !(opts.tol_beta > 0.0 && opts.tol_energy > 0.0) {
        return Err(Error::Domain("minimizer tolerances must be positive".into()));
    }
    let mut n = INITIAL_NODES;
    if field.strength() == 0.0 {
        // the trial state is the exact eigenstate; only ⟨x⟩₀ needs quadrature
        let functional = EnergyFunctional::new(gs, field, 2 * n, 2 * n)?;
        let m = functional.moments(0.0)?;
        return Ok(VariationalResult {
            beta_star: 0.0,
            energy: gs.energy,
            ground_energy: gs.energy,
            shift: 0.0,
            mean_x: m.mean_x(),
            evaluations: 0,
            nodes: functional.nodes(),
        });
    }

    let limit = 1e3 / gs.wedge.radius();
    loop {
        let functional = EnergyFunctional::new(gs, field, n, n)?;
        let (beta, _, evaluations) = minimize_functional(&functional, opts.tol_beta, limit)?;
        let fine = EnergyFunctional::new(gs, field, 2 * n, 2 * n)?;
        let coarse_energy = functional.energy(beta)?;
        let m = fine.moments(beta)?;
        let energy = fine.gradient_energy(&m);
        if (energy - coarse_energy).abs() <= opts.tol_energy * energy.abs().max(1.0) || 2 * n >= MAX_NODES {
            return Ok(VariationalResult {
                beta_star: beta,
                energy,
                ground_energy: gs.energy,
                shift: energy - gs.energy,
                mean_x: m.mean_x(),
                evaluations,
                nodes: fine.nodes(),
            });
        }
        n *= 2;
    }
}

/// Ground state plus minimization: the Stark shift of the wedge in `field`.
pub fn stark_shift(wedge: &Wedge, field: FieldConfig) -> Result<VariationalResult> {
    minimize(&GroundState::new(wedge)?, field)
}

pub fn stark_shift_with(wedge: &Wedge, field: FieldConfig, opts: MinimizerOptions) -> Result<VariationalResult> {
    minimize_with(&GroundState::new(wedge)?, field, opts)
}

/// Brackets the minimum starting from `[0, 1]` with step doubling in the
/// downhill direction, then refines with Brent's method. Returns the best
/// point seen, which is never worse than `β = 0`.
fn minimize_functional(functional: &EnergyFunctional, tol: f64, limit: f64) -> Result<(f64, f64, usize)> {
    let mut evaluations = 0;
    let mut best: (f64, f64) = (0.0, f64::INFINITY);
    let mut eval = |beta: f64| -> Result<f64> {
        evaluations += 1;
        let e = functional.energy(beta)?;
        if e < best.1 || (e == best.1 && beta.abs() < best.0.abs()) {
            best = (beta, e);
        }
        Ok(e)
    };
    let bracket_error = || Error::BracketFailed { limit };

    let e0 = eval(0.0)?;
    let e_pos = eval(1.0)?;
    let (mut a, mut b, mut fb): (f64, f64, f64);
    if e_pos < e0 {
        (a, b, fb) = (0.0, 1.0, e_pos);
    } else {
        let e_neg = eval(-1.0)?;
        if e_neg < e0 {
            (a, b, fb) = (0.0, -1.0, e_neg);
        } else {
            a = -1.0;
            b = 1.0;
            fb = f64::NAN;
        }
    }
    let c = if fb.is_nan() {
        // minimum enclosed by [-1, 1]
        b
    } else {
        loop {
            let c = 2.0 * b;
            if c.abs() > limit {
                return Err(bracket_error());
            }
            let fc = eval(c).map_err(|e| match e {
                Error::Overflow(_) => bracket_error(),
                other => other,
            })?;
            if fc > fb {
                break c;
            }
            a = b;
            b = c;
            fb = fc;
        }
    };
    let (lo, hi) = if a < c { (a, c) } else { (c, a) };
    brent(&mut eval, lo, hi, tol)?;
    Ok((best.0, best.1, evaluations))
}

/// Brent's minimization on `[lo, hi]`, golden section with parabolic steps.
fn brent(f: &mut impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let mut x = lo + GOLDEN * (hi - lo);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e): (f64, f64) = (0.0, 0.0);
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        let tol1 = tol + 1e-12 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (hi - lo) {
            return Ok(x);
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (lo - x) && p < q * (hi - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if mid >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= mid { lo - x } else { hi - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Ok(x)
}

/// Normalized trial density `|Ψ|²` for a given `β`.
#[derive(Debug, Clone, Copy)]
pub struct TrialState {
    pub gs: GroundState,
    pub beta: f64,
    sign: f64,
    log_scale: f64,
    norm_2d: f64,
}

impl TrialState {
    pub fn new(gs: &GroundState, field: FieldConfig, beta: f64) -> Result<Self> {
        let sampler = TrialSampler::new(gs, 2 * INITIAL_NODES, 2 * INITIAL_NODES)?;
        let m = sampler.moments(beta, field.sign())?;
        Ok(Self { gs: *gs, beta, sign: field.sign(), log_scale: m.log_scale, norm_2d: m.norm })
    }

    /// `|Ψ(ρ, θ, z)|²` with `∫|Ψ|² dV = 1`; zero outside the box.
    pub fn density(&self, rho: f64, theta: f64, z: f64) -> f64 {
        let wedge = &self.gs.wedge;
        if !wedge.contains(rho, theta, z) {
            return 0.0;
        }
        let m0 = wedge.ground_order();
        let u = bessel_j(m0, self.gs.wavenumber() * rho).unwrap_or(0.0) * (m0 * theta).cos();
        let x = rho * theta.cos();
        let planar = u * u * (-2.0 * self.sign * self.beta * x - self.log_scale).exp() / self.norm_2d;
        let axial = (PI * z / wedge.thickness()).cos().powi(2) * 2.0 / wedge.thickness();
        planar * axial
    }
}
