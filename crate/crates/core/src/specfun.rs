//! Bessel functions of the first kind for real order `ν ≥ 0`.
//!
//! Small arguments (`x² ≤ 4(ν+1)`) use the ascending series, where the terms
//! decrease from the first one and no cancellation occurs. Everything else goes
//! through Miller's backward recurrence on the orders `μ + k`, `μ = frac(ν)`,
//! normalized with the Neumann sum
//! `(x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! · J_{μ+2k}(x)`.

use crate::error::{Error, Result};

const MAX_ORDER: f64 = 100.0;
const RESCALE_ABOVE: f64 = 1e250;

/// `J_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("Bessel order must be finite and >= 0, got {nu}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(bessel_j_unchecked(nu, x))
}

pub(crate) fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x * x <= 4.0 * (nu + 1.0) {
        ascending_series(nu, x)
    } else {
        miller(nu, x)
    }
}

fn ascending_series(nu: f64, x: f64) -> f64 {
    let log_prefactor = nu * (0.5 * x).ln() - libm::lgamma(nu + 1.0);
    if log_prefactor < -745.0 {
        return 0.0;
    }
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let k = k as f64;
        term *= q / (k * (nu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    log_prefactor.exp() * sum
}

fn miller(nu: f64, x: f64) -> f64 {
    let n = nu.floor();
    let mu = nu - n;
    let n = n as usize;

    let scale = (n as f64).max(x.ceil());
    let start = 2 * ((scale + (160.0 * scale).sqrt()) as usize / 2 + 10);

    let two_over_x = 2.0 / x;
    // weight ratio Γ(μ+k)/k! for the Neumann normalization
    let mut ratios = Vec::with_capacity(start / 2 + 1);
    let mut g = libm::tgamma(mu + 1.0);
    ratios.push(g);
    for k in 1..=start / 2 {
        ratios.push(g);
        g *= (mu + k as f64) / (k as f64 + 1.0);
    }

    let mut upper = 0.0; // v_{k+1}
    let mut current = 1e-300; // v_k
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (0..=start).rev() {
        if k == n {
            result = current;
        }
        if k % 2 == 0 {
            let j = k / 2;
            let weight = if j == 0 { ratios[0] } else { (mu + k as f64) * ratios[j] };
            norm += weight * current;
        }
        if k == 0 {
            break;
        }
        let lower = (mu + k as f64) * two_over_x * current - upper;
        upper = current;
        current = lower;
        if current.abs() > RESCALE_ABOVE {
            current /= RESCALE_ABOVE;
            upper /= RESCALE_ABOVE;
            norm /= RESCALE_ABOVE;
            result /= RESCALE_ABOVE;
        }
    }
    result * (0.5 * x).powf(mu) / norm
}

/// `dJ_ν/dx`, evaluated as `(ν/x)·J_ν(x) − J_{ν+1}(x)`.
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return if nu < 1.0 {
            Err(Error::Domain(format!("J'_{nu} is singular or undefined at x = 0")))
        } else if nu == 1.0 {
            Ok(0.5)
        } else {
            Ok(0.0)
        };
    }
    let j = bessel_j(nu, x)?;
    let j_next = bessel_j(nu + 1.0, x)?;
    Ok(nu / x * j - j_next)
}

fn check_order(nu: f64) -> Result<()> {
    if !(nu > 0.0 && nu <= MAX_ORDER) {
        return Err(Error::Domain(format!("zero search needs 0 < ν <= {MAX_ORDER}, got {nu}")));
    }
    Ok(())
}

/// A positive zero `α_{ν,index}` of `J_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub nu: f64,
    pub index: u32,
    pub value: f64,
}

/// First positive zero of `J_ν`.
pub fn first_zero(nu: f64) -> Result<BesselZero> {
    bessel_zero(nu, 1)
}

/// The `index`-th positive zero of `J_ν`, `index ≥ 1`.
pub fn bessel_zero(nu: f64, index: u32) -> Result<BesselZero> {
    check_order(nu)?;
    if index == 0 {
        return Err(Error::Domain("zero index starts at 1".into()));
    }
    // all zeros exceed ν and consecutive zeros are roughly π apart
    let limit = nu + 10.0 * (1.0 + nu.cbrt()) + 4.0 * f64::from(index - 1);
    let step = 0.25;
    let f = |x: f64| bessel_j_unchecked(nu, x);

    let mut lo = nu;
    let mut f_lo = f(lo);
    let mut found = 0;
    while lo < limit {
        let hi = lo + step;
        let f_hi = f(hi);
        if f_hi == 0.0 || f_lo.signum() != f_hi.signum() {
            found += 1;
            if found == index {
                let root = refine_root(&f, |x| nu / x * f(x) - f_next(nu, x), lo, hi);
                return Ok(BesselZero { nu, index, value: root });
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::ZeroNotBracketed { nu, searched_to: limit })
}

fn f_next(nu: f64, x: f64) -> f64 {
    bessel_j_unchecked(nu + 1.0, x)
}

/// Location of the first maximum of `J_ν`, the first positive root of `J'_ν`.
pub fn first_max(nu: f64) -> Result<f64> {
    let zero = first_zero(nu)?.value;
    let derivative = |x: f64| nu / x * bessel_j_unchecked(nu, x) - f_next(nu, x);
    // J'' from Bessel's equation
    let second = |x: f64| {
        let j = bessel_j_unchecked(nu, x);
        -derivative(x) / x - (1.0 - nu * nu / (x * x)) * j
    };
    let lo = nu;
    if derivative(lo) <= 0.0 || derivative(zero) >= 0.0 {
        return Err(Error::ZeroNotBracketed { nu, searched_to: zero });
    }
    Ok(refine_root(&derivative, second, lo, zero))
}

/// Bisection to a tight bracket, then Newton steps that stay inside it.
fn refine_root(f: &impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-10 * hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let fx = f(x);
        let d = df(x);
        if fx == 0.0 || d == 0.0 {
            break;
        }
        let next = x - fx / d;
        if !(next > lo && next < hi) {
            break;
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            x = next;
            break;
        }
        x = next;
    }
    x
}

#[cfg(test)]
// reference values are quoted at the precision they were computed
#[allow(clippy::excessive_precision, clippy::approx_constant)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // (ν, x, J_ν(x)) from 40-digit arbitrary-precision evaluation
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.0, 0.1, 0.99750156206604003),
        (0.5, 1.5707963267948966, 0.63661977236758136),
        (0.3, 2.5, 0.17564108274377366),
        (0.6666666666666666, 3.0, 0.16841218049067069),
        (1.0, 3.8317, 2.4045590431036321e-6),
        (2.5, 4.0, 0.44088497455734117),
        (7.25, 0.7, 5.8207143578103352e-8),
        (20.0, 25.0, 0.051994049228303232),
        (20.0, 5.0, 2.7703300521289417e-11),
        (13.7, 40.0, 0.045822608313541862),
        (50.0, 30.0, 2.0581656631564178e-8),
        (50.0, 75.0, 0.094076799581573465),
        (0.75, 100.0, -0.063581765898987905),
        (99.5, 120.0, 0.054119188019731467),
        (100.0, 200.0, 0.0093332141865575865),
        (3.1, 180.0, 0.00075776208515544776),
        (60.0, 1.0, 1.0381149765645213e-100),
    ];

    #[test]
    fn matches_reference_values() {
        for &(nu, x, expected) in REFERENCE {
            let got = bessel_j(nu, x).unwrap();
            let rel = ((got - expected) / expected).abs();
            // J_1(3.8317) sits next to a zero, so only absolute accuracy is meaningful
            let tol = if expected.abs() < 1e-5 && x > 1.0 && nu < 5.0 { 1e-6 } else { 1e-12 };
            assert!(rel < tol, "J_{nu}({x}) = {got}, expected {expected}, rel {rel:e}");
        }
    }

    #[test]
    fn origin_and_half_order_closed_form() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(2.5, 0.0).unwrap(), 0.0);
        let x = PI / 2.0;
        let closed = (2.0 / (PI * x)).sqrt() * x.sin();
        assert!((bessel_j(0.5, x).unwrap() - closed).abs() < 1e-15);
        for &x in &[0.3, 2.0, 7.5, 31.0, 150.0] {
            let closed = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x).unwrap();
            assert!((got - closed).abs() < 1e-13, "x = {x}: {got} vs {closed}");
        }
    }

    #[test]
    fn rejects_negative_inputs() {
        assert!(bessel_j(-0.5, 1.0).is_err());
        assert!(bessel_j(1.0, -1.0).is_err());
        assert!(bessel_j(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn derivative_at_small_argument() {
        let d = bessel_j_prime(0.0, 1e-8).unwrap();
        assert!(d.abs() < 1e-8);
        assert!(bessel_j_prime(0.5, 0.0).is_err());
        assert_eq!(bessel_j_prime(1.0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn derivative_recurrence_identity_at_zero() {
        // J'_1(j) = J_0(j) − J_1(j)/j and J_1(j) = 0
        let j = first_zero(1.0).unwrap().value;
        let lhs = bessel_j_prime(1.0, j).unwrap();
        let rhs = bessel_j(0.0, j).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let (nu, x, h) = (2.5, 4.0, 1e-5);
        let fd = (bessel_j(nu, x + h).unwrap() - bessel_j(nu, x - h).unwrap()) / (2.0 * h);
        assert!((bessel_j_prime(nu, x).unwrap() - fd).abs() < 1e-7);
    }

    #[test]
    fn three_term_recurrence() {
        for &nu in &[1.0, 1.37, 4.5, 12.0, 27.8, 50.0] {
            for &x in &[0.5, 1.7, 6.0, 19.3, 44.0, 100.0] {
                let lo = bessel_j(nu - 1.0, x).unwrap();
                let mid = bessel_j(nu, x).unwrap();
                let hi = bessel_j(nu + 1.0, x).unwrap();
                let rhs = 2.0 * nu / x * mid - lo;
                let scale = hi.abs().max(lo.abs()).max(mid.abs());
                assert!((hi - rhs).abs() <= 1e-9 * scale, "nu={nu} x={x}: {hi} vs {rhs}");
            }
        }
    }

    // zeros 1..=5 and first derivative root, from arbitrary-precision root finding
    const ZEROS: &[(f64, [f64; 5], f64)] = &[
        (
            0.5,
            [3.1415926535897932, 6.2831853071795865, 9.4247779607693797, 12.566370614359173, 15.707963267948966],
            1.1655611852072113,
        ),
        (
            2.0 / 3.0,
            [3.3756106526936204, 6.530255936513128, 9.6765806352380156, 12.820608678466481, 15.963683880906118],
            1.4012180193682851,
        ),
        (
            1.0,
            [3.8317059702075123, 7.0155866698156188, 10.173468135062722, 13.323691936314223, 16.470630050877633],
            1.8411837813406593,
        ),
        (
            2.0,
            [5.1356223018406826, 8.4172441403998649, 11.619841172149059, 14.795951782351261, 17.959819494987826],
            3.0542369282271403,
        ),
        (
            4.5,
            [8.1825614525712427, 11.704907154570391, 15.039664707616521, 18.30125595954199, 21.525417733399945],
            5.8684198630305147,
        ),
        (
            10.0,
            [14.475500686554541, 18.433463666966583, 22.046985364697802, 25.509450554182826, 28.887375063530457],
            11.770876674955582,
        ),
        (
            20.0,
            [25.417140814072524, 29.961603791625156, 33.988702785235191, 37.772857844399052, 41.413065513892636],
            22.219146482901301,
        ),
        (
            50.0,
            [57.116899160119174, 62.807698764835361, 67.697408410764774, 72.19036654401117, 76.437072182667947],
            52.99764038731665,
        ),
        (
            100.0,
            [108.83616589840977, 115.73935123918876, 121.57533101701064, 126.87075615148388, 131.82393465391846],
            103.76837768254227,
        ),
    ];

    #[test]
    fn zeros_and_maxima_match_reference() {
        for &(nu, zeros, max) in ZEROS {
            for (k, &expected) in zeros.iter().enumerate() {
                let z = bessel_zero(nu, k as u32 + 1).unwrap();
                assert!((z.value - expected).abs() < 1e-11 * expected, "ν={nu} k={k}: {}", z.value);
                assert!(bessel_j(nu, z.value).unwrap().abs() < 1e-12);
                assert!(z.value > nu);
            }
            let m = first_max(nu).unwrap();
            assert!((m - max).abs() < 1e-10 * max, "ν={nu}: max {m} vs {max}");
        }
    }

    #[test]
    fn first_zero_anchors() {
        let z20 = first_zero(20.0).unwrap().value;
        assert!((z20 - 25.417).abs() < 1e-3);
        assert!((z20 * z20 - 646.03).abs() < 0.01);
        let z23 = first_zero(2.0 / 3.0).unwrap().value;
        assert!((z23 - 3.3761).abs() < 1e-3);
        assert!((first_zero(1.0).unwrap().value - 3.8317).abs() < 1e-4);
    }

    #[test]
    fn first_max_interlaces() {
        for &nu in &[1.0, 5.0, 20.0] {
            let m = first_max(nu).unwrap();
            assert!(nu < m && m < first_zero(nu).unwrap().value);
            assert!(bessel_j_prime(nu, m).unwrap().abs() < 1e-10);
        }
        assert!((first_max(1.0).unwrap() - 1.8412).abs() < 1e-3);
    }

    #[test]
    fn first_zero_increases_with_order() {
        let mut prev = 0.0;
        for k in 1..=120 {
            let z = first_zero(0.5 * k as f64).unwrap().value;
            assert!(z > prev);
            prev = z;
        }
    }

    #[test]
    fn first_zero_decreases_with_aperture() {
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let theta0 = PI / 20.0 + (1.5 * PI - PI / 20.0) * k as f64 / 200.0;
            let z = first_zero(PI / theta0).unwrap().value;
            assert!(z < prev, "theta0 = {theta0}");
            prev = z;
        }
    }

    #[test]
    fn zero_search_rejects_bad_orders() {
        assert!(first_zero(0.0).is_err());
        assert!(first_zero(150.0).is_err());
        assert!(bessel_zero(2.0, 0).is_err());
    }
}
