//! Closed-form sharp constants in half-space maximum principles.
//!
//! For the Lamé and Stokes systems the constant 𝒦(ℝⁿ₊) in
//! `|u(x)| ≤ 𝒦 sup_{∂ℝⁿ₊} |u|` is
//!
//! ```text
//! 𝒦 = c_n ∫₀^{π/2} [(1 − κ)² + nκ(nκ − 2κ + 2) cos²ϑ]^{1/2} sin^{n−2}ϑ dϑ,
//! c_n = 2Γ(n/2) / (√π Γ((n − 1)/2)),
//! ```
//!
//! which also has elliptic-integral and power-series forms for n = 2, a
//! logarithmic form for n = 3 and a Gamma ratio at κ = 1. The gradient of a
//! biharmonic function obeys the same kind of bound with integrand
//! `[4 + n(n − 4) cos²ϑ]^{1/2}`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::check_kappa;
use crate::numerics::elliptic::elliptic_e_with_complement;
use crate::numerics::gamma::gamma_ratio;
use crate::numerics::{integrate_1d, QuadratureSpec};

/// How a [`SharpConstantResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm1dIntegral,
    GammaRatio,
    EllipticIntegral,
    PowerSeries,
    LogClosedForm,
    HemisphereSupNumeric,
    ExtremalBoundaryNumeric,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm1dIntegral => "closed_form_1d_integral",
            Method::GammaRatio => "gamma_ratio",
            Method::EllipticIntegral => "elliptic_integral",
            Method::PowerSeries => "power_series",
            Method::LogClosedForm => "log_closed_form",
            Method::HemisphereSupNumeric => "hemisphere_sup_numeric",
            Method::ExtremalBoundaryNumeric => "extremal_boundary_numeric",
        }
    }
}

/// A sharp constant with the method used and an error estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpConstantResult {
    pub value: f64,
    pub method: Method,
    pub err_est: f64,
    /// Maximising direction z, for the numeric supremum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SharpConstantResult {
    pub fn new(value: f64, method: Method, err_est: f64) -> Self {
        SharpConstantResult {
            value,
            method,
            err_est,
            argmax: None,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

pub const NEGATIVE_KAPPA_NOTE: &str =
    "kappa < 0: sharpness of the formula is not established for negative kappa";

/// Quadrature used for the 1-D closed forms. Tighter than the library
/// default so that the integral form can be compared with the special-function
/// forms at the 1e-10 level.
pub fn closed_form_quadrature() -> QuadratureSpec {
    QuadratureSpec::adaptive(1e-13).with_max_subdivisions(20_000)
}

/// c_n = 2Γ(n/2) / (√π Γ((n − 1)/2)); equals 2ω_{n−1}/ωₙ.
pub fn common_prefactor(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let nf = n as f64;
    Ok(2.0 / PI.sqrt() * gamma_ratio(nf / 2.0, (nf - 1.0) / 2.0)?)
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidInput(format!(
            "dimension n must be at least 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// c_n ∫₀^{π/2} √(a + b cos²ϑ) sin^{n−2}ϑ dϑ.
fn weighted_sqrt_integral(n: usize, a: f64, b: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let pre = common_prefactor(n)?;
    let power = (n - 2) as i32;
    let q = integrate_1d(
        |t: f64| {
            let c = t.cos();
            (a + b * c * c).max(0.0).sqrt() * t.sin().powi(power)
        },
        0.0,
        FRAC_PI_2,
        spec,
    )?;
    Ok((
        pre * q.value,
        pre * q.err_est + 4.0 * f64::EPSILON * pre * q.value.abs(),
    ))
}

/// Lamé/Stokes constant from the 1-D integral, κ ∈ (−1/2, 1].
pub fn lame_stokes_constant(n: usize, kappa: f64) -> Result<SharpConstantResult> {
    lame_stokes_constant_with(n, kappa, &closed_form_quadrature())
}

pub fn lame_stokes_constant_with(
    n: usize,
    kappa: f64,
    spec: &QuadratureSpec,
) -> Result<SharpConstantResult> {
    check_dimension(n)?;
    check_kappa(kappa)?;
    let nf = n as f64;
    let a = (1.0 - kappa).powi(2);
    let b = nf * kappa * (nf * kappa - 2.0 * kappa + 2.0);
    let (value, err) = weighted_sqrt_integral(n, a, b, spec)?;
    let res = SharpConstantResult::new(value, Method::ClosedForm1dIntegral, err);
    Ok(if kappa < 0.0 {
        res.with_note(NEGATIVE_KAPPA_NOTE)
    } else {
        res
    })
}

/// Stokes constant (κ = 1): (2/√π) Γ(n/2 + 1)/Γ((n + 1)/2).
pub fn stokes_constant(n: usize) -> Result<SharpConstantResult> {
    check_dimension(n)?;
    let nf = n as f64;
    let value = 2.0 / PI.sqrt() * gamma_ratio(nf / 2.0 + 1.0, (nf + 1.0) / 2.0)?;
    Ok(SharpConstantResult::new(
        value,
        Method::GammaRatio,
        1e-14 * value,
    ))
}

/// n = 2 Lamé constant (2/π)(1 + κ) E(2√κ/(1 + κ)), κ ∈ [0, 1].
pub fn lame_constant_2d_elliptic(kappa: f64) -> Result<SharpConstantResult> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::domain("kappa", kappa, "[0, 1]"));
    }
    let k = 2.0 * kappa.sqrt() / (1.0 + kappa);
    // complementary modulus in closed form, exact near κ = 1
    let kp = (1.0 - kappa) / (1.0 + kappa);
    let value = 2.0 / PI * (1.0 + kappa) * elliptic_e_with_complement(k, kp);
    Ok(SharpConstantResult::new(
        value,
        Method::EllipticIntegral,
        1e-14 * value,
    ))
}

/// Coefficient of κ^{2j} in the n = 2 series: [(2j − 3)!! / (2^j j!)]²,
/// with (−1)!! = 1.
pub fn series_coefficient(j: usize) -> f64 {
    // √c₁ = 1/2 and √c_{i+1}/√c_i = (i − 1/2)/(i + 1)
    let mut root = 1.0_f64;
    for i in 0..j {
        root *= if i == 0 {
            0.5
        } else {
            (i as f64 - 0.5) / (i as f64 + 1.0)
        };
    }
    root * root
}

/// Partial sum of the first `terms` terms of the n = 2 series (the constant
/// term counts as the first), κ ∈ [0, 1).
///
/// `err_est` bounds the remainder by first omitted term / (1 − κ²), plus
/// rounding.
pub fn lame_constant_2d_series(kappa: f64, terms: usize) -> Result<SharpConstantResult> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::domain("kappa", kappa, "[0, 1)"));
    }
    if terms < 1 {
        return Err(Error::InvalidInput("series needs at least one term".into()));
    }
    let (sum, next) = series_sum(kappa, terms);
    let remainder = next / (1.0 - kappa * kappa);
    let rounding = 2.0 * terms as f64 * f64::EPSILON * sum;
    Ok(SharpConstantResult::new(
        sum,
        Method::PowerSeries,
        remainder + rounding,
    ))
}

/// Returns (Σ_{j<terms} c_j κ^{2j}, c_terms κ^{2·terms}).
fn series_sum(kappa: f64, terms: usize) -> (f64, f64) {
    let k2 = kappa * kappa;
    let mut root = 1.0_f64; // √c_j
    let mut power = 1.0_f64; // κ^{2j}
    let mut sum = 0.0;
    for j in 0..terms {
        sum += root * root * power;
        root *= if j == 0 {
            0.5
        } else {
            (j as f64 - 0.5) / (j as f64 + 1.0)
        };
        power *= k2;
    }
    (sum, root * root * power)
}

/// Series with as many terms as needed for the remainder bound to drop below
/// `tol` (at most `MAX_SERIES_TERMS`).
pub fn lame_constant_2d_series_adaptive(kappa: f64, tol: f64) -> Result<SharpConstantResult> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::domain("kappa", kappa, "[0, 1)"));
    }
    let k2 = kappa * kappa;
    let mut root = 1.0_f64;
    let mut power = 1.0_f64;
    let mut terms = 0;
    while terms < MAX_SERIES_TERMS {
        terms += 1;
        root *= if terms == 1 {
            0.5
        } else {
            (terms as f64 - 1.5) / terms as f64
        };
        power *= k2;
        if root * root * power / (1.0 - k2) <= tol {
            break;
        }
    }
    lame_constant_2d_series(kappa, terms)
}

pub const MAX_SERIES_TERMS: usize = 1_000_000;

/// Switch-over distance for the limit branches of the n = 3 log form.
const LOG_FORM_LIMIT: f64 = 1e-6;

/// n = 3 Lamé constant
/// ½[1 + 2κ + (1 − κ)²/√(3κ(κ + 2)) · log((1 + 2κ + √(3κ(κ + 2)))/(1 − κ))],
/// κ ∈ [0, 1].
pub fn lame_constant_3d_log(kappa: f64) -> Result<SharpConstantResult> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::domain("kappa", kappa, "[0, 1]"));
    }
    let eps = 1.0 - kappa;
    let value = if kappa < LOG_FORM_LIMIT {
        // 𝒦 = 1 + (3/5)κ² + O(κ³)
        1.0 + 0.6 * kappa * kappa
    } else if eps < LOG_FORM_LIMIT {
        // 𝒦 = 3/2 − ε + ε² log(6/ε)/6 + O(ε³ log ε),  ε = 1 − κ
        if eps == 0.0 {
            1.5
        } else {
            1.5 - eps + eps * eps * (6.0 / eps).ln() / 6.0
        }
    } else {
        let s = (3.0 * kappa * (kappa + 2.0)).sqrt();
        let t = 1.0 + 2.0 * kappa;
        0.5 * (t + eps * eps / s * ((t + s) / eps).ln())
    };
    Ok(SharpConstantResult::new(
        value,
        Method::LogClosedForm,
        1e-14 * value,
    ))
}

/// Sharp constant for |∇u| of biharmonic u in ℝⁿ₊.
pub fn biharmonic_gradient_constant(n: usize) -> Result<SharpConstantResult> {
    check_dimension(n)?;
    let nf = n as f64;
    let (value, err) = weighted_sqrt_integral(n, 4.0, nf * (nf - 4.0), &closed_form_quadrature())?;
    Ok(SharpConstantResult::new(
        value,
        Method::ClosedForm1dIntegral,
        err,
    ))
}

/// Exact biharmonic-gradient constants where the integral is elementary:
/// 4/π (n = 2), 1/2 + 2π√3/9 (n = 3) and 2 (n = 4).
pub fn biharmonic_gradient_exact(n: usize) -> Option<f64> {
    match n {
        2 => Some(4.0 / PI),
        3 => Some(0.5 + 2.0 * PI * 3f64.sqrt() / 9.0),
        4 => Some(2.0),
        _ => None,
    }
}

/// Sharp constant for (σ₁₂² + σ₂₂²)^{1/2} of the planar deformed state in the
/// half-plane. It equals 4/π, the two-dimensional Stokes constant, and is
/// returned as that value.
pub fn planar_deformed_constant() -> SharpConstantResult {
    let stokes = stokes_constant(2).expect("n = 2 is valid");
    SharpConstantResult::new(stokes.value, Method::ClosedForm1dIntegral, stokes.err_est)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 30 digits
    const LAME_2D_03: f64 = 1.022_629_514_920_858_5;
    const LAME_3D_05: f64 = 1.133_194_290_062_992_5;
    const LAME_3D_099: f64 = 1.490_107_219_359_591;

    #[test]
    fn stokes_values() {
        assert!((stokes_constant(2).unwrap().value - 4.0 / PI).abs() < 1e-14);
        assert!((stokes_constant(3).unwrap().value - 1.5).abs() < 1e-14);
        assert!((stokes_constant(4).unwrap().value - 16.0 / (3.0 * PI)).abs() < 1e-14);
        assert!(stokes_constant(1).is_err());
    }

    #[test]
    fn stokes_large_n_uses_log_gamma() {
        // Γ(n/2+1)/Γ((n+1)/2) ~ √(n/2) for large n
        let v = stokes_constant(400).unwrap().value;
        assert!((v / (2.0 / PI.sqrt() * 200f64.sqrt()) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn integral_form_known_values() {
        assert!((lame_stokes_constant(2, 1.0).unwrap().value - 4.0 / PI).abs() < 1e-12);
        assert!((lame_stokes_constant(3, 1.0).unwrap().value - 1.5).abs() < 1e-12);
        assert!((lame_stokes_constant(3, 0.0).unwrap().value - 1.0).abs() < 1e-12);
        assert!((lame_stokes_constant(3, 0.5).unwrap().value - LAME_3D_05).abs() < 1e-12);
        assert!((lame_stokes_constant(2, 0.3).unwrap().value - LAME_2D_03).abs() < 1e-12);
    }

    #[test]
    fn negative_kappa_is_flagged() {
        let r = lame_stokes_constant(3, -0.25).unwrap();
        assert_eq!(r.notes, vec![NEGATIVE_KAPPA_NOTE.to_string()]);
        assert!((r.value - 1.040_548_507_744_412).abs() < 1e-12);
        assert!(lame_stokes_constant(3, 0.25).unwrap().notes.is_empty());
        assert!(lame_stokes_constant(3, -0.5).is_err());
        assert!(lame_stokes_constant(3, 1.1).is_err());
    }

    #[test]
    fn elliptic_form() {
        assert!((lame_constant_2d_elliptic(0.0).unwrap().value - 1.0).abs() < 1e-15);
        assert!((lame_constant_2d_elliptic(1.0).unwrap().value - 4.0 / PI).abs() < 1e-15);
        let e = lame_constant_2d_elliptic(0.3).unwrap().value;
        let i = lame_stokes_constant(2, 0.3).unwrap().value;
        assert!((e - i).abs() < 1e-10);
        assert!((e - LAME_2D_03).abs() < 1e-14);
        assert!(lame_constant_2d_elliptic(-0.1).is_err());
    }

    #[test]
    fn series_coefficients() {
        assert_eq!(series_coefficient(0), 1.0);
        assert_eq!(series_coefficient(1), 0.25);
        assert_eq!(series_coefficient(2), 1.0 / 64.0);
        assert!((series_coefficient(3) - 1.0 / 256.0).abs() < 1e-18);
    }

    #[test]
    fn series_partial_sums() {
        assert_eq!(lame_constant_2d_series(0.0, 7).unwrap().value, 1.0);
        assert_eq!(lame_constant_2d_series(0.5, 2).unwrap().value, 1.0625);
        let s = lame_constant_2d_series(0.9, 40).unwrap();
        let e = lame_constant_2d_elliptic(0.9).unwrap();
        assert!((s.value - e.value).abs() < 1e-8);
        assert!((s.value - e.value).abs() <= s.err_est + e.err_est);
        assert!(lame_constant_2d_series(1.0, 3).is_err());
        assert!(lame_constant_2d_series(0.5, 0).is_err());
    }

    #[test]
    fn adaptive_series_meets_tolerance() {
        for &k in &[0.1, 0.5, 0.9, 0.99] {
            let s = lame_constant_2d_series_adaptive(k, 1e-12).unwrap();
            let e = lame_constant_2d_elliptic(k).unwrap();
            assert!(
                (s.value - e.value).abs() <= s.err_est + e.err_est,
                "kappa {k}"
            );
            assert!(s.err_est < 1e-11);
        }
    }

    #[test]
    fn log_form_limits_and_interior() {
        assert_eq!(lame_constant_3d_log(1.0).unwrap().value, 1.5);
        assert_eq!(lame_constant_3d_log(0.0).unwrap().value, 1.0);
        let l = lame_constant_3d_log(0.5).unwrap().value;
        assert!((l - LAME_3D_05).abs() < 1e-14);
        assert!((lame_constant_3d_log(0.99).unwrap().value - LAME_3D_099).abs() < 1e-13);
        assert!(lame_constant_3d_log(-0.1).is_err());
    }

    #[test]
    fn log_form_is_continuous_across_branches() {
        for &k in &[1e-6, 1.0 - 1e-6] {
            let below = lame_constant_3d_log(k - 1e-13).unwrap().value;
            let above = lame_constant_3d_log(k + 1e-13).unwrap().value;
            assert!(
                (below - above).abs() < 1e-12,
                "kappa {k}: {below} vs {above}"
            );
            let integral = lame_stokes_constant(3, k).unwrap().value;
            assert!((below - integral).abs() < 1e-11);
        }
    }

    #[test]
    fn biharmonic_values() {
        let k2 = biharmonic_gradient_constant(2).unwrap().value;
        let k3 = biharmonic_gradient_constant(3).unwrap().value;
        let k4 = biharmonic_gradient_constant(4).unwrap().value;
        assert!((k2 - 4.0 / PI).abs() < 1e-12);
        assert!((k3 - (0.5 + 2.0 * PI * 3f64.sqrt() / 9.0)).abs() < 1e-12);
        assert!((k4 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn planar_deformed_matches_stokes_and_biharmonic() {
        let p = planar_deformed_constant();
        assert_eq!(p.value, stokes_constant(2).unwrap().value);
        assert!((p.value - 4.0 / PI).abs() < 1e-14);
        assert!((p.value - biharmonic_gradient_constant(2).unwrap().value).abs() < 1e-10);
        assert_eq!(p.method, Method::ClosedForm1dIntegral);
    }

    #[test]
    fn prefactor_normalisation() {
        // c_n ∫₀^{π/2} sin^{n−2} = 1
        for n in 2..=8 {
            let (v, _) = weighted_sqrt_integral(n, 1.0, 0.0, &closed_form_quadrature()).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "n = {n}");
        }
    }
}
