//! Gamma function for positive real arguments.
//!
//! Lanczos approximation with g = 7 and nine coefficients, reflected for
//! arguments below 1/2.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("gamma argument", x, "(0, inf)"));
    }
    Ok(gamma_unchecked(x))
}

/// ln Γ(x) for x > 0. Used where Γ itself would overflow.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma argument", x, "(0, inf)"));
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx), and sin(πx) > 0 on (0, 1/2)
        return Ok(PI.ln() - (PI * x).sin().ln() - ln_gamma_lanczos(1.0 - x));
    }
    Ok(ln_gamma_lanczos(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let (t, series) = lanczos_parts(x);
    (2.0 * PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * series
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let (t, series) = lanczos_parts(x);
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + series.ln()
}

/// Returns (t, A_g(x)) with t = x - 1 + g + 1/2.
fn lanczos_parts(x: f64) -> (f64, f64) {
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    (z + LANCZOS_G + 0.5, series)
}

/// Γ(a) / Γ(b) for positive a, b, switching to logarithms for large arguments.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a.max(b) <= 100.0 {
        Ok(gamma(a)? / gamma(b)?)
    } else {
        Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
    }
}
