//! Complete elliptic integral of the second kind by the arithmetic-geometric
//! mean.
//!
//! Modulus convention: `E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_ITER: usize = 64;

/// E(k) for the modulus k ∈ [0, 1].
pub fn complete_elliptic_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain("elliptic modulus k", k, "[0, 1]"));
    }
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(elliptic_e_with_complement(k, kp))
}

/// E(k) given both the modulus and its complement k' = √(1 − k²).
///
/// Callers that know k' in closed form should pass it directly: forming
/// 1 − k² loses digits when k is close to 1.
pub(crate) fn elliptic_e_with_complement(k: f64, kp: f64) -> f64 {
    if kp == 0.0 {
        return 1.0;
    }
    // E = K · (1 − Σ_{j≥0} 2^{j−1} c_j²),  K = π / (2·AGM(1, k'))
    let mut a = 1.0_f64;
    let mut g = kp;
    let mut weight = 0.5_f64;
    let mut sum = weight * k * k;
    for _ in 0..MAX_ITER {
        let c = 0.5 * (a - g);
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let a_next = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = a_next;
        weight *= 2.0;
        sum += weight * c * c;
    }
    FRAC_PI_2 / a * (1.0 - sum)
}
