//! Poisson-type kernels of the half-space Dirichlet problem.
//!
//! A bounded solution of the Dirichlet problem in ℝⁿ₊ with boundary data f is
//!
//! ```text
//! u(x) = ∫_{∂ℝⁿ₊} M((y − x)/|y − x|) · xₙ/|y − x|ⁿ · f(y′) dy′,   y = (y′, 0),
//! ```
//!
//! where M is continuous on the closed lower hemisphere and integrates to the
//! identity over it. For the Lamé and Stokes systems
//!
//! ```text
//! M_ij(σ) = (2/ωₙ) [ (1 − κ) δ_ij + n κ σ_i σ_j ],
//! ```
//!
//! with κ = 1 for Stokes and κ = (λ + μ)/(λ + 3μ) for Lamé.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::gamma::gamma;

/// Lower end of the accepted κ range (exclusive).
pub const KAPPA_MIN: f64 = -0.5;
/// Upper end of the accepted κ range (inclusive, the Stokes value).
pub const KAPPA_MAX: f64 = 1.0;
pub const KAPPA_RANGE: &str = "(-0.5, 1]";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "system", rename_all = "snake_case")]
pub enum SystemKind {
    Harmonic,
    /// Elastostatics with Lamé constants λ, μ.
    Lame {
        lambda: f64,
        mu: f64,
    },
    /// A Lamé-type kernel given directly by κ. κ = 1 is the Stokes kernel.
    LameKappa {
        kappa: f64,
    },
    /// Stokes flow. The velocity representation does not depend on the
    /// viscosity ν; it is carried only so the problem statement is complete.
    Stokes {
        nu: f64,
    },
    Biharmonic,
    PlanarDeformed,
}

/// A validated choice of system and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemSpec {
    kind: SystemKind,
    n: usize,
    kappa: Option<f64>,
}

impl SystemSpec {
    pub fn new(kind: SystemKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "dimension n must be at least 2, got {n}"
            )));
        }
        let kappa = match kind {
            SystemKind::Harmonic => Some(0.0),
            SystemKind::Lame { lambda, mu } => {
                if !(mu > 0.0) {
                    return Err(Error::domain("mu", mu, "(0, inf)"));
                }
                if !(lambda + 2.0 * mu > 0.0) {
                    return Err(Error::domain(
                        "lambda + 2 mu",
                        lambda + 2.0 * mu,
                        "(0, inf)",
                    ));
                }
                let kappa = kappa_from_lame(lambda, mu);
                check_kappa(kappa)?;
                Some(kappa)
            }
            SystemKind::LameKappa { kappa } => {
                check_kappa(kappa)?;
                Some(kappa)
            }
            SystemKind::Stokes { nu } => {
                if !(nu > 0.0) {
                    return Err(Error::domain("nu", nu, "(0, inf)"));
                }
                Some(1.0)
            }
            SystemKind::Biharmonic => None,
            SystemKind::PlanarDeformed => {
                if n != 2 {
                    return Err(Error::InvalidInput(format!(
                        "the planar deformed state is two-dimensional, got n = {n}"
                    )));
                }
                None
            }
        };
        Ok(SystemSpec { kind, n, kappa })
    }

    pub fn harmonic(n: usize) -> Result<Self> {
        Self::new(SystemKind::Harmonic, n)
    }

    pub fn lame(n: usize, lambda: f64, mu: f64) -> Result<Self> {
        Self::new(SystemKind::Lame { lambda, mu }, n)
    }

    pub fn lame_kappa(n: usize, kappa: f64) -> Result<Self> {
        Self::new(SystemKind::LameKappa { kappa }, n)
    }

    pub fn stokes(n: usize, nu: f64) -> Result<Self> {
        Self::new(SystemKind::Stokes { nu }, n)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// κ of the Lamé-type kernel; 0 for the harmonic kernel, `None` for systems
    /// without one.
    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }
}

/// κ = (λ + μ)/(λ + 3μ).
pub fn kappa_from_lame(lambda: f64, mu: f64) -> f64 {
    (lambda + mu) / (lambda + 3.0 * mu)
}

pub(crate) fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > KAPPA_MIN && kappa <= KAPPA_MAX {
        Ok(())
    } else {
        Err(Error::domain("kappa", kappa, KAPPA_RANGE))
    }
}

/// Area of the unit sphere 𝕊^{n−1}: ωₙ = 2π^{n/2}/Γ(n/2).
pub fn omega_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "omega_n needs n >= 2, got {n}"
        )));
    }
    let half = n as f64 / 2.0;
    Ok(2.0 * PI.powf(half) / gamma(half)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
enum KernelForm {
    /// m = 1, M ≡ value.
    Scalar { value: f64 },
    /// m = n, M(σ) = scale · [(1 − κ) I + n κ σσᵀ].
    LameType { kappa: f64, scale: f64 },
}

/// The matrix function M on the lower hemisphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelMatrix {
    m: usize,
    n: usize,
    form: KernelForm,
}

/// Kernel of the half-space representation for `spec`.
pub fn kernel_for(spec: &SystemSpec) -> Result<KernelMatrix> {
    let n = spec.n();
    let scale = 2.0 / omega_n(n)?;
    match spec.kind() {
        SystemKind::Harmonic => Ok(KernelMatrix {
            m: 1,
            n,
            form: KernelForm::Scalar { value: scale },
        }),
        SystemKind::Lame { .. } | SystemKind::LameKappa { .. } | SystemKind::Stokes { .. } => {
            let kappa = spec.kappa().expect("Lamé-type systems carry kappa");
            Ok(KernelMatrix {
                m: n,
                n,
                form: KernelForm::LameType { kappa, scale },
            })
        }
        SystemKind::Biharmonic | SystemKind::PlanarDeformed => Err(Error::Unsupported(
            "no kernel in scope for this system; only its closed-form constant is available".into(),
        )),
    }
}

impl KernelMatrix {
    /// Number of solution components.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Space dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> Option<f64> {
        match self.form {
            KernelForm::Scalar { .. } => None,
            KernelForm::LameType { kappa, .. } => Some(kappa),
        }
    }

    /// M(σ) as an m×m matrix.
    pub fn eval(&self, sigma: &[f64]) -> DMatrix<f64> {
        debug_assert_eq!(sigma.len(), self.n);
        match self.form {
            KernelForm::Scalar { value } => DMatrix::from_element(1, 1, value),
            KernelForm::LameType { kappa, scale } => {
                let nk = self.n as f64 * kappa;
                DMatrix::from_fn(self.m, self.m, |i, j| {
                    let delta = if i == j { 1.0 - kappa } else { 0.0 };
                    scale * (delta + nk * (sigma[i] * sigma[j]))
                })
            }
        }
    }

    /// Writes M*(σ) z into `out`.
    pub fn transpose_apply(&self, sigma: &[f64], z: &[f64], out: &mut [f64]) {
        match self.form {
            KernelForm::Scalar { value } => out[0] = value * z[0],
            KernelForm::LameType { kappa, scale } => {
                // M is symmetric: M*z = scale·[(1 − κ) z + nκ (σ·z) σ]
                let sz: f64 = sigma.iter().zip(z).map(|(s, w)| s * w).sum();
                let c = self.n as f64 * kappa * sz;
                for ((o, w), s) in out.iter_mut().zip(z).zip(sigma) {
                    *o = scale * ((1.0 - kappa) * w + c * s);
                }
            }
        }
    }

    /// |M*(σ) z|.
    pub fn transpose_apply_norm(&self, sigma: &[f64], z: &[f64]) -> f64 {
        match self.form {
            KernelForm::Scalar { value } => (value * z[0]).abs(),
            KernelForm::LameType { .. } => {
                let mut buf = [0.0; 8];
                if self.m <= buf.len() {
                    let out = &mut buf[..self.m];
                    self.transpose_apply(sigma, z, out);
                    out.iter().map(|v| v * v).sum::<f64>().sqrt()
                } else {
                    let mut out = vec![0.0; self.m];
                    self.transpose_apply(sigma, z, &mut out);
                    out.iter().map(|v| v * v).sum::<f64>().sqrt()
                }
            }
        }
    }

    /// Upper bound on the spectral norm of M(σ) over the hemisphere.
    pub fn norm_bound(&self) -> f64 {
        match self.form {
            KernelForm::Scalar { value } => value.abs(),
            // eigenvalues: scale·(1 − κ) on σ⊥, scale·(1 + (n − 1)κ) along σ
            KernelForm::LameType { kappa, scale } => {
                scale
                    * (1.0 - kappa)
                        .abs()
                        .max((1.0 + (self.n as f64 - 1.0) * kappa).abs())
            }
        }
    }
}
