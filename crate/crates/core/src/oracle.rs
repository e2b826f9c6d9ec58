//! Numerical re-derivation of the sharp constants from the kernels.
//!
//! Two independent routes are provided:
//!
//! * [`hemisphere_sup`] evaluates `sup_{|z|=1} ∫_{𝕊ⁿ⁻¹₋} |M*(σ) z| dσ` directly.
//! * [`extremal_boundary_data`] builds the boundary data that aligns with
//!   M*(σ) z pointwise, and [`evaluate_solution_component`] integrates the
//!   half-space representation of the resulting solution over the boundary
//!   plane, returning (u(x), z).

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::atomic::{AtomicBool, Ordering};

use nalgebra::DVector;
use serde::Serialize;

use crate::constants::{Method, SharpConstantResult};
use crate::error::{Error, Result};
use crate::kernels::{kernel_for, KernelMatrix, SystemSpec};
use crate::numerics::quadrature::{
    integrate_hemisphere_split, integrate_nested_split, integrate_outcome_split,
};
use crate::numerics::sphere::{maximize_on_sphere_with, SphereSearch};
use crate::numerics::{Quadrature, QuadratureSpec};

/// Default truncation radius in units of the height xₙ of the observation point.
pub const DEFAULT_RADIUS_FACTOR: f64 = 1e4;

/// sup over |z| = 1 of ∫ |M*(σ) z| dσ over the lower hemisphere.
pub fn hemisphere_sup(kernel: &KernelMatrix) -> Result<SharpConstantResult> {
    hemisphere_sup_with(
        kernel,
        &QuadratureSpec::hemisphere(),
        &SphereSearch::for_dimension(kernel.m()),
    )
}

pub fn hemisphere_sup_with(
    kernel: &KernelMatrix,
    spec: &QuadratureSpec,
    search: &SphereSearch,
) -> Result<SharpConstantResult> {
    let n = kernel.n();
    if n != 2 && n != 3 {
        return Err(Error::Unsupported(format!(
            "numerical supremum is implemented for n = 2 and n = 3, got n = {n}"
        )));
    }
    spec.validate()?;
    let failed = AtomicBool::new(false);
    let objective = |z: &[f64]| match direction_integral(kernel, z, spec) {
        Ok(q) => q.value,
        Err(Error::NoConvergence { value, .. }) => {
            failed.store(true, Ordering::Relaxed);
            value
        }
        Err(_) => {
            failed.store(true, Ordering::Relaxed);
            f64::NAN
        }
    };
    let best = maximize_on_sphere_with(objective, kernel.m(), search);
    // the reported value is re-evaluated with error checking
    let q = direction_integral(kernel, &best.argmax, spec)?;
    let mut res = SharpConstantResult::new(q.value, Method::HemisphereSupNumeric, q.err_est);
    res.argmax = Some(best.argmax);
    if failed.load(Ordering::Relaxed) {
        res = res.with_note("some grid evaluations did not reach the quadrature tolerance");
    }
    Ok(res)
}

/// ∫_{𝕊ⁿ⁻¹₋} |M*(σ) z| dσ for one direction z.
pub fn direction_integral(
    kernel: &KernelMatrix,
    z: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if z.len() != kernel.m() {
        return Err(Error::InvalidInput(format!(
            "direction has {} components, kernel has {}",
            z.len(),
            kernel.m()
        )));
    }
    let kinks = KinkSet::for_kernel(kernel, z);
    let polar = kinks.as_ref().map(|k| k.polar_breaks()).unwrap_or_default();
    integrate_hemisphere_split(
        |s| kernel.transpose_apply_norm(s, z),
        kernel.n(),
        spec,
        &polar,
        |theta| {
            kinks
                .as_ref()
                .map(|k| k.azimuth_breaks(theta))
                .unwrap_or_default()
        },
    )
}

/// Where σ ↦ |M*(σ) z| has kinks. Only the Stokes kernel (κ = 1) has zeros on
/// the hemisphere, along the great circle σ · z = 0; for κ < 1 the integrand
/// is smooth.
#[derive(Debug, Clone, PartialEq)]
pub struct KinkSet {
    z: Vec<f64>,
}

impl KinkSet {
    pub fn for_kernel(kernel: &KernelMatrix, z: &[f64]) -> Option<Self> {
        (kernel.kappa() == Some(1.0) && matches!(z.len(), 2 | 3)).then(|| KinkSet { z: z.to_vec() })
    }

    /// n = 2: angles φ ∈ (π, 2π) of σ = (cos φ, sin φ) on the circle.
    /// n = 3: polar angles θ where the circle σ · z = 0 is tangent to a
    /// latitude, where the azimuthal integral loses smoothness.
    pub fn polar_breaks(&self) -> Vec<f64> {
        let z = &self.z;
        if z.len() == 2 {
            let beta = z[1].atan2(z[0]);
            return [beta + FRAC_PI_2, beta - FRAC_PI_2]
                .iter()
                .map(|a| a.rem_euclid(2.0 * PI))
                .collect();
        }
        let rho = z[0].hypot(z[1]);
        if rho == 0.0 || z[2] == 0.0 {
            return Vec::new();
        }
        vec![z[2].abs().atan2(rho)]
    }

    /// n = 3: azimuths φ ∈ [0, 2π) with σ(θ, φ) · z = 0, where
    /// σ = (sin θ cos φ, sin θ sin φ, −cos θ).
    pub fn azimuth_breaks(&self, theta: f64) -> Vec<f64> {
        let z = &self.z;
        if z.len() != 3 {
            return Vec::new();
        }
        let rho = z[0].hypot(z[1]);
        let (st, ct) = theta.sin_cos();
        if rho * st == 0.0 {
            return Vec::new();
        }
        let c = z[2] * ct / (rho * st);
        if c.abs() >= 1.0 {
            return Vec::new();
        }
        let beta = z[1].atan2(z[0]);
        let d = c.acos();
        vec![
            (beta + d).rem_euclid(2.0 * PI),
            (beta - d).rem_euclid(2.0 * PI),
        ]
    }
}

/// Observation point, direction and truncation for the boundary-integral
/// evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalProbe {
    pub spec: SystemSpec,
    pub observation_point: Vec<f64>,
    pub direction: Vec<f64>,
    /// Boundary points with |y′ − x′| > R are neglected.
    pub truncation_radius: f64,
    /// Bound on the neglected part of (u(x), z) for any data with |f| ≤ 1.
    pub tail_bound: f64,
}

impl ExtremalProbe {
    /// Validates the probe and derives its tail bound.
    ///
    /// Writing boundary points as y′ = x′ + xₙ tan ψ ω turns the weight
    /// xₙ/|y − x|ⁿ dy′ into the hemisphere element sin^{n−2}ψ dψ dω, so the
    /// region |y′ − x′| > R is the band ψ > ψ_R = atan(R/xₙ) near the equator.
    /// With |f| ≤ 1 the integrand is at most ‖M‖, giving
    ///
    /// ```text
    /// tail ≤ ‖M‖_max · |𝕊ⁿ⁻²| · ∫_{ψ_R}^{π/2} sin^{n−2}ψ dψ
    ///      = ‖M‖_max · 2 · atan(xₙ/R)          (n = 2)
    ///      = ‖M‖_max · 2π · xₙ/√(xₙ² + R²)     (n = 3)
    /// ```
    pub fn new(
        spec: SystemSpec,
        observation_point: Vec<f64>,
        direction: Vec<f64>,
        radius: f64,
    ) -> Result<Self> {
        let n = spec.n();
        if n != 2 && n != 3 {
            return Err(Error::Unsupported(format!(
                "boundary evaluation is implemented for n = 2 and n = 3, got n = {n}"
            )));
        }
        let kernel = kernel_for(&spec)?;
        if observation_point.len() != n {
            return Err(Error::InvalidInput(format!(
                "observation point needs {n} coordinates, got {}",
                observation_point.len()
            )));
        }
        let height = observation_point[n - 1];
        if !(height > 0.0) {
            return Err(Error::domain("x_n", height, "(0, inf)"));
        }
        if direction.len() != kernel.m() {
            return Err(Error::InvalidInput(format!(
                "direction needs {} components, got {}",
                kernel.m(),
                direction.len()
            )));
        }
        let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("direction must be nonzero".into()));
        }
        let direction: Vec<f64> = direction.iter().map(|v| v / norm).collect();
        if !(radius > 10.0 * height) {
            return Err(Error::InvalidInput(format!(
                "truncation radius {radius} must exceed 10 x_n = {}",
                10.0 * height
            )));
        }
        let band = match n {
            2 => 2.0 * (height / radius).atan(),
            _ => 2.0 * PI * height / height.hypot(radius),
        };
        Ok(ExtremalProbe {
            spec,
            observation_point,
            direction,
            truncation_radius: radius,
            tail_bound: kernel.norm_bound() * band,
        })
    }

    pub fn with_default_radius(
        spec: SystemSpec,
        observation_point: Vec<f64>,
        direction: Vec<f64>,
    ) -> Result<Self> {
        let n = observation_point.len();
        let height = observation_point
            .get(n.wrapping_sub(1))
            .copied()
            .unwrap_or(0.0);
        Self::new(
            spec,
            observation_point,
            direction,
            DEFAULT_RADIUS_FACTOR * height,
        )
    }

    fn height(&self) -> f64 {
        self.observation_point[self.observation_point.len() - 1]
    }
}

/// Boundary data f: ∂ℝⁿ₊ → ℝ^m.
pub trait BoundaryData {
    fn value(&self, y_prime: &[f64]) -> Vec<f64>;

    /// Kinks of the integrand (f(y′), M*(σ) z), if known, to align panels with.
    fn kinks(&self) -> Option<KinkSet> {
        None
    }
}

impl<F> BoundaryData for F
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    fn value(&self, y_prime: &[f64]) -> Vec<f64> {
        self(y_prime)
    }
}

/// f(y′) = M*(σ) z / |M*(σ) z| with σ = (y − x)/|y − x|, y = (y′, 0); zero
/// where M*(σ) z vanishes.
#[derive(Debug, Clone)]
pub struct ExtremalData {
    kernel: KernelMatrix,
    observation_point: Vec<f64>,
    direction: Vec<f64>,
}

pub fn extremal_boundary_data(kernel: &KernelMatrix, probe: &ExtremalProbe) -> ExtremalData {
    ExtremalData {
        kernel: *kernel,
        observation_point: probe.observation_point.clone(),
        direction: probe.direction.clone(),
    }
}

impl BoundaryData for ExtremalData {
    fn value(&self, y_prime: &[f64]) -> Vec<f64> {
        let sigma = unit_direction(&self.observation_point, y_prime).0;
        let mut out = vec![0.0; self.kernel.m()];
        self.kernel
            .transpose_apply(&sigma, &self.direction, &mut out);
        let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > f64::MIN_POSITIVE {
            out.iter_mut().for_each(|v| *v /= norm);
        } else {
            out.iter_mut().for_each(|v| *v = 0.0);
        }
        out
    }

    fn kinks(&self) -> Option<KinkSet> {
        KinkSet::for_kernel(&self.kernel, &self.direction)
    }
}

/// (σ, |y − x|) with σ = (y − x)/|y − x| and y = (y′, 0).
fn unit_direction(x: &[f64], y_prime: &[f64]) -> (Vec<f64>, f64) {
    let n = x.len();
    let mut d: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { y_prime[i] - x[i] } else { -x[i] })
        .collect();
    let dist = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    d.iter_mut().for_each(|v| *v /= dist);
    (d, dist)
}

/// (u(x), z) for boundary data f, with u from the half-space representation
/// truncated to |y′ − x′| ≤ R. `err_est` is the quadrature error plus the
/// probe's tail bound, valid for |f| ≤ 1.
pub fn evaluate_solution_component<F>(
    kernel: &KernelMatrix,
    probe: &ExtremalProbe,
    f: &F,
) -> Result<Quadrature>
where
    F: BoundaryData + ?Sized,
{
    evaluate_solution_component_with(kernel, probe, f, &QuadratureSpec::hemisphere())
}

pub fn evaluate_solution_component_with<F>(
    kernel: &KernelMatrix,
    probe: &ExtremalProbe,
    f: &F,
    spec: &QuadratureSpec,
) -> Result<Quadrature>
where
    F: BoundaryData + ?Sized,
{
    let n = kernel.n();
    if n != probe.spec.n() {
        return Err(Error::InvalidInput(
            "kernel and probe dimensions differ".into(),
        ));
    }
    let x = &probe.observation_point;
    let z = DVector::from_column_slice(&probe.direction);
    let height = probe.height();
    let psi_max = (probe.truncation_radius / height).atan();

    // kernel weight at boundary point y′, including the dy′ Jacobian factor
    let integrand = |y_prime: &[f64], jacobian: f64| -> f64 {
        let (sigma, dist) = unit_direction(x, y_prime);
        let fy = DVector::from_vec(f.value(y_prime));
        let u = kernel.eval(&sigma) * fy;
        u.dot(&z) * height / dist.powi(n as i32) * jacobian
    };

    // σ = (sin s, −cos s) at y₁ = x₁ + xₙ tan s for n = 2, and
    // σ = (sin ψ cos α, sin ψ sin α, −cos ψ) for n = 3
    let kinks = f.kinks();
    let q = match n {
        2 => {
            spec.validate()?;
            let mut points = vec![-psi_max];
            if let Some(k) = &kinks {
                let mut s: Vec<f64> = k
                    .polar_breaks()
                    .into_iter()
                    .map(|phi| phi - 1.5 * PI)
                    .filter(|s| s.abs() < psi_max)
                    .collect();
                s.sort_by(f64::total_cmp);
                points.extend(s);
            }
            points.push(psi_max);
            integrate_outcome_split(
                &|s: f64| {
                    let t = s.tan();
                    let y = [x[0] + height * t];
                    integrand(&y, height * (1.0 + t * t))
                },
                &points,
                spec,
                spec.abs_tol,
            )
            .into_result()?
        }
        3 => {
            let polar = kinks.as_ref().map(|k| k.polar_breaks()).unwrap_or_default();
            integrate_nested_split(
                |psi: f64, alpha: f64| {
                    let t = psi.tan();
                    let r = height * t;
                    let (sa, ca) = alpha.sin_cos();
                    let y = [x[0] + r * ca, x[1] + r * sa];
                    // dy′ = r dr dα,  dr = xₙ sec²ψ dψ
                    integrand(&y, r * height * (1.0 + t * t))
                },
                &polar,
                (0.0, psi_max),
                (0.0, 2.0 * PI),
                |psi| {
                    kinks
                        .as_ref()
                        .map(|k| k.azimuth_breaks(psi))
                        .unwrap_or_default()
                },
                spec,
            )?
        }
        _ => unreachable!("probe construction restricts n"),
    };
    Ok(Quadrature {
        value: q.value,
        err_est: q.err_est + probe.tail_bound,
    })
}

/// Full vector u(x), one component per coordinate direction. The error
/// estimate bounds the Euclidean error.
pub fn evaluate_solution<F>(
    kernel: &KernelMatrix,
    probe: &ExtremalProbe,
    f: &F,
) -> Result<(Vec<f64>, f64)>
where
    F: BoundaryData + ?Sized,
{
    let m = kernel.m();
    let mut u = Vec::with_capacity(m);
    let mut err_sq = 0.0;
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        let p = ExtremalProbe {
            direction: e,
            ..probe.clone()
        };
        let q = evaluate_solution_component(kernel, &p, f)?;
        u.push(q.value);
        err_sq += q.err_est * q.err_est;
    }
    Ok((u, err_sq.sqrt()))
}

/// Extremal-data estimate of the constant: the supremum direction from
/// [`hemisphere_sup`], observation point (0, …, 0, 1), default radius.
pub fn extremal_constant(spec: &SystemSpec) -> Result<SharpConstantResult> {
    let kernel = kernel_for(spec)?;
    let sup = hemisphere_sup(&kernel)?;
    let z = sup
        .argmax
        .clone()
        .expect("numeric supremum records its argmax");
    let mut x = vec![0.0; spec.n()];
    x[spec.n() - 1] = 1.0;
    extremal_constant_at(spec, x, z, None)
}

/// As [`extremal_constant`] with explicit point, direction and radius.
pub fn extremal_constant_at(
    spec: &SystemSpec,
    observation_point: Vec<f64>,
    direction: Vec<f64>,
    radius: Option<f64>,
) -> Result<SharpConstantResult> {
    let kernel = kernel_for(spec)?;
    let probe = match radius {
        Some(r) => ExtremalProbe::new(*spec, observation_point, direction, r)?,
        None => ExtremalProbe::with_default_radius(*spec, observation_point, direction)?,
    };
    let data = extremal_boundary_data(&kernel, &probe);
    let q = evaluate_solution_component(&kernel, &probe, &data)?;
    let mut res = SharpConstantResult::new(q.value, Method::ExtremalBoundaryNumeric, q.err_est);
    res.argmax = Some(probe.direction.clone());
    Ok(res)
}
