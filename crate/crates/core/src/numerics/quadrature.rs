//! One-dimensional quadrature and the lower-hemisphere integral built on it.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

/// Which rule `integrate_1d` applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum QuadratureRule {
    /// A single Gauss–Legendre panel of the given order. The error estimate
    /// is the difference to the rule of one order lower.
    GaussLegendre { order: usize },
    /// Globally adaptive bisection with a 7-point Gauss / 15-point Kronrod
    /// pair on every panel.
    AdaptiveBisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_ABS_TOL_1D: f64 = 1e-10;
    pub const DEFAULT_ABS_TOL_HEMISPHERE: f64 = 1e-8;
    pub const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;

    pub fn adaptive(abs_tol: f64) -> Self {
        QuadratureSpec {
            rule: QuadratureRule::AdaptiveBisection,
            abs_tol,
            max_subdivisions: Self::DEFAULT_MAX_SUBDIVISIONS,
        }
    }

    pub fn gauss_legendre(order: usize) -> Self {
        QuadratureSpec {
            rule: QuadratureRule::GaussLegendre { order },
            abs_tol: Self::DEFAULT_ABS_TOL_1D,
            max_subdivisions: 1,
        }
    }

    /// Default spec for surface integrals over the hemisphere.
    pub fn hemisphere() -> Self {
        Self::adaptive(Self::DEFAULT_ABS_TOL_HEMISPHERE)
    }

    pub fn with_max_subdivisions(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("abs_tol", self.abs_tol, "(0, inf)"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidInput(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        if let QuadratureRule::GaussLegendre { order } = self.rule {
            if order < 2 {
                return Err(Error::InvalidInput(
                    "Gauss-Legendre order must be at least 2".into(),
                ));
            }
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::adaptive(Self::DEFAULT_ABS_TOL_1D)
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub err_est: f64,
}

/// ∫ₐᵇ f under `spec`.
///
/// Adaptive runs that exhaust `max_subdivisions` fail with
/// [`Error::NoConvergence`] carrying the best estimate.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a < b) {
        return Err(Error::InvalidInput(format!(
            "integration interval [{a}, {b}] must satisfy a < b"
        )));
    }
    let outcome = integrate_outcome(&f, a, b, spec, spec.abs_tol);
    outcome.into_result()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Outcome {
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
}

impl Outcome {
    pub fn into_result(self) -> Result<Quadrature> {
        if self.converged && self.value.is_finite() {
            Ok(Quadrature {
                value: self.value,
                err_est: self.err_est,
            })
        } else {
            Err(Error::NoConvergence {
                value: self.value,
                err_est: self.err_est,
            })
        }
    }
}

pub(crate) fn integrate_outcome<F>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    tol: f64,
) -> Outcome
where
    F: Fn(f64) -> f64 + ?Sized,
{
    integrate_outcome_split(f, &[a, b], spec, tol)
}

/// As [`integrate_outcome`] over the increasing `points`, seeding the rule with
/// one panel per sub-interval so that known kinks fall on panel edges.
pub(crate) fn integrate_outcome_split<F>(
    f: &F,
    points: &[f64],
    spec: &QuadratureSpec,
    tol: f64,
) -> Outcome
where
    F: Fn(f64) -> f64 + ?Sized,
{
    debug_assert!(points.len() >= 2 && points.windows(2).all(|w| w[0] < w[1]));
    match spec.rule {
        QuadratureRule::AdaptiveBisection => adaptive_gk15(f, points, tol, spec.max_subdivisions),
        QuadratureRule::GaussLegendre { order } => {
            let (mut hi, mut lo) = (0.0, 0.0);
            for w in points.windows(2) {
                hi += gauss_legendre_panel(f, w[0], w[1], order);
                lo += gauss_legendre_panel(f, w[0], w[1], order - 1);
            }
            Outcome {
                value: hi,
                err_est: (hi - lo).abs(),
                converged: true,
            }
        }
    }
}

// 15-point Kronrod abscissae and weights, with the embedded 7-point Gauss
// weights (nodes at the odd Kronrod indices).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15_panel<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut fl = [0.0; 7];
    let mut fr = [0.0; 7];
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = half * XGK[i];
        fl[i] = f(centre - dx);
        fr[i] = f(centre + dx);
        let pair = fl[i] + fr[i];
        kronrod += WGK[i] * pair;
        resabs += WGK[i] * (fl[i].abs() + fr[i].abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    // QUADPACK error heuristic: |K − G| scaled against the spread of f about
    // its panel mean, floored at rounding level
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for i in 0..7 {
        resasc += WGK[i] * ((fl[i] - mean).abs() + (fr[i] - mean).abs());
    }
    let resasc = resasc * half;
    let resabs = resabs * half;
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        err,
    }
}

fn adaptive_gk15<F>(f: &F, points: &[f64], tol: f64, max_subdivisions: usize) -> Outcome
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let mut heap: BinaryHeap<Panel> = points
        .windows(2)
        .map(|w| gk15_panel(f, w[0], w[1]))
        .collect();
    let mut total_value: f64 = heap.iter().map(|p| p.value).sum();
    let mut total_err: f64 = heap.iter().map(|p| p.err).sum();
    let mut panels = heap.len();
    while total_err > tol {
        if panels >= max_subdivisions {
            return Outcome {
                value: total_value,
                err_est: total_err,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split in floating point
            heap.push(worst);
            return Outcome {
                value: total_value,
                err_est: total_err,
                converged: false,
            };
        }
        let left = gk15_panel(f, worst.a, mid);
        let right = gk15_panel(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        panels += 1;
        // re-sum periodically so the running totals do not drift
        if panels.is_multiple_of(64) {
            total_value = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    let mut sorted: Vec<Panel> = heap.into_vec();
    sorted.sort_by(|p, q| p.a.total_cmp(&q.a));
    Outcome {
        value: sorted.iter().map(|p| p.value).sum(),
        err_est: sorted.iter().map(|p| p.err).sum(),
        converged: true,
    }
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Chebyshev-like initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss_legendre_panel<F>(f: &F, a: f64, b: f64, order: usize) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let (nodes, weights) = gauss_legendre_nodes(order);
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(centre + half * x))
        .sum::<f64>()
        * half
}

/// ∫∫ f(u, v) dv du over a rectangle by nested 1-D rules, seeded with outer
/// breakpoints and, for each u, inner breakpoints at which f(u, ·) may have
/// kinks. Breakpoints outside the open intervals are ignored.
///
/// The inner tolerance is scaled by the outer interval length so the
/// reported error covers both levels.
pub(crate) fn integrate_nested_split<F, B>(
    f: F,
    outer_breaks: &[f64],
    outer: (f64, f64),
    inner: (f64, f64),
    inner_breaks: B,
    spec: &QuadratureSpec,
) -> Result<Quadrature>
where
    F: Fn(f64, f64) -> f64,
    B: Fn(f64) -> Vec<f64>,
{
    spec.validate()?;
    let outer_len = outer.1 - outer.0;
    let inner_tol = 0.5 * spec.abs_tol / outer_len;
    let worst_inner = Cell::new(0.0_f64);
    let all_converged = Cell::new(true);
    let outer_fn = |u: f64| {
        let points = with_breaks(inner, inner_breaks(u));
        let res = integrate_outcome_split(&|v: f64| f(u, v), &points, spec, inner_tol);
        if !res.converged {
            all_converged.set(false);
        }
        worst_inner.set(worst_inner.get().max(res.err_est));
        res.value
    };
    let points = with_breaks(outer, outer_breaks.to_vec());
    let res = integrate_outcome_split(&outer_fn, &points, spec, 0.5 * spec.abs_tol);
    Outcome {
        value: res.value,
        err_est: res.err_est + outer_len * worst_inner.get(),
        converged: res.converged && all_converged.get(),
    }
    .into_result()
}

/// Sorted [a, breaks…, b], dropping breaks that would leave a panel too
/// short to matter.
fn with_breaks((a, b): (f64, f64), mut breaks: Vec<f64>) -> Vec<f64> {
    let min_gap = 1e-12 * (b - a);
    breaks.retain(|&x| x > a + min_gap && x < b - min_gap);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| *x - *y < min_gap);
    let mut points = Vec::with_capacity(breaks.len() + 2);
    points.push(a);
    points.extend(breaks);
    points.push(b);
    points
}

/// Integral of `g` over the lower unit hemisphere {|σ| = 1, σₙ < 0} of ℝⁿ.
///
/// n = 2 parametrises the half circle by angle; n = 3 uses polar angle
/// from −e₃ and azimuth, with the sin θ surface element.
pub fn integrate_hemisphere<G>(g: G, n: usize, spec: &QuadratureSpec) -> Result<Quadrature>
where
    G: Fn(&[f64]) -> f64,
{
    integrate_hemisphere_split(g, n, spec, &[], |_| Vec::new())
}

/// [`integrate_hemisphere`] with kink locations: `polar_breaks` in θ (n = 3)
/// or in the angle (n = 2), and `azimuth_breaks(θ)` in φ for n = 3.
pub(crate) fn integrate_hemisphere_split<G, B>(
    g: G,
    n: usize,
    spec: &QuadratureSpec,
    polar_breaks: &[f64],
    azimuth_breaks: B,
) -> Result<Quadrature>
where
    G: Fn(&[f64]) -> f64,
    B: Fn(f64) -> Vec<f64>,
{
    match n {
        2 => {
            spec.validate()?;
            let points = with_breaks((PI, 2.0 * PI), polar_breaks.to_vec());
            integrate_outcome_split(
                &|phi: f64| g(&[phi.cos(), phi.sin()]),
                &points,
                spec,
                spec.abs_tol,
            )
            .into_result()
        }
        3 => integrate_nested_split(
            |theta: f64, phi: f64| {
                let (st, ct) = theta.sin_cos();
                let (sp, cp) = phi.sin_cos();
                g(&[st * cp, st * sp, -ct]) * st
            },
            polar_breaks,
            (0.0, FRAC_PI_2),
            (0.0, 2.0 * PI),
            azimuth_breaks,
            spec,
        ),
        _ => Err(Error::Unsupported(format!(
            "hemisphere quadrature is implemented for n = 2 and n = 3, got n = {n}"
        ))),
    }
}
