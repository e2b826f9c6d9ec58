//! Maximisation over the unit sphere 𝕊^{m−1} ⊂ ℝ^m.
//!
//! A deterministic coarse grid is evaluated first (in parallel, collected in
//! index order), then the best few grid points are polished by coordinate-wise
//! golden-section search in tangent-plane coordinates. The returned maximum is
//! always a value of `h` at the returned point, so it is a lower bound on the
//! true supremum.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

/// Grid sizes used when the caller does not choose one.
pub const COARSE_POINTS_CIRCLE: usize = 720;
pub const COARSE_POINTS_SPHERE: usize = 2000;
pub const COARSE_POINTS_HIGHER: usize = 4000;

/// Refinement stops once the tangent step drops below this (radians).
pub const STEP_TOL: f64 = 1e-6;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_SWEEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereMax {
    pub argmax: Vec<f64>,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSearch {
    pub coarse_points: usize,
    /// How many of the best grid points are refined.
    pub starts: usize,
    pub step_tol: f64,
}

impl SphereSearch {
    pub fn for_dimension(m: usize) -> Self {
        SphereSearch {
            coarse_points: default_coarse_points(m),
            starts: 1,
            step_tol: STEP_TOL,
        }
    }
}

pub fn default_coarse_points(m: usize) -> usize {
    match m {
        0..=2 => COARSE_POINTS_CIRCLE,
        3 => COARSE_POINTS_SPHERE,
        _ => COARSE_POINTS_HIGHER,
    }
}

/// Maximises `h` over unit vectors in ℝ^m.
///
/// # Panics
/// If `m == 0`.
pub fn maximize_on_sphere<H>(h: H, m: usize, coarse_points: usize) -> SphereMax
where
    H: Fn(&[f64]) -> f64 + Sync,
{
    let search = SphereSearch {
        coarse_points,
        ..SphereSearch::for_dimension(m)
    };
    maximize_on_sphere_with(h, m, &search)
}

pub fn maximize_on_sphere_with<H>(h: H, m: usize, search: &SphereSearch) -> SphereMax
where
    H: Fn(&[f64]) -> f64 + Sync,
{
    assert!(m >= 1, "sphere dimension must be at least 1");
    let grid = coarse_grid(m, search.coarse_points.max(1));
    let values: Vec<f64> = grid.par_iter().map(|z| h(z)).collect();

    let mut order: Vec<usize> = (0..grid.len()).collect();
    // NaN values sort last
    order.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        b.partial_cmp(&a)
            .unwrap_or_else(|| a.is_nan().cmp(&b.is_nan()))
            .then(i.cmp(&j))
    });
    let best_idx = order[0];
    let grid_best = SphereMax {
        argmax: grid[best_idx].clone(),
        max: values[best_idx],
    };
    if m == 1 {
        return grid_best;
    }

    let spacing = grid_spacing(m, grid.len());
    let starts: Vec<usize> = order.into_iter().take(search.starts.max(1)).collect();
    let refined: Vec<SphereMax> = starts
        .par_iter()
        .map(|&i| refine(&h, grid[i].clone(), values[i], spacing, search.step_tol))
        .collect();

    let mut best = grid_best;
    for cand in refined {
        if cand.max > best.max {
            best = cand;
        }
    }
    best
}

/// Deterministic point set on 𝕊^{m−1}: both poles for m = 1, equispaced
/// angles for m = 2, a Fibonacci lattice for m = 3 and a Kronecker sequence
/// pushed through Box–Muller for m ≥ 4.
pub fn coarse_grid(m: usize, count: usize) -> Vec<Vec<f64>> {
    match m {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => fibonacci_lattice(count),
        _ => kronecker_sphere(m, count),
    }
}

pub fn fibonacci_lattice(count: usize) -> Vec<Vec<f64>> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            vec![r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn kronecker_sphere(m: usize, count: usize) -> Vec<Vec<f64>> {
    let dims = 2 * m.div_ceil(2);
    // generalised golden ratio: positive root of x^{d+1} = x + 1
    let mut phi = 2.0_f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dims as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dims)
        .map(|j| (1.0 / phi.powi(j as i32)).fract())
        .collect();
    (1..=count)
        .map(|i| {
            let u: Vec<f64> = alpha
                .iter()
                .map(|a| (0.5 + a * i as f64).fract().clamp(1e-12, 1.0 - 1e-12))
                .collect();
            let mut z: Vec<f64> = u
                .chunks(2)
                .flat_map(|p| {
                    let r = (-2.0 * p[0].ln()).sqrt();
                    let t = 2.0 * PI * p[1];
                    [r * t.cos(), r * t.sin()]
                })
                .take(m)
                .collect();
            normalize(&mut z);
            z
        })
        .collect()
}

fn grid_spacing(m: usize, count: usize) -> f64 {
    match m {
        2 => 2.0 * PI / count as f64,
        // typical nearest-neighbour distance, padded
        _ => 2.0 * (surface_area(m) / count as f64).powf(1.0 / (m as f64 - 1.0)),
    }
}

fn surface_area(m: usize) -> f64 {
    let half = m as f64 / 2.0;
    2.0 * PI.powf(half) / crate::numerics::gamma::gamma_unchecked(half)
}

fn normalize(z: &mut [f64]) {
    let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        z.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Orthonormal basis of the tangent space at unit vector `z`.
fn tangent_basis(z: &[f64]) -> Vec<Vec<f64>> {
    let m = z.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m - 1);
    let mut axes: Vec<usize> = (0..m).collect();
    // start from the axes least aligned with z
    axes.sort_by(|&i, &j| z[i].abs().total_cmp(&z[j].abs()));
    for &axis in &axes {
        if basis.len() == m - 1 {
            break;
        }
        let mut v = vec![0.0; m];
        v[axis] = 1.0;
        for _ in 0..2 {
            for q in std::iter::once(z).chain(basis.iter().map(|b| b.as_slice())) {
                let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

fn step(z: &[f64], dir: &[f64], t: f64) -> Vec<f64> {
    let mut w: Vec<f64> = z.iter().zip(dir).map(|(a, b)| a + t * b).collect();
    normalize(&mut w);
    w
}

fn refine<H>(h: &H, start: Vec<f64>, start_value: f64, spacing: f64, step_tol: f64) -> SphereMax
where
    H: Fn(&[f64]) -> f64,
{
    let mut z = start;
    let mut best = start_value;
    let mut radius = spacing;
    for _ in 0..MAX_SWEEPS {
        if radius < step_tol {
            break;
        }
        let mut moved = 0.0_f64;
        for dir in tangent_basis(&z) {
            let f = |t: f64| h(&step(&z, &dir, t));
            let (t, v) =
                golden_section_max(&f, -radius, radius, (radius * 1e-3).max(0.1 * step_tol));
            if v > best {
                best = v;
                z = step(&z, &dir, t);
                moved = moved.max(t.abs());
            }
        }
        if moved < 0.5 * radius {
            radius *= 0.25;
        }
    }
    SphereMax {
        argmax: z,
        max: best,
    }
}

/// Golden-section search for a maximum of `f` on [a, b].
pub fn golden_section_max<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
