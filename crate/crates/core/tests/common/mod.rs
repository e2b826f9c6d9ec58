//! Random coefficient systems with known verdicts, shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sharpk::criteria::{CMatrix, CoefficientSystem, ScalarField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real_c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Symmetric positive definite with smallest eigenvalue at least `floor`.
pub fn random_spd(r: &mut impl Rng, n: usize, floor: f64) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    &b * b.transpose() + DMatrix::identity(n, n) * floor
}

/// Hermitian positive definite with smallest eigenvalue at least `floor`.
pub fn random_hpd(r: &mut impl Rng, n: usize, floor: f64) -> CMatrix {
    let b = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    });
    &b * b.adjoint() + CMatrix::identity(n, n) * real_c(floor)
}

/// Symmetric positive definite with trace n.
pub fn random_coefficients(r: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = random_spd(r, n, 0.2);
    let t = a.trace();
    a * (n as f64 / t)
}

/// Haar-ish orthogonal matrix from the QR factorization of a Gaussian-like matrix.
pub fn random_orthogonal(r: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    g.qr().q()
}

fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(real_c)
}

pub fn principal_blocks(big_a: &CMatrix, a: &DMatrix<f64>) -> Vec<Vec<CMatrix>> {
    let n = a.nrows();
    (0..n)
        .map(|j| (0..n).map(|k| big_a * real_c(a[(j, k)])).collect())
        .collect()
}

/// Real system A2_jk = A a_jk, A1_j = β_j A, A0 = A S.
///
/// With trace a = n the first-order terms cancel in the quadratic form and its
/// minimum over the unit sphere is 4 λ_min(S) = `margin`.
pub fn laplace_type(r: &mut impl Rng, m: usize, n: usize, margin: f64) -> CoefficientSystem {
    let big_a = complexify(&random_spd(r, m, 0.5));
    let a = random_coefficients(r, n);
    let a1 = (0..n)
        .map(|_| &big_a * real_c(r.gen_range(-1.0..1.0)))
        .collect();
    let s = random_spd(r, m, 0.0);
    let lowest = s.clone().symmetric_eigen().eigenvalues.min();
    let s = s + DMatrix::identity(m, m) * (margin / 4.0 - lowest);
    let a0 = &big_a * complexify(&s);
    CoefficientSystem::new(
        m,
        n,
        ScalarField::Real,
        principal_blocks(&big_a, &a),
        a1,
        a0,
    )
    .unwrap()
}

/// Copy of `sys` with A0 replaced by A0 + shift·A, which moves the minimum of
/// the quadratic form by 4·shift.
pub fn shift_zeroth_order(
    sys: &CoefficientSystem,
    big_a: &CMatrix,
    shift: f64,
) -> CoefficientSystem {
    let n = sys.n();
    let a2 = (0..n)
        .map(|j| (0..n).map(|k| sys.a2(j, k).clone()).collect())
        .collect();
    let a1 = (0..n).map(|j| sys.a1(j).clone()).collect();
    let a0 = sys.a0() + big_a * real_c(shift);
    CoefficientSystem::new(sys.m(), n, sys.field(), a2, a1, a0).unwrap()
}

/// Principal matrix A of a system built by [`laplace_type`] (trace a = n).
pub fn principal_of(sys: &CoefficientSystem) -> CMatrix {
    let mut sum = CMatrix::zeros(sys.m(), sys.m());
    for j in 0..sys.n() {
        sum += sys.a2(j, j);
    }
    sum / real_c(sys.n() as f64)
}

/// Complex system with Hermitian A, random complex lower-order terms and,
/// when `factorable` is false, a principal part that is not of the form A a_jk.
pub fn random_complex(r: &mut impl Rng, m: usize, n: usize, factorable: bool) -> CoefficientSystem {
    let big_a = random_hpd(r, m, 0.5);
    let a = random_coefficients(r, n);
    let mut a2 = principal_blocks(&big_a, &a);
    if !factorable {
        let e = random_hpd(r, m, 0.0) * real_c(0.3);
        a2[0][0] += e;
    }
    let c0 = r.gen_range(-0.2..0.6);
    let mut noise = |scale: f64| {
        CMatrix::from_fn(m, m, |_, _| {
            Complex64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale))
        })
    };
    let a1 = (0..n).map(|_| &big_a * noise(0.4)).collect();
    let a0 = &big_a * (CMatrix::identity(m, m) * real_c(c0) + noise(0.2));
    CoefficientSystem::new(m, n, ScalarField::Complex, a2, a1, a0).unwrap()
}

/// Scalar complex equation c Δu − Σ c_j ∂_j u − c0 u with
/// 4ℜ(c0/c) = Σ ℑ(c_j/c)² (a = identity), the boundary of condition (ii).
pub fn scalar_complex_boundary(
    n: usize,
    c: Complex64,
    imag_parts: &[f64],
    extra: f64,
) -> CoefficientSystem {
    let a2 = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    CMatrix::from_element(1, 1, if j == k { c } else { Complex64::new(0.0, 0.0) })
                })
                .collect()
        })
        .collect();
    let a1 = imag_parts
        .iter()
        .map(|&t| CMatrix::from_element(1, 1, c * Complex64::new(0.3, t)))
        .collect();
    let sum: f64 = imag_parts.iter().map(|t| t * t).sum();
    let a0 = CMatrix::from_element(1, 1, c * Complex64::new(sum / 4.0 + extra, 0.7));
    CoefficientSystem::new(1, n, ScalarField::Complex, a2, a1, a0).unwrap()
}
