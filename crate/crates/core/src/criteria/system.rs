use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

/// Coefficients of Σ A_jk ∂²u/∂x_j∂x_k − Σ A_j ∂u/∂x_j − A₀u = 0 at one point.
///
/// Matrices are stored as complex; for [`ScalarField::Real`] every imaginary
/// part is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSystem {
    m: usize,
    n: usize,
    field: ScalarField,
    a2: Vec<CMatrix>,
    a1: Vec<CMatrix>,
    a0: CMatrix,
}

/// Relative tolerance for the symmetry A_jk = A_kj.
const SYMMETRY_TOL: f64 = 1e-12;

impl CoefficientSystem {
    /// `a2[j][k]`, `a1[j]` and `a0` are m×m.
    pub fn new(
        m: usize,
        n: usize,
        field: ScalarField,
        a2: Vec<Vec<CMatrix>>,
        a1: Vec<CMatrix>,
        a0: CMatrix,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if a2.len() != n || a2.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!(
                "a2 must be an {n}×{n} array of matrices"
            )));
        }
        if a1.len() != n {
            return Err(Error::InvalidInput(format!(
                "a1 must hold {n} matrices, got {}",
                a1.len()
            )));
        }
        let shape_ok = |mat: &CMatrix| mat.nrows() == m && mat.ncols() == m;
        for (j, row) in a2.iter().enumerate() {
            for (k, mat) in row.iter().enumerate() {
                if !shape_ok(mat) {
                    return Err(Error::InvalidInput(format!("a2[{j}][{k}] must be {m}×{m}")));
                }
            }
        }
        for (j, mat) in a1.iter().enumerate() {
            if !shape_ok(mat) {
                return Err(Error::InvalidInput(format!("a1[{j}] must be {m}×{m}")));
            }
        }
        if !shape_ok(&a0) {
            return Err(Error::InvalidInput(format!("a0 must be {m}×{m}")));
        }
        let all = a2
            .iter()
            .flatten()
            .chain(a1.iter())
            .chain(std::iter::once(&a0));
        if field == ScalarField::Real && all.clone().flat_map(|mat| mat.iter()).any(|c| c.im != 0.0)
        {
            return Err(Error::InvalidInput(
                "real system has complex entries".into(),
            ));
        }
        if all
            .flat_map(|mat| mat.iter())
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        let scale = a2
            .iter()
            .flatten()
            .map(|mat| mat.norm())
            .fold(0.0, f64::max);
        for (j, row) in a2.iter().enumerate() {
            for (k, block) in row.iter().enumerate().skip(j + 1) {
                if (block - &a2[k][j]).norm() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidInput(format!(
                        "a2[{j}][{k}] differs from a2[{k}][{j}]"
                    )));
                }
            }
        }
        Ok(CoefficientSystem {
            m,
            n,
            field,
            a2: a2.into_iter().flatten().collect(),
            a1,
            a0,
        })
    }

    pub fn from_real(
        m: usize,
        n: usize,
        a2: Vec<Vec<DMatrix<f64>>>,
        a1: Vec<DMatrix<f64>>,
        a0: DMatrix<f64>,
    ) -> Result<Self> {
        Self::new(
            m,
            n,
            ScalarField::Real,
            a2.into_iter()
                .map(|row| row.into_iter().map(to_complex).collect())
                .collect(),
            a1.into_iter().map(to_complex).collect(),
            to_complex(a0),
        )
    }

    /// Principal part only; lower-order terms are zero.
    pub fn principal(
        m: usize,
        n: usize,
        field: ScalarField,
        a2: Vec<Vec<CMatrix>>,
    ) -> Result<Self> {
        Self::new(
            m,
            n,
            field,
            a2,
            vec![CMatrix::zeros(m, m); n],
            CMatrix::zeros(m, m),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn a2(&self, j: usize, k: usize) -> &CMatrix {
        &self.a2[j * self.n + k]
    }

    pub fn a1(&self, j: usize) -> &CMatrix {
        &self.a1[j]
    }

    pub fn a0(&self) -> &CMatrix {
        &self.a0
    }

    /// Largest operator norm over the second-order blocks.
    pub fn principal_scale(&self) -> f64 {
        self.a2.iter().map(operator_norm).fold(0.0, f64::max)
    }

    /// Every coefficient multiplied by c.
    pub fn scaled(&self, c: f64) -> Self {
        let s = Complex64::new(c, 0.0);
        CoefficientSystem {
            a2: self.a2.iter().map(|mat| mat * s).collect(),
            a1: self.a1.iter().map(|mat| mat * s).collect(),
            a0: &self.a0 * s,
            ..self.clone()
        }
    }

    /// Coefficients in the variables x′ = O x for an orthogonal n×n matrix O.
    pub fn rotated(&self, o: &DMatrix<f64>) -> Result<Self> {
        let n = self.n;
        if o.nrows() != n || o.ncols() != n {
            return Err(Error::InvalidInput(format!("rotation must be {n}×{n}")));
        }
        let zero = CMatrix::zeros(self.m, self.m);
        let mut a2 = vec![zero.clone(); n * n];
        let mut a1 = vec![zero; n];
        for j in 0..n {
            for k in 0..n {
                for p in 0..n {
                    for q in 0..n {
                        let w = o[(j, p)] * o[(k, q)];
                        if w != 0.0 {
                            a2[j * n + k] += self.a2(p, q) * Complex64::new(w, 0.0);
                        }
                    }
                }
            }
            for p in 0..n {
                a1[j] += self.a1(p) * Complex64::new(o[(j, p)], 0.0);
            }
        }
        // restore exact symmetry lost to rounding
        for j in 0..n {
            for k in j + 1..n {
                let avg = (&a2[j * n + k] + &a2[k * n + j]) * Complex64::new(0.5, 0.0);
                a2[j * n + k] = avg.clone();
                a2[k * n + j] = avg;
            }
        }
        Ok(CoefficientSystem {
            a2,
            a1,
            ..self.clone()
        })
    }
}

pub(crate) fn to_complex(mat: DMatrix<f64>) -> CMatrix {
    mat.map(|v| Complex64::new(v, 0.0))
}

pub(crate) fn operator_norm(mat: &CMatrix) -> f64 {
    if mat.is_empty() {
        return 0.0;
    }
    mat.clone().svd(false, false).singular_values.max()
}

/// Lamé principal part, (A_jk)_pq = μ δ_jk δ_pq + (λ + μ)(δ_jp δ_kq + δ_kp δ_jq)/2.
pub fn lame_principal_part(n: usize, lambda: f64, mu: f64) -> Result<CoefficientSystem> {
    let block = |j: usize, k: usize| {
        DMatrix::from_fn(n, n, |p, q| {
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            mu * d(j, k) * d(p, q) + (lambda + mu) * (d(j, p) * d(k, q) + d(k, p) * d(j, q)) / 2.0
        })
    };
    let a2 = (0..n)
        .map(|j| (0..n).map(|k| block(j, k)).collect())
        .collect();
    CoefficientSystem::from_real(
        n,
        n,
        a2,
        vec![DMatrix::zeros(n, n); n],
        DMatrix::zeros(n, n),
    )
}

/// Stokes principal part in penalty form ν Δu + ε⁻¹ ∇ div u, a Lamé
/// operator with μ = ν and λ + μ = 1/ε.
pub fn stokes_penalized_principal_part(
    n: usize,
    nu: f64,
    epsilon: f64,
) -> Result<CoefficientSystem> {
    if !(nu > 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidInput(
            "viscosity and penalty must be positive".into(),
        ));
    }
    lame_principal_part(n, 1.0 / epsilon - nu, nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(m: usize, n: usize) -> CoefficientSystem {
        let a2 = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        if j == k {
                            DMatrix::identity(m, m)
                        } else {
                            DMatrix::zeros(m, m)
                        }
                    })
                    .collect()
            })
            .collect();
        CoefficientSystem::from_real(
            m,
            n,
            a2,
            vec![DMatrix::zeros(m, m); n],
            DMatrix::zeros(m, m),
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let sys = laplacian(2, 2);
        assert_eq!(sys.a2(0, 0), &CMatrix::identity(2, 2));
        let one = vec![vec![DMatrix::from_element(1, 1, 1.0)]];
        assert!(CoefficientSystem::from_real(
            1,
            1,
            one,
            vec![DMatrix::zeros(1, 1)],
            DMatrix::zeros(1, 1)
        )
        .is_err());
        let asym = vec![
            vec![DMatrix::identity(1, 1), DMatrix::from_element(1, 1, 0.5)],
            vec![DMatrix::zeros(1, 1), DMatrix::identity(1, 1)],
        ];
        assert!(CoefficientSystem::from_real(
            1,
            2,
            asym,
            vec![DMatrix::zeros(1, 1); 2],
            DMatrix::zeros(1, 1)
        )
        .is_err());
        let bad_shape = vec![vec![DMatrix::identity(2, 2); 2]; 2];
        assert!(CoefficientSystem::from_real(
            1,
            2,
            bad_shape,
            vec![DMatrix::zeros(1, 1); 2],
            DMatrix::zeros(1, 1)
        )
        .is_err());
        let complex_entry = vec![vec![CMatrix::from_element(1, 1, Complex64::i()); 2]; 2];
        assert!(
            CoefficientSystem::principal(1, 2, ScalarField::Real, complex_entry.clone()).is_err()
        );
        assert!(CoefficientSystem::principal(1, 2, ScalarField::Complex, complex_entry).is_ok());
    }

    #[test]
    fn lame_blocks() {
        let sys = lame_principal_part(3, 1.0, 1.0).unwrap();
        // A₁₁ = μ I + (λ + μ) E₁₁, A₁₂ = (λ + μ)(E₁₂ + E₂₁)/2
        assert_eq!(sys.a2(0, 0)[(0, 0)].re, 3.0);
        assert_eq!(sys.a2(0, 0)[(1, 1)].re, 1.0);
        assert_eq!(sys.a2(0, 1)[(0, 1)].re, 1.0);
        assert_eq!(sys.a2(0, 1)[(1, 0)].re, 1.0);
        assert_eq!(sys.a2(0, 1)[(0, 0)].re, 0.0);
    }

    #[test]
    fn rotation_by_identity_and_swap() {
        let sys = lame_principal_part(2, 2.0, 1.0).unwrap();
        assert_eq!(sys.rotated(&DMatrix::identity(2, 2)).unwrap(), sys);
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let r = sys.rotated(&swap).unwrap();
        assert_eq!(r.a2(0, 0), sys.a2(1, 1));
        assert_eq!(r.a2(0, 1), sys.a2(1, 0));
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let d = to_complex(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0, -3.0,
        ])));
        assert!((operator_norm(&d) - 3.0).abs() < 1e-14);
    }
}
