use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::system::{operator_norm, CMatrix, CoefficientSystem, ScalarField};
use crate::error::{Error, Result};
use crate::numerics::sphere::{coarse_grid, maximize_on_sphere_with, SphereSearch};

/// Ellipticity eigenvalues must exceed this multiple of the principal scale.
pub const TOL_PD_REL: f64 = 1e-10;
/// Factorization residual tolerance relative to the largest block.
pub const FACTOR_TOL_REL: f64 = 1e-8;
/// Condition (ii) tolerance relative to the scale of the quadratic form.
pub const TOL_Q_REL: f64 = 1e-9;
pub const MIN_ELLIPTICITY_SAMPLES: usize = 100;
pub const DEFAULT_ELLIPTICITY_SAMPLES: usize = 1000;

pub const SMOOTHNESS_NOTE: &str =
    "coefficient smoothness (Hölder continuity) is a hypothesis of the criterion and is not verified from sampled matrices";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticityWitness {
    pub sigma: Vec<f64>,
    pub zeta: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ellipticity {
    pub holds: bool,
    /// Smallest eigenvalue of the Hermitian part of the symbol over the samples.
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub witness: Option<EllipticityWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorFailure {
    SingularCandidate,
    NotProportional,
    PrincipalNotPositive,
    CoefficientsNotPositive,
}

impl FactorFailure {
    pub fn as_str(&self) -> &'static str {
        match self {
            FactorFailure::SingularCandidate => "singular_candidate",
            FactorFailure::NotProportional => "not_proportional",
            FactorFailure::PrincipalNotPositive => "principal_not_positive",
            FactorFailure::CoefficientsNotPositive => "coefficients_not_positive",
        }
    }
}

/// Condition (i): A_jk = A a_jk with A and ((a_jk)) positive definite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionI {
    Holds {
        #[serde(serialize_with = "complex_rows")]
        principal: CMatrix,
        #[serde(serialize_with = "real_rows")]
        a: DMatrix<f64>,
        /// max_jk ‖A_jk − a_jk A‖ / max_jk ‖A_jk‖ (Frobenius).
        residual: f64,
    },
    Fails {
        residual: f64,
        reason: FactorFailure,
    },
}

impl ConditionI {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionI::Holds { .. })
    }
}

/// Condition (ii) via the minimum of the quadratic form Q on the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionII {
    Holds {
        min_value: f64,
        /// |min_value| is within tolerance of zero.
        boundary: bool,
        witness: Vec<Complex64>,
        tolerance: f64,
    },
    Fails {
        min_value: f64,
        witness: Vec<Complex64>,
        tolerance: f64,
    },
}

impl ConditionII {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionII::Holds { .. })
    }

    pub fn min_value(&self) -> f64 {
        match self {
            ConditionII::Holds { min_value, .. } | ConditionII::Fails { min_value, .. } => {
                *min_value
            }
        }
    }

    pub fn witness(&self) -> &[Complex64] {
        match self {
            ConditionII::Holds { witness, .. } | ConditionII::Fails { witness, .. } => witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriteriaVerdict {
    pub field: ScalarField,
    pub strongly_elliptic: Ellipticity,
    /// `None` when an earlier check failed.
    pub condition_i: Option<ConditionI>,
    pub condition_ii: Option<ConditionII>,
    pub overall: bool,
    pub notes: Vec<String>,
}

impl CriteriaVerdict {
    /// First check that failed, if any.
    pub fn failing_condition(&self) -> Option<&'static str> {
        if !self.strongly_elliptic.holds {
            Some("strong_ellipticity")
        } else if !self.condition_i.as_ref().is_some_and(ConditionI::holds) {
            Some("condition_i")
        } else if !self.condition_ii.as_ref().is_some_and(ConditionII::holds) {
            Some("condition_ii")
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaOptions {
    pub ellipticity_samples: usize,
    pub factor_tol: f64,
    /// Coarse grid size for the condition (ii) minimization; `None` picks a
    /// default from the sphere dimension.
    pub grid: Option<usize>,
}

impl Default for CriteriaOptions {
    fn default() -> Self {
        CriteriaOptions {
            ellipticity_samples: DEFAULT_ELLIPTICITY_SAMPLES,
            factor_tol: FACTOR_TOL_REL,
            grid: None,
        }
    }
}

fn hermitian_part(mat: &CMatrix) -> CMatrix {
    (mat + mat.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Smallest eigenvalue and eigenvector of the Hermitian part.
fn min_eigen(mat: &CMatrix) -> (f64, Vec<Complex64>) {
    let eig = hermitian_part(mat).symmetric_eigen();
    let (idx, val) =
        eig.eigenvalues
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, &v)| if v < best.1 { (i, v) } else { best },
            );
    (val, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Positive definiteness of the Hermitian part of Σ A_jk σ_j σ_k over
/// `samples` deterministic points σ ∈ 𝕊ⁿ⁻¹.
pub fn check_strong_ellipticity(sys: &CoefficientSystem, samples: usize) -> Result<Ellipticity> {
    if samples < MIN_ELLIPTICITY_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "at least {MIN_ELLIPTICITY_SAMPLES} ellipticity samples are required, got {samples}"
        )));
    }
    let (n, m) = (sys.n(), sys.m());
    let tolerance = TOL_PD_REL * sys.principal_scale();
    let mut worst = (f64::INFINITY, Vec::new(), Vec::new());
    for sigma in coarse_grid(n, samples) {
        let mut symbol = CMatrix::zeros(m, m);
        for j in 0..n {
            for k in 0..n {
                symbol += sys.a2(j, k) * Complex64::new(sigma[j] * sigma[k], 0.0);
            }
        }
        let (val, vec) = min_eigen(&symbol);
        if val < worst.0 {
            worst = (val, sigma, vec);
        }
    }
    let holds = worst.0 > tolerance;
    Ok(Ellipticity {
        holds,
        min_eigenvalue: worst.0,
        tolerance,
        witness: (!holds).then_some(EllipticityWitness {
            sigma: worst.1,
            zeta: worst.2,
        }),
    })
}

/// Writes A_jk = A a_jk with candidate A = Σ_j A_jj and real
/// a_jk = ℜ⟨A, A_jk⟩/‖A‖² (Frobenius), normalized so that trace a = n.
pub fn factor_principal_part(sys: &CoefficientSystem, tol: f64) -> ConditionI {
    let (n, m) = (sys.n(), sys.m());
    let mut cand = CMatrix::zeros(m, m);
    for j in 0..n {
        cand += sys.a2(j, j);
    }
    let norm_sq = cand.norm_squared();
    let scale = (0..n * n)
        .map(|i| sys.a2(i / n, i % n).norm())
        .fold(0.0, f64::max);
    if !(norm_sq > 0.0) || !(scale > 0.0) {
        return ConditionI::Fails {
            residual: f64::INFINITY,
            reason: FactorFailure::SingularCandidate,
        };
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut residual = 0.0_f64;
    for j in 0..n {
        for k in 0..n {
            let block = sys.a2(j, k);
            let coef = cand.dotc(block).re / norm_sq;
            a[(j, k)] = coef;
            residual = residual.max((block - &cand * Complex64::new(coef, 0.0)).norm());
        }
    }
    // Σ_j a_jj = 1 by construction of the candidate
    let t = n as f64;
    let a = a * t;
    let principal = cand / Complex64::new(t, 0.0);
    let residual = residual / scale;
    if residual > tol {
        return ConditionI::Fails {
            residual,
            reason: FactorFailure::NotProportional,
        };
    }
    if min_eigen(&principal).0 <= TOL_PD_REL * operator_norm(&principal) {
        return ConditionI::Fails {
            residual,
            reason: FactorFailure::PrincipalNotPositive,
        };
    }
    let a = (&a + a.transpose()) * 0.5;
    if a.clone().symmetric_eigen().eigenvalues.min() <= TOL_PD_REL * a.norm() {
        return ConditionI::Fails {
            residual,
            reason: FactorFailure::CoefficientsNotPositive,
        };
    }
    ConditionI::Holds {
        principal,
        a,
        residual,
    }
}

/// Q(ζ) = |ζ|⁻² Σ b_jk ℜ(P_j ζ, ζ) ℜ(P_k ζ, ζ) − Σ b_jk (P_j* ζ, P_k* ζ) + 4 ℜ(P₀ ζ, ζ)
/// with P_j = A⁻¹A_j, P₀ = A⁻¹A₀ and b = a⁻¹.
#[derive(Debug, Clone)]
pub struct QForm {
    m: usize,
    field: ScalarField,
    p: Vec<CMatrix>,
    p0: CMatrix,
    b: DMatrix<f64>,
    /// Σ b_jk P_k P_j*, so that the middle term is ζ* G ζ.
    g: CMatrix,
}

impl QForm {
    pub fn new(sys: &CoefficientSystem, principal: &CMatrix, a: &DMatrix<f64>) -> Result<Self> {
        let n = sys.n();
        if a.nrows() != n
            || a.ncols() != n
            || principal.nrows() != sys.m()
            || principal.ncols() != sys.m()
        {
            return Err(Error::InvalidInput(
                "factor dimensions do not match the system".into(),
            ));
        }
        let lu = principal.clone().lu();
        let solve = |rhs: &CMatrix| {
            lu.solve(rhs)
                .ok_or_else(|| Error::InvalidInput("principal matrix is singular".into()))
        };
        let p = (0..n)
            .map(|j| solve(sys.a1(j)))
            .collect::<Result<Vec<_>>>()?;
        let p0 = solve(sys.a0())?;
        let b = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("coefficient matrix a is singular".into()))?;
        let mut g = CMatrix::zeros(sys.m(), sys.m());
        for j in 0..n {
            for k in 0..n {
                g += &p[k] * p[j].adjoint() * Complex64::new(b[(j, k)], 0.0);
            }
        }
        Ok(QForm {
            m: sys.m(),
            field: sys.field(),
            p,
            p0,
            b,
            g,
        })
    }

    /// Dimension of the real space whose unit sphere parametrizes ζ.
    pub fn real_dimension(&self) -> usize {
        match self.field {
            ScalarField::Real => self.m,
            ScalarField::Complex => 2 * self.m,
        }
    }

    /// Q(ζ/|ζ|).
    pub fn eval(&self, zeta: &[Complex64]) -> f64 {
        let norm_sq: f64 = zeta.iter().map(|c| c.norm_sqr()).sum();
        if !(norm_sq > 0.0) {
            return 0.0;
        }
        let quad = |mat: &CMatrix| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..self.m {
                for c in 0..self.m {
                    acc += zeta[r].conj() * mat[(r, c)] * zeta[c];
                }
            }
            acc / norm_sq
        };
        let r: Vec<f64> = self.p.iter().map(|pj| quad(pj).re).collect();
        let n = r.len();
        let mut first = 0.0;
        for j in 0..n {
            for k in 0..n {
                first += self.b[(j, k)] * r[j] * r[k];
            }
        }
        first - quad(&self.g).re + 4.0 * quad(&self.p0).re
    }

    /// ζ from real sphere coordinates: ζ = x for real systems, ζ_i = x_i + i x_{m+i}
    /// for complex ones.
    pub fn zeta_from_real(&self, x: &[f64]) -> Vec<Complex64> {
        match self.field {
            ScalarField::Real => x.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            ScalarField::Complex => (0..self.m)
                .map(|i| Complex64::new(x[i], x[self.m + i]))
                .collect(),
        }
    }

    /// Bound on |Q| over the unit sphere, used to scale the tolerance.
    pub fn scale(&self) -> f64 {
        let sum_p: f64 = self.p.iter().map(operator_norm).sum();
        let b_norm = self.b.clone().svd(false, false).singular_values.max();
        b_norm * sum_p * sum_p + operator_norm(&self.g) + 4.0 * operator_norm(&self.p0)
    }
}

/// Minimizes Q over the unit sphere (𝕊^{m−1} for real systems, 𝕊^{2m−1}
/// otherwise) by a coarse grid of `grid` points plus local refinement.
pub fn check_condition_ii(
    sys: &CoefficientSystem,
    principal: &CMatrix,
    a: &DMatrix<f64>,
    grid: Option<usize>,
) -> Result<ConditionII> {
    let q = QForm::new(sys, principal, a)?;
    let dim = q.real_dimension();
    let mut search = SphereSearch::for_dimension(dim);
    if let Some(points) = grid {
        if points == 0 {
            return Err(Error::InvalidInput("grid must be positive".into()));
        }
        search.coarse_points = points;
    }
    let best = maximize_on_sphere_with(|x| -q.eval(&q.zeta_from_real(x)), dim, &search);
    let min_value = -best.max;
    let witness = q.zeta_from_real(&best.argmax);
    let tolerance = TOL_Q_REL * q.scale().max(1.0);
    Ok(if min_value >= -tolerance {
        ConditionII::Holds {
            min_value,
            boundary: min_value.abs() <= tolerance,
            witness,
            tolerance,
        }
    } else {
        ConditionII::Fails {
            min_value,
            witness,
            tolerance,
        }
    })
}

pub fn check_mmp(sys: &CoefficientSystem) -> Result<CriteriaVerdict> {
    check_mmp_with(sys, &CriteriaOptions::default())
}

/// Strong ellipticity, then condition (i), then condition (ii). For complex
/// systems condition (ii) is checked directly in ℂ^m.
pub fn check_mmp_with(sys: &CoefficientSystem, opts: &CriteriaOptions) -> Result<CriteriaVerdict> {
    let ell = check_strong_ellipticity(sys, opts.ellipticity_samples)?;
    let mut verdict = CriteriaVerdict {
        field: sys.field(),
        strongly_elliptic: ell,
        condition_i: None,
        condition_ii: None,
        overall: false,
        notes: vec![SMOOTHNESS_NOTE.to_string()],
    };
    if !verdict.strongly_elliptic.holds {
        return Ok(verdict);
    }
    let ci = factor_principal_part(sys, opts.factor_tol);
    if let ConditionI::Holds { principal, a, .. } = &ci {
        let cii = check_condition_ii(sys, principal, a, opts.grid)?;
        verdict.overall = cii.holds();
        verdict.condition_ii = Some(cii);
    }
    verdict.condition_i = Some(ci);
    Ok(verdict)
}

/// Same verdict through the doubled real system.
pub fn check_mmp_doubled(
    sys: &CoefficientSystem,
    opts: &CriteriaOptions,
) -> Result<CriteriaVerdict> {
    check_mmp_with(&complexify(sys), opts)
}

/// Real system for (ℜu, ℑu): each coefficient C = R + iH becomes [[R, −H], [H, R]].
pub fn complexify(sys: &CoefficientSystem) -> CoefficientSystem {
    let (m, n) = (sys.m(), sys.n());
    let double = |c: &CMatrix| -> CMatrix {
        CMatrix::from_fn(2 * m, 2 * m, |r, s| {
            let v = c[(r % m, s % m)];
            let x = match (r < m, s < m) {
                (true, true) | (false, false) => v.re,
                (true, false) => -v.im,
                (false, true) => v.im,
            };
            Complex64::new(x, 0.0)
        })
    };
    let a2 = (0..n)
        .map(|j| (0..n).map(|k| double(sys.a2(j, k))).collect())
        .collect();
    let a1 = (0..n).map(|j| double(sys.a1(j))).collect();
    CoefficientSystem::new(2 * m, n, ScalarField::Real, a2, a1, double(sys.a0()))
        .expect("doubling preserves the invariants")
}

fn complex_rows<S: Serializer>(mat: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<Complex64>> = mat
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    rows.serialize(s)
}

fn real_rows<S: Serializer>(mat: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = mat
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    rows.serialize(s)
}

#[cfg(test)]
mod tests {
    use super::super::system::{lame_principal_part, stokes_penalized_principal_part, to_complex};
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar(v: Complex64) -> CMatrix {
        CMatrix::from_element(1, 1, v)
    }

    /// c Σ a_jk ∂_j∂_k − Σ c_j ∂_j − c₀ with m = 1.
    fn scalar_system(
        cc: Complex64,
        a: &[[f64; 2]; 2],
        cj: [Complex64; 2],
        c0: Complex64,
    ) -> CoefficientSystem {
        let a2 = (0..2)
            .map(|j| (0..2).map(|k| scalar(cc * a[j][k])).collect())
            .collect();
        CoefficientSystem::new(
            1,
            2,
            ScalarField::Complex,
            a2,
            cj.iter().map(|&v| scalar(v)).collect(),
            scalar(c0),
        )
        .unwrap()
    }

    fn laplacian_with_a0(m: usize, n: usize, a0: DMatrix<f64>) -> CoefficientSystem {
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
        CoefficientSystem::from_real(m, n, a2, vec![DMatrix::zeros(m, m); n], a0).unwrap()
    }

    #[test]
    fn laplacian_holds() {
        let sys = laplacian_with_a0(2, 2, DMatrix::zeros(2, 2));
        let v = check_mmp(&sys).unwrap();
        assert!(v.overall);
        match v.condition_i.unwrap() {
            ConditionI::Holds { principal, a, .. } => {
                assert!((principal - CMatrix::identity(2, 2)).norm() < 1e-15);
                assert!((a - DMatrix::identity(2, 2)).norm() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let cii = v.condition_ii.unwrap();
        assert_eq!(cii.min_value(), 0.0);
        assert!(matches!(cii, ConditionII::Holds { boundary: true, .. }));
    }

    #[test]
    fn heat_like_system_holds() {
        let sys = laplacian_with_a0(2, 2, DMatrix::identity(2, 2));
        let v = check_mmp(&sys).unwrap();
        assert!(v.overall);
        let cii = v.condition_ii.unwrap();
        assert!((cii.min_value() - 4.0).abs() < 1e-12);
        assert!(matches!(
            cii,
            ConditionII::Holds {
                boundary: false,
                ..
            }
        ));
    }

    #[test]
    fn lame_is_elliptic_but_not_factorizable() {
        let sys = lame_principal_part(3, 1.0, 1.0).unwrap();
        let ell = check_strong_ellipticity(&sys, 1000).unwrap();
        assert!(ell.holds);
        // symbol eigenvalues are μ and λ + 2μ
        assert!((ell.min_eigenvalue - 1.0).abs() < 1e-12);
        let v = check_mmp(&sys).unwrap();
        assert!(!v.overall);
        assert_eq!(v.failing_condition(), Some("condition_i"));
        match v.condition_i.unwrap() {
            ConditionI::Fails { reason, residual } => {
                assert_eq!(reason, FactorFailure::NotProportional);
                assert!(residual > 0.1);
            }
            other => panic!("{other:?}"),
        }
        assert!(v.condition_ii.is_none());
    }

    #[test]
    fn stokes_penalty_fails_condition_i() {
        for n in [2, 3] {
            let v = check_mmp(&stokes_penalized_principal_part(n, 1.0, 1e-3).unwrap()).unwrap();
            assert_eq!(v.failing_condition(), Some("condition_i"));
        }
    }

    #[test]
    fn construct_then_recover() {
        let a = [[2.0, 1.0], [1.0, 2.0]];
        let cm = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        let a2 = (0..2)
            .map(|j| (0..2).map(|k| &cm * a[j][k]).collect())
            .collect();
        let sys = CoefficientSystem::from_real(
            2,
            2,
            a2,
            vec![DMatrix::zeros(2, 2); 2],
            DMatrix::zeros(2, 2),
        )
        .unwrap();
        match factor_principal_part(&sys, FACTOR_TOL_REL) {
            ConditionI::Holds {
                principal,
                a: rec,
                residual,
            } => {
                assert!(residual < 1e-15);
                let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
                assert!((rec - expected).norm() < 1e-14);
                assert!((principal - to_complex(&cm * 2.0)).norm() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalar_complex_boundary_and_violation() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        let zero = c(0.0, 0.0);
        // 4ℜ(c₀/c) = 4 and Σ b ℑ(c_j/c)ℑ(c_k/c) = 4
        let sys = scalar_system(c(1.0, 0.0), &id, [c(0.0, 2.0), zero], c(1.0, 0.0));
        let cii = check_mmp(&sys).unwrap().condition_ii.unwrap();
        assert!(
            matches!(cii, ConditionII::Holds { boundary: true, .. }),
            "{cii:?}"
        );
        let sys = scalar_system(c(1.0, 0.0), &id, [c(0.0, 2.0), zero], c(0.9, 0.0));
        let v = check_mmp(&sys).unwrap();
        assert!(!v.overall);
        let cii = v.condition_ii.unwrap();
        assert!(!cii.holds());
        assert!((cii.min_value() + 0.4).abs() < 1e-12);
        assert_eq!(cii.witness().len(), 1);
    }

    #[test]
    fn scalar_real_first_order_terms_hold() {
        let a2 = vec![
            vec![DMatrix::identity(1, 1), DMatrix::zeros(1, 1)],
            vec![DMatrix::zeros(1, 1), DMatrix::identity(1, 1)],
        ];
        let a1 = vec![
            DMatrix::from_element(1, 1, 3.7),
            DMatrix::from_element(1, 1, -1.2),
        ];
        let sys = CoefficientSystem::from_real(1, 2, a2, a1, DMatrix::zeros(1, 1)).unwrap();
        let v = check_mmp(&sys).unwrap();
        assert!(v.overall);
        assert!(v.condition_ii.unwrap().min_value().abs() < 1e-12);
    }

    #[test]
    fn imaginary_laplacian_is_not_elliptic() {
        let i = c(0.0, 1.0);
        let sys = scalar_system(i, &[[1.0, 0.0], [0.0, 1.0]], [c(0.0, 0.0); 2], c(0.0, 0.0));
        let v = check_mmp(&sys).unwrap();
        assert!(!v.strongly_elliptic.holds);
        assert!(v.strongly_elliptic.witness.is_some());
        assert_eq!(v.failing_condition(), Some("strong_ellipticity"));
        let doubled = complexify(&sys);
        assert_eq!(
            doubled.a2(0, 0),
            &to_complex(DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]))
        );
        assert!(!check_mmp(&doubled).unwrap().strongly_elliptic.holds);
    }

    #[test]
    fn doubling_real_input_is_block_diagonal() {
        let sys = lame_principal_part(2, 1.0, 1.0).unwrap();
        let d = complexify(&sys);
        assert_eq!(d.m(), 4);
        let blk = d.a2(0, 1);
        for r in 0..4 {
            for s in 0..4 {
                let expected = if (r < 2) == (s < 2) {
                    sys.a2(0, 1)[(r % 2, s % 2)]
                } else {
                    c(0.0, 0.0)
                };
                assert_eq!(blk[(r, s)], expected);
            }
        }
    }

    #[test]
    fn one_plus_i_laplacian_paths_agree() {
        let sys = scalar_system(
            c(1.0, 1.0),
            &[[1.0, 0.0], [0.0, 1.0]],
            [c(0.0, 0.0); 2],
            c(0.0, 0.0),
        );
        let opts = CriteriaOptions::default();
        let direct = check_mmp_with(&sys, &opts).unwrap();
        let doubled = check_mmp_doubled(&sys, &opts).unwrap();
        assert!(direct.overall);
        assert_eq!(direct.overall, doubled.overall);
    }

    #[test]
    fn q_form_pointwise_matches_doubled() {
        let sys = scalar_system(
            c(2.0, 0.5),
            &[[2.0, 0.3], [0.3, 1.0]],
            [c(0.4, -1.0), c(1.5, 0.2)],
            c(0.3, 0.7),
        );
        let d = complexify(&sys);
        let (
            ConditionI::Holds { principal, a, .. },
            ConditionI::Holds {
                principal: pd,
                a: ad,
                ..
            },
        ) = (
            factor_principal_part(&sys, FACTOR_TOL_REL),
            factor_principal_part(&d, FACTOR_TOL_REL),
        )
        else {
            panic!("both factorizations should hold");
        };
        let q = QForm::new(&sys, &principal, &a).unwrap();
        let qd = QForm::new(&d, &pd, &ad).unwrap();
        for x in [[1.0, 0.0], [0.6, 0.8], [-0.28, 0.96]] {
            let direct = q.eval(&q.zeta_from_real(&x));
            let doubled = qd.eval(&qd.zeta_from_real(&x));
            assert!((direct - doubled).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_samples_rejected() {
        let sys = lame_principal_part(2, 1.0, 1.0).unwrap();
        assert!(check_strong_ellipticity(&sys, 99).is_err());
    }
}
