//! Algebraic criteria for the classical maximum modulus principle
//! max |u| ≤ max_∂ |u| for second-order systems with constant (or sampled)
//! coefficients.
//!
//! The principle holds for every subdomain iff the system is strongly
//! elliptic, its principal part factors as A_jk = A a_jk with A and ((a_jk))
//! positive definite (condition (i)), and a quadratic form in the lower-order
//! coefficients is nonnegative on the unit sphere (condition (ii)).

mod checks;
pub mod input;
mod system;

pub use checks::{
    check_condition_ii, check_mmp, check_mmp_doubled, check_mmp_with, check_strong_ellipticity,
    complexify, factor_principal_part, ConditionI, ConditionII, CriteriaOptions, CriteriaVerdict,
    Ellipticity, EllipticityWitness, FactorFailure, QForm, DEFAULT_ELLIPTICITY_SAMPLES,
    FACTOR_TOL_REL, MIN_ELLIPTICITY_SAMPLES, SMOOTHNESS_NOTE, TOL_PD_REL, TOL_Q_REL,
};
pub use input::{parse_criteria_document, parse_criteria_file, CriteriaDocument, SamplePoint};
pub use system::{
    lame_principal_part, stokes_penalized_principal_part, CMatrix, CoefficientSystem, ScalarField,
};
