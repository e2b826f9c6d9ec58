//! Special functions, quadrature and sphere search shared by the other modules.

pub mod elliptic;
pub mod gamma;
pub mod quadrature;
pub mod sphere;

pub use elliptic::complete_elliptic_e;
pub use gamma::{gamma, gamma_ratio, ln_gamma};
pub use quadrature::{
    integrate_1d, integrate_hemisphere, Quadrature, QuadratureRule, QuadratureSpec,
};
pub use sphere::{maximize_on_sphere, maximize_on_sphere_with, SphereMax, SphereSearch};
