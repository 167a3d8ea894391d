//! Points, fields, normalizations, quadrature and spherical means.

pub mod constants;
pub mod field;
pub mod interp;
pub mod mean;
pub mod panels;
pub mod point;
pub mod quadrature;

pub use constants::{c_const, d_const, gamma_cosine, gamma_riesz, sigma, NormConstants};
pub use field::{Domain, EvalFn, ScalarField, Smoothness, Support};
pub use mean::{
    integrate_cap, integrate_euclidean, integrate_sphere, kernel_pairing, spherical_mean,
    spherical_mean_in_frame, subsphere_integral, SliceFrame,
};
pub use panels::{weighted_integral, SpecialPoint};
pub use point::{
    canonical_sign, make_point, orthonormal_complement, orthonormal_complement_householder, Coords,
    SpherePoint,
};
pub use quadrature::{PanelSpec, QuadratureRule, Rule1d, SphereRule};
