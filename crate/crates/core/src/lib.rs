//! Spherical slice transforms on `S^n`.
//!
//! The complete-slice transform `F_a` integrates a function over the
//! subspheres cut out by hyperplanes through the interior point
//! `A = a e_{n+1}`; the truncated transform `S_a` keeps only the part of each
//! slice inside the cap `{η_{n+1} < a}`. Both are evaluated directly by
//! quadrature and through their factorizations: `F_a` through the Funk
//! transform via meridional reparameterizations, `S_a` through the
//! hyperplane Radon transform on `R^n` via a stereographic projection with
//! pole at `A`. The factorizations also give the inversion pipelines.
//!
//! Module map:
//! - [`sphere_core`]: points, fields, quadrature, spherical means.
//! - [`slice_transforms`]: Funk, `F_a`, `S_a` and the λ-cosine families.
//! - [`funk_bridge`]: meridional maps, `M_a`/`N_a`, symmetry classes, Funk inversion.
//! - [`radon_bridge`]: stereographic map, Radon/Semyanistyi transforms, `U_a`/`V_a`, inversion.
//! - [`zonal_oracles`]: one-dimensional closed forms for zonal inputs.
//! - [`limit_diagnostics`]: Riesz potentials and λ→−1 / α→0 limit studies.
//! - [`catalog`]: named test fields used by the CLI and the test suites.

pub mod catalog;
pub mod error;
pub mod funk_bridge;
pub mod limit_diagnostics;
pub mod radon_bridge;
pub mod slice_transforms;
pub mod sphere_core;
pub mod zonal_oracles;

pub use error::{Error, Result};
pub use sphere_core::{
    make_point, Domain, QuadratureRule, ScalarField, Smoothness, SpherePoint, Support,
};
