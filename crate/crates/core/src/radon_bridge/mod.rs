//! Truncated slices reduced to hyperplane Radon data: the stereographic map
//! with pole at `A`, Radon and Semyanistyi transforms on `R^n`, the operators
//! `U_a`, `V_a` and their λ-variants, the factorization `S_a = V_a R U_a`,
//! weighted-norm identities and the inversion `S_a⁻¹ = U_a⁻¹ R⁻¹ V_a⁻¹`.

#![allow(non_snake_case)]

mod identities;
mod inversion;
mod operators;
mod radon;
mod stereo;

pub use identities::{measure_identity_cap, measure_identity_stereo, norm_identity_check, radon_norm_identity};
pub use inversion::{
    radon_inverse, reconstruct_Sa, reconstruct_Sa_grid, RadonInverter, SaReconstructor, ODD_OFFSETS, ODD_STEP,
};
pub use operators::{
    apply_Va, apply_Va_inv, factorize_Sa, factorize_cap_cosine, op_Ua, op_Ua_inv, op_Va, op_Va_inv,
};
pub use radon::{radon, radon_radial, semyanistyi, PlaneFn, RadonData};
pub use stereo::{stereo, stereo_inv, stereo_weights, Hyperplane, StereoMap, StereoWeights};
