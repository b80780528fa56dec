//! Gauss map, sigma models, instantons and charge.

mod charge;
mod gauss;
mod instanton;
mod models;
mod rational;

pub use charge::{
    charge_density, charge_identity_residual, energy, q_charge_density, topological_charge, ChargeIdentity, Energy,
    UNIT_TOLERANCE,
};
pub use gauss::{
    gauss_map, general_h_residual, qr_from_rho, sigma_residual, spinors_from_rho, spinors_from_rho_with, GaussMapField,
    CHART_CENTERS, POLE_FLOOR,
};
pub use instanton::{instanton, instanton_on, sample_map};
pub use models::{cp1_residual, so3_residual, So3Residual};
pub use rational::{poly_add, poly_eval, poly_mul, poly_neg, poly_roots, Coeffs, RationalMap, DEGREE_CAP};
