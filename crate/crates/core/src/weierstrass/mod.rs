//! Spinor Weierstrass data, the surface it describes and the identities tying
//! the two together.

pub mod families;
mod geometry;
mod identities;
mod spinor;
mod surface;

pub use geometry::{derive_geometry, GeometryBundle, Q_FLOOR};
pub use identities::{
    dirac_residual, frame_residual, gauss_codazzi_residual, normal_equation_residual, normal_from_surface,
    scalar_product_residuals, DiracResidual, COMPOSED_BAND,
};
pub use spinor::SpinorData;
pub use surface::{integrate_surface, Surface};
