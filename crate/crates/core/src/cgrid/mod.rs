//! Complex-grid calculus: charts, masked fields, Wirtinger stencils, path
//! integrals and branch-continued square roots.

mod branch;
mod calculus;
mod chart;
mod field;
mod path;
mod stats;
pub mod vector;

pub use branch::{continue_sqrt, seam_mask, BranchRoot};
pub use calculus::{
    d_dbar, d_dbar_real, holomorphy_residual, integrate, partial_x, partial_y, wirtinger_d, wirtinger_d_real,
    wirtinger_d_vec, wirtinger_dbar, wirtinger_dbar_real, wirtinger_dbar_vec,
};
pub use chart::GridChart;
pub use field::{joint_mask, ComplexField, Field, Mask, Masked, RealField, Sample, Vec3Field};
pub use path::{
    cell_circulations, loop_defect, path_integrate, sweep_antiderivative, sweep_antiderivative_with, Antiderivative,
    GridPath, SweepOrder,
};
pub use stats::{ResidualReport, ResidualStat};
