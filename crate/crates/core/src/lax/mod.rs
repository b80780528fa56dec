//! SU(2) symmetry and the linear problems whose compatibility reproduces the
//! CMC equations.

mod connection;
mod su2;

pub use connection::{
    build_connection, gauge_check, gauge_check_scaled, linear_problem_residual, mu_lax_connection, mu_lax_residual,
    trace_max, zero_curvature_residual, ConnectionPair, GaugeCheck, MatrixField, System,
};
pub use su2::{su2_transform, SU2Element};
