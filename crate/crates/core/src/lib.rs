pub mod cgrid;
pub mod decouple;
pub mod error;
pub mod lax;
pub mod sigma;
pub mod weierstrass;

pub use error::{Error, Result};
