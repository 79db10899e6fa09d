pub mod beamopt;
pub mod coupling;
pub mod error;
pub mod matrixkit;
pub mod montecarlo;
pub mod netmodels;
pub mod quadrature;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
