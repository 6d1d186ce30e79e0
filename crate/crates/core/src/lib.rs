pub mod error;
pub mod numerics;
pub mod harmonics;
pub mod qkernel;
pub mod registry;
pub mod series;

pub use error::{Error, Result};
pub use numerics::{BigReal, Exact, Jet2, Scalar};
