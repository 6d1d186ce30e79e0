//! Scalar types: binary floating point, exact rationals, and second-order
//! jets over either.

mod exact;
mod jet;
mod real;
mod scalar;

pub use exact::{parse_rational, Exact};
pub use jet::{jet_div, jet_mul, Jet2};
pub use real::BigReal;
pub use scalar::Scalar;
pub use dashu_ratio::RBig;

use dashu_float::round::mode::HalfEven;
use dashu_float::Context;

use crate::error::{Error, Result};

/// Working precision used when none is requested.
pub const DEFAULT_PRECISION: usize = 192;

/// Smallest accepted working precision.
pub const MIN_PRECISION: usize = 16;

pub fn check_precision(precision: usize) -> Result<()> {
    if precision < MIN_PRECISION {
        return Err(Error::PrecisionTooLow { requested: precision, minimum: MIN_PRECISION });
    }
    Ok(())
}

/// π rounded to `precision` bits.
pub fn pi(precision: usize) -> Result<BigReal> {
    check_precision(precision)?;
    let ctx: Context<HalfEven> = Context::new(precision);
    Ok(BigReal::from_inner(ctx.pi().value()))
}
