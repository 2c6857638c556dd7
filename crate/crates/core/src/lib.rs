#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod amplitudes;
pub mod complex;
pub mod error;
pub mod field;
pub mod kinematics;
pub mod oracle;
pub mod quad;
pub mod specfun;

pub use complex::{ComplexScalar, LogComplex};
pub use error::{Error, Result};
