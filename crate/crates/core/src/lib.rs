//! Beris–Edwards Q-tensor flow in a half-space: pointwise tensor algebra,
//! grid functions, the linearized coupled operator and its resolvent and
//! semigroup, nonlinear right-hand sides, and the weighted-norm / Picard
//! driver.

pub mod driver;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod linear;
pub mod nonlinear;
pub mod tensor;

pub use error::{Error, Result};
