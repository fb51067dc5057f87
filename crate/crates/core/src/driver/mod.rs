//! Exponent bookkeeping, the weighted trajectory norm, nonlinear runs and
//! the fixed-point iteration.

mod exponents;
mod gn;
mod initial;
mod norm;
mod picard;
mod simulate;

pub use exponents::{exponent_setup, kappa, ExponentScheme};
pub use gn::{gn_check, GnRatio};
pub use initial::{bump_state, small_data, surrogate_norm};
pub use norm::{weighted_norm_e, NormComponent, NormTerm, WeightedNormReport};
pub use picard::{picard_iterate, PicardOptions, PicardRecord, PicardRun};
pub use simulate::{simulate, total_energy, DiagnosticRow, SimulateOptions, Simulation};
