//! The linearized coupled operator: pressure, resolvent, semigroup, evolution.

mod evolve;
mod modal;
mod mode;
mod pressure;
mod resolvent;
mod semigroup;

pub use evolve::{evolve_with, linear_evolve, Forcing, LinearStepper, Scheme, Trajectory};
pub(crate) use evolve::{drive, steps_for, StepInput};
pub use pressure::{div_elastic, pressure_solve, weak_pressure};
pub use resolvent::{resolvent_solve, ResolventSolution, Sector};
pub use semigroup::{semigroup_apply, ContourSpec, SemigroupMode};
