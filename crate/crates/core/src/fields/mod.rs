//! Grid functions on the tangentially periodic channel.

mod boundary;
mod deriv;
mod field;
mod grid;
mod norms;
mod snapshot;
pub mod spectral;

pub use boundary::{apply_boundary, wall_normal_q_derivative, wall_velocity};
pub use deriv::{
    diff, divergence, grad, jacobian, laplacian, multi_indices, partial, row_divergence, stencil,
    tensor_laplacian, vector_laplacian,
};
pub use field::{Components, Scalar, ScalarField, State, TensorField, VectorField};
pub use grid::Grid;
pub use norms::{inner, lebesgue_norm, linf_norm, sobolev_seminorm, NormSpec};
pub use snapshot::Snapshot;
