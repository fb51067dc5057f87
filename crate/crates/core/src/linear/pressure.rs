use num_complex::Complex64;

use super::resolvent::check_params;
use crate::error::Result;
use crate::fields::{
    row_divergence, spectral, tensor_laplacian, vector_laplacian, Components, Scalar, ScalarField, TensorField,
    VectorField,
};
use crate::tensor::ModelParams;

/// `Div(ΔQ − aQ)` taken row-wise.
pub fn div_elastic<T: Scalar>(q: &TensorField<T>, a: f64) -> VectorField<T> {
    let lap = tensor_laplacian(q);
    let comps: Vec<ScalarField<T>> = lap
        .components()
        .iter()
        .zip(q.components())
        .map(|(l, qc)| l.zip_with(qc, |x, y| x - y * a))
        .collect();
    row_divergence(q.grid(), &comps)
}

/// Solve the weak problem `(∇p, ∇φ) = (w, ∇φ)` for all `φ` vanishing on the
/// wall, with `p = 0` at `x_N = 0` and the natural condition at the top.
///
/// Piecewise-linear Galerkin in `x_N` with lumped mass, spectral tangentially;
/// one tridiagonal solve per tangential mode.
pub fn weak_pressure<T: Scalar>(w: &VectorField<T>) -> ScalarField<T> {
    let grid = *w.comp(0).grid();
    let n = grid.dim();
    let m = grid.n_wall();
    let h = grid.dy();
    let wh: Vec<Vec<Complex64>> = (0..n).map(|i| spectral::to_modes(w.comp(i))).collect();
    let mut out = vec![Complex64::default(); grid.len()];
    let mut lower = vec![Complex64::default(); m];
    let mut diag = vec![Complex64::default(); m];
    let mut upper = vec![Complex64::default(); m];
    let mut b = vec![Complex64::default(); m];
    for col in 0..grid.n_columns() {
        let (k, nyq) = grid.wavevector(col);
        if nyq {
            continue;
        }
        let k2: f64 = k[..n - 1].iter().map(|v| v * v).sum();
        let at = |v: &Vec<Complex64>, j: usize| v[grid.index(col, j)];
        // tangential part of (w, ∇φ_j) per unit of ∫φ_j
        let tan = |j: usize| -> Complex64 {
            (0..n - 1).map(|l| at(&wh[l], j) * Complex64::new(0.0, -k[l])).sum()
        };
        // row 0 is the Dirichlet condition
        diag[0] = Complex64::new(1.0, 0.0);
        upper[0] = Complex64::default();
        b[0] = Complex64::default();
        for j in 1..m {
            let top = j == m - 1;
            let mass = if top { 0.5 * h } else { h };
            lower[j] = Complex64::new(-1.0 / h, 0.0);
            diag[j] = Complex64::new(if top { 1.0 / h } else { 2.0 / h } + k2 * mass, 0.0);
            upper[j] = Complex64::new(if top { 0.0 } else { -1.0 / h }, 0.0);
            let wn = &wh[n - 1];
            let normal = if top {
                0.5 * (at(wn, j - 1) + at(wn, j))
            } else {
                0.5 * (at(wn, j - 1) - at(wn, j + 1))
            };
            b[j] = normal + tan(j) * mass;
        }
        // Dirichlet row decouples p_0; drop its coupling into row 1
        lower[1] = Complex64::default();
        // Thomas elimination
        for j in 1..m {
            let l = lower[j] / diag[j - 1];
            diag[j] -= l * upper[j - 1];
            let prev = b[j - 1];
            b[j] -= l * prev;
        }
        out[grid.index(col, m - 1)] = b[m - 1] / diag[m - 1];
        for j in (0..m - 1).rev() {
            out[grid.index(col, j)] = (b[j] - upper[j] * out[grid.index(col, j + 1)]) / diag[j];
        }
    }
    spectral::from_modes(&grid, out)
}

/// `K(u, Q)`: the pressure with right side `Δu − β Div(ΔQ − aQ)`.
pub fn pressure_solve<T: Scalar>(u: &VectorField<T>, q: &TensorField<T>, params: &ModelParams) -> Result<ScalarField<T>> {
    check_params(u.comp(0).grid(), params)?;
    let w = vector_laplacian(u).sub(&div_elastic(q, params.a).scale(params.beta()));
    Ok(weak_pressure(&w))
}
