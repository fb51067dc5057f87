use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::modal::{modes_to_fields, ForcingModes};
use super::mode::{assemble, rhs, Layout, ModeOps};
use crate::error::{Error, Result};
use crate::fields::{Components, Grid, Scalar, ScalarField, TensorField, VectorField};
use crate::tensor::ModelParams;

/// The sector `Σ_ε = {λ ≠ 0 : |arg λ| < π − ε}` with `ε₀ < ε < π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    epsilon: f64,
    epsilon0: f64,
}

impl Sector {
    pub fn new(epsilon: f64, params: &ModelParams) -> Result<Self> {
        let epsilon0 = params.epsilon0();
        if !(epsilon > epsilon0 && epsilon < PI / 2.0) {
            return Err(Error::InvalidInput(format!(
                "sector angle {epsilon} must lie in ({epsilon0:.6}, pi/2) where tan(eps0) = |beta|/sqrt(2)"
            )));
        }
        Ok(Sector { epsilon, epsilon0 })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn contains(&self, lambda: Complex64) -> bool {
        lambda.norm() > 0.0 && lambda.arg().abs() < PI - self.epsilon
    }
}

#[derive(Debug, Clone)]
pub struct ResolventSolution {
    pub u: VectorField<Complex64>,
    pub q: TensorField<Complex64>,
    pub p: ScalarField<Complex64>,
    /// Largest normwise backward error `‖Ax − b‖ / (‖A‖‖x‖ + ‖b‖)` over modes.
    pub residual: f64,
}

pub(crate) fn check_params(grid: &Grid, params: &ModelParams) -> Result<()> {
    if params.n != grid.dim() {
        return Err(Error::GridMismatch(format!("model dimension {} on a {}-D grid", params.n, grid.dim())));
    }
    Ok(())
}

pub(crate) fn check_data<T: Scalar>(f: &VectorField<T>, g: &TensorField<T>) -> Result<()> {
    let grid = *f.grid();
    if *g.grid() != grid {
        return Err(Error::GridMismatch("f and G live on different grids".into()));
    }
    if !f.components().iter().chain(g.components()).all(|c| c.is_finite()) {
        return Err(Error::InvalidInput("non-finite data".into()));
    }
    let (asym, tr) = g.invariant_residuals();
    let scale = g.max_abs().max(f64::MIN_POSITIVE);
    if asym > 1e-10 * scale || tr > 1e-10 * scale {
        return Err(Error::InvalidInput(format!(
            "G is not symmetric traceless (asymmetry {asym:.2e}, trace {tr:.2e})"
        )));
    }
    Ok(())
}

/// Solve every mode at `λ`; returns per-column unknowns and the worst backward error.
pub(crate) fn solve_modes(
    grid: &Grid,
    params: &ModelParams,
    lambda: Complex64,
    forcing: &ForcingModes,
) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let lay = Layout::new(grid);
    let results: Vec<(Vec<Complex64>, f64)> = (0..grid.n_columns())
        .into_par_iter()
        .map(|col| {
            let (k, _) = grid.wavevector(col);
            let kind = lay.kind(grid, col);
            let ops = ModeOps::new(&lay, k, params.a);
            let mat = assemble(&lay, &ops, params, kind, lambda);
            let (fc, gc) = forcing.column(&lay, col);
            let b = rhs(&lay, kind, &fc, &gc);
            let norm_a = mat.norm_inf();
            let lu = mat.clone().factor().map_err(|pivot| Error::SingularMode {
                wavenumber: k[..grid.dim() - 1].to_vec(),
                pivot,
            })?;
            let mut x = b.clone();
            lu.solve_in_place(&mut x);
            let r = mat.matvec(&x);
            let num = r.iter().zip(&b).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            let xn = x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            let bn = b.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            let den = norm_a * xn + bn;
            Ok((x, if den > 0.0 { num / den } else { 0.0 }))
        })
        .collect::<Result<_>>()?;
    let residual = results.iter().fold(0.0f64, |m, r| m.max(r.1));
    Ok((results.into_iter().map(|r| r.0).collect(), residual))
}

/// Solve `λU − A U = (f, G)` with wall conditions, by one banded solve per
/// tangential wavenumber.
pub fn resolvent_solve<T: Scalar>(
    lambda: Complex64,
    f: &VectorField<T>,
    g: &TensorField<T>,
    params: &ModelParams,
    sector: &Sector,
) -> Result<ResolventSolution> {
    if !sector.contains(lambda) {
        return Err(Error::OutsideSector { re: lambda.re, im: lambda.im, epsilon: sector.epsilon() });
    }
    resolvent_unchecked(lambda, f, g, params)
}

/// As [`resolvent_solve`] without the sector test (contour nodes sit on its boundary).
pub(crate) fn resolvent_unchecked<T: Scalar>(
    lambda: Complex64,
    f: &VectorField<T>,
    g: &TensorField<T>,
    params: &ModelParams,
) -> Result<ResolventSolution> {
    let grid = *f.grid();
    check_params(&grid, params)?;
    check_data(f, g)?;
    let lay = Layout::new(&grid);
    let forcing = ForcingModes::new(&lay, f, g);
    let (x, residual) = solve_modes(&grid, params, lambda, &forcing)?;
    let (u, q, p) = modes_to_fields(&lay, &grid, &x);
    Ok(ResolventSolution { u, q, p, residual })
}
