use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::evolve::{drive, LinearStepper, Scheme, StepInput};
use super::modal::{modes_to_fields, state_to_modes};
use super::mode::{assemble, rhs, Layout, ModeOps};
use super::resolvent::check_params;
use crate::error::{Error, Result};
use crate::fields::State;
use crate::tensor::ModelParams;

/// Gauss–Legendre nodes and weights on [−1, 1], 8 points.
const GL_X: [f64; 4] = [0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363];
const GL_W: [f64; 4] = [0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];

fn gauss_panels(a: f64, b: f64, nodes: usize) -> Vec<(f64, f64)> {
    let panels = nodes.div_ceil(8).max(1);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * 8);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for k in 0..4 {
            out.push((mid - 0.5 * h * GL_X[k], 0.5 * h * GL_W[k]));
            out.push((mid + 0.5 * h * GL_X[k], 0.5 * h * GL_W[k]));
        }
    }
    out
}

/// Quadrature of the inverse-Laplace contour `Γ_ω`: two rays at angle
/// `±(π − ε)` from radius `ω` to `r_max`, joined by the arc of radius `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub epsilon: f64,
    /// Arc radius; `None` means `1/t`.
    pub omega: Option<f64>,
    pub n_ray: usize,
    pub n_arc: usize,
    /// Ray truncation `r_max = r_max_factor / t`.
    pub r_max_factor: f64,
    /// If set, repeat with doubled node counts and fail when the relative change exceeds it.
    pub doubling_tolerance: Option<f64>,
}

impl ContourSpec {
    pub fn new(epsilon: f64) -> Self {
        ContourSpec { epsilon, omega: None, n_ray: 64, n_arc: 32, r_max_factor: 40.0, doubling_tolerance: None }
    }

    fn validate(&self, t: f64) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.epsilon > 0.0 && self.epsilon < PI / 2.0) {
            problems.push(format!("contour angle {} outside (0, pi/2)", self.epsilon));
        }
        let omega = self.omega.unwrap_or(1.0 / t);
        if !(omega > 0.0) {
            problems.push(format!("arc radius {omega} must be positive"));
        }
        if !(self.r_max_factor / t > omega) {
            problems.push("ray truncation radius must exceed the arc radius".into());
        }
        if self.n_ray == 0 || self.n_arc == 0 {
            problems.push("node counts must be positive".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }

    /// Nodes `λ_i` on the upper half of the contour with weights `dλ`.
    fn upper_nodes(&self, t: f64) -> Vec<(Complex64, Complex64)> {
        let alpha = PI - self.epsilon;
        let omega = self.omega.unwrap_or(1.0 / t);
        let r_max = self.r_max_factor / t;
        let dir = Complex64::from_polar(1.0, alpha);
        let mut nodes: Vec<(Complex64, Complex64)> = gauss_panels(0.0, alpha, self.n_arc)
            .into_iter()
            .map(|(phi, w)| {
                let lam = Complex64::from_polar(omega, phi);
                (lam, Complex64::new(0.0, 1.0) * lam * w)
            })
            .collect();
        nodes.extend(gauss_panels(omega.ln(), r_max.ln(), self.n_ray).into_iter().map(|(s, w)| {
            let r = s.exp();
            (dir * r, dir * r * w)
        }));
        nodes
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SemigroupMode {
    Contour(ContourSpec),
    /// Crank–Nicolson with this many equal steps.
    Implicit { steps: usize },
}

/// `S(t) U0` for the linear coupled operator.
pub fn semigroup_apply(t: f64, u0: &State, params: &ModelParams, mode: SemigroupMode) -> Result<State> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidInput(format!("time {t} must be positive")));
    }
    let grid = *u0.grid();
    check_params(&grid, params)?;
    match mode {
        SemigroupMode::Implicit { steps } => {
            if steps == 0 {
                return Err(Error::InvalidInput("at least one step".into()));
            }
            let stepper = LinearStepper::new(&grid, params, t / steps as f64, Scheme::CrankNicolson)?;
            let mut free = |_: usize, _: f64, _: &dyn Fn() -> State| Ok(StepInput::Free);
            let (traj, _) = drive(&stepper, u0, steps, steps, &mut free)?;
            Ok(traj.states.into_iter().last().expect("final state stored"))
        }
        SemigroupMode::Contour(spec) => {
            spec.validate(t)?;
            let first = contour(t, u0, params, &spec)?;
            if let Some(tol) = spec.doubling_tolerance {
                let fine_spec = ContourSpec { n_ray: 2 * spec.n_ray, n_arc: 2 * spec.n_arc, ..spec };
                let fine = contour(t, u0, params, &fine_spec)?;
                let scale = fine.max_abs().max(f64::MIN_POSITIVE);
                let change = fine.sub(&first).max_abs() / scale;
                if change > tol {
                    return Err(Error::QuadratureNotConverged { change, tolerance: tol });
                }
                return Ok(fine);
            }
            Ok(first)
        }
    }
}

fn contour(t: f64, u0: &State, params: &ModelParams, spec: &ContourSpec) -> Result<State> {
    let grid = *u0.grid();
    let lay = Layout::new(&grid);
    let x0 = state_to_modes(&lay, &grid, &u0.u, &u0.q);
    let nodes = spec.upper_nodes(t);
    // the data (u0, Q0) enters exactly where (f, G) does
    let data_rhs = |kind, x: &[Complex64]| -> Vec<Complex64> {
        let comps: Vec<Vec<Complex64>> =
            (0..lay.n + lay.nq).map(|v| (0..lay.m).map(|j| x[lay.var(j, v)]).collect()).collect();
        let refs: Vec<&[Complex64]> = comps.iter().map(|c| c.as_slice()).collect();
        rhs(&lay, kind, &refs[..lay.n], &refs[lay.n..])
    };
    let acc: Vec<Vec<Complex64>> = (0..grid.n_columns())
        .into_par_iter()
        .map(|col| {
            let (k, _) = grid.wavevector(col);
            let kind = lay.kind(&grid, col);
            let ops = ModeOps::new(&lay, k, params.a);
            let b = data_rhs(kind, &x0[col]);
            let mut sum = vec![Complex64::default(); lay.len()];
            for &(lam, dl) in &nodes {
                let lu = assemble(&lay, &ops, params, kind, lam).factor().map_err(|pivot| Error::SingularMode {
                    wavenumber: k[..grid.dim() - 1].to_vec(),
                    pivot,
                })?;
                let mut x = b.clone();
                lu.solve_in_place(&mut x);
                let c = (lam * t).exp() * dl;
                for (s, v) in sum.iter_mut().zip(&x) {
                    *s += c * v;
                }
            }
            Ok(sum)
        })
        .collect::<Result<_>>()?;
    let (u, q, _) = modes_to_fields::<Complex64>(&lay, &grid, &acc);
    // S(t)U0 = Im(∫_upper e^{λt} R(λ)U0 dλ) / π for real data
    let u = crate::fields::VectorField::from_components((0..lay.n).map(|i| u.comp(i).im().scale(1.0 / PI)).collect())?;
    let qc = (0..lay.n * lay.n).map(|c| q.comp(c / lay.n, c % lay.n).im().scale(1.0 / PI)).collect();
    Ok(State { u, q: crate::fields::TensorField::project(qc)? })
}
