use rayon::prelude::*;

use super::exponents::ExponentScheme;
use super::norm::weighted_norm_e;
use crate::error::{Error, Result};
use crate::fields::{TensorField, VectorField};
use crate::linear::{evolve_with, LinearStepper, Scheme, Trajectory};
use crate::nonlinear::{assemble, RhsPair};
use crate::fields::State;
use crate::tensor::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub k_max: usize,
    /// Stop once `E(Φ(U^k) − U^k) ≤ tolerance · E(U^k)`.
    pub tolerance: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        PicardOptions { k_max: 8, tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardRecord {
    pub k: usize,
    /// `E(U^k)`
    pub norm: f64,
    /// `E(U^k − U^{k−1})`, from `k = 1`.
    pub difference: Option<f64>,
    /// `E(U^{k+1} − U^k) / E(U^k − U^{k−1})`.
    pub delta: Option<f64>,
    /// Relative residual `E(Φ(U^k) − U^k) / E(U^k)` of `U^k` in the nonlinear system.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardRun {
    pub records: Vec<PicardRecord>,
    /// Last iterate whose residual was measured.
    pub limit: Trajectory,
    pub converged: bool,
    /// Set when `δ_k > 1` three times in a row.
    pub diverged: bool,
}

impl PicardRun {
    pub fn max_delta(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.delta).reduce(f64::max)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.records.iter().rev().find_map(|r| r.residual)
    }
}

pub(crate) fn trajectory_difference(a: &Trajectory, b: &Trajectory) -> Trajectory {
    Trajectory {
        times: a.times.clone(),
        states: a.states.iter().zip(&b.states).map(|(x, y)| x.sub(y)).collect(),
        pressure: a.pressure.iter().zip(&b.pressure).map(|(x, y)| x - y).collect(),
        records: Vec::new(),
    }
}

/// `Φ(U)`: the linear problem from `u0` with `(f(U), G(U))` frozen at the stored stamps.
fn phi(stepper: &LinearStepper, u0: &State, prev: Option<&Trajectory>, params: &ModelParams, horizon: f64) -> Result<Trajectory> {
    let Some(prev) = prev else {
        return evolve_with(stepper, u0, None, horizon, 1);
    };
    let rhs: Vec<RhsPair> = prev.states.par_iter().map(|s| assemble(s, params)).collect::<Result<_>>()?;
    let dt = stepper.dt();
    let forcing = move |t: f64| -> (VectorField, TensorField) {
        let i = ((t / dt).round() as usize).min(rhs.len() - 1);
        (rhs[i].f.clone(), rhs[i].g.clone())
    };
    evolve_with(stepper, u0, Some(&forcing), horizon, 1)
}

/// Fixed-point iteration `U^{k+1} = Φ(U^k)`, starting from the linear solution `U^0 = Φ(0)`.
pub fn picard_iterate(
    u0: &State,
    params: &ModelParams,
    scheme: &ExponentScheme,
    horizon: f64,
    dt: f64,
    opts: &PicardOptions,
) -> Result<PicardRun> {
    if opts.k_max < 2 {
        return Err(Error::InvalidInput(format!("k_max = {} must be at least 2", opts.k_max)));
    }
    let stepper = LinearStepper::new(u0.grid(), params, dt, Scheme::BackwardEuler)?;
    let mut current = phi(&stepper, u0, None, params, horizon)?;
    let mut records = vec![PicardRecord {
        k: 0,
        norm: weighted_norm_e(&current, scheme)?.total,
        difference: None,
        delta: None,
        residual: None,
    }];
    let (mut converged, mut diverged) = (false, false);
    let mut above_one = 0;
    for k in 0..opts.k_max {
        let next = phi(&stepper, u0, Some(&current), params, horizon)?;
        let diff = weighted_norm_e(&trajectory_difference(&next, &current), scheme)?.total;
        let rec = &mut records[k];
        rec.residual = Some(if rec.norm > 0.0 { diff / rec.norm } else { diff });
        if let Some(prev) = rec.difference {
            if prev > 0.0 {
                let d = diff / prev;
                rec.delta = Some(d);
                above_one = if d > 1.0 { above_one + 1 } else { 0 };
            }
        }
        if rec.residual.expect("just set") <= opts.tolerance {
            converged = true;
            break;
        }
        if above_one >= 3 {
            diverged = true;
            break;
        }
        if k + 1 == opts.k_max {
            break;
        }
        records.push(PicardRecord {
            k: k + 1,
            norm: weighted_norm_e(&next, scheme)?.total,
            difference: Some(diff),
            delta: None,
            residual: None,
        });
        current = next;
    }
    Ok(PicardRun { records, limit: current, converged, diverged })
}
