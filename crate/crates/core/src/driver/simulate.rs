use crate::error::Result;
use crate::fields::{divergence, grad, sobolev_seminorm, wall_velocity, ScalarField, State};
use crate::linear::{drive, pressure_solve, steps_for, weak_pressure, LinearStepper, Scheme, StepInput, Trajectory};
use crate::nonlinear::{assemble, assemble_f};
use crate::tensor::{bulk_energy, bulk_energy_min, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateOptions {
    /// Switch the explicit nonlinear forcing off to recover the linear run.
    pub nonlinear: bool,
    pub store_every: usize,
    /// Halt once `max|U^n| > blowup_factor · max|U^0|`.
    pub blowup_factor: f64,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions { nonlinear: true, store_every: 1, blowup_factor: 1e6 }
    }
}

/// Per stored state checks, one CSV row each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    pub time: f64,
    pub energy: f64,
    pub asymmetry: f64,
    pub trace: f64,
    pub wall_velocity: f64,
    /// Interior `max|div u|` over `max|∇u|`.
    pub divergence: f64,
    /// `‖p − (K(u, Q) + K₂(f))‖_∞` for the coupled-solve pressure `p`.
    pub pressure_gap: f64,
}

impl DiagnosticRow {
    pub const HEADER: &'static str = "t,energy,asymmetry,trace,wall_velocity,divergence,pressure_gap";

    pub fn values(&self) -> [f64; 7] {
        [self.time, self.energy, self.asymmetry, self.trace, self.wall_velocity, self.divergence, self.pressure_gap]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub diagnostics: Vec<DiagnosticRow>,
    /// `(time, growth)` if the run was halted.
    pub blowup: Option<(f64, f64)>,
}

/// `½‖u‖² + ∫ ½|∇Q|² + F(Q) − min F`.
pub fn total_energy(state: &State, params: &ModelParams) -> f64 {
    let grid = *state.grid();
    let n = grid.dim();
    let m = grid.n_wall();
    let fmin = bulk_energy_min(params);
    let grads: Vec<Vec<ScalarField>> = (0..n * n).map(|c| grad(state.q.comp(c / n, c % n))).collect();
    let mut rows = vec![0.0; m];
    for (idx, row) in (0..grid.len()).map(|i| (i, i % m)) {
        let mut dens = 0.0;
        for u in 0..n {
            dens += 0.5 * state.u.comp(u).data()[idx].powi(2);
        }
        for g in &grads {
            for d in g {
                dens += 0.5 * d.data()[idx].powi(2);
            }
        }
        dens += bulk_energy(&state.q.sample(idx), params) - fmin;
        rows[row] += dens;
    }
    rows.iter().enumerate().map(|(j, r)| grid.weight(j) * r).sum()
}

fn interior_divergence(state: &State) -> f64 {
    let grid = *state.grid();
    let div = divergence(&state.u);
    let mut worst = 0.0f64;
    for c in 0..grid.n_columns() {
        for j in 1..grid.n_wall() - 1 {
            worst = worst.max(div.at(c, j).abs());
        }
    }
    let scale = sobolev_seminorm(&state.u, f64::INFINITY, 1);
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

pub(crate) fn diagnostics(
    traj: &Trajectory,
    params: &ModelParams,
    nonlinear: bool,
) -> Result<Vec<DiagnosticRow>> {
    traj.states
        .iter()
        .zip(&traj.times)
        .zip(&traj.pressure)
        .enumerate()
        .map(|(i, ((s, &t), p))| {
            let (asymmetry, trace) = s.q.invariant_residuals();
            let mut weak = pressure_solve(&s.u, &s.q, params)?;
            if nonlinear {
                weak = &weak + &weak_pressure(&assemble_f(&s.u, &s.q, params)?);
            }
            // the initial state carries no solved pressure
            let pressure_gap = if i == 0 { 0.0 } else { (p - &weak).max_abs() };
            Ok(DiagnosticRow {
                time: t,
                energy: total_energy(s, params),
                asymmetry,
                trace,
                wall_velocity: wall_velocity(s),
                divergence: interior_divergence(s),
                pressure_gap,
            })
        })
        .collect()
}

/// Semi-implicit run: the linear coupled operator implicit (backward Euler),
/// `f` and `G` explicit from the state at the start of each step.
pub fn simulate(u0: &State, params: &ModelParams, horizon: f64, dt: f64, opts: &SimulateOptions) -> Result<Simulation> {
    let stepper = LinearStepper::new(u0.grid(), params, dt, Scheme::BackwardEuler)?;
    let n_steps = steps_for(horizon, dt)?;
    let base = u0.max_abs();
    let mut blowup = None;
    let mut input = |n: usize, t: f64, current: &dyn Fn() -> State| -> Result<StepInput> {
        if !opts.nonlinear && base == 0.0 {
            return Ok(StepInput::Free);
        }
        let s = if n == 0 { u0.clone() } else { current() };
        let size = s.max_abs();
        if !s.is_finite() || (base > 0.0 && size > opts.blowup_factor * base) {
            blowup = Some((t, if base > 0.0 { size / base } else { f64::INFINITY }));
            return Ok(StepInput::Halt);
        }
        if !opts.nonlinear {
            return Ok(StepInput::Free);
        }
        let rhs = assemble(&s, params)?;
        Ok(StepInput::Forced(rhs.f, rhs.g))
    };
    let (mut trajectory, _) = drive(&stepper, u0, n_steps, opts.store_every, &mut input)?;
    if trajectory.len() >= 2 {
        trajectory.fill_records()?;
    }
    let diagnostics = diagnostics(&trajectory, params, opts.nonlinear)?;
    Ok(Simulation { trajectory, diagnostics, blowup })
}
