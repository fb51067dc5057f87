use num_complex::Complex64;
use rayon::prelude::*;

use super::modal::{modes_to_fields, state_to_modes, ForcingModes};
use super::mode::{apply_e, assemble, rhs, row_roles, Layout, ModeKind, ModeOps, RowRole};
use super::resolvent::check_params;
use crate::error::{Error, Result};
use crate::fields::{sobolev_seminorm, Grid, ScalarField, State, TensorField, VectorField};
use crate::linalg::{BandLu, BandMatrix};
use crate::tensor::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    BackwardEuler,
    CrankNicolson,
}

/// Time-indexed states with their pressures.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub pressure: Vec<ScalarField>,
    /// `L_2` norms of `(∂_t u, ∇²u, ∇∂_t Q, ∇³Q)` at each stored time.
    pub records: Vec<[f64; 4]>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    /// `∂_t` at stored index `i`: central differences, one-sided second order at the ends.
    pub fn time_derivative(&self, i: usize) -> Result<State> {
        let n = self.len();
        if n < 2 {
            return Err(Error::TrajectoryTooShort(n));
        }
        let t = &self.times;
        let s = &self.states;
        // three-point Lagrange derivative weights on non-uniform stamps
        let weights = |x: [f64; 3], at: f64| -> [f64; 3] {
            let [x0, x1, x2] = x;
            [
                ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2)),
                ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2)),
                ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1)),
            ]
        };
        if n == 2 {
            return Ok(s[1].sub(&s[0]).scale(1.0 / (t[1] - t[0])));
        }
        let (base, at) = if i == 0 {
            (0, t[0])
        } else if i == n - 1 {
            (n - 3, t[n - 1])
        } else {
            (i - 1, t[i])
        };
        let w = weights([t[base], t[base + 1], t[base + 2]], at);
        let mut out = s[base].scale(w[0]);
        out.axpy(w[1], &s[base + 1]);
        out.axpy(w[2], &s[base + 2]);
        Ok(out)
    }

    pub(crate) fn fill_records(&mut self) -> Result<()> {
        self.records = (0..self.len())
            .map(|i| {
                let dt = self.time_derivative(i)?;
                let s = &self.states[i];
                Ok([
                    sobolev_seminorm(&dt.u, 2.0, 0),
                    sobolev_seminorm(&s.u, 2.0, 2),
                    sobolev_seminorm(&dt.q, 2.0, 1),
                    sobolev_seminorm(&s.q, 2.0, 3),
                ])
            })
            .collect::<Result<_>>()?;
        Ok(())
    }
}

struct ModeStep {
    column: usize,
    roles: Vec<RowRole>,
    lu: BandLu,
    /// `K = M(0)`, kept for Crank–Nicolson.
    k: Option<BandMatrix>,
    kind: ModeKind,
}

/// Factorized shifted systems for one time step size, one per canonical mode.
pub struct LinearStepper {
    grid: Grid,
    lay: Layout,
    dt: f64,
    scheme: Scheme,
    modes: Vec<ModeStep>,
}

impl LinearStepper {
    pub fn new(grid: &Grid, params: &ModelParams, dt: f64, scheme: Scheme) -> Result<Self> {
        check_params(grid, params)?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidInput(format!("time step {dt} must be positive")));
        }
        let lay = Layout::new(grid);
        let shift = match scheme {
            Scheme::BackwardEuler => 1.0 / dt,
            Scheme::CrankNicolson => 2.0 / dt,
        };
        // real data: mode −k is the conjugate of mode k, so only solve one of each pair
        let canonical: Vec<usize> =
            (0..grid.n_columns()).filter(|&c| c <= grid.conjugate_column(c)).collect();
        let modes = canonical
            .into_par_iter()
            .map(|column| {
                let (k, _) = grid.wavevector(column);
                let kind = lay.kind(grid, column);
                let ops = ModeOps::new(&lay, k, params.a);
                let mat = assemble(&lay, &ops, params, kind, Complex64::new(shift, 0.0));
                let lu = mat.factor().map_err(|pivot| Error::SingularMode {
                    wavenumber: k[..grid.dim() - 1].to_vec(),
                    pivot,
                })?;
                let k_mat = (scheme == Scheme::CrankNicolson)
                    .then(|| assemble(&lay, &ops, params, kind, Complex64::default()));
                Ok(ModeStep { column, roles: row_roles(&lay, kind), lu, k: k_mat, kind })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearStepper { grid: *grid, lay, dt, scheme, modes })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub(crate) fn to_modes(&self, s: &State) -> Vec<Vec<Complex64>> {
        state_to_modes(&self.lay, &self.grid, &s.u, &s.q)
    }

    /// Physical state and pressure. Crank–Nicolson pressure is the midpoint value.
    pub(crate) fn to_fields(&self, x: &[Vec<Complex64>]) -> (State, ScalarField) {
        let (u, q, p) = modes_to_fields::<f64>(&self.lay, &self.grid, x);
        let p = if self.scheme == Scheme::CrankNicolson { p.scale(0.5) } else { p };
        (State { u, q: q.reproject() }, p)
    }

    pub(crate) fn forcing_modes(&self, f: &VectorField, g: &TensorField) -> ForcingModes {
        ForcingModes::new(&self.lay, f, g)
    }

    /// Advance mode unknowns one step with an effective forcing for the step
    /// (left-endpoint value for backward Euler, the endpoint average for
    /// Crank–Nicolson).
    pub(crate) fn step(&self, x: &mut [Vec<Complex64>], forcing: Option<&ForcingModes>) {
        let lay = &self.lay;
        let (shift, fscale) = match self.scheme {
            Scheme::BackwardEuler => (1.0 / self.dt, 1.0),
            Scheme::CrankNicolson => (2.0 / self.dt, 2.0),
        };
        let updated: Vec<(usize, Vec<Complex64>)> = self
            .modes
            .par_iter()
            .map(|ms| {
                let xc = &x[ms.column];
                let mut b: Vec<Complex64> = apply_e(&ms.roles, xc).into_iter().map(|v| v * shift).collect();
                if let Some(k) = &ms.k {
                    let mut xz = xc.clone();
                    for j in 0..lay.m {
                        xz[lay.var(j, lay.p())] = Complex64::default();
                    }
                    let kx = k.matvec(&xz);
                    for (bi, (role, kv)) in b.iter_mut().zip(ms.roles.iter().zip(kx)) {
                        if let RowRole::Dynamic(_) = role {
                            *bi -= kv;
                        }
                    }
                }
                if let Some(fm) = forcing {
                    let (fc, gc) = fm.column(lay, ms.column);
                    for (bi, v) in b.iter_mut().zip(rhs(lay, ms.kind, &fc, &gc)) {
                        *bi += v * fscale;
                    }
                }
                ms.lu.solve_in_place(&mut b);
                (ms.column, b)
            })
            .collect();
        for (c, v) in updated {
            let cc = self.grid.conjugate_column(c);
            if cc != c {
                x[cc] = v.iter().map(|z| z.conj()).collect();
            }
            x[c] = v;
        }
    }
}

/// What the caller supplies for the step starting at `t_n`.
pub(crate) enum StepInput {
    Free,
    Forced(VectorField, TensorField),
    Halt,
}

/// Run `n_steps` steps from `u0`, storing every `store_every`-th state and the last.
/// `input(n, t_n, U^n)` gives the step's forcing; `U^n` is built only if asked for.
pub(crate) fn drive(
    stepper: &LinearStepper,
    u0: &State,
    n_steps: usize,
    store_every: usize,
    input: &mut dyn FnMut(usize, f64, &dyn Fn() -> State) -> Result<StepInput>,
) -> Result<(Trajectory, bool)> {
    let store_every = store_every.max(1);
    let mut x = stepper.to_modes(u0);
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![u0.clone()],
        pressure: vec![ScalarField::zeros(&stepper.grid)],
        records: Vec::new(),
    };
    let mut halted = false;
    for n in 0..n_steps {
        let t = n as f64 * stepper.dt;
        let snapshot = || stepper.to_fields(&x).0;
        let forcing = match input(n, t, &snapshot)? {
            StepInput::Halt => {
                halted = true;
                break;
            }
            StepInput::Free => None,
            StepInput::Forced(f, g) => Some(stepper.forcing_modes(&f, &g)),
        };
        stepper.step(&mut x, forcing.as_ref());
        if (n + 1) % store_every == 0 || n + 1 == n_steps {
            let (s, p) = stepper.to_fields(&x);
            traj.times.push((n + 1) as f64 * stepper.dt);
            traj.states.push(s);
            traj.pressure.push(p);
        }
    }
    Ok((traj, halted))
}

/// Forcing `(f, G)` as a function of time.
pub type Forcing<'a> = dyn Fn(f64) -> (VectorField, TensorField) + Sync + 'a;

/// Implicit evolution of the linear coupled system from `u0` to `horizon`.
///
/// Backward Euler takes the forcing at the left end of each step, so a
/// forcing built from a previous iterate gives the same discrete scheme as
/// the semi-implicit nonlinear run. Crank–Nicolson averages both ends.
pub fn linear_evolve(
    u0: &State,
    forcing: Option<&Forcing>,
    params: &ModelParams,
    horizon: f64,
    dt: f64,
    scheme: Scheme,
    store_every: usize,
) -> Result<Trajectory> {
    let grid = *u0.grid();
    let stepper = LinearStepper::new(&grid, params, dt, scheme)?;
    evolve_with(&stepper, u0, forcing, horizon, store_every)
}

/// [`linear_evolve`] with a prebuilt stepper.
pub fn evolve_with(
    stepper: &LinearStepper,
    u0: &State,
    forcing: Option<&Forcing>,
    horizon: f64,
    store_every: usize,
) -> Result<Trajectory> {
    let dt = stepper.dt();
    let n_steps = steps_for(horizon, dt)?;
    let scheme = stepper.scheme();
    let mut input = |_n: usize, t: f64, _u: &dyn Fn() -> State| -> Result<StepInput> {
        Ok(match forcing {
            None => StepInput::Free,
            Some(f) => {
                let (fv, gv) = f(t);
                if scheme == Scheme::CrankNicolson {
                    let (fv2, gv2) = f(t + dt);
                    StepInput::Forced(fv.add(&fv2).scale(0.5), gv.add(&gv2).scale(0.5))
                } else {
                    StepInput::Forced(fv, gv)
                }
            }
        })
    };
    let (mut traj, _) = drive(stepper, u0, n_steps, store_every, &mut input)?;
    traj.fill_records()?;
    Ok(traj)
}

pub(crate) fn steps_for(horizon: f64, dt: f64) -> Result<usize> {
    if !(horizon.is_finite() && horizon > 0.0 && dt > 0.0) {
        return Err(Error::InvalidInput(format!("horizon {horizon} and dt {dt} must be positive")));
    }
    let n = (horizon / dt).round();
    if (n * dt - horizon).abs() > 1e-9 * horizon {
        return Err(Error::InvalidInput(format!("horizon {horizon} is not a multiple of dt {dt}")));
    }
    Ok(n as usize)
}
