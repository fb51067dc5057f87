use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use qthalf_core::driver::{bump_state, kappa};
use qthalf_core::fields::{lebesgue_norm, sobolev_seminorm, Grid, State};
use qthalf_core::linear::{resolvent_solve, ResolventSolution, Sector};
use qthalf_core::tensor::ModelParams;

use super::{logspace, loglog_slope, wall_dilation};
use crate::config::RunConfig;
use crate::report::{Metric, Report, Series};
use crate::{CliError, Context};

const SOURCE: &str = "qthalf_core::linear::resolvent_solve";

struct Solver<'a> {
    params: &'a ModelParams,
    sector: Sector,
}

impl Solver<'_> {
    fn solve(&self, lam: Complex64, data: &State) -> Result<ResolventSolution, CliError> {
        resolvent_solve(lam, &data.u, &data.q, self.params, &self.sector)
            .context(|| format!("resolvent-sweep: lambda = {lam}"))
    }
}

/// `|λ|‖u‖ + |λ|^{1/2}‖∇u‖ + ‖∇²u‖ + |λ|‖∇Q‖ + |λ|^{1/2}‖∇²Q‖ + ‖∇³Q‖ + ‖∇p‖` in `L_q`.
fn bound_lhs(s: &ResolventSolution, m: f64, q: f64) -> f64 {
    m * lebesgue_norm(&s.u, q)
        + m.sqrt() * sobolev_seminorm(&s.u, q, 1)
        + sobolev_seminorm(&s.u, q, 2)
        + m * sobolev_seminorm(&s.q, q, 1)
        + m.sqrt() * sobolev_seminorm(&s.q, q, 2)
        + sobolev_seminorm(&s.q, q, 3)
        + sobolev_seminorm(&s.p, q, 1)
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.model_params()?;
    let r = &config.resolvent;
    let tol = &config.tolerances;
    let grid = Grid::new(params.n, r.n_tan, r.l_tan, r.n_wall, r.h_wall).context(|| "resolvent-sweep: grid".into())?;
    let sector = Sector::new(r.epsilon, &params).context(|| "resolvent-sweep: sector".into())?;
    let solver = Solver { params: &params, sector };
    let q = r.q;
    let opening = PI - r.epsilon;

    // the bound: one fixed bump, whole range of |λ|
    let data = bump_state(&grid);
    let data_q = lebesgue_norm(&data.u, q) + sobolev_seminorm(&data.q, q, 1);
    // smoothing: velocity-only data dilated about a wall point, sup over widths
    let family: Vec<(State, f64)> = r
        .smoothing_widths
        .iter()
        .map(|&s| {
            let d = wall_dilation(&grid, s);
            let norm = lebesgue_norm(&d.u, r.q_tilde);
            (d, norm)
        })
        .collect();

    let mut bound = Series::new("resolvent_bound", &["arg", "abs_lambda", "ratio"]);
    let mut smoothing = Series::new("smoothing", &["arg", "abs_lambda", "sup_ratio", "best_width"]);
    let mut metrics = Vec::new();
    let smoothing_limit = -(1.0 - kappa(params.n, r.q_tilde, q) / 2.0) + tol.smoothing_slope_slack;

    for &frac in &r.args {
        let arg = frac * opening;
        let radii = logspace(r.lambda_min, r.lambda_max, r.n_lambda);
        let ratios: Vec<f64> = radii
            .par_iter()
            .map(|&m| Ok(bound_lhs(&solver.solve(Complex64::from_polar(m, arg), &data)?, m, q) / data_q))
            .collect::<Result<_, CliError>>()?;
        for (m, v) in radii.iter().zip(&ratios) {
            bound.push(vec![arg, *m, *v]);
        }
        metrics.push(Metric::within(
            &format!("bound_slope_arg_{frac}"),
            loglog_slope(&radii, &ratios),
            0.0,
            tol.resolvent_slope,
            SOURCE,
        ));

        let radii = logspace(r.smoothing_min, r.smoothing_max, r.n_smoothing);
        let jobs: Vec<(usize, usize)> = (0..radii.len()).flat_map(|i| (0..family.len()).map(move |w| (i, w))).collect();
        let values: Vec<f64> = jobs
            .par_iter()
            .map(|&(i, w)| {
                let (d, norm) = &family[w];
                let s = solver.solve(Complex64::from_polar(radii[i], arg), d)?;
                Ok(lebesgue_norm(&s.u, q) / norm)
            })
            .collect::<Result<_, CliError>>()?;
        let mut sups = Vec::with_capacity(radii.len());
        for (i, m) in radii.iter().enumerate() {
            let row = &values[i * family.len()..(i + 1) * family.len()];
            let (w, best) = row.iter().enumerate().fold((0, 0.0f64), |acc, (w, &v)| if v > acc.1 { (w, v) } else { acc });
            smoothing.push(vec![arg, *m, best, r.smoothing_widths[w]]);
            sups.push(best);
        }
        metrics.push(Metric::at_most(
            &format!("smoothing_slope_arg_{frac}"),
            loglog_slope(&radii, &sups),
            smoothing_limit,
            SOURCE,
        ));
    }
    Ok(Report::new(config, metrics, vec![bound, smoothing]))
}
