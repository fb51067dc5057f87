use std::f64::consts::PI;

use rayon::prelude::*;

use qthalf_core::driver::kappa;
use qthalf_core::fields::{lebesgue_norm, sobolev_seminorm, Grid};
use qthalf_core::linear::{evolve_with, LinearStepper, Scheme};

use super::{logspace, loglog_slope, wall_dilation};
use crate::config::RunConfig;
use crate::report::{Metric, Report, Series};
use crate::{CliError, Context};

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.model_params()?;
    let d = &config.decay;
    let r = &config.resolvent;
    let grid = Grid::new(params.n, d.n_tan, d.l_tan, d.n_wall, d.h_wall).context(|| "decay-fit: grid".into())?;
    let t_end = if d.t_end > 0.0 { d.t_end } else { 0.1 * (d.l_tan / (2.0 * PI)).powi(2) };
    if t_end <= d.t_start {
        return Err(CliError::Config(vec![format!(
            "decay window [{}, {t_end}] is empty; enlarge decay.l_tan or set decay.t_end",
            d.t_start
        )]));
    }
    // fit stamps on the step lattice
    let mut stamps: Vec<usize> =
        logspace(d.t_start, t_end, d.n_fit).iter().map(|t| (t / d.dt).round().max(1.0) as usize).collect();
    stamps.dedup();
    let stepper = LinearStepper::new(&grid, &params, d.dt, Scheme::CrankNicolson).context(|| "decay-fit: stepper".into())?;
    let q = r.q;

    let curves: Vec<Vec<f64>> = d
        .widths
        .par_iter()
        .map(|&s| {
            let mut state = wall_dilation(&grid, s);
            let norm0 = lebesgue_norm(&state.u, r.q_tilde);
            let mut at = 0usize;
            let mut out = Vec::with_capacity(stamps.len());
            for &k in &stamps {
                if k > at {
                    let traj = evolve_with(&stepper, &state, None, (k - at) as f64 * d.dt, usize::MAX)
                        .context(|| format!("decay-fit: width {s}"))?;
                    state = traj.states.into_iter().last().expect("final state");
                    at = k;
                }
                out.push((lebesgue_norm(&state.u, q) + sobolev_seminorm(&state.q, q, 1)) / norm0);
            }
            Ok(out)
        })
        .collect::<Result<_, CliError>>()?;

    let times: Vec<f64> = stamps.iter().map(|&k| k as f64 * d.dt).collect();
    let mut header = vec!["t".to_string(), "sup_ratio".to_string()];
    header.extend(d.widths.iter().map(|w| format!("width_{w}")));
    let mut series = Series { name: "decay".into(), header, rows: Vec::new() };
    let mut best = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let row: Vec<f64> = curves.iter().map(|c| c[i]).collect();
        let b = row.iter().fold(0.0f64, |m, &v| m.max(v));
        best.push(b);
        let mut full = vec![t, b];
        full.extend(row);
        series.push(full);
    }
    let target = -kappa(params.n, r.q_tilde, q) / 2.0;
    let metrics = vec![Metric::within(
        "decay_slope",
        loglog_slope(&times, &best),
        target,
        config.tolerances.decay_slope,
        "qthalf_core::linear::evolve_with",
    )];
    Ok(Report::new(config, metrics, vec![series]))
}
