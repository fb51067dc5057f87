use qthalf_core::driver::{exponent_setup, simulate, small_data, weighted_norm_e, DiagnosticRow, SimulateOptions};
use qthalf_core::fields::{Components, Snapshot};

use crate::config::RunConfig;
use crate::report::{Metric, Report, Series};
use crate::{CliError, Context};

const SOURCE: &str = "qthalf_core::driver::simulate";

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.model_params()?;
    let grid = config.grid()?;
    let cfg = &config.simulate;
    let tol = &config.tolerances;
    let scheme = exponent_setup(params.n, config.scheme.theta, config.scheme.p_margin).context(|| "simulate: exponents".into())?;
    let u0 = small_data(&grid, &scheme, cfg.data_size).context(|| "simulate: initial data".into())?;
    let opts = SimulateOptions { store_every: cfg.store_every, ..Default::default() };
    let sim = simulate(&u0, &params, cfg.horizon, cfg.dt, &opts).context(|| "simulate: stepping".into())?;

    let header: Vec<&str> = DiagnosticRow::HEADER.split(',').collect();
    let mut series = Series::new("diagnostics", &header);
    for row in &sim.diagnostics {
        series.push(row.values().to_vec());
    }
    let rows = &sim.diagnostics;
    let e0 = rows.first().map_or(0.0, |r| r.energy);
    let rise = rows.windows(2).map(|w| w[1].energy - w[0].energy).fold(0.0f64, f64::max);
    let worst = |f: fn(&DiagnosticRow) -> f64| rows.iter().map(f).fold(0.0f64, f64::max);
    let size = weighted_norm_e(&sim.trajectory, &scheme).context(|| "simulate: solution norm".into())?.total;
    let metrics = vec![
        Metric::at_most("solution_norm", size, tol.solution_size, "qthalf_core::driver::weighted_norm_e"),
        Metric::at_most("energy_increase", rise, cfg.dt * tol.energy_slack * e0.max(f64::MIN_POSITIVE), SOURCE),
        Metric::at_most("q_asymmetry", worst(|r| r.asymmetry), tol.field_invariant, SOURCE),
        Metric::at_most("q_trace", worst(|r| r.trace), tol.field_invariant, SOURCE),
        Metric::at_most("wall_velocity", worst(|r| r.wall_velocity), 0.0, SOURCE),
        Metric::at_most("divergence", worst(|r| r.divergence), tol.divergence, SOURCE),
        Metric::at_most("blowup", f64::from(u8::from(sim.blowup.is_some())), 0.0, SOURCE),
    ];

    let last = sim.trajectory.states.last().expect("at least the initial state");
    let mut comps: Vec<_> = last.u.components().iter().collect();
    comps.extend(last.q.components().iter());
    let snapshot = Snapshot::from_fields(&comps).context(|| "simulate: snapshot".into())?;
    let mut bytes = Vec::new();
    snapshot.write_to(&mut bytes).expect("writing to memory");
    let mut report = Report::new(config, metrics, vec![series]);
    report.attachments.push(("final_state.qth".into(), bytes));
    Ok(report)
}
