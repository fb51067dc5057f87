use qthalf_core::driver::{exponent_setup, picard_iterate, small_data, weighted_norm_e, PicardOptions, PicardRun};

use crate::config::RunConfig;
use crate::report::{Metric, Report, Series};
use crate::{CliError, Context};

const SOURCE: &str = "qthalf_core::driver::picard_iterate";

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let params = config.model_params()?;
    let grid = config.grid()?;
    let cfg = &config.picard;
    let tol = &config.tolerances;
    let scheme = exponent_setup(params.n, config.scheme.theta, config.scheme.p_margin).context(|| "picard: exponents".into())?;
    let opts = PicardOptions { k_max: cfg.k_max, tolerance: cfg.tolerance };
    let solve = |size: f64| -> Result<PicardRun, CliError> {
        let u0 = small_data(&grid, &scheme, size).context(|| format!("picard: data of size {size}"))?;
        picard_iterate(&u0, &params, &scheme, cfg.horizon, cfg.dt, &opts).context(|| format!("picard: data of size {size}"))
    };
    let full = solve(cfg.data_size)?;
    let half = solve(0.5 * cfg.data_size)?;

    let mut series = Series::new("picard", &["data_size", "k", "norm", "difference", "delta", "residual"]);
    for (size, run) in [(cfg.data_size, &full), (0.5 * cfg.data_size, &half)] {
        for r in &run.records {
            let opt = |v: Option<f64>| v.unwrap_or(f64::NAN);
            series.push(vec![size, r.k as f64, r.norm, opt(r.difference), opt(r.delta), opt(r.residual)]);
        }
    }
    let max_delta = full.max_delta().unwrap_or(f64::NAN);
    let size = weighted_norm_e(&full.limit, &scheme).context(|| "picard: norm of the limit".into())?.total;
    let metrics = vec![
        Metric::at_most("max_contraction_ratio", max_delta, tol.picard_delta, SOURCE),
        Metric::at_most("final_relative_residual", full.final_residual().unwrap_or(f64::NAN), tol.picard_residual, SOURCE),
        Metric::at_most("solution_norm", size, tol.solution_size, "qthalf_core::driver::weighted_norm_e"),
        Metric::at_most("half_data_max_contraction_ratio", half.max_delta().unwrap_or(f64::NAN), max_delta, SOURCE),
        Metric::at_most("diverged", f64::from(u8::from(full.diverged)), 0.0, SOURCE),
    ];
    Ok(Report::new(config, metrics, vec![series]))
}
