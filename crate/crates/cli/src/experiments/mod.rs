mod decay;
mod gn;
mod invariants;
mod picard;
mod resolvent;
mod simulate;

use qthalf_core::fields::{partial, Grid, ScalarField, State, TensorField, VectorField};

use crate::config::{Kind, RunConfig};
use crate::report::Report;
use crate::CliError;

pub fn run_experiment(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    match config.run.kind {
        Kind::Invariants => invariants::run(config),
        Kind::ResolventSweep => resolvent::run(config),
        Kind::DecayFit => decay::run(config),
        Kind::GnCheck => gn::run(config),
        Kind::Picard => picard::run(config),
        Kind::Simulate => simulate::run(config),
    }
}

/// Velocity-only data: curl of `s · φ((x − L/2)/s, x_N/s)` with
/// `φ(ξ, η) = η² exp(−|ξ|² − (η − 1.5)²)`, a dilation about a wall point.
pub(crate) fn wall_dilation(grid: &Grid, s: f64) -> State {
    let n = grid.dim();
    let mid = 0.5 * grid.l_tan();
    let psi = ScalarField::from_fn(grid, |x| {
        let eta = x[n - 1] / s;
        let mut r2 = (eta - 1.5).powi(2);
        for a in 0..n - 1 {
            r2 += ((x[a] - mid) / s).powi(2);
        }
        s * eta * eta * (-r2).exp()
    });
    let mut comps = vec![ScalarField::zeros(grid); n];
    comps[0] = partial(&psi, &[n - 1]);
    comps[n - 1] = partial(&psi, &[0]).scale(-1.0);
    State { u: VectorField::from_components(comps).expect("common grid"), q: TensorField::zeros(grid) }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `n` log-spaced points from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = logspace(0.1, 100.0, 7);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-0.75)).collect();
        assert!((loglog_slope(&x, &y) + 0.75).abs() < 1e-12);
        assert!((x[6] - 100.0).abs() < 1e-12);
    }
}
