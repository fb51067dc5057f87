use super::exponents::ExponentScheme;
use crate::error::{Error, Result};
use crate::fields::{apply_boundary, lebesgue_norm, partial, sobolev_seminorm, Grid, ScalarField, State, TensorField, VectorField};
use crate::tensor::MatrixN;

/// Computable stand-in for the initial-data size: the trace-space norms are
/// replaced by their integer-order endpoints,
/// `Σ_{i=1,2} (‖u‖ + ‖∇²u‖ + ‖∇Q‖ + ‖∇³Q‖)_{q_i} + (‖u‖ + ‖∇Q‖)_{q0}`.
pub fn surrogate_norm(state: &State, scheme: &ExponentScheme) -> f64 {
    let (u, q) = (&state.u, &state.q);
    let mut total = lebesgue_norm(u, scheme.q0) + sobolev_seminorm(q, scheme.q0, 1);
    for r in scheme.solution_exponents() {
        total += lebesgue_norm(u, r) + sobolev_seminorm(u, r, 2) + sobolev_seminorm(q, r, 1) + sobolev_seminorm(q, r, 3);
    }
    total
}

/// `exp(1 − 1/(1 − r²))` on the unit ball, zero outside; peak value 1.
fn bump(r2: f64) -> f64 {
    if r2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    }
}

fn ball(grid: &Grid, centre_frac: f64, shift: f64) -> impl Fn([f64; 3]) -> f64 {
    let n = grid.dim();
    let l = grid.l_tan();
    let h = grid.h_wall();
    let radius = (0.3 * h).min(0.3 * l);
    let centre_y = centre_frac * h;
    move |x: [f64; 3]| {
        let mut r2 = ((x[n - 1] - centre_y) / radius).powi(2);
        for a in 0..n - 1 {
            r2 += ((x[a] - 0.5 * l - shift) / radius).powi(2);
        }
        bump(r2)
    }
}

/// Unit-amplitude smooth data supported away from both walls: velocity as the
/// discrete curl of a bump stream function (divergence-free to round-off),
/// `Q` a fixed symmetric traceless pattern times a bump.
pub fn bump_state(grid: &Grid) -> State {
    let n = grid.dim();
    let psi = ScalarField::from_fn(grid, ball(grid, 0.45, 0.0));
    let mut comps = vec![ScalarField::zeros(grid); n];
    comps[0] = partial(&psi, &[n - 1]);
    comps[n - 1] = partial(&psi, &[0]).scale(-1.0);
    let u = VectorField::from_components(comps).expect("common grid");
    let pattern = MatrixN::from_fn(n, |i, j| {
        if i == j {
            if i == n - 1 {
                -(n as f64 - 1.0) * 0.5
            } else {
                0.5
            }
        } else {
            0.3 / (1 + i + j) as f64
        }
    });
    let qb = ball(grid, 0.5, 0.1 * grid.l_tan());
    let q = TensorField::from_fn(grid, |x| pattern.scale(qb(x)));
    apply_boundary(&State { u, q })
}

/// [`bump_state`] scaled to a prescribed surrogate norm.
pub fn small_data(grid: &Grid, scheme: &ExponentScheme, target: f64) -> Result<State> {
    if grid.dim() != scheme.n {
        return Err(Error::InvalidInput(format!("grid dimension {} vs scheme {}", grid.dim(), scheme.n)));
    }
    if !(target >= 0.0 && target.is_finite()) {
        return Err(Error::InvalidInput(format!("target size {target} must be finite and non-negative")));
    }
    let unit = bump_state(grid);
    Ok(unit.scale(target / surrogate_norm(&unit, scheme)))
}
