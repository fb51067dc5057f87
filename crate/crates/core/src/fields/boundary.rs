//! Wall conditions `u = 0`, `∂_N Q = 0` at `x_N = 0` and at the artificial top.

use super::field::{Components, Scalar, ScalarField, State};
use super::grid::Grid;

fn zero_walls<T: Scalar>(f: &mut ScalarField<T>) {
    let g = *f.grid();
    let m = g.n_wall();
    let data = f.data_mut();
    for c in 0..g.n_columns() {
        data[g.index(c, 0)] = T::default();
        data[g.index(c, m - 1)] = T::default();
    }
}

/// Set wall values so the one-sided first-derivative stencil vanishes.
fn neumann_walls<T: Scalar>(f: &mut ScalarField<T>) {
    let g = *f.grid();
    let m = g.n_wall();
    let data = f.data_mut();
    for c in 0..g.n_columns() {
        let i = |j| g.index(c, j);
        data[i(0)] = (data[i(1)] * 4.0 - data[i(2)]) * (1.0 / 3.0);
        data[i(m - 1)] = (data[i(m - 2)] * 4.0 - data[i(m - 3)]) * (1.0 / 3.0);
    }
}

/// Enforce the wall conditions on a state. Only wall rows change, and they
/// are computed from interior rows, so the map is idempotent.
pub fn apply_boundary<T: Scalar>(state: &State<T>) -> State<T> {
    let mut out = state.clone();
    for i in 0..out.u.dim() {
        zero_walls(out.u.comp_mut(i));
    }
    let n = out.q.dim();
    let mut comps: Vec<ScalarField<T>> = out.q.components().to_vec();
    for c in comps.iter_mut().take(n * n) {
        neumann_walls(c);
    }
    out.q = super::field::TensorField::from_components_unchecked(comps);
    out
}

/// Largest `|u|` on either wall.
pub fn wall_velocity<T: Scalar>(state: &State<T>) -> f64 {
    let g: Grid = *state.grid();
    let m = g.n_wall();
    let mut worst = 0.0f64;
    for u in state.u.components() {
        for c in 0..g.n_columns() {
            worst = worst.max(u.at(c, 0).modulus()).max(u.at(c, m - 1).modulus());
        }
    }
    worst
}

/// Largest one-sided `|∂_N Q|` on either wall.
pub fn wall_normal_q_derivative<T: Scalar>(state: &State<T>) -> f64 {
    let g: Grid = *state.grid();
    let m = g.n_wall();
    let h = g.dy();
    let mut worst = 0.0f64;
    for q in state.q.components() {
        for c in 0..g.n_columns() {
            let bottom = (q.at(c, 1) * 4.0 - q.at(c, 0) * 3.0 - q.at(c, 2)) * (0.5 / h);
            let top = (q.at(c, m - 1) * 3.0 - q.at(c, m - 2) * 4.0 + q.at(c, m - 3)) * (0.5 / h);
            worst = worst.max(bottom.modulus()).max(top.modulus());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field::{TensorField, VectorField};
    use crate::tensor::MatrixN;

    fn sample() -> State {
        let g = Grid::new(2, 8, 2.0, 12, 1.0).unwrap();
        State {
            u: VectorField::from_fn(&g, |x| [1.0 + x[1], x[0].sin(), 0.0]),
            q: TensorField::from_fn(&g, |x| {
                MatrixN::from_rows(&[&[x[1].exp(), x[0].cos()], &[x[0].cos(), -x[1].exp()]])
            }),
        }
    }

    #[test]
    fn walls_enforced() {
        let s = apply_boundary(&sample());
        assert_eq!(wall_velocity(&s), 0.0);
        assert!(wall_normal_q_derivative(&s) <= 1e-10 * s.q.max_abs());
    }

    #[test]
    fn idempotent() {
        let once = apply_boundary(&sample());
        let twice = apply_boundary(&once);
        assert_eq!(once, twice);
    }
}
