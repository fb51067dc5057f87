//! Tangential FFTs over the columns of a grid function.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{Scalar, ScalarField};
use super::grid::Grid;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        p.borrow_mut()
            .entry((n, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

/// In-place transform of complex data in grid layout along every tangential
/// axis. The inverse includes the `1/n` normalization.
pub(crate) fn transform(grid: &Grid, data: &mut [Complex64], inverse: bool) {
    let n = grid.n_tan();
    let m = grid.n_wall();
    let fft = plan(n, inverse);
    let mut line = vec![Complex64::default(); n];
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    // stride (in columns) between successive points along each tangential axis
    let strides: Vec<usize> = if grid.dim() == 2 { vec![1] } else { vec![n, 1] };
    let n_cols = grid.n_columns();
    for &stride in &strides {
        for base in 0..n_cols {
            // base must be the first column of its line along this axis
            if (base / stride) % n != 0 {
                continue;
            }
            for j in 0..m {
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[grid.index(base + i * stride, j)];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[grid.index(base + i * stride, j)] = *v;
                }
            }
        }
    }
    if inverse {
        let s = 1.0 / n_cols as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

/// Tangential Fourier coefficients; entry `column*n_wall + j` is mode `column`
/// at wall index `j`.
pub fn to_modes<T: Scalar>(f: &ScalarField<T>) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = f.data().iter().map(|v| v.to_c64()).collect();
    transform(f.grid(), &mut data, false);
    data
}

/// Inverse of [`to_modes`]. For real `T` the imaginary part is discarded.
pub fn from_modes<T: Scalar>(grid: &Grid, mut modes: Vec<Complex64>) -> ScalarField<T> {
    transform(grid, &mut modes, true);
    let data = modes.into_iter().map(T::from_c64).collect();
    ScalarField::from_vec(grid, data).expect("mode vector has grid length")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for g in [Grid::new(2, 16, 2.0, 9, 1.0).unwrap(), Grid::new(3, 8, 2.0, 9, 1.0).unwrap()] {
            let f = ScalarField::from_fn(&g, |x| (x[0] * 3.0).sin() + x[1] * x[1] + (x[2] * 2.0).cos());
            let back: ScalarField<f64> = from_modes(&g, to_modes(&f));
            assert!((&back - &f).max_abs() < 1e-13);
        }
    }

    #[test]
    fn single_mode_lands_in_its_bin() {
        let g = Grid::new(3, 8, 8.0, 8, 1.0).unwrap();
        // wavenumber index (1, 2) in (x1, x2)
        let base = 2.0 * std::f64::consts::PI / 8.0;
        let f = ScalarField::from_fn(&g, |x| Complex64::new(0.0, base * (x[0] + 2.0 * x[1])).exp());
        let modes = to_modes(&f);
        let column = 8 + 2;
        for c in 0..g.n_columns() {
            let v = modes[g.index(c, 0)].norm();
            if c == column {
                assert!((v - 64.0).abs() < 1e-10);
            } else {
                assert!(v < 1e-10);
            }
        }
    }
}
