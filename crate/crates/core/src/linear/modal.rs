//! Conversion between grid fields and per-mode unknown vectors.

use num_complex::Complex64;

use super::mode::Layout;
use crate::fields::{spectral, Grid, Scalar, ScalarField, TensorField, VectorField};

/// Mode coefficients of a forcing pair, per component in grid layout.
pub(crate) struct ForcingModes {
    pub f: Vec<Vec<Complex64>>,
    pub g: Vec<Vec<Complex64>>,
}

impl ForcingModes {
    pub fn new<T: Scalar>(lay: &Layout, f: &VectorField<T>, g: &TensorField<T>) -> Self {
        ForcingModes {
            f: (0..lay.n).map(|i| spectral::to_modes(f.comp(i))).collect(),
            g: lay.pairs.iter().map(|&(a, b)| spectral::to_modes(g.comp(a, b))).collect(),
        }
    }

    pub fn column(&self, lay: &Layout, column: usize) -> (Vec<&[Complex64]>, Vec<&[Complex64]>) {
        let r = column * lay.m..(column + 1) * lay.m;
        (
            self.f.iter().map(|v| &v[r.clone()]).collect(),
            self.g.iter().map(|v| &v[r.clone()]).collect(),
        )
    }
}

/// Interleave `u`, independent `Q` entries and `p` (zero if absent) per mode.
pub(crate) fn state_to_modes<T: Scalar>(
    lay: &Layout,
    grid: &Grid,
    u: &VectorField<T>,
    q: &TensorField<T>,
) -> Vec<Vec<Complex64>> {
    let mut comps: Vec<Vec<Complex64>> = (0..lay.n).map(|i| spectral::to_modes(u.comp(i))).collect();
    comps.extend(lay.pairs.iter().map(|&(a, b)| spectral::to_modes(q.comp(a, b))));
    let m = lay.m;
    (0..grid.n_columns())
        .map(|c| {
            let mut x = vec![Complex64::default(); lay.len()];
            for (v, comp) in comps.iter().enumerate() {
                for j in 0..m {
                    x[lay.var(j, v)] = comp[c * m + j];
                }
            }
            x
        })
        .collect()
}

/// Inverse of [`state_to_modes`], also returning the pressure.
pub(crate) fn modes_to_fields<T: Scalar>(
    lay: &Layout,
    grid: &Grid,
    x: &[Vec<Complex64>],
) -> (VectorField<T>, TensorField<T>, ScalarField<T>) {
    let m = lay.m;
    let comp = |v: usize| -> ScalarField<T> {
        let mut data = vec![Complex64::default(); grid.len()];
        for (c, xc) in x.iter().enumerate() {
            for j in 0..m {
                data[c * m + j] = xc[lay.var(j, v)];
            }
            if v < lay.n {
                // wall velocity is constrained to zero; drop pivoting round-off
                data[c * m] = Complex64::default();
                data[c * m + m - 1] = Complex64::default();
            }
        }
        spectral::from_modes(grid, data)
    };
    let u = VectorField::from_components((0..lay.n).map(comp).collect()).expect("same grid");
    let indep: Vec<ScalarField<T>> = (0..lay.nq).map(|c| comp(lay.n + c)).collect();
    let n = lay.n;
    let qcomps = (0..n * n)
        .map(|idx| {
            let mut acc = ScalarField::zeros(grid);
            for (c, s) in lay.q_expand(idx / n, idx % n) {
                acc.axpy(T::from_f64(s), &indep[c]);
            }
            acc
        })
        .collect();
    let q = TensorField::from_components_unchecked(qcomps);
    (u, q, comp(lay.p()))
}
