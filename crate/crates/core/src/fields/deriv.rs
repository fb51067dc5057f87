//! Derivatives: spectral tangentially, second-order finite differences in `x_N`.

use num_complex::Complex64;

use super::field::{Scalar, ScalarField, TensorField, VectorField};
use super::grid::Grid;
use super::spectral;
use crate::error::{Error, Result};

/// Wall-normal stencils. Row `j` of the operator is `Σ_k w_k f[j + k]`.
pub mod stencil {
    /// Entries `(offset, weight)` of the first-derivative row at wall index `j`
    /// out of `m` points, spacing `h`.
    pub fn first(j: usize, m: usize, h: f64) -> [(isize, f64); 3] {
        let s = 1.0 / (2.0 * h);
        if j == 0 {
            [(0, -3.0 * s), (1, 4.0 * s), (2, -s)]
        } else if j == m - 1 {
            [(0, 3.0 * s), (-1, -4.0 * s), (-2, s)]
        } else {
            [(-1, -s), (0, 0.0), (1, s)]
        }
    }

    /// Second-derivative row; four-point one-sided at the walls.
    pub fn second(j: usize, m: usize, h: f64) -> [(isize, f64); 4] {
        let s = 1.0 / (h * h);
        if j == 0 {
            [(0, 2.0 * s), (1, -5.0 * s), (2, 4.0 * s), (3, -s)]
        } else if j == m - 1 {
            [(0, 2.0 * s), (-1, -5.0 * s), (-2, 4.0 * s), (-3, -s)]
        } else {
            [(-1, s), (0, -2.0 * s), (1, s), (0, 0.0)]
        }
    }
}

fn wall_normal<T: Scalar>(f: &ScalarField<T>, order: usize) -> ScalarField<T> {
    let g = *f.grid();
    let m = g.n_wall();
    let h = g.dy();
    let src = f.data();
    let mut out = vec![T::default(); src.len()];
    for c in 0..g.n_columns() {
        let col = &src[g.index(c, 0)..g.index(c, 0) + m];
        let dst = &mut out[g.index(c, 0)..g.index(c, 0) + m];
        for (j, d) in dst.iter_mut().enumerate() {
            let mut acc = T::default();
            let mut add = |off: isize, w: f64| {
                if w != 0.0 {
                    acc += col[(j as isize + off) as usize] * w;
                }
            };
            if order == 1 {
                stencil::first(j, m, h).iter().for_each(|&(o, w)| add(o, w));
            } else {
                stencil::second(j, m, h).iter().for_each(|&(o, w)| add(o, w));
            }
            *d = acc;
        }
    }
    ScalarField::from_vec(&g, out).expect("same grid")
}

/// Multiply tangential Fourier modes by `Π_l (i k_l)^{orders[l]}`; Nyquist bins are zeroed.
fn tangential<T: Scalar>(f: &ScalarField<T>, orders: [usize; 2]) -> ScalarField<T> {
    let g = *f.grid();
    let mut modes = spectral::to_modes(f);
    for c in 0..g.n_columns() {
        let (k, nyq) = g.wavevector(c);
        let mut sym = Complex64::new(1.0, 0.0);
        for l in 0..g.dim() - 1 {
            for _ in 0..orders[l] {
                sym *= Complex64::new(0.0, k[l]);
            }
        }
        if nyq && orders.iter().any(|&o| o > 0) {
            sym = Complex64::default();
        }
        for j in 0..g.n_wall() {
            modes[g.index(c, j)] *= sym;
        }
    }
    spectral::from_modes(&g, modes)
}

/// `∂^order f / ∂x_axis^order` for `order ∈ {1, 2}`; `axis = N−1` is wall-normal.
pub fn diff<T: Scalar>(f: &ScalarField<T>, axis: usize, order: usize) -> Result<ScalarField<T>> {
    let g = f.grid();
    if order == 0 || order > 2 {
        return Err(Error::UnsupportedOrder(order));
    }
    if axis >= g.dim() {
        return Err(Error::InvalidInput(format!("axis {axis} out of range for N = {}", g.dim())));
    }
    Ok(if axis == g.dim() - 1 {
        wall_normal(f, order)
    } else {
        let mut o = [0; 2];
        o[axis] = order;
        tangential(f, o)
    })
}

/// Mixed derivative `∂^α f` for a multi-index given as a list of axes
/// (repetition allowed). The tangential part is applied in one spectral
/// pass; wall-normal powers use `D2` and `D∘D2`.
pub fn partial<T: Scalar>(f: &ScalarField<T>, axes: &[usize]) -> ScalarField<T> {
    let g = f.grid();
    let n = g.dim();
    let mut tan = [0usize; 2];
    let mut normal = 0;
    for &a in axes {
        assert!(a < n, "axis {a} out of range");
        if a == n - 1 {
            normal += 1;
        } else {
            tan[a] += 1;
        }
    }
    let mut out = if tan.iter().any(|&o| o > 0) { tangential(f, tan) } else { f.clone() };
    match normal {
        0 => {}
        1 => out = wall_normal(&out, 1),
        _ => {
            let mut left = normal;
            while left >= 2 {
                out = wall_normal(&out, 2);
                left -= 2;
            }
            if left == 1 {
                out = wall_normal(&out, 1);
            }
        }
    }
    out
}

/// `∂_j f` for `j = 0..N`.
pub fn grad<T: Scalar>(f: &ScalarField<T>) -> Vec<ScalarField<T>> {
    (0..f.grid().dim()).map(|a| partial(f, &[a])).collect()
}

pub fn laplacian<T: Scalar>(f: &ScalarField<T>) -> ScalarField<T> {
    let n = f.grid().dim();
    let mut out = partial(f, &[0, 0]);
    for a in 1..n {
        out = &out + &partial(f, &[a, a]);
    }
    out
}

pub fn vector_laplacian<T: Scalar>(u: &VectorField<T>) -> VectorField<T> {
    VectorField::from_components((0..u.dim()).map(|i| laplacian(u.comp(i))).collect())
        .expect("components share a grid")
}

pub fn tensor_laplacian<T: Scalar>(q: &TensorField<T>) -> TensorField<T> {
    let n = q.dim();
    let comps = (0..n * n).map(|c| laplacian(q.comp(c / n, c % n))).collect();
    TensorField::from_components_unchecked(comps)
}

/// `div u = Σ_j ∂_j u_j`.
pub fn divergence<T: Scalar>(u: &VectorField<T>) -> ScalarField<T> {
    let mut out = partial(u.comp(0), &[0]);
    for a in 1..u.dim() {
        out = &out + &partial(u.comp(a), &[a]);
    }
    out
}

/// Row-wise divergence of a matrix field given as `N²` components, row-major:
/// `(Div A)_i = Σ_j ∂_j A_ij`.
pub fn row_divergence<T: Scalar>(grid: &Grid, a: &[ScalarField<T>]) -> VectorField<T> {
    let n = grid.dim();
    assert_eq!(a.len(), n * n);
    let comps = (0..n)
        .map(|i| {
            let mut acc = partial(&a[i * n], &[0]);
            for j in 1..n {
                acc = &acc + &partial(&a[i * n + j], &[j]);
            }
            acc
        })
        .collect();
    VectorField::from_components(comps).expect("components share a grid")
}

/// Jacobian components `[i*N + j] = ∂_j u_i`.
pub fn jacobian<T: Scalar>(u: &VectorField<T>) -> Vec<ScalarField<T>> {
    let n = u.dim();
    (0..n * n).map(|c| partial(u.comp(c / n), &[c % n])).collect()
}

/// Multi-indices of order `s` in `n` variables, as axis lists with their
/// multinomial multiplicity `s!/α!` (the number of ordered index tuples
/// collapsing onto them).
pub fn multi_indices(n: usize, s: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(n: usize, s: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            rec(n, s, a, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(n, s, 0, &mut Vec::new(), &mut all);
    let fact = |k: usize| (1..=k).product::<usize>() as f64;
    all.into_iter()
        .map(|idx| {
            let mut denom = 1.0;
            for a in 0..n {
                denom *= fact(idx.iter().filter(|&&b| b == a).count());
            }
            let w = fact(s) / denom;
            (idx, w)
        })
        .collect()
}
