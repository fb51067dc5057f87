//! Per-wavenumber assembly of the coupled (u, Q, p) wall-normal system.
//!
//! Unknowns are interleaved by node: index `j·nv + v` with `v` running over
//! the N velocity components, the independent Q components, then pressure.

use num_complex::Complex64;

use crate::fields::{stencil, Grid};
use crate::linalg::BandMatrix;
use crate::tensor::ModelParams;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Sparse rows of a 1-D operator acting on one wall-normal column.
type Op = Vec<Vec<(usize, Complex64)>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ModeKind {
    Regular,
    /// Tangential wavevector zero: continuity degenerates, pressure needs a gauge.
    Zero,
    /// Touches a Nyquist bin: identity system, solution zero.
    Nyquist,
}

#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub n: usize,
    pub nq: usize,
    pub nv: usize,
    pub m: usize,
    pub h: f64,
    /// Independent Q entries `(a, b)`, `a ≤ b`, excluding `(N−1, N−1)`.
    pub pairs: Vec<(usize, usize)>,
}

impl Layout {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.dim();
        let pairs = if n == 2 { vec![(0, 0), (0, 1)] } else { vec![(0, 0), (1, 1), (0, 1), (0, 2), (1, 2)] };
        let nq = pairs.len();
        Layout { n, nq, nv: n + nq + 1, m: grid.n_wall(), h: grid.dy(), pairs }
    }

    #[inline]
    pub fn var(&self, j: usize, v: usize) -> usize {
        j * self.nv + v
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.n + self.nq
    }

    pub fn len(&self) -> usize {
        self.m * self.nv
    }

    /// `Q_ab` as a combination of independent components.
    pub fn q_expand(&self, a: usize, b: usize) -> Vec<(usize, f64)> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let last = self.n - 1;
        if a == last && b == last {
            // traceless: Q_{N−1,N−1} = −Σ other diagonal entries
            return (0..self.n - 1)
                .map(|d| (self.pairs.iter().position(|&p| p == (d, d)).unwrap(), -1.0))
                .collect();
        }
        vec![(self.pairs.iter().position(|&p| p == (a, b)).unwrap(), 1.0)]
    }

    /// Matrix half-bandwidth: stencils reach three nodes.
    pub fn bandwidth(&self) -> usize {
        4 * self.nv - 1
    }

    pub fn kind(&self, grid: &Grid, column: usize) -> ModeKind {
        let (k, nyq) = grid.wavevector(column);
        if nyq {
            ModeKind::Nyquist
        } else if k[0] == 0.0 && k[1] == 0.0 {
            ModeKind::Zero
        } else {
            ModeKind::Regular
        }
    }

    #[inline]
    pub fn interior(&self, j: usize) -> bool {
        j > 0 && j + 1 < self.m
    }
}

fn stencil_op(m: usize, h: f64, second: bool) -> Op {
    (0..m)
        .map(|j| {
            let taps: Vec<(isize, f64)> =
                if second { stencil::second(j, m, h).to_vec() } else { stencil::first(j, m, h).to_vec() };
            let mut row: Vec<(usize, Complex64)> = Vec::new();
            for (off, w) in taps {
                if w != 0.0 {
                    push(&mut row, (j as isize + off) as usize, Complex64::new(w, 0.0));
                }
            }
            row
        })
        .collect()
}

fn push(row: &mut Vec<(usize, Complex64)>, col: usize, v: Complex64) {
    if let Some(e) = row.iter_mut().find(|e| e.0 == col) {
        e.1 += v;
    } else {
        row.push((col, v));
    }
}

fn diag(m: usize, v: Complex64) -> Op {
    (0..m).map(|j| vec![(j, v)]).collect()
}

fn add(a: &Op, b: &Op) -> Op {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            let mut r = ra.clone();
            for &(c, v) in rb {
                push(&mut r, c, v);
            }
            r
        })
        .collect()
}

fn compose(a: &Op, b: &Op) -> Op {
    a.iter()
        .map(|ra| {
            let mut r = Vec::new();
            for &(k, va) in ra {
                for &(c, vb) in &b[k] {
                    push(&mut r, c, va * vb);
                }
            }
            r
        })
        .collect()
}

/// 1-D operators of one mode.
pub(crate) struct ModeOps {
    /// `∂_a` for each axis (tangential ones are `i k_a`).
    pub dir: Vec<Op>,
    /// `L = ∂_N² − |k|²`.
    pub lap: Op,
    /// `∂_b ∘ (L − a)` for each axis.
    pub div_lm: Vec<Op>,
}

impl ModeOps {
    pub fn new(lay: &Layout, k: [f64; 2], a: f64) -> Self {
        let m = lay.m;
        let d = stencil_op(m, lay.h, false);
        let d2 = stencil_op(m, lay.h, true);
        let k2: f64 = k[..lay.n - 1].iter().map(|v| v * v).sum();
        let lap = add(&d2, &diag(m, Complex64::new(-k2, 0.0)));
        let lm = add(&lap, &diag(m, Complex64::new(-a, 0.0)));
        let dir: Vec<Op> = (0..lay.n)
            .map(|ax| if ax == lay.n - 1 { d.clone() } else { diag(m, Complex64::new(0.0, k[ax])) })
            .collect();
        let div_lm = dir.iter().map(|op| compose(op, &lm)).collect();
        ModeOps { dir, lap, div_lm }
    }
}

/// How the `λ` term enters a row: on which unknown, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowRole {
    Dynamic(usize),
    Constraint,
}

pub(crate) fn row_roles(lay: &Layout, kind: ModeKind) -> Vec<RowRole> {
    let mut roles = vec![RowRole::Constraint; lay.len()];
    if kind == ModeKind::Nyquist {
        return roles;
    }
    for j in 0..lay.m {
        if lay.interior(j) {
            for v in 0..lay.n + lay.nq {
                roles[lay.var(j, v)] = RowRole::Dynamic(lay.var(j, v));
            }
        } else if !(kind == ModeKind::Zero && j == 0) {
            roles[lay.var(j, lay.p())] = RowRole::Dynamic(lay.var(j, lay.n - 1));
        }
    }
    roles
}

/// `M(λ) = λE + K` for one mode.
pub(crate) fn assemble(
    lay: &Layout,
    ops: &ModeOps,
    params: &ModelParams,
    kind: ModeKind,
    lambda: Complex64,
) -> BandMatrix {
    let bw = lay.bandwidth();
    let mut mat = BandMatrix::zeros(lay.len(), bw, bw);
    let one = Complex64::new(1.0, 0.0);
    if kind == ModeKind::Nyquist {
        for r in 0..lay.len() {
            mat.add(r, r, one);
        }
        return mat;
    }
    let (n, m, beta) = (lay.n, lay.m, params.beta());
    let pv = lay.p();

    let momentum = |mat: &mut BandMatrix, row: usize, j: usize, i: usize| {
        mat.add(row, lay.var(j, i), lambda);
        for &(c, v) in &ops.lap[j] {
            mat.add(row, lay.var(c, i), -v);
        }
        for &(c, v) in &ops.dir[i][j] {
            mat.add(row, lay.var(c, pv), v);
        }
        for b in 0..n {
            for (qi, s) in lay.q_expand(i, b) {
                for &(c, v) in &ops.div_lm[b][j] {
                    mat.add(row, lay.var(c, n + qi), v * (beta * s));
                }
            }
        }
    };

    for j in 0..m {
        let interior = lay.interior(j);
        for i in 0..n {
            let row = lay.var(j, i);
            if interior {
                momentum(&mut mat, row, j, i);
            } else {
                mat.add(row, row, one);
            }
        }
        for (c, &(a, b)) in lay.pairs.iter().enumerate() {
            let row = lay.var(j, n + c);
            if interior {
                mat.add(row, row, lambda + params.a);
                for &(col, v) in &ops.lap[j] {
                    mat.add(row, lay.var(col, n + c), -v);
                }
                for &(col, v) in &ops.dir[b][j] {
                    mat.add(row, lay.var(col, a), v * (-0.5 * beta));
                }
                for &(col, v) in &ops.dir[a][j] {
                    mat.add(row, lay.var(col, b), v * (-0.5 * beta));
                }
            } else {
                for &(col, v) in &ops.dir[n - 1][j] {
                    mat.add(row, lay.var(col, n + c), v);
                }
            }
        }
        let row = lay.var(j, pv);
        match (kind, interior) {
            (ModeKind::Regular, true) => {
                for i in 0..n {
                    for &(col, v) in &ops.dir[i][j] {
                        mat.add(row, lay.var(col, i), v);
                    }
                }
            }
            (ModeKind::Zero, true) => mat.add(row, lay.var(j, n - 1), one),
            (ModeKind::Zero, false) if j == 0 => mat.add(row, row, one),
            _ => momentum(&mut mat, row, j, n - 1),
        }
    }
    mat
}

/// Right-hand side from mode coefficients of `f` (N slices) and of the
/// independent `G` components (nq slices), each of length `m`.
pub(crate) fn rhs(lay: &Layout, kind: ModeKind, f: &[&[Complex64]], g: &[&[Complex64]]) -> Vec<Complex64> {
    let mut b = vec![ZERO; lay.len()];
    if kind == ModeKind::Nyquist {
        return b;
    }
    let n = lay.n;
    for j in 0..lay.m {
        if lay.interior(j) {
            for i in 0..n {
                b[lay.var(j, i)] = f[i][j];
            }
            for c in 0..lay.nq {
                b[lay.var(j, n + c)] = g[c][j];
            }
        } else if !(kind == ModeKind::Zero && j == 0) {
            b[lay.var(j, lay.p())] = f[n - 1][j];
        }
    }
    b
}

/// `y[row] = x[col]` for dynamic rows, zero elsewhere.
pub(crate) fn apply_e(roles: &[RowRole], x: &[Complex64]) -> Vec<Complex64> {
    roles
        .iter()
        .map(|r| match r {
            RowRole::Dynamic(c) => x[*c],
            RowRole::Constraint => ZERO,
        })
        .collect()
}
