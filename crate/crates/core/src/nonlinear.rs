//! Nonlinear right sides `f(u, Q)` and `G(u, Q)` of the split system.

use rayon::prelude::*;

use crate::driver::ExponentScheme;
use crate::error::{Error, Result};
use crate::fields::{
    jacobian, lebesgue_norm, partial, row_divergence, sobolev_seminorm, tensor_laplacian, Components, ScalarField, State,
    TensorField,
    VectorField,
};
use crate::tensor::{coupling_unchecked, split_gradient, MatrixN, ModelParams, SymTraceless};

/// `(f, G)` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsPair {
    pub f: VectorField,
    pub g: TensorField,
}

impl RhsPair {
    pub fn zeros(grid: &crate::fields::Grid) -> Self {
        RhsPair { f: VectorField::zeros(grid), g: TensorField::zeros(grid) }
    }

    pub fn scale(&self, s: f64) -> Self {
        RhsPair { f: self.f.scale(s), g: self.g.scale(s) }
    }
}

fn check(u: &VectorField, q: &TensorField, params: &ModelParams) -> Result<()> {
    if u.grid() != q.grid() {
        return Err(Error::GridMismatch("velocity and Q live on different grids".into()));
    }
    if u.dim() != params.n || q.dim() != params.n {
        return Err(Error::InvalidInput(format!(
            "fields of dimension {}/{} with model dimension {}",
            u.dim(),
            q.dim(),
            params.n
        )));
    }
    Ok(())
}

fn at(comps: &[ScalarField], n: usize, idx: usize) -> MatrixN {
    MatrixN::from_fn(n, |i, j| comps[i * n + j].data()[idx])
}

fn tensor_comps(q: &TensorField) -> Vec<ScalarField> {
    let n = q.dim();
    (0..n * n).map(|c| q.comp(c / n, c % n).clone()).collect()
}

/// `grad[a][c] = ∂_a` of component `c` (row-major matrix components).
fn gradients(comps: &[ScalarField], n: usize) -> Vec<Vec<ScalarField>> {
    (0..n).map(|a| comps.iter().map(|f| partial(f, &[a])).collect()).collect()
}

/// Evaluate a pointwise matrix rule into `N²` component fields.
fn pointwise(like: &ScalarField, n: usize, rule: impl Fn(usize) -> MatrixN + Sync + Send) -> Vec<ScalarField> {
    let len = like.data().len();
    let mats: Vec<MatrixN> = (0..len).into_par_iter().map(rule).collect();
    (0..n * n)
        .map(|c| {
            let data = mats.iter().map(|m| m.get(c / n, c % n)).collect();
            ScalarField::from_vec(like.grid(), data).expect("length matches grid")
        })
        .collect()
}

fn convective(u: &VectorField, grads: &[Vec<ScalarField>], idx: usize, c: usize) -> f64 {
    (0..u.dim()).map(|j| u.comp(j).data()[idx] * grads[j][c].data()[idx]).sum()
}

fn bulk(q: &MatrixN, p: &ModelParams) -> MatrixN {
    let n = q.dim();
    let t2 = q.contract(q);
    (*q * *q - MatrixN::identity(n).scale(t2 / n as f64)).scale(p.b) - q.scale(p.c * t2)
}

/// `G(u, Q) = −(u·∇)Q + ξ(DQ + QD) + WQ − QW − 2ξ(Q + I/N) Q:∇u + F′(Q)`.
pub fn assemble_g(u: &VectorField, q: &TensorField, params: &ModelParams) -> Result<TensorField> {
    check(u, q, params)?;
    let n = params.n;
    let qc = tensor_comps(q);
    let gu = jacobian(u);
    let gq = gradients(&qc, n);
    let xi = params.xi;
    let comps = pointwise(&qc[0], n, |idx| {
        let qm = at(&qc, n, idx);
        let grad_u = at(&gu, n, idx);
        let (d, w) = split_gradient(&grad_u);
        let shifted = qm + MatrixN::identity(n).scale(1.0 / n as f64);
        let adv = MatrixN::from_fn(n, |a, b| convective(u, &gq, idx, a * n + b));
        -adv + (d * qm + qm * d).scale(xi) + w * qm - qm * w - shifted.scale(2.0 * xi * qm.contract(&grad_u))
            + bulk(&qm, params)
    });
    Ok(TensorField::from_components_unchecked(comps))
}

/// Same `G` built as `−(u·∇)Q + S(∇u, Q) − βD(u) + F′(Q)` from the coupling tensor.
pub fn assemble_g_from_coupling(u: &VectorField, q: &TensorField, params: &ModelParams) -> Result<TensorField> {
    check(u, q, params)?;
    let n = params.n;
    let qc = tensor_comps(q);
    let gu = jacobian(u);
    let gq = gradients(&qc, n);
    let beta = params.beta();
    let comps = pointwise(&qc[0], n, |idx| {
        let qm = at(&qc, n, idx);
        let grad_u = at(&gu, n, idx);
        let (d, w) = split_gradient(&grad_u);
        let qs = SymTraceless::project(&qm);
        let s = coupling_unchecked(&d, &w, &grad_u, &qs, params);
        let adv = MatrixN::from_fn(n, |a, b| convective(u, &gq, idx, a * n + b));
        -adv + s - d.scale(beta) + *crate::tensor::bulk_derivative(&qs, params).matrix()
    });
    Ok(TensorField::from_components_unchecked(comps))
}

/// `f(u, Q) = −(u·∇)u + Div[2ξ tr(HQ)(Q + I/N) − (ξ+1)HQ + (1−ξ)QH − ∇Q⊙∇Q] − β Div F′(Q)`,
/// with every divergence taken after forming the products.
pub fn assemble_f(u: &VectorField, q: &TensorField, params: &ModelParams) -> Result<VectorField> {
    check(u, q, params)?;
    let n = params.n;
    let grid = *u.grid();
    let qc = tensor_comps(q);
    let lc = tensor_comps(&tensor_laplacian(q));
    let gq = gradients(&qc, n);
    let xi = params.xi;
    let bracket = pointwise(&qc[0], n, |idx| {
        let qm = at(&qc, n, idx);
        let h = at(&lc, n, idx) - qm.scale(params.a) + bulk(&qm, params);
        let shifted = qm + MatrixN::identity(n).scale(1.0 / n as f64);
        let dq: Vec<MatrixN> = (0..n).map(|a| at(&gq[a], n, idx)).collect();
        let gqq = MatrixN::from_fn(n, |i, j| dq[i].contract(&dq[j]));
        shifted.scale(2.0 * xi * (h * qm).trace()) - (h * qm).scale(xi + 1.0) + (qm * h).scale(1.0 - xi) - gqq
    });
    let fprime = pointwise(&qc[0], n, |idx| bulk(&at(&qc, n, idx), params));
    let mut f = row_divergence(&grid, &bracket);
    f.axpy(-params.beta(), &row_divergence(&grid, &fprime));
    subtract_convective(&mut f, u);
    Ok(f)
}

fn subtract_convective(f: &mut VectorField, u: &VectorField) {
    let n = u.dim();
    let gu = jacobian(u);
    for i in 0..n {
        let mut adv = ScalarField::zeros(u.grid());
        for j in 0..n {
            adv = &adv + &(u.comp(j) * &gu[i * n + j]);
        }
        f.comp_mut(i).axpy(-1.0, &adv);
    }
}

/// `f` from the stresses: `−(u·∇)u + Div(τ + σ) + β Div(ΔQ − aQ)`, with
/// `Div(τ + σ)` expanded by the product rule so every derivative falls on
/// `Q`, `∇Q` or `ΔQ` directly.
pub fn assemble_f_expanded(u: &VectorField, q: &TensorField, params: &ModelParams) -> Result<VectorField> {
    check(u, q, params)?;
    let n = params.n;
    let grid = *u.grid();
    let qc = tensor_comps(q);
    let lc = tensor_comps(&tensor_laplacian(q));
    let gq = gradients(&qc, n);
    let gl = gradients(&lc, n);
    // second derivatives ∂_a∂_b Q for a ≤ b
    let hess: Vec<Vec<Vec<ScalarField>>> = (0..n)
        .map(|a| (0..n).map(|b| qc.iter().map(|f| partial(f, &[a.min(b), a.max(b)])).collect()).collect())
        .collect();
    let (xi, a, b, c) = (params.xi, params.a, params.b, params.c);
    let eye = MatrixN::identity(n);
    let len = grid.len();
    let rows: Vec<Vec<f64>> = (0..len)
        .into_par_iter()
        .map(|idx| {
            let qm = at(&qc, n, idx);
            let lap = at(&lc, n, idx);
            let dq: Vec<MatrixN> = (0..n).map(|k| at(&gq[k], n, idx)).collect();
            let t2 = qm.contract(&qm);
            let h = lap - qm.scale(a) + bulk(&qm, params);
            // chain rule for F′
            let dh: Vec<MatrixN> = (0..n)
                .map(|k| {
                    let d = dq[k];
                    let qd = qm.contract(&d);
                    let dbulk = (d * qm + qm * d - eye.scale(2.0 * qd / n as f64)).scale(b)
                        - qm.scale(2.0 * c * qd)
                        - d.scale(c * t2);
                    at(&gl[k], n, idx) - d.scale(a) + dbulk
                })
                .collect();
            let shifted = qm + eye.scale(1.0 / n as f64);
            let s = (h * qm).trace();
            (0..n)
                .map(|i| {
                    let mut acc = 0.0;
                    for j in 0..n {
                        let ds = (dh[j] * qm).trace() + (h * dq[j]).trace();
                        let dtau = shifted.scale(2.0 * xi * ds) + dq[j].scale(2.0 * xi * s)
                            - (dh[j] * shifted + h * dq[j] + dq[j] * h + shifted * dh[j]).scale(xi);
                        let dsigma = dq[j] * h + qm * dh[j] - dh[j] * qm - h * dq[j];
                        acc += dtau.get(i, j) + dsigma.get(i, j);
                        // Div(∇Q⊙∇Q)_i = Σ_j ∂_i∂_j Q : ∂_j Q + ∂_i Q : ΔQ
                        acc -= at(&hess[i][j], n, idx).contract(&dq[j]);
                    }
                    acc - dq[i].contract(&lap)
                })
                .collect()
        })
        .collect();
    let comps: Vec<ScalarField> = (0..n)
        .map(|i| ScalarField::from_vec(&grid, rows.iter().map(|r| r[i]).collect()).expect("length matches grid"))
        .collect();
    let mut f = VectorField::from_components(comps)?;
    let lin: Vec<ScalarField> = (0..n * n).map(|k| lc[k].zip_with(&qc[k], |l, v| l - a * v)).collect();
    f.axpy(params.beta(), &row_divergence(&grid, &lin));
    subtract_convective(&mut f, u);
    Ok(f)
}

/// Both right sides for a state.
pub fn assemble(state: &State, params: &ModelParams) -> Result<RhsPair> {
    Ok(RhsPair { f: assemble_f(&state.u, &state.q, params)?, g: assemble_g(&state.u, &state.q, params)? })
}

/// Norms of `(f, ∇G)` in `L_r` for each requested exponent, with the time weight `1 + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsNorms {
    pub weight: f64,
    /// `(r, ‖f‖_r, ‖∇G‖_r)`.
    pub entries: Vec<(f64, f64, f64)>,
}

impl RhsNorms {
    /// `(1 + t) Σ_r (‖f‖_r + ‖∇G‖_r)`.
    pub fn weighted_total(&self) -> f64 {
        self.weight * self.entries.iter().map(|e| e.1 + e.2).sum::<f64>()
    }
}

/// `‖f‖_r` and `‖∇G‖_r` for `r ∈ {q0, q1, q2}`.
pub fn rhs_norms(rhs: &RhsPair, scheme: &ExponentScheme, t: f64) -> RhsNorms {
    RhsNorms {
        weight: 1.0 + t,
        entries: scheme
            .forcing_exponents()
            .iter()
            .map(|&r| (r, lebesgue_norm(&rhs.f, r), sobolev_seminorm(&rhs.g, r, 1)))
            .collect(),
    }
}
