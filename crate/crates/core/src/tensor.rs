//! Pointwise tensor algebra of the Beris–Edwards model.
//!
//! Everything here acts on single N×N matrices (N ∈ {2, 3}) and knows nothing
//! about grids. The velocity gradient follows the Jacobian convention
//! `grad_u[i][j] = ∂_j u_i` throughout the crate.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Raw N×N real matrix, N ∈ {2, 3}. Entries outside the leading N×N block
/// are kept at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixN {
    n: usize,
    a: [[f64; 3]; 3],
}

impl MatrixN {
    pub fn zeros(n: usize) -> Self {
        assert!(n == 2 || n == 3, "dimension must be 2 or 3, got {n}");
        MatrixN { n, a: [[0.0; 3]; 3] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i][i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i][j] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows; panics if the shape is not square 2 or 3.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| {
            assert_eq!(rows[i].len(), n, "row {i} has wrong length");
            rows[i][j]
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        self.a[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.a[j][i])
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i][i]).sum()
    }

    /// Frobenius inner product `A:B = Σ A_ij B_ij`.
    pub fn contract(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.a[i][j] * other.a[i][j];
            }
        }
        s
    }

    pub fn frobenius(&self) -> f64 {
        self.contract(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(self.n, |i, j| s * self.a[i][j])
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().flatten().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `‖A − Aᵀ‖_F`.
    pub fn asymmetry(&self) -> f64 {
        (*self - self.transpose()).frobenius()
    }

    /// `‖A + Aᵀ‖_F`.
    pub fn symmetric_part_norm(&self) -> f64 {
        (*self + self.transpose()).frobenius()
    }
}

impl Add for MatrixN {
    type Output = MatrixN;
    fn add(self, rhs: MatrixN) -> MatrixN {
        debug_assert_eq!(self.n, rhs.n);
        MatrixN::from_fn(self.n, |i, j| self.a[i][j] + rhs.a[i][j])
    }
}

impl AddAssign for MatrixN {
    fn add_assign(&mut self, rhs: MatrixN) {
        *self = *self + rhs;
    }
}

impl Sub for MatrixN {
    type Output = MatrixN;
    fn sub(self, rhs: MatrixN) -> MatrixN {
        debug_assert_eq!(self.n, rhs.n);
        MatrixN::from_fn(self.n, |i, j| self.a[i][j] - rhs.a[i][j])
    }
}

impl Neg for MatrixN {
    type Output = MatrixN;
    fn neg(self) -> MatrixN {
        self.scale(-1.0)
    }
}

impl Mul for MatrixN {
    type Output = MatrixN;
    fn mul(self, rhs: MatrixN) -> MatrixN {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        MatrixN::from_fn(n, |i, j| (0..n).map(|k| self.a[i][k] * rhs.a[k][j]).sum())
    }
}

impl Mul<MatrixN> for f64 {
    type Output = MatrixN;
    fn mul(self, rhs: MatrixN) -> MatrixN {
        rhs.scale(self)
    }
}

/// Symmetric traceless matrix (an element of 𝕊₀).
///
/// Construction projects: the input is symmetrized and its trace removed, so
/// round-off never accumulates into invariant violations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTraceless(MatrixN);

impl SymTraceless {
    pub fn zeros(n: usize) -> Self {
        SymTraceless(MatrixN::zeros(n))
    }

    /// Orthogonal projection onto 𝕊₀.
    pub fn project(m: &MatrixN) -> Self {
        let n = m.dim();
        let mut s = MatrixN::from_fn(n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)));
        let shift = s.trace() / n as f64;
        for i in 0..n {
            s.set(i, i, s.get(i, i) - shift);
        }
        SymTraceless(s)
    }

    /// Accepts only inputs that already lie in 𝕊₀ up to `tol`, then projects.
    pub fn try_new(m: &MatrixN, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidInput("non-finite Q entry".into()));
        }
        let scale = 1.0f64.max(m.max_abs());
        if m.asymmetry() > tol * scale || m.trace().abs() > tol * scale {
            return Err(Error::InvalidInput(format!(
                "matrix is not symmetric traceless (asym {:.3e}, trace {:.3e})",
                m.asymmetry(),
                m.trace()
            )));
        }
        Ok(Self::project(m))
    }

    #[inline]
    pub fn matrix(&self) -> &MatrixN {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    /// `tr(Q²)`.
    pub fn tr_sq(&self) -> f64 {
        self.0.contract(&self.0)
    }

    /// `tr(Q³)`.
    pub fn tr_cube(&self) -> f64 {
        (self.0 * self.0).contract(&self.0)
    }
}

impl From<SymTraceless> for MatrixN {
    fn from(q: SymTraceless) -> MatrixN {
        q.0
    }
}

/// Material and model constants. The elastic constant L is fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub xi: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    beta: f64,
}

impl ModelParams {
    pub fn new(n: usize, xi: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if n != 2 && n != 3 {
            problems.push(format!("N = {n} must be 2 or 3"));
        }
        if !(xi.is_finite() && xi != 0.0) {
            problems.push(format!("xi = {xi} must be finite and nonzero"));
        }
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !(v.is_finite() && v > 0.0) {
                problems.push(format!("{name} = {v} must be positive"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidInput(problems.join("; ")));
        }
        Ok(ModelParams { n, xi, a, b, c, beta: 2.0 * xi / n as f64 })
    }

    /// Linear coupling strength `β = 2ξ/N`.
    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Smallest admissible sector half-opening: `tan ε₀ = |β|/√2`.
    pub fn epsilon0(&self) -> f64 {
        (self.beta.abs() / 2f64.sqrt()).atan()
    }
}

fn check_dims(expected: usize, m: &MatrixN, what: &str) -> Result<()> {
    if m.dim() != expected {
        return Err(Error::InvalidInput(format!(
            "{what} has dimension {} but params expect {expected}",
            m.dim()
        )));
    }
    Ok(())
}

/// Split a velocity gradient into strain rate `D` and vorticity `W`.
pub fn strain_and_vorticity(grad_u: &MatrixN) -> Result<(MatrixN, MatrixN)> {
    if !grad_u.is_finite() {
        return Err(Error::InvalidInput("non-finite velocity gradient".into()));
    }
    Ok(split_gradient(grad_u))
}

#[inline]
pub(crate) fn split_gradient(g: &MatrixN) -> (MatrixN, MatrixN) {
    let n = g.dim();
    let d = MatrixN::from_fn(n, |i, j| 0.5 * (g.get(i, j) + g.get(j, i)));
    let w = MatrixN::from_fn(n, |i, j| 0.5 * (g.get(i, j) - g.get(j, i)));
    (d, w)
}

/// Landau–de Gennes bulk energy `a/2 tr Q² − b/3 tr Q³ + c/4 (tr Q²)²`.
pub fn bulk_energy(q: &SymTraceless, p: &ModelParams) -> f64 {
    let t2 = q.tr_sq();
    0.5 * p.a * t2 - p.b / 3.0 * q.tr_cube() + 0.25 * p.c * t2 * t2
}

/// Nonlinear part of the molecular field, `b(Q² − tr(Q²)I/N) − c tr(Q²) Q`.
pub fn bulk_derivative(q: &SymTraceless, p: &ModelParams) -> SymTraceless {
    let n = q.dim();
    let qm = *q.matrix();
    let t2 = q.tr_sq();
    let m = (qm * qm - MatrixN::identity(n).scale(t2 / n as f64)).scale(p.b) - qm.scale(p.c * t2);
    SymTraceless::project(&m)
}

/// Molecular field `H = ΔQ − aQ + F′(Q)` with the Laplacian supplied by the caller.
pub fn molecular_field(q: &SymTraceless, lap_q: &SymTraceless, p: &ModelParams) -> SymTraceless {
    let m = *lap_q.matrix() - q.matrix().scale(p.a) + *bulk_derivative(q, p).matrix();
    SymTraceless::project(&m)
}

/// Co-rotational coupling `S(∇u, Q)`.
pub fn coupling_tensor_s(grad_u: &MatrixN, q: &SymTraceless, p: &ModelParams) -> Result<MatrixN> {
    check_dims(p.n, grad_u, "velocity gradient")?;
    check_dims(p.n, q.matrix(), "Q")?;
    let (d, w) = strain_and_vorticity(grad_u)?;
    Ok(coupling_unchecked(&d, &w, grad_u, q, p))
}

pub(crate) fn coupling_unchecked(
    d: &MatrixN,
    w: &MatrixN,
    grad_u: &MatrixN,
    q: &SymTraceless,
    p: &ModelParams,
) -> MatrixN {
    let n = q.dim();
    let shifted = *q.matrix() + MatrixN::identity(n).scale(1.0 / n as f64);
    let q_grad_u = (*q.matrix() * *grad_u).trace();
    (d.scale(p.xi) + *w) * shifted + shifted * (d.scale(p.xi) - *w)
        - shifted.scale(2.0 * p.xi * q_grad_u)
}

/// `(∇Q⊙∇Q)_ij = Σ_kl ∂_i Q_kl ∂_j Q_kl`, with `grad_q[i] = ∂_i Q`.
pub fn grad_q_product(grad_q: &[MatrixN]) -> MatrixN {
    let n = grad_q.len();
    MatrixN::from_fn(n, |i, j| grad_q[i].contract(&grad_q[j]))
}

/// Elastic stress `τ(Q)` and antisymmetric stress `σ(Q)`.
///
/// `grad_q[i]` holds `∂_i Q`; its length must equal N.
pub fn stress_tensors(
    q: &SymTraceless,
    h: &SymTraceless,
    grad_q: &[MatrixN],
    p: &ModelParams,
) -> Result<(MatrixN, MatrixN)> {
    check_dims(p.n, q.matrix(), "Q")?;
    if grad_q.len() != p.n {
        return Err(Error::InvalidInput(format!(
            "gradQ has {} slices, expected {}",
            grad_q.len(),
            p.n
        )));
    }
    let n = p.n;
    let qm = *q.matrix();
    let hm = *h.matrix();
    let shifted = qm + MatrixN::identity(n).scale(1.0 / n as f64);
    let tau = shifted.scale(2.0 * p.xi * (hm * qm).trace())
        - (hm * shifted + shifted * hm).scale(p.xi)
        - grad_q_product(grad_q);
    let sigma = qm * hm - hm * qm;
    Ok((tau, sigma))
}

/// Global minimum of the bulk energy over 𝕊₀.
///
/// Minimizers of an isotropic quartic are uniaxial, so a scan along
/// `s (e eᵀ − I/N)` followed by golden-section refinement suffices.
pub fn bulk_energy_min(p: &ModelParams) -> f64 {
    let n = p.n;
    let dir = MatrixN::from_fn(n, |i, j| {
        let e = if i == n - 1 && j == n - 1 { 1.0 } else { 0.0 };
        e - if i == j { 1.0 / n as f64 } else { 0.0 }
    });
    let energy = |s: f64| bulk_energy(&SymTraceless::project(&dir.scale(s)), p);
    // the quartic term dominates beyond |s| ~ (a + b + c)/c
    let reach = 4.0 * (1.0 + (p.a + p.b) / p.c);
    let samples = 4000;
    let (mut best_s, mut best) = (0.0, 0.0);
    for k in 0..=samples {
        let s = -reach + 2.0 * reach * k as f64 / samples as f64;
        let e = energy(s);
        if e < best {
            best = e;
            best_s = s;
        }
    }
    let step = 2.0 * reach / samples as f64;
    let (mut lo, mut hi) = (best_s - step, best_s + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if energy(m1) < energy(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.min(energy(0.5 * (lo + hi))).min(0.0)
}
