use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::tensor::{MatrixN, SymTraceless};

/// Sample type of a grid function: `f64` for physical fields, `Complex64`
/// for resolvent solutions at complex λ.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + Debug
    + Default
    + PartialEq
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn from_f64(x: f64) -> Self;
    fn to_c64(self) -> Complex64;
    /// Real part for `f64`, identity for complex.
    fn from_c64(c: Complex64) -> Self;
    fn modulus(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    #[inline]
    fn from_c64(c: Complex64) -> Self {
        c.re
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        self
    }
    #[inline]
    fn from_c64(c: Complex64) -> Self {
        c
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Scalar grid function. Layout: wall index fastest within each tangential column.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField<T: Scalar = f64> {
    grid: Grid,
    data: Vec<T>,
}

impl<T: Scalar> ScalarField<T> {
    pub fn zeros(grid: &Grid) -> Self {
        ScalarField { grid: *grid, data: vec![T::default(); grid.len()] }
    }

    pub fn from_vec(grid: &Grid, data: Vec<T>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                data.len(),
                grid.len()
            )));
        }
        Ok(ScalarField { grid: *grid, data })
    }

    /// Sample `f(x)` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> T) -> Self {
        let data = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        ScalarField { grid: *grid, data }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }
    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }
    #[inline]
    pub fn into_data(self) -> Vec<T> {
        self.data
    }
    #[inline]
    pub fn at(&self, column: usize, j: usize) -> T {
        self.data[self.grid.index(column, j)]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        ScalarField { grid: self.grid, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        ScalarField { grid: self.grid, data }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn scale_by(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    pub fn axpy(&mut self, alpha: T, x: &Self) {
        for (a, &b) in self.data.iter_mut().zip(&x.data) {
            *a += alpha * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Values on one wall row (`j = 0` is the wall `x_N = 0`).
    pub fn row(&self, j: usize) -> Vec<T> {
        (0..self.grid.n_columns()).map(|c| self.at(c, j)).collect()
    }

    /// Shift tangentially by whole cells along tangential axis `axis`.
    pub fn roll(&self, axis: usize, cells: usize) -> Self {
        let g = self.grid;
        assert!(axis < g.dim() - 1);
        let n = g.n_tan();
        let mut out = Self::zeros(&g);
        for c in 0..g.n_columns() {
            let mut m = g.column_multi(c);
            m[axis] = (m[axis] + cells) % n;
            let target = if g.dim() == 2 { m[0] } else { m[0] * n + m[1] };
            for j in 0..g.n_wall() {
                out.data[g.index(target, j)] = self.data[g.index(c, j)];
            }
        }
        out
    }
}

impl ScalarField<f64> {
    pub fn to_complex(&self) -> ScalarField<Complex64> {
        ScalarField { grid: self.grid, data: self.data.iter().map(|&v| v.to_c64()).collect() }
    }
}

impl ScalarField<Complex64> {
    pub fn re(&self) -> ScalarField<f64> {
        ScalarField { grid: self.grid, data: self.data.iter().map(|v| v.re).collect() }
    }
    pub fn im(&self) -> ScalarField<f64> {
        ScalarField { grid: self.grid, data: self.data.iter().map(|v| v.im).collect() }
    }
}

impl<T: Scalar> Add for &ScalarField<T> {
    type Output = ScalarField<T>;
    fn add(self, rhs: &ScalarField<T>) -> ScalarField<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for &ScalarField<T> {
    type Output = ScalarField<T>;
    fn sub(self, rhs: &ScalarField<T>) -> ScalarField<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Scalar> Mul for &ScalarField<T> {
    type Output = ScalarField<T>;
    fn mul(self, rhs: &ScalarField<T>) -> ScalarField<T> {
        self.zip_with(rhs, |a, b| a * b)
    }
}

/// Anything made of scalar components on one grid. Norms act on the
/// pointwise Frobenius modulus across components.
pub trait Components<T: Scalar> {
    fn components(&self) -> &[ScalarField<T>];

    fn grid(&self) -> &Grid {
        self.components()[0].grid()
    }
}

impl<T: Scalar> Components<T> for ScalarField<T> {
    fn components(&self) -> &[ScalarField<T>] {
        std::slice::from_ref(self)
    }
}

/// N-vector field; component `N−1` is wall-normal.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<T: Scalar = f64> {
    comps: Vec<ScalarField<T>>,
}

impl<T: Scalar> VectorField<T> {
    pub fn zeros(grid: &Grid) -> Self {
        VectorField { comps: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect() }
    }

    pub fn from_components(comps: Vec<ScalarField<T>>) -> Result<Self> {
        let g = *comps
            .first()
            .ok_or_else(|| Error::InvalidInput("vector field needs components".into()))?
            .grid();
        if comps.len() != g.dim() || comps.iter().any(|c| *c.grid() != g) {
            return Err(Error::GridMismatch("vector components disagree with grid".into()));
        }
        Ok(VectorField { comps })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> [T; 3]) -> Self {
        let comps = (0..grid.dim())
            .map(|i| ScalarField::from_fn(grid, |x| f(x)[i]))
            .collect();
        VectorField { comps }
    }

    #[inline]
    pub fn comp(&self, i: usize) -> &ScalarField<T> {
        &self.comps[i]
    }
    #[inline]
    pub fn comp_mut(&mut self, i: usize) -> &mut ScalarField<T> {
        &mut self.comps[i]
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn scale(&self, s: f64) -> Self {
        VectorField { comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn axpy(&mut self, alpha: T, x: &Self) {
        for (a, b) in self.comps.iter_mut().zip(&x.comps) {
            a.axpy(alpha, b);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    pub fn roll(&self, axis: usize, cells: usize) -> Self {
        VectorField { comps: self.comps.iter().map(|c| c.roll(axis, cells)).collect() }
    }
}

impl<T: Scalar> Components<T> for VectorField<T> {
    fn components(&self) -> &[ScalarField<T>] {
        &self.comps
    }
}

/// Symmetric traceless tensor field, stored as all N² components.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField<T: Scalar = f64> {
    n: usize,
    comps: Vec<ScalarField<T>>,
}

impl<T: Scalar> TensorField<T> {
    pub fn zeros(grid: &Grid) -> Self {
        let n = grid.dim();
        TensorField { n, comps: (0..n * n).map(|_| ScalarField::zeros(grid)).collect() }
    }

    /// Full N² components, row-major `(i, j) ↦ i·N + j`; rejected unless
    /// symmetric and traceless to `1e−12` relative.
    pub fn from_components(comps: Vec<ScalarField<T>>) -> Result<Self> {
        let g = *comps
            .first()
            .ok_or_else(|| Error::InvalidInput("tensor field needs components".into()))?
            .grid();
        let n = g.dim();
        if comps.len() != n * n || comps.iter().any(|c| *c.grid() != g) {
            return Err(Error::GridMismatch("tensor components disagree with grid".into()));
        }
        let t = TensorField { n, comps };
        let (asym, tr) = t.invariant_residuals();
        let tol = 1e-12 * t.max_abs().max(f64::MIN_POSITIVE);
        if asym > tol || tr > tol {
            return Err(Error::InvalidInput(format!(
                "tensor field not symmetric traceless (asymmetry {asym:.2e}, trace {tr:.2e})"
            )));
        }
        Ok(t)
    }

    /// Wrap full N² components, row-major `(i, j) ↦ i·N + j`. The caller
    /// guarantees symmetry and zero trace (resolvent output is built that way).
    pub(crate) fn from_components_unchecked(comps: Vec<ScalarField<T>>) -> Self {
        let n = comps[0].grid().dim();
        debug_assert_eq!(comps.len(), n * n);
        TensorField { n, comps }
    }

    #[inline]
    pub fn comp(&self, i: usize, j: usize) -> &ScalarField<T> {
        &self.comps[i * self.n + j]
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self, s: f64) -> Self {
        TensorField { n: self.n, comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        TensorField {
            n: self.n,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TensorField {
            n: self.n,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn axpy(&mut self, alpha: T, x: &Self) {
        for (a, b) in self.comps.iter_mut().zip(&x.comps) {
            a.axpy(alpha, b);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    pub fn roll(&self, axis: usize, cells: usize) -> Self {
        TensorField { n: self.n, comps: self.comps.iter().map(|c| c.roll(axis, cells)).collect() }
    }

    /// Largest pointwise `‖Q − Qᵀ‖` and `|tr Q|`.
    pub fn invariant_residuals(&self) -> (f64, f64) {
        let g = *self.comps[0].grid();
        let mut asym = 0.0f64;
        let mut trace = 0.0f64;
        for idx in 0..g.len() {
            let mut s = 0.0;
            let mut t = T::default();
            for i in 0..self.n {
                t += self.comps[i * self.n + i].data()[idx];
                for j in 0..self.n {
                    let d = self.comps[i * self.n + j].data()[idx] - self.comps[j * self.n + i].data()[idx];
                    s += d.modulus().powi(2);
                }
            }
            asym = asym.max(s.sqrt());
            trace = trace.max(t.modulus());
        }
        (asym, trace)
    }
}

impl TensorField<f64> {
    /// Sample a matrix-valued function and project each sample onto 𝕊₀.
    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> MatrixN) -> Self {
        let n = grid.dim();
        let samples: Vec<SymTraceless> =
            (0..grid.len()).map(|i| SymTraceless::project(&f(grid.coords(i)))).collect();
        Self::from_samples(grid, &samples, n)
    }

    pub fn from_samples(grid: &Grid, samples: &[SymTraceless], n: usize) -> Self {
        let comps = (0..n * n)
            .map(|c| {
                let (i, j) = (c / n, c % n);
                ScalarField { grid: *grid, data: samples.iter().map(|q| q.get(i, j)).collect() }
            })
            .collect();
        TensorField { n, comps }
    }

    /// Project arbitrary N² component fields onto 𝕊₀ pointwise.
    pub fn project(comps: Vec<ScalarField<f64>>) -> Result<Self> {
        let g = *comps[0].grid();
        let n = g.dim();
        if comps.len() != n * n {
            return Err(Error::InvalidInput(format!("{} components for N = {n}", comps.len())));
        }
        let samples: Vec<SymTraceless> = (0..g.len())
            .map(|idx| SymTraceless::project(&MatrixN::from_fn(n, |i, j| comps[i * n + j].data()[idx])))
            .collect();
        Ok(Self::from_samples(&g, &samples, n))
    }

    /// Pointwise matrix value.
    #[inline]
    pub fn sample(&self, idx: usize) -> SymTraceless {
        SymTraceless::project(&self.sample_raw(idx))
    }

    #[inline]
    pub fn sample_raw(&self, idx: usize) -> MatrixN {
        MatrixN::from_fn(self.n, |i, j| self.comps[i * self.n + j].data()[idx])
    }

    /// Re-project onto 𝕊₀ to clear accumulated round-off.
    pub fn reproject(&self) -> Self {
        let g = *self.comps[0].grid();
        let samples: Vec<SymTraceless> = (0..g.len()).map(|i| self.sample(i)).collect();
        Self::from_samples(&g, &samples, self.n)
    }
}

impl<T: Scalar> Components<T> for TensorField<T> {
    fn components(&self) -> &[ScalarField<T>] {
        &self.comps
    }
}

/// The pair `U = (u, Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T: Scalar = f64> {
    pub u: VectorField<T>,
    pub q: TensorField<T>,
}

impl<T: Scalar> State<T> {
    pub fn zeros(grid: &Grid) -> Self {
        State { u: VectorField::zeros(grid), q: TensorField::zeros(grid) }
    }

    pub fn grid(&self) -> &Grid {
        self.u.comp(0).grid()
    }

    pub fn scale(&self, s: f64) -> Self {
        State { u: self.u.scale(s), q: self.q.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        State { u: self.u.add(&other.u), q: self.q.add(&other.q) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        State { u: self.u.sub(&other.u), q: self.q.sub(&other.q) }
    }

    pub fn axpy(&mut self, alpha: T, x: &Self) {
        self.u.axpy(alpha, &x.u);
        self.q.axpy(alpha, &x.q);
    }

    pub fn max_abs(&self) -> f64 {
        self.u.max_abs().max(self.q.max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.u.components().iter().chain(self.q.components()).all(|c| c.is_finite())
    }
}
