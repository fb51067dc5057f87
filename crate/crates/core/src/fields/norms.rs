//! Discrete Lebesgue and homogeneous Sobolev norms.

use super::deriv::{multi_indices, partial};
use super::field::{Components, Scalar, ScalarField};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Exponent and derivative order of a norm `Ḣ^s_q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    q: f64,
    s: usize,
}

impl NormSpec {
    pub fn new(q: f64, s: usize) -> Result<Self> {
        let mut problems = Vec::new();
        if !(q > 1.0) {
            problems.push(format!("q = {q} must exceed 1"));
        }
        if s > 3 {
            problems.push(format!("derivative order {s} exceeds 3"));
        }
        if problems.is_empty() {
            Ok(NormSpec { q, s })
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn eval<T: Scalar, F: Components<T> + ?Sized>(&self, f: &F) -> f64 {
        sobolev_seminorm(f, self.q, self.s)
    }
}

/// Pointwise squared Frobenius modulus summed over components, with weights.
fn pointwise_sq<T: Scalar>(grid: &Grid, parts: &[(&ScalarField<T>, f64)]) -> Vec<f64> {
    let mut acc = vec![0.0; grid.len()];
    for (f, w) in parts {
        for (a, v) in acc.iter_mut().zip(f.data()) {
            *a += w * v.modulus().powi(2);
        }
    }
    acc
}

/// `(Σ w_j |v|^q)^{1/q}` from pointwise squared moduli. `q = ∞` gives the max.
pub(crate) fn quadrature_from_sq(grid: &Grid, sq: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return sq.iter().fold(0.0f64, |m, &v| m.max(v)).sqrt();
    }
    let m = grid.n_wall();
    // scale out the largest value so |v|^q cannot overflow for large q
    let peak = sq.iter().fold(0.0f64, |m, &v| m.max(v)).sqrt();
    if peak == 0.0 {
        return 0.0;
    }
    // per wall index partial sums first, in fixed order
    let mut rows = vec![0.0; m];
    for (idx, &v) in sq.iter().enumerate() {
        rows[idx % m] += (v.sqrt() / peak).powf(q);
    }
    let total: f64 = rows.iter().enumerate().map(|(j, r)| grid.weight(j) * r).sum();
    peak * total.powf(1.0 / q)
}

/// `‖f‖_{L_q}` of the pointwise Frobenius modulus; `q = f64::INFINITY` allowed.
///
/// # Panics
/// If `q < 1`.
pub fn lebesgue_norm<T: Scalar, F: Components<T> + ?Sized>(f: &F, q: f64) -> f64 {
    assert!(q >= 1.0, "Lebesgue exponent {q} < 1");
    let comps = f.components();
    let grid = *comps[0].grid();
    let parts: Vec<_> = comps.iter().map(|c| (c, 1.0)).collect();
    quadrature_from_sq(&grid, &pointwise_sq(&grid, &parts), q)
}

pub fn linf_norm<T: Scalar, F: Components<T> + ?Sized>(f: &F) -> f64 {
    lebesgue_norm(f, f64::INFINITY)
}

/// `‖∇^s f‖_{L_q}`: the L_q norm of the full s-th gradient array
/// (all `N^s` ordered index tuples, symmetric ones computed once).
pub fn sobolev_seminorm<T: Scalar, F: Components<T> + ?Sized>(f: &F, q: f64, s: usize) -> f64 {
    assert!(s <= 3, "derivative order {s} > 3");
    if s == 0 {
        return lebesgue_norm(f, q);
    }
    let comps = f.components();
    let grid = *comps[0].grid();
    let derivs: Vec<(ScalarField<T>, f64)> = comps
        .iter()
        .flat_map(|c| multi_indices(grid.dim(), s).into_iter().map(move |(axes, w)| (partial(c, &axes), w)))
        .collect();
    let parts: Vec<_> = derivs.iter().map(|(f, w)| (f, *w)).collect();
    quadrature_from_sq(&grid, &pointwise_sq(&grid, &parts), q)
}

/// Quadrature inner product `Σ w f ḡ`; real part for real data.
pub fn inner<T: Scalar>(f: &ScalarField<T>, g: &ScalarField<T>) -> num_complex::Complex64 {
    let grid = f.grid();
    let m = grid.n_wall();
    let mut rows = vec![num_complex::Complex64::default(); m];
    for (idx, (a, b)) in f.data().iter().zip(g.data()).enumerate() {
        rows[idx % m] += a.to_c64() * b.to_c64().conj();
    }
    rows.iter().enumerate().map(|(j, r)| r * grid.weight(j)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field::VectorField;

    #[test]
    fn constant_field() {
        let g = Grid::new(3, 8, 2.0, 9, 3.0).unwrap();
        let f = ScalarField::from_fn(&g, |_| 1.0);
        for q in [1.5, 2.0, 4.0] {
            let expect = (4.0f64 * 3.0).powf(1.0 / q);
            assert!((lebesgue_norm(&f, q) - expect).abs() < 1e-12 * expect);
        }
        assert_eq!(lebesgue_norm(&ScalarField::<f64>::zeros(&g), 2.0), 0.0);
    }

    #[test]
    fn gradient_norm_of_linear_field() {
        let g = Grid::new(2, 8, 2.0, 9, 1.0).unwrap();
        let u = VectorField::from_fn(&g, |x| [x[1], 2.0 * x[1], 0.0]);
        // |∇u| = √5 everywhere
        let v = sobolev_seminorm(&u, 2.0, 1);
        assert!((v - (5.0f64 * 2.0).sqrt()).abs() < 1e-12);
        assert!(sobolev_seminorm(&u, 2.0, 2) < 1e-9);
    }

    #[test]
    fn spec_validation() {
        assert!(NormSpec::new(1.0, 1).is_err());
        assert!(NormSpec::new(2.0, 4).is_err());
        assert!(NormSpec::new(2.0, 3).is_ok());
    }
}
