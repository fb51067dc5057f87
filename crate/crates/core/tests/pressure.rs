mod common;

use common::{orders, Profile, Sep};
use qthalf_core::fields::{diff, Grid, ScalarField, TensorField, VectorField};
use qthalf_core::linear::{div_elastic, pressure_solve};
use qthalf_core::tensor::{MatrixN, ModelParams};
use rand::{Rng, SeedableRng};

#[test]
fn zero_fields_give_zero_pressure() {
    let g = Grid::new(2, 8, 4.0, 17, 2.0).unwrap();
    let p = ModelParams::new(2, 1.0, 0.5, 1.0, 1.0).unwrap();
    let pr = pressure_solve(&VectorField::<f64>::zeros(&g), &TensorField::zeros(&g), &p).unwrap();
    assert_eq!(pr.max_abs(), 0.0);
}

#[test]
fn manufactured_pressure_converges() {
    // u = ∇χ so Δu = ∇Δχ = ∇p* with p* = Δχ vanishing on the wall
    let l = 2.0 * std::f64::consts::PI;
    let k = 1.0;
    let chi = Sep::term(1.0, &[(k, 0.0)], Profile::poly(&[0.0, 0.0, 0.0, 1.0, -0.1]))
        .plus(&Sep::term(0.3, &[(0.0, 0.0)], Profile::poly(&[0.0, 0.0, 0.0, 1.0])))
        .plus(&Sep::term(0.5, &[(2.0 * k, 0.4)], Profile::poly(&[0.0, 0.0, 0.0, 0.0, 1.0])));
    let params = ModelParams::new(2, 1.0, 0.5, 1.0, 1.0).unwrap();
    let errors: Vec<f64> = [33, 65, 129]
        .iter()
        .map(|&m| {
            let g = Grid::new(2, 16, l, m, 2.0).unwrap();
            let u = VectorField::from_fn(&g, |x| [chi.d(2, x, [1, 0, 0]), chi.d(2, x, [0, 1, 0]), 0.0]);
            let exact = ScalarField::from_fn(&g, |x| chi.lap_d(2, x, [0; 3]));
            let p = pressure_solve(&u, &TensorField::zeros(&g), &params).unwrap();
            (&p - &exact).max_abs()
        })
        .collect();
    for o in orders(&errors) {
        assert!(o >= 1.9, "{errors:?}");
    }
}

/// Discrete pairing `(w − ∇p, ∇φ)`: piecewise-linear in `x_N`, lumped tangentially.
fn pairing(g: &Grid, w: &VectorField, p: &ScalarField, phi: &ScalarField) -> (f64, f64) {
    let n = g.dim();
    let m = g.n_wall();
    let h = g.dy();
    let cell = g.dx().powi(n as i32 - 1);
    let mut total = 0.0;
    let mut grad_sq = 0.0;
    for a in 0..n - 1 {
        let dp = diff(p, a, 1).unwrap();
        let dphi = diff(phi, a, 1).unwrap();
        for c in 0..g.n_columns() {
            for j in 0..m {
                total += g.weight(j) * (w.comp(a).at(c, j) - dp.at(c, j)) * dphi.at(c, j);
                grad_sq += g.weight(j) * dphi.at(c, j).powi(2);
            }
        }
    }
    let wn = w.comp(n - 1);
    for c in 0..g.n_columns() {
        for j in 0..m - 1 {
            let dphi = (phi.at(c, j + 1) - phi.at(c, j)) / h;
            let dp = (p.at(c, j + 1) - p.at(c, j)) / h;
            let wavg = 0.5 * (wn.at(c, j) + wn.at(c, j + 1));
            total += cell * h * (wavg - dp) * dphi;
            grad_sq += cell * h * dphi * dphi;
        }
    }
    (total, grad_sq.sqrt())
}

#[test]
fn weak_form_residual_vanishes() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3] {
        let n_tan = if n == 2 { 16 } else { 8 };
        let g = Grid::new(n, n_tan, 6.0, 17, 2.0).unwrap();
        let params = ModelParams::new(n, 0.8, 0.5, 1.0, 1.0).unwrap();
        let st = common::compatible_state(&g, 1.0);
        let pr = pressure_solve(&st.u, &st.q, &params).unwrap();
        let w = qthalf_core::fields::vector_laplacian(&st.u).sub(&div_elastic(&st.q, params.a).scale(params.beta()));
        let w_norm = qthalf_core::fields::lebesgue_norm(&w, 2.0);
        let kmax = n_tan / 4;
        for _ in 0..50 {
            // band-limited tangentially, arbitrary in x_N, zero on the wall
            let modes: Vec<(f64, f64, f64)> =
                (0..3).map(|_| (rng.gen_range(0..=kmax) as f64, rng.gen_range(0.0..6.3), rng.gen_range(-1.0..1.0))).collect();
            let nodal: Vec<f64> = (0..g.n_wall()).map(|j| if j == 0 { 0.0 } else { rng.gen_range(-1.0..1.0) }).collect();
            let base = 2.0 * std::f64::consts::PI / g.l_tan();
            let phi = ScalarField::from_fn(&g, |x| {
                let j = (x[n - 1] / g.dy()).round() as usize;
                let mut t = 0.0;
                for &(kk, ph, a) in &modes {
                    let mut v = a * (base * kk * x[0] + ph).cos();
                    if n == 3 {
                        v *= (base * kk * x[1] - ph).cos();
                    }
                    t += v;
                }
                t * nodal[j]
            });
            let (pair, grad) = pairing(&g, &w, &pr, &phi);
            assert!(pair.abs() <= 1e-8 * w_norm * grad, "pairing {pair} vs {}", w_norm * grad);
        }
    }
    let _ = MatrixN::zeros(2);
}
