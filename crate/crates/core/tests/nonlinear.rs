mod common;

use common::{compatible_state, loglog_slope, orders};
use proptest::prelude::*;
use qthalf_core::driver::exponent_setup;
use qthalf_core::fields::{jacobian, Grid, ScalarField, State, TensorField, VectorField};
use qthalf_core::nonlinear::{
    assemble, assemble_f, assemble_f_expanded, assemble_g, assemble_g_from_coupling, rhs_norms, RhsPair,
};
use qthalf_core::tensor::{bulk_derivative, MatrixN, ModelParams};

fn params(n: usize) -> ModelParams {
    ModelParams::new(n, 0.7, 0.5, 1.2, 0.8).unwrap()
}

fn grid(n: usize) -> Grid {
    if n == 2 {
        Grid::new(2, 16, 8.0, 25, 3.0).unwrap()
    } else {
        Grid::new(3, 8, 8.0, 17, 3.0).unwrap()
    }
}

/// Gaussian bumps centred in the slab, negligible at both walls.
fn gaussian_state(g: &Grid, seed: u64) -> State {
    gaussian_state_width(g, seed, 0.1 * g.h_wall())
}

fn gaussian_state_width(g: &Grid, seed: u64, width: f64) -> State {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = g.dim();
    let l = g.l_tan();
    let h = g.h_wall();
    let c: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let bump = move |x: [f64; 3], s: usize| -> f64 {
        let mut r2 = ((x[n - 1] - 0.5 * h - width * c[s]) / width).powi(2);
        for a in 0..n - 1 {
            r2 += ((x[a] - 0.5 * l - 0.1 * l * c[s + 1 + a]) / (0.12 * l)).powi(2);
        }
        c[s + 3] * (-r2).exp()
    };
    let u = VectorField::from_fn(g, |x| [bump(x, 0), bump(x, 4), if n == 3 { bump(x, 8) } else { 0.0 }]);
    let q = TensorField::from_fn(g, |x| MatrixN::from_fn(n, |i, j| bump(x, 12 + 4 * (i.min(j) * n + i.max(j)))));
    State { u, q }
}

#[test]
fn trivial_cases() {
    for n in [2, 3] {
        let g = grid(n);
        let p = params(n);
        let zero = State::zeros(&g);
        let r = assemble(&zero, &p).unwrap();
        assert_eq!(r.f.max_abs() + r.g.max_abs(), 0.0);

        let s = compatible_state(&g, 0.8);
        // u = 0: G is the bulk derivative pointwise
        let gq = assemble_g(&VectorField::zeros(&g), &s.q, &p).unwrap();
        for idx in 0..g.len() {
            let want = bulk_derivative(&s.q.sample(idx), &p);
            for i in 0..n {
                for j in 0..n {
                    assert!((gq.comp(i, j).data()[idx] - want.get(i, j)).abs() <= 1e-13);
                }
            }
        }
        // Q = 0: f is the convective term alone
        let f = assemble_f(&s.u, &TensorField::zeros(&g), &p).unwrap();
        let gu = jacobian(&s.u);
        for i in 0..n {
            let mut adv = ScalarField::zeros(&g);
            for j in 0..n {
                adv = &adv + &(s.u.comp(j) * &gu[i * n + j]);
            }
            assert!((f.comp(i) + &adv).max_abs() <= 1e-12 * adv.max_abs().max(1.0));
        }
    }
}

#[test]
fn g_is_symmetric_traceless_and_routes_agree() {
    for n in [2, 3] {
        let g = grid(n);
        let p = params(n);
        for seed in 0..4 {
            let s = gaussian_state(&g, seed).add(&compatible_state(&g, 0.3));
            let a = assemble_g(&s.u, &s.q, &p).unwrap();
            let b = assemble_g_from_coupling(&s.u, &s.q, &p).unwrap();
            let (asym, tr) = a.invariant_residuals();
            assert!(asym <= 1e-12 && tr <= 1e-12, "asym {asym} trace {tr}");
            assert!(a.sub(&b).max_abs() <= 1e-12, "{}", a.sub(&b).max_abs());
        }
    }
}

#[test]
fn f_routes_converge() {
    for (n, walls) in [(2, [65, 129, 257]), (3, [65, 129, 257])] {
        let p = params(n);
        let errors: Vec<f64> = walls
            .iter()
            .map(|&m| {
                let n_tan = if n == 2 { 64 } else { 32 };
                let l = if n == 2 { 16.0 } else { 10.0 };
                let g = Grid::new(n, n_tan, l, m, 8.0).unwrap();
                let s = gaussian_state_width(&g, 7, 0.8);
                let a = assemble_f(&s.u, &s.q, &p).unwrap();
                let b = assemble_f_expanded(&s.u, &s.q, &p).unwrap();
                a.sub(&b).max_abs() / a.max_abs()
            })
            .collect();
        for o in orders(&errors) {
            assert!(o >= 1.9, "N = {n}: {errors:?}");
        }
    }
}

#[test]
fn shift_equivariance() {
    for n in [2, 3] {
        let g = grid(n);
        let p = params(n);
        let s = gaussian_state(&g, 3);
        let base = assemble(&s, &p).unwrap();
        for axis in 0..n - 1 {
            for cells in [1, 3] {
                let shifted = State { u: s.u.roll(axis, cells), q: s.q.roll(axis, cells) };
                let r = assemble(&shifted, &p).unwrap();
                let df = r.f.sub(&base.f.roll(axis, cells)).max_abs();
                let dg = r.g.sub(&base.g.roll(axis, cells)).max_abs();
                assert!(df <= 1e-12 * base.f.max_abs().max(1.0) && dg <= 1e-12, "{df} {dg}");
            }
        }
    }
}

#[test]
fn quadratic_smallness() {
    let g = grid(2);
    let p = params(2);
    let scheme = exponent_setup(2, 0.25, 1.0).unwrap();
    let s = compatible_state(&g, 1.0);
    let scales = [1e-4, 1e-3, 1e-2, 1e-1];
    let sizes: Vec<f64> = scales
        .iter()
        .map(|&c| rhs_norms(&assemble(&s.scale(c), &p).unwrap(), &scheme, 0.0).weighted_total())
        .collect();
    let slope = loglog_slope(&scales, &sizes);
    assert!(slope >= 1.9, "slope {slope}: {sizes:?}");
}

#[test]
fn rhs_norms_zero_and_homogeneous() {
    let g = grid(2);
    let scheme = exponent_setup(2, 0.25, 1.0).unwrap();
    let z = rhs_norms(&RhsPair::zeros(&g), &scheme, 2.0);
    assert_eq!(z.weight, 3.0);
    assert!(z.entries.iter().all(|e| e.1 == 0.0 && e.2 == 0.0));
    let r = assemble(&compatible_state(&g, 1.0), &params(2)).unwrap();
    let a = rhs_norms(&r, &scheme, 0.0);
    let b = rhs_norms(&r.scale(-2.5), &scheme, 0.0);
    for (x, y) in a.entries.iter().zip(&b.entries) {
        assert!((2.5 * x.1 - y.1).abs() <= 1e-12 * y.1 && (2.5 * x.2 - y.2).abs() <= 1e-12 * y.2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn invariants_hold_for_random_states(seed in 0u64..10_000, amp in 0.01f64..3.0, n in 2usize..=3) {
        let g = grid(n);
        let s = gaussian_state(&g, seed).scale(amp);
        let r = assemble(&s, &params(n)).unwrap();
        let (asym, tr) = r.g.invariant_residuals();
        let scale = r.g.max_abs().max(1.0);
        prop_assert!(asym <= 1e-12 * scale && tr <= 1e-12 * scale);
        prop_assert!(r.f.max_abs().is_finite());
    }
}
