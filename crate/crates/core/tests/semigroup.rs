mod common;

use common::{compatible_state, loglog_slope};
use qthalf_core::fields::{Grid, State, TensorField, VectorField};
use qthalf_core::linear::{linear_evolve, semigroup_apply, ContourSpec, Scheme, SemigroupMode};
use qthalf_core::tensor::ModelParams;

fn setup() -> (Grid, ModelParams, State) {
    let g = Grid::new(2, 16, 8.0, 33, 3.0).unwrap();
    let p = ModelParams::new(2, 0.8, 0.5, 1.0, 1.0).unwrap();
    let s = compatible_state(&g, 1.0);
    (g, p, s)
}

fn rel(a: &State, b: &State) -> f64 {
    a.sub(b).max_abs() / b.max_abs()
}

fn contour(eps: f64) -> SemigroupMode {
    SemigroupMode::Contour(ContourSpec::new(eps))
}

#[test]
fn zero_data_stays_zero() {
    let (g, p, _) = setup();
    let z = State::zeros(&g);
    for mode in [contour(0.8), SemigroupMode::Implicit { steps: 10 }] {
        assert_eq!(semigroup_apply(1.0, &z, &p, mode).unwrap().max_abs(), 0.0);
    }
    let tr = linear_evolve(&z, None, &p, 0.5, 0.05, Scheme::BackwardEuler, 1).unwrap();
    assert!(tr.states.iter().all(|s| s.max_abs() == 0.0));
}

#[test]
fn contour_matches_implicit_stepping() {
    let (_, p, s0) = setup();
    let exact = semigroup_apply(1.0, &s0, &p, contour(0.8)).unwrap();
    let coarse = rel(&semigroup_apply(1.0, &s0, &p, SemigroupMode::Implicit { steps: 50 }).unwrap(), &exact);
    let fine = rel(&semigroup_apply(1.0, &s0, &p, SemigroupMode::Implicit { steps: 200 }).unwrap(), &exact);
    assert!(fine <= 1e-3, "fine {fine}");
    assert!(fine < coarse, "coarse {coarse} fine {fine}");
}

#[test]
fn contour_radius_does_not_matter() {
    let (_, p, s0) = setup();
    let t = 0.7;
    let a = semigroup_apply(t, &s0, &p, contour(0.8)).unwrap();
    let spec = ContourSpec { omega: Some(2.0 / t), ..ContourSpec::new(0.8) };
    let b = semigroup_apply(t, &s0, &p, SemigroupMode::Contour(spec)).unwrap();
    assert!(rel(&a, &b) <= 1e-6, "{}", rel(&a, &b));
    let checked = ContourSpec { doubling_tolerance: Some(1e-6), ..ContourSpec::new(0.8) };
    assert!(semigroup_apply(t, &s0, &p, SemigroupMode::Contour(checked)).is_ok());
}

#[test]
fn small_time_linear_departure() {
    let (_, p, s0) = setup();
    let ts = [0.02, 0.01, 0.005];
    let d: Vec<f64> = ts.iter().map(|&t| semigroup_apply(t, &s0, &p, contour(0.8)).unwrap().sub(&s0).max_abs()).collect();
    let slope = loglog_slope(&ts, &d);
    assert!(slope >= 0.9, "slope {slope}: {d:?}");
}

#[test]
fn backward_euler_is_first_order() {
    let (_, p, s0) = setup();
    let exact = semigroup_apply(1.0, &s0, &p, contour(0.8)).unwrap();
    let errs: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&dt| {
            let tr = linear_evolve(&s0, None, &p, 1.0, dt, Scheme::BackwardEuler, 1_000_000).unwrap();
            assert!((tr.times.last().unwrap() - 1.0).abs() < 1e-12);
            rel(tr.states.last().unwrap(), &exact)
        })
        .collect();
    let slope = loglog_slope(&[0.04, 0.02, 0.01], &errs);
    assert!((0.85..=1.3).contains(&slope), "slope {slope}: {errs:?}");
}

#[test]
fn forced_schemes_agree() {
    // constant forcing: CN refinement as reference, BE visibly first order
    let (g, p, s0) = setup();
    let f = compatible_state(&g, 0.5);
    let (fu, fq): (VectorField, TensorField) = (f.u.clone(), f.q.clone());
    let forcing = move |_t: f64| (fu.clone(), fq.clone());
    let a = linear_evolve(&s0, Some(&forcing), &p, 0.5, 0.0025, Scheme::CrankNicolson, 1_000_000).unwrap();
    let b = linear_evolve(&s0, Some(&forcing), &p, 0.5, 0.00125, Scheme::CrankNicolson, 1_000_000).unwrap();
    let c = linear_evolve(&s0, Some(&forcing), &p, 0.5, 0.01, Scheme::BackwardEuler, 1_000_000).unwrap();
    let ref_state = b.states.last().unwrap();
    assert!(rel(a.states.last().unwrap(), ref_state) <= 1e-4);
    let be = rel(c.states.last().unwrap(), ref_state);
    assert!(be <= 5e-2 && be > 1e-5, "{be}");
}
