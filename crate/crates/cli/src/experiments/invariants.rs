use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qthalf_core::fields::{Grid, State, TensorField, VectorField};
use qthalf_core::nonlinear::assemble_g;
use qthalf_core::tensor::{
    bulk_derivative, coupling_tensor_s, molecular_field, stress_tensors, strain_and_vorticity, MatrixN, ModelParams,
    SymTraceless,
};

use crate::config::RunConfig;
use crate::report::{Metric, Report};
use crate::{CliError, Context};

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> MatrixN {
    MatrixN::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

fn random_q(rng: &mut ChaCha8Rng, n: usize) -> SymTraceless {
    SymTraceless::project(&random_matrix(rng, n))
}

fn asym(m: &MatrixN) -> f64 {
    m.asymmetry()
}

/// Smooth random fields: a few tangential and wall-normal harmonics.
fn random_state(rng: &mut ChaCha8Rng, grid: &Grid) -> State {
    let n = grid.dim();
    let k = 2.0 * std::f64::consts::PI / grid.l_tan();
    let w = std::f64::consts::PI / grid.h_wall();
    let mut coeffs = [[0.0f64; 4]; 16];
    for c in coeffs.iter_mut() {
        for v in c.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    let wave = move |x: [f64; 3], s: usize| -> f64 {
        let c = coeffs[s];
        let mut v = c[0] * (w * x[n - 1] * (1.0 + c[1].abs())).sin();
        for a in 0..n - 1 {
            v *= (k * x[a] * (1.0 + (2.0 * c[2].abs()).floor()) + 3.0 * c[3]).cos();
        }
        v
    };
    let u = VectorField::from_fn(grid, |x| [wave(x, 0), wave(x, 1), if n == 3 { wave(x, 2) } else { 0.0 }]);
    let q = TensorField::from_fn(grid, |x| MatrixN::from_fn(n, |i, j| wave(x, 3 + i.min(j) * n + i.max(j))));
    State { u, q }
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let tol = config.tolerances.invariant_residual;
    let mut rng = ChaCha8Rng::seed_from_u64(config.run.seed);
    // worst residual per check, over both dimensions
    let mut worst = [0.0f64; 8];
    for n in [2usize, 3] {
        let params = ModelParams::new(n, config.model.xi, config.model.a, config.model.b, config.model.c)
            .context(|| format!("invariants: model parameters for N = {n}"))?;
        for _ in 0..config.invariants.instances {
            let m = random_matrix(&mut rng, n);
            let q = SymTraceless::project(&m);
            worst[0] = worst[0].max(asym(q.matrix())).max(q.matrix().trace().abs());
            worst[1] = worst[1].max(bulk_derivative(&q, &params).matrix().trace().abs());
            let lap = random_q(&mut rng, n);
            let h = molecular_field(&q, &lap, &params);
            worst[2] = worst[2].max(asym(h.matrix())).max(h.matrix().trace().abs());
            let grad_q: Vec<MatrixN> = (0..n).map(|_| *random_q(&mut rng, n).matrix()).collect();
            let (tau, sigma) = stress_tensors(&q, &h, &grad_q, &params).context(|| "invariants: stresses".into())?;
            worst[3] = worst[3].max(asym(&tau));
            worst[4] = worst[4].max((sigma + sigma.transpose()).max_abs());
            let mut grad_u = random_matrix(&mut rng, n);
            let tr = grad_u.trace() / n as f64;
            for i in 0..n {
                grad_u.set(i, i, grad_u.get(i, i) - tr);
            }
            let s = coupling_tensor_s(&grad_u, &q, &params).context(|| "invariants: coupling".into())?;
            worst[5] = worst[5].max(s.trace().abs());
            let s0 = coupling_tensor_s(&grad_u, &SymTraceless::zeros(n), &params).context(|| "invariants: coupling".into())?;
            let (d, _) = strain_and_vorticity(&grad_u).context(|| "invariants: strain".into())?;
            worst[7] = worst[7].max((s0 - d.scale(params.beta())).max_abs());
        }
        let grid = if n == 2 {
            Grid::new(2, 16, 8.0, 17, 3.0)
        } else {
            Grid::new(3, 8, 8.0, 9, 3.0)
        }
        .context(|| "invariants: grid".into())?;
        for _ in 0..config.invariants.fields {
            let s = random_state(&mut rng, &grid);
            let g = assemble_g(&s.u, &s.q, &params).context(|| "invariants: assemble G".into())?;
            let (a, t) = g.invariant_residuals();
            worst[6] = worst[6].max(a).max(t);
        }
    }
    let names = [
        ("sym_traceless_closure", "qthalf_core::tensor::SymTraceless::project"),
        ("trace_bulk_derivative", "qthalf_core::tensor::bulk_derivative"),
        ("molecular_field_sym_traceless", "qthalf_core::tensor::molecular_field"),
        ("tau_symmetric", "qthalf_core::tensor::stress_tensors"),
        ("sigma_antisymmetric", "qthalf_core::tensor::stress_tensors"),
        ("trace_s_traceless_gradient", "qthalf_core::tensor::coupling_tensor_s"),
        ("g_sym_traceless", "qthalf_core::nonlinear::assemble_g"),
        ("s_at_zero_q_is_beta_d", "qthalf_core::tensor::coupling_tensor_s"),
    ];
    let metrics = names.iter().zip(worst).map(|((name, src), v)| Metric::at_most(name, v, tol, src)).collect();
    Ok(Report::new(config, metrics, Vec::new()))
}
