use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qthalf_core::driver::{exponent_setup, gn_check, ExponentScheme};
use qthalf_core::fields::{Grid, ScalarField};

use crate::config::RunConfig;
use crate::report::{Metric, Report, Series};
use crate::{CliError, Context};

const SOURCE: &str = "qthalf_core::driver::gn_check";

/// Random coefficients of `Σ a_{k,m} cos(2πk·x/L + φ_{k,m}) sin(mπ x_N/H)`.
struct Modes(Vec<(usize, usize, usize, f64, f64)>);

impl Modes {
    fn draw(rng: &mut ChaCha8Rng, n: usize, k_max: usize, m_max: usize) -> Self {
        let mut modes = Vec::new();
        for axis in 0..n - 1 {
            for k in 0..=k_max {
                for m in 1..=m_max {
                    let amp: f64 = rng.gen_range(-1.0..1.0);
                    let phase: f64 = rng.gen_range(0.0..2.0 * PI);
                    modes.push((axis, k, m, amp, phase));
                }
            }
        }
        Modes(modes)
    }

    fn sample(&self, grid: &Grid) -> ScalarField {
        let n = grid.dim();
        let (l, h) = (grid.l_tan(), grid.h_wall());
        ScalarField::from_fn(grid, |x| {
            self.0
                .iter()
                .map(|&(axis, k, m, amp, phase)| {
                    amp * (2.0 * PI * k as f64 * x[axis] / l + phase).cos() * (m as f64 * PI * x[n - 1] / h).sin()
                })
                .sum()
        })
    }
}

fn ratio(v: &ScalarField, scheme: &ExponentScheme, level: usize, what: &str) -> Result<f64, CliError> {
    let r = gn_check(v, scheme, level).context(|| format!("gn-check: {what}"))?;
    Ok(r.ratio.unwrap_or(f64::NAN))
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let cfg = &config.gn;
    let n = config.model.n;
    let scheme = exponent_setup(n, config.scheme.theta, config.scheme.p_margin).context(|| "gn-check: exponents".into())?;
    let coarse = Grid::new(n, cfg.n_tan, cfg.l_tan, cfg.n_wall, cfg.h_wall).context(|| "gn-check: grid".into())?;
    let fine = Grid::new(n, 2 * cfg.n_tan, cfg.l_tan, 2 * cfg.n_wall - 1, cfg.h_wall).context(|| "gn-check: fine grid".into())?;
    let tol = &config.tolerances;

    let mut dilation = Series::new("gn_dilation", &["level", "scale", "ratio"]);
    let mut metrics = Vec::new();
    let (mid, depth) = (0.5 * cfg.l_tan, 0.5 * cfg.h_wall);
    for level in [0, 1] {
        let mut ratios = Vec::with_capacity(cfg.scales.len());
        for &s in &cfg.scales {
            let bump = ScalarField::from_fn(&coarse, |x| {
                let mut r2 = ((x[n - 1] - depth) / s).powi(2);
                for a in 0..n - 1 {
                    r2 += ((x[a] - mid) / s).powi(2);
                }
                (-r2).exp()
            });
            let r = ratio(&bump, &scheme, level, &format!("dilation scale {s}"))?;
            dilation.push(vec![level as f64, s, r]);
            ratios.push(r);
        }
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        metrics.push(Metric::at_most(&format!("dilation_variation_level_{level}"), hi / lo - 1.0, tol.gn_variation, SOURCE));
    }

    let mut random = Series::new("gn_random", &["sample", "level", "coarse", "fine"]);
    let mut rng = ChaCha8Rng::seed_from_u64(config.run.seed);
    let mut worst = [[0.0f64; 2]; 2];
    for i in 0..cfg.samples {
        let modes = Modes::draw(&mut rng, n, cfg.k_max, cfg.m_max);
        let (vc, vf) = (modes.sample(&coarse), modes.sample(&fine));
        for level in [0, 1] {
            let rc = ratio(&vc, &scheme, level, &format!("random sample {i}"))?;
            let rf = ratio(&vf, &scheme, level, &format!("random sample {i}, refined"))?;
            random.push(vec![i as f64, level as f64, rc, rf]);
            worst[level][0] = worst[level][0].max(rc);
            worst[level][1] = worst[level][1].max(rf);
        }
    }
    for (level, [c, f]) in worst.iter().enumerate() {
        metrics.push(Metric::at_most(&format!("random_max_level_{level}_refined_over_coarse"), f / c, 1.0 + tol.gn_refinement, SOURCE));
        metrics.push(Metric::at_most(&format!("random_max_level_{level}"), *c, f64::MAX, SOURCE));
    }
    Ok(Report::new(config, metrics, vec![dilation, random]))
}
