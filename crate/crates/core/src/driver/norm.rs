use rayon::prelude::*;

use super::exponents::ExponentScheme;
use crate::error::{Error, Result};
use crate::fields::{lebesgue_norm, sobolev_seminorm};
use crate::linear::Trajectory;

/// Pieces of the weighted trajectory norm, per spatial exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormTerm {
    /// `‖(1+t) ∂_t u‖_{L_p(L_q)}`
    TimeDerivU,
    /// `‖(1+t) ∇²u‖`
    SecondGradU,
    /// `‖(1+t) ∇∂_t Q‖`
    TimeDerivGradQ,
    /// `‖(1+t) ∇³Q‖`
    ThirdGradQ,
    /// `‖(1+t) ∇Q‖`
    WeightedGradQ,
    /// `‖(u, ∇Q)‖_{L_p(L_q)}`, unweighted
    LpState,
    /// `sup_t ‖(u, ∇Q)‖_{L_q}`
    SupState,
}

impl NormTerm {
    pub const ALL: [NormTerm; 7] = [
        NormTerm::TimeDerivU,
        NormTerm::SecondGradU,
        NormTerm::TimeDerivGradQ,
        NormTerm::ThirdGradQ,
        NormTerm::WeightedGradQ,
        NormTerm::LpState,
        NormTerm::SupState,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NormTerm::TimeDerivU => "dt_u",
            NormTerm::SecondGradU => "grad2_u",
            NormTerm::TimeDerivGradQ => "grad_dt_q",
            NormTerm::ThirdGradQ => "grad3_q",
            NormTerm::WeightedGradQ => "weighted_grad_q",
            NormTerm::LpState => "lp_state",
            NormTerm::SupState => "sup_state",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormComponent {
    pub q: f64,
    pub term: NormTerm,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNormReport {
    pub total: f64,
    pub components: Vec<NormComponent>,
    pub horizon: f64,
    pub stored_states: usize,
    /// Largest share of any time integral `∫ g^p` coming from the last tenth of the horizon.
    pub tail_fraction: f64,
}

/// Per-stamp spatial norms for one exponent: the five integrand values and `‖(u, ∇Q)‖`.
fn stamp_norms(traj: &Trajectory, i: usize, q: f64) -> Result<[f64; 6]> {
    let dt = traj.time_derivative(i)?;
    let s = &traj.states[i];
    let grad_q = sobolev_seminorm(&s.q, q, 1);
    Ok([
        lebesgue_norm(&dt.u, q),
        sobolev_seminorm(&s.u, q, 2),
        sobolev_seminorm(&dt.q, q, 1),
        sobolev_seminorm(&s.q, q, 3),
        grad_q,
        lebesgue_norm(&s.u, q) + grad_q,
    ])
}

/// `(∫ g^p dt)^{1/p}` by the trapezoid rule, and the share of the last tenth of the horizon.
fn lp_time(times: &[f64], g: &[f64], p: f64) -> (f64, f64) {
    let peak = g.iter().fold(0.0f64, |m, &v| m.max(v));
    if peak == 0.0 {
        return (0.0, 0.0);
    }
    let t_end = *times.last().expect("non-empty");
    let cut = times[0] + 0.9 * (t_end - times[0]);
    let (mut total, mut tail) = (0.0, 0.0);
    for k in 0..times.len() - 1 {
        let piece = 0.5 * (times[k + 1] - times[k]) * ((g[k] / peak).powf(p) + (g[k + 1] / peak).powf(p));
        total += piece;
        if times[k] >= cut {
            tail += piece;
        }
    }
    (peak * total.powf(1.0 / p), if total > 0.0 { tail / total } else { 0.0 })
}

/// Weighted trajectory norm `E(U)` over the stored horizon.
pub fn weighted_norm_e(traj: &Trajectory, scheme: &ExponentScheme) -> Result<WeightedNormReport> {
    if traj.len() < 2 {
        return Err(Error::TrajectoryTooShort(traj.len()));
    }
    let p = scheme.p as f64;
    let mut components = Vec::new();
    let mut tail_fraction = 0.0f64;
    for q in scheme.solution_exponents() {
        let rows: Vec<[f64; 6]> =
            (0..traj.len()).into_par_iter().map(|i| stamp_norms(traj, i, q)).collect::<Result<_>>()?;
        let weighted = |k: usize| -> Vec<f64> { rows.iter().zip(&traj.times).map(|(r, t)| (1.0 + t) * r[k]).collect() };
        for (k, term) in NormTerm::ALL[..5].iter().enumerate() {
            let (v, tail) = lp_time(&traj.times, &weighted(k), p);
            tail_fraction = tail_fraction.max(tail);
            components.push(NormComponent { q, term: *term, value: v });
        }
        let plain: Vec<f64> = rows.iter().map(|r| r[5]).collect();
        let (v, tail) = lp_time(&traj.times, &plain, p);
        tail_fraction = tail_fraction.max(tail);
        components.push(NormComponent { q, term: NormTerm::LpState, value: v });
        let sup = plain.iter().fold(0.0f64, |m, &v| m.max(v));
        components.push(NormComponent { q, term: NormTerm::SupState, value: sup });
    }
    Ok(WeightedNormReport {
        total: components.iter().map(|c| c.value).sum(),
        components,
        horizon: *traj.times.last().expect("non-empty") - traj.times[0],
        stored_states: traj.len(),
        tail_fraction,
    })
}
