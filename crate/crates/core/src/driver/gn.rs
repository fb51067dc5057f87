use super::exponents::ExponentScheme;
use crate::error::{Error, Result};
use crate::fields::{sobolev_seminorm, Components};

/// `‖∇^ℓ v‖_∞` against `‖∇^{ℓ+1} v‖_{q1}^{1−θ} ‖∇^{ℓ+1} v‖_{q2}^θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnRatio {
    pub numerator: f64,
    pub denominator: f64,
    /// `None` when the denominator vanishes.
    pub ratio: Option<f64>,
}

pub fn gn_check<F: Components<f64> + ?Sized>(v: &F, scheme: &ExponentScheme, level: usize) -> Result<GnRatio> {
    if level > 1 {
        return Err(Error::InvalidInput(format!("level {level} not in {{0, 1}}")));
    }
    let defect = (1.0 - scheme.theta) / scheme.q1 + scheme.theta / scheme.q2 - 1.0 / scheme.n as f64;
    if defect.abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("exponents miss (1-theta)/q1 + theta/q2 = 1/N by {defect:.3e}")));
    }
    let numerator = sobolev_seminorm(v, f64::INFINITY, level);
    let a = sobolev_seminorm(v, scheme.q1, level + 1);
    let b = sobolev_seminorm(v, scheme.q2, level + 1);
    let denominator = a.powf(1.0 - scheme.theta) * b.powf(scheme.theta);
    let ratio = (denominator > 0.0).then(|| numerator / denominator);
    Ok(GnRatio { numerator, denominator, ratio })
}
