use crate::error::{Error, Result};

/// Integrability exponents `(θ, p, q0, q1, q2)` for dimension `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentScheme {
    pub n: usize,
    pub theta: f64,
    pub p: usize,
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    /// `(q̃, q, κ)` with `κ = N(1/q̃ − 1/q)`, for the pairs used by the decay estimates.
    pub pairs: Vec<(f64, f64, f64)>,
}

pub fn kappa(n: usize, q_tilde: f64, q: f64) -> f64 {
    n as f64 * (1.0 / q_tilde - 1.0 / q)
}

/// Exponents with `1/q0 = (1+2θ)/N`, `1/q1 = (1+θ)/N`, `1/q2 = θ/N` and
/// `p` the smallest integer above `2/θ + p_margin`.
pub fn exponent_setup(n: usize, theta: f64, p_margin: f64) -> Result<ExponentScheme> {
    let mut problems = Vec::new();
    if n != 2 && n != 3 {
        problems.push(format!("dimension {n} not in {{2, 3}}"));
    }
    if !(theta > 0.0 && theta < 0.5) {
        problems.push(format!("theta = {theta} violates 0 < theta < 1/2"));
    }
    if !(p_margin >= 0.0 && p_margin.is_finite()) {
        problems.push(format!("p_margin = {p_margin} must be finite and non-negative"));
    }
    if !problems.is_empty() {
        return Err(Error::InvalidInput(problems.join("; ")));
    }
    let nf = n as f64;
    let (q0, q1, q2) = (nf / (1.0 + 2.0 * theta), nf / (1.0 + theta), nf / theta);
    let p = (2.0 / theta + p_margin).floor() as usize + 1;
    let scheme = ExponentScheme {
        n,
        theta,
        p,
        q0,
        q1,
        q2,
        pairs: vec![(q0, q1, kappa(n, q0, q1)), (q0, q2, kappa(n, q0, q2)), (q1, q2, kappa(n, q1, q2))],
    };
    scheme.validate()?;
    Ok(scheme)
}

impl ExponentScheme {
    /// Spatial exponents of the solution norm.
    pub fn solution_exponents(&self) -> [f64; 2] {
        [self.q1, self.q2]
    }

    /// Exponents at which the right-hand sides are measured.
    pub fn forcing_exponents(&self) -> [f64; 3] {
        [self.q0, self.q1, self.q2]
    }

    /// Check every derived relation; returns the largest identity defect on success.
    pub fn validate(&self) -> Result<f64> {
        let nf = self.n as f64;
        let (r0, r1, r2) = (1.0 / self.q0, 1.0 / self.q1, 1.0 / self.q2);
        let defects = [
            r0 - r1 - r2,
            nf * (r1 - r2) - 1.0,
            (1.0 - self.theta) * r1 + self.theta * r2 - 1.0 / nf,
        ];
        let worst = defects.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let mut problems = Vec::new();
        if worst > 1e-12 {
            problems.push(format!("exponent identities violated by {worst:.3e}"));
        }
        if !(1.0 < self.q0 && self.q0 < self.q1 && self.q1 < nf && nf < self.q2) {
            problems.push(format!("ordering 1 < q0 < q1 < N < q2 fails for {} {} {}", self.q0, self.q1, self.q2));
        }
        if !(1.0 / (self.p as f64) < self.theta / 2.0) {
            problems.push(format!("1/p = {} not below theta/2", 1.0 / self.p as f64));
        }
        if problems.is_empty() {
            Ok(worst)
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_theta_values() {
        let s = exponent_setup(2, 0.25, 1.0).unwrap();
        assert_eq!((s.q0, s.q1, s.q2, s.p), (4.0 / 3.0, 1.6, 8.0, 10));
        let s = exponent_setup(3, 0.25, 1.0).unwrap();
        assert_eq!((s.q0, s.q1, s.q2), (2.0, 2.4, 12.0));
        assert!(s.p > 8);
        assert_eq!(kappa(2, 2.0, 4.0), 0.5);
    }

    #[test]
    fn rejects_bad_theta() {
        for t in [0.0, 0.5, 0.6, -0.1, f64::NAN] {
            let e = exponent_setup(2, t, 1.0).unwrap_err();
            assert!(e.to_string().contains("0 < theta < 1/2"), "{e}");
        }
        assert!(exponent_setup(4, 0.25, 1.0).is_err());
    }

    #[test]
    fn p_exceeds_two_over_theta() {
        for k in 1..50 {
            let theta = 0.49 * k as f64 / 50.0;
            let s = exponent_setup(3, theta, 0.0).unwrap();
            assert!(s.p as f64 > 2.0 / theta);
            assert!(s.validate().unwrap() <= 1e-12);
        }
    }
}
