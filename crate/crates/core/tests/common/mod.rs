//! Analytic oracles: separable functions `Π_l cos(κ_l x_l + φ_l) · Y(x_N)`
//! with exact derivatives of any order.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use qthalf_core::fields::{Grid, ScalarField, State, TensorField, VectorField};
use qthalf_core::tensor::MatrixN;

/// Wall-normal profile: polynomial plus cosines.
#[derive(Clone, Debug, Default)]
pub struct Profile {
    pub poly: Vec<f64>,
    /// `(amplitude, frequency, phase)` of `A cos(ω y + φ)`.
    pub trig: Vec<(f64, f64, f64)>,
}

impl Profile {
    pub fn poly(c: &[f64]) -> Self {
        Profile { poly: c.to_vec(), trig: vec![] }
    }
    pub fn cos(a: f64, w: f64, phase: f64) -> Self {
        Profile { poly: vec![], trig: vec![(a, w, phase)] }
    }
    pub fn plus(mut self, other: Profile) -> Self {
        if self.poly.len() < other.poly.len() {
            self.poly.resize(other.poly.len(), 0.0);
        }
        for (i, c) in other.poly.iter().enumerate() {
            self.poly[i] += c;
        }
        self.trig.extend(other.trig);
        self
    }

    /// `d^k/dy^k` at `y`.
    pub fn eval(&self, y: f64, k: usize) -> f64 {
        let mut s = 0.0;
        for (i, &c) in self.poly.iter().enumerate() {
            if i >= k {
                let fall: f64 = ((i - k + 1)..=i).map(|v| v as f64).product();
                s += c * fall * y.powi((i - k) as i32);
            }
        }
        for &(a, w, ph) in &self.trig {
            s += a * w.powi(k as i32) * (w * y + ph + k as f64 * FRAC_PI_2).cos();
        }
        s
    }
}

/// `(y (H − y))²` expanded: vanishes with its first derivative at both walls.
pub fn wall_bump(h: f64) -> Profile {
    // y²(H−y)² = H²y² − 2Hy³ + y⁴
    Profile::poly(&[0.0, 0.0, h * h, -2.0 * h, 1.0])
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: f64,
    /// `(κ_l, φ_l)` per tangential axis.
    pub tan: Vec<(f64, f64)>,
    pub profile: Profile,
}

/// Sum of separable terms.
#[derive(Clone, Debug, Default)]
pub struct Sep(pub Vec<Term>);

impl Sep {
    pub fn zero() -> Self {
        Sep(vec![])
    }
    pub fn term(coeff: f64, tan: &[(f64, f64)], profile: Profile) -> Self {
        Sep(vec![Term { coeff, tan: tan.to_vec(), profile }])
    }
    pub fn scaled(&self, s: f64) -> Self {
        Sep(self.0.iter().map(|t| Term { coeff: t.coeff * s, ..t.clone() }).collect())
    }
    pub fn plus(&self, o: &Sep) -> Self {
        Sep(self.0.iter().chain(&o.0).cloned().collect())
    }

    /// `∂^α` at `x`, with `orders[a]` derivatives along axis `a` (axis `n−1` wall-normal).
    pub fn d(&self, n: usize, x: [f64; 3], orders: [usize; 3]) -> f64 {
        self.0
            .iter()
            .map(|t| {
                let mut v = t.coeff * t.profile.eval(x[n - 1], orders[n - 1]);
                for (l, &(k, ph)) in t.tan.iter().enumerate().take(n - 1) {
                    let o = orders[l];
                    v *= k.powi(o as i32) * (k * x[l] + ph + o as f64 * FRAC_PI_2).cos();
                }
                v
            })
            .sum()
    }

    pub fn val(&self, n: usize, x: [f64; 3]) -> f64 {
        self.d(n, x, [0; 3])
    }

    pub fn lap_d(&self, n: usize, x: [f64; 3], extra: [usize; 3]) -> f64 {
        (0..n)
            .map(|l| {
                let mut o = extra;
                o[l] += 2;
                self.d(n, x, o)
            })
            .sum()
    }
}

fn unit(axis: usize) -> [usize; 3] {
    let mut o = [0; 3];
    o[axis] = 1;
    o
}

/// Manufactured `(u, Q, p)` with full symmetric traceless `Q` entries.
pub struct Manufactured {
    pub n: usize,
    pub u: Vec<Sep>,
    pub q: Vec<Vec<Sep>>,
    pub p: Sep,
}

impl Manufactured {
    /// Wall-compatible solution: `u = 0`, `∂_N Q = 0` at `x_N = 0, H`, `div u = 0`.
    pub fn standard(n: usize, l_tan: f64, h: f64) -> Self {
        let k = 2.0 * std::f64::consts::PI / l_tan;
        let pi_h = std::f64::consts::PI / h;
        let g = wall_bump(h);
        // stream function ψ = sin(k x1)·cos(k x2)·g(y); u1 = ∂_N ψ, u_N = −∂_1 ψ
        let tan_psi: Vec<(f64, f64)> = if n == 2 { vec![(k, -FRAC_PI_2)] } else { vec![(k, -FRAC_PI_2), (k, 0.0)] };
        let psi = Sep::term(1.0, &tan_psi, g);
        let dpsi = |axis: usize| -> Sep {
            // derivative of a separable term is again separable
            Sep(psi
                .0
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    if axis == n - 1 {
                        t.profile = derivative_profile(&t.profile);
                    } else {
                        let (kk, ph) = t.tan[axis];
                        t.coeff *= kk;
                        t.tan[axis] = (kk, ph + FRAC_PI_2);
                    }
                    t
                })
                .collect())
        };
        let mut u = vec![Sep::zero(); n];
        u[0] = dpsi(n - 1);
        u[n - 1] = dpsi(0).scaled(-1.0);

        let tan = |ph1: f64, ph2: f64| -> Vec<(f64, f64)> {
            if n == 2 { vec![(k, ph1)] } else { vec![(k, ph1), (k, ph2)] }
        };
        let neumann_a = Profile::cos(1.0, pi_h, 0.0).plus(Profile::cos(0.3, 2.0 * pi_h, 0.0));
        let neumann_b = Profile::cos(0.7, 3.0 * pi_h, 0.0).plus(wall_bump(h).scaled_profile(0.05));
        let mut q = vec![vec![Sep::zero(); n]; n];
        q[0][0] = Sep::term(1.0, &tan(0.0, 0.4), neumann_a.clone());
        q[0][1] = Sep::term(0.8, &tan(-FRAC_PI_2, 0.0), neumann_b.clone());
        if n == 3 {
            q[1][1] = Sep::term(0.6, &tan(0.3, -0.2), neumann_b.clone());
            q[0][2] = Sep::term(0.5, &tan(0.1, 0.7), neumann_a.clone());
            q[1][2] = Sep::term(-0.4, &tan(0.9, 0.0), neumann_b);
        }
        let mut tr = Sep::zero();
        for d in 0..n - 1 {
            tr = tr.plus(&q[d][d]);
        }
        q[n - 1][n - 1] = tr.scaled(-1.0);
        for a in 0..n {
            for b in 0..a {
                q[a][b] = q[b][a].clone();
            }
        }
        let p = Sep::term(1.0, &tan(0.0, 0.2), Profile::cos(1.0, 1.3, -FRAC_PI_2).plus(Profile::poly(&[0.2, 0.1])));
        Manufactured { n, u, q, p }
    }

    /// `(f, G)` with `λU − AU = (f, G)` evaluated pointwise.
    pub fn forcing(&self, x: [f64; 3], lambda: Complex64, beta: f64, a: f64) -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
        let n = self.n;
        let f = (0..n)
            .map(|i| {
                let mut v = lambda * self.u[i].val(n, x);
                let mut real = -self.u[i].lap_d(n, x, [0; 3]) + self.p.d(n, x, unit(i));
                for j in 0..n {
                    real += beta * (self.q[i][j].lap_d(n, x, unit(j)) - a * self.q[i][j].d(n, x, unit(j)));
                }
                v += real;
                v
            })
            .collect();
        let g = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = 0.5 * (self.u[i].d(n, x, unit(j)) + self.u[j].d(n, x, unit(i)));
                        lambda * self.q[i][j].val(n, x) - beta * d - self.q[i][j].lap_d(n, x, [0; 3])
                            + a * self.q[i][j].val(n, x)
                    })
                    .collect()
            })
            .collect();
        (f, g)
    }

    pub fn forcing_fields(
        &self,
        grid: &Grid,
        lambda: Complex64,
        beta: f64,
        a: f64,
    ) -> (VectorField<Complex64>, TensorField<Complex64>) {
        let n = self.n;
        let samples: Vec<_> = (0..grid.len()).map(|i| self.forcing(grid.coords(i), lambda, beta, a)).collect();
        let f = VectorField::from_components(
            (0..n).map(|i| ScalarField::from_vec(grid, samples.iter().map(|s| s.0[i]).collect()).unwrap()).collect(),
        )
        .unwrap();
        let g = TensorField::from_components(
            (0..n * n)
                .map(|c| ScalarField::from_vec(grid, samples.iter().map(|s| s.1[c / n][c % n]).collect()).unwrap())
                .collect(),
        )
        .unwrap();
        (f, g)
    }

    pub fn state(&self, grid: &Grid) -> State {
        let n = self.n;
        State {
            u: VectorField::from_fn(grid, |x| {
                let mut v = [0.0; 3];
                for i in 0..n {
                    v[i] = self.u[i].val(n, x);
                }
                v
            }),
            q: TensorField::from_fn(grid, |x| MatrixN::from_fn(n, |i, j| self.q[i][j].val(n, x))),
        }
    }

    pub fn pressure(&self, grid: &Grid) -> ScalarField {
        ScalarField::from_fn(grid, |x| self.p.val(self.n, x))
    }
}

fn derivative_profile(p: &Profile) -> Profile {
    let poly = p.poly.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let trig = p.trig.iter().map(|&(a, w, ph)| (a * w, w, ph + FRAC_PI_2)).collect();
    Profile { poly, trig }
}

trait ScaledProfile {
    fn scaled_profile(self, s: f64) -> Profile;
}

impl ScaledProfile for Profile {
    fn scaled_profile(self, s: f64) -> Profile {
        Profile {
            poly: self.poly.iter().map(|c| c * s).collect(),
            trig: self.trig.iter().map(|&(a, w, ph)| (a * s, w, ph)).collect(),
        }
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Observed orders between successive halvings.
pub fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Smooth compatible initial state: velocity from the discrete curl of a
/// stream function vanishing to second order at both walls, Q with
/// Neumann-compatible profiles; wall conditions applied.
pub fn compatible_state(grid: &Grid, amp: f64) -> State {
    use qthalf_core::fields::{apply_boundary, partial};
    let n = grid.dim();
    let h = grid.h_wall();
    let l = grid.l_tan();
    let k = 2.0 * std::f64::consts::PI / l;
    let psi = ScalarField::from_fn(grid, |x| {
        let y = x[n - 1];
        let mut v = (y * (h - y)).powi(2) * (-(y - 0.3 * h).powi(2)).exp();
        for a in 0..n - 1 {
            v *= 1.0 + 0.5 * (k * x[a] + 0.3 * a as f64).cos() + 0.3 * (2.0 * k * x[a]).sin();
        }
        amp * v
    });
    let mut comps = vec![ScalarField::zeros(grid); n];
    comps[0] = partial(&psi, &[n - 1]);
    comps[n - 1] = partial(&psi, &[0]).scale(-1.0);
    let u = VectorField::from_components(comps).unwrap();
    let q = TensorField::from_fn(grid, |x| {
        let y = x[n - 1];
        let c1 = (std::f64::consts::PI * y / h).cos();
        let c2 = (2.0 * std::f64::consts::PI * y / h).cos();
        let t = (k * x[0]).cos();
        MatrixN::from_fn(n, |i, j| amp * (0.5 * c1 * t * (i + 1) as f64 * (j + 1) as f64 + 0.3 * c2 * ((i + j) as f64)))
    });
    apply_boundary(&State { u, q })
}
