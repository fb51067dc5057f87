//! Complex banded matrices with partial-pivoting LU.

use num_complex::Complex64;

/// `n × n` matrix with `kl` sub- and `ku` super-diagonals. Each row keeps
/// `kl` extra super-diagonal slots for the fill-in created by pivoting.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![Complex64::default(); n * width] }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl, "({i}, {j}) outside band");
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if j + self.kl >= i && j <= i + self.ku + self.kl {
            self.data[self.slot(i, j)]
        } else {
            Complex64::default()
        }
    }

    /// # Panics
    /// If `(i, j)` lies outside the declared band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band kl={} ku={}", self.kl, self.ku);
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn clear_row(&mut self, i: usize) {
        let w = self.width;
        self.data[i * w..(i + 1) * w].fill(Complex64::default());
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.width)
            .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku + self.kl).min(self.n - 1);
                (lo..=hi).map(|j| self.data[self.slot(i, j)] * x[j]).sum()
            })
            .collect()
    }

    /// Factorize; on failure returns the row of the zero pivot.
    pub fn factor(mut self) -> Result<BandLu, usize> {
        let n = self.n;
        let reach = self.ku + self.kl;
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.slot(k, k)].norm();
            for i in k + 1..=last {
                let v = self.data[self.slot(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > scale * 1e-300) || !best.is_finite() {
                return Err(k);
            }
            piv[k] = p;
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
            }
            let inv = 1.0 / self.data[self.slot(k, k)];
            for i in k + 1..=last {
                let s = self.slot(i, k);
                let l = self.data[s] * inv;
                self.data[s] = l;
                if l == Complex64::default() {
                    continue;
                }
                for j in k + 1..=jmax {
                    let a = self.data[self.slot(k, j)];
                    let t = self.slot(i, j);
                    self.data[t] -= l * a;
                }
            }
        }
        Ok(BandLu { m: self, piv })
    }
}

/// LU factors of a [`BandMatrix`].
#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let a = &self.m;
        let n = a.n;
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk == Complex64::default() {
                continue;
            }
            for i in k + 1..=(k + a.kl).min(n - 1) {
                b[i] -= a.data[a.slot(i, k)] * bk;
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..=(i + a.ku + a.kl).min(n - 1) {
                acc -= a.data[a.slot(i, j)] * b[j];
            }
            b[i] = acc / a.data[a.slot(i, i)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Vec<Complex64> {
        // Gaussian elimination with full-row pivoting on a dense copy
        let n = b.len();
        let mut m: Vec<Vec<Complex64>> = a.iter().zip(b).map(|(r, &v)| {
            let mut r = r.clone();
            r.push(v);
            r
        }).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[i][k].norm().partial_cmp(&m[j][k].norm()).unwrap()).unwrap();
            m.swap(k, p);
            for i in k + 1..n {
                let l = m[i][k] / m[k][k];
                for j in k..=n {
                    let t = m[k][j];
                    m[i][j] -= l * t;
                }
            }
        }
        let mut x = vec![Complex64::default(); n];
        for i in (0..n).rev() {
            let mut acc = m[i][n];
            for j in i + 1..n {
                acc -= m[i][j] * x[j];
            }
            x[i] = acc / m[i][i];
        }
        x
    }

    #[test]
    fn matches_dense_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, kl, ku) in &[(12, 2, 3), (30, 5, 1), (25, 0, 4), (40, 7, 7)] {
            let mut band = BandMatrix::zeros(n, kl, ku);
            let mut dense = vec![vec![Complex64::default(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    if band.in_band(i, j) {
                        // small diagonal forces pivoting
                        let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                            * if i == j { 0.01 } else { 1.0 };
                        band.add(i, j, v);
                        dense[i][j] = v;
                    }
                }
            }
            let b: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
            let expect = dense_solve(&dense, &b);
            let lu = band.clone().factor().unwrap();
            let mut x = b.clone();
            lu.solve_in_place(&mut x);
            for (a, e) in x.iter().zip(&expect) {
                assert!((a - e).norm() <= 1e-9 * (1.0 + e.norm()));
            }
            let r = band.matvec(&x);
            let xmax = x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            for (ri, bi) in r.iter().zip(&b) {
                assert!((ri - bi).norm() <= 1e-12 * (1.0 + xmax) * n as f64, "{} {xmax}", (ri - bi).norm());
            }
        }
    }

    #[test]
    fn singular_reported() {
        let mut band = BandMatrix::zeros(4, 1, 1);
        band.add(0, 0, Complex64::new(1.0, 0.0));
        band.add(1, 1, Complex64::new(1.0, 0.0));
        band.add(3, 3, Complex64::new(1.0, 0.0));
        assert_eq!(band.factor().unwrap_err(), 2);
    }
}
