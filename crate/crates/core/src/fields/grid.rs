use crate::error::{Error, Result};

/// Tangentially periodic box standing in for the half-space.
///
/// Tangential directions `x_1 … x_{N−1}` are periodic with extent `l_tan`
/// and `n_tan` points each; the wall-normal direction `x_N ∈ [0, h_wall]`
/// carries `n_wall` points including both walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    n_tan: usize,
    l_tan: f64,
    n_wall: usize,
    h_wall: f64,
}

impl Grid {
    pub fn new(dim: usize, n_tan: usize, l_tan: f64, n_wall: usize, h_wall: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if dim != 2 && dim != 3 {
            problems.push(format!("dimension {dim} must be 2 or 3"));
        }
        if n_tan < 4 || !n_tan.is_power_of_two() {
            problems.push(format!("n_tan = {n_tan} must be a power of two >= 4"));
        }
        if n_wall < 8 {
            problems.push(format!("n_wall = {n_wall} must be >= 8"));
        }
        if !(l_tan.is_finite() && l_tan > 0.0) {
            problems.push(format!("l_tan = {l_tan} must be positive"));
        }
        if !(h_wall.is_finite() && h_wall > 0.0) {
            problems.push(format!("h_wall = {h_wall} must be positive"));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidInput(problems.join("; ")));
        }
        Ok(Grid { dim, n_tan, l_tan, n_wall, h_wall })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }
    #[inline]
    pub fn n_tan(&self) -> usize {
        self.n_tan
    }
    #[inline]
    pub fn l_tan(&self) -> f64 {
        self.l_tan
    }
    #[inline]
    pub fn n_wall(&self) -> usize {
        self.n_wall
    }
    #[inline]
    pub fn h_wall(&self) -> f64 {
        self.h_wall
    }

    /// Number of tangential points (`n_tan^{N−1}`), also the number of modes.
    #[inline]
    pub fn n_columns(&self) -> usize {
        self.n_tan.pow(self.dim as u32 - 1)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_columns() * self.n_wall
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.l_tan / self.n_tan as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.h_wall / (self.n_wall - 1) as f64
    }

    /// Flat index of (tangential column, wall index).
    #[inline]
    pub fn index(&self, column: usize, j: usize) -> usize {
        column * self.n_wall + j
    }

    /// Tangential multi-index of a column (second entry unused for N = 2).
    #[inline]
    pub fn column_multi(&self, column: usize) -> [usize; 2] {
        if self.dim == 2 {
            [column, 0]
        } else {
            [column / self.n_tan, column % self.n_tan]
        }
    }

    /// Physical coordinates of a flat index; `x[N−1]` is the wall distance.
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let column = idx / self.n_wall;
        let j = idx % self.n_wall;
        let m = self.column_multi(column);
        let mut x = [0.0; 3];
        for (l, ml) in m.iter().enumerate().take(self.dim - 1) {
            x[l] = *ml as f64 * self.dx();
        }
        x[self.dim - 1] = j as f64 * self.dy();
        x
    }

    /// Signed integer wavenumber index for a 1-D FFT bin.
    #[inline]
    pub fn signed_bin(&self, m: usize) -> i64 {
        let n = self.n_tan as i64;
        let m = m as i64;
        if m <= n / 2 {
            m
        } else {
            m - n
        }
    }

    /// Tangential wavevector of mode `column`, and whether it touches a Nyquist bin.
    pub fn wavevector(&self, column: usize) -> ([f64; 2], bool) {
        let m = self.column_multi(column);
        let base = 2.0 * std::f64::consts::PI / self.l_tan;
        let mut k = [0.0; 2];
        let mut nyquist = false;
        for l in 0..self.dim - 1 {
            if m[l] == self.n_tan / 2 {
                nyquist = true;
            }
            k[l] = base * self.signed_bin(m[l]) as f64;
        }
        (k, nyquist)
    }

    /// Column holding the wavevector `−k` of `column`.
    pub fn conjugate_column(&self, column: usize) -> usize {
        let m = self.column_multi(column);
        let n = self.n_tan;
        let flip = |v: usize| (n - v) % n;
        if self.dim == 2 {
            flip(m[0])
        } else {
            flip(m[0]) * n + flip(m[1])
        }
    }

    /// Quadrature weight of a wall index: trapezoid in `x_N` times the
    /// uniform tangential cell volume.
    #[inline]
    pub fn weight(&self, j: usize) -> f64 {
        let wy = if j == 0 || j == self.n_wall - 1 { 0.5 } else { 1.0 } * self.dy();
        wy * self.dx().powi(self.dim as i32 - 1)
    }

    /// Total measure of the box.
    pub fn volume(&self) -> f64 {
        self.l_tan.powi(self.dim as i32 - 1) * self.h_wall
    }

    /// Same box with a different wall-normal resolution.
    pub fn with_n_wall(&self, n_wall: usize) -> Result<Self> {
        Grid::new(self.dim, self.n_tan, self.l_tan, n_wall, self.h_wall)
    }

    /// Same box with a different tangential resolution.
    pub fn with_n_tan(&self, n_tan: usize) -> Result<Self> {
        Grid::new(self.dim, n_tan, self.l_tan, self.n_wall, self.h_wall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Grid::new(2, 6, 1.0, 16, 1.0).is_err());
        assert!(Grid::new(2, 8, 1.0, 4, 1.0).is_err());
        assert!(Grid::new(4, 8, 1.0, 16, 1.0).is_err());
        let g = Grid::new(3, 8, 2.0, 9, 1.0).unwrap();
        assert_eq!(g.n_columns(), 64);
        assert_eq!(g.len(), 64 * 9);
        assert_eq!(g.dy(), 0.125);
    }

    #[test]
    fn weights_sum_to_volume() {
        for g in [Grid::new(2, 16, 3.0, 11, 2.0).unwrap(), Grid::new(3, 8, 1.5, 9, 0.7).unwrap()] {
            let total: f64 = (0..g.n_columns())
                .flat_map(|c| (0..g.n_wall()).map(move |j| (c, j)))
                .map(|(_, j)| g.weight(j))
                .sum();
            assert!((total - g.volume()).abs() <= 1e-12 * g.volume());
        }
    }

    #[test]
    fn conjugate_columns() {
        let g = Grid::new(3, 8, 1.0, 9, 1.0).unwrap();
        for c in 0..g.n_columns() {
            let (k, _) = g.wavevector(c);
            let (kc, _) = g.wavevector(g.conjugate_column(c));
            let nyq = g.wavevector(c).1;
            if !nyq {
                assert_eq!(k[0], -kc[0]);
                assert_eq!(k[1], -kc[1]);
            }
            assert_eq!(g.conjugate_column(g.conjugate_column(c)), c);
        }
    }
}
