//! Dense direct elimination for the small reconstruction systems.

use crate::error::{Error, Result};

/// Relative pivot threshold below which a system is declared singular.
pub const PIVOT_TOL: f64 = 1e-13;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Matrix { n: N, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.n {
            self.data.swap(i * self.n + c, j * self.n + c);
        }
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut a = self.clone();
        let mut x = b.to_vec();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a.get(i, k).abs().total_cmp(&a.get(j, k).abs()))
                .unwrap();
            a.swap_rows(k, p);
            x.swap(k, p);
            let piv = a.get(k, k);
            let row_max = (k..n).map(|c| a.get(k, c).abs()).fold(0.0, f64::max);
            if !(piv.abs() >= PIVOT_TOL * row_max) || row_max == 0.0 {
                return Err(Error::SingularSystem {
                    size: n,
                    pivot_ratio: if row_max > 0.0 { piv.abs() / row_max } else { 0.0 },
                });
            }
            for i in k + 1..n {
                let f = a.get(i, k) / piv;
                if f == 0.0 {
                    continue;
                }
                for c in k..n {
                    let v = a.get(i, c) - f * a.get(k, c);
                    a.set(i, c, v);
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for c in k + 1..n {
                s -= a.get(k, c) * x[c];
            }
            x[k] = s / a.get(k, k);
        }
        Ok(x)
    }

    /// [`Matrix::solve`] after scaling every column to unit max norm, so that
    /// columns of very different magnitude do not trip the singularity test.
    pub fn solve_equilibrated(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let scale: Vec<f64> = (0..n)
            .map(|c| {
                let m = (0..n).map(|i| self.get(i, c).abs()).fold(0.0, f64::max);
                if m > 0.0 { m } else { 1.0 }
            })
            .collect();
        let mut a = self.clone();
        for i in 0..n {
            for c in 0..n {
                a.set(i, c, self.get(i, c) / scale[c]);
            }
        }
        let mut x = a.solve(b)?;
        for (v, s) in x.iter_mut().zip(&scale) {
            *v /= s;
        }
        Ok(x)
    }

    /// Determinant via the same elimination; exact zero columns give 0.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a.get(i, k).abs().total_cmp(&a.get(j, k).abs()))
                .unwrap();
            if p != k {
                a.swap_rows(k, p);
                det = -det;
            }
            let piv = a.get(k, k);
            if piv == 0.0 {
                return 0.0;
            }
            det *= piv;
            for i in k + 1..n {
                let f = a.get(i, k) / piv;
                for c in k..n {
                    let v = a.get(i, c) - f * a.get(k, c);
                    a.set(i, c, v);
                }
            }
        }
        det
    }

    /// Copy with column `j` replaced by `col` (Cramer numerators).
    pub fn with_column(&self, j: usize, col: &[f64]) -> Matrix {
        let mut m = self.clone();
        for (i, v) in col.iter().enumerate() {
            m.set(i, j, *v);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrated_handles_wide_column_scales() {
        let a = Matrix::from_rows([[1.0, 1e30], [1.0, 2e30]]);
        assert!(a.solve(&[1.0, 2.0]).is_err());
        let x = a.solve_equilibrated(&[1.0, 2.0]).unwrap();
        assert!(x[0].abs() < 1e-15 && (x[1] * 1e30 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn solves_permuted_system() {
        let a = Matrix::from_rows([[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]]);
        let x = a.solve(&[7.0, 3.0, 6.0]).unwrap();
        for (xi, e) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
        assert!((a.det() - (-5.0)).abs() < 1e-14);
    }

    #[test]
    fn flags_singular() {
        let a = Matrix::from_rows([[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(a.solve(&[1.0, 1.0]), Err(Error::SingularSystem { size: 2, .. })));
        assert_eq!(a.det(), 0.0);
    }

    #[test]
    fn cramer_matches_solve() {
        let a = Matrix::from_rows([[4.0, -1.0, 0.5], [2.0, 3.0, 1.0], [-1.0, 0.25, 2.0]]);
        let b = [1.0, -2.0, 0.5];
        let x = a.solve(&b).unwrap();
        let d = a.det();
        for j in 0..3 {
            assert!((a.with_column(j, &b).det() / d - x[j]).abs() < 1e-13);
        }
    }
}
