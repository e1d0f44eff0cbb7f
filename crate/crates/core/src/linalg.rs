//! Dense row-major matrices and Householder least squares.

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

/// A column whose QR diagonal falls below this fraction of its own norm is
/// treated as linearly dependent on the columns before it.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "data length must be rows * cols");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from equally long columns.
    pub fn from_columns(columns: &[Vec<f64>]) -> Matrix {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix::from_row_major(rows.len(), self.cols, data)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(cols.iter().map(|&j| row[j]));
        }
        Matrix::from_row_major(self.rows, cols.len(), data)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self^T v`.
    pub fn t_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Indices of columns found to be linearly dependent on earlier columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singular(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
    /// Inverse of the triangular factor, upper triangular.
    r_inv: Matrix,
}

impl LeastSquares {
    /// Diagonal of `(X^T X)^{-1} = R^{-1} R^{-T}`.
    pub fn unscaled_variances(&self) -> Vec<f64> {
        let p = self.r_inv.cols();
        (0..p)
            .map(|i| (i..p).map(|j| self.r_inv[(i, j)] * self.r_inv[(i, j)]).sum())
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `|y - X b|^2` by Householder QR of `X`.
pub fn least_squares(x: &Matrix, y: &[f64]) -> Result<LeastSquares, Singular> {
    let (n, p) = (x.rows(), x.cols());
    assert_eq!(y.len(), n, "response length must match design rows");
    if n < p {
        return Err(Singular((n..p).collect()));
    }

    // Work column-major: each column is one contiguous vector.
    let mut a: Vec<Vec<f64>> = (0..p).map(|j| x.column(j)).collect();
    let norms: Vec<f64> = a.iter().map(|c| sqrt(dot(c, c))).collect();
    let mut qty = y.to_vec();
    let mut dependent = Vec::new();

    for k in 0..p {
        let tail_norm = sqrt(dot(&a[k][k..], &a[k][k..]));
        if tail_norm <= RANK_TOL * norms[k] || norms[k] == 0.0 {
            dependent.push(k);
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -tail_norm } else { tail_norm };
        let mut v = a[k][k..].to_vec();
        v[0] -= alpha;
        let vv = dot(&v, &v);
        if vv == 0.0 {
            continue;
        }
        let reflect = |col: &mut [f64]| {
            let s = 2.0 * dot(&v, col) / vv;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= s * vi;
            }
        };
        for col in a.iter_mut().skip(k) {
            reflect(&mut col[k..]);
        }
        reflect(&mut qty[k..]);
    }
    if !dependent.is_empty() {
        return Err(Singular(dependent));
    }

    // Back substitution R b = Q^T y and R^{-1}.
    let r = |i: usize, j: usize| a[j][i];
    let mut coefficients = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| r(i, j) * coefficients[j]).sum();
        coefficients[i] = (qty[i] - s) / r(i, i);
    }
    let mut r_inv = Matrix::zeros(p, p);
    for j in 0..p {
        r_inv[(j, j)] = 1.0 / r(j, j);
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|m| r(i, m) * r_inv[(m, j)]).sum();
            r_inv[(i, j)] = -s / r(i, i);
        }
    }

    let fitted = x.mul_vec(&coefficients);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss = dot(&residuals, &residuals);
    Ok(LeastSquares {
        coefficients,
        fitted,
        residuals,
        rss,
        r_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = Matrix::from_columns(&[vec![1.0; 4], vec![0.0, 1.0, 2.0, 3.0]]);
        let fit = least_squares(&x, &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-12);
        assert!(fit.rss < 1e-20);
    }

    #[test]
    fn inverse_gram_diagonal() {
        // X^T X = [[3, 3], [3, 5]] -> inverse diagonal (5/6, 1/2)
        let x = Matrix::from_columns(&[vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]]);
        let fit = least_squares(&x, &[0.0, 1.0, 1.0]).unwrap();
        let d = fit.unscaled_variances();
        assert!((d[0] - 5.0 / 6.0).abs() < 1e-12);
        assert!((d[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dependent_column_is_named() {
        let x = Matrix::from_columns(&[
            vec![1.0, 1.0, 1.0, 1.0],
            vec![1.0, 2.0, 3.0, 4.0],
            vec![2.0, 4.0, 6.0, 8.0],
        ]);
        assert_eq!(least_squares(&x, &[1.0, 2.0, 3.0, 5.0]), Err(Singular(vec![2])));
        let z = Matrix::from_columns(&[vec![1.0; 3], vec![0.0; 3]]);
        assert_eq!(least_squares(&z, &[1.0, 2.0, 3.0]), Err(Singular(vec![1])));
    }

    #[test]
    fn row_and_column_selection() {
        let m = Matrix::from_row_major(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(m.select_rows(&[2, 0]).row(0), &[5.0, 6.0]);
        assert_eq!(m.select_cols(&[1]).column(0), vec![2.0, 4.0, 6.0]);
        assert_eq!(m.t_mul_vec(&[1.0, 1.0, 1.0]), vec![9.0, 12.0]);
    }
}
