use super::NumericsError;
use serde::{Deserialize, Serialize};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from a row-major value buffer. Panics if `rows * cols != data.len()`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "Matrix::from_vec: shape mismatch");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "Matrix::from_rows: ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: nrows, cols: ncols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// `A x`
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec: shape mismatch");
        (0..self.rows).map(|r| super::dot(self.row(r), x)).collect()
    }

    /// `A^T x`
    pub fn matvec_t(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "matvec_t: shape mismatch");
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            let xr = x[r];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * xr;
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// `A B`
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul: shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.add_to(r, c, a * other.get(k, c));
                }
            }
        }
        out
    }
}

/// LU decomposition with partial pivoting, kept around so several right-hand
/// sides can reuse one factorization.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

const PIVOT_TOL: f64 = 1e-12;

impl LuFactors {
    pub fn factor(a: &Matrix) -> Result<Self, NumericsError> {
        if a.rows() != a.cols() {
            return Err(NumericsError::DimMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            // Find pivot row.
            let mut piv = col;
            let mut piv_val = lu[col * n + col].abs();
            for r in col + 1..n {
                let v = lu[r * n + col].abs();
                if v > piv_val {
                    piv = r;
                    piv_val = v;
                }
            }
            if piv_val < PIVOT_TOL {
                return Err(NumericsError::SingularMatrix { col, pivot: piv_val });
            }
            if piv != col {
                perm.swap(piv, col);
                for c in 0..n {
                    lu.swap(piv * n + c, col * n + c);
                }
            }
            let diag = lu[col * n + col];
            for r in col + 1..n {
                let factor = lu[r * n + col] / diag;
                lu[r * n + col] = factor;
                for c in col + 1..n {
                    lu[r * n + c] -= factor * lu[col * n + c];
                }
            }
        }
        Ok(LuFactors { n, lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
        let n = self.n;
        if b.len() != n {
            return Err(NumericsError::DimMismatch(format!(
                "rhs length {} does not match system size {}",
                b.len(),
                n
            )));
        }
        // Forward substitution on the permuted rhs.
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 1..n {
            for c in 0..r {
                x[r] -= self.lu[r * n + c] * x[c];
            }
        }
        // Back substitution.
        for r in (0..n).rev() {
            for c in r + 1..n {
                x[r] = x[r] - self.lu[r * n + c] * x[c];
            }
            x[r] /= self.lu[r * n + r];
        }
        Ok(x)
    }
}

/// Solve `A x = b` by LU with partial pivoting.
///
/// Fails with `SingularMatrix` when a pivot falls below `1e-12`. The returned
/// solution satisfies `||Ax - b||_inf <= 1e-9 * (1 + ||b||_inf)` for
/// well-conditioned systems at the sizes used in this crate.
pub fn solve_linear_system(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    LuFactors::factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{norm_inf, sub, RngStream};

    #[test]
    fn identity_system() {
        let a = Matrix::identity(3);
        let x = solve_linear_system(&a, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn diagonal_inverse() {
        let a = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]);
        let x = solve_linear_system(&a, &[2.0, 8.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        let err = solve_linear_system(&a, &[1.0, 2.0]).unwrap_err();
        assert!(matches!(err, NumericsError::SingularMatrix { .. }));
    }

    fn random_well_conditioned(n: usize, rng: &mut RngStream) -> Matrix {
        // Diagonally dominant matrices are comfortably well-conditioned.
        let mut a = Matrix::zeros(n, n);
        for r in 0..n {
            let mut row_sum = 0.0;
            for c in 0..n {
                if r != c {
                    let v = rng.uniform() * 2.0 - 1.0;
                    a.set(r, c, v);
                    row_sum += v.abs();
                }
            }
            a.set(r, r, row_sum + 1.0 + rng.uniform());
        }
        a
    }

    #[test]
    fn residual_bound_on_random_systems() {
        let mut rng = RngStream::new(7, 0);
        for trial in 0..100 {
            let n = 2 + (trial % 49);
            let mut a_rng = rng.substream(trial as u64);
            let a = random_well_conditioned(n, &mut a_rng);
            let b: Vec<f64> = (0..n).map(|_| a_rng.uniform() * 10.0 - 5.0).collect();
            let x = solve_linear_system(&a, &b).unwrap();
            let r = sub(&a.matvec(&x), &b);
            let bound = 1e-9 * (1.0 + norm_inf(&b));
            assert!(
                norm_inf(&r) <= bound,
                "trial {trial}: residual {} above bound {}",
                norm_inf(&r),
                bound
            );
        }
    }

    #[test]
    fn lu_reuse_multiple_rhs() {
        let a = Matrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]);
        let f = LuFactors::factor(&a).unwrap();
        for b in [[1.0, 0.0], [0.0, 1.0], [2.0, -3.0]] {
            let x = f.solve(&b).unwrap();
            let r = sub(&a.matvec(&x), &b);
            assert!(norm_inf(&r) < 1e-12);
        }
    }
}
