//! Small dense matrices over a [`Scalar`]. Dimensions here are tiny (d <= 4), so
//! everything is plain Gaussian elimination.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_text()).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_cols(cols: &[Vec<S>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a.clone() * other.get(k, j).clone();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(S::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a.clone() * b.clone()
                    }
                })
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * k.clone()).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    fn is_pivot(v: &S, scale: f64) -> bool {
        if S::is_exact() {
            !v.is_zero()
        } else {
            v.to_f64().abs() > 1e-12 * scale.max(1e-300)
        }
    }

    /// Row-reduces a copy of `self` augmented with `rhs`; returns the reduced pair and rank.
    fn eliminate(&self, rhs: Option<&Matrix<S>>) -> (Matrix<S>, Option<Matrix<S>>, usize, S) {
        let mut a = self.clone();
        let mut b = rhs.cloned();
        let scale = self.max_abs();
        let mut det = S::one();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let pivot = if S::is_exact() {
                (rank..a.rows).find(|&r| !a.get(r, col).is_zero())
            } else {
                (rank..a.rows)
                    .max_by(|&x, &y| a.get(x, col).to_f64().abs().total_cmp(&a.get(y, col).to_f64().abs()))
                    .filter(|&r| Self::is_pivot(a.get(r, col), scale))
            };
            let Some(p) = pivot else {
                det = S::zero();
                continue;
            };
            if p != rank {
                a.swap_rows(p, rank);
                if let Some(b) = b.as_mut() {
                    b.swap_rows(p, rank);
                }
                det = -det;
            }
            let pv = a.get(rank, col).clone();
            det = det * pv.clone();
            for r in 0..a.rows {
                if r == rank {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                let f = factor / pv.clone();
                for c in col..a.cols {
                    let v = a.get(r, c).clone() - f.clone() * a.get(rank, c).clone();
                    a.set(r, c, v);
                }
                if let Some(b) = b.as_mut() {
                    for c in 0..b.cols {
                        let v = b.get(r, c).clone() - f.clone() * b.get(rank, c).clone();
                        b.set(r, c, v);
                    }
                }
            }
            rank += 1;
        }
        if rank < a.rows.min(a.cols) || a.rows != a.cols {
            det = S::zero();
        }
        (a, b, rank, det)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.eliminate(None).2
    }

    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        self.eliminate(None).3
    }

    /// Solves `self * X = rhs`; `None` when `self` is singular.
    pub fn solve(&self, rhs: &Matrix<S>) -> Option<Matrix<S>> {
        assert_eq!(self.rows, self.cols);
        let (a, b, rank, _) = self.eliminate(Some(rhs));
        if rank < self.rows {
            return None;
        }
        let mut b = b.expect("rhs present");
        // Full rank Gauss-Jordan leaves `a` diagonal.
        for r in 0..self.rows {
            let pv = a.get(r, r).clone();
            for c in 0..b.cols {
                let v = b.get(r, c).clone() / pv.clone();
                b.set(r, c, v);
            }
        }
        Some(b)
    }

    pub fn solve_vec(&self, rhs: &[S]) -> Option<Vec<S>> {
        let b = Matrix::from_cols(&[rhs.to_vec()]);
        self.solve(&b).map(|x| (0..x.rows).map(|i| x.get(i, 0).clone()).collect())
    }

    pub fn inverse(&self) -> Option<Matrix<S>> {
        self.solve(&Matrix::identity(self.rows))
    }
}

pub fn vsub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vadd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vscale<S: Scalar>(a: &[S], k: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * k.clone()).collect()
}

pub fn vneg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn exact_inverse_and_determinant() {
        let m = Matrix::from_rows(&[vec![q(2), q(1)], vec![q(1), q(1)]]);
        assert_eq!(m.determinant(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn singular_matrix() {
        let m = Matrix::from_rows(&[vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.determinant(), q(0));
        assert!(m.inverse().is_none());
    }

    #[test]
    fn float_solve() {
        let m = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]]);
        let x = m.solve_vec(&[4.0, 9.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
        assert!((m.determinant() + 6.0).abs() < 1e-12);
    }
}
