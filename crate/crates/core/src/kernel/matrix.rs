//! Dense exact matrices and linear solving.

use crate::error::{Error, Result};
use crate::kernel::scalar::{FieldSpec, Scalar};

/// A dense matrix of scalars sharing one field. Row-major storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, field: FieldSpec, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let s = f(r, c);
                assert_eq!(s.field(), field, "matrix entry in the wrong field");
                entries.push(s);
            }
        }
        Matrix { rows, cols, field, entries }
    }

    /// Builds from rows of integers, embedded into `field`.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Matrix::from_fn(r, c, field, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "matrix entry in the wrong field");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.get(r, c).is_one()
                    } else {
                        self.get(r, c).is_zero()
                    }
                })
            })
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.get(r, c).add_ref(other.get(r, c))
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.get(r, c).sub_ref(other.get(r, c))
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| self.get(r, c).neg_ref())
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| self.get(r, c).mul_ref(k))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        Matrix::from_fn(self.rows, other.cols, self.field, |r, c| {
            let mut acc = self.field.zero();
            for k in 0..self.cols {
                acc = acc.add_ref(&self.get(r, k).mul_ref(other.get(k, c)));
            }
            acc
        })
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for c in 0..self.cols {
                    acc = acc.add_ref(&self.get(r, c).mul_ref(&v[c]));
                }
                acc
            })
            .collect()
    }

    /// Exact inverse by Gauss–Jordan elimination over the field, or a
    /// `Singular` signal. Exactness is automatic: every pivot division is a
    /// field division.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, self.field);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return Err(Error::Singular),
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let inv_pivot = a.get(col, col).inv()?;
            a.scale_row(col, &inv_pivot);
            inv.scale_row(col, &inv_pivot);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).clone();
                    a.sub_scaled_row(r, col, &factor);
                    inv.sub_scaled_row(r, col, &factor);
                }
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let pivot = (rank..self.rows).find(|&r| !a.get(r, col).is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            a.swap_rows(pivot, rank);
            let inv_pivot = a.get(rank, col).inv().expect("nonzero pivot");
            a.scale_row(rank, &inv_pivot);
            for r in 0..self.rows {
                if r != rank && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).clone();
                    a.sub_scaled_row(r, col, &factor);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Any solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve_any(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len());
        let n = self.cols;
        let mut a = self.clone();
        let mut rhs: Vec<Scalar> = b.to_vec();
        let mut pivot_col = vec![usize::MAX; self.rows];
        let mut rank = 0;
        for col in 0..n {
            if rank == self.rows {
                break;
            }
            let pivot = (rank..self.rows).find(|&r| !a.get(r, col).is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            a.swap_rows(pivot, rank);
            rhs.swap(pivot, rank);
            let inv_pivot = a.get(rank, col).inv().expect("nonzero pivot");
            a.scale_row(rank, &inv_pivot);
            rhs[rank] = rhs[rank].mul_ref(&inv_pivot);
            for r in 0..self.rows {
                if r != rank && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).clone();
                    a.sub_scaled_row(r, col, &factor);
                    rhs[r] = rhs[r].sub_ref(&factor.mul_ref(&rhs[rank]));
                }
            }
            pivot_col[rank] = col;
            rank += 1;
        }
        for r in rank..self.rows {
            if !rhs[r].is_zero() {
                return None;
            }
        }
        let mut x = vec![self.field.zero(); n];
        for r in 0..rank {
            x[pivot_col[r]] = rhs[r].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, k: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(r, c).mul_ref(k);
            self.set(r, c, v);
        }
    }

    fn sub_scaled_row(&mut self, r: usize, src: usize, k: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(r, c).sub_ref(&self.get(src, c).mul_ref(k));
            self.set(r, c, v);
        }
    }
}

/// Vector helpers shared by the algebra modules.
pub fn vec_add(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.add_ref(b)).collect()
}

pub fn vec_sub(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.sub_ref(b)).collect()
}

pub fn vec_scale(k: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|a| a.mul_ref(k)).collect()
}

pub fn vec_is_zero(x: &[Scalar]) -> bool {
    x.iter().all(Scalar::is_zero)
}

pub fn zero_vec(n: usize, field: FieldSpec) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn basis_vec(n: usize, i: usize, field: FieldSpec) -> Vec<Scalar> {
    let mut v = zero_vec(n, field);
    v[i] = field.one();
    v
}

/// Kronecker pairing of a functional (coordinates in the dual basis) with a
/// vector.
pub fn pairing(u: &[Scalar], v: &[Scalar]) -> Scalar {
    assert_eq!(u.len(), v.len());
    let field = if u.is_empty() { FieldSpec::Rationals } else { u[0].field() };
    let mut acc = field.zero();
    for (a, b) in u.iter().zip(v) {
        acc = acc.add_ref(&a.mul_ref(b));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverts_to_itself() {
        let q = FieldSpec::Rationals;
        let m = Matrix::identity(3, q);
        assert_eq!(m.inverse().unwrap(), m);
    }

    #[test]
    fn unipotent_inverse() {
        let q = FieldSpec::Rationals;
        let m = Matrix::from_i64_rows(q, &[vec![1, 1], vec![0, 1]]);
        let expect = Matrix::from_i64_rows(q, &[vec![1, -1], vec![0, 1]]);
        assert_eq!(m.inverse().unwrap(), expect);
    }

    #[test]
    fn rank_one_matrix_is_singular() {
        let q = FieldSpec::Rationals;
        let m = Matrix::from_i64_rows(q, &[vec![1, 1], vec![1, 1]]);
        assert!(matches!(m.inverse(), Err(Error::Singular)));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let f = FieldSpec::prime(7).unwrap();
        let m = Matrix::from_i64_rows(f, &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]);
        let inv = m.inverse().unwrap();
        assert!(inv.mul(&m).is_identity());
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn solve_any_finds_a_solution() {
        let q = FieldSpec::Rationals;
        let a = Matrix::from_i64_rows(q, &[vec![1, 2, 0], vec![0, 0, 1]]);
        let b = vec![q.from_i64(3), q.from_i64(5)];
        let x = a.solve_any(&b).unwrap();
        assert_eq!(a.apply(&x), b);

        let inconsistent = Matrix::from_i64_rows(q, &[vec![1, 1], vec![1, 1]]);
        assert!(inconsistent
            .solve_any(&[q.from_i64(0), q.from_i64(1)])
            .is_none());
    }
}
