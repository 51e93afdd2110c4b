//! Dense order-2 and order-3 tensors.
//!
//! A `Tensor3` does double duty: it stores the structure constants of a
//! bilinear map X × Y → Z as `t[i][j][k]` = coefficient of `z_k` in
//! `x_i · y_j`, and it stores elements of X ⊗ Y ⊗ Z. `Tensor2` likewise holds
//! elements of X ⊗ Y and Gram matrices of bilinear forms.

use crate::error::{Error, Result};
use crate::kernel::matrix::Matrix;
use crate::kernel::scalar::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor2 {
    d1: usize,
    d2: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Tensor2 {
    pub fn zero(d1: usize, d2: usize, field: FieldSpec) -> Self {
        Tensor2 { d1, d2, field, entries: vec![field.zero(); d1 * d2] }
    }

    pub fn from_fn(d1: usize, d2: usize, field: FieldSpec, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut t = Tensor2::zero(d1, d2, field);
        for i in 0..d1 {
            for j in 0..d2 {
                t.set(i, j, f(i, j));
            }
        }
        t
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.d2 + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "tensor entry in the wrong field");
        self.entries[i * self.d2 + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Tensor2) -> Tensor2 {
        assert_eq!(self.dims(), other.dims());
        Tensor2::from_fn(self.d1, self.d2, self.field, |i, j| {
            self.get(i, j).add_ref(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Tensor2) -> Tensor2 {
        assert_eq!(self.dims(), other.dims());
        Tensor2::from_fn(self.d1, self.d2, self.field, |i, j| {
            self.get(i, j).sub_ref(other.get(i, j))
        })
    }

    pub fn neg(&self) -> Tensor2 {
        Tensor2::from_fn(self.d1, self.d2, self.field, |i, j| self.get(i, j).neg_ref())
    }

    pub fn scale(&self, k: &Scalar) -> Tensor2 {
        Tensor2::from_fn(self.d1, self.d2, self.field, |i, j| self.get(i, j).mul_ref(k))
    }

    /// The slot swap τ(x ⊗ y) = y ⊗ x. Errors on non-square shapes, where the
    /// swapped tensor would live in a different space.
    pub fn twist(&self) -> Result<Tensor2> {
        if self.d1 != self.d2 {
            return Err(Error::DimensionMismatch(
                "twist of a non-square order-2 tensor".into(),
            ));
        }
        Ok(Tensor2::from_fn(self.d2, self.d1, self.field, |i, j| self.get(j, i).clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.d1 == self.d2
            && (0..self.d1).all(|i| (0..self.d2).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reads the tensor as a matrix (same index layout).
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.d1, self.d2, self.field, |i, j| self.get(i, j).clone())
    }

    pub fn from_matrix(m: &Matrix) -> Tensor2 {
        Tensor2::from_fn(m.rows(), m.cols(), m.field(), |i, j| m.get(i, j).clone())
    }

    /// Applies M ⊗ N: out = M · t · Nᵀ.
    pub fn apply_pair(&self, m: &Matrix, n: &Matrix) -> Tensor2 {
        let prod = m.mul(&self.to_matrix()).mul(&n.transpose());
        Tensor2::from_matrix(&prod)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor3 {
    d1: usize,
    d2: usize,
    d3: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zero(d1: usize, d2: usize, d3: usize, field: FieldSpec) -> Self {
        Tensor3 { d1, d2, d3, field, entries: vec![field.zero(); d1 * d2 * d3] }
    }

    pub fn from_fn(
        d1: usize,
        d2: usize,
        d3: usize,
        field: FieldSpec,
        mut f: impl FnMut(usize, usize, usize) -> Scalar,
    ) -> Self {
        let mut t = Tensor3::zero(d1, d2, d3, field);
        for i in 0..d1 {
            for j in 0..d2 {
                for k in 0..d3 {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    /// Builds structure constants from a list of nonzero products
    /// `(i, j, coefficients of the result)`, everything omitted being zero.
    pub fn from_products(dims: (usize, usize, usize), field: FieldSpec, products: &[(usize, usize, Vec<Scalar>)]) -> Self {
        let mut t = Tensor3::zero(dims.0, dims.1, dims.2, field);
        for (i, j, result) in products {
            for (k, v) in result.iter().enumerate() {
                t.set(*i, *j, k, v.clone());
            }
        }
        t
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d1, self.d2, self.d3)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.entries[(i * self.d2 + j) * self.d3 + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "tensor entry in the wrong field");
        self.entries[(i * self.d2 + j) * self.d3 + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), other.dims());
        Tensor3::from_fn(self.d1, self.d2, self.d3, self.field, |i, j, k| {
            self.get(i, j, k).add_ref(other.get(i, j, k))
        })
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims(), other.dims());
        Tensor3::from_fn(self.d1, self.d2, self.d3, self.field, |i, j, k| {
            self.get(i, j, k).sub_ref(other.get(i, j, k))
        })
    }

    pub fn neg(&self) -> Tensor3 {
        Tensor3::from_fn(self.d1, self.d2, self.d3, self.field, |i, j, k| {
            self.get(i, j, k).neg_ref()
        })
    }

    /// The result of the bilinear map stored in this tensor on basis inputs.
    pub fn product_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.d3).map(|k| self.get(i, j, k).clone()).collect()
    }

    /// The bilinear map on coordinate vectors: out_k = Σ x_i y_j t[i][j][k].
    pub fn bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.d1, "bilinear left argument");
        assert_eq!(y.len(), self.d2, "bilinear right argument");
        let mut out = vec![self.field.zero(); self.d3];
        for i in 0..self.d1 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.d2 {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].mul_ref(&y[j]);
                for k in 0..self.d3 {
                    let t = self.get(i, j, k);
                    if !t.is_zero() {
                        out[k] = out[k].add_ref(&xy.mul_ref(t));
                    }
                }
            }
        }
        out
    }

    /// Sums the chosen slot against a coefficient vector, producing the
    /// order-2 tensor over the remaining slots (in order).
    pub fn contract(&self, slot: usize, v: &[Scalar]) -> Result<Tensor2> {
        let expected = match slot {
            1 => self.d1,
            2 => self.d2,
            3 => self.d3,
            _ => {
                return Err(Error::DimensionMismatch(format!(
                    "contract slot must be 1, 2 or 3, got {slot}"
                )))
            }
        };
        if v.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "contract slot {slot} has dimension {expected}, vector has {}",
                v.len()
            )));
        }
        let (r, c) = match slot {
            1 => (self.d2, self.d3),
            2 => (self.d1, self.d3),
            _ => (self.d1, self.d2),
        };
        let mut out = Tensor2::zero(r, c, self.field);
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                for k in 0..self.d3 {
                    let (w, a, b) = match slot {
                        1 => (&v[i], j, k),
                        2 => (&v[j], i, k),
                        _ => (&v[k], i, j),
                    };
                    if w.is_zero() || self.get(i, j, k).is_zero() {
                        continue;
                    }
                    let cur = out.get(a, b).add_ref(&w.mul_ref(self.get(i, j, k)));
                    out.set(a, b, cur);
                }
            }
        }
        Ok(out)
    }

    /// Permutes the slots: `perm` sends slot s of the input to slot perm[s]
    /// of the output. Swapped slots must have equal dimensions.
    pub fn twist(&self, perm: [usize; 3]) -> Result<Tensor3> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p >= 3 || seen[p] {
                return Err(Error::DimensionMismatch(format!("invalid permutation {perm:?}")));
            }
            seen[p] = true;
        }
        let src = [self.d1, self.d2, self.d3];
        let mut dims = [0usize; 3];
        for s in 0..3 {
            dims[perm[s]] = src[s];
        }
        // Swapping slots of unequal dimension changes the ambient space.
        for s in 0..3 {
            if perm[s] != s && src[s] != src[perm[s]] {
                return Err(Error::DimensionMismatch(format!(
                    "twist {perm:?} swaps slots of dimensions {} and {}",
                    src[s],
                    src[perm[s]]
                )));
            }
        }
        let mut out = Tensor3::zero(dims[0], dims[1], dims[2], self.field);
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                for k in 0..self.d3 {
                    let idx = [i, j, k];
                    let mut dst = [0usize; 3];
                    for s in 0..3 {
                        dst[perm[s]] = idx[s];
                    }
                    out.set(dst[0], dst[1], dst[2], self.get(i, j, k).clone());
                }
            }
        }
        Ok(out)
    }

    /// Applies id ⊗ id ⊗ M to an element of X ⊗ Y ⊗ Z.
    pub fn apply_slot3(&self, m: &Matrix) -> Tensor3 {
        assert_eq!(m.cols(), self.d3);
        Tensor3::from_fn(self.d1, self.d2, m.rows(), self.field, |i, j, w| {
            let mut acc = self.field.zero();
            for k in 0..self.d3 {
                acc = acc.add_ref(&m.get(w, k).mul_ref(self.get(i, j, k)));
            }
            acc
        })
    }

    /// Applies M ⊗ id ⊗ id.
    pub fn apply_slot1(&self, m: &Matrix) -> Tensor3 {
        assert_eq!(m.cols(), self.d1);
        Tensor3::from_fn(m.rows(), self.d2, self.d3, self.field, |w, j, k| {
            let mut acc = self.field.zero();
            for i in 0..self.d1 {
                acc = acc.add_ref(&m.get(w, i).mul_ref(self.get(i, j, k)));
            }
            acc
        })
    }

    /// Applies id ⊗ M ⊗ id.
    pub fn apply_slot2(&self, m: &Matrix) -> Tensor3 {
        assert_eq!(m.cols(), self.d2);
        Tensor3::from_fn(self.d1, m.rows(), self.d3, self.field, |i, w, k| {
            let mut acc = self.field.zero();
            for j in 0..self.d2 {
                acc = acc.add_ref(&m.get(w, j).mul_ref(self.get(i, j, k)));
            }
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::matrix::basis_vec;
    use proptest::prelude::*;

    fn class_i_constants() -> Tensor3 {
        // e1 e1 = e1, e2 e1 = e2 on a two-dimensional space.
        let q = FieldSpec::Rationals;
        let mut t = Tensor3::zero(2, 2, 2, q);
        t.set(0, 0, 0, q.one());
        t.set(1, 0, 1, q.one());
        t
    }

    #[test]
    fn contract_slot2_gives_right_multiplication() {
        let q = FieldSpec::Rationals;
        let t = class_i_constants();
        let r = t.contract(2, &basis_vec(2, 0, q)).unwrap();
        assert_eq!(r.to_matrix(), Matrix::identity(2, q));
    }

    #[test]
    fn contract_slot1_gives_left_multiplication() {
        let q = FieldSpec::Rationals;
        let t = class_i_constants();
        let l = t.contract(1, &basis_vec(2, 0, q)).unwrap();
        assert_eq!(l.to_matrix(), Matrix::from_i64_rows(q, &[vec![1, 0], vec![0, 0]]));
    }

    #[test]
    fn contract_zero_tensor_is_zero() {
        let q = FieldSpec::Rationals;
        let t = Tensor3::zero(2, 3, 2, q);
        for slot in 1..=3 {
            let dim = [2, 3, 2][slot - 1];
            let v = vec![q.from_i64(7); dim];
            assert!(t.contract(slot, &v).unwrap().is_zero());
        }
    }

    #[test]
    fn twist_swaps_simple_tensors() {
        let q = FieldSpec::Rationals;
        let mut t = Tensor2::zero(2, 2, q);
        t.set(0, 1, q.one()); // e1 ⊗ e2
        let s = t.twist().unwrap();
        assert!(s.get(1, 0).is_one());
        assert!(s.get(0, 1).is_zero());

        let mut u = Tensor3::zero(2, 2, 2, q);
        u.set(1, 1, 0, q.one()); // e2 ⊗ e2 ⊗ e1
        let v = u.twist([0, 2, 1]).unwrap(); // τ23
        assert!(v.get(1, 0, 1).is_one());

        let mut sym = Tensor2::zero(2, 2, q);
        sym.set(1, 1, q.one());
        assert_eq!(sym.twist().unwrap(), sym);
    }

    #[test]
    fn twist_rejects_non_square_swaps() {
        let q = FieldSpec::Rationals;
        let t = Tensor3::zero(2, 3, 2, q);
        assert!(t.twist([1, 0, 2]).is_err());
        assert!(t.twist([2, 1, 0]).is_ok());
    }

    proptest! {
        #[test]
        fn twist_twice_is_identity(entries in proptest::collection::vec(-5i64..5, 8)) {
            let q = FieldSpec::Rationals;
            let t = Tensor3::from_fn(2, 2, 2, q, |i, j, k| q.from_i64(entries[(i * 2 + j) * 2 + k]));
            for perm in [[1usize, 0, 2], [0, 2, 1], [2, 1, 0]] {
                prop_assert_eq!(t.twist(perm).unwrap().twist(perm).unwrap(), t.clone());
            }
        }

        #[test]
        fn contract_is_linear(
            entries in proptest::collection::vec(-5i64..5, 12),
            v in proptest::collection::vec(-5i64..5, 3),
            w in proptest::collection::vec(-5i64..5, 3),
            alpha in -5i64..5,
        ) {
            let q = FieldSpec::Rationals;
            let t = Tensor3::from_fn(3, 2, 2, q, |i, j, k| q.from_i64(entries[(i * 2 + j) * 2 + k]));
            let v: Vec<_> = v.iter().map(|&x| q.from_i64(x)).collect();
            let w: Vec<_> = w.iter().map(|&x| q.from_i64(x)).collect();
            let alpha = q.from_i64(alpha);
            let av_plus_w: Vec<_> = v
                .iter()
                .zip(&w)
                .map(|(a, b)| alpha.mul_ref(a).add_ref(b))
                .collect();
            let lhs = t.contract(1, &av_plus_w).unwrap();
            let rhs = t.contract(1, &v).unwrap().scale(&alpha).add(&t.contract(1, &w).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
