//! Exhaustive searches over small prime fields.
//!
//! Census enumeration, GL sweeps and isomorphism searches iterate over
//! millions of candidates, so they run on flat `u64` residue tables instead
//! of boxed scalars. Results are lifted back into the exact types once a
//! candidate survives. Iteration is always in lexicographic order of the
//! flattened vector, which makes every enumeration deterministic.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::matrix::Matrix;
use crate::kernel::scalar::FieldSpec;
use crate::kernel::tensor::Tensor3;
use crate::perm::{default_labels, PermAlgebra};

/// Structure constants over GF(p) as a flat table `c[(i*n + j)*n + k]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GfTable {
    pub p: u64,
    pub n: usize,
    pub c: Vec<u64>,
}

impl GfTable {
    pub fn from_algebra(a: &PermAlgebra) -> Result<GfTable> {
        let p = match a.field() {
            FieldSpec::PrimeField(p) => p,
            FieldSpec::Rationals => {
                return Err(Error::UnsupportedField(
                    "sweeps need a finite field".into(),
                ))
            }
        };
        let n = a.dim();
        let mut c = vec![0u64; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = a
                        .structure_constants()
                        .get(i, j, k)
                        .residue()
                        .expect("prime-field scalar");
                }
            }
        }
        Ok(GfTable { p, n, c })
    }

    pub fn to_algebra(&self) -> PermAlgebra {
        let field = FieldSpec::PrimeField(self.p);
        let n = self.n;
        let mut sc = Tensor3::zero(n, n, n, field);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    sc.set(i, j, k, field.from_i64(self.c[(i * n + j) * n + k] as i64));
                }
            }
        }
        PermAlgebra::new(field, default_labels(n), sc).expect("consistent dims")
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize, k: usize) -> u64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    /// out = x · y through the structure constants.
    pub fn mul_vec(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = self.n;
        let p = self.p;
        let mut out = vec![0u64; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let xy = x[i] * y[j] % p;
                for k in 0..n {
                    let c = self.entry(i, j, k);
                    if c != 0 {
                        out[k] = (out[k] + xy * c) % p;
                    }
                }
            }
        }
        out
    }

    fn mul_basis(&self, i: usize, j: usize) -> &[u64] {
        let n = self.n;
        &self.c[(i * n + j) * n..(i * n + j) * n + n]
    }

    /// Associativity and right-commutativity on every basis triple.
    pub fn is_perm(&self) -> bool {
        let n = self.n;
        let p = self.p;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut ek = vec![0u64; n];
                    ek[k] = 1;
                    let mut ei = vec![0u64; n];
                    ei[i] = 1;
                    let left = self.mul_vec(self.mul_basis(i, j), &ek);
                    let right = self.mul_vec(&ei, self.mul_basis(j, k));
                    let right_swapped = self.mul_vec(&ei, self.mul_basis(k, j));
                    for t in 0..n {
                        if left[t] % p != right[t] % p || right[t] % p != right_swapped[t] % p {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Advances a base-p odometer; false once it wraps to all zeros.
pub fn next_vector(v: &mut [u64], p: u64) -> bool {
    for digit in v.iter_mut().rev() {
        *digit += 1;
        if *digit < p {
            return true;
        }
        *digit = 0;
    }
    false
}

/// All perm multiplication tables of dimension `n` over GF(p), in
/// lexicographic order of the flattened structure-constant vector.
pub fn perm_census(n: usize, p: u64, bound: u64) -> Result<Vec<GfTable>> {
    let cells = n * n * n;
    let total = (p as f64).powi(cells as i32);
    if total > bound as f64 {
        return Err(Error::SearchBoundExceeded(format!(
            "census of p^{cells} = {total} candidates exceeds bound {bound}"
        )));
    }
    let mut out = Vec::new();
    let mut c = vec![0u64; cells];
    loop {
        let t = GfTable { p, n, c: c.clone() };
        if t.is_perm() {
            out.push(t);
        }
        if !next_vector(&mut c, p) {
            break;
        }
    }
    Ok(out)
}

/// Checks that the matrix `m` (row-major, column c = image of e_c) is
/// multiplicative from `src` to `dst`.
pub fn is_gf_morphism(src: &GfTable, dst: &GfTable, m: &[u64]) -> bool {
    let n = src.n;
    let p = src.p;
    for i in 0..n {
        for j in 0..n {
            // m applied to e_i e_j
            let prod = src.mul_basis(i, j);
            let mut lhs = vec![0u64; n];
            for c in 0..n {
                if prod[c] == 0 {
                    continue;
                }
                for r in 0..n {
                    lhs[r] = (lhs[r] + m[r * n + c] * prod[c]) % p;
                }
            }
            let col_i: Vec<u64> = (0..n).map(|r| m[r * n + i]).collect();
            let col_j: Vec<u64> = (0..n).map(|r| m[r * n + j]).collect();
            let rhs = dst.mul_vec(&col_i, &col_j);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

pub fn gf_rank(m: &[u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut a = m.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| a[r * cols + col] % p != 0);
        let pivot = match pivot {
            Some(r) => r,
            None => continue,
        };
        for c in 0..cols {
            a.swap(pivot * cols + c, rank * cols + c);
        }
        let inv = mod_inv(a[rank * cols + col], p);
        for c in 0..cols {
            a[rank * cols + c] = a[rank * cols + c] * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r * cols + col] != 0 {
                let f = a[r * cols + col];
                for c in 0..cols {
                    a[r * cols + c] = (a[r * cols + c] + (p - f) * a[rank * cols + c]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a ≠ 0 mod p.
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn is_gf_invertible(m: &[u64], n: usize, p: u64) -> bool {
    gf_rank(m, n, n, p) == n
}

/// All invertible multiplicative self-maps, in lexicographic matrix order.
/// The sweep over p^(n²) candidates is embarrassingly parallel; chunking by
/// the leading digits keeps the result order canonical after a final sort.
pub fn gf_automorphisms(t: &GfTable) -> Vec<Vec<u64>> {
    let n = t.n;
    let p = t.p;
    let cells = n * n;
    if cells == 0 {
        return vec![vec![]];
    }
    let mut found: Vec<Vec<u64>> = (0..p)
        .into_par_iter()
        .flat_map_iter(|lead| {
            let mut local = Vec::new();
            let mut m = vec![0u64; cells];
            m[0] = lead;
            loop {
                if is_gf_morphism(t, t, &m) && is_gf_invertible(&m, n, p) {
                    local.push(m.clone());
                }
                // advance all digits after the fixed leading one
                let mut carried = true;
                for digit in m[1..].iter_mut().rev() {
                    *digit += 1;
                    if *digit < p {
                        carried = false;
                        break;
                    }
                    *digit = 0;
                }
                if carried {
                    break;
                }
            }
            local.into_iter()
        })
        .collect();
    found.sort();
    found
}

/// First isomorphism in lexicographic order, or None after an exhaustive
/// sweep of all p^(n²) matrices.
pub fn find_gf_isomorphism(src: &GfTable, dst: &GfTable) -> Option<Vec<u64>> {
    let n = src.n;
    let p = src.p;
    let cells = n * n;
    if cells == 0 {
        return Some(vec![]);
    }
    let mut m = vec![0u64; cells];
    loop {
        if is_gf_morphism(src, dst, &m) && is_gf_invertible(&m, n, p) {
            return Some(m);
        }
        if !next_vector(&mut m, p) {
            return None;
        }
    }
}

/// Lifts a flat GF(p) matrix into the exact type.
pub fn lift_matrix(m: &[u64], rows: usize, cols: usize, p: u64) -> Matrix {
    let field = FieldSpec::PrimeField(p);
    Matrix::from_fn(rows, cols, field, |r, c| field.from_i64(m[r * cols + c] as i64))
}

/// Flattens an exact prime-field matrix for sweep code.
pub fn flatten_matrix(m: &Matrix) -> Vec<u64> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(m.get(r, c).residue().expect("prime-field matrix"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dim_census_is_single_empty_structure() {
        let tables = perm_census(0, 2, 10).unwrap();
        assert_eq!(tables.len(), 1);
    }

    #[test]
    fn gf2_dim1_census() {
        // Both 1-dimensional tables (zero and idempotent) are perm.
        let tables = perm_census(1, 2, 100).unwrap();
        assert_eq!(tables.len(), 2);
    }

    #[test]
    fn automorphisms_of_zero_algebra_form_gl() {
        let t = GfTable { p: 2, n: 2, c: vec![0; 8] };
        // |GL(2, 2)| = 6
        assert_eq!(gf_automorphisms(&t).len(), 6);
    }

    #[test]
    fn census_bound_is_enforced() {
        assert!(matches!(
            perm_census(3, 5, 1000),
            Err(Error::SearchBoundExceeded(_))
        ));
    }
}
