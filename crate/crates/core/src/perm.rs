//! Perm algebras, morphisms, representations, semidirect products and
//! invariant bilinear forms.
//!
//! A perm algebra is an associative algebra whose multiplication is
//! right-commutative: (a₁a₂)a₃ = a₁(a₂a₃) = a₁(a₃a₂). Everything here is
//! expressed through structure constants over an exact field, so every check
//! is a finite family of scalar identities on basis tuples.

use crate::error::{Error, Result};
use crate::kernel::matrix::{basis_vec, pairing, vec_is_zero, vec_sub, Matrix};
use crate::kernel::scalar::{FieldSpec, Scalar};
use crate::kernel::tensor::{Tensor2, Tensor3};
use crate::verdict::Verdict;

/// A finite-dimensional algebra given by structure constants
/// `sc[i][j][k]` = coefficient of `e_k` in `e_i · e_j`. Construction does not
/// force the perm laws; `check_perm` does.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermAlgebra {
    field: FieldSpec,
    basis: Vec<String>,
    sc: Tensor3,
}

impl PermAlgebra {
    pub fn new(field: FieldSpec, basis: Vec<String>, sc: Tensor3) -> Result<Self> {
        let n = basis.len();
        if sc.dims() != (n, n, n) {
            return Err(Error::DimensionMismatch(format!(
                "structure constants {:?} do not match dimension {n}",
                sc.dims()
            )));
        }
        if sc.field() != field {
            return Err(Error::FieldMismatch { left: field, right: sc.field() });
        }
        Ok(PermAlgebra { field, basis, sc })
    }

    /// The zero multiplication on `n` generators.
    pub fn zero_algebra(field: FieldSpec, n: usize) -> Self {
        PermAlgebra {
            field,
            basis: default_labels(n),
            sc: Tensor3::zero(n, n, n, field),
        }
    }

    /// Builds from integer product entries `(i, j, k, coeff)`.
    pub fn from_table(field: FieldSpec, n: usize, entries: &[(usize, usize, usize, i64)]) -> Self {
        let mut sc = Tensor3::zero(n, n, n, field);
        for &(i, j, k, v) in entries {
            sc.set(i, j, k, field.from_i64(v));
        }
        PermAlgebra { field, basis: default_labels(n), sc }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.basis = labels;
        self
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn structure_constants(&self) -> &Tensor3 {
        &self.sc
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.sc.product_basis(i, j)
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.sc.bilinear(x, y)
    }

    /// Matrix of left multiplication by the coordinate vector `a`.
    pub fn left_mult(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, self.field, |k, j| {
            let mut acc = self.field.zero();
            for i in 0..n {
                acc = acc.add_ref(&a[i].mul_ref(self.sc.get(i, j, k)));
            }
            acc
        })
    }

    /// Matrix of right multiplication by the coordinate vector `a`.
    pub fn right_mult(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, self.field, |k, j| {
            let mut acc = self.field.zero();
            for i in 0..n {
                acc = acc.add_ref(&a[i].mul_ref(self.sc.get(j, i, k)));
            }
            acc
        })
    }

    pub fn left_mult_basis(&self, i: usize) -> Matrix {
        self.left_mult(&basis_vec(self.dim(), i, self.field))
    }

    pub fn right_mult_basis(&self, i: usize) -> Matrix {
        self.right_mult(&basis_vec(self.dim(), i, self.field))
    }

    /// True when the span of the given basis indices is closed under the
    /// product.
    pub fn spans_subalgebra(&self, indices: &[usize]) -> bool {
        let inside = |k: usize| indices.contains(&k);
        for &i in indices {
            for &j in indices {
                let prod = self.mul_basis(i, j);
                for (k, v) in prod.iter().enumerate() {
                    if !v.is_zero() && !inside(k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exhaustive reduction of a rational-coefficient algebra mod p.
    pub fn reduce_mod(&self, p: u64) -> Result<PermAlgebra> {
        let field = FieldSpec::prime(p)?;
        let n = self.dim();
        let mut sc = Tensor3::zero(n, n, n, field);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    sc.set(i, j, k, self.sc.get(i, j, k).reduce_mod(p)?);
                }
            }
        }
        Ok(PermAlgebra { field, basis: self.basis.clone(), sc })
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Checks associativity and right-commutativity on every basis triple.
/// Violations carry `assoc` or `rcomm` with the failing triple.
pub fn check_perm(alg: &PermAlgebra) -> Verdict {
    let n = alg.dim();
    let mut verdict = Verdict::ok();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ij = alg.mul_basis(i, j);
                let jk = alg.mul_basis(j, k);
                let kj = alg.mul_basis(k, j);
                let left = alg.product(&ij, &basis_vec(n, k, alg.field()));
                let right = alg.product(&basis_vec(n, i, alg.field()), &jk);
                let right_swapped = alg.product(&basis_vec(n, i, alg.field()), &kj);
                if !vec_is_zero(&vec_sub(&left, &right)) {
                    verdict.push("assoc", &[i, j, k]);
                }
                if !vec_is_zero(&vec_sub(&right, &right_swapped)) {
                    verdict.push("rcomm", &[i, j, k]);
                }
            }
        }
    }
    verdict.canonicalize()
}

/// A linear map between algebras, stored as a (target-dim × source-dim)
/// matrix whose column `i` is the image of the source basis vector `e_i`.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: PermAlgebra,
    pub target: PermAlgebra,
    pub matrix: Matrix,
}

impl AlgebraMorphism {
    pub fn new(source: PermAlgebra, target: PermAlgebra, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if source.field() != target.field() || matrix.field() != source.field() {
            return Err(Error::FieldMismatch { left: source.field(), right: target.field() });
        }
        Ok(AlgebraMorphism { source, target, matrix })
    }

    pub fn identity(alg: &PermAlgebra) -> Self {
        AlgebraMorphism {
            source: alg.clone(),
            target: alg.clone(),
            matrix: Matrix::identity(alg.dim(), alg.field()),
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(v)
    }
}

/// Multiplicativity f(e_i e_j) = f(e_i) f(e_j) on every basis pair.
pub fn check_morphism(f: &AlgebraMorphism) -> Verdict {
    let n = f.source.dim();
    let mut verdict = Verdict::ok();
    for i in 0..n {
        for j in 0..n {
            let lhs = f.apply(&f.source.mul_basis(i, j));
            let rhs = f.target.product(&f.matrix.column(i), &f.matrix.column(j));
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                verdict.push("morphism", &[i, j]);
            }
        }
    }
    verdict.canonicalize()
}

pub fn is_isomorphism(f: &AlgebraMorphism) -> bool {
    check_morphism(f).is_ok() && f.matrix.is_invertible()
}

/// Default bound on dim² for exhaustive isomorphism searches.
pub const ISO_SEARCH_DIM_SQ: usize = 9;

/// Exhaustive isomorphism search over GL(n, p). Returns a verified witness or
/// a definitive `None`. Only finite fields: over the rationals the library
/// checks supplied certificates instead of searching.
pub fn find_isomorphism(a: &PermAlgebra, b: &PermAlgebra) -> Result<Option<AlgebraMorphism>> {
    find_isomorphism_with_bound(a, b, ISO_SEARCH_DIM_SQ)
}

pub fn find_isomorphism_with_bound(
    a: &PermAlgebra,
    b: &PermAlgebra,
    dim_sq_bound: usize,
) -> Result<Option<AlgebraMorphism>> {
    let p = match (a.field(), b.field()) {
        (FieldSpec::PrimeField(p), FieldSpec::PrimeField(q)) if p == q => p,
        (FieldSpec::Rationals, _) | (_, FieldSpec::Rationals) => {
            return Err(Error::UnsupportedField(
                "isomorphism search is exhaustive and needs a finite field".into(),
            ))
        }
        (l, r) => return Err(Error::FieldMismatch { left: l, right: r }),
    };
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "isomorphism search between dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let n = a.dim();
    if n * n > dim_sq_bound {
        return Err(Error::SearchBoundExceeded(format!(
            "dim^2 = {} exceeds isomorphism search bound {dim_sq_bound}",
            n * n
        )));
    }
    let src = crate::sweep::GfTable::from_algebra(a)?;
    let dst = crate::sweep::GfTable::from_algebra(b)?;
    match crate::sweep::find_gf_isomorphism(&src, &dst) {
        None => Ok(None),
        Some(m) => {
            let field = FieldSpec::PrimeField(p);
            let matrix = Matrix::from_fn(n, n, field, |r, c| field.from_i64(m[r * n + c] as i64));
            let f = AlgebraMorphism::new(a.clone(), b.clone(), matrix)?;
            debug_assert!(is_isomorphism(&f));
            Ok(Some(f))
        }
    }
}

/// Left/right module actions of an algebra on an `m`-dimensional space,
/// stored as one matrix per basis element of the algebra.
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: PermAlgebra,
    pub dim: usize,
    pub l: Vec<Matrix>,
    pub r: Vec<Matrix>,
}

impl Representation {
    pub fn new(algebra: PermAlgebra, dim: usize, l: Vec<Matrix>, r: Vec<Matrix>) -> Result<Self> {
        let n = algebra.dim();
        if l.len() != n || r.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "need one action matrix per basis element ({n})"
            )));
        }
        for m in l.iter().chain(r.iter()) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch { left: algebra.field(), right: m.field() });
            }
        }
        Ok(Representation { algebra, dim, l, r })
    }

    pub fn zero(algebra: PermAlgebra, dim: usize) -> Self {
        let n = algebra.dim();
        let z = Matrix::zero(dim, dim, algebra.field());
        Representation { algebra: algebra.clone(), dim, l: vec![z.clone(); n], r: vec![z; n] }
    }

    /// Action matrix of `ℓ(a)` for a coordinate vector `a`.
    pub fn l_of(&self, a: &[Scalar]) -> Matrix {
        combine(&self.l, a, self.dim, self.algebra.field())
    }

    pub fn r_of(&self, a: &[Scalar]) -> Matrix {
        combine(&self.r, a, self.dim, self.algebra.field())
    }
}

fn combine(mats: &[Matrix], coeffs: &[Scalar], dim: usize, field: FieldSpec) -> Matrix {
    let mut acc = Matrix::zero(dim, dim, field);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

/// The five action identities
///   𝔯(a₁a₂) = 𝔯(a₂)∘𝔯(a₁) = 𝔯(a₁)∘𝔯(a₂),
///   ℓ(a₁a₂) = ℓ(a₁)∘ℓ(a₂) = ℓ(a₁)∘𝔯(a₂) = 𝔯(a₂)∘ℓ(a₁),
/// on every basis pair.
pub fn check_representation(rep: &Representation) -> Verdict {
    let n = rep.algebra.dim();
    let mut verdict = Verdict::ok();
    for i in 0..n {
        for j in 0..n {
            let prod = rep.algebra.mul_basis(i, j);
            let r_prod = rep.r_of(&prod);
            let l_prod = rep.l_of(&prod);
            if r_prod != rep.r[j].mul(&rep.r[i]) {
                verdict.push("rep-rr", &[i, j]);
            }
            if r_prod != rep.r[i].mul(&rep.r[j]) {
                verdict.push("rep-rc", &[i, j]);
            }
            if l_prod != rep.l[i].mul(&rep.l[j]) {
                verdict.push("rep-ll", &[i, j]);
            }
            if l_prod != rep.l[i].mul(&rep.r[j]) {
                verdict.push("rep-lr", &[i, j]);
            }
            if l_prod != rep.r[j].mul(&rep.l[i]) {
                verdict.push("rep-rl", &[i, j]);
            }
        }
    }
    verdict.canonicalize()
}

/// The algebra on A ⊕ V with (a₁,v₁)(a₂,v₂) = (a₁a₂, a₁v₂ + v₁a₂).
/// Passes `check_perm` exactly when the actions pass `check_representation`.
pub fn semidirect_product(a: &PermAlgebra, rep: &Representation) -> Result<PermAlgebra> {
    if rep.algebra != *a {
        return Err(Error::DimensionMismatch(
            "representation is over a different algebra".into(),
        ));
    }
    let n = a.dim();
    let m = rep.dim;
    let dim = n + m;
    let field = a.field();
    let mut sc = Tensor3::zero(dim, dim, dim, field);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                sc.set(i, j, k, a.structure_constants().get(i, j, k).clone());
            }
        }
    }
    for i in 0..n {
        for j in 0..m {
            // e_i · v_j = ℓ(e_i) v_j and v_j · e_i = 𝔯(e_i) v_j
            for k in 0..m {
                sc.set(i, n + j, n + k, rep.l[i].get(k, j).clone());
                sc.set(n + j, i, n + k, rep.r[i].get(k, j).clone());
            }
        }
    }
    let mut labels = a.basis().to_vec();
    labels.extend((1..=m).map(|i| format!("v{i}")));
    PermAlgebra::new(field, labels, sc)
}

/// Left and right multiplication as a representation of the algebra on
/// itself.
pub fn regular_representation(a: &PermAlgebra) -> Representation {
    let n = a.dim();
    Representation {
        algebra: a.clone(),
        dim: n,
        l: (0..n).map(|i| a.left_mult_basis(i)).collect(),
        r: (0..n).map(|i| a.right_mult_basis(i)).collect(),
    }
}

/// The dual actions (𝔯* − ℓ*, 𝔯*) on V*, again a representation.
pub fn dual_representation(rep: &Representation) -> Representation {
    let n = rep.algebra.dim();
    Representation {
        algebra: rep.algebra.clone(),
        dim: rep.dim,
        l: (0..n)
            .map(|i| rep.r[i].transpose().sub(&rep.l[i].transpose()))
            .collect(),
        r: (0..n).map(|i| rep.r[i].transpose()).collect(),
    }
}

/// Builds the perm product a₁·a₂ = a₁ d(a₂) from a commutative associative
/// algebra with a differential. Both hypotheses are checked, not assumed.
pub fn from_differential(a: &PermAlgebra, d: &Matrix) -> Result<PermAlgebra> {
    let n = a.dim();
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "differential is {}x{}, expected {n}x{n}",
            d.rows(),
            d.cols()
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if !vec_is_zero(&vec_sub(&a.mul_basis(i, j), &a.mul_basis(j, i))) {
                return Err(Error::NotCommutativeAssociative);
            }
            for k in 0..n {
                let left = a.product(&a.mul_basis(i, j), &basis_vec(n, k, a.field()));
                let right = a.product(&basis_vec(n, i, a.field()), &a.mul_basis(j, k));
                if !vec_is_zero(&vec_sub(&left, &right)) {
                    return Err(Error::NotCommutativeAssociative);
                }
            }
        }
    }
    if !d.mul(d).is_zero() {
        return Err(Error::NotDifferential("d ∘ d ≠ 0".into()));
    }
    for i in 0..n {
        for j in 0..n {
            // Leibniz: d(e_i e_j) = e_i d(e_j) + d(e_i) e_j
            let lhs = d.apply(&a.mul_basis(i, j));
            let ei = basis_vec(n, i, a.field());
            let ej = basis_vec(n, j, a.field());
            let rhs = crate::kernel::matrix::vec_add(
                &a.product(&ei, &d.apply(&ej)),
                &a.product(&d.apply(&ei), &ej),
            );
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                return Err(Error::NotDifferential(format!(
                    "Leibniz rule fails at basis pair ({i}, {j})"
                )));
            }
        }
    }
    let field = a.field();
    let mut sc = Tensor3::zero(n, n, n, field);
    for i in 0..n {
        for j in 0..n {
            let ei = basis_vec(n, i, field);
            let prod = a.product(&ei, &d.apply(&basis_vec(n, j, field)));
            for (k, v) in prod.into_iter().enumerate() {
                sc.set(i, j, k, v);
            }
        }
    }
    PermAlgebra::new(field, a.basis().to_vec(), sc)
}

/// A bilinear form on the algebra, as its Gram matrix `gram[i][j] = ω(e_i, e_j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BilinearForm {
    pub gram: Tensor2,
}

impl BilinearForm {
    pub fn new(gram: Tensor2) -> Self {
        BilinearForm { gram }
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let field = self.gram.field();
        let (d1, d2) = self.gram.dims();
        let mut acc = field.zero();
        for i in 0..d1 {
            for j in 0..d2 {
                let g = self.gram.get(i, j);
                if !g.is_zero() {
                    acc = acc.add_ref(&x[i].mul_ref(&y[j]).mul_ref(g));
                }
            }
        }
        acc
    }
}

/// Properties requested of a bilinear form on top of invariance.
#[derive(Clone, Copy, Default, Debug)]
pub struct FormFlags {
    pub symmetric: bool,
    pub skew: bool,
    pub nondegenerate: bool,
}

/// Invariance ω(a₁a₂, a₃) = ω(a₂, a₃a₁) − ω(a₂, a₁a₃) on all basis triples,
/// plus each requested flag.
pub fn check_invariant_form(a: &PermAlgebra, form: &BilinearForm, flags: FormFlags) -> Result<Verdict> {
    let n = a.dim();
    if form.gram.dims() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "form on a {n}-dimensional algebra has gram {:?}",
            form.gram.dims()
        )));
    }
    let mut verdict = Verdict::ok();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ei = basis_vec(n, i, a.field());
                let ej = basis_vec(n, j, a.field());
                let ek = basis_vec(n, k, a.field());
                let lhs = form.eval(&a.mul_basis(i, j), &ek);
                let rhs = form
                    .eval(&ej, &a.product(&ek, &ei))
                    .sub_ref(&form.eval(&ej, &a.product(&ei, &ek)));
                if lhs != rhs {
                    verdict.push("invariant", &[i, j, k]);
                }
            }
        }
    }
    if flags.symmetric && !form.gram.is_symmetric() {
        verdict.push("symmetric", &[]);
    }
    if flags.skew {
        let skew = (0..n).all(|i| {
            (0..n).all(|j| form.gram.get(i, j).add_ref(form.gram.get(j, i)).is_zero())
        });
        if !skew {
            verdict.push("skew", &[]);
        }
    }
    if flags.nondegenerate && form.gram.to_matrix().rank() != n {
        verdict.push("nondegenerate", &[]);
    }
    Ok(verdict.canonicalize())
}

/// For a nondegenerate skew-symmetric invariant form, the induced map
/// φ: A → A*, ⟨φ(a₁), a₂⟩ = ω(a₁, a₂) intertwines the regular representation
/// with its dual. The returned matrix is verified before it is handed back.
pub fn form_to_rep_morphism(a: &PermAlgebra, form: &BilinearForm) -> Result<Matrix> {
    let flags = FormFlags { symmetric: false, skew: true, nondegenerate: true };
    let verdict = check_invariant_form(a, form, flags)?;
    if !verdict.is_ok() {
        return Err(Error::PreconditionFailed(format!(
            "form is not nondegenerate skew-symmetric invariant: {:?}",
            verdict.violations
        )));
    }
    let n = a.dim();
    // φ(e_i) = Σ_j ω(e_i, e_j) e_j*, so the matrix is gramᵀ.
    let phi = form.gram.to_matrix().transpose();
    let reg = regular_representation(a);
    let dual = dual_representation(&reg);
    for i in 0..n {
        let lhs_l = phi.mul(&reg.l[i]);
        let rhs_l = dual.l[i].mul(&phi);
        let lhs_r = phi.mul(&reg.r[i]);
        let rhs_r = dual.r[i].mul(&phi);
        if lhs_l != rhs_l || lhs_r != rhs_r {
            return Err(Error::PreconditionFailed(format!(
                "induced map fails to intertwine at basis element {i}"
            )));
        }
    }
    Ok(phi)
}

/// Kronecker pairing of a dual vector with an algebra vector.
pub fn pair(u: &[Scalar], v: &[Scalar]) -> Scalar {
    pairing(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn class_i(field: FieldSpec) -> PermAlgebra {
        PermAlgebra::from_table(field, 2, &[(0, 0, 0, 1), (1, 0, 1, 1)])
    }

    pub(crate) fn class_ii(field: FieldSpec) -> PermAlgebra {
        PermAlgebra::from_table(field, 2, &[(0, 0, 0, 1), (0, 0, 1, 1), (1, 0, 1, 1)])
    }

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn class_i_is_perm() {
        assert!(check_perm(&class_i(q())).is_ok());
    }

    #[test]
    fn class_ii_table_is_not_associative() {
        // With e1e1 = e1 + e2, associativity at (e1,e1,e1) reduces to
        // e2e1 = e1e2, which fails here; the validator must say so.
        let verdict = check_perm(&class_ii(q()));
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.law == "assoc" && v.at == vec![0, 0, 0]));
    }

    #[test]
    fn zero_multiplication_is_perm() {
        for n in 0..4 {
            assert!(check_perm(&PermAlgebra::zero_algebra(q(), n)).is_ok());
        }
    }

    #[test]
    fn e1e2_eq_e1_fails_associativity() {
        let alg = PermAlgebra::from_table(q(), 2, &[(0, 1, 0, 1)]);
        let verdict = check_perm(&alg);
        assert!(!verdict.is_ok());
        // (e1 e2) e2 = e1 e2 = e1 but e1 (e2 e2) = 0.
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.law == "assoc" && v.at == vec![0, 1, 1]));
    }

    #[test]
    fn paper_isomorphism_certificates_verify() {
        // A_{s1}: e1e1 = s1 e1, e2e1 = s1 e2. f(e1) = (s1/s1')(e1+e2), f(e2) = e2.
        for (s1, s1p) in [(2i64, 1i64), (3, 5)] {
            let a = PermAlgebra::from_table(q(), 2, &[(0, 0, 0, s1), (1, 0, 1, s1)]);
            let b = PermAlgebra::from_table(q(), 2, &[(0, 0, 0, s1p), (1, 0, 1, s1p)]);
            let ratio = q().from_i64(s1).div_ref(&q().from_i64(s1p)).unwrap();
            let matrix = Matrix::from_fn(2, 2, q(), |r, c| match (r, c) {
                (0, 0) | (1, 0) => ratio.clone(),
                (1, 1) => q().one(),
                _ => q().zero(),
            });
            let f = AlgebraMorphism::new(a, b, matrix).unwrap();
            assert!(check_morphism(&f).is_ok());
            assert!(is_isomorphism(&f));
        }
    }

    #[test]
    fn family_isomorphism_certificates_verify() {
        // A_{s1,s2}: e1e1 = s1 e1 + s2 e2, e2e1 = s1 e2.
        // f(e1) = (s1/s1')(e1+e2), f(e2) = (s1² s2')/(s1'² s2) e2.
        for ((s1, s2), (s1p, s2p)) in [((2i64, 3i64), (1i64, 1i64)), ((1, 2), (5, 7))] {
            let a = PermAlgebra::from_table(q(), 2, &[(0, 0, 0, s1), (0, 0, 1, s2), (1, 0, 1, s1)]);
            let b =
                PermAlgebra::from_table(q(), 2, &[(0, 0, 0, s1p), (0, 0, 1, s2p), (1, 0, 1, s1p)]);
            let ratio = q().from_i64(s1).div_ref(&q().from_i64(s1p)).unwrap();
            let e2_coeff = q()
                .from_i64(s1 * s1 * s2p)
                .div_ref(&q().from_i64(s1p * s1p * s2))
                .unwrap();
            let matrix = Matrix::from_fn(2, 2, q(), |r, c| match (r, c) {
                (0, 0) | (1, 0) => ratio.clone(),
                (1, 1) => e2_coeff.clone(),
                _ => q().zero(),
            });
            let f = AlgebraMorphism::new(a, b, matrix).unwrap();
            assert!(is_isomorphism(&f));
        }
    }

    #[test]
    fn identity_is_a_morphism() {
        let a = class_i(q());
        assert!(check_morphism(&AlgebraMorphism::identity(&a)).is_ok());
    }

    #[test]
    fn swap_map_fails_multiplicativity() {
        let a = class_i(q());
        let swap = Matrix::from_i64_rows(q(), &[vec![0, 1], vec![1, 0]]);
        let f = AlgebraMorphism::new(a.clone(), a, swap).unwrap();
        let verdict = check_morphism(&f);
        // f(e1 e1) = e2 but f(e1) f(e1) = e2 e2 = 0.
        assert!(verdict.violations.iter().any(|v| v.at == vec![0, 0]));
    }

    #[test]
    fn regular_representation_of_class_i() {
        let a = class_i(q());
        let reg = regular_representation(&a);
        assert_eq!(reg.l[0], Matrix::from_i64_rows(q(), &[vec![1, 0], vec![0, 0]]));
        assert_eq!(reg.r[0], Matrix::identity(2, q()));
        assert_eq!(reg.l[1], Matrix::from_i64_rows(q(), &[vec![0, 0], vec![1, 0]]));
        assert!(reg.r[1].is_zero());
        assert!(check_representation(&reg).is_ok());
    }

    #[test]
    fn zero_actions_are_a_representation() {
        let a = class_i(q());
        assert!(check_representation(&Representation::zero(a, 3)).is_ok());
    }

    #[test]
    fn bad_actions_are_rejected() {
        // One-dimensional module with ℓ(e1) = 1, 𝔯(e1) = 1, ℓ(e2) = 1, 𝔯(e2) = 0:
        // ℓ(e1 e2) = ℓ(0) = 0 but ℓ(e1)ℓ(e2) = 1.
        let a = class_i(q());
        let one = Matrix::from_i64_rows(q(), &[vec![1]]);
        let zero = Matrix::zero(1, 1, q());
        let rep = Representation::new(a, 1, vec![one.clone(), one.clone()], vec![one, zero]).unwrap();
        let verdict = check_representation(&rep);
        assert!(verdict.violations.iter().any(|v| v.law == "rep-ll" && v.at == vec![0, 1]));
    }

    #[test]
    fn dual_of_zero_representation_is_zero() {
        let a = class_i(q());
        let dual = dual_representation(&Representation::zero(a, 2));
        assert!(dual.l.iter().all(Matrix::is_zero));
        assert!(dual.r.iter().all(Matrix::is_zero));
    }

    #[test]
    fn dual_of_regular_representation_is_a_representation() {
        let a = class_i(q());
        let dual = dual_representation(&regular_representation(&a));
        assert!(check_representation(&dual).is_ok());
    }

    #[test]
    fn semidirect_product_reproduces_split_extension() {
        // One-dimensional module with e1 acting as identity on both sides.
        let a = class_i(q());
        let one = Matrix::from_i64_rows(q(), &[vec![1]]);
        let zero = Matrix::zero(1, 1, q());
        let rep = Representation::new(a, 1, vec![one.clone(), zero.clone()], vec![one, zero]).unwrap();
        assert!(check_representation(&rep).is_ok());
        let e = semidirect_product(&rep.algebra, &rep).unwrap();
        let expect = PermAlgebra::from_table(
            q(),
            3,
            &[(0, 0, 0, 1), (1, 0, 1, 1), (0, 2, 2, 1), (2, 0, 2, 1)],
        );
        assert_eq!(e.structure_constants(), expect.structure_constants());
        assert!(check_perm(&e).is_ok());
    }

    #[test]
    fn semidirect_with_zero_representation_is_direct_sum() {
        let a = class_i(q());
        let e = semidirect_product(&a, &Representation::zero(a.clone(), 2)).unwrap();
        assert!(check_perm(&e).is_ok());
        assert!(a.spans_subalgebra(&[0, 1]));
        for i in 2..4 {
            for j in 0..4 {
                assert!(vec_is_zero(&e.mul_basis(i, j)));
                assert!(vec_is_zero(&e.mul_basis(j, i)));
            }
        }
    }

    #[test]
    fn differential_squaring_to_nonzero_is_rejected() {
        // k[x]/(x³) with basis {1, x, x²} and d = d/dx: d(x²) = 2x, d(d(x²)) = 2 ≠ 0.
        let mut sc = Tensor3::zero(3, 3, 3, q());
        for i in 0..3usize {
            for j in 0..3usize {
                if i + j < 3 {
                    sc.set(i, j, i + j, q().one());
                }
            }
        }
        let a = PermAlgebra::new(q(), default_labels(3), sc).unwrap();
        assert!(check_perm(&a).is_ok());
        let d = Matrix::from_i64_rows(q(), &[vec![0, 1, 0], vec![0, 0, 2], vec![0, 0, 0]]);
        assert!(matches!(from_differential(&a, &d), Err(Error::NotDifferential(_))));
    }

    #[test]
    fn zero_differential_gives_zero_product() {
        let mut sc = Tensor3::zero(2, 2, 2, q());
        sc.set(0, 0, 0, q().one());
        sc.set(0, 1, 1, q().one());
        sc.set(1, 0, 1, q().one());
        let a = PermAlgebra::new(q(), default_labels(2), sc).unwrap();
        let d = Matrix::zero(2, 2, q());
        let perm = from_differential(&a, &d).unwrap();
        assert!(perm.structure_constants().is_zero());
        assert!(check_perm(&perm).is_ok());
    }

    #[test]
    fn nilpotent_differential_example() {
        // u v = v u = 0, u² = v² = 0 with d(u) = v, d(v) = 0: all perm products vanish.
        let a = PermAlgebra::zero_algebra(q(), 2);
        let d = Matrix::from_i64_rows(q(), &[vec![0, 0], vec![1, 0]]);
        let perm = from_differential(&a, &d).unwrap();
        assert!(perm.structure_constants().is_zero());
    }

    #[test]
    fn zero_form_is_invariant_but_degenerate() {
        let a = class_i(q());
        let form = BilinearForm::new(Tensor2::zero(2, 2, q()));
        let ok = check_invariant_form(&a, &form, FormFlags::default()).unwrap();
        assert!(ok.is_ok());
        let flags = FormFlags { nondegenerate: true, ..Default::default() };
        let verdict = check_invariant_form(&a, &form, flags).unwrap();
        assert!(verdict.has_law("nondegenerate"));
    }

    #[test]
    fn identity_gram_is_not_invariant_on_class_i() {
        let a = class_i(q());
        let form = BilinearForm::new(Tensor2::from_matrix(&Matrix::identity(2, q())));
        let verdict = check_invariant_form(&a, &form, FormFlags::default()).unwrap();
        assert!(verdict.violations.iter().any(|v| v.law == "invariant" && v.at == vec![0, 0, 0]));
    }

    #[test]
    fn degenerate_form_fails_rep_morphism_precondition() {
        let a = class_i(q());
        let form = BilinearForm::new(Tensor2::zero(2, 2, q()));
        assert!(matches!(
            form_to_rep_morphism(&a, &form),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn dim0_form_morphism_is_empty() {
        let a = PermAlgebra::zero_algebra(q(), 0);
        let form = BilinearForm::new(Tensor2::zero(0, 0, q()));
        let phi = form_to_rep_morphism(&a, &form).unwrap();
        assert_eq!((phi.rows(), phi.cols()), (0, 0));
    }

    #[test]
    fn skew_invariant_form_on_class_i_induces_rep_morphism() {
        let a = class_i(q());
        let gram = Matrix::from_i64_rows(q(), &[vec![0, 1], vec![-1, 0]]);
        let form = BilinearForm::new(Tensor2::from_matrix(&gram));
        let phi = form_to_rep_morphism(&a, &form).unwrap();
        assert!(phi.is_invertible());
    }
}
