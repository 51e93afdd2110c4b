//! Non-abelian 2-cocycles, crossed products, automorphism inducibility and
//! the Wells map.
//!
//! A non-abelian 2-cocycle on B with values in A is a triple of bilinear maps
//! (⊳: B×A→A, ⊲: A×B→A, χ: B×B→A) satisfying the five families nab1–nab5;
//! equivalently, A ⊕ B with
//!
//! ```text
//!   (a₁,b₁)(a₂,b₂) = (a₁a₂ + b₁⊳a₂ + a₁⊲b₂ + χ(b₁,b₂), b₁b₂)
//! ```
//!
//! is a perm algebra (the crossed product A ⋊ B). Cocycles classify the
//! extensions 0 → A → E → B → 0; a pair (β, γ) ∈ Aut(A) × Aut(B) is
//! inducible when it lifts to an automorphism of E, and for abelian A the
//! obstruction is the Wells map into the cocycle classes.

use crate::error::{Error, Result};
use crate::kernel::matrix::{basis_vec, vec_add, vec_is_zero, vec_sub, Matrix};
use crate::kernel::scalar::{FieldSpec, Scalar};
use crate::kernel::tensor::Tensor3;
use crate::perm::{
    check_morphism, check_perm, check_representation, AlgebraMorphism, PermAlgebra,
    Representation,
};
use crate::sweep;
use crate::verdict::Verdict;

/// The triple (⊳, ⊲, χ): `tr` is (dimB, dimA, dimA), `tl` is
/// (dimA, dimB, dimA), `chi` is (dimB, dimB, dimA).
#[derive(Clone, PartialEq, Debug)]
pub struct NonAbelianCocycle {
    pub a: PermAlgebra,
    pub b: PermAlgebra,
    pub tr: Tensor3,
    pub tl: Tensor3,
    pub chi: Tensor3,
}

impl NonAbelianCocycle {
    pub fn new(
        a: PermAlgebra,
        b: PermAlgebra,
        tr: Tensor3,
        tl: Tensor3,
        chi: Tensor3,
    ) -> Result<Self> {
        if a.field() != b.field() {
            return Err(Error::FieldMismatch { left: a.field(), right: b.field() });
        }
        let (na, nb) = (a.dim(), b.dim());
        let shapes = [
            ("tr", tr.dims(), (nb, na, na)),
            ("tl", tl.dims(), (na, nb, na)),
            ("chi", chi.dims(), (nb, nb, na)),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::DimensionMismatch(format!(
                    "{name} tensor has dims {got:?}, expected {want:?}"
                )));
            }
        }
        Ok(NonAbelianCocycle { a, b, tr, tl, chi })
    }

    pub fn zero(a: PermAlgebra, b: PermAlgebra) -> Result<Self> {
        let (na, nb) = (a.dim(), b.dim());
        let f = a.field();
        NonAbelianCocycle::new(
            a,
            b,
            Tensor3::zero(nb, na, na, f),
            Tensor3::zero(na, nb, na, f),
            Tensor3::zero(nb, nb, na, f),
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }

    pub fn act_tr(&self, b: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        self.tr.bilinear(b, a)
    }

    pub fn act_tl(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        self.tl.bilinear(a, b)
    }

    pub fn act_chi(&self, b1: &[Scalar], b2: &[Scalar]) -> Vec<Scalar> {
        self.chi.bilinear(b1, b2)
    }
}

/// The five cocycle families, reported per basis tuple.
pub fn validate_cocycle(c: &NonAbelianCocycle) -> Verdict {
    let na = c.a.dim();
    let nb = c.b.dim();
    let f = c.field();
    let ea = |i: usize| basis_vec(na, i, f);
    let eb = |i: usize| basis_vec(nb, i, f);
    let mut out = Verdict::ok();

    // nab1: (a1a2)⊲b − (a2a1)⊲b = a1(a2⊲b) − a2(a1⊲b)
    for i in 0..na {
        for j in 0..na {
            for t in 0..nb {
                let b = eb(t);
                let lhs = vec_sub(
                    &c.act_tl(&c.a.mul_basis(i, j), &b),
                    &c.act_tl(&c.a.mul_basis(j, i), &b),
                );
                let rhs = vec_sub(
                    &c.a.product(&ea(i), &c.act_tl(&ea(j), &b)),
                    &c.a.product(&ea(j), &c.act_tl(&ea(i), &b)),
                );
                if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                    out.push("nab1", &[i, j, t]);
                }
            }
        }
    }
    // nab2: b⊳(a1a2) − a1(b⊳a2) = (b⊳a1 − a1⊲b)a2
    for t in 0..nb {
        let b = eb(t);
        for i in 0..na {
            for j in 0..na {
                let lhs = vec_sub(
                    &c.act_tr(&b, &c.a.mul_basis(i, j)),
                    &c.a.product(&ea(i), &c.act_tr(&b, &ea(j))),
                );
                let rhs = c.a.product(
                    &vec_sub(&c.act_tr(&b, &ea(i)), &c.act_tl(&ea(i), &b)),
                    &ea(j),
                );
                if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                    out.push("nab2", &[t, i, j]);
                }
            }
        }
    }
    // nab3: b1⊳(a⊲b2) − (b1⊳a)⊲b2 = a⊲(b1b2) − (a⊲b1)⊲b2 + aχ(b1,b2)
    for s in 0..nb {
        let b1 = eb(s);
        for i in 0..na {
            let a = ea(i);
            for t in 0..nb {
                let b2 = eb(t);
                let lhs = vec_sub(
                    &c.act_tr(&b1, &c.act_tl(&a, &b2)),
                    &c.act_tl(&c.act_tr(&b1, &a), &b2),
                );
                let rhs = vec_add(
                    &vec_sub(
                        &c.act_tl(&a, &c.b.mul_basis(s, t)),
                        &c.act_tl(&c.act_tl(&a, &b1), &b2),
                    ),
                    &c.a.product(&a, &c.act_chi(&b1, &b2)),
                );
                if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                    out.push("nab3", &[s, i, t]);
                }
            }
        }
    }
    // nab4: (b1b2 − b2b1)⊳a = b1⊳(b2⊳a) − b2⊳(b1⊳a) − χ(b1,b2)a + χ(b2,b1)a
    for s in 0..nb {
        let b1 = eb(s);
        for t in 0..nb {
            let b2 = eb(t);
            for i in 0..na {
                let a = ea(i);
                let lhs = c.act_tr(
                    &vec_sub(&c.b.mul_basis(s, t), &c.b.mul_basis(t, s)),
                    &a,
                );
                let rhs = vec_add(
                    &vec_sub(
                        &c.act_tr(&b1, &c.act_tr(&b2, &a)),
                        &c.act_tr(&b2, &c.act_tr(&b1, &a)),
                    ),
                    &vec_sub(
                        &c.a.product(&c.act_chi(&b2, &b1), &a),
                        &c.a.product(&c.act_chi(&b1, &b2), &a),
                    ),
                );
                if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                    out.push("nab4", &[s, t, i]);
                }
            }
        }
    }
    // nab5: χ(b1b2,b3) − χ(b1,b2b3) − χ(b2b1,b3) + χ(b2,b1b3)
    //     = b1⊳χ(b2,b3) − b2⊳χ(b1,b3) − χ(b1,b2)⊲b3 + χ(b2,b1)⊲b3
    for s in 0..nb {
        let b1 = eb(s);
        for t in 0..nb {
            let b2 = eb(t);
            for u in 0..nb {
                let b3 = eb(u);
                let lhs = vec_add(
                    &vec_sub(
                        &c.act_chi(&c.b.mul_basis(s, t), &b3),
                        &c.act_chi(&b1, &c.b.mul_basis(t, u)),
                    ),
                    &vec_sub(
                        &c.act_chi(&b2, &c.b.mul_basis(s, u)),
                        &c.act_chi(&c.b.mul_basis(t, s), &b3),
                    ),
                );
                let rhs = vec_add(
                    &vec_sub(
                        &c.act_tr(&b1, &c.act_chi(&b2, &b3)),
                        &c.act_tr(&b2, &c.act_chi(&b1, &b3)),
                    ),
                    &vec_sub(
                        &c.act_tl(&c.act_chi(&b2, &b1), &b3),
                        &c.act_tl(&c.act_chi(&b1, &b2), &b3),
                    ),
                );
                if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                    out.push("nab5", &[s, t, u]);
                }
            }
        }
    }
    out.canonicalize()
}

/// The crossed product A ⋊ B with A embedded first.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub algebra: PermAlgebra,
    pub dim_a: usize,
    pub dim_b: usize,
}

impl CrossedProduct {
    pub fn a_indices(&self) -> Vec<usize> {
        (0..self.dim_a).collect()
    }

    /// The canonical section B → E, b ↦ (0, b).
    pub fn canonical_section(&self) -> Matrix {
        let f = self.algebra.field();
        Matrix::from_fn(self.dim_a + self.dim_b, self.dim_b, f, |r, c| {
            if r == self.dim_a + c {
                f.one()
            } else {
                f.zero()
            }
        })
    }
}

pub fn crossed_product(c: &NonAbelianCocycle) -> Result<CrossedProduct> {
    if !validate_cocycle(c).is_ok() {
        return Err(Error::InvalidCocycle);
    }
    Ok(crossed_product_unchecked(c))
}

pub fn crossed_product_unchecked(c: &NonAbelianCocycle) -> CrossedProduct {
    let na = c.a.dim();
    let nb = c.b.dim();
    let dim = na + nb;
    let f = c.field();
    let mut sc = Tensor3::zero(dim, dim, dim, f);
    for i in 0..na {
        for j in 0..na {
            for k in 0..na {
                sc.set(i, j, k, c.a.structure_constants().get(i, j, k).clone());
            }
        }
    }
    for i in 0..na {
        for t in 0..nb {
            for k in 0..na {
                // (a_i, 0)(0, b_t) = (a_i ⊲ b_t, 0)
                sc.set(i, na + t, k, c.tl.get(i, t, k).clone());
                // (0, b_t)(a_i, 0) = (b_t ⊳ a_i, 0)
                sc.set(na + t, i, k, c.tr.get(t, i, k).clone());
            }
        }
    }
    for s in 0..nb {
        for t in 0..nb {
            for k in 0..na {
                sc.set(na + s, na + t, k, c.chi.get(s, t, k).clone());
            }
            for k in 0..nb {
                sc.set(na + s, na + t, na + k, c.b.structure_constants().get(s, t, k).clone());
            }
        }
    }
    let mut labels = c.a.basis().to_vec();
    labels.extend(c.b.basis().iter().map(|l| format!("{l}'")));
    let algebra = PermAlgebra::new(f, labels, sc).expect("consistent dims");
    CrossedProduct { algebra, dim_a: na, dim_b: nb }
}

/// Reads the cocycle of an extension off a section ς: B → E with π∘ς = id:
/// b⊳a = ς(b)⋄a, a⊲b = a⋄ς(b), χ(b₁,b₂) = ς(b₁)⋄ς(b₂) − ς(b₁b₂).
pub fn cocycle_from_extension(
    e: &PermAlgebra,
    a_indices: &[usize],
    b: &PermAlgebra,
    section: &Matrix,
) -> Result<NonAbelianCocycle> {
    let dim = e.dim();
    let f = e.field();
    let nb = b.dim();
    let na = a_indices.len();
    if na + nb != dim {
        return Err(Error::DimensionMismatch(format!(
            "dim A ({na}) + dim B ({nb}) must equal dim E ({dim})"
        )));
    }
    if section.rows() != dim || section.cols() != nb {
        return Err(Error::DimensionMismatch("section must be dim E × dim B".into()));
    }
    if !e.spans_subalgebra(a_indices) {
        return Err(Error::NotSubalgebra("A does not span a subalgebra of E".into()));
    }
    let b_indices: Vec<usize> = (0..dim).filter(|i| !a_indices.contains(i)).collect();
    // A must be an ideal and the quotient multiplication must be B's.
    for i in 0..dim {
        for &j in a_indices {
            for (k, v) in e.mul_basis(i, j).iter().enumerate() {
                if !v.is_zero() && !a_indices.contains(&k) {
                    return Err(Error::NotSubalgebra("A is not an ideal of E".into()));
                }
            }
            for (k, v) in e.mul_basis(j, i).iter().enumerate() {
                if !v.is_zero() && !a_indices.contains(&k) {
                    return Err(Error::NotSubalgebra("A is not an ideal of E".into()));
                }
            }
        }
    }
    let project_b = |w: &[Scalar]| -> Vec<Scalar> {
        b_indices.iter().map(|&i| w[i].clone()).collect()
    };
    for (s, &i) in b_indices.iter().enumerate() {
        for (t, &j) in b_indices.iter().enumerate() {
            let quotient = project_b(&e.mul_basis(i, j));
            if !vec_is_zero(&vec_sub(&quotient, &b.mul_basis(s, t))) {
                return Err(Error::NotSubalgebra(
                    "quotient multiplication differs from B".into(),
                ));
            }
        }
    }
    // π ∘ ς = id_B.
    for t in 0..nb {
        let col = section.column(t);
        if !vec_is_zero(&vec_sub(&project_b(&col), &basis_vec(nb, t, f))) {
            return Err(Error::NotSection);
        }
    }

    let a_coords = |w: &[Scalar]| -> Result<Vec<Scalar>> {
        for (k, v) in w.iter().enumerate() {
            if !v.is_zero() && !a_indices.contains(&k) {
                return Err(Error::NotSubalgebra("value does not lie in A".into()));
            }
        }
        Ok(a_indices.iter().map(|&i| w[i].clone()).collect())
    };
    let embed_a = |x: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![f.zero(); dim];
        for (ia, &i) in a_indices.iter().enumerate() {
            out[i] = x[ia].clone();
        }
        out
    };

    let mut tr = Tensor3::zero(nb, na, na, f);
    let mut tl = Tensor3::zero(na, nb, na, f);
    let mut chi = Tensor3::zero(nb, nb, na, f);
    for t in 0..nb {
        let sb = section.column(t);
        for i in 0..na {
            let ai = embed_a(&basis_vec(na, i, f));
            for (k, v) in a_coords(&e.product(&sb, &ai))?.into_iter().enumerate() {
                tr.set(t, i, k, v);
            }
            for (k, v) in a_coords(&e.product(&ai, &sb))?.into_iter().enumerate() {
                tl.set(i, t, k, v);
            }
        }
    }
    for s in 0..nb {
        for t in 0..nb {
            let prod = e.product(&section.column(s), &section.column(t));
            let sect_of_prod = section.apply(&b.mul_basis(s, t));
            let delta = vec_sub(&prod, &sect_of_prod);
            for (k, v) in a_coords(&delta)?.into_iter().enumerate() {
                chi.set(s, t, k, v);
            }
        }
    }
    // A in its own coordinates.
    let mut sc_a = Tensor3::zero(na, na, na, f);
    for (ia, &i) in a_indices.iter().enumerate() {
        for (ja, &j) in a_indices.iter().enumerate() {
            let prod = e.mul_basis(i, j);
            for (ka, &k) in a_indices.iter().enumerate() {
                sc_a.set(ia, ja, ka, prod[k].clone());
            }
        }
    }
    let labels_a: Vec<String> = a_indices.iter().map(|&i| e.basis()[i].clone()).collect();
    let a = PermAlgebra::new(f, labels_a, sc_a)?;
    NonAbelianCocycle::new(a, b.clone(), tr, tl, chi)
}

/// Equivalence of cocycles through λ: B → A:
///   eq1  a⊲b − a⊲'b = aλ(b)   and   b⊳a − b⊳'a = λ(b)a,
///   eq2  χ(b₁,b₂) − χ'(b₁,b₂) = λ(b₁)λ(b₂) + b₁⊳'λ(b₂) + λ(b₁)⊲'b₂ − λ(b₁b₂).
pub fn cocycles_equivalent(
    c: &NonAbelianCocycle,
    c2: &NonAbelianCocycle,
    lambda: &Matrix,
) -> Result<Verdict> {
    let na = c.a.dim();
    let nb = c.b.dim();
    if c2.a.dim() != na || c2.b.dim() != nb {
        return Err(Error::DimensionMismatch("cocycle shapes differ".into()));
    }
    if lambda.rows() != na || lambda.cols() != nb {
        return Err(Error::DimensionMismatch("lambda must be dim A × dim B".into()));
    }
    let f = c.field();
    let lam = |v: &[Scalar]| lambda.apply(v);
    let mut out = Verdict::ok();
    for i in 0..na {
        let a = basis_vec(na, i, f);
        for t in 0..nb {
            let b = basis_vec(nb, t, f);
            let lhs = vec_sub(&c.act_tl(&a, &b), &c2.act_tl(&a, &b));
            let rhs = c.a.product(&a, &lam(&b));
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                out.push("eq1", &[i, t]);
            }
            let lhs = vec_sub(&c.act_tr(&b, &a), &c2.act_tr(&b, &a));
            let rhs = c.a.product(&lam(&b), &a);
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                out.push("eq1", &[t, i]);
            }
        }
    }
    for s in 0..nb {
        let b1 = basis_vec(nb, s, f);
        for t in 0..nb {
            let b2 = basis_vec(nb, t, f);
            let lhs = vec_sub(&c.act_chi(&b1, &b2), &c2.act_chi(&b1, &b2));
            let rhs = vec_sub(
                &vec_add(
                    &c.a.product(&lam(&b1), &lam(&b2)),
                    &vec_add(&c2.act_tr(&b1, &lam(&b2)), &c2.act_tl(&lam(&b1), &b2)),
                ),
                &lam(&c.b.mul_basis(s, t)),
            );
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                out.push("eq2", &[s, t]);
            }
        }
    }
    Ok(out.canonicalize())
}

/// A pair of automorphism candidates (β on A, γ on B).
#[derive(Clone, Debug)]
pub struct AutPair {
    pub beta: Matrix,
    pub gamma: Matrix,
}

impl AutPair {
    pub fn identity(a: &PermAlgebra, b: &PermAlgebra) -> Self {
        AutPair {
            beta: Matrix::identity(a.dim(), a.field()),
            gamma: Matrix::identity(b.dim(), b.field()),
        }
    }

    /// Checks both maps are algebra automorphisms.
    pub fn validate(&self, a: &PermAlgebra, b: &PermAlgebra) -> Result<()> {
        let fa = AlgebraMorphism::new(a.clone(), a.clone(), self.beta.clone())?;
        if !check_morphism(&fa).is_ok() || !self.beta.is_invertible() {
            return Err(Error::InvalidAutomorphism("beta".into()));
        }
        let fb = AlgebraMorphism::new(b.clone(), b.clone(), self.gamma.clone())?;
        if !check_morphism(&fb).is_ok() || !self.gamma.is_invertible() {
            return Err(Error::InvalidAutomorphism("gamma".into()));
        }
        Ok(())
    }
}

/// The transported cocycle
///   b ⊳' a = β(γ⁻¹(b) ⊳ β⁻¹(a)),  a ⊲' b = β(β⁻¹(a) ⊲ γ⁻¹(b)),
///   χ'(b₁,b₂) = β(χ(γ⁻¹(b₁), γ⁻¹(b₂))).
pub fn transform_cocycle(c: &NonAbelianCocycle, pair: &AutPair) -> Result<NonAbelianCocycle> {
    pair.validate(&c.a, &c.b)?;
    let beta_inv = pair.beta.inverse()?;
    let gamma_inv = pair.gamma.inverse()?;
    let na = c.a.dim();
    let nb = c.b.dim();
    let f = c.field();
    let mut tr = Tensor3::zero(nb, na, na, f);
    let mut tl = Tensor3::zero(na, nb, na, f);
    let mut chi = Tensor3::zero(nb, nb, na, f);
    for t in 0..nb {
        let gb = gamma_inv.column(t);
        for i in 0..na {
            let ba = beta_inv.column(i);
            for (k, v) in pair.beta.apply(&c.act_tr(&gb, &ba)).into_iter().enumerate() {
                tr.set(t, i, k, v);
            }
            for (k, v) in pair.beta.apply(&c.act_tl(&ba, &gb)).into_iter().enumerate() {
                tl.set(i, t, k, v);
            }
        }
    }
    for s in 0..nb {
        for t in 0..nb {
            let v = pair
                .beta
                .apply(&c.act_chi(&gamma_inv.column(s), &gamma_inv.column(t)));
            for (k, val) in v.into_iter().enumerate() {
                chi.set(s, t, k, val);
            }
        }
    }
    NonAbelianCocycle::new(c.a.clone(), c.b.clone(), tr, tl, chi)
}

/// Outcome of an inducibility query.
#[derive(Clone, Debug)]
pub enum Inducible {
    Yes(Matrix),
    No,
    Unknown,
}

impl Inducible {
    pub fn is_yes(&self) -> bool {
        matches!(self, Inducible::Yes(_))
    }
}

/// The lift α(a, b) = (β(a) − λ(γ(b)), γ(b)) on the crossed product,
/// which restricts to β on A and covers γ on B.
pub fn lift_automorphism(c: &NonAbelianCocycle, pair: &AutPair, lambda: &Matrix) -> AlgebraMorphism {
    let product = crossed_product_unchecked(c);
    let na = c.a.dim();
    let nb = c.b.dim();
    let f = c.field();
    let dim = na + nb;
    let mut matrix = Matrix::zero(dim, dim, f);
    for cidx in 0..na {
        for r in 0..na {
            matrix.set(r, cidx, pair.beta.get(r, cidx).clone());
        }
    }
    let minus_lambda_gamma = lambda.mul(&pair.gamma).neg();
    for cidx in 0..nb {
        for r in 0..na {
            matrix.set(r, na + cidx, minus_lambda_gamma.get(r, cidx).clone());
        }
        for r in 0..nb {
            matrix.set(na + r, na + cidx, pair.gamma.get(r, cidx).clone());
        }
    }
    AlgebraMorphism::new(product.algebra.clone(), product.algebra, matrix)
        .expect("consistent dims")
}

fn lambda_witnesses_inducibility(
    c: &NonAbelianCocycle,
    pair: &AutPair,
    lambda: &Matrix,
) -> bool {
    let alpha = lift_automorphism(c, pair, lambda);
    check_morphism(&alpha).is_ok() && alpha.matrix.is_invertible()
}

/// Default bound on dim A · dim B for the exhaustive λ sweep.
pub const INDUCIBLE_SWEEP_DIM_BOUND: usize = 9;

/// Decides whether (β, γ) lifts to an automorphism of the crossed product.
///
/// Over GF(p) within the sweep bound the answer is exhaustive and decisive.
/// Over the rationals the answer is decisive when A has zero multiplication
/// (the witness system is linear in λ); otherwise a supplied candidate λ is
/// verified and the result is `Unknown` without one.
pub fn is_inducible(
    c: &NonAbelianCocycle,
    pair: &AutPair,
    candidate: Option<&Matrix>,
) -> Result<Inducible> {
    pair.validate(&c.a, &c.b)?;
    let na = c.a.dim();
    let nb = c.b.dim();
    if let Some(lambda) = candidate {
        if lambda.rows() != na || lambda.cols() != nb {
            return Err(Error::DimensionMismatch("lambda must be dim A × dim B".into()));
        }
        if lambda_witnesses_inducibility(c, pair, lambda) {
            return Ok(Inducible::Yes(lambda.clone()));
        }
    }
    match c.field() {
        FieldSpec::PrimeField(p) => {
            if na * nb > INDUCIBLE_SWEEP_DIM_BOUND {
                return Err(Error::SearchBoundExceeded(format!(
                    "dim A · dim B = {} exceeds inducibility sweep bound {INDUCIBLE_SWEEP_DIM_BOUND}",
                    na * nb
                )));
            }
            let f = c.field();
            let cells = na * nb;
            let mut flat = vec![0u64; cells];
            loop {
                let lambda = Matrix::from_fn(na, nb, f, |r, cc| f.from_i64(flat[r * nb + cc] as i64));
                if lambda_witnesses_inducibility(c, pair, &lambda) {
                    return Ok(Inducible::Yes(lambda));
                }
                if cells == 0 || !sweep::next_vector(&mut flat, p) {
                    return Ok(Inducible::No);
                }
            }
        }
        FieldSpec::Rationals => {
            if !c.a.structure_constants().is_zero() {
                return Ok(Inducible::Unknown);
            }
            // With A abelian the ⊳/⊲ compatibilities are λ-free and the χ
            // condition is linear in λ; solve it exactly.
            let transported = transform_cocycle(c, pair)?;
            if transported.tr != c.tr || transported.tl != c.tl {
                return Ok(Inducible::No);
            }
            let diff = c.chi.sub(&transported.chi);
            match solve_coboundary(c, &diff) {
                Some(lambda) => {
                    if lambda_witnesses_inducibility(c, pair, &lambda) {
                        Ok(Inducible::Yes(lambda))
                    } else {
                        Err(Error::PreconditionFailed(
                            "solved witness failed re-verification".into(),
                        ))
                    }
                }
                None => Ok(Inducible::No),
            }
        }
    }
}

/// Solves δλ(b₁,b₂) = b₁⊳λ(b₂) + λ(b₁)⊲b₂ − λ(b₁b₂) = target for λ: B → A.
/// Valid for abelian A, where the coboundary operator is linear in λ.
pub fn solve_coboundary(c: &NonAbelianCocycle, target: &Tensor3) -> Option<Matrix> {
    let na = c.a.dim();
    let nb = c.b.dim();
    let f = c.field();
    let unknowns = na * nb; // λ[k][t]
    let equations = nb * nb * na;
    let mut system = Matrix::zero(equations, unknowns, f);
    let mut rhs = Vec::with_capacity(equations);
    let mut row = 0;
    for s in 0..nb {
        for t in 0..nb {
            let prod_st = c.b.mul_basis(s, t);
            for k in 0..na {
                // coefficient of λ[u][w] in the k-th coordinate of δλ(b_s, b_t)
                for u in 0..na {
                    for w in 0..nb {
                        let mut coeff = f.zero();
                        if w == t {
                            // b_s ⊳ (λ-column t) contributes via (b_s ⊳ a_u)_k
                            coeff = coeff.add_ref(c.tr.get(s, u, k));
                        }
                        if w == s {
                            // (λ-column s) ⊲ b_t contributes via (a_u ⊲ b_t)_k
                            coeff = coeff.add_ref(c.tl.get(u, t, k));
                        }
                        if u == k {
                            // −λ(b_s b_t) contributes −(b_s b_t)_w
                            coeff = coeff.sub_ref(&prod_st[w]);
                        }
                        system.set(row, u * nb + w, coeff);
                    }
                }
                rhs.push(target.get(s, t, k).clone());
                row += 1;
            }
        }
    }
    system
        .solve_any(&rhs)
        .map(|x| Matrix::from_fn(na, nb, f, |r, cc| x[r * nb + cc].clone()))
}

/// κ(α) = (α|_A, π∘α∘ς) for α ∈ Aut(E) preserving A.
pub fn kappa(e: &PermAlgebra, a_indices: &[usize], alpha: &Matrix) -> Result<AutPair> {
    let dim = e.dim();
    if alpha.rows() != dim || alpha.cols() != dim {
        return Err(Error::DimensionMismatch("alpha must be dim E × dim E".into()));
    }
    let f = e.field();
    let morphism = AlgebraMorphism::new(e.clone(), e.clone(), alpha.clone())?;
    if !check_morphism(&morphism).is_ok() || !alpha.is_invertible() {
        return Err(Error::InvalidAutomorphism("alpha".into()));
    }
    // α must map span(A) into itself.
    for &i in a_indices {
        for (r, v) in alpha.column(i).iter().enumerate() {
            if !v.is_zero() && !a_indices.contains(&r) {
                return Err(Error::InvalidAutomorphism("alpha does not preserve A".into()));
            }
        }
    }
    let b_indices: Vec<usize> = (0..dim).filter(|i| !a_indices.contains(i)).collect();
    let na = a_indices.len();
    let nb = b_indices.len();
    let beta = Matrix::from_fn(na, na, f, |r, cidx| {
        alpha.get(a_indices[r], a_indices[cidx]).clone()
    });
    let gamma = Matrix::from_fn(nb, nb, f, |r, cidx| {
        alpha.get(b_indices[r], b_indices[cidx]).clone()
    });
    Ok(AutPair { beta, gamma })
}

/// A finite matrix group as an explicit element list with its multiplication
/// table: `table[i][j]` is the index of `elements[i] · elements[j]`.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub elements: Vec<Matrix>,
    pub table: Vec<Vec<usize>>,
}

impl MatrixGroup {
    pub fn from_elements(elements: Vec<Matrix>) -> Self {
        let table = (0..elements.len())
            .map(|i| {
                (0..elements.len())
                    .map(|j| {
                        let prod = elements[i].mul(&elements[j]);
                        elements
                            .iter()
                            .position(|m| *m == prod)
                            .expect("closed under multiplication")
                    })
                    .collect()
            })
            .collect();
        MatrixGroup { elements, table }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Everything the automorphism-group sweep produces.
#[derive(Clone, Debug)]
pub struct AutomorphismGroups {
    /// All automorphisms of E.
    pub aut_e: MatrixGroup,
    /// Those preserving span(A).
    pub aut_a_e: MatrixGroup,
    /// Those inducing the identity pair.
    pub aut_a_id: MatrixGroup,
    /// The image of κ, as (β, γ) pairs in canonical order.
    pub kappa_image: Vec<AutPair>,
}

impl AutomorphismGroups {
    /// |Aut_A(E)| = |Aut_A^id(E)| · |image κ| — exactness at Aut_A(E).
    pub fn exactness_holds(&self) -> bool {
        self.aut_a_e.order() == self.aut_a_id.order() * self.kappa_image.len()
    }
}

pub const AUT_SWEEP_DIM_BOUND: usize = 3;
pub const AUT_SWEEP_PRIME_BOUND: u64 = 7;

/// Brute-forces GL(dim E, p) and assembles Aut(E), Aut_A(E), Aut_A^id(E) and
/// the image of κ.
pub fn enumerate_automorphism_groups(
    e: &PermAlgebra,
    a_indices: &[usize],
) -> Result<AutomorphismGroups> {
    let p = match e.field() {
        FieldSpec::PrimeField(p) => p,
        FieldSpec::Rationals => {
            return Err(Error::UnsupportedField(
                "automorphism enumeration sweeps a finite field".into(),
            ))
        }
    };
    if e.dim() > AUT_SWEEP_DIM_BOUND || p > AUT_SWEEP_PRIME_BOUND {
        return Err(Error::SearchBoundExceeded(format!(
            "automorphism sweep bounded at dim ≤ {AUT_SWEEP_DIM_BOUND}, p ≤ {AUT_SWEEP_PRIME_BOUND}"
        )));
    }
    let table = sweep::GfTable::from_algebra(e)?;
    let dim = e.dim();
    let all = sweep::gf_automorphisms(&table);
    let elements: Vec<Matrix> = all
        .iter()
        .map(|m| sweep::lift_matrix(m, dim, dim, p))
        .collect();
    let aut_e = MatrixGroup::from_elements(elements);
    let preserving: Vec<Matrix> = aut_e
        .elements
        .iter()
        .filter(|alpha| {
            a_indices.iter().all(|&i| {
                alpha
                    .column(i)
                    .iter()
                    .enumerate()
                    .all(|(r, v)| v.is_zero() || a_indices.contains(&r))
            })
        })
        .cloned()
        .collect();
    let aut_a_e = MatrixGroup::from_elements(preserving);
    let mut id_elements = Vec::new();
    let mut image: Vec<(Vec<u64>, Vec<u64>, AutPair)> = Vec::new();
    for alpha in &aut_a_e.elements {
        let pair = kappa(e, a_indices, alpha)?;
        if pair.beta.is_identity() && pair.gamma.is_identity() {
            id_elements.push(alpha.clone());
        }
        let key = (sweep::flatten_matrix(&pair.beta), sweep::flatten_matrix(&pair.gamma));
        if !image.iter().any(|(kb, kg, _)| *kb == key.0 && *kg == key.1) {
            image.push((key.0, key.1, pair));
        }
    }
    image.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(AutomorphismGroups {
        aut_e,
        aut_a_e,
        aut_a_id: MatrixGroup::from_elements(id_elements),
        kappa_image: image.into_iter().map(|(_, _, p)| p).collect(),
    })
}

/// An abelian-kernel extension datum: B acts on a space A with zero product,
/// and χ is an ordinary 2-cocycle.
#[derive(Clone, Debug)]
pub struct WellsContext {
    pub b: PermAlgebra,
    pub module: Representation,
    pub chi: Tensor3,
}

impl WellsContext {
    pub fn new(b: PermAlgebra, module: Representation, chi: Tensor3) -> Result<Self> {
        if module.algebra != b {
            return Err(Error::DimensionMismatch(
                "module must be a representation of B".into(),
            ));
        }
        let ctx = WellsContext { b, module, chi };
        let cocycle = ctx.cocycle();
        if !validate_cocycle(&cocycle).is_ok() {
            return Err(Error::InvalidCocycle);
        }
        Ok(ctx)
    }

    /// Reads a context off an extension E with abelian kernel span(A).
    pub fn from_extension(e: &PermAlgebra, a_indices: &[usize]) -> Result<Self> {
        for &i in a_indices {
            for &j in a_indices {
                if !vec_is_zero(&e.mul_basis(i, j)) {
                    return Err(Error::NonAbelianKernel);
                }
            }
        }
        let dim = e.dim();
        let b_indices: Vec<usize> = (0..dim).filter(|i| !a_indices.contains(i)).collect();
        let nb = b_indices.len();
        let f = e.field();
        let mut sc_b = Tensor3::zero(nb, nb, nb, f);
        for (s, &i) in b_indices.iter().enumerate() {
            for (t, &j) in b_indices.iter().enumerate() {
                let prod = e.mul_basis(i, j);
                for (u, &k) in b_indices.iter().enumerate() {
                    sc_b.set(s, t, u, prod[k].clone());
                }
            }
        }
        let labels_b: Vec<String> = b_indices.iter().map(|&i| e.basis()[i].clone()).collect();
        let b = PermAlgebra::new(f, labels_b, sc_b)?;
        let section = Matrix::from_fn(dim, nb, f, |r, c| {
            if r == b_indices[c] {
                f.one()
            } else {
                f.zero()
            }
        });
        let cocycle = cocycle_from_extension(e, a_indices, &b, &section)?;
        WellsContext::from_cocycle(&cocycle)
    }

    pub fn from_cocycle(c: &NonAbelianCocycle) -> Result<Self> {
        if !c.a.structure_constants().is_zero() {
            return Err(Error::NonAbelianKernel);
        }
        let na = c.a.dim();
        let nb = c.b.dim();
        let f = c.field();
        // b ⊳ a = ℓ(b)a and a ⊲ b = 𝔯(b)a as a representation of B on A.
        let l: Vec<Matrix> = (0..nb)
            .map(|t| Matrix::from_fn(na, na, f, |k, i| c.tr.get(t, i, k).clone()))
            .collect();
        let r: Vec<Matrix> = (0..nb)
            .map(|t| Matrix::from_fn(na, na, f, |k, i| c.tl.get(i, t, k).clone()))
            .collect();
        let module = Representation::new(c.b.clone(), na, l, r)?;
        WellsContext::new(c.b.clone(), module, c.chi.clone())
    }

    pub fn dim_a(&self) -> usize {
        self.module.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.b.field()
    }

    /// The non-abelian cocycle this context encodes (A with zero product).
    pub fn cocycle(&self) -> NonAbelianCocycle {
        let na = self.dim_a();
        let nb = self.b.dim();
        let f = self.field();
        let a = PermAlgebra::zero_algebra(f, na);
        let mut tr = Tensor3::zero(nb, na, na, f);
        let mut tl = Tensor3::zero(na, nb, na, f);
        for t in 0..nb {
            for i in 0..na {
                for k in 0..na {
                    tr.set(t, i, k, self.module.l[t].get(k, i).clone());
                    tl.set(i, t, k, self.module.r[t].get(k, i).clone());
                }
            }
        }
        NonAbelianCocycle::new(a, self.b.clone(), tr, tl, self.chi.clone())
            .expect("consistent dims")
    }

    /// Membership in Aut_{⊳,⊲}(A, B): β(b⊳a) = γ(b)⊳β(a) and
    /// β(a⊲b) = β(a)⊲γ(b).
    pub fn pair_is_compatible(&self, pair: &AutPair) -> Result<bool> {
        let a = PermAlgebra::zero_algebra(self.field(), self.dim_a());
        pair.validate(&a, &self.b)?;
        let c = self.cocycle();
        let na = self.dim_a();
        let nb = self.b.dim();
        let f = self.field();
        for t in 0..nb {
            let b = basis_vec(nb, t, f);
            for i in 0..na {
                let av = basis_vec(na, i, f);
                let lhs = pair.beta.apply(&c.act_tr(&b, &av));
                let rhs = c.act_tr(&pair.gamma.apply(&b), &pair.beta.apply(&av));
                if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                    return Ok(false);
                }
                let lhs = pair.beta.apply(&c.act_tl(&av, &b));
                let rhs = c.act_tl(&pair.beta.apply(&av), &pair.gamma.apply(&b));
                if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The Wells class of a compatible pair: the cocycle difference χ^{β,γ} − χ
/// and whether it is a coboundary (in which case the pair is inducible).
#[derive(Clone, Debug)]
pub struct WellsClass {
    pub representative: Tensor3,
    pub vanishes: bool,
    pub witness: Option<Matrix>,
}

pub fn wells_map(ctx: &WellsContext, pair: &AutPair) -> Result<WellsClass> {
    if !ctx.pair_is_compatible(pair)? {
        return Err(Error::NotCompatiblePair);
    }
    let c = ctx.cocycle();
    let transported = transform_cocycle(&c, pair)?;
    let representative = transported.chi.sub(&c.chi);
    let witness = solve_coboundary(&c, &representative);
    Ok(WellsClass { vanishes: witness.is_some(), representative, witness })
}

/// Exactness at Aut_{⊳,⊲}(A,B): a compatible pair is in the image of κ
/// exactly when its Wells class vanishes, checked by exhausting both sides
/// over the finite field.
pub fn check_wells_sequence(ctx: &WellsContext) -> Result<Verdict> {
    let c = ctx.cocycle();
    let e = crossed_product_unchecked(&c);
    let groups = enumerate_automorphism_groups(&e.algebra, &e.a_indices())?;
    let mut out = Verdict::ok();
    let pairs = compatible_pairs(ctx)?;
    for (idx, pair) in pairs.iter().enumerate() {
        let wells = wells_map(ctx, pair)?;
        let in_image = groups
            .kappa_image
            .iter()
            .any(|img| img.beta == pair.beta && img.gamma == pair.gamma);
        if wells.vanishes != in_image {
            out.push("wells-exactness", &[idx]);
        }
    }
    if !groups.exactness_holds() {
        out.push("kappa-exactness", &[]);
    }
    Ok(out.canonicalize())
}

/// All pairs in Aut_{⊳,⊲}(A, B), enumerated over the finite field in
/// canonical order. A has zero product so Aut(A) = GL(dim A, p).
pub fn compatible_pairs(ctx: &WellsContext) -> Result<Vec<AutPair>> {
    let p = match ctx.field() {
        FieldSpec::PrimeField(p) => p,
        FieldSpec::Rationals => {
            return Err(Error::UnsupportedField(
                "pair enumeration sweeps a finite field".into(),
            ))
        }
    };
    let na = ctx.dim_a();
    let nb = ctx.b.dim();
    let zero_table = sweep::GfTable { p, n: na, c: vec![0; na * na * na] };
    let b_table = sweep::GfTable::from_algebra(&ctx.b)?;
    let aut_a = sweep::gf_automorphisms(&zero_table);
    let aut_b = sweep::gf_automorphisms(&b_table);
    let mut out = Vec::new();
    for beta_flat in &aut_a {
        let beta = sweep::lift_matrix(beta_flat, na, na, p);
        for gamma_flat in &aut_b {
            let gamma = sweep::lift_matrix(gamma_flat, nb, nb, p);
            let pair = AutPair { beta: beta.clone(), gamma };
            if ctx.pair_is_compatible(&pair)? {
                out.push(pair);
            }
        }
    }
    Ok(out)
}

/// For a split extension (χ = 0): Aut_A(E) ≅ Aut_A^id(E) ⋊ Aut_{⊳,⊲}(A,B),
/// verified element by element via the section ϱ(β,γ)(a,b) = (β(a), γ(b)).
#[derive(Clone, Debug)]
pub struct SplitDecomposition {
    pub verdict: Verdict,
    pub aut_a_order: usize,
    pub aut_a_id_order: usize,
    pub compatible_order: usize,
}

pub fn split_semidirect_decomposition(ctx: &WellsContext) -> Result<SplitDecomposition> {
    if !ctx.chi.is_zero() {
        return Err(Error::PreconditionFailed(
            "split decomposition needs χ = 0".into(),
        ));
    }
    let c = ctx.cocycle();
    let e = crossed_product_unchecked(&c);
    let a_indices = e.a_indices();
    let groups = enumerate_automorphism_groups(&e.algebra, &a_indices)?;
    let pairs = compatible_pairs(ctx)?;
    let na = ctx.dim_a();
    let nb = ctx.b.dim();
    let f = ctx.field();
    let mut out = Verdict::ok();

    // ϱ(β,γ) is block diagonal; κ∘ϱ must be the identity and each section
    // element must be an automorphism of E preserving A.
    let mut sections = Vec::new();
    for (idx, pair) in pairs.iter().enumerate() {
        let mut m = Matrix::zero(na + nb, na + nb, f);
        for r in 0..na {
            for cc in 0..na {
                m.set(r, cc, pair.beta.get(r, cc).clone());
            }
        }
        for r in 0..nb {
            for cc in 0..nb {
                m.set(na + r, na + cc, pair.gamma.get(r, cc).clone());
            }
        }
        match kappa(&e.algebra, &a_indices, &m) {
            Ok(back) if back.beta == pair.beta && back.gamma == pair.gamma => {}
            _ => out.push("section", &[idx]),
        }
        sections.push(m);
    }
    // Unique factorization α = σ · ϱ(κ(α)) with σ ∈ Aut_A^id(E).
    for (idx, alpha) in groups.aut_a_e.elements.iter().enumerate() {
        let pair = kappa(&e.algebra, &a_indices, alpha)?;
        let pos = pairs
            .iter()
            .position(|p| p.beta == pair.beta && p.gamma == pair.gamma);
        let pos = match pos {
            Some(pos) => pos,
            None => {
                out.push("factor-missing", &[idx]);
                continue;
            }
        };
        let sigma = alpha.mul(&sections[pos].inverse()?);
        let in_id = groups.aut_a_id.elements.iter().any(|m| *m == sigma);
        if !in_id {
            out.push("factor", &[idx]);
        }
    }
    if groups.aut_a_e.order() != groups.aut_a_id.order() * pairs.len() {
        out.push("order", &[]);
    }
    Ok(SplitDecomposition {
        verdict: out.canonicalize(),
        aut_a_order: groups.aut_a_e.order(),
        aut_a_id_order: groups.aut_a_id.order(),
        compatible_order: pairs.len(),
    })
}

/// Agreement helper used by the property suites: the validator against the
/// direct perm check on the unchecked crossed product.
pub fn cocycle_agreement(c: &NonAbelianCocycle) -> (bool, bool) {
    let validator = validate_cocycle(c).is_ok();
    let direct = check_perm(&crossed_product_unchecked(c).algebra).is_ok();
    (validator, direct)
}

/// Sanity helper for tests: the module actions of a context form a
/// representation.
pub fn context_module_is_representation(ctx: &WellsContext) -> bool {
    check_representation(&ctx.module).is_ok()
}
