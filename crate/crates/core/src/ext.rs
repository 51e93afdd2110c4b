//! Extending structures: unified products, their validity laws, equivalence
//! of extending data, matched pairs, bicrossed products and deformation maps.
//!
//! An extending datum of an algebra A by a space V is a system of six
//! bilinear maps
//!
//! ```text
//!   ⇀ : A × V → V      ↼ : V × A → V      ⊳ : V × A → A
//!   ⊲ : A × V → A      χ : V × V → A      · : V × V → V
//! ```
//!
//! prescribing a candidate product on A ⊕ V:
//!
//! ```text
//!   (a₁,v₁) ∗ (a₂,v₂) = (a₁a₂ + v₁⊳a₂ + a₁⊲v₂ + χ(v₁,v₂),
//!                        v₁·v₂ + a₁⇀v₂ + v₁↼a₂).
//! ```
//!
//! The product is perm exactly when the ten identity families ext1–ext10
//! hold; `validate_extending_structure` reports them family by family and the
//! unchecked product constructor exists so the two routes can be compared on
//! invalid data as well.

use crate::error::{Error, Result};
use crate::kernel::matrix::{basis_vec, vec_add, vec_is_zero, vec_sub, Matrix};
use crate::kernel::scalar::{FieldSpec, Scalar};
use crate::kernel::tensor::Tensor3;
use crate::perm::{check_perm, AlgebraMorphism, PermAlgebra};
use crate::verdict::Verdict;

/// The six maps of an extending datum Ω(A, V), as dimension-typed tensors.
///
/// With n = dim A and m = dim V: `br` is (n,m,m) for ⇀, `bl` is (m,n,m) for ↼,
/// `tr` is (m,n,n) for ⊳, `tl` is (n,m,n) for ⊲, `chi` is (m,m,n) for χ and
/// `dot` is (m,m,m) for the candidate product on V.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtendingDatum {
    pub a: PermAlgebra,
    pub dim_v: usize,
    pub br: Tensor3,
    pub bl: Tensor3,
    pub tr: Tensor3,
    pub tl: Tensor3,
    pub chi: Tensor3,
    pub dot: Tensor3,
}

impl ExtendingDatum {
    pub fn new(
        a: PermAlgebra,
        dim_v: usize,
        br: Tensor3,
        bl: Tensor3,
        tr: Tensor3,
        tl: Tensor3,
        chi: Tensor3,
        dot: Tensor3,
    ) -> Result<Self> {
        let n = a.dim();
        let m = dim_v;
        let shapes = [
            ("br", br.dims(), (n, m, m)),
            ("bl", bl.dims(), (m, n, m)),
            ("tr", tr.dims(), (m, n, n)),
            ("tl", tl.dims(), (n, m, n)),
            ("chi", chi.dims(), (m, m, n)),
            ("dot", dot.dims(), (m, m, m)),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::DimensionMismatch(format!(
                    "{name} tensor has dims {got:?}, expected {want:?}"
                )));
            }
        }
        for t in [&br, &bl, &tr, &tl, &chi, &dot] {
            if t.field() != a.field() {
                return Err(Error::FieldMismatch { left: a.field(), right: t.field() });
            }
        }
        Ok(ExtendingDatum { a, dim_v, br, bl, tr, tl, chi, dot })
    }

    /// The all-zero datum (direct sum with the zero algebra on V).
    pub fn zero(a: PermAlgebra, dim_v: usize) -> Self {
        let n = a.dim();
        let m = dim_v;
        let f = a.field();
        ExtendingDatum {
            a,
            dim_v,
            br: Tensor3::zero(n, m, m, f),
            bl: Tensor3::zero(m, n, m, f),
            tr: Tensor3::zero(m, n, n, f),
            tl: Tensor3::zero(n, m, n, f),
            chi: Tensor3::zero(m, m, n, f),
            dot: Tensor3::zero(m, m, m, f),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }

    pub fn dim_a(&self) -> usize {
        self.a.dim()
    }

    // Bilinear evaluations of the six maps on coordinate vectors.
    pub fn act_br(&self, a: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        self.br.bilinear(a, v)
    }
    pub fn act_bl(&self, v: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        self.bl.bilinear(v, a)
    }
    pub fn act_tr(&self, v: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        self.tr.bilinear(v, a)
    }
    pub fn act_tl(&self, a: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        self.tl.bilinear(a, v)
    }
    pub fn act_chi(&self, v1: &[Scalar], v2: &[Scalar]) -> Vec<Scalar> {
        self.chi.bilinear(v1, v2)
    }
    pub fn act_dot(&self, v1: &[Scalar], v2: &[Scalar]) -> Vec<Scalar> {
        self.dot.bilinear(v1, v2)
    }

    fn mul_a(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.a.product(x, y)
    }

    fn a_basis(&self, i: usize) -> Vec<Scalar> {
        basis_vec(self.dim_a(), i, self.field())
    }

    fn v_basis(&self, i: usize) -> Vec<Scalar> {
        basis_vec(self.dim_v, i, self.field())
    }
}

/// Checks the ten identity families on all relevant basis tuples. Violations
/// carry the family id `ext1`..`ext10`, a chain position, and the tuple.
pub fn validate_extending_structure(d: &ExtendingDatum) -> Verdict {
    let n = d.dim_a();
    let m = d.dim_v;
    let mut out = Verdict::ok();

    let check_chain = |law: &str, at: &[usize], exprs: &[Vec<Scalar>], verdict: &mut Verdict| {
        for rest in exprs.iter().skip(1) {
            if !vec_is_zero(&vec_sub(&exprs[0], rest)) {
                verdict.push(law, at);
                return;
            }
        }
    };

    for v in 0..m {
        let xv = d.v_basis(v);
        for i in 0..n {
            let ai = d.a_basis(i);
            for j in 0..n {
                let aj = d.a_basis(j);
                let prod_ij = d.a.mul_basis(i, j);
                let prod_ji = d.a.mul_basis(j, i);

                // ext1: (v↼a1)↼a2 = v↼(a1a2) = v↼(a2a1)
                let e1 = vec![
                    d.act_bl(&d.act_bl(&xv, &ai), &aj),
                    d.act_bl(&xv, &prod_ij),
                    d.act_bl(&xv, &prod_ji),
                ];
                check_chain("ext1", &[v, i, j], &e1, &mut out);

                // ext2: (a1a2)⇀v = a1⇀(a2⇀v) = a1⇀(v↼a2) = (a1⇀v)↼a2
                let e2 = vec![
                    d.act_br(&prod_ij, &xv),
                    d.act_br(&ai, &d.act_br(&aj, &xv)),
                    d.act_br(&ai, &d.act_bl(&xv, &aj)),
                    d.act_bl(&d.act_br(&ai, &xv), &aj),
                ];
                check_chain("ext2", &[i, j, v], &e2, &mut out);

                // ext3: v⊳(a1a2) = v⊳(a2a1) = (v⊳a1)a2 + (v↼a1)⊳a2
                let e3 = vec![
                    d.act_tr(&xv, &prod_ij),
                    d.act_tr(&xv, &prod_ji),
                    vec_add(
                        &d.mul_a(&d.act_tr(&xv, &ai), &aj),
                        &d.act_tr(&d.act_bl(&xv, &ai), &aj),
                    ),
                ];
                check_chain("ext3", &[v, i, j], &e3, &mut out);

                // ext4: (a1a2)⊲v = a1(a2⊲v) + a1⊲(a2⇀v)
                //              = a1(v⊳a2) + a1⊲(v↼a2)
                //              = (a1⊲v)a2 + (a1⇀v)⊳a2
                let e4 = vec![
                    d.act_tl(&prod_ij, &xv),
                    vec_add(
                        &d.mul_a(&ai, &d.act_tl(&aj, &xv)),
                        &d.act_tl(&ai, &d.act_br(&aj, &xv)),
                    ),
                    vec_add(
                        &d.mul_a(&ai, &d.act_tr(&xv, &aj)),
                        &d.act_tl(&ai, &d.act_bl(&xv, &aj)),
                    ),
                    vec_add(
                        &d.mul_a(&d.act_tl(&ai, &xv), &aj),
                        &d.act_tr(&d.act_br(&ai, &xv), &aj),
                    ),
                ];
                check_chain("ext4", &[i, j, v], &e4, &mut out);
            }
        }
    }

    for i in 0..n {
        let a = d.a_basis(i);
        for v1 in 0..m {
            let x1 = d.v_basis(v1);
            for v2 in 0..m {
                let x2 = d.v_basis(v2);
                let dot12 = d.act_dot(&x1, &x2);
                let dot21 = d.act_dot(&x2, &x1);

                // ext5: a⇀(v1·v2) = a⇀(v2·v1) = (a⇀v1)·v2 + (a⊲v1)⇀v2
                let e5 = vec![
                    d.act_br(&a, &dot12),
                    d.act_br(&a, &dot21),
                    vec_add(
                        &d.act_dot(&d.act_br(&a, &x1), &x2),
                        &d.act_br(&d.act_tl(&a, &x1), &x2),
                    ),
                ];
                check_chain("ext5", &[i, v1, v2], &e5, &mut out);

                // ext6: (v1·v2)↼a = v1·(v2↼a) + v1↼(v2⊳a)
                //               = v1·(a⇀v2) + v1↼(a⊲v2)
                //               = (v1↼a)·v2 + (v1⊳a)⇀v2
                let e6 = vec![
                    d.act_bl(&dot12, &a),
                    vec_add(
                        &d.act_dot(&x1, &d.act_bl(&x2, &a)),
                        &d.act_bl(&x1, &d.act_tr(&x2, &a)),
                    ),
                    vec_add(
                        &d.act_dot(&x1, &d.act_br(&a, &x2)),
                        &d.act_bl(&x1, &d.act_tl(&a, &x2)),
                    ),
                    vec_add(
                        &d.act_dot(&d.act_bl(&x1, &a), &x2),
                        &d.act_br(&d.act_tr(&x1, &a), &x2),
                    ),
                ];
                check_chain("ext6", &[v1, v2, i], &e6, &mut out);

                // ext7: aχ(v1,v2) + a⊲(v1·v2) = aχ(v2,v1) + a⊲(v2·v1)
                //     = (a⊲v1)⊲v2 + χ(a⇀v1, v2)
                let e7 = vec![
                    vec_add(&d.mul_a(&a, &d.act_chi(&x1, &x2)), &d.act_tl(&a, &dot12)),
                    vec_add(&d.mul_a(&a, &d.act_chi(&x2, &x1)), &d.act_tl(&a, &dot21)),
                    vec_add(
                        &d.act_tl(&d.act_tl(&a, &x1), &x2),
                        &d.act_chi(&d.act_br(&a, &x1), &x2),
                    ),
                ];
                check_chain("ext7", &[i, v1, v2], &e7, &mut out);

                // ext8: χ(v1,v2)a + (v1·v2)⊳a = v1⊳(v2⊳a) + χ(v1, v2↼a)
                //     = v1⊳(a⊲v2) + χ(v1, a⇀v2) = (v1⊳a)⊲v2 + χ(v1↼a, v2)
                let e8 = vec![
                    vec_add(&d.mul_a(&d.act_chi(&x1, &x2), &a), &d.act_tr(&dot12, &a)),
                    vec_add(
                        &d.act_tr(&x1, &d.act_tr(&x2, &a)),
                        &d.act_chi(&x1, &d.act_bl(&x2, &a)),
                    ),
                    vec_add(
                        &d.act_tr(&x1, &d.act_tl(&a, &x2)),
                        &d.act_chi(&x1, &d.act_br(&a, &x2)),
                    ),
                    vec_add(
                        &d.act_tl(&d.act_tr(&x1, &a), &x2),
                        &d.act_chi(&d.act_bl(&x1, &a), &x2),
                    ),
                ];
                check_chain("ext8", &[v1, v2, i], &e8, &mut out);
            }
        }
    }

    for v1 in 0..m {
        let x1 = d.v_basis(v1);
        for v2 in 0..m {
            let x2 = d.v_basis(v2);
            for v3 in 0..m {
                let x3 = d.v_basis(v3);
                let dot12 = d.act_dot(&x1, &x2);
                let dot23 = d.act_dot(&x2, &x3);
                let dot32 = d.act_dot(&x3, &x2);

                // ext9: (v1·v2)·v3 + χ(v1,v2)⇀v3
                //     = v1·(v2·v3) + v1↼χ(v2,v3) = v1·(v3·v2) + v1↼χ(v3,v2)
                let e9 = vec![
                    vec_add(
                        &d.act_dot(&dot12, &x3),
                        &d.act_br(&d.act_chi(&x1, &x2), &x3),
                    ),
                    vec_add(
                        &d.act_dot(&x1, &dot23),
                        &d.act_bl(&x1, &d.act_chi(&x2, &x3)),
                    ),
                    vec_add(
                        &d.act_dot(&x1, &dot32),
                        &d.act_bl(&x1, &d.act_chi(&x3, &x2)),
                    ),
                ];
                check_chain("ext9", &[v1, v2, v3], &e9, &mut out);

                // ext10: χ(v1,v2)⊲v3 + χ(v1·v2, v3)
                //      = v1⊳χ(v2,v3) + χ(v1, v2·v3) = v1⊳χ(v3,v2) + χ(v1, v3·v2)
                let e10 = vec![
                    vec_add(
                        &d.act_tl(&d.act_chi(&x1, &x2), &x3),
                        &d.act_chi(&dot12, &x3),
                    ),
                    vec_add(
                        &d.act_tr(&x1, &d.act_chi(&x2, &x3)),
                        &d.act_chi(&x1, &dot23),
                    ),
                    vec_add(
                        &d.act_tr(&x1, &d.act_chi(&x3, &x2)),
                        &d.act_chi(&x1, &dot32),
                    ),
                ];
                check_chain("ext10", &[v1, v2, v3], &e10, &mut out);
            }
        }
    }

    out.canonicalize()
}

/// A unified product together with the canonical embedding of A (the first
/// `dim_a` basis vectors) and projection onto it.
#[derive(Clone, Debug)]
pub struct UnifiedProduct {
    pub algebra: PermAlgebra,
    pub dim_a: usize,
    pub dim_v: usize,
}

impl UnifiedProduct {
    pub fn a_indices(&self) -> Vec<usize> {
        (0..self.dim_a).collect()
    }

    /// The canonical projection E → E with image A.
    pub fn projection(&self) -> Matrix {
        let dim = self.dim_a + self.dim_v;
        let f = self.algebra.field();
        Matrix::from_fn(dim, dim, f, |r, c| {
            if r == c && r < self.dim_a {
                f.one()
            } else {
                f.zero()
            }
        })
    }
}

/// The product on A ⊕ V prescribed by the datum, validated first.
pub fn unified_product(d: &ExtendingDatum) -> Result<UnifiedProduct> {
    let verdict = validate_extending_structure(d);
    if !verdict.is_ok() {
        return Err(Error::InvalidDatum);
    }
    Ok(unified_product_unchecked(d))
}

/// The same construction without validation, so the perm check on the result
/// can be compared against the validator on arbitrary data.
pub fn unified_product_unchecked(d: &ExtendingDatum) -> UnifiedProduct {
    let n = d.dim_a();
    let m = d.dim_v;
    let dim = n + m;
    let f = d.field();
    let mut sc = Tensor3::zero(dim, dim, dim, f);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                sc.set(i, j, k, d.a.structure_constants().get(i, j, k).clone());
            }
        }
    }
    for i in 0..n {
        for j in 0..m {
            // (a_i, 0)(0, v_j) = (a_i ⊲ v_j, a_i ⇀ v_j)
            for k in 0..n {
                sc.set(i, n + j, k, d.tl.get(i, j, k).clone());
            }
            for k in 0..m {
                sc.set(i, n + j, n + k, d.br.get(i, j, k).clone());
            }
            // (0, v_j)(a_i, 0) = (v_j ⊳ a_i, v_j ↼ a_i)
            for k in 0..n {
                sc.set(n + j, i, k, d.tr.get(j, i, k).clone());
            }
            for k in 0..m {
                sc.set(n + j, i, n + k, d.bl.get(j, i, k).clone());
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                sc.set(n + i, n + j, k, d.chi.get(i, j, k).clone());
            }
            for k in 0..m {
                sc.set(n + i, n + j, n + k, d.dot.get(i, j, k).clone());
            }
        }
    }
    let mut labels = d.a.basis().to_vec();
    labels.extend((1..=m).map(|i| format!("x{i}")));
    let algebra = PermAlgebra::new(f, labels, sc).expect("consistent dims");
    UnifiedProduct { algebra, dim_a: n, dim_v: m }
}

/// Reads an extending datum off an algebra E containing A as a subalgebra,
/// given a retraction π onto A: with V = ker π and x ranging over the induced
/// complement basis,
///
/// ```text
///   a⇀v = a⋄v − π(a⋄v)   v↼a = v⋄a − π(v⋄a)   v⊳a = π(v⋄a)
///   a⊲v = π(a⋄v)         χ(v₁,v₂) = π(v₁⋄v₂)  v₁·v₂ = v₁⋄v₂ − π(v₁⋄v₂)
/// ```
pub fn decompose_extension(
    e: &PermAlgebra,
    a_indices: &[usize],
    projection: &Matrix,
) -> Result<(ExtendingDatum, PermAlgebra)> {
    let dim = e.dim();
    let f = e.field();
    if projection.rows() != dim || projection.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "projection is {}x{}, expected {dim}x{dim}",
            projection.rows(),
            projection.cols()
        )));
    }
    for &i in a_indices {
        if i >= dim {
            return Err(Error::DimensionMismatch(format!("A index {i} out of range")));
        }
    }
    // π must fix A pointwise and land inside span(A).
    for &i in a_indices {
        if projection.column(i) != basis_vec(dim, i, f) {
            return Err(Error::BadProjection);
        }
    }
    for c in 0..dim {
        let col = projection.column(c);
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() && !a_indices.contains(&r) {
                return Err(Error::BadProjection);
            }
        }
    }
    if !e.spans_subalgebra(a_indices) {
        return Err(Error::NotSubalgebra(
            "chosen indices do not span a subalgebra".into(),
        ));
    }

    let v_indices: Vec<usize> = (0..dim).filter(|i| !a_indices.contains(i)).collect();
    let n = a_indices.len();
    let m = v_indices.len();

    // Subalgebra A in its own coordinates.
    let mut sc_a = Tensor3::zero(n, n, n, f);
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

    // V basis: x_t = e_{v_t} − π(e_{v_t}). Its E-coordinates are e_{v_t}
    // minus an A-part, so the V-coordinates of any w − π(w) can be read off
    // the v_indices slots directly.
    let x_basis: Vec<Vec<Scalar>> = v_indices
        .iter()
        .map(|&j| vec_sub(&basis_vec(dim, j, f), &projection.column(j)))
        .collect();

    let a_coords = |w: &[Scalar]| -> Vec<Scalar> {
        a_indices.iter().map(|&i| w[i].clone()).collect()
    };
    let v_coords = |w: &[Scalar]| -> Vec<Scalar> {
        v_indices.iter().map(|&j| w[j].clone()).collect()
    };
    let embed_a = |x: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![f.zero(); dim];
        for (ia, &i) in a_indices.iter().enumerate() {
            out[i] = x[ia].clone();
        }
        out
    };

    let mut br = Tensor3::zero(n, m, m, f);
    let mut bl = Tensor3::zero(m, n, m, f);
    let mut tr = Tensor3::zero(m, n, n, f);
    let mut tl = Tensor3::zero(n, m, n, f);
    let mut chi = Tensor3::zero(m, m, n, f);
    let mut dot = Tensor3::zero(m, m, m, f);

    for (ia, &i) in a_indices.iter().enumerate() {
        let ei = basis_vec(dim, i, f);
        for (t, x) in x_basis.iter().enumerate() {
            let av = e.product(&ei, x);
            let pav = projection.apply(&av);
            let tail = vec_sub(&av, &pav);
            for (k, val) in a_coords(&pav).into_iter().enumerate() {
                tl.set(ia, t, k, val);
            }
            for (k, val) in v_coords(&tail).into_iter().enumerate() {
                br.set(ia, t, k, val);
            }
            let va = e.product(x, &ei);
            let pva = projection.apply(&va);
            let tail = vec_sub(&va, &pva);
            for (k, val) in a_coords(&pva).into_iter().enumerate() {
                tr.set(t, ia, k, val);
            }
            for (k, val) in v_coords(&tail).into_iter().enumerate() {
                bl.set(t, ia, k, val);
            }
        }
    }
    for (s, x1) in x_basis.iter().enumerate() {
        for (t, x2) in x_basis.iter().enumerate() {
            let vv = e.product(x1, x2);
            let pvv = projection.apply(&vv);
            let tail = vec_sub(&vv, &pvv);
            for (k, val) in a_coords(&pvv).into_iter().enumerate() {
                chi.set(s, t, k, val);
            }
            for (k, val) in v_coords(&tail).into_iter().enumerate() {
                dot.set(s, t, k, val);
            }
        }
    }

    let datum = ExtendingDatum::new(a, m, br, bl, tr, tl, chi, dot)?;
    // The round-trip isomorphism (a, v) ↦ a + v, verified by the caller via
    // `reassembly_isomorphism` when needed; kept cheap here.
    let _ = embed_a;
    Ok((datum, e.clone()))
}

/// The map (a, v) ↦ a + v from the unified product of a decomposition back to
/// the original algebra, as a checked morphism.
pub fn reassembly_isomorphism(
    e: &PermAlgebra,
    a_indices: &[usize],
    projection: &Matrix,
) -> Result<AlgebraMorphism> {
    let (datum, _) = decompose_extension(e, a_indices, projection)?;
    let product = unified_product_unchecked(&datum);
    let dim = e.dim();
    let f = e.field();
    let v_indices: Vec<usize> = (0..dim).filter(|i| !a_indices.contains(i)).collect();
    let mut matrix = Matrix::zero(dim, dim, f);
    for (col, &i) in a_indices.iter().enumerate() {
        let mut v = basis_vec(dim, i, f);
        for (r, val) in v.drain(..).enumerate() {
            matrix.set(r, col, val);
        }
    }
    for (t, &j) in v_indices.iter().enumerate() {
        let x = vec_sub(&basis_vec(dim, j, f), &projection.column(j));
        for (r, val) in x.into_iter().enumerate() {
            matrix.set(r, a_indices.len() + t, val);
        }
    }
    AlgebraMorphism::new(product.algebra, e.clone(), matrix)
}

/// Witness for datum equivalence: λ: V → A and ρ: V → V.
#[derive(Clone, Debug)]
pub struct EquivalencePair {
    pub lambda: Matrix,
    pub rho: Matrix,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EquivalenceMode {
    /// ρ must be invertible.
    Equivalent,
    /// ρ must be the identity.
    Cohomologous,
}

/// The compatibility laws uc1–uc4 stating that the datum `d` is obtained from
/// `d2` through (λ, ρ). Equivalent to φ(a,v) = (a + λ(v), ρ(v)) being a
/// multiplicative map from the product of `d` to the product of `d2`.
pub fn check_datum_equivalence(
    d: &ExtendingDatum,
    d2: &ExtendingDatum,
    pair: &EquivalencePair,
    mode: EquivalenceMode,
) -> Result<Verdict> {
    let n = d.dim_a();
    let m = d.dim_v;
    if d2.dim_a() != n || d2.dim_v != m {
        return Err(Error::DimensionMismatch("datum shapes differ".into()));
    }
    if pair.lambda.rows() != n || pair.lambda.cols() != m {
        return Err(Error::DimensionMismatch("lambda must be dim A × dim V".into()));
    }
    if pair.rho.rows() != m || pair.rho.cols() != m {
        return Err(Error::DimensionMismatch("rho must be dim V × dim V".into()));
    }
    match mode {
        EquivalenceMode::Equivalent => {
            if !pair.rho.is_invertible() {
                return Err(Error::RhoNotInvertible);
            }
        }
        EquivalenceMode::Cohomologous => {
            if !pair.rho.is_identity() {
                return Err(Error::PreconditionFailed(
                    "cohomologous mode requires rho = id".into(),
                ));
            }
        }
    }
    let lam = |v: &[Scalar]| pair.lambda.apply(v);
    let rho = |v: &[Scalar]| pair.rho.apply(v);
    let mut out = Verdict::ok();
    for i in 0..n {
        let a = basis_vec(n, i, d.field());
        for v in 0..m {
            let x = basis_vec(m, v, d.field());
            // uc1: ρ(a⇀v) = a⇀'ρ(v) and a⊲v + λ(a⇀v) = aλ(v) + a⊲'ρ(v)
            let lhs1 = rho(&d.act_br(&a, &x));
            let rhs1 = d2.act_br(&a, &rho(&x));
            let lhs2 = vec_add(&d.act_tl(&a, &x), &lam(&d.act_br(&a, &x)));
            let rhs2 = vec_add(&d.mul_a(&a, &lam(&x)), &d2.act_tl(&a, &rho(&x)));
            if !vec_is_zero(&vec_sub(&lhs1, &rhs1)) || !vec_is_zero(&vec_sub(&lhs2, &rhs2)) {
                out.push("uc1", &[i, v]);
            }
            // uc2: ρ(v↼a) = ρ(v)↼'a and v⊳a + λ(v↼a) = λ(v)a + ρ(v)⊳'a
            let lhs1 = rho(&d.act_bl(&x, &a));
            let rhs1 = d2.act_bl(&rho(&x), &a);
            let lhs2 = vec_add(&d.act_tr(&x, &a), &lam(&d.act_bl(&x, &a)));
            let rhs2 = vec_add(&d.mul_a(&lam(&x), &a), &d2.act_tr(&rho(&x), &a));
            if !vec_is_zero(&vec_sub(&lhs1, &rhs1)) || !vec_is_zero(&vec_sub(&lhs2, &rhs2)) {
                out.push("uc2", &[v, i]);
            }
        }
    }
    for v1 in 0..m {
        let x1 = basis_vec(m, v1, d.field());
        for v2 in 0..m {
            let x2 = basis_vec(m, v2, d.field());
            // uc3: ρ(v1·v2) = ρ(v1)·'ρ(v2) + λ(v1)⇀'ρ(v2) + ρ(v1)↼'λ(v2)
            let lhs = rho(&d.act_dot(&x1, &x2));
            let rhs = vec_add(
                &vec_add(
                    &d2.act_dot(&rho(&x1), &rho(&x2)),
                    &d2.act_br(&lam(&x1), &rho(&x2)),
                ),
                &d2.act_bl(&rho(&x1), &lam(&x2)),
            );
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                out.push("uc3", &[v1, v2]);
            }
            // uc4: χ(v1,v2) + λ(v1·v2)
            //    = λ(v1)λ(v2) + ρ(v1)⊳'λ(v2) + λ(v1)⊲'ρ(v2) + χ'(ρ(v1),ρ(v2))
            let lhs = vec_add(&d.act_chi(&x1, &x2), &lam(&d.act_dot(&x1, &x2)));
            let rhs = vec_add(
                &vec_add(
                    &d.mul_a(&lam(&x1), &lam(&x2)),
                    &d2.act_tr(&rho(&x1), &lam(&x2)),
                ),
                &vec_add(
                    &d2.act_tl(&lam(&x1), &rho(&x2)),
                    &d2.act_chi(&rho(&x1), &rho(&x2)),
                ),
            );
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                out.push("uc4", &[v1, v2]);
            }
        }
    }
    Ok(out.canonicalize())
}

/// The morphism φ(a,v) = (a + λ(v), ρ(v)) between two unified products,
/// used to cross-check `check_datum_equivalence`.
pub fn equivalence_morphism(
    d: &ExtendingDatum,
    d2: &ExtendingDatum,
    pair: &EquivalencePair,
) -> Result<AlgebraMorphism> {
    let n = d.dim_a();
    let m = d.dim_v;
    let f = d.field();
    let p1 = unified_product_unchecked(d);
    let p2 = unified_product_unchecked(d2);
    let mut matrix = Matrix::zero(n + m, n + m, f);
    for i in 0..n {
        matrix.set(i, i, f.one());
    }
    for v in 0..m {
        for r in 0..n {
            matrix.set(r, n + v, pair.lambda.get(r, v).clone());
        }
        for r in 0..m {
            matrix.set(n + r, n + v, pair.rho.get(r, v).clone());
        }
    }
    AlgebraMorphism::new(p1.algebra, p2.algebra, matrix)
}

/// The unique datum d' such that d is obtained from d' through (λ, ρ):
/// solving uc1–uc4 for the primed maps. φ(a,v) = (a + λ(v), ρ(v)) is then a
/// multiplicative map from the product of d to the product of d'.
pub fn transport_datum(d: &ExtendingDatum, pair: &EquivalencePair) -> Result<ExtendingDatum> {
    let n = d.dim_a();
    let m = d.dim_v;
    let f = d.field();
    if !pair.rho.is_invertible() {
        return Err(Error::RhoNotInvertible);
    }
    let rho_inv = pair.rho.inverse()?;
    let lam = |v: &[Scalar]| pair.lambda.apply(v);
    let rho = |v: &[Scalar]| pair.rho.apply(v);

    let mut br = Tensor3::zero(n, m, m, f);
    let mut bl = Tensor3::zero(m, n, m, f);
    let mut tr = Tensor3::zero(m, n, n, f);
    let mut tl = Tensor3::zero(n, m, n, f);
    for i in 0..n {
        let a = basis_vec(n, i, f);
        for w in 0..m {
            let v = rho_inv.column(w);
            // a ⇀' e_w = ρ(a ⇀ ρ⁻¹(e_w))
            for (k, val) in rho(&d.act_br(&a, &v)).into_iter().enumerate() {
                br.set(i, w, k, val);
            }
            // a ⊲' e_w = a ⊲ v + λ(a ⇀ v) − a·λ(v)
            let tl_val = vec_sub(
                &vec_add(&d.act_tl(&a, &v), &lam(&d.act_br(&a, &v))),
                &d.mul_a(&a, &lam(&v)),
            );
            for (k, val) in tl_val.into_iter().enumerate() {
                tl.set(i, w, k, val);
            }
            // e_w ↼' a = ρ(ρ⁻¹(e_w) ↼ a)
            for (k, val) in rho(&d.act_bl(&v, &a)).into_iter().enumerate() {
                bl.set(w, i, k, val);
            }
            // e_w ⊳' a = v ⊳ a + λ(v ↼ a) − λ(v)·a
            let tr_val = vec_sub(
                &vec_add(&d.act_tr(&v, &a), &lam(&d.act_bl(&v, &a))),
                &d.mul_a(&lam(&v), &a),
            );
            for (k, val) in tr_val.into_iter().enumerate() {
                tr.set(w, i, k, val);
            }
        }
    }
    // Build ⇀', ↼' as evaluators for the dot/chi solves below.
    let br_t = br.clone();
    let bl_t = bl.clone();
    let mut dot = Tensor3::zero(m, m, m, f);
    let mut chi = Tensor3::zero(m, m, n, f);
    for w1 in 0..m {
        let v1 = rho_inv.column(w1);
        let e1 = basis_vec(m, w1, f);
        for w2 in 0..m {
            let v2 = rho_inv.column(w2);
            let e2 = basis_vec(m, w2, f);
            // e_{w1} ·' e_{w2} = ρ(v1·v2) − λ(v1) ⇀' e_{w2} − e_{w1} ↼' λ(v2)
            let dot_val = vec_sub(
                &vec_sub(&rho(&d.act_dot(&v1, &v2)), &br_t.bilinear(&lam(&v1), &e2)),
                &bl_t.bilinear(&e1, &lam(&v2)),
            );
            for (k, val) in dot_val.into_iter().enumerate() {
                dot.set(w1, w2, k, val);
            }
            // χ'(e_{w1}, e_{w2}) = χ(v1,v2) + λ(v1·v2) − λ(v1)λ(v2)
            //                      − e_{w1} ⊳' λ(v2) − λ(v1) ⊲' e_{w2}
            let chi_val = vec_sub(
                &vec_sub(
                    &vec_add(&d.act_chi(&v1, &v2), &lam(&d.act_dot(&v1, &v2))),
                    &vec_add(
                        &d.mul_a(&lam(&v1), &lam(&v2)),
                        &tr.bilinear(&e1, &lam(&v2)),
                    ),
                ),
                &tl.bilinear(&lam(&v1), &e2),
            );
            for (k, val) in chi_val.into_iter().enumerate() {
                chi.set(w1, w2, k, val);
            }
        }
    }
    ExtendingDatum::new(d.a.clone(), m, br, bl, tr, tl, chi, dot)
}

/// A matched pair: both A and V carry perm products, act on one another, and
/// χ is implicitly zero.
#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub a: PermAlgebra,
    pub v: PermAlgebra,
    pub br: Tensor3,
    pub bl: Tensor3,
    pub tr: Tensor3,
    pub tl: Tensor3,
}

impl MatchedPair {
    pub fn new(
        a: PermAlgebra,
        v: PermAlgebra,
        br: Tensor3,
        bl: Tensor3,
        tr: Tensor3,
        tl: Tensor3,
    ) -> Result<Self> {
        if a.field() != v.field() {
            return Err(Error::FieldMismatch { left: a.field(), right: v.field() });
        }
        if !check_perm(&a).is_ok() || !check_perm(&v).is_ok() {
            return Err(Error::PreconditionFailed(
                "matched pair requires two perm algebras".into(),
            ));
        }
        let dim_v = v.dim();
        let dot = v.structure_constants().clone();
        // Reuse the datum constructor for the shape checks.
        let datum = ExtendingDatum::new(
            a.clone(),
            dim_v,
            br,
            bl,
            tr,
            tl,
            Tensor3::zero(dim_v, dim_v, a.dim(), a.field()),
            dot,
        )?;
        Ok(MatchedPair { a, v, br: datum.br, bl: datum.bl, tr: datum.tr, tl: datum.tl })
    }

    /// The extending datum with χ = 0 and the dot given by V's product.
    pub fn to_datum(&self) -> ExtendingDatum {
        ExtendingDatum {
            a: self.a.clone(),
            dim_v: self.v.dim(),
            br: self.br.clone(),
            bl: self.bl.clone(),
            tr: self.tr.clone(),
            tl: self.tl.clone(),
            chi: Tensor3::zero(self.v.dim(), self.v.dim(), self.a.dim(), self.a.field()),
            dot: self.v.structure_constants().clone(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }
}

pub fn validate_matched_pair(mp: &MatchedPair) -> Verdict {
    validate_extending_structure(&mp.to_datum())
}

/// The unified product of the matched-pair datum: A and V embed as
/// complementary subalgebras of the result.
pub fn bicrossed_product(mp: &MatchedPair) -> Result<UnifiedProduct> {
    unified_product(&mp.to_datum())
}

pub fn bicrossed_product_unchecked(mp: &MatchedPair) -> UnifiedProduct {
    unified_product_unchecked(&mp.to_datum())
}

/// A linear map ψ: V → A, candidate deformation map of a matched pair.
#[derive(Clone, Debug)]
pub struct DeformationMap {
    pub psi: Matrix,
}

/// The deformation-map law
///   ψ(v₁·v₂) − ψ(v₁)ψ(v₂) = v₁⊳ψ(v₂) + ψ(v₁)⊲v₂ − ψ(ψ(v₁)⇀v₂) − ψ(v₁↼ψ(v₂)),
/// which says exactly that { (ψ(v), v) } is closed in the bicrossed product.
pub fn is_deformation_map(mp: &MatchedPair, map: &DeformationMap) -> Result<Verdict> {
    let n = mp.a.dim();
    let m = mp.v.dim();
    if map.psi.rows() != n || map.psi.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "psi is {}x{}, expected {n}x{m}",
            map.psi.rows(),
            map.psi.cols()
        )));
    }
    let d = mp.to_datum();
    let psi = |v: &[Scalar]| map.psi.apply(v);
    let mut out = Verdict::ok();
    for i in 0..m {
        let x1 = basis_vec(m, i, mp.field());
        for j in 0..m {
            let x2 = basis_vec(m, j, mp.field());
            let lhs = vec_sub(
                &psi(&mp.v.mul_basis(i, j)),
                &mp.a.product(&psi(&x1), &psi(&x2)),
            );
            let rhs = vec_sub(
                &vec_add(
                    &d.act_tr(&x1, &psi(&x2)),
                    &d.act_tl(&psi(&x1), &x2),
                ),
                &vec_add(
                    &psi(&d.act_br(&psi(&x1), &x2)),
                    &psi(&d.act_bl(&x1, &psi(&x2))),
                ),
            );
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                out.push("deformation", &[i, j]);
            }
        }
    }
    Ok(out.canonicalize())
}

/// V with the deformed product v₁·ψv₂ = v₁·v₂ + ψ(v₁)⇀v₂ + v₁↼ψ(v₂).
pub fn deform_complement(mp: &MatchedPair, map: &DeformationMap) -> Result<PermAlgebra> {
    let verdict = is_deformation_map(mp, map)?;
    if !verdict.is_ok() {
        return Err(Error::InvalidDeformationMap);
    }
    Ok(deform_complement_unchecked(mp, map))
}

pub fn deform_complement_unchecked(mp: &MatchedPair, map: &DeformationMap) -> PermAlgebra {
    let m = mp.v.dim();
    let f = mp.field();
    let d = mp.to_datum();
    let psi = |v: &[Scalar]| map.psi.apply(v);
    let mut sc = Tensor3::zero(m, m, m, f);
    for i in 0..m {
        let x1 = basis_vec(m, i, f);
        for j in 0..m {
            let x2 = basis_vec(m, j, f);
            let prod = vec_add(
                &mp.v.mul_basis(i, j),
                &vec_add(&d.act_br(&psi(&x1), &x2), &d.act_bl(&x1, &psi(&x2)))
            );
            for (k, val) in prod.into_iter().enumerate() {
                sc.set(i, j, k, val);
            }
        }
    }
    PermAlgebra::new(f, mp.v.basis().to_vec(), sc).expect("consistent dims")
}

/// Which reading of the deformation-equivalence law to use. The displayed
/// version mixes ψ and φ in its last term; the version matching
/// "ρ: V_ψ → V_φ is an isomorphism" uses ψ there. The isomorphism reading is
/// the one classification relies on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DeformationEquivalenceRule {
    Displayed,
    IsomorphismConsistent,
}

/// Checks whether ρ witnesses ψ ~ φ under the chosen rule.
pub fn deformation_equivalent(
    mp: &MatchedPair,
    psi: &DeformationMap,
    phi: &DeformationMap,
    rho: &Matrix,
    rule: DeformationEquivalenceRule,
) -> Result<Verdict> {
    let m = mp.v.dim();
    if rho.rows() != m || rho.cols() != m {
        return Err(Error::DimensionMismatch("rho must be dim V × dim V".into()));
    }
    if !rho.is_invertible() {
        return Err(Error::RhoNotInvertible);
    }
    let d = mp.to_datum();
    let p = |v: &[Scalar]| psi.psi.apply(v);
    let q = |v: &[Scalar]| phi.psi.apply(v);
    let r = |v: &[Scalar]| rho.apply(v);
    let mut out = Verdict::ok();
    for i in 0..m {
        let x1 = basis_vec(m, i, mp.field());
        for j in 0..m {
            let x2 = basis_vec(m, j, mp.field());
            // ρ(v1·v2) − ρ(v1)·ρ(v2)
            let lhs = vec_sub(&r(&mp.v.mul_basis(i, j)), &mp.v.product(&r(&x1), &r(&x2)));
            // φ(ρv1)⇀ρv2 + ρv1↼φ(ρv2) − ρ(ψ(v1)⇀v2) − ρ(v1↼·(v2))
            let last = match rule {
                DeformationEquivalenceRule::Displayed => q(&x2),
                DeformationEquivalenceRule::IsomorphismConsistent => p(&x2),
            };
            let rhs = vec_sub(
                &vec_add(
                    &d.act_br(&q(&r(&x1)), &r(&x2)),
                    &d.act_bl(&r(&x1), &q(&r(&x2))),
                ),
                &vec_add(
                    &r(&d.act_br(&p(&x1), &x2)),
                    &r(&d.act_bl(&x1, &last)),
                ),
            );
            if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
                out.push("def-equiv", &[i, j]);
            }
        }
    }
    Ok(out.canonicalize())
}

/// Complement classification of a matched pair over a finite field: all
/// deformation maps, grouped into equivalence classes; the factorization
/// index is the number of classes.
#[derive(Clone, Debug)]
pub struct ComplementClassification {
    /// Every valid deformation map, in lexicographic order.
    pub maps: Vec<Matrix>,
    /// Classes as indices into `maps`; each class sorted, classes sorted by
    /// their smallest member.
    pub classes: Vec<Vec<usize>>,
}

impl ComplementClassification {
    pub fn index(&self) -> usize {
        self.classes.len()
    }

    pub fn representatives(&self) -> Vec<&Matrix> {
        self.classes.iter().map(|c| &self.maps[c[0]]).collect()
    }
}

pub fn classify_complements(mp: &MatchedPair) -> Result<ComplementClassification> {
    let p = match mp.field() {
        FieldSpec::PrimeField(p) => p,
        FieldSpec::Rationals => {
            return Err(Error::UnsupportedField(
                "complement classification sweeps a finite field".into(),
            ))
        }
    };
    let n = mp.a.dim();
    let m = mp.v.dim();
    if m > 2 {
        return Err(Error::SearchBoundExceeded(format!(
            "complement classification is bounded at dim V ≤ 2, got {m}"
        )));
    }
    let f = mp.field();
    let cells = n * m;
    let mut maps = Vec::new();
    let mut flat = vec![0u64; cells];
    loop {
        let psi = Matrix::from_fn(n, m, f, |r, c| f.from_i64(flat[r * m + c] as i64));
        let dm = DeformationMap { psi: psi.clone() };
        if is_deformation_map(mp, &dm)?.is_ok() {
            maps.push(psi);
        }
        if cells == 0 || !crate::sweep::next_vector(&mut flat, p) {
            break;
        }
    }
    // Union by searching for an isomorphism witness ρ between deformed
    // complements (the rule consistent with that reading).
    let mut class_of: Vec<usize> = (0..maps.len()).collect();
    let rho_cells = m * m;
    for i in 0..maps.len() {
        for j in (i + 1)..maps.len() {
            if class_of[j] != j {
                continue;
            }
            let psi = DeformationMap { psi: maps[i].clone() };
            let phi = DeformationMap { psi: maps[j].clone() };
            let mut rho_flat = vec![0u64; rho_cells];
            let mut related = false;
            loop {
                let rho = Matrix::from_fn(m, m, f, |r, c| f.from_i64(rho_flat[r * m + c] as i64));
                if rho.is_invertible() {
                    if let Ok(v) = deformation_equivalent(
                        mp,
                        &psi,
                        &phi,
                        &rho,
                        DeformationEquivalenceRule::IsomorphismConsistent,
                    ) {
                        if v.is_ok() {
                            related = true;
                            break;
                        }
                    }
                }
                if rho_cells == 0 || !crate::sweep::next_vector(&mut rho_flat, p) {
                    break;
                }
            }
            if related {
                let root = class_of[i];
                class_of[j] = root;
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = class_of.iter().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    roots.sort();
    for root in roots {
        let members: Vec<usize> = (0..maps.len()).filter(|&i| class_of[i] == root).collect();
        classes.push(members);
    }
    classes.sort_by_key(|c| c[0]);
    Ok(ComplementClassification { maps, classes })
}
