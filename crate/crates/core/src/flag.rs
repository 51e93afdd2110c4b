//! Codimension-one (flag) extending structures.
//!
//! A one-dimensional complement V = span{x} collapses an extending datum to a
//! 6-tuple (h, g, D, T, ã, k̃): two functionals, two endomorphisms of A, an
//! element ã ∈ A and a scalar k̃, via
//!
//! ```text
//!   a⇀x = h(a)x    x↼a = g(a)x    x⊳a = D(a)
//!   a⊲x = T(a)     x·x = k̃x      χ(x,x) = ã.
//! ```
//!
//! Validity is the eight equation families es1–es8 below; the bijection with
//! extending structures is exercised by the test suite, which checks the
//! validator here against the generic ten-family validator exhaustively.

use crate::error::{Error, Result};
use crate::ext::{
    check_datum_equivalence, EquivalenceMode, EquivalencePair, ExtendingDatum,
    unified_product_unchecked, UnifiedProduct,
};
use crate::kernel::matrix::{basis_vec, vec_add, vec_is_zero, vec_sub, Matrix};
use crate::kernel::scalar::{FieldSpec, Scalar};
use crate::kernel::tensor::Tensor3;
use crate::perm::PermAlgebra;
use crate::verdict::Verdict;

/// The 6-tuple datum of a codimension-one extension.
#[derive(Clone, PartialEq, Debug)]
pub struct FlagDatum {
    pub a: PermAlgebra,
    /// h: A → k, as coefficients on the basis.
    pub h: Vec<Scalar>,
    /// g: A → k.
    pub g: Vec<Scalar>,
    /// D: A → A.
    pub d: Matrix,
    /// T: A → A.
    pub t: Matrix,
    /// ã ∈ A.
    pub a_tilde: Vec<Scalar>,
    /// k̃ ∈ k.
    pub k_tilde: Scalar,
}

impl FlagDatum {
    pub fn new(
        a: PermAlgebra,
        h: Vec<Scalar>,
        g: Vec<Scalar>,
        d: Matrix,
        t: Matrix,
        a_tilde: Vec<Scalar>,
        k_tilde: Scalar,
    ) -> Result<Self> {
        let n = a.dim();
        if h.len() != n || g.len() != n || a_tilde.len() != n {
            return Err(Error::DimensionMismatch(
                "h, g and ã must have the algebra's dimension".into(),
            ));
        }
        if d.rows() != n || d.cols() != n || t.rows() != n || t.cols() != n {
            return Err(Error::DimensionMismatch("D and T must be n×n".into()));
        }
        Ok(FlagDatum { a, h, g, d, t, a_tilde, k_tilde })
    }

    pub fn zero(a: PermAlgebra) -> Self {
        let n = a.dim();
        let f = a.field();
        FlagDatum {
            h: vec![f.zero(); n],
            g: vec![f.zero(); n],
            d: Matrix::zero(n, n, f),
            t: Matrix::zero(n, n, f),
            a_tilde: vec![f.zero(); n],
            k_tilde: f.zero(),
            a,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }

    fn h_of(&self, v: &[Scalar]) -> Scalar {
        crate::kernel::matrix::pairing(&self.h, v)
    }

    fn g_of(&self, v: &[Scalar]) -> Scalar {
        crate::kernel::matrix::pairing(&self.g, v)
    }

    /// Flattened key for canonical ordering of enumeration output.
    pub fn canonical_key(&self) -> Vec<String> {
        let mut key: Vec<String> = Vec::new();
        key.extend(self.h.iter().map(Scalar::render));
        key.extend(self.g.iter().map(Scalar::render));
        for r in 0..self.d.rows() {
            for c in 0..self.d.cols() {
                key.push(self.d.get(r, c).render());
            }
        }
        for r in 0..self.t.rows() {
            for c in 0..self.t.cols() {
                key.push(self.t.get(r, c).render());
            }
        }
        key.extend(self.a_tilde.iter().map(Scalar::render));
        key.push(self.k_tilde.render());
        key
    }
}

/// The eight equation families. Each family is a chain of expressions that
/// must all agree; violations carry the family id and the basis tuple.
pub fn validate_flag_datum(fd: &FlagDatum) -> Verdict {
    let n = fd.a.dim();
    let f = fd.field();
    let mut out = Verdict::ok();
    let e = |i: usize| basis_vec(n, i, f);

    for i in 0..n {
        for j in 0..n {
            let prod_ij = fd.a.mul_basis(i, j);
            let prod_ji = fd.a.mul_basis(j, i);

            // es1 (pair part): h(a1a2) = h(a1)h(a2) = h(a1)g(a2)
            let h12 = fd.h_of(&prod_ij);
            let hh = fd.h[i].mul_ref(&fd.h[j]);
            let hg = fd.h[i].mul_ref(&fd.g[j]);
            if h12 != hh || h12 != hg {
                out.push("es1", &[i, j]);
            }

            // es2: g(a1a2) = g(a2a1) = g(a1)g(a2)
            let g12 = fd.g_of(&prod_ij);
            let g21 = fd.g_of(&prod_ji);
            let gg = fd.g[i].mul_ref(&fd.g[j]);
            if g12 != g21 || g12 != gg {
                out.push("es2", &[i, j]);
            }

            // es3: D(a1a2) = D(a2a1) = D(a1)a2 + g(a1)D(a2)
            let d12 = fd.d.apply(&prod_ij);
            let d21 = fd.d.apply(&prod_ji);
            let rhs = vec_add(
                &fd.a.product(&fd.d.apply(&e(i)), &e(j)),
                &crate::kernel::matrix::vec_scale(&fd.g[i], &fd.d.apply(&e(j))),
            );
            if !vec_is_zero(&vec_sub(&d12, &d21)) || !vec_is_zero(&vec_sub(&d12, &rhs)) {
                out.push("es3", &[i, j]);
            }

            // es4: T(a1a2) = a1T(a2) + T(a1)h(a2)
            //             = a1D(a2) + T(a1)g(a2) = T(a1)a2 + h(a1)D(a2)
            let t12 = fd.t.apply(&prod_ij);
            let r1 = vec_add(
                &fd.a.product(&e(i), &fd.t.apply(&e(j))),
                &crate::kernel::matrix::vec_scale(&fd.h[j], &fd.t.apply(&e(i))),
            );
            let r2 = vec_add(
                &fd.a.product(&e(i), &fd.d.apply(&e(j))),
                &crate::kernel::matrix::vec_scale(&fd.g[j], &fd.t.apply(&e(i))),
            );
            let r3 = vec_add(
                &fd.a.product(&fd.t.apply(&e(i)), &e(j)),
                &crate::kernel::matrix::vec_scale(&fd.h[i], &fd.d.apply(&e(j))),
            );
            if [&r1, &r2, &r3].iter().any(|r| !vec_is_zero(&vec_sub(&t12, r))) {
                out.push("es4", &[i, j]);
            }
        }

        let ei = e(i);

        // es1 (functional part): h(T(a)) = 0
        if !fd.h_of(&fd.t.apply(&ei)).is_zero() {
            out.push("es1", &[i]);
        }

        // es5: k̃g(a) = k̃g(a) + g(D(a)) = k̃h(a) + g(T(a)) = k̃g(a) + h(D(a))
        let base = fd.k_tilde.mul_ref(&fd.g[i]);
        let with_gd = base.add_ref(&fd.g_of(&fd.d.apply(&ei)));
        let mid = fd.k_tilde.mul_ref(&fd.h[i]).add_ref(&fd.g_of(&fd.t.apply(&ei)));
        let with_hd = base.add_ref(&fd.h_of(&fd.d.apply(&ei)));
        if base != with_gd || base != mid || base != with_hd {
            out.push("es5", &[i]);
        }

        // es6: aã + k̃T(a) = T(T(a)) + h(a)ã
        let lhs6 = vec_add(
            &fd.a.product(&ei, &fd.a_tilde),
            &crate::kernel::matrix::vec_scale(&fd.k_tilde, &fd.t.apply(&ei)),
        );
        let rhs6 = vec_add(
            &fd.t.apply(&fd.t.apply(&ei)),
            &crate::kernel::matrix::vec_scale(&fd.h[i], &fd.a_tilde),
        );
        if !vec_is_zero(&vec_sub(&lhs6, &rhs6)) {
            out.push("es6", &[i]);
        }

        // es7: ãa + k̃D(a) = D(D(a)) + g(a)ã = D(T(a)) + h(a)ã = T(D(a)) + g(a)ã
        // (first product multiplies ã on the right by a, matching the
        // associativity of the induced product on A ⊕ kx at (x, x, a))
        let lhs7 = vec_add(
            &fd.a.product(&fd.a_tilde, &ei),
            &crate::kernel::matrix::vec_scale(&fd.k_tilde, &fd.d.apply(&ei)),
        );
        let r1 = vec_add(
            &fd.d.apply(&fd.d.apply(&ei)),
            &crate::kernel::matrix::vec_scale(&fd.g[i], &fd.a_tilde),
        );
        let r2 = vec_add(
            &fd.d.apply(&fd.t.apply(&ei)),
            &crate::kernel::matrix::vec_scale(&fd.h[i], &fd.a_tilde),
        );
        let r3 = vec_add(
            &fd.t.apply(&fd.d.apply(&ei)),
            &crate::kernel::matrix::vec_scale(&fd.g[i], &fd.a_tilde),
        );
        if [&r1, &r2, &r3].iter().any(|r| !vec_is_zero(&vec_sub(&lhs7, r))) {
            out.push("es7", &[i]);
        }
    }

    // es8: g(ã) = h(ã) and T(ã) = D(ã)
    if fd.g_of(&fd.a_tilde) != fd.h_of(&fd.a_tilde)
        || !vec_is_zero(&vec_sub(&fd.t.apply(&fd.a_tilde), &fd.d.apply(&fd.a_tilde)))
    {
        out.push("es8", &[]);
    }

    out.canonicalize()
}

/// The extending datum with dim V = 1 induced by a flag datum.
pub fn datum_from_flag(fd: &FlagDatum) -> ExtendingDatum {
    let n = fd.a.dim();
    let f = fd.field();
    let mut br = Tensor3::zero(n, 1, 1, f);
    let mut bl = Tensor3::zero(1, n, 1, f);
    let mut tr = Tensor3::zero(1, n, n, f);
    let mut tl = Tensor3::zero(n, 1, n, f);
    let mut chi = Tensor3::zero(1, 1, n, f);
    let mut dot = Tensor3::zero(1, 1, 1, f);
    for i in 0..n {
        br.set(i, 0, 0, fd.h[i].clone());
        bl.set(0, i, 0, fd.g[i].clone());
        for k in 0..n {
            tr.set(0, i, k, fd.d.get(k, i).clone());
            tl.set(i, 0, k, fd.t.get(k, i).clone());
        }
    }
    for k in 0..n {
        chi.set(0, 0, k, fd.a_tilde[k].clone());
    }
    dot.set(0, 0, 0, fd.k_tilde.clone());
    ExtendingDatum::new(fd.a.clone(), 1, br, bl, tr, tl, chi, dot).expect("consistent dims")
}

/// Reads a flag datum back off a dim-V = 1 extending datum (the inverse of
/// `datum_from_flag`).
pub fn flag_from_datum(d: &ExtendingDatum) -> Result<FlagDatum> {
    if d.dim_v != 1 {
        return Err(Error::DimensionMismatch(format!(
            "flag datum needs dim V = 1, got {}",
            d.dim_v
        )));
    }
    let n = d.dim_a();
    let f = d.field();
    let h: Vec<Scalar> = (0..n).map(|i| d.br.get(i, 0, 0).clone()).collect();
    let g: Vec<Scalar> = (0..n).map(|i| d.bl.get(0, i, 0).clone()).collect();
    let dm = Matrix::from_fn(n, n, f, |k, i| d.tr.get(0, i, k).clone());
    let tm = Matrix::from_fn(n, n, f, |k, i| d.tl.get(i, 0, k).clone());
    let a_tilde: Vec<Scalar> = (0..n).map(|k| d.chi.get(0, 0, k).clone()).collect();
    let k_tilde = d.dot.get(0, 0, 0).clone();
    FlagDatum::new(d.a.clone(), h, g, dm, tm, a_tilde, k_tilde)
}

/// The unified product induced by a flag datum (checked).
pub fn flag_extension(fd: &FlagDatum) -> Result<UnifiedProduct> {
    let verdict = validate_flag_datum(fd);
    if !verdict.is_ok() {
        return Err(Error::InvalidDatum);
    }
    Ok(unified_product_unchecked(&datum_from_flag(fd)))
}

/// Equivalence of flag datums under a witness (a⃗, l): requires h = h',
/// g = g' and
///
/// ```text
///   fq1  D(a) = a⃗a + lD'(a) − g(a)a⃗
///   fq2  T(a) = aa⃗ + lT'(a) − h(a)a⃗
///   fq3  ã = a⃗² + lD'(a⃗) + lT'(a⃗) + l²ã' − k̃a⃗
///   fq4  k̃ = lk̃' + h'(a⃗) + g'(a⃗)
/// ```
pub fn flag_equivalent(
    fd: &FlagDatum,
    fd2: &FlagDatum,
    a_vec: &[Scalar],
    l: &Scalar,
) -> Result<Verdict> {
    let n = fd.a.dim();
    if fd2.a.dim() != n {
        return Err(Error::DimensionMismatch("flag datums over different algebras".into()));
    }
    if a_vec.len() != n {
        return Err(Error::DimensionMismatch("witness vector must lie in A".into()));
    }
    if l.is_zero() {
        return Err(Error::ZeroScalingWitness);
    }
    let f = fd.field();
    let mut out = Verdict::ok();
    for i in 0..n {
        if fd.h[i] != fd2.h[i] {
            out.push("h-match", &[i]);
        }
        if fd.g[i] != fd2.g[i] {
            out.push("g-match", &[i]);
        }
    }
    let scale = |k: &Scalar, v: &[Scalar]| crate::kernel::matrix::vec_scale(k, v);
    for i in 0..n {
        let ei = basis_vec(n, i, f);
        // fq1
        let lhs = fd.d.apply(&ei);
        let rhs = vec_sub(
            &vec_add(&fd.a.product(a_vec, &ei), &scale(l, &fd2.d.apply(&ei))),
            &scale(&fd.g[i], a_vec),
        );
        if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
            out.push("fq1", &[i]);
        }
        // fq2
        let lhs = fd.t.apply(&ei);
        let rhs = vec_sub(
            &vec_add(&fd.a.product(&ei, a_vec), &scale(l, &fd2.t.apply(&ei))),
            &scale(&fd.h[i], a_vec),
        );
        if !vec_is_zero(&vec_sub(&lhs, &rhs)) {
            out.push("fq2", &[i]);
        }
    }
    // fq3
    let l_sq = l.mul_ref(l);
    let rhs3 = vec_sub(
        &vec_add(
            &vec_add(&fd.a.product(a_vec, a_vec), &scale(l, &fd2.d.apply(a_vec))),
            &vec_add(&scale(l, &fd2.t.apply(a_vec)), &scale(&l_sq, &fd2.a_tilde)),
        ),
        &scale(&fd.k_tilde, a_vec),
    );
    if !vec_is_zero(&vec_sub(&fd.a_tilde, &rhs3)) {
        out.push("fq3", &[]);
    }
    // fq4
    let rhs4 = l
        .mul_ref(&fd2.k_tilde)
        .add_ref(&fd2.h_of(a_vec))
        .add_ref(&fd2.g_of(a_vec));
    if fd.k_tilde != rhs4 {
        out.push("fq4", &[]);
    }
    Ok(out.canonicalize())
}

/// The equivalence pair (λ(x) = a⃗, ρ(x) = l·x) associated to a flag witness,
/// for the cross-check against the generic datum equivalence.
pub fn flag_witness_pair(fd: &FlagDatum, a_vec: &[Scalar], l: &Scalar) -> EquivalencePair {
    let n = fd.a.dim();
    let f = fd.field();
    let lambda = Matrix::from_fn(n, 1, f, |r, _| a_vec[r].clone());
    let rho = Matrix::from_fn(1, 1, f, |_, _| l.clone());
    EquivalencePair { lambda, rho }
}

/// Everything `enumerate_flag_extensions` returns: valid datums in canonical
/// order, equivalence classes, and one induced algebra per class.
#[derive(Clone, Debug)]
pub struct FlagEnumeration {
    pub datums: Vec<FlagDatum>,
    /// Classes as sorted index lists into `datums`, sorted by smallest member.
    pub classes: Vec<Vec<usize>>,
    /// Unified product of each class representative.
    pub algebras: Vec<PermAlgebra>,
}

pub const FLAG_ENUM_DEFAULT_BOUND: u64 = 10_000_000;

/// Exhaustive sweep of all flag datums over a finite field, with equivalence
/// classes computed by an exhaustive witness search.
pub fn enumerate_flag_extensions(a: &PermAlgebra, bound: u64) -> Result<FlagEnumeration> {
    let p = match a.field() {
        FieldSpec::PrimeField(p) => p,
        FieldSpec::Rationals => {
            return Err(Error::UnsupportedField(
                "flag enumeration sweeps a finite field".into(),
            ))
        }
    };
    let n = a.dim();
    let f = a.field();
    let cells = 2 * n + 2 * n * n + n + 1;
    let total = (p as f64).powi(cells as i32);
    if total > bound as f64 {
        return Err(Error::SearchBoundExceeded(format!(
            "flag sweep of p^{cells} = {total} candidates exceeds bound {bound}"
        )));
    }

    let lift = |flat: &[u64]| -> Vec<Scalar> {
        flat.iter().map(|&v| f.from_i64(v as i64)).collect()
    };

    let mut datums: Vec<FlagDatum> = Vec::new();
    // g first: es2 is the cheapest strong constraint and prunes the sweep.
    let mut g_flat = vec![0u64; n];
    loop {
        let g = lift(&g_flat);
        let g_ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let g12 = crate::kernel::matrix::pairing(&g, &a.mul_basis(i, j));
                let g21 = crate::kernel::matrix::pairing(&g, &a.mul_basis(j, i));
                g12 == g21 && g12 == g[i].mul_ref(&g[j])
            })
        });
        if g_ok {
            let mut h_flat = vec![0u64; n];
            loop {
                let h = lift(&h_flat);
                let h_ok = (0..n).all(|i| {
                    (0..n).all(|j| {
                        let h12 = crate::kernel::matrix::pairing(&h, &a.mul_basis(i, j));
                        h12 == h[i].mul_ref(&h[j]) && h12 == h[i].mul_ref(&g[j])
                    })
                });
                if h_ok {
                    let mut rest = vec![0u64; 2 * n * n + n + 1];
                    loop {
                        let d = Matrix::from_fn(n, n, f, |r, c| f.from_i64(rest[r * n + c] as i64));
                        let t = Matrix::from_fn(n, n, f, |r, c| {
                            f.from_i64(rest[n * n + r * n + c] as i64)
                        });
                        let a_tilde = lift(&rest[2 * n * n..2 * n * n + n]);
                        let k_tilde = f.from_i64(rest[2 * n * n + n] as i64);
                        let fd = FlagDatum {
                            a: a.clone(),
                            h: h.clone(),
                            g: g.clone(),
                            d,
                            t,
                            a_tilde,
                            k_tilde,
                        };
                        if validate_flag_datum(&fd).is_ok() {
                            datums.push(fd);
                        }
                        if rest.is_empty() || !crate::sweep::next_vector(&mut rest, p) {
                            break;
                        }
                    }
                }
                if n == 0 || !crate::sweep::next_vector(&mut h_flat, p) {
                    break;
                }
            }
        }
        if n == 0 || !crate::sweep::next_vector(&mut g_flat, p) {
            break;
        }
    }

    datums.sort_by_key(|fd| fd.canonical_key());

    // Equivalence classes by exhaustive witness search over (a⃗, l).
    let mut class_of: Vec<usize> = (0..datums.len()).collect();
    for i in 0..datums.len() {
        if class_of[i] != i {
            continue;
        }
        for j in (i + 1)..datums.len() {
            if class_of[j] != j {
                continue;
            }
            if flag_pair_equivalent(&datums[i], &datums[j], p)? {
                class_of[j] = i;
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = class_of
        .iter()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    roots.sort();
    for root in &roots {
        classes.push((0..datums.len()).filter(|&i| class_of[i] == *root).collect());
    }
    classes.sort_by_key(|c| c[0]);
    let algebras = classes
        .iter()
        .map(|c| unified_product_unchecked(&datum_from_flag(&datums[c[0]])).algebra)
        .collect();
    Ok(FlagEnumeration { datums, classes, algebras })
}

fn flag_pair_equivalent(fd: &FlagDatum, fd2: &FlagDatum, p: u64) -> Result<bool> {
    if fd.h != fd2.h || fd.g != fd2.g {
        return Ok(false);
    }
    let n = fd.a.dim();
    let f = fd.field();
    let mut a_flat = vec![0u64; n];
    loop {
        let a_vec: Vec<Scalar> = a_flat.iter().map(|&v| f.from_i64(v as i64)).collect();
        for l_res in 1..p {
            let l = f.from_i64(l_res as i64);
            if flag_equivalent(fd, fd2, &a_vec, &l)?.is_ok() {
                return Ok(true);
            }
        }
        if n == 0 || !crate::sweep::next_vector(&mut a_flat, p) {
            break;
        }
    }
    Ok(false)
}

/// Cross-check helper: an fq-equivalence witness must induce a verified
/// stabilizing isomorphism between the two unified products.
pub fn flag_equivalence_cross_check(
    fd: &FlagDatum,
    fd2: &FlagDatum,
    a_vec: &[Scalar],
    l: &Scalar,
) -> Result<bool> {
    let pair = flag_witness_pair(fd, a_vec, l);
    let d = datum_from_flag(fd);
    let d2 = datum_from_flag(fd2);
    let verdict = check_datum_equivalence(&d, &d2, &pair, EquivalenceMode::Equivalent)?;
    Ok(verdict.is_ok())
}
