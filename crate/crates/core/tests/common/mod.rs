//! Shared fixtures and generators for the integration suites.

use permlab_core::ext::ExtendingDatum;
use permlab_core::kernel::matrix::Matrix;
use permlab_core::kernel::scalar::FieldSpec;
use permlab_core::kernel::tensor::Tensor3;
use permlab_core::perm::{check_representation, PermAlgebra, Representation};
use permlab_core::sweep::{perm_census, GfTable};
use rand::prelude::*;
use rand::rngs::StdRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// e1e1 = e1, e2e1 = e2 over the given field.
pub fn class_i(field: FieldSpec) -> PermAlgebra {
    PermAlgebra::from_table(field, 2, &[(0, 0, 0, 1), (1, 0, 1, 1)])
}

pub fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

/// All perm algebras of the given dimension over GF(p), via census.
pub fn census_algebras(n: usize, p: u64) -> Vec<PermAlgebra> {
    perm_census(n, p, 100_000_000)
        .unwrap()
        .into_iter()
        .map(|t| t.to_algebra())
        .collect()
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, field: FieldSpec, p: u64) -> Matrix {
    Matrix::from_fn(rows, cols, field, |_, _| {
        field.from_i64(rng.random_range(0..p) as i64)
    })
}

pub fn random_invertible(rng: &mut StdRng, n: usize, field: FieldSpec, p: u64) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n, field, p);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_tensor3(
    rng: &mut StdRng,
    dims: (usize, usize, usize),
    field: FieldSpec,
    p: u64,
) -> Tensor3 {
    Tensor3::from_fn(dims.0, dims.1, dims.2, field, |_, _, _| {
        field.from_i64(rng.random_range(0..p) as i64)
    })
}

/// A uniformly random extending datum of `a` by an m-dimensional space.
pub fn random_datum(rng: &mut StdRng, a: &PermAlgebra, m: usize, p: u64) -> ExtendingDatum {
    let n = a.dim();
    let f = a.field();
    ExtendingDatum::new(
        a.clone(),
        m,
        random_tensor3(rng, (n, m, m), f, p),
        random_tensor3(rng, (m, n, m), f, p),
        random_tensor3(rng, (m, n, n), f, p),
        random_tensor3(rng, (n, m, n), f, p),
        random_tensor3(rng, (m, m, n), f, p),
        random_tensor3(rng, (m, m, m), f, p),
    )
    .unwrap()
}

/// All valid representations of `a` on an m-dimensional space over GF(p),
/// found by exhaustive sweep. Only for tiny parameter ranges.
pub fn sweep_representations(a: &PermAlgebra, m: usize, p: u64) -> Vec<Representation> {
    let f = a.field();
    let n = a.dim();
    let cells = 2 * n * m * m;
    assert!(
        (p as f64).powi(cells as i32) <= 1e6,
        "representation sweep too large"
    );
    let mut out = Vec::new();
    let mut flat = vec![0u64; cells];
    loop {
        let l: Vec<Matrix> = (0..n)
            .map(|i| {
                Matrix::from_fn(m, m, f, |r, c| {
                    f.from_i64(flat[(i * m + r) * m + c] as i64)
                })
            })
            .collect();
        let r: Vec<Matrix> = (0..n)
            .map(|i| {
                Matrix::from_fn(m, m, f, |r2, c| {
                    f.from_i64(flat[n * m * m + (i * m + r2) * m + c] as i64)
                })
            })
            .collect();
        let rep = Representation::new(a.clone(), m, l, r).unwrap();
        if check_representation(&rep).is_ok() {
            out.push(rep);
        }
        if cells == 0 || !permlab_core::sweep::next_vector(&mut flat, p) {
            break;
        }
    }
    out
}

/// A valid representation drawn from structured families: a random conjugate
/// of either the zero rep, the regular rep, or a block sum of swept
/// one-dimensional representations.
pub fn random_valid_representation(
    rng: &mut StdRng,
    a: &PermAlgebra,
    m: usize,
    p: u64,
) -> Representation {
    let f = a.field();
    let n = a.dim();
    let base = match rng.random_range(0..3u32) {
        0 => Representation::zero(a.clone(), m),
        1 if m == n => permlab_core::perm::regular_representation(a),
        _ => {
            // block-diagonal sum of m one-dimensional representations
            let ones = sweep_representations(a, 1, p);
            let picks: Vec<&Representation> =
                (0..m).map(|_| &ones[rng.random_range(0..ones.len())]).collect();
            let l: Vec<Matrix> = (0..n)
                .map(|i| {
                    Matrix::from_fn(m, m, f, |r, c| {
                        if r == c {
                            picks[r].l[i].get(0, 0).clone()
                        } else {
                            f.zero()
                        }
                    })
                })
                .collect();
            let r: Vec<Matrix> = (0..n)
                .map(|i| {
                    Matrix::from_fn(m, m, f, |r2, c| {
                        if r2 == c {
                            picks[r2].r[i].get(0, 0).clone()
                        } else {
                            f.zero()
                        }
                    })
                })
                .collect();
            Representation::new(a.clone(), m, l, r).unwrap()
        }
    };
    // conjugate by a random change of basis
    let s = random_invertible(rng, m, f, p);
    let s_inv = s.inverse().unwrap();
    let l = base.l.iter().map(|mat| s.mul(mat).mul(&s_inv)).collect();
    let r = base.r.iter().map(|mat| s.mul(mat).mul(&s_inv)).collect();
    Representation::new(a.clone(), m, l, r).unwrap()
}

/// Perm algebras of dimension 3 over GF(p), built as flag extensions of
/// dimension-2 census algebras (a rich supply without a dim-3 census).
pub fn dim3_pool(p: u64, base_limit: usize) -> Vec<PermAlgebra> {
    let mut pool = Vec::new();
    for base in census_algebras(2, p).into_iter().take(base_limit) {
        let enumeration =
            permlab_core::flag::enumerate_flag_extensions(&base, 10_000_000).unwrap();
        pool.extend(enumeration.algebras);
    }
    pool
}

/// Sanity helper shared by suites: lift a GF table into an algebra.
pub fn table_algebra(t: &GfTable) -> PermAlgebra {
    t.to_algebra()
}
