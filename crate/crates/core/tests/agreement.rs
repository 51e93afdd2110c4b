//! Cross-route agreement laws: every itemized validator must agree with the
//! direct perm check on the product it governs, on valid and invalid data
//! alike. These are the load-bearing checks for the transcribed equation
//! families.

mod common;

use common::*;
use permlab_core::bialg::{
    check_coalgebra, check_cob_conditions, check_dual_coalgebra_conditions, check_matched_pair_dual,
    check_perm_bialgebra, coboundary_delta, dual_algebra, dual_matched_pair, RTensor,
};
use permlab_core::ext::{
    bicrossed_product_unchecked, check_datum_equivalence, equivalence_morphism, transport_datum,
    unified_product_unchecked, validate_extending_structure, validate_matched_pair,
    EquivalenceMode, EquivalencePair, ExtendingDatum, MatchedPair,
};
use permlab_core::kernel::scalar::FieldSpec;
use permlab_core::kernel::tensor::{Tensor2, Tensor3};
use permlab_core::nonab::{cocycle_agreement, NonAbelianCocycle};
use permlab_core::perm::{check_morphism, check_perm, PermAlgebra};
use permlab_core::sweep::next_vector;
use rand::Rng;

/// Exhaustive agreement of the ten-family validator with the direct perm
/// check, over GF(2) with dim A = dim V = 1, on both one-dimensional
/// algebras.
#[test]
fn datum_validator_agrees_exhaustively_gf2() {
    let f = gf(2);
    for base in [
        PermAlgebra::zero_algebra(f, 1),
        PermAlgebra::from_table(f, 1, &[(0, 0, 0, 1)]),
    ] {
        let mut flat = vec![0u64; 6];
        let mut count = 0;
        loop {
            let lift = |v: u64| -> Tensor3 {
                let mut t = Tensor3::zero(1, 1, 1, f);
                t.set(0, 0, 0, f.from_i64(v as i64));
                t
            };
            let d = ExtendingDatum::new(
                base.clone(),
                1,
                lift(flat[0]),
                lift(flat[1]),
                lift(flat[2]),
                lift(flat[3]),
                lift(flat[4]),
                lift(flat[5]),
            )
            .unwrap();
            let validator = validate_extending_structure(&d).is_ok();
            let direct = check_perm(&unified_product_unchecked(&d).algebra).is_ok();
            assert_eq!(validator, direct, "disagreement at {flat:?} over {base:?}");
            count += 1;
            if !next_vector(&mut flat, 2) {
                break;
            }
        }
        assert_eq!(count, 64);
    }
}

/// Randomized agreement at (dim A, dim V) = (2, 1) over GF(3).
#[test]
fn datum_validator_agrees_randomized_gf3() {
    let mut rng = rng(0x5eed_0001);
    let algebras = census_algebras(2, 3);
    for _ in 0..1000 {
        let a = &algebras[rng.random_range(0..algebras.len())];
        let d = random_datum(&mut rng, a, 1, 3);
        let validator = validate_extending_structure(&d).is_ok();
        let direct = check_perm(&unified_product_unchecked(&d).algebra).is_ok();
        assert_eq!(validator, direct);
    }
}

/// The spec'd counterexample: dot(x,x) = x with χ(x,x) = e1 and zero actions
/// breaks the mixed families ext7/ext8, as the direct product check confirms.
#[test]
fn chi_dot_mismatch_fails_ext7_ext8() {
    let f = FieldSpec::Rationals;
    let a = class_i(f);
    let mut chi = Tensor3::zero(1, 1, 2, f);
    chi.set(0, 0, 0, f.one());
    let mut dot = Tensor3::zero(1, 1, 1, f);
    dot.set(0, 0, 0, f.one());
    let d = ExtendingDatum::new(
        a,
        1,
        Tensor3::zero(2, 1, 1, f),
        Tensor3::zero(1, 2, 1, f),
        Tensor3::zero(1, 2, 2, f),
        Tensor3::zero(2, 1, 2, f),
        chi,
        dot,
    )
    .unwrap();
    let verdict = validate_extending_structure(&d);
    assert!(verdict.has_law("ext7"));
    assert!(verdict.has_law("ext8"));
    assert!(!verdict.has_law("ext9"));
    assert!(!verdict.has_law("ext10"));
    assert!(!check_perm(&unified_product_unchecked(&d).algebra).is_ok());
}

/// Datum equivalence ⇔ the induced map φ is multiplicative: positive
/// instances via transport, negative via perturbation.
#[test]
fn datum_equivalence_matches_morphism_check() {
    let mut rng = rng(0x5eed_0002);
    let f = gf(3);
    let algebras = census_algebras(2, 3);
    let mut positive = 0;
    let mut tried = 0;
    while positive < 60 && tried < 4000 {
        tried += 1;
        let a = &algebras[rng.random_range(0..algebras.len())];
        let d = random_datum(&mut rng, a, 1, 3);
        if !validate_extending_structure(&d).is_ok() {
            continue;
        }
        let pair = EquivalencePair {
            lambda: random_matrix(&mut rng, 2, 1, f, 3),
            rho: random_invertible(&mut rng, 1, f, 3),
        };
        let d2 = transport_datum(&d, &pair).unwrap();
        // Transported datum of a valid datum is valid, and the uc laws hold.
        assert!(validate_extending_structure(&d2).is_ok());
        let verdict = check_datum_equivalence(&d, &d2, &pair, EquivalenceMode::Equivalent).unwrap();
        assert!(verdict.is_ok());
        let phi = equivalence_morphism(&d, &d2, &pair).unwrap();
        assert!(check_morphism(&phi).is_ok());
        positive += 1;

        // Perturb χ' to break uc4; both routes must now fail together.
        let mut chi = d2.chi.clone();
        let bump = chi.get(0, 0, 0).add_ref(&f.one());
        chi.set(0, 0, 0, bump);
        let d3 = ExtendingDatum::new(
            d2.a.clone(),
            d2.dim_v,
            d2.br.clone(),
            d2.bl.clone(),
            d2.tr.clone(),
            d2.tl.clone(),
            chi,
            d2.dot.clone(),
        )
        .unwrap();
        let verdict = check_datum_equivalence(&d, &d3, &pair, EquivalenceMode::Equivalent).unwrap();
        assert!(verdict.has_law("uc4"));
        let phi = equivalence_morphism(&d, &d3, &pair).unwrap();
        assert!(!check_morphism(&phi).is_ok());
    }
    assert!(positive >= 60, "only {positive} positive instances in {tried} draws");
}

/// Identity witness: every datum is cohomologous to itself via (0, id).
#[test]
fn identity_witness_is_cohomologous() {
    let f = FieldSpec::Rationals;
    let a = class_i(f);
    let d = ExtendingDatum::zero(a, 2);
    let pair = EquivalencePair {
        lambda: permlab_core::Matrix::zero(2, 2, f),
        rho: permlab_core::Matrix::identity(2, f),
    };
    assert!(check_datum_equivalence(&d, &d, &pair, EquivalenceMode::Cohomologous)
        .unwrap()
        .is_ok());
}

/// Matched-pair validity ⇔ the bicrossed product is perm, over 500 random
/// action tuples on census algebras.
#[test]
fn matched_pair_agreement_gf2() {
    let mut rng = rng(0x5eed_0003);
    let f = gf(2);
    let algebras = census_algebras(2, 2);
    let singles = census_algebras(1, 2);
    for _ in 0..500 {
        let a = if rng.random_bool(0.5) {
            algebras[rng.random_range(0..algebras.len())].clone()
        } else {
            singles[rng.random_range(0..singles.len())].clone()
        };
        let v = if rng.random_bool(0.5) {
            algebras[rng.random_range(0..algebras.len())].clone()
        } else {
            singles[rng.random_range(0..singles.len())].clone()
        };
        let (n, m) = (a.dim(), v.dim());
        let mp = MatchedPair::new(
            a,
            v,
            random_tensor3(&mut rng, (n, m, m), f, 2),
            random_tensor3(&mut rng, (m, n, m), f, 2),
            random_tensor3(&mut rng, (m, n, n), f, 2),
            random_tensor3(&mut rng, (n, m, n), f, 2),
        )
        .unwrap();
        let validator = validate_matched_pair(&mp).is_ok();
        let direct = check_perm(&bicrossed_product_unchecked(&mp).algebra).is_ok();
        assert_eq!(validator, direct);
    }
}

/// Non-abelian cocycle validator ⇔ crossed-product perm check: exhaustive at
/// (1,1) over GF(2), randomized at (2,1) and (1,2).
#[test]
fn cocycle_validator_agreement() {
    let f = gf(2);
    let singles = census_algebras(1, 2);
    for a in &singles {
        for b in &singles {
            let mut flat = vec![0u64; 3];
            loop {
                let lift = |v: u64| {
                    let mut t = Tensor3::zero(1, 1, 1, f);
                    t.set(0, 0, 0, f.from_i64(v as i64));
                    t
                };
                let c = NonAbelianCocycle::new(
                    a.clone(),
                    b.clone(),
                    lift(flat[0]),
                    lift(flat[1]),
                    lift(flat[2]),
                )
                .unwrap();
                let (validator, direct) = cocycle_agreement(&c);
                assert_eq!(validator, direct, "at {flat:?}");
                if !next_vector(&mut flat, 2) {
                    break;
                }
            }
        }
    }

    let mut rng = rng(0x5eed_0004);
    let doubles = census_algebras(2, 2);
    for trial in 0..500 {
        let (a, b) = if trial % 2 == 0 {
            (
                doubles[rng.random_range(0..doubles.len())].clone(),
                singles[rng.random_range(0..singles.len())].clone(),
            )
        } else {
            (
                singles[rng.random_range(0..singles.len())].clone(),
                doubles[rng.random_range(0..doubles.len())].clone(),
            )
        };
        let (na, nb) = (a.dim(), b.dim());
        let c = NonAbelianCocycle::new(
            a,
            b,
            random_tensor3(&mut rng, (nb, na, na), f, 2),
            random_tensor3(&mut rng, (na, nb, na), f, 2),
            random_tensor3(&mut rng, (nb, nb, na), f, 2),
        )
        .unwrap();
        let (validator, direct) = cocycle_agreement(&c);
        assert_eq!(validator, direct);
    }
}

/// Coalgebra condition ⇔ the dual multiplication is perm, for every Δ tensor
/// over GF(2) on the class-(i) algebra (exhaustive: 2^8 candidates).
#[test]
fn coalgebra_condition_matches_dual_perm_check() {
    let f = gf(2);
    let a = class_i(f);
    let mut flat = vec![0u64; 8];
    loop {
        let delta = permlab_core::bialg::Comultiplication::new(
            a.clone(),
            Tensor3::from_fn(2, 2, 2, f, |i, j, k| {
                f.from_i64(flat[(i * 2 + j) * 2 + k] as i64)
            }),
        )
        .unwrap();
        let coalg = check_coalgebra(&delta).is_ok();
        let dual_perm = check_perm(&dual_algebra(&delta)).is_ok();
        assert_eq!(coalg, dual_perm, "at {flat:?}");
        if !next_vector(&mut flat, 2) {
            break;
        }
    }
}

/// matc1–matc2 ⇔ matched-pair validity of the six dual actions ⇔ the double
/// is perm, for every perm product on the dual over GF(2). The base algebra
/// and the dual table both range over the census.
#[test]
fn matched_pair_dual_agreement() {
    let algebras = census_algebras(2, 2);
    for a in &algebras {
        for dual in &algebras {
            let listed = check_matched_pair_dual(a, dual).unwrap().is_ok();
            let mp = dual_matched_pair(a, dual).unwrap();
            let via_datum = validate_matched_pair(&mp).is_ok();
            let direct = check_perm(&bicrossed_product_unchecked(&mp).algebra).is_ok();
            assert_eq!(via_datum, direct);
            assert_eq!(listed, direct, "matc families disagree with the double");
        }
    }
}

/// Prop-style iff chain for coboundary tensors over GF(3): cob families match
/// the bialg families of the coboundary Δ, the P/Q/S/T/M conditions match the
/// coalgebra verdict, and symmetric S-equation solutions produce bialgebras.
#[test]
fn coboundary_iff_chain_gf3() {
    let algebras = census_algebras(2, 3);
    let f = gf(3);
    for a in &algebras {
        let mut flat = vec![0u64; 4];
        loop {
            let r = Tensor2::from_fn(2, 2, f, |i, j| f.from_i64(flat[i * 2 + j] as i64));
            let rt = RTensor::new(a.clone(), r).unwrap();
            let delta = coboundary_delta(&rt);
            let bialg = check_perm_bialgebra(&delta).unwrap();
            let cob = check_cob_conditions(&rt);

            let bialg1_ok = !bialg.has_law("bialg1");
            let cob12_ok = !cob.has_law("cob1") && !cob.has_law("cob2");
            assert_eq!(bialg1_ok, cob12_ok, "cob1/cob2 vs bialg1 at {flat:?}");

            let bialg2_ok = !bialg.has_law("bialg2");
            let cob34_ok = !cob.has_law("cob3") && !cob.has_law("cob4");
            assert_eq!(bialg2_ok, cob34_ok, "cob3/cob4 vs bialg2 at {flat:?}");

            let coalg_ok = check_coalgebra(&delta).is_ok();
            let pqstm_ok = check_dual_coalgebra_conditions(&rt).is_ok();
            assert_eq!(coalg_ok, pqstm_ok, "coalg1/coalg2 vs coalg at {flat:?}");

            if rt.is_symmetric() && permlab_core::bialg::is_s_solution(&rt) {
                assert!(bialg.is_ok(), "symmetric solution must give a bialgebra");
            }
            if !next_vector(&mut flat, 3) {
                break;
            }
        }
    }
}
