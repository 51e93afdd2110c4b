//! The strict JSON definition-file format shared with the CLI.
//!
//! A definition file describes one algebra (field, dimension, basis labels,
//! nonzero products) plus at most one payload block per object kind: an
//! extending datum, a flag datum, a cocycle, a comultiplication, an r-tensor,
//! a bilinear form, a representation, a linear map, an extension or an
//! automorphism pair. Scalars are strings: `a` or `a/b` over the rationals,
//! a decimal residue in `[0, p)` over GF(p). Unknown keys are fatal so that
//! fixture typos cannot silently change what a file means. Emission is
//! canonical: parse ∘ emit is the identity byte for byte.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::bialg::{Comultiplication, RTensor};
use crate::error::{Error, Result};
use crate::ext::ExtendingDatum;
use crate::flag::FlagDatum;
use crate::kernel::matrix::Matrix;
use crate::kernel::scalar::{FieldSpec, Scalar};
use crate::kernel::tensor::{Tensor2, Tensor3};
use crate::nonab::{AutPair, NonAbelianCocycle};
use crate::perm::{BilinearForm, PermAlgebra, Representation};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDef {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDef {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, String>,
}

/// A nested algebra (shares the field of the enclosing file).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDef {
    pub dim: usize,
    pub basis: Vec<String>,
    pub products: Vec<ProductDef>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumDef {
    pub dim_v: usize,
    pub br: Vec<Vec<Vec<String>>>,
    pub bl: Vec<Vec<Vec<String>>>,
    pub tr: Vec<Vec<Vec<String>>>,
    pub tl: Vec<Vec<Vec<String>>>,
    pub chi: Vec<Vec<Vec<String>>>,
    pub dot: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagDef {
    pub h: Vec<String>,
    pub g: Vec<String>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<String>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    pub a_tilde: Vec<String>,
    pub k_tilde: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDef {
    pub b: AlgebraDef,
    pub tr: Vec<Vec<Vec<String>>>,
    pub tl: Vec<Vec<Vec<String>>>,
    pub chi: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDef {
    pub dim: usize,
    pub l: Vec<Vec<Vec<String>>>,
    pub r: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDef {
    pub target: AlgebraDef,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDef {
    pub a_indices: Vec<usize>,
    pub section: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDef {
    pub beta: Vec<Vec<String>>,
    pub gamma: Vec<Vec<String>>,
}

/// The top-level document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub field: FieldDef,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductDef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumDef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagDef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleDef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepDef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<MapDef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionDef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairDef>,
}

impl DefinitionFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadScalar(format!("parse error: {e}")))
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        match self.field.kind.as_str() {
            "rational" => Ok(FieldSpec::Rationals),
            "prime" => {
                let p = self
                    .field
                    .p
                    .ok_or_else(|| Error::BadScalar("prime field needs p".into()))?;
                FieldSpec::prime(p)
            }
            other => Err(Error::UnsupportedField(format!("unknown field kind {other:?}"))),
        }
    }

    /// The main algebra of the file.
    pub fn algebra(&self) -> Result<PermAlgebra> {
        let f = self.field_spec()?;
        build_algebra(f, self.dim, &self.basis, &self.products)
    }

    pub fn extending_datum(&self) -> Result<ExtendingDatum> {
        let block = self
            .datum
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing datum block".into()))?;
        let a = self.algebra()?;
        let f = a.field();
        let n = a.dim();
        let m = block.dim_v;
        ExtendingDatum::new(
            a,
            m,
            tensor3(f, (n, m, m), &block.br, "br")?,
            tensor3(f, (m, n, m), &block.bl, "bl")?,
            tensor3(f, (m, n, n), &block.tr, "tr")?,
            tensor3(f, (n, m, n), &block.tl, "tl")?,
            tensor3(f, (m, m, n), &block.chi, "chi")?,
            tensor3(f, (m, m, m), &block.dot, "dot")?,
        )
    }

    pub fn flag_datum(&self) -> Result<FlagDatum> {
        let block = self
            .flag
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing flag block".into()))?;
        let a = self.algebra()?;
        let f = a.field();
        FlagDatum::new(
            a,
            scalars(f, &block.h)?,
            scalars(f, &block.g)?,
            matrix(f, &block.d, "D")?,
            matrix(f, &block.t, "T")?,
            scalars(f, &block.a_tilde)?,
            f.parse(&block.k_tilde)?,
        )
    }

    pub fn nonabelian_cocycle(&self) -> Result<NonAbelianCocycle> {
        let block = self
            .cocycle
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing cocycle block".into()))?;
        let a = self.algebra()?;
        let f = a.field();
        let b = build_algebra(f, block.b.dim, &block.b.basis, &block.b.products)?;
        let (na, nb) = (a.dim(), b.dim());
        NonAbelianCocycle::new(
            a,
            b,
            tensor3(f, (nb, na, na), &block.tr, "tr")?,
            tensor3(f, (na, nb, na), &block.tl, "tl")?,
            tensor3(f, (nb, nb, na), &block.chi, "chi")?,
        )
    }

    pub fn comultiplication(&self) -> Result<Comultiplication> {
        let block = self
            .delta
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing delta block".into()))?;
        let a = self.algebra()?;
        let f = a.field();
        let n = a.dim();
        let delta = tensor3(f, (n, n, n), block, "delta")?;
        Comultiplication::new(a, delta)
    }

    pub fn r_tensor(&self) -> Result<RTensor> {
        let block = self
            .r
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing r block".into()))?;
        let a = self.algebra()?;
        let f = a.field();
        let r = tensor2(f, (a.dim(), a.dim()), block, "r")?;
        RTensor::new(a, r)
    }

    pub fn bilinear_form(&self) -> Result<BilinearForm> {
        let block = self
            .form
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing form block".into()))?;
        let f = self.field_spec()?;
        Ok(BilinearForm::new(tensor2(f, (self.dim, self.dim), block, "form")?))
    }

    pub fn representation(&self) -> Result<Representation> {
        let block = self
            .rep
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing rep block".into()))?;
        let a = self.algebra()?;
        let f = a.field();
        let n = a.dim();
        let m = block.dim;
        if block.l.len() != n || block.r.len() != n {
            return Err(Error::DimensionMismatch(
                "rep needs one matrix per basis element".into(),
            ));
        }
        let l = block
            .l
            .iter()
            .map(|rows| matrix_sized(f, rows, m, m, "rep.l"))
            .collect::<Result<Vec<_>>>()?;
        let r = block
            .r
            .iter()
            .map(|rows| matrix_sized(f, rows, m, m, "rep.r"))
            .collect::<Result<Vec<_>>>()?;
        Representation::new(a, m, l, r)
    }

    pub fn linear_map(&self) -> Result<(PermAlgebra, PermAlgebra, Matrix)> {
        let block = self
            .map
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing map block".into()))?;
        let source = self.algebra()?;
        let f = source.field();
        let target = build_algebra(f, block.target.dim, &block.target.basis, &block.target.products)?;
        let m = matrix_sized(f, &block.matrix, target.dim(), source.dim(), "map.matrix")?;
        Ok((source, target, m))
    }

    pub fn extension_parts(&self) -> Result<(Vec<usize>, Matrix)> {
        let block = self
            .extension
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing extension block".into()))?;
        let f = self.field_spec()?;
        let nb = self.dim - block.a_indices.len();
        let section = matrix_sized(f, &block.section, self.dim, nb, "extension.section")?;
        Ok((block.a_indices.clone(), section))
    }

    pub fn aut_pair(&self, dim_a: usize, dim_b: usize) -> Result<AutPair> {
        let block = self
            .pair
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("missing pair block".into()))?;
        let f = self.field_spec()?;
        Ok(AutPair {
            beta: matrix_sized(f, &block.beta, dim_a, dim_a, "pair.beta")?,
            gamma: matrix_sized(f, &block.gamma, dim_b, dim_b, "pair.gamma")?,
        })
    }
}

fn build_algebra(
    f: FieldSpec,
    dim: usize,
    basis: &[String],
    products: &[ProductDef],
) -> Result<PermAlgebra> {
    if basis.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "dim is {dim} but there are {} basis labels",
            basis.len()
        )));
    }
    let index_of = |label: &str| -> Result<usize> {
        basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| Error::BadScalar(format!("unknown basis label {label:?}")))
    };
    let mut sc = Tensor3::zero(dim, dim, dim, f);
    for prod in products {
        let i = index_of(&prod.left)?;
        let j = index_of(&prod.right)?;
        for (label, coeff) in &prod.result {
            let k = index_of(label)?;
            sc.set(i, j, k, f.parse(coeff)?);
        }
    }
    PermAlgebra::new(f, basis.to_vec(), sc)
}

fn scalars(f: FieldSpec, items: &[String]) -> Result<Vec<Scalar>> {
    items.iter().map(|s| f.parse(s)).collect()
}

fn matrix(f: FieldSpec, rows: &[Vec<String>], name: &str) -> Result<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    matrix_sized(f, rows, r, c, name)
}

fn matrix_sized(
    f: FieldSpec,
    rows: &[Vec<String>],
    expect_rows: usize,
    expect_cols: usize,
    name: &str,
) -> Result<Matrix> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be {expect_rows}x{expect_cols}"
        )));
    }
    let mut m = Matrix::zero(expect_rows, expect_cols, f);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, f.parse(s)?);
        }
    }
    Ok(m)
}

fn tensor2(
    f: FieldSpec,
    dims: (usize, usize),
    rows: &[Vec<String>],
    name: &str,
) -> Result<Tensor2> {
    if rows.len() != dims.0 || rows.iter().any(|r| r.len() != dims.1) {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be {}x{}",
            dims.0, dims.1
        )));
    }
    let mut t = Tensor2::zero(dims.0, dims.1, f);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            t.set(i, j, f.parse(s)?);
        }
    }
    Ok(t)
}

fn tensor3(
    f: FieldSpec,
    dims: (usize, usize, usize),
    cube: &[Vec<Vec<String>>],
    name: &str,
) -> Result<Tensor3> {
    if cube.len() != dims.0
        || cube.iter().any(|p| p.len() != dims.1)
        || cube.iter().any(|p| p.iter().any(|r| r.len() != dims.2))
    {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be {}x{}x{}",
            dims.0, dims.1, dims.2
        )));
    }
    let mut t = Tensor3::zero(dims.0, dims.1, dims.2, f);
    for (i, plane) in cube.iter().enumerate() {
        for (j, row) in plane.iter().enumerate() {
            for (k, s) in row.iter().enumerate() {
                t.set(i, j, k, f.parse(s)?);
            }
        }
    }
    Ok(t)
}

/// Canonical emission of an algebra as a definition file: products sorted by
/// (left index, right index), zero entries omitted, scalars rendered in
/// canonical form. Parsing the output reproduces the algebra exactly.
pub fn emit_algebra(alg: &PermAlgebra, description: Option<String>) -> DefinitionFile {
    let n = alg.dim();
    let mut products = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let result: BTreeMap<String, String> = alg
                .mul_basis(i, j)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (alg.basis()[k].clone(), v.render()))
                .collect();
            if !result.is_empty() {
                products.push(ProductDef {
                    left: alg.basis()[i].clone(),
                    right: alg.basis()[j].clone(),
                    result,
                });
            }
        }
    }
    DefinitionFile {
        description,
        field: match alg.field() {
            FieldSpec::Rationals => FieldDef { kind: "rational".into(), p: None },
            FieldSpec::PrimeField(p) => FieldDef { kind: "prime".into(), p: Some(p) },
        },
        dim: n,
        basis: alg.basis().to_vec(),
        products,
        datum: None,
        flag: None,
        cocycle: None,
        delta: None,
        r: None,
        form: None,
        rep: None,
        map: None,
        extension: None,
        pair: None,
    }
}

/// Deterministic pretty-printed JSON for a definition file.
pub fn render(file: &DefinitionFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("serializable");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::check_perm;

    const CLASS_I: &str = r#"{
  "field": { "kind": "rational" },
  "dim": 2,
  "basis": ["e1", "e2"],
  "products": [
    { "left": "e1", "right": "e1", "result": { "e1": "1" } },
    { "left": "e2", "right": "e1", "result": { "e2": "1" } }
  ]
}"#;

    #[test]
    fn parses_and_checks_class_i() {
        let file = DefinitionFile::parse(CLASS_I).unwrap();
        let alg = file.algebra().unwrap();
        assert_eq!(alg.dim(), 2);
        assert!(check_perm(&alg).is_ok());
    }

    #[test]
    fn unknown_keys_are_fatal() {
        let text = CLASS_I.replace("\"products\"", "\"produts\"");
        assert!(DefinitionFile::parse(&text).is_err());
    }

    #[test]
    fn out_of_range_residues_are_rejected() {
        let text = r#"{
  "field": { "kind": "prime", "p": 3 },
  "dim": 1,
  "basis": ["e1"],
  "products": [ { "left": "e1", "right": "e1", "result": { "e1": "5" } } ]
}"#;
        let file = DefinitionFile::parse(text).unwrap();
        assert!(file.algebra().is_err());
    }

    #[test]
    fn emit_round_trips_byte_for_byte() {
        let file = DefinitionFile::parse(CLASS_I).unwrap();
        let alg = file.algebra().unwrap();
        let emitted = render(&emit_algebra(&alg, None));
        let reparsed = DefinitionFile::parse(&emitted).unwrap();
        assert_eq!(
            reparsed.algebra().unwrap().structure_constants(),
            alg.structure_constants()
        );
        assert_eq!(render(&emit_algebra(&reparsed.algebra().unwrap(), None)), emitted);
    }

    #[test]
    fn composite_modulus_is_rejected() {
        let text = r#"{
  "field": { "kind": "prime", "p": 6 },
  "dim": 0,
  "basis": []
}"#;
        let file = DefinitionFile::parse(text).unwrap();
        assert!(matches!(file.field_spec(), Err(Error::NotPrime(6))));
    }
}
