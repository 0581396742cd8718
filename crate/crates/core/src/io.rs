//! JSON formats: scalars, matrices, polynomials, group spec files and candidate files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructions::TriangleFamily;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Scalar};
use crate::group::{FiniteMatrixGroup, MatrixConvention};
use crate::matrix::Matrix;
use crate::poly::MultiPoly;

pub const SCHEMA_VERSION: u32 = 1;
pub use crate::group::DEFAULT_CLOSURE_CAP;

/// Integers for prime fields, coefficient arrays for extensions, `"a/b"` for rationals.
pub fn scalar_to_json(f: &Field, a: &Scalar) -> Value {
    match f.finite() {
        Some(ff) if ff.degree() == 1 => json!(a.as_fin()),
        Some(ff) => json!(ff.coefficients(a.as_fin())),
        None => json!(f.format(a)),
    }
}

pub fn scalar_from_json(f: &Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            n.as_i64().map(|n| f.from_i64(n)).ok_or_else(|| Error::Parse(format!("{n} is not an integer")))
        }
        Value::String(s) => f.parse_rational(s),
        Value::Array(digits) => {
            let ff = f.finite().ok_or_else(|| Error::Parse("coefficient array over the rationals".into()))?;
            let digits = digits
                .iter()
                .map(|d| d.as_u64().filter(|&d| d < ff.characteristic() as u64).map(|d| d as u32))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| Error::Parse(format!("bad coefficient array {v}")))?;
            Ok(Scalar::Fin(ff.from_coefficients(&digits)?))
        }
        _ => Err(Error::Parse(format!("{v} is not a scalar"))),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(|a| scalar_to_json(m.field(), a)).collect())).collect(),
    )
}

pub fn matrix_from_json(f: &Field, v: &Value) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(|a| scalar_from_json(f, a))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(f, rows)
}

pub fn poly_to_json(p: &MultiPoly) -> Value {
    json!({
        "terms": p
            .terms()
            .into_iter()
            .map(|(e, c)| json!({ "exps": e, "coef": scalar_to_json(p.field(), c) }))
            .collect::<Vec<_>>()
    })
}

pub fn poly_from_json(f: &Field, nvars: usize, v: &Value) -> Result<MultiPoly> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("polynomial needs a \"terms\" array".into()))?;
    let terms = terms
        .iter()
        .map(|t| {
            let exps: Vec<u32> = serde_json::from_value(t.get("exps").cloned().unwrap_or(Value::Null))
                .map_err(|e| Error::Parse(format!("bad exponent vector: {e}")))?;
            let coef = scalar_from_json(f, t.get("coef").unwrap_or(&Value::Null))?;
            Ok((exps, coef))
        })
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(f, nvars, terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDescriptor {
    Named(String),
    Finite {
        p: u32,
        #[serde(default = "one")]
        k: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
}

fn one() -> u32 {
    1
}

impl FieldDescriptor {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self {
            FieldDescriptor::Named(s) if s == "Q" => Ok(FieldSpec::Rationals),
            FieldDescriptor::Named(s) => {
                Err(Error::InvalidField(format!("unknown field {s:?}; use \"Q\" or {{p, k}}")))
            }
            FieldDescriptor::Finite { p, k, modulus } => {
                Ok(FieldSpec::Finite { p: *p, k: *k, modulus: modulus.clone() })
            }
        }
    }

    pub fn from_spec(spec: &FieldSpec) -> FieldDescriptor {
        match spec {
            FieldSpec::Rationals => FieldDescriptor::Named("Q".into()),
            FieldSpec::Finite { p, k, modulus } => FieldDescriptor::Finite { p: *p, k: *k, modulus: modulus.clone() },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecFile {
    #[serde(default = "one")]
    pub schema_version: u32,
    pub field: FieldDescriptor,
    pub dimension: usize,
    #[serde(default)]
    pub matrix_convention: MatrixConvention,
    pub generators: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GroupSpecFile {
    pub fn from_group(g: &FiniteMatrixGroup, label: Option<&str>) -> GroupSpecFile {
        GroupSpecFile {
            schema_version: SCHEMA_VERSION,
            field: FieldDescriptor::from_spec(&g.field().spec()),
            dimension: g.dim(),
            matrix_convention: MatrixConvention::Point,
            generators: g.generators().iter().map(|&i| matrix_to_json(g.element(i))).collect(),
            label: label.map(str::to_owned),
        }
    }

    pub fn to_group(&self, cap: usize) -> Result<FiniteMatrixGroup> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema_version {}", self.schema_version)));
        }
        let field = Field::make(&self.field.to_spec()?)?;
        let gens = self.generators.iter().map(|m| matrix_from_json(&field, m)).collect::<Result<Vec<_>>>()?;
        FiniteMatrixGroup::from_convention(&field, self.dimension, &gens, self.matrix_convention, cap)
    }
}

/// Line of the first occurrence of `"key"` in `text`, 1-based.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

fn with_line(text: &str, key: &str, e: Error) -> Error {
    match line_of(text, key) {
        Some(line) => Error::Parse(format!("line {line} ({key}): {e}")),
        None => Error::Parse(format!("{key}: {e}")),
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Parses and closes a group; errors carry the line of the offending block.
pub fn load_group_str(text: &str, cap: usize) -> Result<(GroupSpecFile, FiniteMatrixGroup)> {
    let spec: GroupSpecFile = parse_json(text)?;
    let field = spec.field.to_spec().and_then(|s| Field::make(&s)).map_err(|e| with_line(text, "field", e))?;
    let gens = spec
        .generators
        .iter()
        .map(|m| matrix_from_json(&field, m))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| with_line(text, "generators", e))?;
    let g = FiniteMatrixGroup::from_convention(&field, spec.dimension, &gens, spec.matrix_convention, cap).map_err(
        |e| match e {
            Error::ClosureCap(_) => e,
            e => with_line(text, "generators", e),
        },
    )?;
    Ok((spec, g))
}

pub fn load_group(path: &std::path::Path, cap: usize) -> Result<(GroupSpecFile, FiniteMatrixGroup)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    load_group_str(&text, cap).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        e => e,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangleEntry {
    pub i: usize,
    pub j: usize,
    pub poly: Value,
}

/// Either a plain candidate list or a triangle whose diagonal sums are the candidates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidatesFile {
    #[serde(default = "one")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle: Option<Vec<TriangleEntry>>,
}

impl CandidatesFile {
    pub fn from_polys(polys: &[MultiPoly]) -> CandidatesFile {
        CandidatesFile {
            schema_version: SCHEMA_VERSION,
            candidates: polys.iter().map(poly_to_json).collect(),
            triangle: None,
        }
    }

    pub fn polys(&self, g: &FiniteMatrixGroup) -> Result<Vec<MultiPoly>> {
        self.candidates.iter().map(|v| poly_from_json(g.field(), g.dim(), v)).collect()
    }

    pub fn triangle_family(&self, g: &FiniteMatrixGroup) -> Result<Option<TriangleFamily>> {
        let Some(entries) = &self.triangle else {
            return Ok(None);
        };
        let n = entries.iter().map(|e| e.j).max().unwrap_or(0);
        let mut map = BTreeMap::new();
        for e in entries {
            if map.insert((e.i, e.j), poly_from_json(g.field(), g.dim(), &e.poly)?).is_some() {
                return Err(Error::Parse(format!("duplicate triangle entry ({}, {})", e.i, e.j)));
            }
        }
        Ok(Some(TriangleFamily::new(n, map)?))
    }
}

pub fn load_candidates_str(text: &str) -> Result<CandidatesFile> {
    let c: CandidatesFile = parse_json(text)?;
    if c.schema_version != SCHEMA_VERSION {
        return Err(with_line(
            text,
            "schema_version",
            Error::Parse(format!("unsupported version {}", c.schema_version)),
        ));
    }
    Ok(c)
}

pub fn load_candidates(path: &std::path::Path) -> Result<CandidatesFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    load_candidates_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::invariants::act;

    #[test]
    fn scalars_round_trip() {
        for f in [Field::prime(5).unwrap(), Field::extension(3, 2).unwrap(), Field::rationals()] {
            let elems = f.elements().unwrap_or_else(|| vec![f.from_ratio(-3, 4).unwrap(), f.from_i64(7), f.zero()]);
            for a in elems {
                assert_eq!(scalar_from_json(&f, &scalar_to_json(&f, &a)).unwrap(), a);
            }
        }
        let q = Field::rationals();
        assert_eq!(scalar_to_json(&q, &q.from_ratio(1, -2).unwrap()), json!("-1/2"));
    }

    #[test]
    fn group_round_trip() {
        for g in [catalog::gl7_f2(), catalog::s3_perm(), catalog::cp_vn(3, 3).unwrap()] {
            let text = serde_json::to_string_pretty(&GroupSpecFile::from_group(&g, Some("x"))).unwrap();
            let (_, h) = load_group_str(&text, DEFAULT_CLOSURE_CAP).unwrap();
            assert_eq!(h.order(), g.order());
            assert_eq!(h.elements(), g.elements());
        }
    }

    #[test]
    fn substitution_file() {
        let text = r#"{
  "field": {"p": 3},
  "dimension": 3,
  "matrix_convention": "substitution",
  "generators": [[[1, 1, 0], [0, 1, 1], [0, 0, 1]]]
}"#;
        let (_, g) = load_group_str(text, 100).unwrap();
        assert_eq!(g.order(), 3);
        let x = |i| MultiPoly::var(g.field(), 3, i);
        assert_eq!(act(&g, g.generators()[0], &x(0)).unwrap(), x(0).add(&x(1)));
    }

    #[test]
    fn diagnostics_name_the_line() {
        let text = "{\n  \"field\": {\"p\": 4},\n  \"dimension\": 1,\n  \"generators\": []\n}";
        let msg = load_group_str(text, 10).unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");
        let text = "{\n  \"field\": \"R\",\n  \"dimension\": 1,\n  \"generators\": []\n}";
        assert!(load_group_str(text, 10).unwrap_err().to_string().contains("line 2"));
        let text = "{\n  \"field\": {\"p\": 3},\n  \"dimension\": 1,\n  \"generators\": [[[1, 2]]],\n}";
        assert!(load_group_str(text, 10).unwrap_err().to_string().contains("line 5"));
    }

    #[test]
    fn candidates_round_trip() {
        let g = catalog::s3_perm();
        let f = g.field().clone();
        let p = MultiPoly::var(&f, 3, 0).pow(2).add(&MultiPoly::var(&f, 3, 2).scale(&f.from_ratio(1, 3).unwrap()));
        let file = CandidatesFile::from_polys(std::slice::from_ref(&p));
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(load_candidates_str(&text).unwrap().polys(&g).unwrap(), vec![p]);
    }
}
