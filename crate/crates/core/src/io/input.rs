//! The input document.
//!
//! ```json
//! {
//!   "p": 2, "q": 3,
//!   "branches": [{ "b": 1, "d": 2 }],
//!   "g": [{ "psi": 1, "z": 0, "c": "1/2" }],
//!   "field_order": 4,
//!   "g_truncation": 4
//! }
//! ```
//!
//! Scalars are integers, rational strings (`"-3/2"`), or `{"coeffs": [...]}`
//! power-basis coefficients over `Q(ζ_M)`. `g`, `field_order` and
//! `g_truncation` are optional; `M` defaults to `lcm(4, δ)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::foliation::{admissibility_check, g_vars, Branch, CuspidalInput, ValidationReport};
use crate::numeric::{Field, Rational};
use crate::poly::{Monomial, MultiPoly};
use crate::CycloScalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalDoc {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Int(i64),
    Text(String),
    Coeffs { coeffs: Vec<RationalDoc> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchDoc {
    pub b: ScalarDoc,
    pub d: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GTermDoc {
    pub psi: u32,
    pub z: u32,
    pub c: ScalarDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub p: u32,
    pub q: u32,
    pub branches: Vec<BranchDoc>,
    #[serde(default)]
    pub g: Vec<GTermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_truncation: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("field_order: unsupported order {order}, must be a positive multiple of {needed}")]
    FieldOrder { order: u32, needed: u32 },
    #[error("inadmissible input:\n{0}")]
    Inadmissible(ValidationReport),
}

fn parse_rational(doc: &RationalDoc, path: &str) -> Result<Rational, InputError> {
    match doc {
        RationalDoc::Int(n) => Ok(Rational::from_integer((*n).into())),
        RationalDoc::Text(s) => {
            let t = s.trim();
            if t.ends_with("/0") {
                return Err(InputError::Field {
                    path: path.into(),
                    message: format!("zero denominator in {s:?}"),
                });
            }
            t.parse::<Rational>().map_err(|_| InputError::Field {
                path: path.into(),
                message: format!("not a rational number: {s:?}"),
            })
        }
    }
}

pub fn parse_scalar(doc: &ScalarDoc, field: &Field, path: &str) -> Result<CycloScalar, InputError> {
    match doc {
        ScalarDoc::Int(n) => Ok(field.from_int(*n)),
        ScalarDoc::Text(s) => Ok(field.from_rational(parse_rational(&RationalDoc::Text(s.clone()), path)?)),
        ScalarDoc::Coeffs { coeffs } => {
            let parts = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| parse_rational(c, &format!("{path}.coeffs[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(field.from_coeffs(parts))
        }
    }
}

/// Builds the input without running the admissibility check.
pub fn build_input(doc: &InputDocument) -> Result<CuspidalInput, InputError> {
    let delta = doc.p.gcd(&doc.q).max(1);
    let needed = 4u32.lcm(&delta);
    let order = doc.field_order.unwrap_or(needed);
    if order == 0 || order % needed != 0 {
        return Err(InputError::FieldOrder { order, needed });
    }
    let field = Field::new(order).map_err(|e| InputError::Field {
        path: "field_order".into(),
        message: e.to_string(),
    })?;
    let branches = doc
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            Ok(Branch {
                b: parse_scalar(&b.b, &field, &format!("branches[{i}].b"))?,
                d: b.d,
            })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let gv = g_vars();
    let terms = doc
        .g
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Ok((
                Monomial(vec![t.psi, t.z]),
                parse_scalar(&t.c, &field, &format!("g[{i}].c"))?,
            ))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let mut input = CuspidalInput {
        p: doc.p,
        q: doc.q,
        branches,
        g: MultiPoly::from_terms(&gv, &field, terms),
        field,
        g_truncation: None,
    };
    if let Some(deg) = doc.g_truncation {
        input.truncate_g(deg);
    }
    Ok(input)
}

pub fn parse_document(text: &str) -> Result<InputDocument, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses and validates an input document.
pub fn parse_input(text: &str) -> Result<CuspidalInput, InputError> {
    let input = build_input(&parse_document(text)?)?;
    let report = admissibility_check(&input);
    if !report.is_admissible() {
        return Err(InputError::Inadmissible(report));
    }
    Ok(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::{CLAUSE_DISTINCT, CLAUSE_PQ};

    #[test]
    fn minimal_document() {
        let input = parse_input(r#"{"p": 2, "q": 3, "branches": [{"b": 1, "d": 2}], "g": []}"#).unwrap();
        assert_eq!((input.p, input.q, input.field.order()), (2, 3, 4));
        assert!(input.g.is_zero());
    }

    #[test]
    fn scalar_forms() {
        let k = Field::new(4).unwrap();
        let i = parse_scalar(
            &ScalarDoc::Coeffs {
                coeffs: vec![RationalDoc::Int(0), RationalDoc::Text("1".into())],
            },
            &k,
            "x",
        )
        .unwrap();
        assert_eq!(i, k.zeta());
        let half = parse_scalar(&ScalarDoc::Text("-1/2".into()), &k, "x").unwrap();
        assert_eq!(half, k.from_rational(crate::numeric::rat(-1, 2)));
        let err = parse_scalar(&ScalarDoc::Text("abc".into()), &k, "branches[0].b").unwrap_err();
        assert!(err.to_string().starts_with("branches[0].b"));
    }

    #[test]
    fn rejections() {
        match parse_input(r#"{"p": 1, "q": 3, "branches": [{"b": 1, "d": 2}]}"#) {
            Err(InputError::Inadmissible(r)) => assert!(r.violations.iter().any(|v| v.clause == CLAUSE_PQ)),
            other => panic!("{other:?}"),
        }
        match parse_input(r#"{"p": 2, "q": 4, "branches": [{"b": 1, "d": 2}, {"b": -1, "d": 2}]}"#) {
            Err(InputError::Inadmissible(r)) => assert!(r.violations.iter().any(|v| v.clause == CLAUSE_DISTINCT)),
            other => panic!("{other:?}"),
        }
        let err = parse_input("{\"p\": 2,\n \"q\": \"x\"}").unwrap_err();
        assert!(matches!(err, InputError::Syntax { line: 2, .. }), "{err}");
        let err = parse_input(r#"{"p": 2, "q": 4, "branches": [{"b": 1, "d": 2}], "field_order": 6}"#).unwrap_err();
        assert!(matches!(err, InputError::FieldOrder { order: 6, needed: 4 }));
    }
}
