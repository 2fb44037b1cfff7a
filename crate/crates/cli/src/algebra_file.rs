//! The JSON algebra description accepted on the command line.
//!
//! ```json
//! {
//!   "name": "sl2-scaled-p5",
//!   "p": 5,
//!   "rank": 3,
//!   "brackets": [{"i": 0, "j": 1, "c": [-10, 0, 0]}, ...],
//!   "elements": [{"name": "e", "coords": [1, 0, 0]}],
//!   "automorphisms": [{"name": "swap", "matrix": [[0, 0, 1], [0, -1, 0], [1, 0, 0]]}]
//! }
//! ```
//!
//! Only brackets `[e_i, e_j]` with `i < j` are listed; the rest follow by
//! antisymmetry. Automorphism matrices have the images of the basis vectors as
//! columns.

use std::collections::BTreeSet;
use std::path::Path;

use orbitzeta_core::arith::PrimeContext;
use orbitzeta_core::liealg::LieAlgebraSpec;
use orbitzeta_core::matnf::IntMatrix;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub c: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedElement {
    pub name: String,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraFile {
    pub name: String,
    pub p: i64,
    pub rank: usize,
    pub brackets: Vec<Bracket>,
    pub elements: Vec<NamedElement>,
    pub automorphisms: Vec<NamedMatrix>,
}

impl AlgebraFile {
    pub fn from_path(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, ParseError> {
        let obj = value
            .as_object()
            .ok_or_else(|| schema("<root>", "expected an object"))?;
        const KNOWN: [&str; 6] = ["name", "p", "rank", "brackets", "elements", "automorphisms"];
        if let Some(extra) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(schema(extra.clone(), "unknown field"));
        }
        let name = required(obj, "name")?
            .as_str()
            .ok_or_else(|| schema("name", "expected a string"))?
            .to_string();
        let p = int(required(obj, "p")?, "p")?;
        PrimeContext::new(p, 1).map_err(|e| schema("p", e.to_string()))?;
        let rank = int(required(obj, "rank")?, "rank")?;
        if rank < 1 {
            return Err(schema("rank", "must be at least 1"));
        }
        let rank = rank as usize;

        let mut seen = BTreeSet::new();
        let mut brackets = Vec::new();
        for (idx, b) in array(required(obj, "brackets")?, "brackets")?.iter().enumerate() {
            let at = format!("brackets[{idx}]");
            let b = b
                .as_object()
                .ok_or_else(|| schema(&at, "expected an object"))?;
            let i = index(b, &at, "i", rank)?;
            let j = index(b, &at, "j", rank)?;
            if i >= j {
                return Err(schema(format!("{at}.j"), format!("need i < j, got i = {i}, j = {j}")));
            }
            if !seen.insert((i, j)) {
                return Err(schema(&at, format!("duplicate bracket ({i}, {j})")));
            }
            let c = int_vector(required_in(b, &at, "c")?, &format!("{at}.c"), rank)?;
            brackets.push(Bracket { i, j, c });
        }

        let mut elements = Vec::new();
        let mut names = BTreeSet::new();
        if let Some(list) = obj.get("elements") {
            for (idx, e) in array(list, "elements")?.iter().enumerate() {
                let at = format!("elements[{idx}]");
                let e = e.as_object().ok_or_else(|| schema(&at, "expected an object"))?;
                let name = entry_name(e, &at)?;
                if !names.insert(name.clone()) {
                    return Err(schema(format!("{at}.name"), format!("duplicate element `{name}`")));
                }
                let coords = int_vector(required_in(e, &at, "coords")?, &format!("{at}.coords"), rank)?;
                elements.push(NamedElement { name, coords });
            }
        }

        let mut automorphisms = Vec::new();
        let mut names = BTreeSet::new();
        if let Some(list) = obj.get("automorphisms") {
            for (idx, a) in array(list, "automorphisms")?.iter().enumerate() {
                let at = format!("automorphisms[{idx}]");
                let a = a.as_object().ok_or_else(|| schema(&at, "expected an object"))?;
                let name = entry_name(a, &at)?;
                if !names.insert(name.clone()) {
                    return Err(schema(format!("{at}.name"), format!("duplicate automorphism `{name}`")));
                }
                let field = format!("{at}.matrix");
                let rows = array(required_in(a, &at, "matrix")?, &field)?;
                if rows.len() != rank {
                    return Err(schema(&field, format!("expected {rank} rows, got {}", rows.len())));
                }
                let matrix = rows
                    .iter()
                    .enumerate()
                    .map(|(r, row)| int_vector(row, &format!("{field}[{r}]"), rank))
                    .collect::<Result<Vec<_>, _>>()?;
                automorphisms.push(NamedMatrix { name, matrix });
            }
        }

        Ok(Self {
            name,
            p,
            rank,
            brackets,
            elements,
            automorphisms,
        })
    }

    /// Canonical JSON: sorted keys, two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("algebra files serialize");
        let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
        s.push('\n');
        s
    }

    /// The structure constants alone, in canonical form; the cache key is
    /// derived from this.
    pub fn structure_json(&self) -> String {
        let mut brackets = self.brackets.clone();
        brackets.sort_by_key(|b| (b.i, b.j));
        brackets.retain(|b| b.c.iter().any(|&x| x != 0));
        serde_json::to_string(&serde_json::json!({
            "p": self.p,
            "rank": self.rank,
            "brackets": brackets,
        }))
        .expect("values serialize")
    }

    pub fn to_spec(&self) -> orbitzeta_core::Result<LieAlgebraSpec> {
        let ctx = PrimeContext::with_default_level(self.p)?;
        let brackets: Vec<(usize, usize, Vec<i64>)> =
            self.brackets.iter().map(|b| (b.i, b.j, b.c.clone())).collect();
        LieAlgebraSpec::from_brackets(&self.name, ctx, self.rank, &brackets)
    }

    pub fn element(&self, name: &str) -> Option<&[i64]> {
        self.elements
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.coords.as_slice())
    }

    pub fn automorphism_matrices(&self) -> Vec<IntMatrix> {
        self.automorphisms
            .iter()
            .map(|a| IntMatrix::from_rows(&a.matrix))
            .collect()
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, ParseError> {
    obj.get(key).ok_or_else(|| schema(key, "missing"))
}

fn required_in<'a>(obj: &'a Map<String, Value>, at: &str, key: &str) -> Result<&'a Value, ParseError> {
    obj.get(key).ok_or_else(|| schema(format!("{at}.{key}"), "missing"))
}

fn int(v: &Value, field: &str) -> Result<i64, ParseError> {
    v.as_i64()
        .ok_or_else(|| schema(field, "expected an integer fitting in 64 bits"))
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| schema(field, "expected an array"))
}

fn index(obj: &Map<String, Value>, at: &str, key: &str, rank: usize) -> Result<usize, ParseError> {
    let field = format!("{at}.{key}");
    let x = int(required_in(obj, at, key)?, &field)?;
    if x < 0 || x as usize >= rank {
        return Err(schema(field, format!("index {x} outside [0, {rank})")));
    }
    Ok(x as usize)
}

fn int_vector(v: &Value, field: &str, len: usize) -> Result<Vec<i64>, ParseError> {
    let items = array(v, field)?;
    if items.len() != len {
        return Err(schema(field, format!("expected {len} entries, got {}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(k, x)| int(x, &format!("{field}[{k}]")))
        .collect()
}

fn entry_name(obj: &Map<String, Value>, at: &str) -> Result<String, ParseError> {
    Ok(required_in(obj, at, "name")?
        .as_str()
        .ok_or_else(|| schema(format!("{at}.name"), "expected a string"))?
        .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2: &str = r#"{
        "name": "sl2-scaled-p3", "p": 3, "rank": 3,
        "brackets": [
            {"i": 0, "j": 1, "c": [-6, 0, 0]},
            {"i": 0, "j": 2, "c": [0, 3, 0]},
            {"i": 1, "j": 2, "c": [0, 0, -6]}
        ],
        "elements": [{"name": "h", "coords": [0, 1, 0]}],
        "automorphisms": [{"name": "swap", "matrix": [[0, 0, 1], [0, -1, 0], [1, 0, 0]]}]
    }"#;

    #[test]
    fn parses_and_validates() {
        let f = AlgebraFile::parse(SL2).unwrap();
        assert_eq!(f.rank, 3);
        assert_eq!(f.element("h"), Some(&[0, 1, 0][..]));
        let spec = f.to_spec().unwrap();
        let report = spec.validate().unwrap();
        assert!(report.perfect);
        assert!(spec.is_automorphism_mod(&f.automorphism_matrices()[0], 3));
    }

    #[test]
    fn minimal_abelian() {
        let f = AlgebraFile::parse(r#"{"name": "ab", "p": 5, "rank": 2, "brackets": []}"#).unwrap();
        let report = f.to_spec().unwrap().validate().unwrap();
        assert!(report.uniformity.is_infinite());
        assert!(!report.perfect);
    }

    #[test]
    fn round_trip() {
        let f = AlgebraFile::parse(SL2).unwrap();
        let g = AlgebraFile::parse(&f.to_json()).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.to_json(), g.to_json());
    }

    fn schema_field(text: &str) -> String {
        match AlgebraFile::parse(text).unwrap_err() {
            ParseError::Schema { field, .. } => field,
            other => panic!("expected a schema error, got {other}"),
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let base = r#"{"name": "x", "p": 3, "rank": 2, "brackets": [BR]}"#;
        let with = |b: &str| base.replace("BR", b);
        assert_eq!(schema_field(&with(r#"{"i": 1, "j": 1, "c": [0, 0]}"#)), "brackets[0].j");
        assert_eq!(schema_field(&with(r#"{"i": 1, "j": 0, "c": [0, 0]}"#)), "brackets[0].j");
        assert_eq!(schema_field(&with(r#"{"i": 0, "j": 2, "c": [0, 0]}"#)), "brackets[0].j");
        assert_eq!(schema_field(&with(r#"{"i": 0, "j": 1, "c": [0]}"#)), "brackets[0].c");
        assert_eq!(schema_field(&with(r#"{"i": 0, "j": 1}"#)), "brackets[0].c");
        assert_eq!(
            schema_field(&with(r#"{"i": 0, "j": 1, "c": [0, 0]}, {"i": 0, "j": 1, "c": [0, 3]}"#)),
            "brackets[1]"
        );
        assert_eq!(schema_field(r#"{"name": "x", "p": 4, "rank": 2, "brackets": []}"#), "p");
        assert_eq!(schema_field(r#"{"name": "x", "p": 3, "brackets": []}"#), "rank");
        assert_eq!(schema_field(r#"{"name": "x", "p": 3, "rank": 2, "brackets": [], "extra": 1}"#), "extra");
        assert_eq!(
            schema_field(r#"{"name": "x", "p": 3, "rank": 1, "brackets": [], "elements": [{"name": "g", "coords": ["1"]}]}"#),
            "elements[0].coords[0]"
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match AlgebraFile::parse("{\n  \"name\": \"x\",\n  \"p\": 3,,\n}").unwrap_err() {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("expected a syntax error, got {other}"),
        }
    }
}
