//! Matroid specification files.
//!
//! A spec is a JSON object with a `name`, a `kind` selecting the encoding,
//! the kind's payload and an optional `dualize` flag. Element and vertex
//! labels in files are 1-based.

use std::path::Path;

use matro_core::linalg::RationalMatrix;
use matro_core::weights::parse_rational;
use matro_core::{Matroid, SubsetMask};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidSpec {
    pub name: String,
    #[serde(flatten)]
    pub source: Source,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub dualize: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Bases {
        n: usize,
        rank: usize,
        bases: Vec<Vec<usize>>,
    },
    Nonbases {
        n: usize,
        rank: usize,
        nonbases: Vec<Vec<usize>>,
    },
    Circuits {
        n: usize,
        circuits: Vec<Vec<usize>>,
    },
    Graph {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    /// One vector per ground element.
    Vectors { vectors: Vec<Vec<Scalar>> },
    Uniform { rank: usize, n: usize },
}

/// A rational entry, written either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Integer(i64),
    Text(String),
}

impl MatroidSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// A bases-kind spec reproducing `matroid` exactly.
    pub fn from_matroid(name: &str, matroid: &Matroid) -> Self {
        MatroidSpec {
            name: name.to_string(),
            source: Source::Bases {
                n: matroid.ground_size(),
                rank: matroid.rank(),
                bases: matroid.bases().iter().map(|b| b.labels()).collect(),
            },
            dualize: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }

    pub fn build(&self) -> Result<Matroid, CliError> {
        let m = match &self.source {
            Source::Bases { n, rank, bases } => {
                Matroid::from_bases(*n, *rank, masks(bases, *n, "bases")?)?
            }
            Source::Nonbases { n, rank, nonbases } => {
                Matroid::from_nonbases(*n, *rank, masks(nonbases, *n, "nonbases")?)?
            }
            Source::Circuits { n, circuits } => {
                Matroid::from_circuits(*n, masks(circuits, *n, "circuits")?)?
            }
            Source::Graph { vertices, edges } => {
                let mut zero_based = Vec::with_capacity(edges.len());
                for (k, &[a, b]) in edges.iter().enumerate() {
                    if a == 0 || b == 0 {
                        return Err(CliError::validation(
                            "VertexOutOfRange",
                            format!("edge {} uses vertex 0; vertices are numbered from 1", k + 1),
                        ));
                    }
                    zero_based.push((a - 1, b - 1));
                }
                Matroid::from_graph(*vertices, &zero_based)?
            }
            Source::Vectors { vectors } => Matroid::from_vectors(&matrix(vectors)?)?,
            Source::Uniform { rank, n } => Matroid::uniform(*rank, *n)?,
        };
        Ok(if self.dualize { m.dual() } else { m })
    }
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Integer(i) => i.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

fn masks(sets: &[Vec<usize>], n: usize, what: &str) -> Result<Vec<SubsetMask>, CliError> {
    sets.iter()
        .map(|labels| {
            if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > n) {
                return Err(CliError::validation(
                    "ElementOutOfRange",
                    format!("{what} mention element {bad}, outside 1..{n}"),
                ));
            }
            Ok(labels.iter().map(|l| l - 1).collect())
        })
        .collect()
}

/// Columns of the matrix are the given vectors.
fn matrix(vectors: &[Vec<Scalar>]) -> Result<RationalMatrix, CliError> {
    let dim = vectors.first().map_or(0, Vec::len);
    if vectors.iter().any(|v| v.len() != dim) || dim == 0 {
        return Err(CliError::validation(
            "RaggedVectors",
            "vectors must be nonempty and all of the same length".to_string(),
        ));
    }
    let mut rows = vec![Vec::with_capacity(vectors.len()); dim];
    for v in vectors {
        for (row, x) in rows.iter_mut().zip(v) {
            row.push(parse_rational(&x.text()).map_err(|e| CliError::Rational(e.to_string()))?);
        }
    }
    Ok(RationalMatrix::from_rows(rows).expect("rectangular"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let u = MatroidSpec::parse(r#"{"name":"u","kind":"uniform","rank":2,"n":4}"#).unwrap();
        assert_eq!(u.build().unwrap(), Matroid::uniform(2, 4).unwrap());
        let g = MatroidSpec::parse(
            r#"{"name":"tri","kind":"graph","vertices":3,"edges":[[1,2],[2,3],[1,3]]}"#,
        )
        .unwrap();
        assert_eq!(g.build().unwrap(), Matroid::uniform(2, 3).unwrap());
        let v = MatroidSpec::parse(
            r#"{"name":"v","kind":"vectors","vectors":[[1,0],["0","1/2"],[1,"1"]]}"#,
        )
        .unwrap();
        assert_eq!(v.build().unwrap(), Matroid::uniform(2, 3).unwrap());
        let d = MatroidSpec::parse(r#"{"name":"d","kind":"uniform","rank":1,"n":3,"dualize":true}"#)
            .unwrap();
        assert_eq!(d.build().unwrap(), Matroid::uniform(2, 3).unwrap());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match MatroidSpec::parse("{\n  \"name\": \"x\",\n  oops }") {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn labels_are_checked() {
        let spec = MatroidSpec::parse(r#"{"name":"b","kind":"bases","n":2,"rank":1,"bases":[[0]]}"#)
            .unwrap();
        assert_eq!(spec.build().unwrap_err().code(), "ElementOutOfRange");
        let bad = MatroidSpec::parse(r#"{"name":"v","kind":"vectors","vectors":[["1/0"]]}"#).unwrap();
        assert_eq!(bad.build().unwrap_err().code(), "RationalParseError");
    }

    #[test]
    fn bases_round_trip() {
        let m = Matroid::from_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let spec = MatroidSpec::from_matroid("k4e", &m);
        let again = MatroidSpec::parse(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
        assert_eq!(again.build().unwrap(), m);
    }
}
