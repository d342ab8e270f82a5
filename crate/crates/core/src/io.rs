//! JSON documents for relations, relation pairs, markets and cones.
//!
//! Rationals are written as strings, `"p/q"` or an integer; plain JSON
//! integers are accepted on input.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone::Cone;
use crate::market::{validate_market, Market, MarketError};
use crate::rational::{format_rational, parse_rational, RationalVector};
use crate::relation::{Relation, RelationError, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl DocumentError {
    fn field(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Self::Field {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

/// A rational coordinate as it appears in a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Integer(i64),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Text(s) => s.clone(),
            Scalar::Integer(i) => i.to_string(),
        }
    }
}

pub type Pair = [String; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub universe: Vec<String>,
    pub pairs: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationPairDoc {
    pub universe: Vec<String>,
    pub relation_1: Vec<Pair>,
    pub relation_2: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketDoc {
    pub goods: Vec<String>,
    pub fair_exchange: Vec<Pair>,
    #[serde(default)]
    pub down_trades: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub dim: usize,
    pub generators: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConePairDoc {
    pub dim: usize,
    pub cone_1: Vec<Vec<Scalar>>,
    pub cone_2: Vec<Vec<Scalar>>,
}

/// Parses JSON text into a document type.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, DocumentError> {
    serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_owned(),
        None => message.to_owned(),
    }
}

fn universe(field: &str, ids: &[String]) -> Result<std::sync::Arc<Universe>, DocumentError> {
    Universe::new(ids.iter().map(String::as_str)).map_err(|e| DocumentError::field(field, e))
}

fn relation(field: &str, u: &std::sync::Arc<Universe>, pairs: &[Pair]) -> Result<Relation, DocumentError> {
    let pairs: Vec<(&str, &str)> = pairs.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
    Relation::new(u.clone(), &pairs).map_err(|e| DocumentError::field(field, e))
}

fn pairs_of(r: &Relation) -> Vec<Pair> {
    r.id_pairs().into_iter().map(|(a, b)| [a, b]).collect()
}

fn vectors(field: &str, dim: usize, rows: &[Vec<Scalar>]) -> Result<Vec<RationalVector>, DocumentError> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != dim {
                return Err(DocumentError::field(
                    format!("{field}[{i}]"),
                    format!("expected {dim} coordinates, found {}", row.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    parse_rational(&x.text())
                        .map_err(|e| DocumentError::field(format!("{field}[{i}][{j}]"), e))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(RationalVector::new)
        })
        .collect()
}

fn cone(field: &str, dim: usize, rows: &[Vec<Scalar>]) -> Result<Cone, DocumentError> {
    Cone::new(dim, vectors(field, dim, rows)?).map_err(|e| DocumentError::field(field, e))
}

fn scalars(v: &RationalVector) -> Vec<Scalar> {
    v.coords().iter().map(|x| Scalar::Text(format_rational(x))).collect()
}

impl RelationDoc {
    pub fn to_relation(&self) -> Result<Relation, DocumentError> {
        let u = universe("universe", &self.universe)?;
        relation("pairs", &u, &self.pairs)
    }

    pub fn from_relation(r: &Relation) -> Self {
        Self {
            universe: r.universe().elements().to_vec(),
            pairs: pairs_of(r),
        }
    }
}

impl RelationPairDoc {
    pub fn to_relations(&self) -> Result<(Relation, Relation), DocumentError> {
        let u = universe("universe", &self.universe)?;
        Ok((
            relation("relation_1", &u, &self.relation_1)?,
            relation("relation_2", &u, &self.relation_2)?,
        ))
    }

    /// Both relations must share a universe.
    pub fn from_relations(r1: &Relation, r2: &Relation) -> Result<Self, RelationError> {
        r1.check_universe(r2)?;
        Ok(Self {
            universe: r1.universe().elements().to_vec(),
            relation_1: pairs_of(r1),
            relation_2: pairs_of(r2),
        })
    }
}

impl MarketDoc {
    pub fn to_market(&self) -> Result<Market, DocumentError> {
        let u = universe("goods", &self.goods)?;
        let fair: Vec<(&str, &str)> = self.fair_exchange.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let down: Vec<(&str, &str)> = self.down_trades.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        validate_market(u, &fair, &down).map_err(|e| {
            let field = match &e {
                MarketError::NotStrictPartialOrder(_) => "down_trades",
                MarketError::Relation(RelationError::UnknownElement(id))
                    if !self.fair_exchange.iter().flatten().any(|x| x == id) =>
                {
                    "down_trades"
                }
                _ => "fair_exchange",
            };
            DocumentError::field(field, e)
        })
    }

    pub fn from_market(m: &Market) -> Self {
        Self {
            goods: m.goods().elements().to_vec(),
            fair_exchange: pairs_of(m.fair_exchange()),
            down_trades: pairs_of(m.down_trades()),
        }
    }
}

impl ConeDoc {
    pub fn to_cone(&self) -> Result<Cone, DocumentError> {
        cone("generators", self.dim, &self.generators)
    }

    pub fn from_cone(c: &Cone) -> Self {
        Self {
            dim: c.dim(),
            generators: c.generators().iter().map(scalars).collect(),
        }
    }
}

impl ConePairDoc {
    pub fn to_cones(&self) -> Result<(Cone, Cone), DocumentError> {
        Ok((
            cone("cone_1", self.dim, &self.cone_1)?,
            cone("cone_2", self.dim, &self.cone_2)?,
        ))
    }

    pub fn from_cones(c1: &Cone, c2: &Cone) -> Self {
        Self {
            dim: c1.dim(),
            cone_1: c1.generators().iter().map(scalars).collect(),
            cone_2: c2.generators().iter().map(scalars).collect(),
        }
    }
}
