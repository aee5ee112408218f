//! Structured-text (JSON) documents: the custom-table schema, matrix and
//! representation exports.

use crate::error::{Error, Result};
use crate::generator::{Expression, Generator};
use crate::matrix::Matrix;
use crate::rep::{QValue, Representation};
use crate::table::{Rule, StructureTable};
use crate::text::{parse_expression, parse_scalar, render_scalar};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Serialize, Deserialize, Debug)]
pub struct ParamDoc {
    pub name: String,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct RuleDoc {
    pub left: String,
    pub right: String,
    pub swap: String,
    pub remainder: String,
}

/// Custom-table document. Field names are part of the published schema.
#[derive(Serialize, Deserialize, Debug)]
pub struct TableDoc {
    #[serde(rename = "N")]
    pub n: u8,
    pub params: Vec<ParamDoc>,
    pub order: Vec<String>,
    pub rules: Vec<RuleDoc>,
    pub nilpotents: Vec<String>,
}

impl TableDoc {
    pub fn from_table(t: &StructureTable) -> TableDoc {
        TableDoc {
            n: t.n,
            params: t
                .params
                .iter()
                .map(|p| ParamDoc { name: p.name() })
                .collect(),
            order: t.generators().iter().map(|g| g.to_string()).collect(),
            rules: t
                .rules
                .iter()
                .map(|((g1, g2), rule)| RuleDoc {
                    left: g1.to_string(),
                    right: g2.to_string(),
                    swap: render_scalar(&rule.swap),
                    remainder: rule.remainder.to_string(),
                })
                .collect(),
            nilpotents: t.nilpotents.iter().map(|g| g.to_string()).collect(),
        }
    }
}

fn schema_err(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Parses and validates a custom-table document. The table must already be
/// closed under its generator order: every out-of-order pair needs a rule,
/// inverse rules are not inferred.
pub fn load_custom_table(text: &str) -> Result<StructureTable> {
    let doc: TableDoc =
        serde_json::from_str(text).map_err(|e| schema_err("$", e.to_string()))?;
    let mut order = Vec::new();
    for (i, name) in doc.order.iter().enumerate() {
        let g = Generator::parse(name)
            .map_err(|_| schema_err(&format!("order[{i}]"), format!("bad generator {name:?}")))?;
        if !g.indices_within(doc.n) {
            return Err(schema_err(
                &format!("order[{i}]"),
                format!("{name} outside N = {}", doc.n),
            ));
        }
        order.push(g);
    }
    let mut rules = BTreeMap::new();
    for (i, r) in doc.rules.iter().enumerate() {
        let path = format!("rules[{i}]");
        let left = Generator::parse(&r.left)
            .map_err(|_| schema_err(&path, format!("bad generator {:?}", r.left)))?;
        let right = Generator::parse(&r.right)
            .map_err(|_| schema_err(&path, format!("bad generator {:?}", r.right)))?;
        let swap = parse_scalar(&r.swap)
            .map_err(|e| schema_err(&format!("{path}.swap"), e.to_string()))?;
        if swap.is_zero() {
            return Err(Error::ZeroSwap(r.left.clone(), r.right.clone()));
        }
        let remainder: Expression = if r.remainder.trim() == "0" || r.remainder.trim().is_empty() {
            Expression::zero()
        } else {
            parse_expression(&r.remainder)
                .map_err(|e| schema_err(&format!("{path}.remainder"), e.to_string()))?
        };
        if rules
            .insert((left, right), Rule { swap, remainder })
            .is_some()
        {
            return Err(schema_err(
                &path,
                format!("duplicate rule for ({left}, {right})"),
            ));
        }
    }
    let mut nilpotents = BTreeSet::new();
    for (i, name) in doc.nilpotents.iter().enumerate() {
        let g = Generator::parse(name).map_err(|_| {
            schema_err(&format!("nilpotents[{i}]"), format!("bad generator {name:?}"))
        })?;
        nilpotents.insert(g);
    }
    StructureTable::new("custom", doc.n, order, rules, nilpotents)
}

pub fn table_to_json(t: &StructureTable) -> String {
    serde_json::to_string_pretty(&TableDoc::from_table(t)).expect("serializable")
}

/// Matrix export: entries as [row, col, scalar-literal] triples.
#[derive(Serialize, Deserialize, Debug)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &Matrix) -> MatrixDoc {
        MatrixDoc {
            rows: m.rows,
            cols: m.cols,
            entries: m
                .entries()
                .map(|((r, c), v)| (*r, *c, render_scalar(v)))
                .collect(),
        }
    }
}

/// Representation bundle: parameter point, basis labels and all matrices.
#[derive(Serialize, Debug)]
pub struct RepresentationDoc {
    pub parameter_point: String,
    pub basis: Vec<String>,
    pub matrices: BTreeMap<String, MatrixDoc>,
}

impl RepresentationDoc {
    pub fn from_rep(rep: &Representation) -> RepresentationDoc {
        RepresentationDoc {
            parameter_point: match &rep.point {
                QValue::Symbolic => "symbolic".to_string(),
                QValue::At(v) => format!("q = {v}"),
            },
            basis: rep.space.labels(),
            matrices: rep
                .assign
                .iter()
                .map(|(g, m)| (g.to_string(), MatrixDoc::from_matrix(m)))
                .collect(),
        }
    }
}
