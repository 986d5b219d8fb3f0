//! JSON interchange for diagrams.
//!
//! ```json
//! {
//!   "poset": {"elements": ["a", "b"], "less_than": [["a", "b"]]},
//!   "field": "Q",
//!   "stalks": {"a": 1, "b": 2},
//!   "maps": [{"from": "a", "to": "b", "matrix": [["1"], ["1/2"]]}]
//! }
//! ```
//!
//! Matrix entries are JSON integers or strings (`"-3"`, `"2/5"`). Covers
//! without a listed map get the zero map. Missing stalks default to 0.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field::{Field, FieldTag, PrimeField, Rationals};
use crate::matrix::Matrix;
use crate::poset::{Poset, PosetSpec};

use super::{Diagram, SheafError};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramFile {
    pub poset: PosetSpec,
    pub field: String,
    #[serde(default)]
    pub stalks: BTreeMap<String, usize>,
    #[serde(default)]
    pub maps: Vec<EdgeMapFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeMapFile {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<Value>>,
}

/// A diagram over whichever field the file names.
#[derive(Clone, Debug)]
pub enum AnyDiagram {
    Rational(Diagram<Rationals>),
    Prime(Diagram<PrimeField>),
}

impl AnyDiagram {
    pub fn tag(&self) -> FieldTag {
        match self {
            AnyDiagram::Rational(d) => d.field().tag(),
            AnyDiagram::Prime(d) => d.field().tag(),
        }
    }

    pub fn base(&self) -> &Poset {
        match self {
            AnyDiagram::Rational(d) => d.base(),
            AnyDiagram::Prime(d) => d.base(),
        }
    }
}

pub fn parse_diagram(text: &str) -> Result<AnyDiagram, SheafError> {
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| SheafError::Format(e.to_string()))?;
    let base = Arc::new(file.poset.to_poset()?);
    Ok(match FieldTag::parse(&file.field)? {
        FieldTag::Rational => AnyDiagram::Rational(build(&file, base, Rationals)?),
        FieldTag::Prime(p) => AnyDiagram::Prime(build(&file, base, PrimeField::new(p)?)?),
    })
}

fn entry<F: Field>(field: &F, v: &Value) -> Result<F::Elem, SheafError> {
    let parsed = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => field.parse(&n.to_string()),
        Value::String(s) => field.parse(s),
        _ => None,
    };
    parsed.ok_or_else(|| SheafError::Format(format!("bad matrix entry {v}")))
}

fn build<F: Field>(file: &DiagramFile, base: Arc<Poset>, field: F) -> Result<Diagram<F>, SheafError> {
    let n = base.len();
    let mut dims = vec![0; n];
    for (label, &d) in &file.stalks {
        let i = base
            .index_of(label)
            .ok_or_else(|| SheafError::Format(format!("stalk for unknown element `{label}`")))?;
        dims[i] = d;
    }
    let covers = base.covers().covers;
    let mut maps: Vec<Matrix<F::Elem>> = covers
        .iter()
        .map(|&(x, y)| Matrix::zeros(&field, dims[y], dims[x]))
        .collect();
    for m in &file.maps {
        let lookup = |l: &str| {
            base.index_of(l)
                .ok_or_else(|| SheafError::Format(format!("map mentions unknown element `{l}`")))
        };
        let (x, y) = (lookup(&m.from)?, lookup(&m.to)?);
        let Some(c) = covers.iter().position(|&p| p == (x, y)) else {
            return Err(SheafError::NotACover {
                from: m.from.clone(),
                to: m.to.clone(),
            });
        };
        let rows: Vec<Vec<F::Elem>> = m
            .matrix
            .iter()
            .map(|r| r.iter().map(|v| entry(&field, v)).collect())
            .collect::<Result<_, _>>()?;
        let cols = rows.first().map_or(dims[x], Vec::len);
        if rows.len() != dims[y] || rows.iter().any(|r| r.len() != cols) || cols != dims[x] {
            return Err(SheafError::BadEdgeMap {
                from: m.from.clone(),
                to: m.to.clone(),
                rows: dims[y],
                cols: dims[x],
                got_rows: rows.len(),
                got_cols: cols,
            });
        }
        maps[c] = if rows.is_empty() {
            Matrix::zeros(&field, 0, dims[x])
        } else {
            Matrix::from_rows(rows)
        };
    }
    Diagram::from_edge_maps(base, field, dims, maps)
}

pub fn diagram_to_file<F: Field>(d: &Diagram<F>) -> DiagramFile {
    let base = d.base();
    let field = d.field();
    DiagramFile {
        poset: PosetSpec::from_poset(base),
        field: field.tag().to_string(),
        stalks: (0..base.len()).map(|i| (base.label(i).to_string(), d.dim(i))).collect(),
        maps: d
            .covers()
            .iter()
            .zip(d.edge_maps())
            .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
            .map(|(&(x, y), m)| EdgeMapFile {
                from: base.label(x).to_string(),
                to: base.label(y).to_string(),
                matrix: m
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(|v| Value::String(field.render(v))).collect())
                    .collect(),
            })
            .collect(),
    }
}

pub fn write_diagram<F: Field>(d: &Diagram<F>) -> String {
    serde_json::to_string_pretty(&diagram_to_file(d)).expect("diagram serializes")
}
