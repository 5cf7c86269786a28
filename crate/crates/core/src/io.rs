//! JSON documents for elements, matrices, systems and signals, plus CSV for
//! numeric matrices.
//!
//! Every document carries `"truncation": {"num_vars", "max_degree"}` at the
//! top level. Ring elements are `{"terms": [{"alpha": [..], "re", "im"}]}`
//! with dense exponent vectors; a bare number is accepted on input as a
//! constant.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::multiindex::{MultiIndex, TruncationSpec};
use crate::ring::{Complex, RingElement};
use crate::ringmatrix::RingMatrix;
use crate::statespace::{Dims, SignalSequence, StateSpaceSystem};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Terms { terms: Vec<TermJson> },
    Constant(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ElementJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDoc {
    pub truncation: TruncationSpec,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDoc {
    pub truncation: TruncationSpec,
    pub dims: Dims,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    #[serde(rename = "C")]
    pub c: MatrixJson,
    #[serde(rename = "D")]
    pub d: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalDoc {
    pub truncation: TruncationSpec,
    pub signal: Vec<Vec<ElementJson>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn checked_spec(t: TruncationSpec) -> Result<TruncationSpec> {
    TruncationSpec::new(t.num_vars, t.max_degree)
}

pub fn element_to_json(e: &RingElement) -> ElementJson {
    let m = e.spec().num_vars;
    let terms = e
        .terms()
        .map(|(alpha, c)| TermJson {
            alpha: alpha.to_dense(m).expect("element index within its truncation"),
            re: c.re,
            im: c.im,
        })
        .collect();
    ElementJson::Terms { terms }
}

fn terms_to_element(spec: TruncationSpec, terms: &[TermJson]) -> Result<RingElement> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.alpha.len() != spec.num_vars {
            return Err(Error::Parse(format!(
                "alpha {:?} has length {}, truncation has {} variables",
                t.alpha,
                t.alpha.len(),
                spec.num_vars
            )));
        }
        if !t.re.is_finite() || !t.im.is_finite() {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        out.push((MultiIndex::from_dense(&t.alpha), Complex::new(t.re, t.im)));
    }
    RingElement::from_terms(spec, out)
}

pub fn element_from_json(spec: TruncationSpec, e: &ElementJson) -> Result<RingElement> {
    match e {
        ElementJson::Terms { terms } => terms_to_element(spec, terms),
        ElementJson::Constant(v) if v.is_finite() => Ok(RingElement::constant(spec, Complex::new(*v, 0.0))),
        ElementJson::Constant(_) => Err(Error::Parse("non-finite coefficient".into())),
    }
}

pub fn matrix_to_json(m: &RingMatrix) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| element_to_json(m.get(i, j))).collect())
            .collect(),
    }
}

pub fn matrix_from_json(spec: TruncationSpec, m: &MatrixJson) -> Result<RingMatrix> {
    if m.entries.len() != m.rows || m.entries.iter().any(|r| r.len() != m.cols) {
        return Err(Error::Parse(format!(
            "entries do not form a {}x{} array",
            m.rows, m.cols
        )));
    }
    let rows = m
        .entries
        .iter()
        .map(|r| r.iter().map(|e| element_from_json(spec, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if m.rows == 0 || m.cols == 0 {
        return Ok(RingMatrix::zeros(spec, m.rows, m.cols));
    }
    RingMatrix::from_rows(spec, rows)
}

pub fn element_doc(e: &RingElement) -> ElementDoc {
    let ElementJson::Terms { terms } = element_to_json(e) else {
        unreachable!()
    };
    ElementDoc {
        truncation: e.spec(),
        terms,
    }
}

pub fn parse_element(text: &str) -> Result<RingElement> {
    let doc: ElementDoc = serde_json::from_str(text).map_err(parse_err)?;
    terms_to_element(checked_spec(doc.truncation)?, &doc.terms)
}

pub fn element_to_string(e: &RingElement) -> String {
    serde_json::to_string_pretty(&element_doc(e)).expect("serializable")
}

pub fn system_doc(sys: &StateSpaceSystem) -> SystemDoc {
    SystemDoc {
        truncation: sys.spec(),
        dims: sys.dims(),
        a: matrix_to_json(sys.a()),
        b: matrix_to_json(sys.b()),
        c: matrix_to_json(sys.c()),
        d: matrix_to_json(sys.d()),
    }
}

pub fn parse_system(text: &str) -> Result<StateSpaceSystem> {
    let doc: SystemDoc = serde_json::from_str(text).map_err(parse_err)?;
    let spec = checked_spec(doc.truncation)?;
    let sys = StateSpaceSystem::new(
        matrix_from_json(spec, &doc.a)?,
        matrix_from_json(spec, &doc.b)?,
        matrix_from_json(spec, &doc.c)?,
        matrix_from_json(spec, &doc.d)?,
    )?;
    if sys.dims() != doc.dims {
        return Err(Error::Parse(format!(
            "declared dims {:?} disagree with matrices {:?}",
            doc.dims,
            sys.dims()
        )));
    }
    Ok(sys)
}

pub fn system_to_string(sys: &StateSpaceSystem) -> String {
    serde_json::to_string_pretty(&system_doc(sys)).expect("serializable")
}

pub fn signal_doc(spec: TruncationSpec, values: &[RingMatrix]) -> SignalDoc {
    SignalDoc {
        truncation: spec,
        signal: values
            .iter()
            .map(|v| (0..v.rows()).map(|i| element_to_json(v.get(i, 0))).collect())
            .collect(),
    }
}

pub fn parse_signal(text: &str) -> Result<SignalSequence> {
    let doc: SignalDoc = serde_json::from_str(text).map_err(parse_err)?;
    let spec = checked_spec(doc.truncation)?;
    let values = doc
        .signal
        .iter()
        .map(|v| {
            let col = v
                .iter()
                .map(|e| element_from_json(spec, e).map(|x| vec![x]))
                .collect::<Result<Vec<_>>>()?;
            if col.is_empty() {
                return Err(Error::Parse("empty signal vector".into()));
            }
            RingMatrix::from_rows(spec, col)
        })
        .collect::<Result<Vec<_>>>()?;
    SignalSequence::new(values)
}

pub fn signal_to_string(spec: TruncationSpec, values: &[RingMatrix]) -> String {
    serde_json::to_string_pretty(&signal_doc(spec, values)).expect("serializable")
}

/// `row,col,re,im` lines in row-major order, 0-based indices.
pub fn cmatrix_to_csv(m: &CMatrix) -> String {
    let mut out = String::from("row,col,re,im\n");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let c = m[(i, j)];
            writeln!(out, "{i},{j},{},{}", c.re, c.im).expect("write to String");
        }
    }
    out
}
