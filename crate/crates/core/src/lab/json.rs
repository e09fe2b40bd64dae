//! JSON interchange documents.
//!
//! Every document is a flat object `{"kind", "format_version", ...payload}`.
//! Complex numbers are `[re, im]`, complex matrices are arrays of rows, and an
//! algebra element is the list of its blocks.

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::suite::{PropertyResult, Report};
use crate::algebra::{Algebra, AlgebraElement, AlgebraMatrix};
use crate::bimodule::{make_bimodule, Bimodule, Representation};
use crate::fredholm::ModuleOperator;
use crate::matrix::{CMatrix, C64};
use crate::module::HilbertModule;
use crate::morita::InducedMap;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Algebra(Algebra),
    /// A square or rectangular matrix over an algebra, e.g. a projection.
    Matrix(AlgebraMatrix),
    Module(HilbertModule),
    Operator(ModuleOperator),
    Bimodule(Bimodule),
    InducedMap(InducedMap),
    /// A spanning set of a concrete *-algebra of `D × D` matrices.
    LinkingAlgebra(Vec<CMatrix>),
    Report(Report),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "algebra",
            Document::Matrix(_) => "matrix",
            Document::Module(_) => "module",
            Document::Operator(_) => "operator",
            Document::Bimodule(_) => "bimodule",
            Document::InducedMap(_) => "induced-map",
            Document::LinkingAlgebra(_) => "linking-algebra",
            Document::Report(_) => "report",
        }
    }
}

pub const KINDS: [&str; 8] = [
    "algebra",
    "matrix",
    "module",
    "operator",
    "bimodule",
    "induced-map",
    "linking-algebra",
    "report",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Syntax(String),

    #[error("at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("unknown document kind {0:?}")]
    UnknownKind(String),

    #[error("format version {found} is not supported (expected {FORMAT_VERSION})")]
    VersionMismatch { found: u64 },

    #[error("at {path}: {source}")]
    Invariant {
        path: String,
        #[source]
        source: crate::Error,
    },
}

type DocResult<T> = std::result::Result<T, DocumentError>;

#[derive(Clone, Copy)]
struct Node<'a> {
    value: &'a Value,
    path: &'a str,
}

fn child_path(parent: &str, key: impl std::fmt::Display) -> String {
    format!("{parent}/{key}")
}

fn schema(path: &str, message: impl Into<String>) -> DocumentError {
    DocumentError::Schema {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    }
}

fn invariant(path: &str, source: crate::Error) -> DocumentError {
    DocumentError::Invariant {
        path: if path.is_empty() { "/".into() } else { path.into() },
        source,
    }
}

impl<'a> Node<'a> {
    fn field<T>(&self, key: &str, f: impl FnOnce(Node<'_>) -> DocResult<T>) -> DocResult<T> {
        let path = child_path(self.path, key);
        let obj = self.value.as_object().ok_or_else(|| schema(self.path, "expected an object"))?;
        let value = obj.get(key).ok_or_else(|| schema(&path, "missing field"))?;
        f(Node { value, path: &path })
    }

    fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some()
    }

    fn items<T>(&self, mut f: impl FnMut(usize, Node<'_>) -> DocResult<T>) -> DocResult<Vec<T>> {
        let arr = self.value.as_array().ok_or_else(|| schema(self.path, "expected an array"))?;
        arr.iter()
            .enumerate()
            .map(|(i, value)| {
                let path = child_path(self.path, i);
                f(i, Node { value, path: &path })
            })
            .collect()
    }

    fn len(&self) -> DocResult<usize> {
        self.value
            .as_array()
            .map(Vec::len)
            .ok_or_else(|| schema(self.path, "expected an array"))
    }

    fn usize(&self) -> DocResult<usize> {
        self.value
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| schema(self.path, "expected a non-negative integer"))
    }

    fn u64(&self) -> DocResult<u64> {
        self.value.as_u64().ok_or_else(|| schema(self.path, "expected a non-negative integer"))
    }

    fn i64(&self) -> DocResult<i64> {
        self.value.as_i64().ok_or_else(|| schema(self.path, "expected an integer"))
    }

    fn f64(&self) -> DocResult<f64> {
        if self.value.is_null() {
            return Ok(f64::INFINITY);
        }
        self.value.as_f64().ok_or_else(|| schema(self.path, "expected a number"))
    }

    fn bool(&self) -> DocResult<bool> {
        self.value.as_bool().ok_or_else(|| schema(self.path, "expected a boolean"))
    }

    fn string(&self) -> DocResult<String> {
        self.value
            .as_str()
            .map(str::to_owned)
            .ok_or_else(|| schema(self.path, "expected a string"))
    }

    fn complex(&self) -> DocResult<C64> {
        let parts = self.items(|_, n| n.value.as_f64().ok_or_else(|| schema(n.path, "expected a number")))?;
        match parts.as_slice() {
            [re, im] => Ok(C64::new(*re, *im)),
            _ => Err(schema(self.path, "a complex number is [re, im]")),
        }
    }

    fn cmatrix(&self, rows: usize, cols: usize) -> DocResult<CMatrix> {
        if self.len()? != rows {
            return Err(schema(self.path, format!("expected {rows} rows")));
        }
        let data = self.items(|_, row| {
            if row.len()? != cols {
                return Err(schema(row.path, format!("expected {cols} columns")));
            }
            row.items(|_, c| c.complex())
        })?;
        Ok(CMatrix::from_fn(rows, cols, |r, c| data[r][c]))
    }

    fn sizes(&self) -> DocResult<Vec<usize>> {
        self.items(|_, n| n.usize())
    }
}

fn algebra_from(sizes: Vec<usize>, mults: Option<Vec<usize>>, path: &str) -> DocResult<Algebra> {
    let mults = mults.unwrap_or_else(|| vec![1; sizes.len()]);
    Algebra::new(sizes, mults).map_err(|e| invariant(path, e))
}

/// `{"blocks": [...], "multiplicities": [...]}`; multiplicities default to 1.
fn parse_algebra(n: Node<'_>) -> DocResult<Algebra> {
    let sizes = n.field("blocks", |b| b.sizes())?;
    let mults = if n.has("multiplicities") {
        Some(n.field("multiplicities", |m| m.sizes())?)
    } else {
        None
    };
    algebra_from(sizes, mults, n.path)
}

/// `{"algebra": [...], "multiplicities": [...]}` as used by bimodule sides.
fn parse_representation(n: Node<'_>) -> DocResult<Representation> {
    let sizes = n.field("algebra", |b| b.sizes())?;
    let mults = if n.has("multiplicities") {
        Some(n.field("multiplicities", |m| m.sizes())?)
    } else {
        None
    };
    Ok(Representation::new(algebra_from(sizes, mults, n.path)?))
}

fn parse_element(n: Node<'_>, alg: &Algebra) -> DocResult<AlgebraElement> {
    if n.len()? != alg.num_blocks() {
        return Err(schema(n.path, format!("expected {} blocks", alg.num_blocks())));
    }
    let blocks = n.items(|i, b| {
        let s = alg.block_sizes()[i];
        b.cmatrix(s, s)
    })?;
    AlgebraElement::new(alg.clone(), blocks).map_err(|e| invariant(n.path, e))
}

fn parse_grid(n: Node<'_>, alg: &Algebra, rows: usize, cols: usize) -> DocResult<AlgebraMatrix> {
    if n.len()? != rows {
        return Err(schema(n.path, format!("expected {rows} rows")));
    }
    let grid = n.items(|_, row| {
        if row.len()? != cols {
            return Err(schema(row.path, format!("expected {cols} entries")));
        }
        row.items(|_, e| parse_element(e, alg))
    })?;
    let mut m = AlgebraMatrix::zeros(alg, rows, cols);
    for (r, row) in grid.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            m.set_entry(r, c, x);
        }
    }
    Ok(m)
}

fn parse_module(n: Node<'_>, tol: f64) -> DocResult<HilbertModule> {
    let alg = n.field("algebra", parse_algebra)?;
    let rank = n.field("ambient_rank", |r| r.usize())?;
    let p = n.field("projection", |p| parse_grid(p, &alg, rank, rank))?;
    HilbertModule::new(p, tol).map_err(|e| invariant(&child_path(n.path, "projection"), e))
}

fn parse_operator(n: Node<'_>, tol: f64) -> DocResult<ModuleOperator> {
    let dom = n.field("domain", |d| parse_module(d, tol))?;
    let cod = n.field("codomain", |d| parse_module(d, tol))?;
    if dom.algebra() != cod.algebra() {
        return Err(invariant(
            &child_path(n.path, "codomain"),
            crate::Error::InvalidInput("domain and codomain live over different algebras".into()),
        ));
    }
    let t = n.field("matrix", |m| parse_grid(m, dom.algebra(), cod.ambient_rank(), dom.ambient_rank()))?;
    ModuleOperator::new(dom, cod, t, tol).map_err(|e| invariant(&child_path(n.path, "matrix"), e))
}

fn parse_bimodule(n: Node<'_>, tol: f64) -> DocResult<Bimodule> {
    let left = n.field("left", parse_representation)?;
    let right = n.field("right", parse_representation)?;
    let (r, c) = (left.space_dim(), right.space_dim());
    let basis = n.field("basis", |b| b.items(|_, m| m.cmatrix(r, c)))?;
    make_bimodule(left, right, &basis, tol).map_err(|e| invariant(&child_path(n.path, "basis"), e))
}

fn parse_induced_map(n: Node<'_>) -> DocResult<InducedMap> {
    let source = n.field("source", parse_algebra)?;
    let target = n.field("target", parse_algebra)?;
    let matrix = n.field("matrix", |m| m.items(|_, row| row.items(|_, v| v.i64())))?;
    InducedMap::new(source, target, matrix).map_err(|e| invariant(&child_path(n.path, "matrix"), e))
}

fn parse_report(n: Node<'_>) -> DocResult<Report> {
    let properties = n.field("properties", |p| {
        p.items(|_, q| {
            Ok(PropertyResult {
                name: q.field("name", |v| v.string())?,
                claim: q.field("claim", |v| v.string())?,
                trials: q.field("trials", |v| v.usize())?,
                max_residual: q.field("max_residual", |v| v.f64())?,
                pass: q.field("pass", |v| v.bool())?,
                detail: if q.has("detail") {
                    Some(q.field("detail", |v| v.string())?)
                } else {
                    None
                },
            })
        })
    })?;
    Ok(Report {
        suite: n.field("suite", |v| v.string())?,
        seed: n.field("seed", |v| v.u64())?,
        properties,
        wall_ms: n.field("wall_ms", |v| v.u64())?,
        notes: n.field("notes", |v| v.items(|_, s| s.string()))?,
    })
}

/// Parses and validates a document; `tol` bounds every invariant check.
pub fn parse(text: &str, tol: f64) -> DocResult<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax(e.to_string()))?;
    from_value(&value, tol)
}

pub fn from_value(value: &Value, tol: f64) -> DocResult<Document> {
    let root = Node { value, path: "" };
    let kind = root.field("kind", |k| k.string())?;
    let version = root.field("format_version", |v| v.u64())?;
    if !KINDS.contains(&kind.as_str()) {
        return Err(DocumentError::UnknownKind(kind));
    }
    if version != FORMAT_VERSION {
        return Err(DocumentError::VersionMismatch { found: version });
    }
    Ok(match kind.as_str() {
        "algebra" => Document::Algebra(parse_algebra(root)?),
        "matrix" => {
            let alg = root.field("algebra", parse_algebra)?;
            let rows = root.field("rows", |r| r.usize())?;
            let cols = root.field("cols", |c| c.usize())?;
            Document::Matrix(root.field("entries", |e| parse_grid(e, &alg, rows, cols))?)
        }
        "module" => Document::Module(parse_module(root, tol)?),
        "operator" => Document::Operator(parse_operator(root, tol)?),
        "bimodule" => Document::Bimodule(parse_bimodule(root, tol)?),
        "induced-map" => Document::InducedMap(parse_induced_map(root)?),
        "linking-algebra" => {
            let d = root.field("dimension", |d| d.usize())?;
            let span = root.field("span", |s| s.items(|_, m| m.cmatrix(d, d)))?;
            if span.is_empty() {
                return Err(schema("/span", "a linking algebra needs at least one matrix"));
            }
            Document::LinkingAlgebra(span)
        }
        "report" => Document::Report(parse_report(root)?),
        _ => unreachable!("kind checked against KINDS"),
    })
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn complex_value(z: C64) -> Value {
    Value::Array(vec![float(z.re), float(z.im)])
}

fn cmatrix_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| complex_value(m[(r, c)])).collect()))
            .collect(),
    )
}

fn algebra_fields(a: &Algebra) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("blocks".into(), json!(a.block_sizes()));
    m.insert("multiplicities".into(), json!(a.multiplicities()));
    m
}

fn representation_value(r: &Representation) -> Value {
    json!({
        "algebra": r.algebra().block_sizes(),
        "multiplicities": r.algebra().multiplicities(),
    })
}

fn grid_value(m: &AlgebraMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| {
                Value::Array(
                    (0..m.cols())
                        .map(|c| Value::Array(m.entry(r, c).blocks().iter().map(cmatrix_value).collect()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn module_fields(m: &HilbertModule) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("algebra".into(), Value::Object(algebra_fields(m.algebra())));
    out.insert("ambient_rank".into(), json!(m.ambient_rank()));
    out.insert("projection".into(), grid_value(m.projection()));
    out
}

fn report_fields(r: &Report) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("suite".into(), json!(r.suite));
    out.insert("seed".into(), json!(r.seed));
    let props = r
        .properties
        .iter()
        .map(|p| {
            let mut m = Map::new();
            m.insert("name".into(), json!(p.name));
            m.insert("claim".into(), json!(p.claim));
            m.insert("trials".into(), json!(p.trials));
            m.insert("max_residual".into(), float(p.max_residual));
            m.insert("pass".into(), json!(p.pass));
            if let Some(d) = &p.detail {
                m.insert("detail".into(), json!(d));
            }
            Value::Object(m)
        })
        .collect();
    out.insert("properties".into(), Value::Array(props));
    out.insert("wall_ms".into(), json!(r.wall_ms));
    out.insert("notes".into(), json!(r.notes));
    out
}

pub fn to_value(doc: &Document) -> Value {
    let mut out = Map::new();
    out.insert("kind".into(), json!(doc.kind()));
    out.insert("format_version".into(), json!(FORMAT_VERSION));
    let payload = match doc {
        Document::Algebra(a) => algebra_fields(a),
        Document::Matrix(m) => {
            let mut p = Map::new();
            p.insert("algebra".into(), Value::Object(algebra_fields(m.algebra())));
            p.insert("rows".into(), json!(m.rows()));
            p.insert("cols".into(), json!(m.cols()));
            p.insert("entries".into(), grid_value(m));
            p
        }
        Document::Module(m) => module_fields(m),
        Document::Operator(t) => {
            let mut p = Map::new();
            p.insert("domain".into(), Value::Object(module_fields(t.domain())));
            p.insert("codomain".into(), Value::Object(module_fields(t.codomain())));
            p.insert("matrix".into(), grid_value(t.matrix()));
            p
        }
        Document::Bimodule(x) => {
            let mut p = Map::new();
            p.insert("left".into(), representation_value(x.left()));
            p.insert("right".into(), representation_value(x.right()));
            p.insert("basis".into(), Value::Array(x.basis().iter().map(cmatrix_value).collect()));
            p
        }
        Document::InducedMap(m) => {
            let mut p = Map::new();
            p.insert("source".into(), Value::Object(algebra_fields(&m.source)));
            p.insert("target".into(), Value::Object(algebra_fields(&m.target)));
            p.insert("matrix".into(), json!(m.matrix));
            p
        }
        Document::LinkingAlgebra(span) => {
            let mut p = Map::new();
            p.insert("dimension".into(), json!(span[0].nrows()));
            p.insert("span".into(), Value::Array(span.iter().map(cmatrix_value).collect()));
            p
        }
        Document::Report(r) => report_fields(r),
    };
    out.extend(payload);
    Value::Object(out)
}

pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(doc)).expect("document values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{self as cm, DEFAULT_TOL};

    const TOL: f64 = DEFAULT_TOL;

    fn roundtrip(doc: &Document) -> Document {
        parse(&serialize(doc), TOL).unwrap()
    }

    #[test]
    fn algebra_roundtrip() {
        let a = Algebra::with_blocks(&[2, 3]).unwrap();
        let text = serialize(&Document::Algebra(a.clone()));
        assert_eq!(parse(&text, TOL).unwrap(), Document::Algebra(a.clone()));
        assert_eq!(serialize(&parse(&text, TOL).unwrap()), text);
        let compact = r#"{"kind":"algebra","format_version":1,"blocks":[2,3]}"#;
        assert_eq!(parse(compact, TOL).unwrap(), Document::Algebra(a));
    }

    #[test]
    fn missing_blocks_reports_path() {
        let err = parse(r#"{"kind":"algebra","format_version":1}"#, TOL).unwrap_err();
        assert_eq!(
            err,
            DocumentError::Schema {
                path: "/blocks".into(),
                message: "missing field".into()
            }
        );
        let err = parse(r#"{"kind":"algebra","format_version":1,"blocks":[2,"x"]}"#, TOL).unwrap_err();
        assert!(matches!(err, DocumentError::Schema { ref path, .. } if path == "/blocks/1"));
    }

    #[test]
    fn distinct_error_kinds() {
        assert!(matches!(parse("{", TOL), Err(DocumentError::Syntax(_))));
        assert!(matches!(
            parse(r#"{"kind":"sheaf","format_version":1}"#, TOL),
            Err(DocumentError::UnknownKind(_))
        ));
        assert!(matches!(
            parse(r#"{"kind":"algebra","format_version":2,"blocks":[1]}"#, TOL),
            Err(DocumentError::VersionMismatch { found: 2 })
        ));
        assert!(matches!(
            parse(r#"{"kind":"algebra","format_version":1,"blocks":[0]}"#, TOL),
            Err(DocumentError::Invariant { .. })
        ));
    }

    #[test]
    fn uncompressed_operator_is_an_invariant_violation() {
        let text = r#"{
            "kind": "operator", "format_version": 1,
            "domain": {"algebra": {"blocks": [1]}, "ambient_rank": 2,
                       "projection": [[[[[[1,0]]]],[[[[0,0]]]]],[[[[[0,0]]]],[[[[0,0]]]]]]},
            "codomain": {"algebra": {"blocks": [1]}, "ambient_rank": 1, "projection": [[[[[[1,0]]]]]]},
            "matrix": [[[[[[1,0]]]],[[[[1,0]]]]]]
        }"#;
        let err = parse(text, TOL).unwrap_err();
        assert!(matches!(err, DocumentError::Invariant { ref path, .. } if path == "/matrix"), "{err:?}");
    }

    #[test]
    fn operator_and_module_roundtrip() {
        let a = Algebra::new(vec![2, 1], vec![1, 2]).unwrap();
        let c = C64::new(0.5_f64.sqrt(), 0.0);
        let p = a
            .element_in_block(0, cm::CMatrix::from_fn(2, 2, |_, _| c * c))
            .unwrap()
            .as_matrix()
            .dsum(&AlgebraMatrix::identity(&a, 1))
            .unwrap();
        let m = HilbertModule::new(p, TOL).unwrap();
        let t = ModuleOperator::compressed(
            m.clone(),
            m.clone(),
            AlgebraMatrix::scalar(&a, &cm::from_real(2, 2, &[0.1, 0.2, 0.3, 1.0 / 3.0])),
        )
        .unwrap();
        let doc = Document::Operator(t);
        assert_eq!(roundtrip(&doc), doc);
        let doc = Document::Module(m);
        assert_eq!(roundtrip(&doc), doc);
        let zero = HilbertModule::zero(&a, 0);
        let doc = Document::Operator(ModuleOperator::zero(&zero, &HilbertModule::free(&a, 1)).unwrap());
        assert_eq!(roundtrip(&doc), doc);
    }

    #[test]
    fn bimodule_and_map_roundtrip() {
        let basis: Vec<CMatrix> = (0..3).map(|i| cm::unit(3, 1, i, 0)).collect();
        let x = make_bimodule(
            Representation::new(Algebra::full_matrix(3)),
            Representation::new(Algebra::complex()),
            &basis,
            TOL,
        )
        .unwrap();
        let doc = Document::Bimodule(x);
        assert_eq!(roundtrip(&doc), doc);
        let m = InducedMap::new(Algebra::full_matrix(3), Algebra::complex(), vec![vec![1]]).unwrap();
        let doc = Document::InducedMap(m);
        assert_eq!(roundtrip(&doc), doc);
        let doc = Document::LinkingAlgebra(vec![cm::identity(2), cm::unit(2, 2, 0, 1)]);
        assert_eq!(roundtrip(&doc), doc);
    }

    #[test]
    fn report_roundtrip() {
        let r = Report {
            suite: "all".into(),
            seed: u64::MAX,
            properties: vec![PropertyResult {
                name: "x".into(),
                claim: "y".into(),
                trials: 3,
                max_residual: 1.25e-17,
                pass: true,
                detail: None,
            }],
            wall_ms: 12,
            notes: vec!["n".into()],
        };
        let doc = Document::Report(r);
        assert_eq!(roundtrip(&doc), doc);
    }
}
