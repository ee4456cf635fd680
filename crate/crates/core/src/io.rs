//! JSON document formats and DOT export.
//!
//! Sets are index arrays, names live in explicit tables, and emission is
//! canonical: `kind` first, fixed key order, one top-level key per line,
//! compact values, LF line endings and a trailing newline.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::builders::{FiniteLattice, FinitePoset};
use crate::connectives::{BinaryTable, ConnectiveTables};
use crate::duality::{LogicMap, SpaceMap};
use crate::logic::{AbstractLogic, TheoryFamily};
use crate::subset::{Subset, MAX_UNIVERSE};
use crate::topology::{FiniteSpace, SpecializationOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("cannot read {file}: {message}")]
    Read { file: String, message: String },
}

fn schema(path: &str, message: impl Into<String>) -> IoError {
    IoError::Schema { path: if path.is_empty() { "/".into() } else { path.into() }, message: message.into() }
}

// one document per invocation; boxing the maps buys nothing
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Logic(AbstractLogic),
    Poset(FinitePoset),
    Lattice(FiniteLattice),
    Space(FiniteSpace),
    LogicMap(LogicMap),
    PointMap(SpaceMap),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Logic(_) => "logic",
            Document::Poset(_) => "poset",
            Document::Lattice(_) => "lattice",
            Document::Space(_) => "space",
            Document::LogicMap(_) => "logic_map",
            Document::PointMap(_) => "point_map",
        }
    }
}

/// Parses a document; string-valued `source`/`target` references resolve
/// against the working directory.
pub fn parse_document(text: &str) -> Result<Document, IoError> {
    parse_with_base(text, None)
}

/// Reads and parses a file; references resolve against its directory.
pub fn parse_document_at(path: &Path) -> Result<Document, IoError> {
    let text = read(path)?;
    parse_with_base(&text, path.parent())
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path)
        .map_err(|e| IoError::Read { file: path.display().to_string(), message: e.to_string() })
}

fn parse_with_base(text: &str, base: Option<&Path>) -> Result<Document, IoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Reader { base: base.map(Path::to_path_buf) }.document(&value, "")
}

struct Reader {
    base: Option<PathBuf>,
}

impl Reader {
    fn document(&self, v: &Value, path: &str) -> Result<Document, IoError> {
        let obj = object(v, path)?;
        let kind = string(field(obj, "kind", path)?, &format!("{path}/kind"))?;
        match kind {
            "logic" => Ok(Document::Logic(logic(obj, path)?)),
            "poset" => Ok(Document::Poset(poset(obj, path)?)),
            "lattice" => Ok(Document::Lattice(lattice(obj, path)?)),
            "space" => Ok(Document::Space(space(obj, path)?)),
            "logic_map" => {
                let source = self.sub_logic(obj, "source", path)?;
                let target = self.sub_logic(obj, "target", path)?;
                let map = index_map(obj, path, source.universe(), target.universe())?;
                Ok(Document::LogicMap(LogicMap { source, target, map }))
            }
            "point_map" => {
                let source = self.sub_space(obj, "source", path)?;
                let target = self.sub_space(obj, "target", path)?;
                let map = index_map(obj, path, source.point_count(), target.point_count())?;
                Ok(Document::PointMap(SpaceMap { source, target, map }))
            }
            other => Err(schema(&format!("{path}/kind"), format!("unknown kind {other:?}"))),
        }
    }

    fn sub(&self, obj: &Map<String, Value>, key: &str, path: &str) -> Result<Document, IoError> {
        let p = format!("{path}/{key}");
        match field(obj, key, path)? {
            Value::String(file) => {
                let full = match &self.base {
                    Some(b) => b.join(file),
                    None => PathBuf::from(file),
                };
                let text = read(&full)?;
                parse_with_base(&text, full.parent())
            }
            v => self.document(v, &p),
        }
    }

    fn sub_logic(&self, obj: &Map<String, Value>, key: &str, path: &str) -> Result<AbstractLogic, IoError> {
        match self.sub(obj, key, path)? {
            Document::Logic(l) => Ok(l),
            d => Err(schema(&format!("{path}/{key}"), format!("expected a logic, found {}", d.kind()))),
        }
    }

    fn sub_space(&self, obj: &Map<String, Value>, key: &str, path: &str) -> Result<FiniteSpace, IoError> {
        match self.sub(obj, key, path)? {
            Document::Space(s) => Ok(s),
            d => Err(schema(&format!("{path}/{key}"), format!("expected a space, found {}", d.kind()))),
        }
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| schema(&format!("{path}/{key}"), "missing field"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, IoError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn index(v: &Value, path: &str, bound: usize) -> Result<usize, IoError> {
    let i = v.as_u64().ok_or_else(|| schema(path, "expected a non-negative integer"))? as usize;
    if i >= bound {
        return Err(schema(path, format!("index {i} out of range for size {bound}")));
    }
    Ok(i)
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>, IoError> {
    let items = array(v, path)?;
    let out = items
        .iter()
        .enumerate()
        .map(|(i, s)| string(s, &format!("{path}/{i}")).map(str::to_string))
        .collect::<Result<Vec<_>, _>>()?;
    if out.len() > MAX_UNIVERSE {
        return Err(schema(path, format!("more than {MAX_UNIVERSE} entries")));
    }
    Ok(out)
}

fn index_set(v: &Value, path: &str, bound: usize) -> Result<Subset, IoError> {
    let items = array(v, path)?;
    let idx = items
        .iter()
        .enumerate()
        .map(|(i, x)| index(x, &format!("{path}/{i}"), bound))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subset::from_indices(bound, idx).expect("indices checked"))
}

fn table(v: &Value, path: &str, n: usize) -> Result<BinaryTable, IoError> {
    let rows = array(v, path)?;
    if rows.len() != n {
        return Err(schema(path, format!("expected {n} rows")));
    }
    let mut cells = Vec::with_capacity(n);
    for (r, row) in rows.iter().enumerate() {
        let rp = format!("{path}/{r}");
        let row = array(row, &rp)?;
        if row.len() != n {
            return Err(schema(&rp, format!("expected {n} entries")));
        }
        cells.push(
            row.iter().enumerate().map(|(c, x)| index(x, &format!("{rp}/{c}"), n)).collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(BinaryTable::from_rows(cells).expect("shape checked"))
}

fn logic(obj: &Map<String, Value>, path: &str) -> Result<AbstractLogic, IoError> {
    let names = strings(field(obj, "exprs", path)?, &format!("{path}/exprs"))?;
    let n = names.len();
    let tp = format!("{path}/theories");
    let theories = array(field(obj, "theories", path)?, &tp)?
        .iter()
        .enumerate()
        .map(|(i, t)| index_set(t, &format!("{tp}/{i}"), n))
        .collect::<Result<Vec<_>, _>>()?;
    let family = TheoryFamily::new(n, theories).map_err(|e| schema(&tp, e.to_string()))?;
    let mut tables = ConnectiveTables::default();
    if let Some(c) = obj.get("connectives") {
        let cp = format!("{path}/connectives");
        let c = object(c, &cp)?;
        for key in c.keys() {
            if !["join", "meet", "impl", "neg", "top", "bottom"].contains(&key.as_str()) {
                return Err(schema(&format!("{cp}/{key}"), "unknown connective"));
            }
        }
        let bin = |k: &str| c.get(k).map(|v| table(v, &format!("{cp}/{k}"), n)).transpose();
        tables.join = bin("join")?;
        tables.meet = bin("meet")?;
        tables.implication = bin("impl")?;
        if let Some(v) = c.get("neg") {
            let np = format!("{cp}/neg");
            let items = array(v, &np)?;
            if items.len() != n {
                return Err(schema(&np, format!("expected {n} entries")));
            }
            tables.negation = Some(
                items.iter().enumerate().map(|(i, x)| index(x, &format!("{np}/{i}"), n)).collect::<Result<_, _>>()?,
            );
        }
        tables.top = c.get("top").map(|v| index(v, &format!("{cp}/top"), n)).transpose()?;
        tables.bottom = c.get("bottom").map(|v| index(v, &format!("{cp}/bottom"), n)).transpose()?;
    }
    AbstractLogic::new(names, family, tables).map_err(|e| schema(path, e.to_string()))
}

fn name_pairs(v: &Value, path: &str) -> Result<Vec<(String, String)>, IoError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let pp = format!("{path}/{i}");
            let pair = array(p, &pp)?;
            if pair.len() != 2 {
                return Err(schema(&pp, "expected a pair"));
            }
            Ok((string(&pair[0], &format!("{pp}/0"))?.to_string(), string(&pair[1], &format!("{pp}/1"))?.to_string()))
        })
        .collect()
}

fn poset(obj: &Map<String, Value>, path: &str) -> Result<FinitePoset, IoError> {
    let names = strings(field(obj, "elements", path)?, &format!("{path}/elements"))?;
    let lp = format!("{path}/leq");
    let pairs = match obj.get("leq") {
        Some(v) => name_pairs(v, &lp)?,
        None => Vec::new(),
    };
    FinitePoset::from_named_pairs(names, &pairs).map_err(|e| schema(&lp, e.to_string()))
}

fn lattice(obj: &Map<String, Value>, path: &str) -> Result<FiniteLattice, IoError> {
    let order = poset(obj, path)?;
    let l = FiniteLattice::from_poset(&order).map_err(|e| schema(&format!("{path}/leq"), e.to_string()))?;
    match obj.get("heyting") {
        None | Some(Value::Bool(false)) => Ok(l),
        Some(Value::Bool(true)) => {
            l.with_heyting_implication().map_err(|e| schema(&format!("{path}/heyting"), e.to_string()))
        }
        Some(_) => Err(schema(&format!("{path}/heyting"), "expected a boolean")),
    }
}

fn space(obj: &Map<String, Value>, path: &str) -> Result<FiniteSpace, IoError> {
    let names = strings(field(obj, "points", path)?, &format!("{path}/points"))?;
    let n = names.len();
    let bp = format!("{path}/basis");
    let mut basis = Vec::new();
    for (i, b) in array(field(obj, "basis", path)?, &bp)?.iter().enumerate() {
        let ip = format!("{bp}/{i}");
        match b {
            Value::Array(_) => {
                let s = index_set(b, &ip, n)?;
                basis.push((s.display_with(&names), s));
            }
            Value::Object(o) => {
                let s = index_set(field(o, "points", &ip)?, &format!("{ip}/points"), n)?;
                match o.get("names") {
                    Some(ns) => {
                        for name in strings(ns, &format!("{ip}/names"))? {
                            basis.push((name, s));
                        }
                    }
                    None => basis.push((s.display_with(&names), s)),
                }
            }
            _ => return Err(schema(&ip, "expected an index array or an object")),
        }
    }
    FiniteSpace::new(names, basis).map_err(|e| schema(&bp, e.to_string()))
}

fn index_map(obj: &Map<String, Value>, path: &str, len: usize, bound: usize) -> Result<Vec<usize>, IoError> {
    let mp = format!("{path}/map");
    let items = array(field(obj, "map", path)?, &mp)?;
    if items.len() != len {
        return Err(schema(&mp, format!("expected {len} entries")));
    }
    items.iter().enumerate().map(|(i, x)| index(x, &format!("{mp}/{i}"), bound)).collect()
}

/// The document as a JSON value with canonical key order.
pub fn to_value(doc: &Document) -> Value {
    match doc {
        Document::Logic(l) => logic_value(l),
        Document::Poset(p) => poset_value(p),
        Document::Lattice(l) => lattice_value(l),
        Document::Space(s) => space_value(s),
        Document::LogicMap(h) => json!({
            "kind": "logic_map",
            "source": logic_value(&h.source),
            "target": logic_value(&h.target),
            "map": h.map,
        }),
        Document::PointMap(f) => json!({
            "kind": "point_map",
            "source": space_value(&f.source),
            "target": space_value(&f.target),
            "map": f.map,
        }),
    }
}

fn logic_value(l: &AbstractLogic) -> Value {
    let theories: Vec<Vec<usize>> = l.theories().iter().map(|t| t.to_vec()).collect();
    let c = l.connectives();
    let mut obj = Map::new();
    obj.insert("kind".into(), json!("logic"));
    obj.insert("exprs".into(), json!(l.expr_names()));
    obj.insert("theories".into(), json!(theories));
    if !c.is_empty() {
        let mut t = Map::new();
        for (k, v) in [("join", &c.join), ("meet", &c.meet), ("impl", &c.implication)] {
            if let Some(v) = v {
                t.insert(k.into(), json!(v.rows()));
            }
        }
        if let Some(n) = &c.negation {
            t.insert("neg".into(), json!(n));
        }
        if let Some(top) = c.top {
            t.insert("top".into(), json!(top));
        }
        if let Some(bottom) = c.bottom {
            t.insert("bottom".into(), json!(bottom));
        }
        obj.insert("connectives".into(), Value::Object(t));
    }
    Value::Object(obj)
}

fn covers_by_name(p: &FinitePoset) -> Vec<[String; 2]> {
    p.covers().into_iter().map(|(a, b)| [p.names()[a].clone(), p.names()[b].clone()]).collect()
}

fn poset_value(p: &FinitePoset) -> Value {
    json!({ "kind": "poset", "elements": p.names(), "leq": covers_by_name(p) })
}

fn lattice_value(l: &FiniteLattice) -> Value {
    let n = l.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && l.leq(a, b)).collect();
    let order = FinitePoset::from_pairs(l.names().to_vec(), &pairs).expect("lattice order is a partial order");
    let mut v = json!({ "kind": "lattice", "elements": l.names(), "leq": covers_by_name(&order) });
    if l.implication().is_some() {
        v["heyting"] = json!(true);
    }
    v
}

fn space_value(s: &FiniteSpace) -> Value {
    let basis: Vec<Value> =
        s.basis().iter().map(|b| json!({ "names": b.names, "points": b.points.to_vec() })).collect();
    json!({ "kind": "space", "points": s.point_names(), "basis": basis })
}

/// Canonical text of a JSON object: one top-level key per line.
pub fn emit_value(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(obj) if !obj.is_empty() => {
            out.push_str("{\n");
            let last = obj.len() - 1;
            for (i, (k, v)) in obj.iter().enumerate() {
                let key = serde_json::to_string(k).expect("strings serialize");
                let val = serde_json::to_string(v).expect("values serialize");
                let _ = write!(out, "  {key}: {val}");
                out.push_str(if i == last { "\n" } else { ",\n" });
            }
            out.push_str("}\n");
        }
        v => {
            out.push_str(&serde_json::to_string(v).expect("values serialize"));
            out.push('\n');
        }
    }
    out
}

pub fn emit_document(doc: &Document) -> String {
    emit_value(&to_value(doc))
}

pub enum DotInput<'a> {
    Poset(&'a FinitePoset),
    Order { order: &'a SpecializationOrder, names: &'a [String] },
    Space(&'a FiniteSpace),
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram of a preorder given by up-sets; mutually related points
/// get one two-headed edge.
fn hasse(names: &[String], leq: impl Fn(usize, usize) -> bool, out: &mut String) {
    let n = names.len();
    let lt = |a: usize, b: usize| leq(a, b) && !leq(b, a);
    for name in names {
        let _ = writeln!(out, "  {};", quote(name));
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            if lt(a, b) && !(0..n).any(|z| lt(a, z) && lt(z, b)) {
                let _ = writeln!(out, "  {} -> {};", quote(&names[a]), quote(&names[b]));
            } else if a < b && leq(a, b) && leq(b, a) {
                let _ = writeln!(out, "  {} -> {} [dir=both];", quote(&names[a]), quote(&names[b]));
            }
        }
    }
}

/// Deterministic DOT digraph with Hasse edges only, drawn bottom to top.
pub fn export_dot(input: DotInput<'_>) -> String {
    let mut out = String::new();
    match input {
        DotInput::Poset(p) => {
            out.push_str("digraph poset {\n  rankdir=BT;\n");
            hasse(p.names(), |a, b| p.leq(a, b), &mut out);
        }
        DotInput::Order { order, names } => {
            out.push_str("digraph specialization {\n  rankdir=BT;\n");
            hasse(names, |a, b| order.leq(a, b), &mut out);
        }
        DotInput::Space(s) => {
            out.push_str("digraph space {\n  rankdir=BT;\n  // basis:\n");
            for b in s.basis() {
                let _ = writeln!(out, "  //   {} = {}", b.label(), b.points.display_with(s.point_names()));
            }
            let order = s.specialization_order();
            hasse(s.point_names(), |a, b| order.leq(a, b), &mut out);
        }
    }
    out.push_str("}\n");
    out
}
