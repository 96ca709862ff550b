//! JSON file formats for graphs, tiling systems, terms and decompositions.
//!
//! Weights are always written in the semiring's text syntax. Nested
//! k-tree-terms can be arbitrarily deep, so parsing lifts serde_json's
//! recursion limit and walks terms with an explicit stack; rendering deep
//! terms needs a correspondingly large thread stack.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::decomp::{DecompError, KSymbol, KTreeTerm, KWord, Op, PathDecomposition, TdNode, TreeDecomposition};
use crate::graph::{Edge, Graph, GraphError, Signature};
use crate::semiring::{Semiring, SemiringError};
use crate::term::{TermBuilder, TermError};
use crate::wts::{NameMap, Tile, Wts, WtsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Wts(#[from] WtsError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Term(#[from] TermError),
}

fn format_err(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

/// Parses a JSON document without a nesting limit.
pub fn parse_json(text: &str) -> Result<Value, IoError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let v = Value::deserialize(&mut de).map_err(|e| IoError::Json(e.to_string()))?;
    de.end().map_err(|e| IoError::Json(e.to_string()))?;
    Ok(v)
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> Result<T, IoError> {
    serde_json::from_value(v).map_err(|e| format_err(format!("malformed {what}: {e}")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    sigma: Vec<String>,
    gamma: Vec<String>,
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: usize,
    label: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    name: String,
    src: usize,
    dst: usize,
}

pub fn graph_from_json(v: Value) -> Result<Graph, IoError> {
    let file: GraphFile = from_value(v, "graph")?;
    let sig = Signature::new(file.gamma, file.sigma)?;
    let n = file.vertices.len();
    let mut labels = vec![None; n];
    for rec in &file.vertices {
        if rec.id >= n {
            return Err(GraphError::NonDenseIds {
                expected: n,
                found: rec.id,
            }
            .into());
        }
        if labels[rec.id].is_some() {
            return Err(format_err(format!("vertex {} is listed twice", rec.id)));
        }
        labels[rec.id] = Some(sig.label(&rec.label)?);
    }
    let labels = labels.into_iter().map(|l| l.expect("ids are dense")).collect();
    let edges = file
        .edges
        .iter()
        .map(|e| {
            Ok(Edge {
                name: sig.edge_name(&e.name)?,
                src: e.src,
                dst: e.dst,
            })
        })
        .collect::<Result<Vec<_>, GraphError>>()?;
    Ok(Graph::build(sig, labels, &edges)?)
}

pub fn graph_to_json(g: &Graph) -> Value {
    let sig = g.signature();
    let vertices: Vec<Value> = g
        .vertices()
        .map(|v| json!({"id": v, "label": sig.label_str(g.label(v))}))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .map(|e| json!({"name": sig.edge_name_str(e.name), "src": e.src, "dst": e.dst}))
        .collect();
    json!({"sigma": sig.sigma(), "gamma": sig.gamma(), "vertices": vertices, "edges": edges})
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    graph_from_json(parse_json(text)?)
}

pub fn render_graph(g: &Graph) -> String {
    pretty(&graph_to_json(g))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WtsFile {
    semiring: String,
    sigma: Vec<String>,
    gamma: Vec<String>,
    states: Vec<String>,
    tiles: Vec<TileRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TileRecord {
    #[serde(rename = "in", default)]
    f_in: BTreeMap<String, String>,
    state: String,
    label: String,
    #[serde(rename = "out", default)]
    f_out: BTreeMap<String, String>,
    weight: Value,
}

fn weight_text(v: &Value) -> Result<String, IoError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format_err(format!("weight must be a string, found {other}"))),
    }
}

pub fn wts_from_json(v: Value) -> Result<Wts, IoError> {
    let file: WtsFile = from_value(v, "tiling system")?;
    let semiring = Semiring::by_name(&file.semiring)?;
    let sig = Signature::new(file.gamma, file.sigma)?;
    let index: BTreeMap<&str, usize> = file.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let state = |name: &str| {
        index
            .get(name)
            .map(|&i| crate::wts::StateId(i as u16))
            .ok_or_else(|| WtsError::UnknownStateName(name.to_string()))
    };
    let map = |m: &BTreeMap<String, String>| -> Result<NameMap, IoError> {
        let pairs = m
            .iter()
            .map(|(name, q)| Ok((sig.edge_name(name)?, state(q)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(NameMap::from_pairs(pairs))
    };
    let mut tiles = Vec::with_capacity(file.tiles.len());
    for rec in &file.tiles {
        let tile = Tile::new(
            map(&rec.f_in)?,
            state(&rec.state)?,
            sig.label(&rec.label)?,
            map(&rec.f_out)?,
        );
        let w = semiring.parse(&weight_text(&rec.weight)?)?;
        tiles.push((tile, w));
    }
    if file.states.len() > u16::MAX as usize {
        return Err(format_err("too many states"));
    }
    Ok(Wts::new(sig, semiring, file.states.clone(), tiles)?)
}

pub fn wts_to_json(t: &Wts) -> Value {
    let sig = t.signature();
    let s = t.semiring();
    let map = |m: &NameMap| -> Map<String, Value> {
        m.iter()
            .map(|(n, q)| (sig.edge_name_str(n).to_string(), Value::from(t.state_name(q))))
            .collect()
    };
    let tiles: Vec<Value> = t
        .tiles()
        .iter()
        .map(|(tile, w)| {
            json!({
                "in": map(&tile.f_in),
                "state": t.state_name(tile.state),
                "label": sig.label_str(tile.label),
                "out": map(&tile.f_out),
                "weight": s.render(w),
            })
        })
        .collect();
    json!({
        "semiring": s.id().name(),
        "sigma": sig.sigma(),
        "gamma": sig.gamma(),
        "states": t.states(),
        "tiles": tiles,
    })
}

pub fn parse_wts(text: &str) -> Result<Wts, IoError> {
    wts_from_json(parse_json(text)?)
}

pub fn render_wts(t: &Wts) -> String {
    pretty(&wts_to_json(t))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| format_err(format!("missing field `{key}`")))
}

fn uint(obj: &Map<String, Value>, key: &str) -> Result<usize, IoError> {
    field(obj, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| format_err(format!("field `{key}` must be a non-negative integer")))
}

fn string<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str, IoError> {
    field(obj, key)?
        .as_str()
        .ok_or_else(|| format_err(format!("field `{key}` must be a string")))
}

fn object(v: &Value) -> Result<&Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| format_err("expected a JSON object"))
}

fn op_kind(obj: &Map<String, Value>) -> Result<&str, IoError> {
    string(obj, "op")
}

fn op_from_object(sig: &Signature, obj: &Map<String, Value>) -> Result<Op, IoError> {
    match op_kind(obj)? {
        "node" => Ok(Op::Node {
            color: uint(obj, "color")?,
            label: sig.label(string(obj, "label")?)?,
        }),
        "add" => Ok(Op::Add {
            name: sig.edge_name(string(obj, "name")?)?,
            src: uint(obj, "src")?,
            dst: uint(obj, "dst")?,
        }),
        "forget" => Ok(Op::Forget {
            color: uint(obj, "color")?,
        }),
        other => Err(format_err(format!("unknown op `{other}`"))),
    }
}

fn op_to_object(sig: &Signature, op: &Op) -> Map<String, Value> {
    let v = match *op {
        Op::Node { color, label } => json!({"op": "node", "color": color, "label": sig.label_str(label)}),
        Op::Add { name, src, dst } => json!({"op": "add", "name": sig.edge_name_str(name), "src": src, "dst": dst}),
        Op::Forget { color } => json!({"op": "forget", "color": color}),
    };
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

pub fn kword_to_json(sig: &Signature, w: &KWord) -> Value {
    let ops: Vec<Value> = w.ops.iter().map(|op| Value::Object(op_to_object(sig, op))).collect();
    json!({"k": w.k, "ops": ops})
}

pub fn kword_from_json(sig: &Signature, v: &Value) -> Result<KWord, IoError> {
    let obj = object(v)?;
    let k = uint(obj, "k")?;
    let ops = field(obj, "ops")?
        .as_array()
        .ok_or_else(|| format_err("field `ops` must be an array"))?
        .iter()
        .map(|op| op_from_object(sig, object(op)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KWord::new(k, ops))
}

/// Nested form: unary nodes keep their operand under `child`, `⊕` nodes
/// under `left` and `right`. The top level also carries `k`.
pub fn ktt_to_json(sig: &Signature, t: &KTreeTerm) -> Value {
    let mut built: Vec<Option<Value>> = Vec::with_capacity(t.len());
    for node in t.term().nodes() {
        let mut take = |i: usize| built[i].take().expect("children precede parents");
        let v = match node {
            crate::term::TermNode::Leaf(KSymbol::Op(op)) => Value::Object(op_to_object(sig, op)),
            crate::term::TermNode::Unary(KSymbol::Op(op), c) => {
                let mut m = op_to_object(sig, op);
                m.insert("child".into(), take(*c));
                Value::Object(m)
            }
            crate::term::TermNode::Binary(_, l, r) => {
                let (l, r) = (take(*l), take(*r));
                json!({"op": "union", "left": l, "right": r})
            }
            _ => unreachable!("k-tree-terms have matching arities"),
        };
        built.push(Some(v));
    }
    let mut root = built[t.term().root()].take().expect("root built");
    if let Value::Object(m) = &mut root {
        m.insert("k".into(), json!(t.k));
    }
    root
}

pub fn ktt_from_json(sig: &Signature, v: &Value) -> Result<KTreeTerm, IoError> {
    let k = uint(object(v)?, "k")?;
    let mut builder = TermBuilder::new();
    // (node, children already pushed)
    let mut stack: Vec<(&Value, bool)> = vec![(v, false)];
    let mut done: Vec<usize> = Vec::new();
    while let Some((node, expanded)) = stack.pop() {
        let obj = object(node)?;
        let kind = op_kind(obj)?;
        if !expanded {
            stack.push((node, true));
            match kind {
                "union" => {
                    stack.push((field(obj, "right")?, false));
                    stack.push((field(obj, "left")?, false));
                }
                "add" | "forget" => stack.push((field(obj, "child")?, false)),
                _ => {}
            }
            continue;
        }
        let id = match kind {
            "union" => {
                let r = done.pop().expect("right operand");
                let l = done.pop().expect("left operand");
                builder.binary(KSymbol::Union, l, r)
            }
            "node" => builder.leaf(KSymbol::Op(op_from_object(sig, obj)?)),
            _ => {
                let c = done.pop().expect("operand");
                builder.unary(KSymbol::Op(op_from_object(sig, obj)?), c)
            }
        };
        done.push(id);
    }
    let root = done.pop().expect("root");
    Ok(KTreeTerm::new(k, builder.finish(root)?)?)
}

/// A term file: a k-word or a k-tree-term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermFile {
    Word(KWord),
    Tree(KTreeTerm),
}

pub fn parse_term(sig: &Signature, text: &str) -> Result<TermFile, IoError> {
    let v = parse_json(text)?;
    if object(&v)?.contains_key("ops") {
        Ok(TermFile::Word(kword_from_json(sig, &v)?))
    } else {
        Ok(TermFile::Tree(ktt_from_json(sig, &v)?))
    }
}

pub fn render_term(sig: &Signature, t: &TermFile) -> String {
    match t {
        TermFile::Word(w) => pretty(&kword_to_json(sig, w)),
        TermFile::Tree(t) => pretty(&ktt_to_json(sig, t)),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathFile {
    bags: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    nodes: Vec<TreeNodeRecord>,
    root: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeNodeRecord {
    id: usize,
    bag: Vec<usize>,
    #[serde(default)]
    children: Vec<usize>,
}

/// A decomposition file: bags of a path, or a rooted tree of bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Path(PathDecomposition),
    Tree(TreeDecomposition),
}

impl Decomposition {
    /// Trees are kept; paths become degenerate trees.
    pub fn into_tree(self) -> TreeDecomposition {
        match self {
            Decomposition::Path(p) => TreeDecomposition::from_path(&p),
            Decomposition::Tree(t) => t,
        }
    }
}

pub fn decomposition_from_json(v: Value) -> Result<Decomposition, IoError> {
    if object(&v)?.contains_key("bags") {
        let file: PathFile = from_value(v, "path decomposition")?;
        return Ok(Decomposition::Path(PathDecomposition::new(file.bags)));
    }
    let file: TreeFile = from_value(v, "tree decomposition")?;
    let n = file.nodes.len();
    let mut nodes = vec![None; n];
    for rec in file.nodes {
        if rec.id >= n || nodes[rec.id].is_some() {
            return Err(format_err(format!(
                "tree node ids must be 0..{n} without repeats, found {}",
                rec.id
            )));
        }
        nodes[rec.id] = Some(TdNode {
            bag: rec.bag,
            children: rec.children,
        });
    }
    let nodes = nodes.into_iter().map(|n| n.expect("ids are dense")).collect();
    Ok(Decomposition::Tree(TreeDecomposition { nodes, root: file.root }))
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    match d {
        Decomposition::Path(p) => json!({"bags": p.bags}),
        Decomposition::Tree(t) => {
            let nodes: Vec<Value> = t
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| json!({"id": i, "bag": n.bag, "children": n.children}))
                .collect();
            json!({"nodes": nodes, "root": t.root})
        }
    }
}

pub fn parse_decomposition(text: &str) -> Result<Decomposition, IoError> {
    decomposition_from_json(parse_json(text)?)
}

pub fn render_decomposition(d: &Decomposition) -> String {
    pretty(&decomposition_to_json(d))
}

pub fn render_json(v: &Value) -> String {
    pretty(v)
}
