use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::{Digraph, DigraphError, LeveledDigraph, VertexKind};
use crate::numeric::{ExactValue, NumericError};

impl LeveledDigraph {
    /// `{"vertices": [{"id", "level", "kind"}], "edges": [[from, to]]}` with
    /// edges sorted by id pair.
    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = (0..self.vertex_count())
            .map(|v| {
                json!({
                    "id": self.digraph.id(v),
                    "level": self.levels[v].to_json(),
                    "kind": self.kinds[v].as_str(),
                })
            })
            .collect();
        let mut edges: Vec<(String, String)> = self
            .digraph
            .edges()
            .iter()
            .map(|&(u, v)| (self.digraph.id(u).to_string(), self.digraph.id(v).to_string()))
            .collect();
        edges.sort();
        json!({
            "vertices": vertices,
            "edges": edges.into_iter().map(|(u, v)| json!([u, v])).collect::<Vec<_>>(),
        })
    }
}

fn invalid(msg: impl Into<String>) -> DigraphError {
    DigraphError::InvalidGraph(msg.into())
}

/// Reads the form written by [`LeveledDigraph::to_json`]. Edges may also be
/// objects `{"from", "to"}`; a missing `kind` is derived from degrees.
pub fn parse_graph_json(v: &Value) -> Result<LeveledDigraph, DigraphError> {
    let empty = Map::new();
    let obj = v.as_object().unwrap_or(&empty);
    let vertices = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing vertices array"))?;
    let mut ids = Vec::with_capacity(vertices.len());
    let mut levels = Vec::with_capacity(vertices.len());
    let mut kinds = Vec::with_capacity(vertices.len());
    for vert in vertices {
        let id = vert
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid("vertex without string id"))?;
        let level = vert.get("level").ok_or_else(|| invalid(format!("vertex {id} has no level")))?;
        if level.get("certified").is_some() {
            return Err(NumericError::Parse(format!("certified level of {id} cannot be read back")).into());
        }
        ids.push(id.to_string());
        levels.push(ExactValue::from_json(level)?);
        kinds.push(match vert.get("kind").and_then(Value::as_str) {
            Some(k) => Some(VertexKind::parse(k).ok_or_else(|| invalid(format!("unknown kind {k}")))?),
            None => None,
        });
    }
    let lookup = |name: &Value| -> Result<usize, DigraphError> {
        let name = name.as_str().ok_or_else(|| invalid("edge endpoint is not a string"))?;
        ids.iter()
            .position(|x| x == name)
            .ok_or_else(|| invalid(format!("edge mentions unknown vertex {name}")))
    };
    let mut edges = Vec::new();
    for e in obj.get("edges").and_then(Value::as_array).into_iter().flatten() {
        let (from, to) = match e {
            Value::Array(pair) if pair.len() == 2 => (&pair[0], &pair[1]),
            Value::Object(m) => (
                m.get("from").ok_or_else(|| invalid("edge without from"))?,
                m.get("to").ok_or_else(|| invalid("edge without to"))?,
            ),
            _ => return Err(invalid(format!("bad edge {e}"))),
        };
        edges.push((lookup(from)?, lookup(to)?));
    }
    let digraph = Digraph::new(ids, edges)?;
    let kinds = kinds
        .into_iter()
        .enumerate()
        .map(|(v, k)| k.unwrap_or_else(|| VertexKind::from_degrees(digraph.in_degree(v), digraph.out_degree(v))))
        .collect();
    LeveledDigraph::with_kinds(digraph, levels, kinds)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering with one `rank=same` group per level, levels running
/// left to right.
pub fn to_dot(g: &LeveledDigraph, name: &str) -> Result<String, NumericError> {
    let ranks = super::level_ranks(&g.levels)?;
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    out.push_str("  rankdir=LR;\n  node [shape=circle, fontsize=10];\n");
    let top = ranks.iter().copied().max().unwrap_or(0);
    for r in 0..=top {
        let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| ranks[v] == r).collect();
        if members.is_empty() {
            continue;
        }
        out.push_str("  { rank=same;");
        for v in members {
            let label = format!("{}\\n{}", g.digraph.id(v), g.levels[v]);
            let _ = write!(out, " {} [label={}];", quote(g.digraph.id(v)), quote(&label));
        }
        out.push_str(" }\n");
    }
    let mut edges: Vec<(&str, &str)> = g
        .digraph
        .edges()
        .iter()
        .map(|&(u, v)| (g.digraph.id(u), g.digraph.id(v)))
        .collect();
    edges.sort();
    for (u, v) in edges {
        let _ = writeln!(out, "  {} -> {};", quote(u), quote(v));
    }
    out.push_str("}\n");
    Ok(out)
}
