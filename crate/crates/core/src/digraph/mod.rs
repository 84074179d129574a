//! Digraphs, rooted and balanced trees, the leveled target shapes, and
//! level-respecting isomorphism.

mod io;
mod iso;

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{ExactValue, NumericError};

pub use io::{parse_graph_json, to_dot};
pub use iso::{leveled_isomorphic, level_ranks, Isomorphism};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DigraphError {
    #[error("input graph is not a tree: {0}")]
    NotATree(String),
    #[error("invalid balanced-tree spec: {0}")]
    InvalidSpec(String),
    #[error("expected {expected} levels, got {got}")]
    LevelCountMismatch { expected: usize, got: usize },
    #[error("levels must be strictly increasing (position {0})")]
    LevelsNotIncreasing(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Finite digraph on indexed vertices. Parallel edges are kept as repeated
/// entries of the edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    ids: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(ids: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Digraph, DigraphError> {
        let mut seen = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            if seen.insert(id.clone(), i).is_some() {
                return Err(DigraphError::InvalidGraph(format!("duplicate vertex id {id}")));
            }
        }
        for &(u, v) in &edges {
            if u >= ids.len() || v >= ids.len() {
                return Err(DigraphError::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(DigraphError::InvalidGraph(format!("self-loop at {}", ids[u])));
            }
        }
        Ok(Digraph { ids, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.ids.len()).filter(|&v| self.in_degree(v) == 0).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.ids.len()).filter(|&v| self.out_degree(v) == 0).collect()
    }

    /// Connected components of the underlying undirected multigraph, each a
    /// sorted list of vertex indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.ids.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let label = out.len();
            let mut members = vec![start];
            comp[start] = label;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = label;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// First Betti number of the underlying multigraph: `E − V + c`.
    pub fn betti1(&self) -> usize {
        self.edges.len() + self.components().len() - self.ids.len()
    }

    pub fn reversed(&self) -> Digraph {
        Digraph {
            ids: self.ids.clone(),
            edges: self.edges.iter().map(|&(u, v)| (v, u)).collect(),
        }
    }
}

/// Undirected simple graph used as input to [`orient_from_root`].
#[derive(Debug, Clone)]
pub struct UndirectedGraph {
    pub ids: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn from_names(edges: &[(&str, &str)]) -> UndirectedGraph {
        let mut ids: Vec<String> = Vec::new();
        let index = |name: &str, ids: &mut Vec<String>| match ids.iter().position(|x| x == name) {
            Some(i) => i,
            None => {
                ids.push(name.to_string());
                ids.len() - 1
            }
        };
        let mut out = Vec::new();
        for (a, b) in edges {
            let u = index(a, &mut ids);
            let v = index(b, &mut ids);
            out.push((u, v));
        }
        UndirectedGraph { ids, edges: out }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub digraph: Digraph,
    pub root: usize,
    pub leaves: Vec<usize>,
}

impl RootedTree {
    /// Checks the rooted-tree conditions: a tree (`|E| = |V| − 1`,
    /// connected), the root is the only source, every other vertex has
    /// in-degree one, and the leaves are exactly the sinks.
    pub fn check(&self) -> Result<(), DigraphError> {
        let g = &self.digraph;
        let n = g.vertex_count();
        if n < 2 {
            return Err(DigraphError::NotATree("trivial graph".into()));
        }
        if g.edge_count() + 1 != n || !g.is_connected() {
            return Err(DigraphError::NotATree("not connected and acyclic".into()));
        }
        for v in 0..n {
            let (din, dout) = (g.in_degree(v), g.out_degree(v));
            if v == self.root {
                if din != 0 || dout == 0 {
                    return Err(DigraphError::NotATree(format!("root {} is not a source", g.id(v))));
                }
            } else if din != 1 {
                return Err(DigraphError::NotATree(format!("{} has in-degree {din}", g.id(v))));
            }
        }
        let mut sinks = g.sinks();
        let mut leaves = self.leaves.clone();
        sinks.sort_unstable();
        leaves.sort_unstable();
        if sinks != leaves {
            return Err(DigraphError::NotATree("leaves differ from sinks".into()));
        }
        Ok(())
    }

    /// Depth of every vertex (edges from the root).
    pub fn depths(&self) -> Vec<usize> {
        let g = &self.digraph;
        let mut depth = vec![usize::MAX; g.vertex_count()];
        depth[self.root] = 0;
        let mut queue = VecDeque::from([self.root]);
        while let Some(u) = queue.pop_front() {
            for &(a, b) in g.edges() {
                if a == u && depth[b] == usize::MAX {
                    depth[b] = depth[u] + 1;
                    queue.push_back(b);
                }
            }
        }
        depth
    }
}

/// Orients every edge of a finite tree away from `root`.
pub fn orient_from_root(tree: &UndirectedGraph, root: usize) -> Result<RootedTree, DigraphError> {
    let n = tree.ids.len();
    if root >= n {
        return Err(DigraphError::NotATree("root out of range".into()));
    }
    if tree.edges.len() + 1 != n {
        return Err(DigraphError::NotATree(format!(
            "{} vertices but {} edges",
            n,
            tree.edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &tree.edges {
        if u == v {
            return Err(DigraphError::NotATree("self-loop".into()));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut visited = vec![false; n];
    visited[root] = true;
    let mut edges = Vec::with_capacity(n - 1);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !visited[w] {
                visited[w] = true;
                edges.push((u, w));
                queue.push_back(w);
            }
        }
    }
    if visited.iter().any(|v| !v) {
        return Err(DigraphError::NotATree("disconnected".into()));
    }
    let digraph = Digraph::new(tree.ids.clone(), edges)?;
    let leaves = digraph.sinks();
    Ok(RootedTree { digraph, root, leaves })
}

/// Children counts per depth: `children[i]` is the number of children of
/// every vertex at depth `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedTreeSpec {
    pub children: Vec<u32>,
}

impl BalancedTreeSpec {
    pub fn new(children: Vec<u32>) -> Result<BalancedTreeSpec, DigraphError> {
        let spec = BalancedTreeSpec { children };
        spec.validate()?;
        Ok(spec)
    }

    pub fn depth(&self) -> usize {
        self.children.len()
    }

    pub fn validate(&self) -> Result<(), DigraphError> {
        if self.children.is_empty() {
            return Err(DigraphError::InvalidSpec("depth must be at least 1".into()));
        }
        if let Some(i) = self.children.iter().position(|&n| n == 0) {
            return Err(DigraphError::InvalidSpec(format!("children[{i}] must be at least 1")));
        }
        Ok(())
    }

    pub fn leaf_count(&self) -> u64 {
        self.children.iter().map(|&n| n as u64).product()
    }

    /// `1 + Σ_i Π_{j≤i} n_j`
    pub fn vertex_count(&self) -> u64 {
        let mut total = 1u64;
        let mut layer = 1u64;
        for &n in &self.children {
            layer *= n as u64;
            total += layer;
        }
        total
    }

    /// Depths whose child count is 1, which the realization theorems exclude.
    pub fn unit_depths(&self) -> Vec<usize> {
        self.children
            .iter()
            .enumerate()
            .filter(|(_, &n)| n == 1)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl fmt::Display for BalancedTreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.children.iter().map(|n| n.to_string()).collect();
        write!(f, "({{{}}}, {})", parts.join(","), self.children.len())
    }
}

struct TreeLayout {
    ids: Vec<String>,
    edges: Vec<(usize, usize)>,
    depth: Vec<usize>,
}

/// Vertices named `prefix` (root) and `prefix.i.j…` by child path.
fn layout(spec: &BalancedTreeSpec, root_id: &str, child_prefix: &str) -> TreeLayout {
    let mut ids = vec![root_id.to_string()];
    let mut depth = vec![0];
    let mut edges = Vec::new();
    let mut frontier: Vec<(usize, String)> = vec![(0, child_prefix.to_string())];
    for (d, &n) in spec.children.iter().enumerate() {
        let mut next = Vec::new();
        for (parent, path) in &frontier {
            for c in 0..n {
                let child_path = format!("{path}.{c}");
                ids.push(child_path.clone());
                depth.push(d + 1);
                edges.push((*parent, ids.len() - 1));
                next.push((ids.len() - 1, child_path));
            }
        }
        frontier = next;
    }
    TreeLayout { ids, edges, depth }
}

pub fn balanced_tree(spec: &BalancedTreeSpec) -> Result<RootedTree, DigraphError> {
    spec.validate()?;
    let t = layout(spec, "r", "r");
    let digraph = Digraph::new(t.ids, t.edges)?;
    let leaves = digraph.sinks();
    Ok(RootedTree { digraph, root: 0, leaves })
}

/// Shape of a vertex in a leveled digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Birth,
    Death,
    Branch,
    Merge,
    MergeBranch,
    SingularFlat,
    Regular,
}

impl VertexKind {
    pub fn from_degrees(din: usize, dout: usize) -> VertexKind {
        match (din, dout) {
            (0, _) => VertexKind::Birth,
            (_, 0) => VertexKind::Death,
            (1, 1) => VertexKind::SingularFlat,
            (1, _) => VertexKind::Branch,
            (_, 1) => VertexKind::Merge,
            _ => VertexKind::MergeBranch,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            VertexKind::Birth => "birth",
            VertexKind::Death => "death",
            VertexKind::Branch => "branch",
            VertexKind::Merge => "merge",
            VertexKind::MergeBranch => "merge_branch",
            VertexKind::SingularFlat => "singular_flat",
            VertexKind::Regular => "regular",
        }
    }

    pub fn parse(s: &str) -> Option<VertexKind> {
        Some(match s {
            "birth" => VertexKind::Birth,
            "death" => VertexKind::Death,
            "branch" => VertexKind::Branch,
            "merge" => VertexKind::Merge,
            "merge_branch" => VertexKind::MergeBranch,
            "singular_flat" => VertexKind::SingularFlat,
            "regular" => VertexKind::Regular,
            _ => return None,
        })
    }
}

/// A digraph whose vertices carry exact levels, every edge rising.
#[derive(Debug, Clone, PartialEq)]
pub struct LeveledDigraph {
    pub digraph: Digraph,
    pub levels: Vec<ExactValue>,
    pub kinds: Vec<VertexKind>,
}

impl LeveledDigraph {
    pub fn new(digraph: Digraph, levels: Vec<ExactValue>) -> Result<LeveledDigraph, DigraphError> {
        let kinds = (0..digraph.vertex_count())
            .map(|v| VertexKind::from_degrees(digraph.in_degree(v), digraph.out_degree(v)))
            .collect();
        LeveledDigraph::with_kinds(digraph, levels, kinds)
    }

    pub fn with_kinds(
        digraph: Digraph,
        levels: Vec<ExactValue>,
        kinds: Vec<VertexKind>,
    ) -> Result<LeveledDigraph, DigraphError> {
        if levels.len() != digraph.vertex_count() || kinds.len() != digraph.vertex_count() {
            return Err(DigraphError::InvalidGraph("one level and kind per vertex required".into()));
        }
        let g = LeveledDigraph { digraph, levels, kinds };
        g.check_levels()?;
        Ok(g)
    }

    /// Every edge `(u, v)` must satisfy `level(u) < level(v)`.
    pub fn check_levels(&self) -> Result<(), DigraphError> {
        for &(u, v) in self.digraph.edges() {
            if self.levels[u].compare(&self.levels[v])? != Ordering::Less {
                return Err(DigraphError::InvalidGraph(format!(
                    "edge {} -> {} does not rise in level",
                    self.digraph.id(u),
                    self.digraph.id(v)
                )));
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.digraph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.digraph.edge_count()
    }

    /// Distinct vertex levels in increasing order.
    pub fn level_set(&self) -> Result<Vec<ExactValue>, NumericError> {
        let mut out: Vec<ExactValue> = Vec::new();
        for level in &self.levels {
            let mut pos = out.len();
            let mut dup = false;
            for (i, existing) in out.iter().enumerate() {
                match level.compare(existing)? {
                    Ordering::Equal => {
                        dup = true;
                        break;
                    }
                    Ordering::Less => {
                        pos = i;
                        break;
                    }
                    Ordering::Greater => {}
                }
            }
            if !dup {
                out.insert(pos, level.clone());
            }
        }
        Ok(out)
    }
}

fn check_increasing(levels: &[ExactValue]) -> Result<(), DigraphError> {
    for i in 1..levels.len() {
        if levels[i - 1].compare(&levels[i])? != Ordering::Less {
            return Err(DigraphError::LevelsNotIncreasing(i));
        }
    }
    Ok(())
}

/// Balanced tree with an extra stem vertex entering the root. The stem sits
/// at `levels[0]`, the root at `levels[1]` and depth-`i` vertices at
/// `levels[i + 1]`.
pub fn target_theorem1(spec: &BalancedTreeSpec, levels: &[ExactValue]) -> Result<LeveledDigraph, DigraphError> {
    spec.validate()?;
    let expected = spec.depth() + 2;
    if levels.len() != expected {
        return Err(DigraphError::LevelCountMismatch {
            expected,
            got: levels.len(),
        });
    }
    check_increasing(levels)?;
    let t = layout(spec, "r", "d");
    let mut ids = vec!["v1".to_string()];
    ids.extend(t.ids);
    let mut edges = vec![(0, 1)];
    edges.extend(t.edges.iter().map(|&(u, v)| (u + 1, v + 1)));
    let mut lv = vec![levels[0].clone()];
    lv.extend(t.depth.iter().map(|&d| levels[d + 1].clone()));
    LeveledDigraph::new(Digraph::new(ids, edges)?, lv)
}

/// Two balanced trees glued at their roots, the first with reversed
/// orientation. With depths `d₁`, `d₂`, the first tree's depth-`i` vertices
/// sit at `levels[d₁ − i]`, the shared root at `levels[d₁]` and the second
/// tree's depth-`i` vertices at `levels[d₁ + i]`.
pub fn target_theorem2(
    first: &BalancedTreeSpec,
    second: &BalancedTreeSpec,
    levels: &[ExactValue],
) -> Result<LeveledDigraph, DigraphError> {
    first.validate()?;
    second.validate()?;
    let (d1, d2) = (first.depth(), second.depth());
    let expected = d1 + d2 + 1;
    if levels.len() != expected {
        return Err(DigraphError::LevelCountMismatch {
            expected,
            got: levels.len(),
        });
    }
    check_increasing(levels)?;
    let up = layout(first, "r", "u");
    let down = layout(second, "r", "d");
    let mut ids = up.ids.clone();
    let mut lv: Vec<ExactValue> = up.depth.iter().map(|&d| levels[d1 - d].clone()).collect();
    let mut edges: Vec<(usize, usize)> = up.edges.iter().map(|&(p, c)| (c, p)).collect();
    let offset = ids.len() - 1;
    // skip the second root; it is identified with the first
    let remap = |v: usize| if v == 0 { 0 } else { v + offset };
    ids.extend(down.ids.into_iter().skip(1));
    lv.extend(down.depth.iter().skip(1).map(|&d| levels[d1 + d].clone()));
    edges.extend(down.edges.iter().map(|&(p, c)| (remap(p), remap(c))));
    LeveledDigraph::new(Digraph::new(ids, edges)?, lv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    fn levels(xs: &[i64]) -> Vec<ExactValue> {
        xs.iter().map(|&x| ExactValue::Rational(int(x))).collect()
    }

    fn names(t: &RootedTree, vs: &[usize]) -> Vec<String> {
        let mut out: Vec<String> = vs.iter().map(|&v| t.digraph.id(v).to_string()).collect();
        out.sort();
        out
    }

    fn edge_names(g: &Digraph) -> Vec<(String, String)> {
        let mut out: Vec<_> = g
            .edges()
            .iter()
            .map(|&(u, v)| (g.id(u).to_string(), g.id(v).to_string()))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn orient_path_from_middle_and_end() {
        let path = UndirectedGraph::from_names(&[("a", "b"), ("b", "c")]);
        let t = orient_from_root(&path, 1).unwrap();
        t.check().unwrap();
        assert_eq!(
            edge_names(&t.digraph),
            vec![("b".into(), "a".into()), ("b".into(), "c".into())]
        );
        assert_eq!(names(&t, &t.leaves), vec!["a", "c"]);

        let t = orient_from_root(&path, 0).unwrap();
        assert_eq!(
            edge_names(&t.digraph),
            vec![("a".into(), "b".into()), ("b".into(), "c".into())]
        );
        assert_eq!(names(&t, &t.leaves), vec!["c"]);
    }

    #[test]
    fn orient_star_from_tip() {
        let star = UndirectedGraph::from_names(&[("x", "p"), ("x", "q"), ("x", "r")]);
        let p = star.ids.iter().position(|s| s == "p").unwrap();
        let t = orient_from_root(&star, p).unwrap();
        t.check().unwrap();
        assert_eq!(
            edge_names(&t.digraph),
            vec![
                ("p".into(), "x".into()),
                ("x".into(), "q".into()),
                ("x".into(), "r".into())
            ]
        );
        assert_eq!(names(&t, &t.leaves), vec!["q", "r"]);
    }

    #[test]
    fn orient_rejects_cycles_and_forests() {
        let cycle = UndirectedGraph::from_names(&[("a", "b"), ("b", "c"), ("c", "a")]);
        assert!(matches!(orient_from_root(&cycle, 0), Err(DigraphError::NotATree(_))));
        let forest = UndirectedGraph {
            ids: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            edges: vec![(0, 1), (2, 3), (2, 3)],
        };
        assert!(matches!(orient_from_root(&forest, 0), Err(DigraphError::NotATree(_))));
    }

    #[test]
    fn balanced_tree_examples() {
        let t = balanced_tree(&BalancedTreeSpec::new(vec![2, 3]).unwrap()).unwrap();
        t.check().unwrap();
        assert_eq!(t.digraph.vertex_count(), 9);
        assert_eq!(t.leaves.len(), 6);

        let path = balanced_tree(&BalancedTreeSpec::new(vec![1, 1, 1]).unwrap()).unwrap();
        path.check().unwrap();
        assert_eq!(path.digraph.vertex_count(), 4);
        assert_eq!(path.leaves.len(), 1);
        assert!((0..4).all(|v| path.digraph.out_degree(v) <= 1));

        let t = balanced_tree(&BalancedTreeSpec::new(vec![2]).unwrap()).unwrap();
        assert_eq!(t.digraph.out_degree(t.root), 2);
        assert_eq!(t.leaves.len(), 2);

        assert!(BalancedTreeSpec::new(vec![]).is_err());
        assert!(BalancedTreeSpec::new(vec![2, 0]).is_err());
    }

    #[test]
    fn balanced_trees_satisfy_rooted_invariants() {
        let mut specs = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for s in &specs {
                for n in 1..=4u32 {
                    let mut t: Vec<u32> = s.clone();
                    t.push(n);
                    next.push(t);
                }
            }
            for s in &next {
                let spec = BalancedTreeSpec::new(s.clone()).unwrap();
                let t = balanced_tree(&spec).unwrap();
                t.check().unwrap();
                assert_eq!(t.digraph.vertex_count() as u64, spec.vertex_count());
                assert_eq!(t.leaves.len() as u64, spec.leaf_count());
                let depths = t.depths();
                assert!(t.leaves.iter().all(|&l| depths[l] == s.len()));
                for v in 0..t.digraph.vertex_count() {
                    if depths[v] < s.len() {
                        assert_eq!(t.digraph.out_degree(v), s[depths[v]] as usize);
                    }
                }
            }
            specs = next;
        }
    }

    #[test]
    fn theorem1_targets() {
        let g = target_theorem1(&BalancedTreeSpec::new(vec![2]).unwrap(), &levels(&[0, 1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let v1 = g.digraph.index_of("v1").unwrap();
        let root = g.digraph.index_of("r").unwrap();
        assert_eq!(g.digraph.out_degree(v1), 1);
        assert_eq!((g.digraph.in_degree(root), g.digraph.out_degree(root)), (1, 2));
        assert_eq!(g.level_set().unwrap(), levels(&[0, 1, 2]));

        let g = target_theorem1(&BalancedTreeSpec::new(vec![2, 3]).unwrap(), &levels(&[0, 1, 2, 3])).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 9);
        let sinks = g.digraph.sinks();
        assert_eq!(sinks.len(), 6);
        assert!(sinks.iter().all(|&s| g.levels[s] == ExactValue::Rational(int(3))));

        let g = target_theorem1(&BalancedTreeSpec::new(vec![1]).unwrap(), &levels(&[0, 1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.digraph.sources().len(), 1);
        assert_eq!(g.digraph.sinks().len(), 1);

        let err = target_theorem1(&BalancedTreeSpec::new(vec![2]).unwrap(), &levels(&[0, 1])).unwrap_err();
        assert_eq!(err, DigraphError::LevelCountMismatch { expected: 3, got: 2 });
        let err = target_theorem1(&BalancedTreeSpec::new(vec![2]).unwrap(), &levels(&[0, 2, 1])).unwrap_err();
        assert_eq!(err, DigraphError::LevelsNotIncreasing(2));
    }

    #[test]
    fn theorem2_targets() {
        let two = BalancedTreeSpec::new(vec![2]).unwrap();
        let three = BalancedTreeSpec::new(vec![3]).unwrap();
        let g = target_theorem2(&two, &three, &levels(&[0, 1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 6);
        let sources = g.digraph.sources();
        assert_eq!(sources.len(), 2);
        assert!(sources.iter().all(|&s| g.levels[s] == ExactValue::Rational(int(0))));
        let root = g.digraph.index_of("r").unwrap();
        assert_eq!((g.digraph.in_degree(root), g.digraph.out_degree(root)), (2, 3));
        assert_eq!(g.kinds[root], VertexKind::MergeBranch);
        assert_eq!(g.digraph.sinks().len(), 3);

        let x = target_theorem2(&two, &two, &levels(&[0, 1, 2])).unwrap();
        assert_eq!((x.vertex_count(), x.edge_count()), (5, 4));
    }

    #[test]
    fn theorem2_counts() {
        let specs = [vec![2], vec![3], vec![2, 2], vec![2, 3], vec![3, 2]];
        for a in &specs {
            for b in &specs {
                let sa = BalancedTreeSpec::new(a.clone()).unwrap();
                let sb = BalancedTreeSpec::new(b.clone()).unwrap();
                let lv: Vec<i64> = (0..(a.len() + b.len() + 1) as i64).collect();
                let g = target_theorem2(&sa, &sb, &levels(&lv)).unwrap();
                assert_eq!(g.edge_count() + 1, g.vertex_count());
                assert_eq!(g.digraph.sources().len() as u64, sa.leaf_count());
                assert_eq!(g.digraph.sinks().len() as u64, sb.leaf_count());
                assert!(g.digraph.is_connected());
            }
        }
    }
}
