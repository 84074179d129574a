use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};

use super::LeveledDigraph;
use crate::numeric::{ExactValue, NumericError};

/// Vertex bijection from the first graph to the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub map: Vec<usize>,
}

impl Isomorphism {
    /// Pairs of vertex ids `(first, second)`, sorted by the first id.
    pub fn named_pairs(&self, a: &LeveledDigraph, b: &LeveledDigraph) -> Vec<(String, String)> {
        let mut out: Vec<_> = self
            .map
            .iter()
            .enumerate()
            .map(|(u, &v)| (a.digraph.id(u).to_string(), b.digraph.id(v).to_string()))
            .collect();
        out.sort();
        out
    }
}

/// Rank of each vertex level among the graph's distinct levels.
pub fn level_ranks(levels: &[ExactValue]) -> Result<Vec<usize>, NumericError> {
    let mut order: Vec<usize> = Vec::with_capacity(levels.len());
    for i in 0..levels.len() {
        // binary insertion keeps the number of certified comparisons low
        let (mut lo, mut hi) = (0, order.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if levels[order[mid]].compare(&levels[i])? == Ordering::Greater {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        order.insert(lo, i);
    }
    let mut ranks = vec![0; levels.len()];
    let mut rank = 0;
    for k in 0..order.len() {
        if k > 0 && levels[order[k - 1]].compare(&levels[order[k]])? != Ordering::Equal {
            rank += 1;
        }
        ranks[order[k]] = rank;
    }
    Ok(ranks)
}

struct Side {
    n: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    mult: HashMap<(usize, usize), usize>,
}

impl Side {
    fn new(g: &LeveledDigraph) -> Side {
        let n = g.vertex_count();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        let mut mult = HashMap::new();
        for &(u, v) in g.digraph.edges() {
            out[u].push(v);
            inn[v].push(u);
            *mult.entry((u, v)).or_insert(0) += 1;
        }
        Side { n, out, inn, mult }
    }

    fn m(&self, u: usize, v: usize) -> usize {
        self.mult.get(&(u, v)).copied().unwrap_or(0)
    }
}

type Signature = (usize, Vec<usize>, Vec<usize>);

/// Joint color refinement on both graphs so colors are comparable.
fn refine(a: &Side, b: &Side, ra: &[usize], rb: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut ca: Vec<usize> = ra.to_vec();
    let mut cb: Vec<usize> = rb.to_vec();
    let mut classes = usize::MAX;
    loop {
        let sig = |s: &Side, c: &[usize], v: usize| -> Signature {
            let mut o: Vec<usize> = s.out[v].iter().map(|&w| c[w]).collect();
            let mut i: Vec<usize> = s.inn[v].iter().map(|&w| c[w]).collect();
            o.sort_unstable();
            i.sort_unstable();
            (c[v], o, i)
        };
        let sa: Vec<Signature> = (0..a.n).map(|v| sig(a, &ca, v)).collect();
        let sb: Vec<Signature> = (0..b.n).map(|v| sig(b, &cb, v)).collect();
        let mut ids: BTreeMap<&Signature, usize> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            let next = ids.len();
            ids.entry(s).or_insert(next);
        }
        // renumber in sorted key order so colors do not depend on vertex order
        let renum: BTreeMap<&Signature, usize> = ids.keys().enumerate().map(|(i, k)| (*k, i)).collect();
        ca = sa.iter().map(|s| renum[s]).collect();
        cb = sb.iter().map(|s| renum[s]).collect();
        if renum.len() == classes {
            return (ca, cb);
        }
        classes = renum.len();
    }
}

/// Decides whether two leveled digraphs are isomorphic by a bijection that
/// preserves edges with multiplicity and the rank order of levels. Returns
/// a witness when they are.
pub fn leveled_isomorphic(a: &LeveledDigraph, b: &LeveledDigraph) -> Result<Option<Isomorphism>, NumericError> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let ra = level_ranks(&a.levels)?;
    let rb = level_ranks(&b.levels)?;
    let sa = Side::new(a);
    let sb = Side::new(b);
    let (ca, cb) = refine(&sa, &sb, &ra, &rb);
    let mut ha = ca.clone();
    let mut hb = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return Ok(None);
    }
    let order = search_order(&sa, &ca);
    let mut map = vec![usize::MAX; sa.n];
    let mut used = vec![false; sb.n];
    if extend(&sa, &sb, &ca, &cb, &order, 0, &mut map, &mut used) {
        Ok(Some(Isomorphism { map }))
    } else {
        Ok(None)
    }
}

/// BFS order over the underlying graph, each component started from its
/// rarest color so early choices are the most constrained.
fn search_order(s: &Side, colors: &[usize]) -> Vec<usize> {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for &c in colors {
        *count.entry(c).or_insert(0) += 1;
    }
    let mut starts: Vec<usize> = (0..s.n).collect();
    starts.sort_by_key(|&v| (count[&colors[v]], v));
    let mut seen = vec![false; s.n];
    let mut order = Vec::with_capacity(s.n);
    for start in starts {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in s.out[u].iter().chain(s.inn[u].iter()) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Side,
    b: &Side,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    for v in 0..b.n {
        if used[v] || cb[v] != ca[u] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&w| {
            let fw = map[w];
            a.m(u, w) == b.m(v, fw) && a.m(w, u) == b.m(fw, v)
        });
        if !consistent {
            continue;
        }
        map[u] = v;
        used[v] = true;
        if extend(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        map[u] = usize::MAX;
        used[v] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{target_theorem1, BalancedTreeSpec, Digraph};
    use crate::numeric::{int, rat, sqrt_exact};

    fn lv(xs: &[i64]) -> Vec<ExactValue> {
        xs.iter().map(|&x| ExactValue::Rational(int(x))).collect()
    }

    fn graph(ids: &[&str], edges: &[(usize, usize)], levels: &[i64]) -> LeveledDigraph {
        let g = Digraph::new(ids.iter().map(|s| s.to_string()).collect(), edges.to_vec()).unwrap();
        LeveledDigraph::new(g, lv(levels)).unwrap()
    }

    #[test]
    fn relabelled_tree_is_isomorphic() {
        let spec = BalancedTreeSpec::new(vec![2, 3]).unwrap();
        let a = target_theorem1(&spec, &lv(&[0, 1, 2, 3])).unwrap();
        // same shape, different level values but same rank order
        let levels = vec![
            ExactValue::Rational(rat(-5, 2)),
            sqrt_exact(&int(2)).unwrap(),
            ExactValue::Rational(int(7)),
            ExactValue::Rational(int(100)),
        ];
        let b = target_theorem1(&spec, &levels).unwrap();
        let iso = leveled_isomorphic(&a, &b).unwrap().expect("isomorphic");
        for &(u, v) in a.digraph.edges() {
            let (fu, fv) = (iso.map[u], iso.map[v]);
            assert!(b.digraph.edges().contains(&(fu, fv)));
        }
    }

    #[test]
    fn level_ranks_matter() {
        // a -> b, a -> c with b, c on different levels vs. the same level
        let g1 = graph(&["a", "b", "c"], &[(0, 1), (0, 2)], &[0, 1, 2]);
        let g2 = graph(&["a", "b", "c"], &[(0, 1), (0, 2)], &[0, 1, 1]);
        assert!(leveled_isomorphic(&g1, &g2).unwrap().is_none());
        assert!(leveled_isomorphic(&g2, &g2).unwrap().is_some());
    }

    #[test]
    fn multiplicity_matters() {
        let double = graph(&["a", "b", "c"], &[(0, 1), (0, 1), (1, 2)], &[0, 1, 2]);
        let split = graph(&["a", "b", "c"], &[(0, 1), (1, 2), (1, 2)], &[0, 1, 2]);
        assert!(leveled_isomorphic(&double, &split).unwrap().is_none());
        assert!(leveled_isomorphic(&double, &double).unwrap().is_some());
    }

    #[test]
    fn direction_matters() {
        let branch = graph(&["a", "b", "c"], &[(0, 1), (0, 2)], &[0, 1, 1]);
        let merge = graph(&["a", "b", "c"], &[(1, 0), (2, 0)], &[1, 0, 0]);
        assert!(leveled_isomorphic(&branch, &merge).unwrap().is_none());
    }

    #[test]
    fn regular_colorings_need_backtracking() {
        // two disjoint 2-paths vs. ... same thing with shuffled ids
        let a = graph(&["p", "q", "r", "s"], &[(0, 1), (2, 3)], &[0, 1, 0, 1]);
        let b = graph(&["w", "x", "y", "z"], &[(3, 0), (1, 2)], &[1, 0, 1, 0]);
        let iso = leveled_isomorphic(&a, &b).unwrap().unwrap();
        assert_eq!(iso.map.len(), 4);
    }
}
