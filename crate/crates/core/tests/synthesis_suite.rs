use std::time::Instant;

use circle_reeb::digraph::BalancedTreeSpec;
use circle_reeb::numeric::{int, Rational};
use circle_reeb::synthesis::{synthesize, Mode, TheoremInstance};
use circle_reeb::sweep::{reeb, SweepOptions};

fn specs(max_depth: usize, choices: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max_depth {
        out = out
            .into_iter()
            .flat_map(|s: Vec<u32>| {
                choices.iter().map(move |&n| {
                    let mut t = s.clone();
                    t.push(n);
                    t
                })
            })
            .collect();
        all.extend(out.clone());
    }
    all
}

fn unit_levels(n: usize) -> Vec<Rational> {
    (0..n as i64).map(int).collect()
}

#[test]
fn theorem1_grid_realizes() {
    for children in specs(3, &[2, 3, 4]) {
        let spec = BalancedTreeSpec { children: children.clone() };
        let inst = TheoremInstance::theorem1(children.clone(), unit_levels(spec.depth() + 2));
        let start = Instant::now();
        let s = synthesize(&inst).unwrap_or_else(|e| panic!("{children:?}: {e}"));
        let secs = start.elapsed().as_secs_f64();
        assert!(s.verification.overall);
        assert_eq!(s.arrangement.constraints.len(), inst.paper_circle_count(), "{children:?}");
        let g = reeb(&s.arrangement, SweepOptions::default()).unwrap();
        assert_eq!(g.graph.vertex_count(), g.graph.edge_count() + 1);
        assert!(g.graph.digraph.is_connected());
        eprintln!("{children:?} {secs:.3}s");
    }
}

#[test]
fn theorem2_grid_realizes() {
    let mut cases: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for a in specs(2, &[2, 3]) {
        for b in specs(2, &[2, 3]) {
            cases.push((a.clone(), b));
        }
    }
    for b in specs(2, &[2, 3]) {
        cases.push((vec![1], b));
    }
    for (a, b) in cases {
        let n = a.len() + b.len() + 1;
        let inst = TheoremInstance::theorem2(a.clone(), b.clone(), unit_levels(n));
        let start = Instant::now();
        let s = synthesize(&inst).unwrap_or_else(|e| panic!("{a:?} {b:?}: {e}"));
        eprintln!("{a:?} {b:?} {:.3}s", start.elapsed().as_secs_f64());
        assert_eq!(s.arrangement.constraints.len(), inst.expected_circle_count());
    }
}

#[test]
fn complement_only_matches_bounded() {
    for children in specs(2, &[2, 3]) {
        let n = children.len() + 2;
        let mut inst = TheoremInstance::theorem1(children.clone(), unit_levels(n));
        let bounded = synthesize(&inst).unwrap();
        inst.mode = Mode::ComplementOnly;
        let open = synthesize(&inst).unwrap_or_else(|e| panic!("{children:?}: {e}"));
        let a = reeb(&bounded.arrangement, SweepOptions::default()).unwrap();
        let b = reeb(&open.arrangement, SweepOptions::default()).unwrap();
        assert!(circle_reeb::digraph::leveled_isomorphic(&a.graph, &b.graph).unwrap().is_some());
    }
}
