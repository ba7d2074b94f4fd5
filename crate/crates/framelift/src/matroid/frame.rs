//! The frame matroid of a biased graph.
//!
//! Rank of an edge set is `#N - b(S)` where `b` counts balanced components
//! of the spanning subgraph. Closure is `E:N0(S) ∪ bcl S` (induced edges on
//! the nodes of unbalanced components, plus balance-closure). Circuits come
//! in four shapes: balanced circles, contrabalanced thetas, and tight or
//! loose handcuffs of two unbalanced figures, an unbalanced figure being a
//! half edge or an unbalanced circle.

use std::collections::{BTreeMap, BTreeSet};

use crate::bias::BiasedGraph;
use crate::error::{Error, Result};
use crate::graph::{theta_subgraphs_of, EdgeEnds, EdgeId, EdgeSet, NodeId};
use crate::matroid::oracle::{Provenance, RankOracle};

/// `#N - b(S)`.
pub fn frame_rank(omega: &BiasedGraph, s: &EdgeSet) -> Result<usize> {
    let (b, _) = omega.balanced_components(s)?;
    Ok(omega.graph().node_count() - b)
}

/// The closure formula: `E:N0(S) ∪ bcl S`; reduces to `bcl S` when `S` is
/// balanced because `N0` is then empty.
pub fn frame_closure(omega: &BiasedGraph, s: &EdgeSet) -> Result<EdgeSet> {
    let (_, n0) = omega.balanced_components(s)?;
    let mut out = omega.balance_closure(s)?;
    for e in omega.graph().edges() {
        if e.nodes().iter().all(|n| n0.contains(n)) {
            out.insert(e.id.clone());
        }
    }
    Ok(out)
}

/// Rank oracle over the edge set of the biased graph.
pub fn frame_oracle(omega: &BiasedGraph) -> Result<RankOracle> {
    let ground: Vec<String> = omega.graph().edges().iter().map(|e| e.id.0.clone()).collect();
    let data = BalanceTables::new(omega)?;
    RankOracle::new(ground, Provenance::Frame, move |mask| {
        data.node_count - data.balanced_component_count(mask)
    })
}

/// Precomputed masks for fast balance bookkeeping inside subset loops.
pub(crate) struct BalanceTables {
    pub node_count: usize,
    /// (node u, node v) index pairs per link, by edge index.
    links: Vec<Option<(usize, usize)>>,
    /// node index per half edge, by edge index.
    halves: Vec<Option<usize>>,
    /// (edge mask, least-node index, balanced?) per circle.
    circles: Vec<(u64, usize, bool)>,
}

impl BalanceTables {
    pub fn new(omega: &BiasedGraph) -> Result<Self> {
        let g = omega.graph();
        if g.edge_count() > 63 {
            return Err(Error::Resource("frame oracle edge masks".to_string(), 63));
        }
        let mut links = Vec::with_capacity(g.edge_count());
        let mut halves = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            match &e.ends {
                EdgeEnds::Link { u, v } => {
                    links.push(Some((g.node_index(u)?, g.node_index(v)?)));
                    halves.push(None);
                }
                EdgeEnds::Half { v } => {
                    links.push(None);
                    halves.push(Some(g.node_index(v)?));
                }
            }
        }
        let mut circles = Vec::new();
        for c in omega.circles() {
            let mask = g.edge_mask(&c.edge_set())?;
            let least = c
                .edges()
                .iter()
                .flat_map(|id| g.edge(id).unwrap().nodes())
                .map(|n| g.node_index(n).unwrap())
                .min()
                .expect("circles touch nodes");
            circles.push((mask, least, omega.is_balanced_circle(c)));
        }
        Ok(BalanceTables {
            node_count: g.node_count(),
            links,
            halves,
            circles,
        })
    }

    fn roots(&self, mask: u64) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.node_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, ends) in self.links.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if let Some((u, v)) = ends {
                    let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
                    if ru != rv {
                        parent[ru.max(rv)] = ru.min(rv);
                    }
                }
            }
        }
        (0..self.node_count)
            .map(|x| find(&mut parent, x))
            .collect()
    }

    pub fn component_count(&self, mask: u64) -> usize {
        let roots = self.roots(mask);
        let mut distinct: Vec<usize> = roots.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    }

    pub fn balanced_component_count(&self, mask: u64) -> usize {
        let roots = self.roots(mask);
        let mut unbalanced = vec![false; self.node_count];
        for (i, h) in self.halves.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if let Some(v) = h {
                    unbalanced[roots[*v]] = true;
                }
            }
        }
        for (cmask, least, balanced) in &self.circles {
            if !balanced && cmask & mask == *cmask {
                unbalanced[roots[*least]] = true;
            }
        }
        let mut distinct: Vec<usize> = roots.iter().copied().collect();
        distinct.sort_unstable();
        distinct.dedup();
        distinct
            .into_iter()
            .filter(|&r| !unbalanced[r])
            .count()
    }

    pub fn is_balanced(&self, mask: u64) -> bool {
        for (i, h) in self.halves.iter().enumerate() {
            if mask >> i & 1 == 1 && h.is_some() {
                return false;
            }
        }
        self.circles
            .iter()
            .all(|(cmask, _, balanced)| *balanced || cmask & mask != *cmask)
    }
}

/// An unbalanced figure: a half edge or an unbalanced circle.
#[derive(Clone, Debug)]
struct Figure {
    edges: EdgeSet,
    nodes: BTreeSet<NodeId>,
}

fn unbalanced_figures(omega: &BiasedGraph) -> Result<Vec<Figure>> {
    let g = omega.graph();
    let mut out = Vec::new();
    for e in g.half_edges() {
        out.push(Figure {
            edges: [e.id.clone()].into_iter().collect(),
            nodes: e.nodes().into_iter().cloned().collect(),
        });
    }
    for c in omega.circles() {
        if !omega.is_balanced_circle(c) {
            out.push(Figure {
                edges: c.edge_set(),
                nodes: g.incident_nodes(&c.edge_set())?,
            });
        }
    }
    Ok(out)
}

/// Structural enumeration of the frame circuits.
pub fn frame_circuits(omega: &BiasedGraph, cap: usize) -> Result<Vec<EdgeSet>> {
    let g = omega.graph();
    let mut out: BTreeSet<EdgeSet> = BTreeSet::new();

    for c in omega.circles() {
        if omega.is_balanced_circle(c) {
            out.insert(c.edge_set());
        }
    }
    for triple in theta_subgraphs_of(g, omega.circles())? {
        if triple.iter().all(|c| !omega.is_balanced_circle(c)) {
            let mut union = EdgeSet::new();
            for c in &triple {
                union.extend(c.edge_set());
            }
            out.insert(union);
        }
    }

    let figures = unbalanced_figures(omega)?;
    for (i, f1) in figures.iter().enumerate() {
        for f2 in figures.iter().skip(i + 1) {
            if !f1.edges.is_disjoint(&f2.edges) {
                continue;
            }
            let shared: Vec<&NodeId> = f1.nodes.intersection(&f2.nodes).collect();
            match shared.len() {
                1 => {
                    // tight handcuff
                    let mut c: EdgeSet = f1.edges.clone();
                    c.extend(f2.edges.iter().cloned());
                    out.insert(c);
                }
                0 => {
                    // loose handcuffs: one connecting simple path per pair
                    for path in connecting_paths(omega, f1, f2)? {
                        let mut c: EdgeSet = f1.edges.clone();
                        c.extend(f2.edges.iter().cloned());
                        c.extend(path);
                        out.insert(c);
                    }
                }
                _ => {}
            }
            if out.len() > cap {
                return Err(Error::Resource("frame circuit enumeration".to_string(), cap));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Simple paths from a node of `f1` to a node of `f2` whose interior avoids
/// both figures.
fn connecting_paths(
    omega: &BiasedGraph,
    f1: &Figure,
    f2: &Figure,
) -> Result<Vec<EdgeSet>> {
    let g = omega.graph();
    let mut adj: BTreeMap<&NodeId, Vec<(&EdgeId, &NodeId)>> = BTreeMap::new();
    for e in g.links() {
        if let EdgeEnds::Link { u, v } = &e.ends {
            adj.entry(u).or_default().push((&e.id, v));
            adj.entry(v).or_default().push((&e.id, u));
        }
    }
    let forbidden: BTreeSet<&NodeId> = f1.nodes.union(&f2.nodes).collect();
    let mut paths = Vec::new();
    for start in &f1.nodes {
        let mut stack: Vec<(NodeId, EdgeSet, BTreeSet<NodeId>)> =
            vec![(start.clone(), EdgeSet::new(), BTreeSet::new())];
        while let Some((at, path, interior)) = stack.pop() {
            for (eid, next) in adj.get(&at).into_iter().flatten() {
                if path.contains(*eid) {
                    continue;
                }
                if f2.nodes.contains(*next) {
                    let mut p = path.clone();
                    p.insert((*eid).clone());
                    paths.push(p);
                    continue;
                }
                if forbidden.contains(next) || interior.contains(*next) {
                    continue;
                }
                let mut p = path.clone();
                p.insert((*eid).clone());
                let mut int = interior.clone();
                int.insert((*next).clone());
                stack.push(((*next).clone(), p, int));
            }
        }
    }
    paths.sort();
    paths.dedup();
    Ok(paths)
}
