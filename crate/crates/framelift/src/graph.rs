//! Finite multigraphs with links and half edges.
//!
//! Parallel links are allowed; loops and loose edges are not. Node and edge
//! identifiers are opaque strings ordered lexicographically, and every
//! enumeration below is deterministic in that order. A *circle* is the edge
//! set of a simple closed path; a *theta* is three internally disjoint paths
//! with common endpoints, reported as its triple of circles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CIRCLE_CAP: usize = 1_000_000;

/// Reserved label for the extra lift-matroid element; never a user edge id.
pub const E0_LABEL: &str = "e0";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: Into<String>> From<T> for NodeId {
    fn from(s: T) -> Self {
        NodeId(s.into())
    }
}

impl EdgeId {
    pub fn new(s: impl Into<String>) -> Self {
        EdgeId(s.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeEnds {
    /// A link; stored with `u < v`.
    Link { u: NodeId, v: NodeId },
    /// A half edge with a single endpoint.
    Half { v: NodeId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: EdgeEnds,
}

impl Edge {
    pub fn is_link(&self) -> bool {
        matches!(self.ends, EdgeEnds::Link { .. })
    }

    pub fn is_half(&self) -> bool {
        matches!(self.ends, EdgeEnds::Half { .. })
    }

    /// Endpoints; one entry for a half edge.
    pub fn nodes(&self) -> Vec<&NodeId> {
        match &self.ends {
            EdgeEnds::Link { u, v } => vec![u, v],
            EdgeEnds::Half { v } => vec![v],
        }
    }

    /// The other endpoint of a link.
    pub fn opposite(&self, n: &NodeId) -> Option<&NodeId> {
        match &self.ends {
            EdgeEnds::Link { u, v } if u == n => Some(v),
            EdgeEnds::Link { u, v } if v == n => Some(u),
            _ => None,
        }
    }
}

pub type EdgeSet = BTreeSet<EdgeId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    node_pos: BTreeMap<NodeId, usize>,
    edge_pos: BTreeMap<EdgeId, usize>,
}

impl Graph {
    /// Builds a graph, normalizing node order and link direction (`u < v`).
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut node_list: Vec<NodeId> = nodes.into_iter().collect();
        node_list.sort();
        node_list.dedup();
        let node_pos: BTreeMap<NodeId, usize> = node_list
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let mut edge_list: Vec<Edge> = Vec::new();
        for mut e in edges {
            if e.id.0 == E0_LABEL {
                return Err(Error::input(format!(
                    "edge id {E0_LABEL:?} is reserved for the extended lift matroid"
                )));
            }
            match &mut e.ends {
                EdgeEnds::Link { u, v } => {
                    if u == v {
                        return Err(Error::input(format!("loop at {u} on edge {}", e.id)));
                    }
                    if !node_pos.contains_key(u) || !node_pos.contains_key(v) {
                        return Err(Error::input(format!("edge {} has unknown endpoint", e.id)));
                    }
                    if v < u {
                        std::mem::swap(u, v);
                    }
                }
                EdgeEnds::Half { v } => {
                    if !node_pos.contains_key(v) {
                        return Err(Error::input(format!("edge {} has unknown endpoint", e.id)));
                    }
                }
            }
            edge_list.push(e);
        }
        edge_list.sort_by(|a, b| a.id.cmp(&b.id));
        for w in edge_list.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::input(format!("duplicate edge id {}", w[0].id)));
            }
        }
        let edge_pos = edge_list
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        Ok(Graph {
            nodes: node_list,
            edges: edge_list,
            node_pos,
            edge_pos,
        })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: &EdgeId) -> Result<&Edge> {
        self.edge_pos
            .get(id)
            .map(|&i| &self.edges[i])
            .ok_or_else(|| Error::input(format!("unknown edge id {id}")))
    }

    pub fn edge_index(&self, id: &EdgeId) -> Result<usize> {
        self.edge_pos
            .get(id)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown edge id {id}")))
    }

    pub fn node_index(&self, n: &NodeId) -> Result<usize> {
        self.node_pos
            .get(n)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown node id {n}")))
    }

    pub fn has_node(&self, n: &NodeId) -> bool {
        self.node_pos.contains_key(n)
    }

    pub fn all_edges(&self) -> EdgeSet {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub fn links(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.is_link())
    }

    pub fn half_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.is_half())
    }

    /// Bitmask of an edge set relative to the sorted edge order.
    pub fn edge_mask(&self, s: &EdgeSet) -> Result<u64> {
        if self.edges.len() > 63 {
            return Err(Error::Resource(
                "edge masks limited to 63 edges".to_string(),
                63,
            ));
        }
        let mut mask = 0u64;
        for id in s {
            mask |= 1 << self.edge_index(id)?;
        }
        Ok(mask)
    }

    pub fn mask_to_set(&self, mask: u64) -> EdgeSet {
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.id.clone())
            .collect()
    }

    /// Validates that `s` only mentions edges of this graph.
    pub fn check_subset(&self, s: &EdgeSet) -> Result<()> {
        for id in s {
            self.edge(id)?;
        }
        Ok(())
    }

    /// Nodes incident to edges of `s` (the set `N(S)`).
    pub fn incident_nodes(&self, s: &EdgeSet) -> Result<BTreeSet<NodeId>> {
        let mut out = BTreeSet::new();
        for id in s {
            for n in self.edge(id)?.nodes() {
                out.insert(n.clone());
            }
        }
        Ok(out)
    }
}

/// Connected components of the spanning subgraph `(N, S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Node partition, each part sorted, parts ordered by least node.
    pub parts: Vec<BTreeSet<NodeId>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// `c(S)` with the node partition. Half edges connect nothing.
pub fn components(g: &Graph, s: &EdgeSet) -> Result<Components> {
    g.check_subset(s)?;
    let mut uf = UnionFind::new(g.node_count());
    for id in s {
        if let EdgeEnds::Link { u, v } = &g.edge(id)?.ends {
            uf.union(g.node_index(u)?, g.node_index(v)?);
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
    for (i, n) in g.nodes().iter().enumerate() {
        by_root.entry(uf.find(i)).or_default().insert(n.clone());
    }
    let parts: Vec<BTreeSet<NodeId>> = by_root.into_values().collect();
    Ok(Components {
        count: parts.len(),
        parts,
    })
}

/// Rank of `s` in the graphic matroid: `#N - c(S)`. Links only.
pub fn graphic_rank(g: &Graph, s: &EdgeSet) -> Result<usize> {
    for id in s {
        if g.edge(id)?.is_half() {
            return Err(Error::domain(format!(
                "graphic rank undefined: {id} is a half edge"
            )));
        }
    }
    Ok(g.node_count() - components(g, s)?.count)
}

/// True when the spanning subgraph `(N(S), S)` is connected (vacuously for
/// the empty set).
pub fn is_connected_set(g: &Graph, s: &EdgeSet) -> Result<bool> {
    if s.is_empty() {
        return Ok(true);
    }
    let comps = components(g, s)?;
    let touched = g.incident_nodes(s)?;
    let hit = comps
        .parts
        .iter()
        .filter(|part| part.iter().any(|n| touched.contains(n)))
        .count();
    Ok(hit == 1)
}

/// A circle: the edge set of a simple closed path, held in canonical cyclic
/// order (least edge id first, lexicographically smaller direction). Always
/// built through [`Circle::from_cyclic`] so collections compare set-wise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Circle {
    edges: Vec<EdgeId>,
}

impl Circle {
    /// Canonicalizes a cyclic edge sequence. The sequence must already be a
    /// closed traversal; validity against a graph is checked separately.
    pub fn from_cyclic(seq: Vec<EdgeId>) -> Self {
        let l = seq.len();
        let mut best: Option<Vec<EdgeId>> = None;
        for dir in 0..2 {
            let oriented: Vec<EdgeId> = if dir == 0 {
                seq.clone()
            } else {
                seq.iter().rev().cloned().collect()
            };
            for start in 0..l {
                let rot: Vec<EdgeId> = (0..l).map(|i| oriented[(start + i) % l].clone()).collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        Circle {
            edges: best.unwrap_or_default(),
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().cloned().collect()
    }

    pub fn contains(&self, id: &EdgeId) -> bool {
        self.edges.contains(id)
    }

    /// Checks the defining property against a graph: links only, connected,
    /// every incident node of degree exactly 2, length at least 2.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.edges.len() < 2 {
            return Err(Error::input(format!(
                "circle {:?} too short: a circle has at least 2 edges",
                self.edges
            )));
        }
        let set = self.edge_set();
        if set.len() != self.edges.len() {
            return Err(Error::input(format!(
                "circle {:?} repeats an edge",
                self.edges
            )));
        }
        let mut degree: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for id in &set {
            let e = g.edge(id)?;
            if e.is_half() {
                return Err(Error::input(format!(
                    "half edge {id} cannot lie on a circle"
                )));
            }
            for n in e.nodes() {
                *degree.entry(n).or_default() += 1;
            }
        }
        if degree.values().any(|&d| d != 2) {
            return Err(Error::input(format!(
                "edge set {:?} is not a circle: node of degree != 2",
                self.edges
            )));
        }
        if !is_connected_set(g, &set)? {
            return Err(Error::input(format!(
                "edge set {:?} is not a circle: disconnected",
                self.edges
            )));
        }
        Ok(())
    }

    /// Canonical traversal as (edge, from, to) steps. For a digon the walk
    /// starts at the lesser endpoint; otherwise the start node is the
    /// endpoint of the first edge not shared with the second.
    pub fn traversal(&self, g: &Graph) -> Result<Vec<(EdgeId, NodeId, NodeId)>> {
        let first = g.edge(&self.edges[0])?;
        let (u, v) = match &first.ends {
            EdgeEnds::Link { u, v } => (u.clone(), v.clone()),
            EdgeEnds::Half { .. } => {
                return Err(Error::domain(format!(
                    "half edge {} in circle traversal",
                    first.id
                )))
            }
        };
        let start = if self.edges.len() == 2 {
            u.clone()
        } else {
            let second = g.edge(&self.edges[1])?;
            let second_nodes: BTreeSet<&NodeId> = second.nodes().into_iter().collect();
            if second_nodes.contains(&v) {
                u.clone()
            } else {
                v.clone()
            }
        };
        self.traversal_from(g, &self.edges[0], &start)
    }

    /// Traversal beginning with `start_edge` leaving `start_node`, walking in
    /// the cyclic order induced by the circle.
    pub fn traversal_from(
        &self,
        g: &Graph,
        start_edge: &EdgeId,
        start_node: &NodeId,
    ) -> Result<Vec<(EdgeId, NodeId, NodeId)>> {
        let pos = self
            .edges
            .iter()
            .position(|e| e == start_edge)
            .ok_or_else(|| Error::input(format!("edge {start_edge} not in circle")))?;
        let l = self.edges.len();
        // the circle's cyclic order can be walked in two directions from pos
        for forward in [true, false] {
            let order: Vec<EdgeId> = (0..l)
                .map(|i| {
                    let idx = if forward {
                        (pos + i) % l
                    } else {
                        (pos + l - i) % l
                    };
                    self.edges[idx].clone()
                })
                .collect();
            if let Some(walk) = try_walk(g, &order, start_node)? {
                return Ok(walk);
            }
        }
        Err(Error::input(format!(
            "no traversal of circle {:?} from {start_node}",
            self.edges
        )))
    }
}

fn try_walk(
    g: &Graph,
    order: &[EdgeId],
    start: &NodeId,
) -> Result<Option<Vec<(EdgeId, NodeId, NodeId)>>> {
    let mut at = start.clone();
    let mut walk = Vec::with_capacity(order.len());
    for id in order {
        let e = g.edge(id)?;
        match e.opposite(&at) {
            Some(next) => {
                walk.push((id.clone(), at.clone(), next.clone()));
                at = next.clone();
            }
            None => return Ok(None),
        }
    }
    Ok(if at == *start { Some(walk) } else { None })
}

/// Exhaustively enumerates the circles of `g`, in canonical order.
pub fn circles(g: &Graph) -> Result<Vec<Circle>> {
    circles_capped(g, DEFAULT_CIRCLE_CAP)
}

pub fn circles_capped(g: &Graph, cap: usize) -> Result<Vec<Circle>> {
    let mut found: BTreeSet<Circle> = BTreeSet::new();
    // adjacency over links only
    let mut adj: BTreeMap<&NodeId, Vec<&Edge>> = BTreeMap::new();
    for e in g.links() {
        for n in e.nodes() {
            adj.entry(n).or_default().push(e);
        }
    }
    // DFS rooted at each node s; internal nodes restricted to >= s, so each
    // circle is discovered exactly at its least node
    for s in g.nodes() {
        let mut path: Vec<(EdgeId, NodeId)> = Vec::new(); // (edge, reached node)
        let mut used_edges: BTreeSet<EdgeId> = BTreeSet::new();
        let mut visited: BTreeSet<NodeId> = BTreeSet::new();
        dfs_circles(
            &adj, s, s, &mut path, &mut used_edges, &mut visited, &mut found, cap,
        )?;
    }
    Ok(found.into_iter().collect())
}

#[allow(clippy::too_many_arguments)]
fn dfs_circles(
    adj: &BTreeMap<&NodeId, Vec<&Edge>>,
    root: &NodeId,
    at: &NodeId,
    path: &mut Vec<(EdgeId, NodeId)>,
    used_edges: &mut BTreeSet<EdgeId>,
    visited: &mut BTreeSet<NodeId>,
    found: &mut BTreeSet<Circle>,
    cap: usize,
) -> Result<()> {
    for e in adj.get(at).into_iter().flatten() {
        if used_edges.contains(&e.id) {
            continue;
        }
        let next = e.opposite(at).expect("adjacency holds links only");
        if next == root {
            // keep one direction per circle: first edge id < closing edge id
            if !path.is_empty() && path[0].0 < e.id {
                let mut seq: Vec<EdgeId> = path.iter().map(|(id, _)| id.clone()).collect();
                seq.push(e.id.clone());
                if found.len() >= cap {
                    return Err(Error::Resource("circle enumeration".to_string(), cap));
                }
                found.insert(Circle::from_cyclic(seq));
            }
            continue;
        }
        if next < root || visited.contains(next) {
            continue;
        }
        path.push((e.id.clone(), next.clone()));
        used_edges.insert(e.id.clone());
        visited.insert(next.clone());
        dfs_circles(adj, root, next, path, used_edges, visited, found, cap)?;
        visited.remove(next);
        used_edges.remove(&e.id);
        path.pop();
    }
    Ok(())
}

/// A theta subgraph reported as its (sorted) triple of circles.
pub type ThetaTriple = [Circle; 3];

/// Enumerates theta subgraphs: pairs of circles whose intersection is a
/// nonempty path and whose symmetric difference is again a circle.
pub fn theta_subgraphs(g: &Graph) -> Result<Vec<ThetaTriple>> {
    let all = circles(g)?;
    theta_subgraphs_of(g, &all)
}

pub fn theta_subgraphs_of(g: &Graph, all: &[Circle]) -> Result<Vec<ThetaTriple>> {
    let sets: Vec<EdgeSet> = all.iter().map(Circle::edge_set).collect();
    let by_set: BTreeMap<&EdgeSet, &Circle> = sets.iter().zip(all).collect();
    let mut triples: BTreeSet<ThetaTriple> = BTreeSet::new();
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let shared: EdgeSet = sets[i].intersection(&sets[j]).cloned().collect();
            if shared.is_empty() || !is_connected_set(g, &shared)? {
                continue;
            }
            let sym: EdgeSet = sets[i].symmetric_difference(&sets[j]).cloned().collect();
            if let Some(third) = by_set.get(&sym) {
                let mut t = [all[i].clone(), all[j].clone(), (*third).clone()];
                t.sort();
                triples.insert(t);
            }
        }
    }
    Ok(triples.into_iter().collect())
}

/// Connected with no separating node: every edge bipartition shares >= 2 nodes.
pub fn is_inseparable(g: &Graph) -> Result<bool> {
    if components(g, &g.all_edges())?.count != 1 {
        return Ok(false);
    }
    let m = g.edge_count();
    if m > 20 {
        return Err(Error::Resource(
            "inseparability check enumerates edge bipartitions".to_string(),
            1 << 20,
        ));
    }
    for mask in 1..(1u32 << m) / 2 + 1 {
        let mask = mask as u64;
        let full = (1u64 << m) - 1;
        if mask == 0 || mask == full {
            continue;
        }
        let a = g.mask_to_set(mask);
        let b = g.mask_to_set(full & !mask);
        let na = g.incident_nodes(&a)?;
        let nb = g.incident_nodes(&b)?;
        if na.intersection(&nb).count() < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complete graph on nodes `"1".."n"`, edge ids `a<i>-<j>`.
pub fn complete_graph(n: usize) -> Graph {
    let nodes: Vec<NodeId> = (1..=n).map(|i| NodeId::from(i.to_string())).collect();
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            edges.push(Edge {
                id: EdgeId::new(format!("a{i}-{j}")),
                ends: EdgeEnds::Link {
                    u: NodeId::from(i.to_string()),
                    v: NodeId::from(j.to_string()),
                },
            });
        }
    }
    Graph::new(nodes, edges).expect("complete graph is valid")
}

/// Cycle graph on nodes `"1".."n"`, edge ids `c<i>-<j>`.
pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3, "cycle graph needs at least 3 nodes");
    let nodes: Vec<NodeId> = (1..=n).map(|i| NodeId::from(i.to_string())).collect();
    let mut edges = Vec::new();
    for i in 1..=n {
        let j = i % n + 1;
        let (a, b) = (i.min(j), i.max(j));
        edges.push(Edge {
            id: EdgeId::new(format!("c{a}-{b}")),
            ends: EdgeEnds::Link {
                u: NodeId::from(a.to_string()),
                v: NodeId::from(b.to_string()),
            },
        });
    }
    Graph::new(nodes, edges).expect("cycle graph is valid")
}

pub fn link(id: &str, u: &str, v: &str) -> Edge {
    Edge {
        id: EdgeId::new(id),
        ends: EdgeEnds::Link {
            u: NodeId::from(u),
            v: NodeId::from(v),
        },
    }
}

pub fn half_edge(id: &str, v: &str) -> Edge {
    Edge {
        id: EdgeId::new(id),
        ends: EdgeEnds::Half { v: NodeId::from(v) },
    }
}

pub fn edge_set(ids: &[&str]) -> EdgeSet {
    ids.iter().map(|s| EdgeId::new(*s)).collect()
}

/// The doubled 4-cycle: nodes 1..4, parallel links `e*`/`f*` around the square.
pub fn double_c4() -> Graph {
    let nodes: Vec<NodeId> = (1..=4).map(|i| NodeId::from(i.to_string())).collect();
    let mut edges = Vec::new();
    for i in 1..=4usize {
        let j = i % 4 + 1;
        for pre in ["e", "f"] {
            edges.push(link(&format!("{pre}{i}{j}"), &i.to_string(), &j.to_string()));
        }
    }
    Graph::new(nodes, edges).expect("double C4 is valid")
}

#[cfg(test)]
pub(crate) fn triangle() -> Graph {
    Graph::new(
        ["1", "2", "3"].map(NodeId::from),
        vec![link("a", "1", "2"), link("b", "2", "3"), link("c", "1", "3")],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent connectivity oracle: BFS over an explicit adjacency list.
    fn bfs_component_count(g: &Graph, s: &EdgeSet) -> usize {
        let mut adj: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
        for id in s {
            if let EdgeEnds::Link { u, v } = &g.edge(id).unwrap().ends {
                adj.entry(u).or_default().push(v);
                adj.entry(v).or_default().push(u);
            }
        }
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut count = 0;
        for n in g.nodes() {
            if seen.contains(n) {
                continue;
            }
            count += 1;
            let mut queue = vec![n];
            while let Some(x) = queue.pop() {
                if !seen.insert(x) {
                    continue;
                }
                for y in adj.get(x).into_iter().flatten() {
                    queue.push(y);
                }
            }
        }
        count
    }

    /// Independent circle oracle: subsets that are connected with all
    /// incident degrees exactly 2.
    fn brute_force_circles(g: &Graph) -> Vec<EdgeSet> {
        let m = g.edge_count();
        let mut out = Vec::new();
        for mask in 1u64..(1 << m) {
            let s = g.mask_to_set(mask);
            if s.iter().any(|id| g.edge(id).unwrap().is_half()) {
                continue;
            }
            let mut deg: BTreeMap<&NodeId, usize> = BTreeMap::new();
            for id in &s {
                for n in g.edge(id).unwrap().nodes() {
                    *deg.entry(n).or_default() += 1;
                }
            }
            if deg.values().all(|&d| d == 2) && is_connected_set(g, &s).unwrap() {
                out.push(s);
            }
        }
        out
    }

    /// Independent theta oracle: connected subsets with exactly two nodes of
    /// degree 3, the rest of degree 2, and no cut edge (a dumbbell of two
    /// circles joined by a bridge matches the degree profile but is not a
    /// theta).
    fn brute_force_theta_count(g: &Graph) -> usize {
        let m = g.edge_count();
        let mut count = 0;
        for mask in 1u64..(1 << m) {
            let s = g.mask_to_set(mask);
            if s.iter().any(|id| g.edge(id).unwrap().is_half()) {
                continue;
            }
            let mut deg: BTreeMap<&NodeId, usize> = BTreeMap::new();
            for id in &s {
                for n in g.edge(id).unwrap().nodes() {
                    *deg.entry(n).or_default() += 1;
                }
            }
            let threes = deg.values().filter(|&&d| d == 3).count();
            let ok = deg.values().all(|&d| d == 2 || d == 3);
            if !(ok && threes == 2 && is_connected_set(g, &s).unwrap()) {
                continue;
            }
            let no_bridge = s.iter().all(|drop| {
                let rest: EdgeSet = s.iter().filter(|e| *e != drop).cloned().collect();
                is_connected_set(g, &rest).unwrap()
            });
            if no_bridge {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn components_on_k3() {
        let g = triangle();
        assert_eq!(components(&g, &EdgeSet::new()).unwrap().count, 3);
        assert_eq!(components(&g, &edge_set(&["a"])).unwrap().count, 2);
    }

    #[test]
    fn components_on_double_c4_all_edges() {
        let g = double_c4();
        let all = g.all_edges();
        assert_eq!(bfs_component_count(&g, &all), 1);
        assert_eq!(components(&g, &all).unwrap().count, 1);
    }

    #[test]
    fn components_rejects_unknown_edge() {
        let g = triangle();
        assert!(components(&g, &edge_set(&["nope"])).is_err());
    }

    #[test]
    fn half_edges_connect_nothing() {
        let g = Graph::new(
            ["1", "2"].map(NodeId::from),
            vec![half_edge("h1", "1"), half_edge("h2", "2")],
        )
        .unwrap();
        assert_eq!(components(&g, &g.all_edges()).unwrap().count, 2);
    }

    #[test]
    fn circles_of_k3() {
        let g = triangle();
        let cs = circles(&g).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].edge_set(), edge_set(&["a", "b", "c"]));
    }

    #[test]
    fn circles_of_double_c4_match_brute_force() {
        let g = double_c4();
        let cs = circles(&g).unwrap();
        let brute = brute_force_circles(&g);
        assert_eq!(cs.len(), brute.len());
        assert_eq!(cs.len(), 20); // 4 digons + 16 quadrilaterals
        let digons = cs.iter().filter(|c| c.len() == 2).count();
        assert_eq!(digons, 4);
        let sets: BTreeSet<EdgeSet> = cs.iter().map(Circle::edge_set).collect();
        for b in brute {
            assert!(sets.contains(&b));
        }
    }

    #[test]
    fn half_edge_graph_has_no_circles() {
        let g = Graph::new(vec![NodeId::from("1")], vec![half_edge("h", "1")]).unwrap();
        assert!(circles(&g).unwrap().is_empty());
    }

    #[test]
    fn circle_minus_edge_is_path() {
        let g = double_c4();
        for c in circles(&g).unwrap() {
            for drop in c.edges() {
                let rest: EdgeSet = c.edge_set().into_iter().filter(|e| e != drop).collect();
                // a path: connected, degrees <= 2
                assert!(is_connected_set(&g, &rest).unwrap());
                let mut deg: BTreeMap<&NodeId, usize> = BTreeMap::new();
                for id in &rest {
                    for n in g.edge(id).unwrap().nodes() {
                        *deg.entry(n).or_default() += 1;
                    }
                }
                assert!(deg.values().all(|&d| d <= 2));
            }
        }
    }

    #[test]
    fn theta_subgraphs_of_k3_empty() {
        assert!(theta_subgraphs(&triangle()).unwrap().is_empty());
    }

    #[test]
    fn theta_count_on_double_c4_matches_brute_force() {
        let g = double_c4();
        let thetas = theta_subgraphs(&g).unwrap();
        assert_eq!(thetas.len(), brute_force_theta_count(&g));
        assert_eq!(thetas.len(), 32);
        for [c1, c2, c3] in &thetas {
            let sym: EdgeSet = c1
                .edge_set()
                .symmetric_difference(&c2.edge_set())
                .cloned()
                .collect();
            assert_eq!(sym, c3.edge_set());
        }
    }

    #[test]
    fn triple_link_digon_graph_has_one_theta() {
        let g = Graph::new(
            ["1", "2"].map(NodeId::from),
            vec![link("a", "1", "2"), link("b", "1", "2"), link("c", "1", "2")],
        )
        .unwrap();
        let cs = circles(&g).unwrap();
        assert_eq!(cs.len(), 3);
        let thetas = theta_subgraphs(&g).unwrap();
        assert_eq!(thetas.len(), 1);
        assert!(thetas[0].iter().all(|c| c.len() == 2));
    }

    #[test]
    fn graphic_rank_examples() {
        let g = triangle();
        assert_eq!(graphic_rank(&g, &g.all_edges()).unwrap(), 2);
        assert_eq!(graphic_rank(&g, &EdgeSet::new()).unwrap(), 0);
        let d = double_c4();
        let quad = edge_set(&["e12", "e23", "e34", "e41"]);
        assert_eq!(graphic_rank(&d, &quad).unwrap(), 3);
    }

    #[test]
    fn graphic_rank_rejects_half_edges() {
        let g = Graph::new(vec![NodeId::from("1")], vec![half_edge("h", "1")]).unwrap();
        assert!(matches!(
            graphic_rank(&g, &g.all_edges()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn graphic_rank_monotone_submodular() {
        let g = double_c4(); // 8 edges
        let m = g.edge_count();
        let rk: Vec<usize> = (0..1u64 << m)
            .map(|mask| graphic_rank(&g, &g.mask_to_set(mask)).unwrap())
            .collect();
        for a in 0..1u64 << m {
            for e in 0..m {
                let b = a | 1 << e;
                assert!(rk[a as usize] <= rk[b as usize]);
            }
        }
        for a in 0..1u64 << m {
            for b in 0..1u64 << m {
                let (u, i) = ((a | b) as usize, (a & b) as usize);
                assert!(rk[u] + rk[i] <= rk[a as usize] + rk[b as usize]);
            }
        }
    }

    #[test]
    fn inseparability_cases() {
        assert!(is_inseparable(&triangle()).unwrap());
        let path = Graph::new(
            ["1", "2", "3"].map(NodeId::from),
            vec![link("a", "1", "2"), link("b", "2", "3")],
        )
        .unwrap();
        assert!(!is_inseparable(&path).unwrap());
        // a node incident to a half edge and another edge is separating
        let mixed = Graph::new(
            ["1", "2"].map(NodeId::from),
            vec![link("a", "1", "2"), half_edge("h", "1")],
        )
        .unwrap();
        assert!(!is_inseparable(&mixed).unwrap());
    }

    #[test]
    fn graph_rejects_loops_duplicates_e0() {
        assert!(Graph::new(["1"].map(NodeId::from), vec![link("a", "1", "1")]).is_err());
        assert!(Graph::new(
            ["1", "2"].map(NodeId::from),
            vec![link("a", "1", "2"), link("a", "1", "2")]
        )
        .is_err());
        assert!(Graph::new(["1", "2"].map(NodeId::from), vec![link("e0", "1", "2")]).is_err());
    }

    #[test]
    fn circle_traversal_closes() {
        let g = double_c4();
        for c in circles(&g).unwrap() {
            let walk = c.traversal(&g).unwrap();
            assert_eq!(walk.len(), c.len());
            assert_eq!(walk[0].1, walk[walk.len() - 1].2);
            for w in walk.windows(2) {
                assert_eq!(w[0].2, w[1].1);
            }
        }
    }
}
