//! Gain graphs: graphs with group-labeled links, switching, group and biased
//! expansions, and the search for gain realizations of a biased graph.
//!
//! Gains are stored once per link, in the canonical direction from the
//! lexicographically smaller endpoint; querying the reverse direction
//! inverts. Half edges carry no gain. A circle is balanced exactly when its
//! gain product along a traversal is the group identity, which is
//! independent of start edge and direction.

use std::collections::{BTreeMap, BTreeSet};

use crate::bias::BiasedGraph;
use crate::error::{Error, Result};
use crate::graph::{link, Circle, Edge, EdgeEnds, EdgeId, Graph, NodeId};
use crate::group::{Group, GroupElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GainGraph {
    graph: Graph,
    group: Group,
    /// Gain of each link in its canonical (u < v) direction.
    gains: BTreeMap<EdgeId, GroupElem>,
}

impl GainGraph {
    pub fn new(graph: Graph, group: Group, gains: BTreeMap<EdgeId, GroupElem>) -> Result<Self> {
        for e in graph.edges() {
            match &e.ends {
                EdgeEnds::Link { .. } => {
                    let g = gains.get(&e.id).ok_or_else(|| {
                        Error::input(format!("link {} has no gain", e.id))
                    })?;
                    if !group.admits(g) {
                        return Err(Error::input(format!(
                            "gain of {} is not a member of the group",
                            e.id
                        )));
                    }
                }
                EdgeEnds::Half { .. } => {
                    if gains.contains_key(&e.id) {
                        return Err(Error::input(format!(
                            "half edge {} cannot carry a gain",
                            e.id
                        )));
                    }
                }
            }
        }
        for id in gains.keys() {
            graph.edge(id)?;
        }
        Ok(GainGraph {
            graph,
            group,
            gains,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn gains(&self) -> &BTreeMap<EdgeId, GroupElem> {
        &self.gains
    }

    /// Gain of a link in its canonical (stored) direction.
    pub fn canonical_gain(&self, id: &EdgeId) -> Result<&GroupElem> {
        self.gains
            .get(id)
            .ok_or_else(|| Error::domain(format!("{id} carries no gain")))
    }

    /// Gain of a link in the direction leaving `from`.
    pub fn gain_from(&self, id: &EdgeId, from: &NodeId) -> Result<GroupElem> {
        let e = self.graph.edge(id)?;
        let EdgeEnds::Link { u, v } = &e.ends else {
            return Err(Error::domain(format!("half edge {id} carries no gain")));
        };
        let g = self.canonical_gain(id)?;
        if from == u {
            Ok(g.clone())
        } else if from == v {
            Ok(self.group.inv(g))
        } else {
            Err(Error::input(format!("{from} is not an endpoint of {id}")))
        }
    }

    /// Gain product of a circle along its canonical traversal, or from a
    /// chosen start edge and direction.
    pub fn circle_gain(&self, c: &Circle, start: Option<(&EdgeId, &NodeId)>) -> Result<GroupElem> {
        let walk = match start {
            Some((e, n)) => c.traversal_from(&self.graph, e, n)?,
            None => c.traversal(&self.graph)?,
        };
        let mut acc = self.group.identity();
        for (id, from, _) in &walk {
            acc = self.group.op(&acc, &self.gain_from(id, from)?);
        }
        Ok(acc)
    }

    /// The biased graph whose balanced circles are those of identity gain.
    pub fn to_biased(&self) -> Result<BiasedGraph> {
        let all = crate::graph::circles(&self.graph)?;
        let mut balanced = BTreeSet::new();
        for c in all {
            if self.group.is_identity(&self.circle_gain(&c, None)?) {
                balanced.insert(c);
            }
        }
        BiasedGraph::new_unchecked(self.graph.clone(), balanced)
    }

    /// Switches by a node function: the gain of `e_uv` becomes
    /// `zeta(u)^-1 * gain * zeta(v)`. The derived bias is unchanged.
    pub fn switch(&self, zeta: &BTreeMap<NodeId, GroupElem>) -> Result<GainGraph> {
        for n in self.graph.nodes() {
            let z = zeta
                .get(n)
                .ok_or_else(|| Error::input(format!("switching function misses node {n}")))?;
            if !self.group.admits(z) {
                return Err(Error::input(format!("switching value at {n} not in group")));
            }
        }
        let mut gains = BTreeMap::new();
        for e in self.graph.links() {
            let EdgeEnds::Link { u, v } = &e.ends else {
                unreachable!()
            };
            let g = self.canonical_gain(&e.id)?;
            let zu_inv = self.group.inv(&zeta[u]);
            let new = self.group.op(&self.group.op(&zu_inv, g), &zeta[v]);
            gains.insert(e.id.clone(), new);
        }
        GainGraph::new(self.graph.clone(), self.group.clone(), gains)
    }

    /// Lexicographically least spanning forest over the links (Kruskal order).
    pub fn spanning_forest(&self) -> Result<BTreeSet<EdgeId>> {
        let mut forest = BTreeSet::new();
        let mut reach: BTreeMap<&NodeId, usize> = self
            .graph
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        for e in self.graph.links() {
            let EdgeEnds::Link { u, v } = &e.ends else {
                unreachable!()
            };
            let (ru, rv) = (reach[u], reach[v]);
            if ru != rv {
                forest.insert(e.id.clone());
                for r in reach.values_mut() {
                    if *r == rv {
                        *r = ru;
                    }
                }
            }
        }
        Ok(forest)
    }

    /// Switches so every edge of the least spanning forest has identity gain.
    pub fn tree_normalized(&self) -> Result<(GainGraph, BTreeSet<EdgeId>)> {
        let forest = self.spanning_forest()?;
        let mut adj: BTreeMap<&NodeId, Vec<&Edge>> = BTreeMap::new();
        for id in &forest {
            let e = self.graph.edge(id)?;
            for n in e.nodes() {
                adj.entry(n).or_default().push(e);
            }
        }
        let mut zeta: BTreeMap<NodeId, GroupElem> = BTreeMap::new();
        for root in self.graph.nodes() {
            if zeta.contains_key(root) {
                continue;
            }
            zeta.insert(root.clone(), self.group.identity());
            let mut stack = vec![root.clone()];
            while let Some(at) = stack.pop() {
                for e in adj.get(&at).into_iter().flatten() {
                    let next = e.opposite(&at).expect("forest edges are links");
                    if zeta.contains_key(next) {
                        continue;
                    }
                    // zeta(next) = gain(at -> next)^-1 * zeta(at)
                    let g = self.gain_from(&e.id, &at)?;
                    let z = self.group.op(&self.group.inv(&g), &zeta[&at]);
                    zeta.insert(next.clone(), z);
                    stack.push(next.clone());
                }
            }
        }
        // the switch formula uses zeta(u)^-1 g zeta(v); with zeta built above,
        // forest gains become zeta(u)^-1 g (g^-1 zeta(u)) = identity when v is
        // the child; invert for the parent direction symmetrically
        let switched = self.switch(&zeta)?;
        Ok((switched, forest))
    }
}

/// Projection of a (candidate) expansion onto a simple base graph: an edge
/// map that fixes nodes and preserves endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionProjection {
    pub base: Graph,
    /// expansion edge id -> base edge id (links only).
    pub map: BTreeMap<EdgeId, EdgeId>,
}

impl ExpansionProjection {
    /// Derives the projection from endpoints; the base must be simple.
    pub fn from_endpoints(omega: &Graph, base: &Graph) -> Result<Self> {
        require_simple(base)?;
        let mut by_ends: BTreeMap<(NodeId, NodeId), EdgeId> = BTreeMap::new();
        for e in base.links() {
            if let EdgeEnds::Link { u, v } = &e.ends {
                by_ends.insert((u.clone(), v.clone()), e.id.clone());
            }
        }
        let mut map = BTreeMap::new();
        for e in omega.links() {
            if let EdgeEnds::Link { u, v } = &e.ends {
                let base_id = by_ends.get(&(u.clone(), v.clone())).ok_or_else(|| {
                    Error::input(format!("edge {} projects to no base edge", e.id))
                })?;
                map.insert(e.id.clone(), base_id.clone());
            }
        }
        Ok(ExpansionProjection {
            base: base.clone(),
            map,
        })
    }

    /// Endpoint preservation, node fixing, and surjectivity checks.
    pub fn validate(&self, omega: &Graph) -> Result<()> {
        for n in self.base.nodes() {
            if !omega.has_node(n) {
                return Err(Error::input(format!(
                    "projection does not fix nodes: {n} missing upstairs"
                )));
            }
        }
        let mut hit: BTreeSet<&EdgeId> = BTreeSet::new();
        for (up, down) in &self.map {
            let e = omega.edge(up)?;
            let b = self.base.edge(down)?;
            let (EdgeEnds::Link { u, v }, EdgeEnds::Link { u: bu, v: bv }) = (&e.ends, &b.ends)
            else {
                return Err(Error::input(
                    "projection maps must relate links to links".to_string(),
                ));
            };
            if (u, v) != (bu, bv) {
                return Err(Error::input(format!(
                    "projection does not preserve endpoints on {up}"
                )));
            }
            hit.insert(down);
        }
        for b in self.base.links() {
            if !hit.contains(&b.id) {
                return Err(Error::input(format!(
                    "projection not surjective: base edge {} uncovered",
                    b.id
                )));
            }
        }
        for e in omega.links() {
            if !self.map.contains_key(&e.id) {
                return Err(Error::input(format!("link {} has no projection", e.id)));
            }
        }
        Ok(())
    }

    pub fn fiber(&self, base_edge: &EdgeId) -> Vec<EdgeId> {
        self.map
            .iter()
            .filter(|(_, b)| *b == base_edge)
            .map(|(e, _)| e.clone())
            .collect()
    }
}

fn require_simple(g: &Graph) -> Result<()> {
    let mut seen: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for e in g.edges() {
        match &e.ends {
            EdgeEnds::Half { .. } => {
                return Err(Error::domain(format!(
                    "base graph must be simple; {} is a half edge",
                    e.id
                )))
            }
            EdgeEnds::Link { u, v } => {
                if !seen.insert((u.clone(), v.clone())) {
                    return Err(Error::domain(format!(
                        "base graph must be simple; parallel edge {}",
                        e.id
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The group expansion of a simple graph: one link per (element, base edge),
/// gaining that element in the base edge's direction; optionally a half edge
/// at every node.
pub fn group_expansion(
    group: &Group,
    delta: &Graph,
    full: bool,
) -> Result<(GainGraph, ExpansionProjection)> {
    require_simple(delta)?;
    let elems = group.elements()?;
    let mut edges = Vec::new();
    let mut gains = BTreeMap::new();
    let mut map = BTreeMap::new();
    for e in delta.links() {
        let EdgeEnds::Link { u, v } = &e.ends else {
            unreachable!()
        };
        for g in &elems {
            let id = EdgeId::new(format!("{}:{}", e.id, group.elem_string(g)));
            edges.push(link(&id.0, &u.0, &v.0));
            gains.insert(id.clone(), g.clone());
            map.insert(id, e.id.clone());
        }
    }
    if full {
        for n in delta.nodes() {
            edges.push(Edge {
                id: EdgeId::new(format!("h{n}")),
                ends: EdgeEnds::Half { v: n.clone() },
            });
        }
    }
    let graph = Graph::new(delta.nodes().to_vec(), edges)?;
    let phi = GainGraph::new(graph, group.clone(), gains)?;
    let proj = ExpansionProjection {
        base: delta.clone(),
        map,
    };
    Ok((phi, proj))
}

/// Failure witness for the biased-expansion test.
#[derive(Clone, Debug)]
pub struct ExpansionWitness {
    pub base_circle: Circle,
    pub position: EdgeId,
    pub chosen_lifts: Vec<EdgeId>,
    pub balanced_completions: usize,
}

/// Checks the defining property of a biased expansion: for every base
/// circle, position, and choice of lifts elsewhere, exactly one fiber edge
/// completes a balanced circle.
pub fn is_biased_expansion(
    omega: &BiasedGraph,
    proj: &ExpansionProjection,
) -> Result<std::result::Result<(), ExpansionWitness>> {
    proj.validate(omega.graph())?;
    let base_circles = crate::graph::circles(&proj.base)?;
    for bc in &base_circles {
        let base_edges: Vec<EdgeId> = bc.edges().to_vec();
        let fibers: Vec<Vec<EdgeId>> = base_edges.iter().map(|e| proj.fiber(e)).collect();
        for (i, base_at_i) in base_edges.iter().enumerate() {
            let other_positions: Vec<usize> =
                (0..base_edges.len()).filter(|&j| j != i).collect();
            let mut choice = vec![0usize; other_positions.len()];
            loop {
                let chosen: Vec<EdgeId> = other_positions
                    .iter()
                    .zip(&choice)
                    .map(|(&j, &k)| fibers[j][k].clone())
                    .collect();
                let mut completions = 0usize;
                for cand in &fibers[i] {
                    let mut seq: Vec<EdgeId> = Vec::with_capacity(base_edges.len());
                    let mut it = chosen.iter();
                    for j in 0..base_edges.len() {
                        if j == i {
                            seq.push(cand.clone());
                        } else {
                            seq.push(it.next().unwrap().clone());
                        }
                    }
                    let c = Circle::from_cyclic(seq);
                    if omega.is_balanced_circle(&c) {
                        completions += 1;
                    }
                }
                if completions != 1 {
                    return Ok(Err(ExpansionWitness {
                        base_circle: bc.clone(),
                        position: base_at_i.clone(),
                        chosen_lifts: chosen,
                        balanced_completions: completions,
                    }));
                }
                // odometer over the other positions' fibers
                let mut carry = true;
                for (slot, &j) in choice.iter_mut().zip(&other_positions) {
                    if !carry {
                        break;
                    }
                    *slot += 1;
                    if *slot == fibers[j].len() {
                        *slot = 0;
                    } else {
                        carry = false;
                    }
                }
                if carry {
                    break;
                }
            }
        }
    }
    Ok(Ok(()))
}

pub const DEFAULT_SEARCH_CAP: usize = 1_000_000;

/// Searches for gains in `group` whose derived bias equals `omega`'s.
///
/// Spanning-forest gains are pinned to the identity (switching makes this
/// lossless), so the space is |G|^(links - n + c). Returns the
/// lexicographically first realization, or `None` after exhausting the space.
/// Half edges are ignored; they carry no gain.
pub fn gain_realizability_search(
    omega: &BiasedGraph,
    group: &Group,
    cap: usize,
) -> Result<Option<GainGraph>> {
    let elems = group.elements()?;
    let graph = omega.graph();
    let links: Vec<EdgeId> = graph.links().map(|e| e.id.clone()).collect();
    // lexicographically least spanning forest, Kruskal over sorted links
    let trivial_gains: BTreeMap<EdgeId, GroupElem> = links
        .iter()
        .map(|id| (id.clone(), group.identity()))
        .collect();
    let skeleton = GainGraph::new(graph.clone(), group.clone(), trivial_gains)?;
    let forest = skeleton.spanning_forest()?;
    let free: Vec<EdgeId> = links.iter().filter(|e| !forest.contains(e)).cloned().collect();

    let space: Option<usize> = elems.len().checked_pow(free.len() as u32);
    match space {
        Some(s) if s <= cap => {}
        _ => {
            return Err(Error::Resource(
                format!(
                    "gain search space |G|^{} with |G| = {}",
                    free.len(),
                    elems.len()
                ),
                cap,
            ))
        }
    }

    // precompute circle traversals as (edge, forward?) steps
    let mut circle_steps: Vec<(bool, Vec<(EdgeId, bool)>)> = Vec::new();
    for c in omega.circles() {
        let walk = c.traversal(graph)?;
        let steps = walk
            .iter()
            .map(|(id, from, _)| {
                let e = graph.edge(id).expect("traversal edges exist");
                let forward = match &e.ends {
                    EdgeEnds::Link { u, .. } => from == u,
                    EdgeEnds::Half { .. } => unreachable!("no half edges in circles"),
                };
                (id.clone(), forward)
            })
            .collect();
        circle_steps.push((omega.is_balanced_circle(c), steps));
    }

    let mut assignment = vec![0usize; free.len()];
    loop {
        let mut gains: BTreeMap<EdgeId, GroupElem> = BTreeMap::new();
        for id in &forest {
            gains.insert(id.clone(), group.identity());
        }
        for (id, &k) in free.iter().zip(&assignment) {
            gains.insert(id.clone(), elems[k].clone());
        }
        let matches = circle_steps.iter().all(|(want_balanced, steps)| {
            let mut acc = group.identity();
            for (id, forward) in steps {
                let g = &gains[id];
                let g = if *forward { g.clone() } else { group.inv(g) };
                acc = group.op(&acc, &g);
            }
            group.is_identity(&acc) == *want_balanced
        });
        if matches {
            return Ok(Some(GainGraph::new(
                graph.clone(),
                group.clone(),
                gains,
            )?));
        }
        // advance odometer; elements in canonical order keeps this lexicographic
        let mut carry = true;
        for slot in assignment.iter_mut().rev() {
            if !carry {
                break;
            }
            *slot += 1;
            if *slot == elems.len() {
                *slot = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            return Ok(None);
        }
    }
}

/// The doubled 4-cycle with balanced circles `e12 e23 e34 e41`,
/// `f12 f23 f34 f41`, and `f12 f23 e34 e41`. This biased graph admits no
/// gains in any group; the search refutes each small group exhaustively.
pub fn double_c4_biased() -> BiasedGraph {
    let g = crate::graph::double_c4();
    let circle = |ids: [&str; 4]| Circle::from_cyclic(ids.iter().map(|s| EdgeId::new(*s)).collect());
    let balanced: BTreeSet<Circle> = [
        circle(["e12", "e23", "e34", "e41"]),
        circle(["f12", "f23", "f34", "f41"]),
        circle(["f12", "f23", "e34", "e41"]),
    ]
    .into_iter()
    .collect();
    BiasedGraph::validate_linear_class(g, balanced)
        .expect("the built-in doubled quadrilateral is a valid linear class")
}

/// After tree normalization, tests whether every fiber's gain set is one
/// common subgroup; returns its elements sorted, or `None`.
///
/// Preconditions from the underlying lemma: the base is simple, inseparable,
/// of order at least 3, and the derived bias is a biased expansion of it.
pub fn is_subgroup_expansion(phi: &GainGraph, delta: &Graph) -> Result<Option<Vec<GroupElem>>> {
    require_simple(delta)?;
    if delta.node_count() < 3 {
        return Err(Error::domain(
            "subgroup extraction requires a base of order at least 3".to_string(),
        ));
    }
    if !crate::graph::is_inseparable(delta)? {
        return Err(Error::domain(
            "subgroup extraction requires an inseparable base".to_string(),
        ));
    }
    let proj = ExpansionProjection::from_endpoints(phi.graph(), delta)?;
    let omega = phi.to_biased()?;
    if is_biased_expansion(&omega, &proj)?.is_err() {
        return Ok(None);
    }
    let (normalized, _) = phi.tree_normalized()?;
    let group = normalized.group();

    let mut common: Option<BTreeSet<GroupElem>> = None;
    for base_edge in delta.links() {
        let fiber = proj.fiber(&base_edge.id);
        let set: BTreeSet<GroupElem> = fiber
            .iter()
            .map(|e| normalized.canonical_gain(e).cloned())
            .collect::<Result<_>>()?;
        match &common {
            None => common = Some(set),
            Some(h) if *h == set => {}
            Some(_) => return Ok(None),
        }
    }
    let h = common.unwrap_or_default();
    if !h.contains(&group.identity()) {
        return Ok(None);
    }
    for a in &h {
        for b in &h {
            if !h.contains(&group.op(a, &group.inv(b))) {
                return Ok(None);
            }
        }
    }
    Ok(Some(h.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::graph::{complete_graph, cycle_graph, edge_set, half_edge, triangle};
    use crate::group::TableGroup;

    fn qx() -> Group {
        Group::FieldMul(Field::Rationals)
    }

    fn triangle_gains(a: i64, b: i64, c: i64, group: &Group, field: &Field) -> GainGraph {
        // gains in canonical directions: a: 1->2, b: 2->3, c: 1->3
        let gains = [
            (EdgeId::new("a"), GroupElem::Scalar(field.from_i64(a))),
            (EdgeId::new("b"), GroupElem::Scalar(field.from_i64(b))),
            (EdgeId::new("c"), GroupElem::Scalar(field.from_i64(c))),
        ]
        .into_iter()
        .collect();
        GainGraph::new(triangle(), group.clone(), gains).unwrap()
    }

    #[test]
    fn circle_gain_telescopes() {
        let f = Field::Rationals;
        // circle traversal 1 -> 2 -> 3 -> 1 gives a * b * c^-1 with the
        // canonical direction of c being 1 -> 3
        let phi = triangle_gains(2, 3, 6, &qx(), &f);
        let c = Circle::from_cyclic(vec![EdgeId::new("a"), EdgeId::new("b"), EdgeId::new("c")]);
        let g = phi.circle_gain(&c, None).unwrap();
        assert!(phi.group().is_identity(&g));
    }

    #[test]
    fn circle_gain_additive_unbalanced() {
        let f = Field::prime(5).unwrap();
        let add = Group::FieldAdd(f);
        let phi = triangle_gains(1, 1, -1, &add, &f);
        // traversal gain 1 + 1 + 1 = 3 != 0
        let c = Circle::from_cyclic(vec![EdgeId::new("a"), EdgeId::new("b"), EdgeId::new("c")]);
        let g = phi.circle_gain(&c, None).unwrap();
        assert_eq!(g, GroupElem::Scalar(f.from_i64(3)));
    }

    #[test]
    fn digon_with_equal_gains_is_balanced() {
        let f = Field::prime(7).unwrap();
        let g = Graph::new(
            ["1", "2"].map(NodeId::from),
            vec![link("d", "1", "2"), link("e", "1", "2")],
        )
        .unwrap();
        let gains = [
            (EdgeId::new("d"), GroupElem::Scalar(f.from_i64(3))),
            (EdgeId::new("e"), GroupElem::Scalar(f.from_i64(3))),
        ]
        .into_iter()
        .collect();
        let phi = GainGraph::new(g, Group::FieldMul(f), gains).unwrap();
        let c = Circle::from_cyclic(vec![EdgeId::new("d"), EdgeId::new("e")]);
        assert!(phi.group().is_identity(&phi.circle_gain(&c, None).unwrap()));
    }

    #[test]
    fn gain_identity_status_invariant_under_start_and_direction() {
        let f = Field::prime(5).unwrap();
        let phi = triangle_gains(2, 4, 3, &Group::FieldMul(f), &f);
        let c = Circle::from_cyclic(vec![EdgeId::new("a"), EdgeId::new("b"), EdgeId::new("c")]);
        let base = phi.group().is_identity(&phi.circle_gain(&c, None).unwrap());
        for id in ["a", "b", "c"] {
            let e = EdgeId::new(id);
            let ends = phi.graph().edge(&e).unwrap().nodes();
            for n in ends {
                let g = phi.circle_gain(&c, Some((&e, n))).unwrap();
                assert_eq!(phi.group().is_identity(&g), base);
            }
        }
    }

    #[test]
    fn to_biased_marks_identity_circles() {
        let f = Field::Rationals;
        let phi = triangle_gains(1, 1, 1, &qx(), &f);
        let b = phi.to_biased().unwrap();
        assert_eq!(b.balanced_circles().len(), 1);

        let g = Graph::new(
            ["1", "2"].map(NodeId::from),
            vec![link("a", "1", "2"), half_edge("h", "1")],
        )
        .unwrap();
        let phi = GainGraph::new(
            g,
            qx(),
            [(EdgeId::new("a"), GroupElem::Scalar(f.from_i64(1)))]
                .into_iter()
                .collect(),
        )
        .unwrap();
        assert!(phi.to_biased().unwrap().balanced_circles().is_empty());
    }

    #[test]
    fn switching_preserves_bias() {
        let f = Field::prime(5).unwrap();
        let group = Group::FieldMul(f);
        let phi = triangle_gains(2, 4, 3, &group, &f);
        let zeta: BTreeMap<NodeId, GroupElem> = [
            (NodeId::from("1"), GroupElem::Scalar(f.from_i64(2))),
            (NodeId::from("2"), GroupElem::Scalar(f.from_i64(3))),
            (NodeId::from("3"), GroupElem::Scalar(f.from_i64(4))),
        ]
        .into_iter()
        .collect();
        let switched = phi.switch(&zeta).unwrap();
        assert_eq!(
            phi.to_biased().unwrap().balanced_circles(),
            switched.to_biased().unwrap().balanced_circles()
        );
    }

    #[test]
    fn identity_switch_is_noop() {
        let f = Field::Rationals;
        let phi = triangle_gains(2, 3, 5, &qx(), &f);
        let zeta = phi
            .graph()
            .nodes()
            .iter()
            .map(|n| (n.clone(), phi.group().identity()))
            .collect();
        assert_eq!(phi.switch(&zeta).unwrap(), phi);
    }

    #[test]
    fn tree_normalization_concentrates_gain() {
        let f = Field::Rationals;
        // gains along the directed circle 1 -> 2 -> 3 -> 1: a = 2, b = 3,
        // c = 5; edge c is stored in canonical direction 1 -> 3, so its
        // canonical gain is 1/5
        let gains = [
            (EdgeId::new("a"), GroupElem::Scalar(f.from_i64(2))),
            (EdgeId::new("b"), GroupElem::Scalar(f.from_i64(3))),
            (
                EdgeId::new("c"),
                GroupElem::Scalar(f.parse_scalar("1/5").unwrap()),
            ),
        ]
        .into_iter()
        .collect();
        let phi = GainGraph::new(triangle(), qx(), gains).unwrap();
        let (norm, forest) = phi.tree_normalized().unwrap();
        assert_eq!(forest, edge_set(&["a", "b"]));
        for id in &forest {
            assert!(norm.group().is_identity(norm.canonical_gain(id).unwrap()));
        }
        // after normalization the free edge carries the whole circle gain
        // a * b * c = 30 in the direction 3 -> 1
        let free = norm.gain_from(&EdgeId::new("c"), &NodeId::from("3")).unwrap();
        assert_eq!(free, GroupElem::Scalar(f.from_i64(30)));
        let c = Circle::from_cyclic(vec![EdgeId::new("a"), EdgeId::new("b"), EdgeId::new("c")]);
        assert_eq!(
            norm.group().is_identity(&norm.circle_gain(&c, None).unwrap()),
            phi.group().is_identity(&phi.circle_gain(&c, None).unwrap()),
        );
    }

    #[test]
    fn group_expansion_counts() {
        // trivial group leaves K3 as is
        let (phi, _) = group_expansion(&Group::Table(TableGroup::cyclic(1)), &triangle(), false)
            .unwrap();
        assert_eq!(phi.graph().edge_count(), 3);

        // GF(3)^x has order 2: two parallel links per base edge
        let f = Field::prime(3).unwrap();
        let (phi, _) = group_expansion(&Group::FieldMul(f), &complete_graph(3), false).unwrap();
        assert_eq!(phi.graph().edge_count(), 6);

        // Z2 on C4, full: 8 links + 4 half edges
        let (phi, _) = group_expansion(
            &Group::Table(TableGroup::cyclic(2)),
            &cycle_graph(4),
            true,
        )
        .unwrap();
        assert_eq!(phi.graph().links().count(), 8);
        assert_eq!(phi.graph().half_edges().count(), 4);
    }

    #[test]
    fn group_expansions_are_biased_expansions() {
        for group in [
            Group::Table(TableGroup::cyclic(2)),
            Group::Table(TableGroup::cyclic(3)),
            Group::FieldMul(Field::prime(5).unwrap()),
        ] {
            let (phi, proj) = group_expansion(&group, &triangle(), false).unwrap();
            let omega = phi.to_biased().unwrap();
            assert!(is_biased_expansion(&omega, &proj).unwrap().is_ok());
        }
    }

    #[test]
    fn trivial_expansion_of_balanced_graph() {
        let omega = crate::bias::all_balanced(triangle()).unwrap();
        let proj = ExpansionProjection::from_endpoints(omega.graph(), &triangle()).unwrap();
        assert!(is_biased_expansion(&omega, &proj).unwrap().is_ok());
    }

    #[test]
    fn double_c4_is_not_a_biased_expansion_of_c4() {
        // a 2-fold biased expansion of C4 would have 2^3 = 8 balanced
        // circles (every choice of lifts on three positions completes
        // uniquely); the built-in bias has only 3, so completion must fail
        let omega = double_c4_biased();
        let proj = ExpansionProjection::from_endpoints(omega.graph(), &cycle_graph(4)).unwrap();
        let w = is_biased_expansion(&omega, &proj)
            .unwrap()
            .err()
            .expect("unique completion fails");
        assert_ne!(w.balanced_completions, 1);
    }

    #[test]
    fn expansion_violation_witnessed() {
        // doubled triangle with too few balanced circles: empty balanced set
        // cannot be an expansion (no completion exists)
        let g = Graph::new(
            ["1", "2", "3"].map(NodeId::from),
            vec![
                link("a1", "1", "2"),
                link("a2", "1", "2"),
                link("b1", "2", "3"),
                link("b2", "2", "3"),
                link("c1", "1", "3"),
                link("c2", "1", "3"),
            ],
        )
        .unwrap();
        let omega = crate::bias::contrabalanced(g).unwrap();
        let proj = ExpansionProjection::from_endpoints(omega.graph(), &triangle()).unwrap();
        let out = is_biased_expansion(&omega, &proj).unwrap();
        let w = out.err().expect("must fail");
        assert_eq!(w.balanced_completions, 0);
    }

    #[test]
    fn search_finds_identity_gains_for_balanced_k3() {
        let omega = crate::bias::all_balanced(triangle()).unwrap();
        for group in [
            Group::Table(TableGroup::cyclic(2)),
            Group::Table(TableGroup::symmetric(3).unwrap()),
        ] {
            let found = gain_realizability_search(&omega, &group, DEFAULT_SEARCH_CAP)
                .unwrap()
                .expect("balanced K3 is realizable");
            assert_eq!(found.to_biased().unwrap().balanced_circles().len(), 1);
        }
    }

    #[test]
    fn double_c4_has_no_z2_gains() {
        let omega = double_c4_biased();
        let group = Group::Table(TableGroup::cyclic(2));
        assert!(gain_realizability_search(&omega, &group, DEFAULT_SEARCH_CAP)
            .unwrap()
            .is_none());
    }

    #[test]
    fn search_cap_enforced() {
        let omega = double_c4_biased();
        let group = Group::Table(TableGroup::symmetric(3).unwrap());
        assert!(matches!(
            gain_realizability_search(&omega, &group, 10),
            Err(Error::Resource(..))
        ));
    }

    #[test]
    fn double_c4_builtin_shape() {
        let b = double_c4_biased();
        assert_eq!(b.graph().node_count(), 4);
        assert_eq!(b.graph().edge_count(), 8);
        assert_eq!(b.balanced_circles().len(), 3);
    }

    #[test]
    fn subgroup_recovery_round_trips() {
        // whole group Z2 over K3
        let z2 = Group::Table(TableGroup::cyclic(2));
        let (phi, _) = group_expansion(&z2, &triangle(), false).unwrap();
        let h = is_subgroup_expansion(&phi, &triangle()).unwrap().unwrap();
        assert_eq!(h.len(), 2);

        // trivial subgroup {1} inside Z4: the 1-fold expansion
        let z4 = Group::Table(TableGroup::cyclic(4));
        let gains: BTreeMap<EdgeId, GroupElem> = ["a", "b", "c"]
            .iter()
            .map(|id| (EdgeId::new(*id), z4.identity()))
            .collect();
        let phi = GainGraph::new(triangle(), z4.clone(), gains).unwrap();
        let h = is_subgroup_expansion(&phi, &triangle()).unwrap().unwrap();
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn subgroup_z3_inside_z6() {
        // fibers {0, 2, 4} inside Z6 over K3
        let z6 = Group::Table(TableGroup::cyclic(6));
        let mut edges = Vec::new();
        let mut gains = BTreeMap::new();
        let ends = [("1", "2"), ("2", "3"), ("1", "3")];
        for (i, (u, v)) in ends.iter().enumerate() {
            for g in [0usize, 2, 4] {
                let id = format!("t{i}g{g}");
                edges.push(link(&id, u, v));
                gains.insert(EdgeId::new(id), GroupElem::Table(g));
            }
        }
        let graph = Graph::new(["1", "2", "3"].map(NodeId::from), edges).unwrap();
        let phi = GainGraph::new(graph, z6, gains).unwrap();
        let h = is_subgroup_expansion(&phi, &triangle()).unwrap().unwrap();
        assert_eq!(h, vec![GroupElem::Table(0), GroupElem::Table(2), GroupElem::Table(4)]);
    }

    #[test]
    fn subgroup_preconditions_enforced() {
        let z2 = Group::Table(TableGroup::cyclic(2));
        let path = Graph::new(
            ["1", "2", "3"].map(NodeId::from),
            vec![link("a", "1", "2"), link("b", "2", "3")],
        )
        .unwrap();
        let (phi, _) = group_expansion(&z2, &path, false).unwrap();
        assert!(matches!(
            is_subgroup_expansion(&phi, &path),
            Err(Error::Domain(_))
        ));
    }
}
