//! Biased graphs: a graph plus a linear class of balanced circles.
//!
//! The linear-class condition says no theta subgraph has exactly two
//! balanced circles. Balance of an edge set, balanced components, the
//! balance-closure operator `bcl`, and the structural predicates all live
//! here. Balance questions are answered by scanning the (cached) circle
//! list of the graph; correctness over speed at desk scale.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    circles_capped, components, theta_subgraphs_of, Circle, Edge, EdgeEnds, EdgeId, EdgeSet, Graph,
    NodeId, DEFAULT_CIRCLE_CAP,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasedGraph {
    graph: Graph,
    balanced: BTreeSet<Circle>,
    /// All circles of the underlying graph, canonical order.
    circles: Vec<Circle>,
}

/// Witness for a failed linear-class validation.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaViolation {
    pub theta: [Circle; 3],
    pub balanced_in_theta: usize,
}

impl BiasedGraph {
    /// Validates the linear class and builds the biased graph. Fails with the
    /// first theta triple containing exactly two balanced circles.
    pub fn validate_linear_class(graph: Graph, balanced: BTreeSet<Circle>) -> Result<Self> {
        Self::validate_linear_class_capped(graph, balanced, DEFAULT_CIRCLE_CAP)
    }

    pub fn validate_linear_class_capped(
        graph: Graph,
        balanced: BTreeSet<Circle>,
        cap: usize,
    ) -> Result<Self> {
        let circles = circles_capped(&graph, cap)?;
        let circle_set: BTreeSet<&Circle> = circles.iter().collect();
        for c in &balanced {
            c.validate(&graph)?;
            if !circle_set.contains(c) {
                return Err(Error::input(format!(
                    "balanced list contains {:?}, which is not a circle of the graph",
                    c.edges()
                )));
            }
        }
        for triple in theta_subgraphs_of(&graph, &circles)? {
            let count = triple.iter().filter(|c| balanced.contains(c)).count();
            if count == 2 {
                return Err(Error::LinearClass {
                    theta: [
                        triple[0].edges().iter().map(|e| e.0.clone()).collect(),
                        triple[1].edges().iter().map(|e| e.0.clone()).collect(),
                        triple[2].edges().iter().map(|e| e.0.clone()).collect(),
                    ],
                });
            }
        }
        Ok(BiasedGraph {
            graph,
            balanced,
            circles,
        })
    }

    /// Construction for callers that guarantee the linear class themselves
    /// (e.g. the balanced circles of a gain graph). Still enumerates circles.
    pub(crate) fn new_unchecked(graph: Graph, balanced: BTreeSet<Circle>) -> Result<Self> {
        let circles = circles_capped(&graph, DEFAULT_CIRCLE_CAP)?;
        Ok(BiasedGraph {
            graph,
            balanced,
            circles,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn balanced_circles(&self) -> &BTreeSet<Circle> {
        &self.balanced
    }

    pub fn is_balanced_circle(&self, c: &Circle) -> bool {
        self.balanced.contains(c)
    }

    /// Balanced edge set: no half edges, and every circle inside is balanced.
    pub fn is_balanced_set(&self, s: &EdgeSet) -> Result<bool> {
        self.graph.check_subset(s)?;
        for id in s {
            if self.graph.edge(id)?.is_half() {
                return Ok(false);
            }
        }
        for c in &self.circles {
            if c.edges().iter().all(|e| s.contains(e)) && !self.balanced.contains(c) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `b(S)` and `N_0(S)`: balanced component count and the nodes of
    /// unbalanced components of the spanning subgraph `(N, S)`.
    pub fn balanced_components(&self, s: &EdgeSet) -> Result<(usize, BTreeSet<NodeId>)> {
        let comps = components(&self.graph, s)?;
        let mut unbalanced_nodes: BTreeSet<NodeId> = BTreeSet::new();
        // a component is unbalanced iff it carries a half edge of s or an
        // unbalanced circle inside s
        for id in s {
            if let EdgeEnds::Half { v } = &self.graph.edge(id)?.ends {
                let part = comps
                    .parts
                    .iter()
                    .find(|p| p.contains(v))
                    .expect("every node is in a component");
                unbalanced_nodes.extend(part.iter().cloned());
            }
        }
        for c in &self.circles {
            if self.balanced.contains(c) {
                continue;
            }
            if c.edges().iter().all(|e| s.contains(e)) {
                let any_node = self
                    .graph
                    .edge(&c.edges()[0])?
                    .nodes()
                    .first()
                    .cloned()
                    .cloned()
                    .expect("circle edges have endpoints");
                let part = comps
                    .parts
                    .iter()
                    .find(|p| p.contains(&any_node))
                    .expect("every node is in a component");
                unbalanced_nodes.extend(part.iter().cloned());
            }
        }
        let balanced_count = comps
            .parts
            .iter()
            .filter(|p| p.iter().all(|n| !unbalanced_nodes.contains(n)))
            .count();
        Ok((balanced_count, unbalanced_nodes))
    }

    /// One application of the balance-closure formula: `S` plus every edge
    /// completing a balanced circle inside `S + e`. Not iterated.
    pub fn balance_closure(&self, s: &EdgeSet) -> Result<EdgeSet> {
        self.graph.check_subset(s)?;
        let mut out = s.clone();
        for c in &self.balanced {
            let outside: Vec<&EdgeId> = c.edges().iter().filter(|e| !s.contains(*e)).collect();
            if outside.len() == 1 {
                out.insert(outside[0].clone());
            }
        }
        Ok(out)
    }

    /// No balanced digons.
    pub fn is_simply_biased(&self) -> bool {
        !self.balanced.iter().any(|c| c.len() == 2)
    }

    /// Every pair of adjacent nodes supports at least two edges.
    pub fn is_thick(&self) -> bool {
        let mut pair_count: std::collections::BTreeMap<(NodeId, NodeId), usize> =
            std::collections::BTreeMap::new();
        for e in self.graph.links() {
            if let EdgeEnds::Link { u, v } = &e.ends {
                *pair_count.entry((u.clone(), v.clone())).or_default() += 1;
            }
        }
        pair_count.values().all(|&c| c >= 2)
    }

    /// Half edge at every node.
    pub fn is_full(&self) -> bool {
        let mut with_half: BTreeSet<&NodeId> = BTreeSet::new();
        for e in self.graph.half_edges() {
            if let EdgeEnds::Half { v } = &e.ends {
                with_half.insert(v);
            }
        }
        self.graph.nodes().iter().all(|n| with_half.contains(n))
    }

    pub fn structural_predicates(&self) -> StructuralPredicates {
        StructuralPredicates {
            is_simply_biased: self.is_simply_biased(),
            is_thick: self.is_thick(),
            is_full: self.is_full(),
        }
    }

    /// Adjoins a half edge at every node lacking one; bias unchanged.
    pub fn fullify(&self) -> Result<BiasedGraph> {
        let mut covered: BTreeSet<&NodeId> = BTreeSet::new();
        for e in self.graph.half_edges() {
            if let EdgeEnds::Half { v } = &e.ends {
                covered.insert(v);
            }
        }
        let mut edges: Vec<Edge> = self.graph.edges().to_vec();
        let existing: BTreeSet<EdgeId> = edges.iter().map(|e| e.id.clone()).collect();
        for n in self.graph.nodes() {
            if covered.contains(n) {
                continue;
            }
            let mut id = EdgeId::new(format!("h{n}"));
            let mut k = 1;
            while existing.contains(&id) {
                id = EdgeId::new(format!("h{n}.{k}"));
                k += 1;
            }
            edges.push(Edge {
                id,
                ends: EdgeEnds::Half { v: n.clone() },
            });
        }
        let graph = Graph::new(self.graph.nodes().to_vec(), edges)?;
        BiasedGraph::new_unchecked(graph, self.balanced.clone())
    }

    /// The whole edge set is balanced.
    pub fn is_balanced(&self) -> Result<bool> {
        self.is_balanced_set(&self.graph.all_edges())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralPredicates {
    pub is_simply_biased: bool,
    pub is_thick: bool,
    pub is_full: bool,
}

/// Convenience: biased graph with every circle balanced.
pub fn all_balanced(graph: Graph) -> Result<BiasedGraph> {
    let circles = circles_capped(&graph, DEFAULT_CIRCLE_CAP)?;
    BiasedGraph::new_unchecked(graph, circles.into_iter().collect())
}

/// Convenience: biased graph with no balanced circles (contrabalanced).
pub fn contrabalanced(graph: Graph) -> Result<BiasedGraph> {
    BiasedGraph::new_unchecked(graph, BTreeSet::new())
}
