//! The lift matroid and extended lift matroid of a biased graph.
//!
//! The extended ground set adds the reserved element `e0`. Rank of `S` is
//! `#N - c(S)` when `S` is balanced and omits `e0`, and one more otherwise.
//! Lift circuits differ from frame circuits in one shape: two node-disjoint
//! unbalanced figures form a circuit with no connecting path, and an
//! unbalanced figure together with `e0` is a circuit of the extension.

use std::collections::BTreeSet;

use crate::bias::BiasedGraph;
use crate::error::{Error, Result};
use crate::graph::{components, theta_subgraphs_of, EdgeEnds, EdgeId, EdgeSet, E0_LABEL};
use crate::matroid::frame::BalanceTables;
use crate::matroid::oracle::{Provenance, RankOracle};

/// A subset of `E ∪ {e0}` for the extended lift matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftSet {
    pub edges: EdgeSet,
    pub has_e0: bool,
}

impl LiftSet {
    pub fn from_labels(labels: &BTreeSet<String>) -> Self {
        let has_e0 = labels.contains(E0_LABEL);
        let edges = labels
            .iter()
            .filter(|l| *l != E0_LABEL)
            .map(|l| EdgeId::new(l.clone()))
            .collect();
        LiftSet { edges, has_e0 }
    }
}

/// Rank in `L(Ω)` or `L0(Ω)`; rejects `e0` unless `extended`.
pub fn lift_rank(omega: &BiasedGraph, s: &LiftSet, extended: bool) -> Result<usize> {
    if s.has_e0 && !extended {
        return Err(Error::input(format!(
            "{E0_LABEL} requires the extended lift matroid"
        )));
    }
    let c = components(omega.graph(), &s.edges)?.count;
    let balanced = omega.is_balanced_set(&s.edges)?;
    let bump = usize::from(!balanced || s.has_e0);
    Ok(omega.graph().node_count() - c + bump)
}

/// Closure in `L(Ω)` or `L0(Ω)`: balance-closure for balanced sets; the
/// graphic closure (plus all half edges, plus `e0` when extended) otherwise.
pub fn lift_closure(omega: &BiasedGraph, s: &LiftSet, extended: bool) -> Result<LiftSet> {
    if s.has_e0 && !extended {
        return Err(Error::input(format!(
            "{E0_LABEL} requires the extended lift matroid"
        )));
    }
    let g = omega.graph();
    if !s.has_e0 && omega.is_balanced_set(&s.edges)? {
        return Ok(LiftSet {
            edges: omega.balance_closure(&s.edges)?,
            has_e0: false,
        });
    }
    // graphic closure of the link part: links inside components, plus every
    // half edge (adding one never raises the rank once the bump is paid)
    let comps = components(g, &s.edges)?;
    let mut edges = s.edges.clone();
    for e in g.edges() {
        match &e.ends {
            EdgeEnds::Link { u, v } => {
                if comps.parts.iter().any(|p| p.contains(u) && p.contains(v)) {
                    edges.insert(e.id.clone());
                }
            }
            EdgeEnds::Half { .. } => {
                edges.insert(e.id.clone());
            }
        }
    }
    Ok(LiftSet {
        edges,
        has_e0: extended,
    })
}

/// Rank oracle for `L(Ω)` (ground `E`) or `L0(Ω)` (ground `E ∪ {e0}`).
pub fn lift_oracle(omega: &BiasedGraph, extended: bool) -> Result<RankOracle> {
    let mut ground: Vec<String> = omega.graph().edges().iter().map(|e| e.id.0.clone()).collect();
    if extended {
        ground.push(E0_LABEL.to_string());
    }
    let data = BalanceTables::new(omega)?;
    // map oracle bit (sorted label order) -> graph edge index; None marks e0
    let graph_index: Vec<Option<usize>> = {
        let mut sorted = ground.clone();
        sorted.sort();
        let g = omega.graph();
        sorted
            .iter()
            .map(|l| {
                if l == E0_LABEL {
                    None
                } else {
                    Some(g.edge_index(&EdgeId::new(l.clone())).unwrap())
                }
            })
            .collect()
    };
    RankOracle::new(ground, Provenance::Lift, move |mask| {
        let mut emask = 0u64;
        let mut has_e0 = false;
        for (bit, gi) in graph_index.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                match gi {
                    Some(i) => emask |= 1 << i,
                    None => has_e0 = true,
                }
            }
        }
        let c = data.component_count(emask);
        let bump = usize::from(!data.is_balanced(emask) || has_e0);
        data.node_count - c + bump
    })
}

/// Structural lift circuits: balanced circles, contrabalanced thetas, two
/// unbalanced figures sharing one node, two node-disjoint unbalanced
/// figures, and (extended) an unbalanced figure plus `e0`.
pub fn lift_circuits(omega: &BiasedGraph, extended: bool, cap: usize) -> Result<Vec<LiftSet>> {
    let g = omega.graph();
    let mut out: BTreeSet<(EdgeSet, bool)> = BTreeSet::new();

    for c in omega.circles() {
        if omega.is_balanced_circle(c) {
            out.insert((c.edge_set(), false));
        }
    }
    for triple in theta_subgraphs_of(g, omega.circles())? {
        if triple.iter().all(|c| !omega.is_balanced_circle(c)) {
            let mut union = EdgeSet::new();
            for c in &triple {
                union.extend(c.edge_set());
            }
            out.insert((union, false));
        }
    }

    // unbalanced figures: half edges and unbalanced circles
    let mut figures: Vec<(EdgeSet, BTreeSet<crate::graph::NodeId>)> = Vec::new();
    for e in g.half_edges() {
        figures.push((
            [e.id.clone()].into_iter().collect(),
            e.nodes().into_iter().cloned().collect(),
        ));
    }
    for c in omega.circles() {
        if !omega.is_balanced_circle(c) {
            figures.push((c.edge_set(), g.incident_nodes(&c.edge_set())?));
        }
    }
    for (i, (e1, n1)) in figures.iter().enumerate() {
        if extended {
            out.insert((e1.clone(), true));
        }
        for (e2, n2) in figures.iter().skip(i + 1) {
            if !e1.is_disjoint(e2) {
                continue;
            }
            if n1.intersection(n2).count() <= 1 {
                let mut union = e1.clone();
                union.extend(e2.iter().cloned());
                out.insert((union, false));
            }
            if out.len() > cap {
                return Err(Error::Resource("lift circuit enumeration".to_string(), cap));
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(edges, has_e0)| LiftSet { edges, has_e0 })
        .collect())
}
