//! The expansion pipeline: cross-closure, reconstruction, the biased
//! expansion test, and subgroup recovery, end to end.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::config::Vector;
use crate::error::Result;
use crate::gain::{is_biased_expansion, is_subgroup_expansion, ExpansionProjection};
use crate::graph::{EdgeId, Graph};
use crate::repr::{
    affinographic_gains, is_cross_closed, menelaean_gains, reconstruct_affino, reconstruct_frame,
    CrossContext, FrameBasis, HyperplaneRepresentation,
};

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    /// None when the route has no cross-closure notion (affinographic).
    pub cross_closed: Option<bool>,
    pub expansion: bool,
    /// Recovered subgroup elements (canonical strings), when everything holds.
    pub subgroup: Option<Vec<String>>,
    pub fiber_size: usize,
}

/// Frame route: labeled points on the edge lines of a basis over a base
/// graph. Checks cross-closure, reconstructs, tests the expansion property,
/// recovers gains, and extracts the common fiber subgroup.
pub fn expansion_pipeline_frame(
    basis: &FrameBasis,
    points: &BTreeMap<String, Vector>,
    delta: &Graph,
    cap: usize,
) -> Result<PipelineReport> {
    let cross = is_cross_closed(&CrossContext::Frame(basis), points, delta, cap)?;
    if !cross.closed {
        return Ok(PipelineReport {
            cross_closed: Some(false),
            expansion: false,
            subgroup: None,
            fiber_size: 0,
        });
    }
    let omega = reconstruct_frame(basis, points)?;
    let proj = ExpansionProjection::from_endpoints(omega.graph(), delta)?;
    let expansion = is_biased_expansion(&omega, &proj)?.is_ok();
    if !expansion {
        return Ok(PipelineReport {
            cross_closed: Some(true),
            expansion: false,
            subgroup: None,
            fiber_size: 0,
        });
    }
    let phi = menelaean_gains(basis, &omega, points)?;
    let subgroup = is_subgroup_expansion(&phi, delta)?;
    let fiber_size = delta
        .links()
        .next()
        .map(|e| proj.fiber(&e.id).len())
        .unwrap_or(0);
    Ok(PipelineReport {
        cross_closed: Some(true),
        expansion: true,
        subgroup: subgroup.map(|h| {
            h.iter()
                .map(|g| phi.group().elem_string(g))
                .collect()
        }),
        fiber_size,
    })
}

/// Affinographic route: hyperplanes with their parallel-class map.
pub fn expansion_pipeline_affino(
    arr: &HyperplaneRepresentation,
    delta: &Graph,
    classes: &BTreeMap<String, EdgeId>,
) -> Result<PipelineReport> {
    let omega = reconstruct_affino(arr, delta, classes)?;
    let proj = ExpansionProjection {
        base: delta.clone(),
        map: classes
            .iter()
            .map(|(l, b)| (EdgeId::new(l.clone()), b.clone()))
            .collect(),
    };
    let expansion = is_biased_expansion(&omega, &proj)?.is_ok();
    if !expansion {
        return Ok(PipelineReport {
            cross_closed: None,
            expansion: false,
            subgroup: None,
            fiber_size: 0,
        });
    }
    let phi = affinographic_gains(arr, &omega)?;
    let subgroup = is_subgroup_expansion(&phi, delta)?;
    let fiber_size = delta
        .links()
        .next()
        .map(|e| proj.fiber(&e.id).len())
        .unwrap_or(0);
    Ok(PipelineReport {
        cross_closed: None,
        expansion: true,
        subgroup: subgroup.map(|h| h.iter().map(|g| phi.group().elem_string(g)).collect()),
        fiber_size,
    })
}

/// Builds the labeled Menelaean point set of a subgroup expansion over a
/// base graph: one point `hu - g hv` per (subgroup element, base edge).
pub fn subgroup_fiber_points(
    field: crate::algebra::field::Field,
    subgroup: &[crate::algebra::field::Scalar],
    delta: &Graph,
) -> Result<(FrameBasis, BTreeMap<String, Vector>)> {
    let basis = FrameBasis::standard(field, delta.nodes());
    let mut points = BTreeMap::new();
    for e in delta.links() {
        if let crate::graph::EdgeEnds::Link { u, v } = &e.ends {
            for g in subgroup {
                let mut coords = BTreeMap::new();
                coords.insert(u.0.clone(), field.one());
                coords.insert(v.0.clone(), field.neg(g));
                points.insert(
                    format!("{}:{}", e.id, field.scalar_string(g)),
                    Vector::new(&field, coords),
                );
            }
        }
    }
    Ok((basis, points))
}
