//! Builders for the four analytic representations of a gain graph.
//!
//! Multiplicative gains give the frame-matroid representations: a link
//! `e_vw` with gain `g` becomes the point `hv - g hw` on the line joining
//! the basis points of its endpoints (homogeneous scalars dropped; `g = 1`
//! lands on the ideal point of the line), or dually the apical hyperplane
//! with covector `x_v - g x_w`. Additive gains give the lift-matroid
//! representations: the point `(g, hw - hv)` in one extra coordinate, or
//! the affine hyperplane `x_w - x_v = g`.

use std::collections::BTreeMap;

use crate::algebra::config::{Vector, LIFT_COORD};
use crate::algebra::field::{Field, Scalar};
use crate::error::{Error, Result};
use crate::gain::GainGraph;
use crate::graph::{EdgeEnds, Graph, E0_LABEL};
use crate::group::{Group, GroupElem};

use super::{FrameBasis, HyperplaneRepresentation, PointRepresentation, ReprKind};

fn multiplicative_field(phi: &GainGraph) -> Result<Field> {
    match phi.group() {
        Group::FieldMul(f) => Ok(*f),
        g => Err(Error::input(format!(
            "representation needs gains in a field's multiplicative group, got {g}"
        ))),
    }
}

fn additive_field(phi: &GainGraph) -> Result<Field> {
    match phi.group() {
        Group::FieldAdd(f) => Ok(*f),
        g => Err(Error::input(format!(
            "representation needs gains in a field's additive group, got {g}"
        ))),
    }
}

fn scalar_gain(g: &GroupElem) -> &Scalar {
    match g {
        GroupElem::Scalar(s) => s,
        GroupElem::Table(_) => unreachable!("field groups carry scalar gains"),
    }
}

/// Points `hv - g hw` per link (`hv` for a half edge at `v`).
pub fn menelaean_points(phi: &GainGraph) -> Result<PointRepresentation> {
    let field = multiplicative_field(phi)?;
    let g = phi.graph();
    let basis = FrameBasis::standard(field, g.nodes());
    let mut points = BTreeMap::new();
    for e in g.edges() {
        let p = match &e.ends {
            EdgeEnds::Link { u, v } => {
                let gain = scalar_gain(phi.canonical_gain(&e.id)?);
                let mut coords = BTreeMap::new();
                coords.insert(u.0.clone(), field.one());
                coords.insert(v.0.clone(), field.neg(gain));
                Vector::new(&field, coords)
            }
            EdgeEnds::Half { v } => Vector::unit(&field, &v.0),
        };
        points.insert(e.id.0.clone(), p);
    }
    Ok(PointRepresentation {
        kind: ReprKind::Menelaean,
        field,
        ambient: basis.ambient.clone(),
        points,
        basis: Some(basis),
        source: g.clone(),
    })
}

/// Apical hyperplanes as covectors: `x_v - g x_w` per link with gain `g`
/// (the hyperplane through every basis point except `hv`, `hw` and the apex
/// `g hv + hw`); the node hyperplane `x_v` for a half edge at `v`.
pub fn cevian_hyperplanes(phi: &GainGraph) -> Result<HyperplaneRepresentation> {
    let field = multiplicative_field(phi)?;
    let g = phi.graph();
    let ambient: Vec<String> = g.nodes().iter().map(|n| n.0.clone()).collect();
    let mut covectors = BTreeMap::new();
    for e in g.edges() {
        let c = match &e.ends {
            EdgeEnds::Link { u, v } => {
                let gain = scalar_gain(phi.canonical_gain(&e.id)?);
                let mut coords = BTreeMap::new();
                coords.insert(u.0.clone(), field.one());
                coords.insert(v.0.clone(), field.neg(gain));
                Vector::new(&field, coords)
            }
            EdgeEnds::Half { v } => Vector::unit(&field, &v.0),
        };
        covectors.insert(e.id.0.clone(), c);
    }
    Ok(HyperplaneRepresentation {
        kind: ReprKind::Cevian,
        field,
        ambient,
        covectors,
        constants: None,
        source: g.clone(),
    })
}

/// Test-only independent route to the apical hyperplane: the covector is
/// computed as the nullspace of the spanning set (all basis points except
/// the two endpoints, plus the apex) instead of in closed form.
#[cfg(test)]
pub fn cevian_covector_by_elimination(
    phi: &GainGraph,
    edge: &crate::graph::EdgeId,
) -> Result<Vector> {
    let field = multiplicative_field(phi)?;
    let g = phi.graph();
    let ambient: Vec<String> = g.nodes().iter().map(|n| n.0.clone()).collect();
    let e = g.edge(edge)?;
    let EdgeEnds::Link { u, v } = &e.ends else {
        return Err(Error::domain("elimination route handles links".to_string()));
    };
    let gain = scalar_gain(phi.canonical_gain(edge)?).clone();
    // apex g hv + hw
    let mut apex = BTreeMap::new();
    apex.insert(u.0.clone(), gain);
    apex.insert(v.0.clone(), field.one());
    let mut spanning: Vec<Vec<Scalar>> = vec![Vector::new(&field, apex).dense(&field, &ambient)?];
    for n in g.nodes() {
        if n != u && n != v {
            spanning.push(Vector::unit(&field, &n.0).dense(&field, &ambient)?);
        }
    }
    let kernel = crate::algebra::linalg::nullspace(&field, spanning);
    if kernel.len() != 1 {
        return Err(Error::validation("apical hyperplane is not unique"));
    }
    let coords = ambient
        .iter()
        .cloned()
        .zip(kernel.into_iter().next().unwrap())
        .collect();
    Ok(Vector::new(&field, coords))
}

/// Lift points `(g, hw - hv)` per link; `(1, 0)` for half edges and `e0`.
pub fn orthographic_points(phi: &GainGraph) -> Result<PointRepresentation> {
    let field = additive_field(phi)?;
    let g = phi.graph();
    reserve_lift_coord(g)?;
    let mut ambient: Vec<String> = g.nodes().iter().map(|n| n.0.clone()).collect();
    ambient.push(LIFT_COORD.to_string());
    let mut points = BTreeMap::new();
    for e in g.edges() {
        let p = match &e.ends {
            EdgeEnds::Link { u, v } => {
                let gain = scalar_gain(phi.canonical_gain(&e.id)?);
                let mut coords = BTreeMap::new();
                coords.insert(LIFT_COORD.to_string(), gain.clone());
                coords.insert(u.0.clone(), field.from_i64(-1));
                coords.insert(v.0.clone(), field.one());
                Vector::new(&field, coords)
            }
            EdgeEnds::Half { .. } => Vector::unit(&field, LIFT_COORD),
        };
        points.insert(e.id.0.clone(), p);
    }
    points.insert(E0_LABEL.to_string(), Vector::unit(&field, LIFT_COORD));
    Ok(PointRepresentation {
        kind: ReprKind::Orthographic,
        field,
        ambient,
        points,
        basis: None,
        source: g.clone(),
    })
}

/// Affine hyperplanes `x_w - x_v = g` per link; links only.
pub fn affinographic_arrangement(phi: &GainGraph) -> Result<HyperplaneRepresentation> {
    let field = additive_field(phi)?;
    let g = phi.graph();
    reserve_lift_coord(g)?;
    if let Some(h) = g.half_edges().next() {
        return Err(Error::domain(format!(
            "affinographic arrangements take links only; {} is a half edge",
            h.id
        )));
    }
    let ambient: Vec<String> = g.nodes().iter().map(|n| n.0.clone()).collect();
    let mut covectors = BTreeMap::new();
    let mut constants = BTreeMap::new();
    for e in g.links() {
        let EdgeEnds::Link { u, v } = &e.ends else {
            unreachable!()
        };
        let gain = scalar_gain(phi.canonical_gain(&e.id)?);
        let mut coords = BTreeMap::new();
        coords.insert(u.0.clone(), field.from_i64(-1));
        coords.insert(v.0.clone(), field.one());
        covectors.insert(e.id.0.clone(), Vector::new(&field, coords));
        constants.insert(e.id.0.clone(), gain.clone());
    }
    Ok(HyperplaneRepresentation {
        kind: ReprKind::Affinographic,
        field,
        ambient,
        covectors,
        constants: Some(constants),
        source: g.clone(),
    })
}

/// The standard representation of the graphic matroid: `hv_j - hv_i` per
/// link, in the canonical direction.
pub fn standard_graphic_rep(field: Field, delta: &Graph) -> Result<PointRepresentation> {
    for e in delta.edges() {
        if e.is_half() {
            return Err(Error::domain(format!(
                "graphic representation takes links only; {} is a half edge",
                e.id
            )));
        }
    }
    let ambient: Vec<String> = delta.nodes().iter().map(|n| n.0.clone()).collect();
    let mut points = BTreeMap::new();
    for e in delta.links() {
        let EdgeEnds::Link { u, v } = &e.ends else {
            unreachable!()
        };
        points.insert(
            e.id.0.clone(),
            Vector::from_i64(&field, &[(&v.0, 1), (&u.0, -1)]),
        );
    }
    Ok(PointRepresentation {
        kind: ReprKind::Graphic,
        field,
        ambient,
        points,
        basis: None,
        source: delta.clone(),
    })
}

fn reserve_lift_coord(g: &Graph) -> Result<()> {
    if g.nodes().iter().any(|n| n.0 == LIFT_COORD) {
        return Err(Error::input(format!(
            "node id {LIFT_COORD:?} collides with the lift coordinate"
        )));
    }
    Ok(())
}
