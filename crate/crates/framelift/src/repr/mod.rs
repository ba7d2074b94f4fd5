//! Geometric representations of frame and lift matroids over exact fields:
//! points on the lines of a projective frame, apical hyperplanes, lift
//! points in one extra coordinate, and affinographic hyperplane
//! arrangements — together with the reconstruction maps that read a biased
//! graph back off the geometry.

pub mod build;
pub mod cross;
pub mod reconstruct;

pub use build::{
    affinographic_arrangement, cevian_hyperplanes, menelaean_points, orthographic_points,
    standard_graphic_rep,
};
pub use cross::{is_cross_closed, CrossContext, CrossReport};
pub use reconstruct::{
    affinographic_gains, menelaean_gains, orthographic_gains, reconstruct_affino,
    reconstruct_frame, reconstruct_ortho,
};

use std::collections::BTreeMap;

use crate::algebra::config::{LinearKind, LinearMatroid, Vector, LIFT_COORD};
use crate::algebra::field::{Field, Scalar};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, NodeId, E0_LABEL};
use crate::matroid::RankOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReprKind {
    Menelaean,
    Cevian,
    Orthographic,
    Affinographic,
    Graphic,
}

impl ReprKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReprKind::Menelaean => "menelaean",
            ReprKind::Cevian => "cevian",
            ReprKind::Orthographic => "orthographic",
            ReprKind::Affinographic => "affinographic",
            ReprKind::Graphic => "graphic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "menelaean" => Ok(ReprKind::Menelaean),
            "cevian" => Ok(ReprKind::Cevian),
            "orthographic" | "ortho" => Ok(ReprKind::Orthographic),
            "affinographic" | "affino" => Ok(ReprKind::Affinographic),
            "graphic" => Ok(ReprKind::Graphic),
            _ => Err(Error::input(format!("unknown representation kind {s:?}"))),
        }
    }
}

/// An independent family of projective points indexed by graph nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameBasis {
    pub field: Field,
    pub ambient: Vec<String>,
    pub points: BTreeMap<NodeId, Vector>,
}

impl FrameBasis {
    /// The standard basis: unit coordinate vectors, one per node.
    pub fn standard(field: Field, nodes: &[NodeId]) -> Self {
        let ambient: Vec<String> = nodes.iter().map(|n| n.0.clone()).collect();
        let points = nodes
            .iter()
            .map(|n| (n.clone(), Vector::unit(&field, &n.0)))
            .collect();
        FrameBasis {
            field,
            ambient,
            points,
        }
    }

    pub fn new(field: Field, ambient: Vec<String>, points: BTreeMap<NodeId, Vector>) -> Result<Self> {
        let basis = FrameBasis {
            field,
            ambient,
            points,
        };
        basis.check_independent()?;
        Ok(basis)
    }

    pub fn check_independent(&self) -> Result<()> {
        let vs: Vec<Vector> = self.points.values().cloned().collect();
        let r = crate::algebra::config::rank(&self.field, &self.ambient, &vs)?;
        if r != self.points.len() {
            return Err(Error::input(
                "frame basis points are not projectively independent".to_string(),
            ));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.points.keys().cloned().collect()
    }
}

/// Labeled projective points representing a matroid; for the orthographic
/// kind the reserved label `e0` is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRepresentation {
    pub kind: ReprKind,
    pub field: Field,
    pub ambient: Vec<String>,
    pub points: BTreeMap<String, Vector>,
    pub basis: Option<FrameBasis>,
    /// Graph whose edges the point labels name.
    pub source: Graph,
}

impl PointRepresentation {
    pub fn linear_matroid(&self) -> Result<LinearMatroid> {
        LinearMatroid::new(
            self.field,
            LinearKind::Points,
            self.ambient.clone(),
            self.points.clone(),
        )
    }

    pub fn rank_oracle(&self) -> Result<RankOracle> {
        self.linear_matroid()?.rank_oracle()
    }

    pub fn point(&self, label: &str) -> Result<&Vector> {
        self.points
            .get(label)
            .ok_or_else(|| Error::input(format!("no point labeled {label:?}")))
    }
}

/// Labeled covectors (hyperplanes); affinographic ones carry constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneRepresentation {
    pub kind: ReprKind,
    pub field: Field,
    pub ambient: Vec<String>,
    pub covectors: BTreeMap<String, Vector>,
    /// Right-hand sides for affine hyperplanes `c . x = d`.
    pub constants: Option<BTreeMap<String, Scalar>>,
    pub source: Graph,
}

impl HyperplaneRepresentation {
    /// Rank oracle of the covector matroid: rank of S = rank of the
    /// covectors = codimension of their common kernel.
    pub fn rank_oracle(&self) -> Result<RankOracle> {
        LinearMatroid::new(
            self.field,
            LinearKind::Covectors,
            self.ambient.clone(),
            self.covectors.clone(),
        )?
        .rank_oracle()
    }

    pub fn covector(&self, label: &str) -> Result<&Vector> {
        self.covectors
            .get(label)
            .ok_or_else(|| Error::input(format!("no hyperplane labeled {label:?}")))
    }

    pub fn constant(&self, label: &str) -> Result<Scalar> {
        match &self.constants {
            Some(c) => c
                .get(label)
                .cloned()
                .ok_or_else(|| Error::input(format!("no constant for {label:?}"))),
            None => Ok(self.field.zero()),
        }
    }

    /// The affine system of a subset of hyperplanes.
    pub fn affine_system(&self, subset: &EdgeSet) -> Result<crate::algebra::config::AffineSystem> {
        let mut rows = Vec::new();
        for id in subset {
            rows.push((self.covector(&id.0)?.clone(), self.constant(&id.0)?));
        }
        Ok(crate::algebra::config::AffineSystem {
            field: self.field,
            ambient: self.ambient.clone(),
            rows,
        })
    }

    /// Nonempty intersection test for a subset of affine hyperplanes.
    pub fn consistent(&self, subset: &EdgeSet) -> Result<bool> {
        crate::algebra::config::affine_consistency(&self.affine_system(subset)?)
    }

    /// Projectivization of an affinographic arrangement: each hyperplane
    /// `c . x = d` becomes the covector `(-d, c)` with a homogenizing
    /// coordinate, and the ideal hyperplane joins as the reserved label `e0`.
    pub fn projectivize(&self) -> Result<LinearMatroid> {
        if self.kind != ReprKind::Affinographic {
            return Err(Error::domain(
                "projectivization applies to affinographic arrangements".to_string(),
            ));
        }
        let mut ambient = self.ambient.clone();
        ambient.push(LIFT_COORD.to_string());
        let mut rows: BTreeMap<String, Vector> = BTreeMap::new();
        for (label, cov) in &self.covectors {
            let d = self.constant(label)?;
            let mut coords = cov.coords().clone();
            coords.insert(LIFT_COORD.to_string(), self.field.neg(&d));
            rows.insert(label.clone(), Vector::new(&self.field, coords));
        }
        rows.insert(E0_LABEL.to_string(), Vector::unit(&self.field, LIFT_COORD));
        LinearMatroid::new(self.field, LinearKind::Covectors, ambient, rows)
    }
}
