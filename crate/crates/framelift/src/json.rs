//! JSON wire formats for graphs, biased graphs, gain graphs, and
//! representations. Documents are deterministic: maps are ordered, so
//! identical inputs serialize byte-identically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::config::Vector;
use crate::algebra::field::Field;
use crate::bias::BiasedGraph;
use crate::error::{Error, Result};
use crate::gain::GainGraph;
use crate::graph::{Circle, Edge, EdgeEnds, EdgeId, Graph, NodeId};
use crate::group::{Group, GroupElem, TableGroup};
use crate::repr::{FrameBasis, HyperplaneRepresentation, PointRepresentation, ReprKind};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub ends: Vec<String>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            nodes: g.nodes().iter().map(|n| n.0.clone()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| match &e.ends {
                    EdgeEnds::Link { u, v } => EdgeDoc {
                        id: e.id.0.clone(),
                        kind: "link".to_string(),
                        ends: vec![u.0.clone(), v.0.clone()],
                    },
                    EdgeEnds::Half { v } => EdgeDoc {
                        id: e.id.0.clone(),
                        kind: "half".to_string(),
                        ends: vec![v.0.clone()],
                    },
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let nodes: Vec<NodeId> = self.nodes.iter().map(|s| NodeId(s.clone())).collect();
        let mut edges = Vec::new();
        for e in &self.edges {
            let ends = match (e.kind.as_str(), e.ends.as_slice()) {
                ("link", [u, v]) => EdgeEnds::Link {
                    u: NodeId(u.clone()),
                    v: NodeId(v.clone()),
                },
                ("half", [v]) => EdgeEnds::Half { v: NodeId(v.clone()) },
                _ => {
                    return Err(Error::input(format!(
                        "edge {} must be a link with 2 ends or a half with 1",
                        e.id
                    )))
                }
            };
            edges.push(Edge {
                id: EdgeId(e.id.clone()),
                ends,
            });
        }
        Graph::new(nodes, edges)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiasedGraphDoc {
    #[serde(flatten)]
    pub graph: GraphDoc,
    pub balanced: Vec<Vec<String>>,
}

impl BiasedGraphDoc {
    pub fn from_biased(b: &BiasedGraph) -> Self {
        BiasedGraphDoc {
            graph: GraphDoc::from_graph(b.graph()),
            balanced: b
                .balanced_circles()
                .iter()
                .map(|c| c.edges().iter().map(|e| e.0.clone()).collect())
                .collect(),
        }
    }

    /// Parses and validates the linear class.
    pub fn to_biased(&self) -> Result<BiasedGraph> {
        let graph = self.graph.to_graph()?;
        let balanced = self
            .balanced
            .iter()
            .map(|ids| Circle::from_cyclic(ids.iter().map(|s| EdgeId(s.clone())).collect()))
            .collect();
        BiasedGraph::validate_linear_class(graph, balanced)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupDoc {
    #[serde(rename = "table")]
    Table {
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
    },
    #[serde(rename = "field*")]
    FieldMul { field: String },
    #[serde(rename = "field+")]
    FieldAdd { field: String },
}

impl GroupDoc {
    pub fn from_group(g: &Group) -> Self {
        match g {
            Group::Table(t) => GroupDoc::Table {
                elements: t.elements.clone(),
                table: t.table.clone(),
            },
            Group::FieldMul(f) => GroupDoc::FieldMul {
                field: f.to_string(),
            },
            Group::FieldAdd(f) => GroupDoc::FieldAdd {
                field: f.to_string(),
            },
        }
    }

    pub fn to_group(&self) -> Result<Group> {
        Ok(match self {
            GroupDoc::Table { elements, table } => {
                Group::Table(TableGroup::new(elements.clone(), table.clone())?)
            }
            GroupDoc::FieldMul { field } => Group::FieldMul(Field::parse(field)?),
            GroupDoc::FieldAdd { field } => Group::FieldAdd(Field::parse(field)?),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GainDoc {
    pub from: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GainGraphDoc {
    #[serde(flatten)]
    pub graph: GraphDoc,
    pub group: GroupDoc,
    pub gains: BTreeMap<String, GainDoc>,
}

impl GainGraphDoc {
    pub fn from_gain_graph(phi: &GainGraph) -> Self {
        let group = phi.group();
        let gains = phi
            .graph()
            .links()
            .map(|e| {
                let EdgeEnds::Link { u, .. } = &e.ends else {
                    unreachable!()
                };
                let g = phi.canonical_gain(&e.id).expect("links carry gains");
                (
                    e.id.0.clone(),
                    GainDoc {
                        from: u.0.clone(),
                        value: group.elem_string(g),
                    },
                )
            })
            .collect();
        GainGraphDoc {
            graph: GraphDoc::from_graph(phi.graph()),
            group: GroupDoc::from_group(group),
            gains,
        }
    }

    pub fn to_gain_graph(&self) -> Result<GainGraph> {
        let graph = self.graph.to_graph()?;
        let group = self.group.to_group()?;
        let mut gains: BTreeMap<EdgeId, GroupElem> = BTreeMap::new();
        for (id, doc) in &self.gains {
            let edge = graph.edge(&EdgeId(id.clone()))?;
            let EdgeEnds::Link { u, v } = &edge.ends else {
                return Err(Error::input(format!("gain on half edge {id}")));
            };
            let value = group.parse_elem(&doc.value)?;
            let canonical = if doc.from == u.0 {
                value
            } else if doc.from == v.0 {
                group.inv(&value)
            } else {
                return Err(Error::input(format!(
                    "gain direction {} is not an endpoint of {id}",
                    doc.from
                )));
            };
            gains.insert(EdgeId(id.clone()), canonical);
        }
        GainGraph::new(graph, group, gains)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoordsDoc {
    pub coords: BTreeMap<String, String>,
}

fn vector_doc(field: &Field, v: &Vector) -> CoordsDoc {
    CoordsDoc {
        coords: v
            .coords()
            .iter()
            .map(|(l, s)| (l.clone(), field.scalar_string(s)))
            .collect(),
    }
}

fn doc_vector(field: &Field, doc: &CoordsDoc) -> Result<Vector> {
    let mut coords = BTreeMap::new();
    for (l, s) in &doc.coords {
        coords.insert(l.clone(), field.parse_scalar(s)?);
    }
    Ok(Vector::new(field, coords))
}

/// Standalone vector document carrying its own field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorDoc {
    pub field: String,
    pub coords: BTreeMap<String, String>,
}

impl VectorDoc {
    pub fn to_vector(&self) -> Result<(Field, Vector)> {
        let field = Field::parse(&self.field)?;
        let mut coords = BTreeMap::new();
        for (l, s) in &self.coords {
            coords.insert(l.clone(), field.parse_scalar(s)?);
        }
        Ok((field, Vector::new(&field, coords)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReprDoc {
    pub kind: String,
    pub field: String,
    pub ambient: Vec<String>,
    pub graph: GraphDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<BTreeMap<String, CoordsDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BTreeMap<String, CoordsDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covectors: Option<BTreeMap<String, CoordsDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<BTreeMap<String, String>>,
    /// Base graph for orthographic and affinographic reconstruction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<GraphDoc>,
    /// Parallel-class map for affinographic reconstruction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<BTreeMap<String, String>>,
}

impl ReprDoc {
    pub fn from_points(rep: &PointRepresentation, base: Option<&Graph>) -> Self {
        ReprDoc {
            kind: rep.kind.as_str().to_string(),
            field: rep.field.to_string(),
            ambient: rep.ambient.clone(),
            graph: GraphDoc::from_graph(&rep.source),
            points: Some(
                rep.points
                    .iter()
                    .map(|(l, v)| (l.clone(), vector_doc(&rep.field, v)))
                    .collect(),
            ),
            basis: rep.basis.as_ref().map(|b| {
                b.points
                    .iter()
                    .map(|(n, v)| (n.0.clone(), vector_doc(&b.field, v)))
                    .collect()
            }),
            covectors: None,
            constants: None,
            base: base.map(GraphDoc::from_graph),
            classes: None,
        }
    }

    pub fn from_hyperplanes(
        rep: &HyperplaneRepresentation,
        base: Option<&Graph>,
        classes: Option<&BTreeMap<String, EdgeId>>,
    ) -> Self {
        ReprDoc {
            kind: rep.kind.as_str().to_string(),
            field: rep.field.to_string(),
            ambient: rep.ambient.clone(),
            graph: GraphDoc::from_graph(&rep.source),
            points: None,
            basis: None,
            covectors: Some(
                rep.covectors
                    .iter()
                    .map(|(l, v)| (l.clone(), vector_doc(&rep.field, v)))
                    .collect(),
            ),
            constants: rep.constants.as_ref().map(|cs| {
                cs.iter()
                    .map(|(l, s)| (l.clone(), rep.field.scalar_string(s)))
                    .collect()
            }),
            base: base.map(GraphDoc::from_graph),
            classes: classes.map(|m| m.iter().map(|(l, e)| (l.clone(), e.0.clone())).collect()),
        }
    }

    pub fn field(&self) -> Result<Field> {
        Field::parse(&self.field)
    }

    pub fn kind(&self) -> Result<ReprKind> {
        ReprKind::parse(&self.kind)
    }

    pub fn points_map(&self) -> Result<BTreeMap<String, Vector>> {
        let field = self.field()?;
        let docs = self
            .points
            .as_ref()
            .ok_or_else(|| Error::input("representation document has no points"))?;
        docs.iter()
            .map(|(l, d)| Ok((l.clone(), doc_vector(&field, d)?)))
            .collect()
    }

    pub fn basis_map(&self) -> Result<FrameBasis> {
        let field = self.field()?;
        let docs = self
            .basis
            .as_ref()
            .ok_or_else(|| Error::input("representation document has no basis"))?;
        let points = docs
            .iter()
            .map(|(n, d)| Ok((NodeId(n.clone()), doc_vector(&field, d)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        FrameBasis::new(field, self.ambient.clone(), points)
    }

    pub fn hyperplanes(&self) -> Result<HyperplaneRepresentation> {
        let field = self.field()?;
        let kind = self.kind()?;
        let docs = self
            .covectors
            .as_ref()
            .ok_or_else(|| Error::input("representation document has no covectors"))?;
        let covectors = docs
            .iter()
            .map(|(l, d)| Ok((l.clone(), doc_vector(&field, d)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let constants = match &self.constants {
            Some(cs) => Some(
                cs.iter()
                    .map(|(l, s)| Ok((l.clone(), field.parse_scalar(s)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?,
            ),
            None => None,
        };
        Ok(HyperplaneRepresentation {
            kind,
            field,
            ambient: self.ambient.clone(),
            covectors,
            constants,
            source: self.graph.to_graph()?,
        })
    }
}

/// Parses an input document as either a biased graph (a `balanced` key) or
/// a gain graph (a `gains` key, converted through its derived bias).
pub fn parse_biased_or_gain(text: &str) -> Result<BiasedGraph> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::input(format!("malformed JSON: {e}")))?;
    if value.get("gains").is_some() {
        let doc: GainGraphDoc = serde_json::from_value(value)
            .map_err(|e| Error::input(format!("malformed gain graph: {e}")))?;
        doc.to_gain_graph()?.to_biased()
    } else if value.get("balanced").is_some() {
        let doc: BiasedGraphDoc = serde_json::from_value(value)
            .map_err(|e| Error::input(format!("malformed biased graph: {e}")))?;
        doc.to_biased()
    } else {
        Err(Error::input(
            "document is neither a biased graph (balanced) nor a gain graph (gains)".to_string(),
        ))
    }
}

pub fn parse_gain_graph(text: &str) -> Result<GainGraph> {
    let doc: GainGraphDoc =
        serde_json::from_str(text).map_err(|e| Error::input(format!("malformed JSON: {e}")))?;
    doc.to_gain_graph()
}
