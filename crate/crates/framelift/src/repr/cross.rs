//! Cross-closure of a point set with respect to a base graph.
//!
//! A cross-flat is a flat containing no basis point (frame context) or not
//! containing `e0` (lift context). The point set is cross-closed when every
//! cross-flat it spans meets each edge line only in points of the set; that
//! is exactly the condition under which reconstruction yields a biased
//! expansion of a closed subgraph of the base.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::config::{in_span, Vector};
use crate::algebra::field::{Field, Scalar};
use crate::algebra::linalg;
use crate::error::{Error, Result};
use crate::graph::{EdgeEnds, Graph};

use super::{FrameBasis, PointRepresentation};

pub enum CrossContext<'a> {
    /// Edge lines join pairs of frame-basis points.
    Frame(&'a FrameBasis),
    /// Edge lines join the base graphic representation to `e0`.
    Ortho {
        e0: &'a Vector,
        base: &'a PointRepresentation,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossWitness {
    /// Labels spanning the offending cross-flat.
    pub generators: Vec<String>,
    /// Base edge whose line meets the flat outside the point set.
    pub base_edge: String,
    /// The missing intersection point, as label -> coordinate string.
    pub missing_point: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossReport {
    pub closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CrossWitness>,
    pub flats_checked: usize,
}

struct LineFamily {
    field: Field,
    ambient: Vec<String>,
    /// (base edge id, the two spanning vectors of the edge line).
    lines: Vec<(String, Vector, Vector)>,
    /// Points whose absence from a flat makes it a cross-flat.
    forbidden: Vec<Vector>,
}

impl LineFamily {
    fn new(ctx: &CrossContext, delta: &Graph) -> Result<Self> {
        match ctx {
            CrossContext::Frame(basis) => {
                let mut lines = Vec::new();
                for e in delta.links() {
                    let EdgeEnds::Link { u, v } = &e.ends else {
                        unreachable!()
                    };
                    let hu = basis
                        .points
                        .get(u)
                        .ok_or_else(|| Error::input(format!("basis misses node {u}")))?;
                    let hv = basis
                        .points
                        .get(v)
                        .ok_or_else(|| Error::input(format!("basis misses node {v}")))?;
                    lines.push((e.id.0.clone(), hu.clone(), hv.clone()));
                }
                Ok(LineFamily {
                    field: basis.field,
                    ambient: basis.ambient.clone(),
                    lines,
                    forbidden: basis.points.values().cloned().collect(),
                })
            }
            CrossContext::Ortho { e0, base } => {
                let mut ambient = base.ambient.clone();
                for l in e0.coords().keys() {
                    if !ambient.contains(l) {
                        ambient.push(l.clone());
                    }
                }
                ambient.sort();
                let mut lines = Vec::new();
                for e in delta.links() {
                    let z = base.point(&e.id.0)?;
                    lines.push((e.id.0.clone(), z.clone(), (*e0).clone()));
                }
                Ok(LineFamily {
                    field: base.field,
                    ambient,
                    lines,
                    forbidden: vec![(*e0).clone()],
                })
            }
        }
    }

    fn is_cross_flat(&self, span: &[Vector]) -> Result<bool> {
        for f in &self.forbidden {
            if in_span(&self.field, &self.ambient, f, span)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Intersection of the span of `flat` (given as independent rows) with
    /// the line through `a` and `b`: `None` when empty, the point otherwise.
    /// The flat must not contain the whole line.
    fn line_intersection(
        &self,
        flat_rows: &[Vec<Scalar>],
        a: &Vector,
        b: &Vector,
    ) -> Result<Option<Vector>> {
        let f = &self.field;
        let r = flat_rows.len();
        let mut with_line = flat_rows.to_vec();
        with_line.push(a.dense(f, &self.ambient)?);
        with_line.push(b.dense(f, &self.ambient)?);
        let joined = linalg::rank(f, with_line);
        if joined == r + 2 {
            return Ok(None);
        }
        if joined == r {
            return Err(Error::validation(
                "flat contains a whole edge line".to_string(),
            ));
        }
        // unique intersection point: solve alpha a + beta b in span(flat) via
        // the kernel of the column matrix [a | b | flat...]
        let ncols = 2 + r;
        let da = a.dense(f, &self.ambient)?;
        let db = b.dense(f, &self.ambient)?;
        let rows: Vec<Vec<Scalar>> = (0..self.ambient.len())
            .map(|i| {
                let mut row = Vec::with_capacity(ncols);
                row.push(da[i].clone());
                row.push(db[i].clone());
                for fr in flat_rows {
                    row.push(fr[i].clone());
                }
                row
            })
            .collect();
        let kernel = linalg::nullspace(f, rows);
        let k = kernel
            .iter()
            .find(|k| !f.is_zero(&k[0]) || !f.is_zero(&k[1]))
            .ok_or_else(|| Error::validation("missing pencil coefficients".to_string()))?;
        let point = a
            .scale(f, &k[0])
            .add(f, &b.scale(f, &k[1]));
        if point.is_zero() {
            return Err(Error::validation("degenerate edge line".to_string()));
        }
        Ok(Some(point))
    }
}

/// Checks cross-closure: for every cross-flat spanned by a subset of the
/// points (subsets up to the full rank, deduplicated by span), the
/// intersection with every edge line lies inside the point set.
pub fn is_cross_closed(
    ctx: &CrossContext,
    points: &BTreeMap<String, Vector>,
    delta: &Graph,
    cap: usize,
) -> Result<CrossReport> {
    let fam = LineFamily::new(ctx, delta)?;
    let f = fam.field;

    // precondition: every point lies on some edge line
    for (label, p) in points {
        let mut on_some = false;
        for (_, a, b) in &fam.lines {
            if in_span(&f, &fam.ambient, p, &[a.clone(), b.clone()])? {
                on_some = true;
                break;
            }
        }
        if !on_some {
            return Err(Error::input(format!(
                "point {label:?} lies on no edge line of the base"
            )));
        }
    }

    let labels: Vec<&String> = points.keys().collect();
    let all_vectors: Vec<Vector> = points.values().cloned().collect();
    let rmax = crate::algebra::config::rank(&f, &fam.ambient, &all_vectors)?;

    let mut seen_spans: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    let mut flats_checked = 0usize;
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if flats_checked > cap {
            return Err(Error::Resource("cross-flat enumeration".to_string(), cap));
        }
        if !chosen.is_empty() {
            let span: Vec<Vector> = chosen
                .iter()
                .map(|&i| points[labels[i]].clone())
                .collect();
            let dense: Vec<Vec<Scalar>> = span
                .iter()
                .map(|v| v.dense(&f, &fam.ambient))
                .collect::<Result<_>>()?;
            let signature = linalg::span_signature(&f, dense.clone());
            if seen_spans.insert(signature) {
                flats_checked += 1;
                if fam.is_cross_flat(&span)? {
                    let reduced = linalg::rref(&f, dense).rows;
                    for (base_edge, a, b) in &fam.lines {
                        if let Some(q) = fam.line_intersection(&reduced, a, b)? {
                            let present = points
                                .values()
                                .map(|p| p.projectively_equal(&f, &q))
                                .collect::<Result<Vec<bool>>>()?
                                .into_iter()
                                .any(|x| x);
                            if !present {
                                let missing_point = q
                                    .coords()
                                    .iter()
                                    .map(|(l, s)| (l.clone(), f.scalar_string(s)))
                                    .collect();
                                return Ok(CrossReport {
                                    closed: false,
                                    witness: Some(CrossWitness {
                                        generators: chosen
                                            .iter()
                                            .map(|&i| labels[i].clone())
                                            .collect(),
                                        base_edge: base_edge.clone(),
                                        missing_point,
                                    }),
                                    flats_checked,
                                });
                            }
                        }
                    }
                }
            }
        }
        if chosen.len() < rmax {
            for i in start..labels.len() {
                let mut next = chosen.clone();
                next.push(i);
                stack.push((i + 1, next));
            }
        }
    }
    Ok(CrossReport {
        closed: true,
        witness: None,
        flats_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::graph::{complete_graph, NodeId};

    /// All points of every edge line of K3 over GF(q), including the basis.
    fn full_fiber_points(q: u64) -> (FrameBasis, BTreeMap<String, Vector>) {
        let field = Field::prime(q).unwrap();
        let nodes: Vec<NodeId> = ["1", "2", "3"].map(NodeId::from).to_vec();
        let basis = FrameBasis::standard(field, &nodes);
        let mut points = BTreeMap::new();
        for n in &nodes {
            points.insert(format!("h{n}"), Vector::unit(&field, &n.0));
        }
        let pairs = [("1", "2"), ("1", "3"), ("2", "3")];
        for (u, v) in pairs {
            for g in 1..q {
                let p = Vector::new(
                    &field,
                    [
                        (u.to_string(), field.one()),
                        (v.to_string(), field.neg(&field.from_i64(g as i64))),
                    ]
                    .into_iter()
                    .collect(),
                );
                points.insert(format!("m{u}{v}g{g}"), p);
            }
        }
        (basis, points)
    }

    #[test]
    fn full_fibers_are_cross_closed() {
        for q in [2u64, 3, 5] {
            let (basis, points) = full_fiber_points(q);
            let report = is_cross_closed(
                &CrossContext::Frame(&basis),
                &points,
                &complete_graph(3),
                1 << 20,
            )
            .unwrap();
            assert!(report.closed, "GF({q}) full fibers must be cross-closed");
        }
    }

    #[test]
    fn subgroup_fibers_are_cross_closed() {
        // the trivial subgroup {1} of GF(5)^x: one gain-1 point per line
        let field = Field::prime(5).unwrap();
        let nodes: Vec<NodeId> = ["1", "2", "3"].map(NodeId::from).to_vec();
        let basis = FrameBasis::standard(field, &nodes);
        let mut points = BTreeMap::new();
        for (u, v) in [("1", "2"), ("1", "3"), ("2", "3")] {
            points.insert(
                format!("m{u}{v}"),
                Vector::from_i64(&field, &[(u, 1), (v, -1)]),
            );
        }
        let report = is_cross_closed(
            &CrossContext::Frame(&basis),
            &points,
            &complete_graph(3),
            1 << 20,
        )
        .unwrap();
        assert!(report.closed);
    }

    #[test]
    fn removing_a_completion_breaks_cross_closure() {
        let (basis, mut points) = full_fiber_points(3);
        // drop one non-basis point; some balanced-circle completion now
        // leaves its line-intersection outside the set
        let victim = points
            .keys()
            .find(|k| k.starts_with('m'))
            .cloned()
            .unwrap();
        points.remove(&victim);
        let report = is_cross_closed(
            &CrossContext::Frame(&basis),
            &points,
            &complete_graph(3),
            1 << 20,
        )
        .unwrap();
        assert!(!report.closed);
        let w = report.witness.unwrap();
        assert!(!w.generators.is_empty());
    }

    #[test]
    fn point_off_lines_is_input_error() {
        let field = Field::Rationals;
        let nodes: Vec<NodeId> = ["1", "2", "3"].map(NodeId::from).to_vec();
        let basis = FrameBasis::standard(field, &nodes);
        let points: BTreeMap<String, Vector> = [(
            "bad".to_string(),
            Vector::from_i64(&field, &[("1", 1), ("2", 1), ("3", 1)]),
        )]
        .into_iter()
        .collect();
        let r = is_cross_closed(
            &CrossContext::Frame(&basis),
            &points,
            &complete_graph(3),
            1 << 20,
        );
        assert!(matches!(r, Err(Error::Input(_))));
    }
}
