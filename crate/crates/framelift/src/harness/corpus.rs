//! Seeded corpus generation: small random gain graphs over both gain-group
//! kinds, with half edges, a guaranteed disconnected instance, a guaranteed
//! parallel pair, and a sprinkling of planted balanced triangles (the
//! negative-control tests need circles whose balance is detectable).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::field::Field;
use crate::error::{Error, Result};
use crate::gain::GainGraph;
use crate::graph::{half_edge, link, Edge, EdgeId, Graph, NodeId};
use crate::group::{Group, GroupElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GainKind {
    Multiplicative,
    Additive,
}

impl GainKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mult" | "multiplicative" => Ok(GainKind::Multiplicative),
            "add" | "additive" => Ok(GainKind::Additive),
            _ => Err(Error::input(format!("unknown gain kind {s:?}"))),
        }
    }

    pub fn group(&self, field: Field) -> Group {
        match self {
            GainKind::Multiplicative => Group::FieldMul(field),
            GainKind::Additive => Group::FieldAdd(field),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub seed: u64,
    pub node_range: (usize, usize),
    pub edge_range: (usize, usize),
    pub fields: Vec<Field>,
    pub kinds: Vec<GainKind>,
    pub count: usize,
    pub half_edge_prob: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 0,
            node_range: (2, 5),
            edge_range: (1, 9),
            fields: vec![
                Field::prime(5).unwrap(),
                Field::prime(7).unwrap(),
                Field::Rationals,
            ],
            kinds: vec![GainKind::Multiplicative],
            count: 50,
            half_edge_prob: 0.15,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub phi: GainGraph,
}

const DESK_MAX_NODES: usize = 6;
const DESK_MAX_EDGES: usize = 10;

impl CorpusSpec {
    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::input("corpus count must be positive"));
        }
        if self.fields.is_empty() || self.kinds.is_empty() {
            return Err(Error::input("corpus needs at least one field and kind"));
        }
        let (nlo, nhi) = self.node_range;
        let (elo, ehi) = self.edge_range;
        if nlo < 1 || nlo > nhi || nhi > DESK_MAX_NODES {
            return Err(Error::input(format!(
                "node range must sit inside 1..={DESK_MAX_NODES}"
            )));
        }
        if elo > ehi || ehi > DESK_MAX_EDGES {
            return Err(Error::input(format!(
                "edge range must sit inside 0..={DESK_MAX_EDGES}"
            )));
        }
        if !(0.0..=1.0).contains(&self.half_edge_prob) {
            return Err(Error::input("half edge probability must be in [0, 1]"));
        }
        Ok(())
    }
}

fn random_unit(rng: &mut ChaCha8Rng, field: &Field) -> GroupElem {
    match field {
        Field::Prime(p) => GroupElem::Scalar(field.from_i64(rng.gen_range(1..*p) as i64)),
        Field::Rationals => {
            let pool = [
                "1", "-1", "2", "-2", "3", "-3", "1/2", "-1/2", "2/3", "3/2", "5", "-1/3",
            ];
            let s = pool[rng.gen_range(0..pool.len())];
            GroupElem::Scalar(field.parse_scalar(s).unwrap())
        }
    }
}

fn random_elem(rng: &mut ChaCha8Rng, field: &Field) -> GroupElem {
    match field {
        Field::Prime(p) => GroupElem::Scalar(field.from_i64(rng.gen_range(0..*p) as i64)),
        Field::Rationals => {
            let pool = [
                "0", "1", "-1", "2", "-2", "3", "1/2", "-1/2", "5/2", "-3", "1/3", "4",
            ];
            let s = pool[rng.gen_range(0..pool.len())];
            GroupElem::Scalar(field.parse_scalar(s).unwrap())
        }
    }
}

fn random_gain(rng: &mut ChaCha8Rng, field: &Field, kind: GainKind) -> GroupElem {
    match kind {
        GainKind::Multiplicative => random_unit(rng, field),
        GainKind::Additive => random_elem(rng, field),
    }
}

/// Deterministic per seed. Instance `count/2` is disconnected, instance
/// `count/3` carries a parallel pair, and every fifth instance contains a
/// planted balanced triangle.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<Instance>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let combo = i % (spec.fields.len() * spec.kinds.len());
        let field = spec.fields[combo % spec.fields.len()];
        let kind = spec.kinds[combo / spec.fields.len()];
        let group = kind.group(field);

        let force_disconnected = i == spec.count / 2 && spec.count > 2;
        let force_parallel = i == spec.count / 3;
        let plant_triangle = i % 5 == 0;

        let mut n = rng.gen_range(spec.node_range.0..=spec.node_range.1);
        if force_disconnected {
            n = n.max(4);
        }
        if plant_triangle {
            n = n.max(3);
        }
        let nodes: Vec<NodeId> = (1..=n).map(|k| NodeId::from(k.to_string())).collect();
        let mut m = rng.gen_range(spec.edge_range.0..=spec.edge_range.1);
        let mut edges: Vec<Edge> = Vec::new();
        let mut gains: BTreeMap<EdgeId, GroupElem> = BTreeMap::new();

        if plant_triangle {
            m = m.max(3);
            let a = random_gain(&mut rng, &field, kind);
            let b = random_gain(&mut rng, &field, kind);
            // canonical gains: t0 on 1->2 is a, t1 on 2->3 is b, t2 on 1->3
            // is a*b, so the triangle's traversal gain is the identity
            let ab = group.op(&a, &b);
            edges.push(link("t0", "1", "2"));
            edges.push(link("t1", "2", "3"));
            edges.push(link("t2", "1", "3"));
            gains.insert(EdgeId::new("t0"), a);
            gains.insert(EdgeId::new("t1"), b);
            gains.insert(EdgeId::new("t2"), ab);
        }

        // disconnected instances keep links inside one half of the node set
        let pick_pair = |rng: &mut ChaCha8Rng| -> Option<(usize, usize)> {
            if force_disconnected {
                let half = n / 2;
                let (lo, hi) = if rng.gen_bool(0.5) {
                    (1, half)
                } else {
                    (half + 1, n)
                };
                if hi - lo < 1 {
                    return None;
                }
                let u = rng.gen_range(lo..=hi);
                let mut v = rng.gen_range(lo..=hi);
                while v == u {
                    v = rng.gen_range(lo..=hi);
                }
                Some((u, v))
            } else {
                let u = rng.gen_range(1..=n);
                let mut v = rng.gen_range(1..=n);
                while v == u {
                    v = rng.gen_range(1..=n);
                }
                Some((u, v))
            }
        };

        let mut j = 1; // "e0" is the reserved extended-lift label
        let mut parallel_done = false;
        while edges.len() < m {
            let id = format!("e{j}");
            j += 1;
            let want_half = n < 2 || rng.gen_bool(spec.half_edge_prob);
            if want_half {
                let v = rng.gen_range(1..=n);
                edges.push(half_edge(&id, &v.to_string()));
                continue;
            }
            let first_link_ends = edges.iter().find(|e| e.is_link()).map(|e| match &e.ends {
                crate::graph::EdgeEnds::Link { u, v } => (u.0.clone(), v.0.clone()),
                _ => unreachable!(),
            });
            let (u, v) = if force_parallel && !parallel_done && first_link_ends.is_some() {
                parallel_done = true;
                let (u, v) = first_link_ends.unwrap();
                (u.parse().unwrap(), v.parse().unwrap())
            } else {
                match pick_pair(&mut rng) {
                    Some(pair) => pair,
                    None => {
                        let v = rng.gen_range(1..=n);
                        edges.push(half_edge(&id, &v.to_string()));
                        continue;
                    }
                }
            };
            edges.push(link(&id, &u.to_string(), &v.to_string()));
            gains.insert(EdgeId::new(&id), random_gain(&mut rng, &field, kind));
        }

        let graph = Graph::new(nodes, edges)?;
        let phi = GainGraph::new(graph, group, gains)?;
        let kind_tag = match kind {
            GainKind::Multiplicative => "mult",
            GainKind::Additive => "add",
        };
        out.push(Instance {
            id: format!("inst-{i:04}-{field}-{kind_tag}"),
            phi,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::components;

    #[test]
    fn corpus_is_deterministic() {
        let spec = CorpusSpec {
            count: 10,
            seed: 1,
            ..CorpusSpec::default()
        };
        let a = generate_corpus(&spec).unwrap();
        let b = generate_corpus(&spec).unwrap();
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.phi, y.phi);
        }
    }

    #[test]
    fn corpus_covers_required_shapes() {
        let spec = CorpusSpec {
            count: 30,
            seed: 2,
            kinds: vec![GainKind::Multiplicative, GainKind::Additive],
            ..CorpusSpec::default()
        };
        let corpus = generate_corpus(&spec).unwrap();
        let disconnected = corpus.iter().any(|inst| {
            let g = inst.phi.graph();
            components(g, &g.all_edges()).unwrap().count > 1
        });
        assert!(disconnected);
        let parallel = corpus.iter().any(|inst| {
            let g = inst.phi.graph();
            let mut pairs = std::collections::BTreeSet::new();
            g.links().any(|e| match &e.ends {
                crate::graph::EdgeEnds::Link { u, v } => {
                    !pairs.insert((u.clone(), v.clone()))
                }
                _ => false,
            })
        });
        assert!(parallel);
        let both_kinds = corpus
            .iter()
            .any(|i| matches!(i.phi.group(), Group::FieldAdd(_)))
            && corpus
                .iter()
                .any(|i| matches!(i.phi.group(), Group::FieldMul(_)));
        assert!(both_kinds);
        // planted balanced triangles appear
        let with_triangle = corpus
            .iter()
            .filter(|i| {
                i.phi
                    .graph()
                    .edge(&EdgeId::new("t0"))
                    .is_ok()
            })
            .count();
        assert!(with_triangle >= 6);
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = CorpusSpec::default();
        spec.count = 0;
        assert!(generate_corpus(&spec).is_err());
        let mut spec = CorpusSpec::default();
        spec.node_range = (2, 9);
        assert!(generate_corpus(&spec).is_err());
    }
}
