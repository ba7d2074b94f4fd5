//! End-to-end verification runs: build a representation from a gain graph,
//! reconstruct the biased graph from the geometry, and compare the
//! combinatorial and linear rank oracles on every subset.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;

use crate::bias::BiasedGraph;
use crate::error::{Error, Result};
use crate::gain::GainGraph;
use crate::graph::{components, is_connected_set, E0_LABEL};
use crate::group::Group;
use crate::matroid::{
    frame_oracle, lift_oracle, rank_oracle_equal, rank_oracle_equal_sampled, RankOracle,
};
use crate::repr::{
    affinographic_arrangement, cevian_hyperplanes, menelaean_points, orthographic_points,
    reconstruct_affino, reconstruct_frame, reconstruct_ortho, standard_graphic_rep,
    PointRepresentation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremTag {
    /// Frame matroid equals the matroid of the edge points.
    Menelaean,
    /// Frame matroid equals the matroid of the apical hyperplanes.
    Cevian,
    /// Extended lift matroid equals the matroid of the lift points with e0.
    Orthographic,
    /// Balance is hyperplane consistency; projectivized arrangement equals
    /// the extended lift matroid.
    Affinographic,
    /// Gains found by search yield a verified frame representation.
    Canonical,
}

impl TheoremTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremTag::Menelaean => "menelaean",
            TheoremTag::Cevian => "cevian",
            TheoremTag::Orthographic => "orthographic",
            TheoremTag::Affinographic => "affinographic",
            TheoremTag::Canonical => "canonical",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "menelaean" => Ok(TheoremTag::Menelaean),
            "cevian" => Ok(TheoremTag::Cevian),
            "orthographic" | "ortho" => Ok(TheoremTag::Orthographic),
            "affinographic" | "affino" => Ok(TheoremTag::Affinographic),
            "canonical" => Ok(TheoremTag::Canonical),
            _ => Err(Error::input(format!("unknown verification tag {s:?}"))),
        }
    }

    pub fn all() -> [TheoremTag; 5] {
        [
            TheoremTag::Menelaean,
            TheoremTag::Cevian,
            TheoremTag::Orthographic,
            TheoremTag::Affinographic,
            TheoremTag::Canonical,
        ]
    }

    /// Whether a gain graph satisfies the tag's hypotheses.
    pub fn applies_to(&self, phi: &GainGraph) -> bool {
        match self {
            TheoremTag::Menelaean | TheoremTag::Cevian => {
                matches!(phi.group(), Group::FieldMul(_))
            }
            TheoremTag::Orthographic => matches!(phi.group(), Group::FieldAdd(_)),
            TheoremTag::Affinographic => {
                matches!(phi.group(), Group::FieldAdd(_))
                    && phi.graph().half_edges().next().is_none()
            }
            TheoremTag::Canonical => matches!(phi.group(), Group::FieldMul(_)),
        }
    }
}

/// One verification outcome. `millis` is wall-clock and is excluded from
/// the canonical JSON so identical inputs give byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tag: String,
    pub instance: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub detail: String,
    pub subsets_checked: usize,
    pub sampled: bool,
    #[serde(skip)]
    pub millis: u128,
}

fn report(
    tag: TheoremTag,
    instance: &str,
    pass: bool,
    witness: Option<Vec<String>>,
    detail: String,
    subsets_checked: usize,
    sampled: bool,
    started: Instant,
) -> VerificationReport {
    VerificationReport {
        tag: tag.as_str().to_string(),
        instance: instance.to_string(),
        pass,
        witness,
        detail,
        subsets_checked,
        sampled,
        millis: started.elapsed().as_millis(),
    }
}

fn identity_bijection(o: &RankOracle) -> BTreeMap<String, String> {
    o.ground().iter().map(|l| (l.clone(), l.clone())).collect()
}

/// Exhaustive comparison within the cap, seeded sampling beyond it.
fn compare_oracles(
    a: &RankOracle,
    b: &RankOracle,
    cap: usize,
    seed: u64,
) -> Result<crate::matroid::CompareReport> {
    let n = a.size();
    if n < usize::BITS as usize - 1 && (1usize << n) <= cap {
        rank_oracle_equal(a, b, &identity_bijection(a), cap)
    } else {
        rank_oracle_equal_sampled(a, b, &identity_bijection(a), cap, seed)
    }
}

/// Menelaean check against an explicit point representation (the negative
/// controls pass a corrupted one).
pub fn verify_menelaean_rep(
    phi: &GainGraph,
    rep: &PointRepresentation,
    instance: &str,
    cap: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let omega = phi.to_biased()?;
    let frame = frame_oracle(&omega)?;
    let linear = rep.rank_oracle()?;
    let cmp = compare_oracles(&frame, &linear, cap, seed)?;
    if !cmp.equal {
        return Ok(report(
            TheoremTag::Menelaean,
            instance,
            false,
            cmp.witness,
            format!(
                "frame rank {} != point rank {}",
                cmp.rank1.unwrap_or(0),
                cmp.rank2.unwrap_or(0)
            ),
            cmp.subsets_checked,
            cmp.sampled,
            started,
        ));
    }
    // reconstruction must give back the same biased graph
    let rec = reconstruct_frame(rep.basis.as_ref().expect("menelaean reps carry a basis"), &rep.points);
    let detail = match rec {
        Ok(rec) => {
            if rec.graph() == omega.graph() && rec.balanced_circles() == omega.balanced_circles() {
                None
            } else {
                Some("reconstruction changed the biased graph".to_string())
            }
        }
        Err(e) => Some(format!("reconstruction failed: {e}")),
    };
    if let Some(msg) = detail {
        return Ok(report(
            TheoremTag::Menelaean,
            instance,
            false,
            None,
            msg,
            cmp.subsets_checked,
            cmp.sampled,
            started,
        ));
    }
    Ok(report(
        TheoremTag::Menelaean,
        instance,
        true,
        None,
        "frame oracle equals point oracle on all checked subsets; reconstruction round-trips"
            .to_string(),
        cmp.subsets_checked,
        cmp.sampled,
        started,
    ))
}

pub fn verify_menelaean(
    phi: &GainGraph,
    instance: &str,
    cap: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let rep = menelaean_points(phi)?;
    verify_menelaean_rep(phi, &rep, instance, cap, seed)
}

pub fn verify_cevian(
    phi: &GainGraph,
    instance: &str,
    cap: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let omega = phi.to_biased()?;
    let frame = frame_oracle(&omega)?;
    let arr = cevian_hyperplanes(phi)?;
    let covector = arr.rank_oracle()?;
    let cmp = compare_oracles(&frame, &covector, cap, seed)?;
    let pass = cmp.equal;
    Ok(report(
        TheoremTag::Cevian,
        instance,
        pass,
        cmp.witness,
        if pass {
            "frame oracle equals covector (codimension) oracle".to_string()
        } else {
            format!(
                "frame rank {} != covector rank {}",
                cmp.rank1.unwrap_or(0),
                cmp.rank2.unwrap_or(0)
            )
        },
        cmp.subsets_checked,
        cmp.sampled,
        started,
    ))
}

pub fn verify_orthographic(
    phi: &GainGraph,
    instance: &str,
    cap: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let omega = phi.to_biased()?;
    let lift = lift_oracle(&omega, true)?;
    let rep = orthographic_points(phi)?;
    let linear = rep.rank_oracle()?;
    let cmp = compare_oracles(&lift, &linear, cap, seed)?;
    if !cmp.equal {
        return Ok(report(
            TheoremTag::Orthographic,
            instance,
            false,
            cmp.witness,
            format!(
                "extended lift rank {} != point rank {}",
                cmp.rank1.unwrap_or(0),
                cmp.rank2.unwrap_or(0)
            ),
            cmp.subsets_checked,
            cmp.sampled,
            started,
        ));
    }
    // the rank law: linear rank of the edge points is the graphic part of
    // the rank, plus one exactly when the set is unbalanced
    let g = phi.graph();
    let n = g.edge_count();
    if (1usize << n) <= cap {
        for mask in 0..(1u64 << n) {
            let s = g.mask_to_set(mask);
            let labels: BTreeSet<String> = s.iter().map(|e| e.0.clone()).collect();
            let lin = crate::repr::reconstruct::point_subset_rank(&rep, &labels)?;
            let graphic_part = g.node_count() - components(g, &s)?.count;
            let expect = graphic_part + usize::from(!omega.is_balanced_set(&s)?);
            if lin != expect {
                return Ok(report(
                    TheoremTag::Orthographic,
                    instance,
                    false,
                    Some(labels.into_iter().collect()),
                    format!("rank law broken: linear {lin}, graphic part {graphic_part}"),
                    cmp.subsets_checked,
                    cmp.sampled,
                    started,
                ));
            }
        }
    }
    // round-trip when there are no half edges (their points coincide with
    // e0); the base is the simplification since parallel links share a line
    if g.half_edges().next().is_none() {
        let base = standard_graphic_rep(rep.field, &simplify(g)?)?;
        let e0 = rep.point(E0_LABEL)?.clone();
        let mut pts = rep.points.clone();
        pts.remove(E0_LABEL);
        let rec = reconstruct_ortho(&pts, &e0, &base)?;
        if rec.graph() != omega.graph() || rec.balanced_circles() != omega.balanced_circles() {
            return Ok(report(
                TheoremTag::Orthographic,
                instance,
                false,
                None,
                "reconstruction changed the biased graph".to_string(),
                cmp.subsets_checked,
                cmp.sampled,
                started,
            ));
        }
    }
    Ok(report(
        TheoremTag::Orthographic,
        instance,
        true,
        None,
        "extended lift oracle equals point oracle; rank law holds".to_string(),
        cmp.subsets_checked,
        cmp.sampled,
        started,
    ))
}

pub fn verify_affinographic(
    phi: &GainGraph,
    instance: &str,
    cap: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    if phi.graph().half_edges().next().is_some() {
        return Err(Error::domain(
            "affinographic verification requires a link-only gain graph".to_string(),
        ));
    }
    let omega = phi.to_biased()?;
    let arr = affinographic_arrangement(phi)?;
    let g = phi.graph();
    let n = g.edge_count();

    // balance is consistency on connected subsets
    let mut consistency_checked = 0usize;
    if (1usize << n) <= cap {
        for mask in 0..(1u64 << n) {
            let s = g.mask_to_set(mask);
            if !is_connected_set(g, &s)? {
                continue;
            }
            consistency_checked += 1;
            let balanced = omega.is_balanced_set(&s)?;
            let consistent = arr.consistent(&s)?;
            if balanced != consistent {
                return Ok(report(
                    TheoremTag::Affinographic,
                    instance,
                    false,
                    Some(s.iter().map(|e| e.0.clone()).collect()),
                    format!("balanced = {balanced} but consistent = {consistent}"),
                    consistency_checked,
                    false,
                    started,
                ));
            }
        }
    }

    // projectivized covector oracle equals the extended lift oracle
    let lift = lift_oracle(&omega, true)?;
    let projective = arr.projectivize()?.rank_oracle()?;
    let cmp = compare_oracles(&lift, &projective, cap, seed)?;
    if !cmp.equal {
        return Ok(report(
            TheoremTag::Affinographic,
            instance,
            false,
            cmp.witness,
            format!(
                "extended lift rank {} != projectivized covector rank {}",
                cmp.rank1.unwrap_or(0),
                cmp.rank2.unwrap_or(0)
            ),
            cmp.subsets_checked,
            cmp.sampled,
            started,
        ));
    }

    // closed balanced sets match the nonempty-intersection flats
    if (1usize << n) <= cap {
        let mut closed_balanced: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        let mut flats: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        for mask in 0..(1u64 << n) {
            let s = g.mask_to_set(mask);
            if omega.is_balanced_set(&s)? {
                let closure = crate::matroid::lift_closure(
                    &omega,
                    &crate::matroid::lift::LiftSet {
                        edges: s.clone(),
                        has_e0: false,
                    },
                    false,
                )?;
                if closure.edges == s {
                    closed_balanced.insert(s.iter().map(|e| e.0.clone()).collect());
                }
            }
            if arr.consistent(&s)? {
                // hyperplanes containing the intersection flat of s
                let sys = arr.affine_system(&s)?;
                let base_rank = crate::algebra::linalg::rank(
                    &arr.field,
                    sys.rows
                        .iter()
                        .map(|(c, _)| c.dense(&arr.field, &arr.ambient))
                        .collect::<Result<Vec<_>>>()?,
                );
                let mut flat: BTreeSet<String> = BTreeSet::new();
                for e in g.edges() {
                    let mut bigger = s.clone();
                    bigger.insert(e.id.clone());
                    let sys2 = arr.affine_system(&bigger)?;
                    let r2 = crate::algebra::linalg::rank(
                        &arr.field,
                        sys2.rows
                            .iter()
                            .map(|(c, _)| c.dense(&arr.field, &arr.ambient))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    if arr.consistent(&bigger)? && r2 == base_rank {
                        flat.insert(e.id.0.clone());
                    }
                }
                flats.insert(flat);
            }
        }
        if closed_balanced != flats {
            let diff: Vec<String> = closed_balanced
                .symmetric_difference(&flats)
                .map(|s| format!("{s:?}"))
                .collect();
            return Ok(report(
                TheoremTag::Affinographic,
                instance,
                false,
                None,
                format!("closed balanced sets and intersection flats differ: {diff:?}"),
                cmp.subsets_checked,
                cmp.sampled,
                started,
            ));
        }
    }

    // reconstruction round-trip with the natural parallel-class map; a
    // balanced digon means two coincident hyperplanes, and an arrangement
    // (a set of distinct hyperplanes) cannot express that, so skip then
    if omega.is_simply_biased() {
        let simplification = simplify(g)?;
        let classes: BTreeMap<String, crate::graph::EdgeId> = class_map(g, &simplification)?;
        let rec = reconstruct_affino(&arr, &simplification, &classes)?;
        if rec.balanced_circles() != omega.balanced_circles() {
            return Ok(report(
                TheoremTag::Affinographic,
                instance,
                false,
                None,
                "reconstruction changed the balanced circles".to_string(),
                cmp.subsets_checked,
                cmp.sampled,
                started,
            ));
        }
    }

    Ok(report(
        TheoremTag::Affinographic,
        instance,
        true,
        None,
        "balance = consistency; projectivized oracle equals extended lift; flats match"
            .to_string(),
        cmp.subsets_checked,
        cmp.sampled,
        started,
    ))
}

/// Simplification of a link-only graph: one representative per parallel
/// class, ids `s<u>-<v>`.
pub fn simplify(g: &crate::graph::Graph) -> Result<crate::graph::Graph> {
    let mut edges = Vec::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for e in g.links() {
        if let crate::graph::EdgeEnds::Link { u, v } = &e.ends {
            if seen.insert((u.0.clone(), v.0.clone())) {
                edges.push(crate::graph::link(&format!("s{u}-{v}"), &u.0, &v.0));
            }
        }
    }
    crate::graph::Graph::new(g.nodes().to_vec(), edges)
}

fn class_map(
    g: &crate::graph::Graph,
    simplification: &crate::graph::Graph,
) -> Result<BTreeMap<String, crate::graph::EdgeId>> {
    let mut by_ends: BTreeMap<(String, String), crate::graph::EdgeId> = BTreeMap::new();
    for e in simplification.links() {
        if let crate::graph::EdgeEnds::Link { u, v } = &e.ends {
            by_ends.insert((u.0.clone(), v.0.clone()), e.id.clone());
        }
    }
    let mut out = BTreeMap::new();
    for e in g.links() {
        if let crate::graph::EdgeEnds::Link { u, v } = &e.ends {
            out.insert(
                e.id.0.clone(),
                by_ends[&(u.0.clone(), v.0.clone())].clone(),
            );
        }
    }
    Ok(out)
}

/// Searches for gains over the field's multiplicative group, then verifies
/// the resulting representation; a biased graph with no gains in the tested
/// group reports the exhausted search instead.
pub fn verify_canonical(
    omega: &BiasedGraph,
    group: &Group,
    instance: &str,
    cap: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let found = crate::gain::gain_realizability_search(omega, group, cap)?;
    match found {
        None => Ok(report(
            TheoremTag::Canonical,
            instance,
            true,
            None,
            format!("no gains in {group}; no canonical frame representation over it"),
            0,
            false,
            started,
        )),
        Some(phi) => {
            match phi.group() {
                Group::FieldMul(_) => {
                    let inner = verify_menelaean(&phi, instance, cap, seed)?;
                    Ok(VerificationReport {
                        tag: TheoremTag::Canonical.as_str().to_string(),
                        detail: format!("gains found in {group}; {}", inner.detail),
                        ..inner
                    })
                }
                _ => Ok(report(
                    TheoremTag::Canonical,
                    instance,
                    true,
                    None,
                    format!("gains found in {group} (not a field group; representation skipped)"),
                    0,
                    false,
                    started,
                )),
            }
        }
    }
}

/// Dispatches one instance against one tag.
pub fn verify_instance(
    tag: TheoremTag,
    inst: &super::corpus::Instance,
    cap: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if !tag.applies_to(&inst.phi) {
        return Err(Error::domain(format!(
            "{} does not apply to instance {}",
            tag.as_str(),
            inst.id
        )));
    }
    match tag {
        TheoremTag::Menelaean => verify_menelaean(&inst.phi, &inst.id, cap, seed),
        TheoremTag::Cevian => verify_cevian(&inst.phi, &inst.id, cap, seed),
        TheoremTag::Orthographic => verify_orthographic(&inst.phi, &inst.id, cap, seed),
        TheoremTag::Affinographic => verify_affinographic(&inst.phi, &inst.id, cap, seed),
        TheoremTag::Canonical => {
            let omega = inst.phi.to_biased()?;
            verify_canonical(&omega, inst.phi.group(), &inst.id, cap, seed)
        }
    }
}
