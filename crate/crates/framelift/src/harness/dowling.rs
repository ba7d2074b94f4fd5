//! The frame geometry of the full multiplicative-group expansion of a
//! complete graph: half-edge points at the basis, and one point per
//! (nonzero gain, node pair) on the connecting lines.

use serde::Serialize;

use crate::algebra::field::Field;
use crate::error::{Error, Result};
use crate::gain::group_expansion;
use crate::graph::complete_graph;
use crate::group::Group;
use crate::matroid::{frame_oracle, RankOracle};
use crate::repr::{menelaean_points, PointRepresentation};

#[derive(Clone, Debug, Serialize)]
pub struct DowlingReport {
    pub n: usize,
    pub field: String,
    pub points: usize,
    pub rank: usize,
}

/// Builds the full expansion of `K_n` by the field's multiplicative group,
/// its frame oracle, and its point representation.
pub fn dowling(n: usize, field: Field) -> Result<(PointRepresentation, RankOracle, DowlingReport)> {
    if n < 2 {
        return Err(Error::input("dowling construction needs n >= 2"));
    }
    if !field.is_finite() {
        return Err(Error::input("dowling construction needs a finite field"));
    }
    let delta = complete_graph(n);
    let (phi, _) = group_expansion(&Group::FieldMul(field), &delta, true)?;
    let omega = phi.to_biased()?;
    let oracle = frame_oracle(&omega)?;
    let rep = menelaean_points(&phi)?;
    let rank = rep.rank_oracle()?.full_rank();
    let report = DowlingReport {
        n,
        field: field.to_string(),
        points: rep.points.len(),
        rank,
    };
    Ok((rep, oracle, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{graphic_oracle, rank_oracle_equal};
    use std::collections::BTreeMap;

    #[test]
    fn dowling_3_gf3_point_count_and_rank() {
        let (rep, oracle, report) = dowling(3, Field::prime(3).unwrap()).unwrap();
        assert_eq!(report.points, 9); // 3 half-edge points + 2 per pair
        assert_eq!(report.rank, 3);
        assert_eq!(oracle.full_rank(), 3);
        assert_eq!(rep.points.len(), 9);
    }

    #[test]
    fn dowling_2_gf5_points() {
        let (_, _, report) = dowling(2, Field::prime(5).unwrap()).unwrap();
        assert_eq!(report.points, 6); // 2 basis points + 4 on the one line
        assert_eq!(report.rank, 2);
    }

    #[test]
    fn dowling_gf2_matches_graphic_k4() {
        // over the trivial multiplicative group the frame matroid of the
        // full expansion of K_n is the graphic matroid of K_{n+1}: half
        // edge at node i <-> edge {i, n+1}
        for n in [2usize, 3] {
            let (_, oracle, _) = dowling(n, Field::prime(2).unwrap()).unwrap();
            let k = complete_graph(n + 1);
            let graphic = graphic_oracle(&k).unwrap();
            let mut bij: BTreeMap<String, String> = BTreeMap::new();
            for label in oracle.ground() {
                if let Some(node) = label.strip_prefix('h') {
                    bij.insert(label.clone(), format!("a{node}-{}", n + 1));
                } else {
                    // expansion link "a<i>-<j>:1" projects to "a<i>-<j>"
                    let base = label.split(':').next().unwrap();
                    bij.insert(label.clone(), base.to_string());
                }
            }
            let cmp = rank_oracle_equal(&oracle, &graphic, &bij, 1 << 16).unwrap();
            assert!(cmp.equal, "witness: {:?}", cmp.witness);
        }
    }
}
