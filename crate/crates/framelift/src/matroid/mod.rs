//! Combinatorial frame and lift matroids of a biased graph, rank oracles,
//! and matroid comparison utilities.

pub mod compare;
pub mod frame;
pub mod lift;
pub mod oracle;

pub use compare::{rank_oracle_equal, rank_oracle_equal_sampled, CompareReport};
pub use frame::{frame_circuits, frame_closure, frame_oracle, frame_rank};
pub use lift::{lift_circuits, lift_closure, lift_oracle, lift_rank};
pub use oracle::{lex_subsets, Provenance, RankOracle};

use crate::error::Result;
use crate::graph::Graph;

/// Rank oracle of the graphic matroid (links only; half edges rejected).
pub fn graphic_oracle(g: &Graph) -> Result<RankOracle> {
    let g = g.clone();
    let ground: Vec<String> = g.links().map(|e| e.id.0.clone()).collect();
    // ground indices must match the oracle's sorted order; links() is sorted
    RankOracle::new(ground.clone(), Provenance::Graphic, move |mask| {
        let set = ground
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| crate::graph::EdgeId::new(l.clone()))
            .collect();
        crate::graph::graphic_rank(&g, &set).expect("ground edges exist")
    })
}
