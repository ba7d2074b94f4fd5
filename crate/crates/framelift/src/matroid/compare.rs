//! Subset-exhaustive (or seeded-sample) comparison of two rank oracles
//! under an explicit ground-set bijection.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::oracle::{lex_subsets, RankOracle};

pub const DEFAULT_COMPARE_CAP: usize = 1 << 16;

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank2: Option<usize>,
    pub subsets_checked: usize,
    /// True when the check sampled instead of enumerating every subset;
    /// sampled evidence is weaker and reported as such.
    pub sampled: bool,
}

fn translate(bijection: &BTreeMap<String, String>, a: &RankOracle, b: &RankOracle) -> Result<Vec<usize>> {
    if bijection.len() != a.size() {
        return Err(Error::input("bijection is not total on the first ground set"));
    }
    let mut seen = vec![false; b.size()];
    let mut map = Vec::with_capacity(a.size());
    for label in a.ground() {
        let target = bijection
            .get(label)
            .ok_or_else(|| Error::input(format!("bijection misses {label:?}")))?;
        let j = b
            .ground()
            .binary_search(target)
            .map_err(|_| Error::input(format!("bijection target {target:?} unknown")))?;
        if seen[j] {
            return Err(Error::input(format!("bijection repeats target {target:?}")));
        }
        seen[j] = true;
        map.push(j);
    }
    if a.size() != b.size() {
        return Err(Error::input("ground sets differ in size"));
    }
    Ok(map)
}

/// Compares rank on every subset, in lexicographic subset order; the first
/// disagreeing subset (under the first oracle's labels) is the witness.
pub fn rank_oracle_equal(
    a: &RankOracle,
    b: &RankOracle,
    bijection: &BTreeMap<String, String>,
    cap: usize,
) -> Result<CompareReport> {
    let map = translate(bijection, a, b)?;
    let n = a.size();
    if n >= usize::BITS as usize - 1 || (1usize << n) > cap {
        return Err(Error::Resource(
            format!("subset comparison over 2^{n} subsets"),
            cap,
        ));
    }
    let mut checked = 0usize;
    for mask in lex_subsets(n) {
        checked += 1;
        let mut bmask = 0u64;
        for (i, &j) in map.iter().enumerate() {
            if mask >> i & 1 == 1 {
                bmask |= 1 << j;
            }
        }
        let (r1, r2) = (a.rank_mask(mask), b.rank_mask(bmask));
        if r1 != r2 {
            return Ok(CompareReport {
                equal: false,
                witness: Some(a.set_of(mask).into_iter().collect()),
                rank1: Some(r1),
                rank2: Some(r2),
                subsets_checked: checked,
                sampled: false,
            });
        }
    }
    Ok(CompareReport {
        equal: true,
        witness: None,
        rank1: None,
        rank2: None,
        subsets_checked: checked,
        sampled: false,
    })
}

/// Seeded random-subset comparison for ground sets too large to enumerate.
pub fn rank_oracle_equal_sampled(
    a: &RankOracle,
    b: &RankOracle,
    bijection: &BTreeMap<String, String>,
    samples: usize,
    seed: u64,
) -> Result<CompareReport> {
    let map = translate(bijection, a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let mask: u64 = rng.gen::<u64>() & a.full_mask();
        let mut bmask = 0u64;
        for (i, &j) in map.iter().enumerate() {
            if mask >> i & 1 == 1 {
                bmask |= 1 << j;
            }
        }
        let (r1, r2) = (a.rank_mask(mask), b.rank_mask(bmask));
        if r1 != r2 {
            return Ok(CompareReport {
                equal: false,
                witness: Some(a.set_of(mask).into_iter().collect()),
                rank1: Some(r1),
                rank2: Some(r2),
                subsets_checked: k + 1,
                sampled: true,
            });
        }
    }
    Ok(CompareReport {
        equal: true,
        witness: None,
        rank1: None,
        rank2: None,
        subsets_checked: samples,
        sampled: true,
    })
}
