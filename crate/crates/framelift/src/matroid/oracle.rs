//! Rank oracles: a labeled ground set plus a memoized rank function.
//!
//! Subsets are bitmasks over the sorted ground set, so oracles are limited
//! to 63 elements; everything here is desk scale and exhaustive subset
//! enumeration is the point. The memo table takes a lock so oracles can be
//! shared across verification workers; inserts are idempotent.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Frame,
    Lift,
    Linear,
    Graphic,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Provenance::Frame => "frame",
            Provenance::Lift => "lift",
            Provenance::Linear => "linear",
            Provenance::Graphic => "graphic",
        };
        f.write_str(s)
    }
}

pub struct RankOracle {
    ground: Vec<String>,
    provenance: Provenance,
    rank_fn: Box<dyn Fn(u64) -> usize + Send + Sync>,
    memo: Mutex<HashMap<u64, usize>>,
}

impl RankOracle {
    pub fn new(
        mut ground: Vec<String>,
        provenance: Provenance,
        rank_fn: impl Fn(u64) -> usize + Send + Sync + 'static,
    ) -> Result<Self> {
        ground.sort();
        let n = ground.len();
        ground.dedup();
        if ground.len() != n {
            return Err(Error::input("rank oracle ground set has duplicate labels"));
        }
        if n > 63 {
            return Err(Error::Resource("rank oracle ground set".to_string(), 63));
        }
        Ok(RankOracle {
            ground,
            provenance,
            rank_fn: Box::new(rank_fn),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn full_mask(&self) -> u64 {
        if self.ground.is_empty() {
            0
        } else {
            (1u64 << self.ground.len()) - 1
        }
    }

    pub fn mask_of(&self, subset: &BTreeSet<String>) -> Result<u64> {
        let mut mask = 0u64;
        for label in subset {
            let i = self
                .ground
                .binary_search(label)
                .map_err(|_| Error::input(format!("unknown label {label:?}")))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    pub fn set_of(&self, mask: u64) -> BTreeSet<String> {
        self.ground
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect()
    }

    pub fn rank_mask(&self, mask: u64) -> usize {
        if let Some(&r) = self.memo.lock().unwrap().get(&mask) {
            return r;
        }
        let r = (self.rank_fn)(mask);
        self.memo.lock().unwrap().insert(mask, r);
        r
    }

    pub fn rank(&self, subset: &BTreeSet<String>) -> Result<usize> {
        Ok(self.rank_mask(self.mask_of(subset)?))
    }

    pub fn full_rank(&self) -> usize {
        self.rank_mask(self.full_mask())
    }

    /// Closure by rank: elements whose addition does not raise rank.
    pub fn closure_mask(&self, mask: u64) -> u64 {
        let r = self.rank_mask(mask);
        let mut out = mask;
        for i in 0..self.ground.len() {
            let bit = 1u64 << i;
            if out & bit == 0 && self.rank_mask(mask | bit) == r {
                out |= bit;
            }
        }
        out
    }

    /// Minimal dependent sets, ascending by the lex subset order. This is the
    /// generic route the structural circuit catalogs are checked against.
    pub fn circuits(&self, cap: usize) -> Result<Vec<BTreeSet<String>>> {
        let n = self.ground.len();
        if 1usize << n > cap {
            return Err(Error::Resource("circuit enumeration".to_string(), cap));
        }
        let mut out = Vec::new();
        'outer: for mask in 1..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if self.rank_mask(mask) >= size {
                continue; // independent
            }
            for i in 0..n {
                let bit = 1u64 << i;
                if mask & bit != 0 && self.rank_mask(mask & !bit) < size - 1 {
                    continue 'outer; // a proper subset is already dependent
                }
            }
            out.push(self.set_of(mask));
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(out)
    }
}

impl std::fmt::Debug for RankOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RankOracle")
            .field("ground", &self.ground)
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Iterates subsets of `0..n` as masks in lexicographic order of their
/// sorted label lists: [], [0], [0,1], [0,1,2], ..., [1], [1,2], ...
pub fn lex_subsets(n: usize) -> LexSubsets {
    LexSubsets {
        n,
        stack: Vec::new(),
        started: false,
    }
}

pub struct LexSubsets {
    n: usize,
    stack: Vec<usize>,
    started: bool,
}

impl Iterator for LexSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.started {
            self.started = true;
            return Some(0); // the empty set
        }
        let next_elem = match self.stack.last() {
            Some(&top) if top + 1 < self.n => Some(top + 1),
            Some(_) => None,
            None => {
                if self.n == 0 {
                    None
                } else {
                    Some(0)
                }
            }
        };
        match next_elem {
            Some(e) => {
                self.stack.push(e);
            }
            None => {
                // backtrack: drop the top, advance the new top
                self.stack.pop();
                loop {
                    match self.stack.pop() {
                        Some(t) if t + 1 < self.n => {
                            self.stack.push(t + 1);
                            break;
                        }
                        Some(_) => continue,
                        None => return None,
                    }
                }
            }
        }
        let mut mask = 0u64;
        for &i in &self.stack {
            mask |= 1 << i;
        }
        Some(mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_subset_order_n3() {
        let labels = ["a", "b", "c"];
        let seen: Vec<Vec<&str>> = lex_subsets(3)
            .map(|m| {
                (0..3)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| labels[i])
                    .collect()
            })
            .collect();
        let expected: Vec<Vec<&str>> = vec![
            vec![],
            vec!["a"],
            vec!["a", "b"],
            vec!["a", "b", "c"],
            vec!["a", "c"],
            vec!["b"],
            vec!["b", "c"],
            vec!["c"],
        ];
        assert_eq!(seen, expected);
    }

    #[test]
    fn lex_subsets_counts() {
        for n in 0..6 {
            assert_eq!(lex_subsets(n).count(), 1 << n);
        }
    }

    #[test]
    fn oracle_memoizes_and_ranks() {
        let oracle = RankOracle::new(
            vec!["x".into(), "y".into(), "z".into()],
            Provenance::Graphic,
            |mask| (mask.count_ones() as usize).min(2),
        )
        .unwrap();
        let s: BTreeSet<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(oracle.rank(&s).unwrap(), 2);
        assert_eq!(oracle.full_rank(), 2);
        assert_eq!(oracle.rank_mask(0), 0);
    }

    #[test]
    fn generic_circuits_of_uniform_matroid() {
        // U_{2,3}: every 3-set dependent, every 2-set independent
        let oracle = RankOracle::new(
            vec!["a".into(), "b".into(), "c".into()],
            Provenance::Linear,
            |mask| (mask.count_ones() as usize).min(2),
        )
        .unwrap();
        let circuits = oracle.circuits(1 << 10).unwrap();
        assert_eq!(circuits.len(), 1);
        assert_eq!(circuits[0].len(), 3);
    }
}
