//! Vectors and covectors indexed by labels, and the linear matroids they
//! span.
//!
//! Coordinates are sparse maps from index labels (node ids, plus the
//! distinguished label `"0"` for the lift coordinate) to scalars; zero
//! entries are dropped so equality is structural. A [`LinearMatroid`] ties a
//! labeled family of rows to an ambient index set; its rank oracle computes
//! exact Gaussian rank. For covectors, row rank equals the codimension of
//! the common kernel, which is exactly the hyperplane-arrangement rank
//! function.

use std::collections::BTreeMap;

use super::field::{Field, Scalar};
use super::linalg;
use crate::error::{Error, Result};
use crate::matroid::oracle::{Provenance, RankOracle};

/// Distinguished index label for the lift / homogenizing coordinate.
pub const LIFT_COORD: &str = "0";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    coords: BTreeMap<String, Scalar>,
}

impl Vector {
    pub fn new(field: &Field, coords: BTreeMap<String, Scalar>) -> Self {
        let coords = coords
            .into_iter()
            .filter(|(_, s)| !field.is_zero(s))
            .collect();
        Vector { coords }
    }

    pub fn zero() -> Self {
        Vector {
            coords: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &BTreeMap<String, Scalar> {
        &self.coords
    }

    pub fn get(&self, field: &Field, label: &str) -> Scalar {
        self.coords
            .get(label)
            .cloned()
            .unwrap_or_else(|| field.zero())
    }

    /// Builds from (label, value) pairs given as small integers.
    pub fn from_i64(field: &Field, entries: &[(&str, i64)]) -> Self {
        let coords = entries
            .iter()
            .map(|(l, n)| (l.to_string(), field.from_i64(*n)))
            .collect();
        Vector::new(field, coords)
    }

    pub fn unit(field: &Field, label: &str) -> Self {
        Vector::from_i64(field, &[(label, 1)])
    }

    pub fn scale(&self, field: &Field, by: &Scalar) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|(l, s)| (l.clone(), field.mul(s, by)))
            .collect();
        Vector::new(field, coords)
    }

    pub fn add(&self, field: &Field, other: &Vector) -> Self {
        let mut coords = self.coords.clone();
        for (l, s) in &other.coords {
            let cur = coords.remove(l).unwrap_or_else(|| field.zero());
            coords.insert(l.clone(), field.add(&cur, s));
        }
        Vector::new(field, coords)
    }

    pub fn sub(&self, field: &Field, other: &Vector) -> Self {
        self.add(field, &other.scale(field, &field.from_i64(-1)))
    }

    /// Dense coordinates in the given ambient order.
    pub fn dense(&self, field: &Field, ambient: &[String]) -> Result<Vec<Scalar>> {
        for l in self.coords.keys() {
            if !ambient.contains(l) {
                return Err(Error::input(format!(
                    "coordinate label {l:?} outside the ambient index set"
                )));
            }
        }
        Ok(ambient.iter().map(|l| self.get(field, l)).collect())
    }

    /// Canonical representative of the projective point: first nonzero
    /// coordinate scaled to 1. Errors on the zero vector.
    pub fn projective_normal(&self, field: &Field) -> Result<Vector> {
        let (_, first) = self
            .coords
            .iter()
            .next()
            .ok_or_else(|| Error::domain("zero vector has no projective point"))?;
        let inv = field.inv(first)?;
        Ok(self.scale(field, &inv))
    }

    /// Equality up to a nonzero scalar.
    pub fn projectively_equal(&self, field: &Field, other: &Vector) -> Result<bool> {
        Ok(self.projective_normal(field)? == other.projective_normal(field)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearKind {
    Points,
    Covectors,
}

/// A labeled family of rows over a common field and ambient index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMatroid {
    pub field: Field,
    pub kind: LinearKind,
    pub ambient: Vec<String>,
    pub rows: BTreeMap<String, Vector>,
}

impl LinearMatroid {
    pub fn new(
        field: Field,
        kind: LinearKind,
        mut ambient: Vec<String>,
        rows: BTreeMap<String, Vector>,
    ) -> Result<Self> {
        ambient.sort();
        ambient.dedup();
        for (label, v) in &rows {
            if v.is_zero() {
                return Err(Error::input(format!("row {label:?} is the zero vector")));
            }
            v.dense(&field, &ambient)?;
        }
        Ok(LinearMatroid {
            field,
            kind,
            ambient,
            rows,
        })
    }

    pub fn labels(&self) -> Vec<String> {
        self.rows.keys().cloned().collect()
    }

    pub fn row(&self, label: &str) -> Result<&Vector> {
        self.rows
            .get(label)
            .ok_or_else(|| Error::input(format!("unknown label {label:?}")))
    }

    fn dense_rows(&self, labels: &[&String]) -> Vec<Vec<Scalar>> {
        labels
            .iter()
            .map(|l| {
                self.rows[*l]
                    .dense(&self.field, &self.ambient)
                    .expect("rows validated at construction")
            })
            .collect()
    }

    pub fn rank_of(&self, labels: &[&String]) -> usize {
        linalg::rank(&self.field, self.dense_rows(labels))
    }

    /// The matroid as a rank oracle; rank of `S` = rank of the rows labeled
    /// by `S` (= codimension of the common kernel for covectors).
    pub fn rank_oracle(self) -> Result<RankOracle> {
        let ground = self.labels();
        let sorted = {
            let mut g = ground.clone();
            g.sort();
            g
        };
        let mats: Vec<Vec<Scalar>> = sorted
            .iter()
            .map(|l| self.rows[l].dense(&self.field, &self.ambient).unwrap())
            .collect();
        let field = self.field;
        RankOracle::new(ground, Provenance::Linear, move |mask| {
            let rows: Vec<Vec<Scalar>> = mats
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect();
            linalg::rank(&field, rows)
        })
    }
}

/// Exact rank of a list of vectors over a common ambient set.
pub fn rank(field: &Field, ambient: &[String], vectors: &[Vector]) -> Result<usize> {
    let rows = vectors
        .iter()
        .map(|v| v.dense(field, ambient))
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(field, rows))
}

/// True iff `v` lies in the span of `basis`.
pub fn in_span(field: &Field, ambient: &[String], v: &Vector, basis: &[Vector]) -> Result<bool> {
    let base_rank = rank(field, ambient, basis)?;
    let mut all = basis.to_vec();
    all.push(v.clone());
    Ok(rank(field, ambient, &all)? == base_rank)
}

/// An affine linear system `c_i . x = d_i`.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    pub field: Field,
    pub ambient: Vec<String>,
    pub rows: Vec<(Vector, Scalar)>,
}

/// Solvability of `{c_i . x = d_i}`: coefficient rank equals augmented rank.
pub fn affine_consistency(sys: &AffineSystem) -> Result<bool> {
    let coeff = sys
        .rows
        .iter()
        .map(|(c, _)| c.dense(&sys.field, &sys.ambient))
        .collect::<Result<Vec<_>>>()?;
    let mut aug = coeff.clone();
    for (row, (_, d)) in aug.iter_mut().zip(&sys.rows) {
        row.push(d.clone());
    }
    Ok(linalg::rank(&sys.field, coeff) == linalg::rank(&sys.field, aug))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rank_examples() {
        let gf5 = Field::prime(5).unwrap();
        let amb = labels(&["1", "2", "3"]);
        let vs = [
            Vector::from_i64(&gf5, &[("1", 1)]),
            Vector::from_i64(&gf5, &[("2", 1)]),
        ];
        assert_eq!(rank(&gf5, &amb, &vs).unwrap(), 2);

        let q = Field::Rationals;
        let dep = [
            Vector::from_i64(&q, &[("1", 1), ("2", -1)]),
            Vector::from_i64(&q, &[("2", 1), ("3", -1)]),
            Vector::from_i64(&q, &[("1", -1), ("3", 1)]),
        ];
        assert_eq!(rank(&q, &amb, &dep).unwrap(), 2);
        assert_eq!(rank(&q, &amb, &[]).unwrap(), 0);
    }

    #[test]
    fn in_span_examples() {
        let q = Field::Rationals;
        let amb = labels(&["1", "2", "3"]);
        let zero = Vector::zero();
        let e1 = Vector::unit(&q, "1");
        let e2 = Vector::unit(&q, "2");
        assert!(in_span(&q, &amb, &zero, &[e2.clone()]).unwrap());
        assert!(!in_span(&q, &amb, &e1, &[e2]).unwrap());

        let gf5 = Field::prime(5).unwrap();
        let v = Vector::from_i64(&gf5, &[("1", 1), ("2", 3)]);
        let b = Vector::from_i64(&gf5, &[("1", 1), ("2", -2)]);
        assert!(in_span(&gf5, &amb, &v, &[b]).unwrap()); // -2 = 3 mod 5
    }

    #[test]
    fn projective_equality() {
        let q = Field::Rationals;
        let a = Vector::from_i64(&q, &[("1", 2), ("2", -4)]);
        let b = Vector::from_i64(&q, &[("1", -1), ("2", 2)]);
        assert!(a.projectively_equal(&q, &b).unwrap());
        let c = Vector::from_i64(&q, &[("1", 1), ("2", 2)]);
        assert!(!a.projectively_equal(&q, &c).unwrap());
        assert!(Vector::zero().projective_normal(&q).is_err());
    }

    #[test]
    fn covector_oracle_is_codimension() {
        // node hyperplanes x1, x2 have intersection of codimension 2
        let q = Field::Rationals;
        let m = LinearMatroid::new(
            q,
            LinearKind::Covectors,
            labels(&["1", "2", "3"]),
            [
                ("h1".to_string(), Vector::unit(&q, "1")),
                ("h2".to_string(), Vector::unit(&q, "2")),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let oracle = m.rank_oracle().unwrap();
        assert_eq!(oracle.full_rank(), 2);
    }

    #[test]
    fn rank_nullity_for_covectors() {
        let q = Field::Rationals;
        let amb = labels(&["1", "2", "3", "4"]);
        let rows = [
            Vector::from_i64(&q, &[("1", 1), ("2", -1)]),
            Vector::from_i64(&q, &[("2", 1), ("3", -1)]),
            Vector::from_i64(&q, &[("1", 1), ("3", -1)]),
        ];
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|v| v.dense(&q, &amb).unwrap()).collect();
        let r = linalg::rank(&q, dense.clone());
        let nullity = linalg::nullspace(&q, dense).len();
        assert_eq!(r + nullity, amb.len());
    }

    #[test]
    fn affine_consistency_examples() {
        let q = Field::Rationals;
        let amb = labels(&["1", "2", "3"]);
        let telescoping = AffineSystem {
            field: q,
            ambient: amb.clone(),
            rows: vec![
                (Vector::from_i64(&q, &[("2", 1), ("1", -1)]), q.from_i64(1)),
                (Vector::from_i64(&q, &[("3", 1), ("2", -1)]), q.from_i64(2)),
                (Vector::from_i64(&q, &[("1", 1), ("3", -1)]), q.from_i64(-3)),
            ],
        };
        assert!(affine_consistency(&telescoping).unwrap());

        let contradictory = AffineSystem {
            field: q,
            ambient: amb.clone(),
            rows: vec![
                (Vector::from_i64(&q, &[("2", 1), ("1", -1)]), q.from_i64(1)),
                (Vector::from_i64(&q, &[("1", 1), ("2", -1)]), q.from_i64(1)),
            ],
        };
        assert!(!affine_consistency(&contradictory).unwrap());

        // over GF(2), 1 = -1, so the same system is consistent
        let gf2 = Field::prime(2).unwrap();
        let over_gf2 = AffineSystem {
            field: gf2,
            ambient: amb,
            rows: vec![
                (
                    Vector::from_i64(&gf2, &[("2", 1), ("1", -1)]),
                    gf2.from_i64(1),
                ),
                (
                    Vector::from_i64(&gf2, &[("1", 1), ("2", -1)]),
                    gf2.from_i64(1),
                ),
            ],
        };
        assert!(affine_consistency(&over_gf2).unwrap());
    }

    #[test]
    fn mixed_ambient_rejected() {
        let q = Field::Rationals;
        let amb = labels(&["1", "2"]);
        let v = Vector::from_i64(&q, &[("9", 1)]);
        assert!(rank(&q, &amb, &[v]).is_err());
    }
}
