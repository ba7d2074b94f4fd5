//! Gain groups: finite multiplication-table groups and the multiplicative or
//! additive group of an exact field.
//!
//! Table groups are validated eagerly (identity, inverses, associativity);
//! field groups lean on the field axioms. Elements of table groups are
//! indices into the element-name list; field-group elements are scalars.

use std::fmt;

use crate::algebra::field::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup {
    pub elements: Vec<String>,
    /// `table[i][j]` = index of `elements[i] * elements[j]`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl TableGroup {
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::input("empty group"));
        }
        {
            let mut sorted = elements.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::input("duplicate group element names"));
            }
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::input("multiplication table is not n x n"));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::input("multiplication table entry out of range"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| table[e][i] == i && table[i][e] == i))
            .ok_or_else(|| Error::input("group table has no identity"))?;
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            inverse[i] = (0..n)
                .find(|&j| table[i][j] == identity && table[j][i] == identity)
                .ok_or_else(|| Error::input(format!("{} has no inverse", elements[i])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::input(format!(
                            "table is not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        Ok(TableGroup {
            elements,
            table,
            identity,
            inverse,
        })
    }

    /// Cyclic group of order n, elements "0".."n-1" under addition.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        TableGroup::new(elements, table).expect("cyclic table is a group")
    }

    /// Direct product; element names "a|b".
    pub fn direct_product(a: &TableGroup, b: &TableGroup) -> Self {
        let na = a.elements.len();
        let nb = b.elements.len();
        let mut elements = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                elements.push(format!("{}|{}", a.elements[i], b.elements[j]));
            }
        }
        let idx = |i: usize, j: usize| i * nb + j;
        let mut table = vec![vec![0usize; na * nb]; na * nb];
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        table[idx(i1, j1)][idx(i2, j2)] =
                            idx(a.table[i1][i2], b.table[j1][j2]);
                    }
                }
            }
        }
        TableGroup::new(elements, table).expect("product table is a group")
    }

    /// Symmetric group on `n` symbols (n <= 4), elements named by one-line
    /// permutation words like "213".
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::input("symmetric groups supported up to n = 4"));
        }
        let perms = permutations(n);
        let elements: Vec<String> = perms
            .iter()
            .map(|p| p.iter().map(|x| (x + 1).to_string()).collect())
            .collect();
        let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    // composition: (p * q)(x) = p(q(x))
                    .map(|q| index_of(&(0..n).map(|x| p[q[x]]).collect()))
                    .collect()
            })
            .collect();
        TableGroup::new(elements, table)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in out {
            for x in 0..n {
                if !p.contains(&x) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Group {
    Table(TableGroup),
    /// The multiplicative group of a field.
    FieldMul(Field),
    /// The additive group of a field.
    FieldAdd(Field),
}

/// An element of a [`Group`]; table elements are indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElem {
    Table(usize),
    Scalar(Scalar),
}

impl Group {
    pub fn identity(&self) -> GroupElem {
        match self {
            Group::Table(t) => GroupElem::Table(t.identity),
            Group::FieldMul(f) => GroupElem::Scalar(f.one()),
            Group::FieldAdd(f) => GroupElem::Scalar(f.zero()),
        }
    }

    pub fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        match (self, a, b) {
            (Group::Table(t), GroupElem::Table(i), GroupElem::Table(j)) => {
                GroupElem::Table(t.table[*i][*j])
            }
            (Group::FieldMul(f), GroupElem::Scalar(x), GroupElem::Scalar(y)) => {
                GroupElem::Scalar(f.mul(x, y))
            }
            (Group::FieldAdd(f), GroupElem::Scalar(x), GroupElem::Scalar(y)) => {
                GroupElem::Scalar(f.add(x, y))
            }
            _ => panic!("group/element mismatch"),
        }
    }

    pub fn inv(&self, a: &GroupElem) -> GroupElem {
        match (self, a) {
            (Group::Table(t), GroupElem::Table(i)) => GroupElem::Table(t.inverse[*i]),
            (Group::FieldMul(f), GroupElem::Scalar(x)) => {
                GroupElem::Scalar(f.inv(x).expect("units are invertible"))
            }
            (Group::FieldAdd(f), GroupElem::Scalar(x)) => GroupElem::Scalar(f.neg(x)),
            _ => panic!("group/element mismatch"),
        }
    }

    pub fn is_identity(&self, a: &GroupElem) -> bool {
        *a == self.identity()
    }

    /// Order for finite groups, None for the rational field groups.
    pub fn order(&self) -> Option<usize> {
        match self {
            Group::Table(t) => Some(t.elements.len()),
            Group::FieldMul(Field::Prime(p)) => Some(*p as usize - 1),
            Group::FieldAdd(Field::Prime(p)) => Some(*p as usize),
            _ => None,
        }
    }

    /// Elements of a finite group in canonical order; error for infinite.
    pub fn elements(&self) -> Result<Vec<GroupElem>> {
        match self {
            Group::Table(t) => Ok((0..t.elements.len()).map(GroupElem::Table).collect()),
            Group::FieldMul(f) => Ok(f.units()?.into_iter().map(GroupElem::Scalar).collect()),
            Group::FieldAdd(f) => Ok(f.elements()?.into_iter().map(GroupElem::Scalar).collect()),
        }
    }

    /// Checks membership of a scalar in the field-group carrier.
    pub fn admits(&self, e: &GroupElem) -> bool {
        match (self, e) {
            (Group::Table(t), GroupElem::Table(i)) => *i < t.elements.len(),
            (Group::FieldMul(f), GroupElem::Scalar(s)) => !f.is_zero(s),
            (Group::FieldAdd(_), GroupElem::Scalar(_)) => true,
            _ => false,
        }
    }

    pub fn elem_string(&self, e: &GroupElem) -> String {
        match (self, e) {
            (Group::Table(t), GroupElem::Table(i)) => t.elements[*i].clone(),
            (Group::FieldMul(f), GroupElem::Scalar(s)) => f.scalar_string(s),
            (Group::FieldAdd(f), GroupElem::Scalar(s)) => f.scalar_string(s),
            _ => panic!("group/element mismatch"),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<GroupElem> {
        match self {
            Group::Table(t) => t
                .elements
                .iter()
                .position(|e| e == s)
                .map(GroupElem::Table)
                .ok_or_else(|| Error::input(format!("unknown group element {s:?}"))),
            Group::FieldMul(f) => {
                let v = f.parse_scalar(s)?;
                if f.is_zero(&v) {
                    return Err(Error::input("0 is not in the multiplicative group"));
                }
                Ok(GroupElem::Scalar(v))
            }
            Group::FieldAdd(f) => Ok(GroupElem::Scalar(f.parse_scalar(s)?)),
        }
    }

    /// Parses group specs: `Z<n>`, `Z<a>xZ<b>`, `S<n>`, `field*`, `field+`.
    pub fn parse_named(name: &str, field: Option<&Field>) -> Result<Group> {
        let name = name.trim();
        match name {
            "field*" => {
                let f = field.ok_or_else(|| Error::input("field* needs --field"))?;
                return Ok(Group::FieldMul(*f));
            }
            "field+" => {
                let f = field.ok_or_else(|| Error::input("field+ needs --field"))?;
                return Ok(Group::FieldAdd(*f));
            }
            _ => {}
        }
        if let Some((a, b)) = name.split_once('x') {
            let (Group::Table(ta), Group::Table(tb)) =
                (Group::parse_named(a, None)?, Group::parse_named(b, None)?)
            else {
                return Err(Error::input(format!("bad product group {name:?}")));
            };
            return Ok(Group::Table(TableGroup::direct_product(&ta, &tb)));
        }
        if let Some(n) = name.strip_prefix('Z') {
            let n: usize = n
                .parse()
                .map_err(|_| Error::input(format!("bad group name {name:?}")))?;
            if n == 0 {
                return Err(Error::input("Z0 is not a group"));
            }
            return Ok(Group::Table(TableGroup::cyclic(n)));
        }
        if let Some(n) = name.strip_prefix('S') {
            let n: usize = n
                .parse()
                .map_err(|_| Error::input(format!("bad group name {name:?}")))?;
            return Ok(Group::Table(TableGroup::symmetric(n)?));
        }
        Err(Error::input(format!(
            "unknown group {name:?}; expected Z<n>, Z<a>xZ<b>, S<n>, field*, field+"
        )))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Table(t) => write!(f, "table group of order {}", t.elements.len()),
            Group::FieldMul(fl) => write!(f, "{fl}^x"),
            Group::FieldAdd(fl) => write!(f, "{fl}^+"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        for n in 1..=6 {
            let g = Group::Table(TableGroup::cyclic(n));
            assert_eq!(g.order(), Some(n));
            let e = g.identity();
            for x in g.elements().unwrap() {
                assert_eq!(g.op(&x, &g.inv(&x)), e);
            }
        }
    }

    #[test]
    fn bad_tables_rejected() {
        // 2x2 table without identity row/column structure
        let t = TableGroup::new(vec!["a".into(), "b".into()], vec![vec![1, 1], vec![1, 1]]);
        assert!(t.is_err());
        // non-associative magma on 3 elements
        let t = TableGroup::new(
            vec!["e".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]],
        );
        assert!(t.is_err());
    }

    #[test]
    fn s3_has_order_6_and_is_nonabelian() {
        let t = TableGroup::symmetric(3).unwrap();
        assert_eq!(t.elements.len(), 6);
        let g = Group::Table(t);
        let es = g.elements().unwrap();
        let nonabelian = es
            .iter()
            .any(|a| es.iter().any(|b| g.op(a, b) != g.op(b, a)));
        assert!(nonabelian);
    }

    #[test]
    fn parse_named_groups() {
        assert_eq!(Group::parse_named("Z2", None).unwrap().order(), Some(2));
        assert_eq!(Group::parse_named("Z2xZ2", None).unwrap().order(), Some(4));
        assert_eq!(Group::parse_named("S3", None).unwrap().order(), Some(6));
        let f = Field::prime(5).unwrap();
        assert_eq!(
            Group::parse_named("field*", Some(&f)).unwrap().order(),
            Some(4)
        );
        assert_eq!(
            Group::parse_named("field+", Some(&f)).unwrap().order(),
            Some(5)
        );
        assert!(Group::parse_named("Q8", None).is_err());
    }

    #[test]
    fn field_group_elements() {
        let f = Field::prime(3).unwrap();
        let mul = Group::FieldMul(f);
        assert_eq!(mul.elements().unwrap().len(), 2);
        assert!(mul.parse_elem("0").is_err());
        let add = Group::FieldAdd(f);
        assert!(add.is_identity(&add.parse_elem("0").unwrap()));
        assert!(Group::FieldMul(Field::Rationals).elements().is_err());
    }
}
