//! Dense exact Gaussian elimination.
//!
//! Matrices are `Vec<Vec<Scalar>>` over a runtime [`Field`]. Pivoting is
//! first-nonzero so reduced forms are deterministic, which the reporting
//! layer relies on; correctness needs only exactness.

use super::field::{Field, Scalar};
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form together with the pivot columns.
pub struct Echelon {
    pub rows: Matrix,
    pub pivots: Vec<usize>,
}

pub fn rref(field: &Field, mut rows: Matrix) -> Echelon {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field
            .inv(&rows[r][c])
            .expect("pivot is nonzero by construction");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = field.mul(&factor, &rows[r][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

pub fn rank(field: &Field, rows: Matrix) -> usize {
    rref(field, rows).pivots.len()
}

/// Basis of the right nullspace `{x : M x = 0}`, one vector per free column.
pub fn nullspace(field: &Field, rows: Matrix) -> Vec<Vec<Scalar>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let ech = rref(field, rows);
    let mut basis = Vec::new();
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    for &fc in &free {
        let mut v = vec![field.zero(); ncols];
        v[fc] = field.one();
        for (ri, &pc) in ech.pivots.iter().enumerate() {
            v[pc] = field.neg(&ech.rows[ri][fc]);
        }
        basis.push(v);
    }
    basis
}

/// Solves `M x = b`; `None` when the system is inconsistent.
pub fn solve(field: &Field, rows: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if rows.len() != b.len() {
        return Err(Error::input("solve: row/rhs length mismatch".to_string()));
    }
    let ncols = rows.first().map_or(0, Vec::len);
    let aug: Matrix = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let ech = rref(field, aug);
    if ech.pivots.contains(&ncols) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); ncols];
    for (ri, &pc) in ech.pivots.iter().enumerate() {
        x[pc] = ech.rows[ri][ncols].clone();
    }
    Ok(Some(x))
}

/// Canonical string signature of a row space; equal signatures iff equal spans.
pub fn span_signature(field: &Field, rows: Matrix) -> String {
    let ech = rref(field, rows);
    let mut out = String::new();
    for row in &ech.rows {
        for x in row {
            out.push_str(&field.scalar_string(x));
            out.push(',');
        }
        out.push(';');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: &Field, data: &[&[i64]]) -> Matrix {
        data.iter()
            .map(|row| row.iter().map(|&n| field.from_i64(n)).collect())
            .collect()
    }

    #[test]
    fn rank_over_gf5() {
        let f = Field::prime(5).unwrap();
        let m = mat(&f, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(rank(&f, m), 2);
    }

    #[test]
    fn dependent_triple_over_q() {
        let f = Field::Rationals;
        let m = mat(&f, &[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]]);
        assert_eq!(rank(&f, m), 2);
    }

    #[test]
    fn empty_matrix_rank_zero() {
        let f = Field::Rationals;
        assert_eq!(rank(&f, Vec::new()), 0);
    }

    #[test]
    fn nullspace_dimension() {
        let f = Field::Rationals;
        let m = mat(&f, &[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]]);
        let ns = nullspace(&f, m.clone());
        assert_eq!(ns.len(), 1);
        // check M x = 0
        for row in &m {
            let mut acc = f.zero();
            for (a, b) in row.iter().zip(&ns[0]) {
                acc = f.add(&acc, &f.mul(a, b));
            }
            assert!(f.is_zero(&acc));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let f = Field::Rationals;
        let m = mat(&f, &[&[1, 1], &[1, -1]]);
        let b = vec![f.from_i64(3), f.from_i64(1)];
        let x = solve(&f, &m, &b).unwrap().unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);

        let m2 = mat(&f, &[&[1, 1], &[1, 1]]);
        let b2 = vec![f.from_i64(0), f.from_i64(1)];
        assert!(solve(&f, &m2, &b2).unwrap().is_none());
    }

    #[test]
    fn signature_invariant_under_row_ops() {
        let f = Field::prime(7).unwrap();
        let a = mat(&f, &[&[1, 2, 3], &[0, 1, 4]]);
        let b = mat(&f, &[&[2, 4, 6], &[1, 3, 0]]); // row-equivalent
        assert_eq!(span_signature(&f, a), span_signature(&f, b));
    }
}
