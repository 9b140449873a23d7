//! Sparse exact Gaussian elimination over the rationals.
//!
//! Rows are kept in reduced echelon form with a fixed pivoting order
//! (lowest column index wins), so identical inputs always produce the
//! identical reduced basis.

use crate::rat::Q;
use num::Zero;
use std::collections::BTreeMap;

/// A sparse vector over Q, keyed by column index.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn sparse_from_pairs(pairs: impl IntoIterator<Item = (usize, Q)>) -> SparseVec {
    let mut v = SparseVec::new();
    for (i, c) in pairs {
        if c.is_zero() {
            continue;
        }
        let entry = v.entry(i).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            v.remove(&i);
        }
    }
    v
}

fn axpy(dst: &mut SparseVec, coeff: &Q, src: &SparseVec) {
    if coeff.is_zero() {
        return;
    }
    for (i, c) in src {
        let entry = dst.entry(*i).or_insert_with(Q::zero);
        *entry += coeff * c;
        if entry.is_zero() {
            dst.remove(i);
        }
    }
}

/// A growing row space with reduction: rows are stored normalized with
/// unit leading coefficient, indexed by pivot column.
#[derive(Debug, Default, Clone)]
pub struct RowSpace {
    rows: BTreeMap<usize, SparseVec>,
}

impl RowSpace {
    pub fn new() -> Self {
        RowSpace { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows, in place.
    pub fn reduce(&self, v: &mut SparseVec) {
        loop {
            let Some((&piv, head)) = v.iter().next().map(|(i, c)| (i, c.clone())) else {
                return;
            };
            match self.rows.get(&piv) {
                Some(row) => {
                    let coeff = -head;
                    axpy(v, &coeff, row);
                    debug_assert!(!v.contains_key(&piv));
                }
                None => {
                    // Leading entry is not a pivot; the remaining entries may
                    // still reduce, but reduced echelon form guarantees no row
                    // touches columns left of its own pivot, so scan forward.
                    break;
                }
            }
        }
        // Clear any non-leading entries sitting on pivot columns.
        let cols: Vec<usize> = v.keys().copied().collect();
        for col in cols {
            if let Some(c) = v.get(&col).cloned() {
                if let Some(row) = self.rows.get(&col) {
                    axpy(v, &(-c), row);
                }
            }
        }
    }

    /// Inserts `v` into the span. Returns false if `v` was already in it.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        self.reduce(&mut v);
        let Some((&piv, head)) = v.iter().next().map(|(i, c)| (i, c.clone())) else {
            return false;
        };
        // Normalize to unit leading coefficient.
        let inv = Q::new(head.denom().clone(), head.numer().clone());
        let mut row = SparseVec::new();
        for (i, c) in &v {
            row.insert(*i, c * &inv);
        }
        // Back-substitute into existing rows to keep reduced form.
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for p in pivots {
            let coeff = self.rows[&p].get(&piv).cloned();
            if let Some(c) = coeff {
                let r = self.rows.get_mut(&p).unwrap();
                let mut tmp = std::mem::take(r);
                axpy(&mut tmp, &(-c), &row);
                *self.rows.get_mut(&p).unwrap() = tmp;
            }
        }
        self.rows.insert(piv, row);
        true
    }

    /// Membership test: is `v` in the span?
    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    fn v(pairs: &[(usize, i64)]) -> SparseVec {
        sparse_from_pairs(pairs.iter().map(|&(i, c)| (i, qi(c))))
    }

    #[test]
    fn span_membership() {
        let mut s = RowSpace::new();
        assert!(s.insert(v(&[(0, 1), (1, 1)])));
        assert!(s.insert(v(&[(1, 2), (2, 2)])));
        assert!(!s.insert(v(&[(0, 1), (2, -1)]))); // = r1 - r2/... dependent
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&v(&[(0, 3), (1, 3)])));
        assert!(!s.contains(&v(&[(0, 1)])));
    }

    #[test]
    fn rational_coefficients() {
        let mut s = RowSpace::new();
        let mut row = SparseVec::new();
        row.insert(4, q(2, 3));
        row.insert(7, q(-1, 2));
        assert!(s.insert(row));
        let mut probe = SparseVec::new();
        probe.insert(4, q(4, 3));
        probe.insert(7, qi(-1));
        assert!(s.contains(&probe));
    }
}
