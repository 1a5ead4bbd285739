//! Sparse exact row reduction over the rationals.
//!
//! Vectors are sparse `(column, value)` lists sorted by column. The pivot of
//! a row is its leftmost nonzero column and is always normalized to 1.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Q;

pub type SparseVec = Vec<(u32, Q)>;

fn from_map(acc: BTreeMap<u32, Q>) -> SparseVec {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn axpy(acc: &mut BTreeMap<u32, Q>, c: &Q, tail: &[(u32, Q)]) {
    for (col, v) in tail {
        let entry = acc.entry(*col).or_insert_with(Q::zero);
        *entry -= c * v;
    }
}

/// A matrix kept in reduced row-echelon form at all times.
///
/// Rows are keyed by pivot; the stored tail excludes the pivot entry. Because
/// no tail ever touches a pivot column, equal row spaces give identical
/// values, so `==` decides equality of subspaces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Echelon {
    rows: BTreeMap<u32, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    /// Rows that are already unit vectors on distinct columns.
    pub fn from_unit_pivots<I: IntoIterator<Item = u32>>(cols: I) -> Self {
        Echelon {
            rows: cols.into_iter().map(|c| (c, Vec::new())).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Append unit rows on columns to the right of every stored entry.
    pub fn extend_units(&mut self, cols: std::ops::Range<u32>) {
        debug_assert!(self
            .rows
            .iter()
            .all(|(p, t)| *p < cols.start && t.last().is_none_or(|(c, _)| *c < cols.start)));
        for c in cols {
            self.rows.insert(c, Vec::new());
        }
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &SparseVec)> + '_ {
        self.rows.iter().map(|(p, t)| (*p, t))
    }

    pub fn pivots_in(&self, lo: u32, hi: u32) -> usize {
        self.rows.range(lo..hi).count()
    }

    /// True when every tail is empty, i.e. the row space is spanned by
    /// coordinate vectors.
    pub fn is_coordinate(&self) -> bool {
        self.rows.values().all(|t| t.is_empty())
    }

    /// Normal form of `v` modulo the row space. The result has no entry in
    /// any pivot column.
    pub fn reduce(&self, v: &[(u32, Q)]) -> SparseVec {
        let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
        for (col, c) in v {
            if c.is_zero() {
                continue;
            }
            match self.rows.get(col) {
                Some(tail) => axpy(&mut acc, c, tail),
                None => {
                    let entry = acc.entry(*col).or_insert_with(Q::zero);
                    *entry += c;
                }
            }
        }
        from_map(acc)
    }

    pub fn contains(&self, v: &[(u32, Q)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Add `v` to the row space. Returns the new pivot, or `None` when `v`
    /// already lies in the span.
    pub fn insert(&mut self, v: &[(u32, Q)]) -> Option<u32> {
        let reduced = self.reduce(v);
        self.insert_reduced(reduced)
    }

    fn insert_reduced(&mut self, reduced: SparseVec) -> Option<u32> {
        let (pivot, lead) = reduced.first().cloned()?;
        let inv = Q::one() / lead;
        let tail: SparseVec = reduced[1..].iter().map(|(c, v)| (*c, v * &inv)).collect();
        for row in self.rows.values_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pivot, |(c, _)| *c) {
                let c = row.remove(pos).1;
                let mut acc: BTreeMap<u32, Q> = row.drain(..).collect();
                axpy(&mut acc, &c, &tail);
                *row = from_map(acc);
            }
        }
        self.rows.insert(pivot, tail);
        Some(pivot)
    }

    /// Restrict to columns `< limit`: rows pivoting at or beyond the limit
    /// vanish and tails are cut. This is the projection onto a quotient by
    /// a coordinate subspace, so the result is again reduced.
    pub fn project_below(&self, limit: u32) -> Echelon {
        Echelon {
            rows: self
                .rows
                .range(..limit)
                .map(|(p, t)| (*p, t.iter().filter(|(c, _)| *c < limit).cloned().collect()))
                .collect(),
        }
    }

    /// Split off the rows whose pivot is `>= limit`, returned with the
    /// column offset `limit` subtracted.
    pub fn rows_from(&self, limit: u32) -> Vec<SparseVec> {
        self.rows
            .range(limit..)
            .map(|(p, t)| {
                let mut v = Vec::with_capacity(t.len() + 1);
                v.push((*p - limit, Q::one()));
                v.extend(t.iter().map(|(c, x)| (*c - limit, x.clone())));
                v
            })
            .collect()
    }
}

/// Row reduction that only tracks rank. Rows are stored without
/// back-substitution, which keeps fill-in low for large sparse systems.
#[derive(Clone, Debug, Default)]
pub struct RankCounter {
    rows: BTreeMap<u32, SparseVec>,
}

impl RankCounter {
    pub fn new() -> Self {
        RankCounter::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns true when `v` was independent of the rows seen so far.
    pub fn push(&mut self, v: &[(u32, Q)]) -> bool {
        let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
        for (col, c) in v {
            let entry = acc.entry(*col).or_insert_with(Q::zero);
            *entry += c;
        }
        loop {
            let (col, c) = match acc.pop_first() {
                Some(front) => front,
                None => return false,
            };
            if c.is_zero() {
                continue;
            }
            match self.rows.get(&col) {
                Some(tail) => axpy(&mut acc, &c, tail),
                None => {
                    let inv = Q::one() / c;
                    let tail = acc
                        .into_iter()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(k, x)| (k, x * &inv))
                        .collect();
                    self.rows.insert(col, tail);
                    return true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_int;

    fn v(entries: &[(u32, i64)]) -> SparseVec {
        entries.iter().map(|&(c, x)| (c, q_int(x))).collect()
    }

    #[test]
    fn insert_keeps_reduced_form() {
        let mut e = Echelon::new();
        assert_eq!(e.insert(&v(&[(1, 2), (3, 4)])), Some(1));
        assert_eq!(e.insert(&v(&[(3, 1), (5, 1)])), Some(3));
        let (_, first) = e.rows().next().unwrap();
        assert_eq!(first, &v(&[(5, -2)]));
        assert_eq!(e.insert(&v(&[(1, 1), (3, 2)])), None);
        assert!(e.contains(&v(&[(1, 1), (5, -2)])));
        assert!(!e.contains(&v(&[(5, 1)])));
    }

    #[test]
    fn order_of_insertion_is_irrelevant() {
        let rows = [v(&[(0, 1), (2, 3)]), v(&[(2, 1), (4, -1)]), v(&[(0, 2), (4, 5)])];
        let mut a = Echelon::new();
        let mut b = Echelon::new();
        for r in &rows {
            a.insert(r);
        }
        for r in rows.iter().rev() {
            b.insert(r);
        }
        assert_eq!(a, b);
    }

    #[test]
    fn rank_counter_agrees() {
        let rows = [
            v(&[(0, 1), (1, 1)]),
            v(&[(1, 1), (2, 1)]),
            v(&[(0, 1), (2, -1)]),
            v(&[(2, 3)]),
        ];
        let mut rc = RankCounter::new();
        let mut e = Echelon::new();
        for r in &rows {
            rc.push(r);
            e.insert(r);
        }
        assert_eq!(rc.rank(), 3);
        assert_eq!(e.rank(), 3);
    }
}
