//! Sparse exact elimination over the rationals.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use num_traits::{CheckedMul, CheckedSub, Zero};

use crate::error::HomologyError;

pub type Q = Ratio<i128>;
pub type SparseVec = BTreeMap<usize, Q>;

/// Row-echelon basis of a subspace. Each stored row has its smallest
/// column as pivot, with pivot entry one.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    by_pivot: HashMap<usize, usize>,
}

fn sub_scaled(v: &mut SparseVec, row: &SparseVec, c: Q) -> Result<(), HomologyError> {
    for (&k, x) in row {
        let d = c.checked_mul(x).ok_or(HomologyError::Overflow)?;
        let e = v.entry(k).or_insert_with(Q::zero);
        *e = e.checked_sub(&d).ok_or(HomologyError::Overflow)?;
        if e.is_zero() {
            v.remove(&k);
        }
    }
    Ok(())
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.by_pivot.contains_key(&col)
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> Result<bool, HomologyError> {
        v.retain(|_, x| !x.is_zero());
        while let Some((&k, &x)) = v.iter().next() {
            match self.by_pivot.get(&k) {
                Some(&r) => {
                    let row = std::mem::take(&mut self.rows[r]);
                    let res = sub_scaled(&mut v, &row, x);
                    self.rows[r] = row;
                    res?;
                }
                None => {
                    let inv = x.recip();
                    for e in v.values_mut() {
                        *e = e.checked_mul(&inv).ok_or(HomologyError::Overflow)?;
                    }
                    self.by_pivot.insert(k, self.rows.len());
                    self.rows.push(v);
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// The unique vector in `v + span` vanishing on every pivot column.
    pub fn reduce(&self, mut v: SparseVec) -> Result<SparseVec, HomologyError> {
        v.retain(|_, x| !x.is_zero());
        let mut cursor = 0;
        loop {
            let Some((&k, &x)) = v.range(cursor..).next() else {
                return Ok(v);
            };
            match self.by_pivot.get(&k) {
                Some(&r) => sub_scaled(&mut v, &self.rows[r], x)?,
                None => cursor = k + 1,
            }
        }
    }
}

/// Rank of a sparse matrix given by columns.
pub fn rank(columns: impl IntoIterator<Item = SparseVec>) -> Result<usize, HomologyError> {
    let mut e = Echelon::new();
    for c in columns {
        e.insert(c)?;
    }
    Ok(e.rank())
}

pub fn from_ints(entries: &[(usize, i64)]) -> SparseVec {
    let mut v = SparseVec::new();
    for &(k, x) in entries {
        *v.entry(k).or_insert_with(Q::zero) += Q::from_integer(x as i128);
    }
    v.retain(|_, x| !x.is_zero());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_reduce() {
        let mut e = Echelon::new();
        assert!(e.insert(from_ints(&[(0, 2), (1, 2)])).unwrap());
        assert!(e.insert(from_ints(&[(1, 1), (2, -1)])).unwrap());
        assert!(!e.insert(from_ints(&[(0, 1), (2, 1)])).unwrap());
        assert_eq!(e.rank(), 2);
        let r = e.reduce(from_ints(&[(0, 3)])).unwrap();
        assert_eq!(r, from_ints(&[(2, -3)]));
        assert_eq!(
            rank([from_ints(&[(0, 1)]), from_ints(&[(0, -1)]), SparseVec::new()]).unwrap(),
            1
        );
    }
}
