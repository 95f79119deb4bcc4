//! Exact linear algebra over the rationals.
//!
//! Rows are cleared to primitive integer vectors and eliminated fraction-free;
//! rationals appear only in the final back-substitution that produces a
//! nullspace basis. Pivots are always taken at the lowest available column,
//! so ranks and bases are reproducible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::rational::{clear_denominators, Scalar};

pub type SparseRow = BTreeMap<usize, Scalar>;
type IntRow = BTreeMap<usize, BigInt>;

/// Incremental row-echelon form over ℤ.
#[derive(Debug, Clone, Default)]
pub struct Eliminator {
    columns: usize,
    pivots: BTreeMap<usize, IntRow>,
}

fn make_primitive(row: &mut IntRow) {
    let mut content = BigInt::zero();
    for v in row.values() {
        content = content.gcd(v);
    }
    if content.is_zero() {
        return;
    }
    // leading entry positive
    if row.values().next().is_some_and(|v| v.is_negative()) {
        content = -content;
    }
    for v in row.values_mut() {
        *v = &*v / &content;
    }
}

impl Eliminator {
    pub fn new(columns: usize) -> Self {
        Eliminator { columns, pivots: BTreeMap::new() }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Adds a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let entries: Vec<(usize, Scalar)> =
            row.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v.clone())).collect();
        if entries.is_empty() {
            return false;
        }
        debug_assert!(entries.iter().all(|(c, _)| *c < self.columns));
        let values: Vec<Scalar> = entries.iter().map(|(_, v)| v.clone()).collect();
        let ints = clear_denominators(&values);
        let row: IntRow = entries.iter().map(|(c, _)| *c).zip(ints).collect();
        self.insert_int(row)
    }

    pub fn insert_dense(&mut self, row: &[Scalar]) -> bool {
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        self.insert(&sparse)
    }

    fn insert_int(&mut self, mut row: IntRow) -> bool {
        make_primitive(&mut row);
        loop {
            let Some((&lead, lead_value)) = row.iter().next() else {
                return false;
            };
            let Some(pivot) = self.pivots.get(&lead) else {
                self.pivots.insert(lead, row);
                return true;
            };
            // row <- p*row - r*pivot, with p the pivot's leading entry
            let p = pivot[&lead].clone();
            let r = lead_value.clone();
            let g = p.gcd(&r);
            let (p, r) = (&p / &g, &r / &g);
            let mut next = IntRow::new();
            for (c, v) in &row {
                next.insert(*c, v * &p);
            }
            for (c, v) in pivot {
                let entry = next.entry(*c).or_insert_with(BigInt::zero);
                *entry -= v * &r;
            }
            next.retain(|_, v| !v.is_zero());
            make_primitive(&mut next);
            row = next;
        }
    }

    /// Reduced row-echelon rows keyed by pivot column, each with leading 1.
    pub fn reduced_rows(&self) -> BTreeMap<usize, SparseRow> {
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&col, row) in self.pivots.iter().rev() {
            let lead = BigRational::from_integer(row[&col].clone());
            let mut out: SparseRow = row
                .iter()
                .map(|(c, v)| (*c, BigRational::from_integer(v.clone()) / &lead))
                .collect();
            // clear entries in later pivot columns (already reduced)
            let later: Vec<usize> = out.keys().copied().filter(|c| *c > col && reduced.contains_key(c)).collect();
            for c in later {
                let factor = match out.get(&c) {
                    Some(f) if !f.is_zero() => f.clone(),
                    _ => continue,
                };
                for (cc, v) in &reduced[&c] {
                    let entry = out.entry(*cc).or_insert_with(Scalar::zero);
                    *entry -= &factor * v;
                }
                out.retain(|_, v| !v.is_zero());
            }
            reduced.insert(col, out);
        }
        reduced
    }

    /// Nullspace basis parametrized by free columns: vector `j` carries a 1 at
    /// the `j`-th free column, 0 at every other free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let reduced = self.reduced_rows();
        (0..self.columns)
            .filter(|c| !reduced.contains_key(c))
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.columns];
                v[free] = Scalar::from_integer(1.into());
                for (&col, row) in &reduced {
                    if let Some(x) = row.get(&free) {
                        v[col] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }

    pub fn nullity(&self) -> usize {
        self.columns - self.rank()
    }
}

pub fn rank(rows: &[Vec<Scalar>], columns: usize) -> usize {
    let mut e = Eliminator::new(columns);
    for r in rows {
        e.insert_dense(r);
    }
    e.rank()
}

pub fn nullspace(rows: &[Vec<Scalar>], columns: usize) -> Vec<Vec<Scalar>> {
    let mut e = Eliminator::new(columns);
    for r in rows {
        e.insert_dense(r);
    }
    e.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn apply(rows: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
        rows.iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).fold(Scalar::zero(), |x, y| x + y))
            .collect()
    }

    #[test]
    fn identity_has_full_rank() {
        let rows = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        assert_eq!(rank(&rows, 2), 2);
        assert!(nullspace(&rows, 2).is_empty());
    }

    #[test]
    fn free_variable_parametrization() {
        // x0 + x1 - x2 = 0 ; x0 = 0
        let rows = vec![vec![int(1), int(1), int(-1)], vec![int(1), int(0), int(0)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns, vec![vec![int(0), int(1), int(1)]]);
    }

    #[test]
    fn rational_coefficients() {
        let rows = vec![vec![frac(1, 2), frac(1, 3)]];
        let ns = nullspace(&rows, 2);
        assert_eq!(ns, vec![vec![frac(-2, 3), int(1)]]);
    }

    #[test]
    fn zero_rows_ignored() {
        let rows = vec![vec![int(0), int(0)]];
        assert_eq!(rank(&rows, 2), 0);
        assert_eq!(nullspace(&rows, 2).len(), 2);
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel(entries in proptest::collection::vec(-3i64..=3, 12), ncols in 1usize..=4) {
            let nrows = entries.len() / ncols;
            let rows: Vec<Vec<Scalar>> = (0..nrows)
                .map(|i| (0..ncols).map(|j| int(entries[i * ncols + j])).collect())
                .collect();
            let ns = nullspace(&rows, ncols);
            prop_assert_eq!(rank(&rows, ncols) + ns.len(), ncols);
            for v in &ns {
                prop_assert!(apply(&rows, v).iter().all(|x| x.is_zero()));
            }
            // nullspace vectors independent
            prop_assert_eq!(rank(&ns, ncols), ns.len());
        }
    }
}
