//! Exact sparse Gaussian elimination over `Q`.
//!
//! Rows are reduced one at a time against the pivots already found, in pivot
//! order, so every stored pivot row only mentions its own pivot column, free
//! columns, and pivot columns created after it. Back substitution then runs
//! in reverse pivot order with all free columns set to zero.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::ring::Rational;

/// A sparse row: `(column, coefficient)` pairs with nonzero coefficients.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Debug, Clone, Default)]
pub struct SparseSystem {
    ncols: usize,
    rows: Vec<(SparseRow, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// A particular solution with every free column set to zero.
    Feasible(Vec<Rational>),
    /// Index of an input row that reduced to `0 = nonzero`.
    Inconsistent { row: usize },
}

struct Pivot {
    col: usize,
    row: HashMap<usize, Rational>,
    rhs: Rational,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|(r, _)| r.len()).sum()
    }

    /// Adds the equation `Σ coeff·x[col] = rhs`; duplicate columns are summed.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        let mut acc: HashMap<usize, Rational> = HashMap::new();
        for (col, c) in entries {
            assert!(col < self.ncols, "column {col} out of range");
            *acc.entry(col).or_insert_with(Rational::zero) += c;
        }
        let mut row: SparseRow = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        row.sort_by_key(|(col, _)| *col);
        self.rows.push((row, rhs));
    }

    pub fn solve(&self) -> Solution {
        let mut col_count = vec![0usize; self.ncols];
        for (row, _) in &self.rows {
            for (col, _) in row {
                col_count[*col] += 1;
            }
        }

        // Short rows first; ties by input order keep the run deterministic.
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| (self.rows[i].0.len(), i));

        let mut pivots: Vec<Pivot> = Vec::new();
        let mut pivot_of_col: HashMap<usize, usize> = HashMap::new();

        for &ri in &order {
            let (src, rhs) = &self.rows[ri];
            let mut row: HashMap<usize, Rational> = src.iter().cloned().collect();
            let mut rhs = rhs.clone();
            let mut pending: BTreeSet<usize> = row
                .keys()
                .filter_map(|c| pivot_of_col.get(c).copied())
                .collect();

            while let Some(pi) = pending.pop_first() {
                let pivot = &pivots[pi];
                let Some(factor) = row.get(&pivot.col).cloned() else {
                    continue;
                };
                // Pivot rows are normalised to a unit pivot coefficient.
                for (col, pc) in &pivot.row {
                    let entry = row.entry(*col).or_insert_with(Rational::zero);
                    *entry -= &factor * pc;
                    if entry.is_zero() {
                        row.remove(col);
                    } else if let Some(&other) = pivot_of_col.get(col) {
                        if other != pi {
                            pending.insert(other);
                        }
                    }
                }
                rhs -= &factor * &pivot.rhs;
            }

            if row.is_empty() {
                if !rhs.is_zero() {
                    return Solution::Inconsistent { row: ri };
                }
                continue;
            }

            // Markowitz-style choice: the column touching the fewest input rows.
            let col = *row
                .keys()
                .min_by_key(|c| (col_count[**c], **c))
                .expect("row is nonempty");
            let inv = Rational::one() / &row[&col];
            for v in row.values_mut() {
                *v *= &inv;
            }
            rhs *= &inv;
            pivot_of_col.insert(col, pivots.len());
            pivots.push(Pivot { col, row, rhs });
        }

        let mut x = vec![Rational::zero(); self.ncols];
        for pivot in pivots.iter().rev() {
            let mut v = pivot.rhs.clone();
            for (col, c) in &pivot.row {
                if *col != pivot.col && !x[*col].is_zero() {
                    v -= c * &x[*col];
                }
            }
            x[pivot.col] = v;
        }
        Solution::Feasible(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, rat_frac};

    fn check(sys: &SparseSystem, x: &[Rational]) -> bool {
        sys.rows.iter().all(|(row, rhs)| {
            let lhs = row
                .iter()
                .fold(Rational::zero(), |acc, (c, a)| acc + a * &x[*c]);
            &lhs == rhs
        })
    }

    #[test]
    fn solves_small_system() {
        let mut sys = SparseSystem::new(3);
        sys.push_row([(0, rat(1)), (1, rat(2))], rat(5));
        sys.push_row([(1, rat(3)), (2, rat(-1))], rat(1));
        sys.push_row([(0, rat(2)), (2, rat(3))], rat(4));
        match sys.solve() {
            Solution::Feasible(x) => {
                assert!(check(&sys, &x));
                assert_eq!(x, vec![rat_frac(31, 5), rat_frac(-3, 5), rat_frac(-14, 5)]);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn detects_inconsistency() {
        let mut sys = SparseSystem::new(2);
        sys.push_row([(0, rat(1)), (1, rat(1))], rat(1));
        sys.push_row([(0, rat(2)), (1, rat(2))], rat(3));
        assert!(matches!(sys.solve(), Solution::Inconsistent { .. }));
    }

    #[test]
    fn underdetermined_sets_free_columns_to_zero() {
        let mut sys = SparseSystem::new(4);
        sys.push_row([(0, rat(1)), (3, rat(1))], rat(2));
        sys.push_row([(0, rat(1)), (3, rat(1))], rat(2));
        let Solution::Feasible(x) = sys.solve() else {
            panic!("feasible")
        };
        assert!(check(&sys, &x));
        assert_eq!(x.iter().filter(|v| !v.is_zero()).count(), 1);
    }

    #[test]
    fn chained_pivots_reduce_fully() {
        // A bidiagonal chain forces repeated re-reduction through later pivots.
        let n = 30;
        let mut sys = SparseSystem::new(n);
        for i in 0..n - 1 {
            sys.push_row([(i, rat(1)), (i + 1, rat(-1))], rat(1));
        }
        sys.push_row((0..n).map(|i| (i, rat(1))), rat(0));
        let Solution::Feasible(x) = sys.solve() else {
            panic!("feasible")
        };
        assert!(check(&sys, &x));
    }
}
