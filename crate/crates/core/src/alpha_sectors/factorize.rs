use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Default cap on distinct factorizations before the search gives up.
pub const DEFAULT_FACTOR_LIMIT: usize = 10_000;

/// Nonnegative integer branching coefficients `b_{τλ}`, rows in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BranchingMatrix {
    b: IntMatrix,
    vacuum_row: Option<usize>,
}

impl BranchingMatrix {
    /// Sorts rows lexicographically descending; zero rows are rejected.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let mut rows = rows;
        if rows.iter().any(|r| r.iter().all(|&x| x == 0)) {
            return Err(Error::Inconsistent("branching matrix has a zero row".into()));
        }
        if rows.iter().flatten().any(|&x| x < 0) {
            return Err(Error::Inconsistent("branching matrix has a negative entry".into()));
        }
        rows.sort_by(|a, b| b.cmp(a));
        let b = IntMatrix::from_rows(rows)?;
        let vacuum_row = (0..b.rows()).find(|&r| b.get(r, 0) > 0);
        Ok(BranchingMatrix { b, vacuum_row })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.b.rows()
    }

    pub fn row(&self, i: usize) -> &[i64] {
        self.b.row(i)
    }

    /// Row meeting the vacuum column, if any.
    pub fn vacuum_row(&self) -> Option<usize> {
        self.vacuum_row
    }

    /// `bᵗb`.
    pub fn gram(&self) -> IntMatrix {
        &self.b.transpose() * &self.b
    }
}

/// Every factorization `G = bᵗb` with nonnegative integer rows, up to row order.
pub fn gram_factorize(g: &IntMatrix) -> Result<Vec<BranchingMatrix>> {
    gram_factorize_with_limit(g, DEFAULT_FACTOR_LIMIT)
}

pub fn gram_factorize_with_limit(g: &IntMatrix, limit: usize) -> Result<Vec<BranchingMatrix>> {
    let n = g.rows();
    if !g.is_symmetric() {
        return Err(Error::NoFactorization("Gram matrix is not symmetric".into()));
    }
    if !g.is_nonnegative() {
        return Err(Error::NoFactorization("Gram matrix has a negative entry".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| (g.get(c, c), c));
    let mut search = Search {
        g,
        order,
        rows: Vec::new(),
        found: BTreeSet::new(),
        limit,
        overflow: false,
    };
    search.column(0);
    if search.overflow {
        return Err(Error::Factorization(format!(
            "more than {limit} distinct factorizations"
        )));
    }
    if search.found.is_empty() {
        return Err(Error::NoFactorization(
            "no nonnegative integer rows reproduce the Gram matrix".into(),
        ));
    }
    search
        .found
        .into_iter()
        .map(BranchingMatrix::new)
        .collect()
}

struct Search<'a> {
    g: &'a IntMatrix,
    order: Vec<usize>,
    rows: Vec<Vec<i64>>,
    found: BTreeSet<Vec<Vec<i64>>>,
    limit: usize,
    overflow: bool,
}

impl Search<'_> {
    fn column(&mut self, ci: usize) {
        if self.overflow {
            return;
        }
        if ci == self.order.len() {
            let mut rows = self.rows.clone();
            rows.sort_by(|a, b| b.cmp(a));
            self.found.insert(rows);
            if self.found.len() > self.limit {
                self.overflow = true;
            }
            return;
        }
        let c = self.order[ci];
        let acc = vec![0i64; ci];
        self.assign(ci, c, 0, acc, 0);
    }

    /// Chooses the entry of existing row `ri` in column `c`.
    fn assign(&mut self, ci: usize, c: usize, ri: usize, acc: Vec<i64>, sq: i64) {
        let diag = self.g.get(c, c);
        if ri == self.rows.len() {
            let prev = &self.order[..ci];
            if prev.iter().zip(&acc).any(|(&p, &a)| a != self.g.get(c, p)) {
                return;
            }
            self.new_rows(ci, c, diag - sq, i64::MAX);
            return;
        }
        // Rows identical on the columns fixed so far are interchangeable.
        let cap = if ri > 0 && self.same_prefix(ri - 1, ri, ci) {
            self.rows[ri - 1][c]
        } else {
            i64::MAX
        };
        let mut v = 0i64;
        while sq + v * v <= diag && v <= cap {
            let fits = self.order[..ci]
                .iter()
                .zip(&acc)
                .all(|(&p, &a)| a + v * self.rows[ri][p] <= self.g.get(c, p));
            if !fits {
                break;
            }
            let next: Vec<i64> = self.order[..ci]
                .iter()
                .zip(&acc)
                .map(|(&p, &a)| a + v * self.rows[ri][p])
                .collect();
            self.rows[ri][c] = v;
            self.assign(ci, c, ri + 1, next, sq + v * v);
            self.rows[ri][c] = 0;
            if self.overflow {
                return;
            }
            v += 1;
        }
    }

    fn same_prefix(&self, a: usize, b: usize, ci: usize) -> bool {
        self.order[..ci]
            .iter()
            .all(|&p| self.rows[a][p] == self.rows[b][p])
    }

    /// Splits the leftover diagonal `rem` into new rows, as squares in nonincreasing order.
    fn new_rows(&mut self, ci: usize, c: usize, rem: i64, max: i64) {
        if rem == 0 {
            self.column(ci + 1);
            return;
        }
        let mut v = isqrt(rem).min(max);
        while v >= 1 {
            let mut row = vec![0i64; self.g.rows()];
            row[c] = v;
            self.rows.push(row);
            self.new_rows(ci, c, rem - v * v, v);
            self.rows.pop();
            if self.overflow {
                return;
            }
            v -= 1;
        }
    }
}

fn isqrt(x: i64) -> i64 {
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factors_uniquely() {
        let f = gram_factorize(&IntMatrix::identity(4)).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].matrix(), &IntMatrix::identity(4));
        assert_eq!(f[0].vacuum_row(), Some(0));
    }

    #[test]
    fn multiple_factorizations_are_all_returned() {
        // 4 = 2² = 1²+1²+1²+1².
        let g = IntMatrix::from_rows(vec![vec![4]]).unwrap();
        let f = gram_factorize(&g).unwrap();
        let counts: Vec<usize> = f.iter().map(BranchingMatrix::rows).collect();
        assert_eq!(f.len(), 2);
        assert!(counts.contains(&1) && counts.contains(&4));
    }

    #[test]
    fn every_result_reproduces_the_gram_matrix() {
        let g = IntMatrix::from_rows(vec![
            vec![1, 0, 1],
            vec![0, 2, 1],
            vec![1, 1, 3],
        ])
        .unwrap();
        for b in gram_factorize(&g).unwrap() {
            assert_eq!(b.gram(), g);
        }
    }

    #[test]
    fn impossible_gram() {
        let g = IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(gram_factorize(&g), Err(Error::NoFactorization(_))));
    }

    #[test]
    fn limit_is_enforced() {
        let g = IntMatrix::identity(2).scale(9);
        assert!(matches!(
            gram_factorize_with_limit(&g, 1),
            Err(Error::Factorization(_))
        ));
    }
}
