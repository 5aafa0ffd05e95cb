//! Products `Z_a Z_bᵗ` of modular invariants and their decomposition.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::invariants::ModularInvariant;

type Q = Ratio<i128>;

/// `Z_a · Z_bᵗ`.
pub fn fuse(za: &IntMatrix, zb: &IntMatrix) -> Result<IntMatrix> {
    if za.rows() != zb.rows() || za.cols() != zb.cols() || !za.is_square() {
        return Err(Error::Dimension(format!(
            "cannot fuse {}x{} with {}x{}",
            za.rows(),
            za.cols(),
            zb.rows(),
            zb.cols()
        )));
    }
    za.checked_mul(&zb.transpose())
}

/// Unique coefficients `c` with `P = Σ c_i Z_i`, required to be nonnegative integers.
///
/// Solved exactly over the rationals on the entries of the invariants.
pub fn decompose(p: &IntMatrix, basis: &[ModularInvariant]) -> Result<Vec<i64>> {
    let k = basis.len();
    let len = p.entries().len();
    if basis.iter().any(|z| z.matrix().entries().len() != len) {
        return Err(Error::Dimension("basis and product sizes differ".into()));
    }
    // Augmented system, one row per matrix entry.
    let mut rows: Vec<Vec<Q>> = (0..len)
        .map(|e| {
            let mut r: Vec<Q> = basis
                .iter()
                .map(|z| Q::from_integer(z.matrix().entries()[e] as i128))
                .collect();
            r.push(Q::from_integer(p.entries()[e] as i128));
            r
        })
        .collect();
    for col in 0..k {
        let Some(r) = (col..len).find(|&r| rows[r][col] != Q::from_integer(0)) else {
            return Err(Error::Inconsistent(format!(
                "invariant {} is a combination of the others; decomposition is not unique",
                col + 1
            )));
        };
        rows.swap(col, r);
        let piv = rows[col][col];
        for x in rows[col].iter_mut() {
            *x /= piv;
        }
        let prow = rows[col].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != col && row[col] != Q::from_integer(0) {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= f * y;
                }
            }
        }
    }
    if let Some(r) = rows[k..].iter().find(|r| r[k] != Q::from_integer(0)) {
        return Err(Error::NotSpanned(format!("nonzero residual {}", r[k])));
    }
    let coeffs: Vec<Q> = (0..k).map(|i| rows[i][k]).collect();
    if coeffs.iter().any(|c| !c.is_integer() || *c < Q::from_integer(0)) {
        return Err(Error::FusionViolation {
            coefficients: coeffs.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(coeffs.iter().map(|c| c.to_integer() as i64).collect())
}

/// `table[a][b] = decompose(fuse(Z_a, Z_b))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionTable {
    pub names: Vec<String>,
    pub cells: Vec<Vec<Vec<i64>>>,
}

impl FusionTable {
    /// A cell as a sum of named invariants, e.g. `2Z3` or `Z2+Z3`.
    pub fn render_cell(&self, a: usize, b: usize) -> String {
        render_combination(&self.cells[a][b], &self.names)
    }
}

pub fn render_combination(coeffs: &[i64], names: &[String]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(names)
        .filter(|(c, _)| **c != 0)
        .map(|(c, n)| if *c == 1 { n.clone() } else { format!("{c}{n}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub fn fusion_table(basis: &[ModularInvariant], names: &[String]) -> Result<FusionTable> {
    if names.len() != basis.len() {
        return Err(Error::Dimension("one name per invariant is required".into()));
    }
    let k = basis.len();
    let cells = (0..k)
        .into_par_iter()
        .map(|a| {
            (0..k)
                .map(|b| decompose(&fuse(basis[a].matrix(), basis[b].matrix())?, basis))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FusionTable {
        names: names.to_vec(),
        cells,
    })
}
