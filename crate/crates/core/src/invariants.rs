//! The commutant of (S, T) and enumeration of modular invariants inside it.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::linalg::{jacobi_eigen, solve, RMatrix};
use crate::modular_data::{quantum_dims, ModularData};
use crate::scalars::{BigComplex, Real, ToleranceConfig};

/// Largest pivot box that will be scanned.
pub const MAX_BOX: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantFlags {
    pub normalized: bool,
    pub symmetric: bool,
    pub vacuum_symmetric: bool,
    pub permutation: bool,
}

pub fn classify(z: &IntMatrix) -> InvariantFlags {
    let n = z.rows();
    InvariantFlags {
        normalized: n > 0 && z.get(0, 0) == 1,
        symmetric: z.is_symmetric(),
        vacuum_symmetric: (0..n).all(|l| z.get(0, l) == z.get(l, 0)),
        permutation: z.is_permutation(),
    }
}

/// Nonnegative integer matrix commuting with S and T.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ModularInvariant {
    z: IntMatrix,
    flags: InvariantFlags,
    trace: i64,
}

impl ModularInvariant {
    /// Wraps `z` after checking nonnegativity and commutation with S and T.
    pub fn new(z: IntMatrix, md: &ModularData, tol: &ToleranceConfig) -> Result<Self> {
        if z.rows() != md.rank() || !z.is_square() {
            return Err(Error::Dimension(format!(
                "invariant is {}x{}, data has rank {}",
                z.rows(),
                z.cols(),
                md.rank()
            )));
        }
        if !z.is_nonnegative() {
            return Err(Error::Inconsistent("invariant has a negative entry".into()));
        }
        let res = commutation_residual(&z, md);
        if res > tol.validation_eps {
            return Err(Error::Inconsistent(format!(
                "matrix does not commute with S and T (residual {res:.3e})"
            )));
        }
        Ok(Self::trusted(z))
    }

    pub(crate) fn trusted(z: IntMatrix) -> Self {
        let flags = classify(&z);
        let trace = z.trace();
        ModularInvariant { z, flags, trace }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.z
    }

    pub fn flags(&self) -> InvariantFlags {
        self.flags
    }

    pub fn trace(&self) -> i64 {
        self.trace
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.z.get(i, j)
    }
}

/// `max(|ZS − SZ|, |ZT − TZ|)` entrywise.
pub fn commutation_residual(z: &IntMatrix, md: &ModularData) -> f64 {
    let n = md.rank();
    let p = md.precision();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut worst = 0.0f64;
            for j in 0..n {
                let mut zs = BigComplex::zero(p);
                let mut sz = BigComplex::zero(p);
                for k in 0..n {
                    let a = z.get(i, k);
                    if a != 0 {
                        zs = &zs + &md.s(k, j).scale(&Real::from_i64(a, p));
                    }
                    let b = z.get(k, j);
                    if b != 0 {
                        sz = &sz + &md.s(i, k).scale(&Real::from_i64(b, p));
                    }
                }
                worst = worst.max(zs.dist(&sz));
                let zij = z.get(i, j);
                if zij != 0 {
                    let dt = (md.t(j) - md.t(i)).abs().to_f64() * zij as f64;
                    worst = worst.max(dt);
                }
            }
            worst
        })
        .collect();
    rows.into_iter().fold(0.0, f64::max)
}

/// Orthonormal real basis of the commutant with pivot coordinates.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    n: usize,
    /// Positions `(λ, μ)` with `T_λ = T_μ`; all other entries of the commutant vanish.
    unknowns: Vec<(usize, usize)>,
    /// Basis vectors over `unknowns`.
    vectors: Vec<Vec<Real>>,
    pivots: Vec<(usize, usize)>,
    confirmed_at: Option<usize>,
}

impl CommutantBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn rank_n(&self) -> usize {
        self.n
    }

    pub fn pivots(&self) -> &[(usize, usize)] {
        &self.pivots
    }

    /// Precision at which the dimension was independently confirmed, if any.
    pub fn confirmed_at(&self) -> Option<usize> {
        self.confirmed_at
    }

    /// Basis element `k` as an n×n matrix of `f64`.
    pub fn matrix_f64(&self, k: usize) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for (u, &(a, b)) in self.unknowns.iter().enumerate() {
            m[a][b] = self.vectors[k][u].to_f64();
        }
        m
    }
}

struct Nullspace {
    unknowns: Vec<(usize, usize)>,
    vectors: Vec<Vec<Real>>,
}

fn nullspace(md: &ModularData, tol: &ToleranceConfig) -> Result<Nullspace> {
    let n = md.rank();
    let p = md.precision();
    let ev = tol.validation_eps;
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| md.t(a).dist(md.t(b)) <= ev)
        .collect();
    let u = unknowns.len();
    // (ZS − SZ)_{ij} = Σ_b Z_{ib} S_{bj} − Σ_a S_{ia} Z_{aj}, split into real and imaginary rows.
    let rows: Vec<Vec<Real>> = (0..n * n)
        .into_par_iter()
        .flat_map_iter(|ij| {
            let (i, j) = (ij / n, ij % n);
            let mut row = vec![BigComplex::zero(p); u];
            for (k, &(a, b)) in unknowns.iter().enumerate() {
                if a == i {
                    row[k] = &row[k] + md.s(b, j);
                }
                if b == j {
                    row[k] = &row[k] - md.s(i, a);
                }
            }
            let re = row.iter().map(|z| z.re.clone()).collect::<Vec<_>>();
            let im = row.into_iter().map(|z| z.im).collect::<Vec<_>>();
            [re, im]
        })
        .collect();
    let a = RMatrix::from_rows(rows);
    let (eig, v) = jacobi_eigen(&a.gram());
    let mut vectors = Vec::new();
    for (k, lam) in eig.iter().enumerate() {
        let sigma = lam.abs().sqrt().to_f64();
        if sigma <= ev {
            vectors.push((0..u).map(|r| v.get(r, k).clone()).collect());
        } else if sigma <= 1e6 * ev {
            return Err(Error::RankInstability(format!(
                "singular value {sigma:.3e} lies inside the gap ({ev:.1e}, {:.1e}]",
                1e6 * ev
            )));
        }
    }
    Ok(Nullspace { unknowns, vectors })
}

/// Real basis of `{Z : ZS = SZ, ZT = TZ}`, rank confirmed at twice the precision.
pub fn commutant_basis(md: &ModularData, tol: &ToleranceConfig) -> Result<CommutantBasis> {
    tol.check()?;
    let ns = nullspace(md, tol)?;
    let confirmed_at = match md.source() {
        Some(_) => {
            let hi = tol.with_precision(2 * tol.precision);
            let check = nullspace(&md.at_precision(&hi)?, &hi)?;
            if check.vectors.len() != ns.vectors.len() || check.unknowns != ns.unknowns {
                return Err(Error::RankInstability(format!(
                    "dimension {} at {} bits but {} at {} bits",
                    ns.vectors.len(),
                    tol.precision,
                    check.vectors.len(),
                    hi.precision
                )));
            }
            Some(hi.precision)
        }
        None => None,
    };
    let d: Vec<f64> = quantum_dims(md).iter().map(Real::to_f64).collect();
    let pivots = choose_pivots(&ns, &d);
    Ok(CommutantBasis {
        n: md.rank(),
        unknowns: ns.unknowns,
        vectors: ns.vectors,
        pivots,
        confirmed_at,
    })
}

/// Greedy column pivoting on the basis restricted to each unknown, vacuum first.
fn choose_pivots(ns: &Nullspace, d: &[f64]) -> Vec<(usize, usize)> {
    let m = ns.vectors.len();
    let u = ns.unknowns.len();
    let mut cols: Vec<Vec<f64>> = (0..u)
        .map(|c| ns.vectors.iter().map(|v| v[c].to_f64()).collect())
        .collect();
    let norm = |c: &[f64]| c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    for step in 0..m {
        let vac = ns.unknowns.iter().position(|&p| p == (0, 0));
        let pick = match vac {
            Some(v) if step == 0 && norm(&cols[v]) > 1e-8 => v,
            _ => (0..u)
                .filter(|c| !chosen.contains(c))
                .max_by(|&x, &y| {
                    let (nx, ny) = (norm(&cols[x]), norm(&cols[y]));
                    if (nx - ny).abs() > 1e-9 * nx.max(ny) {
                        return nx.total_cmp(&ny);
                    }
                    let bound = |c: usize| {
                        let (a, b) = ns.unknowns[c];
                        d[a] * d[b]
                    };
                    // Smaller box wins a tie, then the earlier position.
                    bound(y).total_cmp(&bound(x)).then(y.cmp(&x))
                })
                .expect("pivot candidates"),
        };
        chosen.push(pick);
        let nv = norm(&cols[pick]);
        let q: Vec<f64> = cols[pick].iter().map(|x| x / nv).collect();
        for c in cols.iter_mut() {
            let dot: f64 = c.iter().zip(&q).map(|(a, b)| a * b).sum();
            for (x, y) in c.iter_mut().zip(&q) {
                *x -= dot * y;
            }
        }
    }
    chosen.into_iter().map(|c| ns.unknowns[c]).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    pub normalized: bool,
    pub max_vacuum: u32,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            normalized: true,
            max_vacuum: 3,
        }
    }
}

/// Every invariant in the commutant within the bounds, in canonical order.
///
/// Bounds are `0 ≤ Z_{λμ} ≤ max(Z₀₀, 1)·d_λd_μ`, with `Z₀₀ = 1` when normalized
/// and `0 ≤ Z₀₀ ≤ max_vacuum`, `Z ≠ 0` otherwise.
pub fn enumerate_invariants(
    md: &ModularData,
    basis: &CommutantBasis,
    opts: EnumerateOptions,
    tol: &ToleranceConfig,
) -> Result<Vec<ModularInvariant>> {
    let n = md.rank();
    let p = md.precision();
    let m = basis.dim();
    if m == 0 {
        return Ok(Vec::new());
    }
    let u = basis.unknowns.len();
    let dims = quantum_dims(md);
    let vac_max: i64 = if opts.normalized { 1 } else { opts.max_vacuum.max(1) as i64 };
    let vac_min: i64 = if opts.normalized { 1 } else { 0 };

    // Bounds for every unknown at the loosest admissible Z00.
    let eps = Real::from_f64(tol.snap_eps, p);
    let bound_at = |(a, b): (usize, usize), z00: i64| -> i64 {
        let x = &dims[a] * &dims[b] * Real::from_i64(z00, p) + &eps;
        x.floor_i64().unwrap_or(i64::MAX)
    };
    let mut ranges: Vec<(i64, i64)> = basis
        .pivots
        .iter()
        .map(|&pos| {
            if pos == (0, 0) {
                (vac_min, vac_max)
            } else {
                (0, bound_at(pos, vac_max))
            }
        })
        .collect();
    for r in ranges.iter_mut() {
        r.1 = r.1.max(r.0 - 1);
    }
    let size = ranges
        .iter()
        .try_fold(1u128, |acc, r| acc.checked_mul((r.1 - r.0 + 1).max(0) as u128))
        .unwrap_or(u128::MAX);
    if size > MAX_BOX {
        return Err(Error::BoxOverflow {
            size,
            limit: MAX_BOX,
        });
    }

    // R = Bᵀ (Qᵀ)⁻¹ maps pivot values to all unknowns.
    let piv_idx: Vec<usize> = basis
        .pivots
        .iter()
        .map(|pp| basis.unknowns.iter().position(|q| q == pp).expect("pivot is an unknown"))
        .collect();
    let mut qt = RMatrix::zeros(m, m, p);
    for (j, &c) in piv_idx.iter().enumerate() {
        for i in 0..m {
            qt.set(j, i, basis.vectors[i][c].clone());
        }
    }
    let mut ident = RMatrix::zeros(m, m, p);
    for i in 0..m {
        ident.set(i, i, Real::one(p));
    }
    let qinv_t = solve(&qt, &ident, &Real::from_f64(1e-30, p)).map_err(|_| {
        Error::RankInstability("pivot submatrix is singular".into())
    })?;
    let recon: Vec<Vec<Real>> = (0..u)
        .map(|r| {
            (0..m)
                .map(|k| {
                    let mut acc = Real::zero(p);
                    for i in 0..m {
                        acc = acc + &basis.vectors[i][r] * qinv_t.get(i, k);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let recon_f64: Vec<Vec<f64>> = recon
        .iter()
        .map(|row| row.iter().map(Real::to_f64).collect())
        .collect();
    let bounds_f64: Vec<f64> = basis
        .unknowns
        .iter()
        .map(|&(a, b)| dims[a].to_f64() * dims[b].to_f64())
        .collect();
    let vac_idx = basis.unknowns.iter().position(|&q| q == (0, 0));

    let radices: Vec<u128> = ranges.iter().map(|r| (r.1 - r.0 + 1) as u128).collect();
    let candidates: Vec<Vec<i64>> = (0..size as u64)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut x = Vec::with_capacity(m);
            for (k, &rad) in radices.iter().enumerate() {
                x.push(ranges[k].0 + (idx % rad as u64) as i64);
                idx /= rad as u64;
            }
            let vals: Vec<f64> = recon_f64
                .iter()
                .map(|row| row.iter().zip(&x).map(|(r, &xi)| r * xi as f64).sum())
                .collect();
            let z00 = vac_idx.map_or(0.0, |v| vals[v]).round();
            if z00 < vac_min as f64 || z00 > vac_max as f64 {
                return None;
            }
            let ok = vals.iter().zip(&bounds_f64).all(|(&v, &bd)| {
                (v - v.round()).abs() < 1e-6 && v > -1e-6 && v < z00.max(1.0) * bd + 1e-6
            });
            ok.then_some(x)
        })
        .collect();

    let confirmed: Vec<Option<IntMatrix>> = candidates
        .par_iter()
        .map(|x| confirm(x, &recon, basis, &dims, tol, p, n, vac_min, vac_max, md))
        .collect::<Result<Vec<_>>>()?;
    let set: BTreeSet<IntMatrix> = confirmed.into_iter().flatten().collect();
    let mut out: Vec<ModularInvariant> = set.into_iter().map(ModularInvariant::trusted).collect();
    out.sort_by(|a, b| b.trace.cmp(&a.trace).then_with(|| a.z.entries().cmp(b.z.entries())));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn confirm(
    x: &[i64],
    recon: &[Vec<Real>],
    basis: &CommutantBasis,
    dims: &[Real],
    tol: &ToleranceConfig,
    p: usize,
    n: usize,
    vac_min: i64,
    vac_max: i64,
    md: &ModularData,
) -> Result<Option<IntMatrix>> {
    let eps = Real::from_f64(tol.snap_eps, p);
    let ev = Real::from_f64(tol.validation_eps, p);
    let mut z = IntMatrix::zeros(n, n);
    for (row, &(a, b)) in recon.iter().zip(&basis.unknowns) {
        let mut v = Real::zero(p);
        for (r, &xi) in row.iter().zip(x) {
            if xi != 0 {
                v = v + r * &Real::from_i64(xi, p);
            }
        }
        let Some(k) = v.round_i64() else { return Ok(None) };
        let dist = (&v - &Real::from_i64(k, p)).abs();
        if dist > ev {
            return Ok(None);
        }
        if dist > eps {
            return Err(Error::SnapAmbiguity(format!(
                "entry ({a},{b}) is {:.3e} from {k}, between the snap and validation tolerances",
                dist.to_f64()
            )));
        }
        z.set(a, b, k);
    }
    let z00 = z.get(0, 0);
    if z00 < vac_min || z00 > vac_max || !z.is_nonnegative() || z.entries().iter().all(|&e| e == 0) {
        return Ok(None);
    }
    for &(a, b) in &basis.unknowns {
        let bound = &dims[a] * &dims[b] * Real::from_i64(z00.max(1), p) + &eps;
        if Real::from_i64(z.get(a, b), p) > bound {
            return Ok(None);
        }
    }
    if commutation_residual(&z, md) > tol.validation_eps {
        return Ok(None);
    }
    Ok(Some(z))
}

/// Names `Z1, Z2, …` in list order.
pub fn invariant_names(list: &[ModularInvariant]) -> Vec<String> {
    (1..=list.len()).map(|i| format!("Z{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_su2;
    use crate::modular_data::ModularSource;
    use crate::scalars::ScalarExpr;

    #[test]
    fn one_primary() {
        let tol = ToleranceConfig::default();
        let one = ScalarExpr::Int(1);
        let md = ModularData::from_source(
            "trivial",
            vec!["0".into()],
            ModularSource {
                s: vec![vec![one.clone()]],
                t: vec![one],
            },
            &tol,
        )
        .unwrap();
        let b = commutant_basis(&md, &tol).unwrap();
        assert_eq!(b.dim(), 1);
        assert!((b.matrix_f64(0)[0][0].abs() - 1.0).abs() < 1e-15);
        let inv = enumerate_invariants(&md, &b, EnumerateOptions::default(), &tol).unwrap();
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].matrix(), &IntMatrix::identity(1));
    }

    #[test]
    fn su2_small_levels() {
        let tol = ToleranceConfig::default();
        for k in 1..=6 {
            let md = builtin_su2(k, &tol).unwrap();
            let b = commutant_basis(&md, &tol).unwrap();
            let inv = enumerate_invariants(&md, &b, EnumerateOptions::default(), &tol).unwrap();
            // D-series invariants appear at k = 4 and k = 6.
            let expect = if k == 4 || k == 6 { 2 } else { 1 };
            assert_eq!(inv.len(), expect, "k={k}");
            assert_eq!(inv[0].matrix(), &IntMatrix::identity(k as usize + 1));
        }
    }

    #[test]
    fn flags() {
        let f = classify(&IntMatrix::identity(3).scale(2));
        assert!(!f.normalized && f.symmetric && !f.permutation);
        let f = classify(&IntMatrix::permutation(&[0, 2, 1]));
        assert!(f.normalized && f.permutation && f.vacuum_symmetric);
    }

    #[test]
    fn rejects_non_invariants() {
        let tol = ToleranceConfig::default();
        let md = builtin_su2(2, &tol).unwrap();
        let z = IntMatrix::permutation(&[2, 1, 0]);
        assert!(ModularInvariant::new(z, &md, &tol).is_err());
        assert!(ModularInvariant::new(IntMatrix::identity(3), &md, &tol).is_ok());
    }
}
