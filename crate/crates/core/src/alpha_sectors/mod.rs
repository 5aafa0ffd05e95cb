//! Alpha-induction sector arithmetic driven by a dual canonical object θ.

mod factorize;
mod full;
mod words;

pub use factorize::{gram_factorize, gram_factorize_with_limit, BranchingMatrix, DEFAULT_FACTOR_LIMIT};
pub use full::{fusion_graph, full_system, FullSystem, FusionGraph, Sector, SectorBlock};
pub use words::{gamma_pairing, system_counts, word_gamma_pairing, word_pair, SectorWord, SystemCounts};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::invariants::ModularInvariant;
use crate::modular_data::{FusionRing, ModularData};
use crate::scalars::{Real, ToleranceConfig};

/// Multiset `θ = ⊕ m_λ λ` with `m_0 = 1`, closed under conjugation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalObject {
    mult: Vec<u32>,
}

impl CanonicalObject {
    pub fn new(mult: Vec<u32>, fr: &FusionRing) -> Result<Self> {
        if mult.len() != fr.rank() {
            return Err(Error::InvalidTheta(format!(
                "{} multiplicities for {} labels",
                mult.len(),
                fr.rank()
            )));
        }
        if mult[0] != 1 {
            return Err(Error::InvalidTheta(format!(
                "vacuum multiplicity is {}, expected 1",
                mult[0]
            )));
        }
        if let Some(l) = (0..mult.len()).find(|&l| mult[l] != mult[fr.conj(l)]) {
            return Err(Error::InvalidTheta(format!(
                "label {l} and its conjugate {} have different multiplicities",
                fr.conj(l)
            )));
        }
        Ok(CanonicalObject { mult })
    }

    /// From a list of labels, repeated labels counting with multiplicity.
    pub fn from_labels(labels: &[usize], fr: &FusionRing) -> Result<Self> {
        let mut mult = vec![0u32; fr.rank()];
        for &l in labels {
            *mult
                .get_mut(l)
                .ok_or_else(|| Error::InvalidTheta(format!("unknown label {l}")))? += 1;
        }
        Self::new(mult, fr)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn m(&self, l: usize) -> u32 {
        self.mult[l]
    }

    /// Labels with multiplicity, ascending.
    pub fn labels(&self) -> Vec<usize> {
        self.mult
            .iter()
            .enumerate()
            .flat_map(|(l, &m)| std::iter::repeat_n(l, m as usize))
            .collect()
    }

    /// `d_θ = Σ m_λ d_λ`.
    pub fn dimension(&self, dims: &[Real]) -> Real {
        let p = dims[0].precision();
        self.mult
            .iter()
            .zip(dims)
            .fold(Real::zero(p), |acc, (&m, d)| acc + Real::from_u64(m as u64, p) * d)
    }
}

/// Reads θ off the vacuum column `Z_{λ0}`. Only meaningful for type I invariants.
pub fn theta_from_vacuum_column(z: &IntMatrix, fr: &FusionRing) -> Result<CanonicalObject> {
    let mult = (0..z.rows())
        .map(|l| u32::try_from(z.get(l, 0)).map_err(|_| Error::InvalidTheta("negative entry".into())))
        .collect::<Result<Vec<_>>>()?;
    CanonicalObject::new(mult, fr)
}

/// `G_{λμ} = Σ_τ m_τ N_{τλ}^μ = ⟨ιλ, ιμ⟩`.
pub fn iota_gram(theta: &CanonicalObject, fr: &FusionRing) -> IntMatrix {
    let n = fr.rank();
    IntMatrix::from_fn(n, n, |l, m| {
        (0..n)
            .map(|t| theta.m(t) as i64 * fr.coeff(t, l, m) as i64)
            .sum()
    })
}

/// The invariant whose trace equals the number of irreducible `ιλ` pieces.
///
/// Ties are broken by requiring the vacuum column to equal θ.
pub fn match_invariant(
    theta: &CanonicalObject,
    fr: &FusionRing,
    invariants: &[ModularInvariant],
) -> Result<ModularInvariant> {
    let facts = gram_factorize(&iota_gram(theta, fr))?;
    let counts: std::collections::BTreeSet<usize> = facts.iter().map(BranchingMatrix::rows).collect();
    if counts.len() != 1 {
        return Err(Error::AmbiguousMatch(format!(
            "Gram factorizations disagree on the sector count: {counts:?}"
        )));
    }
    let rows = *counts.iter().next().expect("nonempty") as i64;
    let mut cands: Vec<&ModularInvariant> = invariants.iter().filter(|z| z.trace() == rows).collect();
    if cands.len() > 1 {
        cands.retain(|z| (0..fr.rank()).all(|l| z.get(l, 0) == theta.m(l) as i64));
    }
    match cands.as_slice() {
        [z] => Ok((*z).clone()),
        [] => Err(Error::NoMatch(format!("no invariant has trace {rows}"))),
        _ => Err(Error::AmbiguousMatch(format!(
            "{} invariants have trace {rows} and vacuum column θ",
            cands.len()
        ))),
    }
}

/// `Z_{λμ} = Σ_τ b_{τλ} b_{τμ}`.
pub fn type_one_invariant(b: &BranchingMatrix) -> IntMatrix {
    b.gram()
}

/// Branchings `b` with `bᵗb = Z`; none means `Z` is not of type I.
pub fn factor_type_one(z: &ModularInvariant) -> Result<Vec<BranchingMatrix>> {
    if !z.flags().symmetric {
        return Err(Error::NoFactorization("type I invariants are symmetric".into()));
    }
    gram_factorize(z.matrix())
}

/// `Z_{λμ} = Σ_τ b_{τλ} b_{ϑ(τ)μ}` for a row permutation `ϑ` fixing the vacuum row.
pub fn type_two_invariant(
    b: &BranchingMatrix,
    twist: &[usize],
    md: &ModularData,
    tol: &ToleranceConfig,
) -> Result<ModularInvariant> {
    let r = b.rows();
    let mut seen = vec![false; r];
    if twist.len() != r || twist.iter().any(|&t| t >= r || std::mem::replace(&mut seen[t], true)) {
        return Err(Error::IncompatibleTwist(format!(
            "twist is not a permutation of {r} rows"
        )));
    }
    if let Some(v) = b.vacuum_row() {
        if twist[v] != v {
            return Err(Error::IncompatibleTwist("twist moves the vacuum row".into()));
        }
    }
    let n = b.matrix().cols();
    let z = IntMatrix::from_fn(n, n, |l, m| {
        (0..r).map(|t| b.matrix().get(t, l) * b.matrix().get(twist[t], m)).sum()
    });
    ModularInvariant::new(z, md, tol).map_err(|e| Error::IncompatibleTwist(e.to_string()))
}

/// `Σ_τ ((Σ_λ b_{τλ} d_λ)/d_θ)²`, the global index of the extended system.
pub fn extended_global_index(b: &BranchingMatrix, dims: &[Real], d_theta: &Real) -> Real {
    let p = d_theta.precision();
    let mut acc = Real::zero(p);
    for t in 0..b.rows() {
        let mut d = Real::zero(p);
        for (l, &x) in b.row(t).iter().enumerate() {
            if x != 0 {
                d = d + Real::from_i64(x, p) * &dims[l];
            }
        }
        acc = acc + (d / d_theta).square();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::catalog::builtin_su2;
    use crate::invariants::{commutant_basis, enumerate_invariants, EnumerateOptions};
    use crate::modular_data::verlinde;

    fn z2_ring() -> FusionRing {
        FusionRing::from_coefficients(vec![
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![0, 1], vec![1, 0]],
        ])
        .unwrap()
    }

    #[test]
    fn theta_validation() {
        let fr = z2_ring();
        assert!(CanonicalObject::new(vec![0, 1], &fr).is_err());
        assert!(CanonicalObject::from_labels(&[0, 5], &fr).is_err());
        let th = CanonicalObject::from_labels(&[0, 1], &fr).unwrap();
        assert_eq!(th.labels(), vec![0, 1]);
    }

    #[test]
    fn trivial_theta_gives_identity_gram() {
        let fr = z2_ring();
        let th = CanonicalObject::from_labels(&[0], &fr).unwrap();
        assert_eq!(iota_gram(&th, &fr), IntMatrix::identity(2));
        let th = CanonicalObject::from_labels(&[0, 1], &fr).unwrap();
        let g = iota_gram(&th, &fr);
        assert_eq!(g.to_rows(), vec![vec![1, 1], vec![1, 1]]);
        let f = gram_factorize(&g).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].rows(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn iota_gram_is_symmetric_with_unit_vacuum(k in 1u32..=10, extra in prop::collection::vec(0u32..3, 12)) {
            let tol = ToleranceConfig::default();
            let md = builtin_su2(k, &tol).unwrap();
            let fr = verlinde(&md, &tol).unwrap();
            let mut mult = vec![1u32];
            mult.extend(extra.iter().take(fr.rank() - 1));
            let th = CanonicalObject::new(mult, &fr).unwrap();
            let g = iota_gram(&th, &fr);
            prop_assert!(g.is_symmetric());
            prop_assert!(g.is_nonnegative());
            prop_assert_eq!(g.get(0, 0), 1);
        }

        #[test]
        fn iota_gram_of_a_type_one_vacuum_column_is_psd(k in 1u32..=12) {
            let tol = ToleranceConfig::default();
            let md = builtin_su2(k, &tol).unwrap();
            let fr = verlinde(&md, &tol).unwrap();
            let basis = commutant_basis(&md, &tol).unwrap();
            let zs = enumerate_invariants(&md, &basis, EnumerateOptions::default(), &tol).unwrap();
            for z in zs.iter().filter(|z| factor_type_one(z).is_ok()) {
                let th = theta_from_vacuum_column(z.matrix(), &fr).unwrap();
                let g = iota_gram(&th, &fr);
                let n = fr.rank();
                for a in 0..n {
                    for b in 0..n {
                        prop_assert!(g.get(a, a) + g.get(b, b) >= 2 * g.get(a, b));
                    }
                }
            }
        }
    }
}
