use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::words::bilinear;
use super::{gram_factorize, iota_gram, system_counts, word_gamma_pairing, word_pair, CanonicalObject, SectorWord, SystemCounts};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::linalg::{solve, solve_f64, RMatrix};
use crate::modular_data::{global_index, quantum_dims, FusionRing, ModularData};
use crate::scalars::{Real, ToleranceConfig};

/// One irreducible subsector of the full system.
#[derive(Debug, Clone, Serialize)]
pub struct Sector {
    pub name: String,
    /// First word containing this sector.
    pub word: SectorWord,
    pub block: usize,
    /// Multiplicities in each word, then in γ.
    pub row: Vec<i64>,
    pub in_gamma: bool,
    pub plus: bool,
    pub minus: bool,
}

/// Irreducibles whose pairings with every word and with γ coincide.
///
/// Pairing data cannot tell the members apart, so fusion is resolved per block.
#[derive(Debug, Clone, Serialize)]
pub struct SectorBlock {
    pub name: String,
    pub members: Vec<usize>,
    #[serde(serialize_with = "ser_real")]
    pub dim: Real,
    pub sheet: usize,
    pub plus: bool,
    pub minus: bool,
}

impl SectorBlock {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

fn ser_real<S: serde::Serializer>(x: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(x.to_f64())
}

#[derive(Debug, Clone, Serialize)]
pub struct FullSystem {
    /// Distinct words, in the column order of `gram`.
    pub words: Vec<SectorWord>,
    /// Pairings of the words, bordered by γ in the last row and column.
    pub gram: IntMatrix,
    pub sectors: Vec<Sector>,
    pub blocks: Vec<SectorBlock>,
    /// Block indices of each sheet, in order of first block.
    pub sheets: Vec<Vec<usize>>,
    pub counts: SystemCounts,
    /// Failed consistency checks; empty on the paper's inputs.
    pub violations: Vec<String>,
    #[serde(skip)]
    z: IntMatrix,
    #[serde(skip)]
    iota: IntMatrix,
    #[serde(skip)]
    theta: Vec<i64>,
    #[serde(skip)]
    projector: Vec<Vec<f64>>,
    #[serde(skip)]
    unique_rows: IntMatrix,
}

impl FullSystem {
    pub fn irreducible_count(&self) -> usize {
        self.sectors.len()
    }

    /// Sectors of `C⁺`.
    pub fn chiral_plus(&self) -> Vec<usize> {
        (0..self.sectors.len()).filter(|&i| self.sectors[i].plus).collect()
    }

    /// Sectors of `C⁻`.
    pub fn chiral_minus(&self) -> Vec<usize> {
        (0..self.sectors.len()).filter(|&i| self.sectors[i].minus).collect()
    }

    /// Sectors of `C⁰ = C⁺ ∩ C⁻`.
    pub fn ambichiral(&self) -> Vec<usize> {
        (0..self.sectors.len())
            .filter(|&i| self.sectors[i].plus && self.sectors[i].minus)
            .collect()
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.name == name)
    }

    /// Block-level `⟨g·B, C⟩`, summed over the members of `B` and `C`.
    pub fn block_fusion(&self, g: &SectorWord, fr: &FusionRing) -> Result<IntMatrix> {
        let m = self.pairing_matrix(g, fr);
        let nb = self.blocks.len();
        let cols = self.words.len() + 1;
        let p = &self.projector;
        let mut out = IntMatrix::zeros(nb, nb);
        let mut worst = 0f64;
        for a in 0..nb {
            let pm: Vec<f64> = (0..cols)
                .map(|y| (0..cols).map(|x| p[a][x] * m.get(x, y) as f64).sum())
                .collect();
            for b in 0..nb {
                let v: f64 = (0..cols).map(|y| pm[y] * p[b][y]).sum();
                let r = v.round();
                worst = worst.max((v - r).abs());
                out.set(a, b, r as i64);
            }
        }
        let u = &self.unique_rows;
        let back = &(&u.transpose() * &out) * u;
        if worst > 1e-6 || back != m || !out.is_nonnegative() {
            return Err(Error::Inconsistent(format!(
                "fusion with {g} is not resolved at block level (rounding error {worst:.2e})"
            )));
        }
        Ok(out)
    }

    /// `M_{xy} = ⟨g·x, y⟩` over words and γ.
    fn pairing_matrix(&self, g: &SectorWord, fr: &FusionRing) -> IntMatrix {
        let k = self.words.len();
        let gbar = g.conj(fr);
        let labels: Vec<usize> = g.plus_labels().iter().chain(g.minus_labels()).copied().collect();
        let x = fr.product_vector(&labels);
        let gg = bilinear(&x, &self.iota, &self.theta);
        let rows: Vec<Vec<i64>> = (0..=k)
            .into_par_iter()
            .map(|a| {
                (0..=k)
                    .map(|b| match (a < k, b < k) {
                        (true, true) => word_pair(&g.compose(&self.words[a]), &self.words[b], fr, &self.z),
                        (true, false) => word_gamma_pairing(&g.compose(&self.words[a]), &self.iota, fr),
                        (false, true) => word_gamma_pairing(&gbar.compose(&self.words[b]), &self.iota, fr),
                        (false, false) => gg,
                    })
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(rows).expect("square")
    }
}

/// Irreducible decomposition of the full induced system of `Z` with dual canonical object θ.
pub fn full_system(
    z: &IntMatrix,
    theta: &CanonicalObject,
    md: &ModularData,
    fr: &FusionRing,
    tol: &ToleranceConfig,
) -> Result<FullSystem> {
    let n = fr.rank();
    if z.rows() != n || z.cols() != n {
        return Err(Error::Dimension(format!(
            "{}x{} invariant for {n} labels",
            z.rows(),
            z.cols()
        )));
    }
    let counts = system_counts(z, md)?;
    let mut candidates = vec![SectorWord::identity()];
    candidates.extend((1..n).map(SectorWord::plus));
    candidates.extend((1..n).map(SectorWord::minus));
    for m in 1..n {
        candidates.extend((1..n).map(|l| SectorWord::pair(l, m)));
    }
    let w = pair_matrix(&candidates, fr, z);
    let non_self_conj = |w: &SectorWord| {
        w.plus_labels()
            .iter()
            .chain(w.minus_labels())
            .filter(|&&l| fr.conj(l) != l)
            .count()
    };
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| {
        let c = &candidates[i];
        (
            w.get(i, i),
            non_self_conj(c),
            c.minus_labels().first().copied().unwrap_or(0),
            c.plus_labels().first().copied().unwrap_or(0),
        )
    });
    // Equal norms and a saturated inner product mean the same sector.
    let mut keep: Vec<usize> = Vec::new();
    // Whether a kept word, or one merged into it, is plus-only / minus-only.
    let mut chiral: Vec<(bool, bool)> = Vec::new();
    for &i in &order {
        if w.get(i, i) == 0 {
            continue;
        }
        let c = &candidates[i];
        let flags = (c.minus_labels().is_empty(), c.plus_labels().is_empty());
        match keep.iter().position(|&j| w.get(i, j) == w.get(i, i) && w.get(i, i) == w.get(j, j)) {
            Some(pos) => {
                chiral[pos].0 |= flags.0;
                chiral[pos].1 |= flags.1;
            }
            None => {
                keep.push(i);
                chiral.push(flags);
            }
        }
    }
    let words: Vec<SectorWord> = keep.iter().map(|&i| candidates[i].clone()).collect();
    let k = words.len();

    let iota = iota_gram(theta, fr);
    let theta_vec: Vec<i64> = theta.multiplicities().iter().map(|&m| m as i64).collect();
    let gram = IntMatrix::from_fn(k + 1, k + 1, |a, b| match (a < k, b < k) {
        (true, true) => w.get(keep[a], keep[b]),
        (true, false) => word_gamma_pairing(&words[a], &iota, fr),
        (false, true) => word_gamma_pairing(&words[b], &iota, fr),
        (false, false) => theta_vec.iter().map(|m| m * m).sum(),
    });

    let mut facts = gram_factorize(&gram)?;
    if facts.len() != 1 {
        return Err(Error::Factorization(format!(
            "{} distinct factorizations of the word Gram matrix",
            facts.len()
        )));
    }
    let b = facts.pop().expect("one factorization");
    if b.rows() as i64 != counts.full_count {
        return Err(Error::Inconsistent(format!(
            "{} irreducible sectors but Tr(ZZᵗ) = {}",
            b.rows(),
            counts.full_count
        )));
    }

    let is_plus_word = |c: usize| c < k && chiral[c].0;
    let is_minus_word = |c: usize| c < k && chiral[c].1;

    // Blocks of identical rows, in row order.
    let mut block_of_row: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut unique: Vec<Vec<i64>> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut sectors = Vec::with_capacity(b.rows());
    let mut per_word: BTreeMap<usize, usize> = BTreeMap::new();
    let mut first_word = Vec::with_capacity(b.rows());
    for r in 0..b.rows() {
        let row = b.row(r).to_vec();
        let blk = *block_of_row.entry(row.clone()).or_insert_with(|| {
            unique.push(row.clone());
            members.push(Vec::new());
            unique.len() - 1
        });
        members[blk].push(r);
        let c = (0..k).find(|&c| row[c] > 0).ok_or_else(|| {
            Error::Inconsistent(format!("irreducible {r} is contained in γ only"))
        })?;
        *per_word.entry(c).or_default() += 1;
        first_word.push(c);
        sectors.push(Sector {
            name: String::new(),
            word: words[c].clone(),
            block: blk,
            in_gamma: row[k] > 0,
            plus: (0..k).any(|c| row[c] > 0 && is_plus_word(c)),
            minus: (0..k).any(|c| row[c] > 0 && is_minus_word(c)),
            row,
        });
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    let mut index = Vec::with_capacity(sectors.len());
    for (s, &c) in sectors.iter_mut().zip(&first_word) {
        let i = seen.entry(c).or_default();
        *i += 1;
        index.push(*i);
        s.name = if gram.get(c, c) == 1 {
            words[c].to_string()
        } else {
            format!("({})^({})", words[c], i)
        };
    }

    let unique_rows = IntMatrix::from_rows(unique.clone())?;
    let nb = unique.len();
    let uu: Vec<Vec<f64>> = (0..nb)
        .map(|a| (0..nb).map(|c| dot(&unique[a], &unique[c]) as f64).collect())
        .collect();
    let uf: Vec<Vec<f64>> = unique.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let projector = solve_f64(&uu, &uf)
        .ok_or_else(|| Error::Inconsistent("distinct sector rows are linearly dependent".into()))?;

    let mut blocks: Vec<SectorBlock> = members
        .iter()
        .map(|mem| {
            let first = &sectors[mem[0]];
            let name = if mem.len() == 1 {
                first.name.clone()
            } else {
                let c = first_word[mem[0]];
                let idx: Vec<String> = mem.iter().map(|&s| index[s].to_string()).collect();
                format!("({})^({})", words[c], idx.join(","))
            };
            SectorBlock {
                name,
                members: mem.clone(),
                dim: Real::zero(md.precision()),
                sheet: 0,
                plus: first.plus,
                minus: first.minus,
            }
        })
        .collect();

    let mut fs = FullSystem {
        words,
        gram,
        sectors,
        blocks: Vec::new(),
        sheets: Vec::new(),
        counts,
        violations: Vec::new(),
        z: z.clone(),
        iota,
        theta: theta_vec,
        projector,
        unique_rows,
    };
    fs.blocks = blocks.clone();

    // Sheets: orbits of the blocks under C⁺.
    let mut parent: Vec<usize> = (0..nb).collect();
    for l in 1..n {
        let a = fs.block_fusion(&SectorWord::plus(l), fr)?;
        for x in 0..nb {
            for y in 0..nb {
                if a.get(x, y) > 0 {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
    }
    let mut sheet_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut sheets: Vec<Vec<usize>> = Vec::new();
    for (x, blk) in blocks.iter_mut().enumerate() {
        let r = find(&mut parent, x);
        let s = *sheet_of_root.entry(r).or_insert_with(|| {
            sheets.push(Vec::new());
            sheets.len() - 1
        });
        sheets[s].push(x);
        blk.sheet = s;
    }
    let expected_sheets: i64 = (0..n).map(|l| z.get(0, l) * z.get(0, l)).sum();
    if sheets.len() as i64 != expected_sheets {
        fs.violations.push(format!(
            "{} sheets but (ZZᵗ)₀₀ = {expected_sheets}",
            sheets.len()
        ));
    }

    let dims = block_dimensions(&fs, &blocks, theta, md, tol)?;
    let eps = Real::from_f64(tol.validation_eps, md.precision());
    let omega = global_index(md).omega;
    let mut total = Real::zero(md.precision());
    let mut plus_total = Real::zero(md.precision());
    let mut minus_total = Real::zero(md.precision());
    let mut neutral_total = Real::zero(md.precision());
    for (blk, d) in blocks.iter_mut().zip(dims) {
        let w = Real::from_u64(blk.members.len() as u64, md.precision()) * d.square();
        if blk.plus {
            plus_total = plus_total + &w;
        }
        if blk.minus {
            minus_total = minus_total + &w;
        }
        if blk.plus && blk.minus {
            neutral_total = neutral_total + &w;
        }
        total = total + w;
        blk.dim = d;
    }
    if (&total - &omega).abs() > &eps * &omega {
        fs.violations.push(format!(
            "Σ d² over the full system is {} but ω = {}",
            total.to_f64(),
            omega.to_f64()
        ));
    }
    let expected = [
        ("C⁺", &plus_total, &fs.counts.omega_pm, "ω±"),
        ("C⁻", &minus_total, &fs.counts.omega_pm, "ω±"),
        ("C⁰", &neutral_total, &fs.counts.omega_0, "ω₀"),
    ];
    for (part, got, want, symbol) in expected {
        if (got - want).abs() > &eps * &omega {
            fs.violations.push(format!(
                "Σ d² over {part} is {} but {symbol} = {}",
                got.to_f64(),
                want.to_f64()
            ));
        }
    }
    fs.blocks = blocks;
    fs.sheets = sheets;
    Ok(fs)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn pair_matrix(words: &[SectorWord], fr: &FusionRing, z: &IntMatrix) -> IntMatrix {
    let n = words.len();
    let rows: Vec<Vec<i64>> = (0..n)
        .into_par_iter()
        .map(|a| (0..n).map(|b| word_pair(&words[a], &words[b], fr, z)).collect())
        .collect();
    IntMatrix::from_rows(rows).expect("square")
}

/// Solves `Σ_B U_{Bw} k_B d_B = d(w)` in the least-squares sense and checks the residual.
///
/// γ takes part as a word of dimension `d_θ`.
fn block_dimensions(
    fs: &FullSystem,
    blocks: &[SectorBlock],
    theta: &CanonicalObject,
    md: &ModularData,
    tol: &ToleranceConfig,
) -> Result<Vec<Real>> {
    let p = md.precision();
    let dims = quantum_dims(md);
    let k = fs.words.len() + 1;
    let nb = blocks.len();
    let coef = |w: usize, b: usize| -> Real {
        Real::from_i64(fs.unique_rows.get(b, w) * blocks[b].members.len() as i64, p)
    };
    let mut target: Vec<Real> = fs.words.iter().map(|w| w.dimension(&dims)).collect();
    target.push(theta.dimension(&dims));
    let mut normal = RMatrix::zeros(nb, nb, p);
    let mut rhs = RMatrix::zeros(nb, 1, p);
    for a in 0..nb {
        for b in 0..nb {
            let mut acc = Real::zero(p);
            for w in 0..k {
                acc = acc + coef(w, a) * coef(w, b);
            }
            normal.set(a, b, acc);
        }
        let mut acc = Real::zero(p);
        for (w, t) in target.iter().enumerate() {
            acc = acc + coef(w, a) * t;
        }
        rhs.set(a, 0, acc);
    }
    let eps = Real::from_f64(tol.validation_eps, p);
    let x = solve(&normal, &rhs, &eps)?;
    let d: Vec<Real> = (0..nb).map(|b| x.get(b, 0).clone()).collect();
    for (w, t) in target.iter().enumerate() {
        let mut acc = Real::zero(p);
        for (b, db) in d.iter().enumerate() {
            acc = acc + coef(w, b) * db;
        }
        if (&acc - t).abs() > &eps * t {
            return Err(Error::Inconsistent(format!(
                "{} has dimension {} but its sectors sum to {}",
                fs.words.get(w).map_or("γ".to_string(), ToString::to_string),
                t.to_f64(),
                acc.to_f64()
            )));
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Serialize)]
pub struct FusionGraph {
    pub generator: String,
    pub nodes: Vec<String>,
    /// `A_{BC} = ⟨g·B, C⟩` between blocks.
    pub adjacency: IntMatrix,
    pub dot: String,
}

/// Fusion graph of `g` on the blocks of the full system.
pub fn fusion_graph(g: &SectorWord, fs: &FullSystem, fr: &FusionRing) -> Result<FusionGraph> {
    let adjacency = fs.block_fusion(g, fr)?;
    let nodes: Vec<String> = fs.blocks.iter().map(|b| b.name.clone()).collect();
    let mut dot = String::new();
    let _ = writeln!(dot, "digraph \"{}\" {{", escape(&g.to_string()));
    for (i, name) in nodes.iter().enumerate() {
        let _ = writeln!(dot, "  n{i} [label=\"{}\"];", escape(name));
    }
    for a in 0..nodes.len() {
        for b in 0..nodes.len() {
            for _ in 0..adjacency.get(a, b) {
                let _ = writeln!(dot, "  n{a} -> n{b};");
            }
        }
    }
    dot.push_str("}\n");
    Ok(FusionGraph {
        generator: g.to_string(),
        nodes,
        adjacency,
        dot,
    })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha_sectors::{gamma_pairing, gram_factorize, match_invariant, CanonicalObject};
    use crate::catalog::builtin_e6_double;
    use crate::invariants::{commutant_basis, enumerate_invariants, EnumerateOptions, ModularInvariant};
    use crate::modular_data::verlinde;

    struct Setup {
        md: ModularData,
        fr: FusionRing,
        zs: Vec<ModularInvariant>,
        tol: ToleranceConfig,
    }

    fn setup() -> Setup {
        let tol = ToleranceConfig::default();
        let md = builtin_e6_double(&tol).unwrap();
        let fr = verlinde(&md, &tol).unwrap();
        let basis = commutant_basis(&md, &tol).unwrap();
        let zs = enumerate_invariants(&md, &basis, EnumerateOptions::default(), &tol).unwrap();
        Setup { md, fr, zs, tol }
    }

    fn theta(s: &Setup, labels: &[usize]) -> CanonicalObject {
        CanonicalObject::from_labels(labels, &s.fr).unwrap()
    }

    #[test]
    fn theta_matching() {
        let s = setup();
        for (labels, rows, trace) in [(&[0, 1][..], 8, 8), (&[0, 2], 6, 6), (&[0, 2, 4], 3, 3)] {
            let th = theta(&s, labels);
            let f = gram_factorize(&iota_gram(&th, &s.fr)).unwrap();
            assert_eq!(f.len(), 1);
            assert_eq!(f[0].rows(), rows);
            assert_eq!(match_invariant(&th, &s.fr, &s.zs).unwrap().trace(), trace);
        }
    }

    #[test]
    fn word_pairs_and_gamma() {
        let s = setup();
        let z3 = s.zs[2].matrix();
        let p55 = SectorWord::pair(5, 5);
        assert_eq!(word_pair(&p55, &p55, &s.fr, z3), 2);
        assert_eq!(word_pair(&SectorWord::pair(4, 1), &SectorWord::plus(4), &s.fr, z3), 3);
        assert_eq!(word_pair(&p55, &SectorWord::pair(9, 5), &s.fr, z3), 0);
        assert_eq!(gamma_pairing(5, 5, &theta(&s, &[0, 2]), &s.fr), 1);
        assert_eq!(gamma_pairing(1, 1, &theta(&s, &[0, 2, 4]), &s.fr), 1);
        assert_eq!(gamma_pairing(0, 0, &theta(&s, &[0, 2, 4]), &s.fr), 1);
    }

    #[test]
    fn counts() {
        let s = setup();
        let c3 = system_counts(s.zs[2].matrix(), &s.md).unwrap();
        assert_eq!(c3.full_count, 12);
        assert!((c3.omega_pm.to_f64() - 18.9282).abs() < 5e-5);
        assert!((c3.omega_0.to_f64() - 4.0).abs() < 1e-12);
        let c4 = system_counts(s.zs[3].matrix(), &s.md).unwrap();
        assert_eq!(c4.full_count, 9);
        assert!((c4.omega_0.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_systems() {
        let s = setup();
        let cases: [(usize, &[usize], usize, usize); 4] =
            [(0, &[0], 10, 1), (1, &[0, 1], 10, 1), (2, &[0, 2], 12, 2), (3, &[0, 2, 4], 9, 3)];
        for (zi, th, irr, sheets) in cases {
            let fs = full_system(s.zs[zi].matrix(), &theta(&s, th), &s.md, &s.fr, &s.tol).unwrap();
            assert_eq!(fs.irreducible_count(), irr, "Z{}", zi + 1);
            assert_eq!(fs.sheets.len(), sheets, "Z{}", zi + 1);
            assert!(fs.violations.is_empty(), "Z{}: {:?}", zi + 1, fs.violations);
        }
    }

    #[test]
    fn z3_new_sectors_and_z4_product_structure() {
        let s = setup();
        let fs = full_system(s.zs[2].matrix(), &theta(&s, &[0, 2]), &s.md, &s.fr, &s.tol).unwrap();
        let names: Vec<&str> = fs.sectors.iter().map(|x| x.name.as_str()).collect();
        assert!(names.contains(&"(a5+a5-)^(1)") && names.contains(&"(a5+a5-)^(2)"), "{names:?}");
        let chiral = (fs.chiral_plus().len(), fs.chiral_minus().len(), fs.ambichiral().len());
        assert_eq!(chiral, (6, 6, 4));

        let fs = full_system(s.zs[3].matrix(), &theta(&s, &[0, 2, 4]), &s.md, &s.fr, &s.tol).unwrap();
        let (p, m, a) = (fs.chiral_plus().len(), fs.chiral_minus().len(), fs.ambichiral().len());
        assert_eq!((p, m, a), (3, 3, 1));
        assert_eq!(p * m, fs.irreducible_count());
        let g = fusion_graph(&SectorWord::plus(5), &fs, &s.fr).unwrap();
        let a5 = fs.block_index("a5+").unwrap();
        let row: Vec<i64> = ["id", "a1+", "a5+"]
            .iter()
            .map(|n| g.adjacency.get(a5, fs.block_index(n).unwrap()))
            .collect();
        assert_eq!(row, vec![1, 1, 2]);
    }

    #[test]
    fn graphs() {
        let s = setup();
        let fs = full_system(s.zs[0].matrix(), &theta(&s, &[0]), &s.md, &s.fr, &s.tol).unwrap();
        let g = fusion_graph(&SectorWord::plus(4), &fs, &s.fr).unwrap();
        assert_eq!(g.nodes.len(), 10);
        let again = fusion_graph(&SectorWord::plus(4), &fs, &s.fr).unwrap();
        assert_eq!(g.dot, again.dot);
        let id = fusion_graph(&SectorWord::identity(), &fs, &s.fr).unwrap();
        assert_eq!(id.adjacency, IntMatrix::identity(10));
    }
}
