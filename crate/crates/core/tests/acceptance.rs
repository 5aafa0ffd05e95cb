#![allow(clippy::needless_range_loop)]

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use modinv::alpha_sectors::{gamma_pairing, system_counts};
use modinv::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Quadratic forms in the characters, transcribed term by term from the printed text.
///
/// `a*b` is `χ_a χ_b^*`, `(a+b)*c` distributes, `|a+b|` is `|χ_a+χ_b|²`, and a
/// leading integer multiplies a `|…|` term. Repeated labels inside a group count twice.
const PRINTED_N: [&str; 10] = [
    "|0|+|1|+|2|+|3|+|4|+|5|+|6|+|7|+|8|+|9|",
    "0*1+1*0+2*3+3*2+|4|+5*6+6*5+7*8+8*7+|9|",
    "0*2+2*0+1*3+3*1+|2+3|+(2+3)*(5+6)+(5+6)*(2+3)+2|4|+4*(7+8+9)+(7+8+9)*4+5*6+6*5+7*(8+9)+(8+9)*7+8*9+9*8",
    "0*3+3*0+1*2+2*1+|2+3|+(2+3)*(5+6)+(5+6)*(2+3)+2|4|+4*(7+8+9)+(7+8+9)*4+|5|+|6|+|7|+|8|+9*(7+8)+(7+8)*9",
    "(0+1+2+2+3+3)*4+4*(0+1+2+2+3+3)+4*(5+6)+(5+6)*4+(2+3+5+6)*(7+8+9)+(7+8+9)*(2+3+5+6)",
    "(0+3+5)*5+5*(0+3)+|2+3|+(4+7+8+9)*4+4*(7+8+9)+(1+2+6)*6+6*(1+2+6)+7*8+8*7+|9|",
    "0*6+6*0+1*5+5*1+|2+3|+2*5+5*2+3*6+6*3+(4+7+8+9)*4+4*(7+8+9)+5*6+6*5+|7|+|8|+|9|",
    "0*7+8*0+1*8+7*1+2*(4+8+9)+(4+7+9)*2+3*(4+7+9)+(4+8+9)*3+(5+6)*4+4*(5+6)+5*8+7*5+6*7+8*6",
    "0*8+7*0+1*7+8*1+2*(4+7+9)+(4+8+9)*2+(4+7+9)*3+3*(4+8+9)+(5+6)*4+4*(5+6)+5*7+7*6+6*8+8*5",
    "0*9+9*0+(2+3)*(4+7+8)+(4+7+8)*(2+3)+(5+6)*(4+9)+(4+9)*(5+6)+1*9+9*1",
];

const PRINTED_Z: [&str; 4] = [
    "|0|+|1|+|2|+|3|+|4|+|5|+|6|+|7|+|8|+|9|",
    "|0|+|1|+|2|+|3|+|4|+|5|+|6|+|9|+7*8+8*7",
    "|0+2|+|1+3|+2|4|",
    "|0+2+4|",
];

/// Rows `Z_a`, columns `Z_b`, cells `Z_a Z_bᵗ` as printed.
const PRINTED_TABLE_2: [[&str; 4]; 4] = [
    ["Z1", "Z2", "Z3", "Z4"],
    ["Z2", "Z1", "Z3", "Z4"],
    ["Z3", "Z3", "2Z3", "2Z4"],
    ["Z4", "Z4", "2Z3", "3Z4"],
];

const PRINTED_TABLE_1: [[&str; 3]; 3] = [
    ["ZA", "ZD", "ZE"],
    ["ZD", "2ZD", "2ZE"],
    ["ZE", "2ZE", "ZD+ZE"],
];

const PRINTED_FS: [i8; 10] = [1, 1, 1, 1, 1, 1, 1, 0, 0, 1];

fn group(s: &str) -> Vec<usize> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split('+')
        .map(|x| x.parse().expect("label"))
        .collect()
}

fn quadratic_form(src: &str, n: usize) -> IntMatrix {
    let mut terms = Vec::new();
    let (mut depth, mut in_abs, mut cur) = (0, false, String::new());
    for ch in src.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' => in_abs = !in_abs,
            _ => {}
        }
        if ch == '+' && depth == 0 && !in_abs {
            terms.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    terms.push(cur);
    let mut m = IntMatrix::zeros(n, n);
    for t in terms {
        let (c, a, b) = if let Some(open) = t.find('|') {
            let c = if open == 0 { 1 } else { t[..open].parse().expect("coefficient") };
            let g = group(&t[open + 1..t.len() - 1]);
            (c, g.clone(), g)
        } else {
            let (a, b) = t.split_once('*').expect("product term");
            (1, group(a), group(b))
        };
        for &x in &a {
            for &y in &b {
                m.set(x, y, m.get(x, y) + c);
            }
        }
    }
    m
}

fn parse_cell(cell: &str, names: &[&str]) -> Vec<i64> {
    let mut v = vec![0; names.len()];
    for term in cell.split('+') {
        let split = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(0);
        let c = if split == 0 { 1 } else { term[..split].parse().expect("coefficient") };
        let i = names.iter().position(|n| *n == &term[split..]).expect("name");
        v[i] += c;
    }
    v
}

struct E6 {
    md: ModularData,
    fr: FusionRing,
    zs: Vec<ModularInvariant>,
    tol: ToleranceConfig,
}

fn e6() -> std::result::Result<E6, String> {
    let tol = ToleranceConfig::default();
    let md = builtin_e6_double(&tol).map_err(|e| e.to_string())?;
    let fr = verlinde(&md, &tol).map_err(|e| e.to_string())?;
    let basis = commutant_basis(&md, &tol).map_err(|e| e.to_string())?;
    let zs = enumerate_invariants(&md, &basis, EnumerateOptions::default(), &tol).map_err(|e| e.to_string())?;
    if zs.len() != 4 {
        return Err(format!("{} invariants enumerated", zs.len()));
    }
    Ok(E6 { md, fr, zs, tol })
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let tol = ToleranceConfig::default();
    let md = builtin_e6_double(&tol).map_err(|e| e.to_string())?;
    let rep = validate(&md, &tol, true).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(rep.passed(), || format!("failed axioms: {:?}", rep.failures()))?;
    let err = rep.phase_error.ok_or("no phase computed")?;
    ensure(err < 1e-18, || format!("|μ-1| = {err:e}"))?;
    ensure(secs < 1.0, || format!("took {secs:.2} s"))?;
    Ok(format!("all axioms at 192 bits, |μ-1| = {err:.1e}, {secs:.2} s"))
}

fn c2() -> Outcome {
    let tol = ToleranceConfig::default();
    let md = builtin_e6_double(&tol).map_err(|e| e.to_string())?;
    let fr = verlinde(&md, &tol).map_err(|e| e.to_string())?;
    let mut diffs = Vec::new();
    for (l, src) in PRINTED_N.iter().enumerate() {
        let printed = quadratic_form(src, 10);
        let computed = fr.matrix(l);
        for a in 0..10 {
            for b in 0..10 {
                if printed.get(a, b) != computed.get(a, b) {
                    diffs.push(format!(
                        "N{l}[{a}][{b}]: printed {} computed {}",
                        printed.get(a, b),
                        computed.get(a, b)
                    ));
                }
            }
        }
    }
    ensure(fr.matrix(0).is_permutation() && fr.matrix(1).is_permutation(), || {
        "N0 or N1 is not a permutation".into()
    })?;
    ensure(fr.matrix(8) == fr.matrix(7).transpose(), || "N8 != N7ᵗ".into())?;
    ensure(diffs.is_empty(), || {
        format!("{} of 1000 entries differ: {}", diffs.len(), diffs.join("; "))
    })?;
    Ok("1000 entries match, N0 and N1 are permutations, N8 = N7ᵗ".into())
}

fn c3() -> Outcome {
    let tol = ToleranceConfig::default();
    let md = builtin_e6_double(&tol).map_err(|e| e.to_string())?;
    let fr = verlinde(&md, &tol).map_err(|e| e.to_string())?;
    let fs = fs_indicators(&md, &fr, &tol).map_err(|e| e.to_string())?;
    ensure(fs == PRINTED_FS, || format!("computed {fs:?}"))?;
    Ok(format!("{fs:?}"))
}

fn c4() -> Outcome {
    let start = Instant::now();
    let tol = ToleranceConfig::default();
    let md = builtin_e6_double(&tol).map_err(|e| e.to_string())?;
    let basis = commutant_basis(&md, &tol).map_err(|e| e.to_string())?;
    let zs = enumerate_invariants(&md, &basis, EnumerateOptions::default(), &tol).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(basis.dim() == 4, || format!("commutant dimension {}", basis.dim()))?;
    let got: Vec<IntMatrix> = zs.iter().map(|z| z.matrix().clone()).collect();
    let want: Vec<IntMatrix> = PRINTED_Z.iter().map(|s| quadratic_form(s, 10)).collect();
    ensure(got == want, || format!("enumerated {} invariants differing from the printed four", got.len()))?;
    let traces: Vec<i64> = zs.iter().map(ModularInvariant::trace).collect();
    ensure(traces == [10, 8, 6, 3], || format!("traces {traces:?}"))?;
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("Z1..Z4 as printed, commutant dimension 4, traces {traces:?}, {secs:.2} s"))
}

fn c5() -> Outcome {
    let s = e6()?;
    let names = invariant_names(&s.zs);
    let table = fusion_table(&s.zs, &names).map_err(|e| e.to_string())?;
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut diffs = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            if table.cells[a][b] != parse_cell(PRINTED_TABLE_2[a][b], &name_refs) {
                diffs.push(format!(
                    "(Z{}, Z{}): printed {} computed {}",
                    a + 1,
                    b + 1,
                    PRINTED_TABLE_2[a][b],
                    table.render_cell(a, b)
                ));
            }
        }
    }
    ensure(diffs.is_empty(), || format!("{} of 16 cells differ: {}", diffs.len(), diffs.join("; ")))?;
    Ok("16 cells match".into())
}

fn c6() -> Outcome {
    let start = Instant::now();
    let tol = ToleranceConfig::default();
    let md = builtin_su2(16, &tol).map_err(|e| e.to_string())?;
    let basis = commutant_basis(&md, &tol).map_err(|e| e.to_string())?;
    let zs = enumerate_invariants(&md, &basis, EnumerateOptions::default(), &tol).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(zs.len() == 3, || format!("{} normalized invariants", zs.len()))?;
    let by_trace = |t: i64| zs.iter().position(|z| z.trace() == t).ok_or(format!("no invariant of trace {t}"));
    let order = [by_trace(17)?, by_trace(10)?, by_trace(7)?];
    let labelled: Vec<ModularInvariant> = order.iter().map(|&i| zs[i].clone()).collect();
    let names = ["ZA", "ZD", "ZE"];
    let table = fusion_table(&labelled, &names.map(String::from)).map_err(|e| e.to_string())?;
    let mut diffs = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            if table.cells[a][b] != parse_cell(PRINTED_TABLE_1[a][b], &names) {
                diffs.push(format!("({}, {}): computed {}", names[a], names[b], table.render_cell(a, b)));
            }
        }
    }
    ensure(diffs.is_empty(), || diffs.join("; "))?;
    ensure(secs < 60.0, || format!("took {secs:.2} s"))?;
    Ok(format!("A17, D10, E7 found and 9 cells match, {secs:.2} s"))
}

fn c7() -> Outcome {
    let s = e6()?;
    let theta = |l: &[usize]| CanonicalObject::from_labels(l, &s.fr).map_err(|e| e.to_string());
    for (labels, rows, zi) in [(&[0, 1][..], 8, 1), (&[0, 2], 6, 2), (&[0, 2, 4], 3, 3)] {
        let th = theta(labels)?;
        let f = gram_factorize(&iota_gram(&th, &s.fr)).map_err(|e| e.to_string())?;
        let counts: Vec<usize> = f.iter().map(BranchingMatrix::rows).collect();
        ensure(counts == [rows], || format!("θ = {labels:?}: factorization rows {counts:?}"))?;
        let z = match_invariant(&th, &s.fr, &s.zs).map_err(|e| e.to_string())?;
        ensure(z == s.zs[zi], || format!("θ = {labels:?} matched trace {}", z.trace()))?;
    }
    let z3 = s.zs[2].matrix();
    let p55 = SectorWord::pair(5, 5);
    let pairs = [
        word_pair(&p55, &p55, &s.fr, z3),
        word_pair(&SectorWord::pair(4, 1), &SectorWord::plus(4), &s.fr, z3),
        word_pair(&p55, &SectorWord::pair(9, 5), &s.fr, z3),
    ];
    ensure(pairs == [2, 3, 0], || format!("word pairs {pairs:?}"))?;
    let g = [
        gamma_pairing(5, 5, &theta(&[0, 2])?, &s.fr),
        gamma_pairing(1, 1, &theta(&[0, 2, 4])?, &s.fr),
    ];
    ensure(g == [1, 1], || format!("γ pairings {g:?}"))?;
    Ok("rows 8/6/3 matching Z2/Z3/Z4, word pairs 2,3,0, γ pairings 1,1".into())
}

fn c8() -> Outcome {
    let s = e6()?;
    let d = 1.0 + 3f64.sqrt();
    let omega_closed = 8.0 * (1.0 + d + d * d);
    let c3 = system_counts(s.zs[2].matrix(), &s.md).map_err(|e| e.to_string())?;
    let c4 = system_counts(s.zs[3].matrix(), &s.md).map_err(|e| e.to_string())?;
    let close = |x: f64, y: f64, eps: f64| (x - y).abs() < eps;
    let omega = c3.omega.to_f64();
    let checks = [
        ("ω", omega, omega_closed, 89.5692),
        ("ω± (Z3)", c3.omega_pm.to_f64(), omega_closed / (2.0 + d), 18.9282),
        ("ω₀ (Z3)", c3.omega_0.to_f64(), 4.0, 4.0),
        ("ω± (Z4)", c4.omega_pm.to_f64(), 2.0 + d * d, 9.4641),
        ("ω₀ (Z4)", c4.omega_0.to_f64(), 1.0, 1.0),
    ];
    for (name, got, closed, printed) in checks {
        ensure(close(got, closed, 1e-10), || format!("{name} = {got} vs closed form {closed}"))?;
        ensure(close(got, printed, 5e-5), || format!("{name} = {got} vs printed {printed}"))?;
    }
    ensure(c3.full_count == 12 && c4.full_count == 9, || {
        format!("Tr(ZZᵗ) = {}, {}", c3.full_count, c4.full_count)
    })?;
    Ok(format!(
        "ω = {omega:.4}, Z3 (12, {:.4}, {:.4}), Z4 (9, {:.4}, {:.4})",
        c3.omega_pm.to_f64(),
        c3.omega_0.to_f64(),
        c4.omega_pm.to_f64(),
        c4.omega_0.to_f64()
    ))
}

fn c9() -> Outcome {
    let s = e6()?;
    let theta = |l: &[usize]| CanonicalObject::from_labels(l, &s.fr).map_err(|e| e.to_string());
    let full = |zi: usize, l: &[usize]| -> std::result::Result<FullSystem, String> {
        let fs = full_system(s.zs[zi].matrix(), &theta(l)?, &s.md, &s.fr, &s.tol).map_err(|e| e.to_string())?;
        ensure(fs.violations.is_empty(), || fs.violations.join("; "))?;
        Ok(fs)
    };
    let f3 = full(2, &[0, 2])?;
    ensure(f3.irreducible_count() == 12 && f3.sheets.len() == 2, || {
        format!("Z3: {} irreducibles, {} sheets", f3.irreducible_count(), f3.sheets.len())
    })?;
    let f4 = full(3, &[0, 2, 4])?;
    ensure(f4.irreducible_count() == 9 && f4.sheets.len() == 3, || {
        format!("Z4: {} irreducibles, {} sheets", f4.irreducible_count(), f4.sheets.len())
    })?;
    let names: BTreeSet<String> = f4.sectors.iter().map(|x| x.name.clone()).collect();
    let product: BTreeSet<String> = [0, 1, 5]
        .iter()
        .flat_map(|&a| [0, 1, 5].map(move |b| SectorWord::pair(a, b).to_string()))
        .collect();
    ensure(names == product, || format!("Z4 sectors {names:?}"))?;
    ensure(f4.chiral_plus().len() * f4.chiral_minus().len() == 9, || "C ≠ C⁺×C⁻".into())?;
    let g = fusion_graph(&SectorWord::plus(5), &f4, &s.fr).map_err(|e| e.to_string())?;
    let idx = |n: &str| f4.block_index(n).ok_or(format!("no block {n}"));
    let a5 = idx("a5+")?;
    let row = [g.adjacency.get(a5, idx("id")?), g.adjacency.get(a5, idx("a1+")?), g.adjacency.get(a5, a5)];
    ensure(row == [1, 1, 2], || format!("α5⁺ row {row:?}"))?;
    let f1 = full(0, &[0])?;
    let g = fusion_graph(&SectorWord::plus(4), &f1, &s.fr).map_err(|e| e.to_string())?;
    ensure(g.nodes.len() == 10, || format!("Z1 α4⁺ graph has {} nodes", g.nodes.len()))?;
    Ok("Z3 12 in 2 sheets, Z4 9 = C⁺×C⁻ in 3 sheets, α5⁺ row (1,1,2), Z1 α4⁺ graph 10 nodes".into())
}

fn c10() -> Outcome {
    let mut total = 0;
    for k in 1..=12u32 {
        let tol = ToleranceConfig::default();
        let md = builtin_su2(k, &tol).map_err(|e| e.to_string())?;
        let fr = verlinde(&md, &tol).map_err(|e| format!("k = {k}: {e}"))?;
        let basis = commutant_basis(&md, &tol).map_err(|e| e.to_string())?;
        let zs = enumerate_invariants(&md, &basis, EnumerateOptions::default(), &tol).map_err(|e| e.to_string())?;
        let mats: Vec<&IntMatrix> = zs.iter().map(ModularInvariant::matrix).collect();
        let n = md.rank();
        ensure(mats.contains(&&IntMatrix::identity(n)), || format!("k = {k}: identity missing"))?;
        ensure(mats.contains(&&IntMatrix::permutation(fr.conjugation())), || {
            format!("k = {k}: conjugation invariant missing")
        })?;
        for a in &zs {
            for b in &zs {
                let p = fuse(a.matrix(), b.matrix()).map_err(|e| e.to_string())?;
                decompose(&p, &zs).map_err(|e| format!("k = {k}: {e}"))?;
            }
        }
        let tol_hi = tol.with_precision(384);
        let md_hi = md.at_precision(&tol_hi).map_err(|e| e.to_string())?;
        let basis_hi = commutant_basis(&md_hi, &tol_hi).map_err(|e| e.to_string())?;
        let hi = enumerate_invariants(&md_hi, &basis_hi, EnumerateOptions::default(), &tol_hi)
            .map_err(|e| e.to_string())?;
        ensure(hi == zs, || format!("k = {k}: enumeration differs at 384 bits"))?;
        total += zs.len();
    }
    Ok(format!("k = 1..12: {total} invariants, all products decompose, 192/384-bit agreement"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("E6-double validation", c1),
        ("Verlinde reproduction", c2),
        ("Frobenius-Schur indicators", c3),
        ("E6-double invariant enumeration", c4),
        ("E6-double fusion table", c5),
        ("SU(2)_16 enumeration and fusion table", c6),
        ("sector suite", c7),
        ("system counts", c8),
        ("full-system reconstruction", c9),
        ("SU(2)_k property suite", c10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
