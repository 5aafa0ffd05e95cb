//! Modular data (S, T), its axioms, and the quantities derived from it.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::linalg::CMatrix;
use crate::scalars::{snap_to_integer, BigComplex, Real, ScalarExpr, ToleranceConfig};

/// Exact expressions from which the numeric matrices were evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularSource {
    pub s: Vec<Vec<ScalarExpr>>,
    pub t: Vec<ScalarExpr>,
}

/// Labels with an S matrix and diagonal T. The vacuum is label 0.
#[derive(Debug, Clone)]
pub struct ModularData {
    name: String,
    labels: Vec<String>,
    s: CMatrix,
    t: Vec<BigComplex>,
    source: Option<ModularSource>,
    precision: usize,
}

impl ModularData {
    /// Evaluates `source` at `tol.precision` bits.
    pub fn from_source(
        name: impl Into<String>,
        labels: Vec<String>,
        source: ModularSource,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        tol.check()?;
        check_shape(labels.len(), source.s.len(), source.s.iter().map(Vec::len), source.t.len())?;
        let p = tol.precision;
        let eps = tol.snap_eps;
        let s_rows = source
            .s
            .par_iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| e.eval(p, eps).map_err(|err| err.located(format!("S[{i}][{j}]"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let t = source
            .t
            .iter()
            .enumerate()
            .map(|(i, e)| e.eval(p, eps).map_err(|err| err.located(format!("T[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        let mut md = Self::from_values(name, labels, s_rows, t)?;
        md.source = Some(source);
        Ok(md)
    }

    /// Wraps already evaluated matrices. No source is recorded.
    pub fn from_values(
        name: impl Into<String>,
        labels: Vec<String>,
        s: Vec<Vec<BigComplex>>,
        t: Vec<BigComplex>,
    ) -> Result<Self> {
        let n = labels.len();
        check_shape(n, s.len(), s.iter().map(Vec::len), t.len())?;
        if n == 0 {
            return Err(Error::Dimension("modular data needs at least one label".into()));
        }
        for (i, row) in s.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                if !z.is_finite() {
                    return Err(Error::NonFinite(format!("S[{i}][{j}]")));
                }
            }
        }
        if let Some(i) = t.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(format!("T[{i}]")));
        }
        let precision = s[0][0].precision();
        Ok(ModularData {
            name: name.into(),
            labels,
            s: CMatrix::from_rows(s),
            t,
            source: None,
            precision,
        })
    }

    /// Re-evaluates the exact source at a different precision.
    pub fn at_precision(&self, tol: &ToleranceConfig) -> Result<Self> {
        match &self.source {
            Some(src) => Self::from_source(self.name.clone(), self.labels.clone(), src.clone(), tol),
            None => Err(Error::Config(
                "data has no exact source and cannot be re-evaluated".into(),
            )),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn source(&self) -> Option<&ModularSource> {
        self.source.as_ref()
    }

    pub fn s(&self, i: usize, j: usize) -> &BigComplex {
        self.s.get(i, j)
    }

    pub fn t(&self, i: usize) -> &BigComplex {
        &self.t[i]
    }

    pub(crate) fn s_matrix(&self) -> &CMatrix {
        &self.s
    }

    /// Index of the label named `name`, or the label parsed as an index.
    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l == name)
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < self.rank()))
    }
}

fn check_shape(
    n: usize,
    s_rows: usize,
    mut s_cols: impl Iterator<Item = usize>,
    t_len: usize,
) -> Result<()> {
    if s_rows != n {
        return Err(Error::Dimension(format!("{n} labels but S has {s_rows} rows")));
    }
    if let Some((i, c)) = s_cols.by_ref().enumerate().find(|&(_, c)| c != n) {
        return Err(Error::Dimension(format!("S row {i} has {c} entries, expected {n}")));
    }
    if t_len != n {
        return Err(Error::Dimension(format!("{n} labels but T has {t_len} entries")));
    }
    Ok(())
}

/// One axiom of the modular-data definition.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
    /// `λ ↦ λ̄` read off S², when S² is a permutation.
    pub conjugation: Option<Vec<usize>>,
    /// The phase μ in (ST)³ = μS², as (re, im).
    pub phase: Option<(f64, f64)>,
    /// |μ − 1|.
    pub phase_error: Option<f64>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::Validation {
                failed: self.failures(),
            })
        }
    }
}

/// Checks every axiom and reports residuals. Only structural problems are errors.
pub fn validate(md: &ModularData, tol: &ToleranceConfig, strict_phase: bool) -> Result<ValidationReport> {
    tol.check()?;
    let n = md.rank();
    let p = md.precision();
    let ev = tol.validation_eps;
    let s = md.s_matrix();
    let mut checks = Vec::new();

    let mut sym = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            sym = sym.max(s.get(i, j).dist(s.get(j, i)));
        }
    }
    checks.push(axiom("S-symmetry", sym, ev, "max |S_ij - S_ji|"));

    let ss = s.mul(&s.conj_transpose());
    let unit = ss.max_dist(&CMatrix::identity(n, p));
    checks.push(axiom("S-unitarity", unit, ev, "max |SS* - 1|"));

    let mut im0 = 0.0f64;
    let mut bad = Vec::new();
    for l in 0..n {
        let z = s.get(0, l);
        im0 = im0.max(z.im.abs().to_f64());
        if z.re.to_f64() <= ev {
            bad.push(l);
        }
    }
    checks.push(AxiomCheck {
        name: "S-vacuum-positivity",
        passed: bad.is_empty() && im0 <= ev,
        residual: im0,
        detail: if bad.is_empty() && im0 <= ev {
            "S_{0λ} > 0".into()
        } else if bad.is_empty() {
            format!("S_{{0λ}} > 0 fails: imaginary part {im0:.3e}")
        } else {
            format!("S_{{0λ}} > 0 fails at λ = {bad:?}")
        },
    });

    let tu = md
        .t
        .iter()
        .map(|z| (z.abs() - Real::one(p)).abs().to_f64())
        .fold(0.0, f64::max);
    checks.push(axiom("T-unitarity", tu, ev, "max ||T_λ| - 1|"));

    let s2 = s.mul(s);
    let conj = permutation_of(&s2, ev);
    let (conj_ok, conj_res, conj_detail) = match &conj {
        Ok((perm, res)) => {
            let involution = (0..n).all(|i| perm[perm[i]] == i);
            let fixes_vacuum = perm[0] == 0;
            let ok = involution && fixes_vacuum;
            let d = if ok {
                "S² is an involutive permutation fixing the vacuum".to_string()
            } else if !fixes_vacuum {
                "S² does not fix the vacuum".to_string()
            } else {
                "S² is a permutation but not an involution".to_string()
            };
            (ok, *res, d)
        }
        Err(res) => (false, *res, format!("S² is not a 0/1 permutation (residual {res:.3e})")),
    };
    checks.push(AxiomCheck {
        name: "S2-conjugation",
        passed: conj_ok,
        residual: conj_res,
        detail: conj_detail,
    });

    let tm = CMatrix::diagonal(&md.t);
    let st = s.mul(&tm);
    let st3 = st.mul(&st).mul(&st);
    // μ from the largest entry of S², then the residual of the whole identity.
    let (mut bi, mut bj, mut best) = (0, 0, Real::zero(p));
    for i in 0..n {
        for j in 0..n {
            let a = s2.get(i, j).abs();
            if a > best {
                best = a;
                bi = i;
                bj = j;
            }
        }
    }
    let mut phase = None;
    let mut phase_error = None;
    if best.is_positive() {
        let mu = st3.get(bi, bj) / s2.get(bi, bj);
        let proj = st3.max_dist(&s2.scale(&mu));
        let mod_err = (mu.abs() - Real::one(p)).abs().to_f64();
        let res = proj.max(mod_err);
        checks.push(axiom("ST3-projective", res, ev, "max |(ST)³ - μS²| and ||μ| - 1|"));
        let err = mu.dist(&BigComplex::one(p));
        if strict_phase {
            checks.push(axiom("ST3-strict", err, ev, "|μ - 1|"));
        }
        phase = Some(mu.to_f64_pair());
        phase_error = Some(err);
    } else {
        checks.push(AxiomCheck {
            name: "ST3-projective",
            passed: false,
            residual: f64::INFINITY,
            detail: "S² vanishes".into(),
        });
    }

    Ok(ValidationReport {
        checks,
        conjugation: conj.ok().map(|(p, _)| p),
        phase,
        phase_error,
    })
}

fn axiom(name: &'static str, residual: f64, eps: f64, what: &str) -> AxiomCheck {
    let passed = residual <= eps;
    AxiomCheck {
        name,
        passed,
        residual,
        detail: format!("{what} = {residual:.3e} (tolerance {eps:.1e})"),
    }
}

/// Reads a 0/1 permutation off `m`, returning it with the entrywise residual.
fn permutation_of(m: &CMatrix, eps: f64) -> std::result::Result<(Vec<usize>, f64), f64> {
    let n = m.n();
    let mut perm = vec![usize::MAX; n];
    let mut res = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            let d1 = z.dist(&BigComplex::one(z.precision()));
            let d0 = z.abs().to_f64();
            if d1 <= eps {
                if perm[i] != usize::MAX {
                    return Err(f64::INFINITY);
                }
                perm[i] = j;
                res = res.max(d1);
            } else if d0 <= eps {
                res = res.max(d0);
            } else {
                return Err(d0.min(d1));
            }
        }
    }
    if perm.contains(&usize::MAX) {
        return Err(f64::INFINITY);
    }
    let mut seen = vec![false; n];
    for &j in &perm {
        if std::mem::replace(&mut seen[j], true) {
            return Err(f64::INFINITY);
        }
    }
    Ok((perm, res))
}

/// `d_λ = S_{0λ}/S_{00}`.
pub fn quantum_dims(md: &ModularData) -> Vec<Real> {
    let s00 = md.s(0, 0).re.clone();
    (0..md.rank()).map(|l| &md.s(0, l).re / &s00).collect()
}

#[derive(Debug, Clone)]
pub struct GlobalIndex {
    pub omega: Real,
    /// |ω S₀₀² − 1|.
    pub residual: f64,
}

/// `ω = Σ d_λ²`.
pub fn global_index(md: &ModularData) -> GlobalIndex {
    let p = md.precision();
    let mut omega = Real::zero(p);
    for d in quantum_dims(md) {
        omega = omega + d.square();
    }
    let residual = (&omega * &md.s(0, 0).re.square() - Real::one(p)).abs().to_f64();
    GlobalIndex { omega, residual }
}

/// The permutation `λ ↦ λ̄` given by S².
pub fn conjugation(md: &ModularData, tol: &ToleranceConfig) -> Result<Vec<usize>> {
    let s = md.s_matrix();
    let (perm, _) = permutation_of(&s.mul(s), tol.validation_eps).map_err(|res| {
        Error::Validation {
            failed: vec![format!("S2-conjugation: S² is not a 0/1 permutation (residual {res:.3e})")],
        }
    })?;
    if perm[0] != 0 {
        return Err(Error::Validation {
            failed: vec!["S2-conjugation: S² does not fix the vacuum".into()],
        });
    }
    Ok(perm)
}

/// Fusion coefficients `N_{λμ}^ν = (N_λ)_{μν}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionRing {
    n: usize,
    data: Vec<u32>,
    conj: Vec<usize>,
}

impl FusionRing {
    /// Builds the ring from `coeff[λ][μ][ν]` and checks every fusion-ring axiom.
    pub fn from_coefficients(coeff: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let n = coeff.len();
        let mut data = Vec::with_capacity(n * n * n);
        for (l, m) in coeff.iter().enumerate() {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("N_{l} is not {n}x{n}")));
            }
            data.extend(m.iter().flatten());
        }
        let mut fr = FusionRing {
            n,
            data,
            conj: Vec::new(),
        };
        let mut conj = Vec::with_capacity(n);
        for l in 0..n {
            let duals: Vec<usize> = (0..n).filter(|&m| fr.coeff(l, m, 0) == 1).collect();
            let zeros_elsewhere = (0..n).all(|m| fr.coeff(l, m, 0) <= 1);
            match duals.as_slice() {
                [d] if zeros_elsewhere => conj.push(*d),
                _ => {
                    return Err(Error::Inconsistent(format!(
                        "label {l} has no unique dual in the fusion ring"
                    )))
                }
            }
        }
        fr.conj = conj;
        fr.check_axioms().map_err(Error::Inconsistent)?;
        Ok(fr)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, l: usize, m: usize, nu: usize) -> u32 {
        self.data[(l * self.n + m) * self.n + nu]
    }

    pub fn conj(&self, l: usize) -> usize {
        self.conj[l]
    }

    pub fn conjugation(&self) -> &[usize] {
        &self.conj
    }

    pub fn matrix(&self, l: usize) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |m, nu| self.coeff(l, m, nu) as i64)
    }

    pub fn matrices(&self) -> Vec<IntMatrix> {
        (0..self.n).map(|l| self.matrix(l)).collect()
    }

    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let n = self.n;
        if self.matrix(0) != IntMatrix::identity(n) {
            return Err("N_0 is not the identity".into());
        }
        for l in 0..n {
            for m in 0..n {
                for nu in 0..n {
                    if self.coeff(l, m, nu) != self.coeff(m, l, nu) {
                        return Err(format!("N_{l}{m}^{nu} is not commutative"));
                    }
                    if self.coeff(l, m, nu) != self.coeff(self.conj[l], nu, m) {
                        return Err(format!("N_{l} transposed differs from N_{}", self.conj[l]));
                    }
                }
            }
        }
        let mats = self.matrices();
        for l in 0..n {
            for m in 0..n {
                let lhs = &mats[l] * &mats[m];
                let mut rhs = IntMatrix::zeros(n, n);
                for nu in 0..n {
                    let c = self.coeff(l, m, nu) as i64;
                    if c != 0 {
                        rhs = &rhs + &mats[nu].scale(c);
                    }
                }
                if lhs != rhs {
                    return Err(format!("associativity fails for N_{l} N_{m}"));
                }
            }
        }
        Ok(())
    }

    /// Multiplicities of the fusion product of `labels`, starting from the vacuum.
    pub fn product_vector(&self, labels: &[usize]) -> Vec<i64> {
        let mut v = vec![0i64; self.n];
        v[0] = 1;
        for &l in labels {
            let mut w = vec![0i64; self.n];
            for (m, &vm) in v.iter().enumerate() {
                if vm != 0 {
                    for (nu, wn) in w.iter_mut().enumerate() {
                        *wn += vm * self.coeff(l, m, nu) as i64;
                    }
                }
            }
            v = w;
        }
        v
    }
}

/// Fusion ring from the Verlinde formula, every coefficient snapped to an integer.
pub fn verlinde(md: &ModularData, tol: &ToleranceConfig) -> Result<FusionRing> {
    let n = md.rank();
    let p = md.precision();
    let s = md.s_matrix();
    // S_{μσ} conj(S_{νσ}) / S_{0σ} is shared by every λ.
    let ratio: Vec<Vec<BigComplex>> = (0..n)
        .map(|l| (0..n).map(|sg| s.get(l, sg) / s.get(0, sg)).collect())
        .collect();
    let snapped: Vec<(usize, usize, usize, std::result::Result<u32, f64>)> = (0..n * n)
        .into_par_iter()
        .flat_map_iter(|lm| {
            let (l, m) = (lm / n, lm % n);
            let ratio = &ratio;
            (0..n).map(move |nu| {
                let mut acc = BigComplex::zero(p);
                for sg in 0..n {
                    let term = &(&ratio[l][sg] * s.get(m, sg)) * &s.get(nu, sg).conj();
                    acc = &acc + &term;
                }
                let r = match snap_to_integer(&acc, tol.snap_eps) {
                    Some(k) if k >= 0 => Ok(k as u32),
                    _ => {
                        let k = acc.re.round_i64().unwrap_or(0);
                        Err(acc.dist(&BigComplex::from_i64(k, p)).max(if k < 0 { 1.0 } else { 0.0 }))
                    }
                };
                (l, m, nu, r)
            })
        })
        .collect();
    let mut coeff = vec![vec![vec![0u32; n]; n]; n];
    let mut worst: Option<(usize, usize, usize, f64)> = None;
    for (l, m, nu, r) in snapped {
        match r {
            Ok(k) => coeff[l][m][nu] = k,
            Err(d) => {
                if worst.is_none_or(|w| d > w.3) {
                    worst = Some((l, m, nu, d));
                }
            }
        }
    }
    if let Some((l, m, nu, d)) = worst {
        return Err(Error::NotIntegral(format!(
            "Verlinde coefficient N_{{{l},{m}}}^{{{nu}}} is off an integer by {d:.3e}"
        )));
    }
    FusionRing::from_coefficients(coeff)
}

/// Labels with `d_λ = 1`.
pub fn simple_currents(md: &ModularData, tol: &ToleranceConfig) -> Vec<usize> {
    let p = md.precision();
    let ev = Real::from_f64(tol.validation_eps, p);
    quantum_dims(md)
        .iter()
        .enumerate()
        .filter(|(_, d)| (*d - &Real::one(p)).abs() <= ev)
        .map(|(l, _)| l)
        .collect()
}

/// `ν_λ = (1/ω) Σ_{μ,ν} N_{μν}^λ d_μ d_ν (T_μ/T_ν)²`, snapped to {−1, 0, 1}.
pub fn fs_indicators(md: &ModularData, fr: &FusionRing, tol: &ToleranceConfig) -> Result<Vec<i8>> {
    let n = md.rank();
    let p = md.precision();
    let d = quantum_dims(md);
    let omega = global_index(md).omega;
    let ratio2: Vec<Vec<BigComplex>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|nu| {
                    let r = md.t(m) / md.t(nu);
                    &r * &r
                })
                .collect()
        })
        .collect();
    (0..n)
        .into_par_iter()
        .map(|l| {
            let mut acc = BigComplex::zero(p);
            for m in 0..n {
                for nu in 0..n {
                    let c = fr.coeff(m, nu, l);
                    if c != 0 {
                        let w = Real::from_u64(c as u64, p) * &d[m] * &d[nu];
                        acc = &acc + &ratio2[m][nu].scale(&w);
                    }
                }
            }
            let v = BigComplex::new(&acc.re / &omega, &acc.im / &omega);
            match snap_to_integer(&v, tol.snap_eps) {
                Some(k @ -1..=1) => Ok(k as i8),
                _ => Err(Error::NotIntegral(format!(
                    "FS indicator of label {l} = {v:.6} is not in {{-1, 0, 1}}"
                ))),
            }
        })
        .collect()
}
