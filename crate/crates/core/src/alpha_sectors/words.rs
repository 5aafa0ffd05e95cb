use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{iota_gram, CanonicalObject};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::modular_data::{global_index, quantum_dims, FusionRing, ModularData};
use crate::scalars::Real;

/// Product `α_{λ1}⁺ ⋯ α_{μ1}⁻ ⋯` of induced sectors. The vacuum label is dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SectorWord {
    plus: Vec<usize>,
    minus: Vec<usize>,
}

impl SectorWord {
    pub fn new(mut plus: Vec<usize>, mut minus: Vec<usize>) -> Self {
        plus.retain(|&l| l != 0);
        minus.retain(|&l| l != 0);
        plus.sort_unstable();
        minus.sort_unstable();
        SectorWord { plus, minus }
    }

    pub fn identity() -> Self {
        SectorWord::new(Vec::new(), Vec::new())
    }

    pub fn plus(l: usize) -> Self {
        SectorWord::new(vec![l], Vec::new())
    }

    pub fn minus(l: usize) -> Self {
        SectorWord::new(Vec::new(), vec![l])
    }

    pub fn pair(l: usize, m: usize) -> Self {
        SectorWord::new(vec![l], vec![m])
    }

    pub fn plus_labels(&self) -> &[usize] {
        &self.plus
    }

    pub fn minus_labels(&self) -> &[usize] {
        &self.minus
    }

    pub fn is_identity(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Concatenation `self · other`.
    pub fn compose(&self, other: &SectorWord) -> SectorWord {
        SectorWord::new(
            self.plus.iter().chain(&other.plus).copied().collect(),
            self.minus.iter().chain(&other.minus).copied().collect(),
        )
    }

    /// Every label replaced by its conjugate.
    pub fn conj(&self, fr: &FusionRing) -> SectorWord {
        SectorWord::new(
            self.plus.iter().map(|&l| fr.conj(l)).collect(),
            self.minus.iter().map(|&l| fr.conj(l)).collect(),
        )
    }

    /// Quantum dimension `Π d_λ`.
    pub fn dimension(&self, dims: &[Real]) -> Real {
        let p = dims[0].precision();
        self.plus
            .iter()
            .chain(&self.minus)
            .fold(Real::one(p), |acc, &l| acc * &dims[l])
    }
}

impl fmt::Display for SectorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for l in &self.plus {
            write!(f, "a{l}+")?;
        }
        for l in &self.minus {
            write!(f, "a{l}-")?;
        }
        Ok(())
    }
}

/// Parses `id`, generator notation `+5`/`-5`, or a product such as `a1+a5-`.
impl FromStr for SectorWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::Syntax {
            offset: 0,
            message: format!("sector word `{s}`: {msg}"),
        };
        if s == "id" {
            return Ok(SectorWord::identity());
        }
        if let Some(rest) = s.strip_prefix('+') {
            return rest.parse().map(SectorWord::plus).map_err(|_| bad("expected a label index"));
        }
        if let Some(rest) = s.strip_prefix('-') {
            return rest.parse().map(SectorWord::minus).map_err(|_| bad("expected a label index"));
        }
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        let mut rest = s;
        while !rest.is_empty() {
            rest = rest.strip_prefix('a').ok_or_else(|| bad("expected `a`"))?;
            let end = rest.find(['+', '-']).ok_or_else(|| bad("missing sign"))?;
            let l: usize = rest[..end].parse().map_err(|_| bad("expected a label index"))?;
            if rest.as_bytes()[end] == b'+' {
                plus.push(l);
            } else {
                minus.push(l);
            }
            rest = &rest[end + 1..];
        }
        Ok(SectorWord::new(plus, minus))
    }
}

/// `⟨w1, w2⟩ = Σ u_ξ v_η Z_{ξη}` with `u = w1⁺ ⊗ conj(w2⁺)` and `v = w2⁻ ⊗ conj(w1⁻)`.
pub fn word_pair(w1: &SectorWord, w2: &SectorWord, fr: &FusionRing, z: &IntMatrix) -> i64 {
    let u_labels: Vec<usize> = w1
        .plus
        .iter()
        .copied()
        .chain(w2.plus.iter().map(|&l| fr.conj(l)))
        .collect();
    let v_labels: Vec<usize> = w2
        .minus
        .iter()
        .copied()
        .chain(w1.minus.iter().map(|&l| fr.conj(l)))
        .collect();
    let u = fr.product_vector(&u_labels);
    let v = fr.product_vector(&v_labels);
    bilinear(&u, z, &v)
}

pub(crate) fn bilinear(u: &[i64], m: &IntMatrix, v: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, &ui) in u.iter().enumerate() {
        if ui != 0 {
            for (j, &vj) in v.iter().enumerate() {
                if vj != 0 {
                    acc += ui * vj * m.get(i, j);
                }
            }
        }
    }
    acc
}

/// `⟨α_λ⁺α_μ⁻, γ⟩ = G_{λ,μ̄}` with `G` the ι-Gram matrix of θ.
pub fn gamma_pairing(l: usize, m: usize, theta: &CanonicalObject, fr: &FusionRing) -> i64 {
    iota_gram(theta, fr).get(l, fr.conj(m))
}

/// `⟨w, γ⟩ = Σ u_ξ v_η G_{ξ,η̄}` with `u = w⁺`, `v = w⁻` as multiplicity vectors.
pub fn word_gamma_pairing(w: &SectorWord, g: &IntMatrix, fr: &FusionRing) -> i64 {
    let u = fr.product_vector(&w.plus);
    let v = fr.product_vector(&w.minus);
    let n = fr.rank();
    let gc = IntMatrix::from_fn(n, n, |a, b| g.get(a, fr.conj(b)));
    bilinear(&u, &gc, &v)
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemCounts {
    /// `#C = Tr(ZZᵗ)`.
    pub full_count: i64,
    #[serde(serialize_with = "ser_real")]
    pub omega: Real,
    /// `ω± = ω / Σ_λ Z_{λ0} d_λ`.
    #[serde(serialize_with = "ser_real")]
    pub omega_pm: Real,
    /// `ω₀ = ω±² / ω`.
    #[serde(serialize_with = "ser_real")]
    pub omega_0: Real,
}

fn ser_real<S: serde::Serializer>(x: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(x.to_f64())
}

pub fn system_counts(z: &IntMatrix, md: &ModularData) -> Result<SystemCounts> {
    let p = md.precision();
    let dims = quantum_dims(md);
    let omega = global_index(md).omega;
    let mut weight = Real::zero(p);
    for (l, d) in dims.iter().enumerate() {
        let c = z.get(l, 0);
        if c != 0 {
            weight = weight + Real::from_i64(c, p) * d;
        }
    }
    if weight.is_zero() {
        return Err(Error::Inconsistent("vacuum column of Z is zero".into()));
    }
    let omega_pm = &omega / &weight;
    let omega_0 = omega_pm.square() / &omega;
    Ok(SystemCounts {
        full_count: z.entries().iter().map(|x| x * x).sum(),
        omega,
        omega_pm,
        omega_0,
    })
}
