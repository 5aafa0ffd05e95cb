//! Built-in modular data and the JSON data-file format.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular_data::{validate, ModularData, ModularSource, ValidationReport};
use crate::scalars::{ScalarExpr, ToleranceConfig};

const D: &str = "(1+sqrt(3))";
const LAMBDA: &str = "(2+(1+sqrt(3))*(1+sqrt(3)))";

/// Entries of λ·S for the quantum double of the even E6 system, `d = 1+√3`.
const E6_DOUBLE_S: [[&str; 10]; 10] = [
    ["1", "1", "1+d", "1+d", "2+d", "d", "d", "d", "d", "d"],
    ["1", "1", "1+d", "1+d", "-2-d", "d", "d", "-d", "-d", "-d"],
    ["1+d", "1+d", "1", "1", "2+d", "-d", "-d", "-d", "-d", "-d"],
    ["1+d", "1+d", "1", "1", "-2-d", "-d", "-d", "d", "d", "d"],
    ["2+d", "-2-d", "2+d", "-2-d", "0", "0", "0", "0", "0", "0"],
    ["d", "d", "-d", "-d", "0", "d", "d", "-d", "-d", "2*d"],
    ["d", "d", "-d", "-d", "0", "d", "d", "d", "d", "-2*d"],
    ["d", "-d", "-d", "d", "0", "-d", "d", "-2*i-d*i", "2*i+d*i", "0"],
    ["d", "-d", "-d", "d", "0", "-d", "d", "2*i+d*i", "-2*i-d*i", "0"],
    ["d", "-d", "-d", "d", "0", "2*d", "-2*d", "0", "0", "0"],
];

const E6_DOUBLE_T: [&str; 10] = [
    "1", "-1", "1", "-1", "1", "e(1,6)", "e(2,3)", "e(5,12)", "e(5,12)", "e(3,4)",
];

fn e6_entry(raw: &str) -> String {
    if raw == "0" {
        return "0".into();
    }
    format!("({})/{LAMBDA}", raw.replace('d', D))
}

/// Exact source of the E6 double, shared by the builtin and its fixtures.
pub fn e6_double_source() -> ModularSource {
    let parse = |s: &str| ScalarExpr::parse(s).expect("builtin expression");
    ModularSource {
        s: E6_DOUBLE_S
            .iter()
            .map(|row| row.iter().map(|x| parse(&e6_entry(x))).collect())
            .collect(),
        t: E6_DOUBLE_T.iter().map(|x| parse(x)).collect(),
    }
}

/// Quantum double of the even E6 system: ten labels, 0 to 9.
pub fn builtin_e6_double(tol: &ToleranceConfig) -> Result<ModularData> {
    let labels = (0..10).map(|i| i.to_string()).collect();
    ModularData::from_source("e6-double", labels, e6_double_source(), tol)
}

/// SU(2) at level `k` in the Kac–Peterson normalization, labels `0..=k`.
///
/// Sines are written as `(e(m,2n) - e(-m,2n))/(2i)` so the data stays exact.
pub fn builtin_su2(k: u32, tol: &ToleranceConfig) -> Result<ModularData> {
    if k == 0 {
        return Err(Error::Config("SU(2) level must be at least 1".into()));
    }
    let n = k as u64 + 2;
    let parse = |s: String| ScalarExpr::parse(&s).expect("builtin expression");
    let s = (0..=k as u64)
        .map(|a| {
            (0..=k as u64)
                .map(|b| {
                    let m = (a + 1) * (b + 1);
                    parse(format!(
                        "(e({m},{q})-e(-{m},{q}))*sqrt({q})/(2*{n}*i)",
                        q = 2 * n
                    ))
                })
                .collect()
        })
        .collect();
    let t = (0..=k as i64)
        .map(|a| parse(format!("e({},{})", 2 * a * (a + 2) - k as i64, 8 * n)))
        .collect();
    let labels = (0..=k).map(|i| i.to_string()).collect();
    ModularData::from_source(format!("su2-{k}"), labels, ModularSource { s, t }, tol)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// On-disk form of modular data. Every entry is an expression string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataFile {
    pub name: String,
    pub labels: Vec<String>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<String>>,
    #[serde(rename = "T")]
    pub t: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl DataFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical text: pretty JSON, canonical expression spelling, trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_modular_data(md: &ModularData) -> Result<Self> {
        let src = md.source().ok_or_else(|| {
            Error::Config("only data with an exact source can be saved".into())
        })?;
        Ok(DataFile {
            name: md.name().to_string(),
            labels: md.labels().to_vec(),
            s: src
                .s
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            t: src.t.iter().map(ToString::to_string).collect(),
            metadata: None,
        })
    }

    pub fn to_source(&self) -> Result<ModularSource> {
        let n = self.labels.len();
        if self.s.len() != n {
            return Err(Error::Dimension(format!(
                "{n} labels but S has {} rows",
                self.s.len()
            )));
        }
        if let Some((i, r)) = self.s.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!(
                "S row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        if self.t.len() != n {
            return Err(Error::Dimension(format!(
                "{n} labels but T has {} entries",
                self.t.len()
            )));
        }
        let s = self
            .s
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| {
                        ScalarExpr::parse(x).map_err(|e| e.located(format!("S[{i}][{j}]")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let t = self
            .t
            .iter()
            .enumerate()
            .map(|(i, x)| ScalarExpr::parse(x).map_err(|e| e.located(format!("T[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModularSource { s, t })
    }

    pub fn to_modular_data(&self, tol: &ToleranceConfig) -> Result<ModularData> {
        ModularData::from_source(self.name.clone(), self.labels.clone(), self.to_source()?, tol)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    pub validate: bool,
    pub strict_phase: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            validate: true,
            strict_phase: false,
        }
    }
}

/// Parses and evaluates a data file, validating unless told otherwise.
pub fn load_str(text: &str, tol: &ToleranceConfig, opts: LoadOptions) -> Result<ModularData> {
    let md = DataFile::from_json(text)?.to_modular_data(tol)?;
    if opts.validate {
        validate(&md, tol, opts.strict_phase)?.into_result()?;
    }
    Ok(md)
}

pub fn load(path: impl AsRef<Path>, tol: &ToleranceConfig, opts: LoadOptions) -> Result<ModularData> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    load_str(&text, tol, opts).map_err(|e| match e {
        Error::Json(_) | Error::Io(_) => e.located(path.display().to_string()),
        other => other,
    })
}

pub fn save(md: &ModularData, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, DataFile::from_modular_data(md)?.to_json()?)?;
    Ok(())
}

/// Validation shorthand used by callers that only need pass/fail.
pub fn validated(md: ModularData, tol: &ToleranceConfig, strict_phase: bool) -> Result<(ModularData, ValidationReport)> {
    let rep = validate(&md, tol, strict_phase)?.into_result()?;
    Ok((md, rep))
}
