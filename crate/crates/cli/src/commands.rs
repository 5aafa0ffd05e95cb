use modinv::alpha_sectors::{factor_type_one, theta_from_vacuum_column, SectorWord};
use modinv::catalog::{self, LoadOptions};
use modinv::modular_data::global_index;
use modinv::{
    builtin_e6_double, builtin_su2, commutant_basis, enumerate_invariants, fs_indicators, full_system, fusion_graph,
    fusion_table, gram_factorize, invariant_names, iota_gram, match_invariant, quantum_dims, validate, verlinde,
    CanonicalObject, EnumerateOptions, Error, FusionRing, ModularData, ModularInvariant, Result, ToleranceConfig,
};
use serde_json::json;

use crate::render::{csv, float, json, matrix_rows, table};
use crate::{Builtin, EnumArgs, Format, InputArgs};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn load(input: &InputArgs, tol: &ToleranceConfig, check: bool) -> Result<ModularData> {
    let md = match (&input.file, input.builtin) {
        (Some(path), _) => {
            return catalog::load(
                path,
                tol,
                LoadOptions {
                    validate: check,
                    strict_phase: input.strict_phase,
                },
            )
        }
        (None, Some(Builtin::E6Double)) => builtin_e6_double(tol)?,
        (None, Some(Builtin::Su2)) => builtin_su2(input.level, tol)?,
        (None, None) => return Err(Error::Config("no input: pass a data file or --builtin".into())),
    };
    if check {
        validate(&md, tol, input.strict_phase)?.into_result()?;
    }
    Ok(md)
}

fn reject_dot(input: &InputArgs) -> Result<()> {
    if input.format == Format::Dot {
        return Err(Error::Config("--format dot is only available for `graph`".into()));
    }
    Ok(())
}

fn options(opts: &EnumArgs) -> EnumerateOptions {
    EnumerateOptions {
        normalized: !opts.unnormalized,
        max_vacuum: opts.max_vacuum,
    }
}

struct Pipeline {
    md: ModularData,
    fr: FusionRing,
    tol: ToleranceConfig,
}

fn pipeline(input: &InputArgs) -> Result<Pipeline> {
    let tol = input.tolerances()?;
    let md = load(input, &tol, true)?;
    let fr = verlinde(&md, &tol)?;
    Ok(Pipeline { md, fr, tol })
}

fn invariants(p: &Pipeline, opts: EnumerateOptions) -> Result<(usize, Vec<ModularInvariant>)> {
    let basis = commutant_basis(&p.md, &p.tol)?;
    let zs = enumerate_invariants(&p.md, &basis, opts, &p.tol)?;
    Ok((basis.dim(), zs))
}

fn labels_list(labels: &[usize]) -> String {
    labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn validate_cmd(input: &InputArgs) -> Result<Output> {
    reject_dot(input)?;
    let tol = input.tolerances()?;
    let md = load(input, &tol, false)?;
    let rep = validate(&md, &tol, input.strict_phase)?;
    let code = if rep.passed() { 0 } else { 1 };
    let rows: Vec<Vec<String>> = rep
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
                format!("{:.3e}", c.residual),
                c.detail.clone(),
            ]
        })
        .collect();
    let header = ["check", "status", "residual", "detail"];
    let text = match input.format {
        Format::Json => json(&json!({
            "name": md.name(),
            "precision": md.precision(),
            "passed": rep.passed(),
            "report": rep,
        })),
        Format::Csv => csv(&header, &rows),
        _ => {
            let mut t = format!("{}: {} labels, {} bits\n", md.name(), md.rank(), md.precision());
            t.push_str(&table(&header, &rows));
            if let Some((re, im)) = rep.phase {
                t.push_str(&format!("phase μ = {re:.12} {im:+.12}i\n"));
            }
            t.push_str(if rep.passed() { "valid\n" } else { "invalid\n" });
            t
        }
    };
    Ok(Output { text, code })
}

pub fn dims(input: &InputArgs) -> Result<Output> {
    reject_dot(input)?;
    let p = pipeline(input)?;
    let d = quantum_dims(&p.md);
    let omega = global_index(&p.md).omega.to_f64();
    let fs = fs_indicators(&p.md, &p.fr, &p.tol)?;
    let rows: Vec<Vec<String>> = (0..p.md.rank())
        .map(|l| {
            vec![
                l.to_string(),
                p.md.labels()[l].clone(),
                float(d[l].to_f64()),
                p.fr.conj(l).to_string(),
                fs[l].to_string(),
            ]
        })
        .collect();
    let header = ["index", "label", "dim", "conj", "fs"];
    let text = match input.format {
        Format::Json => json(&json!({
            "omega": omega,
            "labels": p.md.labels(),
            "dims": d.iter().map(|x| x.to_f64()).collect::<Vec<_>>(),
            "conjugation": p.fr.conjugation(),
            "fs_indicators": fs,
        })),
        Format::Csv => csv(&header, &rows),
        _ => format!("{}global index ω = {}\n", table(&header, &rows), float(omega)),
    };
    Ok(Output::ok(text))
}

pub fn fusion(input: &InputArgs, label: Option<usize>) -> Result<Output> {
    reject_dot(input)?;
    let p = pipeline(input)?;
    let n = p.md.rank();
    let which: Vec<usize> = match label {
        Some(l) if l < n => vec![l],
        Some(l) => return Err(Error::Config(format!("label {l} out of range 0..{n}"))),
        None => (0..n).collect(),
    };
    let text = match input.format {
        Format::Json => json(&json!({
            "N": which.iter().map(|&l| (l.to_string(), json!(p.fr.matrix(l).to_rows()))).collect::<serde_json::Map<_, _>>(),
        })),
        Format::Csv => {
            let mut header = vec!["label".to_string(), "row".to_string()];
            header.extend((0..n).map(|c| c.to_string()));
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = which
                .iter()
                .flat_map(|&l| matrix_rows(&[l.to_string()], &p.fr.matrix(l)))
                .collect();
            csv(&h, &rows)
        }
        _ => which
            .iter()
            .map(|&l| format!("N{l}\n{}", p.fr.matrix(l)))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Output::ok(text))
}

pub fn enumerate(input: &InputArgs, opts: &EnumArgs) -> Result<Output> {
    reject_dot(input)?;
    let p = pipeline(input)?;
    let (dim, zs) = invariants(&p, options(opts))?;
    let names = invariant_names(&zs);
    let text = match input.format {
        Format::Json => json(&json!({
            "commutant_dimension": dim,
            "invariants": zs.iter().zip(&names).map(|(z, name)| json!({
                "name": name,
                "trace": z.trace(),
                "flags": z.flags(),
                "matrix": z.matrix().to_rows(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let n = p.md.rank();
            let mut header = vec!["name".to_string(), "row".to_string()];
            header.extend((0..n).map(|c| c.to_string()));
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = zs
                .iter()
                .zip(&names)
                .flat_map(|(z, name)| matrix_rows(std::slice::from_ref(name), z.matrix()))
                .collect();
            csv(&h, &rows)
        }
        _ => {
            let mut t = format!("commutant dimension {dim}, {} invariants\n", zs.len());
            for (z, name) in zs.iter().zip(&names) {
                let f = z.flags();
                t.push_str(&format!(
                    "\n{name}  trace {}{}{}\n{}",
                    z.trace(),
                    if f.permutation { "  permutation" } else { "" },
                    if f.symmetric { "" } else { "  asymmetric" },
                    z.matrix()
                ));
            }
            t
        }
    };
    Ok(Output::ok(text))
}

pub fn fuse_table(input: &InputArgs, opts: &EnumArgs) -> Result<Output> {
    reject_dot(input)?;
    let p = pipeline(input)?;
    let (_, zs) = invariants(&p, options(opts))?;
    let names = invariant_names(&zs);
    let t = fusion_table(&zs, &names)?;
    let rows: Vec<Vec<String>> = (0..zs.len())
        .map(|a| {
            std::iter::once(names[a].clone())
                .chain((0..zs.len()).map(|b| t.render_cell(a, b)))
                .collect()
        })
        .collect();
    let mut header = vec![""];
    header.extend(names.iter().map(String::as_str));
    let text = match input.format {
        Format::Json => json(&json!({ "names": t.names, "cells": t.cells })),
        Format::Csv => csv(&header, &rows),
        _ => table(&header, &rows),
    };
    Ok(Output::ok(text))
}

fn parse_theta(labels: &[usize], fr: &FusionRing) -> Result<CanonicalObject> {
    CanonicalObject::from_labels(labels, fr)
}

pub fn sectors(input: &InputArgs, theta: &[usize]) -> Result<Output> {
    reject_dot(input)?;
    let p = pipeline(input)?;
    let th = parse_theta(theta, &p.fr)?;
    let g = iota_gram(&th, &p.fr);
    let facts = gram_factorize(&g)?;
    let (_, zs) = invariants(&p, EnumerateOptions::default())?;
    let names = invariant_names(&zs);
    let matched = match_invariant(&th, &p.fr, &zs)
        .ok()
        .and_then(|z| zs.iter().position(|x| *x == z))
        .map(|i| names[i].clone());
    let text = match input.format {
        Format::Json => json(&json!({
            "theta": th.labels(),
            "gram": g.to_rows(),
            "factorizations": facts.iter().map(|b| b.matrix().to_rows()).collect::<Vec<_>>(),
            "invariant": matched,
        })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = facts
                .iter()
                .enumerate()
                .flat_map(|(i, b)| matrix_rows(&[i.to_string()], b.matrix()))
                .collect();
            let mut header = vec!["factorization".to_string(), "row".to_string()];
            header.extend((0..p.md.rank()).map(|c| c.to_string()));
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            csv(&h, &rows)
        }
        _ => {
            let mut t = format!("θ = {}\nι-Gram matrix\n{}", labels_list(&th.labels()), g);
            for (i, b) in facts.iter().enumerate() {
                t.push_str(&format!("\nfactorization {} ({} sectors)\n{}", i + 1, b.rows(), b.matrix()));
            }
            t.push_str(&format!("\nmatching invariant: {}\n", matched.as_deref().unwrap_or("none")));
            t
        }
    };
    Ok(Output::ok(text))
}

fn select(p: &Pipeline, name: &str, theta: Option<&[usize]>) -> Result<(ModularInvariant, CanonicalObject)> {
    let (_, zs) = invariants(p, EnumerateOptions::default())?;
    let names = invariant_names(&zs);
    let i = names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Config(format!("no invariant named {name}; have {}", names.join(", "))))?;
    let z = zs[i].clone();
    let th = match theta {
        Some(l) => parse_theta(l, &p.fr)?,
        None => {
            if factor_type_one(&z).is_err() {
                return Err(Error::Config(format!(
                    "{name} is not of type I, so θ cannot be read off its vacuum column; pass --theta"
                )));
            }
            theta_from_vacuum_column(z.matrix(), &p.fr)?
        }
    };
    Ok((z, th))
}

pub fn full_system_cmd(input: &InputArgs, name: &str, theta: Option<&[usize]>) -> Result<Output> {
    reject_dot(input)?;
    let p = pipeline(input)?;
    let (z, th) = select(&p, name, theta)?;
    let fs = full_system(z.matrix(), &th, &p.md, &p.fr, &p.tol)?;
    let code = if fs.violations.is_empty() { 0 } else { 1 };
    let header = ["sector", "block", "sheet", "dim", "C+", "C-", "in γ"];
    let flag = |b: bool| if b { "yes" } else { "" }.to_string();
    let rows: Vec<Vec<String>> = fs
        .sectors
        .iter()
        .map(|s| {
            let b = &fs.blocks[s.block];
            vec![
                s.name.clone(),
                b.name.clone(),
                (b.sheet + 1).to_string(),
                float(b.dim.to_f64()),
                flag(s.plus),
                flag(s.minus),
                flag(s.in_gamma),
            ]
        })
        .collect();
    let text = match input.format {
        Format::Json => json(&json!({
            "invariant": name,
            "theta": th.labels(),
            "system": fs,
        })),
        Format::Csv => csv(&header, &rows),
        _ => {
            let c = &fs.counts;
            let mut t = format!(
                "{name}, θ = {}: {} irreducible sectors in {} sheet(s)\nω = {}  ω± = {}  ω₀ = {}\n|C⁺| = {}  |C⁻| = {}  |C⁰| = {}\n\n",
                labels_list(&th.labels()),
                fs.irreducible_count(),
                fs.sheets.len(),
                float(c.omega.to_f64()),
                float(c.omega_pm.to_f64()),
                float(c.omega_0.to_f64()),
                fs.chiral_plus().len(),
                fs.chiral_minus().len(),
                fs.ambichiral().len(),
            );
            t.push_str(&table(&header, &rows));
            for v in &fs.violations {
                t.push_str(&format!("violation: {v}\n"));
            }
            t
        }
    };
    Ok(Output { text, code })
}

pub fn graph(input: &InputArgs, name: &str, theta: Option<&[usize]>, generator: &str) -> Result<Output> {
    let p = pipeline(input)?;
    let g: SectorWord = generator.parse()?;
    if g.plus_labels().iter().chain(g.minus_labels()).any(|&l| l >= p.md.rank()) {
        return Err(Error::Config(format!("generator {generator} uses an unknown label")));
    }
    let (z, th) = select(&p, name, theta)?;
    let fs = full_system(z.matrix(), &th, &p.md, &p.fr, &p.tol)?;
    let graph = fusion_graph(&g, &fs, &p.fr)?;
    let text = match input.format {
        Format::Dot => graph.dot.clone(),
        Format::Json => json(&json!({
            "generator": graph.generator,
            "nodes": graph.nodes,
            "adjacency": graph.adjacency.to_rows(),
        })),
        Format::Csv | Format::Table => {
            let mut header = vec![""];
            header.extend(graph.nodes.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = (0..graph.nodes.len())
                .map(|a| {
                    std::iter::once(graph.nodes[a].clone())
                        .chain(graph.adjacency.row(a).iter().map(ToString::to_string))
                        .collect()
                })
                .collect();
            if input.format == Format::Csv {
                csv(&header, &rows)
            } else {
                format!("fusion graph of {}\n{}", graph.generator, table(&header, &rows))
            }
        }
    };
    Ok(Output::ok(text))
}
