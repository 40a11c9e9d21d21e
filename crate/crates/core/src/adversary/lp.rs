//! CPLEX-style LP text for [`MilpModel`], and a reader for exactly the
//! subset this writer produces.
//!
//! The `Bounds` section lists every variable in registry order, so reading a
//! file back restores the model exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

use super::milp::{Constraint, MilpModel, Sense, VarKind, Variable};

const HEADER: &str = "\\ ringload worst-case model";

pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let flag = |b: bool| if b { 1 } else { 0 };
    writeln!(
        out,
        "{HEADER} m={} reduce={} symmetry={} bigm={}",
        model.m,
        flag(model.reduced),
        flag(model.symmetry_break),
        format_rational(&model.big_m)
    )
    .unwrap();
    out.push_str("Maximize\n");
    writeln!(out, " obj: {}", model.variables[model.objective].name).unwrap();
    out.push_str("Subject To\n");
    for c in &model.constraints {
        write!(out, " {}:", c.name).unwrap();
        if c.terms.is_empty() {
            out.push_str(" 0");
        }
        for (k, (var, coef)) in c.terms.iter().enumerate() {
            let name = &model.variables[*var].name;
            let negative = coef < &int(0);
            let mag = if negative { -coef.clone() } else { coef.clone() };
            let sign = match (k, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => "+ ",
                (_, true) => "- ",
            };
            if mag == int(1) {
                write!(out, " {sign}{name}").unwrap();
            } else {
                write!(out, " {sign}{} {name}", format_rational(&mag)).unwrap();
            }
        }
        writeln!(out, " {} {}", c.sense.symbol(), format_rational(&c.rhs)).unwrap();
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        match (&v.lower, &v.upper) {
            (None, None) => writeln!(out, " {} free", v.name),
            (Some(l), None) => writeln!(out, " {} >= {}", v.name, format_rational(l)),
            (None, Some(u)) => writeln!(out, " -inf <= {} <= {}", v.name, format_rational(u)),
            (Some(l), Some(u)) => writeln!(out, " {} <= {} <= {}", format_rational(l), v.name, format_rational(u)),
        }
        .unwrap();
    }
    out.push_str("Binaries\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Binary) {
        writeln!(out, " {}", v.name).unwrap();
    }
    out.push_str("End\n");
    out
}

pub fn write_lp(model: &MilpModel, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, export_lp(model))
}

/// Named terms, sense and right-hand side of one constraint row.
type ParsedRow = (Vec<(String, Rational)>, Sense, Rational);

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Done,
}

pub fn read_lp(text: &str) -> Result<MilpModel> {
    let err = |line: usize, msg: &str| Error::LpParse {
        line,
        msg: msg.to_string(),
    };
    let mut section = Section::Preamble;
    let mut header: Option<(usize, bool, bool, Rational)> = None;
    let mut objective_name = None;
    let mut raw_constraints: Vec<(usize, String, ParsedRow)> = Vec::new();
    let mut variables: Vec<Variable> = Vec::new();
    let mut binaries: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(HEADER) {
            header = Some(parse_header(rest).ok_or_else(|| err(line_no, "bad header"))?);
            continue;
        }
        if line.starts_with('\\') {
            continue;
        }
        match line {
            "Maximize" => {
                section = Section::Objective;
                continue;
            }
            "Subject To" => {
                section = Section::Constraints;
                continue;
            }
            "Bounds" => {
                section = Section::Bounds;
                continue;
            }
            "Binaries" => {
                section = Section::Binaries;
                continue;
            }
            "End" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Preamble | Section::Done => return Err(err(line_no, "text outside any section")),
            Section::Objective => {
                let name = line.strip_prefix("obj:").ok_or_else(|| err(line_no, "expected `obj:`"))?;
                objective_name = Some(name.trim().to_string());
            }
            Section::Constraints => {
                let (name, body) = line.split_once(':').ok_or_else(|| err(line_no, "constraint without name"))?;
                let (terms, sense, rhs) = parse_row(body).ok_or_else(|| err(line_no, "malformed row"))?;
                raw_constraints.push((line_no, name.trim().to_string(), (terms, sense, rhs)));
            }
            Section::Bounds => {
                variables.push(parse_bound(line).ok_or_else(|| err(line_no, "malformed bound"))?);
            }
            Section::Binaries => binaries.push((line_no, line.to_string())),
        }
    }
    if section != Section::Done {
        return Err(err(text.lines().count(), "missing End"));
    }
    let (m, reduced, symmetry_break, big_m) = header.ok_or_else(|| err(1, "missing header"))?;

    let positions: std::collections::HashMap<String, usize> =
        variables.iter().enumerate().map(|(k, v)| (v.name.clone(), k)).collect();
    let index = |name: &str| positions.get(name).copied();
    for (line_no, name) in &binaries {
        let k = index(name).ok_or_else(|| err(*line_no, "binary without bound"))?;
        variables[k].kind = VarKind::Binary;
    }
    let objective_name = objective_name.ok_or_else(|| err(1, "missing objective"))?;
    let objective = index(&objective_name).ok_or_else(|| err(1, "unknown objective variable"))?;
    let mut constraints = Vec::with_capacity(raw_constraints.len());
    for (line_no, name, (terms, sense, rhs)) in raw_constraints {
        let terms = terms
            .into_iter()
            .map(|(v, c)| index(&v).map(|k| (k, c)).ok_or_else(|| err(line_no, "unknown variable")))
            .collect::<Result<Vec<_>>>()?;
        constraints.push(Constraint {
            name,
            terms,
            sense,
            rhs,
        });
    }
    Ok(MilpModel {
        m,
        reduced,
        symmetry_break,
        variables,
        constraints,
        objective,
        big_m,
    })
}

fn parse_header(rest: &str) -> Option<(usize, bool, bool, Rational)> {
    let mut m = None;
    let mut reduced = None;
    let mut sym = None;
    let mut big_m = None;
    for field in rest.split_whitespace() {
        let (k, v) = field.split_once('=')?;
        match k {
            "m" => m = v.parse().ok(),
            "reduce" => reduced = Some(v == "1"),
            "symmetry" => sym = Some(v == "1"),
            "bigm" => big_m = parse_rational(v),
            _ => return None,
        }
    }
    Some((m?, reduced?, sym?, big_m?))
}

fn parse_row(body: &str) -> Option<ParsedRow> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let pos = tokens.iter().position(|t| matches!(*t, "<=" | ">=" | "="))?;
    let sense = match tokens[pos] {
        "<=" => Sense::Le,
        ">=" => Sense::Ge,
        _ => Sense::Eq,
    };
    if pos + 2 != tokens.len() {
        return None;
    }
    let rhs = parse_rational(tokens[pos + 1])?;
    let mut terms = Vec::new();
    let mut sign = int(1);
    let mut coef: Option<Rational> = None;
    let lhs = &tokens[..pos];
    if lhs == ["0"] {
        return Some((terms, sense, rhs));
    }
    for tok in lhs {
        match *tok {
            "+" => sign = int(1),
            "-" => sign = int(-1),
            t => {
                let (t, s) = match t.strip_prefix('-') {
                    Some(rest) if !rest.is_empty() && !rest.starts_with(|c: char| c.is_ascii_digit()) => {
                        (rest, int(-1))
                    }
                    _ => (t, int(1)),
                };
                if let Some(c) = parse_rational(t) {
                    coef = Some(c);
                } else {
                    let c = coef.take().unwrap_or_else(|| int(1));
                    terms.push((t.to_string(), &sign * s * c));
                    sign = int(1);
                }
            }
        }
    }
    if coef.is_some() {
        return None;
    }
    Some((terms, sense, rhs))
}

fn parse_bound(line: &str) -> Option<Variable> {
    let t: Vec<&str> = line.split_whitespace().collect();
    let var = |name: &str, lower, upper| Variable {
        name: name.to_string(),
        kind: VarKind::Continuous,
        lower,
        upper,
    };
    match t.as_slice() {
        [name, "free"] => Some(var(name, None, None)),
        [name, ">=", l] => Some(var(name, Some(parse_rational(l)?), None)),
        ["-inf", "<=", name, "<=", u] => Some(var(name, None, Some(parse_rational(u)?))),
        [l, "<=", name, "<=", u] => Some(var(name, Some(parse_rational(l)?), Some(parse_rational(u)?))),
        _ => None,
    }
}
