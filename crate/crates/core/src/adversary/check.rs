//! Solver-free evaluation of a [`MilpModel`] at a fixed routing.
//!
//! With `u, v` fixed, the remaining variables split into independent blocks
//! (one per pattern) that only meet through `E <= c_z`. Each block is solved
//! exactly: enumerate its binaries, eliminate every continuous variable but
//! `c_z` by Fourier-Motzkin, and read off the largest feasible `c_z`. The
//! maximal feasible `E` is the minimum over blocks.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::rational::{int, Rational};
use crate::routing::CrossingRouting;

use super::milp::{MilpModel, Sense, VarKind};

/// `sum coef * x <= rhs` over a block's continuous variables.
#[derive(Clone, Debug)]
struct Row {
    coef: Vec<Rational>,
    rhs: Rational,
}

/// Largest feasible objective of `model` with `u, v` fixed to the normalized
/// routing (`D = 1`). `None` when the fixed point is infeasible (e.g. cut off
/// by symmetry breaking).
pub fn max_feasible_objective(model: &MilpModel, r: &CrossingRouting) -> Option<Rational> {
    assert_eq!(model.m, r.m());
    let r = r.normalized();
    let mut fixed: BTreeMap<usize, Rational> = BTreeMap::new();
    for i in 0..model.m {
        fixed.insert(model.var(&format!("u_{}", i + 1)).expect("u var"), r.u()[i].clone());
        fixed.insert(model.var(&format!("v_{}", i + 1)).expect("v var"), r.v()[i].clone());
    }
    for (&k, val) in &fixed {
        let var = &model.variables[k];
        if var.lower.as_ref().is_some_and(|l| val < l) || var.upper.as_ref().is_some_and(|u| val > u) {
            return None;
        }
    }
    let e = model.objective;

    // union-find over the free variables, ignoring the objective
    let n = model.variables.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut cap_of = vec![None; n]; // constraint E <= c, per c
    let mut fixed_only = Vec::new();
    for (ci, c) in model.constraints.iter().enumerate() {
        let free: Vec<usize> = c
            .terms
            .iter()
            .map(|(v, _)| *v)
            .filter(|v| !fixed.contains_key(v) && *v != e)
            .collect();
        if c.terms.iter().any(|(v, _)| *v == e) {
            // only `E - c <= 0` style rows may mention the objective
            assert_eq!(free.len(), 1, "objective row {} must couple one block variable", c.name);
            cap_of[free[0]] = Some(ci);
            continue;
        }
        if free.is_empty() {
            fixed_only.push(ci);
        }
        for w in free.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }

    // rows over fixed values only must hold outright
    for &ci in &fixed_only {
        let c = &model.constraints[ci];
        let lhs: Rational = c.terms.iter().map(|(v, k)| k * &fixed[v]).sum();
        let ok = match c.sense {
            Sense::Le => lhs <= c.rhs,
            Sense::Ge => lhs >= c.rhs,
            Sense::Eq => lhs == c.rhs,
        };
        if !ok {
            return None;
        }
    }

    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        if v != e && !fixed.contains_key(&v) {
            let root = find(&mut parent, v);
            blocks.entry(root).or_default().push(v);
        }
    }
    let mut rows_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, c) in model.constraints.iter().enumerate() {
        if let Some((v, _)) = c.terms.iter().find(|(v, _)| !fixed.contains_key(v) && *v != e) {
            if !c.terms.iter().any(|(w, _)| *w == e) {
                let root = find(&mut parent, *v);
                rows_of.entry(root).or_default().push(ci);
            }
        }
    }

    let mut best: Option<Rational> = None;
    for (root, vars) in &blocks {
        let Some(target) = vars.iter().copied().find(|v| cap_of[*v].is_some()) else {
            continue;
        };
        let value = solve_block(model, &fixed, vars, rows_of.get(root).map_or(&[][..], |r| r), target)?;
        best = Some(match best {
            None => value,
            Some(b) => std::cmp::min(b, value),
        });
    }
    let obj = &model.variables[e];
    let mut best = best?;
    if let Some(u) = &obj.upper {
        best = std::cmp::min(best, u.clone());
    }
    if obj.lower.as_ref().is_some_and(|l| &best < l) {
        return None;
    }
    Some(best)
}

/// Largest feasible value of `target` within one block, maximized over its
/// binary assignments.
fn solve_block(
    model: &MilpModel,
    fixed: &BTreeMap<usize, Rational>,
    vars: &[usize],
    rows: &[usize],
    target: usize,
) -> Option<Rational> {
    let binaries: Vec<usize> = vars
        .iter()
        .copied()
        .filter(|&v| model.variables[v].kind == VarKind::Binary)
        .collect();
    let continuous: Vec<usize> = vars
        .iter()
        .copied()
        .filter(|&v| model.variables[v].kind == VarKind::Continuous)
        .collect();
    let col = |v: usize| continuous.iter().position(|&c| c == v);
    assert!(binaries.len() < 32, "block too large to enumerate");

    let mut best: Option<Rational> = None;
    for assignment in 0..1u64 << binaries.len() {
        let value_of = |v: usize| -> Option<Rational> {
            if let Some(x) = fixed.get(&v) {
                return Some(x.clone());
            }
            binaries
                .iter()
                .position(|&b| b == v)
                .map(|k| int((assignment >> k & 1) as i64))
        };
        let mut system = Vec::new();
        for &ci in rows {
            let c = &model.constraints[ci];
            let mut coef = vec![Rational::zero(); continuous.len()];
            let mut rhs = c.rhs.clone();
            for (v, k) in &c.terms {
                match col(*v) {
                    Some(j) => coef[j] += k,
                    None => rhs -= k * value_of(*v).expect("fixed or binary"),
                }
            }
            let le = Row {
                coef: coef.clone(),
                rhs: rhs.clone(),
            };
            let ge = Row {
                coef: coef.iter().map(|x| -x.clone()).collect(),
                rhs: -rhs,
            };
            match c.sense {
                Sense::Le => system.push(le),
                Sense::Ge => system.push(ge),
                Sense::Eq => system.extend([le, ge]),
            }
        }
        for (j, &v) in continuous.iter().enumerate() {
            let var = &model.variables[v];
            let mut unit = vec![Rational::zero(); continuous.len()];
            unit[j] = int(1);
            if let Some(u) = &var.upper {
                system.push(Row {
                    coef: unit.clone(),
                    rhs: u.clone(),
                });
            }
            if let Some(l) = &var.lower {
                system.push(Row {
                    coef: unit.iter().map(|x| -x.clone()).collect(),
                    rhs: -l.clone(),
                });
            }
        }
        let t = col(target).expect("target is continuous");
        if let Some(max) = maximize(system, t) {
            best = Some(match best {
                None => max,
                Some(b) => std::cmp::max(b, max),
            });
        }
    }
    best
}

/// Eliminates every column but `keep` and returns the largest feasible value
/// of `keep`, or `None` if the system is infeasible. Panics if `keep` is
/// unbounded above, which no well-formed model allows.
fn maximize(mut rows: Vec<Row>, keep: usize) -> Option<Rational> {
    let width = rows.first().map_or(0, |r| r.coef.len());
    for j in 0..width {
        if j == keep {
            continue;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coef[j].is_positive() {
                pos.push(r);
            } else if r.coef[j].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                // scale so column j cancels
                let (a, b) = (p.coef[j].clone(), -q.coef[j].clone());
                let coef: Vec<Rational> = p.coef.iter().zip(&q.coef).map(|(x, y)| x * &b + y * &a).collect();
                let rhs = &p.rhs * &b + &q.rhs * &a;
                rest.push(normalize(Row { coef, rhs }));
            }
        }
        rest.sort_by(|x, y| x.coef.cmp(&y.coef).then(x.rhs.cmp(&y.rhs)));
        // keep the tightest row per direction
        rest.dedup_by(|later, earlier| later.coef == earlier.coef);
        rows = rest;
    }
    let mut upper: Option<Rational> = None;
    let mut lower: Option<Rational> = None;
    for r in &rows {
        let k = &r.coef[keep];
        if k.is_zero() {
            if r.rhs.is_negative() {
                return None;
            }
        } else {
            let bound = &r.rhs / k;
            if k.is_positive() {
                upper = Some(upper.map_or(bound.clone(), |u| std::cmp::min(u, bound)));
            } else {
                lower = Some(lower.map_or(bound.clone(), |l| std::cmp::max(l, bound)));
            }
        }
    }
    let upper = upper.expect("objective bounded above within its block");
    match lower {
        Some(l) if l > upper => None,
        _ => Some(upper),
    }
}

/// Scales a row so its first nonzero coefficient has magnitude one.
fn normalize(mut r: Row) -> Row {
    if let Some(lead) = r.coef.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        for x in r.coef.iter_mut() {
            *x /= &lead;
        }
        r.rhs /= lead;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::catalog::{tight3, tight_even};
    use crate::adversary::milp::build_milp;
    use crate::exact::min_additive_performance;

    #[test]
    fn tight_families_reach_one() {
        for (r, m) in [(tight_even(2).unwrap(), 2), (tight3(), 3)] {
            let expect = min_additive_performance(&r).unwrap().0 / r.max_demand();
            for reduce in [false, true] {
                let model = build_milp(m, reduce, false).unwrap();
                assert_eq!(max_feasible_objective(&model, &r), Some(expect.clone()));
            }
        }
    }

    #[test]
    fn symmetry_cut_is_detected() {
        // u_1 is not the smallest part
        let r = CrossingRouting::from_integers(&[3, 1], &[1, 3]).unwrap();
        let model = build_milp(2, true, true).unwrap();
        assert_eq!(max_feasible_objective(&model, &r), None);
    }
}
