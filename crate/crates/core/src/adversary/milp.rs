//! The worst-case search model: over all split routings with `D <= 1`,
//! maximize the minimum additive performance `E` across all `2^m` patterns.
//!
//! Per pattern `z` (a bit mask, bit `i` set iff `z_i = v_i`) the prefix sums
//! `S_0 = 0, S_k = sum_{i<=k} z_i` are linear in `u, v`. Binary selectors
//! pin `a_z` to the minimum and `b_z` to the maximum prefix, `y_z` is the end
//! point, and `w_z` picks which of `2b - y` and `y - 2a` the performance
//! `c_z` equals. Big-M constants are `m`, enough since `|S_k| <= m`.

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// `None` means unbounded.
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// `(variable index, coefficient)`, no repeated variables.
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpModel {
    pub m: usize,
    pub reduced: bool,
    pub symmetry_break: bool,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// The variable maximized.
    pub objective: usize,
    pub big_m: Rational,
}

impl MilpModel {
    pub fn var(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn binary_count(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    pub fn continuous_count(&self) -> usize {
        self.variables.len() - self.binary_count()
    }
}

/// Hex label of a pattern, zero padded to a common width.
pub fn mask_label(m: usize, mask: u64) -> String {
    format!("{:0width$x}", mask, width = m.div_ceil(4))
}

/// Whether the selector for the minimum at prefix index `i` survives the
/// reduction: only local minima of the prefix sequence can attain it.
pub fn keeps_min(m: usize, mask: u64, i: usize) -> bool {
    let up = |k: usize| mask >> (k - 1) & 1 == 1; // step k (1-based) goes up
    match i {
        0 => up(1),
        _ if i == m => !up(m),
        _ => !up(i) && up(i + 1),
    }
}

/// Same for local maxima.
pub fn keeps_max(m: usize, mask: u64, i: usize) -> bool {
    let up = |k: usize| mask >> (k - 1) & 1 == 1;
    match i {
        0 => !up(1),
        _ if i == m => up(m),
        _ => up(i) && !up(i + 1),
    }
}

struct Builder {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl Builder {
    fn add_var(&mut self, name: String, kind: VarKind, lower: Option<Rational>, upper: Option<Rational>) -> usize {
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        self.variables.len() - 1
    }

    fn add(&mut self, name: String, terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        // merge repeated variables and drop zero coefficients
        let mut merged: Vec<(usize, Rational)> = Vec::new();
        for (v, c) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, acc)) => *acc += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| *c != int(0));
        self.constraints.push(Constraint {
            name,
            terms: merged,
            sense,
            rhs,
        });
    }
}

struct PatternVars {
    a: usize,
    b: usize,
    y: usize,
    c: usize,
    w: usize,
    wmin: Vec<Option<usize>>,
    wmax: Vec<Option<usize>>,
}

pub fn build_milp(m: usize, reduce_vars: bool, symmetry_break: bool) -> Result<MilpModel> {
    if !(2..=12).contains(&m) {
        return Err(Error::OutOfRange(format!("m = {m} (supported: 2..=12)")));
    }
    let big_m = int(m as i64);
    let mut bld = Builder {
        variables: Vec::new(),
        constraints: Vec::new(),
    };
    let zero = || Some(int(0));
    let one = || Some(int(1));
    let u: Vec<usize> = (1..=m)
        .map(|i| bld.add_var(format!("u_{i}"), VarKind::Continuous, zero(), None))
        .collect();
    let v: Vec<usize> = (1..=m)
        .map(|i| bld.add_var(format!("v_{i}"), VarKind::Continuous, zero(), None))
        .collect();
    let e = bld.add_var("E".into(), VarKind::Continuous, zero(), None);

    let masks: Vec<u64> = (0..1u64 << m).collect();
    let mut pv = Vec::with_capacity(masks.len());
    for &z in &masks {
        let h = mask_label(m, z);
        let a = bld.add_var(format!("a_{h}"), VarKind::Continuous, None, None);
        let b = bld.add_var(format!("b_{h}"), VarKind::Continuous, None, None);
        let y = bld.add_var(format!("y_{h}"), VarKind::Continuous, None, None);
        let c = bld.add_var(format!("c_{h}"), VarKind::Continuous, None, None);
        let w = bld.add_var(format!("w_{h}"), VarKind::Binary, zero(), one());
        let wmin = (0..=m)
            .map(|i| {
                (!reduce_vars || keeps_min(m, z, i))
                    .then(|| bld.add_var(format!("wmin_{h}_{i}"), VarKind::Binary, zero(), one()))
            })
            .collect();
        let wmax = (0..=m)
            .map(|i| {
                (!reduce_vars || keeps_max(m, z, i))
                    .then(|| bld.add_var(format!("wmax_{h}_{i}"), VarKind::Binary, zero(), one()))
            })
            .collect();
        pv.push(PatternVars {
            a,
            b,
            y,
            c,
            w,
            wmin,
            wmax,
        });
    }

    // prefix sum S_k of pattern z with coefficient `scale`
    let prefix = |z: u64, k: usize, scale: Rational| -> Vec<(usize, Rational)> {
        (0..k)
            .map(|i| {
                if z >> i & 1 == 1 {
                    (v[i], scale.clone())
                } else {
                    (u[i], -scale.clone())
                }
            })
            .collect()
    };
    let with = |mut head: Vec<(usize, Rational)>, tail: Vec<(usize, Rational)>| {
        head.extend(tail);
        head
    };
    let h = |z: u64| mask_label(m, z);
    let neg = int(-1);

    for (&z, p) in masks.iter().zip(&pv) {
        bld.add(format!("cap_{}", h(z)), vec![(e, int(1)), (p.c, neg.clone())], Sense::Le, int(0));
    }
    for i in 0..m {
        bld.add(format!("dem_{}", i + 1), vec![(u[i], int(1)), (v[i], int(1))], Sense::Le, int(1));
    }
    for (&z, p) in masks.iter().zip(&pv) {
        let terms = p.wmin.iter().flatten().map(|&x| (x, int(1))).collect();
        bld.add(format!("minsel_{}", h(z)), terms, Sense::Ge, int(1));
    }
    for (&z, p) in masks.iter().zip(&pv) {
        let terms = p.wmax.iter().flatten().map(|&x| (x, int(1))).collect();
        bld.add(format!("maxsel_{}", h(z)), terms, Sense::Ge, int(1));
    }
    // a_z <= S_i
    for (&z, p) in masks.iter().zip(&pv) {
        for i in 0..=m {
            let terms = with(vec![(p.a, int(1))], prefix(z, i, neg.clone()));
            bld.add(format!("lo_{}_{i}", h(z)), terms, Sense::Le, int(0));
        }
    }
    // a_z >= S_i - W (1 - wmin_i)
    for (&z, p) in masks.iter().zip(&pv) {
        for i in 0..=m {
            if let Some(x) = p.wmin[i] {
                let terms = with(vec![(p.a, int(1)), (x, -big_m.clone())], prefix(z, i, neg.clone()));
                bld.add(format!("lopin_{}_{i}", h(z)), terms, Sense::Ge, -big_m.clone());
            }
        }
    }
    // b_z >= S_i
    for (&z, p) in masks.iter().zip(&pv) {
        for i in 0..=m {
            let terms = with(vec![(p.b, int(1))], prefix(z, i, neg.clone()));
            bld.add(format!("hi_{}_{i}", h(z)), terms, Sense::Ge, int(0));
        }
    }
    // b_z <= S_i + W (1 - wmax_i)
    for (&z, p) in masks.iter().zip(&pv) {
        for i in 0..=m {
            if let Some(x) = p.wmax[i] {
                let terms = with(vec![(p.b, int(1)), (x, big_m.clone())], prefix(z, i, neg.clone()));
                bld.add(format!("hipin_{}_{i}", h(z)), terms, Sense::Le, big_m.clone());
            }
        }
    }
    for (&z, p) in masks.iter().zip(&pv) {
        let terms = with(vec![(p.y, int(1))], prefix(z, m, neg.clone()));
        bld.add(format!("end_{}", h(z)), terms, Sense::Eq, int(0));
    }
    // c_z >= 2b - y and c_z >= y - 2a
    for (&z, p) in masks.iter().zip(&pv) {
        bld.add(
            format!("above_{}", h(z)),
            vec![(p.c, int(1)), (p.b, int(-2)), (p.y, int(1))],
            Sense::Ge,
            int(0),
        );
    }
    for (&z, p) in masks.iter().zip(&pv) {
        bld.add(
            format!("below_{}", h(z)),
            vec![(p.c, int(1)), (p.y, int(-1)), (p.a, int(2))],
            Sense::Ge,
            int(0),
        );
    }
    // c_z <= 2b - y + W w and c_z <= y - 2a + W (1 - w)
    for (&z, p) in masks.iter().zip(&pv) {
        bld.add(
            format!("pickabove_{}", h(z)),
            vec![(p.c, int(1)), (p.w, -big_m.clone()), (p.b, int(-2)), (p.y, int(1))],
            Sense::Le,
            int(0),
        );
    }
    for (&z, p) in masks.iter().zip(&pv) {
        bld.add(
            format!("pickbelow_{}", h(z)),
            vec![(p.c, int(1)), (p.w, big_m.clone()), (p.y, int(-1)), (p.a, int(2))],
            Sense::Le,
            big_m.clone(),
        );
    }
    if symmetry_break {
        for i in 1..m {
            bld.add(format!("symu_{}", i + 1), vec![(u[0], int(1)), (u[i], neg.clone())], Sense::Le, int(0));
        }
        for (i, &vi) in v.iter().enumerate() {
            bld.add(format!("symv_{}", i + 1), vec![(u[0], int(1)), (vi, neg.clone())], Sense::Le, int(0));
        }
    }

    Ok(MilpModel {
        m,
        reduced: reduce_vars,
        symmetry_break,
        variables: bld.variables,
        constraints: bld.constraints,
        objective: e,
        big_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_guard() {
        assert!(matches!(build_milp(1, true, true), Err(Error::OutOfRange(_))));
        assert!(matches!(build_milp(13, false, false), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn unreduced_binary_count() {
        // per pattern: w plus a min and a max selector at each of m + 1 prefixes
        for m in 2..=5 {
            let model = build_milp(m, false, false).unwrap();
            assert_eq!(model.binary_count(), (1 << m) * (2 * m + 3));
        }
        assert_eq!(build_milp(2, false, false).unwrap().binary_count(), 28);
    }

    #[test]
    fn reduced_binary_count() {
        // each pattern keeps one w, and its local extrema alternate
        for m in 2..=7 {
            let model = build_milp(m, true, false).unwrap();
            let expect = 3 * (1 << m) + (m - 1) * (1 << (m - 1));
            assert_eq!(model.binary_count(), expect, "m = {m}");
        }
    }

    #[test]
    fn border_reduction() {
        // all steps up: minimum only at 0, maximum only at m
        assert!(keeps_min(3, 0b111, 0) && !keeps_min(3, 0b111, 3));
        assert!(keeps_max(3, 0b111, 3) && !keeps_max(3, 0b111, 0));
        // down then up: interior minimum at 1
        assert!(keeps_min(2, 0b10, 1) && !keeps_max(2, 0b10, 1));
    }

    #[test]
    fn symmetry_rows() {
        let plain = build_milp(3, true, false).unwrap();
        let sym = build_milp(3, true, true).unwrap();
        assert_eq!(sym.constraints.len(), plain.constraints.len() + 2 + 3);
    }

    #[test]
    fn labels() {
        assert_eq!(mask_label(3, 5), "5");
        assert_eq!(mask_label(7, 5), "05");
        assert_eq!(mask_label(8, 255), "ff");
    }
}
