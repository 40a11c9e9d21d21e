//! Ring instances, reduced split routings, and edge load profiles.
//!
//! Nodes are labelled `1..=n` and edge `k` joins `k` and `k + 1`, with edge
//! `n` closing the ring back to node 1. Internally vectors are 0-based, so
//! `loads[k - 1]` is the load of edge `k`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, half, int, Rational};

/// One demand `d_{i,j}` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demand {
    pub i: usize,
    pub j: usize,
    pub value: Rational,
}

impl Demand {
    /// Whether edge `k` (1-based) lies on the clockwise path `i, i+1, ..., j`.
    pub fn clockwise_uses(&self, k: usize) -> bool {
        self.i <= k && k < self.j
    }
}

/// An undirected cycle on `n` nodes with pairwise non-negative demands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingInstance {
    n: usize,
    demands: Vec<Demand>,
}

impl RingInstance {
    pub fn new(n: usize, demands: Vec<Demand>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInstance(format!("ring needs n >= 3, got {n}")));
        }
        let mut seen = BTreeSet::new();
        for d in &demands {
            if !(1 <= d.i && d.i < d.j && d.j <= n) {
                return Err(Error::InvalidInstance(format!(
                    "demand ({}, {}) needs 1 <= i < j <= {n}",
                    d.i, d.j
                )));
            }
            if d.value.is_negative() {
                return Err(Error::InvalidInstance(format!(
                    "demand ({}, {}) has negative value {}",
                    d.i,
                    d.j,
                    format_rational(&d.value)
                )));
            }
            if !seen.insert((d.i, d.j)) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate demand ({}, {})",
                    d.i, d.j
                )));
            }
        }
        Ok(Self { n, demands })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    /// Largest demand value, `D`.
    pub fn max_demand(&self) -> Rational {
        self.demands
            .iter()
            .map(|d| d.value.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Loads of an unsplittable routing given as one direction per demand.
    pub fn unsplittable_loads(&self, clockwise: &[bool]) -> LoadProfile {
        assert_eq!(clockwise.len(), self.demands.len());
        let mut loads = vec![Rational::zero(); self.n];
        for (d, &cw) in self.demands.iter().zip(clockwise) {
            add_path(&mut loads, d.i, d.j, cw, &d.value);
        }
        LoadProfile(loads)
    }

    /// Loads of a split routing given as the clockwise part of every demand.
    pub fn split_loads(&self, clockwise_part: &[Rational]) -> LoadProfile {
        assert_eq!(clockwise_part.len(), self.demands.len());
        let mut loads = vec![Rational::zero(); self.n];
        for (d, cw) in self.demands.iter().zip(clockwise_part) {
            add_path(&mut loads, d.i, d.j, true, cw);
            add_path(&mut loads, d.i, d.j, false, &(&d.value - cw));
        }
        LoadProfile(loads)
    }
}

/// Adds `amount` to every edge on the clockwise (`i..j`) or counter-clockwise
/// path between nodes `i < j`.
pub(crate) fn add_path(loads: &mut [Rational], i: usize, j: usize, clockwise: bool, amount: &Rational) {
    if amount.is_zero() {
        return;
    }
    for k in 1..=loads.len() {
        let on_cw = i <= k && k < j;
        if on_cw == clockwise {
            loads[k - 1] += amount;
        }
    }
}

/// Per-edge loads of an actual routing; entries are non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadProfile(pub Vec<Rational>);

impl LoadProfile {
    pub fn max(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, delta: &LoadDelta) -> LoadProfile {
        assert_eq!(self.len(), delta.0.len());
        LoadProfile(self.0.iter().zip(&delta.0).map(|(l, d)| l + d).collect())
    }

    /// Edge-wise `self - base`.
    pub fn minus(&self, base: &LoadProfile) -> LoadDelta {
        assert_eq!(self.len(), base.len());
        LoadDelta(self.0.iter().zip(&base.0).map(|(a, b)| a - b).collect())
    }
}

/// Signed per-edge load change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadDelta(pub Vec<Rational>);

impl LoadDelta {
    pub fn max_abs(&self) -> Rational {
        self.0.iter().map(|d| d.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// A reduced split routing: `m` pairwise crossing demands on a ring of `2m`
/// nodes, demand `i` joining `i` and `i + m`. Demand `i` sends `u_i`
/// clockwise (over edges `i..i+m-1`) and `v_i` counter-clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingRouting {
    u: Vec<Rational>,
    v: Vec<Rational>,
}

impl CrossingRouting {
    pub fn new(u: Vec<Rational>, v: Vec<Rational>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::InvalidRouting(format!(
                "u has {} entries but v has {}",
                u.len(),
                v.len()
            )));
        }
        if u.is_empty() {
            return Err(Error::InvalidRouting("no split demands".into()));
        }
        for (i, (a, b)) in u.iter().zip(&v).enumerate() {
            if !a.is_positive() || !b.is_positive() {
                return Err(Error::InvalidRouting(format!(
                    "demand {} is not strictly split (u = {}, v = {})",
                    i + 1,
                    format_rational(a),
                    format_rational(b)
                )));
            }
        }
        let r = Self { u, v };
        r.check_delta();
        Ok(r)
    }

    pub fn from_integers(u: &[i64], v: &[i64]) -> Result<Self> {
        Self::new(u.iter().map(|&x| int(x)).collect(), v.iter().map(|&x| int(x)).collect())
    }

    pub fn m(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[Rational] {
        &self.u
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    /// Demand values `d_i = u_i + v_i`.
    pub fn demands(&self) -> Vec<Rational> {
        self.u.iter().zip(&self.v).map(|(a, b)| a + b).collect()
    }

    /// `D = max_i d_i`.
    pub fn max_demand(&self) -> Rational {
        self.demands().into_iter().max().expect("m >= 1")
    }

    /// The unique `delta` in `[0, 1/2]` for which this is a delta-instance,
    /// together with the 0-based index of the demand closest to `D/2`
    /// (smallest index among ties).
    pub fn delta(&self) -> (Rational, usize) {
        let d = self.demands();
        let big_d = d.iter().max().cloned().expect("m >= 1");
        let mid = half(&big_d);
        let (star, _) = d
            .iter()
            .enumerate()
            .map(|(i, di)| (i, (&mid - di).abs()))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("m >= 1");
        let ds = &d[star];
        let small = std::cmp::min(ds.clone(), &big_d - ds);
        (small / &big_d, star)
    }

    fn check_delta(&self) {
        let (delta, _) = self.delta();
        let big_d = self.max_demand();
        let lo = &delta * &big_d;
        let hi = (int(1) - &delta) * &big_d;
        for di in self.demands() {
            assert!(
                di <= lo || (di >= hi && di <= big_d),
                "demand {} lies strictly inside the medium band",
                format_rational(&di)
            );
        }
    }

    /// Loads of the split routing on edges `1..=2m`.
    pub fn split_loads(&self) -> LoadProfile {
        let m = self.m();
        let mut loads = vec![Rational::zero(); 2 * m];
        for i in 0..m {
            // demand i (0-based) covers edges i..i+m-1 clockwise (0-based)
            for (k, load) in loads.iter_mut().enumerate() {
                if k >= i && k < i + m {
                    *load += &self.u[i];
                } else {
                    *load += &self.v[i];
                }
            }
        }
        LoadProfile(loads)
    }

    /// Loads of the unsplittable routing sending demand `i` clockwise iff
    /// `clockwise[i]`, computed from scratch.
    pub fn unsplittable_loads(&self, clockwise: &[bool]) -> LoadProfile {
        let m = self.m();
        assert_eq!(clockwise.len(), m);
        let d = self.demands();
        let mut loads = vec![Rational::zero(); 2 * m];
        for i in 0..m {
            for (k, load) in loads.iter_mut().enumerate() {
                if (k >= i && k < i + m) == clockwise[i] {
                    *load += &d[i];
                }
            }
        }
        LoadProfile(loads)
    }

    /// Relabels the ring `s` positions counter-clockwise. Demand 1 moves to the
    /// last index with its two sides exchanged; every other demand moves down
    /// one index. The multiset of load changes of every unsplittable routing
    /// is unchanged.
    pub fn rotate(&self, s: usize) -> CrossingRouting {
        let m = self.m();
        let mut u = Vec::with_capacity(m);
        let mut v = Vec::with_capacity(m);
        for j in 0..m {
            let (src, swapped) = rotation_source(m, s, j);
            if swapped {
                u.push(self.v[src].clone());
                v.push(self.u[src].clone());
            } else {
                u.push(self.u[src].clone());
                v.push(self.v[src].clone());
            }
        }
        CrossingRouting { u, v }
    }

    /// Mirror image: clockwise and counter-clockwise parts exchanged.
    /// Patterns reflect across `D/2` under this map.
    pub fn swap_sides(&self) -> CrossingRouting {
        CrossingRouting {
            u: self.v.clone(),
            v: self.u.clone(),
        }
    }

    /// Demands in reverse index order (sides kept).
    pub fn reversed(&self) -> CrossingRouting {
        CrossingRouting {
            u: self.u.iter().rev().cloned().collect(),
            v: self.v.iter().rev().cloned().collect(),
        }
    }

    /// Every value divided by `D`.
    pub fn normalized(&self) -> CrossingRouting {
        let big_d = self.max_demand();
        CrossingRouting {
            u: self.u.iter().map(|x| x / &big_d).collect(),
            v: self.v.iter().map(|x| x / &big_d).collect(),
        }
    }
}

/// For a rotation by `s`, the source index of position `j` and whether its
/// sides are exchanged.
pub(crate) fn rotation_source(m: usize, s: usize, j: usize) -> (usize, bool) {
    let t = j + s;
    (t % m, (t / m) % 2 == 1)
}

/// Maps a choice vector on `routing.rotate(s)` back to `routing`.
pub(crate) fn unrotate_choices(m: usize, s: usize, rotated: &[bool]) -> Vec<bool> {
    let mut original = vec![false; m];
    for (j, &cw) in rotated.iter().enumerate() {
        let (src, swapped) = rotation_source(m, s, j);
        original[src] = cw ^ swapped;
    }
    original
}
