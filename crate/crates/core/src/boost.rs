//! Turning a split routing with a large rounding loss into a full ring
//! instance whose unsplittable optimum exceeds its split optimum by at least
//! that loss.
//!
//! Three stages:
//! 1. every edge gets a short demand topping its load up to `l_max`;
//! 2. every edge is subdivided and its short demand duplicated onto both
//!    halves (same value), so some optimum routes all shorts on their arcs;
//! 3. a short demand above `D` is capped: a node is inserted inside its edge,
//!    the demand keeps value `D` across both new edges, and two flanking
//!    shorts of the excess are added. Repeated until every value is `<= D`.
//!
//! After stage 3 a capped short spans two edges; its *home arc* is the
//! clockwise arc it covers in the equalized configuration.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, optimal_unsplittable_boosted, split_optimum_boosted};
use crate::rational::{format_rational, Rational};
use crate::routing::{add_path, CrossingRouting, Demand, LoadProfile, RingInstance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Role {
    /// Demand `index` (0-based) of the source routing with its clockwise part.
    Crossing { index: usize, clockwise_part: Rational },
    /// Equalizing demand routed along its home arc, which runs clockwise from
    /// `i` to `j` iff `home_clockwise`.
    Short { home_clockwise: bool, home_edges: usize },
}

#[derive(Debug, Clone)]
pub struct BoostedInstance {
    pub instance: RingInstance,
    /// One role per demand of `instance`, in the same order.
    pub roles: Vec<Role>,
    pub source: CrossingRouting,
    pub equalized_load: Rational,
    /// Stage-1 shorts of value zero that were not created.
    pub dropped_zero_shorts: usize,
}

impl BoostedInstance {
    /// Indices of the crossing demands, ordered by source index.
    pub fn crossing_demands(&self) -> Vec<usize> {
        let mut idx: Vec<(usize, usize)> = self
            .roles
            .iter()
            .enumerate()
            .filter_map(|(k, r)| match r {
                Role::Crossing { index, .. } => Some((*index, k)),
                Role::Short { .. } => None,
            })
            .collect();
        idx.sort();
        idx.into_iter().map(|(_, k)| k).collect()
    }

    /// Home direction of demand `idx` if it is a short demand.
    pub fn short_direction(&self, idx: usize) -> Option<bool> {
        match self.roles[idx] {
            Role::Short { home_clockwise, .. } => Some(home_clockwise),
            Role::Crossing { .. } => None,
        }
    }

    pub fn short_count(&self) -> usize {
        self.roles.iter().filter(|r| matches!(r, Role::Short { .. })).count()
    }

    /// Loads with every short on its home arc and every crossing demand at
    /// its source split.
    pub fn equalized_loads(&self) -> LoadProfile {
        let mut loads = vec![Rational::zero(); self.instance.n()];
        for (d, role) in self.instance.demands().iter().zip(&self.roles) {
            match role {
                Role::Short { home_clockwise, .. } => add_path(&mut loads, d.i, d.j, *home_clockwise, &d.value),
                Role::Crossing { clockwise_part, .. } => {
                    add_path(&mut loads, d.i, d.j, true, clockwise_part);
                    add_path(&mut loads, d.i, d.j, false, &(&d.value - clockwise_part));
                }
            }
        }
        LoadProfile(loads)
    }
}

/// A short demand during construction: home arc runs clockwise from node id
/// `from` to node id `to`.
struct Short {
    from: usize,
    to: usize,
    value: Rational,
}

pub fn boost(r: &CrossingRouting) -> BoostedInstance {
    let m = r.m();
    let big_d = r.max_demand();

    // stage 1: node ids 1..=2m in ring order, one short per edge
    let loads = r.split_loads();
    let l_max = loads.max();
    let mut ring: Vec<usize> = (1..=2 * m).collect();
    let mut next_id = 2 * m + 1;
    let mut shorts = Vec::new();
    let mut dropped_zero_shorts = 0;
    for (k, l) in loads.0.iter().enumerate() {
        let value = &l_max - l;
        if value.is_zero() {
            dropped_zero_shorts += 1;
            continue;
        }
        shorts.push(Short {
            from: k + 1,
            to: (k + 1) % (2 * m) + 1,
            value,
        });
    }

    // stage 2: subdivide every edge, duplicate each short onto both halves
    let mut subdivided = Vec::with_capacity(4 * m);
    let mut mid_after = std::collections::HashMap::new();
    for &node in &ring {
        subdivided.push(node);
        subdivided.push(next_id);
        mid_after.insert(node, next_id);
        next_id += 1;
    }
    ring = subdivided;
    shorts = shorts
        .into_iter()
        .flat_map(|s| {
            let mid = mid_after[&s.from];
            [
                Short {
                    from: s.from,
                    to: mid,
                    value: s.value.clone(),
                },
                Short {
                    from: mid,
                    to: s.to,
                    value: s.value,
                },
            ]
        })
        .collect();

    // stage 3: cap oversized shorts, lowest ring position first; only
    // single-edge shorts can exceed D
    loop {
        let position = |id: usize| ring.iter().position(|&x| x == id).expect("node on ring");
        let oversized = (0..shorts.len())
            .filter(|&s| shorts[s].value > big_d)
            .min_by_key(|&s| position(shorts[s].from));
        let Some(s) = oversized else { break };
        let excess = &shorts[s].value - &big_d;
        let new_node = next_id;
        next_id += 1;
        ring.insert(position(shorts[s].from) + 1, new_node);
        let (from, to) = (shorts[s].from, shorts[s].to);
        shorts[s].value = big_d.clone();
        shorts.push(Short {
            from,
            to: new_node,
            value: excess.clone(),
        });
        shorts.push(Short {
            from: new_node,
            to,
            value: excess,
        });
    }

    // relabel by ring position
    let mut label = std::collections::HashMap::new();
    for (pos, &id) in ring.iter().enumerate() {
        label.insert(id, pos + 1);
    }
    let n = ring.len();
    let mut demands = Vec::new();
    let mut roles = Vec::new();
    for idx in 0..m {
        let (i, j) = (label[&(idx + 1)], label[&(idx + 1 + m)]);
        demands.push(Demand {
            i,
            j,
            value: &r.u()[idx] + &r.v()[idx],
        });
        roles.push(Role::Crossing {
            index: idx,
            clockwise_part: r.u()[idx].clone(),
        });
    }
    for s in shorts {
        let (a, b) = (label[&s.from], label[&s.to]);
        // capping a flank again inserts nodes inside an already capped arc
        let home_edges = (b + n - a) % n;
        let (i, j, home_clockwise) = if a < b { (a, b, true) } else { (b, a, false) };
        demands.push(Demand { i, j, value: s.value });
        roles.push(Role::Short {
            home_clockwise,
            home_edges,
        });
    }

    let instance = RingInstance::new(n, demands).expect("boosted demands are distinct and well formed");
    let b = BoostedInstance {
        instance,
        roles,
        source: r.clone(),
        equalized_load: l_max,
        dropped_zero_shorts,
    };
    check_invariants(&b, &big_d);
    b
}

fn check_invariants(b: &BoostedInstance, big_d: &Rational) {
    let n = b.instance.n();
    for (d, role) in b.instance.demands().iter().zip(&b.roles) {
        assert!(d.value.is_positive() && &d.value <= big_d, "demand value outside (0, D]");
        if let Role::Short {
            home_clockwise,
            home_edges,
        } = role
        {
            let arc = if *home_clockwise { d.j - d.i } else { n - (d.j - d.i) };
            assert_eq!(arc, *home_edges, "short demand off its home arc");
            assert!(*home_edges == 1 || d.value == *big_d, "only capped shorts span several edges");
        }
    }
    let loads = b.equalized_loads();
    assert!(
        loads.0.iter().all(|l| *l == b.equalized_load),
        "boosted configuration is not equalized"
    );
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoostReport {
    /// Minimum additive performance of the source routing, `alpha * D`.
    pub alpha_d: Rational,
    pub l_star: Rational,
    pub l: Rational,
}

impl BoostReport {
    pub fn gap(&self) -> Rational {
        &self.l - &self.l_star
    }
}

/// Computes `alpha D`, `L*` and `L` and checks `L - L* >= alpha D`.
pub fn verify_boost(b: &BoostedInstance) -> Result<BoostReport> {
    let (alpha_d, _) = exact::min_additive_performance(&b.source)?;
    let l_star = split_optimum_boosted(b)?;
    let (l, _) = optimal_unsplittable_boosted(b, exact::DEFAULT_CAP)?;
    let report = BoostReport { alpha_d, l_star, l };
    if report.gap() < report.alpha_d {
        return Err(Error::BoundViolated {
            gap: format_rational(&report.gap()),
            alpha_d: format_rational(&report.alpha_d),
        });
    }
    Ok(report)
}
