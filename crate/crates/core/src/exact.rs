//! Exhaustive optima over all unsplittable decisions.
//!
//! Values are scaled onto a common integer grid so the inner loops run on
//! `i64`; the top decision bits are fanned out over rayon and the partial
//! results reduced by `(value, mask)`, which makes the witness the lowest
//! mask among minimizers regardless of thread count.

use num_traits::Zero;
use rayon::prelude::*;

use crate::boost::BoostedInstance;
use crate::error::{Error, Result};
use crate::greedy::forward_greedy;
use crate::pattern::Pattern;
use crate::rational::{half, IntegerGrid, Rational};
use crate::routing::{CrossingRouting, RingInstance};

pub const DEFAULT_CAP: usize = 24;

/// Scaled magnitudes stay below this so sums of up to 2^20 terms fit in i64.
const GRID_LIMIT: i64 = 1 << 40;

/// Number of leading decisions enumerated in parallel.
const FAN_OUT_BITS: usize = 10;

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    let cap = cap.min(63);
    if size > cap {
        Err(Error::TooLarge { what, size, cap })
    } else {
        Ok(())
    }
}

/// Minimum additive performance over all `2^m` patterns with the lowest-mask
/// minimizer, for `m <= DEFAULT_CAP`.
pub fn min_additive_performance(r: &CrossingRouting) -> Result<(Rational, Pattern<'_>)> {
    min_additive_performance_capped(r, DEFAULT_CAP)
}

pub fn min_additive_performance_capped(r: &CrossingRouting, cap: usize) -> Result<(Rational, Pattern<'_>)> {
    let m = r.m();
    check_cap("m", m, cap)?;
    let values: Vec<Rational> = r.u().iter().chain(r.v()).cloned().collect();
    let Some(grid) = IntegerGrid::new(&values, GRID_LIMIT) else {
        return Ok(min_additive_performance_naive(r, false));
    };
    let (u, v) = grid.scaled.split_at(m);

    // any pattern bounds the optimum; start from the SSW one
    let ssw = forward_greedy(r, half(&r.max_demand()))?.mask();
    let upper = perf_of_mask(u, v, ssw);

    let top = m.min(FAN_OUT_BITS);
    let (value, mask) = (0..1u64 << top)
        .into_par_iter()
        .map(|prefix| {
            let (mut sum, mut lo, mut hi) = (0i64, 0i64, 0i64);
            for i in 0..top {
                sum += if prefix >> i & 1 == 1 { v[i] } else { -u[i] };
                lo = lo.min(sum);
                hi = hi.max(sum);
            }
            let mut best = (i64::MAX, u64::MAX);
            if hi - lo <= upper {
                descend(u, v, top, prefix, sum, lo, hi, upper, &mut best);
            }
            best
        })
        .min()
        .expect("at least one prefix");
    debug_assert!(value <= upper);
    Ok((grid.unscale(value), Pattern::from_mask(r, mask, Rational::zero())))
}

fn perf_of_mask(u: &[i64], v: &[i64], mask: u64) -> i64 {
    let (mut sum, mut lo, mut hi) = (0i64, 0i64, 0i64);
    for i in 0..u.len() {
        sum += if mask >> i & 1 == 1 { v[i] } else { -u[i] };
        lo = lo.min(sum);
        hi = hi.max(sum);
    }
    (2 * hi - sum).max(sum - 2 * lo)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    u: &[i64],
    v: &[i64],
    depth: usize,
    mask: u64,
    sum: i64,
    lo: i64,
    hi: i64,
    upper: i64,
    best: &mut (i64, u64),
) {
    // performance is at least the strip width
    if hi - lo > best.0.min(upper) {
        return;
    }
    if depth == u.len() {
        let perf = (2 * hi - sum).max(sum - 2 * lo);
        if (perf, mask) < *best {
            *best = (perf, mask);
        }
        return;
    }
    let down = sum - u[depth];
    descend(u, v, depth + 1, mask, down, lo.min(down), hi, upper, best);
    let up = sum + v[depth];
    descend(u, v, depth + 1, mask | 1 << depth, up, lo, hi.max(up), upper, best);
}

/// Reference enumeration straight over [`Pattern`]s, in ascending or
/// descending mask order. Exponential and slow; used as a test oracle and as
/// the fallback when values do not fit the integer grid.
pub fn min_additive_performance_naive(r: &CrossingRouting, descending: bool) -> (Rational, Pattern<'_>) {
    let masks: Box<dyn Iterator<Item = u64>> = if descending {
        Box::new((0..1u64 << r.m()).rev())
    } else {
        Box::new(0..1u64 << r.m())
    };
    let mut best: Option<(Rational, u64)> = None;
    for mask in masks {
        let perf = Pattern::from_mask(r, mask, Rational::zero()).additive_performance();
        let better = match &best {
            None => true,
            Some((b, bm)) => perf < *b || (perf == *b && mask < *bm),
        };
        if better {
            best = Some((perf, mask));
        }
    }
    let (perf, mask) = best.expect("2^m >= 1 masks");
    (perf, Pattern::from_mask(r, mask, Rational::zero()))
}

/// Demands whose direction is enumerated on top of a fixed base load.
struct LoadSearch {
    base: Vec<i64>,
    /// `(value, clockwise edge set)` per free demand.
    items: Vec<(i64, Vec<bool>)>,
}

impl LoadSearch {
    fn route(&self, loads: &mut [i64], item: usize, clockwise: bool) {
        let (value, cw_edges) = &self.items[item];
        for (load, &on_cw) in loads.iter_mut().zip(cw_edges) {
            if on_cw == clockwise {
                *load += value;
            }
        }
    }

    /// Minimum maximum load with the lowest-mask witness.
    fn solve(&self) -> (i64, u64) {
        let k = self.items.len();
        let top = k.min(FAN_OUT_BITS);
        (0..1u64 << top)
            .into_par_iter()
            .map(|prefix| {
                let mut loads = self.base.clone();
                for i in 0..top {
                    self.route(&mut loads, i, prefix >> i & 1 == 1);
                }
                let mut best = (i64::MAX, u64::MAX);
                self.descend(&mut loads, top, prefix, &mut best);
                best
            })
            .min()
            .expect("at least one prefix")
    }

    fn descend(&self, loads: &mut [i64], depth: usize, mask: u64, best: &mut (i64, u64)) {
        let current = loads.iter().copied().max().unwrap_or(0);
        // loads only grow further down
        if current > best.0 {
            return;
        }
        if depth == self.items.len() {
            if (current, mask) < *best {
                *best = (current, mask);
            }
            return;
        }
        for cw in [false, true] {
            let mut next = loads.to_vec();
            self.route(&mut next, depth, cw);
            let bit = if cw { 1 << depth } else { 0 };
            self.descend(&mut next, depth + 1, mask | bit, best);
        }
    }
}

fn cw_edges(n: usize, i: usize, j: usize) -> Vec<bool> {
    (1..=n).map(|k| i <= k && k < j).collect()
}

/// Optimal unsplittable load `L` of a ring instance by enumerating the
/// directions of all non-zero demands. The witness gives one direction per
/// demand (zero demands are reported clockwise).
pub fn optimal_unsplittable(inst: &RingInstance, demand_cap: usize) -> Result<(Rational, Vec<bool>)> {
    let nonzero: Vec<usize> = (0..inst.demands().len())
        .filter(|&i| !inst.demands()[i].value.is_zero())
        .collect();
    check_cap("non-zero demands", nonzero.len(), demand_cap)?;
    if nonzero.is_empty() {
        return Ok((Rational::zero(), vec![true; inst.demands().len()]));
    }
    let values: Vec<Rational> = nonzero.iter().map(|&i| inst.demands()[i].value.clone()).collect();
    let grid = IntegerGrid::new(&values, GRID_LIMIT).ok_or(Error::TooLarge {
        what: "scaled demand magnitude",
        size: usize::MAX,
        cap: GRID_LIMIT as usize,
    })?;
    let n = inst.n();
    let search = LoadSearch {
        base: vec![0; n],
        items: nonzero
            .iter()
            .zip(&grid.scaled)
            .map(|(&i, &val)| {
                let d = &inst.demands()[i];
                (val, cw_edges(n, d.i, d.j))
            })
            .collect(),
    };
    let (load, mask) = search.solve();
    let mut directions = vec![true; inst.demands().len()];
    for (bit, &i) in nonzero.iter().enumerate() {
        directions[i] = mask >> bit & 1 == 1;
    }
    let l = grid.unscale(load);
    debug_assert_eq!(inst.unsplittable_loads(&directions).max(), l);
    Ok((l, directions))
}

/// Optimal unsplittable load of a boosted instance with every short demand
/// fixed on its home arc; only the crossing demands are enumerated.
pub fn optimal_unsplittable_boosted(b: &BoostedInstance, cap: usize) -> Result<(Rational, Vec<bool>)> {
    let inst = &b.instance;
    let crossing = b.crossing_demands();
    check_cap("m", crossing.len(), cap)?;
    let values: Vec<Rational> = inst.demands().iter().map(|d| d.value.clone()).collect();
    let grid = IntegerGrid::new(&values, GRID_LIMIT).ok_or(Error::TooLarge {
        what: "scaled demand magnitude",
        size: usize::MAX,
        cap: GRID_LIMIT as usize,
    })?;
    let n = inst.n();
    let mut base = vec![0i64; n];
    let mut directions = vec![true; values.len()];
    for (idx, d) in inst.demands().iter().enumerate() {
        if let Some(home_cw) = b.short_direction(idx) {
            directions[idx] = home_cw;
            for (k, load) in base.iter_mut().enumerate() {
                if d.clockwise_uses(k + 1) == home_cw {
                    *load += grid.scaled[idx];
                }
            }
        }
    }
    let search = LoadSearch {
        base,
        items: crossing
            .iter()
            .map(|&idx| {
                let d = &inst.demands()[idx];
                (grid.scaled[idx], cw_edges(n, d.i, d.j))
            })
            .collect(),
    };
    let (load, mask) = search.solve();
    for (bit, &idx) in crossing.iter().enumerate() {
        directions[idx] = mask >> bit & 1 == 1;
    }
    let l = grid.unscale(load);
    debug_assert_eq!(inst.unsplittable_loads(&directions).max(), l);
    Ok((l, directions))
}

/// `L*` of a crossing instance: the even split, which loads every edge with
/// half the total demand.
pub fn split_optimum_crossing(r: &CrossingRouting) -> Rational {
    let halves: Vec<Rational> = r.demands().iter().map(half).collect();
    let even = CrossingRouting::new(halves.clone(), halves).expect("halves of positive demands are positive");
    let loads = even.split_loads();
    let first = loads.0[0].clone();
    assert!(loads.0.iter().all(|l| *l == first), "even split is not uniform");
    first
}

/// `L*` of a boosted instance: the common load of its equalized
/// configuration.
pub fn split_optimum_boosted(b: &BoostedInstance) -> Result<Rational> {
    let loads = b.equalized_loads();
    let first = loads.0[0].clone();
    if let Some((k, l)) = loads.0.iter().enumerate().find(|(_, l)| **l != first) {
        return Err(Error::NotEqualized(format!(
            "edge {} carries {} but edge 1 carries {}",
            k + 1,
            crate::rational::format_rational(l),
            crate::rational::format_rational(&first)
        )));
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::routing::Demand;

    #[test]
    fn single_demand_takes_smaller_side() {
        let r = CrossingRouting::from_integers(&[3], &[7]).unwrap();
        let (perf, p) = min_additive_performance(&r).unwrap();
        assert_eq!(perf, int(3));
        assert_eq!(p.clockwise(), &[false]);
    }

    #[test]
    fn tight_three() {
        let r = CrossingRouting::from_integers(&[2, 3, 3], &[2, 1, 1]).unwrap();
        assert_eq!(min_additive_performance(&r).unwrap().0, int(4));
    }

    #[test]
    fn agrees_with_naive_in_both_orders() {
        let r = CrossingRouting::new(
            vec![rat(1, 2), int(3), rat(5, 3), int(1), rat(7, 4), int(2)],
            vec![int(2), rat(1, 3), int(1), rat(9, 4), int(1), rat(1, 6)],
        )
        .unwrap();
        let (fast, p) = min_additive_performance(&r).unwrap();
        let (asc, pa) = min_additive_performance_naive(&r, false);
        let (desc, _) = min_additive_performance_naive(&r, true);
        assert_eq!(fast, asc);
        assert_eq!(fast, desc);
        assert_eq!(p.mask(), pa.mask());
    }

    #[test]
    fn cap_is_enforced() {
        let r = CrossingRouting::from_integers(&[1; 5], &[1; 5]).unwrap();
        assert!(matches!(
            min_additive_performance_capped(&r, 4),
            Err(Error::TooLarge { size: 5, cap: 4, .. })
        ));
    }

    #[test]
    fn single_demand_instance() {
        let inst = RingInstance::new(3, vec![Demand { i: 1, j: 2, value: int(5) }]).unwrap();
        assert_eq!(optimal_unsplittable(&inst, DEFAULT_CAP).unwrap().0, int(5));
    }

    #[test]
    fn figure_one_instance() {
        let demands = [(1, 4), (2, 7), (3, 6), (5, 8)]
            .iter()
            .map(|&(i, j)| Demand { i, j, value: int(1) })
            .collect();
        let inst = RingInstance::new(8, demands).unwrap();
        assert_eq!(optimal_unsplittable(&inst, DEFAULT_CAP).unwrap().0, int(2));
    }

    #[test]
    fn even_split_optimum() {
        let r = CrossingRouting::from_integers(&[1, 3, 2], &[3, 1, 2]).unwrap();
        assert_eq!(split_optimum_crossing(&r), int(6));
        let sk = CrossingRouting::from_integers(&[4, 4, 6, 2, 7, 1, 7, 2], &[6, 4, 4, 2, 3, 7, 3, 2]).unwrap();
        assert_eq!(split_optimum_crossing(&sk), int(32));
        let flat = CrossingRouting::from_integers(&[1; 6], &[1; 6]).unwrap();
        assert_eq!(split_optimum_crossing(&flat), int(6));
    }
}
