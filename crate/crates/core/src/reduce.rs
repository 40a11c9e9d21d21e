//! Reduction of an arbitrary split routing to the pairwise-crossing form.
//!
//! Two split demands that do not cross admit edge-disjoint paths `P1`, `P2`;
//! shifting `min` of their remaining parts onto `P1`, `P2` never raises a
//! load and leaves one of them unsplit. Once every pair of split demands
//! crosses, the unsplit demands are set aside as a residual load and the
//! ring is contracted onto the `2m` endpoints of the split ones.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::rational::{format_rational, Rational};
use crate::routing::{add_path, CrossingRouting, LoadDelta, LoadProfile, RingInstance};

/// A ring instance with a split routing: demand `k` sends
/// `clockwise_part[k]` clockwise and the rest counter-clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSplitRouting {
    instance: RingInstance,
    clockwise_part: Vec<Rational>,
}

impl GeneralSplitRouting {
    pub fn new(instance: RingInstance, clockwise_part: Vec<Rational>) -> Result<Self> {
        if clockwise_part.len() != instance.demands().len() {
            return Err(Error::InvalidRouting(format!(
                "{} clockwise parts for {} demands",
                clockwise_part.len(),
                instance.demands().len()
            )));
        }
        for (d, cw) in instance.demands().iter().zip(&clockwise_part) {
            if cw.is_negative() || cw > &d.value {
                return Err(Error::InvalidRouting(format!(
                    "clockwise part {} of demand ({}, {}) is outside [0, {}]",
                    format_rational(cw),
                    d.i,
                    d.j,
                    format_rational(&d.value)
                )));
            }
        }
        Ok(Self {
            instance,
            clockwise_part,
        })
    }

    pub fn instance(&self) -> &RingInstance {
        &self.instance
    }

    pub fn clockwise_part(&self) -> &[Rational] {
        &self.clockwise_part
    }

    pub fn is_split(&self, k: usize) -> bool {
        let cw = &self.clockwise_part[k];
        cw.is_positive() && cw < &self.instance.demands()[k].value
    }

    pub fn split_indices(&self) -> Vec<usize> {
        (0..self.clockwise_part.len()).filter(|&k| self.is_split(k)).collect()
    }

    pub fn loads(&self) -> LoadProfile {
        self.instance.split_loads(&self.clockwise_part)
    }
}

/// Whether demands `(i, j)` and `(k, l)` cross, i.e. their endpoints strictly
/// interleave around the ring.
pub fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let (i, j) = a;
    let (k, l) = b;
    (i < k && k < j && j < l) || (k < i && i < l && l < j)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    /// `amount` of both demands moved onto the edge-disjoint paths; the flags
    /// give each path's direction.
    Uncross {
        first: usize,
        second: usize,
        first_clockwise: bool,
        second_clockwise: bool,
        amount: Rational,
    },
    /// An unsplit demand moved to the residual load.
    DropUnsplit { demand: usize, clockwise: bool },
    /// A node without split demands merged into the reduced edge `edge`
    /// (1-based).
    Contract { node: usize, edge: usize },
}

#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    /// The routing after all exchanges.
    pub uncrossed: GeneralSplitRouting,
    /// Original labels of the reduced nodes `1..=2m`, ascending.
    pub endpoints: Vec<usize>,
    /// Original demand index of reduced demand `i` (0-based).
    pub split_demands: Vec<usize>,
    /// Loads of the unsplit demands of `uncrossed`.
    pub residual: LoadProfile,
}

impl ReductionTrace {
    /// The reduced edge (1-based) containing original edge `k` (1-based).
    pub fn reduced_edge_of(&self, k: usize) -> usize {
        let t = &self.endpoints;
        match t.iter().rposition(|&node| node <= k) {
            Some(r) => r + 1,
            // edges before the first endpoint wrap into the last reduced edge
            None => t.len(),
        }
    }

    /// One direction per original demand: split demands follow the pattern,
    /// unsplit ones keep the direction they carry in `uncrossed`.
    pub fn lift(&self, p: &Pattern<'_>) -> Vec<bool> {
        assert_eq!(p.m(), self.split_demands.len());
        let inst = self.uncrossed.instance();
        let mut directions: Vec<bool> = inst
            .demands()
            .iter()
            .zip(self.uncrossed.clockwise_part())
            .map(|(d, cw)| cw == &d.value)
            .collect();
        for (i, &k) in self.split_demands.iter().enumerate() {
            directions[k] = p.clockwise()[i];
        }
        directions
    }

    /// Per-edge load change of the lifted routing over `uncrossed`.
    pub fn lifted_delta(&self, p: &Pattern<'_>) -> LoadDelta {
        let inst = self.uncrossed.instance();
        inst.unsplittable_loads(&self.lift(p)).minus(&self.uncrossed.loads())
    }
}

#[derive(Debug, Clone)]
pub enum Reduced {
    /// No split demand is left; the uncrossed routing is already unsplittable.
    Trivial { trace: ReductionTrace },
    Crossing { routing: CrossingRouting, trace: ReductionTrace },
}

impl Reduced {
    pub fn trace(&self) -> &ReductionTrace {
        match self {
            Reduced::Trivial { trace } | Reduced::Crossing { trace, .. } => trace,
        }
    }
}

fn arc(n: usize, i: usize, j: usize, clockwise: bool) -> Vec<bool> {
    (1..=n).map(|k| (i <= k && k < j) == clockwise).collect()
}

/// Applies the parallel-pair exchange until all split demands pairwise cross.
/// Pairs are scanned in lexicographic order of their endpoint labels.
pub fn uncross_parallel(s: &GeneralSplitRouting) -> (GeneralSplitRouting, Vec<ReductionStep>) {
    let mut cur = s.clone();
    let mut steps = Vec::new();
    let n = s.instance().n();
    loop {
        let mut split = cur.split_indices();
        split.sort_by_key(|&k| {
            let d = &cur.instance().demands()[k];
            (d.i, d.j)
        });
        let pair = split.iter().enumerate().find_map(|(x, &a)| {
            split[x + 1..].iter().find_map(|&b| {
                let (da, db) = (&cur.instance().demands()[a], &cur.instance().demands()[b]);
                (!crosses((da.i, da.j), (db.i, db.j))).then_some((a, b))
            })
        });
        let Some((a, b)) = pair else { break };
        let before = cur.loads();
        let step = exchange(&mut cur, a, b, n);
        let after = cur.loads();
        for (x, y) in after.0.iter().zip(&before.0) {
            assert!(x <= y, "exchange raised an edge load");
        }
        steps.push(step);
    }
    (cur, steps)
}

fn exchange(cur: &mut GeneralSplitRouting, a: usize, b: usize, n: usize) -> ReductionStep {
    let (da, db) = (cur.instance.demands()[a].clone(), cur.instance.demands()[b].clone());
    let (pa, pb) = [(true, true), (true, false), (false, true), (false, false)]
        .into_iter()
        .find(|&(ca, cb)| {
            let x = arc(n, da.i, da.j, ca);
            let y = arc(n, db.i, db.j, cb);
            !x.iter().zip(&y).any(|(p, q)| *p && *q)
        })
        .expect("parallel demands admit edge-disjoint paths");
    // amount still on the complementary path Q
    let on_q = |value: &Rational, cw: &Rational, p_clockwise: bool| if p_clockwise { value - cw } else { cw.clone() };
    let xa = on_q(&da.value, &cur.clockwise_part[a], pa);
    let xb = on_q(&db.value, &cur.clockwise_part[b], pb);
    let t = std::cmp::min(xa, xb);
    for (k, p_clockwise) in [(a, pa), (b, pb)] {
        if p_clockwise {
            cur.clockwise_part[k] += &t;
        } else {
            cur.clockwise_part[k] -= &t;
        }
    }
    ReductionStep::Uncross {
        first: a,
        second: b,
        first_clockwise: pa,
        second_clockwise: pb,
        amount: t,
    }
}

/// Uncrosses, drops unsplit demands into a residual load, and contracts the
/// ring onto the endpoints of the split demands.
pub fn to_crossing_form(s: &GeneralSplitRouting) -> Result<Reduced> {
    let (uncrossed, mut steps) = uncross_parallel(s);
    let inst = uncrossed.instance();
    let n = inst.n();

    let mut residual = vec![Rational::zero(); n];
    for (k, (d, cw)) in inst.demands().iter().zip(uncrossed.clockwise_part()).enumerate() {
        if !uncrossed.is_split(k) {
            let clockwise = cw == &d.value;
            add_path(&mut residual, d.i, d.j, clockwise, &d.value);
            steps.push(ReductionStep::DropUnsplit { demand: k, clockwise });
        }
    }
    let residual = LoadProfile(residual);

    let split = uncrossed.split_indices();
    let mut endpoints = Vec::with_capacity(2 * split.len());
    for &k in &split {
        let d = &inst.demands()[k];
        endpoints.extend([d.i, d.j]);
    }
    endpoints.sort_unstable();
    if let Some(w) = endpoints.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::MalformedRouting(format!("node {} touches two split demands", w[0])));
    }
    let m = split.len();
    let mut trace = ReductionTrace {
        steps,
        uncrossed: uncrossed.clone(),
        endpoints: endpoints.clone(),
        split_demands: Vec::new(),
        residual,
    };
    if m == 0 {
        return Ok(Reduced::Trivial { trace });
    }

    let position = |node: usize| endpoints.binary_search(&node).expect("endpoint");
    let mut u = vec![Rational::zero(); m];
    let mut v = vec![Rational::zero(); m];
    let mut split_demands = vec![usize::MAX; m];
    for &k in &split {
        let d = &inst.demands()[k];
        let (pi, pj) = (position(d.i), position(d.j));
        if pj != pi + m {
            return Err(Error::MalformedRouting(format!(
                "split demand ({}, {}) does not cross all others",
                d.i, d.j
            )));
        }
        u[pi] = uncrossed.clockwise_part()[k].clone();
        v[pi] = &d.value - &u[pi];
        split_demands[pi] = k;
    }
    trace.split_demands = split_demands;

    // contraction: split-only loads must agree along each reduced edge
    let split_only = uncrossed.loads().minus(&trace.residual);
    for node in 1..=n {
        if endpoints.binary_search(&node).is_ok() {
            continue;
        }
        let edge = trace.reduced_edge_of(node);
        let prev = if node == 1 { n } else { node - 1 };
        if split_only.0[prev - 1] != split_only.0[node - 1] {
            return Err(Error::MalformedRouting(format!(
                "edges around contracted node {node} carry different split loads"
            )));
        }
        trace.steps.push(ReductionStep::Contract { node, edge });
    }

    let routing = CrossingRouting::new(u, v)?;
    Ok(Reduced::Crossing { routing, trace })
}

/// `delta` of a crossing routing with the index (0-based) of the demand
/// closest to `D/2`, smallest index on ties.
pub fn classify_delta(r: &CrossingRouting) -> (Rational, usize) {
    r.delta()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::routing::Demand;

    fn demand(i: usize, j: usize, value: i64) -> Demand {
        Demand { i, j, value: int(value) }
    }

    #[test]
    fn crossing_predicate() {
        assert!(crosses((1, 5), (3, 7)));
        assert!(crosses((3, 7), (1, 5)));
        assert!(!crosses((1, 4), (5, 8)));
        assert!(!crosses((2, 7), (3, 6)));
        assert!(!crosses((1, 2), (1, 3)));
    }

    #[test]
    fn parallel_pair_is_uncrossed() {
        let inst = RingInstance::new(4, vec![demand(1, 2, 1), demand(1, 3, 1)]).unwrap();
        let s = GeneralSplitRouting::new(inst, vec![rat(1, 2), rat(1, 2)]).unwrap();
        let (out, steps) = uncross_parallel(&s);
        assert_eq!(steps.len(), 1);
        assert!(out.split_indices().len() <= 1);
        for (a, b) in out.loads().0.iter().zip(&s.loads().0) {
            assert!(a <= b);
        }
    }

    #[test]
    fn unsplit_input_is_trivial() {
        let inst = RingInstance::new(5, vec![demand(1, 3, 2), demand(2, 5, 1)]).unwrap();
        let s = GeneralSplitRouting::new(inst, vec![int(2), int(0)]).unwrap();
        let (out, steps) = uncross_parallel(&s);
        assert!(steps.is_empty());
        assert_eq!(out, s);
        assert!(matches!(to_crossing_form(&s).unwrap(), Reduced::Trivial { .. }));
    }

    #[test]
    fn single_split_demand_reduces_to_one() {
        let inst = RingInstance::new(6, vec![demand(2, 5, 3), demand(1, 2, 1)]).unwrap();
        let s = GeneralSplitRouting::new(inst, vec![int(1), int(1)]).unwrap();
        let Reduced::Crossing { routing, trace } = to_crossing_form(&s).unwrap() else {
            panic!("expected a crossing routing")
        };
        assert_eq!((routing.u(), routing.v()), (&[int(1)][..], &[int(2)][..]));
        assert_eq!(trace.endpoints, vec![2, 5]);
        assert_eq!(trace.reduced_edge_of(1), 2);
        assert_eq!(trace.reduced_edge_of(4), 1);
        assert_eq!(trace.reduced_edge_of(6), 2);
    }

    #[test]
    fn crossing_instance_is_kept() {
        let inst = RingInstance::new(6, vec![demand(1, 4, 2), demand(2, 5, 2), demand(3, 6, 2)]).unwrap();
        let s = GeneralSplitRouting::new(inst, vec![int(1), int(1), int(1)]).unwrap();
        let Reduced::Crossing { routing, trace } = to_crossing_form(&s).unwrap() else {
            panic!("expected a crossing routing")
        };
        assert_eq!(routing.m(), 3);
        for mask in 0..8 {
            let p = Pattern::from_mask(&routing, mask, int(0));
            assert_eq!(trace.lifted_delta(&p), p.delta());
        }
    }

    #[test]
    fn rejects_out_of_range_parts() {
        let inst = RingInstance::new(4, vec![demand(1, 3, 2)]).unwrap();
        assert!(GeneralSplitRouting::new(inst.clone(), vec![int(3)]).is_err());
        assert!(GeneralSplitRouting::new(inst, vec![int(-1)]).is_err());
    }
}
