//! Patterns: unsplittable decisions on a crossing routing viewed as prefix
//! trajectories `p(k) = x + z_1 + ... + z_k`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::routing::{CrossingRouting, LoadDelta};

/// An unsplittable decision vector together with a start point.
///
/// `clockwise[i]` set means demand `i + 1` is routed entirely clockwise, i.e.
/// `z_i = v_i`; clear means `z_i = -u_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern<'r> {
    routing: &'r CrossingRouting,
    clockwise: Vec<bool>,
    points: Vec<Rational>,
}

impl<'r> Pattern<'r> {
    pub fn new(routing: &'r CrossingRouting, clockwise: Vec<bool>, start: Rational) -> Self {
        assert_eq!(clockwise.len(), routing.m(), "one choice per demand");
        let mut points = Vec::with_capacity(routing.m() + 1);
        points.push(start);
        for (i, &cw) in clockwise.iter().enumerate() {
            let step = step(routing, i, cw);
            let next = points.last().expect("non-empty") + step;
            points.push(next);
        }
        Self {
            routing,
            clockwise,
            points,
        }
    }

    /// Builds the pattern from its bit mask (bit `i` set iff demand `i + 1`
    /// goes clockwise).
    pub fn from_mask(routing: &'r CrossingRouting, mask: u64, start: Rational) -> Self {
        let clockwise = (0..routing.m()).map(|i| mask >> i & 1 == 1).collect();
        Self::new(routing, clockwise, start)
    }

    /// Builds a pattern from its full trajectory. Used by the greedy
    /// constructions, which know the points as they go.
    pub(crate) fn from_points(
        routing: &'r CrossingRouting,
        clockwise: Vec<bool>,
        points: Vec<Rational>,
    ) -> Self {
        debug_assert_eq!(Self::new(routing, clockwise.clone(), points[0].clone()).points, points);
        Self {
            routing,
            clockwise,
            points,
        }
    }

    pub fn routing(&self) -> &'r CrossingRouting {
        self.routing
    }

    pub fn m(&self) -> usize {
        self.clockwise.len()
    }

    pub fn clockwise(&self) -> &[bool] {
        &self.clockwise
    }

    pub fn mask(&self) -> u64 {
        assert!(self.m() <= 64);
        self.clockwise
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &cw)| if cw { acc | 1 << i } else { acc })
    }

    /// `z_i` for the 0-based demand index `i`.
    pub fn step(&self, i: usize) -> Rational {
        step(self.routing, i, self.clockwise[i])
    }

    /// `p(k)` for `k` in `0..=m`.
    pub fn point(&self, k: usize) -> &Rational {
        &self.points[k]
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn start(&self) -> &Rational {
        &self.points[0]
    }

    pub fn end(&self) -> &Rational {
        self.points.last().expect("non-empty")
    }

    /// Lower end `a` of the strip.
    pub fn low(&self) -> &Rational {
        self.points.iter().min().expect("non-empty")
    }

    /// Upper end `b` of the strip.
    pub fn high(&self) -> &Rational {
        self.points.iter().max().expect("non-empty")
    }

    /// `max{2b - x - y, x + y - 2a}`.
    pub fn additive_performance(&self) -> Rational {
        let sum = self.start() + self.end();
        let above = int(2) * self.high() - &sum;
        let below = &sum - int(2) * self.low();
        let perf = std::cmp::max(above, below);
        debug_assert_eq!(perf, self.delta().max_abs());
        perf
    }

    /// The same decisions started at `x`.
    pub fn with_start(&self, x: Rational) -> Pattern<'r> {
        let shift = &x - self.start();
        Pattern {
            routing: self.routing,
            clockwise: self.clockwise.clone(),
            points: self.points.iter().map(|p| p + &shift).collect(),
        }
    }

    /// Additive performance recomputed after moving the start to `x`; equal
    /// to [`Self::additive_performance`] for every `x`.
    pub fn performance_is_start_invariant(&self, x: Rational) -> Rational {
        self.with_start(x).additive_performance()
    }

    /// Signed load change on edges `1..=2m` when the split routing is replaced
    /// by this unsplittable routing: edge `k <= m` changes by
    /// `sum_{i<=k} z_i - sum_{i>k} z_i`, edge `k + m` by the negation.
    pub fn delta(&self) -> LoadDelta {
        let m = self.m();
        let total = self.end() - self.start();
        let mut deltas = vec![Rational::zero(); 2 * m];
        for k in 1..=m {
            let prefix = &self.points[k] - self.start();
            let d = int(2) * prefix - &total;
            deltas[k + m - 1] = -d.clone();
            deltas[k - 1] = d;
        }
        LoadDelta(deltas)
    }

    /// Checks that `other` lives on the same routing.
    pub fn same_routing(&self, other: &Pattern<'_>) -> Result<()> {
        if self.routing == other.routing {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                left: self.m(),
                right: other.m(),
            })
        }
    }
}

pub(crate) fn step(routing: &CrossingRouting, i: usize, clockwise: bool) -> Rational {
    if clockwise {
        routing.v()[i].clone()
    } else {
        -routing.u()[i].clone()
    }
}

/// Signed per-edge load change of the unsplittable routing encoded by `p`.
pub fn pattern_delta(p: &Pattern<'_>) -> LoadDelta {
    p.delta()
}

pub fn additive_performance(p: &Pattern<'_>) -> Rational {
    p.additive_performance()
}
