//! Forward and backward greedy patterns on the strip `[0, D]`.
//!
//! Every step keeps the trajectory inside `[0, D]`; when both successors are
//! feasible the one closer to `D/2` wins, and exact ties go to the clockwise
//! choice `z_i = v_i`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::rational::{format_rational, half, int, Rational};
use crate::routing::CrossingRouting;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

fn inside(x: &Rational, big_d: &Rational) -> bool {
    !x.is_negative() && x <= big_d
}

/// Picks between the clockwise candidate and the counter-clockwise one.
/// Returns `true` for clockwise.
fn pick(cw: &Rational, ccw: &Rational, big_d: &Rational) -> bool {
    match (inside(cw, big_d), inside(ccw, big_d)) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => {
            let mid = half(big_d);
            (cw - &mid).abs() <= (ccw - &mid).abs()
        }
        (false, false) => unreachable!("an interval of width D always admits a step of size d_i <= D"),
    }
}

/// Forward greedy steps over `u`, `v` from `x` on the strip `[0, big_d]`.
pub(crate) fn forward_steps(
    u: &[Rational],
    v: &[Rational],
    x: Rational,
    big_d: &Rational,
) -> (Vec<bool>, Vec<Rational>) {
    let mut clockwise = Vec::with_capacity(u.len());
    let mut points = Vec::with_capacity(u.len() + 1);
    points.push(x);
    for (ui, vi) in u.iter().zip(v) {
        let cur = points.last().expect("non-empty");
        let up = cur + vi;
        let down = cur - ui;
        if pick(&up, &down, big_d) {
            clockwise.push(true);
            points.push(up);
        } else {
            clockwise.push(false);
            points.push(down);
        }
    }
    (clockwise, points)
}

/// Backward greedy steps over `u`, `v` ending at `y` on `[0, big_d]`.
pub(crate) fn backward_steps(
    u: &[Rational],
    v: &[Rational],
    y: Rational,
    big_d: &Rational,
) -> (Vec<bool>, Vec<Rational>) {
    let m = u.len();
    let mut clockwise = vec![false; m];
    let mut points = vec![Rational::zero(); m + 1];
    points[m] = y;
    for k in (0..m).rev() {
        // z_k = v_k means the predecessor is p(k) - v_k
        let via_cw = &points[k + 1] - &v[k];
        let via_ccw = &points[k + 1] + &u[k];
        if pick(&via_cw, &via_ccw, big_d) {
            clockwise[k] = true;
            points[k] = via_cw;
        } else {
            points[k] = via_ccw;
        }
    }
    (clockwise, points)
}

/// Forward greedy pattern starting at `x`.
pub fn forward_greedy(r: &CrossingRouting, x: Rational) -> Result<Pattern<'_>> {
    let big_d = r.max_demand();
    if !inside(&x, &big_d) {
        return Err(Error::InvalidStart(format_rational(&x)));
    }
    let (cw, points) = forward_steps(r.u(), r.v(), x, &big_d);
    Ok(Pattern::from_points(r, cw, points))
}

/// Backward greedy pattern ending at `y`.
pub fn backward_greedy(r: &CrossingRouting, y: Rational) -> Result<Pattern<'_>> {
    let big_d = r.max_demand();
    if !inside(&y, &big_d) {
        return Err(Error::InvalidEnd(format_rational(&y)));
    }
    let (cw, points) = backward_steps(r.u(), r.v(), y, &big_d);
    Ok(Pattern::from_points(r, cw, points))
}

/// The window `[delta*D/4, (1 - delta/4)*D]` proper anchors must lie in.
pub fn proper_window(delta: &Rational, big_d: &Rational) -> (Rational, Rational) {
    let quarter = delta / int(4);
    (&quarter * big_d, (int(1) - &quarter) * big_d)
}

/// A forward greedy pattern is proper when its start lies in the window, a
/// backward one when its end does.
pub fn is_proper(p: &Pattern<'_>, direction: Direction, delta: &Rational) -> bool {
    let big_d = p.routing().max_demand();
    let (lo, hi) = proper_window(delta, &big_d);
    let anchor = match direction {
        Direction::Forward => p.start(),
        Direction::Backward => p.end(),
    };
    &lo <= anchor && anchor <= &hi
}

/// Whether `p` could have been produced by the greedy procedure in the given
/// direction under some tie-breaking: every point inside `[0, D]` and no
/// step passes over a feasible alternative strictly closer to `D/2`.
pub fn is_greedy(p: &Pattern<'_>, direction: Direction) -> bool {
    let r = p.routing();
    let big_d = r.max_demand();
    let mid = half(&big_d);
    if !p.points().iter().all(|x| inside(x, &big_d)) {
        return false;
    }
    let dist = |x: &Rational| (x - &mid).abs();
    (0..p.m()).all(|i| {
        let (taken, other) = match direction {
            Direction::Forward => {
                let from = p.point(i);
                let alt = if p.clockwise()[i] { from - &r.u()[i] } else { from + &r.v()[i] };
                (p.point(i + 1).clone(), alt)
            }
            Direction::Backward => {
                let from = p.point(i + 1);
                let alt = if p.clockwise()[i] { from + &r.u()[i] } else { from - &r.v()[i] };
                (p.point(i).clone(), alt)
            }
        };
        !inside(&other, &big_d) || dist(&taken) <= dist(&other)
    })
}
