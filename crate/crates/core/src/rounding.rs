//! Rounding a crossing split routing to an unsplittable one with a certified
//! additive performance.
//!
//! Every constructor returns a [`BoundedRounding`]: the chosen pattern, the
//! bound its construction guarantees a priori, and the performance it
//! actually realizes. A realized value above the certificate is reported as
//! [`Error::GuaranteeViolated`] rather than returned.

use std::fmt;

use log::{debug, warn};
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::greedy::{backward_greedy, backward_steps, forward_greedy, is_proper, Direction};
use crate::pattern::Pattern;
use crate::rational::{format_rational, half, int, rat, Rational};
use crate::routing::{unrotate_choices, CrossingRouting};

/// Which certificate a rounding carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Forward greedy from `D/2`: `3/2 D`.
    Ssw,
    /// Extended backward greedy: `(3/2 - delta/2) D`.
    Medium,
    /// Induced-pattern construction for `delta <= 2/5`: `(7/6 + delta/3) D`.
    Upper,
    /// Best of the induced patterns and their crossovers: `D + eps`.
    Crossover,
    /// Exhaustive minimum.
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Ssw => "ssw",
            Method::Medium => "medium",
            Method::Upper => "upper",
            Method::Crossover => "crossover",
            Method::BruteForce => "brute",
        };
        f.write_str(s)
    }
}

/// How the returned pattern itself was produced. May differ from the
/// certificate's method, e.g. when the main driver keeps the SSW pattern
/// because it happens to be better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    ForwardGreedy,
    ExtendedBackwardGreedy,
    InducedForward,
    InducedBackward,
    Crossover,
    Enumeration,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Source::ForwardGreedy => "forward greedy",
            Source::ExtendedBackwardGreedy => "extended backward greedy",
            Source::InducedForward => "induced forward greedy",
            Source::InducedBackward => "induced backward greedy",
            Source::Crossover => "crossover",
            Source::Enumeration => "enumeration",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct BoundedRounding<'r> {
    pub pattern: Pattern<'r>,
    /// Absolute a-priori bound on the additive performance.
    pub certified_bound: Rational,
    pub realized: Rational,
    pub method: Method,
    pub source: Source,
}

impl<'r> BoundedRounding<'r> {
    pub fn new(pattern: Pattern<'r>, certified_bound: Rational, method: Method, source: Source) -> Result<Self> {
        let realized = pattern.additive_performance();
        if realized > certified_bound {
            warn!(
                "{method} rounding realizes {} above its certificate {}",
                format_rational(&realized),
                format_rational(&certified_bound)
            );
            return Err(Error::GuaranteeViolated(format!(
                "{method}: realized {} > certified {}",
                format_rational(&realized),
                format_rational(&certified_bound)
            )));
        }
        Ok(Self {
            pattern,
            certified_bound,
            realized,
            method,
            source,
        })
    }

    /// The certificate as a multiple of `D`.
    pub fn bound_factor(&self) -> Rational {
        &self.certified_bound / self.pattern.routing().max_demand()
    }

    /// The realized performance as a multiple of `D`.
    pub fn realized_factor(&self) -> Rational {
        &self.realized / self.pattern.routing().max_demand()
    }
}

pub fn ssw_factor() -> Rational {
    rat(3, 2)
}

pub fn medium_factor(delta: &Rational) -> Rational {
    rat(3, 2) - delta / int(2)
}

pub fn upper_factor(delta: &Rational) -> Rational {
    rat(7, 6) + delta / int(3)
}

/// `13/10`, the bound the main driver always certifies.
pub fn main_factor() -> Rational {
    rat(13, 10)
}

/// Smallest distance between the two trajectories at a common index, with
/// the smallest witnessing index.
pub fn closeness(p1: &Pattern<'_>, p2: &Pattern<'_>) -> Result<(Rational, usize)> {
    p1.same_routing(p2)?;
    let (k, gap) = p1
        .points()
        .iter()
        .zip(p2.points())
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("m + 1 >= 1 points");
    Ok((gap, k))
}

/// Prefix of `p1`, suffix of `p2`, glued at their closest index and shifted
/// so that start plus end equals `p1`'s start plus `p2`'s end.
pub fn crossover<'r>(p1: &Pattern<'r>, p2: &Pattern<'r>) -> Result<Pattern<'r>> {
    let (gap, k) = closeness(p1, p2)?;
    Ok(crossover_at(p1, p2, k, &gap))
}

fn crossover_at<'r>(p1: &Pattern<'r>, p2: &Pattern<'r>, k: usize, eps: &Rational) -> Pattern<'r> {
    let g = p1.point(k) - p2.point(k);
    assert!(&g.abs() <= eps);
    let mut choices = p1.clockwise()[..k].to_vec();
    choices.extend_from_slice(&p2.clockwise()[k..]);
    let shift = half(&g);
    let p = Pattern::new(p1.routing(), choices, p1.start() - &shift);

    assert_eq!(p.start() + p.end(), p1.start() + p2.end());
    let half_eps = half(eps);
    let lo = std::cmp::min(p1.low(), p2.low()) - &half_eps;
    let hi = std::cmp::max(p1.high(), p2.high()) + &half_eps;
    assert!(p.low() >= &lo && p.high() <= &hi, "crossover left its strip");
    p
}

/// Start of the induced forward pattern and end of the induced backward one.
pub fn induced_anchors(big_d: &Rational, xa: &Rational, ya: &Rational) -> (Rational, Rational) {
    let two_thirds = rat(2, 3);
    let third = rat(1, 3);
    let xb = &two_thirds * (big_d - ya) + &third * xa;
    let yc = &two_thirds * (big_d - xa) + &third * ya;
    (xb, yc)
}

/// The forward greedy pattern `pb` and backward greedy pattern `pc` induced by
/// `pa`.
pub fn induced_patterns<'r>(r: &'r CrossingRouting, pa: &Pattern<'_>) -> Result<(Pattern<'r>, Pattern<'r>)> {
    let big_d = r.max_demand();
    let (xb, yc) = induced_anchors(&big_d, pa.start(), pa.end());
    let pb = forward_greedy(r, xb)?;
    let pc = backward_greedy(r, yc)?;
    // the three anchors split both segments into thirds
    assert_eq!(&big_d - pc.end(), half(&(pa.start() + pb.start())));
    assert_eq!(&big_d - pb.start(), half(&(pa.end() + pc.end())));
    Ok((pb, pc))
}

/// The slack `eps` of the induced-pattern bound `D + eps` for a pattern with
/// start plus end `s`.
pub fn induced_eps(big_d: &Rational, delta: &Rational, s: &Rational) -> Rational {
    let third_gap = (big_d - s).abs() / int(3);
    third_gap + delta * big_d / int(2)
}

/// Rounds via the patterns induced by `pa`: either an induced pattern whose
/// start and end are already balanced, or the crossover of a close pair.
/// Among all qualifying candidates the one with the smallest realized
/// performance is returned.
pub fn round_via_induced<'r>(
    r: &'r CrossingRouting,
    pa: &Pattern<'r>,
    delta: &Rational,
) -> Result<BoundedRounding<'r>> {
    let big_d = r.max_demand();
    let s = pa.start() + pa.end();
    let eps = induced_eps(&big_d, delta, &s);
    let bound = &big_d + &eps;
    let (pb, pc) = induced_patterns(r, pa)?;

    let balanced = |p: &Pattern<'_>| (p.start() + p.end() - &big_d).abs() <= eps;
    let mut candidates: Vec<(Pattern<'r>, Source)> = Vec::new();
    if balanced(&pc) {
        candidates.push((pc.clone(), Source::InducedBackward));
    }
    if balanced(&pb) {
        candidates.push((pb.clone(), Source::InducedForward));
    }

    let close = delta * &big_d / int(2);
    // (start pattern, end pattern): only these orientations keep start + end
    // within eps of D
    for (first, second) in [(&pb, pa), (pa, &pc), (&pb, &pc)] {
        let (gap, k) = closeness(first, second)?;
        if gap <= close {
            candidates.push((crossover_at(first, second, k, &gap), Source::Crossover));
        }
    }

    let best = candidates
        .into_iter()
        .map(|(p, src)| (p.additive_performance(), p, src))
        .min_by(|a, b| a.0.cmp(&b.0));
    match best {
        Some((_, p, src)) => BoundedRounding::new(p, bound, Method::Crossover, src),
        None => {
            warn!(
                "no induced candidate qualifies: xa = {}, ya = {}, xb = {}, yc = {}",
                format_rational(pa.start()),
                format_rational(pa.end()),
                format_rational(pb.start()),
                format_rational(pc.end())
            );
            Err(Error::GuaranteeViolated(format!(
                "no balanced induced pattern and no pair within {} (delta = {})",
                format_rational(&close),
                format_rational(delta)
            )))
        }
    }
}

/// Rotation that moves the demand closest to `D/2` to the last index.
fn extremal_rotation(r: &CrossingRouting) -> usize {
    let (_, star) = r.delta();
    (star + 1) % r.m()
}

/// The extended backward greedy pattern on a routing whose extremal demand is
/// last: backward greedy over the first `m - 1` demands ending at
/// `(D + d_m)/2 - v_m`, then the last demand towards the side that keeps the
/// whole pattern balanced.
fn extended_backward_greedy(r: &CrossingRouting) -> Pattern<'_> {
    let m = r.m();
    let big_d = r.max_demand();
    let (um, vm) = (&r.u()[m - 1], &r.v()[m - 1]);
    let target = (&big_d + um - vm) / int(2);
    let (mut choices, points) = backward_steps(&r.u()[..m - 1], &r.v()[..m - 1], target, &big_d);
    let xa = points[0].clone();
    choices.push(xa <= half(&big_d));
    Pattern::new(r, choices, xa)
}

/// Maps a pattern on `r.rotate(s)` (optionally side-swapped) back to `r`.
fn lift<'r>(r: &'r CrossingRouting, s: usize, swapped: bool, local: &Pattern<'_>) -> Pattern<'r> {
    let choices: Vec<bool> = local.clockwise().iter().map(|&c| c ^ swapped).collect();
    let p = Pattern::new(r, unrotate_choices(r.m(), s, &choices), int(0));
    debug_assert_eq!(p.additive_performance(), local.additive_performance());
    p
}

/// The extended backward greedy construction, certified at
/// `(3/2 - delta/2) D`.
pub fn round_medium(r: &CrossingRouting) -> Result<BoundedRounding<'_>> {
    let (delta, _) = r.delta();
    let s = extremal_rotation(r);
    let rotated = r.rotate(s);
    let pa = extended_backward_greedy(&rotated);
    let bound = medium_factor(&delta) * r.max_demand();
    BoundedRounding::new(lift(r, s, false, &pa), bound, Method::Medium, Source::ExtendedBackwardGreedy)
}

/// The induced-pattern construction, certified at `(7/6 + delta/3) D`.
/// Only meaningful for `delta <= 2/5`; larger `delta` is rejected.
pub fn round_upper(r: &CrossingRouting) -> Result<BoundedRounding<'_>> {
    let (delta, _) = r.delta();
    if delta > rat(2, 5) {
        return Err(Error::ParameterOutOfRange(format!(
            "the upper construction needs delta <= 2/5, got {}",
            format_rational(&delta)
        )));
    }
    let big_d = r.max_demand();
    let bound = upper_factor(&delta) * &big_d;
    let s = extremal_rotation(r);
    let rotated = r.rotate(s);
    let pa = extended_backward_greedy(&rotated);

    // reflect so that the start lies in the lower half
    let swapped = pa.start() > &half(&big_d);
    let local = if swapped { rotated.swap_sides() } else { rotated.clone() };
    let pa = if swapped {
        let flipped = pa.clockwise().iter().map(|&c| !c).collect();
        Pattern::new(&local, flipped, &big_d - pa.start())
    } else {
        Pattern::new(&local, pa.clockwise().to_vec(), pa.start().clone())
    };

    let window = &big_d / int(6) + &delta * &big_d / int(3);
    if (pa.start() + pa.end() - &big_d).abs() <= window {
        debug!("extended pattern already balanced");
        return BoundedRounding::new(lift(r, s, swapped, &pa), bound, Method::Upper, Source::ExtendedBackwardGreedy);
    }

    let (pb, pc) = induced_patterns(&local, &pa)?;
    for (name, p, dir) in [
        ("extended", &pa, Direction::Backward),
        ("induced forward", &pb, Direction::Forward),
        ("induced backward", &pc, Direction::Backward),
    ] {
        if !is_proper(p, dir, &delta) {
            warn!("{name} pattern is not proper");
            return Err(Error::GuaranteeViolated(format!(
                "{name} pattern is not proper (start {}, end {}, delta {})",
                format_rational(p.start()),
                format_rational(p.end()),
                format_rational(&delta)
            )));
        }
    }

    let induced = round_via_induced(&local, &pa, &delta)?;
    BoundedRounding::new(lift(r, s, swapped, &induced.pattern), bound, Method::Upper, induced.source)
}

/// Forward greedy from `D/2`, certified at `3/2 D`.
pub fn ssw_round(r: &CrossingRouting) -> Result<BoundedRounding<'_>> {
    let big_d = r.max_demand();
    let p = forward_greedy(r, half(&big_d))?;
    BoundedRounding::new(p, ssw_factor() * big_d, Method::Ssw, Source::ForwardGreedy)
}

/// The main driver: the medium construction for `delta >= 2/5`, the upper
/// one otherwise, certified at most `13/10 D`. The SSW pattern is returned
/// instead when it realizes strictly less; the certificate stays the
/// branch's.
pub fn round_main(r: &CrossingRouting) -> Result<BoundedRounding<'_>> {
    let (delta, _) = r.delta();
    let branch = if delta >= rat(2, 5) {
        round_medium(r)?
    } else {
        round_upper(r)?
    };
    debug_assert!(branch.bound_factor() <= main_factor());
    let ssw = ssw_round(r)?;
    if ssw.realized < branch.realized {
        BoundedRounding::new(ssw.pattern, branch.certified_bound, branch.method, Source::ForwardGreedy)
    } else {
        Ok(branch)
    }
}
