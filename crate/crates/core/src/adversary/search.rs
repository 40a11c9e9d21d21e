//! Randomized local search for split routings with a large minimum additive
//! performance, normalized by `D`.

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{min_additive_performance_capped, DEFAULT_CAP};
use crate::rational::{int, rat, Rational};
use crate::routing::CrossingRouting;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub m: usize,
    /// Total objective evaluations across all restarts.
    pub budget: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Grid denominator; every move shifts one part by `1/denominator`.
    pub denominator: i64,
    /// Incumbent to start restart 0 from; never degraded.
    pub start: Option<CrossingRouting>,
}

impl SearchConfig {
    pub fn new(m: usize, budget: usize, seed: u64) -> Self {
        Self {
            m,
            budget,
            seed,
            restarts: 8,
            denominator: 20,
            start: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub routing: CrossingRouting,
    /// Minimum additive performance of `routing` divided by its `D`.
    pub value: Rational,
    pub evaluations: usize,
    /// Restart that produced the result.
    pub restart: usize,
}

/// Normalized objective: the exact optimum of `r` divided by `D`.
pub fn objective(r: &CrossingRouting) -> Result<Rational> {
    let (perf, _) = min_additive_performance_capped(r, DEFAULT_CAP)?;
    Ok(perf / r.max_demand())
}

/// Parallel random-restart hill climbing. The result depends only on the
/// configuration: restarts are seeded individually and the best value wins,
/// ties going to the lowest restart index.
pub fn heuristic_search(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.m == 0 || cfg.m > DEFAULT_CAP {
        return Err(Error::OutOfRange(format!("m = {} (supported: 1..={DEFAULT_CAP})", cfg.m)));
    }
    if cfg.denominator < 2 {
        return Err(Error::OutOfRange(format!("grid denominator {}", cfg.denominator)));
    }
    if let Some(s) = &cfg.start {
        if s.m() != cfg.m {
            return Err(Error::LengthMismatch { left: cfg.m, right: s.m() });
        }
    }
    let restarts = cfg.restarts.max(1);
    let per_restart = (cfg.budget / restarts).max(1);
    let results: Vec<Result<SearchResult>> = (0..restarts)
        .into_par_iter()
        .map(|k| climb(cfg, k, per_restart))
        .collect();
    let mut best: Option<SearchResult> = None;
    let mut evaluations = 0;
    for res in results {
        let res = res?;
        evaluations += res.evaluations;
        if best.as_ref().is_none_or(|b| res.value > b.value) {
            best = Some(res);
        }
    }
    let mut best = best.expect("at least one restart");
    best.evaluations = evaluations;
    Ok(best)
}

fn climb(cfg: &SearchConfig, restart: usize, budget: usize) -> Result<SearchResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let q = cfg.denominator;
    let step = rat(1, q);
    let (mut u, mut v) = match (&cfg.start, restart) {
        (Some(s), 0) => {
            let s = s.normalized();
            (s.u().to_vec(), s.v().to_vec())
        }
        _ => random_point(&mut rng, cfg.m, q),
    };
    let mut current = objective(&CrossingRouting::new(u.clone(), v.clone())?)?;
    let mut evaluations = 1;
    while evaluations < budget {
        let i = rng.gen_range(0..cfg.m);
        let on_u = rng.gen_bool(0.5);
        let up = rng.gen_bool(0.5);
        let (mut nu, mut nv) = (u.clone(), v.clone());
        let part = if on_u { &mut nu[i] } else { &mut nv[i] };
        if up {
            *part += &step;
        } else {
            *part -= &step;
        }
        if *part <= int(0) || &nu[i] + &nv[i] > int(1) {
            continue;
        }
        let cand = objective(&CrossingRouting::new(nu.clone(), nv.clone())?)?;
        evaluations += 1;
        // plateau moves keep the walk going
        if cand >= current {
            u = nu;
            v = nv;
            current = cand;
        }
    }
    debug!("restart {restart}: {current} after {evaluations} evaluations");
    Ok(SearchResult {
        routing: CrossingRouting::new(u, v)?,
        value: current,
        evaluations,
        restart,
    })
}

fn random_point(rng: &mut ChaCha8Rng, m: usize, q: i64) -> (Vec<Rational>, Vec<Rational>) {
    let mut u = Vec::with_capacity(m);
    let mut v = Vec::with_capacity(m);
    for _ in 0..m {
        let total = rng.gen_range(2..=q);
        let a = rng.gen_range(1..total);
        u.push(rat(a, q));
        v.push(rat(total - a, q));
    }
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_demand_optimum_is_half() {
        let res = heuristic_search(&SearchConfig::new(1, 400, 7)).unwrap();
        assert_eq!(res.value, rat(1, 2));
        assert_eq!(res.routing.u()[0], res.routing.v()[0]);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = SearchConfig::new(3, 200, 42);
        let a = heuristic_search(&cfg).unwrap();
        let b = heuristic_search(&cfg).unwrap();
        assert_eq!(a.routing, b.routing);
        assert_eq!((a.value, a.restart), (b.value, b.restart));
    }

    #[test]
    fn value_is_the_exact_objective() {
        let res = heuristic_search(&SearchConfig::new(4, 160, 3)).unwrap();
        assert_eq!(objective(&res.routing).unwrap(), res.value);
    }
}
