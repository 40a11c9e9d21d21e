//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ringload_core::adversary::catalog::{
    seven18, skutella8, skutella8_uniform, tight3, tight5, tight6, tight_even,
};
use ringload_core::adversary::{build_milp, export_lp, max_feasible_objective, read_lp};
use ringload_core::boost::{boost, verify_boost};
use ringload_core::exact::{
    min_additive_performance, optimal_unsplittable_boosted, split_optimum_boosted, DEFAULT_CAP,
};
use ringload_core::pattern::Pattern;
use ringload_core::rational::{format_rational, int, rat, Rational};
use ringload_core::reduce::{to_crossing_form, uncross_parallel, Reduced};
use ringload_core::rounding::{
    closeness, crossover, main_factor, medium_factor, round_main, ssw_factor, upper_factor, Method,
};
use ringload_core::routing::CrossingRouting;

type Outcome = Result<String, String>;

fn within(budget: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took <= budget {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, budget {budget:?}"))
    }
}

fn expect_min(r: &CrossingRouting, expected: &Rational, label: &str) -> Result<(), String> {
    let (perf, _) = min_additive_performance(r).map_err(|e| e.to_string())?;
    if &perf == expected {
        Ok(())
    } else {
        Err(format!(
            "{label}: min additive performance {} != {}",
            format_rational(&perf),
            format_rational(expected)
        ))
    }
}

fn corpus(seed: u64, samples: usize, max_m: usize) -> Vec<CrossingRouting> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| common::random_routing(&mut rng, max_m)).collect()
}

fn c1_skutella() -> Outcome {
    let t = Instant::now();
    expect_min(&skutella8(&int(0)).unwrap(), &int(11), "skutella8(0)")?;
    let took = within(Duration::from_secs(1), t)?;
    Ok(format!("skutella8(0): 11 = D + 1 in {took:.2?}"))
}

fn c2_seven() -> Outcome {
    let t = Instant::now();
    expect_min(&seven18(), &int(19), "seven18")?;
    let took = within(Duration::from_secs(1), t)?;
    Ok(format!("seven18: 19 = D + 1 in {took:.2?}"))
}

fn c3_boost_skutella() -> Outcome {
    let t = Instant::now();
    let b = boost(&skutella8(&int(0)).unwrap());
    let l_star = split_optimum_boosted(&b).map_err(|e| e.to_string())?;
    let (l, _) = optimal_unsplittable_boosted(&b, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(10), t)?;
    let shape = format!(
        "{} nodes, {} demands, L* = {}, L = {}",
        b.instance.n(),
        b.instance.demands().len(),
        format_rational(&l_star),
        format_rational(&l)
    );
    if l_star == int(39) && l == int(50) {
        Ok(format!("{shape} in {took:.2?}"))
    } else {
        Err(format!("{shape}; expected L* = 39, L = 50"))
    }
}

fn c4_tight() -> Outcome {
    let t = Instant::now();
    let family = [
        ("tight3", tight3()),
        ("tight5", tight5()),
        ("tight6", tight6()),
        ("tight_even(2)", tight_even(2).unwrap()),
        ("tight_even(4)", tight_even(4).unwrap()),
    ];
    for (name, r) in &family {
        let big_d = r.max_demand();
        expect_min(r, &big_d, name)?;
        let report = verify_boost(&boost(r)).map_err(|e| format!("{name}: {e}"))?;
        if report.gap() != big_d {
            return Err(format!("{name}: L - L* = {} != D", format_rational(&report.gap())));
        }
    }
    let took = within(Duration::from_secs(5), t)?;
    Ok(format!("5 routings: optimum D and L - L* = D in {took:.2?}"))
}

fn c5_main_bound() -> Outcome {
    let t = Instant::now();
    let (mut upper, mut medium, mut ssw_won) = (0, 0, 0);
    for (k, r) in corpus(5, 10_000, 16).iter().enumerate() {
        let b = round_main(r).map_err(|e| format!("sample {k}: {e}"))?;
        let big_d = r.max_demand();
        let (delta, _) = r.delta();
        let branch_bound = match b.method {
            Method::Upper => {
                upper += 1;
                upper_factor(&delta)
            }
            Method::Medium => {
                medium += 1;
                medium_factor(&delta)
            }
            other => return Err(format!("sample {k}: unexpected branch {other}")),
        };
        if b.realized > main_factor() * &big_d || b.realized > branch_bound * &big_d {
            return Err(format!(
                "sample {k}: realized {} exceeds its bound (D = {})",
                format_rational(&b.realized),
                format_rational(&big_d)
            ));
        }
        if b.source == ringload_core::rounding::Source::ForwardGreedy {
            ssw_won += 1;
        }
    }
    let took = within(Duration::from_secs(300), t)?;
    Ok(format!(
        "10000 routings: {upper} upper, {medium} medium branch ({ssw_won} kept the SSW pattern) in {took:.2?}"
    ))
}

fn c6_ssw() -> Outcome {
    let t = Instant::now();
    for (k, r) in corpus(5, 10_000, 16).iter().enumerate() {
        let b = ringload_core::rounding::ssw_round(r).map_err(|e| format!("sample {k}: {e}"))?;
        if b.realized > ssw_factor() * r.max_demand() {
            return Err(format!("sample {k}: realized {}", format_rational(&b.realized)));
        }
    }
    Ok(format!("10000 routings within 3/2 D in {:.2?}", t.elapsed()))
}

fn c7_oracle() -> Outcome {
    let t = Instant::now();
    let mut equal = 0;
    for (k, r) in corpus(7, 1_000, 12).iter().enumerate() {
        let (opt, _) = min_additive_performance(r).map_err(|e| e.to_string())?;
        let b = round_main(r).map_err(|e| format!("sample {k}: {e}"))?;
        if opt > b.realized {
            return Err(format!("sample {k}: oracle {} above rounding", format_rational(&opt)));
        }
        if opt == b.realized {
            equal += 1;
        }
    }
    if equal == 0 {
        return Err("the rounding never matched the optimum".into());
    }
    Ok(format!("1000 routings, optimum matched on {equal} in {:.2?}", t.elapsed()))
}

fn c8_crossover() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..1_000 {
        let r = common::random_routing(&mut rng, 12);
        let full = (1u64 << r.m()) - 1;
        let p1 = Pattern::from_mask(&r, rng.gen::<u64>() & full, common::random_rational(&mut rng, 10, 12));
        let p2 = Pattern::from_mask(&r, rng.gen::<u64>() & full, common::random_rational(&mut rng, 10, 12));
        let (eps, _) = closeness(&p1, &p2).map_err(|e| e.to_string())?;
        let c = crossover(&p1, &p2).map_err(|e| e.to_string())?;
        let sum_ok = c.start() + c.end() == p1.start() + p2.end();
        let half_eps = &eps / int(2);
        let lo = std::cmp::min(p1.low(), p2.low()) - &half_eps;
        let hi = std::cmp::max(p1.high(), p2.high()) + &half_eps;
        if !sum_ok || c.low() < &lo || c.high() > &hi {
            return Err(format!("invocation {k} breaks the contract"));
        }
    }
    Ok(format!("1000 invocations in {:.2?}", t.elapsed()))
}

fn c9_families() -> Outcome {
    let t = Instant::now();
    for eps in [int(0), rat(1, 2), int(1), int(2), int(5)] {
        let expected = int(11) + int(2) * &eps;
        expect_min(&skutella8(&eps).unwrap(), &expected, &format!("skutella8({})", format_rational(&eps)))?;
    }
    for eps in [int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)] {
        let expected = int(11) + int(2) * &eps;
        let r = skutella8_uniform(&eps).unwrap();
        expect_min(&r, &expected, &format!("skutella8_uniform({})", format_rational(&eps)))?;
    }
    let took = within(Duration::from_secs(10), t)?;
    Ok(format!("10 parameter samples at D + 1 = 11 + 2 eps in {took:.2?}"))
}

fn c10_milp() -> Outcome {
    let t = Instant::now();
    let routings = [(2, tight_even(2).unwrap()), (3, tight3())];
    for (m, r) in &routings {
        let full = build_milp(*m, false, false).map_err(|e| e.to_string())?;
        let reduced = build_milp(*m, true, false).map_err(|e| e.to_string())?;
        let a = max_feasible_objective(&full, r);
        let b = max_feasible_objective(&reduced, r);
        if a != b || a.is_none() {
            return Err(format!("m = {m}: unreduced {a:?} vs reduced {b:?}"));
        }
    }
    for m in [2, 3, 7] {
        let model = build_milp(m, true, true).map_err(|e| e.to_string())?;
        let text = export_lp(&model);
        if text != export_lp(&build_milp(m, true, true).unwrap()) {
            return Err(format!("m = {m}: export is not deterministic"));
        }
        if read_lp(&text).map_err(|e| e.to_string())? != model {
            return Err(format!("m = {m}: LP round trip changed the model"));
        }
    }
    Ok(format!(
        "equal maximal E on the m = 2, 3 catalog routings; LP round trip and bytes stable for m = 2, 3, 7 in {:.2?}",
        t.elapsed()
    ))
}

fn c11_reduction() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut patterns = 0usize;
    for k in 0..100 {
        let s = common::random_general(&mut rng, 10, 10);
        let (uncrossed, _) = uncross_parallel(&s);
        let (before, after) = (s.loads(), uncrossed.loads());
        if after.0.iter().zip(&before.0).any(|(a, b)| a > b) {
            return Err(format!("instance {k}: uncrossing raised a load"));
        }
        let Reduced::Crossing { routing, trace } = to_crossing_form(&s).map_err(|e| e.to_string())? else {
            continue;
        };
        for mask in 0..1u64 << routing.m() {
            let p = Pattern::from_mask(&routing, mask, int(0));
            let reduced = p.delta();
            let lifted = trace.lifted_delta(&p);
            for (e, d) in lifted.0.iter().enumerate() {
                if d != &reduced.0[trace.reduced_edge_of(e + 1) - 1] {
                    return Err(format!("instance {k}, mask {mask:b}: edge {} differs", e + 1));
                }
            }
            patterns += 1;
        }
    }
    Ok(format!("100 instances, {patterns} lifted patterns in {:.2?}", t.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("skutella counterexample", c1_skutella),
        ("m = 7 instance", c2_seven),
        ("boost reproduction", c3_boost_skutella),
        ("tight small families", c4_tight),
        ("main bound property suite", c5_main_bound),
        ("SSW baseline", c6_ssw),
        ("oracle dominance", c7_oracle),
        ("crossover contract", c8_crossover),
        ("parametrized families", c9_families),
        ("MILP model equivalence", c10_milp),
        ("reduction soundness", c11_reduction),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
