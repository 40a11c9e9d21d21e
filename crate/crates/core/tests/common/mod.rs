#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ringload_core::rational::{int, rat, Rational};
use ringload_core::reduce::GeneralSplitRouting;
use ringload_core::routing::{CrossingRouting, Demand, RingInstance};

pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    rat(rng.gen_range(1..=max_num * q), q)
}

/// Strictly split routing with `1 <= m <= max_m`, parts `p/q` with `q <= 12`.
/// Every third sample is bimodal (demands of `D` or small) so that small
/// `delta` is well represented.
pub fn random_routing(rng: &mut ChaCha8Rng, max_m: usize) -> CrossingRouting {
    let m = rng.gen_range(1..=max_m);
    let (mut u, mut v) = (Vec::with_capacity(m), Vec::with_capacity(m));
    if rng.gen_ratio(1, 3) {
        let big = int(rng.gen_range(2..=12));
        let small = random_rational(rng, 1, 12) * &big / int(2);
        for _ in 0..m {
            let d = if rng.gen_bool(0.6) { big.clone() } else { small.clone() };
            let q = rng.gen_range(2..=12);
            let share = rat(rng.gen_range(1..q), q);
            u.push(&d * &share);
            v.push(&d * (int(1) - share));
        }
    } else {
        for _ in 0..m {
            u.push(random_rational(rng, 6, 12));
            v.push(random_rational(rng, 6, 12));
        }
    }
    CrossingRouting::new(u, v).expect("strictly split")
}

/// Ring with up to `max_split` split and `max_unsplit` unsplit demands.
pub fn random_general(rng: &mut ChaCha8Rng, max_split: usize, max_unsplit: usize) -> GeneralSplitRouting {
    let n = rng.gen_range(4..=24);
    let split = rng.gen_range(0..=max_split);
    let unsplit = rng.gen_range(0..=max_unsplit);
    let mut pairs = std::collections::BTreeSet::new();
    let mut demands = Vec::new();
    let mut parts = Vec::new();
    let mut attempts = 0;
    while demands.len() < split + unsplit && attempts < 1000 {
        attempts += 1;
        let i = rng.gen_range(1..n);
        let j = rng.gen_range(i + 1..=n);
        if !pairs.insert((i, j)) {
            continue;
        }
        let value = random_rational(rng, 5, 12);
        let part = if demands.len() < split {
            let q = rng.gen_range(2..=12);
            &value * rat(rng.gen_range(1..q), q)
        } else if rng.gen_bool(0.5) {
            value.clone()
        } else {
            int(0)
        };
        demands.push(Demand { i, j, value });
        parts.push(part);
    }
    let inst = RingInstance::new(n, demands).expect("valid");
    GeneralSplitRouting::new(inst, parts).expect("valid parts")
}
