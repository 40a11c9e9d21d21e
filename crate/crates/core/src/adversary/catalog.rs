//! Built-in lower-bound routings.

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};
use crate::routing::CrossingRouting;

const SKUTELLA_U: [i64; 8] = [4, 4, 6, 2, 7, 1, 7, 2];
const SKUTELLA_V: [i64; 8] = [6, 4, 4, 2, 3, 7, 3, 2];

fn shifted(base: &[i64], eps: &Rational, mask: &[bool]) -> Vec<Rational> {
    base.iter()
        .zip(mask)
        .map(|(&x, &add)| if add { int(x) + eps } else { int(x) })
        .collect()
}

/// Skutella's eight-demand routing, widened by `eps >= 0` on all demands but
/// the fourth and eighth. `D = 10 + 2 eps`, optimum `D + 1`.
pub fn skutella8(eps: &Rational) -> Result<CrossingRouting> {
    if eps < &int(0) {
        return Err(Error::ParameterOutOfRange(format!("skutella8 needs eps >= 0, got {}", format_rational(eps))));
    }
    let mask = [true, true, true, false, true, true, true, false];
    CrossingRouting::new(shifted(&SKUTELLA_U, eps, &mask), shifted(&SKUTELLA_V, eps, &mask))
}

/// Skutella's routing widened by `eps in [0, 1]` on every demand.
pub fn skutella8_uniform(eps: &Rational) -> Result<CrossingRouting> {
    if eps < &int(0) || eps > &int(1) {
        return Err(Error::ParameterOutOfRange(format!(
            "skutella8_uniform needs eps in [0, 1], got {}",
            format_rational(eps)
        )));
    }
    let mask = [true; 8];
    CrossingRouting::new(shifted(&SKUTELLA_U, eps, &mask), shifted(&SKUTELLA_V, eps, &mask))
}

/// Seven demands with `D = 18`, optimum 19.
pub fn seven18() -> CrossingRouting {
    CrossingRouting::from_integers(&[7, 11, 6, 10, 6, 8, 5], &[11, 3, 12, 2, 2, 10, 5]).expect("valid")
}

/// The same seven demand values under the split drawn in the boosting
/// figure; edge loads 49, 59, 51, 43, 43, 45, 41, 49, 39, 47, 55, 55, 53, 57.
pub fn seven18_fig() -> CrossingRouting {
    CrossingRouting::from_integers(&[5, 12, 5, 2, 4, 10, 3], &[13, 2, 13, 10, 4, 8, 7]).expect("valid")
}

pub fn tight3() -> CrossingRouting {
    CrossingRouting::from_integers(&[2, 3, 3], &[2, 1, 1]).expect("valid")
}

pub fn tight5() -> CrossingRouting {
    CrossingRouting::from_integers(&[2, 2, 2, 3, 3], &[2, 2, 2, 1, 1]).expect("valid")
}

pub fn tight6() -> CrossingRouting {
    tight_even(6).expect("6 is even")
}

/// `m` unit demands split evenly, for even `m >= 2`; optimum `D`.
pub fn tight_even(m: usize) -> Result<CrossingRouting> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::ParameterOutOfRange(format!("tight_even needs an even m >= 2, got {m}")));
    }
    Ok(CrossingRouting::from_integers(&vec![1; m], &vec![1; m]).expect("valid"))
}

/// Catalog names accepted by [`lookup`].
pub const NAMES: [&str; 8] = [
    "skutella8",
    "skutella8_uniform",
    "seven18",
    "seven18_fig",
    "tight3",
    "tight5",
    "tight6",
    "tight_even",
];

/// Builds a catalog routing by name. `eps` defaults to 0 for the two
/// parametrized families; `m` is required by `tight_even` only.
pub fn lookup(name: &str, eps: Option<&Rational>, m: Option<usize>) -> Result<CrossingRouting> {
    let zero = int(0);
    let eps = eps.unwrap_or(&zero);
    match name {
        "skutella8" => skutella8(eps),
        "skutella8_uniform" => skutella8_uniform(eps),
        "seven18" => Ok(seven18()),
        "seven18_fig" => Ok(seven18_fig()),
        "tight3" => Ok(tight3()),
        "tight5" => Ok(tight5()),
        "tight6" => Ok(tight6()),
        "tight_even" => tight_even(m.ok_or_else(|| Error::ParameterOutOfRange("tight_even needs m".into()))?),
        _ => Err(Error::ParameterOutOfRange(format!("unknown instance {name:?}"))),
    }
}

/// Every fixed routing of the catalog (parametrized families at `eps = 0`,
/// `tight_even` at `m = 2, 4`).
pub fn builtin_instances() -> Vec<(String, CrossingRouting)> {
    let zero = int(0);
    vec![
        ("skutella8".into(), skutella8(&zero).expect("valid")),
        ("skutella8_uniform".into(), skutella8_uniform(&zero).expect("valid")),
        ("seven18".into(), seven18()),
        ("seven18_fig".into(), seven18_fig()),
        ("tight3".into(), tight3()),
        ("tight5".into(), tight5()),
        ("tight6".into(), tight6()),
        ("tight_even2".into(), tight_even(2).expect("even")),
        ("tight_even4".into(), tight_even(4).expect("even")),
    ]
}
