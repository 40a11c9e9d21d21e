//! Exact rational numbers and the handful of helpers the rest of the crate
//! needs around them (construction, strict text parsing, printing, and
//! scaling a set of values onto a common integer grid).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational in canonical form (positive denominator,
/// coprime numerator and denominator).
pub type Rational = BigRational;

/// `p / q` as an exact rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half(x: &Rational) -> Rational {
    x / int(2)
}

/// Parses `p` or `p/q` with optional leading minus sign. Floats and
/// whitespace are rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    fn parse_int(t: &str) -> Option<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    }
    match s.split_once('/') {
        None => parse_int(s).map(Rational::from_integer),
        Some((p, q)) => {
            if q.starts_with('-') {
                return None;
            }
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
    }
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `p/q (≈ 0.123456)`, the report format used by the CLI.
pub fn describe(r: &Rational) -> String {
    if r.is_integer() {
        format_rational(r)
    } else {
        format!("{} (≈ {:.6})", format_rational(r), to_f64(r))
    }
}

/// Values brought onto a common denominator: `values[i] == scaled[i] / denominator`.
#[derive(Debug, Clone)]
pub struct IntegerGrid {
    pub denominator: BigInt,
    pub scaled: Vec<i64>,
}

impl IntegerGrid {
    /// Scales `values` to integers. Returns `None` when any scaled magnitude
    /// exceeds `limit`, so callers can keep sums of up to `i64::MAX / limit`
    /// terms overflow free.
    pub fn new(values: &[Rational], limit: i64) -> Option<Self> {
        let denominator = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let limit = BigInt::from(limit);
        let mut scaled = Vec::with_capacity(values.len());
        for v in values {
            let s = v.numer() * (&denominator / v.denom());
            if s.abs() > limit {
                return None;
            }
            scaled.push(s.to_i64()?);
        }
        Some(Self {
            denominator,
            scaled,
        })
    }

    pub fn unscale(&self, x: i64) -> Rational {
        Rational::new(BigInt::from(x), self.denominator.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-7/14"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("6/4"), Some(rat(3, 2)));
    }

    #[test]
    fn rejects_floats_and_junk() {
        for s in ["1.5", "", "/3", "3/", "3/0", "1e3", " 1", "3/-4", "--1", "+1"] {
            assert_eq!(parse_rational(s), None, "{s:?}");
        }
    }

    #[test]
    fn canonical_form() {
        let r = rat(10, -4);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&r), "-5/2");
        assert_eq!(format_rational(&int(4)), "4");
    }

    #[test]
    fn grid_scaling_roundtrips() {
        let vals = vec![rat(1, 3), rat(5, 4), int(2)];
        let g = IntegerGrid::new(&vals, 1 << 40).unwrap();
        assert_eq!(g.denominator, BigInt::from(12));
        assert_eq!(g.scaled, vec![4, 15, 24]);
        for (v, s) in vals.iter().zip(&g.scaled) {
            assert_eq!(&g.unscale(*s), v);
        }
        assert!(IntegerGrid::new(&vals, 10).is_none());
    }
}
