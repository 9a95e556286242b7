//! Deterministic set families.

use std::collections::HashSet;

use clap::ValueEnum;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, Rational};
use crate::setcore::ComplexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// {1, ..., n}
    Ap,
    /// {r, r², ..., rⁿ}
    Gp,
    /// {a + bi : 1 ≤ a, b ≤ m}, n = m²
    Grid,
    /// n distinct random Gaussian rationals
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ap => "ap",
            Family::Gp => "gp",
            Family::Grid => "grid",
            Family::Random => "random",
        }
    }

    /// Whether `n` is a valid size for this family.
    pub fn accepts(self, n: usize) -> bool {
        n >= 1 && (self != Family::Grid || exact_sqrt(n).is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// Ratio for `gp`.
    pub ratio: GaussianRational,
    /// Numerator/denominator bound for `random`.
    pub bound: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            ratio: GaussianRational::from_ints(2, 0),
            bound: 8,
        }
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let m = (n as f64).sqrt().round() as usize;
    (m * m == n).then_some(m)
}

fn rat_in(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let num = rng.random_range(-bound..=bound);
    let den = rng.random_range(1..=bound);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn generate(family: Family, n: usize, params: &GenParams, seed: u64) -> Result<ComplexSet> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    match family {
        Family::Ap => ComplexSet::new((1..=n as i64).map(|k| GaussianRational::from_ints(k, 0)).collect()),
        Family::Gp => {
            let r = &params.ratio;
            let one = GaussianRational::one();
            if r.is_zero() || *r == one || *r == -&one {
                return Err(Error::InvalidParams(format!("gp ratio must not be 0 or ±1, got {r}")));
            }
            let mut powers = Vec::with_capacity(n);
            let mut cur = r.clone();
            for _ in 0..n {
                powers.push(cur.clone());
                cur = &cur * r;
            }
            ComplexSet::new(powers).map_err(|e| match e {
                Error::DuplicateElement(z) => {
                    Error::InvalidParams(format!("ratio {r} repeats a power ({z}) within n = {n} terms"))
                }
                other => other,
            })
        }
        Family::Grid => {
            let m = exact_sqrt(n).ok_or_else(|| Error::InvalidParams(format!("grid needs n = m², got {n}")))? as i64;
            ComplexSet::new(
                (1..=m)
                    .flat_map(|a| (1..=m).map(move |b| GaussianRational::from_ints(a, b)))
                    .collect(),
            )
        }
        Family::Random => {
            let bound = params.bound as i64;
            if bound < 1 {
                return Err(Error::InvalidParams("random bound must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(n);
            let budget = 1000 * n + 1000;
            for _ in 0..budget {
                if out.len() == n {
                    break;
                }
                let z = GaussianRational::new(rat_in(&mut rng, bound), rat_in(&mut rng, bound));
                if !z.is_zero() && seen.insert(z.clone()) {
                    out.push(z);
                }
            }
            if out.len() < n {
                return Err(Error::InvalidParams(format!(
                    "could not draw {n} distinct values with bound {bound}"
                )));
            }
            ComplexSet::new(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[(i64, i64)]) -> ComplexSet {
        ComplexSet::from_ints(v).unwrap()
    }

    #[test]
    fn families() {
        let p = GenParams::default();
        assert_eq!(generate(Family::Ap, 3, &p, 0).unwrap(), ints(&[(1, 0), (2, 0), (3, 0)]));
        assert_eq!(
            generate(Family::Grid, 4, &p, 0).unwrap(),
            ints(&[(1, 1), (1, 2), (2, 1), (2, 2)])
        );
        assert_eq!(generate(Family::Gp, 3, &p, 0).unwrap(), ints(&[(2, 0), (4, 0), (8, 0)]));
    }

    #[test]
    fn invalid_params() {
        let p = GenParams::default();
        assert!(generate(Family::Grid, 5, &p, 0).is_err());
        assert!(generate(Family::Ap, 0, &p, 0).is_err());
        for r in [(0, 0), (1, 0), (-1, 0)] {
            let p = GenParams {
                ratio: GaussianRational::from_ints(r.0, r.1),
                ..GenParams::default()
            };
            assert!(matches!(generate(Family::Gp, 3, &p, 0), Err(Error::InvalidParams(_))));
        }
        // i⁴ = 1 repeats
        let p = GenParams {
            ratio: GaussianRational::i(),
            ..GenParams::default()
        };
        assert!(generate(Family::Gp, 3, &p, 0).is_ok());
        assert!(matches!(generate(Family::Gp, 5, &p, 0), Err(Error::InvalidParams(_))));
        let p = GenParams {
            bound: 1,
            ..GenParams::default()
        };
        assert!(generate(Family::Random, 100, &p, 0).is_err());
    }

    #[test]
    fn random_is_seeded() {
        let p = GenParams::default();
        let a = generate(Family::Random, 10, &p, 42).unwrap();
        assert_eq!(a, generate(Family::Random, 10, &p, 42).unwrap());
        assert_ne!(a, generate(Family::Random, 10, &p, 43).unwrap());
        assert_eq!(a.len(), 10);
        let b = i64::from(p.bound);
        for z in a.elements() {
            for part in [&z.re, &z.im] {
                assert!(part.numer().magnitude() <= &num_bigint::BigUint::from(b as u64));
                assert!(part.denom() <= &BigInt::from(b));
            }
        }
    }
}
