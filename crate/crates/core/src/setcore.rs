//! Finite sets of nonzero Gaussian rationals and their sum-product statistics.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, GaussianRational, Rational};
use crate::exec::Exec;

/// Default size cap for [`energy_oracle`].
pub const ORACLE_CAP: usize = 16;

/// A finite set `A` of distinct, nonzero Gaussian rationals in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexSet {
    elements: Vec<GaussianRational>,
}

impl ComplexSet {
    /// Rejects empty input, zero, and duplicates; never drops elements silently.
    pub fn new(mut elements: Vec<GaussianRational>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptySet);
        }
        if elements.iter().any(GaussianRational::is_zero) {
            return Err(Error::ZeroElement);
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].to_string()));
        }
        Ok(Self { elements })
    }

    pub fn from_ints(values: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&(re, im)| GaussianRational::from_ints(re, im))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GaussianRational] {
        &self.elements
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        self.elements.binary_search(z).is_ok()
    }

    /// `λ·A` for `λ ≠ 0`.
    pub fn scaled(&self, lambda: &GaussianRational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroElement);
        }
        Self::new(self.elements.iter().map(|z| z * lambda).collect())
    }
}

fn pairwise_set<F>(a: &ComplexSet, exec: Exec, op: F) -> Vec<GaussianRational>
where
    F: Fn(&GaussianRational, &GaussianRational) -> GaussianRational + Sync + Send,
{
    let el = a.elements();
    // both operations are commutative, so j >= i suffices
    let set = exec.fold_indices(
        el.len(),
        HashSet::new,
        |mut acc, i| {
            for b in &el[i..] {
                acc.insert(op(&el[i], b));
            }
            acc
        },
        |mut x, mut y| {
            if x.len() < y.len() {
                std::mem::swap(&mut x, &mut y);
            }
            x.extend(y);
            x
        },
    );
    let mut out: Vec<_> = set.into_iter().collect();
    out.sort();
    out
}

/// `A + A`, sorted.
pub fn sumset(a: &ComplexSet) -> Vec<GaussianRational> {
    sumset_with(a, Exec::default())
}

pub fn sumset_with(a: &ComplexSet, exec: Exec) -> Vec<GaussianRational> {
    pairwise_set(a, exec, |x, y| x + y)
}

/// `A · A`, sorted.
pub fn productset(a: &ComplexSet) -> Vec<GaussianRational> {
    productset_with(a, Exec::default())
}

pub fn productset_with(a: &ComplexSet, exec: Exec) -> Vec<GaussianRational> {
    pairwise_set(a, exec, |x, y| x * y)
}

/// The count `ν(t)` of ordered pairs `(a₁, a₂) ∈ A²` with `a₁/a₂ = t`, for
/// every direction `t` that occurs, together with `E(A) = Σ ν(t)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionTally {
    entries: BTreeMap<GaussianRational, u64>,
    energy: u64,
}

impl DirectionTally {
    pub fn entries(&self) -> &BTreeMap<GaussianRational, u64> {
        &self.entries
    }

    pub fn energy(&self) -> u64 {
        self.energy
    }

    pub fn nu(&self, t: &GaussianRational) -> u64 {
        self.entries.get(t).copied().unwrap_or(0)
    }

    /// Number of distinct directions `|T|`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_pairs(&self) -> u64 {
        self.entries.values().sum()
    }
}

pub fn direction_tally(a: &ComplexSet) -> DirectionTally {
    direction_tally_with(a, Exec::default())
}

pub fn direction_tally_with(a: &ComplexSet, exec: Exec) -> DirectionTally {
    let el = a.elements();
    let counts = exec.fold_indices(
        el.len(),
        HashMap::new,
        |mut acc: HashMap<GaussianRational, u64>, i| {
            for b in el {
                let t = el[i].checked_div(b).expect("0 is excluded from ComplexSet");
                *acc.entry(t).or_insert(0) += 1;
            }
            acc
        },
        |mut x, y| {
            for (t, c) in y {
                *x.entry(t).or_insert(0) += c;
            }
            x
        },
    );
    let entries: BTreeMap<_, _> = counts.into_iter().collect();
    let energy = entries.values().map(|v| v * v).sum();
    DirectionTally { entries, energy }
}

/// Brute-force count of ordered quadruples with `a₁/a₂ = a₃/a₄`.
///
/// Compared by cross-multiplication `a₁·a₄ = a₃·a₂`, so this path shares no
/// division or tallying code with [`direction_tally`].
pub fn energy_oracle(a: &ComplexSet, cap: usize) -> Result<u64> {
    energy_oracle_with(a, cap, Exec::default())
}

pub fn energy_oracle_with(a: &ComplexSet, cap: usize, exec: Exec) -> Result<u64> {
    if a.len() > cap {
        return Err(Error::OracleCapExceeded { size: a.len(), cap });
    }
    let el = a.elements();
    let n = el.len();
    // prod[i][j] = aᵢ·aⱼ; the quadruple loop below only compares
    let prod: Vec<Vec<GaussianRational>> = el.iter().map(|x| el.iter().map(|y| x * y).collect()).collect();
    Ok(exec.fold_indices(
        n,
        || 0u64,
        |mut acc, i1| {
            for i2 in 0..n {
                for i3 in 0..n {
                    for i4 in 0..n {
                        if prod[i1][i4] == prod[i3][i2] {
                            acc += 1;
                        }
                    }
                }
            }
            acc
        },
        |x, y| x + y,
    ))
}

/// Outcome of checking `E(A) ≥ |A|⁴ / |A·A|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchySchwarzVerdict {
    pub energy: u64,
    #[serde(serialize_with = "crate::exactnum::serialize_rational")]
    pub lower_bound: Rational,
    pub holds: bool,
}

pub fn cauchy_schwarz_check(tally: &DirectionTally, a: &ComplexSet, productset_size: usize) -> CauchySchwarzVerdict {
    let n = Rational::from_integer(a.len().into());
    let bound = n.clone() * &n * &n * &n / Rational::from_integer(productset_size.into());
    let energy = tally.energy();
    let holds = Rational::from_integer(energy.into()) >= bound;
    CauchySchwarzVerdict {
        energy,
        lower_bound: bound,
        holds,
    }
}

impl std::fmt::Display for CauchySchwarzVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rel = if self.holds { ">=" } else { "<" };
        write!(f, "E = {} {} {}", self.energy, rel, fmt_rational(&self.lower_bound))
    }
}

/// Structural checks on a tally; returns a description of the first failure.
pub fn tally_invariants(tally: &DirectionTally, a: &ComplexSet) -> std::result::Result<(), String> {
    let n = a.len() as u64;
    if tally.total_pairs() != n * n {
        return Err(format!("sum of nu = {} != |A|^2 = {}", tally.total_pairs(), n * n));
    }
    if tally.nu(&GaussianRational::one()) != n {
        return Err(format!("nu(1) = {} != |A| = {}", tally.nu(&GaussianRational::one()), n));
    }
    for (t, &v) in tally.entries() {
        if v > n {
            return Err(format!("nu({t}) = {v} exceeds |A| = {n}"));
        }
        let inv = t.recip().map_err(|e| e.to_string())?;
        if tally.nu(&inv) != v {
            return Err(format!("nu({t}) = {v} but nu({inv}) = {}", tally.nu(&inv)));
        }
    }
    let e: u64 = tally.entries().values().map(|v| v * v).sum();
    if e != tally.energy() || tally.energy().is_zero() {
        return Err(format!("energy field {} != sum of squares {}", tally.energy(), e));
    }
    Ok(())
}
