//! Dyadic pigeonholing of the direction counts.

use serde::Serialize;

use crate::exactnum::{floor_log2, log2_at_least, GaussianRational, Rational};
use crate::setcore::DirectionTally;

/// Directions `t` with `ν(t) ∈ [2ᵏ, 2ᵏ⁺¹)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicClass {
    pub k: u32,
    /// `(t, ν(t))` in canonical direction order.
    pub members: Vec<(GaussianRational, u64)>,
    /// `Σ ν(t)²` over the members.
    pub mass: u64,
}

impl DyadicClass {
    pub fn directions(&self) -> impl Iterator<Item = &GaussianRational> {
        self.members.iter().map(|(t, _)| t)
    }

    pub fn min_nu(&self) -> u64 {
        self.members.iter().map(|m| m.1).min().unwrap_or(0)
    }

    pub fn max_nu(&self) -> u64 {
        self.members.iter().map(|m| m.1).max().unwrap_or(0)
    }

    /// `max ν < 2 · min ν`.
    pub fn is_twofold_comparable(&self) -> bool {
        self.max_nu() < 2 * self.min_nu()
    }

    pub fn total_points(&self) -> u64 {
        self.members.iter().map(|m| m.1).sum()
    }
}

/// Nonempty classes in increasing `k`.
pub fn dyadic_decompose(tally: &DirectionTally) -> Vec<DyadicClass> {
    let mut by_k: std::collections::BTreeMap<u32, DyadicClass> = Default::default();
    for (t, &nu) in tally.entries() {
        let k = floor_log2(nu);
        let class = by_k.entry(k).or_insert_with(|| DyadicClass {
            k,
            members: Vec::new(),
            mass: 0,
        });
        class.members.push((t.clone(), nu));
        class.mass += nu * nu;
    }
    by_k.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionVerdict {
    pub nonempty_classes: usize,
    /// `mass · (number of nonempty classes) ≥ E`; always true.
    pub pigeonhole: bool,
    /// `mass ≥ E / (⌊log₂|A|⌋ + 1)`; always true since `ν ≤ |A|`.
    pub provable_bound: bool,
    /// `mass ≥ E / (2·log₂|A|)`, compared exactly; `None` when `|A| < 2`.
    pub log_style_bound: Option<bool>,
}

/// Select the class of maximal mass, ties going to the smaller `k`.
pub fn select_popular_class(classes: &[DyadicClass], set_size: usize) -> (DyadicClass, SelectionVerdict) {
    assert!(!classes.is_empty(), "no dyadic classes");
    let best = classes
        .iter()
        .fold(None::<&DyadicClass>, |best, c| match best {
            Some(b) if b.mass > c.mass || (b.mass == c.mass && b.k < c.k) => Some(b),
            _ => Some(c),
        })
        .expect("nonempty");
    let energy: u64 = classes.iter().map(|c| c.mass).sum();
    let n = set_size as u64;
    let slots = floor_log2(n.max(1)) as u64 + 1;
    let log_style_bound = (n >= 2).then(|| {
        // mass ≥ E / (2 log₂ n)  ⇔  log₂ n ≥ E / (2 mass)
        let need = Rational::new(energy.into(), (2 * best.mass).into());
        log2_at_least(n, &need)
    });
    let verdict = SelectionVerdict {
        nonempty_classes: classes.len(),
        pigeonhole: best.mass as u128 * classes.len() as u128 >= energy as u128,
        provable_bound: best.mass as u128 * slots as u128 >= energy as u128,
        log_style_bound,
    };
    (best.clone(), verdict)
}
