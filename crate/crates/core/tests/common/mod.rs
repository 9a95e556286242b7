//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use spcert::exactnum::VecQ;
use spcert::generate::{generate, Family, GenParams};
use spcert::{ComplexSet, GaussianRational, Rational, Vec2Q};

pub fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn small_rat(rng: &mut ChaCha8Rng, m: i64) -> Rational {
    q(rng.random_range(-m..=m), rng.random_range(1..=m))
}

pub fn small_gq(rng: &mut ChaCha8Rng, m: i64) -> GaussianRational {
    GaussianRational::new(small_rat(rng, m), small_rat(rng, m))
}

pub fn nonzero_gq(rng: &mut ChaCha8Rng, m: i64) -> GaussianRational {
    loop {
        let z = small_gq(rng, m);
        if !z.is_zero() {
            return z;
        }
    }
}

fn gp_ratios() -> Vec<GaussianRational> {
    vec![g(2, 0), g(-3, 0), g(1, 1), GaussianRational::new(q(1, 2), q(1, 1))]
}

/// Seeded sets with `|A| ≤ 12` across all four families, plus a few
/// hand-picked ones.
pub fn small_corpus() -> Vec<(String, ComplexSet)> {
    let mut out = Vec::new();
    let base = GenParams::default();
    for n in 1..=12 {
        out.push((format!("ap({n})"), generate(Family::Ap, n, &base, 0).unwrap()));
        for r in gp_ratios() {
            let p = GenParams {
                ratio: r.clone(),
                ..base.clone()
            };
            out.push((format!("gp({n}, {r})"), generate(Family::Gp, n, &p, 0).unwrap()));
        }
        for (bound, seeds) in [(8u32, 0..10u64), (3, 100..105)] {
            let p = GenParams { bound, ..base.clone() };
            for s in seeds {
                out.push((
                    format!("random({n}, M={bound}, seed={s})"),
                    generate(Family::Random, n, &p, s).unwrap(),
                ));
            }
        }
    }
    for n in [1, 4, 9] {
        out.push((format!("grid({n})"), generate(Family::Grid, n, &base, 0).unwrap()));
    }
    let hand: [&[(i64, i64)]; 5] = [
        &[(1, 0), (0, 1)],
        &[(1, 0), (2, 0), (4, 0)],
        &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)],
        &[(1, 0), (2, 0), (3, 0), (0, 1), (0, 2), (0, 3)],
    ];
    for v in hand {
        out.push((format!("{v:?}"), ComplexSet::from_ints(v).unwrap()));
    }
    out
}

/// The small corpus plus larger structured and random sets.
pub fn full_corpus() -> Vec<(String, ComplexSet)> {
    let mut out = small_corpus();
    let base = GenParams::default();
    for n in [16, 24, 32] {
        out.push((format!("ap({n})"), generate(Family::Ap, n, &base, 0).unwrap()));
        out.push((format!("gp({n}, 2)"), generate(Family::Gp, n, &base, 0).unwrap()));
        out.push((
            format!("random({n})"),
            generate(Family::Random, n, &base, n as u64).unwrap(),
        ));
    }
    for n in [16, 25, 36] {
        out.push((format!("grid({n})"), generate(Family::Grid, n, &base, 0).unwrap()));
    }
    out
}

/// Determinant by cofactor expansion along the first row.
pub fn laplace_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Rational::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * laplace_det(&minor);
        if col % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn rows<const N: usize>(vs: &[VecQ<N>]) -> Vec<Vec<Rational>> {
    vs.iter().map(|v| v.0.to_vec()).collect()
}

pub fn brute_sumset(a: &ComplexSet) -> usize {
    let e = a.elements();
    e.iter()
        .flat_map(|x| e.iter().map(move |y| x + y))
        .collect::<HashSet<_>>()
        .len()
}

pub fn brute_productset(a: &ComplexSet) -> usize {
    let e = a.elements();
    e.iter()
        .flat_map(|x| e.iter().map(move |y| x * y))
        .collect::<HashSet<_>>()
        .len()
}

/// `a₁/a₂ = a₃/a₄ ⇔ a₁a₄ = a₂a₃`, so `E = Σ_p r(p)²` with
/// `r(p) = #{(a, b) : ab = p}`.
pub fn energy_by_product_reps(a: &ComplexSet) -> u64 {
    let e = a.elements();
    let mut reps: HashMap<GaussianRational, u64> = HashMap::new();
    for x in e {
        for y in e {
            *reps.entry(x * y).or_default() += 1;
        }
    }
    reps.values().map(|r| r * r).sum()
}

fn cross(o: &Vec2Q, a: &Vec2Q, b: &Vec2Q) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn on_segment(p: &Vec2Q, a: &Vec2Q, b: &Vec2Q) -> bool {
    let within = |k: usize| {
        let (lo, hi) = if a[k] <= b[k] { (&a[k], &b[k]) } else { (&b[k], &a[k]) };
        lo <= &p[k] && &p[k] <= hi
    };
    cross(a, b, p).is_zero() && within(0) && within(1)
}

/// Two edges conflict when they meet anywhere other than a shared endpoint,
/// or when a shared endpoint is not their only common point.
pub fn edges_conflict(p: &[Vec2Q], e: (usize, usize), f: (usize, usize)) -> bool {
    let (a, b, c, d) = (&p[e.0], &p[e.1], &p[f.0], &p[f.1]);
    let shared = [e.0, e.1].iter().filter(|v| **v == f.0 || **v == f.1).count();
    if shared == 2 {
        return true;
    }
    if shared == 1 {
        // overlap beyond the shared vertex iff collinear and pointing the same way
        let (s, x, y) = if e.0 == f.0 || e.0 == f.1 {
            (a, b, if e.0 == f.0 { d } else { c })
        } else {
            (b, a, if e.1 == f.0 { d } else { c })
        };
        let dot = (&x[0] - &s[0]) * (&y[0] - &s[0]) + (&x[1] - &s[1]) * (&y[1] - &s[1]);
        return cross(s, x, y).is_zero() && dot.is_positive();
    }
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if d1 * d2 < Rational::zero() && d3 * d4 < Rational::zero() {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

pub fn union_find_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let roots: HashSet<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    roots.len() <= 1
}

/// 100 seeded chart point sets of sizes 1–50: generic, lattice-crowded, and
/// fully collinear.
pub fn chart_point_sets() -> Vec<Vec<Vec2Q>> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7121);
    let mut out = Vec::new();
    for k in 0..100 {
        let size = 1 + (k * 37) % 50;
        let mut seen = HashSet::new();
        let mut pts = Vec::new();
        let mut draws = 0;
        while pts.len() < size && draws < 100_000 {
            draws += 1;
            let p = match k % 4 {
                0 => VecQ([small_rat(&mut rng, 20), small_rat(&mut rng, 20)]),
                1 => VecQ([q(rng.random_range(-3..=3), 1), q(rng.random_range(-3..=3), 1)]),
                2 => {
                    let s = small_rat(&mut rng, 30);
                    VecQ([s.clone(), &s * q(2, 3) + q(1, 1)])
                }
                _ => {
                    if rng.random_bool(0.5) {
                        VecQ([q(rng.random_range(-20..=20), 1), q(0, 1)])
                    } else {
                        VecQ([small_rat(&mut rng, 6), small_rat(&mut rng, 6)])
                    }
                }
            };
            if seen.insert(p.clone()) {
                pts.push(p);
            }
        }
        out.push(pts);
    }
    out
}
