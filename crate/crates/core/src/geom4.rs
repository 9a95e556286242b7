//! The embedding `ℂ² → ℝ⁴`, the real 2-planes `π_t`, generic hyperplanes and
//! the per-plane line/ray reduction.
//!
//! A complex line `{(t·z, z)}` through the origin becomes the real 2-plane
//! spanned by `emb(t, 1)` and `emb(i·t, i)`. Distinct `t` give planes meeting
//! only at the origin, so any two of them span `ℝ⁴`.
//!
//! A hyperplane `H = n⊥` meets each `π_t` in a line `l_t` spanned by
//! `(n·b₂)·b₁ − (n·b₁)·b₂`. Each point of `X ∩ π_t` is coordinatized by its
//! orthogonal projection onto that line, and the ray `r_t` is the half-line
//! holding the majority of those coordinates.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{det4, int, GaussianRational, Rational, Vec3Q, Vec4Q, VecQ};
use crate::setcore::ComplexSet;

/// A point of `X = A × A ⊂ ℝ⁴` remembering the pair it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Point4 {
    pub coords: Vec4Q,
    pub source: (GaussianRational, GaussianRational),
}

impl Point4 {
    pub fn new(a1: GaussianRational, a2: GaussianRational) -> Self {
        Self {
            coords: embed_pair(&a1, &a2),
            source: (a1, a2),
        }
    }

    /// `a₁ / a₂`, the direction of the complex line through this point.
    pub fn direction(&self) -> GaussianRational {
        self.source.0.checked_div(&self.source.1).expect("a2 != 0")
    }
}

/// `(a₁, a₂) ↦ (Re a₁, Im a₁, Re a₂, Im a₂)`.
pub fn embed_pair(a1: &GaussianRational, a2: &GaussianRational) -> Vec4Q {
    VecQ([a1.re.clone(), a1.im.clone(), a2.re.clone(), a2.im.clone()])
}

/// All of `A × A`, in canonical `(a₁, a₂)` order.
pub fn embed(a: &ComplexSet) -> Vec<Point4> {
    let el = a.elements();
    el.iter()
        .flat_map(|a1| el.iter().map(move |a2| Point4::new(a1.clone(), a2.clone())))
        .collect()
}

/// The real 2-plane `π_t` of the complex line with direction `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneT {
    pub t: GaussianRational,
    pub basis: [Vec4Q; 2],
}

pub fn plane_of(t: &GaussianRational) -> Result<PlaneT> {
    if t.is_zero() {
        return Err(Error::ZeroElement);
    }
    let it = &GaussianRational::i() * t;
    let basis = [
        embed_pair(t, &GaussianRational::one()),
        embed_pair(&it, &GaussianRational::i()),
    ];
    Ok(PlaneT { t: t.clone(), basis })
}

impl PlaneT {
    /// Exact membership: `v = v₂·b₁ + v₃·b₂` is forced by the basis shape.
    pub fn contains(&self, v: &Vec4Q) -> bool {
        let combo = &self.basis[0].scale(&v[2]) + &self.basis[1].scale(&v[3]);
        &combo == v
    }
}

/// True iff the two planes together span `ℝ⁴`.
pub fn spans_r4(p: &PlaneT, q: &PlaneT) -> bool {
    let rows = [
        p.basis[0].clone(),
        p.basis[1].clone(),
        q.basis[0].clone(),
        q.basis[1].clone(),
    ];
    !det4(&rows).is_zero()
}

/// The hyperplane `H = normal⊥` with an explicit rational basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec4Q,
    pub basis: [Vec4Q; 3],
    pivot: usize,
}

impl Hyperplane {
    pub fn new(normal: Vec4Q) -> Option<Self> {
        if normal.is_zero() {
            return None;
        }
        let (pivot, basis) = normal.complement_basis();
        let basis: [Vec4Q; 3] = basis.try_into().expect("three basis vectors");
        Some(Self { normal, basis, pivot })
    }

    /// `x = x∥ + x⊥` with `x⊥ ∥ n` and `x∥ · n = 0`.
    pub fn decompose(&self, x: &Vec4Q) -> (Vec4Q, Vec4Q) {
        let n = &self.normal;
        let k = x.dot(n) / n.dot(n);
        let perp = n.scale(&k);
        (x - &perp, perp)
    }

    pub fn project(&self, x: &Vec4Q) -> Vec4Q {
        self.decompose(x).0
    }

    /// Coordinates of `v ∈ H` in [`Hyperplane::basis`].
    pub fn coords(&self, v: &Vec4Q) -> Vec3Q {
        debug_assert!(v.dot(&self.normal).is_zero());
        v.drop_coord(self.pivot)
    }

    /// Direction of `π_t ∩ H`, or `None` when `π_t ⊆ H`.
    pub fn line_in(&self, plane: &PlaneT) -> Option<Vec4Q> {
        let [b1, b2] = &plane.basis;
        let d1 = self.normal.dot(b1);
        let d2 = self.normal.dot(b2);
        if d1.is_zero() && d2.is_zero() {
            return None;
        }
        Some(&b1.scale(&d2) - &b2.scale(&d1))
    }
}

/// The genericity predicate that rejected a candidate hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Genericity {
    /// Some `π_t` lies inside `H`.
    PlaneInside(GaussianRational),
    /// Some `x` projects to the origin.
    ProjectionZero,
    /// Two points share a projection.
    ProjectionCollision,
    /// Two lines `π_t ∩ H` coincide.
    LinesCoincide(GaussianRational, GaussianRational),
    /// A point of `π_t` has line coordinate zero.
    LineCoordinateZero(GaussianRational),
    /// Two points of `π_t` share a line coordinate.
    LineCoordinateCollision(GaussianRational),
}

impl fmt::Display for Genericity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genericity::PlaneInside(t) => write!(f, "plane for t = {t} lies inside H"),
            Genericity::ProjectionZero => write!(f, "a point projects to zero"),
            Genericity::ProjectionCollision => write!(f, "two points share a projection"),
            Genericity::LinesCoincide(s, t) => write!(f, "lines for t = {s} and t = {t} coincide"),
            Genericity::LineCoordinateZero(t) => write!(f, "zero line coordinate on plane t = {t}"),
            Genericity::LineCoordinateCollision(t) => {
                write!(f, "repeated line coordinate on plane t = {t}")
            }
        }
    }
}

/// Points of `x` grouped by the plane (from `planes`) containing them.
pub fn points_by_plane<'a>(planes: &[PlaneT], x: &'a [Point4]) -> BTreeMap<GaussianRational, Vec<&'a Point4>> {
    let mut groups: BTreeMap<GaussianRational, Vec<&Point4>> =
        planes.iter().map(|p| (p.t.clone(), Vec::new())).collect();
    for p in x {
        if let Some(g) = groups.get_mut(&p.direction()) {
            g.push(p);
        }
    }
    groups
}

fn line_coordinate(x: &Vec4Q, dir: &Vec4Q) -> Rational {
    x.dot(dir) / dir.dot(dir)
}

/// Check predicates (i)–(iv) for `h`, returning the first violated one.
#[allow(clippy::result_large_err)]
pub fn check_genericity(h: &Hyperplane, planes: &[PlaneT], x: &[Point4]) -> std::result::Result<(), Genericity> {
    // (i) transversality
    let mut lines = Vec::with_capacity(planes.len());
    for p in planes {
        match h.line_in(p) {
            Some(d) => lines.push(d),
            None => return Err(Genericity::PlaneInside(p.t.clone())),
        }
    }
    // (ii) projections nonzero and pairwise distinct
    let mut seen = HashSet::with_capacity(x.len());
    for p in x {
        let proj = h.project(&p.coords);
        if proj.is_zero() {
            return Err(Genericity::ProjectionZero);
        }
        if !seen.insert(proj) {
            return Err(Genericity::ProjectionCollision);
        }
    }
    // (iii) distinct lines
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].is_parallel(&lines[j]) {
                return Err(Genericity::LinesCoincide(planes[i].t.clone(), planes[j].t.clone()));
            }
        }
    }
    // (iv) line coordinates nonzero and distinct within each plane
    let groups = points_by_plane(planes, x);
    for (p, d) in planes.iter().zip(&lines) {
        let mut coords = HashSet::new();
        for pt in &groups[&p.t] {
            let c = line_coordinate(&pt.coords, d);
            if c.is_zero() {
                return Err(Genericity::LineCoordinateZero(p.t.clone()));
            }
            if !coords.insert(c) {
                return Err(Genericity::LineCoordinateCollision(p.t.clone()));
            }
        }
    }
    Ok(())
}

/// Samples per box size before the box doubles.
const BATCH: usize = 4;
const INITIAL_BOX: i64 = 4;

/// Nonzero integer vector with entries in `[-m, m]`.
pub(crate) fn sample_box<const N: usize>(rng: &mut ChaCha8Rng, m: i64) -> VecQ<N> {
    loop {
        let v: [i64; N] = std::array::from_fn(|_| rng.random_range(-m..=m));
        if v.iter().any(|&c| c != 0) {
            return VecQ(v.map(int));
        }
    }
}

/// Box half-width for the `attempt`-th sample.
pub(crate) fn box_size(attempt: usize) -> i64 {
    let doublings = (attempt / BATCH).min(40) as u32;
    INITIAL_BOX.saturating_mul(1i64 << doublings)
}

/// A sampled hyperplane plus the number of samples it took.
#[derive(Clone, Debug)]
pub struct SampledHyperplane {
    pub hyperplane: Hyperplane,
    pub attempts: usize,
}

/// Draw integer normals from growing boxes until every genericity predicate
/// holds, giving up after `retries` samples.
pub fn sample_hyperplane(planes: &[PlaneT], x: &[Point4], seed: u64, retries: usize) -> Result<SampledHyperplane> {
    assert!(!planes.is_empty(), "no planes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt in 0..retries.max(1) {
        let n: Vec4Q = sample_box(&mut rng, box_size(attempt));
        let h = Hyperplane::new(n).expect("nonzero sample");
        match check_genericity(&h, planes, x) {
            Ok(()) => {
                return Ok(SampledHyperplane {
                    hyperplane: h,
                    attempts: attempt + 1,
                })
            }
            Err(g) => last = Some(g),
        }
    }
    Err(Error::GenericityExhausted {
        attempts: retries.max(1),
        last: Box::new(last.expect("at least one sample")),
    })
}

/// The line `π_t ∩ H`, signed coordinates of the plane's points along it,
/// and the majority ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneLineData {
    pub t: GaussianRational,
    pub line_dir: Vec4Q,
    pub signed_coords: Vec<(Point4, Rational)>,
    pub kept: Vec<Point4>,
    /// `+1` or `-1`.
    pub ray_sign: i8,
}

impl PlaneLineData {
    /// `ray_sign · line_dir`.
    pub fn ray_dir(&self) -> Vec4Q {
        if self.ray_sign > 0 {
            self.line_dir.clone()
        } else {
            -&self.line_dir
        }
    }
}

/// Keep the side of the line holding at least half the points; an exact tie
/// keeps the positive side.
pub fn plane_line_data(plane: &PlaneT, h: &Hyperplane, points_on_plane: &[Point4]) -> PlaneLineData {
    let line_dir = h.line_in(plane).expect("hyperplane is transverse to the plane");
    keep_majority(plane.t.clone(), line_dir, points_on_plane)
}

fn keep_majority(t: GaussianRational, line_dir: Vec4Q, points: &[Point4]) -> PlaneLineData {
    let signed_coords: Vec<(Point4, Rational)> = points
        .iter()
        .map(|p| (p.clone(), line_coordinate(&p.coords, &line_dir)))
        .collect();
    let pos = signed_coords.iter().filter(|(_, c)| c.is_positive()).count();
    let neg = signed_coords.iter().filter(|(_, c)| c.is_negative()).count();
    let ray_sign: i8 = if pos >= neg { 1 } else { -1 };
    let kept = signed_coords
        .iter()
        .filter(|(_, c)| if ray_sign > 0 { c.is_positive() } else { c.is_negative() })
        .map(|(p, _)| p.clone())
        .collect();
    PlaneLineData {
        t,
        line_dir,
        signed_coords,
        kept,
        ray_sign,
    }
}
