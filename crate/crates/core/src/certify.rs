//! End-to-end run: statistics, dyadic selection, the injection of pairs on
//! partnered planes into `X + X`, exhaustive verification, and the resulting
//! certificate.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dyadic::{dyadic_decompose, select_popular_class, SelectionVerdict};
use crate::error::Result;
use crate::exactnum::{floor_log2, log2_at_least, GaussianRational, Rational, Vec3Q, Vec4Q};
use crate::geom4::{
    embed, plane_line_data, plane_of, points_by_plane, sample_hyperplane, spans_r4, Hyperplane, PlaneLineData, PlaneT,
    Point4,
};
use crate::setcore::{cauchy_schwarz_check, direction_tally, productset, sumset, CauchySchwarzVerdict, ComplexSet};
use crate::sphereplanar::{assign_partners, select_hemisphere, triangulate, HemisphereChart, PlanarGraph, RayDir};

/// Default cap on hyperplane samples and on injection attempts.
pub const DEFAULT_RETRIES: usize = 32;

/// One emitted sum `x + x₁` with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedSum {
    pub sum: Vec4Q,
    pub t: GaussianRational,
    pub t1: GaussianRational,
    pub x: Point4,
    pub x1: Point4,
}

/// Two tagged sums with the same value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub sum: Vec4Q,
    pub first: TaggedSum,
    pub second: TaggedSum,
}

impl Collision {
    fn same_edge(&self) -> bool {
        edge_key(&self.first.t, &self.first.t1) == edge_key(&self.second.t, &self.second.t1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub within_pair_injective: bool,
    pub globally_injective: bool,
    pub distinct_sums: usize,
    pub collisions: Vec<Collision>,
}

fn edge_key<'a>(a: &'a GaussianRational, b: &'a GaussianRational) -> (&'a GaussianRational, &'a GaussianRational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undirected edges used by a partner map, each once, oriented as first seen.
pub fn partner_edges(
    partners: &BTreeMap<GaussianRational, GaussianRational>,
) -> Vec<(GaussianRational, GaussianRational)> {
    let mut seen = std::collections::BTreeSet::new();
    partners
        .iter()
        .filter(|(t, t1)| seen.insert((edge_key(t, t1).0.clone(), edge_key(t, t1).1.clone())))
        .map(|(t, t1)| (t.clone(), t1.clone()))
        .collect()
}

/// Emit `x + x₁` for every kept `x` on `π_t` and kept `x₁` on `π_{t₁}`, over
/// each distinct partner edge.
pub fn build_injection(
    partners: &BTreeMap<GaussianRational, GaussianRational>,
    plane_data: &BTreeMap<GaussianRational, PlaneLineData>,
) -> Vec<TaggedSum> {
    let mut out = Vec::new();
    for (t, t1) in partner_edges(partners) {
        let (d, d1) = (&plane_data[&t], &plane_data[&t1]);
        for x in &d.kept {
            for x1 in &d1.kept {
                out.push(TaggedSum {
                    sum: &x.coords + &x1.coords,
                    t: t.clone(),
                    t1: t1.clone(),
                    x: x.clone(),
                    x1: x1.clone(),
                });
            }
        }
    }
    out
}

/// Exact-equality index over the sums; every repeat is reported against the
/// first occurrence of its value.
pub fn verify_injective(sums: &[TaggedSum]) -> InjectivityReport {
    let mut first: HashMap<&Vec4Q, usize> = HashMap::with_capacity(sums.len());
    let mut collisions = Vec::new();
    for (i, s) in sums.iter().enumerate() {
        match first.get(&s.sum) {
            Some(&j) => collisions.push(Collision {
                sum: s.sum.clone(),
                first: sums[j].clone(),
                second: s.clone(),
            }),
            None => {
                first.insert(&s.sum, i);
            }
        }
    }
    InjectivityReport {
        within_pair_injective: !collisions.iter().any(Collision::same_edge),
        globally_injective: collisions.is_empty(),
        distinct_sums: first.len(),
        collisions,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub size: usize,
    /// SHA-256 of the canonical elements, one per line.
    pub sha256: String,
}

impl InputDigest {
    pub fn of(a: &ComplexSet) -> Self {
        let mut h = Sha256::new();
        for z in a.elements() {
            h.update(z.to_string().as_bytes());
            h.update(b"\n");
        }
        Self {
            size: a.len(),
            sha256: hex::encode(h.finalize()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayRecord {
    pub t: GaussianRational,
    pub nu: u64,
    pub kept: usize,
    pub ray_sign: i8,
    pub ray_dir: Vec4Q,
    pub dir3: Vec3Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCount {
    pub t: GaussianRational,
    pub t1: GaussianRational,
    pub sums: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectionCertificate {
    pub input_digest: InputDigest,
    pub sumset_size: usize,
    pub productset_size: usize,
    /// `|X + X| = |A + A|²`.
    pub xx_sumset_size: u64,
    pub energy: u64,
    pub eq1: CauchySchwarzVerdict,
    pub selected_class_k: u32,
    pub t_prime_size: usize,
    pub class_mass: u64,
    pub dyadic: SelectionVerdict,
    pub t_prime: Vec<GaussianRational>,
    pub hyperplane_normal: Vec4Q,
    /// Samples drawn for the hyperplane of the final attempt.
    pub hyperplane_retries: usize,
    /// Hyperplanes tried before stopping (success or cap).
    pub injection_attempts: usize,
    pub rays: Vec<RayRecord>,
    pub kept_points: u64,
    pub t_prime_points: u64,
    /// `2·Σ|kept(t)| ≥ Σ ν(t)` over `T′`.
    pub kept_half: bool,
    pub hemisphere_pole: Vec3Q,
    pub t_double_prime_size: usize,
    pub t_double_prime: Vec<GaussianRational>,
    pub graph_edges: Vec<(GaussianRational, GaussianRational)>,
    pub graph_connected: bool,
    pub graph_crossing_free: bool,
    pub partners: Vec<(GaussianRational, GaussianRational)>,
    pub per_edge_sum_counts: Vec<EdgeCount>,
    pub edges_span_r4: bool,
    pub distinct_sum_count: usize,
    pub collisions: Vec<Collision>,
    pub degenerate: bool,
    pub within_pair_injective: bool,
    pub globally_injective: bool,
    /// `class mass ≤ 32·|X + X|`.
    pub eq4_style_bound: bool,
    /// `64·log₂|A|·|A+A|²·|A·A| ≥ |A|⁴`, exact; `None` for `|A| = 1`.
    pub theorem_bound: Option<bool>,
    /// The same with `⌊log₂|A|⌋` in place of `log₂|A|` (a stronger statement).
    pub theorem_bound_floor_log: Option<bool>,
    pub log_base: u32,
    /// `|A+A|²·|A·A|·log₂|A| / |A|⁴`.
    pub effective_constant: Option<f64>,
    /// `log max(|A+A|, |A·A|) / log |A|`.
    pub effective_exponent: Option<f64>,
}

impl InjectionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Every verdict that follows from a proven statement holds.
    pub fn theorems_hold(&self) -> bool {
        self.eq1.holds
            && self.dyadic.pigeonhole
            && self.dyadic.provable_bound
            && self.within_pair_injective
            && self.edges_span_r4
            && self.kept_half
            && self.graph_connected
            && self.graph_crossing_free
            && self.theorem_bound != Some(false)
    }
}

/// Size-only statistics shared by `certify`, `analyze` and the sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumProductStats {
    pub size: usize,
    pub sumset_size: usize,
    pub productset_size: usize,
    pub energy: u64,
    pub eq1: CauchySchwarzVerdict,
    pub theorem_bound: Option<bool>,
    pub theorem_bound_floor_log: Option<bool>,
    pub effective_constant: Option<f64>,
    pub effective_exponent: Option<f64>,
}

/// `64·log₂ n·S²·P ≥ n⁴`, i.e. `log₂ n ≥ n⁴ / (64·S²·P)`.
pub fn theorem_bound(n: usize, sumset_size: usize, productset_size: usize) -> Option<bool> {
    (n >= 2).then(|| log2_at_least(n as u64, &theorem_threshold(n, sumset_size, productset_size)))
}

fn theorem_threshold(n: usize, s: usize, p: usize) -> Rational {
    let n = Rational::from_integer(n.into());
    let lhs = Rational::from_integer((64 * s as u128 * s as u128 * p as u128).into());
    n.clone() * &n * &n * &n / lhs
}

pub fn theorem_bound_floor_log(n: usize, sumset_size: usize, productset_size: usize) -> Option<bool> {
    (n >= 2).then(|| {
        let f = Rational::from_integer(floor_log2(n as u64).into());
        f >= theorem_threshold(n, sumset_size, productset_size)
    })
}

pub fn effective_constant(n: usize, s: usize, p: usize) -> Option<f64> {
    (n >= 2).then(|| (s as f64).powi(2) * p as f64 * (n as f64).log2() / (n as f64).powi(4))
}

pub fn effective_exponent(n: usize, s: usize, p: usize) -> Option<f64> {
    (n >= 2).then(|| (s.max(p) as f64).ln() / (n as f64).ln())
}

pub fn stats(a: &ComplexSet) -> SumProductStats {
    let n = a.len();
    let s = sumset(a).len();
    let p = productset(a).len();
    let tally = direction_tally(a);
    let eq1 = cauchy_schwarz_check(&tally, a, p);
    SumProductStats {
        size: n,
        sumset_size: s,
        productset_size: p,
        energy: tally.energy(),
        eq1,
        theorem_bound: theorem_bound(n, s, p),
        theorem_bound_floor_log: theorem_bound_floor_log(n, s, p),
        effective_constant: effective_constant(n, s, p),
        effective_exponent: effective_exponent(n, s, p),
    }
}

/// Seed for the `attempt`-th hyperplane of a run.
fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

struct Attempt {
    hyperplane: Hyperplane,
    hyperplane_samples: usize,
    plane_data: BTreeMap<GaussianRational, PlaneLineData>,
    rays: Vec<RayDir>,
    chart: HemisphereChart,
    graph: PlanarGraph,
    partners: BTreeMap<GaussianRational, GaussianRational>,
    sums: Vec<TaggedSum>,
    report: InjectivityReport,
}

fn run_attempt(planes: &[PlaneT], x: &[Point4], seed: u64, retries: usize) -> Result<Attempt> {
    let sampled = sample_hyperplane(planes, x, seed, retries)?;
    let h = sampled.hyperplane;
    let groups = points_by_plane(planes, x);
    let plane_data: BTreeMap<_, _> = planes
        .iter()
        .map(|p| {
            let pts: Vec<Point4> = groups[&p.t].iter().map(|q| (*q).clone()).collect();
            (p.t.clone(), plane_line_data(p, &h, &pts))
        })
        .collect();
    let rays: Vec<RayDir> = plane_data
        .values()
        .map(|d| RayDir {
            t: d.t.clone(),
            dir3: h.coords(&d.ray_dir()),
        })
        .collect();
    let chart = select_hemisphere(&rays, seed ^ 0x5DEE_CE66_D1CE_4E5B, retries)?;
    let graph = triangulate(&chart);
    let partners = assign_partners(&graph);
    let sums = build_injection(&partners, &plane_data);
    let report = verify_injective(&sums);
    Ok(Attempt {
        hyperplane: h,
        hyperplane_samples: sampled.attempts,
        plane_data,
        rays,
        chart,
        graph,
        partners,
        sums,
        report,
    })
}

/// Run the full construction, resampling the hyperplane on a global
/// collision up to `retries` times. Deterministic in `(A, seed, retries)`.
pub fn certify(a: &ComplexSet, seed: u64, retries: usize) -> Result<InjectionCertificate> {
    let stats = stats(a);
    let tally = direction_tally(a);
    let classes = dyadic_decompose(&tally);
    let (class, dyadic) = select_popular_class(&classes, a.len());
    let planes: Vec<PlaneT> = class.directions().map(|t| plane_of(t).expect("t != 0")).collect();
    let x = embed(a);

    let mut attempts = 0;
    let mut last = None;
    for k in 0..retries.max(1) {
        attempts = k + 1;
        let run = run_attempt(&planes, &x, attempt_seed(seed, k), retries)?;
        let done = run.report.globally_injective;
        last = Some(run);
        if done {
            break;
        }
    }
    let run = last.expect("at least one attempt");

    let nu: BTreeMap<_, _> = class.members.iter().cloned().collect();
    let rays: Vec<RayRecord> = run
        .rays
        .iter()
        .map(|r| {
            let d = &run.plane_data[&r.t];
            RayRecord {
                t: r.t.clone(),
                nu: nu[&r.t],
                kept: d.kept.len(),
                ray_sign: d.ray_sign,
                ray_dir: d.ray_dir(),
                dir3: r.dir3.clone(),
            }
        })
        .collect();
    let kept_points: u64 = rays.iter().map(|r| r.kept as u64).sum();
    let t_prime_points = class.total_points();

    let mut per_edge: Vec<EdgeCount> = partner_edges(&run.partners)
        .into_iter()
        .map(|(t, t1)| EdgeCount { t, t1, sums: 0 })
        .collect();
    for e in per_edge.iter_mut() {
        e.sums = run.sums.iter().filter(|s| s.t == e.t && s.t1 == e.t1).count();
    }
    let edges_span_r4 = per_edge.iter().all(|e| {
        let p = planes.iter().find(|p| p.t == e.t).expect("edge plane");
        let q = planes.iter().find(|p| p.t == e.t1).expect("edge plane");
        spans_r4(p, q)
    });

    let s = stats.sumset_size as u64;
    let xx = s * s;
    Ok(InjectionCertificate {
        input_digest: InputDigest::of(a),
        sumset_size: stats.sumset_size,
        productset_size: stats.productset_size,
        xx_sumset_size: xx,
        energy: stats.energy,
        eq1: stats.eq1,
        selected_class_k: class.k,
        t_prime_size: class.members.len(),
        class_mass: class.mass,
        dyadic,
        t_prime: class.directions().cloned().collect(),
        hyperplane_normal: run.hyperplane.normal.clone(),
        hyperplane_retries: run.hyperplane_samples,
        injection_attempts: attempts,
        rays,
        kept_points,
        t_prime_points,
        kept_half: 2 * kept_points >= t_prime_points,
        hemisphere_pole: run.chart.pole.clone(),
        t_double_prime_size: run.chart.members.len(),
        t_double_prime: run.chart.members.clone(),
        graph_edges: run.graph.edge_directions(),
        graph_connected: run.graph.is_connected(),
        graph_crossing_free: run.graph.is_crossing_free(),
        partners: run.partners.into_iter().collect(),
        per_edge_sum_counts: per_edge,
        edges_span_r4,
        distinct_sum_count: run.report.distinct_sums,
        collisions: run.report.collisions,
        degenerate: run.chart.members.len() < 2,
        within_pair_injective: run.report.within_pair_injective,
        globally_injective: run.report.globally_injective,
        eq4_style_bound: class.mass as u128 <= 32 * xx as u128,
        theorem_bound: stats.theorem_bound,
        theorem_bound_floor_log: stats.theorem_bound_floor_log,
        log_base: 2,
        effective_constant: stats.effective_constant,
        effective_exponent: stats.effective_exponent,
    })
}

/// Recompute every reported collision from its tags; true iff all are genuine.
pub fn collisions_are_exact(cert: &InjectionCertificate) -> bool {
    cert.collisions.iter().all(|c| {
        let a = &c.first.x.coords + &c.first.x1.coords;
        let b = &c.second.x.coords + &c.second.x1.coords;
        a == c.sum && b == c.sum && c.first != c.second
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom4::Point4;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn line_data(t: GaussianRational, kept: Vec<Point4>) -> PlaneLineData {
        PlaneLineData {
            t,
            line_dir: Vec4Q::unit(0),
            signed_coords: Vec::new(),
            kept,
            ray_sign: 1,
        }
    }

    #[test]
    fn single_sum() {
        let partners = BTreeMap::from([(g(1, 0), g(0, 1))]);
        let data = BTreeMap::from([
            (g(1, 0), line_data(g(1, 0), vec![Point4::new(g(1, 0), g(1, 0))])),
            (g(0, 1), line_data(g(0, 1), vec![Point4::new(g(0, 1), g(1, 0))])),
        ]);
        let sums = build_injection(&partners, &data);
        assert_eq!(sums.len(), 1);
        assert_eq!(sums[0].sum, Vec4Q::from_ints([1, 1, 2, 0]));
        let r = verify_injective(&sums);
        assert!(r.within_pair_injective && r.globally_injective);
        assert!(r.collisions.is_empty());
    }

    #[test]
    fn mutual_partners_share_one_edge() {
        let partners = BTreeMap::from([(g(1, 0), g(0, 1)), (g(0, 1), g(1, 0))]);
        let data = BTreeMap::from([
            (g(1, 0), line_data(g(1, 0), vec![Point4::new(g(1, 0), g(1, 0))])),
            (g(0, 1), line_data(g(0, 1), vec![Point4::new(g(0, 1), g(1, 0))])),
        ]);
        assert_eq!(build_injection(&partners, &data).len(), 1);
    }

    #[test]
    fn product_count_per_edge() {
        let two = vec![Point4::new(g(1, 0), g(1, 0)), Point4::new(g(2, 0), g(2, 0))];
        let three = vec![
            Point4::new(g(2, 0), g(1, 0)),
            Point4::new(g(4, 0), g(2, 0)),
            Point4::new(g(6, 0), g(3, 0)),
        ];
        let partners = BTreeMap::from([(g(1, 0), g(2, 0))]);
        let data = BTreeMap::from([(g(1, 0), line_data(g(1, 0), two)), (g(2, 0), line_data(g(2, 0), three))]);
        assert_eq!(build_injection(&partners, &data).len(), 6);
    }

    #[test]
    fn empty_partners() {
        assert!(build_injection(&BTreeMap::new(), &BTreeMap::new()).is_empty());
        let r = verify_injective(&[]);
        assert!(r.globally_injective && r.distinct_sums == 0);
    }

    #[test]
    fn forced_collision_is_reported() {
        let partners = BTreeMap::from([(g(1, 0), g(0, 1))]);
        let data = BTreeMap::from([
            (g(1, 0), line_data(g(1, 0), vec![Point4::new(g(1, 0), g(1, 0))])),
            (g(0, 1), line_data(g(0, 1), vec![Point4::new(g(0, 1), g(1, 0))])),
        ]);
        let mut sums = build_injection(&partners, &data);
        sums.push(sums[0].clone());
        let r = verify_injective(&sums);
        assert!(!r.globally_injective);
        assert!(!r.within_pair_injective);
        assert_eq!(r.collisions.len(), 1);
        assert_eq!(r.collisions[0].first, sums[0]);
    }

    #[test]
    fn spanning_planes_give_distinct_sums() {
        // π₁ ∋ (1,1), (i,i); π_i ∋ (i,1), (-1,i)
        let on1 = vec![Point4::new(g(1, 0), g(1, 0)), Point4::new(g(0, 1), g(0, 1))];
        let oni = vec![Point4::new(g(0, 1), g(1, 0)), Point4::new(g(-1, 0), g(0, 1))];
        let partners = BTreeMap::from([(g(1, 0), g(0, 1))]);
        let data = BTreeMap::from([(g(1, 0), line_data(g(1, 0), on1)), (g(0, 1), line_data(g(0, 1), oni))]);
        let sums = build_injection(&partners, &data);
        assert_eq!(sums.len(), 4);
        let r = verify_injective(&sums);
        assert!(r.within_pair_injective);
        assert_eq!(r.distinct_sums, 4);
    }

    #[test]
    fn singleton_is_degenerate() {
        let a = ComplexSet::from_ints(&[(1, 0)]).unwrap();
        let c = certify(&a, 0, DEFAULT_RETRIES).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.theorem_bound, None);
        assert!(c.eq1.holds);
        assert_eq!(c.distinct_sum_count, 0);
        assert!(c.theorems_hold());
    }

    #[test]
    fn ap3_bounds() {
        let a = ComplexSet::from_ints(&[(1, 0), (2, 0), (3, 0)]).unwrap();
        let c = certify(&a, 0, DEFAULT_RETRIES).unwrap();
        assert_eq!((c.sumset_size, c.productset_size, c.energy), (5, 6, 15));
        assert_eq!(c.theorem_bound, Some(true));
        // 25·6 = 150 ≥ 81 / (64 log₂ 3)
        assert_eq!(theorem_threshold(3, 5, 6), Rational::new(81.into(), (64 * 150).into()));
        assert!(c.eq1.holds);
        assert_eq!(c.eq1.lower_bound, Rational::new(27.into(), 2.into()));
        assert_eq!(c.xx_sumset_size, 25);
        assert!(c.theorems_hold());
    }
}
