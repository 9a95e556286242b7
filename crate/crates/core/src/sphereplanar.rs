//! Ray directions on the sphere of `H`, an open hemisphere containing at
//! least half of them, and a crossing-free graph on those directions.
//!
//! Directions are unnormalized vectors in `ℚ³` taken up to positive scaling.
//! The open hemisphere `{d : u·d > 0}` is charted by central (gnomonic)
//! projection `d ↦ (e₁·d, e₂·d) / (u·d)`, where `e₁, e₂` span `u⊥`. This map
//! sends great-circle arcs inside the hemisphere to straight segments and is
//! rational, so every planarity predicate below is exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::{det3, orient2d, GaussianRational, Vec2Q, Vec3Q, VecQ};
use crate::geom4::{box_size, sample_box};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayDir {
    pub t: GaussianRational,
    pub dir3: Vec3Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HemisphereChart {
    pub pole: Vec3Q,
    pub basis2: [Vec3Q; 2],
    /// Directions of the member rays, in canonical order.
    pub members: Vec<GaussianRational>,
    pub chart: BTreeMap<GaussianRational, Vec2Q>,
    pub total_rays: usize,
    /// Pole samples drawn (including the accepted one).
    pub attempts: usize,
}

impl HemisphereChart {
    fn with_pole(pole: Vec3Q, rays: &[RayDir], attempts: usize) -> Self {
        let (_, basis) = pole.complement_basis();
        let basis2: [Vec3Q; 2] = basis.try_into().expect("two basis vectors");
        let mut chart = BTreeMap::new();
        for r in rays {
            let h = pole.dot(&r.dir3);
            if h.is_positive() {
                let p = VecQ([basis2[0].dot(&r.dir3) / &h, basis2[1].dot(&r.dir3) / &h]);
                chart.insert(r.t.clone(), p);
            }
        }
        let members = chart.keys().cloned().collect();
        Self {
            pole,
            basis2,
            members,
            chart,
            total_rays: rays.len(),
            attempts,
        }
    }

    /// Chart point of a direction given as a raw vector; `None` off the hemisphere.
    pub fn project(&self, d: &Vec3Q) -> Option<Vec2Q> {
        let h = self.pole.dot(d);
        h.is_positive()
            .then(|| VecQ([self.basis2[0].dot(d) / &h, self.basis2[1].dot(d) / &h]))
    }
}

/// Pick a pole `u` with `u·d ≠ 0` for every ray, then keep `u` or `−u`,
/// whichever sees strictly more rays on its positive side (a tie keeps `u`).
pub fn select_hemisphere(rays: &[RayDir], seed: u64, retries: usize) -> Result<HemisphereChart> {
    assert!(!rays.is_empty(), "no rays");
    assert!(rays.iter().all(|r| !r.dir3.is_zero()), "zero ray direction");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..retries.max(1) {
        let u: Vec3Q = sample_box(&mut rng, box_size(attempt));
        if let Some(chart) = hemisphere_for_pole(u, rays, attempt + 1) {
            return Ok(chart);
        }
    }
    Err(Error::HemisphereExhausted {
        attempts: retries.max(1),
    })
}

/// `None` when `u` is orthogonal to some ray.
pub fn hemisphere_for_pole(u: Vec3Q, rays: &[RayDir], attempts: usize) -> Option<HemisphereChart> {
    let dots: Vec<_> = rays.iter().map(|r| u.dot(&r.dir3)).collect();
    if dots.iter().any(Zero::is_zero) {
        return None;
    }
    let pos = dots.iter().filter(|d| d.is_positive()).count();
    let pole = if pos >= rays.len() - pos { u } else { -&u };
    Some(HemisphereChart::with_pole(pole, rays, attempts))
}

/// `(det3(d₁, d₂, d₃) = 0, chart points collinear)`; the two always agree.
pub fn coplanar_iff_collinear_check(r1: &RayDir, r2: &RayDir, r3: &RayDir, chart: &HemisphereChart) -> (bool, bool) {
    let coplanar = det3(&[r1.dir3.clone(), r2.dir3.clone(), r3.dir3.clone()]).is_zero();
    let p = |r: &RayDir| chart.chart.get(&r.t).expect("ray is a member").clone();
    let collinear = orient2d(&p(r1), &p(r2), &p(r3)) == Ordering::Equal;
    (coplanar, collinear)
}

/// A graph on chart points; `points[i]` belongs to `vertices[i]` and edges
/// refer to vertex indices `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarGraph {
    pub vertices: Vec<GaussianRational>,
    pub points: Vec<Vec2Q>,
    pub edges: Vec<(usize, usize)>,
}

impl PlanarGraph {
    pub fn from_points(vertices: Vec<GaussianRational>, points: Vec<Vec2Q>) -> Self {
        let edges = triangulate_points(&points);
        Self {
            vertices,
            points,
            edges,
        }
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_crossing_free(&self) -> bool {
        crossing_free(&self.points, &self.edges)
    }

    pub fn edge_directions(&self) -> Vec<(GaussianRational, GaussianRational)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a].clone(), self.vertices[b].clone()))
            .collect()
    }
}

/// Triangulate the convex hull of the chart, or join collinear points by a path.
pub fn triangulate(chart: &HemisphereChart) -> PlanarGraph {
    let (vertices, points): (Vec<_>, Vec<_>) = chart.chart.iter().map(|(t, p)| (t.clone(), p.clone())).unzip();
    PlanarGraph::from_points(vertices, points)
}

/// Sweep triangulation over distinct points.
///
/// Points are inserted in lexicographic order. While the inserted points are
/// collinear they form a path. Afterwards the convex hull is kept as a
/// counter-clockwise cycle; each new point lies strictly outside it and is
/// joined to both endpoints of every hull edge it sees strictly, which closes
/// one non-degenerate triangle per visible edge.
pub fn triangulate_points(points: &[Vec2Q]) -> Vec<(usize, usize)> {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].cmp_lex(&points[b]));
    debug_assert!(
        order.windows(2).all(|w| points[w[0]] != points[w[1]]),
        "duplicate chart points"
    );
    let p = |k: usize| &points[order[k]];

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut add = |a: usize, b: usize| {
        let (a, b) = (order[a], order[b]);
        edges.insert((a.min(b), a.max(b)));
    };
    if n < 2 {
        return Vec::new();
    }

    let first_off = (2..n).find(|&k| orient2d(p(0), p(1), p(k)) != Ordering::Equal);
    let Some(k) = first_off else {
        for i in 1..n {
            add(i - 1, i);
        }
        return edges.into_iter().collect();
    };
    for i in 1..k {
        add(i - 1, i);
    }
    for i in 0..k {
        add(i, k);
    }
    // hull in sorted-index space
    let mut hull: Vec<usize> = if orient2d(p(0), p(k - 1), p(k)) == Ordering::Greater {
        (0..k).chain([k]).collect()
    } else {
        (0..k).rev().chain([k]).collect()
    };

    for q in k + 1..n {
        let h = hull.len();
        let visible: Vec<bool> = (0..h)
            .map(|i| orient2d(p(hull[i]), p(hull[(i + 1) % h]), p(q)) == Ordering::Less)
            .collect();
        let start = (0..h)
            .find(|&i| visible[i] && !visible[(i + h - 1) % h])
            .expect("a point outside the hull sees some edge, but not all");
        hull.rotate_left(start);
        let run = visible[start..]
            .iter()
            .chain(&visible[..start])
            .take_while(|v| **v)
            .count();
        for &v in &hull[..=run] {
            add(v, q);
        }
        let mut next = Vec::with_capacity(hull.len() - run + 2);
        next.push(hull[0]);
        next.push(q);
        next.extend_from_slice(&hull[run..]);
        hull = next;
    }
    edges.into_iter().collect()
}

fn on_closed_segment(a: &Vec2Q, b: &Vec2Q, p: &Vec2Q) -> bool {
    orient2d(a, b, p) == Ordering::Equal && (p - a).dot(&(p - b)) <= num_traits::zero()
}

/// Whether two edges of a straight-line drawing intersect anywhere other
/// than at a shared endpoint.
pub fn segments_conflict(a: &Vec2Q, b: &Vec2Q, c: &Vec2Q, d: &Vec2Q) -> bool {
    let shared = [(a, b, c, d), (a, b, d, c), (b, a, c, d), (b, a, d, c)]
        .into_iter()
        .find(|(p, _, q, _)| p == q);
    if let Some((s, x, _, y)) = shared {
        if x == y {
            return true;
        }
        // overlap iff the other endpoints leave s in the same direction
        return orient2d(s, x, y) == Ordering::Equal && (x - s).dot(&(y - s)).is_positive();
    }
    let o1 = orient2d(a, b, c);
    let o2 = orient2d(a, b, d);
    let o3 = orient2d(c, d, a);
    let o4 = orient2d(c, d, b);
    let opposite = |x: Ordering, y: Ordering| x != Ordering::Equal && y != Ordering::Equal && x != y;
    if opposite(o1, o2) && opposite(o3, o4) {
        return true;
    }
    on_closed_segment(a, b, c) || on_closed_segment(a, b, d) || on_closed_segment(c, d, a) || on_closed_segment(c, d, b)
}

/// Exhaustive pairwise check.
pub fn crossing_free(points: &[Vec2Q], edges: &[(usize, usize)]) -> bool {
    edges.iter().enumerate().all(|(i, &(a, b))| {
        edges[i + 1..]
            .iter()
            .all(|&(c, d)| !segments_conflict(&points[a], &points[b], &points[c], &points[d]))
    })
}

/// Map each vertex with an edge to the neighbor whose chart point is
/// lexicographically smallest.
pub fn assign_partners(g: &PlanarGraph) -> BTreeMap<GaussianRational, GaussianRational> {
    g.neighbors()
        .iter()
        .enumerate()
        .filter_map(|(v, adj)| {
            adj.iter()
                .min_by(|&&x, &&y| g.points[x].cmp_lex(&g.points[y]))
                .map(|&w| (g.vertices[v].clone(), g.vertices[w].clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn ray(t: i64, d: [i64; 3]) -> RayDir {
        RayDir {
            t: GaussianRational::from_ints(t, 0),
            dir3: Vec3Q::from_ints(d),
        }
    }

    fn p2(x: i64, y: i64) -> Vec2Q {
        Vec2Q::from_ints([x, y])
    }

    fn graph(points: Vec<Vec2Q>) -> PlanarGraph {
        let vertices = (1..=points.len() as i64)
            .map(|t| GaussianRational::from_ints(t, 0))
            .collect();
        PlanarGraph::from_points(vertices, points)
    }

    #[test]
    fn hemisphere_all_members() {
        let rays = [ray(1, [1, 0, 1]), ray(2, [0, 1, 1]), ray(3, [1, 1, 2])];
        let c = hemisphere_for_pole(Vec3Q::from_ints([0, 0, 1]), &rays, 1).unwrap();
        assert_eq!(c.members.len(), 3);
        assert_eq!(c.chart[&rays[0].t], p2(1, 0));
        assert_eq!(c.chart[&rays[1].t], p2(0, 1));
        assert_eq!(c.chart[&rays[2].t], VecQ([rat(1, 2), rat(1, 2)]));
        assert!(c.members.iter().all(|t| {
            let r = rays.iter().find(|r| &r.t == t).unwrap();
            c.pole.dot(&r.dir3).is_positive()
        }));
    }

    #[test]
    fn hemisphere_half_tie_keeps_pole() {
        let rays = [ray(1, [0, 0, 1]), ray(2, [0, 0, -1])];
        let u = Vec3Q::from_ints([1, 1, 3]);
        assert_eq!(u.dot(&rays[0].dir3), int(3));
        let c = hemisphere_for_pole(u.clone(), &rays, 1).unwrap();
        assert_eq!(c.pole, u);
        assert_eq!(c.members, vec![rays[0].t.clone()]);
    }

    #[test]
    fn hemisphere_flips_to_majority() {
        let rays = [ray(1, [0, 0, -1]), ray(2, [1, 0, -1]), ray(3, [0, 0, 1])];
        let c = hemisphere_for_pole(Vec3Q::from_ints([0, 0, 1]), &rays, 1).unwrap();
        assert_eq!(c.pole, Vec3Q::from_ints([0, 0, -1]));
        assert_eq!(c.members.len(), 2);
        assert!(hemisphere_for_pole(Vec3Q::from_ints([1, 0, 0]), &rays, 1).is_none());
    }

    #[test]
    fn sampled_hemisphere_single_ray() {
        let rays = [ray(5, [2, -1, 3])];
        let c = select_hemisphere(&rays, 3, 32).unwrap();
        assert_eq!(c.members, vec![rays[0].t.clone()]);
    }

    #[test]
    fn coplanarity_examples() {
        let rays = [
            ray(1, [1, 0, 1]),
            ray(2, [0, 1, 1]),
            ray(3, [1, 1, 2]),
            ray(4, [0, 0, 1]),
        ];
        let c = hemisphere_for_pole(Vec3Q::from_ints([0, 0, 1]), &rays, 1).unwrap();
        assert_eq!(
            coplanar_iff_collinear_check(&rays[0], &rays[1], &rays[2], &c),
            (true, true)
        );
        assert_eq!(
            coplanar_iff_collinear_check(&rays[0], &rays[1], &rays[3], &c),
            (false, false)
        );
        assert_eq!(
            coplanar_iff_collinear_check(&rays[0], &rays[0], &rays[1], &c),
            (true, true)
        );
    }

    #[test]
    fn triangulation_examples() {
        let g = graph(vec![p2(0, 0), p2(1, 0), p2(0, 1)]);
        assert_eq!(g.edges.len(), 3);
        let g = graph(vec![p2(0, 0), p2(1, 1), p2(2, 2)]);
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
        let g = graph(vec![p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)]);
        assert_eq!(g.edges.len(), 5);
        assert!(g.is_connected() && g.is_crossing_free());
        assert!(graph(vec![p2(3, 3)]).edges.is_empty());
    }

    #[test]
    fn triangulation_with_collinear_hull_points() {
        // a vertical run followed by points extending it collinearly
        let pts = vec![
            p2(0, 0),
            p2(0, 1),
            p2(0, 2),
            p2(1, 0),
            p2(2, 0),
            p2(2, 1),
            p2(2, 2),
            p2(1, 1),
        ];
        let g = graph(pts);
        assert!(g.is_connected());
        assert!(g.is_crossing_free());
        // n = 8 with every point but (1,1) on the hull boundary:
        // E = 3n − 3 − h = 24 − 3 − 7 = 14
        assert_eq!(g.edges.len(), 14);
    }

    #[test]
    fn conflict_predicate() {
        // proper crossing
        assert!(segments_conflict(&p2(0, 0), &p2(2, 2), &p2(0, 2), &p2(2, 0)));
        // T-junction
        assert!(segments_conflict(&p2(0, 0), &p2(2, 0), &p2(1, 0), &p2(1, 5)));
        // shared endpoint, fine
        assert!(!segments_conflict(&p2(0, 0), &p2(2, 0), &p2(0, 0), &p2(0, 3)));
        // shared endpoint, collinear overlap
        assert!(segments_conflict(&p2(0, 0), &p2(2, 0), &p2(0, 0), &p2(1, 0)));
        // shared endpoint, collinear opposite directions: fine
        assert!(!segments_conflict(&p2(0, 0), &p2(2, 0), &p2(0, 0), &p2(-1, 0)));
        // disjoint collinear
        assert!(!segments_conflict(&p2(0, 0), &p2(1, 0), &p2(2, 0), &p2(3, 0)));
    }

    #[test]
    fn partner_rule() {
        // path a-b-c with chart points in increasing order
        let g = graph(vec![p2(0, 0), p2(1, 1), p2(2, 2)]);
        let m = assign_partners(&g);
        let t = |k: i64| GaussianRational::from_ints(k, 0);
        assert_eq!(m[&t(1)], t(2));
        assert_eq!(m[&t(2)], t(1));
        assert_eq!(m[&t(3)], t(2));

        let g = graph(vec![p2(0, 0), p2(1, 0), p2(0, 1)]);
        let m = assign_partners(&g);
        assert_eq!(m[&t(1)], t(3)); // (0,1) < (1,0)
        assert_eq!(m[&t(2)], t(1));
        assert_eq!(m[&t(3)], t(1));

        assert!(assign_partners(&graph(vec![p2(1, 1)])).is_empty());
    }
}
