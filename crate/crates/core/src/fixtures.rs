//! Reference curves and random generators used by tests, the CLI examples
//! and the demo page.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::Signed;
use rand::Rng;

use crate::curve::{BoundedEdge, Ray, TropicalCurve};
use crate::lattice::{int, rat, LatticeVector, Rat, RatVector};

fn pts(coords: &[&[i64]]) -> Vec<RatVector> {
    coords.iter().map(|c| RatVector::from_i64(c)).collect()
}

/// Smooth plane cubic-type curve with one hexagonal cycle and unit edges.
///
/// Indexed so that breadth-first search from vertex 0 keeps edges 0..=4 and
/// edge 5 closes the cycle.
pub fn hexagon() -> TropicalCurve {
    TropicalCurve::new(2, pts(&[&[2, 2], &[1, 2], &[0, 1], &[0, 0], &[1, 0], &[2, 1]]))
        .with_edge(3, 4)
        .with_edge(4, 5)
        .with_edge(0, 5)
        .with_edge(0, 1)
        .with_edge(1, 2)
        .with_edge(2, 3)
        .with_ray(3, &[-1, -1])
        .with_ray(4, &[0, -1])
        .with_ray(5, &[1, 0])
        .with_ray(0, &[1, 1])
        .with_ray(1, &[0, 1])
        .with_ray(2, &[-1, 0])
}

/// The hexagon placed in the plane `z = 0` of `R^3`.
pub fn hexagon_in_space() -> TropicalCurve {
    embed_plane_curve(&hexagon(), &[0, 0])
}

/// Re-embeds a plane curve in `R^3` through `(x, y) -> (x, y, a x + b y)`.
pub fn embed_plane_curve(c: &TropicalCurve, slope: &[i64; 2]) -> TropicalCurve {
    assert_eq!(c.rank, 2);
    let (a, b) = (int(slope[0]), int(slope[1]));
    let lift_rat = |p: &RatVector| {
        let z = Rat::from_integer(a.clone()) * &p[0] + Rat::from_integer(b.clone()) * &p[1];
        RatVector::new(vec![p[0].clone(), p[1].clone(), z])
    };
    let lift_int = |u: &LatticeVector| {
        let z = &a * &u[0] + &b * &u[1];
        LatticeVector::new(vec![u[0].clone(), u[1].clone(), z])
    };
    TropicalCurve {
        rank: 3,
        vertices: c.vertices.iter().map(lift_rat).collect(),
        edges: c.edges.clone(),
        rays: c
            .rays
            .iter()
            .map(|r| Ray {
                base: r.base,
                direction: lift_int(&r.direction),
                weight: r.weight,
            })
            .collect(),
    }
}

/// A single trivalent vertex at the origin.
pub fn tropical_line() -> TropicalCurve {
    TropicalCurve::new(2, pts(&[&[0, 0]]))
        .with_ray(0, &[1, 0])
        .with_ray(0, &[0, 1])
        .with_ray(0, &[-1, -1])
}

/// Two trivalent vertices joined by a horizontal edge of length 2.
pub fn two_vertex() -> TropicalCurve {
    TropicalCurve::new(2, pts(&[&[0, 0], &[2, 0]]))
        .with_edge(0, 1)
        .with_ray(0, &[0, 1])
        .with_ray(0, &[-1, -1])
        .with_ray(1, &[0, -1])
        .with_ray(1, &[1, 1])
}

/// Two hexagons sharing an edge: smooth, genus 2.
pub fn hexagon_pair() -> TropicalCurve {
    TropicalCurve::new(
        2,
        pts(&[
            &[0, 0],
            &[1, 0],
            &[2, 1],
            &[2, 2],
            &[1, 2],
            &[0, 1],
            &[3, 1],
            &[4, 2],
            &[4, 3],
            &[3, 3],
        ]),
    )
    .with_edge(0, 1)
    .with_edge(1, 2)
    .with_edge(2, 3)
    .with_edge(3, 4)
    .with_edge(4, 5)
    .with_edge(5, 0)
    .with_edge(2, 6)
    .with_edge(6, 7)
    .with_edge(7, 8)
    .with_edge(8, 9)
    .with_edge(9, 3)
    .with_ray(0, &[-1, -1])
    .with_ray(1, &[0, -1])
    .with_ray(4, &[0, 1])
    .with_ray(5, &[-1, 0])
    .with_ray(6, &[0, -1])
    .with_ray(7, &[1, 0])
    .with_ray(8, &[1, 1])
    .with_ray(9, &[0, 1])
}

/// Two unit squares side by side; balanced and genus 2 but not smooth
/// (the middle vertices are four-valent in the plane).
pub fn domino() -> TropicalCurve {
    TropicalCurve::new(2, pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[2, 1]]))
        .with_edge(0, 1)
        .with_edge(1, 2)
        .with_edge(3, 4)
        .with_edge(4, 5)
        .with_edge(0, 3)
        .with_edge(1, 4)
        .with_edge(2, 5)
        .with_ray(0, &[-1, -1])
        .with_ray(1, &[0, -1])
        .with_ray(2, &[1, -1])
        .with_ray(3, &[-1, 1])
        .with_ray(4, &[0, 1])
        .with_ray(5, &[1, 1])
}

/// Two edges crossing at the origin; every vertex is balanced by a ray.
pub fn crossing_segments() -> TropicalCurve {
    TropicalCurve::new(2, pts(&[&[-1, 0], &[1, 0], &[0, -1], &[0, 1]]))
        .with_edge(0, 1)
        .with_edge(2, 3)
        .with_ray(0, &[-1, 0])
        .with_ray(1, &[1, 0])
        .with_ray(2, &[0, -1])
        .with_ray(3, &[0, 1])
}

/// Adjacency of the complete graph on four vertices.
pub fn k4_adjacency() -> Vec<BTreeSet<usize>> {
    (0..4)
        .map(|v| (0..4).filter(|&w| w != v).collect())
        .collect()
}

/// Valid fixtures expected to pass every check but non-superabundance
/// where noted.
pub fn named_fixtures() -> Vec<(&'static str, TropicalCurve)> {
    vec![
        ("hexagon", hexagon()),
        ("hexagon_in_space", hexagon_in_space()),
        ("tropical_line", tropical_line()),
        ("two_vertex", two_vertex()),
        ("hexagon_pair", hexagon_pair()),
        ("tilted_hexagon", embed_plane_curve(&hexagon(), &[1, 2])),
    ]
}

/// Plane curve dual to the regular subdivision of the lattice points in
/// `heights` induced by their heights. Returns `None` unless the lifting is
/// generic enough to induce a triangulation.
pub fn plane_curve_from_heights(heights: &BTreeMap<(i64, i64), i64>) -> Option<TropicalCurve> {
    let points: Vec<(i64, i64)> = heights.keys().copied().collect();
    let h = |p: (i64, i64)| heights[&p];
    let mut triangles = Vec::new();
    let m = points.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (a, b, c) = (points[i], points[j], points[k]);
                let area2 = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
                if area2 == 0 {
                    continue;
                }
                // sign of the lifted orientation relative to q decides above/below
                let mut lower = true;
                for &q in &points {
                    if q == a || q == b || q == c {
                        continue;
                    }
                    let det = lifted_det(a, b, c, q, &h);
                    // q lies above the plane iff det has the sign of area2
                    let s = det.signum() * area2.signum() as i128;
                    if s == 0 {
                        return None;
                    }
                    if s < 0 {
                        lower = false;
                        break;
                    }
                }
                if lower {
                    triangles.push([a, b, c]);
                }
            }
        }
    }
    if triangles.is_empty() {
        return None;
    }

    let vertices: Vec<RatVector> = triangles.iter().map(|t| dual_point(t, &h)).collect();
    let mut by_edge: BTreeMap<((i64, i64), (i64, i64)), Vec<(usize, (i64, i64))>> = BTreeMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for s in 0..3 {
            let (p, q, r) = (t[s], t[(s + 1) % 3], t[(s + 2) % 3]);
            let key = if p < q { (p, q) } else { (q, p) };
            by_edge.entry(key).or_default().push((ti, r));
        }
    }
    let mut curve = TropicalCurve::new(2, vertices);
    for ((p, q), users) in by_edge {
        let weight = (q.0 - p.0).gcd(&(q.1 - p.1)).unsigned_abs();
        match users.as_slice() {
            [(t1, _), (t2, _)] => curve.edges.push(BoundedEdge {
                u: *t1,
                v: *t2,
                weight,
            }),
            [(t, r)] => {
                let (dx, dy) = ((q.0 - p.0) / weight as i64, (q.1 - p.1) / weight as i64);
                // perpendicular to p->q, oriented away from the opposite corner r
                let mut dir = [dy, -dx];
                if dir[0] * (r.0 - p.0) + dir[1] * (r.1 - p.1) < 0 {
                    dir = [-dir[0], -dir[1]];
                }
                curve.rays.push(Ray {
                    base: *t,
                    direction: LatticeVector::from_i64(&dir),
                    weight,
                });
            }
            _ => return None,
        }
    }
    Some(curve)
}

fn lifted_det(
    a: (i64, i64),
    b: (i64, i64),
    c: (i64, i64),
    q: (i64, i64),
    h: &impl Fn((i64, i64)) -> i64,
) -> i128 {
    let row = |p: (i64, i64)| {
        [
            (p.0 - a.0) as i128,
            (p.1 - a.1) as i128,
            (h(p) - h(a)) as i128,
        ]
    };
    let (u, v, w) = (row(b), row(c), row(q));
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])
}

/// Point where the three monomials of a triangle attain the minimum together.
fn dual_point(t: &[(i64, i64); 3], h: &impl Fn((i64, i64)) -> i64) -> RatVector {
    let [a, b, c] = *t;
    // (a - b) . x = h(b) - h(a), (a - c) . x = h(c) - h(a)
    let (m11, m12, r1) = (a.0 - b.0, a.1 - b.1, h(b) - h(a));
    let (m21, m22, r2) = (a.0 - c.0, a.1 - c.1, h(c) - h(a));
    let det = m11 * m22 - m12 * m21;
    let x = rat(r1 * m22 - m12 * r2, det);
    let y = rat(m11 * r2 - r1 * m21, det);
    RatVector::new(vec![x, y])
}

/// Random trivalent plane curve from a generic lifting of the degree-`degree`
/// triangle; weights may exceed one and lattice points may be skipped.
pub fn random_plane_curve<R: Rng>(rng: &mut R, degree: i64) -> TropicalCurve {
    loop {
        let heights = triangle_points(degree)
            .map(|p| (p, rng.gen_range(-10_000..=10_000)))
            .collect();
        if let Some(c) = plane_curve_from_heights(&heights) {
            if !c.edges.is_empty() || degree == 1 {
                return c;
            }
        }
    }
}

/// Random smooth plane curve: a perturbed strictly convex lifting, kept only
/// if the induced triangulation is unimodular and uses every lattice point.
pub fn random_smooth_plane_curve<R: Rng>(rng: &mut R, degree: i64) -> TropicalCurve {
    loop {
        let twist: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let heights: BTreeMap<_, _> = triangle_points(degree)
            .map(|(i, j)| ((i, j), 64 * (i * i + j * j + twist * i * j) + rng.gen_range(-12..=12)))
            .collect();
        let Some(c) = plane_curve_from_heights(&heights) else {
            continue;
        };
        // d^2 triangles of total area d^2/2 forces every triangle to be unimodular
        if c.vertices.len() as i64 == degree * degree {
            return c;
        }
    }
}

fn triangle_points(degree: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=degree).flat_map(move |i| (0..=degree - i).map(move |j| (i, j)))
}

/// Random tree-shaped balanced curve in `R^n` grown by splitting rays.
pub fn random_tree_curve<R: Rng>(rng: &mut R, n: usize, splits: usize) -> TropicalCurve {
    let mut dirs: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    dirs.push(vec![-1; n]);
    let mut c = TropicalCurve::new(n, vec![RatVector::zero(n)]);
    for d in dirs {
        c.rays.push(Ray {
            base: 0,
            direction: LatticeVector::from_i64(&d),
            weight: 1,
        });
    }
    for _ in 0..splits {
        let r = rng.gen_range(0..c.rays.len());
        let ray = c.rays.remove(r);
        let step = rat(rng.gen_range(1..=5), rng.gen_range(1..=3));
        let base = c.vertices[ray.base].add(&ray.direction.to_rat().scale(&step));
        let w = c.vertices.len();
        c.vertices.push(base);
        c.edges.push(BoundedEdge {
            u: ray.base,
            v: w,
            weight: ray.weight,
        });
        // split weight * direction into two non-parallel integral pieces
        let total = ray.direction.scale(&int(ray.weight as i64));
        loop {
            let a = LatticeVector::new((0..n).map(|_| int(rng.gen_range(-3..=3))).collect());
            let b = total.sub(&a);
            if a.is_zero() || b.is_zero() || parallel(&a, &b) {
                continue;
            }
            for piece in [a, b] {
                let g = piece.content();
                let dir = LatticeVector::new(piece.coords().iter().map(|x| x / &g).collect());
                c.rays.push(Ray {
                    base: w,
                    direction: dir,
                    weight: g.abs().try_into().expect("small weight"),
                });
            }
            break;
        }
    }
    c
}

fn parallel(a: &LatticeVector, b: &LatticeVector) -> bool {
    let n = a.dim();
    (0..n).all(|i| (0..n).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}
