//! The fan of cones over a tropical curve, its recession fan, and the
//! combinatorial dictionary of the special fiber.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{smooth_star, Incidence, TropicalCurve};
use crate::error::{Error, Result};
use crate::lattice::{
    dual_basis, hermite_completion, kernel_rational, primitive_int, rank_rational,
    row_hermite_form, solve_rational, LatticeVector, Rat, RatMatrix, RatVector,
};

/// Least `l` with `l * v` integral for every vertex `v`.
pub fn base_exponent(c: &TropicalCurve) -> BigInt {
    c.vertices
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum ConeLabel {
    Origin,
    Vertex(usize),
    Edge(usize),
    Ray(usize),
    /// Recession ray, labelled by the first ray with that direction.
    Recession(usize),
}

/// Simplicial cone in `Z^n x Z`; the last coordinate is the height.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub generators: Vec<LatticeVector>,
    pub label: ConeLabel,
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn is_recession(&self) -> bool {
        self.generators
            .iter()
            .all(|g| g[g.dim() - 1].is_zero())
    }

    fn key(&self) -> Vec<LatticeVector> {
        let mut k = self.generators.clone();
        k.sort();
        k
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub ambient: usize,
    pub cones: Vec<Cone>,
    /// `(face, cone)` index pairs for every proper face.
    pub faces: Vec<(usize, usize)>,
}

impl Fan {
    fn from_cones(ambient: usize, cones: Vec<Cone>) -> Fan {
        let index: BTreeMap<Vec<LatticeVector>, usize> =
            cones.iter().enumerate().map(|(i, c)| (c.key(), i)).collect();
        let mut faces = Vec::new();
        for (j, cone) in cones.iter().enumerate() {
            for sub in subsets(&cone.generators) {
                if sub.len() == cone.dim() {
                    continue;
                }
                let mut k = sub;
                k.sort();
                if let Some(&i) = index.get(&k) {
                    faces.push((i, j));
                }
            }
        }
        faces.sort_unstable();
        Fan {
            ambient,
            cones,
            faces,
        }
    }

    pub fn count(&self, pred: impl Fn(&ConeLabel) -> bool) -> usize {
        self.cones.iter().filter(|c| pred(&c.label)).count()
    }

    /// Generators of the one-dimensional cones.
    pub fn rays(&self) -> Vec<LatticeVector> {
        self.cones
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| c.generators[0].clone())
            .collect()
    }

    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&j| !self.faces.iter().any(|&(i, _)| i == j))
            .collect()
    }
}

fn subsets(gens: &[LatticeVector]) -> Vec<Vec<LatticeVector>> {
    (0u32..1 << gens.len())
        .map(|mask| {
            gens.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, g)| g.clone())
                .collect()
        })
        .collect()
}

/// Generator of the cone over vertex `v` after base change: `(l v, 1)`.
pub fn vertex_generator(c: &TropicalCurve, l: &BigInt, v: usize) -> LatticeVector {
    let mut coords: Vec<BigInt> = c.vertices[v]
        .coords()
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    coords.push(BigInt::one());
    LatticeVector::new(coords)
}

fn at_height_zero(u: &LatticeVector) -> LatticeVector {
    let mut coords = u.coords().to_vec();
    coords.push(BigInt::zero());
    LatticeVector::new(coords)
}

/// Distinct primitive ray directions with the first ray index using each.
fn recession_directions(c: &TropicalCurve) -> Result<Vec<(usize, LatticeVector)>> {
    let mut out: Vec<(usize, LatticeVector)> = Vec::new();
    for (i, r) in c.rays.iter().enumerate() {
        let u = primitive_int(&r.direction)?;
        if !out.iter().any(|(_, w)| *w == u) {
            out.push((i, u));
        }
    }
    Ok(out)
}

/// The fan of cones over the faces of the curve placed at height one after
/// the base change of exponent [`base_exponent`], with all recession faces.
pub fn build_fan(c: &TropicalCurve) -> Result<Fan> {
    let l = base_exponent(c);
    let gv: Vec<LatticeVector> = (0..c.num_vertices())
        .map(|v| vertex_generator(c, &l, v))
        .collect();
    let mut cones = vec![Cone {
        generators: Vec::new(),
        label: ConeLabel::Origin,
    }];
    for (v, g) in gv.iter().enumerate() {
        cones.push(Cone {
            generators: vec![g.clone()],
            label: ConeLabel::Vertex(v),
        });
    }
    for (i, u) in recession_directions(c)? {
        cones.push(Cone {
            generators: vec![at_height_zero(&u)],
            label: ConeLabel::Recession(i),
        });
    }
    for (i, e) in c.edges.iter().enumerate() {
        cones.push(Cone {
            generators: vec![gv[e.u].clone(), gv[e.v].clone()],
            label: ConeLabel::Edge(i),
        });
    }
    for (i, r) in c.rays.iter().enumerate() {
        cones.push(Cone {
            generators: vec![gv[r.base].clone(), at_height_zero(&primitive_int(&r.direction)?)],
            label: ConeLabel::Ray(i),
        });
    }
    Ok(Fan::from_cones(c.rank + 1, cones))
}

/// The recession fan: distinct ray directions at height zero and the origin.
pub fn recession_fan(c: &TropicalCurve) -> Result<Fan> {
    let mut cones = vec![Cone {
        generators: Vec::new(),
        label: ConeLabel::Origin,
    }];
    for (i, u) in recession_directions(c)? {
        cones.push(Cone {
            generators: vec![at_height_zero(&u)],
            label: ConeLabel::Recession(i),
        });
    }
    Ok(Fan::from_cones(c.rank + 1, cones))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum FanViolation {
    DependentGenerators { cone: usize },
    MissingFace { cone: usize, face: Vec<LatticeVector> },
    BadIntersection {
        first: usize,
        second: usize,
        /// A ray of the intersection that is not in the common face.
        ray: LatticeVector,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanCheck {
    pub ok: bool,
    pub violation: Option<FanViolation>,
}

fn to_rat(v: &LatticeVector) -> RatVector {
    v.to_rat()
}

fn columns(gens: &[RatVector], n: usize) -> RatMatrix {
    RatMatrix::from_rows(
        gens.len(),
        (0..n)
            .map(|i| gens.iter().map(|g| g[i].clone()).collect())
            .collect(),
    )
    .expect("shape")
}

/// Membership of `x` in the cone over linearly independent `gens`.
fn in_cone(x: &RatVector, gens: &[RatVector]) -> bool {
    if gens.is_empty() {
        return x.is_zero();
    }
    match solve_rational(&columns(gens, x.dim()), x.coords()) {
        Some(coeffs) => coeffs.iter().all(|a| !a.is_negative()),
        None => false,
    }
}

/// Rays of `c1 ∩ c2` beyond those of the common candidate face, if any.
fn intersection_outside_face(g1: &[RatVector], g2: &[RatVector]) -> Option<RatVector> {
    let n = g1.first().or(g2.first())?.dim();
    let mut candidates: Vec<RatVector> = g1
        .iter()
        .filter(|g| in_cone(g, g2))
        .chain(g2.iter().filter(|g| in_cone(g, g1)))
        .cloned()
        .collect();
    if g1.len() == 2 && g2.len() == 2 {
        // spans meeting in a single line contribute its direction
        let mut gens = g1.to_vec();
        gens.extend(g2.iter().map(RatVector::neg));
        let k = kernel_rational(&columns(&gens, n));
        if k.len() == 1 {
            let z = g1[0].scale(&k[0][0]).add(&g1[1].scale(&k[0][1]));
            if !z.is_zero() {
                for s in [z.clone(), z.neg()] {
                    if in_cone(&s, g1) && in_cone(&s, g2) {
                        candidates.push(s);
                    }
                }
            }
        }
    }
    let f1: Vec<RatVector> = g1.iter().filter(|g| in_cone(g, g2)).cloned().collect();
    let f2: Vec<RatVector> = g2.iter().filter(|g| in_cone(g, g1)).cloned().collect();
    candidates
        .into_iter()
        .find(|x| !in_cone(x, &f1) || !in_cone(x, &f2))
}

/// Checks closure under faces and that every pairwise intersection is a
/// common face, with exact arithmetic. Cones must have dimension at most two.
pub fn verify_fan_axioms(f: &Fan) -> Result<FanCheck> {
    if let Some(c) = f.cones.iter().find(|c| c.dim() > 2) {
        return Err(Error::UnsupportedDimension(c.dim()));
    }
    let fail = |v| {
        Ok(FanCheck {
            ok: false,
            violation: Some(v),
        })
    };
    let gens: Vec<Vec<RatVector>> = f
        .cones
        .iter()
        .map(|c| c.generators.iter().map(to_rat).collect())
        .collect();
    let keys: Vec<Vec<LatticeVector>> = f.cones.iter().map(Cone::key).collect();
    for (j, cone) in f.cones.iter().enumerate() {
        if cone.dim() > 0 && rank_rational(&columns(&gens[j], f.ambient)) < cone.dim() {
            return fail(FanViolation::DependentGenerators { cone: j });
        }
        for mut face in subsets(&cone.generators) {
            face.sort();
            if !keys.contains(&face) {
                return fail(FanViolation::MissingFace { cone: j, face });
            }
        }
    }
    for i in 0..f.cones.len() {
        for j in i + 1..f.cones.len() {
            if let Some(x) = intersection_outside_face(&gens[i], &gens[j]) {
                let ray = primitive_ray(&x);
                return fail(FanViolation::BadIntersection {
                    first: i,
                    second: j,
                    ray,
                });
            }
        }
    }
    Ok(FanCheck {
        ok: true,
        violation: None,
    })
}

fn primitive_ray(x: &RatVector) -> LatticeVector {
    crate::lattice::primitive_vector(x)
        .map(|(u, _)| u)
        .unwrap_or_else(|_| LatticeVector::zero(x.dim()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTag {
    pub hyperplane: usize,
    pub incidence: Incidence,
    /// Bounded edges are shared with a neighbor; rays are outer.
    pub shared: bool,
}

/// The component `P_d x G_m^{n-d}` over a smooth vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDescriptor {
    pub vertex: usize,
    pub d: usize,
    pub torus_rank: usize,
    /// `b_1..b_d` followed by the completion `c_{d+1}..c_n`.
    pub basis: Vec<LatticeVector>,
    pub divisors: Vec<DivisorTag>,
}

impl ComponentDescriptor {
    pub fn completion(&self) -> &[LatticeVector] {
        &self.basis[self.d..]
    }
}

pub fn component_descriptor(c: &TropicalCurve, v: usize) -> Result<ComponentDescriptor> {
    if v >= c.num_vertices() {
        return Err(Error::IndexOutOfRange {
            what: "vertex",
            index: v,
        });
    }
    let star = smooth_star(c, v).map_err(|_| Error::NotSmoothVertex(v))?;
    let basis = hermite_completion(star.basis(), c.rank)?;
    let divisors = star
        .incidences
        .iter()
        .enumerate()
        .map(|(i, &inc)| DivisorTag {
            hyperplane: i,
            incidence: inc,
            shared: matches!(inc, Incidence::Edge(_)),
        })
        .collect();
    Ok(ComponentDescriptor {
        vertex: v,
        d: star.d,
        torus_rank: c.rank - star.d,
        basis,
        divisors,
    })
}

/// Character lattice `M_e = u_e^perp` of the divisor of a bounded edge, in
/// Hermite normal form, read from the lower endpoint's side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorChart {
    pub edge: usize,
    pub side: usize,
    pub direction: LatticeVector,
    pub basis: Vec<LatticeVector>,
}

/// Hermite-reduced basis of `u^perp` in `Z^n` for primitive `u`.
pub fn orthogonal_lattice(u: &LatticeVector) -> Result<Vec<LatticeVector>> {
    let n = u.dim();
    let full = hermite_completion(std::slice::from_ref(u), n)?;
    let dual = dual_basis(&full, n)?;
    row_hermite_form(&dual[1..], n)
}

pub fn divisor_basis(c: &TropicalCurve, e: usize) -> Result<DivisorChart> {
    if e >= c.edges.len() {
        return Err(Error::IndexOutOfRange {
            what: "edge",
            index: e,
        });
    }
    let (lo, _) = c.oriented_endpoints(e);
    let u = c.edge_direction(e)?;
    Ok(DivisorChart {
        edge: e,
        side: lo,
        basis: orthogonal_lattice(&u)?,
        direction: u,
    })
}
