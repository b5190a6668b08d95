//! Embedded tropical curves, their validity checks and the skeleton.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    extends_to_unimodular_basis, lattice_length, primitive_vector, rank_rational,
    smith_invariants, solve_rational, IntMatrix, LatticeVector, Rat, RatMatrix, RatVector,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedEdge {
    pub u: usize,
    pub v: usize,
    #[serde(default = "unit_weight")]
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub base: usize,
    pub direction: LatticeVector,
    #[serde(default = "unit_weight")]
    pub weight: u64,
}

fn unit_weight() -> u64 {
    1
}

/// A weighted rational polyhedral curve embedded in `R^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalCurve {
    pub rank: usize,
    pub vertices: Vec<RatVector>,
    #[serde(default)]
    pub edges: Vec<BoundedEdge>,
    #[serde(default)]
    pub rays: Vec<Ray>,
}

/// An edge or ray of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Incidence {
    Edge(usize),
    Ray(usize),
}

impl TropicalCurve {
    pub fn new(rank: usize, vertices: Vec<RatVector>) -> Self {
        TropicalCurve {
            rank,
            vertices,
            edges: Vec::new(),
            rays: Vec::new(),
        }
    }

    pub fn with_edge(mut self, u: usize, v: usize) -> Self {
        self.edges.push(BoundedEdge { u, v, weight: 1 });
        self
    }

    pub fn with_ray(mut self, base: usize, direction: &[i64]) -> Self {
        self.rays.push(Ray {
            base,
            direction: LatticeVector::from_i64(direction),
            weight: 1,
        });
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Edges in index order, then rays in index order.
    pub fn incidences(&self, v: usize) -> Vec<Incidence> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.u == v || e.v == v)
            .map(|(i, _)| Incidence::Edge(i));
        let rays = self
            .rays
            .iter()
            .enumerate()
            .filter(|(_, r)| r.base == v)
            .map(|(i, _)| Incidence::Ray(i));
        edges.chain(rays).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.incidences(v).len()
    }

    pub fn weight(&self, inc: Incidence) -> u64 {
        match inc {
            Incidence::Edge(i) => self.edges[i].weight,
            Incidence::Ray(i) => self.rays[i].weight,
        }
    }

    /// Edge endpoints ordered from lower to higher vertex index.
    pub fn oriented_endpoints(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (edge.u.min(edge.v), edge.u.max(edge.v))
    }

    /// Displacement vector of edge `e` in its recorded orientation.
    pub fn edge_displacement(&self, e: usize) -> RatVector {
        let (lo, hi) = self.oriented_endpoints(e);
        self.vertices[hi].sub(&self.vertices[lo])
    }

    /// Primitive direction of edge `e` in its recorded orientation.
    pub fn edge_direction(&self, e: usize) -> Result<LatticeVector> {
        primitive_vector(&self.edge_displacement(e)).map(|(u, _)| u)
    }

    /// Primitive direction of an incidence pointing away from vertex `v`.
    pub fn outgoing_direction(&self, v: usize, inc: Incidence) -> Result<LatticeVector> {
        match inc {
            Incidence::Edge(e) => {
                let edge = &self.edges[e];
                let other = if edge.u == v { edge.v } else { edge.u };
                primitive_vector(&self.vertices[other].sub(&self.vertices[v])).map(|(u, _)| u)
            }
            Incidence::Ray(r) => crate::lattice::primitive_int(&self.rays[r].direction),
        }
    }

    /// Distinct-neighbor adjacency over bounded edges.
    pub fn neighbor_sets(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.num_vertices()];
        for e in &self.edges {
            if e.u != e.v {
                adj[e.u].insert(e.v);
                adj[e.v].insert(e.u);
            }
        }
        adj
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Embedding,
    Balancing,
    Smoothness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum Issue {
    NoVertices,
    IndexOutOfRange { item: Incidence, vertex: usize },
    WrongDimension { what: String, found: usize },
    DuplicateVertex { first: usize, second: usize },
    LoopEdge { edge: usize },
    ZeroWeight { item: Incidence },
    NonPrimitiveRay { ray: usize, direction: LatticeVector },
    Disconnected { unreachable: Vec<usize> },
    LowValence { vertex: usize, valence: usize },
    Intersection { first: Incidence, second: Incidence, witness: RatVector },
    VertexOnPiece { vertex: usize, item: Incidence },
    Unbalanced { vertex: usize, residual: LatticeVector },
    WeightNotOne { item: Incidence, weight: u64 },
    RepeatedDirection { vertex: usize, direction: LatticeVector },
    DirectionsDoNotSum { vertex: usize, sum: LatticeVector },
    TooManyDirections { vertex: usize, d: usize, rank: usize },
    NotUnimodular {
        vertex: usize,
        #[serde(with = "crate::json::vec_int")]
        invariants: Vec<BigInt>,
    },
}

/// Per-check verdict with per-vertex, per-edge and per-ray flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub check: CheckKind,
    pub passed: bool,
    pub vertex_ok: Vec<bool>,
    pub edge_ok: Vec<bool>,
    pub ray_ok: Vec<bool>,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    fn new(check: CheckKind, c: &TropicalCurve) -> Self {
        ValidationReport {
            check,
            passed: true,
            vertex_ok: vec![true; c.vertices.len()],
            edge_ok: vec![true; c.edges.len()],
            ray_ok: vec![true; c.rays.len()],
            issues: Vec::new(),
        }
    }

    fn flag(&mut self, item: Option<Incidence>, vertex: Option<usize>, issue: Issue) {
        self.passed = false;
        match item {
            Some(Incidence::Edge(i)) => {
                if let Some(x) = self.edge_ok.get_mut(i) {
                    *x = false;
                }
            }
            Some(Incidence::Ray(i)) => {
                if let Some(x) = self.ray_ok.get_mut(i) {
                    *x = false;
                }
            }
            None => {}
        }
        if let Some(x) = vertex.and_then(|v| self.vertex_ok.get_mut(v)) {
            *x = false;
        }
        self.issues.push(issue);
    }
}

/// Closed parametric piece `start + s * dir`, `s` in `[0, 1]` (segment) or
/// `[0, inf)` (ray).
struct Piece {
    item: Incidence,
    start: RatVector,
    dir: RatVector,
    bounded: bool,
}

impl Piece {
    fn at(&self, s: &Rat) -> RatVector {
        self.start.add(&self.dir.scale(s))
    }

    fn is_endpoint(&self, s: &Rat) -> bool {
        s.is_zero() || (self.bounded && s.is_one())
    }

    fn contains_param(&self, s: &Rat) -> bool {
        !s.is_negative() && (!self.bounded || *s <= Rat::one())
    }

    /// Parameter of `p` on the supporting line, if `p` lies on it.
    fn param_of(&self, p: &RatVector) -> Option<Rat> {
        let diff = p.sub(&self.start);
        let k = self.dir.coords().iter().position(|c| !c.is_zero())?;
        let s = &diff[k] / &self.dir[k];
        (self.dir.scale(&s) == diff).then_some(s)
    }
}

fn pieces(c: &TropicalCurve) -> Vec<Piece> {
    let edges = c.edges.iter().enumerate().map(|(i, e)| Piece {
        item: Incidence::Edge(i),
        start: c.vertices[e.u].clone(),
        dir: c.vertices[e.v].sub(&c.vertices[e.u]),
        bounded: true,
    });
    let rays = c.rays.iter().enumerate().map(|(i, r)| Piece {
        item: Incidence::Ray(i),
        start: c.vertices[r.base].clone(),
        dir: r.direction.to_rat(),
        bounded: false,
    });
    edges.chain(rays).collect()
}

/// Returns a witness point when the two closed pieces meet anywhere other
/// than at a common endpoint.
fn bad_intersection(a: &Piece, b: &Piece) -> Option<RatVector> {
    let n = a.dir.dim();
    let cols = RatMatrix::from_rows(
        2,
        (0..n)
            .map(|k| vec![a.dir[k].clone(), -b.dir[k].clone()])
            .collect(),
    )
    .expect("shape");
    let rhs = b.start.sub(&a.start);
    if rank_rational(&cols) == 2 {
        let st = solve_rational(&cols, rhs.coords())?;
        let (s, t) = (&st[0], &st[1]);
        if !a.contains_param(s) || !b.contains_param(t) {
            return None;
        }
        if a.is_endpoint(s) && b.is_endpoint(t) {
            return None;
        }
        return Some(a.at(s));
    }
    // parallel supporting lines: intersect parameter intervals along `a`
    let s0 = a.param_of(&b.start)?;
    let k = a.dir.dot(&b.dir) / a.dir.dot(&a.dir);
    // interval of `b` expressed in `a`'s parameter, as (low, high), None = infinite
    let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = if b.bounded {
        let s1 = &s0 + &k;
        if k.is_positive() {
            (Some(s0.clone()), Some(s1))
        } else {
            (Some(s1), Some(s0.clone()))
        }
    } else if k.is_positive() {
        (Some(s0.clone()), None)
    } else {
        (None, Some(s0.clone()))
    };
    // clip to a's interval
    let a_lo = Rat::zero();
    lo = Some(match lo {
        Some(l) if l > a_lo => l,
        _ => a_lo,
    });
    if a.bounded {
        hi = Some(match hi {
            Some(h) if h < Rat::one() => h,
            _ => Rat::one(),
        });
    }
    let lo = lo.expect("clipped");
    match &hi {
        Some(h) if *h < lo => None,
        Some(h) if *h == lo => {
            let t = (&lo - &s0) / &k;
            if a.is_endpoint(&lo) && b.is_endpoint(&t) {
                None
            } else {
                Some(a.at(&lo))
            }
        }
        _ => Some(a.at(&lo)),
    }
}

/// Structural and geometric validity: indices, dimensions, distinct
/// vertices, connectivity, valence, and a closed embedding (relative
/// interiors of edges and rays pairwise disjoint and free of vertices).
pub fn validate_embedding(c: &TropicalCurve) -> ValidationReport {
    let mut rep = ValidationReport::new(CheckKind::Embedding, c);
    let nv = c.vertices.len();
    if nv == 0 {
        rep.flag(None, None, Issue::NoVertices);
        return rep;
    }
    for (i, p) in c.vertices.iter().enumerate() {
        if p.dim() != c.rank {
            rep.flag(
                None,
                Some(i),
                Issue::WrongDimension {
                    what: format!("vertex {i}"),
                    found: p.dim(),
                },
            );
        }
    }
    for (i, e) in c.edges.iter().enumerate() {
        let item = Incidence::Edge(i);
        for v in [e.u, e.v] {
            if v >= nv {
                rep.flag(Some(item), None, Issue::IndexOutOfRange { item, vertex: v });
            }
        }
        if e.u == e.v {
            rep.flag(Some(item), None, Issue::LoopEdge { edge: i });
        }
        if e.weight == 0 {
            rep.flag(Some(item), None, Issue::ZeroWeight { item });
        }
    }
    for (i, r) in c.rays.iter().enumerate() {
        let item = Incidence::Ray(i);
        if r.base >= nv {
            rep.flag(Some(item), None, Issue::IndexOutOfRange { item, vertex: r.base });
        }
        if r.direction.dim() != c.rank {
            rep.flag(
                Some(item),
                None,
                Issue::WrongDimension {
                    what: format!("ray {i}"),
                    found: r.direction.dim(),
                },
            );
        } else if !r.direction.is_primitive() {
            rep.flag(
                Some(item),
                None,
                Issue::NonPrimitiveRay {
                    ray: i,
                    direction: r.direction.clone(),
                },
            );
        }
        if r.weight == 0 {
            rep.flag(Some(item), None, Issue::ZeroWeight { item });
        }
    }
    if !rep.passed {
        // geometry is meaningless on malformed structure
        return rep;
    }

    for i in 0..nv {
        for j in i + 1..nv {
            if c.vertices[i] == c.vertices[j] {
                rep.flag(None, Some(j), Issue::DuplicateVertex { first: i, second: j });
            }
        }
    }

    let adj = c.neighbor_sets();
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    let unreachable: Vec<usize> = (0..nv).filter(|&v| !seen[v]).collect();
    if !unreachable.is_empty() {
        let first = unreachable[0];
        rep.flag(None, Some(first), Issue::Disconnected { unreachable });
    }

    for v in 0..nv {
        let valence = c.valence(v);
        if valence < 2 {
            rep.flag(None, Some(v), Issue::LowValence { vertex: v, valence });
        }
    }

    let ps = pieces(c);
    for (i, a) in ps.iter().enumerate() {
        for b in &ps[i + 1..] {
            if let Some(witness) = bad_intersection(a, b) {
                mark(&mut rep, b.item);
                rep.flag(Some(a.item), None, Issue::Intersection {
                    first: a.item,
                    second: b.item,
                    witness,
                });
            }
        }
        for (v, p) in c.vertices.iter().enumerate() {
            if let Some(s) = a.param_of(p) {
                if a.contains_param(&s) && !a.is_endpoint(&s) {
                    rep.flag(Some(a.item), Some(v), Issue::VertexOnPiece { vertex: v, item: a.item });
                }
            }
        }
    }
    rep
}

fn mark(rep: &mut ValidationReport, item: Incidence) {
    match item {
        Incidence::Edge(i) => rep.edge_ok[i] = false,
        Incidence::Ray(i) => rep.ray_ok[i] = false,
    }
}

/// Weighted sum of outgoing primitive directions at `v`.
pub fn balancing_residual(c: &TropicalCurve, v: usize) -> Result<LatticeVector> {
    let mut sum = LatticeVector::zero(c.rank);
    for inc in c.incidences(v) {
        let u = c.outgoing_direction(v, inc)?;
        sum = sum.add(&u.scale(&BigInt::from(c.weight(inc))));
    }
    Ok(sum)
}

pub fn check_balancing(c: &TropicalCurve) -> ValidationReport {
    let mut rep = ValidationReport::new(CheckKind::Balancing, c);
    for v in 0..c.num_vertices() {
        match balancing_residual(c, v) {
            Ok(residual) if residual.is_zero() => {}
            Ok(residual) => rep.flag(None, Some(v), Issue::Unbalanced { vertex: v, residual }),
            Err(_) => rep.flag(None, Some(v), Issue::Unbalanced {
                vertex: v,
                residual: LatticeVector::zero(c.rank),
            }),
        }
    }
    rep
}

/// Local model at a smooth vertex: `directions[0] = -(b_1 + ... + b_d)`
/// and `directions[i] = b_i`, in the order of [`TropicalCurve::incidences`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothStar {
    pub vertex: usize,
    pub d: usize,
    pub incidences: Vec<Incidence>,
    pub directions: Vec<LatticeVector>,
}

impl SmoothStar {
    /// `b_1, ..., b_d`.
    pub fn basis(&self) -> &[LatticeVector] {
        &self.directions[1..]
    }

    /// Hyperplane index of an incidence of this vertex.
    pub fn hyperplane_index(&self, inc: Incidence) -> Option<usize> {
        self.incidences.iter().position(|&i| i == inc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub report: ValidationReport,
    pub stars: Vec<Option<SmoothStar>>,
}

/// Conditions on the primitive directions `u_0, ..., u_d` at one vertex:
/// pairwise distinct, summing to zero, `1 <= d <= rank`, and `u_1..u_d`
/// extending to a lattice basis.
pub fn star_issues(vertex: usize, rank: usize, directions: &[LatticeVector]) -> Vec<Issue> {
    let mut issues = Vec::new();
    let mut seen = BTreeSet::new();
    if let Some(u) = directions.iter().find(|u| !seen.insert(*u)) {
        issues.push(Issue::RepeatedDirection {
            vertex,
            direction: u.clone(),
        });
    }
    let sum = directions
        .iter()
        .fold(LatticeVector::zero(rank), |s, u| s.add(u));
    if !sum.is_zero() {
        issues.push(Issue::DirectionsDoNotSum { vertex, sum });
    }
    let d = directions.len().saturating_sub(1);
    if d < 1 || d > rank {
        issues.push(Issue::TooManyDirections { vertex, d, rank });
    } else if !extends_to_unimodular_basis(&directions[1..], rank).unwrap_or(false) {
        let a = IntMatrix::from_lattice_rows(rank, &directions[1..]).expect("shape");
        issues.push(Issue::NotUnimodular {
            vertex,
            invariants: smith_invariants(&a),
        });
    }
    issues
}

/// Smooth star at `v`, or the issues preventing it.
pub fn smooth_star(c: &TropicalCurve, v: usize) -> std::result::Result<SmoothStar, Vec<Issue>> {
    let mut issues = Vec::new();
    let incidences = c.incidences(v);
    for &inc in &incidences {
        let w = c.weight(inc);
        if w != 1 {
            issues.push(Issue::WeightNotOne { item: inc, weight: w });
        }
    }
    let mut directions = Vec::with_capacity(incidences.len());
    for &inc in &incidences {
        match c.outgoing_direction(v, inc) {
            Ok(u) => directions.push(u),
            Err(_) => return Err(vec![Issue::LowValence { vertex: v, valence: 0 }]),
        }
    }
    issues.extend(star_issues(v, c.rank, &directions));
    let d = incidences.len().saturating_sub(1);
    if issues.is_empty() {
        Ok(SmoothStar {
            vertex: v,
            d,
            incidences,
            directions,
        })
    } else {
        Err(issues)
    }
}

pub fn check_smoothness(c: &TropicalCurve) -> SmoothnessReport {
    let mut report = ValidationReport::new(CheckKind::Smoothness, c);
    let mut stars = Vec::with_capacity(c.num_vertices());
    for v in 0..c.num_vertices() {
        match smooth_star(c, v) {
            Ok(star) => stars.push(Some(star)),
            Err(issues) => {
                for issue in issues {
                    let item = match &issue {
                        Issue::WeightNotOne { item, .. } => Some(*item),
                        _ => None,
                    };
                    report.flag(item, Some(v), issue);
                }
                stars.push(None);
            }
        }
    }
    SmoothnessReport { report, stars }
}

/// Peeling order on a simple graph: repeatedly remove the smallest-index
/// vertex with at most two remaining neighbors, then reverse. On a stall the
/// remaining vertices are returned as the witness.
pub fn degeneracy_order(adj: &[BTreeSet<usize>]) -> Result<Vec<usize>> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(BTreeSet::len).collect();
    let mut removed = vec![false; n];
    let mut eligible: BTreeSet<usize> = (0..n).filter(|&v| degree[v] <= 2).collect();
    let mut peeled = Vec::with_capacity(n);
    while let Some(v) = eligible.pop_first() {
        removed[v] = true;
        peeled.push(v);
        for &w in &adj[v] {
            if removed[w] {
                continue;
            }
            degree[w] -= 1;
            if degree[w] <= 2 {
                eligible.insert(w);
            }
        }
    }
    if peeled.len() < n {
        let witness = (0..n).filter(|&v| !removed[v]).collect();
        return Err(Error::NotThreeColorable { witness });
    }
    peeled.reverse();
    Ok(peeled)
}

/// Ordering in which every vertex has fewer than three earlier neighbors.
pub fn three_coloring_order(c: &TropicalCurve) -> Result<Vec<usize>> {
    degeneracy_order(&c.neighbor_sets())
}

/// True if every vertex has at most two earlier distinct neighbors.
pub fn is_coloring_order(c: &TropicalCurve, order: &[usize]) -> bool {
    let n = c.num_vertices();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    let adj = c.neighbor_sets();
    (0..n).all(|v| adj[v].iter().filter(|&&w| pos[w] < pos[v]).count() < 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricEdge {
    pub u: usize,
    pub v: usize,
    #[serde(with = "crate::json::opt_rat", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<Rat>,
}

/// Finite graph with optional edge lengths and legs marking removed rays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricGraph {
    pub vertices: usize,
    pub edges: Vec<MetricEdge>,
    #[serde(default)]
    pub legs: Vec<usize>,
}

impl MetricGraph {
    pub fn new(vertices: usize) -> Self {
        MetricGraph {
            vertices,
            edges: Vec::new(),
            legs: Vec::new(),
        }
    }

    pub fn with_edge(mut self, u: usize, v: usize, length: Option<Rat>) -> Self {
        self.edges.push(MetricEdge { u, v, length });
        self
    }

    pub fn with_leg(mut self, v: usize) -> Self {
        self.legs.push(v);
        self
    }

    /// Edge and leg count at `v`; loops count twice.
    pub fn degree(&self, v: usize) -> usize {
        let edges: usize = self
            .edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.v == v) as usize)
            .sum();
        edges + self.legs.iter().filter(|&&l| l == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.vertices];
        for e in &self.edges {
            if e.u >= self.vertices || e.v >= self.vertices {
                return false;
            }
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn total_length(&self) -> Option<Rat> {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }
}

/// Drops the rays (recorded as legs) and measures bounded edges in lattice
/// length.
pub fn skeleton(c: &TropicalCurve) -> Result<MetricGraph> {
    let mut g = MetricGraph::new(c.num_vertices());
    for e in &c.edges {
        let len = lattice_length(&c.vertices[e.u], &c.vertices[e.v])?;
        g.edges.push(MetricEdge {
            u: e.u,
            v: e.v,
            length: Some(len),
        });
    }
    g.legs = c.rays.iter().map(|r| r.base).collect();
    Ok(g)
}

pub fn first_betti(g: &MetricGraph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(g.edges.len() + 1 - g.vertices)
}
