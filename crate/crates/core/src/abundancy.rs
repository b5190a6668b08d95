//! Cycle bases of the skeleton and the abundancy map.
//!
//! The abundancy map sends edge lengths `(l_e)` to the linear functional
//! `c -> sum_e l_e a_e(c) ebar_e` on the cycle space. A curve is
//! non-superabundant when this map is onto `Hom(H_1, Q^n)`.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{skeleton, MetricGraph, TropicalCurve};
use crate::error::{Error, Result};
use crate::lattice::{
    bareiss_pivots, determinant, determinant_rational, IntMatrix, LatticeVector, Rat, RatMatrix,
    RatVector,
};

/// Deterministic spanning tree: breadth-first from vertex 0, scanning the
/// incident edges of each dequeued vertex in index order.
pub fn spanning_tree(g: &MetricGraph) -> Result<Vec<usize>> {
    if g.vertices == 0 {
        return Err(Error::Disconnected);
    }
    let mut incident = vec![Vec::new(); g.vertices];
    for (i, e) in g.edges.iter().enumerate() {
        if e.u >= g.vertices || e.v >= g.vertices {
            return Err(Error::IndexOutOfRange {
                what: "graph vertex",
                index: e.u.max(e.v),
            });
        }
        incident[e.u].push(i);
        if e.v != e.u {
            incident[e.v].push(i);
        }
    }
    let mut seen = vec![false; g.vertices];
    let mut tree = Vec::with_capacity(g.vertices - 1);
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &i in &incident[x] {
            let e = &g.edges[i];
            let y = if e.u == x { e.v } else { e.u };
            if !seen[y] {
                seen[y] = true;
                tree.push(i);
                queue.push_back(y);
            }
        }
    }
    if tree.len() + 1 != g.vertices {
        return Err(Error::Disconnected);
    }
    tree.sort_unstable();
    Ok(tree)
}

/// Fundamental cycles of a spanning tree, with coefficients relative to the
/// recorded edge orientations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBasis {
    pub num_vertices: usize,
    pub tree: Vec<usize>,
    pub non_tree: Vec<usize>,
    /// `(tail, head)` per edge.
    pub orientations: Vec<(usize, usize)>,
    /// One coefficient vector per non-tree edge.
    pub cycles: Vec<Vec<i8>>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.orientations.len()
    }

    /// Reverses the recorded orientation of edge `e`; the cycles, as
    /// homology classes, are unchanged.
    pub fn flip_edge(&mut self, e: usize) {
        let (t, h) = self.orientations[e];
        self.orientations[e] = (h, t);
        for c in &mut self.cycles {
            c[e] = -c[e];
        }
    }

    /// Edges that occur in exactly one basis cycle, namely `cycle`.
    pub fn private_edges(&self, cycle: usize) -> Vec<usize> {
        (0..self.num_edges())
            .filter(|&e| {
                self.cycles[cycle][e] != 0
                    && self
                        .cycles
                        .iter()
                        .enumerate()
                        .all(|(k, c)| k == cycle || c[e] == 0)
            })
            .collect()
    }
}

/// One fundamental cycle per non-tree edge `eps`, traversing `eps` from its
/// lower to its higher endpoint and returning through the tree.
pub fn cycle_basis(g: &MetricGraph, tree: &[usize]) -> Result<CycleBasis> {
    let nv = g.vertices;
    let ne = g.edges.len();
    let mut in_tree = vec![false; ne];
    for &t in tree {
        if t >= ne || in_tree[t] {
            return Err(Error::NotSpanningTree);
        }
        in_tree[t] = true;
    }
    if nv == 0 || tree.len() + 1 != nv {
        return Err(Error::NotSpanningTree);
    }
    // root the tree at 0: parent edge and depth per vertex
    let mut adj = vec![Vec::new(); nv];
    for &t in tree {
        let e = &g.edges[t];
        if e.u == e.v || e.u >= nv || e.v >= nv {
            return Err(Error::NotSpanningTree);
        }
        adj[e.u].push((e.v, t));
        adj[e.v].push((e.u, t));
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut depth = vec![usize::MAX; nv];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &(y, t) in &adj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = Some((x, t));
                queue.push_back(y);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::NotSpanningTree);
    }

    let orientations: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|e| (e.u.min(e.v), e.u.max(e.v)))
        .collect();
    let sign = |edge: usize, from: usize| -> i8 {
        if orientations[edge].0 == from {
            1
        } else {
            -1
        }
    };

    let non_tree: Vec<usize> = (0..ne).filter(|&e| !in_tree[e]).collect();
    let mut cycles = Vec::with_capacity(non_tree.len());
    for &eps in &non_tree {
        let (lo, hi) = orientations[eps];
        let mut a = vec![0i8; ne];
        a[eps] = 1;
        // walk hi -> lo: climb from both ends to their common ancestor
        let (mut x, mut y) = (hi, lo);
        let mut down = Vec::new();
        while x != y {
            if depth[x] >= depth[y] {
                let (p, t) = parent[x].expect("non-root");
                a[t] += sign(t, x);
                x = p;
            } else {
                let (p, t) = parent[y].expect("non-root");
                down.push((t, p));
                y = p;
            }
        }
        // edges on the lower side are traversed parent -> child
        for (t, p) in down {
            a[t] += sign(t, p);
        }
        cycles.push(a);
    }
    Ok(CycleBasis {
        num_vertices: nv,
        tree: tree.to_vec(),
        non_tree,
        orientations,
        cycles,
    })
}

/// Matrix of the abundancy map: `b1 * n` rows in blocks of `n` per cycle,
/// one column per bounded edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbundancyMatrix {
    pub rank_n: usize,
    pub orientations: Vec<(usize, usize)>,
    pub matrix: RatMatrix,
}

impl AbundancyMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Image of edge lengths `l` under the abundancy map.
    pub fn apply(&self, l: &[Rat]) -> Vec<Rat> {
        (0..self.rows())
            .map(|i| {
                self.matrix
                    .row(i)
                    .iter()
                    .zip(l)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }
}

fn check_graph(c: &TropicalCurve, basis: &CycleBasis) -> Result<()> {
    if basis.num_vertices != c.num_vertices() || basis.num_edges() != c.edges.len() {
        return Err(Error::GraphMismatch);
    }
    for (e, &(t, h)) in c.edges.iter().zip(&basis.orientations) {
        if !((e.u, e.v) == (t, h) || (e.u, e.v) == (h, t)) {
            return Err(Error::GraphMismatch);
        }
    }
    Ok(())
}

/// Raw displacement `head - tail` of each edge in the basis' orientation.
pub fn edge_vectors(c: &TropicalCurve, basis: &CycleBasis) -> Result<Vec<RatVector>> {
    check_graph(c, basis)?;
    Ok(basis
        .orientations
        .iter()
        .map(|&(t, h)| c.vertices[h].sub(&c.vertices[t]))
        .collect())
}

pub fn abundancy_matrix(c: &TropicalCurve, basis: &CycleBasis) -> Result<AbundancyMatrix> {
    let ebar = edge_vectors(c, basis)?;
    let n = c.rank;
    let mut m = RatMatrix::zeros(basis.len() * n, c.edges.len());
    for (k, cycle) in basis.cycles.iter().enumerate() {
        for (e, &a) in cycle.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = Rat::from_integer(a.into());
            for i in 0..n {
                m[(k * n + i, e)] = &a * &ebar[e][i];
            }
        }
    }
    Ok(AbundancyMatrix {
        rank_n: n,
        orientations: basis.orientations.clone(),
        matrix: m,
    })
}

/// Square minor of full row rank: all rows against the listed columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(with = "crate::json::rat")]
    pub determinant: Rat,
}

impl RankWitness {
    /// Recomputes the minor's determinant from `m`, independently of the
    /// stored value.
    pub fn recheck(&self, m: &RatMatrix) -> Result<Rat> {
        determinant_rational(&m.select(&self.rows, &self.cols))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonSuperabundance {
    pub surjective: bool,
    pub rank: usize,
    pub required: usize,
    pub kernel_dim: usize,
    pub expected_dim: i64,
    pub witness: Option<RankWitness>,
}

/// Rank analysis of a given abundancy matrix.
pub fn analyze(m: &AbundancyMatrix) -> Result<NonSuperabundance> {
    // scaling rows clears denominators without moving pivot columns
    let ints: IntMatrix = m.matrix.clear_denominators();
    let (rank, pivots) = bareiss_pivots(&ints);
    let required = m.rows();
    let surjective = rank == required;
    let witness = if surjective {
        let rows: Vec<usize> = (0..required).collect();
        let det = determinant_rational(&m.matrix.select(&rows, &pivots))?;
        Some(RankWitness {
            rows,
            cols: pivots,
            determinant: det,
        })
    } else {
        None
    };
    Ok(NonSuperabundance {
        surjective,
        rank,
        required,
        kernel_dim: m.cols() - rank,
        expected_dim: m.cols() as i64 - required as i64,
        witness,
    })
}

/// Builds the skeleton, its breadth-first spanning tree, the fundamental
/// cycle basis and the abundancy matrix, and decides surjectivity.
pub fn check_non_superabundant(c: &TropicalCurve) -> Result<(AbundancyMatrix, NonSuperabundance)> {
    let basis = default_basis(c)?;
    let m = abundancy_matrix(c, &basis)?;
    let verdict = analyze(&m)?;
    Ok((m, verdict))
}

pub fn default_basis(c: &TropicalCurve) -> Result<CycleBasis> {
    let g = skeleton(c)?;
    let tree = spanning_tree(&g)?;
    cycle_basis(&g, &tree)
}

/// Evidence for one (cycle, frame vector) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdmyWitness {
    pub cycle: usize,
    pub frame_index: usize,
    pub edge: Option<usize>,
    /// Edge lengths mapped to `v_i` in block `cycle` and zero elsewhere.
    #[serde(with = "crate::json::vec_rat", default)]
    pub preimage: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdmyReport {
    pub holds: bool,
    pub witnesses: Vec<CdmyWitness>,
}

/// Sufficient condition for surjectivity: every basis cycle contains, for
/// every frame vector, an edge private to that cycle and parallel to it.
pub fn cdmy_condition(
    c: &TropicalCurve,
    basis: &CycleBasis,
    frame: &[LatticeVector],
) -> Result<CdmyReport> {
    let n = c.rank;
    if frame.len() != n || frame.iter().any(|v| v.dim() != n) {
        return Err(Error::FrameNotBasis);
    }
    let det = determinant(&IntMatrix::from_lattice_rows(n, frame)?)?;
    if !det.abs().is_one() {
        return Err(Error::FrameNotBasis);
    }
    let ebar = edge_vectors(c, basis)?;
    let mut witnesses = Vec::new();
    for k in 0..basis.len() {
        let private = basis.private_edges(k);
        for (i, v) in frame.iter().enumerate() {
            let found = private
                .iter()
                .find_map(|&e| parallel_ratio(&ebar[e], v).map(|ratio| (e, ratio)));
            let (edge, preimage) = match found {
                Some((e, ratio)) => {
                    let a = Rat::from_integer(basis.cycles[k][e].into());
                    let mut l = vec![Rat::zero(); c.edges.len()];
                    l[e] = (a * ratio).recip();
                    (Some(e), l)
                }
                None => (None, Vec::new()),
            };
            witnesses.push(CdmyWitness {
                cycle: k,
                frame_index: i,
                edge,
                preimage,
            });
        }
    }
    Ok(CdmyReport {
        holds: witnesses.iter().all(|w| w.edge.is_some()),
        witnesses,
    })
}

/// `k` with `e = k v`, if any.
fn parallel_ratio(e: &RatVector, v: &LatticeVector) -> Option<Rat> {
    let j = v.coords().iter().position(|x| !x.is_zero())?;
    let k = &e[j] / Rat::from_integer(v[j].clone());
    if k.is_zero() {
        return None;
    }
    (v.to_rat().scale(&k) == *e).then_some(k)
}

/// `f_{k,i}`: the frame vector `v_i` in block `k`, zero elsewhere.
pub fn target_functional(rank_n: usize, cycles: usize, k: usize, v: &LatticeVector) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); rank_n * cycles];
    for j in 0..rank_n {
        out[k * rank_n + j] = Rat::from_integer(v[j].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::first_betti;
    use crate::fixtures;
    use crate::lattice::{int, rank_rational};

    fn col(m: &RatMatrix, j: usize) -> Vec<Rat> {
        m.column(j)
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_integer(x.into())).collect()
    }

    #[test]
    fn hexagon_tree_and_cycle() {
        let c = fixtures::hexagon();
        let g = skeleton(&c).unwrap();
        let tree = spanning_tree(&g).unwrap();
        assert_eq!(tree, vec![0, 1, 2, 3, 4]);
        let basis = cycle_basis(&g, &tree).unwrap();
        assert_eq!(basis.non_tree, vec![5]);
        assert_eq!(basis.cycles, vec![vec![1, 1, -1, 1, 1, 1]]);
    }

    #[test]
    fn hexagon_columns_follow_the_cycle() {
        let c = fixtures::hexagon();
        let (m, verdict) = check_non_superabundant(&c).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 6));
        let expected = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];
        for (j, e) in expected.iter().enumerate() {
            assert_eq!(col(&m.matrix, j), ints(e), "column {j}");
        }
        assert!(verdict.surjective);
        assert_eq!((verdict.rank, verdict.required, verdict.kernel_dim, verdict.expected_dim), (2, 2, 4, 4));
        let w = verdict.witness.unwrap();
        assert!(!w.determinant.is_zero());
        assert_eq!(w.recheck(&m.matrix).unwrap(), w.determinant);
    }

    #[test]
    fn hexagon_in_space_is_superabundant() {
        let (m, verdict) = check_non_superabundant(&fixtures::hexagon_in_space()).unwrap();
        assert_eq!(m.rows(), 3);
        assert!(m.matrix.row(2).iter().all(Zero::is_zero));
        assert!(!verdict.surjective);
        assert_eq!((verdict.rank, verdict.required), (2, 3));
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn genus_zero_is_vacuous() {
        for c in [fixtures::tropical_line(), fixtures::two_vertex()] {
            let (m, verdict) = check_non_superabundant(&c).unwrap();
            assert_eq!(m.rows(), 0);
            assert!(verdict.surjective);
            assert_eq!(verdict.kernel_dim, c.edges.len());
            let basis = default_basis(&c).unwrap();
            let frame: Vec<_> = (0..2).map(|i| LatticeVector::unit(2, i)).collect();
            assert!(cdmy_condition(&c, &basis, &frame).unwrap().holds);
        }
    }

    #[test]
    fn tree_and_theta_graphs() {
        let tree = MetricGraph::new(3).with_edge(0, 1, None).with_edge(1, 2, None);
        let t = spanning_tree(&tree).unwrap();
        assert_eq!(t, vec![0, 1]);
        assert!(cycle_basis(&tree, &t).unwrap().is_empty());

        let theta = MetricGraph::new(2)
            .with_edge(0, 1, None)
            .with_edge(0, 1, None)
            .with_edge(0, 1, None);
        let t = spanning_tree(&theta).unwrap();
        assert_eq!(t, vec![0]);
        let b = cycle_basis(&theta, &t).unwrap();
        assert_eq!(b.cycles, vec![vec![-1, 1, 0], vec![-1, 0, 1]]);
    }

    #[test]
    fn bad_trees_are_rejected() {
        let g = skeleton(&fixtures::hexagon()).unwrap();
        assert_eq!(cycle_basis(&g, &[0, 1, 2, 3]), Err(Error::NotSpanningTree));
        assert_eq!(cycle_basis(&g, &[0, 0, 1, 2, 3]), Err(Error::NotSpanningTree));
        let theta = MetricGraph::new(2).with_edge(0, 1, None).with_edge(0, 1, None);
        assert_eq!(cycle_basis(&theta, &[0, 1]), Err(Error::NotSpanningTree));
        assert_eq!(spanning_tree(&MetricGraph::new(2)), Err(Error::Disconnected));
    }

    #[test]
    fn graph_mismatch() {
        let basis = default_basis(&fixtures::hexagon()).unwrap();
        assert_eq!(
            abundancy_matrix(&fixtures::two_vertex(), &basis),
            Err(Error::GraphMismatch)
        );
    }

    #[test]
    fn cdmy_examples() {
        let c = fixtures::hexagon();
        let basis = default_basis(&c).unwrap();
        let frame = [LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[0, 1])];
        let report = cdmy_condition(&c, &basis, &frame).unwrap();
        assert!(report.holds);
        // first edge parallel to (1,0) is e0, to (0,1) is e2 (traversed backwards)
        assert_eq!(report.witnesses[0].edge, Some(0));
        assert_eq!(report.witnesses[1].edge, Some(2));
        let m = abundancy_matrix(&c, &basis).unwrap();
        for (w, v) in report.witnesses.iter().zip(&frame) {
            assert_eq!(m.apply(&w.preimage), target_functional(2, 1, 0, v));
        }

        let s = fixtures::hexagon_in_space();
        let basis = default_basis(&s).unwrap();
        let frame: Vec<_> = (0..3).map(|i| LatticeVector::unit(3, i)).collect();
        let report = cdmy_condition(&s, &basis, &frame).unwrap();
        assert!(!report.holds);
        assert_eq!(report.witnesses[2].edge, None);

        let bad = [LatticeVector::from_i64(&[1, 1]), LatticeVector::from_i64(&[1, -1])];
        assert_eq!(
            cdmy_condition(&c, &default_basis(&c).unwrap(), &bad),
            Err(Error::FrameNotBasis)
        );
    }

    #[test]
    fn cdmy_uses_lattice_length_ratio() {
        // the two-length edge of a stretched hexagon needs l = 1/2
        let mut c = fixtures::hexagon();
        for p in &mut c.vertices {
            *p = p.scale(&Rat::from_integer(int(2)));
        }
        let basis = default_basis(&c).unwrap();
        let frame = [LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[0, 1])];
        let report = cdmy_condition(&c, &basis, &frame).unwrap();
        assert_eq!(report.witnesses[0].preimage[0], crate::lattice::rat(1, 2));
        assert_eq!(report.witnesses[1].preimage[2], crate::lattice::rat(1, 2));
    }

    #[test]
    fn hexagon_pair_has_two_cycles() {
        let c = fixtures::hexagon_pair();
        let basis = default_basis(&c).unwrap();
        assert_eq!(basis.len(), first_betti(&skeleton(&c).unwrap()).unwrap());
        assert_eq!(basis.len(), 2);
        let (m, verdict) = check_non_superabundant(&c).unwrap();
        assert_eq!(rank_rational(&m.matrix), verdict.rank);
        assert!(verdict.surjective);
    }
}
