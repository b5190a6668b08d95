//! Helpers and independent oracles shared by the integration tests and the
//! acceptance harness.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropcert::curve::{check_smoothness, validate_embedding, MetricGraph, Ray, TropicalCurve};
use tropcert::fan::component_descriptor;
use tropcert::fixtures;
use tropcert::lattice::{LatticeVector, Rat, RatMatrix, RatVector};
use tropcert::special_fiber::LineWitness;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat<R: Rng>(rng: &mut R) -> Rat {
    let num: i64 = rng.gen_range(-40..=40);
    let den: i64 = rng.gen_range(1..=9);
    Rat::new(num.into(), den.into())
}

pub fn nonzero_rat<R: Rng>(rng: &mut R) -> Rat {
    loop {
        let q = small_rat(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Univariate polynomials over the rationals, low degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Rat>);

impl Poly {
    pub fn one() -> Poly {
        Poly(vec![Rat::one()])
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn pow(&self, e: u64) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Lowest-order nonzero term.
    pub fn lowest(&self) -> Option<(usize, Rat)> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
    }
}

fn small(e: &BigInt) -> i64 {
    i64::try_from(e).expect("small exponent")
}

/// Value of `chi^m` at the point where `line` meets the divisor
/// `{f_k = 0}`, computed by substituting `(s, u) = p + tau q` for a root `p`
/// of `f_k` and the supplied direction `q`, expanding numerator and
/// denominator of the monomial in the chart coordinates, cancelling the
/// common power of `tau` and setting `tau = 0`.
///
/// `basis` is `b_1..b_d, c_{d+1}..c_n` of the component.
pub fn symbolic_limit(
    line: &LineWitness,
    basis: &[LatticeVector],
    k: usize,
    m: &LatticeVector,
    q: (Rat, Rat),
) -> Option<Rat> {
    let d = line.coefficients.cols() - 1;
    let l = &line.coefficients;
    let p = (-l[(1, k)].clone(), l[(0, k)].clone());
    let form = |i: usize| {
        Poly(vec![
            &l[(0, i)] * &p.0 + &l[(1, i)] * &p.1,
            &l[(0, i)] * &q.0 + &l[(1, i)] * &q.1,
        ])
    };
    // chi^m = prod_i (f_i / f_0)^{e_i} * prod_j y_j^{g_j}
    let exps: Vec<i64> = (0..d).map(|i| small(&m.dot(&basis[i]))).collect();
    let e0: i64 = -exps.iter().sum::<i64>();
    let mut num = Poly::one();
    let mut den = Poly::one();
    let all = std::iter::once((0, e0)).chain(exps.iter().enumerate().map(|(i, &e)| (i + 1, e)));
    for (i, e) in all {
        let f = form(i);
        if e >= 0 {
            num = num.mul(&f.pow(e as u64));
        } else {
            den = den.mul(&f.pow((-e) as u64));
        }
    }
    let (on, cn) = num.lowest()?;
    let (od, cd) = den.lowest()?;
    if on != od {
        return None;
    }
    let mut value = cn / cd;
    for (j, y) in line.torus.iter().enumerate() {
        let g = small(&m.dot(&basis[d + j]));
        let yp = (0..g.unsigned_abs()).fold(Rat::one(), |acc, _| acc * y);
        value *= if g >= 0 { yp } else { yp.recip() };
    }
    Some(value)
}

/// All 2x2 minors of a 2-row matrix nonzero.
pub fn minors_nonzero(l: &RatMatrix) -> bool {
    let m = l.cols();
    (0..m).all(|i| {
        (i + 1..m).all(|j| !(&l[(0, i)] * &l[(1, j)] - &l[(0, j)] * &l[(1, i)]).is_zero())
    })
}

/// A random line with all minors nonzero at vertex `v`.
pub fn random_transverse_line<R: Rng>(rng: &mut R, c: &TropicalCurve, v: usize) -> LineWitness {
    let comp = component_descriptor(c, v).expect("smooth vertex");
    let d = comp.d;
    loop {
        let rows = (0..2).map(|_| (0..=d).map(|_| small_rat(rng)).collect()).collect();
        let coefficients = RatMatrix::from_rows(d + 1, rows).unwrap();
        if minors_nonzero(&coefficients) {
            let torus = (0..c.rank - d).map(|_| nonzero_rat(rng)).collect();
            return LineWitness {
                vertex: v,
                coefficients,
                torus,
            };
        }
    }
}

/// Spanning tree from a shuffled Kruskal pass.
pub fn random_spanning_tree<R: Rng>(rng: &mut R, g: &MetricGraph) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..g.vertices).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.shuffle(rng);
    let mut tree = Vec::new();
    for e in order {
        let (a, b) = (find(&mut parent, g.edges[e].u), find(&mut parent, g.edges[e].v));
        if a != b {
            parent[a] = b;
            tree.push(e);
        }
    }
    tree.sort_unstable();
    tree
}

/// `#E - rank_GF(2)(incidence matrix)`.
pub fn gf2_cycle_rank(g: &MetricGraph) -> usize {
    let mut cols: Vec<Vec<bool>> = g
        .edges
        .iter()
        .map(|e| {
            let mut col = vec![false; g.vertices];
            if e.u != e.v {
                col[e.u] = true;
                col[e.v] = true;
            }
            col
        })
        .collect();
    let mut rank = 0;
    for row in 0..g.vertices {
        let Some(p) = (rank..cols.len()).find(|&j| cols[j][row]) else {
            continue;
        };
        cols.swap(rank, p);
        let pivot = cols[rank].clone();
        for col in cols.iter_mut().skip(rank + 1) {
            if col[row] {
                for (x, y) in col.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    g.edges.len() - rank
}

/// Laplace expansion.
pub fn cofactor_det(m: &[Vec<Rat>]) -> Rat {
    match m.len() {
        0 => Rat::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<Rat>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * cofactor_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .fold(Rat::zero(), |a, b| a + b),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest size of a nonzero minor, by enumeration.
pub fn rank_by_minors(m: &RatMatrix) -> usize {
    let top = m.rows().min(m.cols());
    (1..=top)
        .rev()
        .find(|&k| {
            subsets(m.rows(), k).iter().any(|rows| {
                subsets(m.cols(), k).iter().any(|cols| {
                    let sub: Vec<Vec<Rat>> = rows
                        .iter()
                        .map(|&r| cols.iter().map(|&c| m[(r, c)].clone()).collect())
                        .collect();
                    !cofactor_det(&sub).is_zero()
                })
            })
        })
        .unwrap_or(0)
}

/// Random matrix in `GL_n(Z)` from elementary moves.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if i != j => {
                let k = rng.gen_range(-2..=2);
                for col in 0..n {
                    a[i][col] += k * a[j][col];
                }
            }
            1 => a.swap(i, j),
            _ => a[i].iter_mut().for_each(|x| *x = -*x),
        }
    }
    a
}

fn apply_rat(a: &[Vec<i64>], x: &RatVector) -> RatVector {
    RatVector::new(
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(x.coords())
                    .fold(Rat::zero(), |acc, (&k, v)| acc + Rat::from_integer(k.into()) * v)
            })
            .collect(),
    )
}

fn apply_int(a: &[Vec<i64>], x: &LatticeVector) -> LatticeVector {
    LatticeVector::new(
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(x.coords())
                    .fold(BigInt::zero(), |acc, (&k, v)| acc + BigInt::from(k) * v)
            })
            .collect(),
    )
}

/// Image of a curve under `x -> A x + t`.
pub fn transform_curve(c: &TropicalCurve, a: &[Vec<i64>], t: &RatVector) -> TropicalCurve {
    TropicalCurve {
        rank: c.rank,
        vertices: c.vertices.iter().map(|p| apply_rat(a, p).add(t)).collect(),
        edges: c.edges.clone(),
        rays: c
            .rays
            .iter()
            .map(|r| Ray {
                base: r.base,
                direction: apply_int(a, &r.direction),
                weight: r.weight,
            })
            .collect(),
    }
}

/// Valid curves for the fixture batteries: the named fixtures plus a few
/// smooth plane curves of higher genus.
pub fn smooth_battery() -> Vec<(String, TropicalCurve)> {
    let mut out: Vec<(String, TropicalCurve)> = fixtures::named_fixtures()
        .into_iter()
        .map(|(n, c)| (n.to_string(), c))
        .collect();
    let mut r = rng(2024);
    for degree in [3, 4] {
        let c = fixtures::random_smooth_plane_curve(&mut r, degree);
        assert!(check_smoothness(&c).report.passed);
        out.push((format!("smooth_plane_degree_{degree}"), c));
    }
    out
}

/// Random plane curves and tree curves in space.
pub fn random_curves(seed: u64, count: usize) -> Vec<TropicalCurve> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| match i % 4 {
            0 | 1 => {
                let degree = r.gen_range(2..=5);
                fixtures::random_plane_curve(&mut r, degree)
            }
            2 => {
                let degree = r.gen_range(2..=4);
                fixtures::random_smooth_plane_curve(&mut r, degree)
            }
            // growing rays can cross in low dimension; resample until embedded
            _ => loop {
                let n = r.gen_range(2..=4);
                let splits = r.gen_range(0..=6);
                let c = fixtures::random_tree_curve(&mut r, n, splits);
                if validate_embedding(&c).passed {
                    break c;
                }
            },
        })
        .collect()
}

pub fn is_abs_one(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// Rank by textbook elimination over the rationals.
pub fn rank_of(m: &RatMatrix) -> usize {
    let mut rows: Vec<Vec<Rat>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = &row[col] / &pivot[col];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by textbook elimination over the rationals.
pub fn det_of(m: &RatMatrix) -> Rat {
    assert_eq!(m.rows(), m.cols());
    let mut rows: Vec<Vec<Rat>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rat::one();
    for col in 0..rows.len() {
        let Some(p) = (col..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            rows.swap(col, p);
            det = -det;
        }
        let pivot = rows[col].clone();
        det *= &pivot[col];
        for row in rows.iter_mut().skip(col + 1) {
            let f = &row[col] / &pivot[col];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Smooth plane curve, possibly lifted into space along a random plane.
pub fn smooth_curve(seed: u64) -> TropicalCurve {
    let mut r = rng(seed);
    let degree = r.gen_range(1..=4);
    let c = fixtures::random_smooth_plane_curve(&mut r, degree);
    match seed % 3 {
        0 => c,
        _ => fixtures::embed_plane_curve(&c, &[r.gen_range(-2..=2), r.gen_range(-2..=2)]),
    }
}
