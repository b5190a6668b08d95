//! Explicit rational witness for the nodal special fiber `C_0`.
//!
//! Over a smooth vertex `v` with directions `u_0 = -(b_1 + ... + b_d)`,
//! `b_1, ..., b_d` and completion `c_{d+1}, ..., c_n`, the component is
//! `P^d x G_m^{n-d}`. A point is given by homogeneous coordinates
//! `(f_0 : ... : f_d)` and torus coordinates `y_j = chi^{c_j^*}`; the chart
//! coordinates are `x_i = chi^{b_i^*} = f_i / f_0`. The divisor of the
//! incidence with hyperplane index `k` is `{f_k = 0}`.
//!
//! A character `m` of the divisor (`<m, u_k> = 0`) takes the value
//! `prod_{i != k} f_i^{<m, u_i>} * prod_j y_j^{<m, c_j>}` there. Both
//! endpoints of a bounded edge evaluate the same characters of `M_e`, so
//! node values need no transport between the two sides.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{first_betti, smooth_star, skeleton, Incidence, MetricGraph, SmoothStar, TropicalCurve};
use crate::error::{Error, Result};
use crate::fan::{component_descriptor, divisor_basis, orthogonal_lattice, ComponentDescriptor};
use crate::lattice::{
    dual_basis, rat_pow, solve_monomial_system, solve_rational, IntMatrix, LatticeVector, Rat,
    RatMatrix,
};

/// Resamples of the free coefficients allowed per vertex.
pub const RETRIES_PER_VERTEX: usize = 64;
/// Full restarts with a fresh random stream.
pub const RESTARTS: u64 = 16;

/// A line in `P^d` (column `i` of `coefficients` is the linear form `f_i`
/// in the parameters `(s : u)`) together with a torus point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineWitness {
    pub vertex: usize,
    pub coefficients: RatMatrix,
    #[serde(with = "crate::json::vec_rat")]
    pub torus: Vec<Rat>,
}

impl LineWitness {
    pub fn d(&self) -> usize {
        self.coefficients.cols().saturating_sub(1)
    }

    /// `f_i` at the parameter `(s, u)`.
    pub fn form(&self, i: usize, s: &Rat, u: &Rat) -> Rat {
        &self.coefficients[(0, i)] * s + &self.coefficients[(1, i)] * u
    }

    /// First pair of columns with a vanishing 2x2 minor.
    pub fn degenerate_pair(&self) -> Option<(usize, usize)> {
        let l = &self.coefficients;
        let m = l.cols();
        (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .find(|&(i, j)| (&l[(0, i)] * &l[(1, j)] - &l[(0, j)] * &l[(1, i)]).is_zero())
    }

    pub fn is_transverse(&self) -> bool {
        self.coefficients.rows() == 2 && self.degenerate_pair().is_none()
    }
}

/// Values of the divisor characters of a bounded edge at its node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeAssignment {
    pub edge: usize,
    /// Lower endpoint, whose chart fixes the convention.
    pub side: usize,
    pub other: usize,
    #[serde(with = "crate::json::vec_rat")]
    pub values: Vec<Rat>,
}

/// Where the component of `vertex` meets the divisor of `ray`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub ray: usize,
    pub vertex: usize,
    pub hyperplane: usize,
    pub characters: Vec<LatticeVector>,
    #[serde(with = "crate::json::vec_rat")]
    pub values: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C0Witness {
    pub seed: u64,
    pub restarts: u64,
    pub order: Vec<usize>,
    pub lines: Vec<LineWitness>,
    pub nodes: Vec<NodeAssignment>,
    pub marked_points: Vec<MarkedPoint>,
}

/// Characters of the divisor of `inc` at `v`: `divisor_basis` for bounded
/// edges, the Hermite basis of `u^perp` for rays.
pub fn divisor_characters(c: &TropicalCurve, inc: Incidence) -> Result<Vec<LatticeVector>> {
    match inc {
        Incidence::Edge(e) => Ok(divisor_basis(c, e)?.basis),
        Incidence::Ray(r) => orthogonal_lattice(&crate::lattice::primitive_int(&c.rays[r].direction)?),
    }
}

struct Chart {
    star: SmoothStar,
    comp: ComponentDescriptor,
    /// `b_1^*, ..., b_d^*, c_{d+1}^*, ..., c_n^*`.
    dual: Vec<LatticeVector>,
}

impl Chart {
    fn new(c: &TropicalCurve, v: usize) -> Result<Chart> {
        let star = smooth_star(c, v).map_err(|_| Error::NotSmoothVertex(v))?;
        let comp = component_descriptor(c, v)?;
        let dual = dual_basis(&comp.basis, c.rank)?;
        Ok(Chart { star, comp, dual })
    }

    fn hyperplane(&self, inc: Incidence) -> Result<usize> {
        self.star.hyperplane_index(inc).ok_or(Error::IndexOutOfRange {
            what: "incidence at vertex",
            index: self.star.vertex,
        })
    }
}

fn check_shape(line: &LineWitness, chart: &Chart, n: usize) -> Result<()> {
    let d = chart.star.d;
    if line.coefficients.rows() != 2 || line.coefficients.cols() != d + 1 || line.torus.len() != n - d {
        return Err(Error::Malformed(format!(
            "line of vertex {} has the wrong shape",
            line.vertex
        )));
    }
    Ok(())
}

/// Leading term `(order, coefficient)` of `f_i(p + tau q)`.
fn leading(line: &LineWitness, i: usize, p: &(Rat, Rat), q: &(Rat, Rat)) -> Option<(i64, Rat)> {
    let at_p = line.form(i, &p.0, &p.1);
    if !at_p.is_zero() {
        return Some((0, at_p));
    }
    let at_q = line.form(i, &q.0, &q.1);
    (!at_q.is_zero()).then_some((1, at_q))
}

fn evaluate_with(
    line: &LineWitness,
    chart: &Chart,
    inc: Incidence,
    characters: &[LatticeVector],
) -> Result<Vec<Rat>> {
    let k = chart.hyperplane(inc)?;
    let d = chart.star.d;
    let (a, b) = (&line.coefficients[(0, k)], &line.coefficients[(1, k)]);
    if a.is_zero() && b.is_zero() {
        return Err(Error::NotTransverse(format!("{inc:?}")));
    }
    // f_k vanishes at p; q is off the divisor
    let p = (-b.clone(), a.clone());
    let q = (a.clone(), b.clone());
    let mut lead = Vec::with_capacity(d + 1);
    for i in 0..=d {
        match leading(line, i, &p, &q) {
            Some(t) if i == k || t.0 == 0 => lead.push(t),
            _ => return Err(Error::NotTransverse(format!("{inc:?}"))),
        }
    }
    // chart coordinates x_i = f_i / f_0
    let x: Vec<(i64, Rat)> = (1..=d)
        .map(|i| (lead[i].0 - lead[0].0, &lead[i].1 / &lead[0].1))
        .collect();
    let mut out = Vec::with_capacity(characters.len());
    for m in characters {
        let mut order = 0i64;
        let mut value = Rat::one();
        for (i, (ord, coeff)) in x.iter().enumerate() {
            let e = m.dot(&chart.comp.basis[i]);
            order += ord * i64::try_from(&e).expect("small exponent");
            value *= rat_pow(coeff, &e);
        }
        for (j, y) in line.torus.iter().enumerate() {
            value *= rat_pow(y, &m.dot(&chart.comp.basis[d + j]));
        }
        if order != 0 {
            return Err(Error::Malformed(format!("{m} is not a character of the divisor")));
        }
        out.push(value);
    }
    Ok(out)
}

/// Values of the divisor characters of `inc` at the point where the line
/// meets that divisor, by cancelling vanishing orders of chart coordinates
/// along a local parameter.
pub fn evaluate_at_divisor(line: &LineWitness, c: &TropicalCurve, inc: Incidence) -> Result<Vec<Rat>> {
    let chart = Chart::new(c, line.vertex)?;
    check_shape(line, &chart, c.rank)?;
    evaluate_with(line, &chart, inc, &divisor_characters(c, inc)?)
}

/// Values of arbitrary characters `m` with `<m, u_inc> = 0`.
pub fn evaluate_characters(
    line: &LineWitness,
    c: &TropicalCurve,
    inc: Incidence,
    characters: &[LatticeVector],
) -> Result<Vec<Rat>> {
    let chart = Chart::new(c, line.vertex)?;
    check_shape(line, &chart, c.rank)?;
    evaluate_with(line, &chart, inc, characters)
}

fn sample<R: Rng>(rng: &mut R) -> Rat {
    let num: i64 = rng.gen_range(1..=997);
    let den: i64 = rng.gen_range(1..=997);
    let r = Rat::new(num.into(), den.into());
    if rng.gen_bool(0.5) {
        -r
    } else {
        r
    }
}

/// A prescribed point of a component, on the divisor with hyperplane `k`.
struct Target {
    point: Vec<Rat>,
    torus: Vec<Rat>,
}

/// Converts node values on `divisor_basis(e)` into homogeneous and torus
/// coordinates in the chart of `chart`.
fn target_point(
    chart: &Chart,
    n: usize,
    k: usize,
    characters: &[LatticeVector],
    values: &[Rat],
) -> Result<Target> {
    let d = chart.star.d;
    let r = if k != 0 { 0 } else { 1 };
    // basis {u_l : l != r} + {c_j}; its dual gives f_l / f_r and y_j
    let mut basis: Vec<LatticeVector> = (0..=d)
        .filter(|&l| l != r)
        .map(|l| chart.star.directions[l].clone())
        .collect();
    basis.extend(chart.comp.completion().iter().cloned());
    let dual = dual_basis(&basis, n)?;
    let cols = RatMatrix::from_rows(
        characters.len(),
        (0..n)
            .map(|i| characters.iter().map(|m| Rat::from_integer(m[i].clone())).collect())
            .collect(),
    )?;
    let value_of = |m: &LatticeVector| -> Result<Rat> {
        let coeffs = solve_rational(&cols, m.to_rat().coords())
            .filter(|x| x.iter().all(|q| q.is_integer()))
            .ok_or_else(|| Error::Malformed(format!("{m} is not in the divisor lattice")))?;
        Ok(coeffs
            .iter()
            .zip(values)
            .fold(Rat::one(), |acc, (e, v)| acc * rat_pow(v, &e.to_integer())))
    };
    let mut point = vec![Rat::zero(); d + 1];
    point[r] = Rat::one();
    let others: Vec<usize> = (0..=d).filter(|&l| l != r).collect();
    for (pos, &l) in others.iter().enumerate() {
        if l != k {
            point[l] = value_of(&dual[pos])?;
        }
    }
    let torus = dual[d..]
        .iter()
        .map(value_of)
        .collect::<Result<Vec<_>>>()?;
    Ok(Target { point, torus })
}

fn check_order(c: &TropicalCurve, order: &[usize]) -> Result<Vec<usize>> {
    let nv = c.num_vertices();
    let mut pos = vec![usize::MAX; nv];
    for (i, &v) in order.iter().enumerate() {
        if v >= nv || pos[v] != usize::MAX {
            return Err(Error::Malformed("ordering is not a permutation of the vertices".into()));
        }
        pos[v] = i;
    }
    if order.len() != nv {
        return Err(Error::Malformed("ordering is not a permutation of the vertices".into()));
    }
    let adj = c.neighbor_sets();
    for &v in order {
        let earlier = adj[v].iter().filter(|&&w| pos[w] < pos[v]).count();
        if earlier > 2 {
            return Err(Error::ColoringViolation { vertex: v, earlier });
        }
    }
    Ok(pos)
}

/// Builds lines vertex by vertex in `order`: each line passes through the
/// nodes already fixed by earlier neighbors and is otherwise random. Torus
/// coordinates that two prescribed nodes disagree on are reconciled
/// afterwards by translating components.
pub fn construct_witness(c: &TropicalCurve, order: &[usize], seed: u64) -> Result<C0Witness> {
    let pos = check_order(c, order)?;
    let charts: Vec<Chart> = (0..c.num_vertices())
        .map(|v| Chart::new(c, v))
        .collect::<Result<_>>()?;
    let characters: Vec<Vec<LatticeVector>> = (0..c.edges.len())
        .map(|e| divisor_basis(c, e).map(|b| b.basis))
        .collect::<Result<_>>()?;
    let mut last_stuck = order.first().copied().unwrap_or(0);
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart);
        match attempt(c, order, &pos, &charts, &characters, &mut rng) {
            Ok((lines, nodes)) => {
                let marked_points = marked_points(c, &charts, &lines)?;
                return Ok(C0Witness {
                    seed,
                    restarts: restart,
                    order: order.to_vec(),
                    lines,
                    nodes,
                    marked_points,
                });
            }
            Err(Error::ExhaustedRetries { vertex }) => last_stuck = vertex,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ExhaustedRetries { vertex: last_stuck })
}

type Attempt = (Vec<LineWitness>, Vec<NodeAssignment>);

fn attempt(
    c: &TropicalCurve,
    order: &[usize],
    pos: &[usize],
    charts: &[Chart],
    characters: &[Vec<LatticeVector>],
    rng: &mut ChaCha8Rng,
) -> Result<Attempt> {
    let n = c.rank;
    // untranslated lines, translations, and node values of the earlier
    // endpoint's untranslated line
    let mut lines: Vec<Option<LineWitness>> = vec![None; c.num_vertices()];
    let mut shifts: Vec<Vec<Rat>> = vec![Vec::new(); c.num_vertices()];
    let mut fixed: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
    // connected pieces of the part built so far
    let mut piece: Vec<usize> = (0..c.num_vertices()).collect();

    for &w in order {
        let chart = &charts[w];
        let d = chart.star.d;
        let mut earlier = Vec::new();
        for &inc in &chart.star.incidences {
            let Incidence::Edge(e) = inc else { continue };
            let edge = &c.edges[e];
            let other = if edge.u == w { edge.v } else { edge.u };
            if pos[other] < pos[w] {
                earlier.push((e, other, chart.hyperplane(inc)?));
            }
        }
        // translation taking a free line onto the node recorded on edge e
        let follow = |line: &LineWitness, e: usize, p: usize, shifts: &[Vec<Rat>]| -> Result<Vec<Rat>> {
            let own = evaluate_with(line, chart, Incidence::Edge(e), &characters[e])?;
            let ratios: Vec<Rat> = fixed[&e].iter().zip(&own).map(|(a, b)| a / b).collect();
            let s = edge_translation(c, e, &characters[e], &ratios)?;
            Ok(shifts[p].iter().zip(&s).map(|(a, b)| a * b).collect())
        };
        let (line, shift) = match earlier[..] {
            [] => (random_line(w, chart, n, rng)?, vec![Rat::one(); n]),
            [(e, p, _)] => {
                let line = random_line(w, chart, n, rng)?;
                let shift = follow(&line, e, p, &shifts)?;
                (line, shift)
            }
            [(e1, p1, _), (e2, p2, _)] if piece[p1] != piece[p2] => {
                // no cycle closes here: move the second piece instead
                let line = random_line(w, chart, n, rng)?;
                let shift = follow(&line, e1, p1, &shifts)?;
                let wanted = follow(&line, e2, p2, &shifts)?;
                let g: Vec<Rat> = shift
                    .iter()
                    .zip(&wanted)
                    .zip(&shifts[p2])
                    .map(|((a, b), c)| a / b * c)
                    .collect();
                let old = piece[p2];
                for v in 0..c.num_vertices() {
                    if piece[v] == old && lines[v].is_some() {
                        shifts[v] = shifts[v].iter().zip(&g).map(|(a, b)| a * b).collect();
                    }
                }
                (line, shift)
            }
            [(e1, p1, k1), (e2, p2, k2)] => {
                // relative to the first neighbor's translation the first node
                // is as recorded and the second picks up the holonomy
                let holonomy: Vec<Rat> = shifts[p2].iter().zip(&shifts[p1]).map(|(a, b)| a / b).collect();
                let second: Vec<Rat> = fixed[&e2]
                    .iter()
                    .zip(&characters[e2])
                    .map(|(v, m)| v * eval_torus(&holonomy, m))
                    .collect();
                let t1 = target_point(chart, n, k1, &characters[e1], &fixed[&e1])?;
                let t2 = target_point(chart, n, k2, &characters[e2], &second)?;
                let line = LineWitness {
                    vertex: w,
                    coefficients: RatMatrix::from_rows(d + 1, vec![t1.point, t2.point])?,
                    torus: t1.torus,
                };
                if !line.is_transverse() || line.torus.iter().any(Zero::is_zero) {
                    return Err(Error::ExhaustedRetries { vertex: w });
                }
                (line, shifts[p1].clone())
            }
            _ => {
                return Err(Error::ColoringViolation {
                    vertex: w,
                    earlier: earlier.len(),
                })
            }
        };
        for &(_, p, _) in &earlier {
            let old = piece[p];
            for x in piece.iter_mut() {
                if *x == old {
                    *x = w;
                }
            }
        }
        piece[w] = w;
        for &inc in &chart.star.incidences {
            let Incidence::Edge(e) = inc else { continue };
            let edge = &c.edges[e];
            let other = if edge.u == w { edge.v } else { edge.u };
            if pos[other] > pos[w] {
                fixed.insert(e, evaluate_with(&line, chart, inc, &characters[e])?);
            }
        }
        lines[w] = Some(line);
        shifts[w] = shift;
    }
    let mut lines: Vec<LineWitness> = lines
        .into_iter()
        .zip(&shifts)
        .zip(charts)
        .map(|((l, t), chart)| translate_line(l.expect("every vertex visited"), chart, t))
        .collect();

    let mismatched = (0..c.edges.len()).any(|e| {
        let (lo, hi) = c.oriented_endpoints(e);
        let inc = Incidence::Edge(e);
        evaluate_with(&lines[lo], &charts[lo], inc, &characters[e]).ok()
            != evaluate_with(&lines[hi], &charts[hi], inc, &characters[e]).ok()
    });
    if mismatched {
        reconcile_torus(c, charts, characters, &mut lines)?;
    }

    let mut nodes = Vec::with_capacity(c.edges.len());
    for (e, chars) in characters.iter().enumerate() {
        let (lo, hi) = c.oriented_endpoints(e);
        let values = evaluate_with(&lines[lo], &charts[lo], Incidence::Edge(e), chars)?;
        nodes.push(NodeAssignment {
            edge: e,
            side: lo,
            other: hi,
            values,
        });
    }
    Ok((lines, nodes))
}

fn random_line(w: usize, chart: &Chart, n: usize, rng: &mut ChaCha8Rng) -> Result<LineWitness> {
    let d = chart.star.d;
    for _ in 0..RETRIES_PER_VERTEX {
        let rows = (0..2).map(|_| (0..=d).map(|_| sample(rng)).collect()).collect();
        let line = LineWitness {
            vertex: w,
            coefficients: RatMatrix::from_rows(d + 1, rows)?,
            torus: (0..n - d).map(|_| sample(rng)).collect(),
        };
        if line.is_transverse() {
            return Ok(line);
        }
    }
    Err(Error::ExhaustedRetries { vertex: w })
}

/// Moves a line by the torus element `t`: `x_i -> t(b_i^*) x_i` and
/// `y_j -> t(c_j^*) y_j`, which multiplies every character value `chi^m` by
/// `t(m)`.
fn translate_line(mut line: LineWitness, chart: &Chart, t: &[Rat]) -> LineWitness {
    let d = chart.star.d;
    if t.iter().all(One::is_one) {
        return line;
    }
    for i in 1..=d {
        let s = eval_torus(t, &chart.dual[i - 1]);
        for r in 0..2 {
            line.coefficients[(r, i)] = &line.coefficients[(r, i)] * &s;
        }
    }
    for (j, y) in line.torus.iter_mut().enumerate() {
        *y = &*y * eval_torus(t, &chart.dual[d + j]);
    }
    line
}

/// Finds torus translations `t_v` with `t_hi(m) / t_lo(m) = node_lo(m) /
/// node_hi(m)` on every edge and applies them. Translations are first
/// propagated along a spanning tree, which keeps exponents small; only if a
/// closing edge still disagrees is the whole system solved at once.
fn reconcile_torus(
    c: &TropicalCurve,
    charts: &[Chart],
    characters: &[Vec<LatticeVector>],
    lines: &mut [LineWitness],
) -> Result<()> {
    let n = c.rank;
    let mut ratios = Vec::with_capacity(c.edges.len());
    for (e, chars) in characters.iter().enumerate() {
        let (lo, hi) = c.oriented_endpoints(e);
        let inc = Incidence::Edge(e);
        let from_lo = evaluate_with(&lines[lo], &charts[lo], inc, chars)?;
        let from_hi = evaluate_with(&lines[hi], &charts[hi], inc, chars)?;
        ratios.push(from_lo.iter().zip(&from_hi).map(|(a, b)| a / b).collect::<Vec<Rat>>());
    }
    let t = match propagate(c, characters, &ratios)? {
        Some(t) => t,
        None => solve_globally(c, characters, &ratios)?,
    };
    for (v, line) in lines.iter_mut().enumerate() {
        *line = translate_line(line.clone(), &charts[v], &t[v * n..(v + 1) * n]);
    }
    Ok(())
}

/// `t(m) = prod_i t_i^{m_i}`.
fn eval_torus(t: &[Rat], m: &LatticeVector) -> Rat {
    t.iter()
        .zip(m.coords())
        .fold(Rat::one(), |acc, (ti, mi)| acc * rat_pow(ti, mi))
}

/// Breadth-first propagation `t_child = t_parent * s_e`, where `s_e` takes
/// the prescribed ratios on `M_e` and is trivial on a complement. Returns
/// `None` if a closing edge disagrees.
fn propagate(
    c: &TropicalCurve,
    characters: &[Vec<LatticeVector>],
    ratios: &[Vec<Rat>],
) -> Result<Option<Vec<Rat>>> {
    let n = c.rank;
    let nv = c.num_vertices();
    let mut t: Vec<Option<Vec<Rat>>> = vec![None; nv];
    let mut incident = vec![Vec::new(); nv];
    for (e, edge) in c.edges.iter().enumerate() {
        incident[edge.u].push(e);
        incident[edge.v].push(e);
    }
    let mut tree_edge = vec![false; c.edges.len()];
    for root in 0..nv {
        if t[root].is_some() {
            continue;
        }
        t[root] = Some(vec![Rat::one(); n]);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &e in &incident[x] {
                let (lo, hi) = c.oriented_endpoints(e);
                let y = if lo == x { hi } else { lo };
                if t[y].is_some() {
                    continue;
                }
                tree_edge[e] = true;
                let s = edge_translation(c, e, &characters[e], &ratios[e])?;
                let tx = t[x].as_ref().expect("visited");
                // s is t_hi / t_lo
                let ty = tx
                    .iter()
                    .zip(&s)
                    .map(|(a, b)| if y == hi { a * b } else { a / b })
                    .collect();
                t[y] = Some(ty);
                queue.push_back(y);
            }
        }
    }
    let t: Vec<Vec<Rat>> = t.into_iter().map(|x| x.expect("all visited")).collect();
    for (e, chars) in characters.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let (lo, hi) = c.oriented_endpoints(e);
        for (m, r) in chars.iter().zip(&ratios[e]) {
            if eval_torus(&t[hi], m) / eval_torus(&t[lo], m) != *r {
                return Ok(None);
            }
        }
    }
    Ok(Some(t.concat()))
}

/// Torus point `s` with `s(m_j) = ratios_j` on the divisor characters and
/// `s(m') = 1` on a partner with `<m', u_e> = 1`.
fn edge_translation(
    c: &TropicalCurve,
    e: usize,
    characters: &[LatticeVector],
    ratios: &[Rat],
) -> Result<Vec<Rat>> {
    let n = c.rank;
    let u = c.edge_direction(e)?;
    let partner = dual_basis(&crate::lattice::hermite_completion(std::slice::from_ref(&u), n)?, n)?
        .swap_remove(0);
    let mut rows: Vec<Vec<Rat>> = characters
        .iter()
        .map(|m| m.coords().iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    rows.push(partner.coords().iter().map(|x| Rat::from_integer(x.clone())).collect());
    let w = RatMatrix::from_rows(n, rows)?;
    let a = crate::lattice::inverse_rational(&w).ok_or(Error::FrameNotBasis)?;
    let mut values = ratios.to_vec();
    values.push(Rat::one());
    // e_i = sum_j a_ij w_j
    Ok((0..n)
        .map(|i| {
            (0..n).fold(Rat::one(), |acc, j| acc * rat_pow(&values[j], &a[(i, j)].to_integer()))
        })
        .collect())
}

fn solve_globally(
    c: &TropicalCurve,
    characters: &[Vec<LatticeVector>],
    ratios: &[Vec<Rat>],
) -> Result<Vec<Rat>> {
    let n = c.rank;
    let unknowns = c.num_vertices() * n;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (e, chars) in characters.iter().enumerate() {
        let (lo, hi) = c.oriented_endpoints(e);
        for (m, r) in chars.iter().zip(&ratios[e]) {
            let mut row = vec![BigInt::zero(); unknowns];
            for i in 0..n {
                row[hi * n + i] += &m[i];
                row[lo * n + i] -= &m[i];
            }
            rows.push(row);
            rhs.push(r.clone());
        }
    }
    let a = IntMatrix::from_rows(unknowns, rows)?;
    solve_monomial_system(&a, &rhs).ok_or(Error::ExhaustedRetries {
        vertex: c.num_vertices().saturating_sub(1),
    })
}

fn marked_points(c: &TropicalCurve, charts: &[Chart], lines: &[LineWitness]) -> Result<Vec<MarkedPoint>> {
    c.rays
        .iter()
        .enumerate()
        .map(|(r, ray)| {
            let inc = Incidence::Ray(r);
            let chart = &charts[ray.base];
            let characters = divisor_characters(c, inc)?;
            let values = evaluate_with(&lines[ray.base], chart, inc, &characters)?;
            Ok(MarkedPoint {
                ray: r,
                vertex: ray.base,
                hyperplane: chart.hyperplane(inc)?,
                characters,
                values,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum WitnessIssue {
    MissingLine { vertex: usize },
    Shape { vertex: usize, detail: String },
    ZeroMinor { vertex: usize, columns: (usize, usize) },
    ZeroTorus { vertex: usize },
    ZeroNodeValue { edge: usize },
    NodeMismatch { edge: usize, from_vertex: usize },
    Evaluation { edge: Option<usize>, ray: Option<usize>, detail: String },
    DualGraphMismatch,
    MarkedPointCount { expected: usize, found: usize },
    MarkedPointMismatch { ray: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub ok: bool,
    pub issues: Vec<WitnessIssue>,
}

/// Checks transversality, node agreement from both endpoints, the dual
/// graph and the marked points.
pub fn verify_witness(c: &TropicalCurve, w: &C0Witness) -> WitnessReport {
    let mut issues = Vec::new();
    let mut charts: Vec<Option<Chart>> = Vec::with_capacity(c.num_vertices());
    for v in 0..c.num_vertices() {
        let chart = Chart::new(c, v).ok();
        if chart.is_none() {
            issues.push(WitnessIssue::Shape {
                vertex: v,
                detail: "vertex is not smooth".into(),
            });
        }
        charts.push(chart);
    }
    let mut line_of: Vec<Option<&LineWitness>> = vec![None; c.num_vertices()];
    for line in &w.lines {
        if let Some(slot) = line_of.get_mut(line.vertex) {
            *slot = Some(line);
        }
    }
    for v in 0..c.num_vertices() {
        let (Some(line), Some(chart)) = (line_of[v], &charts[v]) else {
            if line_of[v].is_none() {
                issues.push(WitnessIssue::MissingLine { vertex: v });
            }
            continue;
        };
        if let Err(e) = check_shape(line, chart, c.rank) {
            issues.push(WitnessIssue::Shape {
                vertex: v,
                detail: e.to_string(),
            });
            line_of[v] = None;
            continue;
        }
        if let Some(columns) = line.degenerate_pair() {
            issues.push(WitnessIssue::ZeroMinor { vertex: v, columns });
        }
        if line.torus.iter().any(Zero::is_zero) {
            issues.push(WitnessIssue::ZeroTorus { vertex: v });
        }
    }

    for node in &w.nodes {
        let e = node.edge;
        if e >= c.edges.len() {
            issues.push(WitnessIssue::DualGraphMismatch);
            continue;
        }
        if node.values.iter().any(Zero::is_zero) {
            issues.push(WitnessIssue::ZeroNodeValue { edge: e });
        }
        let (lo, hi) = c.oriented_endpoints(e);
        let characters = match divisor_basis(c, e) {
            Ok(b) => b.basis,
            Err(err) => {
                issues.push(WitnessIssue::Evaluation {
                    edge: Some(e),
                    ray: None,
                    detail: err.to_string(),
                });
                continue;
            }
        };
        for v in [lo, hi] {
            let (Some(line), Some(chart)) = (line_of[v], &charts[v]) else {
                continue;
            };
            match evaluate_with(line, chart, Incidence::Edge(e), &characters) {
                Ok(values) if values == node.values => {}
                Ok(_) => issues.push(WitnessIssue::NodeMismatch { edge: e, from_vertex: v }),
                Err(err) => issues.push(WitnessIssue::Evaluation {
                    edge: Some(e),
                    ray: None,
                    detail: err.to_string(),
                }),
            }
        }
    }

    let dual = dual_graph(w);
    let same_graph = skeleton(c).is_ok_and(|g| {
        g.vertices == dual.vertices
            && g.edges.len() == dual.edges.len()
            && w.nodes.iter().enumerate().all(|(i, node)| {
                node.edge == i && {
                    let (lo, hi) = c.oriented_endpoints(i);
                    (node.side, node.other) == (lo, hi)
                }
            })
    });
    if !same_graph {
        issues.push(WitnessIssue::DualGraphMismatch);
    }

    if w.marked_points.len() != c.rays.len() {
        issues.push(WitnessIssue::MarkedPointCount {
            expected: c.rays.len(),
            found: w.marked_points.len(),
        });
    }
    for mp in &w.marked_points {
        let r = mp.ray;
        let Some(ray) = c.rays.get(r) else {
            issues.push(WitnessIssue::MarkedPointMismatch { ray: r });
            continue;
        };
        let (Some(line), Some(chart)) = (line_of[ray.base], &charts[ray.base]) else {
            continue;
        };
        match evaluate_with(line, chart, Incidence::Ray(r), &mp.characters) {
            Ok(values) if values == mp.values && mp.vertex == ray.base => {}
            Ok(_) => issues.push(WitnessIssue::MarkedPointMismatch { ray: r }),
            Err(err) => issues.push(WitnessIssue::Evaluation {
                edge: None,
                ray: Some(r),
                detail: err.to_string(),
            }),
        }
    }

    WitnessReport {
        ok: issues.is_empty(),
        issues,
    }
}

/// Components as vertices, nodes as edges.
pub fn dual_graph(w: &C0Witness) -> MetricGraph {
    let mut g = MetricGraph::new(w.lines.len());
    for node in &w.nodes {
        g = g.with_edge(node.side, node.other, None);
    }
    g
}

/// `#nodes - #components + 1`; every component is rational.
pub fn arithmetic_genus(w: &C0Witness) -> Result<usize> {
    first_betti(&dual_graph(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::three_coloring_order;
    use crate::fixtures;
    use crate::lattice::rat;

    fn witness(c: &TropicalCurve, seed: u64) -> C0Witness {
        let order = three_coloring_order(c).unwrap();
        construct_witness(c, &order, seed).unwrap()
    }

    fn line(vertex: usize, rows: [&[i64]; 2], torus: &[i64]) -> LineWitness {
        let r = |x: &[i64]| x.iter().map(|&v| rat(v, 1)).collect::<Vec<_>>();
        LineWitness {
            vertex,
            coefficients: RatMatrix::from_rows(rows[0].len(), vec![r(rows[0]), r(rows[1])]).unwrap(),
            torus: r(torus),
        }
    }

    #[test]
    fn hexagon_witness() {
        let c = fixtures::hexagon();
        let w = witness(&c, 0);
        assert_eq!(w.lines.len(), 6);
        assert!(w.lines.iter().all(|l| l.d() == 2 && l.is_transverse()));
        assert_eq!(w.nodes.len(), 6);
        assert_eq!(w.marked_points.len(), 6);
        let report = verify_witness(&c, &w);
        assert!(report.ok, "{:?}", report.issues);
        assert_eq!(arithmetic_genus(&w).unwrap(), 1);
        let g = dual_graph(&w);
        assert_eq!((g.vertices, g.edges.len()), (6, 6));
    }

    #[test]
    fn line_and_two_vertex_witnesses() {
        let c = fixtures::tropical_line();
        let w = witness(&c, 3);
        assert_eq!((w.lines.len(), w.nodes.len(), w.marked_points.len()), (1, 0, 3));
        assert!(verify_witness(&c, &w).ok);
        assert_eq!(arithmetic_genus(&w).unwrap(), 0);

        let c = fixtures::two_vertex();
        let w = witness(&c, 3);
        assert_eq!(w.nodes.len(), 1);
        assert!(verify_witness(&c, &w).ok);
        // the later line is free and moved onto the node by a translation
        let from = |v: usize| evaluate_at_divisor(&w.lines[v], &c, Incidence::Edge(0)).unwrap();
        assert_eq!(from(0), from(1));
        assert_eq!(dual_graph(&w).edges.len(), 1);
    }

    #[test]
    fn evaluation_on_a_fixed_line() {
        // line (f0, f1, f2) = (s, u, s + u) at the tropical line's vertex;
        // directions u0 = (1,0), b1 = (0,1), b2 = (-1,-1)
        let c = fixtures::tropical_line();
        let star = smooth_star(&c, 0).unwrap();
        assert_eq!(star.directions[1], LatticeVector::from_i64(&[0, 1]));
        let l = line(0, [&[1, 0, 1], &[0, 1, 1]], &[]);
        // divisor of b1 is f1 = 0, reached at (s:u) = (1:0); the character
        // (1,0) pairs with (u0, b1, b2) as (1, 0, -1): value f0 / f2 = 1
        let v = evaluate_at_divisor(&l, &c, Incidence::Ray(1)).unwrap();
        assert_eq!(v, vec![rat(1, 1)]);
        // divisor of u0 at (0:1): character (0,1) pairs as (0, 1, -1): f1/f2 = 1
        let v = evaluate_at_divisor(&l, &c, Incidence::Ray(0)).unwrap();
        assert_eq!(v, vec![rat(1, 1)]);
        // divisor of b2 = (-1,-1): f2 = 0 at (1:-1); character (1,-1) pairs
        // as (1, -1, 0): f0 / f1 = 1 / -1
        let v = evaluate_at_divisor(&l, &c, Incidence::Ray(2)).unwrap();
        assert_eq!(v, vec![rat(-1, 1)]);
    }

    #[test]
    fn closed_form_agrees_with_leading_coefficients() {
        // direct product prod_{i != k} f_i(p)^{<m,u_i>} at the root p
        let c = fixtures::tropical_line();
        let star = smooth_star(&c, 0).unwrap();
        let l = line(0, [&[3, -2, 5], &[7, 4, -1]], &[]);
        for (k, &inc) in star.incidences.iter().enumerate() {
            let chars = divisor_characters(&c, inc).unwrap();
            let (a, b) = (l.coefficients[(0, k)].clone(), l.coefficients[(1, k)].clone());
            let (s, u) = (-b, a);
            let expected: Vec<Rat> = chars
                .iter()
                .map(|m| {
                    (0..3)
                        .filter(|&i| i != k)
                        .fold(Rat::one(), |acc, i| acc * rat_pow(&l.form(i, &s, &u), &m.dot(&star.directions[i])))
                })
                .collect();
            assert_eq!(evaluate_at_divisor(&l, &c, inc).unwrap(), expected);
        }
    }

    #[test]
    fn degenerate_d_equals_n_equals_one() {
        let c = TropicalCurve::new(1, vec![crate::lattice::RatVector::from_i64(&[0])])
            .with_ray(0, &[1])
            .with_ray(0, &[-1]);
        let l = line(0, [&[1, 0], &[0, 1]], &[]);
        assert_eq!(evaluate_at_divisor(&l, &c, Incidence::Ray(0)).unwrap(), Vec::<Rat>::new());
    }

    #[test]
    fn non_transverse_lines_are_rejected() {
        let c = fixtures::tropical_line();
        let l = line(0, [&[1, 1, 1], &[0, 0, 1]], &[]);
        assert!(matches!(
            evaluate_at_divisor(&l, &c, Incidence::Ray(0)),
            Err(Error::NotTransverse(_))
        ));
        assert_eq!(l.degenerate_pair(), Some((0, 1)));
    }

    #[test]
    fn faults_are_reported() {
        let c = fixtures::hexagon();
        let w = witness(&c, 1);
        let mut bad = w.clone();
        bad.nodes[2].values[0] += Rat::one();
        let report = verify_witness(&c, &bad);
        assert!(!report.ok);
        assert!(report
            .issues
            .iter()
            .all(|i| matches!(i, WitnessIssue::NodeMismatch { edge: 2, .. })));

        let mut rep = w.clone();
        let col0 = (rep.lines[0].coefficients[(0, 0)].clone(), rep.lines[0].coefficients[(1, 0)].clone());
        rep.lines[0].coefficients[(0, 1)] = col0.0;
        rep.lines[0].coefficients[(1, 1)] = col0.1;
        let report = verify_witness(&c, &rep);
        assert!(report
            .issues
            .iter()
            .any(|i| matches!(i, WitnessIssue::ZeroMinor { vertex: 0, .. })));

        let mut fewer = w;
        fewer.marked_points.pop();
        assert!(verify_witness(&c, &fewer)
            .issues
            .contains(&WitnessIssue::MarkedPointCount { expected: 6, found: 5 }));
    }

    #[test]
    fn ordering_violations() {
        let c = fixtures::hexagon();
        assert!(matches!(
            construct_witness(&c, &[0, 1, 2], 0),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn witnesses_in_space_reconcile_the_torus() {
        for (name, c) in fixtures::named_fixtures() {
            for seed in 0..5 {
                let w = witness(&c, seed);
                let report = verify_witness(&c, &w);
                assert!(report.ok, "{name} seed {seed}: {:?}", report.issues);
                assert_eq!(
                    arithmetic_genus(&w).unwrap(),
                    first_betti(&skeleton(&c).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let c = fixtures::hexagon_pair();
        let a = witness(&c, 9);
        let b = witness(&c, 9);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_ne!(a, witness(&c, 10));
    }
}
