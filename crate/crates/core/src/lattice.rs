//! Exact integer and rational lattice linear algebra.
//!
//! Everything here works over arbitrary-precision integers; there is no
//! floating point anywhere in the crate's decision procedures.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Integer point of the lattice `Z^n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector(self.0.iter().map(rat_int).collect())
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Point of `Q^n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RatVector(coords.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn zero(n: usize) -> Self {
        RatVector(vec![Rat::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Least common multiple of all coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }
}

impl Index<usize> for RatVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major matrix over a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<Rat>;

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_lattice_rows(cols: usize, rows: &[LatticeVector]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| r.coords().to_vec()).collect())
    }

    pub fn to_rat(&self) -> RatMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(rat_int).collect(),
        }
    }

    // row ops, mirrored on a companion matrix when given

    fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for j in 0..self.cols {
            let delta = &self[(source, j)] * k;
            self[(target, j)] += delta;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for i in 0..self.rows {
            let delta = &self[(i, source)] * k;
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -&self[(i, j)];
            self[(i, j)] = x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = -&self[(i, j)];
            self[(i, j)] = x;
        }
    }
}

impl RatMatrix {
    pub fn from_rat_rows(cols: usize, rows: &[RatVector]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| r.coords().to_vec()).collect())
    }

    /// Scales every row by the lcm of its denominators.
    pub fn clear_denominators(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            data.extend(row.iter().map(|c| (c * rat_int(&l)).to_integer()));
        }
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Splits a nonzero rational vector as `scale * u` with `u` primitive integral
/// and `scale > 0`.
pub fn primitive_vector(v: &RatVector) -> Result<(LatticeVector, Rat)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let l = v.denominator_lcm();
    let ints: Vec<BigInt> = v
        .coords()
        .iter()
        .map(|c| (c * rat_int(&l)).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let u = LatticeVector(ints.iter().map(|c| c / &g).collect());
    Ok((u, Rat::new(g, l)))
}

pub fn primitive_int(v: &LatticeVector) -> Result<LatticeVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.content();
    Ok(LatticeVector(v.coords().iter().map(|c| c / &g).collect()))
}

/// Lattice length of the segment from `p` to `q`.
pub fn lattice_length(p: &RatVector, q: &RatVector) -> Result<Rat> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    primitive_vector(&q.sub(p)).map(|(_, s)| s)
}

/// Smith decomposition `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal with `d[0] | d[1] | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn min_abs_nonzero<'a>(
    cells: impl Iterator<Item = ((usize, usize), &'a BigInt)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (pos, x) in cells {
        if x.is_zero() {
            continue;
        }
        let a = x.abs();
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some((pos, a));
        }
    }
    best.map(|(p, _)| p)
}

pub fn smith_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let cells = (t..m).flat_map(|i| (t..n).map(move |j| (i, j)));
        let Some((pi, pj)) = min_abs_nonzero(cells.map(|p| (p, &d[p]))) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut residue = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                residue |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                residue |= !d[(t, j)].is_zero();
            }
            if residue {
                let column = (t..m).map(|i| ((i, t), &d[(i, t)]));
                let row = (t + 1..n).map(|j| ((t, j), &d[(t, j)]));
                let (pi, pj) = min_abs_nonzero(column.chain(row)).expect("pivot exists");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let pivot = d[(t, t)].clone();
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&p| !d[p].is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Invariant factors of `a`, zero-padded to `min(rows, cols)`.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    smith_form(a).diagonal()
}

/// Fraction-free (Bareiss) row echelon pass. Returns the rank and the pivot
/// columns, which index a maximal set of independent columns.
pub fn bareiss_pivots(a: &IntMatrix) -> (usize, Vec<usize>) {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !w[(i, c)].is_zero()) else {
            continue;
        };
        w.swap_rows(r, p);
        for i in r + 1..m {
            for j in c + 1..n {
                let x = (&w[(r, c)] * &w[(i, j)] - &w[(i, c)] * &w[(r, j)]) / &prev;
                w[(i, j)] = x;
            }
            w[(i, c)] = BigInt::zero();
        }
        prev = w[(r, c)].clone();
        pivots.push(c);
        r += 1;
    }
    (r, pivots)
}

/// Rank over Q, computed by fraction-free elimination.
pub fn rank_rational(a: &RatMatrix) -> usize {
    bareiss_pivots(&a.clear_denominators()).0
}

pub fn rank_int(a: &IntMatrix) -> usize {
    bareiss_pivots(a).0
}

/// Determinant by Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut w = a.clone();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !w[(i, k)].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k {
            w.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = (&w[(k, k)] * &w[(i, j)] - &w[(i, k)] * &w[(k, j)]) / &prev;
                w[(i, j)] = x;
            }
        }
        prev = w[(k, k)].clone();
    }
    Ok(sign * &w[(n - 1, n - 1)])
}

pub fn determinant_rational(a: &RatMatrix) -> Result<Rat> {
    let mut scale = BigInt::one();
    for i in 0..a.rows() {
        scale *= a.row(i).iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    }
    let det = determinant(&a.clear_denominators())?;
    Ok(Rat::new(det, scale))
}

fn check_dims(vectors: &[LatticeVector], n: usize) -> Result<()> {
    if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    if vectors.len() > n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: vectors.len(),
        });
    }
    Ok(())
}

/// True iff the vectors span a saturated rank-`d` sublattice of `Z^n`, i.e.
/// they can be completed to a basis of `Z^n`.
pub fn extends_to_unimodular_basis(vectors: &[LatticeVector], n: usize) -> Result<bool> {
    check_dims(vectors, n)?;
    if vectors.is_empty() {
        return Ok(true);
    }
    let a = IntMatrix::from_lattice_rows(n, vectors)?;
    Ok(smith_invariants(&a).iter().all(One::is_one))
}

/// Completes a saturated family to a basis of `Z^n`, keeping the inputs as the
/// leading members.
///
/// Column-style Hermite reduction: pivots are the smallest nonzero absolute
/// value in the active row, ties broken by lowest column index. The appended
/// vectors are the trailing rows of the inverse of the accumulated column
/// transform, so the output is a pure function of the input.
pub fn hermite_completion(vectors: &[LatticeVector], n: usize) -> Result<Vec<LatticeVector>> {
    check_dims(vectors, n)?;
    let d = vectors.len();
    let mut a = IntMatrix::from_lattice_rows(n, vectors)?;
    // `w` tracks the inverse of the column transform: a_original = a * w.
    let mut w = IntMatrix::identity(n);

    for i in 0..d {
        loop {
            let cells = (i..n).map(|j| ((i, j), &a[(i, j)]));
            let Some((_, pj)) = min_abs_nonzero(cells) else {
                return Err(Error::NotSaturated);
            };
            if pj != i {
                a.swap_cols(i, pj);
                w.swap_rows(i, pj);
            }
            let mut done = true;
            for j in i + 1..n {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let q = a[(i, j)].div_floor(&a[(i, i)]);
                // col_j -= q col_i  <=>  row_i of w += q row_j
                a.add_col_multiple(j, i, &-&q);
                w.add_row_multiple(i, j, &q);
                done &= a[(i, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if a[(i, i)].is_negative() {
            a.negate_col(i);
            w.negate_row(i);
        }
        if !a[(i, i)].is_one() {
            return Err(Error::NotSaturated);
        }
    }

    let mut out = vectors.to_vec();
    for r in d..n {
        out.push(LatticeVector(w.row(r).to_vec()));
    }
    Ok(out)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon,
/// positive pivots, entries above a pivot reduced into `[0, pivot)`. Zero rows
/// are dropped.
pub fn row_hermite_form(rows: &[LatticeVector], n: usize) -> Result<Vec<LatticeVector>> {
    if let Some(v) = rows.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    let mut a = IntMatrix::from_lattice_rows(n, rows)?;
    let m = a.rows();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let cells = (r..m).map(|i| ((i, c), &a[(i, c)]));
            let Some((pi, _)) = min_abs_nonzero(cells) else {
                break;
            };
            a.swap_rows(r, pi);
            let mut done = true;
            for i in r + 1..m {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = -a[(i, c)].div_floor(&a[(r, c)]);
                a.add_row_multiple(i, r, &q);
                done &= a[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = -a[(i, c)].div_floor(&a[(r, c)]);
            a.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    Ok((0..r).map(|i| LatticeVector(a.row(i).to_vec())).collect())
}

/// Gauss-Jordan inverse over Q. `None` when singular.
pub fn inverse_rational(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.rows();
    if n != a.cols() {
        return None;
    }
    let mut w = a.clone();
    let mut inv = RatMatrix::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&i| !w[(i, c)].is_zero())?;
        w.swap_rows(c, p);
        inv.swap_rows(c, p);
        let piv = w[(c, c)].clone();
        for j in 0..n {
            w[(c, j)] = &w[(c, j)] / &piv;
            inv[(c, j)] = &inv[(c, j)] / &piv;
        }
        for i in 0..n {
            if i == c || w[(i, c)].is_zero() {
                continue;
            }
            let f = w[(i, c)].clone();
            for j in 0..n {
                let x = &w[(c, j)] * &f;
                w[(i, j)] -= x;
                let y = &inv[(c, j)] * &f;
                inv[(i, j)] -= y;
            }
        }
    }
    Some(inv)
}

/// Dual basis of a `Z`-basis of `Z^n`: `out[i] . basis[j] = delta_ij`.
pub fn dual_basis(basis: &[LatticeVector], n: usize) -> Result<Vec<LatticeVector>> {
    if basis.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: basis.len(),
        });
    }
    check_dims(basis, n)?;
    // columns = basis vectors; rows of the inverse are the dual vectors
    let b = IntMatrix::from_lattice_rows(n, basis)?.transpose().to_rat();
    let inv = inverse_rational(&b).ok_or(Error::NotSaturated)?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for c in inv.row(i) {
            if !c.is_integer() {
                return Err(Error::NotSaturated);
            }
            row.push(c.to_integer());
        }
        out.push(LatticeVector(row));
    }
    Ok(out)
}

/// Reduced row echelon form over Q; returns the pivot columns.
fn rref(a: &mut RatMatrix) -> Vec<usize> {
    let (m, n) = (a.rows(), a.cols());
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let piv = a[(r, c)].clone();
        for j in c..n {
            a[(r, j)] = &a[(r, j)] / &piv;
        }
        for i in 0..m {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..n {
                let x = &a[(r, j)] * &f;
                a[(i, j)] -= x;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// One solution of `a x = b` over Q, or `None` if inconsistent.
pub fn solve_rational(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len());
    let (m, n) = (a.rows(), a.cols());
    let mut aug = RatMatrix::zeros(m, n + 1);
    for i in 0..m {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, n)].clone();
    }
    Some(x)
}

/// Basis of the right kernel of `a` over Q.
pub fn kernel_rational(a: &RatMatrix) -> Vec<RatVector> {
    let n = a.cols();
    let mut w = a.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -w[(r, f)].clone();
            }
            RatVector(v)
        })
        .collect()
}

/// Exact `k`-th root of a rational, if it exists in Q.
pub fn rational_root(x: &Rat, k: u32) -> Option<Rat> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(x.clone());
    }
    if x.is_negative() && k % 2 == 0 {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(k);
        (r.pow(k) == n.abs()).then(|| if n.is_negative() { -r } else { r })
    };
    Some(Rat::new(root(x.numer())?, root(x.denom())?))
}

/// `x^e` for a possibly negative integer exponent; `x` must be nonzero when
/// `e < 0`.
pub fn rat_pow(x: &Rat, e: &BigInt) -> Rat {
    let mag: u32 = e
        .abs()
        .try_into()
        .expect("exponent fits in u32 for exact powering");
    let p = Rat::new(x.numer().pow(mag), x.denom().pow(mag));
    if e.is_negative() {
        p.recip()
    } else {
        p
    }
}

/// Solves the multiplicative system `prod_j x_j^{a_ij} = h_i` over `Q^*`.
///
/// With `u a v = d` in Smith form, `x = z^v` turns the system into
/// `z_r^{d_r} = prod_s h_s^{u_rs}`, which needs exact rational roots and a
/// trivial right-hand side on the zero rows of `d`. Returns `None` when no
/// rational solution exists this way.
pub fn solve_monomial_system(a: &IntMatrix, h: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), h.len());
    if h.iter().any(Zero::is_zero) {
        return None;
    }
    let smith = smith_form(a);
    let (m, n) = (a.rows(), a.cols());
    let diag = smith.diagonal();
    let mut z = vec![Rat::one(); n];
    for r in 0..m {
        let hr = (0..m).fold(Rat::one(), |acc, s| acc * rat_pow(&h[s], &smith.u[(r, s)]));
        match diag.get(r).filter(|d| !d.is_zero()) {
            Some(d) => z[r] = rational_root(&hr, d.try_into().ok()?)?,
            None if hr.is_one() => {}
            None => return None,
        }
    }
    let x: Vec<Rat> = (0..n)
        .map(|i| (0..n).fold(Rat::one(), |acc, j| acc * rat_pow(&z[j], &smith.v[(i, j)])))
        .collect();
    let ok = (0..m).all(|i| (0..n).fold(Rat::one(), |acc, j| acc * rat_pow(&x[j], &a[(i, j)])) == h[i]);
    ok.then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    fn rv(c: &[(i64, i64)]) -> RatVector {
        RatVector::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn primitive_vector_examples() {
        assert_eq!(
            primitive_vector(&RatVector::from_i64(&[2, 4])).unwrap(),
            (lv(&[1, 2]), rat(2, 1))
        );
        assert_eq!(
            primitive_vector(&rv(&[(1, 2), (1, 2)])).unwrap(),
            (lv(&[1, 1]), rat(1, 2))
        );
        assert_eq!(
            primitive_vector(&RatVector::from_i64(&[0, -3, 6])).unwrap(),
            (lv(&[0, -1, 2]), rat(3, 1))
        );
        assert_eq!(
            primitive_vector(&RatVector::zero(3)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn primitive_vector_matches_divisor_search() {
        // brute force: largest k dividing every coordinate
        let v = [0i64, -3, 6];
        let k = (1..=6).filter(|k| v.iter().all(|c| c % k == 0)).max().unwrap();
        let (u, s) = primitive_vector(&RatVector::from_i64(&v)).unwrap();
        assert_eq!(s, rat(k, 1));
        assert_eq!(u, lv(&[0, -3 / k, 6 / k]));
    }

    #[test]
    fn lattice_length_examples() {
        let o = RatVector::zero(2);
        assert_eq!(
            lattice_length(&o, &RatVector::from_i64(&[1, 0])).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            lattice_length(&o, &RatVector::from_i64(&[2, 4])).unwrap(),
            rat(2, 1)
        );
        assert_eq!(
            lattice_length(&o, &rv(&[(1, 2), (1, 2)])).unwrap(),
            rat(1, 2)
        );
        assert_eq!(lattice_length(&o, &o), Err(Error::ZeroVector));
    }

    #[test]
    fn lattice_length_by_bisection_over_multiples() {
        // largest l with (1/2,1/2) = l * integer vector, searched over l = p/q
        let target = rv(&[(1, 2), (1, 2)]);
        let mut best = Rat::zero();
        for q in 1..=8i64 {
            for p in 1..=8i64 {
                let l = rat(p, q);
                let w = target.scale(&l.recip());
                if w.coords().iter().all(|c| c.is_integer()) && l > best {
                    best = l;
                }
            }
        }
        assert_eq!(best, rat(1, 2));
        assert_eq!(lattice_length(&RatVector::zero(2), &target).unwrap(), best);
    }

    #[test]
    fn smith_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        let id = IntMatrix::identity(2);
        assert_eq!(smith_invariants(&id), ints(&[1, 1]));
        let a = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]).unwrap();
        assert_eq!(smith_invariants(&a), ints(&[1, 6]));
        let b = IntMatrix::from_i64(2, 2, &[1, 1, 1, 1]).unwrap();
        assert_eq!(smith_invariants(&b), ints(&[1, 0]));
        let c = IntMatrix::from_i64(2, 3, &[0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(smith_invariants(&c), ints(&[0, 0]));
    }

    #[test]
    fn smith_transforms_reproduce_diagonal() {
        let a = IntMatrix::from_i64(3, 4, &[2, 4, 4, 6, -6, 6, 12, 0, 10, -4, -16, 8]).unwrap();
        let s = smith_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(determinant(&s.u).unwrap().abs(), int(1));
        assert_eq!(determinant(&s.v).unwrap().abs(), int(1));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn unimodular_extension_examples() {
        assert!(extends_to_unimodular_basis(&[lv(&[1, 0]), lv(&[0, 1])], 2).unwrap());
        assert!(!extends_to_unimodular_basis(&[lv(&[1, 1]), lv(&[1, -1])], 2).unwrap());
        assert!(extends_to_unimodular_basis(&[lv(&[1, 0, 0]), lv(&[0, 1, 0])], 3).unwrap());
        assert!(matches!(
            extends_to_unimodular_basis(&[lv(&[1]), lv(&[2])], 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unimodular_extension_agrees_with_span_search() {
        // a d = n family extends iff both unit vectors are integer combinations
        let spans_units = |a: [i64; 2], b: [i64; 2]| {
            let hits = |t: [i64; 2]| {
                (-6..=6i64).any(|x| (-6..=6i64).any(|y| [x * a[0] + y * b[0], x * a[1] + y * b[1]] == t))
            };
            hits([1, 0]) && hits([0, 1])
        };
        for (a, b) in [([1, 1], [1, -1]), ([1, 0], [0, 1]), ([2, 1], [1, 1]), ([3, 1], [1, 1])] {
            let fast = extends_to_unimodular_basis(&[lv(&a), lv(&b)], 2).unwrap();
            assert_eq!(fast, spans_units(a, b), "{a:?} {b:?}");
        }
    }

    #[test]
    fn hermite_completion_examples() {
        assert_eq!(
            hermite_completion(&[lv(&[1, 0])], 2).unwrap(),
            vec![lv(&[1, 0]), lv(&[0, 1])]
        );
        let c = hermite_completion(&[lv(&[1, 1])], 2).unwrap();
        assert_eq!(c, vec![lv(&[1, 1]), lv(&[0, 1])]);
        assert_eq!(
            hermite_completion(&[lv(&[1, 0, 0]), lv(&[0, 1, 0])], 3).unwrap(),
            vec![lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]
        );
        assert_eq!(
            hermite_completion(&[lv(&[2, 0])], 2),
            Err(Error::NotSaturated)
        );
        assert_eq!(
            hermite_completion(&[lv(&[1, 1]), lv(&[1, -1])], 2),
            Err(Error::NotSaturated)
        );
    }

    #[test]
    fn row_hermite_examples() {
        assert_eq!(
            row_hermite_form(&[lv(&[-1, 1])], 2).unwrap(),
            vec![lv(&[1, -1])]
        );
        let h = row_hermite_form(&[lv(&[0, 1, -1]), lv(&[1, -1, 0])], 3).unwrap();
        assert_eq!(h, vec![lv(&[1, 0, -1]), lv(&[0, 1, -1])]);
    }

    #[test]
    fn dual_basis_pairs_to_identity() {
        let basis = vec![lv(&[1, 1, 0]), lv(&[0, 1, 0]), lv(&[2, 3, 1])];
        let dual = dual_basis(&basis, 3).unwrap();
        for (i, m) in dual.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                assert_eq!(m.dot(b), int((i == j) as i64));
            }
        }
    }

    #[test]
    fn kernel_and_solve() {
        let a = RatMatrix::from_rat_rows(3, &[RatVector::from_i64(&[1, 1, 1])]).unwrap();
        let k = kernel_rational(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(RatVector::from_i64(&[1, 1, 1]).dot(v).is_zero());
        }
        let b = RatMatrix::from_rat_rows(2, &[
            RatVector::from_i64(&[1, 2]),
            RatVector::from_i64(&[3, 4]),
        ])
        .unwrap();
        let x = solve_rational(&b, &[rat(5, 1), rat(6, 1)]).unwrap();
        assert_eq!(x, vec![rat(-4, 1), rat(9, 2)]);
        let sing = RatMatrix::from_rat_rows(2, &[
            RatVector::from_i64(&[1, 1]),
            RatVector::from_i64(&[1, 1]),
        ])
        .unwrap();
        assert!(solve_rational(&sing, &[rat(1, 1), rat(2, 1)]).is_none());
    }

    #[test]
    fn roots_and_powers() {
        assert_eq!(rational_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_root(&rat(2, 1), 2), None);
        assert_eq!(rational_root(&rat(-4, 1), 2), None);
        assert_eq!(rat_pow(&rat(2, 3), &int(-2)), rat(9, 4));
    }

    #[test]
    fn monomial_systems() {
        // x^2 y = 12, y = 3  ->  x = ±2; the Smith route picks one root
        let a = IntMatrix::from_i64(2, 2, &[2, 1, 0, 1]).unwrap();
        let x = solve_monomial_system(&a, &[rat(12, 1), rat(3, 1)]).unwrap();
        assert_eq!(&x[0] * &x[0] * &x[1], rat(12, 1));
        assert_eq!(x[1], rat(3, 1));
        // x^2 = 2 has no rational solution
        let a = IntMatrix::from_i64(1, 1, &[2]).unwrap();
        assert!(solve_monomial_system(&a, &[rat(2, 1)]).is_none());
        // inconsistent: x = 2 and x = 3
        let a = IntMatrix::from_i64(2, 1, &[1, 1]).unwrap();
        assert!(solve_monomial_system(&a, &[rat(2, 1), rat(3, 1)]).is_none());
        // underdetermined: x / y = 5/7
        let a = IntMatrix::from_i64(1, 2, &[1, -1]).unwrap();
        let x = solve_monomial_system(&a, &[rat(5, 7)]).unwrap();
        assert_eq!(&x[0] / &x[1], rat(5, 7));
    }
}
