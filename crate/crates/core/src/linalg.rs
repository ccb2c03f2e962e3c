//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt`/`BigRational`; there is no floating
//! point anywhere in the crate. Matrix sizes are small (ambient dimension
//! rarely exceeds a dozen), so the algorithms favour clarity over speed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector = Vec<BigInt>;
pub type QVector = Vec<BigRational>;

/// Converts a slice of machine integers into an exact vector.
pub fn vector(entries: &[i64]) -> Vector {
    entries.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rational(v: &[BigInt]) -> QVector {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn qdot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Divides out the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vector {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    g.is_one()
}

/// Clears denominators and returns the primitive integer vector on the same ray.
pub fn clear_denominators(v: &[BigRational]) -> Vector {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vector = v.iter().map(|x| (x * &l).to_integer()).collect();
    primitive(&ints)
}

/// Dense integer matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        IntMatrix { rows: rows.len(), cols, entries: rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| vector(r)).collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (row, x) in m.entries.iter_mut().zip(c) {
                row[j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        self.entries.clone()
    }

    pub fn column(&self, j: usize) -> Vector {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j][i] = self.entries[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += &self.entries[i][k] * &other.entries[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        self.entries.iter().map(|r| dot(r, v)).collect()
    }

    /// Columns `range` as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let columns: Vec<Vector> = cols.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &columns)
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        IntMatrix { rows: self.rows, cols: self.cols + other.cols, entries }
    }

    pub fn to_rational_rows(&self) -> Vec<QVector> {
        self.entries.iter().map(|r| to_rational(r)).collect()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in &mut self.entries {
                r.swap(a, b);
            }
        }
    }

    /// col[target] -= q * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in &mut self.entries {
            let s = &r[source] * q;
            r[target] -= s;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in &mut self.entries {
            r[j] = -&r[j];
        }
    }

    /// row[target] -= q * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src = self.entries[source].clone();
        for (t, s) in self.entries[target].iter_mut().zip(&src) {
            *t -= s * q;
        }
    }

    /// Determinant via fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.to_rational_rows())
    }
}

/// Column-style Hermite normal form: returns `(H, U)` with `H = M·U`, `U`
/// unimodular and `H` in column echelon form. Pivots are positive and the
/// entries left of a pivot in its row lie in `[0, pivot)`. Among competing
/// pivot candidates the smallest absolute value wins, ties going to the
/// lowest column index.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pc = 0;
    for row in 0..m.rows {
        if pc == m.cols {
            break;
        }
        loop {
            let best = (pc..m.cols)
                .filter(|&j| !h.entries[row][j].is_zero())
                .min_by(|&a, &b| h.entries[row][a].abs().cmp(&h.entries[row][b].abs()).then(a.cmp(&b)));
            let Some(p) = best else { break };
            h.swap_cols(p, pc);
            u.swap_cols(p, pc);
            let mut remaining = false;
            for j in pc + 1..m.cols {
                if h.entries[row][j].is_zero() {
                    continue;
                }
                let q = h.entries[row][j].div_floor(&h.entries[row][pc]);
                h.col_axpy(j, pc, &q);
                u.col_axpy(j, pc, &q);
                if !h.entries[row][j].is_zero() {
                    remaining = true;
                }
            }
            if !remaining {
                break;
            }
        }
        if h.entries[row][pc].is_zero() {
            continue;
        }
        if h.entries[row][pc].is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        for j in 0..pc {
            let q = h.entries[row][j].div_floor(&h.entries[row][pc]);
            h.col_axpy(j, pc, &q);
            u.col_axpy(j, pc, &q);
        }
        pc += 1;
    }
    (h, u)
}

/// Number of nonzero columns of a column HNF (they come first).
fn hnf_rank(h: &IntMatrix) -> usize {
    (0..h.cols).take_while(|&j| h.entries.iter().any(|r| !r[j].is_zero())).count()
}

/// Canonical basis of the lattice spanned by `vectors` (row-style HNF,
/// zero rows dropped).
pub fn lattice_basis(dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_columns(dim, vectors);
    let (h, _) = hermite_normal_form(&m);
    (0..hnf_rank(&h)).map(|j| h.column(j)).collect()
}

/// Basis of the saturated integer kernel `{v : Mv = 0}`, in canonical form.
pub fn kernel_lattice(m: &IntMatrix) -> Vec<Vector> {
    let (h, u) = hermite_normal_form(m);
    let r = hnf_rank(&h);
    let kernel: Vec<Vector> = (r..m.cols).map(|j| u.column(j)).collect();
    lattice_basis(m.cols, &kernel)
}

/// Coefficients `x` with `Σ x_j g_j = v` over ℤ, if `v` lies in the lattice
/// spanned by the columns `g_j` of `gens`.
pub fn lattice_solve(gens: &IntMatrix, v: &[BigInt]) -> Option<Vector> {
    assert_eq!(gens.rows, v.len());
    let (h, u) = hermite_normal_form(gens);
    let r = hnf_rank(&h);
    let mut x = vec![BigInt::zero(); r];
    let mut row = 0;
    for k in 0..r {
        while h.entries[row][k].is_zero() {
            row += 1;
        }
        let partial: BigInt = (0..k).map(|j| &h.entries[row][j] * &x[j]).sum();
        let rest = &v[row] - partial;
        let (q, rem) = rest.div_rem(&h.entries[row][k]);
        if !rem.is_zero() {
            return None;
        }
        x[k] = q;
    }
    let image: Vector = (0..h.rows).map(|i| (0..r).map(|j| &h.entries[i][j] * &x[j]).sum()).collect();
    if image != v {
        return None;
    }
    let mut coeffs = vec![BigInt::zero(); gens.cols];
    for (j, c) in coeffs.iter_mut().enumerate() {
        *c = (0..r).map(|k| &u.entries[j][k] * &x[k]).sum();
    }
    Some(coeffs)
}

pub fn lattice_contains(gens: &IntMatrix, v: &[BigInt]) -> bool {
    lattice_solve(gens, v).is_some()
}

/// Smith normal form with transforms: `P·M·Q = D`, `D` diagonal with
/// nonnegative entries `d_1 | d_2 | …`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: IntMatrix,
    pub d: IntMatrix,
    pub q: IntMatrix,
}

impl Smith {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.entries[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut p = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // pivot: smallest nonzero absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d.entries[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => d.entries[i][j].abs() < d.entries[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith { p, d, q };
            };
            d.entries.swap(t, bi);
            p.entries.swap(t, bi);
            d.swap_cols(t, bj);
            q.swap_cols(t, bj);

            let mut dirty = false;
            for i in t + 1..rows {
                if d.entries[i][t].is_zero() {
                    continue;
                }
                let f = d.entries[i][t].div_floor(&d.entries[t][t]);
                d.row_axpy(i, t, &f);
                p.row_axpy(i, t, &f);
                dirty |= !d.entries[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d.entries[t][j].is_zero() {
                    continue;
                }
                let f = d.entries[t][j].div_floor(&d.entries[t][t]);
                d.col_axpy(j, t, &f);
                q.col_axpy(j, t, &f);
                dirty |= !d.entries[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&d.entries[i][j] % &d.entries[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.row_axpy(t, i, &minus_one);
                    p.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.entries[t][t].is_negative() {
            for j in 0..cols {
                d.entries[t][j] = -&d.entries[t][j];
            }
            for j in 0..rows {
                p.entries[t][j] = -&p.entries[t][j];
            }
        }
    }
    Smith { p, d, q }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.rows;
    if n != m.cols || !m.det().abs().is_one() {
        return Err(Error::Invalid("matrix is not unimodular".into()));
    }
    let inv = rational_inverse(&m.to_rational_rows()).expect("unimodular matrices are invertible");
    let rows = inv.into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect();
    Ok(IntMatrix::from_rows(n, rows))
}

/// Extends linearly independent vectors spanning a saturated sublattice of
/// ℤⁿ to a unimodular basis. The given vectors come first, in order.
/// Returns `None` when the span is not saturated.
pub fn complete_to_basis(n: usize, vectors: &[Vector]) -> Option<IntMatrix> {
    let k = vectors.len();
    if k == 0 {
        return Some(IntMatrix::identity(n));
    }
    let v = IntMatrix::from_columns(n, vectors);
    let s = smith_normal_form(&v);
    let f = s.invariant_factors();
    if f.len() != k || !f.iter().all(|x| x.is_one()) {
        return None;
    }
    let pinv = unimodular_inverse(&s.p).ok()?;
    let mut columns = vectors.to_vec();
    columns.extend((k..n).map(|j| pinv.column(j)));
    Some(IntMatrix::from_columns(n, &columns))
}

/// Reduced row echelon form over ℚ; returns the nonzero rows and pivot columns.
pub fn rational_rref(rows: &[QVector]) -> (Vec<QVector>, Vec<usize>) {
    let mut a: Vec<QVector> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rational_rank(rows: &[QVector]) -> usize {
    rational_rref(rows).1.len()
}

/// Basis of the right kernel `{x : A x = 0}` over ℚ.
pub fn rational_kernel(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    let (rref, pivots) = rational_rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` over ℚ, returning one solution if any exists.
pub fn rational_solve(a: &[QVector], b: &[BigRational], ncols: usize) -> Option<QVector> {
    let aug: Vec<QVector> = a.iter().zip(b).map(|(r, y)| r.iter().cloned().chain(std::iter::once(y.clone())).collect()).collect();
    let (rref, pivots) = rational_rref(&aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = rref[i][ncols].clone();
    }
    Some(x)
}

pub fn rational_inverse(a: &[QVector]) -> Option<Vec<QVector>> {
    let n = a.len();
    let aug: Vec<QVector> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    let (rref, pivots) = rational_rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(rref.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A linear subspace of ℚⁿ with a canonical (reduced echelon) basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSubspace {
    ambient: usize,
    basis: Vec<QVector>,
}

impl RationalSubspace {
    pub fn span(ambient: usize, vectors: &[QVector]) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient));
        let (basis, _) = rational_rref(vectors);
        RationalSubspace { ambient, basis }
    }

    pub fn span_integer(ambient: usize, vectors: &[Vector]) -> Self {
        let q: Vec<QVector> = vectors.iter().map(|v| to_rational(v)).collect();
        Self::span(ambient, &q)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVector] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rational_rank(&rows) == self.dim()
    }
}

/// Exact dimension of `A ∩ B`, computed from the kernel of `[A | −B]`.
pub fn intersection_dim(a: &RationalSubspace, b: &RationalSubspace) -> Result<usize> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch { expected: a.ambient, found: b.ambient });
    }
    let (ka, kb) = (a.dim(), b.dim());
    if ka == 0 || kb == 0 {
        return Ok(0);
    }
    // rows of the system are coordinates; unknowns are (x, y)
    let system: Vec<QVector> =
        (0..a.ambient).map(|i| a.basis.iter().map(|v| v[i].clone()).chain(b.basis.iter().map(|v| -v[i].clone())).collect()).collect();
    let kernel = rational_kernel(&system, ka + kb);
    let images: Vec<QVector> = kernel
        .iter()
        .map(|k| (0..a.ambient).map(|i| a.basis.iter().zip(&k[..ka]).fold(BigRational::zero(), |acc, (v, c)| acc + &v[i] * c)).collect())
        .collect();
    Ok(rational_rank(&images))
}
