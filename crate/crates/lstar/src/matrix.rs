//! Dense matrices over the integers with exact arithmetic: Smith normal
//! form with unimodular transforms, Bareiss determinants, and the lattice
//! utilities (kernels, column bases, saturations) everything else is
//! built on.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{reject, Result};

/// Exact rational scalar used wherever integer arithmetic does not suffice.
pub type Rat = Ratio<BigInt>;

/// A rows x cols integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return reject(format!(
                "matrix entries have length {}, expected {}x{}={}",
                entries.len(),
                rows,
                cols,
                rows * cols
            ));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Convenience constructor from machine integers; panics on bad shape.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "shape mismatch");
        Self {
            rows,
            cols,
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| c * &self[(i, j)])
    }

    pub fn pow(&self, e: u64) -> Self {
        assert!(self.is_square(), "pow of non-square matrix");
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Columns of `self` followed by columns of `rhs`.
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack col mismatch");
        Self::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                rhs[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows + rhs.rows, self.cols + rhs.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                rhs[(i - self.rows, j - self.cols)].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    /// Top-left block of the given shape.
    pub fn top_left(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows && cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(i, j)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] -= q * row[b]
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] -= t;
        }
    }

    /// col[a] -= q * col[b]
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] -= t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            for i in k + 1..n {
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        snf_full(self).rank()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Smith normal form `d = u * a * v` with `u`, `v` unimodular, `d` diagonal
/// with nonnegative entries, each dividing the next nonzero one.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Internal decomposition that also carries the inverse transforms.
#[derive(Clone)]
pub(crate) struct SnfFull {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    #[allow(dead_code)]
    pub v_inv: IntMatrix,
}

impl SnfFull {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }
}

/// Quotient-with-remainder minimizing |a - q*b|; ties round toward -inf of
/// the magnitude, deterministically.
fn div_rounded(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let s = if b.is_negative() { -1 } else { 1 };
    let bb = b.abs();
    let (mut q, r) = a.div_mod_floor(&bb);
    if &r * 2 > bb {
        q += 1;
    }
    if s < 0 {
        -q
    } else {
        q
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let f = snf_full(a);
    SmithForm { d: f.d, u: f.u, v: f.v }
}

/// Working state of the SNF computation: d = u*a*v, u*u_inv = 1, v*v_inv = 1
/// are maintained by every elementary operation.
struct SnfState {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[a] -= q * row[b]
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        self.d.row_sub(a, b, q);
        self.u.row_sub(a, b, q);
        self.u_inv.col_sub(b, a, &-q.clone());
    }

    /// col[a] -= q * col[b]
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        self.d.col_sub(a, b, q);
        self.v.col_sub(a, b, q);
        self.v_inv.row_sub(b, a, &-q.clone());
    }

    fn negate_row(&mut self, a: usize) {
        self.d.negate_row(a);
        self.u.negate_row(a);
        for r in 0..self.u_inv.rows() {
            let t = -self.u_inv[(r, a)].clone();
            self.u_inv[(r, a)] = t;
        }
    }

    /// Diagonalize by smallest-absolute-value pivoting with row/column
    /// reduction; ties broken by lowest (row, col) index.
    fn eliminate(&mut self) {
        let rows = self.d.rows();
        let cols = self.d.cols();
        let n = rows.min(cols);
        let mut k = 0usize;
        while k < n {
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if self.d[(i, j)].is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if self.d[(i, j)].abs() < self.d[(pi, pj)].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            self.swap_rows(pi, k);
            self.swap_cols(pj, k);
            loop {
                let mut dirty = false;
                for i in k + 1..rows {
                    if self.d[(i, k)].is_zero() {
                        continue;
                    }
                    let q = div_rounded(&self.d[(i, k)], &self.d[(k, k)]);
                    self.row_sub(i, k, &q);
                    if !self.d[(i, k)].is_zero() {
                        self.swap_rows(i, k);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                for j in k + 1..cols {
                    if self.d[(k, j)].is_zero() {
                        continue;
                    }
                    let q = div_rounded(&self.d[(k, j)], &self.d[(k, k)]);
                    self.col_sub(j, k, &q);
                    if !self.d[(k, j)].is_zero() {
                        self.swap_cols(j, k);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                break;
            }
            k += 1;
        }
    }
}

pub(crate) fn snf_full(a: &IntMatrix) -> SnfFull {
    let rows = a.rows();
    let cols = a.cols();
    let n = rows.min(cols);
    let mut st = SnfState {
        d: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };

    // Eliminate, then repair the divisibility chain: adding the row below
    // into the offending row re-couples the two diagonal entries, and the
    // next pass replaces them with their gcd and lcm.
    loop {
        st.eliminate();
        for i in 0..n {
            if st.d[(i, i)].is_negative() {
                st.negate_row(i);
            }
        }
        let mut violation = None;
        for i in 0..n.saturating_sub(1) {
            if st.d[(i + 1, i + 1)].is_zero() {
                break;
            }
            if !st.d[(i + 1, i + 1)].is_multiple_of(&st.d[(i, i)]) {
                violation = Some(i);
                break;
            }
        }
        match violation {
            None => break,
            Some(i) => st.row_sub(i, i + 1, &BigInt::from(-1)),
        }
    }

    debug_assert!(st.d.is_diagonal());
    debug_assert_eq!(st.u.mul(a).mul(&st.v), st.d);
    debug_assert!(st.u.mul(&st.u_inv).is_identity());
    debug_assert!(st.v.mul(&st.v_inv).is_identity());

    SnfFull {
        d: st.d,
        u: st.u,
        u_inv: st.u_inv,
        v: st.v,
        v_inv: st.v_inv,
    }
}

/// Basis of the integer kernel {x : a*x = 0}, as matrix columns. The basis
/// is primitive (the kernel lattice is saturated by construction).
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let f = snf_full(a);
    let r = f.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    f.v.select_cols(&idx)
}

/// Basis of the lattice spanned by the columns of `g` (columns of the result).
pub fn column_basis(g: &IntMatrix) -> IntMatrix {
    let f = snf_full(g);
    let r = f.rank();
    let mut out = IntMatrix::zero(g.rows(), r);
    for k in 0..r {
        let dk = &f.d[(k, k)];
        for i in 0..g.rows() {
            out[(i, k)] = dk * &f.u_inv[(i, k)];
        }
    }
    out
}

/// Basis of the saturation of the column lattice of `g`:
/// {x : m*x in lattice for some m >= 1}.
pub fn saturation_basis(g: &IntMatrix) -> IntMatrix {
    let f = snf_full(g);
    let r = f.rank();
    let idx: Vec<usize> = (0..r).collect();
    f.u_inv.select_cols(&idx)
}

/// Solve b*x = m over the integers, where the columns of `b` are independent.
/// Returns None when some column of `m` is not an integral combination.
pub fn express_in_basis(b: &IntMatrix, m: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(b.rows(), m.rows(), "ambient dimension mismatch");
    let f = snf_full(b);
    let r = f.rank();
    if r != b.cols() {
        return None; // not a basis
    }
    let um = f.u.mul(m);
    // b = u_inv * d * v_inv, so x = v * d^+ * u * m when divisible.
    let mut dx = IntMatrix::zero(b.cols(), m.cols());
    for i in 0..b.cols() {
        let di = &f.d[(i, i)];
        for j in 0..m.cols() {
            let (q, rem) = um[(i, j)].div_rem(di);
            if !rem.is_zero() {
                return None;
            }
            dx[(i, j)] = q;
        }
    }
    for i in b.cols()..b.rows() {
        for j in 0..m.cols() {
            if !um[(i, j)].is_zero() {
                return None;
            }
        }
    }
    Some(f.v.mul(&dx))
}

/// Generators (columns) of the lattice {x : a*x is in the column lattice of g}.
pub fn preimage_lattice(a: &IntMatrix, lattice_gens: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), lattice_gens.rows(), "ambient dimension mismatch");
    let stacked = a.hstack(lattice_gens);
    let ker = kernel_basis(&stacked);
    let idx: Vec<usize> = (0..a.cols()).collect();
    ker.select_rows(&idx)
}

/// A dense matrix over the rationals; just enough for determinants and
/// section assembly in the exact-sequence calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|e| Rat::from(e.clone())).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let mut m = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Rat::zero();
            };
            if p != k {
                for j in 0..n {
                    let t = m[(p, j)].clone();
                    m[(p, j)] = m[(k, j)].clone();
                    m[(k, j)] = t;
                }
                det = -det;
            }
            let piv = m[(k, k)].clone();
            det *= piv.clone();
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let factor = &m[(i, k)] / &piv;
                for j in k..n {
                    let t = &factor * &m[(k, j)];
                    m[(i, j)] -= t;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }
}

/// Exact inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let f = snf_full(m);
    assert!(f.d.is_identity(), "matrix is not unimodular");
    // u m v = 1  =>  m^{-1} = v u
    f.v.mul(&f.u)
}

/// A rational right inverse of a surjective (full row rank) integer matrix,
/// built from the Smith form so the choice is deterministic.
pub fn right_inverse_rational(a: &IntMatrix) -> RatMatrix {
    let f = snf_full(a);
    assert_eq!(f.rank(), a.rows(), "right inverse of a non-surjective matrix");
    // a = u_inv d v_inv  =>  x = v d^+ u satisfies a*x = 1.
    let mut dplus = RatMatrix::zero(a.cols(), a.rows());
    for i in 0..a.rows() {
        dplus[(i, i)] = Rat::new(BigInt::one(), f.d[(i, i)].clone());
    }
    RatMatrix::from_int(&f.v).mul(&dplus).mul(&RatMatrix::from_int(&f.u))
}

/// Convert a rational to f64, scaling through bit lengths so that huge
/// numerators/denominators do not overflow to infinity.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer();
    let d = r.denom();
    if let (Some(nf), Some(df)) = (n.to_f64(), d.to_f64()) {
        if nf.is_finite() && df.is_finite() && df != 0.0 {
            return nf / df;
        }
    }
    let ln = ln_bigint_abs(n) - ln_bigint_abs(d);
    let sign = if (n.is_negative()) != (d.is_negative()) { -1.0 } else { 1.0 };
    sign * ln.exp()
}

/// Natural log of |x| for a nonzero BigInt of any size.
pub fn ln_bigint_abs(x: &BigInt) -> f64 {
    let mag = x.magnitude();
    assert!(!mag.is_zero(), "ln of zero");
    let bits = mag.bits();
    if bits <= 53 {
        return mag.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (mag >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "d = u*a*v failed");
        assert!(s.u.det().abs().is_one(), "u not unimodular");
        assert!(s.v.det().abs().is_one(), "v not unimodular");
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero on diagonal");
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken");
            }
        }
        for e in &diag {
            assert!(!e.is_negative());
        }
        s
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(2);
        let s = check_snf(&a);
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    /// Oracle for the diagonal: d_1...d_k = gcd of all k x k minors.
    fn minor_gcd_oracle(a: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut c = vec![first];
                        c.append(&mut rest);
                        out.push(c);
                    }
                }
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in combos(a.rows(), k) {
            for cs in combos(a.cols(), k) {
                let sub = a.select_rows(&rs).select_cols(&cs);
                g = g.gcd(&sub.det());
            }
        }
        g
    }

    #[test]
    fn snf_2468() {
        let a = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        let s = check_snf(&a);
        // d1 = gcd of entries, d1*d2 = |det|
        let d1 = minor_gcd_oracle(&a, 1);
        let d2 = minor_gcd_oracle(&a, 2) / &d1;
        assert_eq!(d1, BigInt::from(2));
        assert_eq!(&d1 * &d2, BigInt::from(8));
        assert_eq!(s.diagonal(), vec![d1, d2]);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_rank_one() {
        let a = IntMatrix::from_i64(2, 2, &[1, 2, 2, 4]);
        let s = check_snf(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(0)]);
        assert_eq!(a.det(), BigInt::zero());
        assert_eq!(minor_gcd_oracle(&a, 1), BigInt::one());
    }

    #[test]
    fn det_bareiss_matches_expansion() {
        let a = IntMatrix::from_i64(3, 3, &[2, -1, 0, 3, 5, 1, -2, 0, 4]);
        // cofactor expansion by hand: 2*(20-0) +1*(12+2) + 0 = 54
        assert_eq!(a.det(), BigInt::from(54));
    }

    #[test]
    fn kernel_and_column_basis() {
        let a = IntMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());

        let b = column_basis(&a);
        assert_eq!(b.cols(), 1);
        // column lattice of a is spanned by (1,2)
        let x = express_in_basis(&b, &IntMatrix::from_i64(2, 1, &[1, 2])).unwrap();
        assert_eq!(x.rows(), 1);
    }

    #[test]
    fn saturation_strictly_contains_scaled_lattice() {
        let g = IntMatrix::from_i64(2, 1, &[2, 4]);
        let sat = saturation_basis(&g);
        assert_eq!(sat.cols(), 1);
        // saturation contains (1,2)
        assert!(express_in_basis(&sat, &IntMatrix::from_i64(2, 1, &[1, 2])).is_some());
        // but the lattice itself does not
        let basis = column_basis(&g);
        assert!(express_in_basis(&basis, &IntMatrix::from_i64(2, 1, &[1, 2])).is_none());
    }

    #[test]
    fn right_inverse_is_section() {
        let a = IntMatrix::from_i64(1, 2, &[2, 3]);
        let g = right_inverse_rational(&a);
        let prod = RatMatrix::from_int(&a).mul(&g);
        assert_eq!(prod[(0, 0)], Rat::one());
    }

    #[test]
    fn rat_to_f64_huge() {
        let big = BigInt::from(10u32).pow(400);
        let r = Rat::new(big.clone(), &big / BigInt::from(2));
        assert!((rat_to_f64(&r) - 2.0).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn snf_random(rows in 1usize..5, cols in 1usize..5,
                      seed in proptest::collection::vec(-30i64..30, 16)) {
            let entries: Vec<i64> = seed.iter().cycle().take(rows*cols).cloned().collect();
            let a = IntMatrix::from_i64(rows, cols, &entries);
            check_snf(&a);
        }

        #[test]
        fn kernel_random(rows in 1usize..4, cols in 1usize..5,
                         seed in proptest::collection::vec(-20i64..20, 20)) {
            let entries: Vec<i64> = seed.iter().cycle().take(rows*cols).cloned().collect();
            let a = IntMatrix::from_i64(rows, cols, &entries);
            let k = kernel_basis(&a);
            proptest::prop_assert!(a.mul(&k).is_zero());
            proptest::prop_assert_eq!(k.cols(), cols - a.rank());
        }
    }
}
