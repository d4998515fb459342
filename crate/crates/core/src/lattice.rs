//! Exact integer linear algebra over the lattice `N ≅ Zⁿ` of one-parameter
//! directions and its dual `M` of characters.
//!
//! Coordinates are stored as `i64`. Every arithmetic step is checked and
//! reports [`Error::Overflow`] instead of wrapping.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Which lattice a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    /// Points of `N`: one-parameter directions, ray generators, fan data.
    N,
    /// Characters of `M`: polytope points, Cartier data, monomials.
    M,
}

impl Space {
    pub fn dual(self) -> Space {
        match self {
            Space::N => Space::M,
            Space::M => Space::N,
        }
    }
}

#[inline]
pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow)
}

/// Checked dot product of two equal-length slices.
pub(crate) fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc: i128 = 0;
    for (&x, &y) in a.iter().zip(b) {
        acc = acc.checked_add(x as i128 * y as i128).ok_or(Error::Overflow)?;
    }
    i64::try_from(acc).map_err(|_| Error::Overflow)
}

/// `gcd(|a_1|, …, |a_n|)`; zero for the zero vector.
pub(crate) fn content(a: &[i64]) -> i64 {
    a.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub(crate) fn primitive_slice(a: &[i64]) -> Result<Vec<i64>> {
    let g = content(a);
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(a.iter().map(|&x| x / g).collect())
}

/// Primitive vector with positive first nonzero coordinate.
pub(crate) fn canonical_slice(a: &[i64]) -> Result<Vec<i64>> {
    let mut p = primitive_slice(a)?;
    if p.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in p.iter_mut() {
            *x = neg(*x)?;
        }
    }
    Ok(p)
}

pub(crate) fn max_norm(a: &[i64]) -> u64 {
    a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// An integer vector tagged with the lattice it belongs to.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    space: Space,
    coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(space: Space, coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroRank);
        }
        Ok(Self { space, coords })
    }

    /// A point of `N`. Panics on an empty coordinate list.
    pub fn n(coords: impl Into<Vec<i64>>) -> Self {
        Self::new(Space::N, coords.into()).expect("rank must be at least 1")
    }

    /// A character of `M`. Panics on an empty coordinate list.
    pub fn m(coords: impl Into<Vec<i64>>) -> Self {
        Self::new(Space::M, coords.into()).expect("rank must be at least 1")
    }

    pub(crate) fn from_raw(space: Space, coords: Vec<i64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self { space, coords }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    /// Max-norm `max |v_k|`.
    pub fn max_norm(&self) -> u64 {
        max_norm(&self.coords)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                expected: self.space,
                found: other.space,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| add(a, b))
            .collect::<Result<_>>()?;
        Ok(Self::from_raw(self.space, coords))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| sub(a, b))
            .collect::<Result<_>>()?;
        Ok(Self::from_raw(self.space, coords))
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        let coords = self.coords.iter().map(|&a| mul(a, k)).collect::<Result<_>>()?;
        Ok(Self::from_raw(self.space, coords))
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.checked_scale(-1)
    }

    /// The vector divided by the gcd of its entries.
    pub fn primitive(&self) -> Result<Self> {
        Ok(Self::from_raw(self.space, primitive_slice(&self.coords)?))
    }

    /// Primitive representative of `±v` whose first nonzero coordinate is
    /// positive. `v` and `-v` give the same widths, so this is the form used
    /// for witnesses.
    pub fn canonical(&self) -> Result<Self> {
        Ok(Self::from_raw(self.space, canonical_slice(&self.coords)?))
    }

    pub fn is_primitive(&self) -> bool {
        content(&self.coords) == 1
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.space, self.coords)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `⟨m, v⟩ = Σ m_k v_k` for a character `m ∈ M` and a direction `v ∈ N`.
pub fn pairing(m: &LatticeVector, v: &LatticeVector) -> Result<i64> {
    if m.space != Space::M {
        return Err(Error::SpaceMismatch {
            expected: Space::M,
            found: m.space,
        });
    }
    if v.space != Space::N {
        return Err(Error::SpaceMismatch {
            expected: Space::N,
            found: v.space,
        });
    }
    if m.rank() != v.rank() {
        return Err(Error::RankMismatch {
            expected: m.rank(),
            found: v.rank(),
        });
    }
    dot(&m.coords, &v.coords)
}

/// `v / gcd(|v_1|, …, |v_n|)`.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    v.primitive()
}

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl LatticeMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            entries.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for k in 0..n {
            entries[k * n + k] = 1;
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, x: i64) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ot = other.transpose();
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                out.set(r, c, dot(self.row(r), ot.row(c))?);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(Error::RankMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[target] -= q * row[source]`
    fn row_axpy(&mut self, target: usize, source: usize, q: i64) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let v = sub(self.get(target, c), mul(q, self.get(source, c))?)?;
            self.set(target, c, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) -> Result<()> {
        for c in 0..self.cols {
            let v = neg(self.get(r, c))?;
            self.set(r, c, v);
        }
        Ok(())
    }
}

impl fmt::Debug for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Row-style Hermite normal form together with the unimodular transform.
#[derive(Debug, Clone)]
pub(crate) struct Hermite {
    pub h: LatticeMatrix,
    pub u: LatticeMatrix,
    /// Pivot column of each nonzero row, in order.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub(crate) fn hermite(a: &LatticeMatrix) -> Result<Hermite> {
    let (rows, cols) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut u = LatticeMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut p = 0;

    for col in 0..cols {
        if p == rows {
            break;
        }
        loop {
            let best = (p..rows)
                .filter(|&r| h.get(r, col) != 0)
                .min_by_key(|&r| (h.get(r, col).unsigned_abs(), r));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let pivot = h.get(p, col);
            let mut done = true;
            for r in p + 1..rows {
                let x = h.get(r, col);
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(pivot);
                h.row_axpy(r, p, q)?;
                u.row_axpy(r, p, q)?;
                if h.get(r, col) != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(p, col) == 0 {
            continue;
        }
        if h.get(p, col) < 0 {
            h.negate_row(p)?;
            u.negate_row(p)?;
        }
        let pivot = h.get(p, col);
        for r in 0..p {
            let q = h.get(r, col).div_euclid(pivot);
            h.row_axpy(r, p, q)?;
            u.row_axpy(r, p, q)?;
        }
        pivots.push(col);
        p += 1;
    }
    Ok(Hermite { h, u, pivots })
}

/// Row-style Hermite normal form `H = U·A` with `U` unimodular.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero
/// rows sit at the bottom.
pub fn hermite_normal_form(a: &LatticeMatrix) -> Result<(LatticeMatrix, LatticeMatrix)> {
    let hf = hermite(a)?;
    Ok((hf.h, hf.u))
}

pub fn matrix_rank(a: &LatticeMatrix) -> Result<usize> {
    Ok(hermite(a)?.rank())
}

pub(crate) fn rank_of_rows(rows: &[Vec<i64>], cols: usize) -> Result<usize> {
    if rows.is_empty() {
        return Ok(0);
    }
    matrix_rank(&LatticeMatrix::from_rows(rows, cols)?)
}

/// Canonical (Hermite) basis of the lattice spanned by `rows`.
pub(crate) fn hermite_basis(rows: &[Vec<i64>], cols: usize) -> Result<Vec<Vec<i64>>> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let hf = hermite(&LatticeMatrix::from_rows(rows, cols)?)?;
    Ok((0..hf.rank()).map(|r| hf.h.row(r).to_vec()).collect())
}

/// Saturated basis of `{x ∈ Z^cols : A x = 0}` for `A` given by `rows`, in
/// Hermite form.
pub(crate) fn integer_kernel(rows: &[Vec<i64>], cols: usize) -> Result<Vec<Vec<i64>>> {
    let basis = if rows.is_empty() {
        LatticeMatrix::identity(cols).to_rows()
    } else {
        let at = LatticeMatrix::from_rows(rows, cols)?.transpose();
        let hf = hermite(&at)?;
        (hf.rank()..cols).map(|r| hf.u.row(r).to_vec()).collect()
    };
    hermite_basis(&basis, cols)
}

/// Basis `u_1, …, u_{n-1}` of `v^⊥ ⊂ M` for a primitive `v ∈ N`. The result
/// is in Hermite form, so it is canonical, and it extends to a basis of `M`.
pub fn kernel_basis(v: &LatticeVector) -> Result<Vec<LatticeVector>> {
    if v.space != Space::N {
        return Err(Error::SpaceMismatch {
            expected: Space::N,
            found: v.space,
        });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.coords.clone()));
    }
    let rows = integer_kernel(std::slice::from_ref(&v.coords), v.rank())?;
    Ok(rows.into_iter().map(|r| LatticeVector::from_raw(Space::M, r)).collect())
}

/// Product of the elementary divisors of the lattice spanned by `rows`,
/// i.e. its index inside its saturation. Rows must be linearly independent.
pub(crate) fn saturation_index(rows: &[Vec<i64>], cols: usize) -> Result<i64> {
    if rows.is_empty() {
        return Ok(1);
    }
    let hf = hermite(&LatticeMatrix::from_rows(rows, cols)?.transpose())?;
    debug_assert_eq!(hf.rank(), rows.len());
    let mut idx = 1i64;
    for (r, &c) in hf.pivots.iter().enumerate() {
        idx = mul(idx, hf.h.get(r, c))?;
    }
    Ok(idx.abs())
}

/// Outcome of [`solve_integral`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralSolution {
    /// An integral `x` with `A x = b`.
    Integral(Vec<i64>),
    /// `A x = b` is consistent over `Q` but has no integral solution.
    RationalOnly,
    /// `A x = b` has no solution at all.
    Inconsistent,
}

impl IntegralSolution {
    pub fn integral(self) -> Option<Vec<i64>> {
        match self {
            IntegralSolution::Integral(x) => Some(x),
            _ => None,
        }
    }
}

/// Finds an integral solution of `A x = b`, distinguishing rational-only
/// solvability from inconsistency. Free variables are set to zero in the
/// Hermite coordinates, which makes the answer deterministic.
pub fn solve_integral(a: &LatticeMatrix, b: &[i64]) -> Result<IntegralSolution> {
    if b.len() != a.rows {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows
        )));
    }
    // U Aᵀ = H, so A Uᵀ = Hᵀ. Substituting x = Uᵀ y turns A x = b into a
    // triangular system Hᵀ y = b.
    let hf = hermite(&a.transpose())?;
    let k = hf.rank();
    let mut y = vec![0i64; a.cols];
    let mut integral = true;
    for i in 0..k {
        let col = hf.pivots[i];
        let mut rhs = b[col];
        for (j, &yj) in y.iter().enumerate().take(i) {
            rhs = sub(rhs, mul(yj, hf.h.get(j, col))?)?;
        }
        let piv = hf.h.get(i, col);
        if rhs % piv != 0 {
            integral = false;
            break;
        }
        y[i] = rhs / piv;
    }
    if integral {
        for (col, &bc) in b.iter().enumerate() {
            let mut lhs = 0i64;
            for (j, &yj) in y.iter().enumerate().take(k) {
                lhs = add(lhs, mul(yj, hf.h.get(j, col))?)?;
            }
            if lhs != bc {
                integral = false;
                break;
            }
        }
    }
    if integral {
        let x = hf.u.transpose().mul_vec(&y)?;
        return Ok(IntegralSolution::Integral(x));
    }
    let mut aug = a.to_rows();
    for (row, &bi) in aug.iter_mut().zip(b) {
        row.push(bi);
    }
    if rank_of_rows(&aug, a.cols + 1)? == k {
        Ok(IntegralSolution::RationalOnly)
    } else {
        Ok(IntegralSolution::Inconsistent)
    }
}

/// Integer coordinates on the linear span of a set of vectors.
///
/// `phi` (d×n) restricted to the saturated span lattice is an isomorphism
/// onto `Z^d`; `orthogonal` is a Hermite basis of the annihilator of the span.
/// `phiᵀ` sends primitive vectors of `Z^d` to primitive vectors of `Zⁿ`.
#[derive(Debug, Clone)]
pub(crate) struct SpanCoordinates {
    pub dim: usize,
    pub phi: Vec<Vec<i64>>,
    pub orthogonal: Vec<Vec<i64>>,
}

impl SpanCoordinates {
    pub fn new(vectors: &[Vec<i64>], n: usize) -> Result<Self> {
        let nonzero: Vec<Vec<i64>> = vectors.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
        if nonzero.is_empty() {
            return Ok(Self {
                dim: 0,
                phi: Vec::new(),
                orthogonal: LatticeMatrix::identity(n).to_rows(),
            });
        }
        let hf = hermite(&LatticeMatrix::from_rows(&nonzero, n)?.transpose())?;
        let d = hf.rank();
        if d == n {
            return Ok(Self {
                dim: n,
                phi: LatticeMatrix::identity(n).to_rows(),
                orthogonal: Vec::new(),
            });
        }
        let phi = (0..d).map(|r| hf.u.row(r).to_vec()).collect();
        let orth: Vec<Vec<i64>> = (d..n).map(|r| hf.u.row(r).to_vec()).collect();
        Ok(Self {
            dim: d,
            phi,
            orthogonal: hermite_basis(&orth, n)?,
        })
    }

    pub fn project(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.phi.iter().map(|row| dot(row, x)).collect()
    }

    /// `phiᵀ w`: lifts a functional on the span coordinates back to `Zⁿ`.
    pub fn lift(&self, w: &[i64], n: usize) -> Result<Vec<i64>> {
        let mut out = vec![0i64; n];
        for (wj, row) in w.iter().zip(&self.phi) {
            for (o, &r) in out.iter_mut().zip(row) {
                *o = add(*o, mul(*wj, r)?)?;
            }
        }
        Ok(out)
    }
}

/// Reduces `x` modulo the lattice with Hermite basis `basis`, giving the
/// canonical representative whose pivot entries lie in `[0, pivot)`.
pub(crate) fn reduce_modulo(x: &[i64], basis: &[Vec<i64>]) -> Result<Vec<i64>> {
    let mut out = x.to_vec();
    for row in basis {
        let Some(p) = row.iter().position(|&v| v != 0) else {
            continue;
        };
        let q = out[p].div_euclid(row[p]);
        if q != 0 {
            for (o, &r) in out.iter_mut().zip(row) {
                *o = sub(*o, mul(q, r)?)?;
            }
        }
    }
    Ok(out)
}
