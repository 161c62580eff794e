//! Exact dense linear algebra over ℚ.
//!
//! Subspaces are stored by their reduced row echelon basis, which is unique,
//! so equality of subspaces is plain equality of the stored matrices.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `y += c * x`
pub fn axpy(y: &mut [Rational], c: &Rational, x: &[Rational]) {
    debug_assert_eq!(y.len(), x.len());
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}

pub fn scale_vec(c: &Rational, x: &[Rational]) -> Vec<Rational> {
    x.iter().map(|xi| c * xi).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors; `cols` fixes the width when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| int(x))
            })
            .collect();
        Matrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: add_vec(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: sub_vec(&self.data, &other.data) }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: scale_vec(c, &self.data) }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Copy of the block `rows × cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Columns `cols` of the matrix, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form with zero rows dropped, plus the pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<Rational>> = self.row_vecs();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut().skip(c) {
                *x *= &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = -row[c].clone();
                    axpy(&mut row[c..], &f, &pivot_row[c..]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (Matrix::from_rows(self.cols, rows).expect("rows have matrix width"), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// The unique `x` with `self · x = b`, or an error when there is none or it is not unique.
    pub fn solve_unique(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent("linear system has no solution".into()));
        }
        if pivots.len() != self.cols {
            return Err(Error::Inconsistent("linear system has no unique solution".into()));
        }
        Ok((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with zero rows dropped.
pub fn rref_canonicalize(m: &Matrix) -> Matrix {
    m.rref_with_pivots().0
}

/// `{x : m·x = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = m.rref_with_pivots();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = unit_vec(n, free);
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    Subspace::span(n, basis)
}

/// A linear subspace of ℚⁿ in canonical (RREF) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (basis, pivots) = m.rref_with_pivots();
        Subspace { ambient: m.cols(), basis, pivots }
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Self {
        Self::row_space(&Matrix::from_rows(ambient, vectors).expect("span of vectors of the ambient length"))
    }

    /// Span of the standard unit vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::span(ambient, indices.into_iter().map(|i| unit_vec(ambient, i)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (k, c) in coords.iter().enumerate() {
            axpy(&mut residual, &-c.clone(), self.basis.row(k));
        }
        is_zero_vec(&residual).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// The vector with the given coordinates in the RREF basis.
    pub fn combine(&self, coords: &[Rational]) -> Vec<Rational> {
        assert_eq!(coords.len(), self.dim());
        let mut v = zero_vec(self.ambient);
        for (k, c) in coords.iter().enumerate() {
            axpy(&mut v, c, self.basis.row(k));
        }
        v
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::row_space(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // a·B_self = b·B_other  <=>  (a, -b) in the left kernel of [B_self; B_other]
        let stacked = self.basis.vstack(&other.basis.scale(&-Rational::one()));
        let left = kernel(&stacked.transpose());
        let vectors = left
            .basis_vectors()
            .into_iter()
            .map(|ab| self.combine(&ab[..self.dim()]))
            .collect();
        Subspace::span(self.ambient, vectors)
    }

    /// Image under `m` (which maps the ambient space, `m.cols() == ambient`).
    pub fn image(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::span(m.rows(), self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect())
    }

    /// Coordinates of `self`'s basis vectors in `within`'s RREF basis, as rows.
    fn coords_in(&self, within: &Subspace) -> Result<Matrix> {
        let rows = self
            .basis_vectors()
            .iter()
            .map(|v| within.coordinates(v).ok_or_else(|| Error::Containment("subspace is not contained in the enclosing space".into())))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(within.dim(), rows)
    }

    /// Deterministic complement of `self` inside `within`: the basis rows of
    /// `within` whose indices are the non-pivot columns of `self` written in
    /// `within`-coordinates.
    pub fn complement(&self, within: &Subspace) -> Result<Subspace> {
        let c = self.coords_in(within)?;
        let (_, pivots) = c.rref_with_pivots();
        let rows = (0..within.dim())
            .filter(|j| !pivots.contains(j))
            .map(|j| within.basis.row(j).to_vec())
            .collect();
        Ok(Subspace::span(self.ambient, rows))
    }

    /// Indices into `within`'s basis that span the canonical complement of `self`.
    pub fn complement_indices(&self, within: &Subspace) -> Result<Vec<usize>> {
        let (_, pivots) = self.coords_in(within)?.rref_with_pivots();
        Ok((0..within.dim()).filter(|j| !pivots.contains(j)).collect())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}, {:?})", self.dim(), self.ambient, self.basis)
    }
}

/// Coordinates of the class of `v` in `within / modulo`, expressed in the
/// canonical complement basis of `modulo` inside `within`.
pub fn quotient_coords(v: &[Rational], modulo: &Subspace, within: &Subspace) -> Result<Vec<Rational>> {
    QuotientFrame::new(modulo, within)?.coords(v)
}

/// Precomputed data for repeated quotient coordinate computations.
#[derive(Clone, Debug)]
pub struct QuotientFrame {
    within: Subspace,
    /// `modulo` written in `within`-coordinates, in RREF.
    modulo_coords: Matrix,
    modulo_pivots: Vec<usize>,
    free: Vec<usize>,
}

impl QuotientFrame {
    pub fn new(modulo: &Subspace, within: &Subspace) -> Result<Self> {
        let (modulo_coords, modulo_pivots) = modulo.coords_in(within)?.rref_with_pivots();
        let free = (0..within.dim()).filter(|j| !modulo_pivots.contains(j)).collect();
        Ok(QuotientFrame { within: within.clone(), modulo_coords, modulo_pivots, free })
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Ambient vectors spanning the canonical complement, in order.
    pub fn complement_vectors(&self) -> Vec<Vec<Rational>> {
        self.free.iter().map(|&j| self.within.basis().row(j).to_vec()).collect()
    }

    pub fn complement(&self) -> Subspace {
        Subspace::span(self.within.ambient_dim(), self.complement_vectors())
    }

    pub fn coords(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        let mut c = self
            .within
            .coordinates(v)
            .ok_or_else(|| Error::Containment("vector does not lie in the enclosing space".into()))?;
        for (k, &p) in self.modulo_pivots.iter().enumerate() {
            let f = -c[p].clone();
            axpy(&mut c, &f, self.modulo_coords.row(k));
        }
        Ok(self.free.iter().map(|&j| c[j].clone()).collect())
    }

    /// Ambient representative of the class with the given quotient coordinates.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        assert_eq!(coords.len(), self.dim());
        let mut v = zero_vec(self.within.ambient_dim());
        for (c, &j) in coords.iter().zip(&self.free) {
            axpy(&mut v, c, self.within.basis().row(j));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_drops_dependent_rows() {
        let m = Matrix::from_i64(&[&[2, 4], &[1, 2]]);
        assert_eq!(rref_canonicalize(&m), Matrix::from_i64(&[&[1, 2]]));
    }

    #[test]
    fn rref_of_identity_and_zero() {
        assert_eq!(rref_canonicalize(&Matrix::identity(3)), Matrix::identity(3));
        let z = rref_canonicalize(&Matrix::zeros(2, 2));
        assert_eq!((z.rows(), z.cols()), (0, 2));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::identity(2)).is_zero());
        assert_eq!(kernel(&Matrix::zeros(2, 3)), Subspace::full(3));
        let k = kernel(&Matrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis().row(0), &[int(1), frac(-1, 2)][..]);
        assert_eq!(k, Subspace::span(2, vec![v(&[-2, 1])]));
    }

    #[test]
    fn complement_examples() {
        let e1 = Subspace::coordinate(2, [0]);
        assert_eq!(e1.complement(&Subspace::full(2)).unwrap(), Subspace::coordinate(2, [1]));
        let f = Subspace::full(3);
        assert!(f.complement(&f).unwrap().is_zero());
        let s = Subspace::span(3, vec![v(&[1, 1, 0])]);
        assert_eq!(s.complement(&f).unwrap(), Subspace::coordinate(3, [1, 2]));
    }

    #[test]
    fn complement_requires_containment() {
        let s = Subspace::coordinate(3, [0]);
        let w = Subspace::coordinate(3, [1, 2]);
        assert!(matches!(s.complement(&w), Err(Error::Containment(_))));
    }

    #[test]
    fn quotient_coord_examples() {
        let full = Subspace::full(3);
        let e3 = Subspace::coordinate(3, [2]);
        assert_eq!(quotient_coords(&v(&[1, 2, 3]), &e3, &full).unwrap(), v(&[1, 2]));
        assert_eq!(quotient_coords(&v(&[0, 0, 5]), &e3, &full).unwrap(), v(&[0, 0]));
        let w = Subspace::span(3, vec![v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let x = v(&[2, 2, 7]);
        assert_eq!(quotient_coords(&x, &Subspace::zero(3), &w).unwrap(), w.coordinates(&x).unwrap());
        assert!(quotient_coords(&v(&[1, 0, 0]), &e3, &w).is_err());
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::coordinate(3, [0, 1]);
        let b = Subspace::span(3, vec![v(&[1, 1, 1]), v(&[0, 1, 0])]);
        assert_eq!(a.intersection(&b), Subspace::coordinate(3, [1]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(m.solve_unique(&v(&[3, 2])).unwrap(), v(&[1, 1]));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(" 4 ").unwrap(), int(4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (0usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c)
                .prop_map(move |d| Matrix::from_vec(r, c, d.into_iter().map(int).collect()).unwrap())
        })
    }

    fn matrix_pair() -> impl Strategy<Value = (Matrix, Matrix)> {
        (0usize..5, 0usize..5, 1usize..6).prop_flat_map(|(r1, r2, c)| {
            let m = move |r: usize| {
                proptest::collection::vec(-3i64..=3, r * c)
                    .prop_map(move |d| Matrix::from_vec(r, c, d.into_iter().map(int).collect()).unwrap())
            };
            (m(r1), m(r2))
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent_and_preserves_row_space(m in small_matrix()) {
            let r = rref_canonicalize(&m);
            prop_assert_eq!(rref_canonicalize(&r), r.clone());
            prop_assert_eq!(Subspace::row_space(&m), Subspace::row_space(&r));
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(kernel(&m).dim() + m.rank(), m.cols());
            for b in kernel(&m).basis_vectors() {
                prop_assert!(is_zero_vec(&m.mul_vec(&b)));
            }
        }

        #[test]
        fn complement_splits((a, b) in matrix_pair()) {
            let s = Subspace::row_space(&a);
            let w = s.sum(&Subspace::row_space(&b));
            let c = s.complement(&w).unwrap();
            prop_assert_eq!(s.dim() + c.dim(), w.dim());
            prop_assert_eq!(s.sum(&c), w.clone());
            for x in w.basis_vectors() {
                let q = quotient_coords(&x, &s, &w).unwrap();
                prop_assert_eq!(is_zero_vec(&q), s.contains(&x));
            }
        }
    }
}
