//! Graded vector spaces and homogeneous maps between them.
//!
//! Global coordinates of a [`GradedSpace`] list the components by ascending
//! degree, and within a component follow the label order. Every other module
//! writes vectors and maps in this frame.

use std::collections::BTreeMap;
use std::ops::Range;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::{axpy, is_zero_vec, zero_vec, Matrix, Rational, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub degree: i32,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Component>", into = "Vec<Component>")]
pub struct GradedSpace {
    components: Vec<Component>,
}

impl TryFrom<Vec<Component>> for GradedSpace {
    type Error = Error;
    fn try_from(components: Vec<Component>) -> Result<Self> {
        GradedSpace::new(components)
    }
}

impl From<GradedSpace> for Vec<Component> {
    fn from(s: GradedSpace) -> Self {
        s.components
    }
}

impl GradedSpace {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        for w in components.windows(2) {
            if w[0].degree >= w[1].degree {
                return Err(Error::Invalid("component degrees must be strictly increasing".into()));
            }
        }
        if let Some(c) = components.iter().find(|c| c.labels.is_empty()) {
            return Err(Error::Invalid(format!("degree {} is listed with no basis vectors", c.degree)));
        }
        Ok(GradedSpace { components })
    }

    /// Space with the given `(degree, dimension)` components and generated labels `x1, x2, ...`.
    pub fn from_dims(dims: &[(i32, usize)]) -> Self {
        let mut sorted: Vec<(i32, usize)> = dims.iter().copied().filter(|&(_, d)| d > 0).collect();
        sorted.sort_by_key(|&(deg, _)| deg);
        let mut next = 1;
        let components = sorted
            .into_iter()
            .map(|(degree, d)| {
                let labels = (next..next + d).map(|i| format!("x{i}")).collect();
                next += d;
                Component { degree, labels }
            })
            .collect();
        GradedSpace::new(components).expect("generated components are well formed")
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.labels.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.iter().map(|c| c.degree)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.components.first().map(|c| c.degree)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.components.last().map(|c| c.degree)
    }

    pub fn dim_of(&self, degree: i32) -> usize {
        self.component(degree).map_or(0, |c| c.labels.len())
    }

    pub fn component(&self, degree: i32) -> Option<&Component> {
        self.components.iter().find(|c| c.degree == degree)
    }

    /// Global coordinate range of the degree component (empty if absent).
    pub fn range(&self, degree: i32) -> Range<usize> {
        let mut start = 0;
        for c in &self.components {
            if c.degree == degree {
                return start..start + c.labels.len();
            }
            if c.degree > degree {
                return start..start;
            }
            start += c.labels.len();
        }
        start..start
    }

    /// Coordinates of all components of degree `>= degree`.
    pub fn range_from(&self, degree: i32) -> Range<usize> {
        let start: usize = self.components.iter().filter(|c| c.degree < degree).map(|c| c.labels.len()).sum();
        start..self.dim()
    }

    pub fn degree_of(&self, index: usize) -> i32 {
        let mut start = 0;
        for c in &self.components {
            start += c.labels.len();
            if index < start {
                return c.degree;
            }
        }
        panic!("index {index} out of range for a space of dimension {}", self.dim())
    }

    pub fn degrees_by_index(&self) -> Vec<i32> {
        self.components.iter().flat_map(|c| std::iter::repeat_n(c.degree, c.labels.len())).collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.components.iter().flat_map(|c| c.labels.iter().map(String::as_str))
    }

    pub fn label(&self, index: usize) -> &str {
        self.labels().nth(index).expect("index in range")
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels().position(|l| l == label)
    }

    /// The components of degree `< bound`.
    pub fn below(&self, bound: i32) -> GradedSpace {
        GradedSpace { components: self.components.iter().filter(|c| c.degree < bound).cloned().collect() }
    }

    /// Appends a component above all existing degrees; empty label lists are skipped.
    pub fn with_component(&self, degree: i32, labels: Vec<String>) -> Result<GradedSpace> {
        let mut components = self.components.clone();
        if !labels.is_empty() {
            components.push(Component { degree, labels });
        }
        GradedSpace::new(components)
    }

    /// Vector in `self` padded with zeros to the coordinates of `larger`,
    /// which must extend `self` by components of higher degree.
    pub fn embed_prefix(&self, v: &[Rational], larger: &GradedSpace) -> Vec<Rational> {
        debug_assert!(larger.components.starts_with(&self.components));
        let mut out = zero_vec(larger.dim());
        out[..v.len()].clone_from_slice(v);
        out
    }
}

/// Layout of the coordinates of `Hom^d(U, W)`: one block per source
/// component with a non-empty target, entries row-major inside a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomLayout {
    pub degree: i32,
    /// (source degree, offset, rows = dim W^{j+d}, cols = dim U^j)
    pub blocks: Vec<(i32, usize, usize, usize)>,
    pub dim: usize,
}

impl HomLayout {
    pub fn new(source: &GradedSpace, target: &GradedSpace, degree: i32) -> Self {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for c in source.components() {
            let rows = target.dim_of(c.degree + degree);
            if rows == 0 {
                continue;
            }
            let cols = c.labels.len();
            blocks.push((c.degree, offset, rows, cols));
            offset += rows * cols;
        }
        HomLayout { degree, blocks, dim: offset }
    }
}

/// Dimension of `Hom^d(U, W)`.
pub fn hom_dim(source: &GradedSpace, target: &GradedSpace, degree: i32) -> usize {
    HomLayout::new(source, target, degree).dim
}

/// A linear map `U → W` that raises degrees by exactly `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousMap {
    source: GradedSpace,
    target: GradedSpace,
    degree: i32,
    /// keyed by source degree; block maps U^i → W^{i+degree}
    blocks: BTreeMap<i32, Matrix>,
}

impl HomogeneousMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: i32) -> Self {
        HomogeneousMap { source: source.clone(), target: target.clone(), degree, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let blocks = space.components().iter().map(|c| (c.degree, Matrix::identity(c.labels.len()))).collect();
        HomogeneousMap { source: space.clone(), target: space.clone(), degree: 0, blocks }
    }

    pub fn from_blocks(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        let mut m = Self::zero(source, target, degree);
        for (src, b) in blocks {
            m.set_block(src, b)?;
        }
        Ok(m)
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix> {
        &self.blocks
    }

    pub fn block(&self, source_degree: i32) -> Option<&Matrix> {
        self.blocks.get(&source_degree)
    }

    /// Block out of `source_degree`, zero-filled when absent.
    pub fn block_or_zero(&self, source_degree: i32) -> Matrix {
        self.blocks.get(&source_degree).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.target.dim_of(source_degree + self.degree), self.source.dim_of(source_degree))
        })
    }

    pub fn set_block(&mut self, source_degree: i32, block: Matrix) -> Result<()> {
        let rows = self.target.dim_of(source_degree + self.degree);
        let cols = self.source.dim_of(source_degree);
        if (block.rows(), block.cols()) != (rows, cols) {
            return Err(Error::Dimension(format!(
                "block out of degree {source_degree} must be {rows}x{cols}, got {}x{}",
                block.rows(),
                block.cols()
            )));
        }
        if rows == 0 || cols == 0 || block.is_zero() {
            self.blocks.remove(&source_degree);
        } else {
            self.blocks.insert(source_degree, block);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    pub fn layout(&self) -> HomLayout {
        HomLayout::new(&self.source, &self.target, self.degree)
    }

    /// Coordinates in the `hom_basis` order.
    pub fn to_coords(&self) -> Vec<Rational> {
        let layout = self.layout();
        let mut out = zero_vec(layout.dim);
        for &(src, offset, rows, cols) in &layout.blocks {
            if let Some(b) = self.blocks.get(&src) {
                debug_assert_eq!((b.rows(), b.cols()), (rows, cols));
                out[offset..offset + rows * cols].clone_from_slice(b.entries());
            }
        }
        out
    }

    pub fn from_coords(source: &GradedSpace, target: &GradedSpace, degree: i32, coords: &[Rational]) -> Result<Self> {
        let layout = HomLayout::new(source, target, degree);
        if coords.len() != layout.dim {
            return Err(Error::Dimension(format!("{} coordinates for a {}-dimensional Hom space", coords.len(), layout.dim)));
        }
        let mut m = Self::zero(source, target, degree);
        for &(src, offset, rows, cols) in &layout.blocks {
            let b = Matrix::from_vec(rows, cols, coords[offset..offset + rows * cols].to_vec())?;
            m.set_block(src, b)?;
        }
        Ok(m)
    }

    /// Dense `dim W × dim U` matrix in global coordinates.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.dim(), self.source.dim());
        for (&src, b) in &self.blocks {
            let r0 = self.target.range(src + self.degree).start;
            let c0 = self.source.range(src).start;
            m.set_block(r0, c0, b);
        }
        m
    }

    /// Degree-`degree` part of a dense matrix; errors if the matrix has entries of other degrees.
    pub fn from_matrix(source: &GradedSpace, target: &GradedSpace, degree: i32, m: &Matrix) -> Result<Self> {
        let out = Self::homogeneous_part(source, target, degree, m);
        if out.to_matrix() != *m {
            return Err(Error::Invalid(format!("matrix is not homogeneous of degree {degree}")));
        }
        Ok(out)
    }

    /// Degree-`degree` component of an arbitrary dense matrix.
    pub fn homogeneous_part(source: &GradedSpace, target: &GradedSpace, degree: i32, m: &Matrix) -> Self {
        assert_eq!((m.rows(), m.cols()), (target.dim(), source.dim()));
        let mut out = Self::zero(source, target, degree);
        for c in source.components() {
            let tr = target.range(c.degree + degree);
            if tr.is_empty() {
                continue;
            }
            let sr = source.range(c.degree);
            let b = m.block(tr.start, sr.start, tr.len(), sr.len());
            out.set_block(c.degree, b).expect("block has the component shape");
        }
        out
    }

    /// Image of a vector given in source global coordinates.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.source.dim());
        let mut out = zero_vec(self.target.dim());
        for (&src, b) in &self.blocks {
            let sr = self.source.range(src);
            let tr = self.target.range(src + self.degree);
            let x = &v[sr];
            if is_zero_vec(x) {
                continue;
            }
            for (i, y) in b.mul_vec(x).into_iter().enumerate() {
                out[tr.start + i] += y;
            }
        }
        out
    }

    /// Image of the `index`-th source basis vector.
    pub fn apply_basis(&self, index: usize) -> Vec<Rational> {
        let deg = self.source.degree_of(index);
        let mut out = zero_vec(self.target.dim());
        if let Some(b) = self.blocks.get(&deg) {
            let col = index - self.source.range(deg).start;
            let t0 = self.target.range(deg + self.degree).start;
            for i in 0..b.rows() {
                out[t0 + i] = b[(i, col)].clone();
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &HomogeneousMap) -> Result<HomogeneousMap> {
        if other.target != self.source {
            return Err(Error::Dimension("composition of maps with mismatched spaces".into()));
        }
        let mut out = Self::zero(&other.source, &self.target, self.degree + other.degree);
        for (&src, b) in &other.blocks {
            if let Some(a) = self.blocks.get(&(src + other.degree)) {
                out.set_block(src, a.mul(b))?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &HomogeneousMap) -> Result<HomogeneousMap> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&src, b) in &other.blocks {
            let sum = out.block_or_zero(src).add(b);
            out.set_block(src, sum)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> HomogeneousMap {
        let mut out = Self::zero(&self.source, &self.target, self.degree);
        for (&src, b) in &self.blocks {
            out.set_block(src, b.scale(c)).expect("same shape");
        }
        out
    }

    fn check_same_shape(&self, other: &HomogeneousMap) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::Dimension("maps live in different Hom spaces".into()));
        }
        Ok(())
    }
}

/// Elementary matrix units spanning `Hom^degree(U, W)`, in coordinate order.
pub fn hom_basis(source: &GradedSpace, target: &GradedSpace, degree: i32) -> Vec<HomogeneousMap> {
    let layout = HomLayout::new(source, target, degree);
    (0..layout.dim)
        .map(|k| {
            let mut c = zero_vec(layout.dim);
            c[k] = Rational::one();
            HomogeneousMap::from_coords(source, target, degree, &c).expect("layout-sized coordinates")
        })
        .collect()
}

/// Basis `e_a ∧ e_b` (`a < b` in global order) of the degree-`degree` part of Λ²U.
pub fn wedge_basis(space: &GradedSpace, degree: i32) -> Vec<(usize, usize)> {
    let degs = space.degrees_by_index();
    let n = degs.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if degs[a] + degs[b] == degree {
                out.push((a, b));
            }
        }
    }
    out
}

/// Homogeneous degree-`j` endomorphisms, as a subspace of `End(m)` in
/// row-major flattened `n × n` coordinates.
pub fn gl_degree_subspace(space: &GradedSpace, j: i32) -> Subspace {
    let n = space.dim();
    let vectors = hom_basis(space, space, j).iter().map(|e| e.to_matrix().entries().to_vec()).collect();
    Subspace::span(n * n, vectors)
}

/// An endomorphism of a graded space written as a sum of homogeneous parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    space: GradedSpace,
    summands: BTreeMap<i32, HomogeneousMap>,
}

impl GradedMap {
    pub fn zero(space: &GradedSpace) -> Self {
        GradedMap { space: space.clone(), summands: BTreeMap::new() }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let mut g = Self::zero(space);
        g.summands.insert(0, HomogeneousMap::identity(space));
        g
    }

    pub fn from_summands(space: &GradedSpace, parts: impl IntoIterator<Item = HomogeneousMap>) -> Result<Self> {
        let mut g = Self::zero(space);
        for p in parts {
            if p.source() != space || p.target() != space {
                return Err(Error::Dimension("summand is not an endomorphism of the graded space".into()));
            }
            g.add_summand(p)?;
        }
        Ok(g)
    }

    fn add_summand(&mut self, p: HomogeneousMap) -> Result<()> {
        let d = p.degree();
        let new = match self.summands.remove(&d) {
            Some(old) => old.add(&p)?,
            None => p,
        };
        if !new.is_zero() {
            self.summands.insert(d, new);
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn summands(&self) -> &BTreeMap<i32, HomogeneousMap> {
        &self.summands
    }

    /// Homogeneous component of the given degree (zero if absent).
    pub fn component(&self, degree: i32) -> HomogeneousMap {
        self.summands.get(&degree).cloned().unwrap_or_else(|| HomogeneousMap::zero(&self.space, &self.space, degree))
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.space.dim();
        self.summands.values().fold(Matrix::zeros(n, n), |acc, p| acc.add(&p.to_matrix()))
    }

    pub fn from_matrix(space: &GradedSpace, m: &Matrix) -> Self {
        let (lo, hi) = match (space.min_degree(), space.max_degree()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Self::zero(space),
        };
        let parts = (lo - hi..=hi - lo).map(|d| HomogeneousMap::homogeneous_part(space, space, d, m));
        Self::from_summands(space, parts).expect("parts are endomorphisms")
    }

    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.space != other.space {
            return Err(Error::Dimension("graded maps on different spaces".into()));
        }
        let mut out = Self::zero(&self.space);
        for a in self.summands.values() {
            for b in other.summands.values() {
                out.add_summand(a.compose(b)?)?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        let mut out = self.clone();
        for p in other.summands.values() {
            out.add_summand(p.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        let mut out = Self::zero(&self.space);
        if !c.is_zero() {
            for (&d, p) in &self.summands {
                out.summands.insert(d, p.scale(c));
            }
        }
        out
    }

    /// Keeps only the homogeneous parts of degree `< bound`.
    pub fn truncate_below(&self, bound: i32) -> GradedMap {
        GradedMap {
            space: self.space.clone(),
            summands: self.summands.iter().filter(|(&d, _)| d < bound).map(|(&d, p)| (d, p.clone())).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.space)
    }

    /// True when the map is `Id + A` with `A` of degrees `>= 1` only.
    pub fn is_unipotent(&self) -> bool {
        self.summands.keys().all(|&d| d >= 0) && self.component(0) == HomogeneousMap::identity(&self.space)
    }

    /// True when the map is `Id + A` with `A ∈ gl_m`.
    pub fn is_in_gl(&self, m: i32) -> bool {
        self.is_unipotent() && self.summands.keys().all(|&d| d == 0 || d >= m)
    }

    /// `(Id + A)⁻¹ = Id − A + A² − …`, finite because positive-degree maps on a bounded grading are nilpotent.
    pub fn unipotent_inverse(&self) -> Result<GradedMap> {
        if !self.is_unipotent() {
            return Err(Error::Invalid("degree-0 part must be the identity and all other parts of positive degree".into()));
        }
        let id = Self::identity(&self.space);
        let minus_a = self.add(&id.scale(&-Rational::one()))?.scale(&-Rational::one());
        let mut out = id.clone();
        let mut power = id;
        loop {
            power = power.compose(&minus_a)?;
            if power.summands.is_empty() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }
}

/// Sum `Σ c_k v_k` of homogeneous maps sharing a Hom space.
pub fn linear_combination(maps: &[HomogeneousMap], coeffs: &[Rational]) -> Option<HomogeneousMap> {
    let first = maps.first()?;
    let mut acc = zero_vec(first.layout().dim);
    for (m, c) in maps.iter().zip(coeffs) {
        axpy(&mut acc, c, &m.to_coords());
    }
    HomogeneousMap::from_coords(first.source(), first.target(), first.degree(), &acc).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::int;

    fn space_21() -> GradedSpace {
        GradedSpace::from_dims(&[(-1, 2), (-2, 1)])
    }

    #[test]
    fn coordinate_order_is_degree_ascending() {
        let m = space_21();
        assert_eq!(m.degrees_by_index(), vec![-2, -1, -1]);
        assert_eq!(m.range(-1), 1..3);
        assert_eq!(m.range(0), 3..3);
        assert_eq!(m.range_from(-1), 1..3);
    }

    #[test]
    fn hom_basis_counts() {
        let a2 = GradedSpace::from_dims(&[(-1, 2)]);
        assert_eq!(hom_basis(&a2, &a2, 0).len(), 4);
        assert!(hom_basis(&a2, &a2, 5).is_empty());
        let m = space_21();
        let b = hom_basis(&m, &m, 1);
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|e| e.blocks().keys().eq([-2].iter())));
    }

    #[test]
    fn hom_basis_is_stable() {
        let m = space_21();
        assert_eq!(hom_basis(&m, &m, -1), hom_basis(&m, &m, -1));
    }

    #[test]
    fn wedge_basis_examples() {
        let a2 = GradedSpace::from_dims(&[(-1, 2)]);
        assert_eq!(wedge_basis(&a2, -2), vec![(0, 1)]);
        assert_eq!(wedge_basis(&space_21(), -3), vec![(0, 1), (0, 2)]);
        assert!(wedge_basis(&a2, -3).is_empty());
    }

    #[test]
    fn gl_degree_dims() {
        let a2 = GradedSpace::from_dims(&[(-1, 2)]);
        assert_eq!(gl_degree_subspace(&a2, 0).dim(), 4);
        assert_eq!(gl_degree_subspace(&a2, 1).dim(), 0);
        assert_eq!(gl_degree_subspace(&space_21(), 1).dim(), 2);
    }

    #[test]
    fn gl_gradation_is_multiplicative() {
        let m = GradedSpace::from_dims(&[(-2, 1), (-1, 2), (0, 1), (1, 1)]);
        for j in -2..=2 {
            for r in -2..=2 {
                let target = gl_degree_subspace(&m, j + r);
                for a in hom_basis(&m, &m, j) {
                    for b in hom_basis(&m, &m, r) {
                        let ab = a.to_matrix().mul(&b.to_matrix());
                        let ba = b.to_matrix().mul(&a.to_matrix());
                        assert!(target.contains(ab.entries()));
                        assert!(target.contains(ab.sub(&ba).entries()));
                    }
                }
            }
        }
    }

    #[test]
    fn coords_roundtrip() {
        let m = space_21();
        for e in hom_basis(&m, &m, 1) {
            let back = HomogeneousMap::from_coords(&m, &m, 1, &e.to_coords()).unwrap();
            assert_eq!(back, e);
            assert_eq!(HomogeneousMap::from_matrix(&m, &m, 1, &e.to_matrix()).unwrap(), e);
        }
        assert!(HomogeneousMap::from_matrix(&m, &m, 1, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn unipotent_inverse_examples() {
        let m = GradedSpace::from_dims(&[(-2, 1), (-1, 2), (0, 1)]);
        let id = GradedMap::identity(&m);
        assert_eq!(id.unipotent_inverse().unwrap(), id);

        // top positive degree: A² = 0
        let a2 = hom_basis(&m, &m, 2).remove(0);
        let g = GradedMap::from_summands(&m, [HomogeneousMap::identity(&m), a2.clone()]).unwrap();
        let expected = GradedMap::from_summands(&m, [HomogeneousMap::identity(&m), a2.scale(&int(-1))]).unwrap();
        assert_eq!(g.unipotent_inverse().unwrap(), expected);

        // A = A¹ + A²: degree-2 part of the inverse is −A² + A¹A¹
        let mut a1 = HomogeneousMap::zero(&m, &m, 1);
        a1.set_block(-2, Matrix::from_i64(&[&[1], &[2]])).unwrap();
        a1.set_block(-1, Matrix::from_i64(&[&[3, -1]])).unwrap();
        let mut a2 = HomogeneousMap::zero(&m, &m, 2);
        a2.set_block(-2, Matrix::from_i64(&[&[5]])).unwrap();
        let g = GradedMap::from_summands(&m, [HomogeneousMap::identity(&m), a1.clone(), a2.clone()]).unwrap();
        let inv = g.unipotent_inverse().unwrap();
        assert_eq!(inv.component(1), a1.scale(&int(-1)));
        assert_eq!(inv.component(2), a2.scale(&int(-1)).add(&a1.compose(&a1).unwrap()).unwrap());
        assert!(g.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&g).unwrap().is_identity());
    }

    #[test]
    fn unipotent_inverse_rejects_non_identity_degree_zero() {
        let m = space_21();
        let g = GradedMap::identity(&m).scale(&int(2));
        assert!(g.unipotent_inverse().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn model() -> GradedSpace {
            GradedSpace::from_dims(&[(-3, 1), (-2, 2), (-1, 2)])
        }

        /// `Id + Σ A_d` with small integer entries in degrees `1..=2`.
        fn unipotent() -> impl Strategy<Value = GradedMap> {
            let m = model();
            let dims: Vec<usize> = (1..=2).map(|d| HomLayout::new(&m, &m, d).dim).collect();
            (proptest::collection::vec(-2i64..=2, dims[0]), proptest::collection::vec(-2i64..=2, dims[1])).prop_map(move |(a, b)| {
                let part = |d: i32, v: Vec<i64>| {
                    let coords: Vec<Rational> = v.into_iter().map(int).collect();
                    HomogeneousMap::from_coords(&m, &m, d, &coords).unwrap()
                };
                GradedMap::from_summands(&m, [HomogeneousMap::identity(&m), part(1, a), part(2, b)]).unwrap()
            })
        }

        proptest! {
            #[test]
            fn unipotent_inverse_is_two_sided(g in unipotent()) {
                let inv = g.unipotent_inverse().unwrap();
                prop_assert!(g.compose(&inv).unwrap().is_identity());
                prop_assert!(inv.compose(&g).unwrap().is_identity());
            }

            #[test]
            fn compose_matches_matrix_product(g in unipotent(), h in unipotent()) {
                let gh = g.compose(&h).unwrap();
                prop_assert_eq!(gh.to_matrix(), g.to_matrix().mul(&h.to_matrix()));
                prop_assert_eq!(GradedMap::from_matrix(g.space(), &gh.to_matrix()), gh);
            }
        }
    }
}
