//! Filtered vector spaces, adapted gradations, quasi-gradations and m-lifts.
//!
//! A filtration `V_lo ⊇ … ⊇ V_hi` of `ℚ^N` is modelled on a graded space `m`
//! with degrees in `[lo, hi]`. The quotient `V_i / V_{i+m}` is written in the
//! canonical complement basis of `V_{i+m}` inside `V_i`; every block of an
//! m-lift is a matrix in those coordinates.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedSpace, HomogeneousMap};
use crate::linear::{Matrix, QuotientFrame, Rational, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredSpace {
    ambient: usize,
    lo: i32,
    chain: Vec<Subspace>,
}

impl FilteredSpace {
    /// `chain[j]` is `V_{lo + j}`; the first entry must be the whole space.
    pub fn new(ambient: usize, lo: i32, chain: Vec<Subspace>) -> Result<Self> {
        if chain.is_empty() || chain[0] != Subspace::full(ambient) {
            return Err(Error::Invalid("the filtration must start with the whole space".into()));
        }
        if chain.iter().any(|s| s.ambient_dim() != ambient) {
            return Err(Error::Dimension("filtration subspaces live in different spaces".into()));
        }
        for (j, w) in chain.windows(2).enumerate() {
            if !w[0].contains_subspace(&w[1]) {
                return Err(Error::Containment(format!("V_{} is not inside V_{}", lo + j as i32 + 1, lo + j as i32)));
            }
        }
        Ok(FilteredSpace { ambient, lo, chain })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.chain.len() as i32 - 1
    }

    /// `hi − lo + 1`: the degree at which quasi-gradations are gradations.
    pub fn full_degree(&self) -> usize {
        self.chain.len()
    }

    /// `V_i`, with `V_i = V` below the range and `0` above it.
    pub fn v(&self, i: i32) -> Subspace {
        if i < self.lo {
            Subspace::full(self.ambient)
        } else if i > self.hi() {
            Subspace::zero(self.ambient)
        } else {
            self.chain[(i - self.lo) as usize].clone()
        }
    }

    pub fn gr_dim(&self, i: i32) -> usize {
        self.v(i).dim() - self.v(i + 1).dim()
    }

    /// Coordinates on `V_i / V_{i+m}`.
    pub fn quotient(&self, i: i32, m: usize) -> QuotientFrame {
        QuotientFrame::new(&self.v(i + m as i32), &self.v(i)).expect("filtration is decreasing")
    }

    /// The map `V_{i1}/V_{i1+m1} → V_{i2}/V_{i2+m2}` induced by inclusion.
    pub fn quotient_map(&self, (i1, m1): (i32, usize), (i2, m2): (i32, usize)) -> Matrix {
        let from = self.quotient(i1, m1);
        let to = self.quotient(i2, m2);
        let columns: Vec<Vec<Rational>> = from
            .complement_vectors()
            .iter()
            .map(|c| to.coords(c).expect("induced map is well defined"))
            .collect();
        Matrix::from_columns(to.dim(), &columns)
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }
}

/// The model graded space together with isomorphisms `u^i : m^i → V_i / V_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFrame {
    filtration: FilteredSpace,
    model: GradedSpace,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedFrame {
    pub fn new(filtration: FilteredSpace, model: GradedSpace, blocks: BTreeMap<i32, Matrix>) -> Result<Self> {
        if model.dim() != filtration.ambient_dim() {
            return Err(Error::Dimension("model and filtered space have different dimensions".into()));
        }
        for i in filtration.degrees() {
            let d = filtration.gr_dim(i);
            if model.dim_of(i) != d {
                return Err(Error::Dimension(format!("dim m^{i} differs from dim gr^{i}")));
            }
            if d > 0 {
                let b = blocks.get(&i).ok_or_else(|| Error::Invalid(format!("frame block {i} missing")))?;
                if (b.rows(), b.cols()) != (d, d) || b.inverse().is_none() {
                    return Err(Error::Invalid(format!("frame block {i} is not invertible")));
                }
            }
        }
        if model.degrees().any(|d| !filtration.degrees().contains(&d)) {
            return Err(Error::Invalid("model degrees leave the filtration range".into()));
        }
        Ok(GradedFrame { filtration, model, blocks })
    }

    pub fn filtration(&self) -> &FilteredSpace {
        &self.filtration
    }

    pub fn model(&self) -> &GradedSpace {
        &self.model
    }

    pub fn block(&self, i: i32) -> &Matrix {
        &self.blocks[&i]
    }

    fn present(&self) -> Vec<i32> {
        self.model.degrees().collect()
    }
}

/// `V_i := T(m_i)` and the frame induced by `T` on the associated graded.
pub fn make_filtered_from_graded(model: &GradedSpace, t: &Matrix) -> Result<GradedFrame> {
    let n = model.dim();
    if (t.rows(), t.cols()) != (n, n) || t.inverse().is_none() {
        return Err(Error::Invalid("T must be invertible".into()));
    }
    let degs = model.degrees_by_index();
    for r in 0..n {
        for c in 0..n {
            if degs[r] < degs[c] && !num::Zero::is_zero(&t[(r, c)]) {
                return Err(Error::Invalid("T does not preserve the filtration".into()));
            }
        }
    }
    let (lo, hi) = (model.min_degree().unwrap_or(0), model.max_degree().unwrap_or(0));
    let chain = (lo..=hi)
        .map(|i| Subspace::span(n, model.range_from(i).map(|c| t.column(c)).collect()))
        .collect();
    let filtration = FilteredSpace::new(n, lo, chain)?;
    let mut blocks = BTreeMap::new();
    for i in model.degrees() {
        let q = filtration.quotient(i, 1);
        let columns: Vec<Vec<Rational>> = model.range(i).map(|c| q.coords(&t.column(c))).collect::<Result<_>>()?;
        blocks.insert(i, Matrix::from_columns(q.dim(), &columns));
    }
    GradedFrame::new(filtration, model.clone(), blocks)
}

/// Subspaces `H^i` with `V_i = H^i ⊕ V_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedGradation {
    spaces: Vec<Subspace>,
}

impl AdaptedGradation {
    pub fn new(f: &FilteredSpace, spaces: Vec<Subspace>) -> Result<Self> {
        if spaces.len() != f.full_degree() {
            return Err(Error::Dimension("one subspace per filtration degree is needed".into()));
        }
        for (i, h) in f.degrees().zip(&spaces) {
            let next = f.v(i + 1);
            if h.sum(&next) != f.v(i) || h.dim() + next.dim() != f.v(i).dim() {
                return Err(Error::Invalid(format!("V_{i} is not H^{i} ⊕ V_{}", i + 1)));
            }
        }
        Ok(AdaptedGradation { spaces })
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    /// The gradation viewed as a quasi-gradation of full degree.
    pub fn as_quasi(&self, f: &FilteredSpace) -> QuasiGradation {
        QuasiGradation { degree: f.full_degree(), spaces: self.spaces.clone() }
    }
}

/// Subspaces `H̄^i` with `V_i = H̄^i + V_{i+1}` and `H̄^i ∩ V_{i+1} = V_{i+m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiGradation {
    degree: usize,
    spaces: Vec<Subspace>,
}

impl QuasiGradation {
    pub fn new(f: &FilteredSpace, degree: usize, spaces: Vec<Subspace>) -> Result<Self> {
        let q = QuasiGradation { degree, spaces };
        q.check(f)?;
        Ok(q)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn space(&self, f: &FilteredSpace, i: i32) -> &Subspace {
        &self.spaces[(i - f.lo()) as usize]
    }

    /// Both axioms, as exact subspace identities.
    pub fn check(&self, f: &FilteredSpace) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::Invalid("quasi-gradations have degree at least 1".into()));
        }
        if self.spaces.len() != f.full_degree() {
            return Err(Error::Dimension("one subspace per filtration degree is needed".into()));
        }
        for (i, h) in f.degrees().zip(&self.spaces) {
            let next = f.v(i + 1);
            if h.sum(&next) != f.v(i) {
                return Err(Error::Invalid(format!("V_{i} is not H̄^{i} + V_{}", i + 1)));
            }
            if h.intersection(&next) != f.v(i + self.degree as i32) {
                return Err(Error::Invalid(format!("H̄^{i} ∩ V_{} is not V_{}", i + 1, i + self.degree as i32)));
            }
        }
        Ok(())
    }
}

/// `Π_p^m`: `H̄^i ↦ H̄^i + V_{i+m}`.
pub fn project_quasi(f: &FilteredSpace, q: &QuasiGradation, m: usize) -> Result<QuasiGradation> {
    if m == 0 || m > q.degree {
        return Err(Error::Invalid(format!("cannot project a degree-{} quasi-gradation to degree {m}", q.degree)));
    }
    let spaces = f.degrees().zip(&q.spaces).map(|(i, h)| h.sum(&f.v(i + m as i32))).collect();
    QuasiGradation::new(f, m, spaces)
}

/// `Π^m` of an adapted gradation.
pub fn project_gradation(f: &FilteredSpace, h: &AdaptedGradation, m: usize) -> Result<QuasiGradation> {
    let full = h.as_quasi(f);
    if m >= full.degree {
        return Ok(QuasiGradation { degree: m, spaces: full.spaces });
    }
    project_quasi(f, &full, m)
}

/// Blocks `F^i : m^i → V_i / V_{i+m}` with `gr_(m) ∘ F^i = u^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MLift {
    degree: usize,
    blocks: BTreeMap<i32, Matrix>,
}

impl MLift {
    pub fn new(u: &GradedFrame, degree: usize, blocks: BTreeMap<i32, Matrix>) -> Result<Self> {
        let f = MLift { degree, blocks };
        f.check(u)?;
        Ok(f)
    }

    /// Skips the frame check; [`MLift::check`] reports any violation later.
    pub fn from_parts_unchecked(degree: usize, blocks: BTreeMap<i32, Matrix>) -> Self {
        MLift { degree, blocks }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn block(&self, i: i32) -> &Matrix {
        &self.blocks[&i]
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix> {
        &self.blocks
    }

    pub fn check(&self, u: &GradedFrame) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::Invalid("lifts have degree at least 1".into()));
        }
        let f = &u.filtration;
        for i in u.present() {
            let b = self.blocks.get(&i).ok_or_else(|| Error::Invalid(format!("lift block {i} missing")))?;
            let g = f.quotient_map((i, self.degree), (i, 1));
            if (b.rows(), b.cols()) != (g.cols(), u.model.dim_of(i)) {
                return Err(Error::Dimension(format!("lift block {i} has the wrong shape")));
            }
            if g.mul(b) != u.blocks[&i] {
                return Err(Error::Invalid(format!("lift block {i} does not induce the frame")));
            }
        }
        Ok(())
    }

    /// Ambient images of the model basis, one column per basis vector, for a full-degree lift.
    pub fn ambient_matrix(&self, u: &GradedFrame) -> Matrix {
        let f = &u.filtration;
        let n = f.ambient_dim();
        let mut out = Matrix::zeros(n, n);
        for i in u.present() {
            let q = f.quotient(i, self.degree);
            let block = &self.blocks[&i];
            for (local, c) in u.model.range(i).enumerate() {
                let v = q.lift(&block.column(local));
                for (r, x) in v.into_iter().enumerate() {
                    out[(r, c)] = x;
                }
            }
        }
        out
    }
}

/// `F^i := Ĥ̄^i ∘ u^i`, where `Ĥ̄^i` inverts `gr_(m)` on `H̄^i / V_{i+m}`.
pub fn mlift_of_quasi(u: &GradedFrame, q: &QuasiGradation) -> Result<MLift> {
    let f = &u.filtration;
    q.check(f)?;
    let m = q.degree;
    let mut blocks = BTreeMap::new();
    for i in u.present() {
        let frame = f.quotient(i, m);
        let image: Vec<Vec<Rational>> = q.space(f, i).basis_vectors().iter().map(|v| frame.coords(v)).collect::<Result<_>>()?;
        let s = Subspace::span(frame.dim(), image);
        let bs = Matrix::from_columns(frame.dim(), &s.basis_vectors());
        let g = f.quotient_map((i, m), (i, 1));
        let inv = g
            .mul(&bs)
            .inverse()
            .ok_or_else(|| Error::Inconsistent(format!("H̄^{i} does not map isomorphically onto gr^{i}")))?;
        blocks.insert(i, bs.mul(&inv).mul(&u.blocks[&i]));
    }
    MLift::new(u, m, blocks)
}

/// `H̄^i := (pr^i_(m))^{-1} F^i(m^i)`.
pub fn quasi_of_mlift(u: &GradedFrame, lift: &MLift) -> Result<QuasiGradation> {
    lift.check(u)?;
    let f = &u.filtration;
    let m = lift.degree;
    let spaces = f
        .degrees()
        .map(|i| {
            let tail = f.v(i + m as i32);
            match lift.blocks.get(&i) {
                Some(b) => {
                    let frame = f.quotient(i, m);
                    let vectors = (0..b.cols()).map(|c| frame.lift(&b.column(c))).collect();
                    Subspace::span(f.ambient_dim(), vectors).sum(&tail)
                }
                None => tail,
            }
        })
        .collect();
    QuasiGradation::new(f, m, spaces)
}

/// The lift `F_H` of an adapted gradation (a lift of full degree).
pub fn full_lift(u: &GradedFrame, h: &AdaptedGradation) -> Result<MLift> {
    mlift_of_quasi(u, &h.as_quasi(&u.filtration))
}

/// The gradation `H^i = F(m^i)` of a full-degree lift.
pub fn gradation_of_lift(u: &GradedFrame, lift: &MLift) -> Result<AdaptedGradation> {
    let f = &u.filtration;
    if lift.degree < f.full_degree() {
        return Err(Error::Invalid(format!("a degree-{} lift does not determine a gradation", lift.degree)));
    }
    let q = quasi_of_mlift(u, lift)?;
    AdaptedGradation::new(f, q.spaces)
}

/// Whether `q = Π^m(H)`, confirmed on lifts: `pr_(m) ∘ F_H = F_q`.
pub fn is_compatible(u: &GradedFrame, h: &AdaptedGradation, q: &QuasiGradation) -> bool {
    let f = &u.filtration;
    let Ok(projected) = project_gradation(f, h, q.degree) else {
        return false;
    };
    if projected != *q {
        return false;
    }
    let (Ok(fh), Ok(fq)) = (full_lift(u, h), mlift_of_quasi(u, q)) else {
        return false;
    };
    let m = q.degree.min(f.full_degree());
    u.present()
        .into_iter()
        .all(|i| f.quotient_map((i, f.full_degree()), (i, m)).mul(fh.block(i)) == fq.blocks[&i])
}

fn check_unipotent(u: &GradedFrame, a: &GradedMap) -> Result<()> {
    if a.space() != &u.model || !a.is_unipotent() {
        return Err(Error::Invalid("A must be the identity plus positive-degree maps on the model".into()));
    }
    Ok(())
}

/// `(F[A])^i = Σ_{0 ≤ j < m} f_{i+j,m} F^{i+j} A^j`; only the parts of `A` of degree `< m` are read.
pub fn act_quasi(u: &GradedFrame, lift: &MLift, a: &GradedMap) -> Result<MLift> {
    check_unipotent(u, a)?;
    lift.check(u)?;
    let f = &u.filtration;
    let m = lift.degree;
    let mut blocks = BTreeMap::new();
    for i in u.present() {
        let mut acc = lift.blocks[&i].clone();
        for j in 1..m as i32 {
            let Some(upper) = lift.blocks.get(&(i + j)) else {
                continue;
            };
            let aj = a.component(j).block_or_zero(i);
            let term = f.quotient_map((i + j, m), (i, m)).mul(upper).mul(&aj);
            acc = acc.add(&term);
        }
        blocks.insert(i, acc);
    }
    MLift::new(u, m, blocks)
}

/// `H·A`, the gradation whose lift is `F_H ∘ A`.
pub fn act_gradation(u: &GradedFrame, h: &AdaptedGradation, a: &GradedMap) -> Result<AdaptedGradation> {
    gradation_of_lift(u, &act_quasi(u, &full_lift(u, h)?, a)?)
}

/// The class `[A]`, truncated below degree `m`, with `F1[A] = F2`.
pub fn transition(u: &GradedFrame, f1: &MLift, f2: &MLift) -> Result<GradedMap> {
    if f1.degree != f2.degree {
        return Err(Error::Invalid("lifts of different degrees".into()));
    }
    f1.check(u)?;
    f2.check(u)?;
    let f = &u.filtration;
    let m = f1.degree as i32;
    let model = &u.model;
    let mut parts: BTreeMap<i32, HomogeneousMap> = BTreeMap::new();
    for i in u.present() {
        let rhs = f2.blocks[&i].sub(&f1.blocks[&i]);
        let mut pieces = Vec::new();
        let mut system: Option<Matrix> = None;
        for j in 1..m {
            let Some(upper) = f1.blocks.get(&(i + j)) else {
                continue;
            };
            let col = f.quotient_map((i + j, m as usize), (i, m as usize)).mul(upper);
            pieces.push((j, upper.cols()));
            system = Some(match system {
                None => col,
                Some(s) => s.hstack(&col),
            });
        }
        let Some(system) = system else {
            if !rhs.is_zero() {
                return Err(Error::Inconsistent(format!("lifts differ in degree {i} but no correction is available")));
            }
            continue;
        };
        let solutions: Vec<Vec<Rational>> = (0..rhs.cols()).map(|c| system.solve_unique(&rhs.column(c))).collect::<Result<_>>()?;
        let mut offset = 0;
        for (j, rows) in pieces {
            let cols: Vec<Vec<Rational>> = solutions.iter().map(|s| s[offset..offset + rows].to_vec()).collect();
            let block = Matrix::from_columns(rows, &cols);
            offset += rows;
            let part = parts.entry(j).or_insert_with(|| HomogeneousMap::zero(model, model, j));
            part.set_block(i, block)?;
        }
    }
    let mut summands = vec![HomogeneousMap::identity(model)];
    summands.extend(parts.into_values());
    GradedMap::from_summands(model, summands)
}

/// A random invertible map preserving `m_i` for every `i`, with small integer entries.
pub fn random_filtered_map<R: Rng>(model: &GradedSpace, rng: &mut R, unipotent: bool) -> Matrix {
    let n = model.dim();
    let degs = model.degrees_by_index();
    loop {
        let mut t = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if degs[r] > degs[c] || (degs[r] == degs[c] && !unipotent) {
                    t[(r, c)] = Rational::from_integer(rng.gen_range(-2i64..=2).into());
                } else if degs[r] == degs[c] && r == c {
                    t[(r, c)] = Rational::from_integer(1.into());
                }
            }
        }
        if t.inverse().is_some() {
            return t;
        }
    }
}

/// A random element of `GL_1(m)` with parts of degree `1 … top`.
pub fn random_unipotent<R: Rng>(model: &GradedSpace, rng: &mut R, lowest: i32) -> GradedMap {
    let span = model.max_degree().unwrap_or(0) - model.min_degree().unwrap_or(0);
    let mut parts = vec![HomogeneousMap::identity(model)];
    for d in lowest.max(1)..=span {
        let mut h = HomogeneousMap::zero(model, model, d);
        for i in model.degrees() {
            let (rows, cols) = (model.dim_of(i + d), model.dim_of(i));
            if rows == 0 {
                continue;
            }
            let entries = (0..rows * cols).map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into())).collect();
            h.set_block(i, Matrix::from_vec(rows, cols, entries).expect("sized")).expect("shape");
        }
        parts.push(h);
    }
    GradedMap::from_summands(model, parts).expect("homogeneous parts")
}

/// A random adapted gradation: `H^i = T·U(m^i)` for the filtration `T(m_i)` and a random unipotent-like `U`.
pub fn random_gradation<R: Rng>(u: &GradedFrame, t: &Matrix, rng: &mut R) -> AdaptedGradation {
    let model = &u.model;
    let n = model.dim();
    let w = t.mul(&random_filtered_map(model, rng, false));
    let spaces = u
        .filtration
        .degrees()
        .map(|i| Subspace::span(n, model.range(i).map(|c| w.column(c)).collect()))
        .collect();
    AdaptedGradation::new(&u.filtration, spaces).expect("T·U preserves the filtration")
}
