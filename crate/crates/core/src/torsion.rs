//! Torsion spaces and the ∂-maps of the prolongation tower.
//!
//! Level 1: `∂ : gl₁(m₀) → Tor¹ = Hom¹(Λ²m, m₀)`,
//! `(∂A)(a∧b) = A¹[a,b] − [A¹a, b] − [a, A¹b]`, evaluated with the bracket of
//! `m + g⁰`.
//!
//! Level `n+1`: `∂ : gl_{n+1}(m_n) ⊕ Σ_{i<n} Hom(g^i, g^n) → Tor^{n+1}` with
//! target `Hom^{n+1}(m^{-1}∧m, m_n) ⊕ Σ_{i<n} Hom(m^{-1}∧g^i, g^{n-1})`,
//! evaluated with the extended prolongation bracket.

use num::Zero;

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, HomLayout, HomogeneousMap};
use crate::lie::{adjoin_g0, GradedLieAlgebra};
use crate::linear::{axpy, kernel, sub_vec, unit_vec, zero_vec, Matrix, Rational, Subspace};
use crate::prolong::{ExtendedBracket, ProlongationResult, Status};

/// A named block of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub label: String,
    pub offset: usize,
    pub dim: usize,
}

impl Summand {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim
    }
}

fn summands(parts: Vec<(String, usize)>) -> Vec<Summand> {
    let mut offset = 0;
    parts
        .into_iter()
        .map(|(label, dim)| {
            let s = Summand { label, offset, dim };
            offset += dim;
            s
        })
        .collect()
}

/// The matrix of a ∂-map with labelled domain and codomain blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMap {
    /// 1 for the first ∂, `n + 1` otherwise.
    pub level: usize,
    pub matrix: Matrix,
    pub domain: Vec<Summand>,
    pub codomain: Vec<Summand>,
}

impl DeltaMap {
    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn torsion_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_vec(v)
    }

    pub fn image(&self) -> Subspace {
        Subspace::row_space(&self.matrix.transpose())
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel(&self) -> Subspace {
        kernel(&self.matrix)
    }

    fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        self.matrix.select_columns(&range.collect::<Vec<_>>())
    }
}

/// Tor¹ coordinates: one block of `m₀` of degree `deg a + deg b + 1` per pair `a < b` of `m`.
fn tor1_layout(m: &GradedSpace, m0: &GradedSpace) -> Vec<(usize, usize, std::ops::Range<usize>, usize)> {
    let degs = m.degrees_by_index();
    let mut out = Vec::new();
    let mut offset = 0;
    for a in 0..m.dim() {
        for b in a + 1..m.dim() {
            let range = m0.range(degs[a] + degs[b] + 1);
            if !range.is_empty() {
                let len = range.len();
                out.push((a, b, range, offset));
                offset += len;
            }
        }
    }
    out
}

/// `∂A` for the degree-1 component `a1 ∈ Hom¹(m, m₀)` of `A ∈ gl₁(m₀)`.
pub fn partial1(m: &GradedLieAlgebra, m0: &GradedLieAlgebra, a1: &HomogeneousMap) -> Result<Vec<Rational>> {
    if a1.source() != m.space() || a1.target().dim() != m0.dim() || a1.degree() != 1 {
        return Err(Error::Dimension("expected a degree-1 map m -> m0".into()));
    }
    let layout = tor1_layout(m.space(), m0.space());
    let total = layout.last().map_or(0, |(_, _, r, o)| o + r.len());
    let mut out = zero_vec(total);
    let dense = a1.to_matrix();
    for (a, b, range, offset) in layout {
        let mut v = dense.mul_vec(m.bracket_basis(a, b));
        let aa = dense.column(a);
        let ab = dense.column(b);
        v = sub_vec(&v, &m0.bracket(&aa, &unit_vec(m0.dim(), b))?);
        v = sub_vec(&v, &m0.bracket(&unit_vec(m0.dim(), a), &ab)?);
        if v.iter().enumerate().any(|(i, c)| !c.is_zero() && !range.contains(&i)) {
            return Err(Error::Inconsistent("∂A leaves its degree".into()));
        }
        out[offset..offset + range.len()].clone_from_slice(&v[range]);
    }
    Ok(out)
}

/// The matrix of the first ∂ on `gl₁(m₀) = Σ_{d≥1} Hom^d(m, m₀)`.
pub fn partial1_matrix(result: &ProlongationResult) -> Result<DeltaMap> {
    let m = result.algebra();
    let m0 = adjoin_g0(m, result.levels()[0].carrier())?;
    let space = m.space();
    let max_d = -space.min_degree().unwrap_or(-1);
    let mut parts = Vec::new();
    for d in 1..=max_d {
        let dim = HomLayout::new(space, m0.space(), d).dim;
        if dim > 0 {
            parts.push((format!("Hom^{d}(m, m_0)"), dim, d));
        }
    }
    let layout = tor1_layout(space, m0.space());
    let tor = layout.last().map_or(0, |(_, _, r, o)| o + r.len());
    let domain = summands(parts.iter().map(|(l, d, _)| (l.clone(), *d)).collect());
    let mut columns = Vec::new();
    for (_, dim, d) in &parts {
        for u in 0..*dim {
            if *d == 1 {
                let e = HomogeneousMap::from_coords(space, m0.space(), 1, &unit_vec(*dim, u))?;
                columns.push(partial1(m, &m0, &e)?);
            } else {
                columns.push(zero_vec(tor));
            }
        }
    }
    Ok(DeltaMap {
        level: 1,
        matrix: Matrix::from_columns(tor, &columns),
        domain,
        codomain: vec![Summand { label: "Hom^1(Λ²m, m_0)".into(), offset: 0, dim: tor }],
    })
}

/// Highest `n` for which `∂^{(n+1)}` and its kernel check are available.
pub fn max_level(result: &ProlongationResult) -> usize {
    match result.status() {
        Status::Finite(order) => order,
        Status::TruncatedAt(d) => d - 1,
    }
}

/// The matrix of `∂^{(n+1)}`, `n >= 1`.
pub fn partial_np1_matrix(result: &ProlongationResult, n: usize) -> Result<DeltaMap> {
    if n == 0 {
        return Err(Error::Invalid("the level n+1 map needs n >= 1".into()));
    }
    if n >= result.levels().len() {
        return Err(Error::Unreachable(format!("g^{n} has not been computed")));
    }
    let m = result.algebra();
    let ms = m.space();
    let k = m.dim();
    let ext = ExtendedBracket::new(result, n)?;
    let mn = ext.space().clone();
    let levels = result.levels();
    let gdim = |s: usize| levels[s].dim();
    let grange = |s: usize| mn.range(s as i32);
    let low = ms.min_degree().unwrap_or(-1);

    let mut gl_parts = Vec::new();
    for d in (n as i32 + 1)..=(n as i32 - low) {
        let dim = HomLayout::new(ms, &mn, d).dim;
        if dim > 0 {
            gl_parts.push((format!("Hom^{d}(m, m_{n})"), dim, d));
        }
    }
    let mut parts: Vec<(String, usize)> = gl_parts.iter().map(|(l, d, _)| (l.clone(), *d)).collect();
    for i in 0..n {
        parts.push((format!("Hom(g^{i}, g^{n})"), gdim(n) * gdim(i)));
    }
    let domain = summands(parts);

    let degs = ms.degrees_by_index();
    let gens: Vec<usize> = ms.range(-1).collect();
    let mut pairs1 = Vec::new();
    let mut offset = 0;
    for &a in &gens {
        for b in 0..k {
            if degs[b] == -1 && b <= a {
                continue;
            }
            let range = mn.range(degs[b] + n as i32);
            if !range.is_empty() {
                let len = range.len();
                pairs1.push((a, b, range, offset));
                offset += len;
            }
        }
    }
    let part1 = offset;
    let mut codomain = vec![(format!("Hom^{}(m^-1∧m, m_{n})", n + 1), part1)];
    for i in 0..n {
        codomain.push((format!("Hom(m^-1∧g^{i}, g^{})", n - 1), gens.len() * gdim(i) * gdim(n - 1)));
    }
    let codomain = summands(codomain);
    let tor = codomain.last().map_or(0, |s| s.offset + s.dim);

    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for (_, dim, d) in &gl_parts {
        for u in 0..*dim {
            let mut col = zero_vec(tor);
            if *d == n as i32 + 1 {
                let a_map = HomogeneousMap::from_coords(ms, &mn, *d, &unit_vec(*dim, u))?;
                let dense = a_map.to_matrix();
                for (a, b, range, off) in &pairs1 {
                    let mut v = dense.mul_vec(m.bracket_basis(*a, *b));
                    let mut t1 = zero_vec(mn.dim());
                    for (i, c) in dense.column(*a).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        let entry = ext.bracket_basis(i, *b).ok_or_else(|| Error::Inconsistent("bracket out of range".into()))?;
                        axpy(&mut t1, c, entry);
                    }
                    let t2 = ext
                        .bracket_with(*a, &dense.column(*b))
                        .ok_or_else(|| Error::Inconsistent("bracket out of range".into()))?;
                    v = sub_vec(&sub_vec(&v, &t1), &t2);
                    if v.iter().enumerate().any(|(i, c)| !c.is_zero() && !range.contains(&i)) {
                        return Err(Error::Inconsistent("∂ leaves its degree".into()));
                    }
                    col[*off..*off + range.len()].clone_from_slice(&v[range.clone()]);
                }
            }
            columns.push(col);
        }
    }
    let (gn, gnm1) = (grange(n), grange(n - 1));
    for i in 0..n {
        let out = &codomain[1 + i];
        for row in 0..gdim(n) {
            for c in 0..gdim(i) {
                // A sends the c-th basis vector of g^i to the row-th basis vector of g^n
                let w = gn.start + row;
                let mut col = zero_vec(tor);
                for (ai, &a) in gens.iter().enumerate() {
                    let v = ext.bracket_basis(a, w).ok_or_else(|| Error::Inconsistent("bracket out of range".into()))?;
                    let v: Vec<Rational> = v.iter().map(|x| -x).collect();
                    if v.iter().enumerate().any(|(j, x)| !x.is_zero() && !gnm1.contains(&j)) {
                        return Err(Error::Inconsistent(format!("[m^-1, g^{n}] is not inside g^{}", n - 1)));
                    }
                    let base = out.offset + (ai * gdim(i) + c) * gdim(n - 1);
                    col[base..base + gdim(n - 1)].clone_from_slice(&v[gnm1.clone()]);
                }
                columns.push(col);
            }
        }
    }
    Ok(DeltaMap { level: n + 1, matrix: Matrix::from_columns(tor, &columns), domain, codomain })
}

/// The ∂-map at level `n + 1` (`n = 0` gives the first ∂).
pub fn delta(result: &ProlongationResult, n: usize) -> Result<DeltaMap> {
    if n == 0 {
        partial1_matrix(result)
    } else {
        partial_np1_matrix(result, n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub n: usize,
    pub torsion_dim: usize,
    pub domain_dim: usize,
    pub rank: usize,
    pub complement_dim: usize,
    /// dim of the kernel on the gl summand.
    pub kernel_dim: usize,
    /// dim of `g^{n+1}` plus the higher gl blocks.
    pub expected_kernel_dim: usize,
    pub kernel_identity: bool,
    /// `None` at level 1, where there is no `Hom(g^i, g^n)` summand.
    pub injective: Option<bool>,
    pub split_respected: bool,
    pub witnesses: Vec<String>,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.kernel_identity && self.injective.unwrap_or(true) && self.split_respected
    }
}

/// Checks `Ker ∂ = gl_{n+2} ⊕ g^{n+1}` on the gl summand and injectivity on
/// the `Hom(g^i, g^n)` summand, against the independently prolonged `g^{n+1}`.
pub fn kernel_reports(result: &ProlongationResult, n: usize) -> Result<KernelReport> {
    if n > max_level(result) || n + 1 >= result.levels().len() {
        return Err(Error::Unreachable(format!("level {} needs g^{} and the prolongation stops earlier", n + 1, n + 1)));
    }
    let dm = delta(result, n)?;
    let g_next = result.levels()[n + 1].carrier();
    let gl: Vec<&Summand> = dm.domain.iter().filter(|s| s.label.starts_with("Hom^")).collect();
    let gl_dim: usize = gl.iter().map(|s| s.dim).sum();
    let first = gl.first().ok_or_else(|| Error::Inconsistent("empty gl summand".into()))?;
    let mut expected_vectors = Vec::new();
    for v in g_next.basis_vectors() {
        let mut e = zero_vec(gl_dim);
        e[first.range()].clone_from_slice(&v);
        expected_vectors.push(e);
    }
    for s in &gl[1..] {
        expected_vectors.extend(s.range().map(|i| unit_vec(gl_dim, i)));
    }
    let expected = Subspace::span(gl_dim, expected_vectors);
    let ker = kernel(&dm.columns(0..gl_dim));
    let kernel_identity = ker == expected;
    let mut witnesses = Vec::new();
    if !kernel_identity {
        if let Some(v) = ker.basis_vectors().into_iter().find(|v| !expected.contains(v)) {
            witnesses.push(format!("kernel vector outside gl_{} + g^{}: {}", n + 2, n + 1, fmt_vec(&v)));
        }
        if let Some(v) = expected.basis_vectors().into_iter().find(|v| !ker.contains(v)) {
            witnesses.push(format!("g^{} vector not in the kernel: {}", n + 1, fmt_vec(&v)));
        }
    }
    let hom_cols = gl_dim..dm.domain_dim();
    let injective = (n > 0).then(|| dm.columns(hom_cols.clone()).rank() == hom_cols.len());
    if injective == Some(false) {
        witnesses.push("∂ has a kernel on the Hom(g^i, g^n) summand".into());
    }
    let split_respected = n == 0 || {
        let part1 = dm.codomain[0].range();
        let gl_ok = (0..gl_dim).all(|c| dm.codomain[1..].iter().all(|s| s.range().all(|r| dm.matrix[(r, c)].is_zero())));
        let hom_ok = hom_cols.clone().all(|c| part1.clone().all(|r| dm.matrix[(r, c)].is_zero()));
        gl_ok && hom_ok
    };
    let rank = dm.rank();
    Ok(KernelReport {
        n,
        torsion_dim: dm.torsion_dim(),
        domain_dim: dm.domain_dim(),
        rank,
        complement_dim: complement_w(&dm)?.dim(),
        kernel_dim: ker.dim(),
        expected_kernel_dim: expected.dim(),
        kernel_identity,
        injective,
        split_respected,
        witnesses,
    })
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// The pivot-rule complement `W` of `Im ∂` in the torsion space.
pub fn complement_w(dm: &DeltaMap) -> Result<Subspace> {
    dm.image().complement(&Subspace::full(dm.torsion_dim()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerRow {
    pub n: usize,
    pub dim_g: usize,
    /// `dim gl_{n+1}(m_n) + Σ_{i<n} dim g^i · dim g^n`.
    pub structure_group_dim: usize,
    /// `dim g^n + dim gl_{n+1}(m_{n-1})`.
    pub reduced_group_dim: usize,
    pub torsion_dim: usize,
    pub rank: usize,
    pub complement_dim: usize,
    pub kernel_dim: usize,
    /// `dim M + Σ_{i ≤ n} dim g^i`.
    pub total_dim: usize,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub algebra: String,
    pub g0: String,
    pub base_dim: usize,
    pub status: Status,
    pub rows: Vec<TowerRow>,
    /// `dim M + Σ_{i ≤ l̄} dim g^i` for a finite prolongation.
    pub bound: Option<usize>,
}

fn gl_dim(m: &GradedSpace, target: &GradedSpace, from: i32) -> usize {
    let low = m.min_degree().unwrap_or(-1);
    let top = target.max_degree().unwrap_or(-1);
    (from..=top - low).map(|d| HomLayout::new(m, target, d).dim).sum()
}

/// One row per level `n = 0 … l̄` (finite) or `n = 0 … D` (truncated).
pub fn tower_report(result: &ProlongationResult, base_dim: usize) -> Result<TowerReport> {
    let m = result.algebra();
    if base_dim < m.dim() {
        return Err(Error::Invalid(format!("base dimension {base_dim} is below dim m = {}", m.dim())));
    }
    let last = match result.status() {
        Status::Finite(order) => order,
        Status::TruncatedAt(d) => d,
    };
    let mut rows = Vec::new();
    let mut total = base_dim;
    for n in 0..=last {
        let dm = delta(result, n)?;
        let dim_g = result.levels()[n].dim();
        total += dim_g;
        let rank = dm.rank();
        let kernel_dim = dm.kernel().dim();
        let complement_dim = complement_w(&dm)?.dim();
        let ms = m.space();
        let reduced_group_dim = dim_g + gl_dim(ms, &result.tower_space(n as isize - 1), n as i32 + 1);
        rows.push(TowerRow {
            n,
            dim_g,
            structure_group_dim: dm.domain_dim(),
            reduced_group_dim,
            torsion_dim: dm.torsion_dim(),
            rank,
            complement_dim,
            kernel_dim,
            total_dim: total,
            consistent: complement_dim == dm.torsion_dim() - rank && rank == dm.domain_dim() - kernel_dim,
        });
    }
    let bound = matches!(result.status(), Status::Finite(_)).then_some(total);
    Ok(TowerReport {
        algebra: m.name().to_string(),
        g0: result.g0_label().to_string(),
        base_dim,
        status: result.status(),
        rows,
        bound,
    })
}
