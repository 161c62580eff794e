//! Tanaka prolongation of `m + g⁰`.
//!
//! Each level `g^s` is stored as a subspace of `Hom^s(m, m_{s-1})`, where
//! `m_r = m + g⁰ + … + g^r` and `m_{-1} = m`. An element `z ∈ g^s` acts on
//! `y ∈ m` by `[z, y] = z(y)` and `[y, z] = −z(y)`.

use num::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, HomLayout, HomogeneousMap};
use crate::lie::{subspace_maps, G0Spec, GradedLieAlgebra};
use crate::linear::{axpy, is_zero_vec, kernel, sub_vec, zero_vec, Matrix, Rational, Subspace};

/// Default number of positive levels computed before giving up on finiteness.
pub const DEFAULT_MAX_DEGREE: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongationLevel {
    degree: usize,
    target: GradedSpace,
    carrier: Subspace,
    basis: Vec<HomogeneousMap>,
}

impl ProlongationLevel {
    /// `carrier` is given in `Hom^degree(source, target)` coordinates; the
    /// chosen basis is its RREF basis.
    pub fn new(source: &GradedSpace, target: GradedSpace, degree: usize, carrier: Subspace) -> Result<Self> {
        let layout = HomLayout::new(source, &target, degree as i32);
        if carrier.ambient_dim() != layout.dim {
            return Err(Error::Dimension(format!("level {degree} carrier does not live in its Hom space")));
        }
        let basis = carrier
            .basis_vectors()
            .iter()
            .map(|v| HomogeneousMap::from_coords(source, &target, degree as i32, v))
            .collect::<Result<_>>()?;
        Ok(ProlongationLevel { degree, target, carrier, basis })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// `m_{s-1}`.
    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }

    pub fn basis(&self) -> &[HomogeneousMap] {
        &self.basis
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// `g^{order+1} = 0` and every lower level is non-zero (or `order = 0`).
    Finite(usize),
    TruncatedAt(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongationResult {
    algebra: GradedLieAlgebra,
    g0: String,
    max_degree: usize,
    levels: Vec<ProlongationLevel>,
    status: Status,
}

/// Labels of the `g^s` component inside `m_r`.
pub fn level_labels(s: usize, dim: usize) -> Vec<String> {
    (1..=dim).map(|j| format!("g{s}_{j}")).collect()
}

/// `m_r` for the given levels (levels above `r` are ignored, zero levels skipped).
pub fn tower_space(m: &GradedSpace, levels: &[ProlongationLevel], r: isize) -> GradedSpace {
    let mut space = m.clone();
    for level in levels.iter().take((r + 1).max(0) as usize) {
        space = space
            .with_component(level.degree as i32, level_labels(level.degree, level.dim()))
            .expect("levels have increasing degrees");
    }
    space
}

/// Where a global index of `m_r` sits: `None` for `m`, else `(s, j)`.
fn locate(space: &GradedSpace, k: usize, p: usize) -> Option<(usize, usize)> {
    if p < k {
        return None;
    }
    let s = space.degree_of(p);
    Some((s as usize, p - space.range(s).start))
}

/// `[e_t, e_y]` for every basis vector `e_t` of `m_r` and `e_y` of `m`, in `m_r` coordinates.
fn action_table(m: &GradedLieAlgebra, levels: &[ProlongationLevel], space: &GradedSpace) -> Vec<Vec<Vec<Rational>>> {
    let k = m.dim();
    (0..space.dim())
        .map(|t| {
            (0..k)
                .map(|y| match locate(space, k, t) {
                    None => m.space().embed_prefix(m.bracket_basis(t, y), space),
                    Some((s, j)) => {
                        let level = &levels[s];
                        level.target.embed_prefix(&level.basis[j].apply_basis(y), space)
                    }
                })
                .collect()
        })
        .collect()
}

/// `g^{r+1}` from `g⁰ … g^r`: the maps `A ∈ Hom^{r+1}(m, m_r)` with
/// `A[x,y] = [A(x),y] + [x,A(y)]` for all basis pairs `x < y` of `m`.
pub fn prolong_step(m: &GradedLieAlgebra, levels: &[ProlongationLevel]) -> Result<ProlongationLevel> {
    if levels.is_empty() {
        return Err(Error::Inconsistent("prolong_step needs at least g0".into()));
    }
    for (s, level) in levels.iter().enumerate() {
        let expected = tower_space(m.space(), levels, s as isize - 1);
        if level.degree != s || level.target != expected {
            return Err(Error::Inconsistent(format!("level {s} does not match the tower built from the levels below it")));
        }
    }
    let r = levels.len() - 1;
    let degree = r + 1;
    let target = tower_space(m.space(), levels, r as isize);
    let act = action_table(m, levels, &target);
    let k = m.dim();
    let nt = target.dim();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let layout = HomLayout::new(m.space(), &target, degree as i32);
    let units: Vec<(usize, usize)> = layout
        .blocks
        .iter()
        .flat_map(|&(src, _, rows, cols)| {
            let (s0, t0) = (m.space().range(src).start, target.range(src + degree as i32).start);
            (0..rows).flat_map(move |row| (0..cols).map(move |col| (s0 + col, t0 + row)))
        })
        .collect();
    let columns: Vec<Vec<Rational>> = units
        .par_iter()
        .map(|&(i, t)| {
            let mut col = zero_vec(pairs.len() * nt);
            for (p, &(a, b)) in pairs.iter().enumerate() {
                let out = &mut col[p * nt..(p + 1) * nt];
                out[t] += &m.bracket_basis(a, b)[i];
                if a == i {
                    axpy(out, &Rational::from_integer((-1).into()), &act[t][b]);
                }
                if b == i {
                    axpy(out, &Rational::from_integer(1.into()), &act[t][a]);
                }
            }
            col
        })
        .collect();
    let carrier = kernel(&Matrix::from_columns(pairs.len() * nt, &columns));
    ProlongationLevel::new(m.space(), target, degree, carrier)
}

/// `[w, y]` for `w ∈ m_r` and `y ∈ m`, evaluated by expanding `w` in the level bases.
fn act_on(m: &GradedLieAlgebra, levels: &[ProlongationLevel], space: &GradedSpace, w: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let k = m.dim();
    let mut out = space_embed(m.space(), &m.bracket(&w[..k], y).expect("m coordinates"), space);
    for c in space.components().iter().filter(|c| c.degree >= 0) {
        let s = c.degree as usize;
        let coeffs = &w[space.range(c.degree)];
        if is_zero_vec(coeffs) {
            continue;
        }
        let level = &levels[s];
        let z = crate::graded::linear_combination(&level.basis, coeffs).expect("matching lengths");
        axpy(&mut out, &Rational::from_integer(1.into()), &space_embed(&level.target, &z.apply(y), space));
    }
    out
}

fn space_embed(small: &GradedSpace, v: &[Rational], big: &GradedSpace) -> Vec<Rational> {
    small.embed_prefix(v, big)
}

/// Re-substitutes every basis element of `level` into the derivation identity
/// using dense matrices; returns the number of elements that fail.
pub fn verify_level(m: &GradedLieAlgebra, below: &[ProlongationLevel], level: &ProlongationLevel) -> usize {
    let k = m.dim();
    let space = &level.target;
    let e = |i: usize| crate::linear::unit_vec(k, i);
    level
        .basis
        .iter()
        .filter(|a| {
            let dense = a.to_matrix();
            (0..k).any(|x| {
                (x + 1..k).any(|y| {
                    let lhs = dense.mul_vec(m.bracket_basis(x, y));
                    let t1 = act_on(m, below, space, &dense.column(x), &e(y));
                    let t2 = act_on(m, below, space, &dense.column(y), &e(x));
                    // [x, A(y)] = −[A(y), x]
                    !is_zero_vec(&crate::linear::add_vec(&sub_vec(&lhs, &t1), &t2))
                })
            })
        })
        .count()
}

/// Prolongs until a zero level appears or `max_degree` positive levels exist.
pub fn prolong(m: &GradedLieAlgebra, g0: &G0Spec, max_degree: usize) -> Result<ProlongationResult> {
    if max_degree == 0 {
        return Err(Error::Invalid("max degree must be at least 1".into()));
    }
    let report = m.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::Invalid(format!("{} is not a graded Lie algebra: {v}", m.name())));
    }
    if !m.is_negatively_graded() || m.dim() == 0 {
        return Err(Error::Invalid("the symbol algebra must be non-zero and negatively graded".into()));
    }
    if !m.is_fundamental() {
        return Err(Error::NotFundamental(format!("{} is not generated by its degree -1 part", m.name())));
    }
    let g0_space = g0.resolve(m)?;
    let mut levels = vec![ProlongationLevel::new(m.space(), m.space().clone(), 0, g0_space)?];
    let mut status = Status::TruncatedAt(max_degree);
    for r in 0..max_degree {
        let next = prolong_step(m, &levels)?;
        let failures = verify_level(m, &levels, &next);
        if failures > 0 {
            return Err(Error::Inconsistent(format!("{failures} basis elements of g^{} fail re-substitution", r + 1)));
        }
        let zero = next.dim() == 0;
        levels.push(next);
        if zero {
            status = Status::Finite(r);
            break;
        }
    }
    Ok(ProlongationResult { algebra: m.clone(), g0: g0.label().to_string(), max_degree, levels, status })
}

impl ProlongationResult {
    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn g0_label(&self) -> &str {
        &self.g0
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// `g⁰, g¹, …`; a finite result ends with its zero level.
    pub fn levels(&self) -> &[ProlongationLevel] {
        &self.levels
    }

    pub fn level(&self, s: usize) -> Option<&ProlongationLevel> {
        self.levels.get(s)
    }

    /// `dim g^s` for every computed level, starting at `s = 0`.
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim()).collect()
    }

    /// `dim g^s`, known to be zero above a finite order.
    pub fn dim_of(&self, s: usize) -> Option<usize> {
        match (self.levels.get(s), self.status) {
            (Some(l), _) => Some(l.dim()),
            (None, Status::Finite(_)) => Some(0),
            (None, Status::TruncatedAt(_)) => None,
        }
    }

    /// `m_r`; for `r` beyond a finite order this is the whole prolongation.
    pub fn tower_space(&self, r: isize) -> GradedSpace {
        tower_space(self.algebra.space(), &self.levels, r)
    }

    /// Number of basis elements, over all levels, failing re-substitution.
    pub fn verify(&self) -> (usize, usize) {
        let checked = self.levels[1..].iter().map(|l| l.dim()).sum();
        let failed = (1..self.levels.len()).map(|s| verify_level(&self.algebra, &self.levels[..s], &self.levels[s])).sum();
        (checked, failed)
    }
}

/// `(l̄, dim M + Σ_{i ≤ l̄} dim g^i)` for a finite prolongation.
pub fn order_and_bound(result: &ProlongationResult, base_dim: usize) -> Result<(usize, usize)> {
    match result.status {
        Status::Finite(order) => Ok((order, base_dim + result.levels[..=order].iter().map(|l| l.dim()).sum::<usize>())),
        Status::TruncatedAt(d) => Err(Error::NotFinite(format!("no zero level up to degree {d}"))),
    }
}

/// Structure constants of `m + g⁰ + … + g^E`. Entries whose degree exceeds
/// the computed range of a truncated prolongation are `None`.
#[derive(Clone, Debug)]
pub struct ExtendedBracket {
    space: GradedSpace,
    table: Vec<Option<Vec<Rational>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BracketCheck {
    pub pairs_in_range: usize,
    pub triples_in_range: usize,
    pub violations: Vec<String>,
}

impl ExtendedBracket {
    /// The bracket on `m_top`, with `top` capped by the computed levels.
    pub fn new(result: &ProlongationResult, top: usize) -> Result<Self> {
        let finite = matches!(result.status, Status::Finite(_));
        let top_level = top.min(result.levels.len() - 1);
        let levels = &result.levels[..=top_level];
        let space = tower_space(result.algebra.space(), levels, top_level as isize);
        let m = &result.algebra;
        let k = m.dim();
        let n = space.dim();
        let limit = if finite && top >= result.levels.len() - 1 { None } else { Some(top_level) };
        let mut table: Vec<Option<Vec<Rational>>> = vec![None; n * n];
        let img = action_table(m, levels, &space);
        for a in 0..k {
            for b in 0..k {
                table[a * n + b] = Some(m.space().embed_prefix(m.bracket_basis(a, b), &space));
            }
        }
        for p in k..n {
            for x in 0..k {
                table[p * n + x] = Some(img[p][x].clone());
                table[x * n + p] = Some(img[p][x].iter().map(|v| -v).collect());
            }
        }
        let comps: Vec<i32> = space.degrees().filter(|&d| d >= 0).collect();
        let max_total = comps.last().map_or(0, |d| 2 * d);
        for total in 0..=max_total {
            if limit.is_some_and(|l| total as usize > l) {
                break;
            }
            for &r1 in &comps {
                let r2 = total - r1;
                if !comps.contains(&r2) {
                    continue;
                }
                for p in space.range(r1) {
                    for q in space.range(r2) {
                        let images: Vec<Vec<Rational>> = (0..k)
                            .map(|x| {
                                let mut out = expand(&table, n, &img[p][x], q, true)?;
                                axpy(&mut out, &Rational::from_integer(1.into()), &expand(&table, n, &img[q][x], p, false)?);
                                Ok(out)
                            })
                            .collect::<Result<_>>()?;
                        table[p * n + q] = Some(membership(result, &space, total as usize, &images)?);
                    }
                }
            }
        }
        Ok(ExtendedBracket { space, table })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> Option<&[Rational]> {
        self.table[a * self.dim() + b].as_deref()
    }

    /// `[e_a, v]`, or `None` if a needed entry is out of range.
    pub fn bracket_with(&self, a: usize, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut out = zero_vec(self.dim());
        for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            axpy(&mut out, c, self.bracket_basis(a, i)?);
        }
        Some(out)
    }

    /// Antisymmetry and grading on every in-range pair, Jacobi on every in-range triple.
    pub fn check(&self) -> BracketCheck {
        let n = self.dim();
        let degs = self.space.degrees_by_index();
        let label = |i: usize| self.space.label(i).to_string();
        let mut report = BracketCheck::default();
        for a in 0..n {
            for b in a..n {
                let (Some(ab), Some(ba)) = (self.bracket_basis(a, b), self.bracket_basis(b, a)) else {
                    continue;
                };
                report.pairs_in_range += 1;
                if ab.iter().zip(ba).any(|(x, y)| !(x + y).is_zero()) {
                    report.violations.push(format!("antisymmetry fails for ({}, {})", label(a), label(b)));
                }
                for (c, v) in ab.iter().enumerate() {
                    if !v.is_zero() && degs[c] != degs[a] + degs[b] {
                        report.violations.push(format!("grading fails for [{}, {}]", label(a), label(b)));
                    }
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let terms = [(a, b, c), (b, c, a), (c, a, b)].map(|(x, y, z)| {
                        self.bracket_basis(y, z).and_then(|yz| self.bracket_with(x, yz))
                    });
                    let [Some(t1), Some(t2), Some(t3)] = terms else {
                        continue;
                    };
                    report.triples_in_range += 1;
                    let sum = crate::linear::add_vec(&crate::linear::add_vec(&t1, &t2), &t3);
                    if !is_zero_vec(&sum) {
                        report.violations.push(format!("Jacobi fails for ({}, {}, {})", label(a), label(b), label(c)));
                    }
                }
            }
        }
        report
    }
}

/// `Σ_i u_i [e_i, e_q]` (`left`) or `Σ_i u_i [e_p, e_i]`.
fn expand(table: &[Option<Vec<Rational>>], n: usize, u: &[Rational], fixed: usize, left: bool) -> Result<Vec<Rational>> {
    let mut out = zero_vec(n);
    for (i, c) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let idx = if left { i * n + fixed } else { fixed * n + i };
        let entry = table[idx]
            .as_ref()
            .ok_or_else(|| Error::Inconsistent("bracket recursion reached an uncomputed entry".into()))?;
        axpy(&mut out, c, entry);
    }
    Ok(out)
}

/// Coordinates in `space` of the element of `g^total` whose values on the basis of `m` are `images`.
fn membership(result: &ProlongationResult, space: &GradedSpace, total: usize, images: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let n = space.dim();
    let m = result.algebra.space();
    let Some(level) = result.levels.get(total).filter(|_| space.component(total as i32).is_some() || result.levels[total].dim() == 0) else {
        if images.iter().all(|v| is_zero_vec(v)) {
            return Ok(zero_vec(n));
        }
        return Err(Error::Inconsistent(format!("bracket lands in degree {total} above a finite order but is non-zero")));
    };
    let target = &level.target;
    let rows = target.dim();
    let mut dense = Matrix::zeros(rows, m.dim());
    for (x, v) in images.iter().enumerate() {
        if !is_zero_vec(&v[rows.min(n)..]) {
            return Err(Error::Inconsistent(format!("bracket value in degree {total} leaves m_{}", total as isize - 1)));
        }
        for (row, c) in v[..rows].iter().enumerate() {
            dense[(row, x)] = c.clone();
        }
    }
    let map = HomogeneousMap::from_matrix(m, target, total as i32, &dense)
        .map_err(|_| Error::Inconsistent(format!("bracket value in degree {total} is not homogeneous")))?;
    let coords = level
        .carrier
        .coordinates(&map.to_coords())
        .ok_or_else(|| Error::Inconsistent(format!("bracket value is not in g^{total}")))?;
    let mut out = zero_vec(n);
    if !coords.is_empty() {
        out[space.range(total as i32)].clone_from_slice(&coords);
    }
    Ok(out)
}

/// Inclusion of `g¹` for a smaller `g⁰` into `Hom¹(m, m + g⁰′)`: coordinates
/// are rewritten through the `g⁰ ⊂ g⁰′` inclusion.
pub fn include_first_level(small: &ProlongationResult, big: &ProlongationResult) -> Result<Subspace> {
    let m = small.algebra.space();
    let (Some(l_small), Some(l_big)) = (small.level(1), big.level(1)) else {
        return Err(Error::Unreachable("level 1 missing".into()));
    };
    let (g_small, g_big) = (&small.levels[0], &big.levels[0]);
    // g⁰ basis vectors of the small algebra written in the big algebra's g⁰ basis
    let incl: Vec<Vec<Rational>> = g_small
        .carrier
        .basis_vectors()
        .iter()
        .map(|v| g_big.carrier.coordinates(v).ok_or_else(|| Error::Containment("g0 is not contained in the larger g0".into())))
        .collect::<Result<_>>()?;
    let (ts, tb) = (&l_small.target, &l_big.target);
    let k = m.dim();
    let vectors = l_small
        .basis
        .iter()
        .map(|a| {
            let dense = a.to_matrix();
            let mut out = Matrix::zeros(tb.dim(), k);
            for x in 0..k {
                let col = dense.column(x);
                for (i, c) in col[..k].iter().enumerate() {
                    out[(i, x)] = c.clone();
                }
                for (j, c) in col[k..ts.dim()].iter().enumerate() {
                    for (i, v) in incl[j].iter().enumerate() {
                        out[(k + i, x)] += c * v;
                    }
                }
            }
            HomogeneousMap::from_matrix(m, tb, 1, &out).map(|h| h.to_coords())
        })
        .collect::<Result<_>>()?;
    Ok(Subspace::span(HomLayout::new(m, tb, 1).dim, vectors))
}

/// The degree-0 algebra of a result as maps on `m`.
pub fn g0_maps(result: &ProlongationResult) -> Vec<HomogeneousMap> {
    subspace_maps(result.algebra.space(), &result.levels[0].carrier)
}
