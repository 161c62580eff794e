//! Graded Lie algebras given by structure constants, degree-zero
//! derivations, and the extension `m(g⁰) = m + g⁰`.

use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{hom_basis, GradedSpace, HomLayout, HomogeneousMap};
use crate::linear::{axpy, is_zero_vec, kernel, sub_vec, zero_vec, Matrix, Rational, Subspace};

/// A finite-dimensional graded Lie algebra over ℚ.
///
/// The bracket table stores `[e_a, e_b]` for every ordered pair, so a table
/// that is not antisymmetric can be represented (and reported by
/// [`GradedLieAlgebra::validate`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    name: String,
    space: GradedSpace,
    table: Vec<Rational>,
}

impl GradedLieAlgebra {
    /// The abelian algebra on `space`.
    pub fn abelian_on(name: impl Into<String>, space: GradedSpace) -> Self {
        let n = space.dim();
        GradedLieAlgebra { name: name.into(), space, table: zero_vec(n * n * n) }
    }

    /// Builds an algebra from `[e_a, e_b] = value` entries; each entry also
    /// sets `[e_b, e_a] = -value` unless the reverse pair is listed explicitly.
    pub fn from_brackets(
        name: impl Into<String>,
        space: GradedSpace,
        entries: &[(usize, usize, Vec<Rational>)],
    ) -> Result<Self> {
        let mut alg = Self::abelian_on(name, space);
        let n = alg.dim();
        let mut explicit = std::collections::HashSet::new();
        for (a, b, v) in entries {
            if *a >= n || *b >= n || v.len() != n {
                return Err(Error::Dimension(format!("bracket entry ({a}, {b}) does not fit a {n}-dimensional algebra")));
            }
            if !explicit.insert((*a, *b)) {
                return Err(Error::Invalid(format!(
                    "bracket [{}, {}] listed twice",
                    alg.space.label(*a),
                    alg.space.label(*b)
                )));
            }
        }
        for (a, b, v) in entries {
            alg.set_bracket(*a, *b, v.clone());
            if a != b && !explicit.contains(&(*b, *a)) {
                alg.set_bracket(*b, *a, v.iter().map(|x| -x).collect());
            }
        }
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `[e_a, e_b]` in global coordinates.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[Rational] {
        let n = self.dim();
        &self.table[(a * n + b) * n..(a * n + b + 1) * n]
    }

    pub fn set_bracket(&mut self, a: usize, b: usize, value: Vec<Rational>) {
        let n = self.dim();
        assert_eq!(value.len(), n);
        self.table[(a * n + b) * n..(a * n + b + 1) * n].clone_from_slice(&value);
    }

    /// Adds `delta` to the `target` coordinate of `[e_a, e_b]` only.
    pub fn perturb(&mut self, a: usize, b: usize, target: usize, delta: &Rational) {
        let n = self.dim();
        self.table[(a * n + b) * n + target] += delta;
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::Dimension(format!("bracket of vectors of lengths {} and {} in dimension {n}", x.len(), y.len())));
        }
        let mut out = zero_vec(n);
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                axpy(&mut out, &(xa * yb), self.bracket_basis(a, b));
            }
        }
        Ok(out)
    }

    /// `[e_a, y]`.
    pub fn bracket_with_basis(&self, a: usize, y: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vec(self.dim());
        for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            axpy(&mut out, yb, self.bracket_basis(a, b));
        }
        out
    }

    /// Lists every violated antisymmetry, grading and Jacobi instance.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let degs = self.space.degrees_by_index();
        let label = |i: usize| self.space.label(i).to_string();
        let mut violations = Vec::new();
        for a in 0..n {
            for b in a..n {
                let ab = self.bracket_basis(a, b);
                let ba = self.bracket_basis(b, a);
                if ab.iter().zip(ba).any(|(x, y)| !(x + y).is_zero()) {
                    violations.push(Violation::Antisymmetry { left: label(a), right: label(b) });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for (c, v) in self.bracket_basis(a, b).iter().enumerate() {
                    if !v.is_zero() && degs[c] != degs[a] + degs[b] {
                        violations.push(Violation::Grading { left: label(a), right: label(b), target: label(c) });
                    }
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                let ab = self.bracket_basis(a, b).to_vec();
                for c in b..n {
                    let bc = self.bracket_basis(b, c);
                    let ca = self.bracket_basis(c, a);
                    let mut j = self.bracket_with_basis(a, bc);
                    let t2 = self.bracket_with_basis(b, ca);
                    let t3 = self.bracket_with_basis(c, &ab);
                    for (x, (y, z)) in j.iter_mut().zip(t2.iter().zip(&t3)) {
                        *x += y + z;
                    }
                    if !is_zero_vec(&j) {
                        violations.push(Violation::Jacobi { a: label(a), b: label(b), c: label(c) });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// The components of negative degree, with the restricted bracket.
    pub fn negative_part(&self) -> GradedLieAlgebra {
        let neg = self.space.below(0);
        let k = neg.dim();
        let mut out = GradedLieAlgebra::abelian_on(self.name.clone(), neg);
        // negative components are a prefix of the global coordinates
        for a in 0..k {
            for b in 0..k {
                out.set_bracket(a, b, self.bracket_basis(a, b)[..k].to_vec());
            }
        }
        out
    }

    pub fn is_negatively_graded(&self) -> bool {
        self.space.max_degree().is_none_or(|d| d < 0)
    }

    /// Whether the negative part is generated by its degree −1 component:
    /// `[m^{-1}, m^{-j}] = m^{-j-1}` for every `j >= 1`.
    pub fn is_fundamental(&self) -> bool {
        let m = self.negative_part();
        let Some(lowest) = m.space.min_degree() else {
            return true;
        };
        let n = m.dim();
        let gens = m.space.range(-1);
        if gens.is_empty() {
            return false;
        }
        for j in 1..-lowest {
            let target = m.space.range(-j - 1);
            let mut vectors = Vec::new();
            for x in gens.clone() {
                for y in m.space.range(-j) {
                    vectors.push(m.bracket_basis(x, y).to_vec());
                }
            }
            if Subspace::span(n, vectors) != Subspace::coordinate(n, target) {
                return false;
            }
        }
        true
    }

    /// `D[x,y] − [Dx,y] − [x,Dy]` for an endomorphism `D` given as a dense matrix.
    pub fn derivation_defect(&self, d: &Matrix, a: usize, b: usize) -> Vec<Rational> {
        let da = d.column(a);
        let db = d.column(b);
        let mut out = d.mul_vec(self.bracket_basis(a, b));
        let t1 = self.bracket(&da, &crate::linear::unit_vec(self.dim(), b)).expect("dimensions agree");
        let t2 = self.bracket(&crate::linear::unit_vec(self.dim(), a), &db).expect("dimensions agree");
        out = sub_vec(&sub_vec(&out, &t1), &t2);
        out
    }

    pub fn is_derivation(&self, d: &Matrix) -> bool {
        let n = self.dim();
        (0..n).all(|a| (a + 1..n).all(|b| is_zero_vec(&self.derivation_defect(d, a, b))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry { left: String, right: String },
    Grading { left: String, right: String, target: String },
    Jacobi { a: String, b: String, c: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { left, right } => write!(f, "antisymmetry fails for ({left}, {right})"),
            Violation::Grading { left, right, target } => {
                write!(f, "grading fails: [{left}, {right}] has a {target} component of the wrong degree")
            }
            Violation::Jacobi { a, b, c } => write!(f, "Jacobi identity fails for ({a}, {b}, {c})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All degree-0 derivations of `m`, as a subspace of `Hom^0(m, m)` coordinates.
pub fn der0(m: &GradedLieAlgebra) -> Result<Subspace> {
    if !m.validate().is_valid() {
        return Err(Error::Invalid(format!("{} is not a graded Lie algebra", m.name())));
    }
    let basis = hom_basis(m.space(), m.space(), 0);
    let n = m.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let columns: Vec<Vec<Rational>> = basis
        .iter()
        .map(|e| {
            let d = e.to_matrix();
            pairs.iter().flat_map(|&(a, b)| m.derivation_defect(&d, a, b)).collect()
        })
        .collect();
    let constraints = Matrix::from_columns(pairs.len() * n, &columns);
    let der = kernel(&constraints);
    let maps = subspace_maps(m.space(), &der);
    check_commutator_closed(m.space(), &der, &maps)?;
    Ok(der)
}

/// Basis maps of a subspace of `Hom^0(m, m)` (the RREF rows).
pub fn subspace_maps(space: &GradedSpace, s: &Subspace) -> Vec<HomogeneousMap> {
    s.basis_vectors()
        .iter()
        .map(|v| HomogeneousMap::from_coords(space, space, 0, v).expect("degree-0 coordinates"))
        .collect()
}

fn commutator(a: &HomogeneousMap, b: &HomogeneousMap) -> HomogeneousMap {
    a.compose(b).expect("same space").add(&b.compose(a).expect("same space").scale(&-Rational::one())).expect("same Hom space")
}

fn check_commutator_closed(space: &GradedSpace, s: &Subspace, maps: &[HomogeneousMap]) -> Result<()> {
    for (i, a) in maps.iter().enumerate() {
        for b in &maps[i + 1..] {
            if !s.contains(&commutator(a, b).to_coords()) {
                return Err(Error::Invalid(format!(
                    "degree-0 maps on a {}-dimensional space are not closed under commutator",
                    space.dim()
                )));
            }
        }
    }
    Ok(())
}

/// Choice of the degree-zero algebra `g⁰ ⊂ Der⁰(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum G0Spec {
    Zero,
    Gl,
    Sl,
    /// Infinitesimal isometries of a symmetric form (identity by default).
    So(Option<Matrix>),
    /// Infinitesimal isometries of a symplectic form (standard by default).
    Sp(Option<Matrix>),
    /// `so(form) ⊕ ℚ·Id`.
    Co(Option<Matrix>),
    Der0,
    /// Explicit degree-0 generators; their span must be a subalgebra of Der⁰(m).
    Generators(Vec<HomogeneousMap>),
}

impl G0Spec {
    pub fn preset(name: &str) -> Result<Self> {
        Ok(match name {
            "zero" => G0Spec::Zero,
            "gl" => G0Spec::Gl,
            "sl" => G0Spec::Sl,
            "so" => G0Spec::So(None),
            "sp" => G0Spec::Sp(None),
            "co" => G0Spec::Co(None),
            "der0" => G0Spec::Der0,
            other => return Err(Error::Parse(format!("unknown g0 preset {other:?}"))),
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            G0Spec::Zero => "zero",
            G0Spec::Gl => "gl",
            G0Spec::Sl => "sl",
            G0Spec::So(_) => "so",
            G0Spec::Sp(_) => "sp",
            G0Spec::Co(_) => "co",
            G0Spec::Der0 => "der0",
            G0Spec::Generators(_) => "generators",
        }
    }

    /// The subspace `g⁰ ⊂ Hom^0(m, m)`, validated to be a subalgebra of Der⁰(m).
    pub fn resolve(&self, m: &GradedLieAlgebra) -> Result<Subspace> {
        let space = m.space();
        let layout = HomLayout::new(space, space, 0);
        let classical = |kind: &str| -> Result<usize> {
            if space.components().len() != 1 || space.min_degree() != Some(-1) {
                return Err(Error::Invalid(format!("the {kind} preset needs m concentrated in degree -1")));
            }
            Ok(space.dim())
        };
        let s = match self {
            G0Spec::Zero => Subspace::zero(layout.dim),
            G0Spec::Der0 => return der0(m),
            G0Spec::Gl => {
                classical("gl")?;
                Subspace::full(layout.dim)
            }
            G0Spec::Sl => {
                let n = classical("sl")?;
                let trace: Vec<Rational> = (0..n * n).map(|k| if k / n == k % n { Rational::one() } else { Rational::zero() }).collect();
                kernel(&Matrix::from_rows(n * n, vec![trace])?)
            }
            G0Spec::So(form) => {
                let n = classical("so")?;
                let q = form.clone().unwrap_or_else(|| Matrix::identity(n));
                check_form(&q, n, true)?;
                isometry_algebra(&q)
            }
            G0Spec::Sp(form) => {
                let n = classical("sp")?;
                let q = match form {
                    Some(q) => q.clone(),
                    None => standard_symplectic(n)?,
                };
                check_form(&q, n, false)?;
                isometry_algebra(&q)
            }
            G0Spec::Co(form) => {
                let n = classical("co")?;
                let q = form.clone().unwrap_or_else(|| Matrix::identity(n));
                check_form(&q, n, true)?;
                isometry_algebra(&q).sum(&Subspace::span(n * n, vec![Matrix::identity(n).entries().to_vec()]))
            }
            G0Spec::Generators(gens) => {
                let mut vectors = Vec::new();
                for g in gens {
                    if g.source() != space || g.target() != space || g.degree() != 0 {
                        return Err(Error::Invalid("g0 generators must be degree-0 endomorphisms of m".into()));
                    }
                    vectors.push(g.to_coords());
                }
                Subspace::span(layout.dim, vectors)
            }
        };
        let maps = subspace_maps(space, &s);
        for g in &maps {
            if !m.is_derivation(&g.to_matrix()) {
                return Err(Error::Invalid("g0 contains a map that is not a derivation of m".into()));
            }
        }
        check_commutator_closed(space, &s, &maps)?;
        Ok(s)
    }
}

fn standard_symplectic(n: usize) -> Result<Matrix> {
    if !n.is_multiple_of(2) {
        return Err(Error::Invalid(format!("sp needs an even dimension, got {n}")));
    }
    let h = n / 2;
    let mut j = Matrix::zeros(n, n);
    for i in 0..h {
        j[(i, h + i)] = Rational::one();
        j[(h + i, i)] = -Rational::one();
    }
    Ok(j)
}

fn check_form(q: &Matrix, n: usize, symmetric: bool) -> Result<()> {
    if (q.rows(), q.cols()) != (n, n) {
        return Err(Error::Invalid(format!("form must be {n}x{n}")));
    }
    let t = q.transpose();
    let ok = if symmetric { t == *q } else { t == q.scale(&-Rational::one()) };
    if !ok {
        let kind = if symmetric { "symmetric" } else { "antisymmetric" };
        return Err(Error::Invalid(format!("form must be {kind}")));
    }
    if q.inverse().is_none() {
        return Err(Error::Invalid("form must be non-degenerate".into()));
    }
    Ok(())
}

/// `{A : Aᵀ Q + Q A = 0}` in row-major `gl(n)` coordinates.
fn isometry_algebra(q: &Matrix) -> Subspace {
    let n = q.rows();
    let columns: Vec<Vec<Rational>> = (0..n * n)
        .map(|k| {
            let mut e = Matrix::zeros(n, n);
            e[(k / n, k % n)] = Rational::one();
            e.transpose().mul(q).add(&q.mul(&e)).entries().to_vec()
        })
        .collect();
    kernel(&Matrix::from_columns(n * n, &columns))
}

/// `m(g⁰) = m + g⁰` with `[z, x] = z(x)`, `[x, z] = −z(x)` and the
/// commutator on `g⁰`, whose basis is the RREF basis of `g0`.
pub fn adjoin_g0(m: &GradedLieAlgebra, g0: &Subspace) -> Result<GradedLieAlgebra> {
    if !m.is_negatively_graded() {
        return Err(Error::Invalid("adjoin_g0 needs a negatively graded algebra".into()));
    }
    let space = m.space();
    if g0.ambient_dim() != HomLayout::new(space, space, 0).dim {
        return Err(Error::Dimension("g0 does not live in Hom^0(m, m)".into()));
    }
    let maps = subspace_maps(space, g0);
    for g in &maps {
        if !m.is_derivation(&g.to_matrix()) {
            return Err(Error::Invalid("g0 contains a map that is not a derivation of m".into()));
        }
    }
    let labels = (1..=maps.len()).map(|i| format!("g0_{i}")).collect();
    let big = space.with_component(0, labels)?;
    let k = space.dim();
    let n = big.dim();
    let mut out = GradedLieAlgebra::abelian_on(m.name(), big);
    for a in 0..k {
        for b in 0..k {
            let mut v = m.bracket_basis(a, b).to_vec();
            v.resize(n, Rational::zero());
            out.set_bracket(a, b, v);
        }
    }
    for (i, z) in maps.iter().enumerate() {
        for x in 0..k {
            let mut v = z.apply_basis(x);
            v.resize(n, Rational::zero());
            out.set_bracket(k + i, x, v.clone());
            out.set_bracket(x, k + i, v.iter().map(|t| -t).collect());
        }
        for (j, w) in maps.iter().enumerate() {
            let coords = g0.coordinates(&commutator(z, w).to_coords()).ok_or_else(|| {
                Error::Invalid("g0 is not closed under commutator".into())
            })?;
            let mut v = zero_vec(n);
            v[k..].clone_from_slice(&coords);
            out.set_bracket(k + i, k + j, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_algebra;
    use crate::linear::{int, unit_vec};

    #[test]
    fn catalog_algebras_validate() {
        for name in ["abelian2", "abelian3", "heisenberg3", "heisenberg5", "free_235"] {
            let m = make_algebra(name).unwrap();
            assert!(m.validate().is_valid(), "{name}");
            assert!(m.is_fundamental(), "{name}");
        }
    }

    #[test]
    fn broken_antisymmetry_is_reported() {
        let mut h = make_algebra("heisenberg3").unwrap();
        let e1 = h.space().index_of("e1").unwrap();
        let e2 = h.space().index_of("e2").unwrap();
        let e3 = h.space().index_of("e3").unwrap();
        h.perturb(e1, e2, e3, &int(1));
        let report = h.validate();
        assert!(report.violations.contains(&Violation::Antisymmetry { left: "e1".into(), right: "e2".into() }));
    }

    #[test]
    fn fundamental_examples() {
        let h = make_algebra("heisenberg3").unwrap();
        assert!(h.is_fundamental());
        let a = GradedLieAlgebra::abelian_on("a", GradedSpace::from_dims(&[(-1, 2), (-2, 1)]));
        assert!(!a.is_fundamental());
        assert!(make_algebra("abelian4").unwrap().is_fundamental());
        let gap = GradedLieAlgebra::abelian_on("gap", GradedSpace::from_dims(&[(-1, 2), (-3, 1)]));
        assert!(!gap.is_fundamental());
    }

    #[test]
    fn der0_dims() {
        assert_eq!(der0(&make_algebra("abelian3").unwrap()).unwrap().dim(), 9);
        assert_eq!(der0(&make_algebra("heisenberg3").unwrap()).unwrap().dim(), 4);
        assert_eq!(der0(&make_algebra("free_235").unwrap()).unwrap().dim(), 4);
    }

    #[test]
    fn der0_of_heisenberg_acts_by_trace_on_center() {
        let h = make_algebra("heisenberg3").unwrap();
        let e3 = h.space().index_of("e3").unwrap();
        let (e1, e2) = (h.space().index_of("e1").unwrap(), h.space().index_of("e2").unwrap());
        for d in subspace_maps(h.space(), &der0(&h).unwrap()) {
            let m = d.to_matrix();
            assert_eq!(m[(e3, e3)], &m[(e1, e1)] + &m[(e2, e2)]);
        }
    }

    #[test]
    fn der0_is_bracket_closed() {
        let h = make_algebra("free_235").unwrap();
        let d = der0(&h).unwrap();
        let maps = subspace_maps(h.space(), &d);
        for a in &maps {
            for b in &maps {
                assert!(d.contains(&commutator(a, b).to_coords()));
            }
        }
    }

    #[test]
    fn presets_have_classical_dims() {
        let a3 = make_algebra("abelian3").unwrap();
        assert_eq!(G0Spec::Gl.resolve(&a3).unwrap().dim(), 9);
        assert_eq!(G0Spec::Sl.resolve(&a3).unwrap().dim(), 8);
        assert_eq!(G0Spec::So(None).resolve(&a3).unwrap().dim(), 3);
        assert_eq!(G0Spec::Co(None).resolve(&a3).unwrap().dim(), 4);
        assert_eq!(G0Spec::Zero.resolve(&a3).unwrap().dim(), 0);
        let a4 = make_algebra("abelian4").unwrap();
        assert_eq!(G0Spec::Sp(None).resolve(&a4).unwrap().dim(), 10);
        assert!(G0Spec::Sp(None).resolve(&a3).is_err());
        assert!(G0Spec::Gl.resolve(&make_algebra("heisenberg3").unwrap()).is_err());
    }

    #[test]
    fn generators_must_be_derivations() {
        let h = make_algebra("heisenberg3").unwrap();
        // scaling e1 alone does not act on e3 consistently
        let mut bad = HomogeneousMap::zero(h.space(), h.space(), 0);
        bad.set_block(-1, Matrix::from_i64(&[&[1, 0], &[0, 0]])).unwrap();
        assert!(G0Spec::Generators(vec![bad]).resolve(&h).is_err());
    }

    #[test]
    fn adjoin_examples() {
        let a2 = make_algebra("abelian2").unwrap();
        let zero = adjoin_g0(&a2, &Subspace::zero(4)).unwrap();
        assert_eq!(zero.dim(), 2);
        let gl = adjoin_g0(&a2, &G0Spec::Gl.resolve(&a2).unwrap()).unwrap();
        assert!(gl.validate().is_valid());
        assert_eq!(gl.dim(), 6);
        let h = make_algebra("heisenberg3").unwrap();
        let m0 = adjoin_g0(&h, &der0(&h).unwrap()).unwrap();
        assert_eq!(m0.dim(), 7);
        assert!(m0.validate().is_valid());
    }

    #[test]
    fn bracket_eval_examples() {
        let h = make_algebra("heisenberg3").unwrap();
        let s = h.space();
        let e = |l: &str| unit_vec(3, s.index_of(l).unwrap());
        assert_eq!(h.bracket(&e("e1"), &e("e2")).unwrap(), e("e3"));
        let x = vec![int(1), int(2), int(-1)];
        assert!(is_zero_vec(&h.bracket(&x, &x).unwrap()));
        assert!(h.bracket(&x, &[int(1)]).is_err());
    }
}
