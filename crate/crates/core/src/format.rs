//! JSON formats for algebras, degree-zero algebras and reports.
//!
//! Rationals in reports are strings `"num/den"`; inputs accept integers,
//! `"p"` or `"p/q"`.

use std::collections::{BTreeMap, HashSet};

use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Component, GradedSpace, HomogeneousMap};
use crate::lie::{G0Spec, GradedLieAlgebra};
use crate::linear::{parse_rational, zero_vec, Matrix, Rational};
use crate::prolong::{order_and_bound, ProlongationResult, Status};
use crate::torsion::{KernelReport, TowerReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub basis: String,
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub degrees: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Reads the algebra format. A pair listed in one orientation implies the
/// other; when both are listed they are kept as given.
pub fn parse_algebra(text: &str) -> Result<GradedLieAlgebra> {
    let file: AlgebraFile = parse_json(text, "algebra JSON")?;
    algebra_from_file(&file)
}

pub fn algebra_from_file(file: &AlgebraFile) -> Result<GradedLieAlgebra> {
    let mut components = Vec::new();
    let mut seen = HashSet::new();
    for (deg, labels) in &file.degrees {
        let degree: i32 = deg.trim().parse().map_err(|_| Error::Parse(format!("degree key {deg:?} is not an integer")))?;
        for l in labels {
            if !seen.insert(l.clone()) {
                return Err(Error::Parse(format!("basis label {l:?} appears twice")));
            }
        }
        if !labels.is_empty() {
            components.push(Component { degree, labels: labels.clone() });
        }
    }
    components.sort_by_key(|c| c.degree);
    let space = GradedSpace::new(components).map_err(|e| Error::Parse(e.to_string()))?;
    let n = space.dim();
    let index = |l: &str| space.index_of(l).ok_or_else(|| Error::Parse(format!("unknown basis label {l:?}")));
    let mut entries = Vec::new();
    for b in &file.brackets {
        let mut v = zero_vec(n);
        for t in &b.value {
            if t.den == 0 {
                return Err(Error::Parse(format!("zero denominator in [{}, {}]", b.left, b.right)));
            }
            v[index(&t.basis)?] += Rational::new(t.num.into(), t.den.into());
        }
        entries.push((index(&b.left)?, index(&b.right)?, v));
    }
    GradedLieAlgebra::from_brackets(file.name.clone(), space, &entries).map_err(|e| Error::Parse(e.to_string()))
}

/// Both orientations of every pair with a non-zero bracket, so an
/// antisymmetry defect survives a round trip.
pub fn algebra_to_file(alg: &GradedLieAlgebra) -> Result<AlgebraFile> {
    let space = alg.space();
    let mut degrees = BTreeMap::new();
    for c in space.components() {
        degrees.insert(c.degree.to_string(), c.labels.clone());
    }
    let n = alg.dim();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let value: Vec<Term> = alg
                .bracket_basis(a, b)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    let (num, den) = (c.numer().to_i64(), c.denom().to_i64());
                    match (num, den) {
                        (Some(num), Some(den)) => Ok(Term { basis: space.label(i).to_string(), num, den }),
                        _ => Err(Error::Invalid("structure constant does not fit in 64 bits".into())),
                    }
                })
                .collect::<Result<_>>()?;
            if !value.is_empty() || alg.bracket_basis(b, a).iter().any(|c| !c.is_zero()) {
                brackets.push(BracketEntry { left: space.label(a).into(), right: space.label(b).into(), value });
            }
        }
    }
    Ok(AlgebraFile { name: alg.name().to_string(), degrees, brackets })
}

pub fn algebra_to_json(alg: &GradedLieAlgebra) -> Result<String> {
    Ok(serde_json::to_string_pretty(&algebra_to_file(alg)?).expect("serializable"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

impl RawRational {
    fn value(&self) -> Result<Rational> {
        match self {
            RawRational::Int(i) => Ok(Rational::from_integer((*i).into())),
            RawRational::Text(s) => parse_rational(s),
        }
    }
}

fn raw_matrix(rows: &[Vec<RawRational>]) -> Result<Matrix> {
    let cols = rows.first().map_or(0, |r| r.len());
    let rows = rows.iter().map(|r| r.iter().map(RawRational::value).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(cols, rows).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct G0File {
    preset: Option<String>,
    form: Option<Vec<Vec<RawRational>>>,
    generators: Option<Vec<BTreeMap<String, Vec<Vec<RawRational>>>>>,
}

/// `{"preset": "so", "form": [[…]]}` or `{"generators": [{"-1": [[…]]}, …]}`.
pub fn parse_g0(text: &str, m: &GradedLieAlgebra) -> Result<G0Spec> {
    let file: G0File = parse_json(text, "g0 JSON")?;
    match (&file.preset, &file.generators) {
        (Some(p), None) => {
            let form = file.form.as_deref().map(raw_matrix).transpose()?;
            Ok(match (G0Spec::preset(p)?, form) {
                (spec, None) => spec,
                (G0Spec::So(_), Some(f)) => G0Spec::So(Some(f)),
                (G0Spec::Sp(_), Some(f)) => G0Spec::Sp(Some(f)),
                (G0Spec::Co(_), Some(f)) => G0Spec::Co(Some(f)),
                (other, Some(_)) => return Err(Error::Parse(format!("the {} preset takes no form", other.label()))),
            })
        }
        (None, Some(gens)) => {
            if file.form.is_some() {
                return Err(Error::Parse("a form only goes with a preset".into()));
            }
            let space = m.space();
            let maps = gens
                .iter()
                .map(|blocks| {
                    let mut h = HomogeneousMap::zero(space, space, 0);
                    for (deg, rows) in blocks {
                        let d: i32 = deg.trim().parse().map_err(|_| Error::Parse(format!("degree key {deg:?} is not an integer")))?;
                        if space.dim_of(d) == 0 {
                            return Err(Error::Parse(format!("m has no component of degree {d}")));
                        }
                        h.set_block(d, raw_matrix(rows)?).map_err(|e| Error::Parse(e.to_string()))?;
                    }
                    Ok(h)
                })
                .collect::<Result<_>>()?;
            Ok(G0Spec::Generators(maps))
        }
        _ => Err(Error::Parse("g0 JSON needs exactly one of \"preset\" or \"generators\"".into())),
    }
}

pub fn rational_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn matrix_text(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| r.iter().map(rational_text).collect()).collect()
}

/// A homogeneous map as blocks keyed by source degree.
pub fn map_blocks(h: &HomogeneousMap) -> BTreeMap<String, Vec<Vec<String>>> {
    h.blocks().iter().map(|(d, b)| (d.to_string(), matrix_text(b))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusReport {
    pub kind: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub degree: usize,
    pub dim: usize,
    pub target: GradedSpace,
    pub basis: Vec<BTreeMap<String, Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProlongationReport {
    pub algebra: String,
    pub g0: String,
    pub max_degree: usize,
    pub status: StatusReport,
    pub dims: Vec<usize>,
    pub base_dim: usize,
    pub order: Option<usize>,
    pub bound: Option<usize>,
    pub levels: Vec<LevelReport>,
}

impl ProlongationReport {
    pub fn new(result: &ProlongationResult, base_dim: usize) -> Self {
        let status = match result.status() {
            Status::Finite(order) => StatusReport { kind: "finite".into(), degree: order },
            Status::TruncatedAt(d) => StatusReport { kind: "truncated".into(), degree: d },
        };
        let (order, bound) = order_and_bound(result, base_dim).map_or((None, None), |(o, b)| (Some(o), Some(b)));
        ProlongationReport {
            algebra: result.algebra().name().to_string(),
            g0: result.g0_label().to_string(),
            max_degree: result.max_degree(),
            status,
            dims: result.dims(),
            base_dim,
            order,
            bound,
            levels: result
                .levels()
                .iter()
                .map(|l| LevelReport {
                    degree: l.degree(),
                    dim: l.dim(),
                    target: l.target().clone(),
                    basis: l.basis().iter().map(map_blocks).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelJson {
    pub n: usize,
    pub torsion_dim: usize,
    pub domain_dim: usize,
    pub rank: usize,
    pub complement_dim: usize,
    pub kernel_dim: usize,
    pub expected_kernel_dim: usize,
    pub kernel_identity: bool,
    pub injective: Option<bool>,
    pub split_respected: bool,
    pub witnesses: Vec<String>,
}

impl From<&KernelReport> for KernelJson {
    fn from(r: &KernelReport) -> Self {
        KernelJson {
            n: r.n,
            torsion_dim: r.torsion_dim,
            domain_dim: r.domain_dim,
            rank: r.rank,
            complement_dim: r.complement_dim,
            kernel_dim: r.kernel_dim,
            expected_kernel_dim: r.expected_kernel_dim,
            kernel_identity: r.kernel_identity,
            injective: r.injective,
            split_respected: r.split_respected,
            witnesses: r.witnesses.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerRowJson {
    pub n: usize,
    pub dim_g: usize,
    pub structure_group_dim: usize,
    pub reduced_group_dim: usize,
    pub torsion_dim: usize,
    pub rank: usize,
    pub complement_dim: usize,
    pub kernel_dim: usize,
    pub total_dim: usize,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerJson {
    pub algebra: String,
    pub g0: String,
    pub base_dim: usize,
    pub status: StatusReport,
    pub rows: Vec<TowerRowJson>,
    pub bound: Option<usize>,
}

impl From<&TowerReport> for TowerJson {
    fn from(t: &TowerReport) -> Self {
        let status = match t.status {
            Status::Finite(order) => StatusReport { kind: "finite".into(), degree: order },
            Status::TruncatedAt(d) => StatusReport { kind: "truncated".into(), degree: d },
        };
        TowerJson {
            algebra: t.algebra.clone(),
            g0: t.g0.clone(),
            base_dim: t.base_dim,
            status,
            rows: t
                .rows
                .iter()
                .map(|r| TowerRowJson {
                    n: r.n,
                    dim_g: r.dim_g,
                    structure_group_dim: r.structure_group_dim,
                    reduced_group_dim: r.reduced_group_dim,
                    torsion_dim: r.torsion_dim,
                    rank: r.rank,
                    complement_dim: r.complement_dim,
                    kernel_dim: r.kernel_dim,
                    total_dim: r.total_dim,
                    consistent: r.consistent,
                })
                .collect(),
            bound: t.bound,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_algebra;
    use crate::prolong::prolong;

    #[test]
    fn algebra_roundtrip() {
        for name in ["heisenberg3", "free_235", "abelian2"] {
            let alg = make_algebra(name).unwrap();
            let text = algebra_to_json(&alg).unwrap();
            assert_eq!(parse_algebra(&text).unwrap(), alg);
        }
    }

    #[test]
    fn one_orientation_implies_the_other() {
        let text = r#"{"name":"h","degrees":{"-1":["e1","e2"],"-2":["e3"]},
            "brackets":[{"left":"e1","right":"e2","value":[{"basis":"e3","num":1,"den":1}]}]}"#;
        assert_eq!(parse_algebra(text).unwrap().with_name("heisenberg3"), make_algebra("heisenberg3").unwrap());
    }

    #[test]
    fn malformed_inputs() {
        let err = parse_algebra("{\"name\": \"x\", \"degrees\": ").unwrap_err();
        assert!(matches!(err, Error::Parse(ref s) if s.contains("line")));
        assert!(parse_algebra(r#"{"name":"x","degrees":{"-1":["a","a"]}}"#).is_err());
        assert!(parse_algebra(r#"{"name":"x","degrees":{"-1":["a"]},"brackets":[{"left":"a","right":"b","value":[]}]}"#).is_err());
    }

    #[test]
    fn g0_files() {
        let a3 = make_algebra("abelian3").unwrap();
        let so = parse_g0(r#"{"preset":"so","form":[[1,0,0],[0,"2",0],[0,0,"1/3"]]}"#, &a3).unwrap();
        assert_eq!(so.resolve(&a3).unwrap().dim(), 3);
        let gens = parse_g0(r#"{"generators":[{"-1":[[1,0,0],[0,1,0],[0,0,1]]}]}"#, &a3).unwrap();
        assert_eq!(gens.resolve(&a3).unwrap().dim(), 1);
        assert!(parse_g0(r#"{"preset":"gl","form":[[1]]}"#, &a3).is_err());
    }

    #[test]
    fn prolongation_report_roundtrip() {
        let r = prolong(&make_algebra("abelian3").unwrap(), &G0Spec::Co(None), 10).unwrap();
        let text = to_json(&ProlongationReport::new(&r, 3));
        let back: ProlongationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(to_json(&back), text);
        assert_eq!(back.bound, Some(10));
    }
}
