//! Built-in algebras and the reference values the engine is checked against.

use crate::error::{Error, Result};
use crate::graded::{Component, GradedSpace};
use crate::lie::GradedLieAlgebra;
use crate::linear::{unit_vec, Rational};

fn labels(range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("e{i}")).collect()
}

/// `abelianN`, `heisenbergN` (N odd, N >= 3) or `free_235`.
pub fn make_algebra(preset: &str) -> Result<GradedLieAlgebra> {
    let unknown = || Error::Invalid(format!("unknown preset {preset:?}"));
    if let Some(n) = preset.strip_prefix("abelian") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        return abelian(n);
    }
    if let Some(n) = preset.strip_prefix("heisenberg") {
        let dim: usize = n.parse().map_err(|_| unknown())?;
        if dim < 3 || dim.is_multiple_of(2) {
            return Err(unknown());
        }
        return heisenberg((dim - 1) / 2);
    }
    if preset == "free_235" {
        return free_235();
    }
    Err(unknown())
}

pub fn abelian(n: usize) -> Result<GradedLieAlgebra> {
    let space = GradedSpace::new(vec![Component { degree: -1, labels: labels(1..=n) }])?;
    Ok(GradedLieAlgebra::abelian_on(format!("abelian{n}"), space))
}

/// `[e_i, e_{n+i}] = e_{2n+1}`.
pub fn heisenberg(n: usize) -> Result<GradedLieAlgebra> {
    let space = GradedSpace::new(vec![
        Component { degree: -2, labels: vec![format!("e{}", 2 * n + 1)] },
        Component { degree: -1, labels: labels(1..=2 * n) },
    ])?;
    let dim = 2 * n + 1;
    let idx = |l: String| space.index_of(&l).expect("label exists");
    let z = idx(format!("e{}", 2 * n + 1));
    let entries: Vec<_> = (1..=n)
        .map(|i| (idx(format!("e{i}")), idx(format!("e{}", n + i)), unit_vec(dim, z)))
        .collect();
    GradedLieAlgebra::from_brackets(format!("heisenberg{dim}"), space, &entries)
}

/// `[e1,e2] = e3`, `[e1,e3] = e4`, `[e2,e3] = e5`.
pub fn free_235() -> Result<GradedLieAlgebra> {
    let space = GradedSpace::new(vec![
        Component { degree: -3, labels: labels(4..=5) },
        Component { degree: -2, labels: labels(3..=3) },
        Component { degree: -1, labels: labels(1..=2) },
    ])?;
    let idx = |l: &str| space.index_of(l).expect("label exists");
    let entries = [("e1", "e2", "e3"), ("e1", "e3", "e4"), ("e2", "e3", "e5")]
        .iter()
        .map(|(a, b, c)| (idx(a), idx(b), unit_vec(5, idx(c))))
        .collect::<Vec<(usize, usize, Vec<Rational>)>>();
    GradedLieAlgebra::from_brackets("free_235", space, &entries)
}

/// How a reference value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Closed formula, also reproduced by the slow dense oracle.
    Analytic,
    /// Slow dense oracle only.
    BruteForce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Der0Dim,
    G0Dim,
    /// `dim g^k`, `k >= 1`.
    LevelDim(usize),
    Order,
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub quantity: Quantity,
    pub value: usize,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub algebra: &'static str,
    pub g0: &'static str,
    pub max_degree: usize,
    pub expected: Vec<Expected>,
}

impl CatalogEntry {
    pub fn name(&self) -> String {
        format!("{}/{}", self.algebra, self.g0)
    }

    pub fn make(&self) -> Result<GradedLieAlgebra> {
        make_algebra(self.algebra)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim g^k` for the full linear algebra on `ℚⁿ`: `n·C(n+k, k+1)`.
pub fn gl_level_dim(n: usize, k: usize) -> usize {
    n * binomial(n + k, k + 1)
}

/// `dim g^k` for `sl(n)`: the trace-free part, `n·C(n+k, k+1) − C(n+k−1, k)`.
pub fn sl_level_dim(n: usize, k: usize) -> usize {
    gl_level_dim(n, k) - binomial(n + k - 1, k)
}

fn e(quantity: Quantity, value: usize, source: Source) -> Expected {
    Expected { quantity, value, source }
}

/// Every catalog run with its reference values.
pub fn entries() -> Vec<CatalogEntry> {
    use Quantity::*;
    use Source::*;
    let mut out = Vec::new();
    for n in [2, 3] {
        out.push(CatalogEntry {
            algebra: if n == 2 { "abelian2" } else { "abelian3" },
            g0: "gl",
            max_degree: 3,
            expected: (1..=3).map(|k| e(LevelDim(k), gl_level_dim(n, k), Analytic)).collect(),
        });
        out.push(CatalogEntry {
            algebra: if n == 2 { "abelian2" } else { "abelian3" },
            g0: "sl",
            max_degree: 3,
            expected: (1..=3).map(|k| e(LevelDim(k), sl_level_dim(n, k), Analytic)).collect(),
        });
    }
    out.push(CatalogEntry {
        algebra: "abelian3",
        g0: "so",
        max_degree: 10,
        expected: vec![e(G0Dim, 3, Analytic), e(LevelDim(1), 0, BruteForce), e(Order, 0, BruteForce), e(Bound, 6, BruteForce)],
    });
    out.push(CatalogEntry {
        algebra: "abelian3",
        g0: "co",
        max_degree: 10,
        expected: vec![
            e(G0Dim, 4, Analytic),
            e(LevelDim(1), 3, BruteForce),
            e(LevelDim(2), 0, BruteForce),
            e(Order, 1, BruteForce),
            e(Bound, 10, BruteForce),
        ],
    });
    out.push(CatalogEntry {
        algebra: "abelian2",
        g0: "zero",
        max_degree: 10,
        expected: vec![e(LevelDim(1), 0, Analytic), e(Order, 0, Analytic), e(Bound, 2, Analytic)],
    });
    out.push(CatalogEntry {
        algebra: "heisenberg3",
        g0: "der0",
        max_degree: 3,
        expected: vec![
            e(Der0Dim, 4, BruteForce),
            e(LevelDim(1), 6, BruteForce),
            e(LevelDim(2), 9, BruteForce),
            e(LevelDim(3), 12, BruteForce),
        ],
    });
    out.push(CatalogEntry {
        algebra: "heisenberg5",
        g0: "der0",
        max_degree: 2,
        expected: vec![e(Der0Dim, 11, BruteForce), e(LevelDim(1), 24, BruteForce), e(LevelDim(2), 46, BruteForce)],
    });
    out.push(CatalogEntry {
        algebra: "free_235",
        g0: "der0",
        max_degree: 10,
        expected: vec![
            e(Der0Dim, 4, BruteForce),
            e(LevelDim(1), 2, BruteForce),
            e(LevelDim(2), 1, BruteForce),
            e(LevelDim(3), 2, BruteForce),
            e(LevelDim(4), 0, BruteForce),
            e(Order, 3, BruteForce),
            e(Bound, 14, BruteForce),
        ],
    });
    out
}

/// The reference values of one entry.
pub fn expected_oracle(entry: &CatalogEntry) -> &[Expected] {
    &entry.expected
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name() == name)
}
