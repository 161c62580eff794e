//! Slow reference prolongation: dense unknowns over the whole Hom space,
//! degree conditions as explicit equations, a private sparse eliminator and
//! hand-written structure constants. Shares no code with the engine.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

pub type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Basis `0..n` with degrees; `bracket[a][b]` is the coordinate vector of `[e_a, e_b]`.
#[derive(Clone, Debug)]
pub struct Alg {
    pub n: usize,
    pub deg: Vec<i32>,
    pub bracket: Vec<Vec<Vec<Q>>>,
}

impl Alg {
    fn new(deg: Vec<i32>, table: &[(usize, usize, usize, i64)]) -> Alg {
        let n = deg.len();
        let mut bracket = vec![vec![vec![Q::zero(); n]; n]; n];
        for &(a, b, c, k) in table {
            bracket[a][b][c] += q(k);
            bracket[b][a][c] -= q(k);
        }
        Alg { n, deg, bracket }
    }

    pub fn abelian(n: usize) -> Alg {
        Alg::new(vec![-1; n], &[])
    }

    /// `x_1..x_k, y_1..y_k, z` with `[x_i, y_i] = z`.
    pub fn heisenberg(k: usize) -> Alg {
        let mut deg = vec![-1; 2 * k];
        deg.push(-2);
        let table: Vec<_> = (0..k).map(|i| (i, k + i, 2 * k, 1)).collect();
        Alg::new(deg, &table)
    }

    /// `[e1,e2] = e3`, `[e1,e3] = e4`, `[e2,e3] = e5`.
    pub fn free_235() -> Alg {
        Alg::new(vec![-1, -1, -2, -3, -3], &[(0, 1, 2, 1), (0, 2, 3, 1), (1, 2, 4, 1)])
    }

    pub fn by_name(name: &str) -> Alg {
        match name {
            "free_235" => Alg::free_235(),
            _ => {
                if let Some(n) = name.strip_prefix("abelian") {
                    Alg::abelian(n.parse().unwrap())
                } else if let Some(n) = name.strip_prefix("heisenberg") {
                    Alg::heisenberg((n.parse::<usize>().unwrap() - 1) / 2)
                } else {
                    panic!("unknown algebra {name}")
                }
            }
        }
    }
}

/// Constraints on `g⁰` beyond being a degree-0 derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G0 {
    Zero,
    Gl,
    Sl,
    So,
    Co,
    Der0,
}

impl G0 {
    pub fn by_name(name: &str) -> G0 {
        match name {
            "zero" => G0::Zero,
            "gl" => G0::Gl,
            "sl" => G0::Sl,
            "so" => G0::So,
            "co" => G0::Co,
            "der0" => G0::Der0,
            _ => panic!("unknown g0 {name}"),
        }
    }
}

type Row = BTreeMap<usize, Q>;

/// Incremental row echelon form over sparse rows.
struct Echelon {
    width: usize,
    pivots: BTreeMap<usize, Row>,
}

impl Echelon {
    fn new(width: usize) -> Echelon {
        Echelon { width, pivots: BTreeMap::new() }
    }

    fn push(&mut self, mut row: Row) {
        row.retain(|_, v| !v.is_zero());
        let mut from = 0;
        loop {
            let hit = row.range(from..).find(|(k, _)| self.pivots.contains_key(k)).map(|(k, v)| (*k, v.clone()));
            let Some((k, v)) = hit else { break };
            for (j, p) in &self.pivots[&k] {
                let e = row.entry(*j).or_insert_with(Q::zero);
                *e -= &v * p;
                if e.is_zero() {
                    row.remove(j);
                }
            }
            from = k + 1;
        }
        if let Some((&lead, lv)) = row.iter().next() {
            let inv = lv.recip();
            for v in row.values_mut() {
                *v *= &inv;
            }
            self.pivots.insert(lead, row);
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn kernel(mut self) -> Vec<Vec<Q>> {
        let leads: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &l in &leads {
            let p = self.pivots[&l].clone();
            for (_, row) in self.pivots.range_mut(..l) {
                if let Some(v) = row.get(&l).cloned() {
                    for (j, pj) in &p {
                        let e = row.entry(*j).or_insert_with(Q::zero);
                        *e -= &v * pj;
                        if e.is_zero() {
                            row.remove(j);
                        }
                    }
                }
            }
        }
        (0..self.width)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![Q::zero(); self.width];
                v[free] = Q::one();
                for (&l, row) in &self.pivots {
                    if let Some(x) = row.get(&free) {
                        v[l] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// `m ⊕ g⁰ ⊕ … ⊕ g^k` with every basis element's bracket against `m`.
struct Tower {
    deg: Vec<i32>,
    /// `with_m[t][j]`: `[t, e_j]` as a vector over the basis existing when `t` was added.
    with_m: Vec<Vec<Vec<Q>>>,
}

impl Tower {
    fn new(alg: &Alg) -> Tower {
        Tower { deg: alg.deg.clone(), with_m: (0..alg.n).map(|a| alg.bracket[a].clone()).collect() }
    }

    fn len(&self) -> usize {
        self.deg.len()
    }

    fn bracket_m(&self, t: usize, j: usize, out: usize) -> Vec<Q> {
        let mut v = self.with_m[t][j].clone();
        v.resize(out, Q::zero());
        v
    }
}

fn g0_rows(alg: &Alg, kind: G0, index: &dyn Fn(usize, usize) -> usize) -> Vec<Row> {
    let n = alg.n;
    let one = |k: usize, v: i64| -> Row { [(k, q(v))].into_iter().collect() };
    let two = |k1: usize, k2: usize, v2: i64| -> Row {
        let mut r = Row::new();
        *r.entry(k1).or_insert_with(Q::zero) += q(1);
        *r.entry(k2).or_insert_with(Q::zero) += q(v2);
        r
    };
    match kind {
        G0::Gl | G0::Der0 => vec![],
        G0::Zero => (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| one(index(r, c), 1)).collect(),
        G0::Sl => vec![(0..n).map(|i| (index(i, i), q(1))).collect()],
        G0::So => {
            let mut rows = Vec::new();
            for i in 0..n {
                for j in i..n {
                    rows.push(two(index(i, j), index(j, i), 1));
                }
            }
            rows
        }
        G0::Co => {
            let mut rows = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    rows.push(two(index(i, j), index(j, i), 1));
                }
                if i > 0 {
                    rows.push(two(index(i, i), index(0, 0), -1));
                }
            }
            rows
        }
    }
}

/// `dim g^0, …, dim g^k` up to `max_degree`, stopping after the first zero level.
pub fn prolong_dims(alg: &Alg, kind: G0, max_degree: usize) -> Vec<usize> {
    let n = alg.n;
    let mut tower = Tower::new(alg);
    let mut dims = Vec::new();
    for k in 0..=max_degree {
        let big = tower.len();
        let index = move |r: usize, c: usize| r * n + c;
        let mut ech = Echelon::new(big * n);
        for r in 0..big {
            for c in 0..n {
                if tower.deg[r] != alg.deg[c] + k as i32 {
                    ech.push([(index(r, c), q(1))].into_iter().collect());
                }
            }
        }
        if k == 0 {
            for row in g0_rows(alg, kind, &index) {
                ech.push(row);
            }
        }
        // f([e_a, e_b]) − [f(e_a), e_b] + [f(e_b), e_a] = 0
        let images: Vec<Vec<Vec<Q>>> = (0..big).map(|s| (0..n).map(|j| tower.bracket_m(s, j, big)).collect()).collect();
        for a in 0..n {
            for b in a + 1..n {
                for r in 0..big {
                    let mut row = Row::new();
                    let mut add = |k: usize, v: &Q| {
                        if !v.is_zero() {
                            *row.entry(k).or_insert_with(Q::zero) += v;
                        }
                    };
                    for c in 0..n {
                        add(index(r, c), &alg.bracket[a][b][c]);
                    }
                    for s in 0..big {
                        add(index(s, a), &-images[s][b][r].clone());
                        add(index(s, b), &images[s][a][r]);
                    }
                    ech.push(row);
                }
            }
        }
        let rank = ech.rank();
        let basis = ech.kernel();
        assert_eq!(basis.len(), big * n - rank);
        dims.push(basis.len());
        for v in &basis {
            tower.deg.push(k as i32);
            tower.with_m.push((0..n).map(|c| (0..big).map(|r| v[index(r, c)].clone()).collect()).collect());
        }
        if k > 0 && basis.is_empty() {
            break;
        }
    }
    dims
}

/// `dim Der⁰(m)`.
pub fn der0_dim(alg: &Alg) -> usize {
    prolong_dims(alg, G0::Der0, 0)[0]
}

/// `(order, dim m + Σ dim g^i)` when a zero level was reached.
pub fn order_and_bound(alg: &Alg, dims: &[usize]) -> Option<(usize, usize)> {
    let first_zero = dims.iter().skip(1).position(|&d| d == 0)? + 1;
    let order = first_zero - 1;
    Some((order, alg.n + dims[..=order].iter().sum::<usize>()))
}
