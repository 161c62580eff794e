//! Seeded property suites for the quasi-gradation calculus and the catalog
//! reference values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, CatalogEntry, Quantity};
use crate::filtered::*;
use crate::graded::{GradedMap, GradedSpace};
use crate::lie::{der0, G0Spec};
use crate::linear::{Matrix, Rational};
use crate::prolong::{order_and_bound, prolong};

pub const DEFAULT_SEED: u64 = 20240611;
pub const DEFAULT_CASES: usize = 200;

/// A deliberate defect planted in the engine output, used to confirm the
/// suites can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Perturbs one entry of every `act_quasi` result.
    ActQuasi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn models() -> Vec<GradedSpace> {
    vec![
        GradedSpace::from_dims(&[(-2, 1), (-1, 2)]),
        GradedSpace::from_dims(&[(-1, 2), (0, 1), (1, 1)]),
        GradedSpace::from_dims(&[(-3, 1), (-2, 1), (-1, 2)]),
        GradedSpace::from_dims(&[(-1, 1), (0, 1), (1, 1), (2, 1)]),
    ]
}

struct Case {
    u: GradedFrame,
    h: AdaptedGradation,
    full: usize,
}

fn case(rng: &mut ChaCha8Rng) -> Case {
    let all = models();
    let model = &all[rng.gen_range(0..all.len())];
    let t = random_filtered_map(model, rng, false);
    let u = make_filtered_from_graded(model, &t).expect("random filtered map is valid");
    let h = random_gradation(&u, &t, rng);
    let full = u.filtration().full_degree();
    Case { u, h, full }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn act(u: &GradedFrame, f: &MLift, a: &GradedMap, fault: Fault) -> Result<MLift, String> {
    let out = act_quasi(u, f, a).map_err(err)?;
    if fault == Fault::ActQuasi {
        let (&i, block) = out.blocks().iter().next().expect("non-empty model");
        let mut blocks = out.blocks().clone();
        let mut b = block.clone();
        b[(0, 0)] += Rational::from_integer(1.into());
        blocks.insert(i, b);
        return Ok(MLift::from_parts_unchecked(out.degree(), blocks));
    }
    Ok(out)
}

fn roundtrip(rng: &mut ChaCha8Rng, _: Fault) -> Result<(), String> {
    let c = case(rng);
    let f = c.u.filtration();
    let m = rng.gen_range(1..=c.full);
    let q = project_gradation(f, &c.h, m).map_err(err)?;
    q.check(f).map_err(err)?;
    let lift = mlift_of_quasi(&c.u, &q).map_err(err)?;
    let back = quasi_of_mlift(&c.u, &lift).map_err(err)?;
    if back != q {
        return Err(format!("quasi_of_mlift(mlift_of_quasi(q)) differs from q at degree {m}"));
    }
    if mlift_of_quasi(&c.u, &back).map_err(err)? != lift {
        return Err(format!("mlift_of_quasi(quasi_of_mlift(F)) differs from F at degree {m}"));
    }
    Ok(())
}

fn composition(rng: &mut ChaCha8Rng, _: Fault) -> Result<(), String> {
    let c = case(rng);
    let f = c.u.filtration();
    let top = rng.gen_range(1..=c.full);
    let p = rng.gen_range(1..=top);
    let m = rng.gen_range(1..=p);
    let q = project_gradation(f, &c.h, top).map_err(err)?;
    let two_step = project_quasi(f, &project_quasi(f, &q, p).map_err(err)?, m).map_err(err)?;
    if two_step != project_quasi(f, &q, m).map_err(err)? {
        return Err(format!("Π_{p}^{m} ∘ Π_{top}^{p} differs from Π_{top}^{m}"));
    }
    if project_quasi(f, &project_gradation(f, &c.h, p).map_err(err)?, m).map_err(err)? != project_gradation(f, &c.h, m).map_err(err)? {
        return Err(format!("Π_{p}^{m} ∘ Π^{p} differs from Π^{m} on a gradation"));
    }
    Ok(())
}

fn orbit_is_fiber(rng: &mut ChaCha8Rng, _: Fault) -> Result<(), String> {
    let c = case(rng);
    let f = c.u.filtration();
    let m = rng.gen_range(1..=c.full);
    let a = random_unipotent(c.u.model(), rng, m as i32);
    let moved = act_gradation(&c.u, &c.h, &a).map_err(err)?;
    if project_gradation(f, &moved, m).map_err(err)? != project_gradation(f, &c.h, m).map_err(err)? {
        return Err(format!("Π^{m}(H·A) differs from Π^{m}(H) for A in GL_{m}"));
    }
    if !is_compatible(&c.u, &moved, &project_gradation(f, &c.h, m).map_err(err)?) {
        return Err(format!("H·A is not compatible with Π^{m}(H)"));
    }
    let b = transition(&c.u, &full_lift(&c.u, &c.h).map_err(err)?, &full_lift(&c.u, &moved).map_err(err)?).map_err(err)?;
    if !b.is_in_gl(m as i32) {
        return Err(format!("transition between gradations with equal Π^{m} leaves GL_{m}"));
    }
    Ok(())
}

fn simple_transitivity(rng: &mut ChaCha8Rng, fault: Fault) -> Result<(), String> {
    let c = case(rng);
    let f = c.u.filtration();
    let m = rng.gen_range(1..=c.full);
    let f1 = mlift_of_quasi(&c.u, &project_gradation(f, &c.h, m).map_err(err)?).map_err(err)?;
    let a = random_unipotent(c.u.model(), rng, 1);
    let f2 = act(&c.u, &f1, &a, fault)?;
    let t = transition(&c.u, &f1, &f2).map_err(err)?;
    if act(&c.u, &f1, &t, Fault::None)? != f2 {
        return Err(format!("act(F1, transition(F1, F2)) differs from F2 at degree {m}"));
    }
    if t != a.truncate_below(m as i32) {
        return Err(format!("transition(F1, F1[A]) is not [A] at degree {m}"));
    }
    Ok(())
}

/// `act_quasi` against composing the full lift with `A` in the ambient space and projecting.
fn action_oracle(rng: &mut ChaCha8Rng, fault: Fault) -> Result<(), String> {
    let c = case(rng);
    let f = c.u.filtration();
    let m = rng.gen_range(1..=c.full);
    let a = random_unipotent(c.u.model(), rng, 1);
    let ambient = full_lift(&c.u, &c.h).map_err(err)?.ambient_matrix(&c.u).mul(&a.to_matrix());
    let fm = mlift_of_quasi(&c.u, &project_gradation(f, &c.h, m).map_err(err)?).map_err(err)?;
    let got = act(&c.u, &fm, &a, fault)?;
    for i in c.u.model().degrees() {
        let q = f.quotient(i, m);
        let cols: Vec<Vec<Rational>> = c.u.model().range(i).map(|x| q.coords(&ambient.column(x))).collect::<Result<_, _>>().map_err(err)?;
        if Matrix::from_columns(q.dim(), &cols) != *got.block(i) {
            return Err(format!("act_quasi differs from the projected composition in degree {i}, m = {m}"));
        }
    }
    let b = random_unipotent(c.u.model(), rng, 1);
    let twice = act(&c.u, &got, &b, fault)?;
    let once = act(&c.u, &fm, &a.compose(&b).map_err(err)?, fault)?;
    if twice != once {
        return Err(format!("act(act(F, A), B) differs from act(F, A∘B) at m = {m}"));
    }
    Ok(())
}

type Property = fn(&mut ChaCha8Rng, Fault) -> Result<(), String>;

pub fn properties() -> Vec<(&'static str, Property)> {
    vec![
        ("quasi-gradation / m-lift round trip", roundtrip as Property),
        ("projection composition", composition),
        ("GL_m orbits are Π^m fibres", orbit_is_fiber),
        ("transition / action simple transitivity", simple_transitivity),
        ("action against ambient composition", action_oracle),
    ]
}

/// Runs one property for `cases` seeded instances, stopping at the first failure.
pub fn run_property(name: &str, prop: Property, seed: u64, cases: usize, fault: Fault) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)));
    for k in 0..cases {
        if let Err(msg) = prop(&mut rng, fault) {
            return SuiteOutcome { name: name.into(), cases: k + 1, failure: Some(format!("case {k}: {msg}")) };
        }
    }
    SuiteOutcome { name: name.into(), cases, failure: None }
}

pub fn quasi_suites(seed: u64, cases: usize, fault: Fault) -> Vec<SuiteOutcome> {
    properties().into_iter().map(|(name, p)| run_property(name, p, seed, cases, fault)).collect()
}

/// Compares one catalog entry with a fresh engine run.
pub fn check_entry(entry: &CatalogEntry) -> SuiteOutcome {
    let name = entry.name();
    let run = || -> Result<Vec<String>, String> {
        let m = entry.make().map_err(err)?;
        let spec = G0Spec::preset(entry.g0).map_err(err)?;
        let result = prolong(&m, &spec, entry.max_degree).map_err(err)?;
        let mut problems = Vec::new();
        for e in catalog::expected_oracle(entry) {
            let got = match e.quantity {
                Quantity::Der0Dim => Some(der0(&m).map_err(err)?.dim()),
                Quantity::G0Dim => result.dim_of(0),
                Quantity::LevelDim(k) => result.dim_of(k),
                Quantity::Order => order_and_bound(&result, m.dim()).ok().map(|x| x.0),
                Quantity::Bound => order_and_bound(&result, m.dim()).ok().map(|x| x.1),
            };
            if got != Some(e.value) {
                problems.push(format!("{:?}: expected {}, got {:?}", e.quantity, e.value, got));
            }
        }
        let (_, failed) = result.verify();
        if failed > 0 {
            problems.push(format!("{failed} basis elements fail re-substitution"));
        }
        Ok(problems)
    };
    let cases = entry.expected.len();
    match run() {
        Ok(p) if p.is_empty() => SuiteOutcome { name, cases, failure: None },
        Ok(p) => SuiteOutcome { name, cases, failure: Some(p.join("; ")) },
        Err(e) => SuiteOutcome { name, cases, failure: Some(e) },
    }
}

pub fn catalog_suite() -> Vec<SuiteOutcome> {
    catalog::entries().iter().map(check_entry).collect()
}
