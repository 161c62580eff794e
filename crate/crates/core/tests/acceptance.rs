//! Exit criteria. Each test prints one PASS/FAIL line.

mod common;

use std::collections::BTreeSet;
use std::process::Command;

use tanaka_core::catalog::{entries, gl_level_dim, make_algebra};
use tanaka_core::format::algebra_to_json;
use tanaka_core::lie::G0Spec;
use tanaka_core::linear::Rational;
use tanaka_core::prolong::{order_and_bound, prolong, ExtendedBracket, ProlongationResult};
use tanaka_core::selftest::{quasi_suites, Fault, DEFAULT_SEED};
use tanaka_core::torsion::kernel_reports;

fn run(alg: &str, g0: &str, max_degree: usize) -> ProlongationResult {
    prolong(&make_algebra(alg).unwrap(), &G0Spec::preset(g0).unwrap(), max_degree).unwrap()
}

fn verdict(criterion: u32, title: &str, failures: &[String]) {
    let tag = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{tag} criterion {criterion}: {title}");
    for f in failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {criterion} failed: {failures:?}");
}

#[test]
fn criterion_1_kernel_identity_first_level() {
    let mut failures = Vec::new();
    for (alg, g0) in [("abelian2", "gl"), ("abelian3", "co"), ("abelian3", "so"), ("heisenberg3", "der0")] {
        let r = run(alg, g0, 2);
        let rep = kernel_reports(&r, 0).unwrap();
        if !rep.kernel_identity {
            failures.push(format!("{alg}/{g0}: {:?}", rep.witnesses));
        }
    }
    verdict(1, "Ker ∂ = gl_2(m_0) + g^1 at level 1 on four algebras", &failures);
}

#[test]
fn criterion_2_kernel_identity_higher_levels() {
    let mut failures = Vec::new();
    for (alg, g0) in [("heisenberg3", "der0"), ("abelian2", "gl")] {
        let r = run(alg, g0, 3);
        for n in [1, 2] {
            let rep = kernel_reports(&r, n).unwrap();
            if !rep.kernel_identity {
                failures.push(format!("{alg}/{g0} n = {n}: kernel identity {:?}", rep.witnesses));
            }
            if rep.injective != Some(true) {
                failures.push(format!("{alg}/{g0} n = {n}: ∂ not injective on Σ Hom(g^i, g^n)"));
            }
        }
    }
    verdict(2, "Ker ∂|gl = g^{n+1} + gl_{n+2}(m_n) and injectivity for n = 1, 2", &failures);
}

#[test]
fn criterion_3_classical_prolongation_dims() {
    use common::{order_and_bound as oracle_ob, prolong_dims, Alg, G0};
    let mut failures = Vec::new();
    let mut check = |what: String, engine: Option<usize>, oracle: Option<usize>, stated: usize| {
        let ok = engine == Some(stated) && oracle == Some(stated);
        println!("    {} {what}: stated {stated}, engine {engine:?}, oracle {oracle:?}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures.push(format!("{what}: stated {stated}, engine {engine:?}, oracle {oracle:?}"));
        }
    };
    for n in [2, 3] {
        let name = format!("abelian{n}");
        let engine = run(&name, "gl", 3);
        let oracle = prolong_dims(&Alg::abelian(n), G0::Gl, 3);
        for k in 0..=3 {
            check(format!("{name}/gl dim g^{k}"), engine.dim_of(k), oracle.get(k).copied(), gl_level_dim(n, k));
        }
    }
    let a3 = Alg::abelian(3);
    let so = run("abelian3", "so", 10);
    let so_oracle = prolong_dims(&a3, G0::So, 10);
    check("abelian3/so order".into(), order_and_bound(&so, 3).ok().map(|x| x.0), oracle_ob(&a3, &so_oracle).map(|x| x.0), 0);
    let co = run("abelian3", "co", 10);
    let co_oracle = prolong_dims(&a3, G0::Co, 10);
    check("abelian3/co order".into(), order_and_bound(&co, 3).ok().map(|x| x.0), oracle_ob(&a3, &co_oracle).map(|x| x.0), 1);
    check("abelian3/co dim g^1".into(), co.dim_of(1), co_oracle.get(1).copied(), 3);
    check("abelian3/co bound".into(), order_and_bound(&co, 3).ok().map(|x| x.1), oracle_ob(&a3, &co_oracle).map(|x| x.1), 10);
    for n in [2, 3] {
        let name = format!("abelian{n}");
        let engine = run(&name, "sl", 2);
        let oracle = prolong_dims(&Alg::abelian(n), G0::Sl, 2);
        check(format!("{name}/sl dim g^1"), engine.dim_of(1), oracle.get(1).copied(), n);
        check(format!("{name}/sl dim g^2"), engine.dim_of(2), oracle.get(2).copied(), 0);
    }
    verdict(3, "classical prolongation dimensions (gl, so, co, sl)", &failures);
}

#[test]
fn criterion_4_extended_bracket_identities() {
    let mut failures = Vec::new();
    for (alg, g0) in [("abelian2", "gl"), ("heisenberg3", "der0")] {
        let r = run(alg, g0, 2);
        let check = ExtendedBracket::new(&r, 2).unwrap().check();
        println!("    {alg}/{g0}: {} pairs, {} triples in range", check.pairs_in_range, check.triples_in_range);
        if check.triples_in_range == 0 {
            failures.push(format!("{alg}/{g0}: no triples checked"));
        }
        failures.extend(check.violations.iter().map(|v| format!("{alg}/{g0}: {v}")));
    }
    verdict(4, "antisymmetry, grading and Jacobi of the prolongation bracket at D = 2", &failures);
}

#[test]
fn criterion_5_quasi_gradation_properties() {
    let outcomes = quasi_suites(DEFAULT_SEED, 200, Fault::None);
    for o in &outcomes {
        println!("    {} {} ({} cases)", if o.passed() { "ok  " } else { "FAIL" }, o.name, o.cases);
    }
    let failures: Vec<String> = outcomes
        .iter()
        .filter_map(|o| if o.cases < 200 || !o.passed() { Some(format!("{}: {:?}", o.name, o.failure)) } else { None })
        .collect();
    verdict(5, "quasi-gradation calculus, 200 seeded cases per property", &failures);
}

#[test]
fn criterion_6_resubstitution() {
    let mut failures = Vec::new();
    let mut total = 0;
    for entry in entries() {
        let r = run(entry.algebra, entry.g0, entry.max_degree);
        let (checked, failed) = r.verify();
        total += checked;
        if failed > 0 {
            failures.push(format!("{}: {failed} of {checked} basis elements fail", entry.name()));
        }
    }
    println!("    {total} basis elements re-substituted");
    verdict(6, "every returned level basis element satisfies the derivation identity", &failures);
}

fn check_exit(path: &std::path::Path) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_tanaka")).arg("check").arg(path).output().unwrap().status.code()
}

#[test]
fn criterion_7_mutation_detection() {
    let dir = tempfile::tempdir().unwrap();
    let algebras: BTreeSet<&str> = entries().iter().map(|e| e.algebra).collect();
    let mut failures = Vec::new();
    let mut mutants = 0;
    for name in algebras {
        let m = make_algebra(name).unwrap();
        let clean = dir.path().join(format!("{name}.json"));
        std::fs::write(&clean, algebra_to_json(&m).unwrap()).unwrap();
        if check_exit(&clean) != Some(0) {
            failures.push(format!("{name}: the clean algebra is rejected"));
        }
        let n = m.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut bad = m.clone();
                    bad.perturb(a, b, c, &Rational::from_integer(1.into()));
                    let path = dir.path().join(format!("{name}_{a}_{b}_{c}.json"));
                    std::fs::write(&path, algebra_to_json(&bad).unwrap()).unwrap();
                    mutants += 1;
                    let code = check_exit(&path);
                    if code != Some(1) {
                        failures.push(format!("{name}: c^{c}_({a},{b}) + 1 gives exit {code:?}"));
                    }
                }
            }
        }
    }
    println!("    {mutants} single-constant mutants");
    verdict(7, "every single structure-constant corruption fails `check` with exit 1", &failures);
}
